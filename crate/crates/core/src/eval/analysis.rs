use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::learn::{train_logistic, Dataset, LogisticConfig};
use crate::util::mean;

/// Pearson correlation; a constant input is an error.
pub fn pearson(x: &[f64], y: &[f64], name: &str) -> Result<f64, EvalError> {
    if x.len() != y.len() {
        return Err(EvalError::Length(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(EvalError::SampleSize);
    }
    let (mx, my) = (mean(x), mean(y));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 {
        return Err(EvalError::ConstantFeature(String::from(name)));
    }
    if syy == 0.0 {
        return Err(EvalError::ConstantFeature(String::from("label")));
    }
    Ok(sxy / libm::sqrt(sxx * syy))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureRank {
    pub name: String,
    pub correlation: f64,
    /// Importance of the feature in the full model on the standardised scale.
    pub coefficient: f64,
    /// 1 for the strongest feature.
    pub correlation_rank: usize,
    pub coefficient_rank: usize,
    /// 1 for the feature recursive elimination keeps longest.
    pub rfe_rank: usize,
}

impl FeatureRank {
    pub fn mean_rank(&self) -> f64 {
        (self.correlation_rank + self.coefficient_rank + self.rfe_rank) as f64 / 3.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureAnalysis {
    /// Ordered by mean of the three ranks, then RFE rank.
    pub ranked: Vec<FeatureRank>,
    /// Constant features, left out of every ranking.
    pub flagged: Vec<String>,
}

impl FeatureAnalysis {
    /// Features in the top `k` of all three rankings.
    pub fn consensus(&self, k: usize) -> Vec<&str> {
        self.ranked
            .iter()
            .filter(|r| r.correlation_rank <= k && r.coefficient_rank <= k && r.rfe_rank <= k)
            .map(|r| r.name.as_str())
            .collect()
    }
}

fn ranks(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut out = alloc::vec![0; scores.len()];
    for (r, i) in order.into_iter().enumerate() {
        out[i] = r + 1;
    }
    out
}

/// Correlation with the label, coefficient magnitude in a fitted logistic
/// model, and recursive feature elimination (drop the weakest coefficient and
/// refit until one feature remains).
pub fn feature_analysis(ds: &Dataset, config: &LogisticConfig) -> Result<FeatureAnalysis, EvalError> {
    if ds.is_empty() {
        return Err(EvalError::Empty);
    }
    let y: Vec<f64> = ds.labels.iter().map(|&l| l as f64).collect();
    let mut flagged = Vec::new();
    let mut kept = Vec::new();
    let mut corr = Vec::new();
    for (j, name) in ds.schema.iter().enumerate() {
        let col: Vec<f64> = ds.rows.iter().map(|r| r[j]).collect();
        match pearson(&col, &y, name) {
            Ok(c) => {
                kept.push(j);
                corr.push(c);
            }
            Err(EvalError::ConstantFeature(n)) if n == *name => flagged.push(n),
            Err(e) => return Err(e),
        }
    }
    if kept.is_empty() {
        return Ok(FeatureAnalysis { ranked: Vec::new(), flagged });
    }
    let base = ds.select_columns(&kept);
    let coef = train_logistic(&base, config)?.feature_importance();

    // Elimination order: the first feature dropped gets the worst rank.
    let mut alive: Vec<usize> = (0..kept.len()).collect();
    let mut rfe = alloc::vec![0; kept.len()];
    let mut imp = coef.clone();
    while alive.len() > 1 {
        let (pos, _) = imp
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("non-empty");
        rfe[alive[pos]] = alive.len();
        alive.remove(pos);
        imp = train_logistic(&base.select_columns(&alive), config)?.feature_importance();
    }
    rfe[alive[0]] = 1;

    let abs_corr: Vec<f64> = corr.iter().map(|c| libm::fabs(*c)).collect();
    let (rc, rk) = (ranks(&abs_corr), ranks(&coef));
    let mut ranked: Vec<FeatureRank> = kept
        .iter()
        .enumerate()
        .map(|(i, &j)| FeatureRank {
            name: ds.schema[j].clone(),
            correlation: corr[i],
            coefficient: coef[i],
            correlation_rank: rc[i],
            coefficient_rank: rk[i],
            rfe_rank: rfe[i],
        })
        .collect();
    ranked.sort_by(|a, b| a.mean_rank().total_cmp(&b.mean_rank()).then(a.rfe_rank.cmp(&b.rfe_rank)));
    Ok(FeatureAnalysis { ranked, flagged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::seeded;
    use alloc::format;
    use alloc::vec;
    use rand::Rng as _;

    #[test]
    fn label_copy_ranks_first() {
        let mut rng = seeded(4);
        let labels: Vec<usize> = (0..60).map(|i| i % 2).collect();
        let rows: Vec<Vec<f64>> = labels
            .iter()
            .map(|&l| vec![rng.random_range(-1.0..1.0), l as f64, 3.0])
            .collect();
        let ds = Dataset::new(vec!["noise".into(), "copy".into(), "flat".into()], rows, labels, 2).unwrap();
        let fa = feature_analysis(&ds, &LogisticConfig::default()).unwrap();
        assert_eq!(fa.flagged, vec![String::from("flat")]);
        let top = &fa.ranked[0];
        assert_eq!(top.name, "copy");
        assert!((top.correlation - 1.0).abs() < 1e-12);
        assert_eq!(top.rfe_rank, 1);
        assert_eq!(fa.consensus(1), vec!["copy"]);
    }

    #[test]
    fn constant_column_is_flagged_by_pearson() {
        assert_eq!(
            pearson(&[1.0, 1.0, 1.0], &[0.0, 1.0, 0.0], "c").unwrap_err(),
            EvalError::ConstantFeature("c".into())
        );
    }

    #[test]
    fn planted_feature_outlasts_noise() {
        let mut wins = 0;
        for seed in 0..20 {
            let mut rng = seeded(seed);
            let mut rows = Vec::new();
            let mut labels = Vec::new();
            for _ in 0..200 {
                let planted: f64 = rng.random_range(-1.0..1.0);
                let label = usize::from(planted + rng.random_range(-0.5..0.5) > 0.0);
                let mut r = vec![planted];
                r.extend((0..4).map(|_| rng.random_range(-1.0..1.0)));
                rows.push(r);
                labels.push(label);
            }
            let schema = (0..5).map(|j| format!("f{j}")).collect();
            let ds = Dataset::new(schema, rows, labels, 2).unwrap();
            let fa = feature_analysis(&ds, &LogisticConfig::default()).unwrap();
            let planted = fa.ranked.iter().find(|r| r.name == "f0").unwrap();
            if planted.rfe_rank == 1 {
                wins += 1;
            }
        }
        assert!(wins >= 19, "{wins}");
    }
}
