use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{EvalError, LearnError};
use crate::learn::stratified_kfold;
use crate::util::{seeded, shuffle};

const SHARES: [f64; 3] = [0.70, 0.15, 0.15];

/// Stratified 70/15/15 train/validation/test split of row indices.
///
/// Every class is apportioned on its own (floors first, leftover rows to the
/// split furthest below its running target), so each class lands within one
/// row of its ideal share. Classes need at least three rows so that every
/// split sees every class.
pub fn split_70_15_15(labels: &[usize], seed: u64) -> Result<[Vec<usize>; 3], EvalError> {
    let n = labels.len();
    if n < 10 {
        return Err(EvalError::TooFewRows(n, 10));
    }
    let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        by_class.entry(l).or_default().push(i);
    }
    if let Some((&class, rows)) = by_class.iter().find(|(_, r)| r.len() < 3) {
        return Err(EvalError::ClassTooSmall {
            class,
            count: rows.len(),
            needed: 3,
        });
    }
    let mut rng = seeded(seed);
    let mut out: [Vec<usize>; 3] = Default::default();
    let mut seen = 0;
    for rows in by_class.values_mut() {
        shuffle(rows, &mut rng);
        let m = rows.len();
        seen += m;
        let mut take: [usize; 3] = SHARES.map(|s| libm::floor(s * m as f64) as usize);
        for _ in 0..m - take.iter().sum::<usize>() {
            // Leftover rows go where the running total lags its target most.
            let s = (0..3)
                .filter(|&s| take[s] as f64 <= SHARES[s] * m as f64)
                .max_by(|&a, &b| {
                    let da = SHARES[a] * seen as f64 - (out[a].len() + take[a]) as f64;
                    let db = SHARES[b] * seen as f64 - (out[b].len() + take[b]) as f64;
                    da.total_cmp(&db).then(b.cmp(&a))
                })
                .unwrap_or(0);
            take[s] += 1;
        }
        for s in 1..3 {
            if take[s] == 0 {
                take[s] = 1;
                take[0] -= 1;
            }
        }
        let mut start = 0;
        for s in 0..3 {
            out[s].extend_from_slice(&rows[start..start + take[s]]);
            start += take[s];
        }
    }
    out.iter_mut().for_each(|v| v.sort_unstable());
    Ok(out)
}

/// Label-stratified folds of row indices.
pub fn stratified_folds(labels: &[usize], k: usize, seed: u64) -> Result<Vec<Vec<usize>>, EvalError> {
    stratified_kfold(labels, k, seed).map_err(|e| match e {
        LearnError::Stratification { class, count, needed } => EvalError::ClassTooSmall { class, count, needed },
        other => EvalError::Learn(other),
    })
}
