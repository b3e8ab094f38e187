//! Claim-impact experiments on argument trees.

use std::collections::BTreeSet;

use clap::Args;
use kairos_core::corpus::ArgumentTree;
use kairos_core::eval::{metrics, split_70_15_15, Averaging};
use kairos_core::impact::{
    fit_claim_tfidf, impact_examples, labeled_claims, train_impact, tree_features, Composition, ImpactModelSpec,
    LabeledClaim, PredictionRow, TREE_FEATURE_NAMES,
};
use kairos_core::labeling::ImpactLabel3;
use kairos_core::learn::nn::{EncoderKind, EncoderSpec, TrainConfig};
use kairos_core::learn::{train_rbf_kernel, Dataset, KernelConfig};
use kairos_core::util::argmax;
use serde::Serialize;

use super::data::{load, start};
use super::{Common, CorpusArgs, Outcome};
use crate::error::{Error, Result};
use crate::io::write_file;
use crate::jobs::par_map;
use crate::report::{num, Table};

#[derive(Debug, Clone, Args, Serialize)]
pub struct ImpactArgs {
    /// Comma-separated: CLAIM_ONLY, CLAIM_PARENT, FLAT(i), ATTN(i), GRU_CTX(i).
    #[arg(long, default_value = "CLAIM_ONLY,CLAIM_PARENT,FLAT(2),ATTN(2),GRU_CTX(2)")]
    pub compositions: String,
    /// Claim encoder: ngram (averaged hashed n-grams) or bigru.
    #[arg(long, default_value = "ngram")]
    pub encoder: String,
    /// Embedding width (encoder default when unset).
    #[arg(long)]
    pub dim: Option<usize>,
    /// GRU units per direction of the bigru encoder.
    #[arg(long)]
    pub hidden: Option<usize>,
    #[arg(long)]
    pub buckets: Option<usize>,
    #[arg(long)]
    pub max_ngram: Option<usize>,
    /// GRU units per direction over the context for GRU_CTX.
    #[arg(long, default_value_t = 16)]
    pub context_hidden: usize,
    /// Training epochs; 40 for the bigru encoder and 10 otherwise when unset.
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long, default_value_t = 16)]
    pub batch_size: usize,
    #[arg(long, default_value_t = 0.005)]
    pub lr: f64,
    /// Epochs without validation gain before stopping; 0 disables.
    #[arg(long, default_value_t = 3)]
    pub patience: usize,
    #[arg(long)]
    pub class_weighted: bool,
    /// Also fit the RBF-kernel model on structural tree features.
    #[arg(long)]
    pub svm: bool,
    #[arg(long, default_value_t = 0.1)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub svm_c: f64,
}

impl ImpactArgs {
    pub fn encoder_spec(&self, seed: u64) -> Result<EncoderSpec> {
        let kind = EncoderKind::parse(&self.encoder)
            .ok_or_else(|| Error::Invalid(format!("unknown encoder `{}`", self.encoder)))?;
        let mut spec = match kind {
            EncoderKind::HashedNgramAverage => EncoderSpec::ngram_default(),
            EncoderKind::BigruAttention => EncoderSpec::bigru_default(),
        };
        spec.dim = self.dim.unwrap_or(spec.dim);
        spec.hidden = self.hidden.unwrap_or(spec.hidden);
        spec.buckets = self.buckets.unwrap_or(spec.buckets);
        spec.max_ngram = self.max_ngram.unwrap_or(spec.max_ngram);
        spec.seed = seed;
        spec.validate().map_err(|m| Error::Invalid(m.into()))?;
        Ok(spec)
    }

    pub fn train_config(&self, seed: u64) -> TrainConfig {
        TrainConfig {
            epochs: self.epochs.unwrap_or(match EncoderKind::parse(&self.encoder) {
                Some(EncoderKind::BigruAttention) => 40,
                _ => 10,
            }),
            batch_size: self.batch_size,
            lr: self.lr,
            patience: self.patience,
            seed,
            class_weighted: self.class_weighted,
        }
    }

    pub fn parse_compositions(&self) -> Result<Vec<Composition>> {
        self.compositions
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                let c = Composition::parse(s).ok_or_else(|| Error::Invalid(format!("unknown composition `{s}`")))?;
                c.validate()?;
                Ok(c)
            })
            .collect()
    }
}

struct ModelRun {
    name: String,
    rows: Vec<PredictionRow>,
    epochs: Option<(usize, usize)>,
}

fn prediction(tree: &ArgumentTree, claim: &LabeledClaim, scores: [f64; 3]) -> PredictionRow {
    PredictionRow {
        tree_id: tree.tree_id().to_string(),
        claim_id: claim.claim_id.clone(),
        gold: claim.label,
        predicted: ImpactLabel3::from_index(argmax(&scores)).expect("three classes"),
        scores,
        context_length: claim.context_length,
    }
}

fn slug(name: &str) -> String {
    name.to_ascii_lowercase()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect::<String>()
        .trim_end_matches('_')
        .to_string()
}

fn macro_scores(rows: &[PredictionRow]) -> Result<kairos_core::eval::MetricReport> {
    let preds: Vec<usize> = rows.iter().map(|r| r.predicted.index()).collect();
    let golds: Vec<usize> = rows.iter().map(|r| r.gold.index()).collect();
    Ok(metrics(&preds, &golds, 3, Averaging::Macro)?)
}

pub(super) fn impact(common: &Common, corpus: &CorpusArgs, args: &ImpactArgs) -> Result<Outcome> {
    let loaded = load(common, corpus)?;
    let trees = loaded.corpus.trees();
    if trees.is_empty() {
        return Err(Error::Invalid("corpus has no argument trees".into()));
    }
    let claims = labeled_claims(trees);
    let labels: Vec<usize> = claims.iter().map(|c| c.label.index()).collect();
    let [tr, va, te] = split_70_15_15(&labels, common.seed)?;
    let pick = |idx: &[usize]| idx.iter().map(|&i| claims[i].clone()).collect::<Vec<_>>();
    let (train, val, test) = (pick(&tr), pick(&va), pick(&te));
    let comps = args.parse_compositions()?;
    let encoder = args.encoder_spec(common.seed)?;
    let cfg = args.train_config(common.seed);

    let neural = par_map(&comps, common.jobs, |&comp| -> Result<ModelRun> {
        let spec = ImpactModelSpec {
            encoder: encoder.clone(),
            composition: comp,
            context_hidden: args.context_hidden,
        };
        let trx = impact_examples(trees, &train, comp)?;
        let vax = impact_examples(trees, &val, comp)?;
        let (model, rep) = train_impact(&spec, &trx, &vax, &cfg)?;
        let rows = test
            .iter()
            .map(|c| Ok(prediction(&trees[c.tree], c, model.predict_claim(&trees[c.tree], &c.claim_id)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModelRun {
            name: comp.to_string(),
            rows,
            epochs: Some((rep.epochs_run, rep.best_epoch)),
        })
    });

    let mut runs = Vec::new();
    let mut counts = [0usize; 3];
    for c in &train {
        counts[c.label.index()] += 1;
    }
    let majority = (0..3).fold(0, |b, k| if counts[k] > counts[b] { k } else { b });
    let mut one_hot = [0.0; 3];
    one_hot[majority] = 1.0;
    runs.push(ModelRun {
        name: "majority".into(),
        rows: test.iter().map(|c| prediction(&trees[c.tree], c, one_hot)).collect(),
        epochs: None,
    });
    if args.svm {
        let tfidf = fit_claim_tfidf(trees)?;
        let row = |c: &LabeledClaim| -> Result<Vec<f64>> {
            Ok(tree_features(&trees[c.tree], &c.claim_id, &tfidf)?.to_vector().values)
        };
        let rows: Vec<Vec<f64>> = train.iter().map(row).collect::<Result<_>>()?;
        let names = TREE_FEATURE_NAMES.iter().map(|s| s.to_string()).collect();
        let ds = Dataset::new(names, rows, train.iter().map(|c| c.label.index()).collect(), 3)?;
        let kc = KernelConfig {
            gamma: args.gamma,
            c: args.svm_c,
            class_weighted: args.class_weighted,
            ..KernelConfig::default()
        };
        let model = train_rbf_kernel(&ds, &kc)?;
        let preds = test
            .iter()
            .map(|c| {
                let p = model.predict_proba(&row(c)?);
                Ok(prediction(&trees[c.tree], c, [p[0], p[1], p[2]]))
            })
            .collect::<Result<Vec<_>>>()?;
        runs.push(ModelRun {
            name: "svm_rbf".into(),
            rows: preds,
            epochs: None,
        });
    }
    for r in neural {
        runs.push(r?);
    }

    let mut report = start("impact", common, &loaded);
    let mut t = Table::new("results", &["model", "precision", "recall", "f1", "accuracy", "epochs", "best_epoch"]);
    for r in &runs {
        let m = macro_scores(&r.rows)?;
        let (e, b) = r.epochs.map_or(("-".into(), "-".into()), |(e, b)| (e.to_string(), b.to_string()));
        t.push(vec![r.name.clone(), num(m.precision), num(m.recall), num(m.f1), num(m.accuracy), e, b]);
    }
    report.tables.push(t);

    let lengths: BTreeSet<usize> = test.iter().map(|c| c.context_length).collect();
    let mut cols = vec!["model".to_string()];
    cols.extend(lengths.iter().map(|l| format!("c_l={l}")));
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut t = Table::new("f1_by_context_length", &col_refs);
    let mut n_row = vec!["claims".to_string()];
    n_row.extend(lengths.iter().map(|l| test.iter().filter(|c| c.context_length == *l).count().to_string()));
    t.push(n_row);
    for r in &runs {
        let mut row = vec![r.name.clone()];
        for l in &lengths {
            let subset: Vec<PredictionRow> = r.rows.iter().filter(|p| p.context_length == *l).cloned().collect();
            row.push(num(macro_scores(&subset)?.f1));
        }
        t.push(row);
    }
    report.tables.push(t);

    let mut extra = Vec::new();
    for r in &runs {
        let mut csv = String::from(PredictionRow::HEADER);
        csv.push('\n');
        for p in &r.rows {
            csv.push_str(&p.to_csv());
            csv.push('\n');
        }
        let name = format!("predictions/{}.csv", slug(&r.name));
        write_file(&common.out.join(&name), csv)?;
        extra.push(name);
    }
    report.notes.push(format!(
        "{} labeled claims split {}/{}/{}; scores are macro-averaged on the test split",
        claims.len(),
        train.len(),
        val.len(),
        test.len()
    ));
    Ok(Outcome { report, extra })
}
