//! Feature matrices, model fitting and cross-validated comparisons.

use std::path::Path;

use kairos_core::eval::{
    cross_validate, groups_label, majority_row, max_accuracy_same_prediction, mcnemar, metrics, pair_dataset,
    setting_pairs, task1_pairs, task2_pairs, task_dataset, AblationTable, Averaging, CvOutcome, ExperimentSpec,
    FeatureContext, FeatureGroup, ModelChoice, PairRow, Task, TaskRow,
};
use kairos_core::learn::{default_c_grid, grid_search_cv, train_logistic, Dataset, GridSpec, LinearModel, LogisticConfig, Penalty};
use kairos_core::textfeat::LexiconSet;

use super::data::{load, start};
use super::{Common, CorpusArgs, ModelArgs, Outcome, TaskArgs};
use crate::error::{Error, Result};
use crate::io::{load_lexicons, LoadedCorpus};
use crate::jobs::par_map;
use crate::model_file::{load_model, save_model};
use crate::report::{num, Report, Table};

pub(super) fn parse_task(s: &str) -> Result<Task> {
    Task::parse(s).ok_or_else(|| Error::Invalid(format!("unknown task `{s}`")))
}

fn parse_penalty(s: &str) -> Result<Penalty> {
    match s.to_ascii_lowercase().as_str() {
        "l1" => Ok(Penalty::L1),
        "l2" => Ok(Penalty::L2),
        _ => Err(Error::Invalid(format!("unknown penalty `{s}`"))),
    }
}

fn model_choice(m: &ModelArgs, task: &Task) -> Result<ModelChoice> {
    let class_weighted = m.class_weighted || task.is_pairwise();
    match m.model.as_str() {
        "logistic" => Ok(ModelChoice::Logistic(LogisticConfig {
            penalty: parse_penalty(&m.penalty)?,
            c: m.c,
            class_weighted,
            ..LogisticConfig::default()
        })),
        "grid" => Ok(ModelChoice::LogisticGrid {
            c_grid: default_c_grid(),
            inner_folds: m.inner_folds,
            class_weighted,
        }),
        other => Err(Error::Invalid(format!("unknown model `{other}`"))),
    }
}

/// Voter-level rows or user pairs, depending on the task.
enum Rows {
    Voters(Vec<TaskRow>),
    Pairs(Vec<PairRow>),
}

impl Rows {
    fn build(corpus: &LoadedCorpus, task: &Task, seed: u64) -> Result<Rows> {
        let c = &corpus.corpus;
        let rows = match task {
            Task::Task1 { category } => Rows::Voters(task1_pairs(c, category.as_deref())),
            Task::Task2 => Rows::Voters(task2_pairs(c)),
            Task::Setting(s) => Rows::Pairs(setting_pairs(c, *s, seed)?),
        };
        if rows.len() == 0 {
            return Err(Error::Invalid(format!("{} has no rows in this corpus", task.name())));
        }
        Ok(rows)
    }

    fn len(&self) -> usize {
        match self {
            Rows::Voters(r) => r.len(),
            Rows::Pairs(p) => p.len(),
        }
    }

    fn dataset(&self, ctx: &FeatureContext<'_>, groups: &[FeatureGroup]) -> Result<Dataset> {
        Ok(match self {
            Rows::Voters(r) => task_dataset(ctx, r, groups)?,
            Rows::Pairs(p) => pair_dataset(ctx, p, groups)?,
        })
    }

    /// Identifier columns for feature dumps.
    fn ids(&self) -> (Vec<&'static str>, Vec<[String; 2]>) {
        match self {
            Rows::Voters(r) => (
                vec!["debate_id", "voter_id"],
                r.iter().map(|x| [x.debate_id.clone(), x.voter_id.clone()]).collect(),
            ),
            Rows::Pairs(p) => (vec!["user_0", "user_1"], p.iter().map(|x| x.users.clone()).collect()),
        }
    }
}

fn validate(task: &Task, groups: &[FeatureGroup], folds: usize, seed: u64) -> Result<()> {
    ExperimentSpec {
        task: task.clone(),
        groups: groups.to_vec(),
        model: ModelChoice::default(),
        folds,
        seed,
    }
    .validate()?;
    Ok(())
}

struct Prepared {
    loaded: LoadedCorpus,
    lex: LexiconSet,
    task: Task,
    rows: Rows,
}

fn prepare(common: &Common, corpus: &CorpusArgs, task: &TaskArgs) -> Result<Prepared> {
    let loaded = load(common, corpus)?;
    let lex = load_lexicons(common.lexicon_dir.as_deref())?;
    let task = parse_task(&task.task)?;
    let rows = Rows::build(&loaded, &task, common.seed)?;
    Ok(Prepared { loaded, lex, task, rows })
}

fn class_table(ds: &Dataset) -> Table {
    let mut t = Table::new("classes", &["label", "rows"]);
    for (c, n) in ds.class_counts().into_iter().enumerate() {
        t.push(vec![c.to_string(), n.to_string()]);
    }
    t
}

pub(super) fn featurize(common: &Common, corpus: &CorpusArgs, args: &TaskArgs) -> Result<Outcome> {
    let p = prepare(common, corpus, args)?;
    let groups = FeatureGroup::parse_list(&args.features)?;
    validate(&p.task, &groups, 2, common.seed)?;
    let ctx = FeatureContext::new(&p.loaded.corpus, &p.lex, &groups, args.tfidf_features)?;
    let ds = p.rows.dataset(&ctx, &groups)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    let (id_cols, ids) = p.rows.ids();
    let mut header: Vec<&str> = id_cols;
    header.push("label");
    header.extend(ds.schema.iter().map(String::as_str));
    w.write_record(&header)?;
    for ((id, row), label) in ids.iter().zip(&ds.rows).zip(&ds.labels) {
        let mut rec = vec![id[0].clone(), id[1].clone(), label.to_string()];
        rec.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
    crate::io::write_file(&common.out.join("features.csv"), bytes)?;

    let mut report = start("featurize", common, &p.loaded);
    let mut t = Table::new("features", &["group", "columns"]);
    for g in &groups {
        let prefix = format!("{}:", g.name());
        t.push(vec![g.name().into(), ds.schema.iter().filter(|n| n.starts_with(&prefix)).count().to_string()]);
    }
    report.tables.push(t);
    report.tables.push(class_table(&ds));
    report.notes.push(format!("{}: {} rows x {} columns", p.task.name(), ds.len(), ds.n_features()));
    Ok(Outcome {
        report,
        extra: vec!["features.csv".into()],
    })
}

pub(super) fn train(
    common: &Common,
    corpus: &CorpusArgs,
    args: &TaskArgs,
    model: &ModelArgs,
    model_file: Option<&Path>,
) -> Result<Outcome> {
    let p = prepare(common, corpus, args)?;
    let groups = FeatureGroup::parse_list(&args.features)?;
    validate(&p.task, &groups, 2, common.seed)?;
    let ctx = FeatureContext::new(&p.loaded.corpus, &p.lex, &groups, args.tfidf_features)?;
    let ds = p.rows.dataset(&ctx, &groups)?;
    let (fitted, config): (LinearModel, LogisticConfig) = match model_choice(model, &p.task)? {
        ModelChoice::Logistic(cfg) => (train_logistic(&ds, &cfg)?, cfg),
        ModelChoice::LogisticGrid {
            c_grid,
            inner_folds,
            class_weighted,
        } => {
            let spec = GridSpec {
                penalties: vec![Penalty::L1, Penalty::L2],
                c_grid,
                inner_folds,
                base: LogisticConfig {
                    class_weighted,
                    ..LogisticConfig::default()
                },
                seed: common.seed,
            };
            let g = grid_search_cv(&ds, &spec)?;
            (g.model, g.best)
        }
    };

    let default_path = common.out.join("model.json");
    let path = model_file.unwrap_or(&default_path);
    save_model(path, "logistic", &ds.schema, &fitted)?;
    let (schema, reloaded): (Vec<String>, LinearModel) = load_model(path, "logistic")?;
    let preds = fitted.predict_all(&ds.rows);
    if schema != ds.schema || reloaded.predict_all(&ds.rows) != preds {
        return Err(Error::Invalid("saved model does not reproduce its predictions".into()));
    }

    let mut report = start("train", common, &p.loaded);
    let mut t = Table::new("fit", &["item", "value"]);
    let acc = metrics(&preds, &ds.labels, ds.n_classes, Averaging::Macro)?.accuracy;
    for (k, v) in [
        ("task", p.task.name().to_string()),
        ("features", groups_label(&groups)),
        ("rows", ds.len().to_string()),
        ("columns", ds.n_features().to_string()),
        ("penalty", config.penalty.as_str().to_string()),
        ("c", format!("{:e}", config.c)),
        ("class_weighted", config.class_weighted.to_string()),
        ("train_accuracy", num(acc)),
    ] {
        t.push(vec![k.into(), v]);
    }
    report.tables.push(t);
    let imp = fitted.feature_importance();
    let mut order: Vec<usize> = (0..imp.len()).collect();
    order.sort_by(|&a, &b| imp[b].total_cmp(&imp[a]).then(a.cmp(&b)));
    let mut t = Table::new("top_features", &["feature", "importance"]);
    for &j in order.iter().take(15) {
        t.push(vec![ds.schema[j].clone(), num(imp[j])]);
    }
    report.tables.push(t);
    let extra = if model_file.is_none() { vec!["model.json".to_string()] } else { Vec::new() };
    Ok(Outcome { report, extra })
}

fn averaging(task: &Task) -> Averaging {
    if task.is_pairwise() {
        Averaging::Weighted
    } else {
        Averaging::Macro
    }
}

/// Majority row plus one row per group list, evaluated on shared folds.
fn compare(
    common: &Common,
    p: &Prepared,
    specs: &[Vec<FeatureGroup>],
    args: &TaskArgs,
    model: &ModelArgs,
    folds: usize,
    baseline: Option<&str>,
    command: &str,
) -> Result<Report> {
    let mut union: Vec<FeatureGroup> = Vec::new();
    for s in specs {
        validate(&p.task, s, folds, common.seed)?;
        for g in s {
            if !union.contains(g) {
                union.push(*g);
            }
        }
    }
    let choice = model_choice(model, &p.task)?;
    let ctx = FeatureContext::new(&p.loaded.corpus, &p.lex, &union, args.tfidf_features)?;
    let datasets: Vec<Dataset> = specs.iter().map(|s| p.rows.dataset(&ctx, s)).collect::<Result<_>>()?;
    let labels = datasets[0].labels.clone();
    let n_classes = datasets[0].n_classes;

    // Index 0 is the majority row.
    let jobs: Vec<usize> = (0..=specs.len()).collect();
    let outcomes = par_map(&jobs, common.jobs, |&i| -> Result<CvOutcome> {
        if i == 0 {
            Ok(majority_row(&labels, n_classes, folds, common.seed)?)
        } else {
            let name = groups_label(&specs[i - 1]);
            Ok(cross_validate(&name, &datasets[i - 1], &choice, folds, common.seed)?)
        }
    });
    let outcomes: Vec<CvOutcome> = outcomes.into_iter().collect::<Result<_>>()?;
    let (majority, rows) = outcomes.split_first().expect("majority row");
    let table = AblationTable::assemble(majority, rows, baseline)?;
    let base = outcomes
        .iter()
        .find(|o| o.name == table.baseline)
        .expect("baseline row exists");

    let avg = averaging(&p.task);
    let mut t = Table::new(
        "results",
        &[
            "name", "accuracy", "accuracy_std", "fold_f1", "fold_f1_std", "precision", "recall", "f1", "t_test_p",
            "stars", "mcnemar_p",
        ],
    );
    for (row, o) in table.rows.iter().zip(&outcomes) {
        let pooled = metrics(&o.predictions, &labels, n_classes, avg)?;
        let mc = if o.name == base.name {
            "-".to_string()
        } else {
            num(mcnemar(&o.predictions, &base.predictions, &labels)?.1)
        };
        t.push(vec![
            row.name.clone(),
            num(row.accuracy_mean),
            num(row.accuracy_std),
            num(row.f1_mean),
            num(row.f1_std),
            num(pooled.precision),
            num(pooled.recall),
            num(pooled.f1),
            row.p_value.map_or("-".into(), num),
            row.stars.clone(),
            mc,
        ]);
    }
    let mut report = start(command, common, &p.loaded);
    report.tables.push(t);
    report.tables.push(class_table(&datasets[0]));
    let avg_name = match avg {
        Averaging::Macro => "macro",
        Averaging::Weighted => "weighted",
    };
    report.notes.push(format!(
        "{}: {} rows, {folds}-fold cross-validation, {avg_name} precision/recall/f1 pooled over folds, tests against `{}`",
        p.task.name(),
        p.rows.len(),
        table.baseline
    ));
    if let Rows::Voters(r) = &p.rows {
        report.notes.push(format!(
            "best accuracy with one prediction per debate: {}",
            num(max_accuracy_same_prediction(r))
        ));
    }
    Ok(report)
}

pub(super) fn evaluate(common: &Common, corpus: &CorpusArgs, args: &TaskArgs, model: &ModelArgs, folds: usize) -> Result<Report> {
    let p = prepare(common, corpus, args)?;
    let groups = FeatureGroup::parse_list(&args.features)?;
    compare(common, &p, &[groups], args, model, folds, None, "evaluate")
}

pub(super) fn ablate(
    common: &Common,
    corpus: &CorpusArgs,
    args: &TaskArgs,
    model: &ModelArgs,
    folds: usize,
    baseline: Option<&str>,
) -> Result<Report> {
    let p = prepare(common, corpus, args)?;
    let specs: Vec<Vec<FeatureGroup>> = args
        .features
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(FeatureGroup::parse_list)
        .collect::<Result<_, _>>()?;
    if specs.is_empty() {
        return Err(Error::Invalid("no feature sets given".into()));
    }
    compare(common, &p, &specs, args, model, folds, baseline, "ablate")
}
