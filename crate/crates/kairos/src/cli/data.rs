//! Commands that inspect, label or generate corpora.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use kairos_core::corpus::{encode_big_issues, filter_min_votes, Corpus, Trait};
use kairos_core::graph::{build_friendship, build_voter_graph, Graph, user_graph_features, GraphAnalytics, IterParams, USER_GRAPH_FEATURES};
use kairos_core::impact::labeled_claims;
use kairos_core::labeling::{conversions, impact_label, point_totals, success_record, voter_case, ImpactLabel3, VoterCase, MIN_IMPACT_AGREEMENT, MIN_IMPACT_VOTES};
use kairos_core::learn::pca_project;
use kairos_core::synth::{gen_debates, gen_trees, Preset, SynthConfig};
use serde::Serialize;

use super::{Common, CorpusArgs, Outcome};
use crate::error::{Error, Result};
use crate::io::{canonical_json, load_corpus, write_corpus, write_file, LoadedCorpus, CORPUS_FILES, META_FILE};
use crate::report::{num, Report, Table, MANIFEST, REPORT_CSV};

pub(super) fn load(common: &Common, corpus: &CorpusArgs) -> Result<LoadedCorpus> {
    load_corpus(&corpus.corpus, common.strict)
}

pub(super) fn start(name: &str, common: &Common, loaded: &LoadedCorpus) -> Report {
    let mut r = Report::new(name, common.seed, Some(loaded.digest.clone()));
    r.notes.extend(loaded.warnings.iter().cloned());
    r
}

fn count_table(corpus: &Corpus) -> Table {
    let mut t = Table::new("counts", &["item", "count"]);
    let ballots: usize = corpus.debates().iter().map(|d| d.ballots.len()).sum();
    let rounds: usize = corpus.debates().iter().map(|d| d.rounds.len()).sum();
    let claims: usize = corpus.trees().iter().map(|t| t.nodes().len()).sum();
    for (k, v) in [
        ("issues", corpus.catalog().len()),
        ("users", corpus.users().len()),
        ("debates", corpus.debates().len()),
        ("rounds", rounds),
        ("ballots", ballots),
        ("trees", corpus.trees().len()),
        ("claims", claims),
        ("labeled_claims", labeled_claims(corpus.trees()).len()),
    ] {
        t.push(vec![k.into(), v.to_string()]);
    }
    t
}

pub(super) fn ingest(common: &Common, args: &CorpusArgs, min_votes: Option<usize>) -> Result<Outcome> {
    let loaded = load(common, args)?;
    let corpus = match min_votes {
        Some(k) => filter_min_votes(&loaded.corpus, k),
        None => loaded.corpus.clone(),
    };
    write_corpus(&common.out.join("corpus"), &corpus)?;
    let mut report = start("ingest", common, &loaded);
    if let Some(k) = min_votes {
        let dropped = loaded.corpus.debates().len() - corpus.debates().len();
        report.notes.push(format!("dropped {dropped} debates with {k} or fewer ballots"));
    }
    report.tables.push(count_table(&corpus));
    Ok(Outcome {
        report,
        extra: CORPUS_FILES.iter().map(|f| format!("corpus/{f}")).collect(),
    })
}

pub(super) fn stats(common: &Common, args: &CorpusArgs) -> Result<Report> {
    let loaded = load(common, args)?;
    let corpus = &loaded.corpus;
    let mut report = start("stats", common, &loaded);
    report.tables.push(count_table(corpus));

    let mut cats: BTreeMap<&str, usize> = BTreeMap::new();
    for d in corpus.debates() {
        *cats.entry(d.category.as_str()).or_default() += 1;
    }
    let mut t = Table::new("categories", &["category", "debates"]);
    for (c, n) in cats {
        t.push(vec![c.into(), n.to_string()]);
    }
    report.tables.push(t);

    let mut cases = [0usize; 3];
    for b in corpus.debates().iter().flat_map(|d| &d.ballots) {
        cases[match voter_case(b) {
            VoterCase::FromMiddle => 0,
            VoterCase::FromOpposing => 1,
            VoterCase::Excluded => 2,
        }] += 1;
    }
    let mut t = Table::new("voter_cases", &["case", "ballots"]);
    for (name, n) in ["from_middle", "from_opposing", "unchanged"].iter().zip(cases) {
        t.push(vec![name.to_string(), n.to_string()]);
    }
    report.tables.push(t);

    let mut t = Table::new("traits", &["trait", "declared", "values"]);
    for tr in Trait::ALL {
        let vals: Vec<&str> = corpus.users().iter().filter_map(|u| u.trait_value(tr)).collect();
        let distinct: std::collections::BTreeSet<&str> = vals.iter().copied().collect();
        t.push(vec![tr.name().into(), vals.len().to_string(), distinct.len().to_string()]);
    }
    report.tables.push(t);

    // Users with a usable stance on every issue, projected on two components.
    let encoded: Vec<(&str, Vec<f64>)> = corpus
        .users()
        .iter()
        .filter_map(|u| {
            let v = encode_big_issues(u, corpus.catalog()).ok()?;
            Some((u.political_ideology.as_deref().unwrap_or("undeclared"), v.values().to_vec()))
        })
        .collect();
    if !corpus.catalog().is_empty() && encoded.len() >= 3 {
        let rows: Vec<Vec<f64>> = encoded.iter().map(|(_, v)| v.clone()).collect();
        let pca = pca_project(&rows, 2)?;
        let mut t = Table::new("big_issues_pca", &["component", "eigenvalue", "explained"]);
        for (i, (e, r)) in pca.eigenvalues.iter().zip(&pca.explained_ratio).enumerate() {
            t.push(vec![(i + 1).to_string(), num(*e), num(*r)]);
        }
        report.tables.push(t);
        let mut groups: BTreeMap<&str, (usize, f64, f64)> = BTreeMap::new();
        for ((ideology, _), p) in encoded.iter().zip(&pca.projected) {
            let g = groups.entry(ideology).or_default();
            g.0 += 1;
            g.1 += p[0];
            g.2 += p.get(1).copied().unwrap_or(0.0);
        }
        let mut t = Table::new("big_issues_by_political_ideology", &["ideology", "users", "mean_pc1", "mean_pc2"]);
        for (k, (n, a, b)) in groups {
            t.push(vec![k.into(), n.to_string(), num(a / n as f64), num(b / n as f64)]);
        }
        report.tables.push(t);
        report
            .notes
            .push(format!("{} of {} users have a stance on every issue", encoded.len(), corpus.users().len()));
    }
    Ok(report)
}

pub(super) fn labels(common: &Common, args: &CorpusArgs) -> Result<Report> {
    let loaded = load(common, args)?;
    let corpus = &loaded.corpus;
    let mut report = start("labels", common, &loaded);

    let mut t = Table::new(
        "debates",
        &["debate_id", "pro_points", "con_points", "points_winner", "to_pro", "to_con", "conversion_winner"],
    );
    for d in corpus.debates() {
        let p = point_totals(&d.ballots);
        let c = conversions(&d.ballots);
        let conv = match c.to_pro.cmp(&c.to_con) {
            std::cmp::Ordering::Greater => "PRO",
            std::cmp::Ordering::Less => "CON",
            std::cmp::Ordering::Equal => "TIE",
        };
        t.push(vec![
            d.debate_id.clone(),
            p.pro_points.to_string(),
            p.con_points.to_string(),
            p.winner().as_str().into(),
            c.to_pro.to_string(),
            c.to_con.to_string(),
            conv.into(),
        ]);
    }
    report.tables.push(t);

    let mut t = Table::new(
        "success",
        &["user_id", "debates", "wins", "success_rate", "class", "success_prior", "later_class"],
    );
    for u in corpus.users() {
        let Ok(r) = success_record(&u.user_id, corpus) else {
            continue;
        };
        t.push(vec![
            r.user_id.clone(),
            r.outcomes.len().to_string(),
            r.wins.to_string(),
            num(r.success_rate),
            r.class.as_str().into(),
            r.success_prior().map_or("-".into(), num),
            r.later_class().map_or("-".into(), |c| c.as_str().into()),
        ]);
    }
    report.tables.push(t);

    let mut counts: BTreeMap<ImpactLabel3, usize> = BTreeMap::new();
    let mut filtered = 0usize;
    for n in corpus.trees().iter().flat_map(|t| t.nodes()).filter(|n| n.parent.is_some()) {
        match impact_label(&n.tally, MIN_IMPACT_VOTES, MIN_IMPACT_AGREEMENT) {
            Some(l) => *counts.entry(l).or_default() += 1,
            None => filtered += 1,
        }
    }
    if !corpus.trees().is_empty() {
        let mut t = Table::new("impact_labels", &["label", "claims"]);
        for l in ImpactLabel3::ALL {
            t.push(vec![l.as_str().into(), counts.get(&l).copied().unwrap_or(0).to_string()]);
        }
        t.push(vec!["filtered".into(), filtered.to_string()]);
        report.tables.push(t);
    }
    Ok(report)
}

pub(super) fn graph(common: &Common, args: &CorpusArgs, top: usize) -> Result<Outcome> {
    let loaded = load(common, args)?;
    let corpus = &loaded.corpus;
    let mut report = start("graph", common, &loaded);
    let friends = build_friendship(corpus);
    let voters = build_voter_graph(corpus);
    let analytics = GraphAnalytics::compute(&friends, &voters, IterParams::default())?;

    let mut t = Table::new("graphs", &["graph", "nodes", "edges"]);
    t.push(vec!["friendship".into(), friends.nodes().len().to_string(), friends.edge_count().to_string()]);
    t.push(vec!["voter".into(), voters.nodes().len().to_string(), voters.edge_count().to_string()]);
    report.tables.push(t);

    let mut users: Vec<(String, Vec<f64>)> = corpus
        .users()
        .iter()
        .map(|u| (u.user_id.clone(), user_graph_features(&u.user_id, &analytics).values))
        .collect();
    let pr = USER_GRAPH_FEATURES.iter().position(|f| *f == "voter_pagerank").expect("pagerank column");
    users.sort_by(|a, b| b.1[pr].total_cmp(&a.1[pr]).then_with(|| a.0.cmp(&b.0)));
    let mut cols = vec!["user_id"];
    cols.extend(USER_GRAPH_FEATURES);
    let mut t = Table::new("top_users", &cols);
    for (id, v) in users.into_iter().take(top) {
        let mut row = vec![id];
        row.extend(v.into_iter().map(num));
        t.push(row);
    }
    report.tables.push(t);

    let mut f = String::new();
    for (a, b) in friends.edges() {
        f.push_str(&format!("{a}\t{b}\t1\n"));
    }
    let mut v = String::new();
    for (a, b, w) in voters.edges() {
        v.push_str(&format!("{a}\t{b}\t{w}\n"));
    }
    write_file(&common.out.join("friends.tsv"), f)?;
    write_file(&common.out.join("voters.tsv"), v)?;
    Ok(Outcome {
        report,
        extra: vec!["friends.tsv".into(), "voters.tsv".into()],
    })
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SynthArgs {
    /// ideology, network or trees.
    #[arg(long, default_value = "ideology")]
    pub preset: String,
    #[arg(long)]
    pub p_match: Option<f64>,
    #[arg(long)]
    pub n_users: Option<usize>,
    #[arg(long)]
    pub n_debates: Option<usize>,
    #[arg(long)]
    pub n_trees: Option<usize>,
    #[arg(long)]
    pub label_noise: Option<f64>,
    /// Context edges the tree rule looks at.
    #[arg(long)]
    pub context_k: Option<usize>,
}

pub(super) fn synth(common: &Common, args: &SynthArgs) -> Result<Outcome> {
    let preset = Preset::parse(&args.preset)
        .ok_or_else(|| Error::Invalid(format!("unknown preset `{}`", args.preset)))?;
    let mut cfg = SynthConfig::preset(preset, common.seed);
    if let Some(v) = args.p_match {
        cfg.p_match = v;
    }
    if let Some(v) = args.n_users {
        cfg.n_users = v;
    }
    if let Some(v) = args.n_debates {
        cfg.n_debates = v;
    }
    if let Some(v) = args.n_trees {
        cfg.n_trees = v;
    }
    if let Some(v) = args.label_noise {
        cfg.label_noise = v;
    }
    if let Some(v) = args.context_k {
        cfg.context_k = v;
    }
    let (corpus, meta) = match preset {
        Preset::Trees => {
            let (trees, meta) = gen_trees(&cfg)?;
            (Corpus::new(Vec::new(), Vec::new(), trees, Vec::new())?, meta)
        }
        _ => gen_debates(&cfg)?,
    };
    write_corpus(&common.out, &corpus)?;
    write_file(&common.out.join(META_FILE), canonical_json(&meta))?;
    let digest = load_corpus(&common.out, true)?.digest;
    let mut report = Report::new("synth", common.seed, Some(digest));
    let mut t = count_table(&corpus);
    t.name = "generated".into();
    report.tables.push(t);
    report.notes.push(format!("preset {}: {}", preset.as_str(), meta.rule));
    let mut extra: Vec<String> = CORPUS_FILES.iter().map(|f| f.to_string()).collect();
    extra.push(META_FILE.into());
    Ok(Outcome { report, extra })
}

fn run_name(dir: &Path) -> String {
    dir.file_name().map_or_else(|| dir.display().to_string(), |n| n.to_string_lossy().into_owned())
}

pub(super) fn merge(common: &Common, runs: &[PathBuf]) -> Result<Report> {
    let mut report = Report::new("report", common.seed, None);
    let mut index = Table::new("runs", &["run", "command", "corpus_sha256", "seed"]);
    for dir in runs {
        if !dir.join(MANIFEST).exists() {
            return Err(Error::MissingInput(dir.join(MANIFEST)));
        }
        let path = dir.join(REPORT_CSV);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let run = Report::from_csv(&text)?;
        let name = run_name(dir);
        index.push(vec![
            name.clone(),
            run.command.clone(),
            run.corpus_sha256.clone().unwrap_or_else(|| "-".into()),
            run.seed.to_string(),
        ]);
        for mut t in run.tables {
            t.name = format!("{name}/{}", t.name);
            report.tables.push(t);
        }
        report.notes.extend(run.notes.into_iter().map(|n| format!("{name}: {n}")));
    }
    report.tables.insert(0, index);
    Ok(report)
}
