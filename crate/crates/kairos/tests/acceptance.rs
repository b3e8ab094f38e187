//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any fails.

use std::ffi::OsString;
use std::time::{Duration, Instant};

use kairos_core::corpus::{Ballot, Dimension, DimensionChoices, Verdict, VoteStance};
use kairos_core::eval::{
    cross_validate, feature_analysis, majority_row, mcnemar_counts, metrics, pair_dataset, setting_pairs, split_70_15_15,
    t_test_two_sided, task2_pairs, task_dataset, Averaging, FeatureContext, FeatureGroup, ModelChoice,
};
use kairos_core::graph::{hits, pagerank, Graph, IterParams, UndirectedGraph, WeightedDigraph};
use kairos_core::impact::{
    attention_context, gru_context, impact_examples, labeled_claims, train_impact, Composition, ImpactModelSpec,
};
use kairos_core::labeling::{
    agreement_score, impact_label, per_voter_winner, winner_by_points, Criterion, ImpactLabel3, MIN_IMPACT_AGREEMENT,
    MIN_IMPACT_VOTES,
};
use kairos_core::learn::nn::{
    gradient_check, AttentionProbe, BiGru, BiGruProbe, Differentiable, EmbeddingProbe, EncoderKind, EncoderSpec,
    GruCellProbe, LinearProbe, Module, NgramProbe, SoftmaxCeProbe, TrainConfig,
};
use kairos_core::learn::LogisticConfig;
use kairos_core::synth::{gen_debates, gen_trees, tallies_with_counts, Preset, SynthConfig};
use kairos_core::textfeat::LexiconSet;
use kairos_core::util::seeded;
use rand::Rng as _;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn criterion(n: usize, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let out = f();
    let elapsed = t.elapsed();
    let in_time = elapsed < limit;
    let pass = out.pass && in_time;
    println!(
        "criterion {n:>2}: {}  {}  [{:.3} s, limit {} s{}]",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        limit.as_secs_f64(),
        if in_time { "" } else { ", too slow" },
    );
    pass
}

fn agreement() -> Outcome {
    let a = agreement_score(&[30, 25, 15, 10, 10]).unwrap();
    check((a - 33.33).abs() <= 0.01, format!("agreement(30,25,15,10,10) = {a:.4}%"))
}

const VERDICTS: [Verdict; 3] = [Verdict::Pro, Verdict::Con, Verdict::Tie];

fn oracle_points(choice: [usize; 4]) -> Verdict {
    let weights = [1i32, 1, 3, 2];
    let mut margin = 0;
    for (c, w) in choice.iter().zip(weights) {
        margin += match c {
            0 => w,
            1 => -w,
            _ => 0,
        };
    }
    match margin {
        m if m > 0 => Verdict::Pro,
        m if m < 0 => Verdict::Con,
        _ => Verdict::Tie,
    }
}

fn vote_points() -> Outcome {
    let mut agree = 0;
    let mut total = 0;
    for code in 0..81usize {
        let choice = [code % 3, code / 3 % 3, code / 9 % 3, code / 27 % 3];
        let mut choices = DimensionChoices::all(Verdict::Tie);
        for (d, c) in Dimension::ALL.into_iter().zip(choice) {
            choices.set(d, VERDICTS[c]);
        }
        let ballot = Ballot {
            voter_id: format!("v{code}"),
            stance_before: VoteStance::Undecided,
            stance_after: VoteStance::Undecided,
            choices,
        };
        let expected = oracle_points(choice);
        let debate = winner_by_points(std::slice::from_ref(&ballot));
        let voter = per_voter_winner(&ballot, Criterion::Points).unwrap();
        total += 1;
        if debate == expected && voter == expected {
            agree += 1;
        }
    }
    check(agree == 81 && total == 81, format!("{agree}/{total} ballots match the enumeration oracle"))
}

fn impact_distribution() -> Outcome {
    let counts = [1633usize, 1445, 4308];
    let tallies = tallies_with_counts(counts, 900, &mut seeded(11));
    let labels: Vec<ImpactLabel3> = tallies
        .iter()
        .filter_map(|t| impact_label(t, MIN_IMPACT_VOTES, MIN_IMPACT_AGREEMENT))
        .collect();
    let mut got = [0usize; 3];
    for l in &labels {
        got[l.index()] += 1;
    }
    let golds: Vec<usize> = labels.iter().map(|l| l.index()).collect();
    let majority = (0..3).fold(0, |b, c| if got[c] > got[b] { c } else { b });
    let preds = vec![majority; golds.len()];
    let m = metrics(&preds, &golds, 3, Averaging::Macro).unwrap();
    let (p, r, f) = (100.0 * m.precision, 100.0 * m.recall, 100.0 * m.f1);
    let close = (p - 19.43).abs() <= 0.6 && (r - 33.33).abs() <= 0.6 && (f - 24.55).abs() <= 0.6;
    check(
        labels.len() == 7386 && got == counts && close,
        format!(
            "{} of {} tallies kept, split {}/{}/{}; majority P/R/F1 {p:.2}/{r:.2}/{f:.2}",
            labels.len(),
            tallies.len(),
            got[0],
            got[1],
            got[2]
        ),
    )
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// Stationary PageRank from the linear system, dangling mass spread uniformly.
fn pagerank_oracle(w: &[Vec<f64>], d: f64) -> Vec<f64> {
    let n = w.len();
    let nf = n as f64;
    let mut a = vec![vec![0.0; n]; n];
    for (j, row) in a.iter_mut().enumerate() {
        row[j] = 1.0;
    }
    for (i, wi) in w.iter().enumerate() {
        let total: f64 = wi.iter().sum();
        for (j, row) in a.iter_mut().enumerate() {
            row[i] -= if total > 0.0 { d * wi[j] / total } else { d / nf };
        }
    }
    solve(a, vec![(1.0 - d) / nf; n])
}

fn unit(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Hubs and authorities by dense power iteration on `AᵀA` from an all-ones hub vector.
fn hits_oracle(w: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let n = w.len();
    let mut ata = vec![vec![0.0; n]; n];
    for (r, row) in ata.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = (0..n).map(|k| w[k][r] * w[k][c]).sum();
        }
    }
    let mut auth: Vec<f64> = (0..n).map(|j| (0..n).map(|i| w[i][j]).sum()).collect();
    unit(&mut auth);
    for _ in 0..200_000 {
        let mut next: Vec<f64> = ata.iter().map(|row| row.iter().zip(&auth).map(|(a, b)| a * b).sum()).collect();
        unit(&mut next);
        let delta: f64 = next.iter().zip(&auth).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        auth = next;
        if delta < 1e-15 {
            break;
        }
    }
    let mut hub: Vec<f64> = w.iter().map(|row| row.iter().zip(&auth).map(|(a, b)| a * b).sum()).collect();
    unit(&mut hub);
    (hub, auth)
}

fn graph_oracles() -> Outcome {
    let mut rng = seeded(4);
    let mut worst: f64 = 0.0;
    let params = IterParams {
        tol: 1e-12,
        max_iter: 100_000,
    };
    for _ in 0..100 {
        let n = rng.random_range(1..=8usize);
        let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
        let mut w = vec![vec![0.0; n]; n];
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.random_bool(0.35) {
                    let weight = rng.random_range(1..=3u32);
                    w[i][j] = f64::from(weight);
                    edges.push((names[i].as_str(), names[j].as_str(), weight));
                }
            }
        }
        let g = WeightedDigraph::new(names.clone(), edges.iter().copied());
        let pr = pagerank(&g, 0.85, params).unwrap();
        let (hub, auth) = hits(&g, params).unwrap();
        let pr_o = pagerank_oracle(&w, 0.85);
        let (hub_o, auth_o) = hits_oracle(&w);
        for (i, id) in names.iter().enumerate() {
            worst = worst
                .max((pr[id] - pr_o[i]).abs())
                .max((hub[id] - hub_o[i]).abs())
                .max((auth[id] - auth_o[i]).abs());
        }

        // The same edge set read as undirected.
        let mut sym = vec![vec![0.0; n]; n];
        for &(a, b, _) in &edges {
            let (i, j) = (g.position(a).unwrap(), g.position(b).unwrap());
            sym[i][j] = 1.0;
            sym[j][i] = 1.0;
        }
        let u = UndirectedGraph::new(names.clone(), edges.iter().map(|&(a, b, _)| (a, b)));
        let pu = pagerank(&u, 0.85, params).unwrap();
        let pu_o = pagerank_oracle(&sym, 0.85);
        for (i, id) in names.iter().enumerate() {
            worst = worst.max((pu[id] - pu_o[i]).abs());
        }
    }
    check(worst <= 1e-6, format!("100 graphs, worst L-inf gap to dense oracles {worst:.2e}"))
}

fn gradients() -> Outcome {
    let mut rng = seeded(5);
    let mut worst: Vec<(&str, f64)> = Vec::new();
    type Make = fn(&mut kairos_core::util::Rng) -> Box<dyn Differentiable>;
    let layers: [(&str, Make); 7] = [
        ("embedding", |r| Box::new(EmbeddingProbe::random(7, 3, 4, r))),
        ("ngram_average", |r| Box::new(NgramProbe::random(13, 3, 5, r))),
        ("gru_cell", |r| Box::new(GruCellProbe::random(3, 4, r))),
        ("bigru", |r| Box::new(BiGruProbe::random(3, 3, 4, r))),
        ("attention", |r| Box::new(AttentionProbe::random(4, 3, r))),
        ("linear", |r| Box::new(LinearProbe::random(4, 3, r))),
        ("softmax_ce", |r| Box::new(SoftmaxCeProbe::random(4, r))),
    ];
    for (name, make) in layers {
        let mut w: f64 = 0.0;
        for _ in 0..10 {
            let mut probe = make(&mut rng);
            w = w.max(gradient_check(probe.as_mut(), 1e-5));
        }
        worst.push((name, w));
    }
    let max = worst.iter().map(|x| x.1).fold(0.0, f64::max);
    let names: Vec<String> = worst.iter().map(|(n, w)| format!("{n} {w:.1e}")).collect();
    check(max <= 1e-4, format!("relative errors: {}", names.join(", ")))
}

fn attention_semantics() -> Outcome {
    let mut rng = seeded(6);
    let mut sum_gap: f64 = 0.0;
    let mut perm_gap: f64 = 0.0;
    for _ in 0..1000 {
        let dim = rng.random_range(1..=8usize);
        let len = rng.random_range(1..=6usize);
        let ctx: Vec<Vec<f64>> = (0..len)
            .map(|_| (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect())
            .collect();
        let query: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect();
        let (alpha, vd) = attention_context(&ctx, &query).unwrap();
        sum_gap = sum_gap.max((alpha.iter().sum::<f64>() - 1.0).abs());
        let mut shuffled = ctx.clone();
        shuffled.rotate_left(rng.random_range(0..len));
        shuffled.reverse();
        let (_, vd2) = attention_context(&shuffled, &query).unwrap();
        for (a, b) in vd.iter().zip(&vd2) {
            perm_gap = perm_gap.max((a - b).abs());
        }
    }
    let mut sensitive = 0;
    for seed in 0..10 {
        let mut r = seeded(100 + seed);
        let rnn = BiGru::new(4, 5, &mut r);
        let ctx: Vec<Vec<f64>> = (0..3).map(|_| (0..4).map(|_| r.random_range(-1.0..1.0)).collect()).collect();
        let mut swapped = ctx.clone();
        swapped.swap(0, 1);
        let a = gru_context(&rnn, &ctx).unwrap();
        let b = gru_context(&rnn, &swapped).unwrap();
        if a.iter().zip(&b).any(|(x, y)| (x - y).abs() > 1e-6) {
            sensitive += 1;
        }
    }
    check(
        sum_gap <= 1e-9 && perm_gap <= 1e-9 && sensitive == 10,
        format!(
            "weight-sum gap {sum_gap:.1e}, permutation gap {perm_gap:.1e}, GRU order-sensitive on {sensitive}/10 seeds"
        ),
    )
}

const MATCH: &str = "user:political_ideology_match";

fn prior_belief() -> Outcome {
    let lex = LexiconSet::builtin();
    let mut first = 0;
    let mut acc = Vec::new();
    let mut tfidf = Vec::new();
    let mut min_rows = usize::MAX;
    for seed in 0..20 {
        let cfg = SynthConfig::preset(Preset::Ideology, seed);
        let (corpus, _) = gen_debates(&cfg).unwrap();
        let rows = task2_pairs(&corpus);
        min_rows = min_rows.min(rows.len());
        let ctx = FeatureContext::new(&corpus, &lex, &[FeatureGroup::User, FeatureGroup::Tfidf], 2000).unwrap();
        let user = task_dataset(&ctx, &rows, &[FeatureGroup::User]).unwrap();
        let fa = feature_analysis(&user, &LogisticConfig::default()).unwrap();
        if fa.ranked.first().is_some_and(|r| r.name == MATCH) {
            first += 1;
        }
        if seed < 5 {
            let col = user.schema.iter().position(|s| s == MATCH).unwrap();
            let single = user.select_columns(&[col]);
            let m = cross_validate("match", &single, &ModelChoice::default(), 5, seed).unwrap();
            acc.push(m.pooled.accuracy);
            let text = task_dataset(&ctx, &rows, &[FeatureGroup::Tfidf]).unwrap();
            let t = cross_validate("tfidf", &text, &ModelChoice::default(), 5, seed).unwrap();
            tfidf.push(t.pooled.accuracy);
        }
    }
    let acc_ok = acc.iter().all(|a| (a - 0.75).abs() <= 0.03);
    let tfidf_ok = tfidf.iter().all(|a| (a - 0.50).abs() <= 0.05);
    let fmt = |v: &[f64]| v.iter().map(|a| format!("{a:.3}")).collect::<Vec<_>>().join("/");
    check(
        min_rows >= 2000 && acc_ok && tfidf_ok && first >= 19,
        format!(
            "rows >= {min_rows}; match-only accuracy {}; tf-idf accuracy {}; match ranked first in {first}/20 seeds",
            fmt(&acc),
            fmt(&tfidf)
        ),
    )
}

fn context_signal() -> Outcome {
    let comps = [
        Composition::ClaimOnly,
        Composition::Flat(2),
        Composition::Flat(3),
        Composition::Attn(3),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for seed in 0..5u64 {
        let cfg = SynthConfig {
            label_noise: 0.05,
            context_k: 2,
            ..SynthConfig::preset(Preset::Trees, seed)
        };
        let (trees, _) = gen_trees(&cfg).unwrap();
        let claims = labeled_claims(&trees);
        let labels: Vec<usize> = claims.iter().map(|c| c.label.index()).collect();
        let [tr, va, te] = split_70_15_15(&labels, seed).unwrap();
        let pick = |idx: &[usize]| idx.iter().map(|&i| claims[i].clone()).collect::<Vec<_>>();
        let (train, val, test) = (pick(&tr), pick(&va), pick(&te));
        let train_cfg = TrainConfig {
            epochs: 60,
            batch_size: 16,
            lr: 0.01,
            patience: 10,
            seed,
            class_weighted: false,
        };
        let mut f1 = Vec::new();
        for comp in comps {
            let spec = ImpactModelSpec {
                encoder: EncoderSpec {
                    kind: EncoderKind::HashedNgramAverage,
                    dim: 32,
                    hidden: 16,
                    buckets: 4096,
                    max_ngram: 1,
                    seed,
                },
                composition: comp,
                context_hidden: 16,
            };
            let trx = impact_examples(&trees, &train, comp).unwrap();
            let vax = impact_examples(&trees, &val, comp).unwrap();
            let tex = impact_examples(&trees, &test, comp).unwrap();
            let (model, _) = train_impact(&spec, &trx, &vax, &train_cfg).unwrap();
            let preds: Vec<usize> = tex.iter().map(|e| model.predict(&e.input)).collect();
            let golds: Vec<usize> = tex.iter().map(|e| e.label).collect();
            f1.push(metrics(&preds, &golds, 3, Averaging::Macro).unwrap().f1);
        }
        let [claim, flat2, flat3, attn3] = [f1[0], f1[1], f1[2], f1[3]];
        ok &= claim <= 0.60
            && flat3 >= 0.90
            && attn3 >= 0.90
            && flat2 - claim >= 0.25
            && flat3 - claim >= 0.25;
        lines.push(format!("{claim:.3}/{flat2:.3}/{flat3:.3}/{attn3:.3}"));
    }
    check(
        ok,
        format!("CLAIM_ONLY/FLAT(2)/FLAT(3)/ATTN(3) test macro-F1 per seed: {}", lines.join(", ")),
    )
}

fn network_signal() -> Outcome {
    let lex = LexiconSet::builtin();
    let mut ok = true;
    let mut lines = Vec::new();
    for seed in 0..5u64 {
        let cfg = SynthConfig::preset(Preset::Network, seed);
        let (corpus, _) = gen_debates(&cfg).unwrap();
        let pairs = setting_pairs(&corpus, 1, seed).unwrap();
        let ctx = FeatureContext::new(&corpus, &lex, &[FeatureGroup::Network], 0).unwrap();
        let ds = pair_dataset(&ctx, &pairs, &[FeatureGroup::Network]).unwrap();
        let model = cross_validate("network", &ds, &ModelChoice::default(), 5, seed).unwrap();
        let base = majority_row(&ds.labels, ds.n_classes, 5, seed).unwrap();
        let gap = 100.0 * (model.pooled.f1 - base.pooled.f1);
        ok &= gap >= 20.0;
        lines.push(format!("{:.3} vs {:.3} ({} pairs)", model.pooled.f1, base.pooled.f1, pairs.len()));
    }
    check(ok, format!("network F1 vs majority F1: {}", lines.join(", ")))
}

/// Composite Simpson rule with `n` (even) intervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Two-sided Student-t tail. With `x = sqrt(df) tan(θ)` the density becomes
/// proportional to `cos(θ)^(df-1)` on `(-π/2, π/2)`.
fn t_tail_oracle(t: f64, df: f64) -> f64 {
    let f = |th: f64| th.cos().powf(df - 1.0);
    let half = std::f64::consts::FRAC_PI_2;
    let theta = (t.abs() / df.sqrt()).atan();
    simpson(f, theta, half, 400_000) / simpson(f, 0.0, half, 400_000)
}

fn welch_oracle(a: &[f64], b: &[f64]) -> (f64, f64) {
    let stats = |v: &[f64]| {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        (n, m, v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0))
    };
    let (na, ma, va) = stats(a);
    let (nb, mb, vb) = stats(b);
    let se2 = va / na + vb / nb;
    let t = (ma - mb) / se2.sqrt();
    let df = se2.powi(2) / ((va / na).powi(2) / (na - 1.0) + (vb / nb).powi(2) / (nb - 1.0));
    (t, t_tail_oracle(t, df))
}

fn significance() -> Outcome {
    let (stat, p) = mcnemar_counts(10, 2);
    let oracle_stat = (f64::from(10 - 2) - 1.0).powi(2) / 12.0;
    // One-degree chi-squared tail as a two-sided normal tail.
    let phi = |z: f64| (-z * z / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let oracle_p = 1.0 - 2.0 * simpson(phi, 0.0, oracle_stat.sqrt(), 20_000);
    let mc_ok = (stat - 4.083).abs() <= 0.001
        && (p - 0.0433).abs() <= 0.001
        && (stat - oracle_stat).abs() < 1e-12
        && (p - oracle_p).abs() < 1e-6;

    let mut rng = seeded(10);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let na = rng.random_range(3..=12usize);
        let nb = rng.random_range(3..=12usize);
        let (sa, sb) = (rng.random_range(0.2..3.0), rng.random_range(0.2..3.0));
        let shift = rng.random_range(-1.5..1.5);
        let a: Vec<f64> = (0..na).map(|_| rng.random_range(-sa..sa)).collect();
        let b: Vec<f64> = (0..nb).map(|_| shift + rng.random_range(-sb..sb)).collect();
        let (t, p) = t_test_two_sided(&a, &b).unwrap();
        let (ot, op) = welch_oracle(&a, &b);
        worst = worst.max((t - ot).abs()).max((p - op).abs());
    }
    check(
        mc_ok && worst <= 1e-4,
        format!("McNemar(10,2) = {stat:.4}, p = {p:.4} (oracle p {oracle_p:.4}); Welch worst gap {worst:.1e} over 20 pairs"),
    )
}

fn run_cli(args: &[&str]) -> i32 {
    let mut argv: Vec<OsString> = vec!["kairos".into()];
    argv.extend(args.iter().map(OsString::from));
    kairos::cli::run(argv)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let p = |s: &str| dir.path().join(s).to_string_lossy().into_owned();
    let corpus = p("corpus");
    let mut codes = vec![run_cli(&["synth", "--preset", "ideology", "--seed", "3", "--out", &corpus])];
    let mut reports = Vec::new();
    for run in ["a", "b"] {
        let out = p(run);
        codes.push(run_cli(&[
            "evaluate", "--corpus", &corpus, "--task", "task2", "--features", "user,linguistic", "--seed", "3",
            "--out", &out,
        ]));
        reports.push(std::fs::read(dir.path().join(run).join("report.csv")).unwrap_or_default());
    }
    let same = !reports[0].is_empty() && reports[0] == reports[1];
    check(
        codes.iter().all(|&c| c == 0) && same,
        format!("exit codes {codes:?}; report.csv {} bytes, identical: {same}", reports[0].len()),
    )
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        criterion(1, Duration::from_millis(1), agreement),
        criterion(2, secs(1), vote_points),
        criterion(3, secs(5), impact_distribution),
        criterion(4, secs(10), graph_oracles),
        criterion(5, secs(30), gradients),
        criterion(6, secs(10), attention_semantics),
        criterion(7, secs(60), prior_belief),
        criterion(8, secs(300), context_signal),
        criterion(9, secs(120), network_signal),
        criterion(10, secs(5), significance),
        criterion(11, secs(120), determinism),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
