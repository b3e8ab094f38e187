use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use super::{Preset, SynthConfig, SynthMeta, GENERATOR_VERSION};
use crate::corpus::{ArgumentTree, ClaimNode, EdgeLabel, ImpactVoteTally};
use crate::error::SynthError;
use crate::labeling::ImpactLabel3;
use crate::util::{shuffle, substream, Rng};

/// Per-tree topic words; a claim mentioning its tree's word is impactful
/// unless the context rule says otherwise.
pub const TREE_KEYWORDS: [&str; 10] = [
    "taxes", "climate", "vaccines", "privacy", "tariffs", "nuclear", "schools", "housing",
    "borders", "wages",
];
const SUPPORT_MARKER: &str = "indeed";
const OPPOSE_MARKER: &str = "however";
const SYLLABLES: [&str; 8] = ["ba", "ko", "li", "mu", "ne", "pa", "ri", "so"];

fn filler_vocab() -> Vec<String> {
    let mut out = Vec::with_capacity(SYLLABLES.len() * SYLLABLES.len() * 2);
    for a in SYLLABLES {
        for b in SYLLABLES {
            out.push(format!("{a}{b}"));
            out.push(format!("{a}{b}n"));
        }
    }
    out
}

fn claim_text(cfg: &SynthConfig, edge: Option<EdgeLabel>, keyword: Option<&str>, vocab: &[String], rng: &mut Rng) -> String {
    let mut words: Vec<&str> = (0..cfg.claim_words)
        .map(|_| vocab[rng.random_range(0..vocab.len())].as_str())
        .collect();
    if let Some(k) = keyword {
        let at = rng.random_range(0..=words.len());
        words.insert(at, k);
    }
    match edge {
        Some(EdgeLabel::Oppose) => words.insert(0, OPPOSE_MARKER),
        Some(EdgeLabel::Support) => words.insert(0, SUPPORT_MARKER),
        None => {}
    }
    words.join(" ")
}

/// The noiseless label: MEDIUM when any of the last `k` context edges opposes,
/// otherwise IMPACTFUL exactly when the claim carries the tree keyword.
fn rule(context_edges: &[Option<EdgeLabel>], k: usize, has_keyword: bool) -> ImpactLabel3 {
    let recent = &context_edges[context_edges.len().saturating_sub(k)..];
    if recent.contains(&Some(EdgeLabel::Oppose)) {
        ImpactLabel3::MediumImpact
    } else if has_keyword {
        ImpactLabel3::Impactful
    } else {
        ImpactLabel3::NotImpactful
    }
}

/// A five-class tally whose collapsed majority is `label`. Reliable tallies
/// pass the default vote and agreement filter; unreliable ones fail it.
pub fn tally_for(label: ImpactLabel3, reliable: bool, rng: &mut Rng) -> ImpactVoteTally {
    let mut collapsed = [0u32; 3];
    let me = label.index();
    let (o1, o2) = ((me + 1) % 3, (me + 2) % 3);
    if reliable {
        let n = rng.random_range(5..=12u32);
        let m = rng.random_range(n * 3 / 5 + 1..=n);
        let rest = n - m;
        let a = rng.random_range(0..=rest);
        collapsed[me] = m;
        collapsed[o1] = a;
        collapsed[o2] = rest - a;
    } else if rng.random_bool(0.5) {
        collapsed[me] = rng.random_range(1..=4);
    } else {
        let n = rng.random_range(5..=12u32);
        let m = n * 3 / 5;
        let rest = n - m;
        collapsed[me] = m;
        collapsed[o1] = rest / 2 + rest % 2;
        collapsed[o2] = rest / 2;
    }
    let low = rng.random_range(0..=collapsed[0]);
    let high = rng.random_range(0..=collapsed[2]);
    ImpactVoteTally([collapsed[0] - low, low, collapsed[1], high, collapsed[2] - high])
}

/// Reliable tallies with exactly `counts` labels per class plus `unreliable`
/// tallies that the filter drops, in shuffled order.
pub fn tallies_with_counts(counts: [usize; 3], unreliable: usize, rng: &mut Rng) -> Vec<ImpactVoteTally> {
    let mut out = Vec::with_capacity(counts.iter().sum::<usize>() + unreliable);
    for (class, &n) in counts.iter().enumerate() {
        let label = ImpactLabel3::ALL[class];
        out.extend((0..n).map(|_| tally_for(label, true, rng)));
    }
    for i in 0..unreliable {
        out.push(tally_for(ImpactLabel3::ALL[i % 3], false, rng));
    }
    shuffle(&mut out, rng);
    out
}

/// Accuracy of the Bayes-optimal predictor that sees only the claim text, by
/// exact enumeration over depth, context edges, keyword and label noise.
pub fn claim_only_bound(cfg: &SynthConfig) -> f64 {
    let b = (cfg.min_children + cfg.max_children) as f64 / 2.0;
    let weights: Vec<f64> = (1..=cfg.max_depth).map(|d| libm::pow(b, d as f64)).collect();
    let total: f64 = weights.iter().sum();
    let eta = cfg.label_noise;
    let mut bound = 0.0;
    for (has_kw, p_kw) in [(true, cfg.keyword_rate), (false, 1.0 - cfg.keyword_rate)] {
        let mut joint = [0.0f64; 3];
        for (i, w) in weights.iter().enumerate() {
            let depth = i + 1;
            let edges = cfg.context_k.min(depth - 1) as i32;
            let p_medium = 1.0 - libm::pow(1.0 - cfg.oppose_rate, f64::from(edges));
            let clean = if has_kw { ImpactLabel3::Impactful } else { ImpactLabel3::NotImpactful };
            for (label, p) in [(ImpactLabel3::MediumImpact, p_medium), (clean, 1.0 - p_medium)] {
                for c in 0..3 {
                    let q = if c == label.index() { 1.0 - eta } else { eta / 2.0 };
                    joint[c] += p_kw * (w / total) * p * q;
                }
            }
        }
        bound += joint.iter().copied().fold(0.0, f64::max);
    }
    bound
}

/// Argument trees whose labels follow the context rule, with noisy tallies.
pub fn gen_trees(cfg: &SynthConfig) -> Result<(Vec<ArgumentTree>, SynthMeta), SynthError> {
    let cfg = SynthConfig {
        preset: Preset::Trees,
        ..cfg.clone()
    };
    cfg.validate()?;
    let vocab = filler_vocab();
    let mut rng = substream(cfg.seed, 5);
    let mut trees = Vec::with_capacity(cfg.n_trees);
    for t in 0..cfg.n_trees {
        let keyword = TREE_KEYWORDS[t % TREE_KEYWORDS.len()];
        let tree_id = format!("t{t:04}");
        let thesis = ClaimNode {
            claim_id: format!("{tree_id}_c0000"),
            text: claim_text(&cfg, None, Some(keyword), &vocab, &mut rng),
            parent: None,
            edge_label: None,
            tally: tally_for(ImpactLabel3::Impactful, true, &mut rng),
        };
        let mut nodes = vec![thesis];
        // (node index, edges from the thesis down to and including the node)
        let mut frontier: Vec<(usize, Vec<Option<EdgeLabel>>)> = vec![(0, vec![None])];
        for _depth in 1..=cfg.max_depth {
            let mut next = Vec::new();
            for (parent, path) in &frontier {
                let n = rng.random_range(cfg.min_children..=cfg.max_children);
                for _ in 0..n {
                    let edge = if rng.random_bool(cfg.oppose_rate) {
                        EdgeLabel::Oppose
                    } else {
                        EdgeLabel::Support
                    };
                    let has_kw = rng.random_bool(cfg.keyword_rate);
                    let mut label = rule(path, cfg.context_k, has_kw);
                    if rng.random_bool(cfg.label_noise) {
                        label = ImpactLabel3::ALL[(label.index() + rng.random_range(1..=2)) % 3];
                    }
                    let reliable = !rng.random_bool(cfg.unreliable_rate);
                    let id = format!("{tree_id}_c{:04}", nodes.len());
                    nodes.push(ClaimNode {
                        claim_id: id,
                        text: claim_text(&cfg, Some(edge), has_kw.then_some(keyword), &vocab, &mut rng),
                        parent: Some(nodes[*parent].claim_id.clone()),
                        edge_label: Some(edge),
                        tally: tally_for(label, reliable, &mut rng),
                    });
                    let mut p = path.clone();
                    p.push(Some(edge));
                    next.push((nodes.len() - 1, p));
                }
            }
            frontier = next;
        }
        trees.push(ArgumentTree::new(tree_id, nodes)?);
    }
    let bound = claim_only_bound(&cfg);
    let rule = format!(
        "MEDIUM_IMPACT if any of the last {} context edges is OPPOSE, else IMPACTFUL if the claim names its tree keyword, else NOT_IMPACTFUL; {} label noise",
        cfg.context_k, cfg.label_noise
    );
    Ok((
        trees,
        SynthMeta {
            generator_version: GENERATOR_VERSION,
            config: cfg,
            claim_only_bound: Some(bound),
            skills: Vec::new(),
            rule,
        },
    ))
}
