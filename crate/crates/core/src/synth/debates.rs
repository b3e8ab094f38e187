use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use super::{Preset, SynthConfig, SynthMeta, GENERATOR_VERSION};
use crate::corpus::{
    Ballot, Corpus, Debate, DimensionChoices, IssueStance, Round, UserProfile, Verdict, VoteStance,
};
use crate::error::SynthError;
use crate::util::{sigmoid, substream, Rng};

const POLITICAL: [(&str, f64); 3] = [("Liberal", 0.45), ("Conservative", 0.45), ("Moderate", 0.10)];
const RELIGIOUS: [(&str, f64); 4] = [
    ("Atheist", 0.4),
    ("Christian", 0.4),
    ("Agnostic", 0.1),
    ("", 0.1),
];
const CATEGORIES: [&str; 5] = ["Politics", "Religion", "Society", "Science", "Economics"];
const COMMON: [&str; 16] = [
    "the", "and", "is", "we", "that", "because", "not", "it", "this", "of", "to", "a", "in",
    "should", "my", "opponent",
];
const SYLLABLES: [&str; 12] = [
    "ka", "lo", "mi", "ra", "ven", "tor", "pel", "sun", "dar", "qui", "bo", "ne",
];
const N_TOPICS: usize = 8;
const TOPIC_WORDS: usize = 24;

fn pick_weighted<'a>(table: &[(&'a str, f64)], rng: &mut Rng) -> &'a str {
    let mut u: f64 = rng.random();
    for (name, p) in table {
        if u < *p {
            return name;
        }
        u -= p;
    }
    table[table.len() - 1].0
}

fn topic_vocab() -> Vec<Vec<String>> {
    (0..N_TOPICS)
        .map(|t| {
            (0..TOPIC_WORDS)
                .map(|w| {
                    let a = SYLLABLES[(t * 5 + w) % SYLLABLES.len()];
                    let b = SYLLABLES[(w * 7 + t + 3) % SYLLABLES.len()];
                    let c = SYLLABLES[(w / 3 + t * 2) % SYLLABLES.len()];
                    format!("{a}{b}{c}{}", t * TOPIC_WORDS + w)
                })
                .collect()
        })
        .collect()
}

fn utterance(words: usize, vocab: &[String], rng: &mut Rng) -> String {
    let mut out = String::new();
    for i in 0..words {
        if i > 0 {
            out.push(' ');
        }
        if rng.random_bool(0.5) {
            out.push_str(COMMON[rng.random_range(0..COMMON.len())]);
        } else {
            out.push_str(&vocab[rng.random_range(0..vocab.len())]);
        }
        if i % 10 == 9 || i + 1 == words {
            out.push('.');
        }
    }
    out
}

fn profile(id: String, order: u64, catalog: &[String], rng: &mut Rng) -> UserProfile {
    let mut p = UserProfile::new(id, order);
    p.political_ideology = Some(pick_weighted(&POLITICAL, rng).to_string());
    let religion = pick_weighted(&RELIGIOUS, rng);
    p.religious_ideology = (!religion.is_empty()).then(|| religion.to_string());
    p.gender = Some(if rng.random_bool(0.5) { "Male" } else { "Female" }.to_string());
    p.ethnicity = rng
        .random_bool(0.8)
        .then(|| ["White", "Black", "Asian", "Latino"][rng.random_range(0..4)].to_string());
    for issue in catalog {
        let stance = match rng.random_range(0..100) {
            0..=2 => IssueStance::NotSaying,
            3..=35 => IssueStance::Pro,
            36..=68 => IssueStance::Con,
            69..=84 => IssueStance::NoOpinion,
            _ => IssueStance::Undecided,
        };
        p.big_issue_stances.insert(issue.clone(), stance);
    }
    p
}

fn is_partisan(p: &UserProfile) -> bool {
    matches!(p.political_ideology.as_deref(), Some("Liberal" | "Conservative"))
}

/// Debates, profiles and ballots with a planted ideology effect and, in the
/// network layout, a latent skill that decides outcomes and draws voters.
pub fn gen_debates(cfg: &SynthConfig) -> Result<(Corpus, SynthMeta), SynthError> {
    cfg.validate()?;
    if cfg.preset == Preset::Trees {
        return Err(SynthError::Infeasible("tree preset does not generate debates"));
    }
    let mut urng = substream(cfg.seed, 1);
    let mut drng = substream(cfg.seed, 2);
    let mut brng = substream(cfg.seed, 3);
    let mut trng = substream(cfg.seed, 4);

    let catalog: Vec<String> = (0..cfg.n_issues).map(|i| format!("issue_{i:02}")).collect();
    let mut debaters: Vec<UserProfile> = (0..cfg.n_users)
        .map(|i| profile(format!("u{i:04}"), i as u64, &catalog, &mut urng))
        .collect();
    let voters: Vec<UserProfile> = (0..cfg.n_voters)
        .map(|i| profile(format!("v{i:04}"), (cfg.n_users + i) as u64, &catalog, &mut urng))
        .collect();
    let skill: Vec<f64> = (0..cfg.n_users)
        .map(|_| StandardNormal.sample(&mut urng))
        .collect();
    for i in 0..cfg.n_users {
        for _ in 0..2 {
            let j = urng.random_range(0..cfg.n_users);
            if j != i {
                let (a, b) = (debaters[i].user_id.clone(), debaters[j].user_id.clone());
                debaters[i].friends.insert(b);
                debaters[j].friends.insert(a);
            }
        }
    }

    let pairs = match cfg.preset {
        Preset::Network => schedule_by_counts(cfg, &mut drng),
        _ => schedule_partisan(cfg, &debaters, &mut drng),
    };

    let hubs = ((cfg.n_voters as f64 * cfg.hub_share) as usize).min(cfg.n_voters);
    let vocab = topic_vocab();
    let mut debates = Vec::with_capacity(pairs.len());
    for (k, &(pro, con)) in pairs.iter().enumerate() {
        let topic = drng.random_range(0..N_TOPICS);
        let n_rounds = drng.random_range(1..=cfg.max_rounds);
        let rounds = (0..n_rounds)
            .map(|r| Round {
                index: r as u32 + 1,
                pro_text: Some(utterance(cfg.turn_words, &vocab[topic], &mut trng)),
                con_text: Some(utterance(cfg.turn_words, &vocab[topic], &mut trng)),
            })
            .collect();

        let combined = sigmoid(skill[pro]) + sigmoid(skill[con]) - 1.0;
        let extra = libm::round(cfg.network_skew * combined.max(0.0)) as usize;
        let n_ballots = (brng.random_range(cfg.ballots_min..=cfg.ballots_max) + extra).min(cfg.n_voters);
        let mut chosen = BTreeSet::new();
        let mut order = Vec::with_capacity(n_ballots);
        let mut guard = 0;
        while order.len() < n_ballots && guard < 50 * n_ballots {
            guard += 1;
            let v = if hubs > 0 && combined > 0.0 && brng.random_bool(0.6) {
                brng.random_range(0..hubs)
            } else {
                brng.random_range(0..cfg.n_voters)
            };
            if chosen.insert(v) {
                order.push(v);
            }
        }
        let ballots = order
            .into_iter()
            .map(|v| ballot(cfg, &voters[v], &debaters[pro], &debaters[con], skill[pro] - skill[con], &mut brng))
            .collect();
        debates.push(Debate {
            debate_id: format!("d{k:05}"),
            topic: format!("{} {}", vocab[topic][0], vocab[topic][1]),
            category: CATEGORIES[topic % CATEGORIES.len()].to_string(),
            pro_user: debaters[pro].user_id.clone(),
            con_user: debaters[con].user_id.clone(),
            rounds,
            ballots,
            timestamp: 10 * k as i64,
        });
    }

    let skills = if cfg.preset == Preset::Network {
        debaters.iter().map(|u| u.user_id.clone()).zip(skill.iter().copied()).collect()
    } else {
        Vec::new()
    };
    let rule = match cfg.preset {
        Preset::Network => format!(
            "convincing choice ~ sigmoid({} * skill gap); ballots per debate += round({} * max(0, sigmoid(s_pro) + sigmoid(s_con) - 1)); {} hub voters",
            cfg.skill_effect, cfg.network_skew, hubs
        ),
        _ => format!(
            "convincing choice favours the debater sharing the voter's political ideology with probability {}",
            cfg.p_match
        ),
    };
    let mut users = debaters;
    users.extend(voters);
    let corpus = Corpus::new(debates, users, Vec::new(), catalog)?;
    Ok((
        corpus,
        SynthMeta {
            generator_version: GENERATOR_VERSION,
            config: cfg.clone(),
            claim_only_bound: None,
            skills,
            rule,
        },
    ))
}

fn ballot(
    cfg: &SynthConfig,
    voter: &UserProfile,
    pro: &UserProfile,
    con: &UserProfile,
    skill_gap: f64,
    rng: &mut Rng,
) -> Ballot {
    let pro_match = is_partisan(voter) && voter.political_ideology == pro.political_ideology;
    let con_match = is_partisan(voter) && voter.political_ideology == con.political_ideology;
    let base = match (pro_match, con_match) {
        (true, false) => cfg.p_match,
        (false, true) => 1.0 - cfg.p_match,
        _ => 0.5,
    };
    let p_pro = if base <= 0.0 || base >= 1.0 || cfg.skill_effect == 0.0 {
        base
    } else {
        sigmoid(libm::log(base / (1.0 - base)) + cfg.skill_effect * skill_gap)
    };
    let pick = if rng.random_bool(p_pro) { Verdict::Pro } else { Verdict::Con };
    // Other dimensions either abstain or agree, so the convincing choice decides the ballot.
    let mut choices = DimensionChoices::all(Verdict::Tie);
    choices.convincing_arguments = pick;
    for slot in [
        &mut choices.conduct,
        &mut choices.spelling_grammar,
        &mut choices.reliable_sources,
    ] {
        if rng.random_bool(0.3) {
            *slot = pick;
        }
    }
    let before = match rng.random_range(0..5) {
        0 | 1 => VoteStance::Undecided,
        2 => VoteStance::Pro,
        _ => VoteStance::Con,
    };
    let after = if rng.random_bool(0.4) {
        if pick == Verdict::Pro {
            VoteStance::Pro
        } else {
            VoteStance::Con
        }
    } else {
        before
    };
    Ballot {
        voter_id: voter.user_id.clone(),
        stance_before: before,
        stance_after: after,
        choices,
    }
}

/// Random debater pairs, mostly across the liberal/conservative divide.
fn schedule_partisan(cfg: &SynthConfig, users: &[UserProfile], rng: &mut Rng) -> Vec<(usize, usize)> {
    let n = users.len();
    (0..cfg.n_debates)
        .map(|_| {
            let want_split = rng.random_bool(0.85);
            let mut pair = (0, 1);
            for _ in 0..50 {
                let a = rng.random_range(0..n);
                let b = rng.random_range(0..n);
                if a == b {
                    continue;
                }
                pair = (a, b);
                let split = is_partisan(&users[a])
                    && is_partisan(&users[b])
                    && users[a].political_ideology != users[b].political_ideology;
                if split == want_split {
                    break;
                }
            }
            pair
        })
        .collect()
}

/// Every debater gets a debate count from the configured options; slots are
/// shuffled and paired so each user appears exactly that many times (up to one
/// dropped slot).
fn schedule_by_counts(cfg: &SynthConfig, rng: &mut Rng) -> Vec<(usize, usize)> {
    let options: Vec<usize> = cfg.debate_counts.iter().copied().filter(|&c| c > 0).collect();
    let mut slots = Vec::new();
    for u in 0..cfg.n_users {
        let c = options[rng.random_range(0..options.len())];
        slots.extend(core::iter::repeat_n(u, c));
    }
    crate::util::shuffle(&mut slots, rng);
    let mut pairs = Vec::with_capacity(slots.len() / 2);
    let mut i = 0;
    while i + 1 < slots.len() {
        if slots[i] == slots[i + 1] {
            if let Some(j) = (i + 2..slots.len()).find(|&j| slots[j] != slots[i]) {
                slots.swap(i + 1, j);
            } else {
                break;
            }
        }
        let (a, b) = (slots[i], slots[i + 1]);
        pairs.push(if rng.random_bool(0.5) { (a, b) } else { (b, a) });
        i += 2;
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::winner_by_points;

    #[test]
    fn same_seed_same_corpus() {
        let cfg = SynthConfig { n_debates: 40, ..SynthConfig::default() };
        let (a, _) = gen_debates(&cfg).unwrap();
        let (b, _) = gen_debates(&cfg).unwrap();
        assert_eq!(a.debates(), b.debates());
        assert_eq!(a.users(), b.users());
    }

    #[test]
    fn full_match_always_favours_shared_ideology() {
        let cfg = SynthConfig { n_debates: 60, p_match: 1.0, ..SynthConfig::default() };
        let (c, _) = gen_debates(&cfg).unwrap();
        let mut checked = 0;
        for d in c.debates() {
            let pro = c.user(&d.pro_user).unwrap();
            let con = c.user(&d.con_user).unwrap();
            for b in &d.ballots {
                let v = c.user(&b.voter_id).unwrap();
                if is_partisan(v) && v.political_ideology == pro.political_ideology && pro.political_ideology != con.political_ideology {
                    assert_eq!(b.choices.convincing_arguments, Verdict::Pro);
                    assert_eq!(winner_by_points(core::slice::from_ref(b)), Verdict::Pro);
                    checked += 1;
                }
            }
        }
        assert!(checked > 20);
    }

    #[test]
    fn network_layout_gives_each_user_its_count() {
        let cfg = SynthConfig::preset(Preset::Network, 3);
        let (c, meta) = gen_debates(&cfg).unwrap();
        assert_eq!(meta.skills.len(), cfg.n_users);
        let mut short = 0;
        for u in 0..cfg.n_users {
            let n = c.debates_of(&format!("u{u:04}")).len();
            if !cfg.debate_counts.contains(&n) {
                short += 1;
            }
        }
        assert!(short <= 2, "{short}");
    }

    #[test]
    fn stronger_debaters_win_more() {
        let (c, meta) = gen_debates(&SynthConfig::preset(Preset::Network, 4)).unwrap();
        let mut wins_strong = 0;
        let mut total = 0;
        for d in c.debates() {
            let s = |u: &str| meta.skills.iter().find(|(id, _)| id == u).unwrap().1;
            let stronger = if s(&d.pro_user) > s(&d.con_user) { Verdict::Pro } else { Verdict::Con };
            total += 1;
            if winner_by_points(&d.ballots) == stronger {
                wins_strong += 1;
            }
        }
        assert!(wins_strong as f64 / total as f64 > 0.75);
    }
}
