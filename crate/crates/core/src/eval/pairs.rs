use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng as _;

use super::{PairRow, TaskRow};
use crate::corpus::{Corpus, Trait, UserProfile, Verdict};
use crate::error::EvalError;
use crate::labeling::{per_voter_winner, success_record, Criterion, SuccessClass};
use crate::util::{seeded, shuffle};

fn declared(p: &UserProfile, t: Trait) -> Option<String> {
    p.trait_value(t).map(|v| v.trim().to_ascii_lowercase()).filter(|v| !v.is_empty())
}

fn verdict_label(v: Verdict) -> Option<usize> {
    match v {
        Verdict::Pro => Some(0),
        Verdict::Con => Some(1),
        Verdict::Tie => None,
    }
}

/// Voters who changed stance in debates between debaters of different
/// religious ideologies, and who share one of the two. The label is the side
/// the voter moved to; voters who moved to undecided are dropped.
pub fn task1_pairs(corpus: &Corpus, category: Option<&str>) -> Vec<TaskRow> {
    let mut rows = Vec::new();
    for d in corpus.debates() {
        if category.is_some_and(|c| !d.category.eq_ignore_ascii_case(c)) {
            continue;
        }
        let (Some(pro), Some(con)) = (corpus.user(&d.pro_user), corpus.user(&d.con_user)) else {
            continue;
        };
        let (Some(rp), Some(rc)) = (declared(pro, Trait::ReligiousIdeology), declared(con, Trait::ReligiousIdeology)) else {
            continue;
        };
        if rp == rc {
            continue;
        }
        for b in &d.ballots {
            let Some(voter) = corpus.user(&b.voter_id) else { continue };
            let Some(rv) = declared(voter, Trait::ReligiousIdeology) else { continue };
            if rv != rp && rv != rc {
                continue;
            }
            let Ok(v) = per_voter_winner(b, Criterion::Conversion) else { continue };
            if let Some(label) = verdict_label(v) {
                rows.push(TaskRow {
                    debate_id: d.debate_id.clone(),
                    voter_id: b.voter_id.clone(),
                    label,
                });
            }
        }
    }
    rows.sort();
    rows.dedup_by(|a, b| a.debate_id == b.debate_id && a.voter_id == b.voter_id);
    rows
}

fn is_partisan(v: &str) -> bool {
    v == "liberal" || v == "conservative"
}

/// Liberal-versus-conservative debates and the voters declaring either
/// ideology. The label is the side this voter's ballot gives more points;
/// tied ballots are dropped.
pub fn task2_pairs(corpus: &Corpus) -> Vec<TaskRow> {
    let mut rows = Vec::new();
    for d in corpus.debates() {
        let (Some(pro), Some(con)) = (corpus.user(&d.pro_user), corpus.user(&d.con_user)) else {
            continue;
        };
        let (Some(ip), Some(ic)) = (declared(pro, Trait::PoliticalIdeology), declared(con, Trait::PoliticalIdeology)) else {
            continue;
        };
        if !(is_partisan(&ip) && is_partisan(&ic) && ip != ic) {
            continue;
        }
        for b in &d.ballots {
            let Some(voter) = corpus.user(&b.voter_id) else { continue };
            if !declared(voter, Trait::PoliticalIdeology).is_some_and(|v| is_partisan(&v)) {
                continue;
            }
            let Ok(v) = per_voter_winner(b, Criterion::Points) else { continue };
            if let Some(label) = verdict_label(v) {
                rows.push(TaskRow {
                    debate_id: d.debate_id.clone(),
                    voter_id: b.voter_id.clone(),
                    label,
                });
            }
        }
    }
    rows.sort();
    rows.dedup_by(|a, b| a.debate_id == b.debate_id && a.voter_id == b.voter_id);
    rows
}

/// Successful and unsuccessful users (judged on lifetime stages two and three)
/// paired within equal debate counts.
///
/// Setting 1 keeps every pair, setting 2 only pairs whose success priors are
/// both at most 0.3, setting 3 only pairs whose priors are both at least 0.7.
/// Within each debate count both sides are shuffled with the seed and zipped;
/// each pair's presentation order is then a seeded coin flip.
pub fn setting_pairs(corpus: &Corpus, setting: u8, seed: u64) -> Result<Vec<PairRow>, EvalError> {
    if !(1..=3).contains(&setting) {
        return Err(EvalError::UnknownGroup(alloc::format!("setting{setting}")));
    }
    let keep_prior = |p: f64| match setting {
        2 => p <= 0.3,
        3 => p >= 0.7,
        _ => true,
    };
    // debate count -> (successful, unsuccessful), each as (user, prior)
    let mut groups: BTreeMap<usize, (Vec<(String, f64)>, Vec<(String, f64)>)> = BTreeMap::new();
    let mut debaters: Vec<&str> = corpus
        .debates()
        .iter()
        .flat_map(|d| [d.pro_user.as_str(), d.con_user.as_str()])
        .collect();
    debaters.sort_unstable();
    debaters.dedup();
    for user in debaters {
        let rec = success_record(user, corpus)?;
        let (Some(class), Some(prior)) = (rec.later_class(), rec.success_prior()) else {
            continue;
        };
        if !keep_prior(prior) {
            continue;
        }
        let entry = groups.entry(rec.outcomes.len()).or_default();
        match class {
            SuccessClass::Successful => entry.0.push((String::from(user), prior)),
            SuccessClass::Unsuccessful => entry.1.push((String::from(user), prior)),
            SuccessClass::Mediocre => {}
        }
    }
    let mut rng = seeded(seed);
    let mut pairs = Vec::new();
    for (debates, (mut good, mut bad)) in groups {
        shuffle(&mut good, &mut rng);
        shuffle(&mut bad, &mut rng);
        for ((g, pg), (b, pb)) in good.into_iter().zip(bad) {
            pairs.push((debates, g, pg, b, pb));
        }
    }
    pairs.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(pairs
        .into_iter()
        .map(|(debates, g, pg, b, pb)| {
            if rng.random_bool(0.5) {
                PairRow { users: [b, g], debates, priors: [pb, pg], label: 1 }
            } else {
                PairRow { users: [g, b], debates, priors: [pg, pb], label: 0 }
            }
        })
        .collect())
}

/// Accuracy of the best predictor that must give every voter of a debate the
/// same answer. Debates whose voters split evenly count as entirely wrong.
pub fn max_accuracy_same_prediction(rows: &[TaskRow]) -> f64 {
    if rows.is_empty() {
        return 0.0;
    }
    let mut per_debate: BTreeMap<&str, [usize; 2]> = BTreeMap::new();
    for r in rows {
        per_debate.entry(r.debate_id.as_str()).or_default()[r.label.min(1)] += 1;
    }
    let hits: usize = per_debate
        .values()
        .map(|&[a, b]| if a == b { 0 } else { a.max(b) })
        .sum();
    hits as f64 / rows.len() as f64
}
