//! Winner, persuasion, success and impact labels.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::{
    Ballot, Corpus, Dimension, ImpactVoteTally, Side, Verdict, VoteStance,
};
use crate::error::LabelError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PointTotals {
    pub pro_points: u32,
    pub con_points: u32,
}

impl PointTotals {
    pub fn winner(&self) -> Verdict {
        match self.pro_points.cmp(&self.con_points) {
            core::cmp::Ordering::Greater => Verdict::Pro,
            core::cmp::Ordering::Less => Verdict::Con,
            core::cmp::Ordering::Equal => Verdict::Tie,
        }
    }
}

fn ballot_points(ballot: &Ballot) -> PointTotals {
    let mut totals = PointTotals::default();
    for dim in Dimension::ALL {
        match ballot.choices.get(dim) {
            Verdict::Pro => totals.pro_points += dim.weight(),
            Verdict::Con => totals.con_points += dim.weight(),
            Verdict::Tie => {}
        }
    }
    totals
}

/// Weighted points per side: conduct 1, spelling/grammar 1, convincing arguments 3,
/// reliable sources 2. Ties award nothing.
pub fn point_totals<'a>(ballots: impl IntoIterator<Item = &'a Ballot>) -> PointTotals {
    ballots.into_iter().fold(PointTotals::default(), |acc, b| {
        let p = ballot_points(b);
        PointTotals {
            pro_points: acc.pro_points + p.pro_points,
            con_points: acc.con_points + p.con_points,
        }
    })
}

pub fn winner_by_points(ballots: &[Ballot]) -> Verdict {
    point_totals(ballots).winner()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Conversions {
    pub to_pro: u32,
    pub to_con: u32,
}

fn converted_to(ballot: &Ballot) -> Option<Side> {
    match (ballot.stance_before, ballot.stance_after) {
        (before, VoteStance::Pro) if before != VoteStance::Pro => Some(Side::Pro),
        (before, VoteStance::Con) if before != VoteStance::Con => Some(Side::Con),
        _ => None,
    }
}

pub fn conversions(ballots: &[Ballot]) -> Conversions {
    let mut c = Conversions::default();
    for b in ballots {
        match converted_to(b) {
            Some(Side::Pro) => c.to_pro += 1,
            Some(Side::Con) => c.to_con += 1,
            None => {}
        }
    }
    c
}

/// The side that converted more voters; undecided-to-side counts as a conversion.
pub fn winner_by_conversion(ballots: &[Ballot]) -> Verdict {
    let c = conversions(ballots);
    match c.to_pro.cmp(&c.to_con) {
        core::cmp::Ordering::Greater => Verdict::Pro,
        core::cmp::Ordering::Less => Verdict::Con,
        core::cmp::Ordering::Equal => Verdict::Tie,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VoterCase {
    FromMiddle,
    FromOpposing,
    Excluded,
}

pub fn voter_case(ballot: &Ballot) -> VoterCase {
    use VoteStance::*;
    match (ballot.stance_before, ballot.stance_after) {
        (Undecided, Pro) | (Undecided, Con) => VoterCase::FromMiddle,
        (Pro, Con) | (Con, Pro) => VoterCase::FromOpposing,
        _ => VoterCase::Excluded,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Criterion {
    Points,
    Conversion,
}

/// Winner from one voter's point of view.
///
/// `Points` scores just this ballot; `Conversion` returns the side the voter
/// moved to, or `Tie` when they moved to undecided.
pub fn per_voter_winner(ballot: &Ballot, criterion: Criterion) -> Result<Verdict, LabelError> {
    match criterion {
        Criterion::Points => Ok(ballot_points(ballot).winner()),
        Criterion::Conversion => {
            if ballot.stance_before == ballot.stance_after {
                return Err(LabelError::UnchangedVoter {
                    voter: ballot.voter_id.clone(),
                });
            }
            Ok(match ballot.stance_after {
                VoteStance::Pro => Verdict::Pro,
                VoteStance::Con => Verdict::Con,
                VoteStance::Undecided => Verdict::Tie,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SuccessClass {
    Successful,
    Mediocre,
    Unsuccessful,
}

impl SuccessClass {
    /// Classify `wins` out of `total` with exact rational thresholds (≥ 70%, ≤ 30%).
    pub fn from_counts(wins: usize, total: usize) -> SuccessClass {
        debug_assert!(total > 0);
        if 10 * wins >= 7 * total {
            SuccessClass::Successful
        } else if 10 * wins <= 3 * total {
            SuccessClass::Unsuccessful
        } else {
            SuccessClass::Mediocre
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SuccessClass::Successful => "SUCCESSFUL",
            SuccessClass::Mediocre => "MEDIOCRE",
            SuccessClass::Unsuccessful => "UNSUCCESSFUL",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuccessRecord {
    pub user_id: String,
    /// Debate ids in chronological order.
    pub debates_as_debater: Vec<String>,
    /// Whether the user won each debate, aligned with `debates_as_debater`.
    pub outcomes: Vec<bool>,
    pub wins: usize,
    pub success_rate: f64,
    pub class: SuccessClass,
    /// Win rate per lifetime stage; absent with fewer than three debates.
    pub stage_rates: Option<[f64; 3]>,
}

impl SuccessRecord {
    fn stage_bounds(&self) -> Option<[core::ops::Range<usize>; 3]> {
        stage_ranges(self.outcomes.len()).ok()
    }

    /// Win rate over the first lifetime stage.
    pub fn success_prior(&self) -> Option<f64> {
        self.stage_rates.map(|r| r[0])
    }

    /// Wins and debates over stages two and three.
    pub fn later_counts(&self) -> Option<(usize, usize)> {
        let [_, s2, s3] = self.stage_bounds()?;
        let range = s2.start..s3.end;
        let wins = self.outcomes[range.clone()].iter().filter(|&&w| w).count();
        Some((wins, range.len()))
    }

    pub fn later_class(&self) -> Option<SuccessClass> {
        self.later_counts()
            .map(|(w, n)| SuccessClass::from_counts(w, n))
    }

    /// Class of the first stage alone.
    pub fn prior_class(&self) -> Option<SuccessClass> {
        let [s1, _, _] = self.stage_bounds()?;
        let wins = self.outcomes[s1.clone()].iter().filter(|&&w| w).count();
        Some(SuccessClass::from_counts(wins, s1.len()))
    }
}

/// Lifetime success of `user`, where a win is a Criterion-1 (points) win and
/// ties count as non-wins.
pub fn success_record(user: &str, corpus: &Corpus) -> Result<SuccessRecord, LabelError> {
    let debates = corpus.debates_of(user);
    if debates.is_empty() {
        return Err(LabelError::NoDebates { user: user.into() });
    }
    let outcomes: Vec<bool> = debates
        .iter()
        .map(|d| {
            let side = d.side_of(user).expect("filtered to debater");
            winner_by_points(&d.ballots) == Verdict::from(side)
        })
        .collect();
    let wins = outcomes.iter().filter(|&&w| w).count();
    let n = outcomes.len();
    let stage_rates = stage_ranges(n).ok().map(|ranges| {
        ranges.map(|r| {
            let w = outcomes[r.clone()].iter().filter(|&&x| x).count();
            w as f64 / r.len() as f64
        })
    });
    Ok(SuccessRecord {
        user_id: user.into(),
        debates_as_debater: debates.iter().map(|d| d.debate_id.clone()).collect(),
        outcomes,
        wins,
        success_rate: wins as f64 / n as f64,
        class: SuccessClass::from_counts(wins, n),
        stage_rates,
    })
}

fn stage_ranges(n: usize) -> Result<[core::ops::Range<usize>; 3], LabelError> {
    if n < 3 {
        return Err(LabelError::TooFewDebates { count: n });
    }
    let base = n / 3;
    let extra = n % 3;
    let s1 = base + usize::from(extra >= 1);
    let s2 = base + usize::from(extra >= 2);
    Ok([0..s1, s1..s1 + s2, s1 + s2..n])
}

/// Split a chronological sequence into thirds; remainders go to earlier stages.
pub fn lifetime_stages<T>(items: &[T]) -> Result<[&[T]; 3], LabelError> {
    let [a, b, c] = stage_ranges(items.len())?;
    Ok([&items[a], &items[b], &items[c]])
}

/// Percentage of votes cast for the most popular class.
pub fn agreement_score(counts: &[u32]) -> Result<f64, LabelError> {
    let total: u32 = counts.iter().sum();
    if total == 0 {
        return Err(LabelError::EmptyTally);
    }
    let max = counts.iter().copied().max().unwrap_or(0);
    Ok(100.0 * f64::from(max) / f64::from(total))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ImpactLabel3 {
    #[serde(rename = "NOT_IMPACTFUL")]
    NotImpactful,
    #[serde(rename = "MEDIUM_IMPACT")]
    MediumImpact,
    #[serde(rename = "IMPACTFUL")]
    Impactful,
}

impl ImpactLabel3 {
    pub const ALL: [ImpactLabel3; 3] = [
        ImpactLabel3::NotImpactful,
        ImpactLabel3::MediumImpact,
        ImpactLabel3::Impactful,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ImpactLabel3::NotImpactful => "NOT_IMPACTFUL",
            ImpactLabel3::MediumImpact => "MEDIUM_IMPACT",
            ImpactLabel3::Impactful => "IMPACTFUL",
        }
    }
}

/// (NO + LOW, MEDIUM, HIGH + VERY_HIGH).
pub fn collapse(tally: &ImpactVoteTally) -> [u32; 3] {
    let c = tally.0;
    [c[0] + c[1], c[2], c[3] + c[4]]
}

pub const MIN_IMPACT_VOTES: u32 = 5;
pub const MIN_IMPACT_AGREEMENT: f64 = 60.0;

/// Three-class label for a tally with at least `min_votes` votes and collapsed
/// agreement strictly above `min_agreement`; ambiguous majorities yield `None`.
pub fn impact_label(
    tally: &ImpactVoteTally,
    min_votes: u32,
    min_agreement: f64,
) -> Option<ImpactLabel3> {
    let total = tally.total();
    if total == 0 || total < min_votes {
        return None;
    }
    let collapsed = collapse(tally);
    let agreement = agreement_score(&collapsed).ok()?;
    if agreement <= min_agreement {
        return None;
    }
    let max = *collapsed.iter().max()?;
    let mut winners = collapsed.iter().enumerate().filter(|(_, &c)| c == max);
    let (idx, _) = winners.next()?;
    if winners.next().is_some() {
        return None;
    }
    ImpactLabel3::from_index(idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{DimensionChoices, Debate, Round, UserProfile};
    use alloc::format;
    use alloc::vec;

    fn ballot(before: VoteStance, after: VoteStance, choices: DimensionChoices) -> Ballot {
        Ballot {
            voter_id: "v".into(),
            stance_before: before,
            stance_after: after,
            choices,
        }
    }

    fn tie() -> DimensionChoices {
        DimensionChoices::all(Verdict::Tie)
    }

    #[test]
    fn point_examples() {
        let mut c = tie();
        c.conduct = Verdict::Con;
        c.convincing_arguments = Verdict::Con;
        let b = ballot(VoteStance::Pro, VoteStance::Pro, c);
        assert_eq!(
            point_totals([&b]),
            PointTotals {
                pro_points: 0,
                con_points: 4
            }
        );
        assert_eq!(winner_by_points(&[b]), Verdict::Con);
        let t = ballot(VoteStance::Pro, VoteStance::Pro, tie());
        assert_eq!(point_totals([&t]), PointTotals::default());
        assert_eq!(winner_by_points(&[t]), Verdict::Tie);
        let all_pro = ballot(
            VoteStance::Pro,
            VoteStance::Pro,
            DimensionChoices::all(Verdict::Pro),
        );
        assert_eq!(point_totals([&all_pro, &all_pro]).pro_points, 14);
    }

    #[test]
    fn seven_to_six_is_pro() {
        // PRO: convincing 3 + sources 2 + conduct 1 + spelling 1 = 7 over two ballots,
        // CON: convincing 3 + sources 2 + conduct 1 = 6.
        let mut a = tie();
        a.convincing_arguments = Verdict::Pro;
        a.reliable_sources = Verdict::Pro;
        a.conduct = Verdict::Con;
        let mut b = tie();
        b.convincing_arguments = Verdict::Con;
        b.reliable_sources = Verdict::Con;
        b.conduct = Verdict::Pro;
        b.spelling_grammar = Verdict::Pro;
        let ballots = [
            ballot(VoteStance::Pro, VoteStance::Pro, a),
            ballot(VoteStance::Pro, VoteStance::Pro, b),
        ];
        let t = point_totals(&ballots);
        assert_eq!((t.pro_points, t.con_points), (7, 6));
        assert_eq!(winner_by_points(&ballots), Verdict::Pro);
    }

    #[test]
    fn conversion_examples() {
        let b = [
            ballot(VoteStance::Undecided, VoteStance::Pro, tie()),
            ballot(VoteStance::Con, VoteStance::Pro, tie()),
        ];
        assert_eq!(conversions(&b).to_pro, 2);
        assert_eq!(winner_by_conversion(&b), Verdict::Pro);
        let same = [ballot(VoteStance::Pro, VoteStance::Pro, tie())];
        assert_eq!(winner_by_conversion(&same), Verdict::Tie);
        let even = [
            ballot(VoteStance::Undecided, VoteStance::Con, tie()),
            ballot(VoteStance::Undecided, VoteStance::Pro, tie()),
        ];
        assert_eq!(winner_by_conversion(&even), Verdict::Tie);
    }

    #[test]
    fn voter_cases() {
        use VoteStance::*;
        assert_eq!(voter_case(&ballot(Undecided, Pro, tie())), VoterCase::FromMiddle);
        assert_eq!(voter_case(&ballot(Con, Pro, tie())), VoterCase::FromOpposing);
        assert_eq!(voter_case(&ballot(Pro, Pro, tie())), VoterCase::Excluded);
        assert_eq!(voter_case(&ballot(Pro, Undecided, tie())), VoterCase::Excluded);
    }

    #[test]
    fn per_voter_examples() {
        let mut c = tie();
        c.convincing_arguments = Verdict::Con;
        c.reliable_sources = Verdict::Con;
        let b = ballot(VoteStance::Pro, VoteStance::Pro, c);
        assert_eq!(per_voter_winner(&b, Criterion::Points).unwrap(), Verdict::Con);
        let moved = ballot(VoteStance::Undecided, VoteStance::Pro, tie());
        assert_eq!(
            per_voter_winner(&moved, Criterion::Conversion).unwrap(),
            Verdict::Pro
        );
        assert_eq!(
            per_voter_winner(&moved, Criterion::Points).unwrap(),
            Verdict::Tie
        );
        assert!(per_voter_winner(&b, Criterion::Conversion).is_err());
    }

    #[test]
    fn success_thresholds() {
        assert_eq!(SuccessClass::from_counts(7, 10), SuccessClass::Successful);
        assert_eq!(SuccessClass::from_counts(3, 10), SuccessClass::Unsuccessful);
        assert_eq!(SuccessClass::from_counts(5, 10), SuccessClass::Mediocre);
        assert_eq!(SuccessClass::from_counts(0, 1), SuccessClass::Unsuccessful);
        assert_eq!(SuccessClass::from_counts(1, 1), SuccessClass::Successful);
    }

    #[test]
    fn stage_split() {
        let nine: Vec<u8> = (0..9).collect();
        let s = lifetime_stages(&nine).unwrap();
        assert_eq!([s[0].len(), s[1].len(), s[2].len()], [3, 3, 3]);
        let ten: Vec<u8> = (0..10).collect();
        let s = lifetime_stages(&ten).unwrap();
        assert_eq!([s[0].len(), s[1].len(), s[2].len()], [4, 3, 3]);
        let eleven: Vec<u8> = (0..11).collect();
        let s = lifetime_stages(&eleven).unwrap();
        assert_eq!([s[0].len(), s[1].len(), s[2].len()], [4, 4, 3]);
        assert!(lifetime_stages(&[1, 2]).is_err());
    }

    fn win_debate(id: usize, user_wins: bool) -> Debate {
        let choice = if user_wins { Verdict::Pro } else { Verdict::Con };
        Debate {
            debate_id: format!("d{id:02}"),
            topic: "t".into(),
            category: "c".into(),
            pro_user: "u".into(),
            con_user: "x".into(),
            rounds: vec![Round {
                index: 1,
                pro_text: Some("a".into()),
                con_text: Some("b".into()),
            }],
            ballots: vec![ballot(
                VoteStance::Pro,
                VoteStance::Pro,
                DimensionChoices::all(choice),
            )],
            timestamp: id as i64,
        }
    }

    #[test]
    fn success_record_from_corpus() {
        let pattern = [false, false, false, false, true, true, true, true, true, false];
        let debates = pattern
            .iter()
            .enumerate()
            .map(|(i, &w)| win_debate(i, w))
            .collect();
        let corpus = Corpus::new(
            debates,
            vec![UserProfile::new("u", 0), UserProfile::new("x", 1)],
            vec![],
            vec![],
        )
        .unwrap();
        let rec = success_record("u", &corpus).unwrap();
        assert_eq!(rec.wins, 5);
        assert_eq!(rec.class, SuccessClass::Mediocre);
        assert_eq!(rec.success_prior(), Some(0.0));
        assert_eq!(rec.later_counts(), Some((5, 6)));
        assert_eq!(rec.later_class(), Some(SuccessClass::Successful));
        assert_eq!(rec.prior_class(), Some(SuccessClass::Unsuccessful));
        let other = success_record("x", &corpus).unwrap();
        assert_eq!(other.wins, 5);
        assert!(success_record("nobody", &corpus).is_err());
    }

    #[test]
    fn agreement_examples() {
        let a = agreement_score(&[30, 25, 15, 10, 10]).unwrap();
        assert!((a - 100.0 * 30.0 / 90.0).abs() < 1e-12);
        assert!((a - 33.33).abs() < 0.01);
        assert_eq!(agreement_score(&[0, 0, 10, 0, 0]).unwrap(), 100.0);
        assert_eq!(agreement_score(&[2, 2, 2, 2, 2]).unwrap(), 20.0);
        assert!(agreement_score(&[0; 5]).is_err());
    }

    #[test]
    fn impact_label_examples() {
        let t = |c: [u32; 5]| ImpactVoteTally(c);
        assert_eq!(
            impact_label(&t([0, 0, 0, 3, 3]), 5, 60.0),
            Some(ImpactLabel3::Impactful)
        );
        assert_eq!(impact_label(&t([2, 2, 0, 0, 0]), 5, 60.0), None);
        assert_eq!(impact_label(&t([3, 0, 0, 3, 0]), 5, 60.0), None);
        assert_eq!(
            impact_label(&t([4, 3, 1, 0, 0]), 5, 60.0),
            Some(ImpactLabel3::NotImpactful)
        );
        // exactly 60% is not enough
        assert_eq!(impact_label(&t([0, 0, 3, 2, 0]), 5, 60.0), None);
    }
}
