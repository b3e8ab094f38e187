//! Debates, user profiles and argument trees.
//!
//! Everything in here is validated at construction and immutable afterwards.
//! The serde derives describe the canonical JSON records; the std companion
//! crate owns the actual reading and writing.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CorpusError;

/// A user's declared position on one catalog issue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IssueStance {
    #[serde(rename = "PRO")]
    Pro,
    #[serde(rename = "CON")]
    Con,
    #[serde(rename = "N/O")]
    NoOpinion,
    #[serde(rename = "N/S")]
    NotSaying,
    #[serde(rename = "UND")]
    Undecided,
}

/// Stance a voter reports on the debate topic before or after reading it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VoteStance {
    #[serde(rename = "PRO")]
    Pro,
    #[serde(rename = "CON")]
    Con,
    #[serde(rename = "UND")]
    Undecided,
}

/// One of the two debating sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "PRO")]
    Pro,
    #[serde(rename = "CON")]
    Con,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Pro => Side::Con,
            Side::Con => Side::Pro,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Pro => "PRO",
            Side::Con => "CON",
        }
    }
}

/// A three-way decision: a ballot dimension choice, or a winner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PRO")]
    Pro,
    #[serde(rename = "CON")]
    Con,
    #[serde(rename = "TIE")]
    Tie,
}

impl Verdict {
    pub fn side(self) -> Option<Side> {
        match self {
            Verdict::Pro => Some(Side::Pro),
            Verdict::Con => Some(Side::Con),
            Verdict::Tie => None,
        }
    }

    pub fn swapped(self) -> Verdict {
        match self {
            Verdict::Pro => Verdict::Con,
            Verdict::Con => Verdict::Pro,
            Verdict::Tie => Verdict::Tie,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pro => "PRO",
            Verdict::Con => "CON",
            Verdict::Tie => "TIE",
        }
    }
}

impl From<Side> for Verdict {
    fn from(side: Side) -> Self {
        match side {
            Side::Pro => Verdict::Pro,
            Side::Con => Verdict::Con,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The four judged ballot dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dimension {
    Conduct,
    SpellingGrammar,
    ConvincingArguments,
    ReliableSources,
}

impl Dimension {
    pub const ALL: [Dimension; 4] = [
        Dimension::Conduct,
        Dimension::SpellingGrammar,
        Dimension::ConvincingArguments,
        Dimension::ReliableSources,
    ];

    /// Points awarded to the side chosen on this dimension.
    pub fn weight(self) -> u32 {
        match self {
            Dimension::Conduct => 1,
            Dimension::SpellingGrammar => 1,
            Dimension::ConvincingArguments => 3,
            Dimension::ReliableSources => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionChoices {
    pub conduct: Verdict,
    pub spelling_grammar: Verdict,
    pub convincing_arguments: Verdict,
    pub reliable_sources: Verdict,
}

impl DimensionChoices {
    pub fn all(choice: Verdict) -> Self {
        DimensionChoices {
            conduct: choice,
            spelling_grammar: choice,
            convincing_arguments: choice,
            reliable_sources: choice,
        }
    }

    pub fn get(&self, dimension: Dimension) -> Verdict {
        match dimension {
            Dimension::Conduct => self.conduct,
            Dimension::SpellingGrammar => self.spelling_grammar,
            Dimension::ConvincingArguments => self.convincing_arguments,
            Dimension::ReliableSources => self.reliable_sources,
        }
    }

    pub fn set(&mut self, dimension: Dimension, choice: Verdict) {
        match dimension {
            Dimension::Conduct => self.conduct = choice,
            Dimension::SpellingGrammar => self.spelling_grammar = choice,
            Dimension::ConvincingArguments => self.convincing_arguments = choice,
            Dimension::ReliableSources => self.reliable_sources = choice,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ballot {
    pub voter_id: String,
    pub stance_before: VoteStance,
    pub stance_after: VoteStance,
    pub choices: DimensionChoices,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub index: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pro_text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub con_text: Option<String>,
}

impl Round {
    pub fn text(&self, side: Side) -> Option<&str> {
        match side {
            Side::Pro => self.pro_text.as_deref(),
            Side::Con => self.con_text.as_deref(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Debate {
    pub debate_id: String,
    pub topic: String,
    pub category: String,
    pub pro_user: String,
    pub con_user: String,
    pub rounds: Vec<Round>,
    pub ballots: Vec<Ballot>,
    pub timestamp: i64,
}

pub const MAX_ROUNDS: usize = 5;

impl Debate {
    pub fn debater(&self, side: Side) -> &str {
        match side {
            Side::Pro => &self.pro_user,
            Side::Con => &self.con_user,
        }
    }

    /// The side `user` argued, if they were a debater here.
    pub fn side_of(&self, user: &str) -> Option<Side> {
        if self.pro_user == user {
            Some(Side::Pro)
        } else if self.con_user == user {
            Some(Side::Con)
        } else {
            None
        }
    }

    /// Utterances of one side, in round order.
    pub fn utterances(&self, side: Side) -> impl Iterator<Item = &str> {
        self.rounds.iter().filter_map(move |r| r.text(side))
    }

    fn validate(&self) -> Result<(), CorpusError> {
        if self.rounds.is_empty() || self.rounds.len() > MAX_ROUNDS {
            return Err(CorpusError::RoundCount {
                debate: self.debate_id.clone(),
                count: self.rounds.len(),
            });
        }
        for pair in self.rounds.windows(2) {
            if pair[1].index <= pair[0].index {
                return Err(CorpusError::RoundOrder {
                    debate: self.debate_id.clone(),
                });
            }
        }
        if self.pro_user == self.con_user {
            return Err(CorpusError::SameDebaters {
                debate: self.debate_id.clone(),
            });
        }
        Ok(())
    }
}

/// Self-declared demographic traits usable for matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trait {
    PoliticalIdeology,
    ReligiousIdeology,
    Gender,
    Ethnicity,
}

impl Trait {
    pub const ALL: [Trait; 4] = [
        Trait::PoliticalIdeology,
        Trait::ReligiousIdeology,
        Trait::Gender,
        Trait::Ethnicity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Trait::PoliticalIdeology => "political_ideology",
            Trait::ReligiousIdeology => "religious_ideology",
            Trait::Gender => "gender",
            Trait::Ethnicity => "ethnicity",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserProfile {
    pub user_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub political_ideology: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub religious_ideology: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gender: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ethnicity: Option<String>,
    #[serde(default)]
    pub big_issue_stances: BTreeMap<String, IssueStance>,
    #[serde(default)]
    pub friends: BTreeSet<String>,
    pub join_order: u64,
}

impl UserProfile {
    pub fn new(user_id: impl Into<String>, join_order: u64) -> Self {
        UserProfile {
            user_id: user_id.into(),
            political_ideology: None,
            religious_ideology: None,
            gender: None,
            ethnicity: None,
            big_issue_stances: BTreeMap::new(),
            friends: BTreeSet::new(),
            join_order,
        }
    }

    pub fn trait_value(&self, t: Trait) -> Option<&str> {
        match t {
            Trait::PoliticalIdeology => self.political_ideology.as_deref(),
            Trait::ReligiousIdeology => self.religious_ideology.as_deref(),
            Trait::Gender => self.gender.as_deref(),
            Trait::Ethnicity => self.ethnicity.as_deref(),
        }
    }
}

/// Concatenated four-way one-hot stance encoding, one block per catalog issue.
#[derive(Clone, Debug, PartialEq)]
pub struct BigIssuesVector(Vec<f64>);

impl BigIssuesVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Encode a profile's stances in catalog order, blocks laid out (PRO, CON, N/O, UND).
pub fn encode_big_issues(
    profile: &UserProfile,
    catalog: &[String],
) -> Result<BigIssuesVector, CorpusError> {
    let mut values = alloc::vec![0.0; 4 * catalog.len()];
    for (i, issue) in catalog.iter().enumerate() {
        let stance = profile
            .big_issue_stances
            .get(issue)
            .ok_or_else(|| CorpusError::MissingStance {
                user: profile.user_id.clone(),
                issue: issue.clone(),
            })?;
        let slot = match stance {
            IssueStance::Pro => 0,
            IssueStance::Con => 1,
            IssueStance::NoOpinion => 2,
            IssueStance::Undecided => 3,
            IssueStance::NotSaying => {
                return Err(CorpusError::NotSaying {
                    user: profile.user_id.clone(),
                    issue: issue.clone(),
                })
            }
        };
        values[4 * i + slot] = 1.0;
    }
    Ok(BigIssuesVector(values))
}

/// Cosine similarity of two stance encodings.
pub fn opinion_similarity(a: &BigIssuesVector, b: &BigIssuesVector) -> Result<f64, CorpusError> {
    if a.len() != b.len() {
        return Err(CorpusError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let dot: f64 = a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum();
    let na = libm::sqrt(a.0.iter().map(|x| x * x).sum());
    let nb = libm::sqrt(b.0.iter().map(|x| x * x).sum());
    if na == 0.0 || nb == 0.0 {
        return Ok(0.0);
    }
    Ok(dot / (na * nb))
}

/// 1 when both users declare the same value for `t`; errors if either is undeclared.
pub fn matching_trait(a: &UserProfile, b: &UserProfile, t: Trait) -> Result<bool, CorpusError> {
    let undeclared = |p: &UserProfile| CorpusError::UndeclaredTrait {
        user: p.user_id.clone(),
        name: t.name(),
    };
    let va = a.trait_value(t).ok_or_else(|| undeclared(a))?;
    let vb = b.trait_value(t).ok_or_else(|| undeclared(b))?;
    Ok(va == vb)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeLabel {
    #[serde(rename = "SUPPORT")]
    Support,
    #[serde(rename = "OPPOSE")]
    Oppose,
}

/// Five-class impact vote counts ordered (NO, LOW, MEDIUM, HIGH, VERY_HIGH).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ImpactVoteTally(pub [u32; 5]);

impl ImpactVoteTally {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimNode {
    pub claim_id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_label: Option<EdgeLabel>,
    pub tally: ImpactVoteTally,
}

/// Wire form of an argument tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeRecord {
    pub tree_id: String,
    pub nodes: Vec<ClaimNode>,
}

/// A validated argument tree: one thesis, every other claim hangs off exactly
/// one parent through a SUPPORT or OPPOSE edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TreeRecord", into = "TreeRecord")]
pub struct ArgumentTree {
    tree_id: String,
    nodes: Vec<ClaimNode>,
    index: BTreeMap<String, usize>,
    parent_of: Vec<Option<usize>>,
    depth: Vec<usize>,
    root: usize,
}

impl ArgumentTree {
    pub fn new(tree_id: impl Into<String>, nodes: Vec<ClaimNode>) -> Result<Self, CorpusError> {
        let tree_id = tree_id.into();
        let mut index = BTreeMap::new();
        for (i, node) in nodes.iter().enumerate() {
            if index.insert(node.claim_id.clone(), i).is_some() {
                return Err(CorpusError::DuplicateId {
                    kind: "claim",
                    id: node.claim_id.clone(),
                });
            }
        }
        let roots: Vec<usize> = (0..nodes.len())
            .filter(|&i| nodes[i].parent.is_none())
            .collect();
        if roots.len() != 1 {
            return Err(CorpusError::RootCount {
                tree: tree_id,
                count: roots.len(),
            });
        }
        let root = roots[0];
        let mut parent_of = alloc::vec![None; nodes.len()];
        for (i, node) in nodes.iter().enumerate() {
            match (&node.parent, node.edge_label) {
                (None, None) => {}
                (None, Some(_)) | (Some(_), None) => {
                    return Err(CorpusError::EdgeLabel {
                        tree: tree_id,
                        claim: node.claim_id.clone(),
                    })
                }
                (Some(parent), Some(_)) => {
                    let p = *index.get(parent).ok_or_else(|| CorpusError::UnknownParent {
                        tree: tree_id.clone(),
                        claim: node.claim_id.clone(),
                        parent: parent.clone(),
                    })?;
                    parent_of[i] = Some(p);
                }
            }
        }
        // Every claim must reach the root in fewer than n steps.
        let mut depth = alloc::vec![usize::MAX; nodes.len()];
        depth[root] = 0;
        for start in 0..nodes.len() {
            let mut chain = Vec::new();
            let mut cur = start;
            while depth[cur] == usize::MAX {
                chain.push(cur);
                if chain.len() > nodes.len() {
                    return Err(CorpusError::Cycle {
                        tree: tree_id,
                        claim: nodes[start].claim_id.clone(),
                    });
                }
                cur = parent_of[cur].expect("only the root lacks a parent");
            }
            let mut d = depth[cur];
            for &c in chain.iter().rev() {
                d += 1;
                depth[c] = d;
            }
        }
        Ok(ArgumentTree {
            tree_id,
            nodes,
            index,
            parent_of,
            depth,
            root,
        })
    }

    pub fn tree_id(&self) -> &str {
        &self.tree_id
    }

    /// Claims in file order.
    pub fn nodes(&self) -> &[ClaimNode] {
        &self.nodes
    }

    pub fn thesis(&self) -> &ClaimNode {
        &self.nodes[self.root]
    }

    pub fn claim(&self, claim_id: &str) -> Result<&ClaimNode, CorpusError> {
        self.position(claim_id).map(|i| &self.nodes[i])
    }

    pub fn parent(&self, claim_id: &str) -> Result<Option<&ClaimNode>, CorpusError> {
        let i = self.position(claim_id)?;
        Ok(self.parent_of[i].map(|p| &self.nodes[p]))
    }

    /// Number of predecessor claims between the thesis and `claim_id`.
    pub fn depth(&self, claim_id: &str) -> Result<usize, CorpusError> {
        self.position(claim_id).map(|i| self.depth[i])
    }

    pub fn children<'a>(&'a self, claim_id: &'a str) -> impl Iterator<Item = &'a ClaimNode> + 'a {
        self.nodes
            .iter()
            .filter(move |n| n.parent.as_deref() == Some(claim_id))
    }

    /// Ordered predecessor claims, thesis first, excluding the claim itself.
    pub fn context_of(&self, claim_id: &str) -> Result<Vec<&ClaimNode>, CorpusError> {
        let mut i = self.position(claim_id)?;
        let mut path = Vec::with_capacity(self.depth[i]);
        while let Some(p) = self.parent_of[i] {
            path.push(&self.nodes[p]);
            i = p;
        }
        path.reverse();
        Ok(path)
    }

    fn position(&self, claim_id: &str) -> Result<usize, CorpusError> {
        self.index
            .get(claim_id)
            .copied()
            .ok_or_else(|| CorpusError::UnknownClaim {
                tree: self.tree_id.clone(),
                claim: claim_id.into(),
            })
    }
}

impl TryFrom<TreeRecord> for ArgumentTree {
    type Error = CorpusError;

    fn try_from(record: TreeRecord) -> Result<Self, Self::Error> {
        ArgumentTree::new(record.tree_id, record.nodes)
    }
}

impl From<ArgumentTree> for TreeRecord {
    fn from(tree: ArgumentTree) -> Self {
        TreeRecord {
            tree_id: tree.tree_id,
            nodes: tree.nodes,
        }
    }
}

/// Predecessor claims of `claim_id` plus their count (the context length).
pub fn context_of<'t>(
    tree: &'t ArgumentTree,
    claim_id: &str,
) -> Result<(Vec<&'t ClaimNode>, usize), CorpusError> {
    let ctx = tree.context_of(claim_id)?;
    let len = ctx.len();
    Ok((ctx, len))
}

/// A validated collection of debates, profiles and argument trees.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Corpus {
    debates: Vec<Debate>,
    users: Vec<UserProfile>,
    user_index: BTreeMap<String, usize>,
    trees: Vec<ArgumentTree>,
    catalog: Vec<String>,
}

impl Corpus {
    /// Validate and assemble. When `catalog` is non-empty every declared stance
    /// must name a catalog issue.
    pub fn new(
        debates: Vec<Debate>,
        users: Vec<UserProfile>,
        trees: Vec<ArgumentTree>,
        catalog: Vec<String>,
    ) -> Result<Self, CorpusError> {
        let mut seen = BTreeSet::new();
        for issue in &catalog {
            if !seen.insert(issue.as_str()) {
                return Err(CorpusError::DuplicateId {
                    kind: "issue",
                    id: issue.clone(),
                });
            }
        }
        let mut user_index = BTreeMap::new();
        for (i, user) in users.iter().enumerate() {
            if user_index.insert(user.user_id.clone(), i).is_some() {
                return Err(CorpusError::DuplicateId {
                    kind: "user",
                    id: user.user_id.clone(),
                });
            }
            if !catalog.is_empty() {
                if let Some(issue) = user
                    .big_issue_stances
                    .keys()
                    .find(|k| !seen.contains(k.as_str()))
                {
                    return Err(CorpusError::UnknownIssue {
                        user: user.user_id.clone(),
                        issue: issue.clone(),
                    });
                }
            }
        }
        let mut debate_ids = BTreeSet::new();
        for debate in &debates {
            if !debate_ids.insert(debate.debate_id.as_str()) {
                return Err(CorpusError::DuplicateId {
                    kind: "debate",
                    id: debate.debate_id.clone(),
                });
            }
            debate.validate()?;
        }
        let mut tree_ids = BTreeSet::new();
        for tree in &trees {
            if !tree_ids.insert(tree.tree_id()) {
                return Err(CorpusError::DuplicateId {
                    kind: "tree",
                    id: tree.tree_id().into(),
                });
            }
        }
        Ok(Corpus {
            debates,
            users,
            user_index,
            trees,
            catalog,
        })
    }

    pub fn debates(&self) -> &[Debate] {
        &self.debates
    }

    pub fn users(&self) -> &[UserProfile] {
        &self.users
    }

    pub fn user(&self, user_id: &str) -> Option<&UserProfile> {
        self.user_index.get(user_id).map(|&i| &self.users[i])
    }

    pub fn trees(&self) -> &[ArgumentTree] {
        &self.trees
    }

    pub fn catalog(&self) -> &[String] {
        &self.catalog
    }

    /// Debates where `user` argued, ordered by (timestamp, debate id).
    pub fn debates_of(&self, user: &str) -> Vec<&Debate> {
        let mut out: Vec<&Debate> = self
            .debates
            .iter()
            .filter(|d| d.side_of(user).is_some())
            .collect();
        out.sort_by(|a, b| {
            a.timestamp
                .cmp(&b.timestamp)
                .then_with(|| a.debate_id.cmp(&b.debate_id))
        });
        out
    }

    pub fn with_trees(mut self, trees: Vec<ArgumentTree>) -> Result<Self, CorpusError> {
        let debates = core::mem::take(&mut self.debates);
        let users = core::mem::take(&mut self.users);
        let catalog = core::mem::take(&mut self.catalog);
        Corpus::new(debates, users, trees, catalog)
    }
}

/// Keep only debates with strictly more than `k` ballots; profiles and trees untouched.
pub fn filter_min_votes(corpus: &Corpus, k: usize) -> Corpus {
    let mut out = corpus.clone();
    out.debates.retain(|d| d.ballots.len() > k);
    out
}
