//! Experiment harness: splits, pair construction, metrics, significance
//! tests, feature analysis and ablation tables.

mod ablation;
mod analysis;
mod features;
mod metrics;
mod pairs;
mod split;
mod stats;

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::EvalError;

pub use ablation::{
    cross_validate, majority_row, stars, AblationRow, AblationTable, CvOutcome,
    ModelChoice,
};
pub use analysis::{feature_analysis, pearson, FeatureAnalysis, FeatureRank};
pub use features::{pair_dataset, task_dataset, FeatureContext};
pub use metrics::{metrics, Averaging, ClassScores, MetricReport};
pub use pairs::{max_accuracy_same_prediction, setting_pairs, task1_pairs, task2_pairs};
pub use split::{split_70_15_15, stratified_folds};
pub use stats::{
    chi2_sf_1df, incomplete_beta, mcnemar, mcnemar_counts, student_t_sf, t_test_two_sided,
};

/// One (debate, voter) observation; `label` 0 means PRO won this voter over.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TaskRow {
    pub debate_id: String,
    pub voter_id: String,
    pub label: usize,
}

/// Two users with equal debate counts, one successful and one not over the
/// later lifetime stages. `label` is the position (0 or 1) of the successful one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRow {
    pub users: [String; 2],
    pub debates: usize,
    pub priors: [f64; 2],
    pub label: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Task {
    /// Religious-ideology conversion rows, optionally for one debate category.
    Task1 { category: Option<String> },
    /// Political-ideology points rows.
    Task2,
    /// Success prediction over matched user pairs.
    Setting(u8),
}

impl Task {
    pub fn parse(s: &str) -> Option<Task> {
        let s = s.to_ascii_lowercase();
        match s.as_str() {
            "task1" => Some(Task::Task1 { category: None }),
            "task2" => Some(Task::Task2),
            "setting1" => Some(Task::Setting(1)),
            "setting2" => Some(Task::Setting(2)),
            "setting3" => Some(Task::Setting(3)),
            _ => s
                .strip_prefix("task1:")
                .map(|c| Task::Task1 { category: Some(String::from(c)) }),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Task::Task1 { .. } => "task1",
            Task::Task2 => "task2",
            Task::Setting(1) => "setting1",
            Task::Setting(2) => "setting2",
            Task::Setting(_) => "setting3",
        }
    }

    pub fn is_pairwise(&self) -> bool {
        matches!(self, Task::Setting(_))
    }
}

/// Named feature blocks. Each group owns the columns whose names start with
/// its own prefix, so distinct groups never share a column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureGroup {
    /// Voter/debater trait matches and opinion similarity.
    User,
    /// Lexicon and surface statistics of each side.
    Linguistic,
    /// Unigram tf-idf of each side.
    Tfidf,
    /// Word overlap between the two sides.
    Interplay,
    /// Debater scores in the voter and friendship graphs.
    Graph,
    /// Voter-network scores of paired users.
    Network,
    /// Friendship-network scores of paired users.
    Friends,
}

impl FeatureGroup {
    pub const ALL: [FeatureGroup; 7] = [
        FeatureGroup::User,
        FeatureGroup::Linguistic,
        FeatureGroup::Tfidf,
        FeatureGroup::Interplay,
        FeatureGroup::Graph,
        FeatureGroup::Network,
        FeatureGroup::Friends,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FeatureGroup::User => "user",
            FeatureGroup::Linguistic => "linguistic",
            FeatureGroup::Tfidf => "tfidf",
            FeatureGroup::Interplay => "interplay",
            FeatureGroup::Graph => "graph",
            FeatureGroup::Network => "network",
            FeatureGroup::Friends => "friends",
        }
    }

    pub fn parse(s: &str) -> Result<FeatureGroup, EvalError> {
        let s = s.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or(EvalError::UnknownGroup(s))
    }

    /// Comma-separated list; duplicates are rejected.
    pub fn parse_list(s: &str) -> Result<Vec<FeatureGroup>, EvalError> {
        let mut out: Vec<FeatureGroup> = Vec::new();
        for part in s.split([',', '+']).filter(|p| !p.trim().is_empty()) {
            let g = FeatureGroup::parse(part)?;
            if out.contains(&g) {
                return Err(EvalError::OverlappingGroups(String::from(g.name())));
            }
            out.push(g);
        }
        if out.is_empty() {
            return Err(EvalError::Empty);
        }
        Ok(out)
    }

    pub fn applies_to(self, task: &Task) -> bool {
        match self {
            FeatureGroup::Network | FeatureGroup::Friends => task.is_pairwise(),
            FeatureGroup::Linguistic => true,
            _ => !task.is_pairwise(),
        }
    }
}

/// Display name of a group combination, e.g. `user+tfidf`.
pub fn groups_label(groups: &[FeatureGroup]) -> String {
    let names: Vec<&str> = groups.iter().map(|g| g.name()).collect();
    names.join("+")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub task: Task,
    pub groups: Vec<FeatureGroup>,
    pub model: ModelChoice,
    pub folds: usize,
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), EvalError> {
        if self.groups.is_empty() {
            return Err(EvalError::Empty);
        }
        for (i, g) in self.groups.iter().enumerate() {
            if self.groups[..i].contains(g) {
                return Err(EvalError::OverlappingGroups(String::from(g.name())));
            }
            if !g.applies_to(&self.task) {
                return Err(EvalError::GroupNotApplicable {
                    group: g.name(),
                    task: self.task.name(),
                });
            }
        }
        if self.folds < 2 {
            return Err(EvalError::Learn(crate::error::LearnError::Parameter(
                "need at least two folds",
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn group_lists_parse_and_reject_repeats() {
        assert_eq!(
            FeatureGroup::parse_list("user,linguistic").unwrap(),
            vec![FeatureGroup::User, FeatureGroup::Linguistic]
        );
        assert!(matches!(
            FeatureGroup::parse_list("user,user"),
            Err(EvalError::OverlappingGroups(_))
        ));
        assert!(matches!(FeatureGroup::parse("style"), Err(EvalError::UnknownGroup(_))));
    }

    #[test]
    fn specs_check_group_applicability() {
        let spec = ExperimentSpec {
            task: Task::Setting(1),
            groups: vec![FeatureGroup::Tfidf],
            model: ModelChoice::default(),
            folds: 5,
            seed: 0,
        };
        assert!(matches!(spec.validate(), Err(EvalError::GroupNotApplicable { .. })));
        let ok = ExperimentSpec { groups: vec![FeatureGroup::Network], ..spec };
        assert!(ok.validate().is_ok());
    }

    #[test]
    fn task_names_round_trip() {
        for t in ["task1", "task2", "setting1", "setting2", "setting3"] {
            assert_eq!(Task::parse(t).unwrap().name(), t);
        }
        assert_eq!(
            Task::parse("task1:Religion"),
            Some(Task::Task1 { category: Some("religion".into()) })
        );
    }
}
