//! Seeded synthetic corpora with planted, recoverable effects.
//!
//! Every generator is a pure function of its [`SynthConfig`]. The planted
//! parameters travel with the output in a [`SynthMeta`] record.

mod debates;
mod trees;

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::SynthError;

pub use debates::gen_debates;
pub use trees::{claim_only_bound, gen_trees, tallies_with_counts, tally_for, TREE_KEYWORDS};

/// Which planted effect a configuration is tuned for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Voters favour the debater sharing their political ideology.
    Ideology,
    /// Debate outcomes follow a latent skill that also attracts voters.
    Network,
    /// Argument trees labeled by a context rule.
    Trees,
}

impl Preset {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ideology" => Some(Preset::Ideology),
            "network" => Some(Preset::Network),
            "trees" => Some(Preset::Trees),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Ideology => "ideology",
            Preset::Network => "network",
            Preset::Trees => "trees",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub preset: Preset,
    pub seed: u64,

    /// Debaters.
    pub n_users: usize,
    /// Users who only vote.
    pub n_voters: usize,
    /// Debates for the ideology layout; the network layout derives the count
    /// from `debate_counts`.
    pub n_debates: usize,
    /// Probability a voter's convincing-arguments choice goes to the debater
    /// sharing their political ideology, when exactly one does.
    pub p_match: f64,
    /// Strength of latent skill on voter choices (logit per unit of skill gap).
    pub skill_effect: f64,
    /// Extra ballots per debate per unit of combined debater skill.
    pub network_skew: f64,
    /// Share of voters who concentrate on strong debaters.
    pub hub_share: f64,
    /// Possible per-user debate counts in the network layout.
    pub debate_counts: Vec<usize>,
    pub ballots_min: usize,
    pub ballots_max: usize,
    pub n_issues: usize,
    pub turn_words: usize,
    pub max_rounds: usize,

    pub n_trees: usize,
    pub max_depth: usize,
    pub min_children: usize,
    pub max_children: usize,
    /// Number of trailing context edges inspected by the impact rule.
    pub context_k: usize,
    pub oppose_rate: f64,
    pub keyword_rate: f64,
    pub label_noise: f64,
    /// Share of claims whose tally fails the vote or agreement filter.
    pub unreliable_rate: f64,
    pub claim_words: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            preset: Preset::Ideology,
            seed: 0,
            n_users: 200,
            n_voters: 300,
            n_debates: 520,
            p_match: 0.75,
            skill_effect: 0.0,
            network_skew: 0.0,
            hub_share: 0.0,
            debate_counts: Vec::new(),
            ballots_min: 4,
            ballots_max: 8,
            n_issues: 12,
            turn_words: 30,
            max_rounds: 3,
            n_trees: 200,
            max_depth: 3,
            min_children: 2,
            max_children: 3,
            context_k: 2,
            oppose_rate: 0.35,
            keyword_rate: 0.5,
            label_noise: 0.05,
            unreliable_rate: 0.1,
            claim_words: 3,
        }
    }
}

impl SynthConfig {
    pub fn preset(preset: Preset, seed: u64) -> Self {
        let base = SynthConfig {
            preset,
            seed,
            ..SynthConfig::default()
        };
        match preset {
            Preset::Ideology | Preset::Trees => base,
            Preset::Network => SynthConfig {
                n_users: 240,
                n_voters: 300,
                p_match: 0.5,
                skill_effect: 3.0,
                network_skew: 6.0,
                hub_share: 0.15,
                debate_counts: alloc::vec![6, 9, 12],
                ballots_min: 3,
                ballots_max: 5,
                turn_words: 12,
                max_rounds: 2,
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let probs = [
            self.p_match,
            self.hub_share,
            self.oppose_rate,
            self.keyword_rate,
            self.label_noise,
            self.unreliable_rate,
        ];
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(SynthError::Infeasible("probabilities must lie in [0, 1]"));
        }
        if !(self.skill_effect.is_finite() && self.network_skew.is_finite() && self.network_skew >= 0.0) {
            return Err(SynthError::Infeasible("skill effect and skew must be finite"));
        }
        match self.preset {
            Preset::Ideology | Preset::Network => {
                if self.n_users < 2 {
                    return Err(SynthError::Infeasible("need at least two debaters"));
                }
                if self.n_voters == 0 {
                    return Err(SynthError::Infeasible("need at least one voter"));
                }
                if self.ballots_min == 0 || self.ballots_min > self.ballots_max {
                    return Err(SynthError::Infeasible("ballot range is empty"));
                }
                if self.max_rounds == 0 || self.max_rounds > crate::corpus::MAX_ROUNDS {
                    return Err(SynthError::Infeasible("rounds per debate out of range"));
                }
                if self.preset == Preset::Ideology && self.n_debates == 0 {
                    return Err(SynthError::Infeasible("need at least one debate"));
                }
                if self.preset == Preset::Network && self.debate_counts.iter().all(|&c| c == 0) {
                    return Err(SynthError::Infeasible("debate counts must be positive"));
                }
            }
            Preset::Trees => {
                if self.n_trees == 0 {
                    return Err(SynthError::Infeasible("need at least one tree"));
                }
                if self.max_depth == 0 || self.min_children == 0 || self.min_children > self.max_children {
                    return Err(SynthError::Infeasible("tree shape is empty"));
                }
                if self.context_k == 0 {
                    return Err(SynthError::Infeasible("context rule needs k >= 1"));
                }
            }
        }
        Ok(())
    }
}

/// Planted parameters, written next to generated corpora.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthMeta {
    pub generator_version: u32,
    pub config: SynthConfig,
    /// Best accuracy any claim-only predictor can reach on the tree generator.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claim_only_bound: Option<f64>,
    /// Latent debater skill, by user id, for the network layout.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub skills: Vec<(String, f64)>,
    pub rule: String,
}

pub const GENERATOR_VERSION: u32 = 1;
