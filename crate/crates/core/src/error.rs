use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorpusError {
    #[error("duplicate {kind} identifier `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("tree `{tree}`: claim `{claim}` has unknown parent `{parent}`")]
    UnknownParent {
        tree: String,
        claim: String,
        parent: String,
    },
    #[error("tree `{tree}`: cycle through claim `{claim}`")]
    Cycle { tree: String, claim: String },
    #[error("tree `{tree}`: expected exactly one parentless claim, found {count}")]
    RootCount { tree: String, count: usize },
    #[error("tree `{tree}`: claim `{claim}` must carry an edge label iff it has a parent")]
    EdgeLabel { tree: String, claim: String },
    #[error("tree `{tree}`: unknown claim `{claim}`")]
    UnknownClaim { tree: String, claim: String },
    #[error("debate `{debate}`: {count} rounds, expected 1..=5")]
    RoundCount { debate: String, count: usize },
    #[error("debate `{debate}`: round indices must strictly increase")]
    RoundOrder { debate: String },
    #[error("debate `{debate}`: both sides argued by the same user")]
    SameDebaters { debate: String },
    #[error("user `{user}`: stance on `{issue}` which is not in the issue catalog")]
    UnknownIssue { user: String, issue: String },
    #[error("user `{user}` has no stance on `{issue}`")]
    MissingStance { user: String, issue: String },
    #[error("user `{user}` declines to state a stance on `{issue}`")]
    NotSaying { user: String, issue: String },
    #[error("user `{user}` does not declare {name}")]
    UndeclaredTrait { user: String, name: &'static str },
    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabelError {
    #[error("voter `{voter}` did not change stance")]
    UnchangedVoter { voter: String },
    #[error("user `{user}` never argued a debate")]
    NoDebates { user: String },
    #[error("need at least 3 debates to split a lifetime, got {count}")]
    TooFewDebates { count: usize },
    #[error("tally has no votes")]
    EmptyTally,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TextError {
    #[error("tf-idf model used before fitting")]
    NotFitted,
    #[error("cannot fit tf-idf on an empty document set")]
    NoDocuments,
    #[error("n-gram order must be 1..=3, got {0}")]
    NgramOrder(usize),
    #[error("readability needs at least one word")]
    NoWords,
    #[error("debate `{debate}`: side {side} never speaks")]
    SilentSide { debate: String, side: &'static str },
    #[error("sidecar has {sidecar} tags for {tokens} tokens")]
    SidecarLength { sidecar: usize, tokens: usize },
    #[error("sidecar token `{found}` at position {position} does not match `{expected}`")]
    SidecarToken {
        position: usize,
        expected: String,
        found: String,
    },
    #[error("sidecar line {0} needs a POS column")]
    SidecarLine(usize),
    #[error("tf-idf vocabulary has {vocab} terms but {idf} idf weights")]
    ModelParts { vocab: usize, idf: usize },
    #[error("malformed lexicon line {line}: {reason}")]
    Lexicon { line: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("graph is empty")]
    Empty,
    #[error("degree centrality needs at least 2 nodes, got {0}")]
    TooSmall(usize),
    #[error("{algorithm} did not converge in {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        algorithm: &'static str,
        iterations: usize,
        residual: f64,
    },
    #[error("unknown node `{0}`")]
    UnknownNode(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LearnError {
    #[error("training data has a single class")]
    SingleClass,
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("row {row} has {found} features, schema has {expected}")]
    Shape {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("label {label} out of range for {classes} classes")]
    Label { label: usize, classes: usize },
    #[error("class {class} has {count} rows, stratification needs {needed}")]
    Stratification {
        class: usize,
        count: usize,
        needed: usize,
    },
    #[error("invalid parameter: {0}")]
    Parameter(&'static str),
    #[error("requested {requested} components from {dim}-dimensional data")]
    Components { requested: usize, dim: usize },
    #[error("loss became non-finite at epoch {epoch} (last finite loss {last:e})")]
    Diverged { epoch: usize, last: f64 },
    #[error("schema mismatch: {0}")]
    Schema(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImpactError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Text(#[from] TextError),
    #[error("context is empty")]
    EmptyContext,
    #[error("invalid model specification: {0}")]
    Spec(&'static str),
    #[error("class {0} missing from the training split")]
    MissingClass(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("empty input")]
    Empty,
    #[error("length mismatch: {0} vs {1}")]
    Length(usize, usize),
    #[error("dataset has {0} rows, need at least {1}")]
    TooFewRows(usize, usize),
    #[error("both samples have zero variance")]
    ZeroVariance,
    #[error("each sample needs at least 2 values")]
    SampleSize,
    #[error("feature `{0}` is constant")]
    ConstantFeature(String),
    #[error("unknown feature group `{0}`")]
    UnknownGroup(String),
    #[error("feature groups overlap on `{0}`")]
    OverlappingGroups(String),
    #[error("class {class} has {count} rows, need at least {needed}")]
    ClassTooSmall {
        class: usize,
        count: usize,
        needed: usize,
    },
    #[error("unknown debate or user `{0}`")]
    UnknownId(String),
    #[error("feature group `{group}` does not apply to {task}")]
    GroupNotApplicable { group: &'static str, task: &'static str },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("infeasible configuration: {0}")]
    Infeasible(&'static str),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}
