//! Core algorithms for modeling persuasion in online debates.
//!
//! The crate is `no_std` and only needs an allocator. File formats, the
//! command line and report rendering live in the `kairos` crate.

#![no_std]

extern crate alloc;
#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod corpus;
pub mod error;
pub mod eval;
pub mod graph;
pub mod impact;
pub mod labeling;
pub mod learn;
pub mod synth;
pub mod textfeat;
pub mod util;

pub use error::{
    CorpusError, EvalError, GraphError, ImpactError, LabelError, LearnError, SynthError, TextError,
};
