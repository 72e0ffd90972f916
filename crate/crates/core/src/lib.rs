//! Schreier coset graphs of free groups, random subgroup laws built from them,
//! and the tools to sample, enumerate and compare those laws.

pub mod ball;
pub mod dynamics;
pub mod encoder;
pub mod error;
pub mod finite;
pub mod keyed;
pub mod measure;
pub mod oracle;
pub mod prob;
pub mod samplers;
pub mod sgr;
pub mod stats;
pub mod subgroup;
pub mod vertex;
pub mod word;

pub use ball::{ball, root_isomorphic, BallView, DEFAULT_BUDGET};
pub use error::{Error, Result};
pub use finite::FiniteSchreierGraph;
pub use oracle::{conjugate, contains, trace, Cayley, Oracle, SchreierOracle};
pub use prob::{MarkLaw, Prob};
pub use vertex::VertexId;
pub use word::{Letter, Word};
