//! Two-sided synonym/antonym bags over a WordNet-format database, signed
//! argument vectors built from them, and the graph and match statistics
//! used to study contrast and concession relations.

pub mod argrep;
pub mod bagset;
pub mod corpus;
pub mod error;
pub mod lexdb;
pub mod matchstats;
pub mod morphy;
pub mod pos;
pub mod relgraph;
pub mod wndb;

pub use error::{Error, Result};
pub use pos::Pos;
