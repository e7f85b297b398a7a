//! Finite automata networks `f : [q]^n -> [q]^n`: update modes, the
//! semigroups they generate, universal simulators over larger alphabets,
//! instruction decompositions, Hamming-graph puzzles and interaction graphs.

pub mod digraph;
pub mod error;
pub mod graphs;
pub mod instructions;
pub mod network;
pub mod puzzle;
pub mod semigroup;
pub mod text;
pub mod universal;

pub use digraph::InteractionDigraph;
pub use error::{Error, Result};
pub use network::{Configuration, CoordSet, Network, Params, RankClass, UpdateWord};
