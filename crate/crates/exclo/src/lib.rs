//! Exact tooling for exclusivity-graph analysis of cycle-scenario boxes.
//!
//! The crate builds the exclusivity graphs of n-cycle PR boxes, composes
//! independent copies through OR / multicolor graph products, decides
//! whether the composed behaviour violates the exclusivity principle by
//! exact clique search over dyadic rational weights, and checks the
//! Ramsey-style edge-coloring arguments that rule violations out.
//!
//! Everything correctness-critical runs in exact rational arithmetic;
//! searches are budgeted and abort with an explicit error rather than
//! returning a wrong answer.

pub mod bits;
pub mod cert;
pub mod clique;
pub mod exgraph;
pub mod graph;
pub mod iso;
pub mod product;
pub mod ramsey;
pub mod rat;
pub mod scenario;
pub mod sym;

pub use graph::{Graph, OddCycleWitness, WeightedGraph};
pub use rat::Rat;
