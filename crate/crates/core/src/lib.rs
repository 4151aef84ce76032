//! Counting polynomials and Morley ranks for the distance language on
//! regular graphs of large girth.
//!
//! The crate builds finite `d`-regular graphs whose girth is large enough
//! that they look like the `d`-regular tree locally ([`treegen`]), counts
//! quantifier-free definable sets of the distance language symbolically as
//! integer polynomials in the universe size `t1` and the degree `t2`
//! ([`counting`]), reads Morley ranks off those polynomials ([`ranks`]),
//! and checks every symbolic answer against brute force ([`oracle`]).

pub mod algebra;
pub mod counting;
pub mod formula;
pub mod graph;
pub mod oracle;
pub mod poly;
pub mod ranks;
pub mod treegen;

pub use algebra::{CenterResult, DistanceConfig, HullTree, PairDistance};
pub use counting::{count_conjunction, count_formula, count_positive, partition_table, PartitionTable};
pub use formula::{Atom, Dnf, Formula, LiteralConjunction};
pub use graph::{Distance, Girth, Graph, VertexSet};
pub use poly::{LeadingDegree, Poly2};
pub use ranks::OrdinalPair;
pub use treegen::GenSpec;
