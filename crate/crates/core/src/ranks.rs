//! Ordinals below ω², Morley ranks read off counting polynomials, ordinal
//! distances and ranks of tuples, and the path criterion for independence.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::graph::{Distance, Graph, GraphError, VertexSet};
use crate::poly::{Poly2, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RankError {
    #[error("the empty set has no rank")]
    EmptySet,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl From<PolyError> for RankError {
    fn from(_: PolyError) -> Self {
        RankError::EmptySet
    }
}

/// `ω·m + n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct OrdinalPair {
    pub m: u64,
    pub n: u64,
}

impl OrdinalPair {
    pub const ZERO: OrdinalPair = OrdinalPair { m: 0, n: 0 };
    pub const OMEGA: OrdinalPair = OrdinalPair { m: 1, n: 0 };

    pub fn new(m: u64, n: u64) -> Self {
        OrdinalPair { m, n }
    }

    pub fn finite(n: u64) -> Self {
        OrdinalPair { m: 0, n }
    }

    /// Natural (Hessenberg) sum: componentwise on `ω`-coefficients.
    pub fn hessenberg(self, other: OrdinalPair) -> OrdinalPair {
        OrdinalPair { m: self.m + other.m, n: self.n + other.n }
    }
}

impl Ord for OrdinalPair {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.m, self.n).cmp(&(other.m, other.n))
    }
}

impl PartialOrd for OrdinalPair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OrdinalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 0 {
            write!(f, "{}", self.n)
        } else {
            write!(f, "w*{}+{}", self.m, self.n)
        }
    }
}

/// The rank of a nonempty definable set from its counting polynomial: the
/// leading degree `(m, n)` read as `ω·m + n`.
pub fn rank_from_poly(p: &Poly2) -> Result<OrdinalPair, RankError> {
    let lead = p.leading()?;
    Ok(OrdinalPair::new(u64::from(lead.t1), u64::from(lead.t2)))
}

/// Distance from `b` to the convex closure of `a`, or `ω` when `b` lies in
/// a different component (or `a` is empty).
pub fn ordinal_distance(g: &Graph, b: usize, a: &VertexSet) -> Result<OrdinalPair, RankError> {
    let hull = g.convex_closure(a)?;
    Ok(match g.dist_to_set(b, &hull) {
        Distance::Finite(d) => OrdinalPair::finite(d as u64),
        Distance::Infinite => OrdinalPair::OMEGA,
    })
}

/// Hessenberg sum of the ordinal distances of each `b_i` to `A` together
/// with the earlier entries of the tuple.
pub fn tuple_rank(g: &Graph, tuple: &[usize], a: &VertexSet) -> Result<OrdinalPair, RankError> {
    let mut base = a.clone();
    let mut total = OrdinalPair::ZERO;
    for &b in tuple {
        total = total.hessenberg(ordinal_distance(g, b, &base)?);
        base.insert(b);
    }
    Ok(total)
}

/// After closing `A`, `B`, `C` under paths, every finite-distance pair
/// `a ∈ A`, `b ∈ B` has its connecting path pass through `C`.
pub fn is_independent(g: &Graph, a: &VertexSet, b: &VertexSet, c: &VertexSet) -> Result<bool, RankError> {
    let a = g.convex_closure(a)?;
    let b = g.convex_closure(b)?;
    let c = g.convex_closure(c)?;
    for &x in &a {
        for &y in &b {
            match g.unique_path(x, y) {
                Ok(path) => {
                    if !path.iter().any(|v| c.contains(v)) {
                        return Ok(false);
                    }
                }
                Err(GraphError::NoPath(..)) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treegen::path_graph;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn hessenberg_examples() {
        assert_eq!(OrdinalPair::new(1, 2).hessenberg(OrdinalPair::new(0, 3)), OrdinalPair::new(1, 5));
        assert_eq!(OrdinalPair::ZERO.hessenberg(OrdinalPair::new(4, 1)), OrdinalPair::new(4, 1));
        assert_eq!(OrdinalPair::new(2, 0).hessenberg(OrdinalPair::new(1, 1)), OrdinalPair::new(3, 1));
    }

    #[test]
    fn ordering_and_rendering() {
        assert!(OrdinalPair::finite(100) < OrdinalPair::OMEGA);
        assert!(OrdinalPair::new(1, 0) < OrdinalPair::new(1, 1));
        assert_eq!(OrdinalPair::new(1, 2).to_string(), "w*1+2");
        assert_eq!(OrdinalPair::finite(3).to_string(), "3");
        assert_eq!(OrdinalPair::OMEGA.to_string(), "w*1+0");
    }

    #[test]
    fn rank_from_poly_examples() {
        assert_eq!(rank_from_poly(&"t2*(t2-1)^2".parse().unwrap()).unwrap(), OrdinalPair::finite(3));
        assert_eq!(rank_from_poly(&"t1 - t2".parse().unwrap()).unwrap(), OrdinalPair::OMEGA);
        assert_eq!(rank_from_poly(&Poly2::one()).unwrap(), OrdinalPair::ZERO);
        assert_eq!(rank_from_poly(&Poly2::zero()), Err(RankError::EmptySet));
    }

    #[test]
    fn distance_examples() {
        // two trees: path 0-1-2-3-4 and path 5-6
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (5, 6)]).unwrap();
        let a = set(&[0, 2]);
        assert_eq!(ordinal_distance(&g, 1, &a).unwrap(), OrdinalPair::ZERO);
        assert_eq!(ordinal_distance(&g, 4, &a).unwrap(), OrdinalPair::finite(2));
        assert_eq!(ordinal_distance(&g, 6, &a).unwrap(), OrdinalPair::OMEGA);
        assert_eq!(ordinal_distance(&g, 6, &VertexSet::new()).unwrap(), OrdinalPair::OMEGA);
    }

    #[test]
    fn tuple_rank_examples() {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (5, 6)]).unwrap();
        let a = set(&[0]);
        assert_eq!(tuple_rank(&g, &[2, 5], &a).unwrap(), OrdinalPair::new(1, 2));
        assert_eq!(tuple_rank(&g, &[5, 2], &a).unwrap(), OrdinalPair::new(1, 2));
        assert_eq!(tuple_rank(&g, &[1, 2], &set(&[0, 3])).unwrap(), OrdinalPair::ZERO);
    }

    #[test]
    fn independence_examples() {
        let g = path_graph(3);
        assert!(is_independent(&g, &set(&[0]), &set(&[2]), &set(&[1])).unwrap());
        let edge = path_graph(2);
        assert!(!is_independent(&edge, &set(&[0]), &set(&[1]), &VertexSet::new()).unwrap());
        let apart = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(is_independent(&apart, &set(&[0]), &set(&[3]), &VertexSet::new()).unwrap());
    }
}
