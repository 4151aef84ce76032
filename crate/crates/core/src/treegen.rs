//! Finite regular graphs of prescribed girth.
//!
//! The lift `L[G]` lives on `V(G) x {0,1}^E(G)`; an edge `{u, v}` of `G`
//! connects `(u, f)` to `(v, f')` exactly when `f'` is `f` with the bit of
//! that edge flipped. Lifting keeps the degree and doubles the girth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Girth, Graph, GraphError};

/// Largest base edge count accepted by [`lift`] (2^24 labelings per vertex).
pub const LIFT_EDGE_LIMIT: usize = 24;

/// Default number of restarts for [`gen_random_regular`].
pub const DEFAULT_ATTEMPTS: usize = 10_000;

const PETERSEN: &str = include_str!("../data/petersen.txt");
const HEAWOOD: &str = include_str!("../data/heawood.txt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("lift needs 2^{edges} labelings per vertex; limit is 2^{limit}")]
    Capacity { edges: usize, limit: usize },
    #[error("degree must be at least {min}, got {degree}")]
    Degree { degree: usize, min: usize },
    #[error("n*d must be even (n = {n}, d = {d})")]
    OddDegreeSum { n: usize, d: usize },
    #[error("degree {d} needs more than {n} vertices")]
    TooFewVertices { n: usize, d: usize },
    #[error(
        "no {d}-regular graph of girth >= {min_girth} on {n} vertices found after {attempts} \
         attempts; try a larger n or a smaller girth"
    )]
    GenerationFailed { n: usize, d: usize, min_girth: usize, attempts: usize },
    #[error("unknown graph name {0:?}")]
    UnknownName(String),
    #[error("fixture {name}: expected degree {degree} and girth {girth}")]
    FixtureMismatch { name: String, degree: usize, girth: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A vertex of a lift: a base vertex plus one bit per base edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LiftVertex {
    pub base: usize,
    pub labeling: u32,
}

impl LiftVertex {
    pub fn id(self, base_edges: usize) -> usize {
        (self.base << base_edges) | self.labeling as usize
    }

    pub fn from_id(id: usize, base_edges: usize) -> Self {
        LiftVertex { base: id >> base_edges, labeling: (id & ((1 << base_edges) - 1)) as u32 }
    }
}

/// Builds `L[g]`. Base edges are indexed in sorted `(min, max)` order, and
/// lift vertex ids follow [`LiftVertex::id`].
pub fn lift(g: &Graph) -> Result<Graph, GenError> {
    let edges = g.edges();
    let m = edges.len();
    if m > LIFT_EDGE_LIMIT {
        return Err(GenError::Capacity { edges: m, limit: LIFT_EDGE_LIMIT });
    }
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.n()];
    for (idx, &(u, v)) in edges.iter().enumerate() {
        incident[u].push((v, idx));
        incident[v].push((u, idx));
    }
    let labelings = 1usize << m;
    let mut adjacency = Vec::with_capacity(g.n() * labelings);
    for inc in &incident {
        for f in 0..labelings {
            let mut list: Vec<usize> =
                inc.iter().map(|&(v, idx)| (v << m) | (f ^ (1 << idx))).collect();
            list.sort_unstable();
            adjacency.push(list);
        }
    }
    Ok(Graph::from_sorted_adjacency(adjacency))
}

/// The cycle of length `2 * cycle.len()` in `L[g]` obtained by walking the
/// base cycle twice, flipping each edge bit as it is crossed.
pub fn lifted_cycle(g: &Graph, cycle: &[usize]) -> Vec<usize> {
    let edges = g.edges();
    let m = edges.len();
    let index = |u: usize, v: usize| {
        edges.binary_search(&(u.min(v), u.max(v))).expect("cycle edge missing from base graph")
    };
    let len = cycle.len();
    let mut labeling = 0usize;
    let mut out = Vec::with_capacity(2 * len);
    for step in 0..2 * len {
        let u = cycle[step % len];
        out.push((u << m) | labeling);
        labeling ^= 1 << index(u, cycle[(step + 1) % len]);
    }
    out
}

pub fn complete_graph(n: usize) -> Graph {
    let adjacency = (0..n).map(|u| (0..n).filter(|&v| v != u).collect()).collect();
    Graph::from_sorted_adjacency(adjacency)
}

pub fn path_graph(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).expect("path edges are valid")
}

pub fn cycle_graph(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).expect("cycle edges are valid")
}

/// The ball of radius `depth` around a vertex of the infinite `d`-regular
/// tree. Vertex 0 is the centre; ids increase with depth.
pub fn regular_tree_ball(d: usize, depth: usize) -> Graph {
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    let mut next_id = 1;
    for level in 0..depth {
        let mut next = Vec::new();
        for &u in &frontier {
            let children = if level == 0 { d } else { d.saturating_sub(1) };
            for _ in 0..children {
                edges.push((u, next_id));
                next.push(next_id);
                next_id += 1;
            }
        }
        frontier = next;
    }
    Graph::from_edges(next_id, &edges).expect("tree edges are valid")
}

/// The `lifts`-fold lift of `K_{d+1}`.
pub fn gen_lifted_complete(d: usize, lifts: usize) -> Result<Graph, GenError> {
    if d < 2 {
        return Err(GenError::Degree { degree: d, min: 2 });
    }
    let mut g = complete_graph(d + 1);
    for _ in 0..lifts {
        g = lift(&g)?;
    }
    Ok(g)
}

/// Smallest vertex count of a `d`-regular graph with girth at least `g`.
fn moore_bound(d: usize, g: usize) -> usize {
    if g <= 2 {
        return d + 1;
    }
    let r = g / 2;
    let geometric = (0..r).fold(0usize, |acc, i| acc.saturating_add((d - 1).saturating_pow(i as u32)));
    if g % 2 == 1 {
        1usize.saturating_add(d.saturating_mul(geometric))
    } else {
        2usize.saturating_mul(geometric)
    }
}

pub fn gen_random_regular(n: usize, d: usize, min_girth: usize, seed: u64) -> Result<Graph, GenError> {
    gen_random_regular_with_budget(n, d, min_girth, seed, DEFAULT_ATTEMPTS)
}

/// Random `d`-regular graph on `n` vertices with girth at least `min_girth`.
///
/// Stubs are paired one at a time; a pairing is accepted only if it keeps the
/// graph simple and closes no cycle shorter than `min_girth`. A run that gets
/// stuck is discarded and restarted, up to `max_attempts` runs.
pub fn gen_random_regular_with_budget(
    n: usize,
    d: usize,
    min_girth: usize,
    seed: u64,
    max_attempts: usize,
) -> Result<Graph, GenError> {
    if n * d % 2 == 1 {
        return Err(GenError::OddDegreeSum { n, d });
    }
    if d >= n {
        return Err(GenError::TooFewVertices { n, d });
    }
    let failed = GenError::GenerationFailed { n, d, min_girth, attempts: max_attempts };
    if n < moore_bound(d, min_girth) {
        return Err(failed);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairing = Pairing::new(n, d, min_girth);
    for _ in 0..max_attempts {
        if let Some(mut adjacency) = pairing.attempt(&mut rng) {
            for list in &mut adjacency {
                list.sort_unstable();
            }
            return Ok(Graph::from_sorted_adjacency(adjacency));
        }
    }
    Err(failed)
}

const RANDOM_TRIES: usize = 64;

struct Pairing {
    n: usize,
    d: usize,
    /// A new edge `{u, v}` is rejected when `dist(u, v) <= reject_within`.
    reject_within: usize,
    mark: Vec<u32>,
    seen: Vec<u32>,
    stamp: u32,
    queue: Vec<(usize, usize)>,
}

impl Pairing {
    fn new(n: usize, d: usize, min_girth: usize) -> Self {
        Pairing {
            n,
            d,
            reject_within: min_girth.saturating_sub(2).max(1),
            mark: vec![0; n],
            seen: vec![0; n],
            stamp: 0,
            queue: Vec::new(),
        }
    }

    fn attempt(&mut self, rng: &mut ChaCha8Rng) -> Option<Vec<Vec<usize>>> {
        let mut adjacency = vec![Vec::with_capacity(self.d); self.n];
        let mut stubs: Vec<usize> = (0..self.n).flat_map(|v| std::iter::repeat_n(v, self.d)).collect();
        while !stubs.is_empty() {
            let u = stubs.swap_remove(rng.random_range(0..stubs.len()));
            let mut partner = None;
            for _ in 0..RANDOM_TRIES.min(stubs.len()) {
                let j = rng.random_range(0..stubs.len());
                if self.acceptable(&adjacency, u, stubs[j]) {
                    partner = Some(j);
                    break;
                }
            }
            if partner.is_none() {
                let valid: Vec<usize> =
                    (0..stubs.len()).filter(|&j| self.acceptable(&adjacency, u, stubs[j])).collect();
                if valid.is_empty() {
                    return None;
                }
                partner = Some(valid[rng.random_range(0..valid.len())]);
            }
            let v = stubs.swap_remove(partner.unwrap());
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        Some(adjacency)
    }

    /// Whether `u` and `v` are more than `reject_within` apart, checked with
    /// two half-radius balls.
    fn acceptable(&mut self, adjacency: &[Vec<usize>], u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        let radius = self.reject_within;
        let from_u = radius.div_ceil(2);
        let from_v = radius - from_u;
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.fill(0);
            self.seen.fill(0);
            self.stamp = 1;
        }
        let stamp = self.stamp;

        self.queue.clear();
        self.queue.push((u, 0));
        self.mark[u] = stamp;
        let mut head = 0;
        while head < self.queue.len() {
            let (x, dx) = self.queue[head];
            head += 1;
            if dx == from_u {
                continue;
            }
            for &w in &adjacency[x] {
                if self.mark[w] != stamp {
                    self.mark[w] = stamp;
                    self.queue.push((w, dx + 1));
                }
            }
        }

        self.queue.clear();
        self.queue.push((v, 0));
        self.seen[v] = stamp;
        let mut head = 0;
        while head < self.queue.len() {
            let (x, dx) = self.queue[head];
            head += 1;
            if self.mark[x] == stamp {
                return false;
            }
            if dx == from_v {
                continue;
            }
            for &w in &adjacency[x] {
                if self.seen[w] != stamp {
                    self.seen[w] = stamp;
                    self.queue.push((w, dx + 1));
                }
            }
        }
        true
    }
}

/// Loads a built-in graph: `petersen`, `heawood`, `k<N>`, `path_<N>` or
/// `cycle_<N>`.
pub fn named_graph(name: &str) -> Result<Graph, GenError> {
    let unknown = || GenError::UnknownName(name.to_string());
    let number = |s: &str| s.parse::<usize>().map_err(|_| unknown());
    match name {
        "petersen" => fixture(name, PETERSEN, 3, 5),
        "heawood" => fixture(name, HEAWOOD, 3, 6),
        _ => {
            if let Some(rest) = name.strip_prefix("path_") {
                Ok(path_graph(number(rest)?))
            } else if let Some(rest) = name.strip_prefix("cycle_") {
                let n = number(rest)?;
                if n < 3 {
                    return Err(unknown());
                }
                Ok(cycle_graph(n))
            } else if let Some(rest) = name.strip_prefix('k') {
                Ok(complete_graph(number(rest)?))
            } else {
                Err(unknown())
            }
        }
    }
}

fn fixture(name: &str, text: &str, degree: usize, girth: usize) -> Result<Graph, GenError> {
    let g = Graph::parse(text)?;
    if g.regular_degree() != Some(degree) || g.girth(None) != Girth::Finite(girth) {
        return Err(GenError::FixtureMismatch { name: name.to_string(), degree, girth });
    }
    Ok(g)
}

/// A graph recipe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenSpec {
    LiftedComplete { degree: usize, lifts: usize },
    RandomRegular { n: usize, degree: usize, min_girth: usize, seed: u64 },
    Named(String),
}

impl GenSpec {
    pub fn generate(&self) -> Result<Graph, GenError> {
        match self {
            GenSpec::LiftedComplete { degree, lifts } => gen_lifted_complete(*degree, *lifts),
            GenSpec::RandomRegular { n, degree, min_girth, seed } => {
                if *degree < 2 {
                    return Err(GenError::Degree { degree: *degree, min: 2 });
                }
                gen_random_regular(*n, *degree, *min_girth, *seed)
            }
            GenSpec::Named(name) => named_graph(name),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_of_k4() {
        let g = lift(&complete_graph(4)).unwrap();
        assert_eq!(g.n(), 256);
        assert_eq!(g.regular_degree(), Some(3));
        assert_eq!(g.girth(Some(6)), Girth::Finite(6));
    }

    #[test]
    fn lift_of_k3() {
        let g = lift(&complete_graph(3)).unwrap();
        assert_eq!(g.n(), 24);
        assert_eq!(g.regular_degree(), Some(2));
        assert_eq!(g.girth(None), Girth::Finite(6));
    }

    #[test]
    fn lift_of_single_edge_stays_acyclic() {
        let g = lift(&complete_graph(2)).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.regular_degree(), Some(1));
        assert_eq!(g.girth(None), Girth::Infinite);
    }

    #[test]
    fn lift_vertex_ids_round_trip() {
        let v = LiftVertex { base: 3, labeling: 0b101101 };
        assert_eq!(LiftVertex::from_id(v.id(6), 6), v);
    }

    #[test]
    fn lift_capacity_guard() {
        let big = complete_graph(8); // 28 edges
        assert_eq!(lift(&big), Err(GenError::Capacity { edges: 28, limit: LIFT_EDGE_LIMIT }));
    }

    #[test]
    fn lifted_complete_examples() {
        assert_eq!(gen_lifted_complete(3, 0).unwrap(), complete_graph(4));
        let g = gen_lifted_complete(3, 1).unwrap();
        assert_eq!((g.n(), g.regular_degree()), (256, Some(3)));
        assert_eq!(gen_lifted_complete(3, 2), Err(GenError::Capacity { edges: 384, limit: 24 }));
        assert!(matches!(gen_lifted_complete(1, 1), Err(GenError::Degree { .. })));
    }

    #[test]
    fn lifted_cycle_is_a_cycle() {
        let base = named_graph("petersen").unwrap();
        let lifted = lift(&base).unwrap();
        let cycle = base.shortest_cycle().unwrap();
        let walk = lifted_cycle(&base, &cycle);
        assert_eq!(walk.len(), 10);
        let distinct: std::collections::BTreeSet<_> = walk.iter().collect();
        assert_eq!(distinct.len(), 10);
        for i in 0..walk.len() {
            assert!(lifted.has_edge(walk[i], walk[(i + 1) % walk.len()]));
        }
    }

    #[test]
    fn random_regular_small() {
        let g = gen_random_regular(50, 3, 5, 7).unwrap();
        assert_eq!(g.n(), 50);
        assert_eq!(g.regular_degree(), Some(3));
        assert!(g.girth(Some(4)).exceeds(4));
    }

    #[test]
    fn random_regular_is_deterministic() {
        let a = gen_random_regular(60, 4, 4, 11).unwrap();
        let b = gen_random_regular(60, 4, 4, 11).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        let c = gen_random_regular(60, 4, 4, 12).unwrap();
        assert_ne!(a.to_text(), c.to_text());
    }

    #[test]
    fn random_regular_errors() {
        assert_eq!(gen_random_regular(5, 3, 3, 1), Err(GenError::OddDegreeSum { n: 5, d: 3 }));
        assert!(matches!(gen_random_regular(10, 3, 9, 1), Err(GenError::GenerationFailed { .. })));
        assert!(matches!(gen_random_regular(4, 4, 3, 1), Err(GenError::TooFewVertices { .. })));
    }

    #[test]
    fn random_regular_budget_exhaustion_without_moore_shortcut() {
        // 16 passes the Moore check for girth 6, so this exercises the
        // restart loop itself.
        for seed in 0..20 {
            match gen_random_regular_with_budget(16, 3, 6, seed, 1) {
                Ok(g) => assert!(g.girth(None).exceeds(5)),
                Err(GenError::GenerationFailed { attempts: 1, .. }) => {}
                Err(other) => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn moore_bounds() {
        assert_eq!(moore_bound(3, 5), 10);
        assert_eq!(moore_bound(3, 6), 14);
        assert_eq!(moore_bound(3, 9), 46);
        assert_eq!(moore_bound(4, 10), 242);
    }

    #[test]
    fn named_fixtures() {
        let k4 = named_graph("k4").unwrap();
        assert_eq!((k4.regular_degree(), k4.girth(None)), (Some(3), Girth::Finite(3)));
        let p = named_graph("petersen").unwrap();
        assert_eq!((p.n(), p.girth(None)), (10, Girth::Finite(5)));
        let h = named_graph("heawood").unwrap();
        assert_eq!((h.n(), h.girth(None)), (14, Girth::Finite(6)));
        assert_eq!(named_graph("path_4").unwrap().edge_count(), 3);
        assert_eq!(named_graph("cycle_7").unwrap().girth(None), Girth::Finite(7));
        assert!(matches!(named_graph("dodecahedron"), Err(GenError::UnknownName(_))));
        assert!(matches!(named_graph("cycle_x"), Err(GenError::UnknownName(_))));
    }

    #[test]
    fn tree_ball_shape() {
        let t = regular_tree_ball(3, 3);
        assert_eq!(t.n(), 1 + 3 + 6 + 12);
        assert_eq!(t.girth(None), Girth::Infinite);
        assert_eq!(t.degree(0), 3);
        assert_eq!(t.degree(1), 3);
        assert_eq!(t.degree(t.n() - 1), 1);
    }
}
