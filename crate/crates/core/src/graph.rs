//! Finite simple graphs with distance, path and hull primitives.
//!
//! Vertices are dense ids `0..n`. Adjacency lists are kept sorted and
//! deduplicated, so a [`Graph`] is always irreflexive and symmetric once
//! constructed.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// A set of vertex ids.
pub type VertexSet = BTreeSet<usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("no path between {0} and {1}")]
    NoPath(usize, usize),
    #[error("shortest path between {0} and {1} is not unique (cycle within radius)")]
    LocalCycle(usize, usize),
    #[error("vertex {0} is not in the convex closure")]
    OutsideHull(usize),
}

/// Hop distance, with `Infinite` ordered above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

/// Result of a girth computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Girth {
    Finite(usize),
    /// The graph is acyclic.
    Infinite,
    /// No cycle of length at most the given cutoff exists.
    AboveCutoff(usize),
}

impl Girth {
    /// True when the girth is known to be strictly greater than `bound`.
    pub fn exceeds(self, bound: usize) -> bool {
        match self {
            Girth::Finite(g) => g > bound,
            Girth::Infinite => true,
            Girth::AboveCutoff(c) => c >= bound,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("inf"),
            Girth::AboveCutoff(c) => write!(f, "> {c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges are ignored.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::OutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adjacency })
    }

    /// Wraps adjacency lists that already satisfy the graph invariants.
    pub(crate) fn from_sorted_adjacency(adjacency: Vec<Vec<usize>>) -> Self {
        debug_assert!(adjacency.iter().enumerate().all(|(u, list)| {
            list.windows(2).all(|w| w[0] < w[1])
                && list.iter().all(|&v| v != u && adjacency[v].binary_search(&u).is_ok())
        }));
        Graph { adjacency }
    }

    pub fn empty(n: usize) -> Self {
        Graph { adjacency: vec![Vec::new(); n] }
    }

    /// Parses the text graph format: a header `n m`, then `m` lines `u v`.
    /// Lines starting with `#` and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) = lines.next().ok_or(GraphError::Format {
            line: 1,
            msg: "missing header \"n m\"".into(),
        })?;
        let [n, m] = parse_pair(header_line, header, "header \"n m\"")?;

        let mut adjacency = vec![Vec::new(); n];
        let mut seen = 0;
        for (line, body) in lines {
            if seen == m {
                return Err(GraphError::Format { line, msg: format!("more than {m} edge lines") });
            }
            let [u, v] = parse_pair(line, body, "edge \"u v\"")?;
            if u >= n || v >= n {
                return Err(GraphError::Format {
                    line,
                    msg: format!("vertex {} out of range (n = {n})", u.max(v)),
                });
            }
            if u == v {
                return Err(GraphError::Format { line, msg: format!("self-loop at vertex {u}") });
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            seen += 1;
        }
        if seen < m {
            return Err(GraphError::Format {
                line: text.lines().count(),
                msg: format!("expected {m} edges, found {seen}"),
            });
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adjacency })
    }

    /// Renders the graph in the text format with edges sorted lexicographically.
    pub fn to_text(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.n(), edges.len());
        for (u, v) in edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adjacency.iter().enumerate() {
            edges.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        edges
    }

    /// `Some(d)` when every vertex has degree exactly `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adjacency.first().map_or(0, Vec::len);
        self.adjacency.iter().all(|l| l.len() == d).then_some(d)
    }

    /// Applies a vertex permutation: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut adjacency = vec![Vec::new(); self.n()];
        for (u, list) in self.adjacency.iter().enumerate() {
            adjacency[perm[u]] = list.iter().map(|&v| perm[v]).collect();
            adjacency[perm[u]].sort_unstable();
        }
        Graph { adjacency }
    }

    /// Length of the shortest cycle.
    ///
    /// With a cutoff, BFS from each root stops at depth `cutoff / 2 + 1` and
    /// only cycles of length at most `cutoff` are reported.
    pub fn girth(&self, cutoff: Option<usize>) -> Girth {
        let n = self.n();
        // a cycle of length L is seen from its own vertices at depth (L - 1) / 2
        let depth_limit = cutoff.map_or(usize::MAX, |c| c.saturating_sub(1) / 2 + 1);
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut touched = Vec::new();
        let mut queue = VecDeque::new();

        for root in 0..n {
            dist[root] = 0;
            touched.push(root);
            queue.push_back(root);
            'bfs: while let Some(u) = queue.pop_front() {
                let du = dist[u];
                if 2 * du + 1 >= best || du >= depth_limit {
                    break;
                }
                for &w in &self.adjacency[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = du + 1;
                        parent[w] = u;
                        touched.push(w);
                        queue.push_back(w);
                    } else if parent[u] != w {
                        best = best.min(du + dist[w] + 1);
                        if 2 * du + 1 >= best {
                            break 'bfs;
                        }
                    }
                }
            }
            queue.clear();
            for v in touched.drain(..) {
                dist[v] = usize::MAX;
                parent[v] = usize::MAX;
            }
        }

        match cutoff {
            Some(c) if best > c => Girth::AboveCutoff(c),
            _ if best == usize::MAX => Girth::Infinite,
            _ => Girth::Finite(best),
        }
    }

    /// A shortest cycle as a closed vertex sequence (first vertex not repeated).
    /// Intended for small graphs.
    pub fn shortest_cycle(&self) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        for root in 0..self.n() {
            let (dist, parent) = self.bfs_tree(root);
            for u in 0..self.n() {
                let Some(du) = dist[u] else { continue };
                for &w in &self.adjacency[u] {
                    let Some(dw) = dist[w] else { continue };
                    if parent[u] == Some(w) || parent[w] == Some(u) || w < u && dw == du {
                        continue;
                    }
                    let len = du + dw + 1;
                    if best.as_ref().is_some_and(|b| b.len() <= len) {
                        continue;
                    }
                    let mut left = walk_up(&parent, u);
                    let right = walk_up(&parent, w);
                    left.reverse();
                    // left: root..u, right: w..root
                    left.extend(right.into_iter().take(dw));
                    let distinct: VertexSet = left.iter().copied().collect();
                    if distinct.len() == left.len() && left.len() == len {
                        best = Some(left);
                    }
                }
            }
        }
        best
    }

    fn bfs_tree(&self, root: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
        let mut dist = vec![None; self.n()];
        let mut parent = vec![None; self.n()];
        dist[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    parent[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        (dist, parent)
    }

    /// BFS distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        self.bfs_tree(source).0
    }

    /// Vertices within `radius` of any source, with their distance to the
    /// nearest source, in BFS order.
    pub fn ball(&self, sources: &[usize], radius: usize) -> Vec<(usize, usize)> {
        let mut seen = VertexSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for &s in sources {
            if seen.insert(s) {
                order.push((s, 0));
                queue.push_back((s, 0));
            }
        }
        while let Some((u, d)) = queue.pop_front() {
            if d == radius {
                continue;
            }
            for &w in &self.adjacency[u] {
                if seen.insert(w) {
                    order.push((w, d + 1));
                    queue.push_back((w, d + 1));
                }
            }
        }
        order
    }

    pub fn dist(&self, u: usize, v: usize) -> Distance {
        if u == v {
            return Distance::Finite(0);
        }
        let mut dist = vec![usize::MAX; self.n()];
        dist[u] = 0;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &w in &self.adjacency[x] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[x] + 1;
                    if w == v {
                        return Distance::Finite(dist[w]);
                    }
                    queue.push_back(w);
                }
            }
        }
        Distance::Infinite
    }

    /// Distance from `v` to the nearest vertex of `set`.
    pub fn dist_to_set(&self, v: usize, set: &VertexSet) -> Distance {
        if set.is_empty() {
            return Distance::Infinite;
        }
        let sources: Vec<usize> = set.iter().copied().collect();
        let mut dist = vec![usize::MAX; self.n()];
        let mut queue = VecDeque::new();
        for &s in &sources {
            dist[s] = 0;
            queue.push_back(s);
        }
        while let Some(x) = queue.pop_front() {
            if x == v {
                return Distance::Finite(dist[x]);
            }
            for &w in &self.adjacency[x] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[x] + 1;
                    queue.push_back(w);
                }
            }
        }
        Distance::Infinite
    }

    /// The vertex sequence of the shortest path from `u` to `v`, checking
    /// that it is the only shortest path.
    pub fn unique_path(&self, u: usize, v: usize) -> Result<Vec<usize>, GraphError> {
        if u == v {
            return Ok(vec![u]);
        }
        let n = self.n();
        let mut dist = vec![usize::MAX; n];
        let mut paths = vec![0u8; n];
        let mut parent = vec![usize::MAX; n];
        dist[u] = 0;
        paths[u] = 1;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if dist[x] >= dist[v] {
                break;
            }
            for &w in &self.adjacency[x] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[x] + 1;
                    parent[w] = x;
                    paths[w] = paths[x];
                    queue.push_back(w);
                } else if dist[w] == dist[x] + 1 {
                    // saturating count of shortest paths, capped at 2
                    paths[w] = (paths[w] + paths[x]).min(2);
                }
            }
        }
        if dist[v] == usize::MAX {
            return Err(GraphError::NoPath(u, v));
        }
        if paths[v] > 1 {
            return Err(GraphError::LocalCycle(u, v));
        }
        let mut path = vec![v];
        let mut x = v;
        while x != u {
            x = parent[x];
            path.push(x);
        }
        path.reverse();
        Ok(path)
    }

    /// `A` together with every vertex on the paths between finite-distance
    /// pairs of `A`.
    pub fn convex_closure(&self, set: &VertexSet) -> Result<VertexSet, GraphError> {
        let members: Vec<usize> = set.iter().copied().collect();
        let mut hull = set.clone();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                match self.unique_path(a, b) {
                    Ok(path) => hull.extend(path),
                    Err(GraphError::NoPath(..)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(hull)
    }

    /// Number of neighbours of `c` inside the convex closure of `set`.
    pub fn hull_degree(&self, set: &VertexSet, c: usize) -> Result<usize, GraphError> {
        let hull = self.convex_closure(set)?;
        if !hull.contains(&c) {
            return Err(GraphError::OutsideHull(c));
        }
        Ok(self.adjacency[c].iter().filter(|v| hull.contains(v)).count())
    }

    /// All vertices at finite distance from `set`.
    pub fn connected_closure(&self, set: &VertexSet) -> VertexSet {
        let sources: Vec<usize> = set.iter().copied().collect();
        self.ball(&sources, usize::MAX).into_iter().map(|(v, _)| v).collect()
    }
}

fn walk_up(parent: &[Option<usize>], mut v: usize) -> Vec<usize> {
    let mut out = vec![v];
    while let Some(p) = parent[v] {
        out.push(p);
        v = p;
    }
    out
}

fn parse_pair(line: usize, body: &str, what: &str) -> Result<[usize; 2], GraphError> {
    let fields: Vec<&str> = body.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(GraphError::Format { line, msg: format!("expected {what}") });
    }
    let mut out = [0; 2];
    for (slot, field) in out.iter_mut().zip(&fields) {
        *slot = field.parse().map_err(|_| GraphError::Format {
            line,
            msg: format!("invalid integer {field:?} in {what}"),
        })?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    fn set(vs: &[usize]) -> VertexSet {
        vs.iter().copied().collect()
    }

    #[test]
    fn parses_path_file() {
        let g = Graph::parse("3 2\n0 1\n1 2").unwrap();
        assert_eq!(g, path(3));
        assert_eq!(g.to_text(), "3 2\n0 1\n1 2\n");
    }

    #[test]
    fn parse_skips_comments_and_duplicates() {
        let g = Graph::parse("# triangle\n3 4\n0 1\n1 2\n2 0\n1 0\n").unwrap();
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn parse_rejects_self_loop_and_range() {
        let err = Graph::parse("2 1\n0 0").unwrap_err();
        assert!(matches!(err, GraphError::Format { line: 2, ref msg } if msg.contains("self-loop")));
        let err = Graph::parse("2 1\n0 5").unwrap_err();
        assert!(matches!(err, GraphError::Format { line: 2, ref msg } if msg.contains("out of range")));
        assert!(Graph::parse("2\n0 1").is_err());
        assert!(Graph::parse("x y").is_err());
        assert!(Graph::parse("3 2\n0 1").is_err());
    }

    #[test]
    fn regular_degree_examples() {
        assert_eq!(complete(4).regular_degree(), Some(3));
        assert_eq!(path(3).regular_degree(), None);
        assert_eq!(Graph::empty(5).regular_degree(), Some(0));
    }

    #[test]
    fn girth_examples() {
        assert_eq!(complete(4).girth(None), Girth::Finite(3));
        assert_eq!(path(7).girth(None), Girth::Infinite);
        let c8 = Graph::from_edges(8, &(0..8).map(|i| (i, (i + 1) % 8)).collect::<Vec<_>>()).unwrap();
        assert_eq!(c8.girth(None), Girth::Finite(8));
        assert_eq!(c8.girth(Some(8)), Girth::Finite(8));
        assert_eq!(c8.girth(Some(7)), Girth::AboveCutoff(7));
        assert!(c8.girth(Some(7)).exceeds(7));
        assert!(!c8.girth(None).exceeds(8));
    }

    #[test]
    fn shortest_cycle_of_cycle_graph() {
        let c5 = Graph::from_edges(5, &(0..5).map(|i| (i, (i + 1) % 5)).collect::<Vec<_>>()).unwrap();
        let cyc = c5.shortest_cycle().unwrap();
        assert_eq!(cyc.len(), 5);
        for i in 0..5 {
            assert!(c5.has_edge(cyc[i], cyc[(i + 1) % 5]));
        }
        assert!(path(4).shortest_cycle().is_none());
    }

    #[test]
    fn distances() {
        let g = path(3);
        assert_eq!(g.dist(0, 2), Distance::Finite(2));
        assert_eq!(g.dist(1, 1), Distance::Finite(0));
        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(two.dist(0, 3), Distance::Infinite);
        assert!(Distance::Finite(1_000_000) < Distance::Infinite);
    }

    #[test]
    fn unique_path_examples() {
        assert_eq!(path(3).unique_path(0, 2).unwrap(), vec![0, 1, 2]);
        assert_eq!(path(3).unique_path(1, 1).unwrap(), vec![1]);
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(c4.unique_path(0, 2), Err(GraphError::LocalCycle(0, 2)));
        assert_eq!(c4.unique_path(0, 1).unwrap(), vec![0, 1]);
        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(two.unique_path(0, 2), Err(GraphError::NoPath(0, 2)));
    }

    #[test]
    fn convex_closure_examples() {
        let p4 = path(4);
        assert_eq!(p4.convex_closure(&set(&[2])).unwrap(), set(&[2]));
        assert_eq!(p4.convex_closure(&set(&[0, 3])).unwrap(), set(&[0, 1, 2, 3]));
        // tree 1: 0-1-2, 1-3 ; tree 2: 4-5
        let forest = Graph::from_edges(6, &[(0, 1), (1, 2), (1, 3), (4, 5)]).unwrap();
        assert_eq!(forest.convex_closure(&set(&[0, 2, 5])).unwrap(), set(&[0, 1, 2, 5]));
    }

    #[test]
    fn hull_degree_examples() {
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(star.hull_degree(&set(&[1, 2, 3]), 0).unwrap(), 3);
        assert_eq!(star.hull_degree(&set(&[0]), 0).unwrap(), 0);
        assert_eq!(path(3).hull_degree(&set(&[0, 2]), 0).unwrap(), 1);
        assert_eq!(star.hull_degree(&set(&[1]), 0), Err(GraphError::OutsideHull(0)));
    }

    #[test]
    fn connected_closure_examples() {
        let p4 = path(4);
        assert_eq!(p4.connected_closure(&set(&[2])), set(&[0, 1, 2, 3]));
        assert!(p4.connected_closure(&VertexSet::new()).is_empty());
        let forest = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        assert_eq!(forest.connected_closure(&set(&[4])), set(&[3, 4]));
    }
}
