//! Weighted trees with exact edge lengths: distances, the double-sweep
//! diameter, the maxian objective and the longest-path criterion.

use std::collections::VecDeque;
use std::fmt;

use num_traits::{CheckedAdd, CheckedSub, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{Rational, Small};

const NONE: usize = usize::MAX;

/// Which endpoint of the target pair a gap constraint compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    A,
    B,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::A => f.write_str("a-side"),
            Side::B => f.write_str("b-side"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    weights: Vec<Rational>,
    ends: Vec<(usize, usize)>,
    lengths: Vec<Rational>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Tree {
    /// Builds a tree, checking it is connected and acyclic with nonnegative data.
    pub fn new(
        weights: Vec<Rational>,
        ends: Vec<(usize, usize)>,
        lengths: Vec<Rational>,
    ) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::NotATree("no vertices".into()));
        }
        if ends.len() != n - 1 {
            return Err(Error::NotATree(format!(
                "{} vertices need {} edges, got {}",
                n,
                n - 1,
                ends.len()
            )));
        }
        if lengths.len() != ends.len() {
            return Err(Error::DimensionMismatch { expected: ends.len(), got: lengths.len() });
        }
        if let Some(i) = weights.iter().position(|w| w.is_negative()) {
            return Err(Error::NegativeDatum(format!("weight of vertex {i}")));
        }
        if let Some(e) = lengths.iter().position(|l| l.is_negative()) {
            return Err(Error::NegativeDatum(format!("length of edge {e}")));
        }
        let mut adjacency = vec![Vec::new(); n];
        for (e, &(u, v)) in ends.iter().enumerate() {
            if u >= n {
                return Err(Error::InvalidVertex(u));
            }
            if v >= n {
                return Err(Error::InvalidVertex(v));
            }
            if u == v {
                return Err(Error::NotATree(format!("edge {e} is a self-loop at vertex {u}")));
            }
            adjacency[u].push((v, e));
            adjacency[v].push((u, e));
        }
        let tree = Tree { weights, ends, lengths, adjacency };
        // n-1 edges plus connectivity rules out cycles and duplicate edges.
        let reached = tree.bfs(0).order.len();
        if reached != n {
            return Err(Error::NotATree(format!(
                "only {reached} of {n} vertices reachable from vertex 0"
            )));
        }
        Ok(tree)
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn lengths(&self) -> &[Rational] {
        &self.lengths
    }

    pub fn ends(&self) -> &[(usize, usize)] {
        &self.ends
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        v < self.vertex_count() && self.degree(v) == 1
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.is_leaf(v)).collect()
    }

    /// Same topology and weights, new edge lengths.
    pub fn with_lengths(&self, lengths: Vec<Rational>) -> Result<Tree> {
        if lengths.len() != self.edge_count() {
            return Err(Error::DimensionMismatch { expected: self.edge_count(), got: lengths.len() });
        }
        if let Some(e) = lengths.iter().position(|l| l.is_negative()) {
            return Err(Error::NegativeDatum(format!("length of edge {e}")));
        }
        Ok(Tree { lengths, ..self.clone() })
    }

    pub fn with_weights(&self, weights: Vec<Rational>) -> Result<Tree> {
        if weights.len() != self.vertex_count() {
            return Err(Error::DimensionMismatch { expected: self.vertex_count(), got: weights.len() });
        }
        Tree::new(weights, self.ends.clone(), self.lengths.clone())
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex(v))
        }
    }

    pub(crate) fn bfs(&self, root: usize) -> Rooted {
        let n = self.vertex_count();
        let mut parent = vec![NONE; n];
        let mut parent_edge = vec![NONE; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &(w, e) in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = u;
                    parent_edge[w] = e;
                    queue.push_back(w);
                }
            }
        }
        Rooted { parent, parent_edge, order }
    }

    /// Distances from `source` to every vertex, under the given edge lengths.
    pub fn distances_from_with(&self, source: usize, lengths: &[Rational]) -> Result<Vec<Rational>> {
        self.check_vertex(source)?;
        let rooted = self.bfs(source);
        let mut dist = vec![Rational::zero(); self.vertex_count()];
        for &v in rooted.order.iter().skip(1) {
            dist[v] = &dist[rooted.parent[v]] + &lengths[rooted.parent_edge[v]];
        }
        Ok(dist)
    }

    pub fn distances_from(&self, source: usize) -> Result<Vec<Rational>> {
        self.distances_from_with(source, &self.lengths)
    }

    /// The unique simple path between `u` and `v`.
    pub fn path(&self, u: usize, v: usize) -> Result<PathQuery> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let rooted = self.bfs(u);
        let mut vertices = vec![v];
        let mut edges = Vec::new();
        let mut cur = v;
        while cur != u {
            edges.push(rooted.parent_edge[cur]);
            cur = rooted.parent[cur];
            vertices.push(cur);
        }
        vertices.reverse();
        edges.reverse();
        let length = edges.iter().map(|&e| &self.lengths[e]).sum();
        Ok(PathQuery { endpoints: (u, v), vertices, edges, length })
    }

    pub fn distance(&self, u: usize, v: usize) -> Result<Rational> {
        Ok(self.path(u, v)?.length)
    }

    /// Diameter by double sweep: farthest vertex `s` from vertex 0, then the
    /// farthest vertex `t` from `s`. Ties go to the smallest vertex index.
    pub fn longest_path(&self) -> LongestPathResult {
        let farthest = |dist: &[Rational]| {
            let mut best = 0;
            for v in 1..dist.len() {
                if dist[v] > dist[best] {
                    best = v;
                }
            }
            best
        };
        let from_root = self.distances_from(0).expect("vertex 0 exists");
        let s = farthest(&from_root);
        let from_s = self.distances_from(s).expect("valid vertex");
        let t = farthest(&from_s);
        LongestPathResult { endpoints: (s, t), length: from_s[t].clone() }
    }

    /// The vertex where the path to `v` leaves P(a, b).
    pub fn meeting_vertex(&self, a: usize, b: usize, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        if a == b {
            return Err(Error::DegeneratePair(a));
        }
        let path = self.path(a, b)?;
        let mut on_path = vec![false; self.vertex_count()];
        for &p in &path.vertices {
            on_path[p] = true;
        }
        let rooted = self.bfs(v);
        Ok(*rooted.order.iter().find(|&&w| on_path[w]).expect("path is nonempty"))
    }

    /// F(X) = sum over vertices of weight times distance to the farthest member of X.
    pub fn maxian_value(&self, set: &[usize]) -> Result<Rational> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut farthest: Option<Vec<Rational>> = None;
        for &x in set {
            let dist = self.distances_from(x)?;
            farthest = Some(match farthest {
                None => dist,
                Some(cur) => cur.into_iter().zip(dist).map(|(p, q)| p.max(q)).collect(),
            });
        }
        Ok(farthest
            .expect("nonempty set")
            .iter()
            .zip(&self.weights)
            .map(|(d, w)| d * w)
            .sum())
    }

    /// Whether no path is strictly longer than P(a, b), with every violating
    /// (leaf, side) pair when it is not.
    pub fn is_weakly_longest(&self, a: usize, b: usize) -> Result<CriterionCheck> {
        let layout = PairLayout::new(self, a, b)?;
        let violations = layout.violations(&self.lengths);
        Ok(CriterionCheck { holds: violations.is_empty(), violations })
    }
}

pub(crate) struct Rooted {
    pub parent: Vec<usize>,
    pub parent_edge: Vec<usize>,
    pub order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathQuery {
    pub endpoints: (usize, usize),
    /// Vertices from the first endpoint to the second.
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub length: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LongestPathResult {
    pub endpoints: (usize, usize),
    pub length: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionCheck {
    pub holds: bool,
    pub violations: Vec<(usize, Side)>,
}

/// A tree rooted at `a` and organized around the path P(a, b): every vertex
/// knows the path position it hangs from. All per-pair work (gap rows, the
/// criterion, Chebyshev thresholds) is a linear pass over this layout.
#[derive(Debug, Clone)]
pub struct PairLayout {
    pub a: usize,
    pub b: usize,
    /// a = path[0], ..., b = path[k].
    pub path: Vec<usize>,
    /// path_edges[i] joins path[i] and path[i + 1].
    pub path_edges: Vec<usize>,
    pub on_path_edge: Vec<bool>,
    /// Position along the path of the vertex each vertex hangs from.
    pub anchor: Vec<usize>,
    pub parent: Vec<usize>,
    pub parent_edge: Vec<usize>,
    /// BFS order from `a`; parents precede children.
    pub order: Vec<usize>,
    /// Leaves other than a and b, ascending.
    pub other_leaves: Vec<usize>,
}

impl PairLayout {
    pub fn new(tree: &Tree, a: usize, b: usize) -> Result<Self> {
        tree.check_vertex(a)?;
        tree.check_vertex(b)?;
        if a == b {
            return Err(Error::DegeneratePair(a));
        }
        for v in [a, b] {
            if !tree.is_leaf(v) {
                return Err(Error::NotALeaf(v));
            }
        }
        let rooted = tree.bfs(a);
        let mut path = vec![b];
        let mut path_edges = Vec::new();
        let mut cur = b;
        while cur != a {
            path_edges.push(rooted.parent_edge[cur]);
            cur = rooted.parent[cur];
            path.push(cur);
        }
        path.reverse();
        path_edges.reverse();

        let n = tree.vertex_count();
        let mut on_path_edge = vec![false; tree.edge_count()];
        for &e in &path_edges {
            on_path_edge[e] = true;
        }
        let mut anchor = vec![NONE; n];
        for (i, &p) in path.iter().enumerate() {
            anchor[p] = i;
        }
        for &v in &rooted.order {
            if anchor[v] == NONE {
                anchor[v] = anchor[rooted.parent[v]];
            }
        }
        let other_leaves = (0..n).filter(|&v| v != a && v != b && tree.is_leaf(v)).collect();
        Ok(PairLayout {
            a,
            b,
            path,
            path_edges,
            on_path_edge,
            anchor,
            parent: rooted.parent,
            parent_edge: rooted.parent_edge,
            order: rooted.order,
            other_leaves,
        })
    }

    pub fn is_on_path(&self, v: usize) -> bool {
        self.path[self.anchor[v]] == v
    }

    /// Edges of P(v, v_ab) for an off-path vertex, walking up to its anchor.
    pub fn branch_edges(&self, v: usize) -> Vec<usize> {
        let mut edges = Vec::new();
        let mut cur = v;
        while !self.is_on_path(cur) {
            edges.push(self.parent_edge[cur]);
            cur = self.parent[cur];
        }
        edges
    }

    /// Edges of P(side, path[position]).
    pub fn side_edges(&self, side: Side, position: usize) -> &[usize] {
        match side {
            Side::A => &self.path_edges[..position],
            Side::B => &self.path_edges[position..],
        }
    }

    /// Per-vertex sums of `value(edge)` from the vertex up to its anchor
    /// (zero on the path).
    pub fn branch_sums<F>(&self, mut value: F) -> Vec<Rational>
    where
        F: FnMut(usize) -> Rational,
    {
        let mut sums = vec![Rational::zero(); self.anchor.len()];
        for &v in &self.order {
            if !self.is_on_path(v) {
                let up = &sums[self.parent[v]] + value(self.parent_edge[v]);
                sums[v] = up;
            }
        }
        sums
    }

    /// Prefix sums of `value(edge)` along the path: entry i covers P(a, path[i]).
    pub fn path_prefix<F>(&self, mut value: F) -> Vec<Rational>
    where
        F: FnMut(usize) -> Rational,
    {
        let mut prefix = Vec::with_capacity(self.path.len());
        prefix.push(Rational::zero());
        for &e in &self.path_edges {
            let next = prefix.last().expect("nonempty") + value(e);
            prefix.push(next);
        }
        prefix
    }

    /// Violated (leaf, side) pairs of the criterion under `lengths`, in one pass.
    pub fn violations(&self, lengths: &[Rational]) -> Vec<(usize, Side)> {
        let depth = self.branch_sums(|e| lengths[e].clone());
        let prefix = self.path_prefix(|e| lengths[e].clone());
        let total = prefix.last().expect("nonempty").clone();
        let mut out = Vec::new();
        for &v in &self.other_leaves {
            let i = self.anchor[v];
            if depth[v] > prefix[i] {
                out.push((v, Side::A));
            }
            if depth[v] > &total - &prefix[i] {
                out.push((v, Side::B));
            }
        }
        out
    }

    /// [`violations`](Self::violations) in checked `i128` arithmetic; `None` on overflow.
    pub fn violations_small(&self, lengths: &[Small]) -> Option<Vec<(usize, Side)>> {
        let mut depth = vec![Small::zero(); self.anchor.len()];
        for &v in &self.order {
            if !self.is_on_path(v) {
                depth[v] = depth[self.parent[v]].checked_add(&lengths[self.parent_edge[v]])?;
            }
        }
        let mut prefix = Vec::with_capacity(self.path.len());
        prefix.push(Small::zero());
        for &e in &self.path_edges {
            let next = prefix.last().expect("nonempty").checked_add(&lengths[e])?;
            prefix.push(next);
        }
        let total = *prefix.last().expect("nonempty");
        let mut out = Vec::new();
        for &v in &self.other_leaves {
            let i = self.anchor[v];
            if depth[v] > prefix[i] {
                out.push((v, Side::A));
            }
            if depth[v] > total.checked_sub(&prefix[i])? {
                out.push((v, Side::B));
            }
        }
        Some(out)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::rational::int;

    pub const A: usize = 0;
    pub const U: usize = 1;
    pub const B: usize = 2;
    pub const V: usize = 3;

    /// a–u (2), u–b (3), u–v (4); edges indexed in that order.
    pub fn t1() -> Tree {
        Tree::new(
            vec![int(1); 4],
            vec![(A, U), (U, B), (U, V)],
            vec![int(2), int(3), int(4)],
        )
        .unwrap()
    }

    /// Center 0 with leaves 1..=k carrying the given lengths.
    pub fn star(lengths: &[i64]) -> Tree {
        Tree::new(
            vec![int(1); lengths.len() + 1],
            (1..=lengths.len()).map(|i| (0, i)).collect(),
            lengths.iter().map(|&l| int(l)).collect(),
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::random::{random_tree, TreeShape};
    use crate::rational::int;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_diameter(tree: &Tree) -> Rational {
        (0..tree.vertex_count())
            .flat_map(|u| tree.distances_from(u).unwrap())
            .max()
            .unwrap()
    }

    #[test]
    fn distances_on_t1() {
        let t = t1();
        assert_eq!(t.distance(A, B).unwrap(), int(5));
        assert_eq!(t.distance(A, A).unwrap(), int(0));
        assert_eq!(t.distance(V, B).unwrap(), int(7));
        assert_eq!(t.distance(9, A), Err(Error::InvalidVertex(9)));
    }

    #[test]
    fn longest_path_examples() {
        let lp = t1().longest_path();
        assert_eq!(lp.endpoints, (V, B));
        assert_eq!(lp.length, int(7));

        let edge = Tree::new(vec![int(1); 2], vec![(0, 1)], vec![int(3)]).unwrap();
        let lp = edge.longest_path();
        assert_eq!(lp.endpoints, (1, 0));
        assert_eq!(lp.length, int(3));

        let lp = star(&[1, 5, 4, 2]).longest_path();
        assert_eq!(lp.endpoints, (2, 3));
        assert_eq!(lp.length, int(9));
    }

    #[test]
    fn meeting_vertex_examples() {
        let t = t1();
        assert_eq!(t.meeting_vertex(A, B, V).unwrap(), U);
        assert_eq!(t.meeting_vertex(A, B, A).unwrap(), A);
        assert_eq!(star(&[1, 5, 4, 2]).meeting_vertex(1, 2, 4).unwrap(), 0);
        assert_eq!(t.meeting_vertex(A, A, V), Err(Error::DegeneratePair(A)));
    }

    #[test]
    fn maxian_value_examples() {
        let t = t1();
        assert_eq!(t.maxian_value(&[V, B]).unwrap(), int(24));
        assert_eq!(t.maxian_value(&[A, B]).unwrap(), int(20));
        let zero = t.with_weights(vec![int(0); 4]).unwrap();
        assert_eq!(zero.maxian_value(&[A]).unwrap(), int(0));
        assert_eq!(t.maxian_value(&[]), Err(Error::EmptySet));
    }

    #[test]
    fn criterion_examples() {
        let t = t1();
        let check = t.is_weakly_longest(A, B).unwrap();
        assert!(!check.holds);
        assert_eq!(check.violations, vec![(V, Side::A), (V, Side::B)]);
        assert!(t.is_weakly_longest(V, B).unwrap().holds);
        let edge = Tree::new(vec![int(1); 2], vec![(0, 1)], vec![int(3)]).unwrap();
        assert!(edge.is_weakly_longest(0, 1).unwrap().holds);
        assert_eq!(t.is_weakly_longest(U, B), Err(Error::NotALeaf(U)));
    }

    #[test]
    fn rejects_non_trees() {
        let dup = Tree::new(vec![int(1); 3], vec![(0, 1), (0, 1)], vec![int(1), int(1)]);
        assert!(matches!(dup, Err(Error::NotATree(_))));
        let short = Tree::new(vec![int(1); 3], vec![(0, 1)], vec![int(1)]);
        assert!(matches!(short, Err(Error::NotATree(_))));
        let neg = Tree::new(vec![int(1); 2], vec![(0, 1)], vec![int(-1)]);
        assert!(matches!(neg, Err(Error::NegativeDatum(_))));
        let loop_ = Tree::new(vec![int(1); 2], vec![(1, 1)], vec![int(1)]);
        assert!(matches!(loop_, Err(Error::NotATree(_))));
    }

    #[test]
    fn layout_edges_partition_rows() {
        let t = t1();
        let layout = PairLayout::new(&t, A, B).unwrap();
        assert_eq!(layout.path, vec![A, U, B]);
        assert_eq!(layout.branch_edges(V), vec![2]);
        assert_eq!(layout.side_edges(Side::A, layout.anchor[V]), &[0]);
        assert_eq!(layout.side_edges(Side::B, layout.anchor[V]), &[1]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn metric_sanity(seed in any::<u64>(), n in 1usize..60) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random_tree(&mut rng, n, 20, TreeShape::Recursive);
            let u = seed as usize % n;
            let w = (seed / 7) as usize % n;
            let p = t.path(u, w).unwrap();
            prop_assert_eq!(t.distance(w, u).unwrap(), p.length.clone());
            prop_assert!(!p.length.is_negative());
            for &x in &p.vertices {
                prop_assert_eq!(t.distance(u, x).unwrap() + t.distance(x, w).unwrap(), p.length.clone());
            }
        }

        #[test]
        fn double_sweep_matches_brute_force(seed in any::<u64>(), n in 1usize..200) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random_tree(&mut rng, n, 30, TreeShape::Recursive);
            let lp = t.longest_path();
            prop_assert_eq!(t.distance(lp.endpoints.0, lp.endpoints.1).unwrap(), lp.length.clone());
            prop_assert_eq!(lp.length, brute_diameter(&t));
        }

        #[test]
        fn criterion_equals_diameter_test(seed in any::<u64>(), n in 2usize..200) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // small lengths make ties common
            let t = random_tree(&mut rng, n, 3, TreeShape::Recursive);
            let diameter = t.longest_path().length;
            let leaves = t.leaves();
            for (i, &a) in leaves.iter().enumerate().take(6) {
                for &b in leaves.iter().skip(i + 1).take(6) {
                    let check = t.is_weakly_longest(a, b).unwrap();
                    prop_assert_eq!(check.holds, t.distance(a, b).unwrap() == diameter);
                }
            }
        }
    }
}
