//! Minimal spanning trees and forests on finite graphs.
//!
//! Two independent routes produce the same edge set: Kruskal's algorithm, and
//! a per-edge filter that keeps an edge exactly when no path of strictly
//! cheaper edges joins its endpoints.

use std::collections::VecDeque;

use crate::cluster::ClusterSearch;
use crate::dsu::DisjointSetPartition;
use crate::error::{Error, Result};
use crate::graph::{bfs_distances, EdgeKey, Graph, VertexId, UNREACHED};
use crate::labeling::{bounded_index, derive_seed, EdgeOrder, LabelSource};

/// Largest graph accepted by [`CriterionMode::Exhaustive`].
pub const EXHAUSTIVE_VERTEX_LIMIT: usize = 12;

/// Acyclic edge set over the vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestEdgeSet {
    vertex_count: usize,
    edges: Vec<EdgeKey>,
    spanning: bool,
}

impl ForestEdgeSet {
    /// Validates acyclicity; `spanning` is derived from the component count.
    pub fn new(vertex_count: usize, mut edges: Vec<EdgeKey>) -> Result<Self> {
        edges.sort_unstable();
        edges.dedup();
        let mut dsu = DisjointSetPartition::new(vertex_count);
        for e in &edges {
            if e.hi() as usize >= vertex_count {
                return Err(Error::Parameter(format!("edge {e} out of range")));
            }
            if !dsu.union(e.lo(), e.hi()) {
                return Err(Error::Contract(format!("edge {e} closes a cycle")));
            }
        }
        let spanning = dsu.class_count() <= 1;
        Ok(ForestEdgeSet {
            vertex_count,
            edges,
            spanning,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Sorted canonical keys.
    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// One component covering every vertex.
    pub fn is_spanning(&self) -> bool {
        self.spanning
    }

    pub fn contains(&self, key: EdgeKey) -> bool {
        self.edges.binary_search(&key).is_ok()
    }

    pub fn component_count(&self) -> usize {
        self.vertex_count - self.edges.len()
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.vertex_count, self.edges.iter().map(|e| e.endpoints()).collect())
            .expect("forest edges form a simple graph")
    }

    /// Sum of labels, accumulated in ascending key order.
    pub fn total_label<L: LabelSource + ?Sized>(&self, labels: &L) -> f64 {
        self.edges
            .iter()
            .map(|e| labels.label(e.lo() as u64, e.hi() as u64))
            .sum()
    }

    pub fn rooted(&self) -> RootedForest {
        RootedForest::new(self)
    }
}

/// Minimal spanning forest by Kruskal over the strict total order. On a
/// disconnected graph each component gets its own tree and the result is not
/// flagged spanning.
pub fn kruskal_mst<L: LabelSource + ?Sized>(g: &Graph, labels: &L) -> ForestEdgeSet {
    kruskal_with_order(g, &EdgeOrder::new(g, labels))
}

/// As [`kruskal_mst`] but rejects disconnected input.
pub fn kruskal_mst_strict<L: LabelSource + ?Sized>(g: &Graph, labels: &L) -> Result<ForestEdgeSet> {
    let f = kruskal_mst(g, labels);
    if f.is_spanning() {
        Ok(f)
    } else {
        Err(Error::Contract(format!(
            "graph has {} components; no spanning tree exists",
            f.component_count()
        )))
    }
}

pub fn kruskal_with_order(g: &Graph, order: &EdgeOrder) -> ForestEdgeSet {
    let n = g.vertex_count();
    let mut dsu = DisjointSetPartition::new(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for &i in order.ascending() {
        let e = g.edges()[i as usize];
        if dsu.union(e.lo(), e.hi()) {
            edges.push(e);
            if dsu.class_count() == 1 {
                break;
            }
        }
    }
    edges.sort_unstable();
    ForestEdgeSet {
        vertex_count: n,
        edges,
        spanning: dsu.class_count() <= 1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriterionMode {
    /// Enumerate every simple path between the endpoints.
    Exhaustive,
    /// Grow the strictly-cheaper cluster of one endpoint.
    Bfs,
    /// Exhaustive up to [`EXHAUSTIVE_VERTEX_LIMIT`] vertices, BFS beyond.
    Auto,
}

/// Keeps exactly the edges whose endpoints are not joined by a path of
/// strictly cheaper edges.
pub fn criterion_filter<L: LabelSource + ?Sized>(g: &Graph, labels: &L, mode: CriterionMode) -> Result<ForestEdgeSet> {
    criterion_with_order(g, &EdgeOrder::new(g, labels), mode)
}

pub fn criterion_with_order(g: &Graph, order: &EdgeOrder, mode: CriterionMode) -> Result<ForestEdgeSet> {
    let exhaustive = match mode {
        CriterionMode::Exhaustive => {
            if g.vertex_count() > EXHAUSTIVE_VERTEX_LIMIT {
                return Err(Error::Capacity(format!(
                    "exhaustive path enumeration is limited to {EXHAUSTIVE_VERTEX_LIMIT} vertices, got {}",
                    g.vertex_count()
                )));
            }
            true
        }
        CriterionMode::Bfs => false,
        CriterionMode::Auto => g.vertex_count() <= EXHAUSTIVE_VERTEX_LIMIT,
    };

    let mut kept = Vec::new();
    if exhaustive {
        let mut on_path = vec![false; g.vertex_count()];
        for (i, &e) in g.edges().iter().enumerate() {
            if !has_cheaper_simple_path(g, order, i, e, &mut on_path) {
                kept.push(e);
            }
        }
    } else {
        let mut search = ClusterSearch::new(g.vertex_count());
        for (i, &e) in g.edges().iter().enumerate() {
            let out = search.explore(g, order, e.lo(), order.rank(i), e.hi(), None, usize::MAX);
            if !out.reached_target {
                kept.push(e);
            }
        }
    }
    ForestEdgeSet::new(g.vertex_count(), kept)
        .map_err(|err| Error::Invariant(format!("criterion filter produced a cycle: {err}")))
}

/// Walks every simple path from one endpoint of `e` to the other that avoids
/// `e` itself, and reports whether any of them has all ranks below `e`'s.
fn has_cheaper_simple_path(g: &Graph, order: &EdgeOrder, index: usize, e: EdgeKey, on_path: &mut [bool]) -> bool {
    #[allow(clippy::too_many_arguments)]
    fn walk(
        g: &Graph,
        order: &EdgeOrder,
        skip: usize,
        at: VertexId,
        goal: VertexId,
        path_max: Option<u32>,
        on_path: &mut [bool],
        threshold: u32,
    ) -> bool {
        if at == goal {
            return path_max.is_some_and(|m| m < threshold);
        }
        for (&y, &ei) in g.neighbors(at).iter().zip(g.incident_edges(at)) {
            if ei as usize == skip || on_path[y as usize] {
                continue;
            }
            let r = order.rank(ei as usize);
            let m = Some(path_max.map_or(r, |m| m.max(r)));
            on_path[y as usize] = true;
            let found = walk(g, order, skip, y, goal, m, on_path, threshold);
            on_path[y as usize] = false;
            if found {
                return true;
            }
        }
        false
    }
    on_path[e.lo() as usize] = true;
    let found = walk(g, order, index, e.lo(), e.hi(), None, on_path, order.rank(index));
    on_path[e.lo() as usize] = false;
    found
}

/// A connected acyclic subgraph: a vertex set plus edges among it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subtree {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeKey>,
}

impl Subtree {
    pub fn vertex(v: VertexId) -> Self {
        Subtree {
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    pub fn from_edges(edges: Vec<EdgeKey>) -> Self {
        let mut vertices: Vec<VertexId> = edges.iter().flat_map(|e| [e.lo(), e.hi()]).collect();
        vertices.sort_unstable();
        vertices.dedup();
        Subtree { vertices, edges }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }

    fn validate(&self, g: &Graph) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::Contract("partial subtree is empty".into()));
        }
        for &v in &self.vertices {
            g.check_vertex(v)?;
        }
        let mut dsu = DisjointSetPartition::new(g.vertex_count());
        for e in &self.edges {
            if g.edge_index(*e).is_none() {
                return Err(Error::Contract(format!("partial edge {e} is not in the graph")));
            }
            if !dsu.union(e.lo(), e.hi()) {
                return Err(Error::Contract(format!("partial subgraph has a cycle through {e}")));
            }
        }
        let root = dsu.find(self.vertices[0]);
        if self.vertices.iter().any(|&v| dsu.find(v) != root) {
            return Err(Error::Contract("partial subgraph is disconnected".into()));
        }
        Ok(())
    }
}

/// Extends `partial` to a spanning tree of `g` shell by shell: every vertex at
/// distance `k ≥ 1` from the subtree attaches to one neighbor at distance
/// `k − 1`, chosen uniformly from the sorted eligible list by a hash of
/// `(trial_seed, vertex)`.
pub fn complete_subtree(g: &Graph, partial: &Subtree, trial_seed: u64) -> Result<ForestEdgeSet> {
    partial.validate(g)?;
    let dist = bfs_distances(g, &partial.vertices);
    if dist.contains(&UNREACHED) {
        return Err(Error::Contract(
            "graph is disconnected; no spanning tree extends the subtree".into(),
        ));
    }
    let mut shells: Vec<Vec<VertexId>> = Vec::new();
    for (v, &d) in dist.iter().enumerate() {
        if d > 0 {
            let d = d as usize;
            if shells.len() < d {
                shells.resize_with(d, Vec::new);
            }
            shells[d - 1].push(v as VertexId);
        }
    }

    let mut edges = partial.edges.clone();
    let mut eligible = Vec::new();
    for (k, shell) in shells.iter().enumerate() {
        let prev = k as u32;
        for &v in shell {
            eligible.clear();
            eligible.extend(g.neighbors(v).iter().copied().filter(|&w| dist[w as usize] == prev));
            let pick = eligible[bounded_index(derive_seed(trial_seed, v as u64), eligible.len())];
            edges.push(EdgeKey::canonical(v, pick));
        }
    }
    let f = ForestEdgeSet::new(g.vertex_count(), edges)?;
    if !f.is_spanning() {
        return Err(Error::Invariant("shell completion did not span".into()));
    }
    Ok(f)
}

/// Parent pointers and depths for each component of a forest, rooted at the
/// component's smallest vertex.
#[derive(Debug, Clone)]
pub struct RootedForest {
    parent: Vec<VertexId>,
    depth: Vec<u32>,
    component: Vec<u32>,
}

impl RootedForest {
    pub fn new(f: &ForestEdgeSet) -> Self {
        let g = f.to_graph();
        let n = g.vertex_count();
        let mut parent: Vec<VertexId> = (0..n as VertexId).collect();
        let mut depth = vec![UNREACHED; n];
        let mut component = vec![0u32; n];
        let mut next_component = 0;
        let mut queue = VecDeque::new();
        for root in 0..n as VertexId {
            if depth[root as usize] != UNREACHED {
                continue;
            }
            depth[root as usize] = 0;
            component[root as usize] = next_component;
            queue.push_back(root);
            while let Some(x) = queue.pop_front() {
                for &y in g.neighbors(x) {
                    if depth[y as usize] == UNREACHED {
                        depth[y as usize] = depth[x as usize] + 1;
                        parent[y as usize] = x;
                        component[y as usize] = next_component;
                        queue.push_back(y);
                    }
                }
            }
            next_component += 1;
        }
        RootedForest {
            parent,
            depth,
            component,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    fn check(&self, u: VertexId, v: VertexId) -> Result<()> {
        for x in [u, v] {
            if x as usize >= self.vertex_count() {
                return Err(Error::Parameter(format!("vertex {x} out of range")));
            }
        }
        if self.component[u as usize] != self.component[v as usize] {
            return Err(Error::Unreachable(u, v));
        }
        Ok(())
    }

    /// The unique simple path from `u` to `v`, both included.
    pub fn path(&self, u: VertexId, v: VertexId) -> Result<Vec<VertexId>> {
        self.check(u, v)?;
        let (mut a, mut b) = (u, v);
        let mut front = vec![a];
        let mut back = vec![b];
        while self.depth[a as usize] > self.depth[b as usize] {
            a = self.parent[a as usize];
            front.push(a);
        }
        while self.depth[b as usize] > self.depth[a as usize] {
            b = self.parent[b as usize];
            back.push(b);
        }
        while a != b {
            a = self.parent[a as usize];
            b = self.parent[b as usize];
            front.push(a);
            back.push(b);
        }
        back.pop();
        front.extend(back.into_iter().rev());
        Ok(front)
    }

    pub fn distance(&self, u: VertexId, v: VertexId) -> Result<usize> {
        self.check(u, v)?;
        let (mut a, mut b) = (u, v);
        let mut hops = 0;
        while a != b {
            if self.depth[a as usize] >= self.depth[b as usize] {
                a = self.parent[a as usize];
            } else {
                b = self.parent[b as usize];
            }
            hops += 1;
        }
        Ok(hops)
    }

    /// Distance to the component root.
    pub fn depth(&self, v: VertexId) -> u32 {
        self.depth[v as usize]
    }
}

pub fn tree_path(t: &ForestEdgeSet, u: VertexId, v: VertexId) -> Result<Vec<VertexId>> {
    t.rooted().path(u, v)
}

pub fn tree_distance(t: &ForestEdgeSet, u: VertexId, v: VertexId) -> Result<usize> {
    t.rooted().distance(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_grid_box, build_path, component_count, direct_product, graph_distance};
    use crate::labeling::{EdgeLabeling, TableLabels};

    fn triangle() -> (Graph, TableLabels) {
        let g = Graph::from_edges(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let mut t = TableLabels::new();
        t.set(0, 1, 0.1).set(1, 2, 0.5).set(0, 2, 0.9);
        (g, t)
    }

    #[test]
    fn triangle_drops_its_heaviest_edge() {
        let (g, t) = triangle();
        let want = [EdgeKey::canonical(0, 1), EdgeKey::canonical(1, 2)];
        assert_eq!(kruskal_mst(&g, &t).edges(), &want[..]);
        for mode in [CriterionMode::Exhaustive, CriterionMode::Bfs, CriterionMode::Auto] {
            assert_eq!(criterion_filter(&g, &t, mode).unwrap().edges(), &want[..]);
        }
        assert!((kruskal_mst(&g, &t).total_label(&t) - 0.6).abs() < 1e-12);
    }

    #[test]
    fn trees_are_returned_unchanged() {
        let g = build_path(7).unwrap();
        let l = EdgeLabeling::new(1);
        assert_eq!(kruskal_mst(&g, &l).edges(), g.edges());
        let single = build_path(2).unwrap();
        assert_eq!(
            criterion_filter(&single, &l, CriterionMode::Exhaustive)
                .unwrap()
                .edges(),
            single.edges()
        );
    }

    #[test]
    fn disconnected_input_yields_forest() {
        let g = Graph::from_edges(5, vec![(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        let l = EdgeLabeling::new(4);
        let f = kruskal_mst(&g, &l);
        assert!(!f.is_spanning());
        assert_eq!(f.edge_count(), 3);
        assert_eq!(f.component_count(), 2);
        assert!(matches!(kruskal_mst_strict(&g, &l), Err(Error::Contract(_))));
        assert!(kruskal_mst_strict(&build_grid_box(3, 3).unwrap(), &l).is_ok());
    }

    #[test]
    fn exhaustive_mode_is_capped() {
        let g = build_path(13).unwrap();
        let l = EdgeLabeling::new(0);
        assert!(matches!(
            criterion_filter(&g, &l, CriterionMode::Exhaustive),
            Err(Error::Capacity(_))
        ));
        assert!(criterion_filter(&g, &l, CriterionMode::Auto).is_ok());
    }

    #[test]
    fn bfs_filter_matches_kruskal_on_products() {
        let a = build_grid_box(4, 3).unwrap();
        let b = build_path(5).unwrap();
        let g = direct_product(&a, &b).unwrap();
        for seed in 0..10 {
            let l = EdgeLabeling::new(seed);
            assert_eq!(
                kruskal_mst(&g, &l),
                criterion_filter(&g, &l, CriterionMode::Bfs).unwrap()
            );
        }
    }

    #[test]
    fn completion_of_spanning_partial_is_identity() {
        let g = build_grid_box(3, 3).unwrap();
        let t = kruskal_mst(&g, &EdgeLabeling::new(2));
        let partial = Subtree::from_edges(t.edges().to_vec());
        assert_eq!(complete_subtree(&g, &partial, 77).unwrap(), t);
    }

    #[test]
    fn completion_from_path_root() {
        let g = build_path(6).unwrap();
        let f = complete_subtree(&g, &Subtree::vertex(2), 5).unwrap();
        assert_eq!(f.edges(), g.edges());
    }

    #[test]
    fn completion_from_grid_center() {
        let g = build_grid_box(3, 3).unwrap();
        let mut seen = std::collections::HashSet::new();
        for seed in 0..100 {
            let f = complete_subtree(&g, &Subtree::vertex(4), seed).unwrap();
            assert_eq!(f.edge_count(), 8);
            assert!(f.is_spanning());
            assert_eq!(component_count(&f.to_graph()), 1);
            // Every edge joins consecutive shells around the center.
            for e in f.edges() {
                let (a, b) = e.endpoints();
                let da = graph_distance(&g, 4, a).unwrap().unwrap();
                let db = graph_distance(&g, 4, b).unwrap().unwrap();
                assert_eq!(da.abs_diff(db), 1);
            }
            seen.insert(f.edges().to_vec());
        }
        // Corners each pick one of two side midpoints.
        assert!(seen.len() > 1);
        assert!(seen.len() <= 16);
    }

    #[test]
    fn completion_contract_errors() {
        let g = build_grid_box(3, 3).unwrap();
        let cyclic = Subtree::from_edges(vec![
            EdgeKey::canonical(0, 1),
            EdgeKey::canonical(1, 4),
            EdgeKey::canonical(3, 4),
            EdgeKey::canonical(0, 3),
        ]);
        assert!(matches!(complete_subtree(&g, &cyclic, 0), Err(Error::Contract(_))));
        let split = Subtree::from_edges(vec![EdgeKey::canonical(0, 1), EdgeKey::canonical(7, 8)]);
        assert!(matches!(complete_subtree(&g, &split, 0), Err(Error::Contract(_))));
        let g2 = Graph::from_edges(4, vec![(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            complete_subtree(&g2, &Subtree::vertex(0), 0),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn paths_and_distances() {
        let g = build_path(5).unwrap();
        let t = ForestEdgeSet::new(5, g.edges().to_vec()).unwrap();
        assert_eq!(tree_path(&t, 3, 3).unwrap(), vec![3]);
        assert_eq!(tree_path(&t, 1, 2).unwrap(), vec![1, 2]);
        assert_eq!(tree_path(&t, 4, 0).unwrap(), vec![4, 3, 2, 1, 0]);
        assert_eq!(tree_distance(&t, 4, 1).unwrap(), 3);
        assert_eq!(tree_distance(&t, 2, 2).unwrap(), 0);

        let f = ForestEdgeSet::new(4, vec![EdgeKey::canonical(0, 1)]).unwrap();
        assert!(matches!(tree_path(&f, 0, 3), Err(Error::Unreachable(0, 3))));
        assert!(matches!(tree_distance(&f, 2, 3), Err(Error::Unreachable(2, 3))));
    }

    #[test]
    fn tree_distance_dominates_graph_distance() {
        let g = build_grid_box(3, 3).unwrap();
        let t = kruskal_mst(&g, &EdgeLabeling::new(42));
        let r = t.rooted();
        for u in 0..9 {
            for v in 0..9 {
                let td = r.distance(u, v).unwrap();
                assert!(td >= graph_distance(&g, u, v).unwrap().unwrap());
                assert_eq!(td + 1, r.path(u, v).unwrap().len());
            }
        }
    }

    #[test]
    fn forest_rejects_cycles() {
        let cyc = vec![
            EdgeKey::canonical(0, 1),
            EdgeKey::canonical(1, 2),
            EdgeKey::canonical(0, 2),
        ];
        assert!(matches!(ForestEdgeSet::new(3, cyc), Err(Error::Contract(_))));
    }
}
