//! Finite simple undirected graphs and the generators used throughout the
//! crate: rooted trees `T_d(n)`, paths, grid boxes and direct products.
//!
//! Vertex ids are dense `u32` values in `[0, vertex_count)`. Adjacency lists
//! are stored sorted by neighbor id, so iteration order never depends on the
//! order in which edges were supplied.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u32;

/// Marker stored in distance arrays for vertices that were not reached.
pub const UNREACHED: u32 = u32::MAX;

/// Undirected edge with endpoints stored in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeKey {
    lo: VertexId,
    hi: VertexId,
}

impl EdgeKey {
    /// Builds the key of the edge joining `a` and `b`, in either order.
    ///
    /// Panics on a self-loop.
    pub fn canonical(a: VertexId, b: VertexId) -> Self {
        assert_ne!(a, b, "self-loop {a}-{a} has no edge key");
        EdgeKey {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    /// Accepts only keys that are already canonical (`u < v`).
    pub fn try_new(u: VertexId, v: VertexId) -> Result<Self> {
        if u < v {
            Ok(EdgeKey { lo: u, hi: v })
        } else {
            Err(Error::Parameter(format!(
                "edge key ({u}, {v}) is not canonical; expected u < v"
            )))
        }
    }

    pub fn lo(self) -> VertexId {
        self.lo
    }

    pub fn hi(self) -> VertexId {
        self.hi
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.lo, self.hi)
    }

    /// The endpoint opposite to `x`.
    pub fn other(self, x: VertexId) -> VertexId {
        if x == self.lo {
            self.hi
        } else {
            self.lo
        }
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.lo, self.hi)
    }
}

/// Row-major bijection between `V_left × V_right` and product vertex ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductVertexCodec {
    pub left_count: usize,
    pub right_count: usize,
}

impl ProductVertexCodec {
    pub fn new(left_count: usize, right_count: usize) -> Result<Self> {
        left_count
            .checked_mul(right_count)
            .ok_or_else(|| Error::Capacity(format!("product of {left_count} and {right_count} vertices overflows")))?;
        Ok(ProductVertexCodec {
            left_count,
            right_count,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.left_count * self.right_count
    }

    pub fn encode(&self, left: VertexId, right: VertexId) -> VertexId {
        debug_assert!((left as usize) < self.left_count && (right as usize) < self.right_count);
        (left as usize * self.right_count + right as usize) as VertexId
    }

    pub fn decode(&self, v: VertexId) -> (VertexId, VertexId) {
        let v = v as usize;
        ((v / self.right_count) as VertexId, (v % self.right_count) as VertexId)
    }
}

/// Upper bounds enforced by every generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capacity {
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl Default for Capacity {
    fn default() -> Self {
        Capacity {
            max_vertices: 50_000_000,
            max_edges: 50_000_000,
        }
    }
}

impl Capacity {
    fn check(&self, vertices: usize, edges: usize) -> Result<()> {
        let hard = (u32::MAX - 1) as usize;
        if vertices > self.max_vertices.min(hard) {
            return Err(Error::Capacity(format!(
                "{vertices} vertices exceeds the limit of {}",
                self.max_vertices.min(hard)
            )));
        }
        if edges > self.max_edges.min(hard) {
            return Err(Error::Capacity(format!(
                "{edges} edges exceeds the limit of {}",
                self.max_edges.min(hard)
            )));
        }
        Ok(())
    }
}

/// Descriptor of how a graph was produced.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphMeta {
    /// Compact, whitespace-free description such as `rooted-tree(d=3,n=2)`.
    pub descriptor: String,
    pub root: Option<VertexId>,
    pub codec: Option<ProductVertexCodec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootedTreeSpec {
    pub degree: usize,
    pub depth: usize,
}

impl RootedTreeSpec {
    pub fn new(degree: usize, depth: usize) -> Result<Self> {
        if degree < 2 {
            return Err(Error::Parameter(format!(
                "rooted tree degree must be at least 2, got {degree}"
            )));
        }
        if depth < 1 {
            return Err(Error::Parameter(format!(
                "rooted tree depth must be at least 1, got {depth}"
            )));
        }
        Ok(RootedTreeSpec { degree, depth })
    }

    /// Closed-form vertex count; `None` on overflow.
    pub fn vertex_count(&self) -> Option<usize> {
        let (d, n) = (self.degree, self.depth);
        if d == 2 {
            return n.checked_mul(2)?.checked_add(1);
        }
        let pow = (d - 1).checked_pow(u32::try_from(n).ok()?)?;
        Some(1 + d.checked_mul(pow - 1)? / (d - 2))
    }
}

#[derive(Debug, Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<VertexId>,
    incident: Vec<u32>,
    edges: Vec<EdgeKey>,
    meta: GraphMeta,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(vertex_count: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Self> {
        Self::from_edges_with(vertex_count, edges, Capacity::default(), GraphMeta::default())
    }

    pub fn from_edges_with(
        vertex_count: usize,
        edges: Vec<(VertexId, VertexId)>,
        cap: Capacity,
        meta: GraphMeta,
    ) -> Result<Self> {
        cap.check(vertex_count, edges.len())?;
        let mut keys = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a as usize >= vertex_count || b as usize >= vertex_count {
                return Err(Error::Parameter(format!(
                    "edge {a}-{b} references a vertex outside [0, {vertex_count})"
                )));
            }
            if a == b {
                return Err(Error::Parameter(format!("self-loop at vertex {a}")));
            }
            keys.push(EdgeKey::canonical(a, b));
        }
        keys.sort_unstable();
        if let Some(w) = keys.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Parameter(format!("duplicate edge {}", w[0])));
        }
        Ok(Self::from_sorted_keys(vertex_count, keys, meta))
    }

    /// `keys` must be sorted, unique and in range.
    fn from_sorted_keys(vertex_count: usize, keys: Vec<EdgeKey>, meta: GraphMeta) -> Self {
        let mut degree = vec![0usize; vertex_count + 1];
        for k in &keys {
            degree[k.lo as usize] += 1;
            degree[k.hi as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(vertex_count + 1);
        let mut acc = 0;
        for d in degree.iter().take(vertex_count) {
            offsets.push(acc);
            acc += d;
        }
        offsets.push(acc);

        let mut fill = offsets.clone();
        let mut neighbors = vec![0; acc];
        let mut incident = vec![0u32; acc];
        for (i, k) in keys.iter().enumerate() {
            for (x, y) in [(k.lo, k.hi), (k.hi, k.lo)] {
                let slot = &mut fill[x as usize];
                neighbors[*slot] = y;
                incident[*slot] = i as u32;
                *slot += 1;
            }
        }
        // Sorted keys deliver each vertex's lower neighbors (ordered by `lo`)
        // before its higher ones (ordered by `hi`), so every list is sorted.
        debug_assert!((0..vertex_count).all(|v| neighbors[offsets[v]..offsets[v + 1]].windows(2).all(|w| w[0] < w[1])));

        Graph {
            offsets,
            neighbors,
            incident,
            edges: keys,
            meta,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge keys, sorted lexicographically. Positions in this slice
    /// are the edge indices used by [`Graph::incident_edges`].
    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Edge indices parallel to [`Graph::neighbors`].
    pub fn incident_edges(&self, v: VertexId) -> &[u32] {
        let v = v as usize;
        &self.incident[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn meta(&self) -> &GraphMeta {
        &self.meta
    }

    pub fn set_descriptor(&mut self, descriptor: impl Into<String>) {
        self.meta.descriptor = descriptor.into();
    }

    pub fn edge_index(&self, key: EdgeKey) -> Option<usize> {
        self.edges.binary_search(&key).ok()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        (a as usize) < self.vertex_count() && self.neighbors(a).binary_search(&b).is_ok()
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::Parameter(format!(
                "vertex {v} outside [0, {})",
                self.vertex_count()
            )))
        }
    }

    pub fn descriptor(&self) -> &str {
        if self.meta.descriptor.is_empty() {
            "custom"
        } else {
            &self.meta.descriptor
        }
    }
}

/// Path graph on `vertices` vertices, ids in order along the path.
pub fn build_path(vertices: usize) -> Result<Graph> {
    if vertices < 1 {
        return Err(Error::Parameter("a path needs at least one vertex".into()));
    }
    let edges = (1..vertices as VertexId).map(|i| (i - 1, i)).collect();
    Graph::from_edges_with(
        vertices,
        edges,
        Capacity::default(),
        GraphMeta {
            descriptor: format!("path(n={vertices})"),
            root: Some(0),
            codec: None,
        },
    )
}

pub fn build_rooted_tree(spec: RootedTreeSpec) -> Result<Graph> {
    build_rooted_tree_with(spec, Capacity::default())
}

/// Generates `T_d(n)` with ids in BFS order: the root is 0 and the children
/// of each vertex are contiguous. Ids of `T_d(n)` are a prefix of the ids of
/// `T_d(n + 1)`.
pub fn build_rooted_tree_with(spec: RootedTreeSpec, cap: Capacity) -> Result<Graph> {
    let spec = RootedTreeSpec::new(spec.degree, spec.depth)?;
    let count = spec
        .vertex_count()
        .ok_or_else(|| Error::Capacity(format!("T_{}({}) is too large", spec.degree, spec.depth)))?;
    cap.check(count, count - 1)?;

    let mut edges = Vec::with_capacity(count - 1);
    let mut level: Vec<VertexId> = vec![0];
    let mut next: VertexId = 1;
    for depth in 0..spec.depth {
        let children = if depth == 0 { spec.degree } else { spec.degree - 1 };
        let mut next_level = Vec::with_capacity(level.len() * children);
        for &parent in &level {
            for _ in 0..children {
                edges.push(EdgeKey { lo: parent, hi: next });
                next_level.push(next);
                next += 1;
            }
        }
        level = next_level;
    }
    debug_assert_eq!(next as usize, count);
    // BFS numbering gives parent < child and keys already in sorted order.
    Ok(Graph::from_sorted_keys(
        count,
        edges,
        GraphMeta {
            descriptor: format!("rooted-tree(d={},n={})", spec.degree, spec.depth),
            root: Some(0),
            codec: None,
        },
    ))
}

/// Axis-aligned `width × height` box of `Z²`; vertex `(x, y)` has id
/// `y * width + x`.
pub fn build_grid_box(width: usize, height: usize) -> Result<Graph> {
    build_grid_box_with(width, height, Capacity::default())
}

pub fn build_grid_box_with(width: usize, height: usize, cap: Capacity) -> Result<Graph> {
    if width < 1 || height < 1 {
        return Err(Error::Parameter(format!(
            "grid dimensions must be positive, got {width}x{height}"
        )));
    }
    let n = width
        .checked_mul(height)
        .ok_or_else(|| Error::Capacity("grid vertex count overflows".into()))?;
    cap.check(n, 2 * n - width - height)?;
    let mut edges = Vec::with_capacity(2 * n - width - height);
    for y in 0..height {
        for x in 0..width {
            let v = (y * width + x) as VertexId;
            if x + 1 < width {
                edges.push(EdgeKey { lo: v, hi: v + 1 });
            }
            if y + 1 < height {
                edges.push(EdgeKey {
                    lo: v,
                    hi: v + width as VertexId,
                });
            }
        }
    }
    Ok(Graph::from_sorted_keys(
        n,
        edges,
        GraphMeta {
            descriptor: format!("grid(w={width},h={height})"),
            root: None,
            codec: None,
        },
    ))
}

pub fn direct_product(left: &Graph, right: &Graph) -> Result<Graph> {
    direct_product_with(left, right, Capacity::default())
}

/// `(x1, y1) ~ (x2, y2)` iff the pair agrees in one coordinate and is
/// adjacent in the other factor.
pub fn direct_product_with(left: &Graph, right: &Graph, cap: Capacity) -> Result<Graph> {
    let codec = ProductVertexCodec::new(left.vertex_count(), right.vertex_count())?;
    let vertices = codec.vertex_count();
    let edge_count = left
        .vertex_count()
        .checked_mul(right.edge_count())
        .and_then(|a| {
            right
                .vertex_count()
                .checked_mul(left.edge_count())
                .and_then(|b| a.checked_add(b))
        })
        .ok_or_else(|| Error::Capacity("product edge count overflows".into()))?;
    cap.check(vertices, edge_count)?;

    let mut edges = Vec::with_capacity(edge_count);
    for x in 0..left.vertex_count() as VertexId {
        for y in 0..right.vertex_count() as VertexId {
            let v = codec.encode(x, y);
            for &y2 in right.neighbors(y).iter().filter(|&&y2| y2 > y) {
                edges.push(EdgeKey {
                    lo: v,
                    hi: codec.encode(x, y2),
                });
            }
            for &x2 in left.neighbors(x).iter().filter(|&&x2| x2 > x) {
                edges.push(EdgeKey {
                    lo: v,
                    hi: codec.encode(x2, y),
                });
            }
        }
    }
    edges.sort_unstable();
    let root = match (left.meta.root, right.meta.root) {
        (Some(a), Some(b)) => Some(codec.encode(a, b)),
        _ => None,
    };
    Ok(Graph::from_sorted_keys(
        vertices,
        edges,
        GraphMeta {
            descriptor: format!("product({},{})", left.descriptor(), right.descriptor()),
            root,
            codec: Some(codec),
        },
    ))
}

/// Multi-source BFS; unreached vertices get [`UNREACHED`].
pub fn bfs_distances(g: &Graph, sources: &[VertexId]) -> Vec<u32> {
    let mut dist = vec![UNREACHED; g.vertex_count()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s as usize] == UNREACHED {
            dist[s as usize] = 0;
            queue.push_back(s);
        }
    }
    while let Some(x) = queue.pop_front() {
        let dx = dist[x as usize];
        for &y in g.neighbors(x) {
            if dist[y as usize] == UNREACHED {
                dist[y as usize] = dx + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Hop distance between `u` and `v`; `Ok(None)` when they are not connected.
pub fn graph_distance(g: &Graph, u: VertexId, v: VertexId) -> Result<Option<usize>> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Ok(Some(0));
    }
    let mut dist = vec![UNREACHED; g.vertex_count()];
    let mut queue = VecDeque::from([u]);
    dist[u as usize] = 0;
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if dist[y as usize] == UNREACHED {
                dist[y as usize] = dist[x as usize] + 1;
                if y == v {
                    return Ok(Some(dist[y as usize] as usize));
                }
                queue.push_back(y);
            }
        }
    }
    Ok(None)
}

/// Number of connected components.
pub fn component_count(g: &Graph) -> usize {
    let mut seen = vec![false; g.vertex_count()];
    let mut count = 0;
    let mut stack = Vec::new();
    for s in 0..g.vertex_count() {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        stack.push(s as VertexId);
        while let Some(x) = stack.pop() {
            for &y in g.neighbors(x) {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y);
                }
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_consistent(g: &Graph) {
        let degree_sum: usize = (0..g.vertex_count() as VertexId).map(|v| g.degree(v)).sum();
        assert_eq!(degree_sum, 2 * g.edge_count());
        for (i, e) in g.edges().iter().enumerate() {
            assert!(e.lo() < e.hi());
            assert!((e.hi() as usize) < g.vertex_count());
            let pos = g.neighbors(e.lo()).binary_search(&e.hi()).unwrap();
            assert_eq!(g.incident_edges(e.lo())[pos] as usize, i);
        }
        for v in 0..g.vertex_count() as VertexId {
            assert!(g.neighbors(v).windows(2).all(|w| w[0] < w[1]));
        }
    }

    /// Independent BFS-style generation of `T_d(n)` that only counts.
    fn count_tree_by_generation(d: usize, n: usize) -> (usize, usize) {
        let mut frontier = vec![d];
        let mut vertices = 1;
        for level in 0..n {
            let mut next = Vec::new();
            for &children in &frontier {
                for _ in 0..children {
                    vertices += 1;
                    if level + 1 < n {
                        next.push(d - 1);
                    }
                }
            }
            frontier = next;
        }
        (vertices, vertices - 1)
    }

    #[test]
    fn rooted_tree_small_cases() {
        let p = build_rooted_tree(RootedTreeSpec::new(2, 1).unwrap()).unwrap();
        assert_eq!((p.vertex_count(), p.edge_count()), (3, 2));
        assert_eq!(p.degree(0), 2);

        let star = build_rooted_tree(RootedTreeSpec::new(3, 1).unwrap()).unwrap();
        assert_eq!((star.vertex_count(), star.edge_count()), (4, 3));
        assert_eq!(star.neighbors(0), &[1, 2, 3]);

        let t = build_rooted_tree(RootedTreeSpec::new(3, 4).unwrap()).unwrap();
        assert_eq!(count_tree_by_generation(3, 4), (46, 45));
        assert_eq!((t.vertex_count(), t.edge_count()), (46, 45));
        assert_eq!(1 + 3 * (2usize.pow(4) - 1), 46);
        check_consistent(&t);
    }

    #[test]
    fn rooted_tree_degrees_and_nesting() {
        for (d, n) in [(2, 5), (3, 3), (4, 3), (5, 2)] {
            let spec = RootedTreeSpec::new(d, n).unwrap();
            let t = build_rooted_tree(spec).unwrap();
            assert_eq!(Some(t.vertex_count()), spec.vertex_count());
            assert_eq!(t.vertex_count(), count_tree_by_generation(d, n).0);
            assert_eq!(component_count(&t), 1);
            let depth = bfs_distances(&t, &[0]);
            for v in 0..t.vertex_count() as VertexId {
                let expect = if depth[v as usize] as usize == n { 1 } else { d };
                assert_eq!(t.degree(v), expect, "d={d} n={n} v={v}");
            }
            let bigger = build_rooted_tree(RootedTreeSpec::new(d, n + 1).unwrap()).unwrap();
            for e in t.edges() {
                assert!(bigger.has_edge(e.lo(), e.hi()));
            }
        }
    }

    #[test]
    fn rooted_tree_rejects_bad_parameters() {
        assert!(matches!(RootedTreeSpec::new(1, 3), Err(Error::Parameter(_))));
        assert!(matches!(RootedTreeSpec::new(3, 0), Err(Error::Parameter(_))));
        let bad = RootedTreeSpec { degree: 1, depth: 2 };
        assert!(matches!(build_rooted_tree(bad), Err(Error::Parameter(_))));
        let huge = RootedTreeSpec::new(3, 40).unwrap();
        assert!(matches!(build_rooted_tree(huge), Err(Error::Capacity(_))));
    }

    #[test]
    fn product_of_two_edges_is_a_four_cycle() {
        let p2 = build_path(2).unwrap();
        let c4 = direct_product(&p2, &p2).unwrap();
        assert_eq!((c4.vertex_count(), c4.edge_count()), (4, 4));
        assert!((0..4).all(|v| c4.degree(v) == 2));
        assert_eq!(c4.meta().root, Some(0));
    }

    #[test]
    fn product_with_single_vertex_is_identity() {
        let g = build_grid_box(3, 2).unwrap();
        let point = build_path(1).unwrap();
        let h = direct_product(&g, &point).unwrap();
        assert_eq!(h.edges(), g.edges());
        let h = direct_product(&point, &g).unwrap();
        assert_eq!(h.edges(), g.edges());
    }

    #[test]
    fn star_times_edge_matches_brute_force() {
        let star = build_rooted_tree(RootedTreeSpec::new(3, 1).unwrap()).unwrap();
        let p2 = build_path(2).unwrap();
        let prod = direct_product(&star, &p2).unwrap();
        let codec = prod.meta().codec.unwrap();
        let mut brute = 0;
        for a in 0..8u32 {
            for b in (a + 1)..8u32 {
                let ((x1, y1), (x2, y2)) = (codec.decode(a), codec.decode(b));
                let adjacent = (x1 == x2 && p2.has_edge(y1, y2)) || (y1 == y2 && star.has_edge(x1, x2));
                assert_eq!(adjacent, prod.has_edge(a, b));
                brute += adjacent as usize;
            }
        }
        assert_eq!(brute, 10);
        assert_eq!((prod.vertex_count(), prod.edge_count()), (8, 10));
        check_consistent(&prod);
    }

    #[test]
    fn product_capacity_is_enforced() {
        let a = build_path(1000).unwrap();
        let cap = Capacity {
            max_vertices: 10_000,
            max_edges: 10_000,
        };
        assert!(matches!(direct_product_with(&a, &a, cap), Err(Error::Capacity(_))));
    }

    #[test]
    fn grid_boxes() {
        let g = build_grid_box(1, 1).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 0));
        let g = build_grid_box(2, 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 4));
        assert!((0..4).all(|v| g.degree(v) == 2));
        let g = build_grid_box(5, 4).unwrap();
        let mut enumerated = 0;
        for a in 0..20usize {
            for b in (a + 1)..20 {
                let (ax, ay, bx, by) = (a % 5, a / 5, b % 5, b / 5);
                if ax.abs_diff(bx) + ay.abs_diff(by) == 1 {
                    enumerated += 1;
                    assert!(g.has_edge(a as u32, b as u32));
                }
            }
        }
        assert_eq!(enumerated, 2 * 5 * 4 - 5 - 4);
        assert_eq!((g.vertex_count(), g.edge_count()), (20, 31));
        assert!(build_grid_box(0, 3).is_err());
    }

    #[test]
    fn distances() {
        let g = build_grid_box(3, 3).unwrap();
        assert_eq!(graph_distance(&g, 4, 4).unwrap(), Some(0));
        assert_eq!(graph_distance(&g, 0, 1).unwrap(), Some(1));
        assert_eq!(graph_distance(&g, 0, 8).unwrap(), Some(4));
        assert!(graph_distance(&g, 0, 9).is_err());
        let split = Graph::from_edges(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(graph_distance(&split, 0, 3).unwrap(), None);
    }

    /// Exhaustive path search on the 3x3 grid as an oracle for the corner
    /// distance.
    #[test]
    fn grid_corner_distance_exhaustive() {
        let g = build_grid_box(3, 3).unwrap();
        fn shortest(g: &Graph, at: u32, goal: u32, seen: &mut Vec<bool>, len: usize, best: &mut usize) {
            if at == goal {
                *best = (*best).min(len);
                return;
            }
            for &n in g.neighbors(at) {
                if !seen[n as usize] {
                    seen[n as usize] = true;
                    shortest(g, n, goal, seen, len + 1, best);
                    seen[n as usize] = false;
                }
            }
        }
        let mut seen = vec![false; 9];
        seen[0] = true;
        let mut best = usize::MAX;
        shortest(&g, 0, 8, &mut seen, 0, &mut best);
        assert_eq!(best, 4);
    }

    #[test]
    fn from_edges_validation() {
        assert!(Graph::from_edges(3, vec![(0, 0)]).is_err());
        assert!(Graph::from_edges(3, vec![(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, vec![(0, 3)]).is_err());
        assert!(EdgeKey::try_new(2, 1).is_err());
        assert_eq!(EdgeKey::canonical(5, 2), EdgeKey::try_new(2, 5).unwrap());
    }

    #[test]
    fn codec_round_trip() {
        let c = ProductVertexCodec::new(7, 5).unwrap();
        for v in 0..35 {
            let (x, y) = c.decode(v);
            assert_eq!(c.encode(x, y), v);
        }
        assert!(ProductVertexCodec::new(usize::MAX, 2).is_err());
    }
}
