//! Certified free-minimal-spanning-forest membership on finite windows of
//! infinite graphs.
//!
//! A window is a finite graph cut out of an ambient infinite graph, together
//! with its frontier: the window vertices that have ambient neighbors outside
//! the window. Each window edge is classified by growing strictly-cheaper
//! clusters from its endpoints:
//!
//! * the far endpoint is reached: `Removed`, witnessed by a path that exists
//!   in the ambient graph too;
//! * a cluster is exhausted without touching the frontier: `Retained`, since
//!   that cluster is also the ambient cluster;
//! * otherwise `Unknown`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cluster::ClusterSearch;
use crate::dsu::DisjointSetPartition;
use crate::error::{Error, Result};
use crate::graph::{
    bfs_distances, build_grid_box, build_rooted_tree, direct_product, EdgeKey, Graph, RootedTreeSpec, VertexId,
    UNREACHED,
};
use crate::labeling::{EdgeOrder, LabelSource};

pub const DEFAULT_MARGIN: u32 = 2;
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum WindowDescriptor {
    /// `T_d(R) × T_b(R)` inside `T_d × T_b`.
    TreeProduct {
        d: usize,
        b: usize,
        radius: usize,
        margin: u32,
    },
    /// `width × height` box inside `Z²`.
    Grid { width: usize, height: usize, margin: u32 },
    /// A finite grid box taken as its own ambient graph: no frontier.
    FiniteGrid { width: usize, height: usize },
    /// Any finite graph taken as its own ambient graph.
    Finite { vertices: usize, edges: usize },
}

#[derive(Debug, Clone)]
pub struct Window {
    graph: Graph,
    boundary: Vec<bool>,
    core: Vec<bool>,
    ambient_ids: Vec<u64>,
    descriptor: WindowDescriptor,
}

impl Window {
    /// General constructor. `ambient_ids` defaults to the vertex ids and must
    /// be injective.
    pub fn new(
        graph: Graph,
        boundary: &[VertexId],
        ambient_ids: Option<Vec<u64>>,
        margin: u32,
        descriptor: WindowDescriptor,
    ) -> Result<Self> {
        let n = graph.vertex_count();
        let mut is_boundary = vec![false; n];
        for &v in boundary {
            graph.check_vertex(v)?;
            is_boundary[v as usize] = true;
        }
        let ambient_ids = ambient_ids.unwrap_or_else(|| (0..n as u64).collect());
        if ambient_ids.len() != n {
            return Err(Error::Parameter(format!(
                "{} ambient ids for {n} vertices",
                ambient_ids.len()
            )));
        }
        let frontier: Vec<VertexId> = (0..n as VertexId).filter(|&v| is_boundary[v as usize]).collect();
        let dist = bfs_distances(&graph, &frontier);
        let core = dist
            .iter()
            .zip(&is_boundary)
            .map(|(&d, &b)| !b && (d == UNREACHED || d >= margin))
            .collect();
        Ok(Window {
            graph,
            boundary: is_boundary,
            core,
            ambient_ids,
            descriptor,
        })
    }

    /// The whole finite graph, with no frontier.
    pub fn finite(graph: Graph) -> Self {
        let descriptor = WindowDescriptor::Finite {
            vertices: graph.vertex_count(),
            edges: graph.edge_count(),
        };
        Window::new(graph, &[], None, 0, descriptor).expect("empty frontier is valid")
    }

    /// Ball `T_d(R) × T_b(R)` of the product of regular trees. Frontier
    /// vertices are those with a coordinate at depth `R`.
    pub fn tree_product(d: usize, b: usize, radius: usize, margin: u32) -> Result<Self> {
        let left = build_rooted_tree(RootedTreeSpec::new(d, radius)?)?;
        let right = build_rooted_tree(RootedTreeSpec::new(b, radius)?)?;
        let graph = direct_product(&left, &right)?;
        let codec = graph.meta().codec.expect("product records its codec");
        let left_depth = bfs_distances(&left, &[0]);
        let right_depth = bfs_distances(&right, &[0]);
        let r = radius as u32;
        let mut boundary = Vec::new();
        let mut ids = Vec::with_capacity(graph.vertex_count());
        for v in 0..graph.vertex_count() as VertexId {
            let (x, y) = codec.decode(v);
            if left_depth[x as usize] == r || right_depth[y as usize] == r {
                boundary.push(v);
            }
            // Factor ids are BFS-nested, so this identity is stable across radii.
            ids.push(((x as u64) << 32) | y as u64);
        }
        Window::new(
            graph,
            &boundary,
            Some(ids),
            margin,
            WindowDescriptor::TreeProduct { d, b, radius, margin },
        )
    }

    /// `width × height` box of `Z²` centred at the origin; frontier is the
    /// outer ring.
    pub fn grid_box(width: usize, height: usize, margin: u32) -> Result<Self> {
        let graph = build_grid_box(width, height)?;
        let mut boundary = Vec::new();
        let mut ids = Vec::with_capacity(graph.vertex_count());
        let centre = |len: usize, c: usize| (c as i64 - (len / 2) as i64 + (1i64 << 31)) as u64;
        for y in 0..height {
            for x in 0..width {
                if x == 0 || y == 0 || x + 1 == width || y + 1 == height {
                    boundary.push((y * width + x) as VertexId);
                }
                ids.push((centre(width, x) << 32) | centre(height, y));
            }
        }
        Window::new(
            graph,
            &boundary,
            Some(ids),
            margin,
            WindowDescriptor::Grid { width, height, margin },
        )
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn descriptor(&self) -> WindowDescriptor {
        self.descriptor
    }

    pub fn is_boundary(&self, v: VertexId) -> bool {
        self.boundary[v as usize]
    }

    pub fn boundary_mask(&self) -> &[bool] {
        &self.boundary
    }

    pub fn is_core(&self, v: VertexId) -> bool {
        self.core[v as usize]
    }

    pub fn core_count(&self) -> usize {
        self.core.iter().filter(|&&c| c).count()
    }

    pub fn ambient_id(&self, v: VertexId) -> u64 {
        self.ambient_ids[v as usize]
    }

    pub fn ambient_ids(&self) -> &[u64] {
        &self.ambient_ids
    }

    /// Ambient identity of a window edge, as an ordered pair.
    pub fn ambient_edge(&self, e: EdgeKey) -> (u64, u64) {
        let (a, b) = (self.ambient_id(e.lo()), self.ambient_id(e.hi()));
        (a.min(b), a.max(b))
    }

    /// Fixes a labeling of the ambient graph.
    pub fn labeled<L: LabelSource + ?Sized>(&self, labels: &L) -> LabeledWindow<'_> {
        LabeledWindow {
            window: self,
            order: EdgeOrder::with_ids(&self.graph, &self.ambient_ids, labels),
            budget: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeState {
    Removed,
    Retained,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Vertex path of strictly cheaper edges between the endpoints.
    Witness(Vec<VertexId>),
    /// Complete strictly-cheaper cluster of `from`, frontier-free and
    /// missing the other endpoint.
    Cluster { from: VertexId, vertices: Vec<VertexId> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeVerdict {
    pub state: EdgeState,
    pub certificate: Option<Certificate>,
    pub budget_exhausted: bool,
}

#[derive(Debug, Clone)]
pub struct LabeledWindow<'w> {
    window: &'w Window,
    order: EdgeOrder,
    budget: usize,
}

impl<'w> LabeledWindow<'w> {
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget.max(1);
        self
    }

    pub fn window(&self) -> &'w Window {
        self.window
    }

    pub fn order(&self) -> &EdgeOrder {
        &self.order
    }

    pub fn classify_edge(&self, e: EdgeKey) -> Result<EdgeVerdict> {
        let g = self.window.graph();
        let i = g
            .edge_index(e)
            .ok_or_else(|| Error::Parameter(format!("edge {e} is not in the window")))?;
        let mut search = ClusterSearch::new(g.vertex_count());
        Ok(self.classify_index(&mut search, i, true))
    }

    fn classify_index(&self, search: &mut ClusterSearch, i: usize, certify: bool) -> EdgeVerdict {
        let g = self.window.graph();
        let e = g.edges()[i];
        let threshold = self.order.rank(i);
        let boundary = Some(self.window.boundary_mask());
        let mut budget_exhausted = false;
        for (from, to) in [(e.lo(), e.hi()), (e.hi(), e.lo())] {
            let out = search.explore(g, &self.order, from, threshold, to, boundary, self.budget);
            if out.reached_target {
                return EdgeVerdict {
                    state: EdgeState::Removed,
                    certificate: certify.then(|| Certificate::Witness(search.path_to(g, to).expect("target reached"))),
                    budget_exhausted: false,
                };
            }
            if out.budget_exhausted {
                budget_exhausted = true;
                continue;
            }
            if !out.touched_boundary {
                return EdgeVerdict {
                    state: EdgeState::Retained,
                    certificate: certify.then(|| Certificate::Cluster {
                        from,
                        vertices: search.visited().to_vec(),
                    }),
                    budget_exhausted: false,
                };
            }
        }
        EdgeVerdict {
            state: EdgeState::Unknown,
            certificate: None,
            budget_exhausted,
        }
    }

    /// Classifies every window edge; edges are processed in parallel.
    pub fn classify_all(&self) -> WindowClassification {
        let g = self.window.graph();
        let verdicts: Vec<(EdgeState, bool)> = (0..g.edge_count())
            .into_par_iter()
            .map_init(
                || ClusterSearch::new(g.vertex_count()),
                |search, i| {
                    let v = self.classify_index(search, i, false);
                    (v.state, v.budget_exhausted)
                },
            )
            .collect();
        let budget_truncated = verdicts.iter().filter(|v| v.1).count();
        WindowClassification {
            states: verdicts.into_iter().map(|v| v.0).collect(),
            budget_truncated,
        }
    }

    /// Re-checks a certificate against the labels, independently of the
    /// search that produced it.
    pub fn verify(&self, e: EdgeKey, verdict: &EdgeVerdict) -> bool {
        let g = self.window.graph();
        let Some(i) = g.edge_index(e) else { return false };
        let threshold = self.order.rank(i);
        let cheaper = |a: VertexId, b: VertexId| {
            g.edge_index(EdgeKey::canonical(a, b))
                .is_some_and(|j| self.order.rank(j) < threshold)
        };
        match (&verdict.state, &verdict.certificate) {
            (EdgeState::Removed, Some(Certificate::Witness(path))) => {
                let ends = (path.first(), path.last());
                let joins = ends == (Some(&e.lo()), Some(&e.hi())) || ends == (Some(&e.hi()), Some(&e.lo()));
                joins && path.len() >= 3 && path.windows(2).all(|w| w[0] != w[1] && cheaper(w[0], w[1]))
            }
            (EdgeState::Retained, Some(Certificate::Cluster { from, vertices })) => {
                if *from != e.lo() && *from != e.hi() {
                    return false;
                }
                let mut members = vertices.clone();
                members.sort_unstable();
                members.dedup();
                let inside = |v: VertexId| members.binary_search(&v).is_ok();
                inside(*from)
                    && !inside(e.other(*from))
                    && members.iter().all(|&x| {
                        !self.window.is_boundary(x) && g.neighbors(x).iter().all(|&y| !cheaper(x, y) || inside(y))
                    })
            }
            (EdgeState::Unknown, None) => true,
            _ => false,
        }
    }
}

pub fn classify_edge<L: LabelSource + ?Sized>(w: &Window, labels: &L, e: EdgeKey) -> Result<EdgeVerdict> {
    w.labeled(labels).classify_edge(e)
}

pub fn classify_window<L: LabelSource + ?Sized>(w: &Window, labels: &L) -> WindowClassification {
    w.labeled(labels).classify_all()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowClassification {
    states: Vec<EdgeState>,
    budget_truncated: usize,
}

impl WindowClassification {
    /// States indexed like the window graph's edges.
    pub fn states(&self) -> &[EdgeState] {
        &self.states
    }

    pub fn count(&self, state: EdgeState) -> usize {
        self.states.iter().filter(|&&s| s == state).count()
    }

    /// Edges left `Unknown` because the node budget ran out.
    pub fn budget_truncated(&self) -> usize {
        self.budget_truncated
    }

    pub fn unknown_fraction(&self) -> f64 {
        if self.states.is_empty() {
            0.0
        } else {
            self.count(EdgeState::Unknown) as f64 / self.states.len() as f64
        }
    }
}

/// Component statistics of the certified forest restricted to the core.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentCensus {
    pub retained: usize,
    pub removed: usize,
    pub unknown: usize,
    pub core_vertices: usize,
    /// Components of the Retained-only forest that meet the core. `Unknown`
    /// edges may merge some of them, so this bounds the ambient count from
    /// above.
    pub core_components: usize,
}

impl ComponentCensus {
    pub fn components_per_core_vertex(&self) -> f64 {
        if self.core_vertices == 0 {
            0.0
        } else {
            self.core_components as f64 / self.core_vertices as f64
        }
    }

    pub fn unknown_fraction(&self) -> f64 {
        let total = self.retained + self.removed + self.unknown;
        if total == 0 {
            0.0
        } else {
            self.unknown as f64 / total as f64
        }
    }
}

pub fn census_components(w: &Window, c: &WindowClassification) -> ComponentCensus {
    let g = w.graph();
    let mut dsu = DisjointSetPartition::new(g.vertex_count());
    for (e, &s) in g.edges().iter().zip(c.states()) {
        if s == EdgeState::Retained {
            dsu.union(e.lo(), e.hi());
        }
    }
    let mut roots: Vec<u32> = (0..g.vertex_count() as VertexId)
        .filter(|&v| w.is_core(v))
        .map(|v| dsu.find(v))
        .collect();
    let core_vertices = roots.len();
    roots.sort_unstable();
    roots.dedup();
    ComponentCensus {
        retained: c.count(EdgeState::Retained),
        removed: c.count(EdgeState::Removed),
        unknown: c.count(EdgeState::Unknown),
        core_vertices,
        core_components: roots.len(),
    }
}
