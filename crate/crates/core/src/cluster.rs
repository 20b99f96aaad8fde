//! Breadth-first growth of sub-threshold clusters: the vertices reachable
//! from a start vertex using only edges that strictly precede a given edge in
//! the total order.

use crate::graph::{Graph, VertexId};
use crate::labeling::EdgeOrder;

const NO_EDGE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClusterOutcome {
    pub reached_target: bool,
    pub touched_boundary: bool,
    pub budget_exhausted: bool,
    pub visited: usize,
}

/// Reusable scratch space; one per worker thread.
#[derive(Debug, Clone)]
pub struct ClusterSearch {
    stamp: Vec<u32>,
    generation: u32,
    parent_edge: Vec<u32>,
    queue: Vec<VertexId>,
}

impl ClusterSearch {
    pub fn new(vertex_count: usize) -> Self {
        ClusterSearch {
            stamp: vec![0; vertex_count],
            generation: 0,
            parent_edge: vec![NO_EDGE; vertex_count],
            queue: Vec::new(),
        }
    }

    fn reset(&mut self, vertex_count: usize) {
        if self.stamp.len() != vertex_count {
            *self = ClusterSearch::new(vertex_count);
        }
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
        self.queue.clear();
    }

    /// Grows the cluster of `start` over edges ranked strictly below
    /// `threshold`. Stops as soon as `target` is reached or `budget` vertices
    /// have been visited. Boundary contact is recorded but does not stop the
    /// search, since the target may still be reachable inside the window.
    #[allow(clippy::too_many_arguments)]
    pub fn explore(
        &mut self,
        g: &Graph,
        order: &EdgeOrder,
        start: VertexId,
        threshold: u32,
        target: VertexId,
        boundary: Option<&[bool]>,
        budget: usize,
    ) -> ClusterOutcome {
        self.reset(g.vertex_count());
        let gen = self.generation;
        let is_boundary = |v: VertexId| boundary.is_some_and(|b| b[v as usize]);

        let mut out = ClusterOutcome {
            touched_boundary: is_boundary(start),
            visited: 1,
            ..Default::default()
        };
        self.stamp[start as usize] = gen;
        self.parent_edge[start as usize] = NO_EDGE;
        self.queue.push(start);
        let mut head = 0;
        while head < self.queue.len() {
            let x = self.queue[head];
            head += 1;
            for (&y, &e) in g.neighbors(x).iter().zip(g.incident_edges(x)) {
                if order.rank(e as usize) >= threshold || self.stamp[y as usize] == gen {
                    continue;
                }
                self.stamp[y as usize] = gen;
                self.parent_edge[y as usize] = e;
                out.visited += 1;
                if y == target {
                    out.reached_target = true;
                    return out;
                }
                if is_boundary(y) {
                    out.touched_boundary = true;
                }
                if out.visited >= budget {
                    out.budget_exhausted = true;
                    return out;
                }
                self.queue.push(y);
            }
        }
        out
    }

    /// Vertex path from the last search's start to `v`, if `v` was reached.
    pub fn path_to(&self, g: &Graph, v: VertexId) -> Option<Vec<VertexId>> {
        if self.stamp.get(v as usize) != Some(&self.generation) || self.generation == 0 {
            return None;
        }
        let mut path = vec![v];
        let mut cur = v;
        while self.parent_edge[cur as usize] != NO_EDGE {
            cur = g.edges()[self.parent_edge[cur as usize] as usize].other(cur);
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }

    /// Vertices visited by the last search, in discovery order. Only
    /// complete when the search ended without reaching its target or budget.
    pub fn visited(&self) -> &[VertexId] {
        &self.queue
    }
}
