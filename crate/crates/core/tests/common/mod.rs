#![allow(dead_code)]

use std::collections::BTreeSet;

use prodforest::graph::{Graph, VertexId};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random connected simple graph: a random recursive tree plus each other
/// pair independently with probability `extra`.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, extra: f64) -> Graph {
    let mut edges = BTreeSet::new();
    let mut order: Vec<VertexId> = (0..n as VertexId).collect();
    order.shuffle(rng);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (order[i], order[j]);
        edges.insert((a.min(b), a.max(b)));
    }
    for a in 0..n as VertexId {
        for b in (a + 1)..n as VertexId {
            if rng.gen_bool(extra) {
                edges.insert((a, b));
            }
        }
    }
    Graph::from_edges(n, edges.into_iter().collect()).unwrap()
}

/// Random simple graph with edge probability `p` (possibly disconnected).
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n as VertexId {
        for b in (a + 1)..n as VertexId {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}
