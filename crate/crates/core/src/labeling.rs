//! Deterministic i.i.d.-uniform edge labels.
//!
//! A label is a pure function of `(seed, lo, hi)`, computed by a counter-mode
//! mix rather than drawn from a sequential stream. Evaluation order and thread
//! scheduling therefore never affect the value an edge receives.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{EdgeKey, Graph};

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const LO_SALT: u64 = 0xd1b5_4a32_d192_ed03;
const HI_SALT: u64 = 0x8cb9_2ba7_2f3d_8dd7;

/// SplitMix64 finalizer: a bijective avalanche mix on 64 bits.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the `index`-th derived stream of `master` (trials, statistics,
/// per-vertex choices).
#[inline]
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master.wrapping_add(GOLDEN)) ^ index.wrapping_mul(GOLDEN).wrapping_add(LO_SALT))
}

/// Maps the top 53 bits of `h` onto the uniform grid in `[0, 1)`.
#[inline]
pub fn unit_interval(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform index in `[0, len)` from a 64-bit hash (multiply-shift).
#[inline]
pub fn bounded_index(h: u64, len: usize) -> usize {
    ((h as u128 * len as u128) >> 64) as usize
}

/// Anything that assigns labels to undirected edges named by a pair of
/// vertex identities `lo < hi`.
pub trait LabelSource {
    fn label(&self, lo: u64, hi: u64) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeLabeling {
    seed: u64,
}

impl EdgeLabeling {
    pub fn new(seed: u64) -> Self {
        EdgeLabeling { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn edge_label(&self, key: EdgeKey) -> f64 {
        self.label(key.lo() as u64, key.hi() as u64)
    }

    /// Label of the edge `(u, v)`; the pair must already be canonical.
    pub fn label_checked(&self, u: u64, v: u64) -> Result<f64> {
        if u >= v {
            return Err(Error::Parameter(format!(
                "edge key ({u}, {v}) is not canonical; expected u < v"
            )));
        }
        Ok(self.label(u, v))
    }
}

impl LabelSource for EdgeLabeling {
    #[inline]
    fn label(&self, lo: u64, hi: u64) -> f64 {
        debug_assert!(lo < hi);
        let mut h = mix64(self.seed.wrapping_add(GOLDEN));
        h = mix64(h ^ mix64(lo.wrapping_add(LO_SALT)));
        h = mix64(h ^ mix64(hi.wrapping_add(HI_SALT)));
        unit_interval(h)
    }
}

/// Explicit label table, mainly for fixtures. Missing edges panic.
#[derive(Debug, Clone, Default)]
pub struct TableLabels {
    table: HashMap<(u64, u64), f64>,
}

impl TableLabels {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, a: u64, b: u64, label: f64) -> &mut Self {
        self.table.insert((a.min(b), a.max(b)), label);
        self
    }
}

impl FromIterator<((u64, u64), f64)> for TableLabels {
    fn from_iter<I: IntoIterator<Item = ((u64, u64), f64)>>(iter: I) -> Self {
        let mut t = TableLabels::new();
        for ((a, b), l) in iter {
            t.set(a, b, l);
        }
        t
    }
}

impl LabelSource for TableLabels {
    fn label(&self, lo: u64, hi: u64) -> f64 {
        *self
            .table
            .get(&(lo, hi))
            .unwrap_or_else(|| panic!("no label for edge ({lo}, {hi})"))
    }
}

/// Strict total order on edges: by label, ties broken by the key.
pub fn total_order<L: LabelSource + ?Sized>(labels: &L, e1: EdgeKey, e2: EdgeKey) -> Ordering {
    let l1 = labels.label(e1.lo() as u64, e1.hi() as u64);
    let l2 = labels.label(e2.lo() as u64, e2.hi() as u64);
    compare_labeled(
        l1,
        (e1.lo() as u64, e1.hi() as u64),
        l2,
        (e2.lo() as u64, e2.hi() as u64),
    )
}

#[inline]
fn compare_labeled(l1: f64, k1: (u64, u64), l2: f64, k2: (u64, u64)) -> Ordering {
    l1.total_cmp(&l2).then(k1.cmp(&k2))
}

/// The edges of one graph ranked by the strict total order.
///
/// Edges may be labeled through an identity map `ids` (vertex id → ambient
/// identity) so that a finite window sees the labels of the infinite graph it
/// was cut from.
#[derive(Debug, Clone)]
pub struct EdgeOrder {
    labels: Vec<f64>,
    rank: Vec<u32>,
    sorted: Vec<u32>,
}

impl EdgeOrder {
    pub fn new<L: LabelSource + ?Sized>(g: &Graph, labels: &L) -> Self {
        Self::build(g, labels, |v| v as u64)
    }

    /// `ids` must be injective and have one entry per vertex.
    pub fn with_ids<L: LabelSource + ?Sized>(g: &Graph, ids: &[u64], labels: &L) -> Self {
        assert_eq!(ids.len(), g.vertex_count());
        Self::build(g, labels, |v| ids[v as usize])
    }

    fn build<L: LabelSource + ?Sized>(g: &Graph, labels: &L, id: impl Fn(u32) -> u64) -> Self {
        let keys: Vec<(u64, u64)> = g
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = (id(e.lo()), id(e.hi()));
                (a.min(b), a.max(b))
            })
            .collect();
        let values: Vec<f64> = keys.iter().map(|&(a, b)| labels.label(a, b)).collect();
        let mut sorted: Vec<u32> = (0..g.edge_count() as u32).collect();
        sorted.sort_unstable_by(|&i, &j| {
            let (i, j) = (i as usize, j as usize);
            compare_labeled(values[i], keys[i], values[j], keys[j])
        });
        let mut rank = vec![0u32; sorted.len()];
        for (r, &i) in sorted.iter().enumerate() {
            rank[i as usize] = r as u32;
        }
        EdgeOrder {
            labels: values,
            rank,
            sorted,
        }
    }

    /// Label of edge index `i`.
    pub fn label(&self, i: usize) -> f64 {
        self.labels[i]
    }

    /// Position of edge index `i` in the total order.
    pub fn rank(&self, i: usize) -> u32 {
        self.rank[i]
    }

    /// Edge indices from smallest to largest.
    pub fn ascending(&self) -> &[u32] {
        &self.sorted
    }

    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.rank[i] < self.rank[j]
    }
}
