//! Seedable randomness and the cluster-center sampler.
//!
//! Every randomized component draws from a [`SeedSource`], a splittable
//! 64-bit seed: deriving a child with a tag is pure, so the whole pipeline is
//! reproducible from one master seed, and distinct instances (groups, levels,
//! phases, bins) get independent streams. The generator behind a seed is
//! ChaCha12, which is portable across platforms.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::graph::NodeId;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A splittable deterministic seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedSource(u64);

impl SeedSource {
    pub fn new(seed: u64) -> Self {
        SeedSource(seed)
    }

    /// Derives an independent child seed; `child(a) != child(b)` for `a != b`
    /// and children of distinct parents do not collide in practice.
    pub fn child(self, tag: u64) -> Self {
        SeedSource(splitmix64(self.0 ^ splitmix64(tag ^ 0xA5A5_5A5A_0F0F_F0F0)))
    }

    pub fn rng(self) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(self.0)
    }
}

// Tags for the standard derivation paths through the pipeline.
pub(crate) const TAG_LEVEL: u64 = 0x4C00_0000_0000_0000;
pub(crate) const TAG_GROUP: u64 = 0x4700_0000_0000_0000;
pub(crate) const TAG_BOTTOM: u64 = 0x4200_0000_0000_0000;
pub(crate) const TAG_PHASE: u64 = 0x5000_0000_0000_0000;
pub(crate) const TAG_INNER: u64 = 0x4900_0000_0000_0000;
pub(crate) const TAG_BIN: u64 = 0x5700_0000_0000_0000;

/// Parameters of the center sampler.
#[derive(Clone, Copy, Debug)]
pub struct SamplingConfig {
    /// Error exponent; must be >= 1. Larger `a` makes sampling failures
    /// rarer at the cost of more centers.
    pub a: f64,
    pub seed: SeedSource,
    pub n: usize,
}

impl SamplingConfig {
    pub fn new(a: f64, seed: SeedSource, n: usize) -> Self {
        assert!(a >= 1.0, "error exponent must be >= 1");
        SamplingConfig { a, seed, n }
    }

    /// The union-bound exponent `x = a * ln(4 n^5) + 1`.
    pub fn x(&self) -> f64 {
        let n = self.n as f64;
        self.a * (4.0 * n.powi(5)).ln() + 1.0
    }

    /// Inclusion probability for degree threshold `d`: `min(x / d, 1)`.
    pub fn probability(&self, d: usize) -> f64 {
        (self.x() / d as f64).min(1.0)
    }
}

/// A fixed set of cluster centers `s_1 < s_2 < ... < s_k`, indexed in sorted
/// order so that "minimal cluster index" is well defined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterSet {
    centers: Vec<NodeId>,
    index: BTreeMap<NodeId, u32>,
}

impl CenterSet {
    pub fn from_sorted(centers: Vec<NodeId>) -> Self {
        debug_assert!(centers.windows(2).all(|w| w[0] < w[1]));
        let index = centers.iter().enumerate().map(|(i, &s)| (s, i as u32)).collect();
        CenterSet { centers, index }
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// The center node of cluster `i` (0-based index).
    pub fn node(&self, i: u32) -> NodeId {
        self.centers[i as usize]
    }

    /// Cluster index of `v` if `v` is a center.
    pub fn index_of(&self, v: NodeId) -> Option<u32> {
        self.index.get(&v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.centers.iter().copied()
    }
}

/// Samples centers: each node joins independently with probability
/// `min(x/d, 1)` where `x = a ln(4 n^5) + 1`.
pub fn sample_centers(cfg: &SamplingConfig, d: usize) -> CenterSet {
    assert!(d >= 1 && d <= cfg.n.max(1), "degree threshold out of range");
    let p = cfg.probability(d);
    let mut rng = cfg.seed.rng();
    let mut centers = Vec::new();
    for v in 0..cfg.n {
        // One draw per node even when p == 1, so the stream layout is
        // independent of the threshold.
        let roll = rng.random::<f64>();
        if roll < p {
            centers.push(NodeId(v as u32));
        }
    }
    CenterSet::from_sorted(centers)
}

/// Outcome of checking a center set against a family of large sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HittingCheck {
    /// Every set intersects the centers.
    pub hit: bool,
    /// `|S| <= 3 x n / q`.
    pub size_ok: bool,
}

/// Verifies the two hitting-set properties for sets of size at least `q`.
pub fn check_hitting(
    cfg: &SamplingConfig,
    centers: &CenterSet,
    sets: &[BTreeSet<NodeId>],
    q: usize,
) -> HittingCheck {
    assert!(sets.iter().all(|s| s.len() >= q), "every set must have size >= q");
    let hit = sets.iter().all(|s| s.iter().any(|v| centers.index_of(*v).is_some()));
    let bound = 3.0 * cfg.x() * cfg.n as f64 / q as f64;
    HittingCheck { hit, size_ok: (centers.len() as f64) <= bound }
}
