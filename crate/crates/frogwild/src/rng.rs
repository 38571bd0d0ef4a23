//! Counter-based random streams.
//!
//! Every random decision in the simulator draws from a stream keyed by
//! `(global seed, purpose, id triple)` instead of from a shared sequential
//! generator. Outcomes are therefore independent of execution order and of
//! the number of worker threads: the coin flipped for mirror 3 of vertex 17
//! in superstep 5 is the same coin no matter which thread reaches it first.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a stream is used for. Each variant gets a disjoint key space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    /// Initial frog placement.
    FrogBirth,
    /// Per-(vertex, superstep) death coins in apply.
    Death,
    /// Per-(vertex, superstep, mirror machine) synchronization coins.
    Sync,
    /// Per-(vertex, superstep) machine shuffle for ceil-division scatter.
    ScatterOrder,
    /// Per-(vertex, superstep, machine) uniform split over local out-edges.
    ScatterSplit,
    /// Per-(vertex, superstep, machine) binomial scatter draws.
    ScatterBinomial,
    /// Per-(vertex, superstep) uniform jumps out of dangling vertices.
    DanglingHop,
    /// Per-edge machine assignment in random-edge partitioning.
    PartitionEdge,
    /// Edge-order shuffle for the greedy partitioner.
    PartitionOrder,
    /// Per-(context, time) edge erasure draws.
    Erasure,
    /// Per-walker streams for the fixed-step sampler.
    WalkFixed,
    /// Per-walker streams for the truncated-geometric sampler.
    WalkGeometric,
    /// Per-walker streams for erasure-model walks.
    WalkErasure,
    /// Per-trial streams for intersection-probability Monte Carlo.
    MeetTrial,
    /// Synthetic suite-graph generation.
    SuiteGraph,
    /// Edge deletion for the sparsification baseline.
    Sparsify,
}

impl Purpose {
    fn tag(self) -> u64 {
        self as u64
    }
}

/// Root key for one run. Cheap to copy; every component derives its own
/// streams from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngKey {
    seed: u64,
}

impl RngKey {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Stream keyed by `(purpose, a, b, c)`. Unused ids should be 0.
    pub fn stream(&self, purpose: Purpose, a: u64, b: u64, c: u64) -> ChaCha8Rng {
        let mut h = self.seed ^ 0x46524f_47574c44; // domain constant
        h = absorb(h, purpose.tag());
        h = absorb(h, a);
        h = absorb(h, b);
        h = absorb(h, c);
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            h = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
            chunk.copy_from_slice(&mix(h).to_le_bytes());
        }
        ChaCha8Rng::from_seed(key)
    }
}

/// splitmix64 finalizer; full avalanche on 64 bits.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn absorb(h: u64, w: u64) -> u64 {
    mix(h.wrapping_add(0x9e37_79b9_7f4a_7c15) ^ mix(w))
}
