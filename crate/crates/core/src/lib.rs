//! Monochromatic cycle partitions of edge-coloured graphs.
//!
//! The crate is organised by subsystem:
//!
//! * [`graph`]: coloured and uncoloured graphs, cycle families, exact oracles.
//! * [`matching`]: perfect 2-matchings, b-matchings and robust matchability.
//! * [`regularity`]: cluster partitions, reduced graphs and paths in dense pairs.
//! * [`covers`]: Pósa covers, the bipartite cover routine, sampling, exact-length cycles.
//! * [`constructions`]: lower-bound constructions and rainbow matchings.
//! * [`pipeline`]: the end-to-end partitioner and its verifier.
//! * [`generators`]: seeded instance generators with planted ground truth.

#![forbid(unsafe_code)]

pub mod constructions;
pub mod covers;
pub mod generators;
pub mod graph;
pub mod matching;
pub mod pipeline;
pub mod rational;
pub mod regularity;

pub use graph::{Colour, ColouredGraph, CycleFamily, CyclePiece, SimpleGraph};
pub use rational::Rational;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic RNG used throughout the crate.
pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent child seed for a named stage.
pub fn derive_seed(seed: u64, stage: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = seed ^ stage.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
