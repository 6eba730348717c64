//! Seeded sampling helpers shared by the verification suites and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the closed disk of radius `max_radius`.
pub fn interior_point(rng: &mut ChaCha8Rng, max_radius: f64) -> [f64; 2] {
    let r = max_radius * rng.gen::<f64>().sqrt();
    let a = rng.gen::<f64>() * std::f64::consts::TAU;
    [r * a.cos(), r * a.sin()]
}

/// Uniform direction with Euclidean norm in `[rmin, rmax]`.
pub fn fiber_vector(rng: &mut ChaCha8Rng, rmin: f64, rmax: f64) -> [f64; 2] {
    let s = rmin + (rmax - rmin) * rng.gen::<f64>();
    let a = rng.gen::<f64>() * std::f64::consts::TAU;
    [s * a.cos(), s * a.sin()]
}
