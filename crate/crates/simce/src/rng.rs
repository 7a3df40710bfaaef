//! Deterministic random-number streams.
//!
//! Every random quantity in the crate is drawn from a counter-based substream
//! of one master seed, so results are bit-reproducible regardless of execution
//! order or worker count:  restart `i`, codebook entry `i`, and Monte-Carlo
//! trial `t` each own an independent ChaCha stream addressed by
//! `(domain, index)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

/// Stream domains; keeps indices from different purposes disjoint.
#[derive(Debug, Clone, Copy)]
pub enum Domain {
    Restart = 1,
    Codebook = 2,
    Trial = 3,
    Instance = 4,
}

/// An independent generator for `(seed, domain, index)`.
pub fn substream(seed: u64, domain: Domain, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(((domain as u64) << 56) ^ index);
    rng
}

/// Standard circularly-symmetric complex Gaussian: unit total variance,
/// real and imaginary parts each of variance 1/2.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}
