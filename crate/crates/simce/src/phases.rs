//! Phase programs for the metasurface stack.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use crate::{Error, Result};

/// The phase tensor parametrizing the wave-domain stage: one angle per
/// (sub-phase, layer, atom), each canonically wrapped into `[0, 2 pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseBook {
    num_subphases: usize,
    num_layers: usize,
    num_atoms: usize,
    /// Row-major over (sub-phase, layer, atom).
    theta: Vec<f64>,
}

/// Wraps an angle into `[0, 2 pi)`.
pub fn wrap_phase(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can return TAU when theta is a tiny negative number
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl PhaseBook {
    pub fn zeros(num_subphases: usize, num_layers: usize, num_atoms: usize) -> Self {
        PhaseBook {
            num_subphases,
            num_layers,
            num_atoms,
            theta: vec![0.0; num_subphases * num_layers * num_atoms],
        }
    }

    /// Builds from a flat row-major (sub-phase, layer, atom) buffer, wrapping
    /// every entry.
    pub fn from_flat(
        num_subphases: usize,
        num_layers: usize,
        num_atoms: usize,
        theta: Vec<f64>,
    ) -> Result<Self> {
        if theta.len() != num_subphases * num_layers * num_atoms {
            return Err(Error::Dimension(format!(
                "phase tensor length {} != {} x {} x {}",
                theta.len(),
                num_subphases,
                num_layers,
                num_atoms
            )));
        }
        let mut book = PhaseBook {
            num_subphases,
            num_layers,
            num_atoms,
            theta,
        };
        for t in &mut book.theta {
            *t = wrap_phase(*t);
        }
        Ok(book)
    }

    /// Uniform random phases on `[0, 2 pi)`.
    pub fn random<R: Rng + ?Sized>(
        num_subphases: usize,
        num_layers: usize,
        num_atoms: usize,
        rng: &mut R,
    ) -> Self {
        let theta = (0..num_subphases * num_layers * num_atoms)
            .map(|_| rng.random_range(0.0..TAU))
            .collect();
        PhaseBook {
            num_subphases,
            num_layers,
            num_atoms,
            theta,
        }
    }

    pub fn num_subphases(&self) -> usize {
        self.num_subphases
    }

    pub fn num_layers(&self) -> usize {
        self.num_layers
    }

    pub fn num_atoms(&self) -> usize {
        self.num_atoms
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.theta
    }

    #[inline]
    fn offset(&self, s: usize, l: usize) -> usize {
        (s * self.num_layers + l) * self.num_atoms
    }

    /// Angles of layer `l` in sub-phase `s`.
    pub fn layer(&self, s: usize, l: usize) -> &[f64] {
        let o = self.offset(s, l);
        &self.theta[o..o + self.num_atoms]
    }

    pub fn get(&self, s: usize, l: usize, n: usize) -> f64 {
        self.theta[self.offset(s, l) + n]
    }

    pub fn set(&mut self, s: usize, l: usize, n: usize, value: f64) {
        let o = self.offset(s, l) + n;
        self.theta[o] = wrap_phase(value);
    }

    /// Unit-modulus factors `exp(j theta)` of one layer slice.
    pub fn factors(&self, s: usize, l: usize) -> Vec<Complex64> {
        self.layer(s, l)
            .iter()
            .map(|&t| Complex64::from_polar(1.0, t))
            .collect()
    }

    /// Conjugate factors `exp(-j theta)` of one layer slice.
    pub fn conj_factors(&self, s: usize, l: usize) -> Vec<Complex64> {
        self.layer(s, l)
            .iter()
            .map(|&t| Complex64::from_polar(1.0, -t))
            .collect()
    }

    /// In-place gradient step `theta <- wrap(theta - step * grad)` over the
    /// full tensor.
    pub fn step(&mut self, grad: &[f64], step: f64) {
        debug_assert_eq!(grad.len(), self.theta.len());
        for (t, g) in self.theta.iter_mut().zip(grad) {
            *t = wrap_phase(*t - step * g);
        }
    }
}
