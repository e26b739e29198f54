//! Reproducible random parameters.
//!
//! Every draw is an independent uniform phase times a deterministic magnitude
//! set by a decay profile, so a seed fixes the output on every platform.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::factor::RootSubgroupData;
use crate::laurent::LaurentSeries;
use crate::rootsub::RootParams;

/// Generator name recorded in output metadata.
pub const PRNG_NAME: &str = "ChaCha8 (rand_chacha 0.3), seed_from_u64";

/// Magnitude law `|v_n| = amplitude * decay(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// `0.5^n`.
    Rapid,
    /// `n^-1.1`: `sum n |v_n|^2` converges, slowly.
    SobolevHalf,
    /// `n^-0.6`: square summable with divergent `sum n |v_n|^2`.
    L2Only,
}

impl Profile {
    pub fn decay(self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            Profile::Rapid => 0.5f64.powf(n),
            Profile::SobolevHalf => n.powf(-1.1),
            Profile::L2Only => n.powf(-0.6),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Profile::Rapid => "rapid",
            Profile::SobolevHalf => "sobolev_half",
            Profile::L2Only => "l2_only",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rapid" => Ok(Profile::Rapid),
            "sobolev_half" => Ok(Profile::SobolevHalf),
            "l2_only" => Ok(Profile::L2Only),
            other => Err(format!("unknown profile {other:?} (expected rapid, sobolev_half or l2_only)")),
        }
    }
}

/// Seeded source of parameters.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn phase(&mut self) -> Complex64 {
        Complex64::from_polar(1.0, self.rng.gen_range(0.0..TAU))
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// `amplitude * decay(n) * e^{i theta_n}` for `n = first..first + len`.
    pub fn sequence(&mut self, profile: Profile, amplitude: f64, first: usize, len: usize) -> Vec<Complex64> {
        (first..first + len)
            .map(|n| amplitude * profile.decay(n.max(1)) * self.phase())
            .collect()
    }

    pub fn zeta(&mut self, profile: Profile, amplitude: f64, support: usize) -> RootParams {
        RootParams::zeta(self.sequence(profile, amplitude, 1, support))
    }

    /// `eta_0..eta_{len-1}`; the magnitude of `eta_n` follows `decay(n + 1)`.
    pub fn eta(&mut self, profile: Profile, amplitude: f64, len: usize) -> RootParams {
        RootParams::eta(self.sequence(profile, amplitude, 1, len))
    }

    /// `chi = sum_{j=1}^{terms} c_j z^j` with `|c_j| = amplitude * decay(j)`.
    pub fn chi(&mut self, profile: Profile, amplitude: f64, terms: usize) -> LaurentSeries {
        let c = self.sequence(profile, amplitude, 1, terms);
        LaurentSeries::new(1, c)
    }

    /// Full coordinate set for composition.
    pub fn rootsub_data(&mut self, profile: Profile, amplitude: f64, support: usize, chi_terms: usize) -> RootSubgroupData {
        let eta = self.eta(profile, amplitude, support);
        let chi0 = Complex64::new(0.0, self.uniform(-3.0, 3.0));
        let chi = self.chi(profile, amplitude, chi_terms);
        let zeta = self.zeta(profile, amplitude, support);
        RootSubgroupData { eta, chi0, chi, zeta, residual: 0.0 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_profiled() {
        let a = Sampler::new(7).zeta(Profile::Rapid, 0.8, 5);
        let b = Sampler::new(7).zeta(Profile::Rapid, 0.8, 5);
        assert_eq!(a, b);
        for (k, v) in a.values.iter().enumerate() {
            assert!((v.norm() - 0.8 * 0.5f64.powi(k as i32 + 1)).abs() < 1e-15);
        }
        assert_ne!(a, Sampler::new(8).zeta(Profile::Rapid, 0.8, 5));
        assert_eq!("l2_only".parse::<Profile>().unwrap(), Profile::L2Only);
        assert!((Profile::SobolevHalf.decay(2) - 2f64.powf(-1.1)).abs() < 1e-15);
    }
}
