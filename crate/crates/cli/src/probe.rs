//! Diagnostics for parameter sequences outside the half-Sobolev class.
//!
//! The table records how quantities behave as the support grows. It draws no
//! conclusion and has no pass/fail state.

use anyhow::Result;
use loopfact::factor::x_from_zeta;
use loopfact::laurent::{unitarity_defect, CircleGrid};
use loopfact::random::Sampler;
use loopfact::rootsub::{full_product, RootParams};
use serde::Serialize;

use crate::config::RunConfig;

pub const LABEL: &str = "exploratory diagnostics only; no verdict is drawn";

#[derive(Debug, Serialize)]
pub struct ProbeRow {
    pub support: usize,
    /// `sum |zeta_n|^2`.
    pub zeta_l2_sq: f64,
    /// `sum n |zeta_n|^2`.
    pub zeta_w_half_sq: f64,
    /// `||x||_{l2}` of the truncated sequence.
    pub x_l2: f64,
    pub unitarity_defect: f64,
    /// `prod a(zeta_n)`.
    pub a_product: f64,
    /// Change of `a_product` from the previous row.
    pub a_product_step: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct ProbeTable {
    pub label: &'static str,
    pub amplitude: f64,
    pub rows: Vec<ProbeRow>,
}

/// Draws one sequence of the longest support and tabulates its nested truncations.
pub fn probe(cfg: &RunConfig, supports: &[usize], amplitude: f64) -> Result<ProbeTable> {
    let mut supports = supports.to_vec();
    supports.sort_unstable();
    supports.dedup();
    let longest = supports.last().copied().unwrap_or(0);
    let mut sampler = Sampler::new(cfg.seed.unwrap_or(0));
    let all = sampler.zeta(cfg.profile, amplitude, longest);
    let mut rows = Vec::with_capacity(supports.len());
    let mut previous: Option<f64> = None;
    for &k in &supports {
        let zeta = RootParams::zeta(all.values[..k].to_vec());
        let x = x_from_zeta(&zeta, cfg.tol)?;
        let grid = CircleGrid::resolving(k as i64 + 1, cfg.grid);
        let a = zeta.a_product();
        rows.push(ProbeRow {
            support: k,
            zeta_l2_sq: zeta.l2_norm_sq(),
            zeta_w_half_sq: zeta.w_half_norm_sq(),
            x_l2: x.l2_norm_sq().sqrt(),
            unitarity_defect: unitarity_defect(&full_product(&zeta), &grid),
            a_product: a,
            a_product_step: previous.map(|p| a - p),
        });
        previous = Some(a);
    }
    Ok(ProbeTable { label: LABEL, amplitude, rows })
}
