//! Subcommand bodies. Each returns the JSON body that goes after the metadata.

use std::path::Path;

use anyhow::{bail, Context, Result};
use loopfact::combinat::full_x;
use loopfact::factor::{
    compose_rootsub, name_gate, rootsub_factorize, x_from_zeta, zeta_from_x,
};
use loopfact::laurent::{unitarity_defect, LaurentSeries, LoopMatrix};
use loopfact::random::Sampler;
use loopfact::rootsub::RootParams;
use loopfact::toeplitz::{triangular, DEFAULT_INVERTIBILITY_TOL};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::RunConfig;
use crate::io::{field, read_json, Params};

/// Shape of generated parameters.
#[derive(Debug, Clone, Copy)]
pub struct Draw {
    pub support: usize,
    pub chi_terms: usize,
    pub amplitude: f64,
}

/// Parameters from `input`, or drawn from the seed when there is no input.
pub fn load_params(input: Option<&Path>, cfg: &RunConfig, draw: Draw) -> Result<Params> {
    let params = match input {
        Some(path) => field::<Params>(&read_json(path)?, "params", true)?,
        None => {
            let Some(seed) = cfg.seed else {
                bail!("give a parameter file or --seed");
            };
            let data = Sampler::new(seed).rootsub_data(cfg.profile, draw.amplitude, draw.support, draw.chi_terms);
            Params::from_data(&data)
        }
    };
    params.validate(cfg.tol)?;
    cfg.check_support(params.support())?;
    Ok(params)
}

#[derive(Serialize)]
pub struct Composed {
    pub params: Params,
    #[serde(rename = "loop")]
    pub loop_: LoopMatrix,
    pub unitarity_defect: f64,
}

pub fn compose(params: Params, cfg: &RunConfig) -> Result<Composed> {
    let grid = cfg.circle()?;
    let g = compose_rootsub(&params.to_data(), &grid);
    Ok(Composed {
        unitarity_defect: unitarity_defect(&g, &grid),
        params,
        loop_: g,
    })
}

#[derive(Serialize)]
pub struct TriangularFactors {
    pub l: LoopMatrix,
    pub m0: Complex64,
    pub a0: f64,
    pub u: LoopMatrix,
}

#[derive(Serialize)]
pub struct TriangularReport {
    pub residual: f64,
    /// Largest coefficient of `l` at a positive power or of `u` at a negative power.
    pub holomorphy_leak: f64,
    /// Distance of `l(inf)` and `u(0)` from unipotent form.
    pub normalization_defect: f64,
    pub rcond: f64,
}

#[derive(Serialize)]
pub struct TriangularOutput {
    pub mode: &'static str,
    pub factors: TriangularFactors,
    pub report: TriangularReport,
}

fn leak(g: &LoopMatrix, positive: bool) -> f64 {
    g.entries()
        .iter()
        .flat_map(|f| f.terms().filter(|&(p, _)| if positive { p > 0 } else { p < 0 }).map(|(_, c)| c.norm()))
        .fold(0.0, f64::max)
}

pub fn factor_triangular(g: &LoopMatrix, cfg: &RunConfig) -> Result<TriangularOutput> {
    let grid = cfg.circle()?;
    let t = triangular(g, cfg.trunc, DEFAULT_INVERTIBILITY_TOL).map_err(name_gate)?;
    let (l0, u0) = (t.l.coefficient(0), t.u.coefficient(0));
    let one = Complex64::new(1.0, 0.0);
    let normalization_defect = [l0[(0, 0)] - one, l0[(1, 1)] - one, l0[(0, 1)], u0[(0, 0)] - one, u0[(1, 1)] - one, u0[(1, 0)]]
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    Ok(TriangularOutput {
        mode: "triangular",
        report: TriangularReport {
            residual: g.grid_distance(&t.product(), &grid),
            holomorphy_leak: leak(&t.l, true).max(leak(&t.u, false)),
            normalization_defect,
            rcond: t.birkhoff.rcond,
        },
        factors: TriangularFactors { l: t.l, m0: t.m0, a0: t.a0, u: t.u },
    })
}

#[derive(Serialize)]
pub struct RootsubReport {
    /// Grid defect of the input against the product of the recovered factors.
    pub residual: f64,
    pub unitarity_defect: f64,
    pub consistency: f64,
    pub peel_remainder_k2: f64,
    pub peel_remainder_k1: f64,
    /// Distance to the parameters stored in the input, when it has any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params_distance: Option<f64>,
}

#[derive(Serialize)]
pub struct RootsubOutput {
    pub mode: &'static str,
    pub params: Params,
    pub a1: f64,
    pub a2: f64,
    pub k1: LoopMatrix,
    pub k2: LoopMatrix,
    pub report: RootsubReport,
}

pub fn factor_rootsub(g: &LoopMatrix, stored: Option<Params>, cfg: &RunConfig) -> Result<RootsubOutput> {
    let grid = cfg.circle()?;
    let f = rootsub_factorize(g, cfg.trunc, cfg.tol, &grid)?;
    let params_distance = stored.map(|p| f.data.distance(&p.to_data()));
    Ok(RootsubOutput {
        mode: "rootsub",
        params: Params::from_data(&f.data),
        a1: f.a1,
        a2: f.a2,
        report: RootsubReport {
            residual: f.data.residual,
            unitarity_defect: unitarity_defect(g, &grid),
            consistency: f.consistency,
            peel_remainder_k2: f.peel_remainders.0,
            peel_remainder_k1: f.peel_remainders.1,
            params_distance,
        },
        k1: f.k1,
        k2: f.k2,
    })
}

/// The loop of a loop file plus any parameters stored next to it.
pub fn load_loop(path: &Path) -> Result<(LoopMatrix, Option<Params>)> {
    let value = read_json(path)?;
    let g: LoopMatrix = field(&value, "loop", false)?;
    let params = match value.get("params") {
        Some(_) => Some(field(&value, "params", false)?),
        None => None,
    };
    Ok((g, params))
}

#[derive(Serialize)]
pub struct XOutput {
    pub zeta: Vec<Complex64>,
    /// Powers `>= 1`, from the residue route.
    pub x: LaurentSeries,
    /// Largest coefficient gap between the residue route and the recursion.
    pub route_deviation: f64,
}

pub fn x_from_zeta_cmd(zeta: Vec<Complex64>, cfg: &RunConfig) -> Result<XOutput> {
    let params = RootParams::zeta(zeta);
    let x = x_from_zeta(&params, cfg.tol)?;
    let route_deviation = x.distance(&full_x(&params));
    Ok(XOutput { zeta: params.values, x, route_deviation })
}

#[derive(Serialize)]
pub struct ZetaOutput {
    pub x: LaurentSeries,
    pub zeta: Vec<Complex64>,
    pub peel_remainder: f64,
}

pub fn zeta_from_x_cmd(x: LaurentSeries, cfg: &RunConfig) -> Result<ZetaOutput> {
    if let Some(p) = x.low_power().filter(|&p| p < 1) {
        bail!("x must only contain powers >= 1, found z^{p}");
    }
    let degree = x.high_power().unwrap_or(0).max(0) as usize;
    cfg.check_support(degree)?;
    let peeled = zeta_from_x(&x, cfg.trunc, cfg.tol).context("recovering zeta")?;
    Ok(ZetaOutput { x, zeta: peeled.zeta.values, peel_remainder: peeled.remainder_distance })
}
