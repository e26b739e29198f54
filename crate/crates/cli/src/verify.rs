//! Fixture verification: every `*.json` in a directory is a composed loop
//! file (`params` plus `loop`) and is checked against the identity suite.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use loopfact::factor::{
    rootsub_factorize, szego_widom_value, verify_identities, weighted_a_product, ReportLine,
    Tolerances,
};
use loopfact::laurent::CircleGrid;
use loopfact::toeplitz::det_a_star_a;
use serde::Serialize;

use crate::commands::{compose, load_loop};
use crate::config::RunConfig;

#[derive(Debug, Serialize)]
pub struct FixtureReport {
    pub file: String,
    pub lines: Vec<ReportLine>,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub fixtures: usize,
    pub lines: usize,
    pub failed: usize,
    pub all_pass: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub fixtures: Vec<FixtureReport>,
    pub summary: Summary,
}

fn failure(name: &str, err: &anyhow::Error) -> ReportLine {
    let mut line = ReportLine::vanishing(name, f64::INFINITY, 0.0);
    line.identity_name = format!("{name}: {err:#}");
    line
}

fn check_fixture(path: &Path, cfg: &RunConfig, grid: &CircleGrid) -> Vec<ReportLine> {
    let (g, params) = match load_loop(path) {
        Ok((g, Some(p))) => (g, p),
        Ok((_, None)) => return vec![failure("fixture_parse", &anyhow::anyhow!("no params"))],
        Err(e) => return vec![failure("fixture_parse", &e)],
    };
    let n = cfg.trunc;
    let data = params.to_data();
    let mut lines = Vec::new();
    match compose(params.clone(), cfg) {
        Ok(c) => lines.push(ReportLine::vanishing(
            "compose_reproduces_loop",
            c.loop_.grid_distance(&g, grid),
            cfg.tol,
        )),
        Err(e) => lines.push(failure("compose_reproduces_loop", &e)),
    }
    let closed = weighted_a_product(&data.eta) * szego_widom_value(&data.chi) * weighted_a_product(&data.zeta);
    lines.push(ReportLine::compare(
        "det_AstarA_loop_vs_closed_form",
        det_a_star_a(&g, n),
        closed,
        Tolerances::default().product,
    ));
    match verify_identities(&data, n, grid, &Tolerances::default()) {
        Ok(more) => lines.extend(more),
        Err(e) => lines.push(failure("identity_suite", &e.into())),
    }
    match rootsub_factorize(&g, n, cfg.tol, grid) {
        Ok(f) => lines.push(ReportLine::vanishing(
            "rootsub_recovers_params",
            f.data.distance(&data),
            1e-8,
        )),
        Err(e) => lines.push(failure("rootsub_recovers_params", &e.into())),
    }
    lines
}

/// Checks every fixture in `dir`, in file-name order.
pub fn verify_dir(dir: &Path, cfg: &RunConfig) -> Result<VerifyReport> {
    let grid = cfg.circle()?;
    let mut files: Vec<_> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let fixtures: Vec<FixtureReport> = files
        .iter()
        .map(|p| FixtureReport {
            file: p.file_name().unwrap_or_default().to_string_lossy().into_owned(),
            lines: check_fixture(p, cfg, &grid),
        })
        .collect();
    let lines = fixtures.iter().map(|f| f.lines.len()).sum();
    let failed = fixtures.iter().flat_map(|f| &f.lines).filter(|l| !l.pass).count();
    Ok(VerifyReport {
        summary: Summary { fixtures: fixtures.len(), lines, failed, all_pass: failed == 0 },
        fixtures,
    })
}
