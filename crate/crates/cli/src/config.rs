use anyhow::{bail, Result};
use clap::Args;
use loopfact::laurent::{CircleGrid, DEFAULT_GRID_POINTS};
use loopfact::random::Profile;
use serde::Serialize;

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize)]
pub struct RunConfig {
    /// Truncation order N of the Toeplitz compressions.
    #[arg(long = "trunc", default_value_t = 48, global = true)]
    pub trunc: usize,
    /// Pass/fail and gating tolerance.
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub tol: f64,
    /// Number of points on the circle grid.
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS, global = true)]
    pub grid: usize,
    /// Seed for generated parameters.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Decay profile for generated parameters: rapid, sobolev_half or l2_only.
    #[arg(long, default_value_t = Profile::Rapid, global = true)]
    pub profile: Profile,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trunc == 0 {
            bail!("--trunc must be positive");
        }
        if !(self.tol > 0.0) {
            bail!("--tol must be positive");
        }
        if self.grid < 2 * self.trunc + 1 {
            bail!("--grid {} is below 2N+1 = {}", self.grid, 2 * self.trunc + 1);
        }
        Ok(())
    }

    /// Rejects parameter sets whose support needs more than `trunc / 2`.
    pub fn check_support(&self, support: usize) -> Result<()> {
        if self.trunc < 2 * support {
            bail!(
                "--trunc {} is below twice the support {support}; raise it to at least {}",
                self.trunc,
                2 * support
            );
        }
        Ok(())
    }

    pub fn circle(&self) -> Result<CircleGrid> {
        Ok(CircleGrid::new(self.grid)?)
    }
}
