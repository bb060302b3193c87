//! Run configuration: command-line flags layered over an optional
//! `key = value` config file, layered over defaults.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use pdem::scattering::TransmissionMode;
use pdem::SolveMode;
use serde::Deserialize;

/// Settings shared by every subcommand. Each field is optional so that a
/// flag, a config-file entry or a default can supply it.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Mass left of the junction
    #[arg(long)]
    pub m1: Option<f64>,
    /// Mass right of the junction
    #[arg(long)]
    pub m2: Option<f64>,
    /// Step height V0 (ħ² = 2 units)
    #[arg(long = "v0")]
    pub v0: Option<f64>,
    /// Lowest sweep energy
    #[arg(long)]
    pub emin: Option<f64>,
    /// Highest sweep energy
    #[arg(long)]
    pub emax: Option<f64>,
    /// Number of sweep energies
    #[arg(long)]
    pub count: Option<usize>,
    /// Catalog name or explicit `alpha,beta,gamma`
    #[arg(long, allow_hyphen_values = true)]
    pub ordering: Option<String>,
    /// Ordering solve mode: direct | paper_table1
    #[arg(long)]
    pub mode: Option<String>,
    /// Sub-barrier transmission: physical | literal_eq25
    #[arg(long)]
    pub tmode: Option<String>,
    /// Mass profile m(x): catalog name or expression in x
    #[arg(long = "mass-expr", allow_hyphen_values = true)]
    #[serde(alias = "mass-expr")]
    pub mass_expr: Option<String>,
    /// Potential V(x): catalog name or expression in x
    #[arg(long = "pot-expr", allow_hyphen_values = true)]
    #[serde(alias = "pot-expr")]
    pub pot_expr: Option<String>,
    /// x interval as `lo,hi`
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
    /// Grid node count
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Number of bound-state levels to compare
    #[arg(long)]
    pub levels: Option<usize>,
    /// PASS threshold on the largest relative eigenvalue difference
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Settings {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: Settings) -> Settings {
        Settings {
            m1: self.m1.or(base.m1),
            m2: self.m2.or(base.m2),
            v0: self.v0.or(base.v0),
            emin: self.emin.or(base.emin),
            emax: self.emax.or(base.emax),
            count: self.count.or(base.count),
            ordering: self.ordering.or(base.ordering),
            mode: self.mode.or(base.mode),
            tmode: self.tmode.or(base.tmode),
            mass_expr: self.mass_expr.or(base.mass_expr),
            pot_expr: self.pot_expr.or(base.pot_expr),
            domain: self.domain.or(base.domain),
            nodes: self.nodes.or(base.nodes),
            levels: self.levels.or(base.levels),
            tol: self.tol.or(base.tol),
            out: self.out.or(base.out),
        }
    }
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub m1: f64,
    pub m2: f64,
    pub v0: f64,
    pub emin: f64,
    pub emax: f64,
    pub count: usize,
    pub ordering: String,
    pub mode: Option<SolveMode>,
    pub tmode: TransmissionMode,
    pub mass_expr: String,
    pub pot_expr: String,
    pub domain: (f64, f64),
    pub nodes: usize,
    pub levels: usize,
    pub tol: f64,
    pub out: Option<PathBuf>,
}

/// Per-command defaults that differ between subcommands.
#[derive(Debug, Clone, Copy)]
pub struct Defaults {
    pub nodes: usize,
}

impl Defaults {
    pub const ISOSPECTRAL: Defaults = Defaults { nodes: 4001 };
    pub const EFFECTIVE_POTENTIAL: Defaults = Defaults { nodes: 1001 };
    pub const OTHER: Defaults = Defaults { nodes: 1001 };
}

fn parse_domain(text: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [lo, hi] = parts.as_slice() else {
        bail!("domain `{text}` must be `lo,hi`");
    };
    let lo: f64 = lo
        .parse()
        .with_context(|| format!("domain bound `{lo}` is not a number"))?;
    let hi: f64 = hi
        .parse()
        .with_context(|| format!("domain bound `{hi}` is not a number"))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        bail!("domain [{lo}, {hi}] must be finite with lo < hi");
    }
    Ok((lo, hi))
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        bail!("{name} must be finite, got {v}")
    }
}

impl RunConfig {
    pub fn resolve(s: Settings, defaults: Defaults) -> Result<Self> {
        let count = s.count.unwrap_or(100);
        let nodes = s.nodes.unwrap_or(defaults.nodes);
        if count < 1 {
            bail!("count must be at least 1");
        }
        if nodes < pdem::grid::MIN_NODES {
            bail!("nodes must be at least {}, got {nodes}", pdem::grid::MIN_NODES);
        }
        let tol = finite("tol", s.tol.unwrap_or(1e-4))?;
        if tol < 0.0 {
            bail!("tol must be non-negative");
        }
        Ok(RunConfig {
            m1: finite("m1", s.m1.unwrap_or(1.0))?,
            m2: finite("m2", s.m2.unwrap_or(1.0))?,
            v0: finite("v0", s.v0.unwrap_or(1.0))?,
            emin: finite("emin", s.emin.unwrap_or(0.1))?,
            emax: finite("emax", s.emax.unwrap_or(10.0))?,
            count,
            ordering: s.ordering.unwrap_or_else(|| "symmetric-quarter".into()),
            mode: s.mode.as_deref().map(str::parse).transpose()?,
            tmode: s.tmode.as_deref().map(str::parse).transpose()?.unwrap_or_default(),
            mass_expr: s.mass_expr.unwrap_or_else(|| "lorentzian".into()),
            pot_expr: s.pot_expr.unwrap_or_else(|| "harmonic".into()),
            domain: s
                .domain
                .as_deref()
                .map(parse_domain)
                .transpose()?
                .unwrap_or((-10.0, 10.0)),
            nodes,
            levels: s.levels.unwrap_or(3),
            tol,
            out: s.out,
        })
    }
}
