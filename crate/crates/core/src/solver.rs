//! Bound-state eigenvalues of the mapped constant-mass equation and of the
//! PDEM problem it represents.
//!
//! Both problems are discretised with the symmetric three-point Laplacian on
//! a uniform `y` grid with Dirichlet ends, giving a symmetric tridiagonal
//! matrix whose lowest eigenvalues are found by Sturm bisection.

use crate::error::{Error, Result};
use crate::grid::{UniformGrid, MIN_NODES};
use crate::orderings::Ordering;
use crate::profile::{MassProfile, PotentialProfile};
use crate::transform::{CoordinateMap, MappedProblem};
use crate::tridiag;

fn check_request(grid: &UniformGrid, n: usize) -> Result<()> {
    if grid.len() < MIN_NODES {
        return Err(Error::InvalidInput(format!(
            "grid needs at least {MIN_NODES} nodes, got {}",
            grid.len()
        )));
    }
    if n == 0 || 4 * n >= grid.len() {
        return Err(Error::InvalidInput(format!(
            "number of levels must satisfy 0 < n < N/4 (n = {n}, N = {})",
            grid.len()
        )));
    }
    Ok(())
}

/// Lowest `n` eigenvalues of `−φ'' + V φ = E φ` with `φ = 0` at both ends of
/// `grid`. `potential` holds `V` at every node, edges included.
pub fn solve_constant_mass_1d(potential: &[f64], grid: &UniformGrid, n: usize) -> Result<Vec<f64>> {
    if potential.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "{} potential samples for a grid of {} nodes",
            potential.len(),
            grid.len()
        )));
    }
    check_request(grid, n)?;
    let h = grid.step();
    let kinetic = 1.0 / (h * h);
    let interior = &potential[1..potential.len() - 1];
    let diag: Vec<f64> = interior.iter().map(|v| 2.0 * kinetic + v).collect();
    let off = vec![-kinetic; diag.len() - 1];
    tridiag::lowest_eigenvalues(&diag, &off, n)
}

/// Lowest `n` eigenvalues of the PDEM problem with ordering `o` on the
/// interval spanned by `grid`.
///
/// The problem is mapped to `y = ∫_{lo}^{x} √m`, keeping the full
/// ordering-dependent term, and solved on a uniform `y` grid with the same
/// node count as `grid`.
pub fn solve_pdem_x(
    o: Ordering,
    m: &MassProfile,
    v: &PotentialProfile,
    grid: &UniformGrid,
    n: usize,
) -> Result<Vec<f64>> {
    let problem = mapped_problem(o, m, v, grid, n)?;
    solve_constant_mass_1d(&problem.effective_potential(), &problem.y_grid, n)
}

fn mapped_problem(
    o: Ordering,
    m: &MassProfile,
    v: &PotentialProfile,
    grid: &UniformGrid,
    n: usize,
) -> Result<MappedProblem> {
    check_request(grid, n)?;
    m.validate_on(grid.nodes())?;
    let map = CoordinateMap::on_interval(m.clone(), grid.lo(), grid.lo(), grid.hi())?;
    MappedProblem::build(o, &map, v, grid.len())
}

/// Paired spectra of the PDEM problem and of the bare-potential
/// constant-mass problem on the same `y` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenReport {
    pub ordering: Ordering,
    /// With the ordering term retained.
    pub x_space_eigenvalues: Vec<f64>,
    /// With the ordering term dropped.
    pub y_space_eigenvalues: Vec<f64>,
    pub abs_diffs: Vec<f64>,
    pub rel_diffs: Vec<f64>,
    pub nodes: usize,
    pub x_interval: (f64, f64),
    pub y_interval: (f64, f64),
    pub y_step: f64,
    /// Largest `|B|` over the grid.
    pub max_bracket: f64,
}

impl EigenReport {
    pub fn max_abs_diff(&self) -> f64 {
        self.abs_diffs.iter().fold(0.0, |a, &d| a.max(d))
    }

    pub fn max_rel_diff(&self) -> f64 {
        self.rel_diffs.iter().fold(0.0, |a, &d| a.max(d))
    }
}

/// Compares the PDEM spectrum against the constant-mass spectrum of the bare
/// potential `V(x(y))`. The two agree up to discretisation error exactly when
/// the ordering term vanishes.
pub fn isospectral_report(
    o: Ordering,
    m: &MassProfile,
    v: &PotentialProfile,
    grid: &UniformGrid,
    n: usize,
) -> Result<EigenReport> {
    let problem = mapped_problem(o, m, v, grid, n)?;
    let x_space = solve_constant_mass_1d(&problem.effective_potential(), &problem.y_grid, n)?;
    let y_space = solve_constant_mass_1d(&problem.potential, &problem.y_grid, n)?;
    let abs_diffs: Vec<f64> = x_space.iter().zip(&y_space).map(|(a, b)| (a - b).abs()).collect();
    let rel_diffs = abs_diffs
        .iter()
        .zip(&y_space)
        .map(|(d, b)| if *d == 0.0 { 0.0 } else { d / b.abs() })
        .collect();
    Ok(EigenReport {
        ordering: o,
        x_space_eigenvalues: x_space,
        y_space_eigenvalues: y_space,
        abs_diffs,
        rel_diffs,
        nodes: grid.len(),
        x_interval: (grid.lo(), grid.hi()),
        y_interval: (problem.y_grid.lo(), problem.y_grid.hi()),
        y_step: problem.y_grid.step(),
        max_bracket: problem.bracket.iter().fold(0.0, |a, b| a.max(b.abs())),
    })
}
