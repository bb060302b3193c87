//! Liouville change of variable `y = ∫ √m dx` and the ordering-dependent
//! term it leaves behind.
//!
//! In the mapped coordinate the PDEM equation becomes
//!
//! ```text
//! φ'' + [E − V(x(y)) + B(x(y))] φ = 0,
//! B = (η₁ − 7/16) m'²/m³ + (η₂ + 1/4) m''/m²
//! ```
//!
//! which is a constant-mass problem with effective potential `V − B`.

mod interp;
pub mod quadrature;

use crate::error::{Error, Result};
use crate::grid::UniformGrid;
use crate::orderings::{compute_etas, Ordering, ETA1_TARGET, ETA2_TARGET};
use crate::profile::{MassProfile, PotentialProfile};

pub use interp::cubic as cubic_interpolate;

/// Absolute tolerance for `∫ √m dx`.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;

/// Number of cached partial integrals across the domain.
const ANCHOR_SEGMENTS: usize = 64;

fn sqrt_mass(m: &MassProfile) -> impl Fn(f64) -> Result<f64> + '_ {
    move |s| {
        let v = m.mass_unchecked(s);
        if v > 0.0 && v.is_finite() {
            Ok(v.sqrt())
        } else if v.is_finite() {
            Err(Error::NonPositiveMass { x: s, mass: v })
        } else {
            Err(Error::NonFinite { x: s })
        }
    }
}

/// `y(x) = ∫_{x0}^{x} √m(s) ds`.
pub fn coordinate_map(m: &MassProfile, x0: f64, x: f64) -> Result<f64> {
    let p = m.profile();
    p.in_domain(x0)?;
    p.in_domain(x)?;
    quadrature::adaptive_simpson(&sqrt_mass(m), x0, x, QUADRATURE_TOLERANCE)
}

/// Inverse of [`coordinate_map`].
pub fn invert_map(m: &MassProfile, x0: f64, y: f64) -> Result<f64> {
    CoordinateMap::new(m.clone(), x0)?.invert(y)
}

/// The map `x ↦ y` for one mass profile and anchor, with cached partial
/// integrals so that repeated evaluation and inversion stay cheap.
#[derive(Debug, Clone)]
pub struct CoordinateMap {
    mass: MassProfile,
    x0: f64,
    lo: f64,
    hi: f64,
    anchor_x: Vec<f64>,
    anchor_y: Vec<f64>,
}

impl CoordinateMap {
    /// Map over the whole mass domain.
    pub fn new(mass: MassProfile, x0: f64) -> Result<Self> {
        let (lo, hi) = mass.domain();
        Self::on_interval(mass, x0, lo, hi)
    }

    /// Map restricted to `[lo, hi]`, which must lie inside the mass domain
    /// and contain the anchor `x0`.
    pub fn on_interval(mass: MassProfile, x0: f64, lo: f64, hi: f64) -> Result<Self> {
        mass.profile().in_domain(lo)?;
        mass.profile().in_domain(hi)?;
        if !(lo < hi) {
            return Err(Error::InvalidInput(format!("map interval [{lo}, {hi}] is empty")));
        }
        if !(x0 >= lo && x0 <= hi) {
            return Err(Error::Domain { x: x0, lo, hi });
        }
        let tol = QUADRATURE_TOLERANCE / ANCHOR_SEGMENTS as f64;
        let anchor_x: Vec<f64> = UniformGrid::new(lo, hi, ANCHOR_SEGMENTS + 1)?.to_vec();
        let anchor_y = {
            let integrand = sqrt_mass(&mass);
            let mut cumulative = Vec::with_capacity(anchor_x.len());
            cumulative.push(0.0);
            for w in anchor_x.windows(2) {
                let piece = quadrature::adaptive_simpson(&integrand, w[0], w[1], tol)?;
                cumulative.push(cumulative.last().copied().unwrap_or(0.0) + piece);
            }
            let idx = anchor_index(&anchor_x, x0);
            let base = cumulative[idx] + quadrature::adaptive_simpson(&integrand, anchor_x[idx], x0, tol)?;
            cumulative.into_iter().map(|c| c - base).collect()
        };
        Ok(Self {
            mass,
            x0,
            lo,
            hi,
            anchor_x,
            anchor_y,
        })
    }

    /// Anchored at the left edge of the mass domain.
    pub fn from_left_edge(mass: MassProfile) -> Result<Self> {
        let x0 = mass.domain().0;
        Self::new(mass, x0)
    }

    pub fn mass(&self) -> &MassProfile {
        &self.mass
    }

    pub fn anchor(&self) -> f64 {
        self.x0
    }

    /// The `x` interval covered by the map.
    pub fn interval(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Attainable `y` range over the mass domain.
    pub fn y_range(&self) -> (f64, f64) {
        (self.anchor_y[0], self.anchor_y[self.anchor_y.len() - 1])
    }

    pub fn y(&self, x: f64) -> Result<f64> {
        let slop = 1e-12 * (1.0 + self.lo.abs().max(self.hi.abs()));
        if !(x >= self.lo - slop && x <= self.hi + slop) {
            return Err(Error::Domain {
                x,
                lo: self.lo,
                hi: self.hi,
            });
        }
        let idx = anchor_index(&self.anchor_x, x);
        let tol = QUADRATURE_TOLERANCE / ANCHOR_SEGMENTS as f64;
        let piece = quadrature::adaptive_simpson(&sqrt_mass(&self.mass), self.anchor_x[idx], x, tol)?;
        Ok(self.anchor_y[idx] + piece)
    }

    /// `x(y)` by safeguarded Newton iteration, using `dy/dx = √m`.
    pub fn invert(&self, y: f64) -> Result<f64> {
        let (ylo, yhi) = self.y_range();
        let slop = 1e-12 * (1.0 + y.abs());
        if !(y >= ylo - slop && y <= yhi + slop) {
            return Err(Error::Range { y, lo: ylo, hi: yhi });
        }
        let y = y.clamp(ylo, yhi);
        // Bracketing anchor segment.
        let seg = self
            .anchor_y
            .partition_point(|&v| v <= y)
            .clamp(1, self.anchor_y.len() - 1)
            - 1;
        let (mut a, mut b) = (self.anchor_x[seg], self.anchor_x[seg + 1]);
        let (ya, yb) = (self.anchor_y[seg], self.anchor_y[seg + 1]);
        if y == ya {
            return Ok(a);
        }
        if y == yb {
            return Ok(b);
        }
        let mut x = a + (b - a) * (y - ya) / (yb - ya);
        let target = 1e-12 * (1.0 + y.abs());
        for _ in 0..100 {
            let residual = self.y(x)? - y;
            if residual.abs() <= target {
                return Ok(x);
            }
            if residual > 0.0 {
                b = x;
            } else {
                a = x;
            }
            let slope = self.mass.mass(x)?.sqrt();
            let newton = x - residual / slope;
            let next = if newton > a && newton < b {
                newton
            } else {
                0.5 * (a + b)
            };
            if (next - x).abs() <= 4.0 * f64::EPSILON * (1.0 + x.abs()) {
                return Ok(next);
            }
            x = next;
        }
        Ok(x)
    }
}

fn anchor_index(anchor_x: &[f64], x: f64) -> usize {
    anchor_x.partition_point(|&a| a <= x).clamp(1, anchor_x.len() - 1) - 1
}

/// Direction of [`map_wavefunction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapDirection {
    /// `φ = m^{1/4} ψ`, resampled onto a uniform `y` grid.
    XToY,
    /// `ψ = m^{-1/4} φ`, resampled onto a uniform `x` grid.
    YToX,
}

/// Samples on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSamples {
    pub grid: UniformGrid,
    pub values: Vec<f64>,
}

/// Moves wavefunction samples between the `x` and `y` pictures.
///
/// The source grid spans `[a, b]` in its own coordinate; the target grid has
/// the same node count and spans the image of `[a, b]`. Values are placed at
/// the mapped (non-uniform) source nodes and interpolated with local cubics.
pub fn map_wavefunction(
    map: &CoordinateMap,
    grid: &UniformGrid,
    samples: &[f64],
    direction: MapDirection,
) -> Result<GridSamples> {
    if samples.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "{} samples for a grid of {} nodes",
            samples.len(),
            grid.len()
        )));
    }
    if grid.len() < 4 {
        return Err(Error::GridMismatch("cubic resampling needs at least 4 nodes".into()));
    }
    let (mapped_nodes, mapped_values): (Vec<f64>, Vec<f64>) = grid
        .nodes()
        .zip(samples)
        .map(|(s, &v)| -> Result<(f64, f64)> {
            let (x, t) = match direction {
                MapDirection::XToY => (s, map.y(s)?),
                MapDirection::YToX => {
                    let x = map.invert(s).map_err(|e| match e {
                        Error::Range { .. } => Error::GridMismatch(format!(
                            "y node {s} is outside the attainable range {:?}",
                            map.y_range()
                        )),
                        other => other,
                    })?;
                    (x, x)
                }
            };
            let m = map.mass().mass(x)?;
            let factor = match direction {
                MapDirection::XToY => m.powf(0.25),
                MapDirection::YToX => m.powf(-0.25),
            };
            Ok((t, factor * v))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let target = UniformGrid::new(mapped_nodes[0], mapped_nodes[mapped_nodes.len() - 1], grid.len())?;
    let values = target
        .nodes()
        .map(|t| interp::cubic(&mapped_nodes, &mapped_values, t))
        .collect();
    Ok(GridSamples { grid: target, values })
}

/// `B(x) = (η₁ − 7/16) m'²/m³ + (η₂ + 1/4) m''/m²`, the term added to `E − V`
/// in the mapped equation.
pub fn effective_potential_term(o: Ordering, m: &MassProfile, x: f64) -> Result<f64> {
    let jet = m.jet(x)?;
    let etas = compute_etas(o);
    Ok(bracket(
        etas.eta1 - ETA1_TARGET,
        etas.eta2 - ETA2_TARGET,
        jet.value,
        jet.d1,
        jet.d2,
    ))
}

fn bracket(c1: f64, c2: f64, m: f64, dm: f64, d2m: f64) -> f64 {
    // Exact zeros must stay zero regardless of the derivative magnitudes.
    let first = if c1 == 0.0 { 0.0 } else { c1 * dm * dm / (m * m * m) };
    let second = if c2 == 0.0 { 0.0 } else { c2 * d2m / (m * m) };
    first + second
}

/// Coefficients `(c1, c0)` of `ψ'' + c1 ψ' + c0 ψ = 0` in `x` space
/// (ħ² = 2, so `2m/ħ² = m`).
pub fn x_space_coefficients(
    o: Ordering,
    m: &MassProfile,
    v: &PotentialProfile,
    energy: f64,
    x: f64,
) -> Result<(f64, f64)> {
    let jet = m.jet(x)?;
    let potential = v.profile().jet(x)?.value;
    let etas = compute_etas(o);
    let ratio = jet.d1 / jet.value;
    let c1 = -ratio;
    let c0 = etas.eta1 * ratio * ratio + etas.eta2 * jet.d2 / jet.value + jet.value * (energy - potential);
    Ok((c1, c0))
}

/// The mapped constant-mass problem on a uniform `y` grid.
#[derive(Debug, Clone)]
pub struct MappedProblem {
    pub ordering: Ordering,
    pub y_grid: UniformGrid,
    /// `x(y)` at each `y` node.
    pub x_of_y: Vec<f64>,
    /// `V(x(y))`.
    pub potential: Vec<f64>,
    /// `B(x(y))`.
    pub bracket: Vec<f64>,
}

impl MappedProblem {
    /// Tabulates the problem on `nodes` uniform points spanning the full
    /// image of the mass domain.
    pub fn build(o: Ordering, map: &CoordinateMap, v: &PotentialProfile, nodes: usize) -> Result<Self> {
        let (ylo, yhi) = map.y_range();
        let y_grid = UniformGrid::new(ylo, yhi, nodes)?;
        let (xlo, xhi) = map.interval();
        let mut x_of_y = Vec::with_capacity(nodes);
        let mut potential = Vec::with_capacity(nodes);
        let mut bracket_vals = Vec::with_capacity(nodes);
        for (i, y) in y_grid.nodes().enumerate() {
            let x = if i == 0 {
                xlo
            } else if i + 1 == nodes {
                xhi
            } else {
                map.invert(y)?
            };
            x_of_y.push(x);
            potential.push(v.potential(x)?);
            bracket_vals.push(effective_potential_term(o, map.mass(), x)?);
        }
        Ok(Self {
            ordering: o,
            y_grid,
            x_of_y,
            potential,
            bracket: bracket_vals,
        })
    }

    /// `V − B` at each node.
    pub fn effective_potential(&self) -> Vec<f64> {
        self.potential.iter().zip(&self.bracket).map(|(v, b)| v - b).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const QUARTER: Ordering = Ordering::new(-0.25, -0.5, -0.25);
    const BDD: Ordering = Ordering::new(0.0, -1.0, 0.0);

    #[test]
    fn coordinate_map_examples() {
        let unit = MassProfile::constant(1.0, -5.0, 5.0).unwrap();
        assert_abs_diff_eq!(coordinate_map(&unit, 0.0, 3.0).unwrap(), 3.0, epsilon = 1e-10);
        let four = MassProfile::constant(4.0, -5.0, 5.0).unwrap();
        assert_abs_diff_eq!(coordinate_map(&four, 0.0, 3.0).unwrap(), 6.0, epsilon = 1e-10);
        let quad = MassProfile::from_expr("(1 + x)^2", 0.0, 5.0).unwrap();
        assert_abs_diff_eq!(coordinate_map(&quad, 0.0, 2.0).unwrap(), 4.0, epsilon = 1e-10);
        assert_abs_diff_eq!(coordinate_map(&quad, 2.0, 0.0).unwrap(), -4.0, epsilon = 1e-10);
    }

    #[test]
    fn coordinate_map_errors() {
        let unit = MassProfile::constant(1.0, -5.0, 5.0).unwrap();
        assert!(matches!(coordinate_map(&unit, 0.0, 6.0), Err(Error::Domain { .. })));
        let sign_change = MassProfile::from_expr("x", -1.0, 1.0).unwrap();
        assert!(matches!(
            coordinate_map(&sign_change, 0.5, -0.5),
            Err(Error::NonPositiveMass { .. })
        ));
    }

    #[test]
    fn invert_map_examples() {
        let unit = MassProfile::constant(1.0, -5.0, 5.0).unwrap();
        assert_abs_diff_eq!(invert_map(&unit, 0.0, 3.0).unwrap(), 3.0, epsilon = 1e-10);
        let four = MassProfile::constant(4.0, -5.0, 5.0).unwrap();
        assert_abs_diff_eq!(invert_map(&four, 0.0, 6.0).unwrap(), 3.0, epsilon = 1e-10);
        let quad = MassProfile::from_expr("(1 + x)^2", 0.0, 5.0).unwrap();
        assert_abs_diff_eq!(invert_map(&quad, 0.0, 4.0).unwrap(), 2.0, epsilon = 1e-10);
        assert!(matches!(invert_map(&four, 0.0, 25.0), Err(Error::Range { .. })));
    }

    #[test]
    fn invert_meets_residual_contract() {
        let m = MassProfile::resolve("lorentzian", -10.0, 10.0).unwrap();
        let map = CoordinateMap::from_left_edge(m.clone()).unwrap();
        let (ylo, yhi) = map.y_range();
        for k in 0..=40 {
            let y = ylo + (yhi - ylo) * k as f64 / 40.0;
            let x = map.invert(y).unwrap();
            let back = coordinate_map(&m, -10.0, x).unwrap();
            assert!((back - y).abs() <= 1e-10 * (1.0 + y.abs()), "y = {y}: {back}");
        }
    }

    #[test]
    fn map_wavefunction_trivial_cases() {
        let unit = CoordinateMap::new(MassProfile::constant(1.0, 0.0, 2.0).unwrap(), 0.0).unwrap();
        let g = UniformGrid::new(0.0, 2.0, 21).unwrap();
        let psi: Vec<f64> = g.nodes().map(|x| (3.0 * x).sin()).collect();
        let phi = map_wavefunction(&unit, &g, &psi, MapDirection::XToY).unwrap();
        for (a, b) in phi.values.iter().zip(&psi) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }

        let heavy = CoordinateMap::new(MassProfile::constant(16.0, 0.0, 2.0).unwrap(), 0.0).unwrap();
        let ones = vec![1.0; g.len()];
        let phi = map_wavefunction(&heavy, &g, &ones, MapDirection::XToY).unwrap();
        assert_abs_diff_eq!(phi.grid.hi(), 8.0, epsilon = 1e-10);
        assert!(phi.values.iter().all(|v| (v - 2.0).abs() < 1e-12));

        assert!(matches!(
            map_wavefunction(&heavy, &g, &ones[1..], MapDirection::XToY),
            Err(Error::GridMismatch(_))
        ));
        let too_far = UniformGrid::new(0.0, 20.0, 21).unwrap();
        assert!(matches!(
            map_wavefunction(&heavy, &too_far, &ones, MapDirection::YToX),
            Err(Error::GridMismatch(_))
        ));
    }

    #[test]
    fn effective_potential_examples() {
        let constant = MassProfile::constant(3.0, -2.0, 2.0).unwrap();
        assert_eq!(effective_potential_term(BDD, &constant, 0.4).unwrap(), 0.0);
        let expo = MassProfile::resolve("exponential", -2.0, 2.0).unwrap();
        for x in [-1.5, 0.0, 0.8] {
            assert_eq!(effective_potential_term(QUARTER, &expo, x).unwrap(), 0.0);
            let expected = -0.75 * (-2.0 * x).exp();
            assert_abs_diff_eq!(
                effective_potential_term(BDD, &expo, x).unwrap(),
                expected,
                epsilon = 1e-13
            );
        }
    }

    #[test]
    fn effective_potential_rejects_discontinuities() {
        let p = crate::profile::Profile::from_fn(|x: f64| if x < 0.0 { 1.0 } else { 2.0 }, -1.0, 1.0)
            .unwrap()
            .with_discontinuities(vec![0.0]);
        let m = MassProfile::new(p);
        assert!(matches!(
            effective_potential_term(BDD, &m, 0.0),
            Err(Error::Discontinuity { .. })
        ));
        assert_eq!(effective_potential_term(BDD, &m, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn x_space_coefficient_examples() {
        let unit = MassProfile::constant(1.0, -1.0, 1.0).unwrap();
        let zero = PotentialProfile::from_expr("0", -1.0, 1.0).unwrap();
        assert_eq!(x_space_coefficients(BDD, &unit, &zero, 2.5, 0.3).unwrap(), (0.0, 2.5));

        let expo = MassProfile::resolve("exponential", -1.0, 1.0).unwrap();
        let (c1, c0) = x_space_coefficients(BDD, &expo, &zero, 0.0, 0.3).unwrap();
        assert_abs_diff_eq!(c1, -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c0, 0.0, epsilon = 1e-14);

        let harmonic = PotentialProfile::resolve("harmonic", -1.0, 1.0).unwrap();
        let x = 0.3;
        let (c1, c0) = x_space_coefficients(QUARTER, &expo, &harmonic, 1.7, x).unwrap();
        let m = (2.0 * x).exp();
        assert_abs_diff_eq!(c1, -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c0, 0.75 + m * (1.7 - x * x), epsilon = 1e-13);
    }

    #[test]
    fn mapped_problem_is_monotone() {
        let m = MassProfile::resolve("lorentzian", -6.0, 6.0).unwrap();
        let v = PotentialProfile::resolve("harmonic", -6.0, 6.0).unwrap();
        let map = CoordinateMap::from_left_edge(m).unwrap();
        let problem = MappedProblem::build(BDD, &map, &v, 201).unwrap();
        assert!(problem.x_of_y.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(problem.x_of_y[0], -6.0);
        assert_eq!(problem.x_of_y[200], 6.0);
        // B(0) = (1/4) m''/m² with m(0) = 2, m''(0) = −2.
        let mid = problem.x_of_y.iter().position(|x| x.abs() < 1e-9).unwrap();
        assert_abs_diff_eq!(problem.bracket[mid], -0.125, epsilon = 1e-9);
    }
}
