//! Ambiguity-parameter algebra for the von Roos kinetic-energy operator
//!
//! ```text
//! T = ¼ (m^α p m^β p m^γ + m^γ p m^β p m^α),   α + β + γ = −1
//! ```
//!
//! Moving both momenta to the right (ħ² = 2) turns `(T + V)ψ = Eψ` into
//!
//! ```text
//! ψ'' − (m'/m) ψ' + [η₁ m'²/m² + η₂ m''/m + m (E − V)] ψ = 0
//! ```
//!
//! with `η₁ = ½(α² + γ² + αβ + γβ − α − γ)` and `η₂ = ½(α + γ)`. After the
//! Liouville change of variable the ordering survives only through the
//! combinations `η₁ − 7/16` and `η₂ + 1/4`; orderings zeroing both give a
//! constant-mass problem with the bare potential.

use std::fmt;

use crate::error::{Error, Result};

/// Target value of η₁ for which the `m'²/m³` term drops out of the mapped equation.
pub const ETA1_TARGET: f64 = 7.0 / 16.0;
/// Target value of η₂ for which the `m''/m²` term drops out of the mapped equation.
pub const ETA2_TARGET: f64 = -0.25;
/// Default tolerance for residual checks; the algebra is exact up to rounding.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// A triple (α, β, γ) of von Roos ambiguity parameters.
///
/// Any triple can be constructed; whether it satisfies `α + β + γ = −1` or
/// the mapping conditions is queried through [`check_constraints`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ordering {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Ordering {
    pub const fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }

    /// The ordering with α and γ exchanged. The operator is symmetrised in
    /// the outer exponents, so this describes the same Hamiltonian.
    pub fn swapped(self) -> Self {
        Self::new(self.gamma, self.beta, self.alpha)
    }

    pub fn etas(&self) -> EtaPair {
        compute_etas(*self)
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.alpha, self.beta, self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaPair {
    pub eta1: f64,
    pub eta2: f64,
}

pub fn compute_etas(o: Ordering) -> EtaPair {
    let Ordering { alpha, beta, gamma } = o;
    // Grouped through α + γ and α² + γ² so that α ↔ γ is bit-exact.
    let outer = alpha + gamma;
    EtaPair {
        eta1: 0.5 * (alpha * alpha + gamma * gamma + beta * outer - outer),
        eta2: 0.5 * outer,
    }
}

/// Residuals of the four conditions an ordering may be asked to satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintReport {
    /// `α + β + γ + 1`
    pub von_roos_residual: f64,
    /// `α − γ`
    pub symmetry_residual: f64,
    /// `η₁ − 7/16`
    pub eta1_residual: f64,
    /// `η₂ + 1/4`
    pub eta2_residual: f64,
}

/// Boolean view of a [`ConstraintReport`] at a given tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstraintFlags {
    pub von_roos: bool,
    pub symmetric: bool,
    pub eta1: bool,
    pub eta2: bool,
}

impl ConstraintFlags {
    /// Both mapping conditions hold, so the ordering term of the mapped
    /// equation vanishes identically.
    pub fn isospectral(&self) -> bool {
        self.eta1 && self.eta2
    }
}

impl ConstraintReport {
    pub fn flags(&self, tol: f64) -> ConstraintFlags {
        ConstraintFlags {
            von_roos: self.von_roos_residual.abs() <= tol,
            symmetric: self.symmetry_residual.abs() <= tol,
            eta1: self.eta1_residual.abs() <= tol,
            eta2: self.eta2_residual.abs() <= tol,
        }
    }

    pub fn max_abs(&self) -> f64 {
        [
            self.von_roos_residual,
            self.symmetry_residual,
            self.eta1_residual,
            self.eta2_residual,
        ]
        .iter()
        .fold(0.0_f64, |acc, r| acc.max(r.abs()))
    }
}

pub fn constraint_report(o: Ordering) -> ConstraintReport {
    let etas = compute_etas(o);
    ConstraintReport {
        von_roos_residual: o.alpha + o.beta + o.gamma + 1.0,
        symmetry_residual: o.alpha - o.gamma,
        eta1_residual: etas.eta1 - ETA1_TARGET,
        eta2_residual: etas.eta2 - ETA2_TARGET,
    }
}

/// Residual report together with its flags at `tol`.
pub fn check_constraints(o: Ordering, tol: f64) -> Result<(ConstraintReport, ConstraintFlags)> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be non-negative, got {tol}"
        )));
    }
    let report = constraint_report(o);
    Ok((report, report.flags(tol)))
}

/// How the two mapping conditions are solved for (α, γ) once β is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveMode {
    /// Substitute the η definitions into both conditions together with the
    /// sum rule. Reduces to `α + γ = −1/2`, `αγ = 1/16`, i.e.
    /// `16z² + 8z + 1 = 0` with the double root `z = −1/4`.
    Direct,
    /// Use the published quadratic `16γ² − 8γ − 1 = 0` with `α = −1/2 − γ`,
    /// giving `γ = (1 ± √2)/4`. These roots satisfy the sum rule and the η₂
    /// condition but leave `η₁ − 7/16 = (3 ∓ 2√2)/8`.
    PublishedQuadratic,
}

impl SolveMode {
    pub fn label(&self) -> &'static str {
        match self {
            SolveMode::Direct => "direct",
            SolveMode::PublishedQuadratic => "paper_table1",
        }
    }
}

impl std::str::FromStr for SolveMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(SolveMode::Direct),
            "paper_table1" => Ok(SolveMode::PublishedQuadratic),
            other => Err(Error::InvalidInput(format!(
                "unknown ordering mode `{other}` (expected `direct` or `paper_table1`)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolvedOrdering {
    pub ordering: Ordering,
    pub report: ConstraintReport,
    pub mode: SolveMode,
    /// Closed form of the root, e.g. `γ = (1 − √2)/4`.
    pub exact_form: &'static str,
}

/// Real roots of `a z² + b z + c = 0`, ascending. A discriminant that is
/// negative only by rounding is treated as zero.
fn real_quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    let scale = (b * b).max((4.0 * a * c).abs()).max(f64::MIN_POSITIVE);
    if disc < -64.0 * f64::EPSILON * scale {
        return Vec::new();
    }
    if disc <= 64.0 * f64::EPSILON * scale {
        return vec![-b / (2.0 * a)];
    }
    // Cancellation-free form.
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut roots = vec![q / a, c / q];
    roots.sort_by(|x, y| x.total_cmp(y));
    roots
}

/// Orderings that make the mapped equation free of ambiguity parameters.
///
/// Both modes start from `β = −1/2`, which follows from the sum rule and
/// `η₂ = −1/4`. Every result carries its residual report, so the mode that
/// leaves `η₁ − 7/16 ≠ 0` is visible to callers.
pub fn solve_isospectral_orderings(mode: SolveMode) -> Vec<SolvedOrdering> {
    // η₂ = (α+γ)/2 = −1/4 fixes the outer sum; the sum rule then fixes β.
    let outer_sum = 2.0 * ETA2_TARGET;
    let beta = -1.0 - outer_sum;

    let (gammas, forms): (Vec<f64>, [&'static str; 2]) = match mode {
        SolveMode::Direct => {
            // 2η₁ = α² + γ² + (β − 1)(α + γ)  ⇒  α² + γ² = 2η₁ − (β − 1)s,
            // αγ = (s² − (α² + γ²))/2; α, γ are roots of z² − s z + αγ.
            let sum_sq = 2.0 * ETA1_TARGET - (beta - 1.0) * outer_sum;
            let product = 0.5 * (outer_sum * outer_sum - sum_sq);
            // Scale by 16 to match the integer form 16z² + 8z + 1.
            let roots = real_quadratic_roots(16.0, -16.0 * outer_sum, 16.0 * product);
            (roots, ["α = γ = −1/4", "α = γ = −1/4"])
        }
        SolveMode::PublishedQuadratic => (
            real_quadratic_roots(16.0, -8.0, -1.0),
            ["α = −(3 − √2)/4, γ = (1 − √2)/4", "α = −(3 + √2)/4, γ = (1 + √2)/4"],
        ),
    };

    gammas
        .into_iter()
        .enumerate()
        .map(|(i, gamma)| {
            let ordering = Ordering::new(outer_sum - gamma, beta, gamma);
            SolvedOrdering {
                ordering,
                report: constraint_report(ordering),
                mode,
                exact_form: forms[i.min(1)],
            }
        })
        .collect()
}

/// A catalog entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NamedOrdering {
    pub name: &'static str,
    pub ordering: Ordering,
    pub description: &'static str,
}

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Fixed catalog of orderings addressable by name from the CLI.
///
/// | name                | (α, β, γ)                          |
/// |---------------------|------------------------------------|
/// | `symmetric-quarter` | (−1/4, −1/2, −1/4)                 |
/// | `table1-set1`       | (−(3−√2)/4, −1/2, (1−√2)/4)        |
/// | `table1-set2`       | (−(3+√2)/4, −1/2, (1+√2)/4)        |
/// | `bendaniel-duke`    | (0, −1, 0)                         |
/// | `zhu-kroemer`       | (−1/2, 0, −1/2)                    |
/// | `li-kuhn`           | (0, −1/2, −1/2)                    |
/// | `gora-williams`     | (−1, 0, 0)                         |
pub fn named_orderings() -> [NamedOrdering; 7] {
    [
        NamedOrdering {
            name: "symmetric-quarter",
            ordering: Ordering::new(-0.25, -0.5, -0.25),
            description: "α = γ = −1/4, β = −1/2; zeroes both mapping residuals",
        },
        NamedOrdering {
            name: "table1-set1",
            ordering: Ordering::new(-(3.0 - SQRT_2) / 4.0, -0.5, (1.0 - SQRT_2) / 4.0),
            description: "published quadratic, lower root γ = (1 − √2)/4",
        },
        NamedOrdering {
            name: "table1-set2",
            ordering: Ordering::new(-(3.0 + SQRT_2) / 4.0, -0.5, (1.0 + SQRT_2) / 4.0),
            description: "published quadratic, upper root γ = (1 + √2)/4",
        },
        NamedOrdering {
            name: "bendaniel-duke",
            ordering: Ordering::new(0.0, -1.0, 0.0),
            description: "p (1/m) p; η₁ = η₂ = 0",
        },
        NamedOrdering {
            name: "zhu-kroemer",
            ordering: Ordering::new(-0.5, 0.0, -0.5),
            description: "m^{-1/2} p p m^{-1/2}",
        },
        NamedOrdering {
            name: "li-kuhn",
            ordering: Ordering::new(0.0, -0.5, -0.5),
            description: "p m^{-1/2} p m^{-1/2}, symmetrised",
        },
        NamedOrdering {
            name: "gora-williams",
            ordering: Ordering::new(-1.0, 0.0, 0.0),
            description: "m^{-1} p p, symmetrised",
        },
    ]
}

pub fn lookup_ordering(name: &str) -> Result<Ordering> {
    let catalog = named_orderings();
    catalog
        .iter()
        .find(|entry| entry.name == name)
        .map(|entry| entry.ordering)
        .ok_or_else(|| Error::NotFound {
            kind: "ordering",
            name: name.to_string(),
            available: catalog.iter().map(|e| e.name).collect::<Vec<_>>().join(", "),
        })
}

/// Parses either a catalog name or an explicit `alpha,beta,gamma` triple.
pub fn parse_ordering(spec: &str) -> Result<Ordering> {
    let spec = spec.trim();
    if spec.contains(',') {
        let parts = spec
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("ordering component `{}` is not a number", p.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        match parts.as_slice() {
            [a, b, g] if parts.iter().all(|v| v.is_finite()) => Ok(Ordering::new(*a, *b, *g)),
            [_, _, _] => Err(Error::InvalidInput(format!(
                "ordering `{spec}` has non-finite components"
            ))),
            _ => Err(Error::InvalidInput(format!(
                "ordering `{spec}` must have exactly three comma-separated components"
            ))),
        }
    } else {
        lookup_ordering(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn etas_of_reference_orderings() {
        let bdd = compute_etas(Ordering::new(0.0, -1.0, 0.0));
        assert_eq!(bdd, EtaPair { eta1: 0.0, eta2: 0.0 });

        let quarter = compute_etas(Ordering::new(-0.25, -0.5, -0.25));
        assert_abs_diff_eq!(quarter.eta1, 7.0 / 16.0, epsilon = 1e-15);
        assert_abs_diff_eq!(quarter.eta2, -0.25, epsilon = 1e-15);

        let set1 = compute_etas(lookup_ordering("table1-set1").unwrap());
        assert_abs_diff_eq!(set1.eta1, (13.0 - 4.0 * SQRT_2) / 16.0, epsilon = 1e-15);
        assert_abs_diff_eq!(set1.eta1, 0.458947, epsilon = 1e-6);
        assert_abs_diff_eq!(set1.eta2, -0.25, epsilon = 1e-15);
    }

    #[test]
    fn constraint_residuals() {
        let (r, flags) = check_constraints(Ordering::new(0.0, -1.0, 0.0), 1e-12).unwrap();
        assert_eq!(r.von_roos_residual, 0.0);
        assert_eq!(r.eta1_residual, -0.4375);
        assert_eq!(r.eta2_residual, 0.25);
        assert!(flags.von_roos && flags.symmetric && !flags.eta1 && !flags.eta2);

        let (r, flags) = check_constraints(Ordering::new(-0.25, -0.5, -0.25), 1e-12).unwrap();
        assert_eq!(r.max_abs(), 0.0);
        assert!(flags.isospectral());

        let (r, _) = check_constraints(Ordering::new(0.0, 0.0, 0.0), 0.0).unwrap();
        assert_eq!(r.von_roos_residual, 1.0);

        assert!(check_constraints(Ordering::new(0.0, 0.0, 0.0), -1.0).is_err());
        assert!(check_constraints(Ordering::new(0.0, 0.0, 0.0), f64::NAN).is_err());
    }

    #[test]
    fn direct_mode_has_double_root() {
        let sols = solve_isospectral_orderings(SolveMode::Direct);
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].ordering, Ordering::new(-0.25, -0.5, -0.25));
        assert!(sols[0].report.max_abs() <= 1e-12);
    }

    #[test]
    fn published_mode_reproduces_table() {
        let sols = solve_isospectral_orderings(SolveMode::PublishedQuadratic);
        assert_eq!(sols.len(), 2);
        let expected = [
            (-(3.0 - SQRT_2) / 4.0, (1.0 - SQRT_2) / 4.0),
            (-(3.0 + SQRT_2) / 4.0, (1.0 + SQRT_2) / 4.0),
        ];
        for (sol, (a, g)) in sols.iter().zip(expected) {
            assert_abs_diff_eq!(sol.ordering.alpha, a, epsilon = 1e-15);
            assert_eq!(sol.ordering.beta, -0.5);
            assert_abs_diff_eq!(sol.ordering.gamma, g, epsilon = 1e-15);
            assert!(sol.report.von_roos_residual.abs() <= 1e-12);
            assert!(sol.report.eta2_residual.abs() <= 1e-12);
            assert!(sol.report.eta1_residual.abs() > 1e-3);
        }
    }

    /// Independent check of the direct solve: scan (α, γ) on a grid with
    /// β from the sum rule and minimise the two η residuals.
    #[test]
    fn grid_scan_agrees_with_direct_solve() {
        let steps = 2001;
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for i in 0..steps {
            for j in 0..steps {
                let alpha = -1.0 + 2.0 * i as f64 / (steps - 1) as f64;
                let gamma = -1.0 + 2.0 * j as f64 / (steps - 1) as f64;
                let o = Ordering::new(alpha, -1.0 - alpha - gamma, gamma);
                let e = compute_etas(o);
                let cost = (e.eta1 - 7.0 / 16.0).abs() + (e.eta2 + 0.25).abs();
                if cost < best.0 {
                    best = (cost, alpha, gamma);
                }
            }
        }
        assert!(best.0 < 1e-6, "scan minimum {}", best.0);
        assert_abs_diff_eq!(best.1, -0.25, epsilon = 1e-3);
        assert_abs_diff_eq!(best.2, -0.25, epsilon = 1e-3);
    }

    #[test]
    fn catalog_lookup() {
        assert_eq!(
            lookup_ordering("symmetric-quarter").unwrap(),
            Ordering::new(-0.25, -0.5, -0.25)
        );
        assert_eq!(
            lookup_ordering("bendaniel-duke").unwrap(),
            Ordering::new(0.0, -1.0, 0.0)
        );
        let set2 = lookup_ordering("table1-set2").unwrap();
        assert_abs_diff_eq!(set2.alpha, -(3.0 + SQRT_2) / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(set2.gamma, (1.0 + SQRT_2) / 4.0, epsilon = 1e-15);

        let err = lookup_ordering("nope").unwrap_err().to_string();
        assert!(err.contains("nope") && err.contains("bendaniel-duke"), "{err}");
        for entry in named_orderings() {
            assert!(
                constraint_report(entry.ordering).von_roos_residual.abs() <= 1e-12,
                "{}",
                entry.name
            );
        }
    }

    #[test]
    fn parse_ordering_forms() {
        assert_eq!(parse_ordering("0,-1,0").unwrap(), Ordering::new(0.0, -1.0, 0.0));
        assert_eq!(
            parse_ordering(" -0.25, -0.5 ,-0.25").unwrap(),
            Ordering::new(-0.25, -0.5, -0.25)
        );
        assert!(parse_ordering("1,2").is_err());
        assert!(parse_ordering("1,x,2").is_err());
        assert!(parse_ordering("inf,0,0").is_err());
        assert_eq!(parse_ordering("bendaniel-duke").unwrap(), Ordering::new(0.0, -1.0, 0.0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn etas_symmetric_under_outer_swap(a in -3.0..3.0f64, b in -3.0..3.0f64, g in -3.0..3.0f64) {
                let o = Ordering::new(a, b, g);
                prop_assert_eq!(compute_etas(o), compute_etas(o.swapped()));
            }

            #[test]
            fn eta2_vanishes_iff_outer_sum_is_minus_half(a in -2.0..2.0f64, g in -2.0..2.0f64, on_line in any::<bool>()) {
                // Half the cases are projected onto α + γ = −1/2.
                let g = if on_line { -0.5 - a } else { g };
                let o = Ordering::new(a, -1.0 - a - g, g);
                let residual = constraint_report(o).eta2_residual.abs();
                let on = (a + g + 0.5).abs() <= 1e-12;
                prop_assert_eq!(residual <= 1e-12, on);
            }
        }
    }
}
