//! Transmission and reflection at an abrupt heterojunction.
//!
//! Mass and potential both jump at `x = 0`:
//!
//! ```text
//! m(x) = m1 (x < 0),  m2 (x > 0)        V(x) = 0 (x < 0),  V0 (x > 0)
//! ψ(x) = m1^{-1/4} (e^{i k1 x} + r e^{-i k1 x})   x < 0
//! ψ(x) = m2^{-1/4} t e^{i k2 x}                    x > 0
//! ```
//!
//! with `k1 = √(m1 E)` and `k2 = √(m2 (E − V0))` (ħ² = 2). Matching `ψ` and
//! `m^{-1/2} ψ'` across the interface gives
//!
//! ```text
//! r = (√E − √(E−V0)) / (√E + √(E−V0))
//! t = (m2/m1)^{1/4} · 2√E / (√E + √(E−V0))
//! R = |r|²,  T = 4 (m2/m1) √(E(E−V0)) / (√E + √(E−V0))²
//! ```
//!
//! `R` does not depend on the masses; `T` carries the mass ratio, so
//! `R + T = 1` only when `m1 = m2` and `T → m2/m1` as `E → ∞`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Abrupt junction between two materials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepJunction {
    m1: f64,
    m2: f64,
    v0: f64,
}

impl StepJunction {
    pub fn new(m1: f64, m2: f64, v0: f64) -> Result<Self> {
        if !(m1 > 0.0 && m1.is_finite()) {
            return Err(Error::NonPositiveMass { x: -1.0, mass: m1 });
        }
        if !(m2 > 0.0 && m2.is_finite()) {
            return Err(Error::NonPositiveMass { x: 1.0, mass: m2 });
        }
        if !v0.is_finite() {
            return Err(Error::InvalidInput(format!("step height must be finite, got {v0}")));
        }
        Ok(Self { m1, m2, v0 })
    }

    pub fn m1(&self) -> f64 {
        self.m1
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    /// `m2 / m1`. Not to be confused with the ordering parameter α.
    pub fn mass_ratio(&self) -> f64 {
        self.m2 / self.m1
    }
}

/// How `T` is evaluated below the step (`E < V0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransmissionMode {
    /// The transmitted wave is evanescent: `T = 0`, `R = 1`.
    #[default]
    Physical,
    /// Evaluate `4 (m2/m1) |√(E(E−V0))| / |√E + √(E−V0)|²` with complex
    /// square roots, as written, even though no flux is carried.
    Literal,
}

impl TransmissionMode {
    pub fn label(&self) -> &'static str {
        match self {
            TransmissionMode::Physical => "physical",
            TransmissionMode::Literal => "literal_eq25",
        }
    }
}

impl std::str::FromStr for TransmissionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "physical" => Ok(TransmissionMode::Physical),
            "literal_eq25" => Ok(TransmissionMode::Literal),
            other => Err(Error::InvalidInput(format!(
                "unknown transmission mode `{other}` (expected `physical` or `literal_eq25`)"
            ))),
        }
    }
}

/// Which linear system is solved for `(r, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchingRule {
    /// Continuity of `ψ` and `m^{-1/2} ψ'` applied to the plane waves.
    #[default]
    Continuity,
    /// Same first row, but the incident-side derivative row lacks the `k1`
    /// factor: `m1^{-3/4}(1 − r) = m2^{-3/4} k2 t`. Diagnostic only; it does
    /// not reproduce the closed-form `R` and `T`.
    UnscaledIncident,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringResult {
    pub energy: f64,
    pub k1: Complex64,
    pub k2: Complex64,
    pub r: Complex64,
    pub t: Complex64,
    pub reflectivity: f64,
    pub transmittivity: f64,
    /// `R + T`; equals 1 only for equal masses above the step.
    pub r_plus_t: f64,
}

fn check_energy(energy: f64) -> Result<()> {
    if energy > 0.0 && energy.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveEnergy { energy })
    }
}

/// `(k1, k2)`, with `k2 = i √(m2 (V0 − E))` below the step.
pub fn wavevectors(j: &StepJunction, energy: f64) -> Result<(Complex64, Complex64)> {
    check_energy(energy)?;
    let k1 = Complex64::new((j.m1 * energy).sqrt(), 0.0);
    let excess = energy - j.v0;
    let k2 = if excess >= 0.0 {
        Complex64::new((j.m2 * excess).sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (j.m2 * -excess).sqrt())
    };
    Ok((k1, k2))
}

/// `√(E − V0)` on the principal branch.
fn sqrt_excess(j: &StepJunction, energy: f64) -> Complex64 {
    let excess = energy - j.v0;
    if excess >= 0.0 {
        Complex64::new(excess.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-excess).sqrt())
    }
}

fn check_not_degenerate(j: &StepJunction, energy: f64) -> Result<()> {
    check_energy(energy)?;
    if energy == j.v0 {
        return Err(Error::DegenerateEnergy { energy });
    }
    Ok(())
}

/// Closed-form reflection and transmission amplitudes.
pub fn match_amplitudes(j: &StepJunction, energy: f64) -> Result<(Complex64, Complex64)> {
    check_not_degenerate(j, energy)?;
    let root_e = Complex64::new(energy.sqrt(), 0.0);
    let root_excess = sqrt_excess(j, energy);
    let denom = root_e + root_excess;
    let r = (root_e - root_excess) / denom;
    let t = j.mass_ratio().powf(0.25) * 2.0 * root_e / denom;
    Ok((r, t))
}

/// Solves the 2×2 matching system for `(r, t)` by Cramer's rule.
///
/// Unknowns ordered `(r, t)`:
///
/// ```text
/// [ m1^{-1/4}        −m2^{-1/4}      ] [r]   [ −m1^{-1/4}     ]
/// [ −m1^{-3/4} k1    −m2^{-3/4} k2   ] [t] = [ −m1^{-3/4} k1  ]
/// ```
///
/// with `k1` replaced by 1 under [`MatchingRule::UnscaledIncident`].
pub fn solve_matching_system(j: &StepJunction, energy: f64, rule: MatchingRule) -> Result<(Complex64, Complex64)> {
    check_not_degenerate(j, energy)?;
    let (k1, k2) = wavevectors(j, energy)?;
    let k1 = match rule {
        MatchingRule::Continuity => k1,
        MatchingRule::UnscaledIncident => Complex64::new(1.0, 0.0),
    };
    let a1 = j.m1.powf(-0.25);
    let a2 = j.m2.powf(-0.25);
    let b1 = j.m1.powf(-0.75);
    let b2 = j.m2.powf(-0.75);

    let (a11, a12) = (Complex64::new(a1, 0.0), Complex64::new(-a2, 0.0));
    let (a21, a22) = (-b1 * k1, -b2 * k2);
    let (rhs1, rhs2) = (Complex64::new(-a1, 0.0), -b1 * k1);

    let det = a11 * a22 - a12 * a21;
    if det.norm() == 0.0 {
        return Err(Error::DegenerateEnergy { energy });
    }
    let r = (rhs1 * a22 - a12 * rhs2) / det;
    let t = (a11 * rhs2 - rhs1 * a21) / det;
    Ok((r, t))
}

/// Reflectivity, transmittivity and amplitudes at one energy.
pub fn scattering_coefficients(j: &StepJunction, energy: f64, mode: TransmissionMode) -> Result<ScatteringResult> {
    let (k1, k2) = wavevectors(j, energy)?;
    let (r, t) = match_amplitudes(j, energy)?;
    let root_e = Complex64::new(energy.sqrt(), 0.0);
    let root_excess = sqrt_excess(j, energy);
    // |r| = 1 below the step; clamp the rounding excess.
    let reflectivity = ((root_excess - root_e) / (root_excess + root_e)).norm_sqr().min(1.0);
    let above = energy > j.v0;
    let transmittivity = if above || mode == TransmissionMode::Literal {
        let product = (Complex64::new(energy, 0.0) * (energy - j.v0)).sqrt();
        4.0 * j.mass_ratio() * product.norm() / (root_e + root_excess).norm_sqr()
    } else {
        0.0
    };
    Ok(ScatteringResult {
        energy,
        k1,
        k2,
        r,
        t,
        reflectivity,
        transmittivity,
        r_plus_t: reflectivity + transmittivity,
    })
}

/// One row of an energy sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub energy: f64,
    /// Set when the sampled energy had to be moved off `V0`.
    pub nudged: bool,
    pub result: Result<ScatteringResult>,
}

/// Evenly spaced energies from `e_min` to `e_max`.
///
/// A single point (`count = 1`) requires `e_min = e_max`. An energy landing
/// exactly on `V0` is moved up by half a step. Per-energy failures are
/// recorded in the row and never abort the sweep.
pub fn transmission_spectrum(
    j: &StepJunction,
    e_min: f64,
    e_max: f64,
    count: usize,
    mode: TransmissionMode,
) -> Result<Vec<SpectrumRow>> {
    let valid = e_min > 0.0
        && e_max.is_finite()
        && match count {
            0 => false,
            1 => e_min == e_max,
            _ => e_min < e_max,
        };
    if !valid {
        return Err(Error::InvalidInput(format!(
            "energy sweep needs 0 < emin < emax with count ≥ 2, or emin = emax with count = 1 \
             (got emin = {e_min}, emax = {e_max}, count = {count})"
        )));
    }
    let step = if count > 1 {
        (e_max - e_min) / (count - 1) as f64
    } else {
        0.0
    };
    let rows = (0..count)
        .map(|i| {
            let mut energy = if i + 1 == count { e_max } else { e_min + i as f64 * step };
            let mut nudged = false;
            if energy == j.v0 && step > 0.0 {
                energy += 0.5 * step;
                nudged = true;
            }
            SpectrumRow {
                energy,
                nudged,
                result: scattering_coefficients(j, energy, mode),
            }
        })
        .collect();
    Ok(rows)
}

/// Transmittivity at a high probe energy against its asymptote `m2/m1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighEnergyCheck {
    pub transmittivity: f64,
    pub limit: f64,
    /// `|T · m1/m2 − 1|`, approximately `(V0/E)²/16`.
    pub deviation: f64,
}

pub fn high_energy_limit_check(j: &StepJunction, e_probe: f64) -> Result<HighEnergyCheck> {
    if j.v0 > 0.0 && !(e_probe > 10.0 * j.v0) {
        return Err(Error::InvalidInput(format!(
            "probe energy {e_probe} must exceed 10·V0 = {}",
            10.0 * j.v0
        )));
    }
    let result = scattering_coefficients(j, e_probe, TransmissionMode::Physical)?;
    let limit = j.mass_ratio();
    Ok(HighEnergyCheck {
        transmittivity: result.transmittivity,
        limit,
        deviation: (result.transmittivity / limit - 1.0).abs(),
    })
}
