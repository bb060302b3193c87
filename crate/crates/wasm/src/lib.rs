//! Browser bindings. Each export returns a flat `Float64Array`; the layout
//! is documented per function. The `*_impl` functions hold the logic and are
//! plain Rust so they can be tested natively.

use pdem::orderings::{constraint_report, parse_ordering};
use pdem::{
    effective_potential_term, isospectral_report, transmission_spectrum, MassProfile, PotentialProfile, StepJunction,
    TransmissionMode, UniformGrid,
};
use wasm_bindgen::prelude::*;

type Res = Result<Vec<f64>, String>;

fn text(e: pdem::Error) -> String {
    e.to_string()
}

/// `[E, R, T]` per energy; rows that fail carry `NaN` for `R` and `T`.
pub fn transmission_curve_impl(m1: f64, m2: f64, v0: f64, emin: f64, emax: f64, count: usize, literal: bool) -> Res {
    if count > 100_000 {
        return Err(format!("at most 100000 energies, got {count}"));
    }
    let junction = StepJunction::new(m1, m2, v0).map_err(text)?;
    let mode = if literal {
        TransmissionMode::Literal
    } else {
        TransmissionMode::Physical
    };
    let rows = transmission_spectrum(&junction, emin, emax, count, mode).map_err(text)?;
    Ok(rows
        .iter()
        .flat_map(|row| match &row.result {
            Ok(s) => [row.energy, s.reflectivity, s.transmittivity],
            Err(_) => [row.energy, f64::NAN, f64::NAN],
        })
        .collect())
}

/// `[x, m, bracket]` per node.
pub fn effective_potential_curve_impl(ordering: &str, mass: &str, lo: f64, hi: f64, nodes: usize) -> Res {
    if nodes > 200_000 {
        return Err(format!("at most 200000 nodes, got {nodes}"));
    }
    let o = parse_ordering(ordering).map_err(text)?;
    let m = MassProfile::resolve(mass, lo, hi).map_err(text)?;
    let grid = UniformGrid::new(lo, hi, nodes).map_err(text)?;
    let mut out = Vec::with_capacity(3 * nodes);
    for x in grid.nodes() {
        let value = m.mass(x).unwrap_or(f64::NAN);
        let b = effective_potential_term(o, &m, x).unwrap_or(f64::NAN);
        out.extend([x, value, b]);
    }
    Ok(out)
}

/// `[E_x..., E_y..., max_rel_diff]` with `levels` entries in each block.
#[allow(clippy::too_many_arguments)]
pub fn isospectral_levels_impl(
    ordering: &str,
    mass: &str,
    potential: &str,
    lo: f64,
    hi: f64,
    nodes: usize,
    levels: usize,
) -> Res {
    if nodes > 20_001 {
        return Err(format!("at most 20001 nodes in the browser, got {nodes}"));
    }
    let o = parse_ordering(ordering).map_err(text)?;
    let m = MassProfile::resolve(mass, lo, hi).map_err(text)?;
    let v = PotentialProfile::resolve(potential, lo, hi).map_err(text)?;
    let grid = UniformGrid::for_solver(lo, hi, nodes).map_err(text)?;
    let report = isospectral_report(o, &m, &v, &grid, levels).map_err(text)?;
    let mut out = report.x_space_eigenvalues.clone();
    out.extend(&report.y_space_eigenvalues);
    out.push(report.max_rel_diff());
    Ok(out)
}

/// `[alpha, beta, gamma, eta1, eta2, sum, alpha − gamma, eta1 − 7/16, eta2 + 1/4]`.
pub fn ordering_residuals_impl(ordering: &str) -> Res {
    let o = parse_ordering(ordering).map_err(text)?;
    let e = o.etas();
    let r = constraint_report(o);
    Ok(vec![
        o.alpha,
        o.beta,
        o.gamma,
        e.eta1,
        e.eta2,
        r.von_roos_residual,
        r.symmetry_residual,
        r.eta1_residual,
        r.eta2_residual,
    ])
}

fn js(r: Res) -> Result<Vec<f64>, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn transmission_curve(
    m1: f64,
    m2: f64,
    v0: f64,
    emin: f64,
    emax: f64,
    count: usize,
    literal: bool,
) -> Result<Vec<f64>, JsError> {
    js(transmission_curve_impl(m1, m2, v0, emin, emax, count, literal))
}

#[wasm_bindgen]
pub fn effective_potential_curve(
    ordering: &str,
    mass: &str,
    lo: f64,
    hi: f64,
    nodes: usize,
) -> Result<Vec<f64>, JsError> {
    js(effective_potential_curve_impl(ordering, mass, lo, hi, nodes))
}

#[wasm_bindgen]
pub fn isospectral_levels(
    ordering: &str,
    mass: &str,
    potential: &str,
    lo: f64,
    hi: f64,
    nodes: usize,
    levels: usize,
) -> Result<Vec<f64>, JsError> {
    js(isospectral_levels_impl(
        ordering, mass, potential, lo, hi, nodes, levels,
    ))
}

#[wasm_bindgen]
pub fn ordering_residuals(ordering: &str) -> Result<Vec<f64>, JsError> {
    js(ordering_residuals_impl(ordering))
}
