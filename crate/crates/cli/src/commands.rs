//! Subcommand bodies. Each returns its full output as a string so that it
//! can be written to a file, to stdout, or compared in tests.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use pdem::orderings::{constraint_report, named_orderings, parse_ordering, DEFAULT_TOLERANCE};
use pdem::profile::{MASS_PROFILES, POTENTIAL_PROFILES};
use pdem::{
    effective_potential_term, isospectral_report, solve_isospectral_orderings, transmission_spectrum, EigenReport,
    MassProfile, Ordering, PotentialProfile, SolveMode, StepJunction, UniformGrid,
};

use crate::config::RunConfig;
use crate::format::num;

pub const TRANSMISSION_HEADER: &str = "E,k1_re,k1_im,k2_re,k2_im,r_re,r_im,t_re,t_im,R,T,R_plus_T,status";
pub const EFFECTIVE_POTENTIAL_HEADER: &str = "x,m,m_prime,m_double_prime,bracket_term,status";

fn ordering_row(out: &mut String, label: &str, o: Ordering, note: &str) {
    let r = constraint_report(o);
    let e = o.etas();
    let fields = [
        o.alpha,
        o.beta,
        o.gamma,
        e.eta1,
        e.eta2,
        r.von_roos_residual,
        r.symmetry_residual,
        r.eta1_residual,
        r.eta2_residual,
    ];
    let cells: Vec<String> = fields.iter().map(|v| format!("{:>18}", num(*v))).collect();
    let iso = if r.flags(DEFAULT_TOLERANCE).isospectral() {
        "yes"
    } else {
        "no"
    };
    let _ = writeln!(out, "{label:<18} {} {iso:>11}  {note}", cells.join(" "));
}

fn ordering_header(out: &mut String) {
    let cols = [
        "alpha",
        "beta",
        "gamma",
        "eta1",
        "eta2",
        "sum_residual",
        "alpha_minus_gamma",
        "eta1_residual",
        "eta2_residual",
    ];
    let cells: Vec<String> = cols.iter().map(|c| format!("{c:>18}")).collect();
    let _ = writeln!(out, "{:<18} {} {:>11}  note", "source", cells.join(" "), "isospectral");
}

/// Isospectral orderings for one or both solve modes, or the residual report
/// of a single ordering when `check` is given.
pub fn cmd_orderings(mode: Option<SolveMode>, check: Option<&str>) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# residuals: sum = alpha+beta+gamma+1, eta1 - 7/16, eta2 + 1/4; tolerance {DEFAULT_TOLERANCE:e}"
    );
    ordering_header(&mut out);
    if let Some(spec) = check {
        let o = parse_ordering(spec).with_context(|| format!("invalid ordering `{spec}`"))?;
        ordering_row(&mut out, "check", o, spec.trim());
        return Ok(out);
    }
    let modes = match mode {
        Some(m) => vec![m],
        None => vec![SolveMode::Direct, SolveMode::PublishedQuadratic],
    };
    for m in modes {
        for solved in solve_isospectral_orderings(m) {
            ordering_row(&mut out, m.label(), solved.ordering, solved.exact_form);
        }
    }
    Ok(out)
}

/// Catalog of named orderings and profiles.
pub fn catalog() -> String {
    let mut out = String::from("orderings:\n");
    for n in named_orderings() {
        let o = n.ordering;
        let _ = writeln!(
            out,
            "  {:<18} ({}, {}, {})  {}",
            n.name,
            num(o.alpha),
            num(o.beta),
            num(o.gamma),
            n.description
        );
    }
    out.push_str("mass profiles:\n");
    for p in MASS_PROFILES {
        let _ = writeln!(out, "  {:<18} {}", p.name, p.expression);
    }
    out.push_str("potential profiles:\n");
    for p in POTENTIAL_PROFILES {
        let _ = writeln!(out, "  {:<18} {}", p.name, p.expression);
    }
    out
}

/// CSV of `r`, `t`, `R` and `T` over the configured energy sweep.
///
/// The `status` column is `ok`, `nudged` when the energy was moved off `V0`,
/// or an error tag with the numeric fields left empty.
pub fn cmd_transmission(cfg: &RunConfig) -> Result<String> {
    let junction = StepJunction::new(cfg.m1, cfg.m2, cfg.v0)?;
    let rows = transmission_spectrum(&junction, cfg.emin, cfg.emax, cfg.count, cfg.tmode)?;
    let mut out = String::with_capacity(256 * (rows.len() + 1));
    out.push_str(TRANSMISSION_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&num(row.energy));
        match row.result {
            Ok(s) => {
                for v in [
                    s.k1.re,
                    s.k1.im,
                    s.k2.re,
                    s.k2.im,
                    s.r.re,
                    s.r.im,
                    s.t.re,
                    s.t.im,
                    s.reflectivity,
                    s.transmittivity,
                    s.r_plus_t,
                ] {
                    out.push(',');
                    out.push_str(&num(v));
                }
                out.push_str(if row.nudged { ",nudged" } else { ",ok" });
            }
            Err(e) => {
                out.push_str(&",".repeat(11));
                out.push(',');
                out.push_str(e.tag());
            }
        }
        out.push('\n');
    }
    Ok(out)
}

fn profiles(cfg: &RunConfig) -> Result<(MassProfile, PotentialProfile, UniformGrid)> {
    let (lo, hi) = cfg.domain;
    let m = MassProfile::resolve(&cfg.mass_expr, lo, hi)
        .with_context(|| format!("invalid mass profile `{}`", cfg.mass_expr))?;
    let v = PotentialProfile::resolve(&cfg.pot_expr, lo, hi)
        .with_context(|| format!("invalid potential `{}`", cfg.pot_expr))?;
    let grid = UniformGrid::for_solver(lo, hi, cfg.nodes)?;
    Ok((m, v, grid))
}

/// Outcome of an isospectrality run.
#[derive(Debug, Clone, PartialEq)]
pub struct IsospectralOutcome {
    pub report: EigenReport,
    pub pass: bool,
    pub text: String,
}

/// Lowest levels with and without the ordering term, and PASS when the
/// largest relative difference is within `cfg.tol`.
pub fn cmd_isospectral(cfg: &RunConfig) -> Result<IsospectralOutcome> {
    let o = parse_ordering(&cfg.ordering).with_context(|| format!("invalid ordering `{}`", cfg.ordering))?;
    let (m, v, grid) = profiles(cfg)?;
    let report = isospectral_report(o, &m, &v, &grid, cfg.levels).context("isospectral solve failed")?;

    let mut text = String::new();
    let _ = writeln!(text, "# ordering {} = {o}", cfg.ordering.trim());
    let _ = writeln!(text, "# m(x) = {}, V(x) = {}", cfg.mass_expr, cfg.pot_expr);
    let _ = writeln!(
        text,
        "# x in [{}, {}], y in [{}, {}], nodes {}, h_y {}, max |bracket| {}",
        num(report.x_interval.0),
        num(report.x_interval.1),
        num(report.y_interval.0),
        num(report.y_interval.1),
        report.nodes,
        num(report.y_step),
        num(report.max_bracket)
    );
    let _ = writeln!(
        text,
        "{:>5} {:>20} {:>20} {:>20} {:>20}",
        "level", "E_x", "E_y", "abs_diff", "rel_diff"
    );
    for k in 0..report.x_space_eigenvalues.len() {
        let _ = writeln!(
            text,
            "{:>5} {:>20} {:>20} {:>20} {:>20}",
            k,
            num(report.x_space_eigenvalues[k]),
            num(report.y_space_eigenvalues[k]),
            num(report.abs_diffs[k]),
            num(report.rel_diffs[k])
        );
    }
    let worst = report.max_rel_diff();
    let pass = worst <= cfg.tol;
    let verdict = if pass { "PASS" } else { "FAIL" };
    let relation = if pass { "<=" } else { ">" };
    let _ = writeln!(
        text,
        "{verdict}: max rel diff {} {relation} tol {}",
        num(worst),
        num(cfg.tol)
    );
    Ok(IsospectralOutcome { report, pass, text })
}

/// CSV of `m`, its derivatives and the ordering term on the grid. Nodes where
/// the profile cannot be differentiated carry an error tag.
pub fn cmd_effective_potential(cfg: &RunConfig) -> Result<String> {
    let o = parse_ordering(&cfg.ordering).with_context(|| format!("invalid ordering `{}`", cfg.ordering))?;
    let (lo, hi) = cfg.domain;
    let m = MassProfile::resolve(&cfg.mass_expr, lo, hi)
        .with_context(|| format!("invalid mass profile `{}`", cfg.mass_expr))?;
    let grid = UniformGrid::new(lo, hi, cfg.nodes)?;
    let mut out = String::from(EFFECTIVE_POTENTIAL_HEADER);
    out.push('\n');
    for x in grid.nodes() {
        let row = m.jet(x).and_then(|jet| Ok((jet, effective_potential_term(o, &m, x)?)));
        match row {
            Ok((jet, b)) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},ok",
                    num(x),
                    num(jet.value),
                    num(jet.d1),
                    num(jet.d2),
                    num(b)
                );
            }
            Err(e) => {
                let _ = writeln!(out, "{},,,,,{}", num(x), e.tag());
            }
        }
    }
    Ok(out)
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).context("cannot write to stdout")
        }
    }
}
