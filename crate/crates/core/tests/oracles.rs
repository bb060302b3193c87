//! Cross-checks against independent routes: direct x-space discretisation of
//! the PDEM equation, hand-derived derivatives, and grid-refinement studies.

use approx::assert_abs_diff_eq;
use nalgebra::DMatrix;
use pdem::transform::{coordinate_map, CoordinateMap, MapDirection};
use pdem::{
    compute_etas, effective_potential_term, isospectral_report, map_wavefunction, solve_constant_mass_1d, solve_pdem_x,
    MassProfile, Ordering, PotentialProfile, UniformGrid,
};

const QUARTER: Ordering = Ordering::new(-0.25, -0.5, -0.25);
const BDD: Ordering = Ordering::new(0.0, -1.0, 0.0);

/// m = 1 + 1/(1+x²) with hand-derived derivatives.
fn lorentzian(x: f64) -> (f64, f64, f64) {
    let u = 1.0 + x * x;
    (1.0 + 1.0 / u, -2.0 * x / (u * u), (6.0 * x * x - 2.0) / (u * u * u))
}

/// Lowest eigenvalues of the x-space equation
/// `−(1/m)[ψ'' − (m'/m)ψ' + (η₁ m'²/m² + η₂ m''/m)ψ] + Vψ = Eψ`
/// from central differences on `n` nodes over `[-half, half]`, solved as a
/// dense nonsymmetric eigenproblem.
fn x_space_oracle(o: Ordering, half: f64, n: usize, levels: usize) -> Vec<f64> {
    let etas = compute_etas(o);
    let h = 2.0 * half / (n - 1) as f64;
    let dim = n - 2;
    let mut a = DMatrix::<f64>::zeros(dim, dim);
    for row in 0..dim {
        let x = -half + (row + 1) as f64 * h;
        let (m, dm, d2m) = lorentzian(x);
        let c1 = -dm / m;
        let q = etas.eta1 * dm * dm / (m * m) + etas.eta2 * d2m / m;
        let lower = 1.0 / (h * h) - c1 / (2.0 * h);
        let upper = 1.0 / (h * h) + c1 / (2.0 * h);
        a[(row, row)] = -(-2.0 / (h * h) + q) / m + x * x;
        if row > 0 {
            a[(row, row - 1)] = -lower / m;
        }
        if row + 1 < dim {
            a[(row, row + 1)] = -upper / m;
        }
    }
    let mut vals: Vec<f64> = a
        .complex_eigenvalues()
        .iter()
        .map(|z| {
            assert!(z.im.abs() < 1e-8, "complex eigenvalue {z}");
            z.re
        })
        .collect();
    vals.sort_by(f64::total_cmp);
    vals.truncate(levels);
    vals
}

fn richardson(coarse: &[f64], fine: &[f64]) -> Vec<f64> {
    coarse.iter().zip(fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect()
}

fn mapped_levels(o: Ordering, half: f64, nodes: usize) -> Vec<f64> {
    let m = MassProfile::resolve("lorentzian", -half, half).unwrap();
    let v = PotentialProfile::resolve("harmonic", -half, half).unwrap();
    let grid = UniformGrid::new(-half, half, nodes).unwrap();
    solve_pdem_x(o, &m, &v, &grid, 3).unwrap()
}

#[test]
fn mapped_solver_agrees_with_direct_x_space_discretisation() {
    let half = 8.0;
    for o in [QUARTER, BDD, Ordering::new(-0.5, 0.0, -0.5)] {
        let oracle = richardson(&x_space_oracle(o, half, 401, 3), &x_space_oracle(o, half, 801, 3));
        let mapped = richardson(&mapped_levels(o, half, 2001), &mapped_levels(o, half, 4001));
        for (a, b) in oracle.iter().zip(&mapped) {
            assert!((a - b).abs() / b.abs() < 2e-6, "{o}: oracle {a} vs mapped {b}");
        }
    }
}

#[test]
fn oracle_sees_the_ordering_shift() {
    let quarter = x_space_oracle(QUARTER, 8.0, 801, 3);
    let bdd = x_space_oracle(BDD, 8.0, 801, 3);
    let shift = (quarter[0] - bdd[0]).abs() / quarter[0];
    assert!(shift > 1e-3, "relative shift {shift}");
}

#[test]
fn bracket_matches_hand_derivatives() {
    let m = MassProfile::resolve("lorentzian", -5.0, 5.0).unwrap();
    for x in [-3.0, -0.4, 0.0, 1.3, 4.5] {
        let (mv, dm, d2m) = lorentzian(x);
        let expected = -7.0 / 16.0 * dm * dm / mv.powi(3) + 0.25 * d2m / (mv * mv);
        assert_abs_diff_eq!(effective_potential_term(BDD, &m, x).unwrap(), expected, epsilon = 1e-14);
        assert_eq!(effective_potential_term(QUARTER, &m, x).unwrap(), 0.0);
    }
}

#[test]
fn isospectral_gap_converges_under_refinement() {
    let m = MassProfile::resolve("lorentzian", -10.0, 10.0).unwrap();
    let v = PotentialProfile::resolve("harmonic", -10.0, 10.0).unwrap();
    let coarse = UniformGrid::new(-10.0, 10.0, 2001).unwrap();
    let fine = coarse.refined();

    let q1 = isospectral_report(QUARTER, &m, &v, &coarse, 3).unwrap();
    let q2 = isospectral_report(QUARTER, &m, &v, &fine, 3).unwrap();
    assert!(q2.max_rel_diff() <= q1.max_rel_diff());
    assert!(q2.max_rel_diff() <= 1e-10);

    let b1 = isospectral_report(BDD, &m, &v, &coarse, 3).unwrap();
    let b2 = isospectral_report(BDD, &m, &v, &fine, 3).unwrap();
    assert!(b2.max_rel_diff() > 1e-3);
    for (d1, d2) in b1.abs_diffs.iter().zip(&b2.abs_diffs) {
        assert!(*d2 > 1e-4, "gap vanished: {d2}");
        assert!((d1 - d2).abs() / d2 < 1e-3, "gap not converged: {d1} vs {d2}");
    }
}

#[test]
fn harmonic_error_is_second_order() {
    let errors = |nodes: usize| -> Vec<f64> {
        let grid = UniformGrid::new(-12.0, 12.0, nodes).unwrap();
        let v: Vec<f64> = grid.nodes().map(|y| y * y).collect();
        let vals = solve_constant_mass_1d(&v, &grid, 4).unwrap();
        vals.iter()
            .enumerate()
            .map(|(k, e)| (e - (2 * k + 1) as f64).abs())
            .collect()
    };
    let coarse = errors(2001);
    let fine = errors(4001);
    for (c, f) in coarse.iter().zip(&fine) {
        let ratio = c / f;
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }
}

#[test]
fn constant_mass_rescaling_is_exact() {
    // m ≡ 4 on [-6, 6] maps to y = 2(x + 6) ∈ [0, 24]; V = x² = (y/2 − 6)².
    let m = MassProfile::constant(4.0, -6.0, 6.0).unwrap();
    let v = PotentialProfile::resolve("harmonic", -6.0, 6.0).unwrap();
    let grid = UniformGrid::new(-6.0, 6.0, 1201).unwrap();
    let pdem = solve_pdem_x(BDD, &m, &v, &grid, 4).unwrap();
    let ygrid = UniformGrid::new(0.0, 24.0, 1201).unwrap();
    let pot: Vec<f64> = ygrid.nodes().map(|y| (y / 2.0 - 6.0).powi(2)).collect();
    let reference = solve_constant_mass_1d(&pot, &ygrid, 4).unwrap();
    for (a, b) in pdem.iter().zip(&reference) {
        assert!((a - b).abs() / b <= 1e-10, "{a} vs {b}");
    }
}

#[test]
fn coordinate_map_is_additive_and_monotone() {
    let m = MassProfile::resolve("lorentzian", -10.0, 10.0).unwrap();
    let points = [-9.0, -2.5, 0.0, 1.0, 7.5];
    for w in points.windows(3) {
        let whole = coordinate_map(&m, w[0], w[2]).unwrap();
        let parts = coordinate_map(&m, w[0], w[1]).unwrap() + coordinate_map(&m, w[1], w[2]).unwrap();
        assert_abs_diff_eq!(whole, parts, epsilon = 3e-10);
    }
    let map = CoordinateMap::from_left_edge(m).unwrap();
    let ys: Vec<f64> = (0..=200).map(|i| map.y(-10.0 + 0.1 * i as f64).unwrap()).collect();
    assert!(ys.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn invert_after_map_is_identity() {
    let m = MassProfile::resolve("sech-bump", -6.0, 6.0).unwrap();
    let map = CoordinateMap::new(m, 0.0).unwrap();
    for i in 0..=120 {
        let x = -6.0 + 0.1 * i as f64;
        let back = map.invert(map.y(x).unwrap()).unwrap();
        assert_abs_diff_eq!(back, x, epsilon = 1e-9);
    }
}

#[test]
fn scaling_law_for_constant_factor() {
    let m = MassProfile::resolve("gaussian-bump", -4.0, 4.0).unwrap();
    let m4 = m.scaled(4.0).unwrap();
    for x in [-3.0, -0.5, 0.7, 2.2] {
        assert_abs_diff_eq!(
            coordinate_map(&m4, -4.0, x).unwrap(),
            2.0 * coordinate_map(&m, -4.0, x).unwrap(),
            epsilon = 1e-9
        );
        let b = effective_potential_term(BDD, &m, x).unwrap();
        let b4 = effective_potential_term(BDD, &m4, x).unwrap();
        assert_abs_diff_eq!(b4, b / 4.0, epsilon = 1e-14);
    }
}

#[test]
fn wavefunction_round_trip() {
    let half = 8.0;
    let m = MassProfile::resolve("lorentzian", -half, half).unwrap();
    let map = CoordinateMap::from_left_edge(m).unwrap();
    let gaussian = |x: f64| (-x * x / 2.0).exp();

    let round_trip = |nodes: usize| -> f64 {
        let grid = UniformGrid::new(-half, half, nodes).unwrap();
        let psi: Vec<f64> = grid.nodes().map(gaussian).collect();
        let phi = map_wavefunction(&map, &grid, &psi, MapDirection::XToY).unwrap();
        let back = map_wavefunction(&map, &phi.grid, &phi.values, MapDirection::YToX).unwrap();
        assert_abs_diff_eq!(back.grid.lo(), -half, epsilon = 1e-9);
        assert_abs_diff_eq!(back.grid.hi(), half, epsilon = 1e-9);
        back.values
            .iter()
            .zip(&psi)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    };
    let err = round_trip(2001);
    assert!(err <= 1e-6, "round-trip error {err}");
    // Cubic resampling: the 10× finer grid is far more accurate still.
    let fine = round_trip(20001);
    assert!(fine < err / 100.0, "coarse {err}, fine {fine}");
}

#[test]
fn mapped_wavefunction_carries_quarter_power() {
    let m = MassProfile::resolve("lorentzian", -4.0, 4.0).unwrap();
    let map = CoordinateMap::from_left_edge(m.clone()).unwrap();
    let grid = UniformGrid::new(-4.0, 4.0, 801).unwrap();
    let psi: Vec<f64> = grid.nodes().map(|x| (-x * x).exp()).collect();
    let phi = map_wavefunction(&map, &grid, &psi, MapDirection::XToY).unwrap();
    for (i, y) in phi.grid.nodes().enumerate().step_by(50) {
        let x = map.invert(y).unwrap();
        let expected = m.mass(x).unwrap().powf(0.25) * (-x * x).exp();
        assert_abs_diff_eq!(phi.values[i], expected, epsilon = 1e-8);
    }
}
