//! Local cubic interpolation on sorted, possibly non-uniform nodes.

/// Four-point Lagrange interpolation of `(xs, ys)` at `x`.
///
/// `xs` must be strictly increasing with at least four entries. Points
/// outside `[xs[0], xs[last]]` are extrapolated from the end stencil.
pub fn cubic(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    debug_assert!(xs.len() >= 4);
    let n = xs.len();
    let upper = xs.partition_point(|&v| v <= x);
    let start = upper.saturating_sub(2).min(n - 4);
    let nodes = &xs[start..start + 4];
    let vals = &ys[start..start + 4];
    let mut sum = 0.0;
    for i in 0..4 {
        let mut w = 1.0;
        for j in 0..4 {
            if i != j {
                w *= (x - nodes[j]) / (nodes[i] - nodes[j]);
            }
        }
        sum += w * vals[i];
    }
    sum
}
