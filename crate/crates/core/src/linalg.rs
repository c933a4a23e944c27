//! Small dense vector helpers shared by the solver modules.

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `y += a * x`
#[inline]
pub fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Sum of `coeffs[i] * points[i]`.
pub fn combine<P: AsRef<[f64]>>(points: &[P], coeffs: &[f64], dim: usize) -> Vec<f64> {
    debug_assert_eq!(points.len(), coeffs.len());
    let mut out = vec![0.0; dim];
    for (p, &c) in points.iter().zip(coeffs) {
        axpy(c, p.as_ref(), &mut out);
    }
    out
}
