//! Minimum-norm point of the affine hull of a finite point set.
//!
//! The coefficients solve `min αᵀGα` subject to `Σα = 1`, with `G` the Gram
//! matrix of the points. Stationarity gives `Gα = t·1`; adding `s·11ᵀ` to `G`
//! turns this into `(G + s·11ᵀ)μ = 1` with `α = μ / Σμ`. The shifted matrix
//! is positive definite exactly when the points are affinely independent,
//! including the case where the origin lies in their affine hull and `G`
//! itself is singular. It is factored by Cholesky; a pivot below
//! [`PIVOT_THRESHOLD`] times its diagonal entry marks the point as dependent.

use crate::error::{check_finite, check_len, Error, Result};
use crate::linalg::{combine, dot, norm_inf, norm_sq};

/// Relative pivot threshold for rank-deficiency detection.
pub const PIVOT_THRESHOLD: f64 = 1e-12;
/// Tolerance on `|Σα - 1|`.
pub const SUM_TOL: f64 = 1e-10;
/// Relative tolerance on `‖y - Σα_i q_i‖∞`, scaled by `max(1, max‖q_i‖∞)`.
pub const RECON_TOL: f64 = 1e-8;
/// Relative tolerance on `|q_i·y - ‖y‖²|`, scaled by `max(1, max‖q_i‖²)`.
pub const HULL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct AffineSolution {
    pub y: Vec<f64>,
    pub alpha: Vec<f64>,
}

/// Observed residuals of an [`AffineSolution`] against its input points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    pub sum: f64,
    pub reconstruction: f64,
    pub hull: f64,
}

impl Residuals {
    pub fn of<P: AsRef<[f64]>>(points: &[P], sol: &AffineSolution) -> Self {
        let dim = sol.y.len();
        let recon = combine(points, &sol.alpha, dim);
        let diff: Vec<f64> = recon.iter().zip(&sol.y).map(|(a, b)| a - b).collect();
        let scale_inf = points
            .iter()
            .map(|p| norm_inf(p.as_ref()))
            .fold(1.0, f64::max);
        let scale_sq = points
            .iter()
            .map(|p| norm_sq(p.as_ref()))
            .fold(1.0, f64::max);
        let yy = norm_sq(&sol.y);
        let hull = points
            .iter()
            .map(|p| (dot(p.as_ref(), &sol.y) - yy).abs())
            .fold(0.0, f64::max);
        Self {
            sum: (sol.alpha.iter().sum::<f64>() - 1.0).abs(),
            reconstruction: norm_inf(&diff) / scale_inf,
            hull: hull / scale_sq,
        }
    }

    pub fn within_tolerance(&self) -> bool {
        self.sum <= SUM_TOL && self.reconstruction <= RECON_TOL && self.hull <= HULL_TOL
    }
}

fn default_shift<P: AsRef<[f64]>>(points: &[P]) -> f64 {
    let s = points
        .iter()
        .map(|p| norm_sq(p.as_ref()))
        .fold(0.0, f64::max);
    if s > 0.0 {
        s
    } else {
        1.0
    }
}

/// Cholesky row for a new point given the factor of its predecessors.
/// Returns `None` when the pivot falls below the threshold.
fn factor_row<P: AsRef<[f64]>>(
    l: &[Vec<f64>],
    points: &[P],
    p: &[f64],
    shift: f64,
) -> Option<Vec<f64>> {
    let k = l.len();
    let mut row = Vec::with_capacity(k + 1);
    for j in 0..k {
        let g = dot(p, points[j].as_ref()) + shift;
        let s: f64 = row.iter().zip(&l[j][..j]).map(|(a, b)| a * b).sum();
        row.push((g - s) / l[j][j]);
    }
    let diag = norm_sq(p) + shift;
    let pivot = diag - row.iter().map(|v| v * v).sum::<f64>();
    if !(pivot > PIVOT_THRESHOLD * diag) {
        return None;
    }
    row.push(pivot.sqrt());
    Some(row)
}

fn factor<P: AsRef<[f64]>>(points: &[P], shift: f64) -> Result<Vec<Vec<f64>>> {
    let mut l: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for (k, p) in points.iter().enumerate() {
        let row = factor_row(&l, &points[..k], p.as_ref(), shift)
            .ok_or(Error::Degenerate { index: k })?;
        l.push(row);
    }
    Ok(l)
}

/// Solves `LLᵀz = b` in place.
fn cholesky_solve(l: &[Vec<f64>], b: &mut [f64]) {
    let m = l.len();
    for i in 0..m {
        let s: f64 = l[i][..i].iter().zip(&b[..i]).map(|(a, b)| a * b).sum();
        b[i] = (b[i] - s) / l[i][i];
    }
    for i in (0..m).rev() {
        let s: f64 = ((i + 1)..m).map(|j| l[j][i] * b[j]).sum();
        b[i] = (b[i] - s) / l[i][i];
    }
}

/// Refinement passes applied after the normal-equation solve.
const REFINE_STEPS: usize = 2;

/// Solves `LLᵀμ = 1`, normalizes, and refines.
///
/// Each refinement step recomputes `g = Qᵀy` directly from the points and
/// moves `α` within `Σα = 1` toward `Gα ∝ 1`. This recovers the accuracy
/// the Gram matrix loses when the points are long compared to their spread.
fn solve_factored<P: AsRef<[f64]>>(l: &[Vec<f64>], points: &[P], dim: usize) -> AffineSolution {
    let m = l.len();
    let mut u = vec![1.0; m];
    cholesky_solve(l, &mut u);
    let u_total: f64 = u.iter().sum();
    let mut alpha: Vec<f64> = u.iter().map(|v| v / u_total).collect();
    let mut y = combine(points, &alpha, dim);
    for _ in 0..REFINE_STEPS {
        if m == 1 {
            break;
        }
        let mut w: Vec<f64> = points.iter().map(|p| dot(p.as_ref(), &y)).collect();
        cholesky_solve(l, &mut w);
        let nu = w.iter().sum::<f64>() / u_total;
        for ((a, ui), wi) in alpha.iter_mut().zip(&u).zip(&w) {
            *a += nu * ui - wi;
        }
        y = combine(points, &alpha, dim);
    }
    let sol = AffineSolution { y, alpha };
    debug_assert!({
        let r = Residuals::of(points, &sol);
        r.sum <= SUM_TOL && r.reconstruction <= RECON_TOL
    });
    sol
}

fn validate<P: AsRef<[f64]>>(points: &[P]) -> Result<usize> {
    let dim = match points.first() {
        Some(p) => p.as_ref().len(),
        None => return Err(Error::InvalidInput("affine minimizer of an empty set".into())),
    };
    for p in points {
        check_len(p.as_ref(), dim)?;
        check_finite(p.as_ref())?;
    }
    Ok(dim)
}

/// Affine minimizer of `points`, factored from scratch.
///
/// Fails with [`Error::Degenerate`] naming the first point that lies in the
/// affine hull of the points before it.
pub fn affine_minimizer<P: AsRef<[f64]>>(points: &[P]) -> Result<AffineSolution> {
    let dim = validate(points)?;
    let l = factor(points, default_shift(points))?;
    Ok(solve_factored(&l, points, dim))
}

/// Affine minimizer maintained under single-point insertion and deletion.
///
/// Insertion appends one Cholesky row; deletion applies a rank-one update to
/// the trailing block. The shift is re-chosen (with a full refactorization)
/// when an inserted point is much longer than the current scale.
#[derive(Debug, Clone)]
pub struct IncrementalAffine {
    dim: usize,
    points: Vec<Vec<f64>>,
    l: Vec<Vec<f64>>,
    shift: f64,
}

impl IncrementalAffine {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            points: Vec::new(),
            l: Vec::new(),
            shift: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Appends a point. On [`Error::Degenerate`] the state is unchanged.
    pub fn push(&mut self, p: Vec<f64>) -> Result<()> {
        check_len(&p, self.dim)?;
        check_finite(&p)?;
        let nsq = norm_sq(&p);
        if self.shift == 0.0 || nsq > 4.0 * self.shift {
            let shift = if nsq > 0.0 { nsq.max(self.shift) } else { 1.0f64.max(self.shift) };
            let l = factor(&self.points, shift)?;
            self.shift = shift;
            self.l = l;
        }
        let row = factor_row(&self.l, &self.points, &p, self.shift).ok_or(Error::Degenerate {
            index: self.points.len(),
        })?;
        self.l.push(row);
        self.points.push(p);
        Ok(())
    }

    /// Removes and returns the point at `index`.
    pub fn remove(&mut self, index: usize) -> Vec<f64> {
        let m = self.points.len();
        assert!(index < m, "remove index {index} out of range {m}");
        let removed = self.points.remove(index);
        let row_k = self.l.remove(index);
        debug_assert_eq!(row_k.len(), index + 1);
        // Column `index` of the trailing rows folds back into the trailing
        // block as a rank-one update.
        let mut v: Vec<f64> = self.l[index..].iter().map(|row| row[index]).collect();
        for row in &mut self.l[index..] {
            row.remove(index);
        }
        let p = v.len();
        for i in 0..p {
            let li = index + i;
            let d = self.l[li][li];
            let r = d.hypot(v[i]);
            let c = r / d;
            let s = v[i] / d;
            self.l[li][li] = r;
            for j in (i + 1)..p {
                let lj = index + j;
                let updated = (self.l[lj][li] + s * v[j]) / c;
                v[j] = c * v[j] - s * updated;
                self.l[lj][li] = updated;
            }
        }
        removed
    }

    /// Current affine minimizer. Panics on an empty set.
    pub fn solve(&self) -> AffineSolution {
        assert!(!self.points.is_empty(), "affine minimizer of an empty set");
        solve_factored(&self.l, &self.points, self.dim)
    }

    /// Rebuilds the factorization from the stored points.
    pub fn refactor(&mut self) -> Result<()> {
        let shift = default_shift(&self.points);
        self.l = factor(&self.points, shift)?;
        self.shift = shift;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn symmetric_pair() {
        let s = affine_minimizer(&[[1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert!(close(&s.y, &[0.5, 0.5], 1e-15));
        assert!(close(&s.alpha, &[0.5, 0.5], 1e-15));
    }

    #[test]
    fn asymmetric_pair_matches_projection() {
        // Foot of the perpendicular from the origin to the line through
        // (2,0) and (0,1): y = (0.4, 0.8), ‖y‖² = 0.8 = (2,0)·y = (0,1)·y.
        let pts = [[2.0, 0.0], [0.0, 1.0]];
        let s = affine_minimizer(&pts).unwrap();
        assert!(close(&s.y, &[0.4, 0.8], 1e-14));
        assert!(close(&s.alpha, &[0.2, 0.8], 1e-14));
        for p in &pts {
            assert!((dot(p, &s.y) - 0.8).abs() < 1e-14);
        }
    }

    #[test]
    fn single_point_is_its_own_minimizer() {
        let s = affine_minimizer(&[[3.0, -1.0, 2.0]]).unwrap();
        assert_eq!(s.y, vec![3.0, -1.0, 2.0]);
        assert_eq!(s.alpha, vec![1.0]);
    }

    #[test]
    fn origin_in_hull_gives_zero() {
        let s = affine_minimizer(&[[1.0, -1.0], [-1.0, 1.0]]).unwrap();
        assert!(close(&s.y, &[0.0, 0.0], 1e-15));
        assert!(close(&s.alpha, &[0.5, 0.5], 1e-15));
    }

    #[test]
    fn dependent_point_is_reported() {
        let pts = [[1.0, 0.0], [0.0, 1.0], [0.5, 0.5]];
        assert_eq!(affine_minimizer(&pts), Err(Error::Degenerate { index: 2 }));
        let dup = [[1.0, 2.0], [1.0, 2.0]];
        assert_eq!(affine_minimizer(&dup), Err(Error::Degenerate { index: 1 }));
    }

    #[test]
    fn too_many_points_are_dependent() {
        let pts = [[1.0, 0.0], [0.0, 1.0], [2.0, 3.0], [-1.0, 5.0]];
        assert_eq!(affine_minimizer(&pts), Err(Error::Degenerate { index: 3 }));
    }

    #[test]
    fn input_validation() {
        let empty: [[f64; 2]; 0] = [];
        assert!(matches!(affine_minimizer(&empty), Err(Error::InvalidInput(_))));
        assert!(matches!(
            affine_minimizer(&[vec![1.0, 0.0], vec![1.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(
            affine_minimizer(&[[f64::INFINITY, 0.0]]),
            Err(Error::NonFinite { index: 0 })
        );
    }

    #[test]
    fn incremental_push_and_remove() {
        let mut inc = IncrementalAffine::new(3);
        inc.push(vec![1.0, 0.0, 0.0]).unwrap();
        inc.push(vec![0.0, 2.0, 0.0]).unwrap();
        inc.push(vec![0.0, 0.0, 3.0]).unwrap();
        let fresh = affine_minimizer(inc.points()).unwrap();
        assert!(close(&inc.solve().y, &fresh.y, 1e-14));
        inc.remove(1);
        let fresh = affine_minimizer(inc.points()).unwrap();
        let s = inc.solve();
        assert!(close(&s.y, &fresh.y, 1e-14));
        assert!(close(&s.alpha, &fresh.alpha, 1e-14));
        assert_eq!(inc.push(vec![0.5, 0.0, 1.5]), Err(Error::Degenerate { index: 2 }));
        assert_eq!(inc.len(), 2);
    }

    #[test]
    fn incremental_rescales_on_long_point() {
        let mut inc = IncrementalAffine::new(2);
        inc.push(vec![1e-3, 0.0]).unwrap();
        inc.push(vec![0.0, 1e4]).unwrap();
        let fresh = affine_minimizer(inc.points()).unwrap();
        let s = inc.solve();
        assert!(close(&s.alpha, &fresh.alpha, 1e-12));
    }
}
