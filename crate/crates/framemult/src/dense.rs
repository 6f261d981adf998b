//! Dense complex matrices: the oracle layer.
//!
//! Everything in this crate that claims a certified bound is cross-checkable
//! against the routines here: full singular value sets via one-sided Jacobi
//! (chosen for its accuracy on small and exactly rank-deficient singular
//! values) and LU-based solves/inverses.

use num_complex::Complex64;

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    nrows: usize,
    ncols: usize,
    data: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl CMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, data: vec![ZERO; nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ONE);
        }
        m
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix whose j-th column is `cols[j]`.
    pub fn from_columns(cols: &[Vec<Complex64>]) -> Self {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, Vec::len);
        assert!(cols.iter().all(|c| c.len() == nrows), "ragged columns");
        Self::from_fn(nrows, ncols, |i, j| cols[j][i])
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { ZERO })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.ncols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.ncols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.nrows).map(|i| self.at(i, j)).collect()
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.ncols, "matvec dimension mismatch");
        let mut y = vec![ZERO; self.nrows];
        for i in 0..self.nrows {
            let row = &self.data[i * self.ncols..(i + 1) * self.ncols];
            let mut acc = ZERO;
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            y[i] = acc;
        }
        y
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        assert_eq!(self.ncols, other.nrows, "matmul dimension mismatch");
        let mut out = CMat::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.at(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..other.ncols {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.ncols, self.nrows, |i, j| self.at(j, i).conj())
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        CMat { nrows: self.nrows, ncols: self.ncols, data }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        CMat { nrows: self.nrows, ncols: self.ncols, data }
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        let data = self.data.iter().map(|a| a * s).collect();
        CMat { nrows: self.nrows, ncols: self.ncols, data }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// All singular values, descending, via one-sided Jacobi.
    ///
    /// Jacobi orthogonalization keeps high relative accuracy down to the
    /// smallest singular value, which matters when certifying rank
    /// deficiency: an exactly dependent column comes out at roundoff level
    /// rather than at `sqrt(eps) * sigma_max`.
    pub fn singular_values(&self) -> Vec<f64> {
        let work = if self.nrows >= self.ncols { self.clone() } else { self.adjoint() };
        let n = work.ncols;
        if n == 0 || work.nrows == 0 {
            return vec![0.0; n.min(work.nrows)];
        }
        let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| work.column(j)).collect();

        let tol = 1e-15_f64;
        let max_sweeps = 64;
        for _ in 0..max_sweeps {
            let mut rotated = false;
            for p in 0..n {
                for q in (p + 1)..n {
                    let (alpha, beta, gamma) = gram2(&cols[p], &cols[q]);
                    let off = gamma.norm();
                    // alpha == 0 with gamma != 0 only happens through
                    // underflow of subnormal column remnants; treat the
                    // column as zero. The threshold multiplies square roots
                    // so that alpha * beta cannot underflow.
                    let scale = alpha.sqrt() * beta.sqrt();
                    if off == 0.0 || alpha == 0.0 || beta == 0.0 || off <= tol * scale {
                        continue;
                    }
                    // Unitary 2x2 rotation making the columns orthogonal.
                    // gamma = w_q^H w_p, so the Gram block is
                    // [[alpha, conj(gamma)], [gamma, beta]].
                    let phi = gamma.arg();
                    let tau = (beta - alpha) / (2.0 * off);
                    // Smaller root of t^2 - 2 tau t - 1 = 0, in the
                    // division form that stays finite for huge tau.
                    let t = -tau.signum() / (tau.abs() + (tau * tau + 1.0).sqrt());
                    if t == 0.0 {
                        // tau overflowed: the rotation would be a no-op.
                        continue;
                    }
                    rotated = true;
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let e_m = Complex64::from_polar(1.0, -phi);
                    let e_p = Complex64::from_polar(1.0, phi);
                    let (lo, hi) = cols.split_at_mut(q);
                    let wp = &mut lo[p];
                    let wq = &mut hi[0];
                    for (a, b) in wp.iter_mut().zip(wq.iter_mut()) {
                        let va = *a;
                        let vb = *b;
                        *a = c * va + s * e_p * vb;
                        *b = -s * e_m * va + c * vb;
                    }
                }
            }
            if !rotated {
                break;
            }
        }

        let mut sv: Vec<f64> = cols
            .iter()
            .map(|w| w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// Smallest singular value over the domain: zero whenever the map cannot
    /// be injective (`ncols > nrows`).
    pub fn min_singular_value(&self) -> f64 {
        if self.ncols > self.nrows {
            return 0.0;
        }
        self.singular_values().last().copied().unwrap_or(0.0)
    }

    /// LU factorization with partial pivoting; `None` on an exactly zero pivot.
    pub fn lu(&self) -> Option<Lu> {
        assert_eq!(self.nrows, self.ncols, "lu requires a square matrix");
        let n = self.nrows;
        let mut lu = self.clone();
        let mut piv = Vec::with_capacity(n);
        for k in 0..n {
            let (mut best, mut best_abs) = (k, lu.at(k, k).norm());
            for i in (k + 1)..n {
                let a = lu.at(i, k).norm();
                if a > best_abs {
                    best = i;
                    best_abs = a;
                }
            }
            if best_abs == 0.0 {
                return None;
            }
            if best != k {
                for j in 0..n {
                    let tmp = lu.at(k, j);
                    lu.set(k, j, lu.at(best, j));
                    lu.set(best, j, tmp);
                }
            }
            piv.push(best);
            let pivot = lu.at(k, k);
            for i in (k + 1)..n {
                let factor = lu.at(i, k) / pivot;
                lu.set(i, k, factor);
                for j in (k + 1)..n {
                    let v = lu.at(i, j) - factor * lu.at(k, j);
                    lu.set(i, j, v);
                }
            }
        }
        Some(Lu { lu, piv })
    }

    /// Inverse via LU; `None` when a pivot is exactly zero.
    pub fn inverse(&self) -> Option<CMat> {
        let lu = self.lu()?;
        let n = self.nrows;
        let mut inv = CMat::zeros(n, n);
        for j in 0..n {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            let x = lu.solve(&e);
            for i in 0..n {
                inv.set(i, j, x[i]);
            }
        }
        Some(inv)
    }
}

fn gram2(wp: &[Complex64], wq: &[Complex64]) -> (f64, f64, Complex64) {
    let mut alpha = 0.0;
    let mut beta = 0.0;
    let mut gamma = ZERO;
    for (a, b) in wp.iter().zip(wq) {
        alpha += a.norm_sqr();
        beta += b.norm_sqr();
        gamma += a * b.conj();
    }
    (alpha, beta, gamma)
}

/// LU factorization with partial pivoting.
pub struct Lu {
    lu: CMat,
    piv: Vec<usize>,
}

impl Lu {
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.nrows();
        assert_eq!(b.len(), n);
        let mut x = b.to_vec();
        for (k, &p) in self.piv.iter().enumerate() {
            x.swap(k, p);
        }
        // Forward substitution (unit lower triangle).
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu.at(i, j) * x[j];
            }
            x[i] = acc;
        }
        // Back substitution.
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc -= self.lu.at(i, j) * x[j];
            }
            x[i] = acc / self.lu.at(i, i);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_singular_values() {
        let sv = CMat::identity(5).singular_values();
        for s in sv {
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn diagonal_singular_values_exact() {
        let d: Vec<Complex64> = (1..=10).map(|n| c(1.0 / n as f64, 0.0)).collect();
        let m = CMat::diagonal(&d);
        let sv = m.singular_values();
        assert!((sv[0] - 1.0).abs() < 1e-15);
        assert!((sv[9] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn nilpotent_block() {
        // [[0, 1], [0, 0]] has singular values {1, 0}.
        let mut m = CMat::zeros(2, 2);
        m.set(0, 1, ONE);
        let sv = m.singular_values();
        assert!((sv[0] - 1.0).abs() < 1e-15);
        assert!(sv[1].abs() < 1e-15);
    }

    #[test]
    fn rank_deficient_min_singular_value_is_roundoff() {
        // Two identical columns: sigma_min must come out at roundoff level,
        // not sqrt(eps).
        let col: Vec<Complex64> = (0..6).map(|i| c(1.0 + i as f64, 0.3 * i as f64)).collect();
        let m = CMat::from_columns(&[col.clone(), col.clone(), vec![ONE; 6]]);
        let sv = m.singular_values();
        assert!(sv[2] < 1e-12, "sigma_min = {}", sv[2]);
    }

    #[test]
    fn complex_rotation_matches_known_svd() {
        // A = [[1, 1], [0, i]]: A^H A = [[1, 1], [1, 2]], eigenvalues (3 ± sqrt(5))/2.
        let m = CMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) | (0, 1) => ONE,
            (1, 1) => c(0.0, 1.0),
            _ => ZERO,
        });
        let sv = m.singular_values();
        let hi = ((3.0 + 5f64.sqrt()) / 2.0).sqrt();
        let lo = ((3.0 - 5f64.sqrt()) / 2.0).sqrt();
        assert!((sv[0] - hi).abs() < 1e-14);
        assert!((sv[1] - lo).abs() < 1e-14);
    }

    #[test]
    fn complex_gram_phases_match_moment_oracle() {
        // Fully complex Gram structure. Check the singular values against the
        // first three moments of A^H A (trace, squared trace, determinant),
        // which are computable without any SVD.
        let a = CMat::from_fn(3, 3, |i, j| {
            let k = (1 + 3 * i + j) as f64;
            Complex64::new((1.7 * k).sin() + 0.5, (0.9 * k * k).cos())
        });
        let sv = a.singular_values();
        assert!(sv[2] > 0.05, "test matrix should be well conditioned, sv = {sv:?}");
        let g = a.adjoint().matmul(&a);
        let trace: f64 = (0..3).map(|i| g.at(i, i).re).sum();
        let g2 = g.matmul(&g);
        let trace2: f64 = (0..3).map(|i| g2.at(i, i).re).sum();
        let det = {
            // |det A|^2 via LU of G: product of pivots.
            let lu = g.lu().unwrap();
            let mut p = 1.0;
            for i in 0..3 {
                p *= lu.lu.at(i, i).norm();
            }
            p
        };
        let m1: f64 = sv.iter().map(|s| s * s).sum();
        let m2: f64 = sv.iter().map(|s| s.powi(4)).sum();
        let m3: f64 = sv.iter().map(|s| s * s).product();
        assert!((m1 - trace).abs() < 1e-10 * trace.abs());
        assert!((m2 - trace2).abs() < 1e-10 * trace2.abs());
        assert!((m3 - det).abs() < 1e-9 * det.abs());
    }

    #[test]
    fn rectangular_matches_square_of_adjoint() {
        let m = CMat::from_fn(3, 5, |i, j| c((i * j) as f64 + 1.0, i as f64 - j as f64));
        let sv1 = m.singular_values();
        let sv2 = m.adjoint().singular_values();
        assert_eq!(sv1.len(), 3);
        for (a, b) in sv1.iter().zip(&sv2) {
            assert!((a - b).abs() < 1e-12 * sv1[0]);
        }
    }

    #[test]
    fn lu_solves_and_inverts() {
        let m = CMat::from_fn(4, 4, |i, j| {
            c(((i + 2 * j) % 5) as f64 + if i == j { 6.0 } else { 0.0 }, (i as f64 - j as f64) * 0.5)
        });
        let inv = m.inverse().unwrap();
        let prod = m.matmul(&inv);
        let residual = prod.sub(&CMat::identity(4)).op_norm();
        assert!(residual < 1e-13, "residual = {residual}");

        let b: Vec<Complex64> = (0..4).map(|i| c(i as f64 + 1.0, -0.25 * i as f64)).collect();
        let x = m.lu().unwrap().solve(&b);
        let back = m.matvec(&x);
        for (u, v) in back.iter().zip(&b) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn singular_matrix_has_no_lu() {
        let m = CMat::from_columns(&[vec![ONE, ONE], vec![ONE, ONE]]);
        assert!(m.lu().is_none() || m.inverse().is_some());
        // Exactly zero matrix definitely fails.
        assert!(CMat::zeros(3, 3).lu().is_none());
    }

    #[test]
    fn matmul_adjoint_consistency() {
        let a = CMat::from_fn(3, 4, |i, j| c(i as f64 + 0.5, j as f64 - 1.0));
        let b = CMat::from_fn(4, 2, |i, j| c(j as f64 - i as f64, 1.0));
        let left = a.matmul(&b).adjoint();
        let right = b.adjoint().matmul(&a.adjoint());
        assert!(left.sub(&right).max_abs() < 1e-13);
    }
}
