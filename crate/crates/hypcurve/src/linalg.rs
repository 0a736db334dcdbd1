//! Dense linear algebra over [`Scalar`]: elimination, least squares,
//! symmetric eigenvalues, and exact rational kernels.
//!
//! Sizes here are small (tens of rows), so everything is written for
//! robustness rather than speed: normal-equation solves go through a
//! diagonally pivoted LDL^T, eigenvalues through cyclic Jacobi, exact
//! kernels through fraction-free row reduction.

use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};

/// Row-major dense matrix of scalars.
#[derive(Debug, Clone)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mode(&self) -> Mode {
        self.data.iter().fold(Mode::Exact, |m, s| m.join(s.mode()))
    }

    pub fn to_float(&self, prec: usize) -> Mat {
        self.map(|s| s.to_float(prec))
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matmul shape");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = &out[(i, j)] + &(a * &other[(k, j)]);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matvec shape");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.cols {
                    acc = &acc + &(&self[(i, j)] * &v[j]);
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        self.map(|x| x * s)
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = &*a + b;
        }
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = &*a - b;
        }
        out
    }

    pub fn max_abs(&self) -> Scalar {
        let mut m = Scalar::zero();
        for s in &self.data {
            let a = s.abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    pub fn frobenius(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for s in &self.data {
            acc = &acc + &(s * s);
        }
        acc.sqrt()
    }

    pub fn is_symmetric_within(&self, tol: &Scalar) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let scale = self.max_abs().max(&Scalar::one());
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let d = (&self[(i, j)] - &self[(j, i)]).abs();
                if &(&d / &scale) > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Determinant and inverse by Gauss-Jordan with partial pivoting.
    /// Returns `None` when a pivot vanishes (singular to working precision).
    pub fn det_inverse(&self) -> Option<(Scalar, Mat)> {
        assert_eq!(self.rows, self.cols, "square required");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        let mut det = Scalar::one();
        for col in 0..n {
            let mut piv = col;
            let mut best = a[(col, col)].abs();
            for r in (col + 1)..n {
                let v = a[(r, col)].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best.is_zero() {
                return None;
            }
            if piv != col {
                a.swap_rows(piv, col);
                inv.swap_rows(piv, col);
                det = -det;
            }
            let p = a[(col, col)].clone();
            det = &det * &p;
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] / &p;
                inv[(col, j)] = &inv[(col, j)] / &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in 0..n {
                    a[(r, j)] = &a[(r, j)] - &(&factor * &a[(col, j)]);
                    inv[(r, j)] = &inv[(r, j)] - &(&factor * &inv[(col, j)]);
                }
            }
        }
        Some((det, inv))
    }

    pub fn det(&self) -> Scalar {
        match self.det_inverse() {
            Some((d, _)) => d,
            None => Scalar::zero(),
        }
    }

    /// Adjugate: det(A) * A^{-1} for invertible A, cofactor fallback otherwise.
    pub fn adjugate(&self) -> Mat {
        let n = self.rows;
        if let Some((det, inv)) = self.det_inverse() {
            return inv.scale(&det);
        }
        // cofactor expansion; only hit near singular points
        let mut adj = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor_matrix(i, j).det();
                let sign = if (i + j) % 2 == 0 { Scalar::one() } else { -Scalar::one() };
                adj[(j, i)] = &sign * &minor;
            }
        }
        adj
    }

    pub fn minor_matrix(&self, skip_row: usize, skip_col: usize) -> Mat {
        let mut rows = Vec::new();
        for i in 0..self.rows {
            if i == skip_row {
                continue;
            }
            let mut row = Vec::new();
            for j in 0..self.cols {
                if j == skip_col {
                    continue;
                }
                row.push(self[(i, j)].clone());
            }
            rows.push(row);
        }
        Mat::from_rows(rows)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

/// Solve the symmetric positive semidefinite system `A x = b` by LDL^T with
/// symmetric diagonal pivoting. Consistent singular systems are fine; the
/// solution restricted to the pivoted subspace is returned.
pub fn solve_spd(a: &Mat, b: &[Scalar]) -> Result<Vec<Scalar>> {
    assert_eq!(a.rows, a.cols);
    assert_eq!(a.rows, b.len());
    let n = a.rows;
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let scale = a.max_abs().max(&Scalar::one());
    let tol = pivot_tol(a.mode(), &scale);
    let mut rank = n;
    for k in 0..n {
        // pick the largest remaining diagonal entry
        let mut piv = k;
        let mut best = m[(k, k)].clone();
        for r in (k + 1)..n {
            if m[(r, r)] > best {
                best = m[(r, r)].clone();
                piv = r;
            }
        }
        if best <= tol {
            rank = k;
            break;
        }
        if piv != k {
            sym_swap(&mut m, k, piv);
            rhs.swap(k, piv);
            perm.swap(k, piv);
        }
        let d = m[(k, k)].clone();
        for r in (k + 1)..n {
            let l = &m[(r, k)] / &d;
            if l.is_zero() {
                continue;
            }
            for c in (k + 1)..n {
                m[(r, c)] = &m[(r, c)] - &(&l * &m[(k, c)]);
            }
            rhs[r] = &rhs[r] - &(&l * &rhs[k]);
            m[(r, k)] = l;
        }
    }
    // consistency of the trailing part
    for r in rank..n {
        if rhs[r].abs() > &(&tol * &Scalar::from_int(1_000)) * &Scalar::one() {
            return Err(Error::Numerical(format!(
                "inconsistent PSD system: residual {} at rank {}",
                rhs[r].to_f64(),
                rank
            )));
        }
    }
    // back substitution: D y = rhs, L^T x = y
    let mut x = vec![Scalar::zero(); n];
    for k in (0..rank).rev() {
        let mut acc = &rhs[k] / &m[(k, k)];
        for r in (k + 1)..rank {
            acc = &acc - &(&m[(r, k)] * &x[r]);
        }
        x[k] = acc;
    }
    // undo permutation
    let mut out = vec![Scalar::zero(); n];
    for k in 0..n {
        out[perm[k]] = x[k].clone();
    }
    Ok(out)
}

fn sym_swap(m: &mut Mat, i: usize, j: usize) {
    let n = m.rows;
    for c in 0..n {
        let a = m[(i, c)].clone();
        let b = m[(j, c)].clone();
        m[(i, c)] = b;
        m[(j, c)] = a;
    }
    for r in 0..n {
        let a = m[(r, i)].clone();
        let b = m[(r, j)].clone();
        m[(r, i)] = b;
        m[(r, j)] = a;
    }
}

fn pivot_tol(mode: Mode, scale: &Scalar) -> Scalar {
    match mode {
        Mode::Exact => Scalar::zero(),
        Mode::Float(p) => {
            let bits = p.saturating_sub(p / 4).max(48);
            scale * &pow2_neg(bits)
        }
    }
}

fn pow2_neg(bits: usize) -> Scalar {
    let mut s = Scalar::one();
    let half = Scalar::from_ratio(1, 2);
    let mut b = bits;
    let mut base = half;
    while b > 0 {
        if b & 1 == 1 {
            s = &s * &base;
        }
        base = &base * &base;
        b >>= 1;
    }
    s
}

/// Least-squares solution of `A x ~ b` through the normal equations.
pub fn lstsq(a: &Mat, b: &[Scalar]) -> Result<Vec<Scalar>> {
    let at = a.transpose();
    let ata = at.matmul(a);
    let atb = at.matvec(b);
    solve_spd(&ata, &atb)
}

/// Minimum-norm solution of the consistent system `A x = b`:
/// `x = A^T u` with `(A A^T) u = b`.
pub fn min_norm_solve(a: &Mat, b: &[Scalar]) -> Result<Vec<Scalar>> {
    let at = a.transpose();
    let aat = a.matmul(&at);
    let u = solve_spd(&aat, b)?;
    Ok(at.matvec(&u))
}

/// Residual norm `|A x - b|_2`.
pub fn residual_norm(a: &Mat, x: &[Scalar], b: &[Scalar]) -> Scalar {
    let ax = a.matvec(x);
    let mut acc = Scalar::zero();
    for (u, v) in ax.iter().zip(b.iter()) {
        let d = u - v;
        acc = &acc + &(&d * &d);
    }
    acc.sqrt()
}

/// Eigenvalues and eigenvectors of a real symmetric matrix by cyclic Jacobi.
/// Returns eigenvalues ascending with matching eigenvector columns.
pub fn jacobi_eigen(a: &Mat, prec: usize) -> (Vec<Scalar>, Mat) {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let p = prec.max(64);
    let mut m = a.to_float(p);
    let mut v = Mat::identity(n).to_float(p);
    if n == 0 {
        return (vec![], v);
    }
    let eps = pow2_neg(p.saturating_sub(8).max(48)).to_float(p);
    let frob = m.frobenius().max(&Scalar::float_from_f64(1e-300, p));
    let stop = &frob * &eps;
    for _sweep in 0..120 {
        let mut off = Scalar::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off = &off + &(&m[(i, j)] * &m[(i, j)]);
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let apq = m[(i, j)].clone();
                if apq.abs() <= &stop * &Scalar::float_from_f64(1e-6, p) {
                    continue;
                }
                let theta = &(&m[(j, j)] - &m[(i, i)]) / &(&Scalar::from_int(2) * &apq);
                let t = {
                    let at = theta.abs();
                    let denom = &at + &(&(&theta * &theta) + &Scalar::one()).sqrt();
                    let t = &Scalar::one() / &denom;
                    if theta.is_negative() {
                        -t
                    } else {
                        t
                    }
                };
                let c = &Scalar::one() / &(&(&t * &t) + &Scalar::one()).sqrt();
                let s = &t * &c;
                // rotate rows/cols i, j
                for k in 0..n {
                    let mik = m[(i, k)].clone();
                    let mjk = m[(j, k)].clone();
                    m[(i, k)] = &(&c * &mik) - &(&s * &mjk);
                    m[(j, k)] = &(&s * &mik) + &(&c * &mjk);
                }
                for k in 0..n {
                    let mki = m[(k, i)].clone();
                    let mkj = m[(k, j)].clone();
                    m[(k, i)] = &(&c * &mki) - &(&s * &mkj);
                    m[(k, j)] = &(&s * &mki) + &(&c * &mkj);
                }
                for k in 0..n {
                    let vki = v[(k, i)].clone();
                    let vkj = v[(k, j)].clone();
                    v[(k, i)] = &(&c * &vki) - &(&s * &vkj);
                    v[(k, j)] = &(&s * &vki) + &(&c * &vkj);
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    let diag: Vec<Scalar> = (0..n).map(|i| m[(i, i)].clone()).collect();
    idx.sort_by(|&x, &y| diag[x].partial_cmp(&diag[y]).unwrap());
    let vals: Vec<Scalar> = idx.iter().map(|&i| diag[i].clone()).collect();
    let mut vecs = Mat::zeros(n, n);
    for (new_j, &old_j) in idx.iter().enumerate() {
        for i in 0..n {
            vecs[(i, new_j)] = v[(i, old_j)].clone();
        }
    }
    (vals, vecs)
}

/// Orthonormal nullspace basis of `A` (float path): eigenvectors of `A^T A`
/// whose eigenvalue is below `tol^2 * lambda_max`.
pub fn nullspace_float(a: &Mat, prec: usize, tol: &Scalar) -> Vec<Vec<Scalar>> {
    let ata = a.transpose().matmul(a);
    let (vals, vecs) = jacobi_eigen(&ata, prec);
    let lam_max = vals.last().cloned().unwrap_or(Scalar::zero()).max(&Scalar::one());
    let thresh = &(tol * tol) * &lam_max;
    let mut basis = Vec::new();
    for (k, lam) in vals.iter().enumerate() {
        if lam <= &thresh {
            basis.push(vecs.col(k));
        }
    }
    basis
}

/// Exact rational nullspace via reduced row echelon form.
pub fn nullspace_exact(a: &Mat) -> Vec<Vec<Scalar>> {
    let mut m = a.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let mut piv = None;
        for i in r..rows {
            if !m[(i, c)].is_zero() {
                piv = Some(i);
                break;
            }
        }
        let Some(piv) = piv else { continue };
        m.swap_rows(piv, r);
        let d = m[(r, c)].clone();
        for j in 0..cols {
            m[(r, j)] = &m[(r, j)] / &d;
        }
        for i in 0..rows {
            if i != r && !m[(i, c)].is_zero() {
                let f = m[(i, c)].clone();
                for j in 0..cols {
                    m[(i, j)] = &m[(i, j)] - &(&f * &m[(r, j)]);
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Scalar::zero(); cols];
        v[free] = Scalar::one();
        for &(pr, pc) in &pivots {
            v[pc] = -&m[(pr, free)];
        }
        basis.push(v);
    }
    basis
}

/// Exact definiteness test over the rationals: LDL^T pivots of a symmetric
/// matrix. Returns `true` iff the matrix is positive definite.
pub fn definite_exact(a: &Mat) -> bool {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut m = a.clone();
    for k in 0..n {
        let d = m[(k, k)].clone();
        if !d.is_positive() {
            return false;
        }
        for r in (k + 1)..n {
            let l = &m[(r, k)] / &d;
            for c in (k + 1)..n {
                m[(r, c)] = &m[(r, c)] - &(&l * &m[(k, c)]);
            }
        }
    }
    true
}

/// Exact positive semidefiniteness over the rationals, by symmetric-pivot LDL.
pub fn psd_exact(a: &Mat) -> bool {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut m = a.clone();
    let mut k = 0;
    while k < n {
        // best remaining diagonal pivot
        let mut piv = k;
        for r in (k + 1)..n {
            if m[(r, r)] > m[(piv, piv)] {
                piv = r;
            }
        }
        if piv != k {
            sym_swap(&mut m, k, piv);
        }
        let d = m[(k, k)].clone();
        if d.is_negative() {
            return false;
        }
        if d.is_zero() {
            // whole remaining row/col must vanish for PSD
            for r in k..n {
                for c in k..n {
                    if !m[(r, c)].is_zero() {
                        return false;
                    }
                }
            }
            return true;
        }
        for r in (k + 1)..n {
            let l = &m[(r, k)] / &d;
            for c in (k + 1)..n {
                m[(r, c)] = &m[(r, c)] - &(&l * &m[(k, c)]);
            }
        }
        k += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_i(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect()).collect(),
        )
    }

    #[test]
    fn det_inverse_exact() {
        let a = mat_i(&[&[2, 1], &[1, 1]]);
        let (det, inv) = a.det_inverse().unwrap();
        assert_eq!(det, Scalar::one());
        let prod = a.matmul(&inv);
        assert_eq!(prod[(0, 0)], Scalar::one());
        assert_eq!(prod[(0, 1)], Scalar::zero());
    }

    #[test]
    fn adjugate_identity() {
        let a = mat_i(&[&[1, 2, 0], &[0, 1, 3], &[4, 0, 1]]);
        let adj = a.adjugate();
        let prod = a.matmul(&adj);
        let det = a.det();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { det.clone() } else { Scalar::zero() };
                assert_eq!(prod[(i, j)], expect);
            }
        }
    }

    #[test]
    fn min_norm_picks_shortest() {
        // x + y = 2 has min-norm solution (1, 1)
        let a = mat_i(&[&[1, 1]]);
        let x = min_norm_solve(&a, &[Scalar::from_int(2)]).unwrap();
        assert_eq!(x[0], Scalar::one());
        assert_eq!(x[1], Scalar::one());
    }

    #[test]
    fn jacobi_finds_eigenvalues() {
        let a = mat_i(&[&[2, 1], &[1, 2]]).to_float(192);
        let (vals, vecs) = jacobi_eigen(&a, 192);
        assert!((vals[0].to_f64() - 1.0).abs() < 1e-30);
        assert!((vals[1].to_f64() - 3.0).abs() < 1e-30);
        // eigenvector check: A v = lambda v
        let v0 = vecs.col(0);
        let av = a.matvec(&v0);
        for i in 0..2 {
            let d = &av[i] - &(&vals[0] * &v0[i]);
            assert!(d.abs().to_f64() < 1e-40);
        }
    }

    #[test]
    fn exact_nullspace_of_rank_one() {
        let a = mat_i(&[&[1, 2, 3]]);
        let ns = nullspace_exact(&a);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let mut acc = Scalar::zero();
            for (c, x) in v.iter().enumerate() {
                acc = &acc + &(&Scalar::from_int([1, 2, 3][c]) * x);
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn definiteness_tests() {
        assert!(definite_exact(&mat_i(&[&[2, 1], &[1, 2]])));
        assert!(!definite_exact(&mat_i(&[&[1, 2], &[2, 1]])));
        assert!(psd_exact(&mat_i(&[&[1, -1], &[-1, 1]])));
        assert!(!psd_exact(&mat_i(&[&[1, 2], &[2, 1]])));
        assert!(!psd_exact(&mat_i(&[&[0, 1], &[1, 0]])));
    }

    #[test]
    fn spd_solve_singular_consistent() {
        // A = [[1,1],[1,1]] (PSD singular), b = (2,2) consistent
        let a = mat_i(&[&[1, 1], &[1, 1]]);
        let x = solve_spd(&a, &[Scalar::from_int(2), Scalar::from_int(2)]).unwrap();
        let ax = a.matvec(&x);
        assert_eq!(ax[0], Scalar::from_int(2));
        assert_eq!(ax[1], Scalar::from_int(2));
    }
}
