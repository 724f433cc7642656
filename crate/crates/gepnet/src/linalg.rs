//! Dense row-major matrices and the SPD factorization kernels.
//!
//! Everything numeric in the crate funnels through these routines so the
//! classical detectors and the differentiable graph compute identical
//! floating-point sequences.

use crate::error::{Error, Result};

/// Dense row-major matrix of f64. Column vectors are `n x 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length must match shape");
        Mat { rows, cols, data }
    }

    /// Column vector.
    pub fn col(data: Vec<f64>) -> Self {
        let rows = data.len();
        Mat {
            rows,
            cols: 1,
            data,
        }
    }

    pub fn eye(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn diag(&self) -> Vec<f64> {
        let n = self.rows.min(self.cols);
        (0..n).map(|i| self.data[i * self.cols + i]).collect()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
}

/// C = A * B.
pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let mut c = Mat::zeros(a.rows, b.cols);
    matmul_into(&mut c, a, b);
    c
}

/// C = A * B, writing into preallocated C.
pub fn matmul_into(c: &mut Mat, a: &Mat, b: &Mat) {
    assert_eq!(a.cols, b.rows, "matmul inner dimensions");
    assert_eq!(c.rows, a.rows);
    assert_eq!(c.cols, b.cols);
    c.data.fill(0.0);
    matmul_acc(c, a, b);
}

/// C += A * B.
pub fn matmul_acc(c: &mut Mat, a: &Mat, b: &Mat) {
    assert_eq!(a.cols, b.rows, "matmul inner dimensions");
    let n = b.cols;
    for i in 0..a.rows {
        let arow = a.row(i);
        let crow = &mut c.data[i * n..(i + 1) * n];
        for (k, &aik) in arow.iter().enumerate() {
            let brow = &b.data[k * n..(k + 1) * n];
            for (cv, &bv) in crow.iter_mut().zip(brow) {
                *cv += aik * bv;
            }
        }
    }
}

/// C = A * B^T. Rows of both operands are contiguous, so this is a dot-product kernel.
pub fn matmul_abt(a: &Mat, b: &Mat) -> Mat {
    assert_eq!(a.cols, b.cols, "matmul_abt inner dimensions");
    let mut c = Mat::zeros(a.rows, b.rows);
    for i in 0..a.rows {
        let arow = a.row(i);
        let crow = c.row_mut(i);
        for (j, cv) in crow.iter_mut().enumerate() {
            *cv = dot(arow, b.row(j));
        }
    }
    c
}

/// C += A^T * B, accumulating. Used for weight gradients.
pub fn matmul_atb_acc(c: &mut Mat, a: &Mat, b: &Mat) {
    assert_eq!(a.rows, b.rows, "matmul_atb outer dimensions");
    assert_eq!(c.rows, a.cols);
    assert_eq!(c.cols, b.cols);
    for r in 0..a.rows {
        let arow = a.row(r);
        let brow = b.row(r);
        for (o, &av) in arow.iter().enumerate() {
            let crow = &mut c.data[o * b.cols..(o + 1) * b.cols];
            for (cv, &bv) in crow.iter_mut().zip(brow) {
                *cv += av * bv;
            }
        }
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b) {
        s += x * y;
    }
    s
}

/// Gram matrix H^T H of an N x K matrix.
pub fn gram(h: &Mat) -> Mat {
    let k = h.cols;
    let mut g = Mat::zeros(k, k);
    for n in 0..h.rows {
        let row = h.row(n);
        for i in 0..k {
            let hi = row[i];
            let grow = &mut g.data[i * k..(i + 1) * k];
            for (gv, &hj) in grow.iter_mut().zip(row) {
                *gv += hi * hj;
            }
        }
    }
    g
}

/// H^T y for an N x K matrix and length-N vector.
pub fn mat_t_vec(h: &Mat, y: &[f64]) -> Vec<f64> {
    assert_eq!(h.rows, y.len());
    let mut out = vec![0.0; h.cols];
    for (n, &yv) in y.iter().enumerate() {
        let row = h.row(n);
        for (o, &hv) in out.iter_mut().zip(row) {
            *o += yv * hv;
        }
    }
    out
}

/// y = A x for a column vector x given as a slice.
pub fn matvec(a: &Mat, x: &[f64]) -> Vec<f64> {
    assert_eq!(a.cols, x.len());
    (0..a.rows).map(|r| dot(a.row(r), x)).collect()
}

/// Lower-triangular Cholesky factor of an SPD matrix: A = L L^T.
pub fn cholesky(a: &Mat) -> Result<Mat> {
    assert_eq!(a.rows, a.cols, "cholesky needs a square matrix");
    let n = a.rows;
    let mut l = Mat::zeros(n, n);
    for j in 0..n {
        let mut d = a.get(j, j);
        for k in 0..j {
            let v = l.get(j, k);
            d -= v * v;
        }
        if !(d > 0.0) || !d.is_finite() {
            let diag = a.diag();
            return Err(Error::Factorization {
                pivot: j,
                diag_min: diag.iter().cloned().fold(f64::INFINITY, f64::min),
                diag_max: diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            });
        }
        let ljj = d.sqrt();
        l.set(j, j, ljj);
        for i in (j + 1)..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, s / ljj);
        }
    }
    Ok(l)
}

/// Inverse of an SPD matrix via its Cholesky factor. The result is exactly
/// symmetric by construction.
pub fn spd_inverse(a: &Mat) -> Result<Mat> {
    let l = cholesky(a)?;
    let n = a.rows;
    // X = L^{-1}, lower triangular, by forward substitution on columns of I.
    let mut x = Mat::zeros(n, n);
    for j in 0..n {
        x.set(j, j, 1.0 / l.get(j, j));
        for i in (j + 1)..n {
            let mut s = 0.0;
            for k in j..i {
                s -= l.get(i, k) * x.get(k, j);
            }
            x.set(i, j, s / l.get(i, i));
        }
    }
    // A^{-1} = X^T X; entry (i,j) sums over k >= max(i,j).
    let mut inv = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut s = 0.0;
            for k in j..n {
                s += x.get(k, i) * x.get(k, j);
            }
            inv.set(i, j, s);
            inv.set(j, i, s);
        }
    }
    Ok(inv)
}

/// Solve A x = b for SPD A via Cholesky.
pub fn spd_solve(a: &Mat, b: &[f64]) -> Result<Vec<f64>> {
    let l = cholesky(a)?;
    let n = a.rows;
    // Forward: L z = b.
    let mut z = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l.get(i, k) * z[k];
        }
        z[i] = s / l.get(i, i);
    }
    // Backward: L^T x = z.
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = z[i];
        for k in (i + 1)..n {
            s -= l.get(k, i) * x[k];
        }
        x[i] = s / l.get(i, i);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{normal, stream, Purpose};

    fn random_spd(n: usize, seed: u64) -> Mat {
        let mut rng = stream(seed, Purpose::Generic, 0);
        let mut b = Mat::zeros(n, n);
        for v in b.data.iter_mut() {
            *v = normal(&mut rng);
        }
        let mut a = matmul_abt(&b, &b);
        for i in 0..n {
            a.data[i * n + i] += n as f64; // diagonal boost keeps it well conditioned
        }
        a
    }

    #[test]
    fn matmul_small_known() {
        let a = Mat::from_vec(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let b = Mat::from_vec(3, 2, vec![7.0, 8.0, 9.0, 10.0, 11.0, 12.0]);
        let c = matmul(&a, &b);
        assert_eq!(c.data, vec![58.0, 64.0, 139.0, 154.0]);
    }

    #[test]
    fn abt_equals_matmul_with_transpose() {
        let mut rng = stream(1, Purpose::Generic, 1);
        let a = Mat::from_vec(4, 5, (0..20).map(|_| normal(&mut rng)).collect());
        let b = Mat::from_vec(3, 5, (0..15).map(|_| normal(&mut rng)).collect());
        let c1 = matmul_abt(&a, &b);
        let c2 = matmul(&a, &b.transpose());
        for (x, y) in c1.data.iter().zip(&c2.data) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn atb_acc_matches_explicit() {
        let mut rng = stream(2, Purpose::Generic, 2);
        let a = Mat::from_vec(6, 3, (0..18).map(|_| normal(&mut rng)).collect());
        let b = Mat::from_vec(6, 4, (0..24).map(|_| normal(&mut rng)).collect());
        let mut c = Mat::zeros(3, 4);
        matmul_atb_acc(&mut c, &a, &b);
        let c2 = matmul(&a.transpose(), &b);
        for (x, y) in c.data.iter().zip(&c2.data) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn cholesky_reconstructs() {
        let a = random_spd(8, 10);
        let l = cholesky(&a).unwrap();
        let rec = matmul_abt(&l, &l);
        for (x, y) in rec.data.iter().zip(&a.data) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn spd_inverse_is_inverse_and_symmetric() {
        let a = random_spd(7, 11);
        let inv = spd_inverse(&a).unwrap();
        let id = matmul(&a, &inv);
        for i in 0..7 {
            for j in 0..7 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((id.get(i, j) - want).abs() < 1e-10);
                assert_eq!(inv.get(i, j).to_bits(), inv.get(j, i).to_bits());
            }
        }
    }

    #[test]
    fn spd_solve_matches_inverse() {
        let a = random_spd(6, 12);
        let mut rng = stream(12, Purpose::Generic, 5);
        let b: Vec<f64> = (0..6).map(|_| normal(&mut rng)).collect();
        let x = spd_solve(&a, &b).unwrap();
        let xi = matvec(&spd_inverse(&a).unwrap(), &b);
        for (u, v) in x.iter().zip(&xi) {
            assert!((u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = Mat::from_vec(2, 2, vec![1.0, 2.0, 2.0, 1.0]);
        match cholesky(&a) {
            Err(Error::Factorization { pivot, .. }) => assert_eq!(pivot, 1),
            other => panic!("expected factorization error, got {other:?}"),
        }
    }

    #[test]
    fn gram_and_mat_t_vec() {
        let h = Mat::from_vec(3, 2, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let g = gram(&h);
        assert_eq!(g.data, vec![35.0, 44.0, 44.0, 56.0]);
        let hty = mat_t_vec(&h, &[1.0, 1.0, 1.0]);
        assert_eq!(hty, vec![9.0, 12.0]);
    }
}
