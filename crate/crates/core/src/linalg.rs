//! Dense complex matrix kernels: products, adjoints, trace moments, a cyclic
//! Jacobi eigensolver for Hermitian matrices, extremal eigenvalue by power
//! iteration, rank and determinant.
//!
//! Spectra of non-Hermitian matrices are never materialized as eigenvalue
//! lists; multiset equality of spectra is decided through trace moments
//! `tr(M^k), k = 1..n`, which determine the characteristic polynomial.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::ZERO_C;

/// Default relative tolerance for rank / support decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MatC {
    n: usize,
    data: Vec<Complex64>,
}

impl MatC {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO_C; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            *m.at_mut(i, i) = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                *m.at_mut(i, j) = f(i, j);
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }

    pub fn set_column(&mut self, j: usize, col: &[Complex64]) {
        debug_assert_eq!(col.len(), self.n);
        for (i, v) in col.iter().enumerate() {
            *self.at_mut(i, j) = *v;
        }
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self.at(i, j)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn adjoint(&self) -> MatC {
        MatC::from_fn(self.n, |i, j| self.at(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.at(i, i)).sum()
    }

    pub fn scale(&self, c: Complex64) -> MatC {
        MatC {
            n: self.n,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &MatC) -> Result<MatC> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(MatC {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &MatC) -> Result<MatC> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(MatC {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Embed into the top-left corner of an `m x m` zero matrix.
    pub fn pad_to(&self, m: usize) -> Result<MatC> {
        if m < self.n {
            return Err(Error::DimensionMismatch(self.n, m));
        }
        let mut out = MatC::zeros(m);
        for i in 0..self.n {
            for j in 0..self.n {
                *out.at_mut(i, j) = self.at(i, j);
            }
        }
        Ok(out)
    }

    pub fn mat_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch(v.len(), self.n));
        }
        Ok((0..self.n)
            .map(|i| {
                let row = &self.data[i * self.n..(i + 1) * self.n];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect())
    }

    /// Max deviation from Hermitian symmetry, `max |a_ij - conj(a_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                dev = dev.max((self.at(i, j) - self.at(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol * self.max_abs().max(1.0)
    }
}

pub fn matmul(a: &MatC, b: &MatC) -> Result<MatC> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch(a.n, b.n));
    }
    let n = a.n;
    let mut out = MatC::zeros(n);
    for i in 0..n {
        for k in 0..n {
            let aik = a.at(i, k);
            if aik == ZERO_C {
                continue;
            }
            for j in 0..n {
                *out.at_mut(i, j) += aik * b.at(k, j);
            }
        }
    }
    Ok(out)
}

/// Trace moments `tr(A^k)` for `k = 1..=kmax`.
pub fn trace_moments(a: &MatC, kmax: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(kmax);
    if kmax == 0 {
        return out;
    }
    out.push(a.trace());
    let mut power = a.clone();
    for _ in 2..=kmax {
        power = matmul(&power, a).expect("same dimension");
        out.push(power.trace());
    }
    out
}

/// Multiset spectrum comparison through trace moments. Two `n x n` matrices
/// have equal spectra iff all moments up to `n` agree (Newton's identities).
/// Comparison tolerance scales with `n` and the moment magnitude.
pub fn spectra_equal(a: &MatC, b: &MatC, tol: f64) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch(a.n, b.n));
    }
    Ok(spectra_deviation(a, b) <= tol)
}

/// Largest normalized moment deviation between two equal-size matrices.
pub fn spectra_deviation(a: &MatC, b: &MatC) -> f64 {
    let n = a.n;
    let ma = trace_moments(a, n);
    let mb = trace_moments(b, n);
    let mut worst = 0.0f64;
    for (x, y) in ma.iter().zip(&mb) {
        let scale = (n as f64) * x.norm().max(y.norm()).max(1.0);
        worst = worst.max((x - y).norm() / scale);
    }
    worst
}

/// Spectrum summary: trace moments always, sorted real eigenvalues when the
/// matrix is Hermitian.
#[derive(Debug, Clone)]
pub struct SpectrumSummary {
    pub n: usize,
    pub trace_moments: Vec<Complex64>,
    pub eigenvalues: Option<Vec<f64>>,
    pub hermitian: bool,
}

impl SpectrumSummary {
    pub fn of(a: &MatC) -> Result<Self> {
        let hermitian = a.is_hermitian(1e-9);
        let eigenvalues = if hermitian {
            Some(eigh(a)?.eigenvalues)
        } else {
            None
        };
        Ok(Self {
            n: a.n,
            trace_moments: trace_moments(a, a.n),
            eigenvalues,
            hermitian,
        })
    }
}

/// Hermitian eigendecomposition result. Eigenvalues sorted descending;
/// `vectors` holds the corresponding eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct EighResult {
    pub eigenvalues: Vec<f64>,
    pub vectors: MatC,
}

/// Cyclic Jacobi eigensolver for a Hermitian matrix. Sweeps rotate away each
/// off-diagonal entry; stops when the off-diagonal Frobenius mass drops below
/// `1e-12 * ||A||_F`.
pub fn eigh(a: &MatC) -> Result<EighResult> {
    let dev = a.hermitian_deviation();
    let scale = a.max_abs().max(1.0);
    if dev > 1e-9 * scale {
        return Err(Error::NotHermitian(dev));
    }
    let n = a.n;
    let mut m = a.clone();
    // symmetrize exactly so rotations stay stable
    for i in 0..n {
        *m.at_mut(i, i) = Complex64::new(m.at(i, i).re, 0.0);
        for j in i + 1..n {
            let v = (m.at(i, j) + m.at(j, i).conj()) * 0.5;
            *m.at_mut(i, j) = v;
            *m.at_mut(j, i) = v.conj();
        }
    }
    let mut v = MatC::identity(n);
    let target = 1e-12 * a.frob_norm();

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += m.at(i, j).norm_sqr();
                }
            }
        }
        if off.sqrt() <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let gamma = m.at(p, q);
                let gnorm = gamma.norm();
                if gnorm <= 1e-300 {
                    continue;
                }
                let alpha = gamma / gnorm; // unit phase
                let app = m.at(p, p).re;
                let aqq = m.at(q, q).re;
                let tau = (aqq - app) / (2.0 * gnorm);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // columns p,q of m and of v
                for i in 0..n {
                    let aip = m.at(i, p);
                    let aiq = m.at(i, q);
                    *m.at_mut(i, p) = c * aip - s * alpha.conj() * aiq;
                    *m.at_mut(i, q) = s * alpha * aip + c * aiq;
                }
                // rows p,q
                for j in 0..n {
                    let apj = m.at(p, j);
                    let aqj = m.at(q, j);
                    *m.at_mut(p, j) = c * apj - s * alpha * aqj;
                    *m.at_mut(q, j) = s * alpha.conj() * apj + c * aqj;
                }
                // re-assert exact zeros / realness on the pivot block
                *m.at_mut(p, q) = ZERO_C;
                *m.at_mut(q, p) = ZERO_C;
                *m.at_mut(p, p) = Complex64::new(m.at(p, p).re, 0.0);
                *m.at_mut(q, q) = Complex64::new(m.at(q, q).re, 0.0);

                for i in 0..n {
                    let vip = v.at(i, p);
                    let viq = v.at(i, q);
                    *v.at_mut(i, p) = c * vip - s * alpha.conj() * viq;
                    *v.at_mut(i, q) = s * alpha * vip + c * viq;
                }
            }
        }
    }

    let mut off = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                off += m.at(i, j).norm_sqr();
            }
        }
    }
    if off.sqrt() > target.max(1e-10 * scale) {
        return Err(Error::NoConvergence);
    }

    let mut idx: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.at(i, i).re).collect();
    idx.sort_by(|&a, &b| diag[b].partial_cmp(&diag[a]).unwrap());
    let eigenvalues: Vec<f64> = idx.iter().map(|&i| diag[i]).collect();
    let mut vectors = MatC::zeros(n);
    for (new_j, &old_j) in idx.iter().enumerate() {
        for i in 0..n {
            *vectors.at_mut(i, new_j) = v.at(i, old_j);
        }
    }
    Ok(EighResult {
        eigenvalues,
        vectors,
    })
}

/// Largest eigenvalue of a Hermitian positive semidefinite matrix by power
/// iteration with a deterministic start vector.
pub fn top_eig(a: &MatC) -> Result<f64> {
    let dev = a.hermitian_deviation();
    let scale = a.max_abs();
    if dev > 1e-9 * scale.max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    let n = a.n;
    if n == 0 || scale == 0.0 {
        return Ok(0.0);
    }
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + (i as f64 + 1.0) / (n as f64 + 1.0), 0.0))
        .collect();
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
    let mut lambda = 0.0f64;
    for _ in 0..20_000 {
        let av = a.mat_vec(&v)?;
        let rayleigh: f64 = av
            .iter()
            .zip(&v)
            .map(|(x, y)| (x * y.conj()).re)
            .sum();
        let an = av.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if an == 0.0 {
            return Ok(0.0);
        }
        let next: Vec<Complex64> = av.iter().map(|x| x / an).collect();
        if (rayleigh - lambda).abs() <= 1e-13 * rayleigh.abs().max(1.0) {
            return Ok(rayleigh);
        }
        lambda = rayleigh;
        v = next;
    }
    Ok(lambda)
}

/// Determinant by LU with partial pivoting.
pub fn det(a: &MatC) -> Complex64 {
    let n = a.n;
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut m = a.clone();
    let mut sign = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let mut piv = k;
        let mut best = m.at(k, k).norm();
        for i in k + 1..n {
            let cand = m.at(i, k).norm();
            if cand > best {
                best = cand;
                piv = i;
            }
        }
        if best == 0.0 {
            return ZERO_C;
        }
        if piv != k {
            for j in 0..n {
                let tmp = m.at(k, j);
                *m.at_mut(k, j) = m.at(piv, j);
                *m.at_mut(piv, j) = tmp;
            }
            sign = -sign;
        }
        let pivot = m.at(k, k);
        for i in k + 1..n {
            let factor = m.at(i, k) / pivot;
            if factor == ZERO_C {
                continue;
            }
            for j in k..n {
                let sub = factor * m.at(k, j);
                *m.at_mut(i, j) -= sub;
            }
        }
    }
    let mut out = sign;
    for k in 0..n {
        out *= m.at(k, k);
    }
    out
}

/// Solve `A x = b` by LU with partial pivoting.
pub fn solve(a: &MatC, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = a.n;
    if b.len() != n {
        return Err(Error::DimensionMismatch(b.len(), n));
    }
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    for k in 0..n {
        let mut piv = k;
        let mut best = m.at(k, k).norm();
        for i in k + 1..n {
            let cand = m.at(i, k).norm();
            if cand > best {
                best = cand;
                piv = i;
            }
        }
        if best == 0.0 {
            return Err(Error::Precondition("singular system".into()));
        }
        if piv != k {
            for j in 0..n {
                let tmp = m.at(k, j);
                *m.at_mut(k, j) = m.at(piv, j);
                *m.at_mut(piv, j) = tmp;
            }
            rhs.swap(k, piv);
        }
        let pivot = m.at(k, k);
        for i in k + 1..n {
            let factor = m.at(i, k) / pivot;
            if factor == ZERO_C {
                continue;
            }
            for j in k..n {
                let sub = factor * m.at(k, j);
                *m.at_mut(i, j) -= sub;
            }
            let sub = factor * rhs[k];
            rhs[i] -= sub;
        }
    }
    let mut x = vec![ZERO_C; n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for (j, xj) in x.iter().enumerate().skip(i + 1) {
            acc -= m.at(i, j) * xj;
        }
        x[i] = acc / m.at(i, i);
    }
    Ok(x)
}

/// Numerical rank of a square matrix; pivots below `tol * max_entry` count
/// as zero.
pub fn rank(a: &MatC, tol: f64) -> usize {
    let rows: Vec<Vec<Complex64>> = (0..a.n)
        .map(|i| a.data[i * a.n..(i + 1) * a.n].to_vec())
        .collect();
    rank_of_rows(&rows, tol)
}

/// Rank of a rectangular row family by Gaussian elimination with complete
/// pivoting.
pub fn rank_of_rows(rows: &[Vec<Complex64>], tol: f64) -> usize {
    let m = rows.len();
    if m == 0 {
        return 0;
    }
    let n = rows[0].len();
    let mut a = rows.to_vec();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let threshold = tol * scale;
    let mut r = 0usize;
    while r < m && r < n {
        let mut bi = r;
        let mut bj = r;
        let mut best = 0.0f64;
        for (i, row) in a.iter().enumerate().skip(r) {
            for (j, v) in row.iter().enumerate().skip(r) {
                let c = v.norm();
                if c > best {
                    best = c;
                    bi = i;
                    bj = j;
                }
            }
        }
        if best <= threshold {
            break;
        }
        a.swap(r, bi);
        if bj != r {
            for row in a.iter_mut() {
                row.swap(r, bj);
            }
        }
        let pivot = a[r][r];
        let pivot_row = a[r].clone();
        for row in a.iter_mut().skip(r + 1) {
            let factor = row[r] / pivot;
            if factor == ZERO_C {
                continue;
            }
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(r) {
                *x -= factor * p;
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_mat(n: usize, rng: &mut ChaCha8Rng) -> MatC {
        MatC::from_fn(n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> MatC {
        let a = random_mat(n, rng);
        a.add(&a.adjoint()).unwrap().scale(Complex64::new(0.5, 0.0))
    }

    #[test]
    fn adjoint_and_trace() {
        let mut m = MatC::zeros(2);
        *m.at_mut(0, 1) = Complex64::new(1.0, 0.0);
        let adj = m.adjoint();
        assert_eq!(adj.at(1, 0), Complex64::new(1.0, 0.0));
        assert_eq!(adj.at(0, 1), ZERO_C);
        assert_eq!(m.adjoint().adjoint(), m);

        let moments = trace_moments(&MatC::identity(3), 2);
        assert!((moments[0] - Complex64::new(3.0, 0.0)).norm() < 1e-15);
        assert!((moments[1] - Complex64::new(3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn moments_of_diagonal_are_power_sums() {
        let vals = [1.5, -2.0, 0.25];
        let m = MatC::from_fn(3, |i, j| {
            if i == j {
                Complex64::new(vals[i], 0.0)
            } else {
                ZERO_C
            }
        });
        let moments = trace_moments(&m, 3);
        for (k, mom) in moments.iter().enumerate() {
            let expect: f64 = vals.iter().map(|v| v.powi(k as i32 + 1)).sum();
            assert!((mom - Complex64::new(expect, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn eigh_two_by_two_unit_phase() {
        // [[1, w],[conj w, 1]] with |w| = 1 has eigenvalues (2, 0).
        let w = Complex64::from_polar(1.0, 0.7);
        let mut m = MatC::identity(2);
        *m.at_mut(0, 1) = w;
        *m.at_mut(1, 0) = w.conj();
        let r = eigh(&m).unwrap();
        assert!((r.eigenvalues[0] - 2.0).abs() < 1e-10);
        assert!(r.eigenvalues[1].abs() < 1e-10);
    }

    #[test]
    fn eigh_sorts_descending() {
        let m = MatC::from_fn(3, |i, j| {
            if i == j {
                Complex64::new([3.0, 1.0, 2.0][i], 0.0)
            } else {
                ZERO_C
            }
        });
        let r = eigh(&m).unwrap();
        assert_eq!(r.eigenvalues, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn eigh_reconstruction_and_unitarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &n in &[2usize, 5, 8, 16] {
            let a = random_hermitian(n, &mut rng);
            let r = eigh(&a).unwrap();
            // trace = sum of eigenvalues
            let tr = a.trace().re;
            let sum: f64 = r.eigenvalues.iter().sum();
            assert!((tr - sum).abs() < 1e-9 * tr.abs().max(1.0));
            // A V = V D
            let av = matmul(&a, &r.vectors).unwrap();
            let vd = MatC::from_fn(n, |i, j| r.vectors.at(i, j) * r.eigenvalues[j]);
            let scale = a.max_abs().max(1.0);
            assert!(av.sub(&vd).unwrap().max_abs() < 1e-8 * scale);
            // V* V = I
            let vtv = matmul(&r.vectors.adjoint(), &r.vectors).unwrap();
            assert!(vtv.sub(&MatC::identity(n)).unwrap().max_abs() < 1e-8);
            // reconstruction
            let vdv = matmul(&vd, &r.vectors.adjoint()).unwrap();
            assert!(a.sub(&vdv).unwrap().max_abs() < 1e-8 * scale);
        }
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let mut m = MatC::identity(2);
        *m.at_mut(0, 1) = Complex64::new(1.0, 0.0);
        assert!(matches!(eigh(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn top_eig_basics() {
        assert!((top_eig(&MatC::identity(4)).unwrap() - 1.0).abs() < 1e-10);

        // rank-1 v v* has top eigenvalue ||v||^2
        let v = [
            Complex64::new(1.0, 0.5),
            Complex64::new(-0.25, 2.0),
            Complex64::new(0.0, -1.0),
        ];
        let m = MatC::from_fn(3, |i, j| v[i] * v[j].conj());
        let norm_sq: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        assert!((top_eig(&m).unwrap() - norm_sq).abs() < 1e-8 * norm_sq);

        let w = Complex64::from_polar(1.0, -1.1);
        let mut m2 = MatC::identity(2);
        *m2.at_mut(0, 1) = w;
        *m2.at_mut(1, 0) = w.conj();
        assert!((top_eig(&m2).unwrap() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn top_eig_matches_eigh_on_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for &n in &[3usize, 6, 12] {
            let b = random_mat(n, &mut rng);
            let a = matmul(&b, &b.adjoint()).unwrap();
            let mu = top_eig(&a).unwrap();
            let e = eigh(&a).unwrap().eigenvalues[0];
            assert!((mu - e).abs() < 1e-8 * e.max(1.0));
        }
    }

    #[test]
    fn courant_fischer_bilinear_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let n = 8;
        let a = random_hermitian(n, &mut rng);
        let evs = eigh(&a).unwrap().eigenvalues;
        let mu_abs = evs.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        for _ in 0..100 {
            let mut u: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let mut v: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let nu = u.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            let nv = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            u.iter_mut().for_each(|x| *x /= nu);
            v.iter_mut().for_each(|x| *x /= nv);
            let au = a.mat_vec(&u).unwrap();
            let form: Complex64 = au.iter().zip(&v).map(|(x, y)| x * y.conj()).sum();
            assert!(form.norm() <= mu_abs * (1.0 + 1e-8));
        }
    }

    #[test]
    fn rank_and_det() {
        assert_eq!(rank(&MatC::identity(4), DEFAULT_RANK_TOL), 4);

        let ones = MatC::from_fn(3, |_, _| Complex64::new(1.0, 0.0));
        assert_eq!(rank(&ones, DEFAULT_RANK_TOL), 1);

        // 2x2 character submatrix of Z_3 with kernel e(+xi x / 3):
        // [[1,1],[1, e(2/3)]] with det e(2/3) - 1 = e^{-4 pi i/3} - 1.
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * 2.0 / 3.0);
        let m = MatC::from_fn(2, |i, j| {
            if i == 1 && j == 1 {
                w
            } else {
                Complex64::new(1.0, 0.0)
            }
        });
        let d = det(&m);
        assert!((d - (w - Complex64::new(1.0, 0.0))).norm() < 1e-12);
        assert!(d.norm() > 1e-6);
    }

    #[test]
    fn solve_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let a = random_mat(6, &mut rng);
        let x: Vec<Complex64> = (0..6)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let b = a.mat_vec(&x).unwrap();
        let got = solve(&a, &b).unwrap();
        for (u, v) in got.iter().zip(&x) {
            assert!((u - v).norm() < 1e-9);
        }
    }

    #[test]
    fn spectrum_summary_moments_match_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = random_hermitian(6, &mut rng);
        let summary = SpectrumSummary::of(&a).unwrap();
        assert!(summary.hermitian);
        let evs = summary.eigenvalues.as_ref().unwrap();
        for (k, moment) in summary.trace_moments.iter().enumerate() {
            let power_sum: f64 = evs.iter().map(|v| v.powi(k as i32 + 1)).sum();
            let scale = moment.norm().max(power_sum.abs()).max(1.0);
            assert!((moment - Complex64::new(power_sum, 0.0)).norm() < 1e-8 * scale);
        }

        let b = random_mat(5, &mut rng);
        let summary = SpectrumSummary::of(&b).unwrap();
        assert!(!summary.hermitian);
        assert!(summary.eigenvalues.is_none());
        assert_eq!(summary.trace_moments.len(), 5);
    }

    #[test]
    fn spectra_equal_products_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..5 {
            let a = random_mat(8, &mut rng);
            let b = random_mat(8, &mut rng);
            let ab = matmul(&a, &b).unwrap();
            let ba = matmul(&b, &a).unwrap();
            assert!(spectra_equal(&ab, &ba, 1e-8).unwrap());
        }
    }

    #[test]
    fn spectra_equal_is_multiset() {
        let d12 = MatC::from_fn(2, |i, j| {
            if i == j {
                Complex64::new((i + 1) as f64, 0.0)
            } else {
                ZERO_C
            }
        });
        let d21 = MatC::from_fn(2, |i, j| {
            if i == j {
                Complex64::new((2 - i) as f64, 0.0)
            } else {
                ZERO_C
            }
        });
        let d13 = MatC::from_fn(2, |i, j| {
            if i == j {
                Complex64::new([1.0, 3.0][i], 0.0)
            } else {
                ZERO_C
            }
        });
        assert!(spectra_equal(&d12, &d21, 1e-8).unwrap());
        assert!(!spectra_equal(&d12, &d13, 1e-8).unwrap());
    }

    #[test]
    fn spectra_equal_similarity_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let a = random_mat(6, &mut rng);
        let p = random_mat(6, &mut rng);
        // conjugate a by p: p a p^{-1} via solving p X = a p
        let ap = matmul(&a, &p).unwrap();
        let mut conj = MatC::zeros(6);
        // solve p * column = ap column? we need p^{-1} (a p): X = p^{-1} ap
        for j in 0..6 {
            let col = solve(&p, &ap.column(j)).unwrap();
            conj.set_column(j, &col);
        }
        // spectra of a and p^{-1} a p agree
        assert!(spectra_equal(&a, &conj, 1e-7).unwrap());
    }
}
