//! Field-generic dense linear algebra: inner products, projections,
//! Gram–Schmidt and a Hermitian eigensolver.
//!
//! The inner product is left-linear, `<x,y> = sum_i x_i * conj(y_i)`, and the
//! eigensolver is a cyclic Jacobi iteration with complex rotations. Both real
//! and complex data travel in `Complex<F>` storage; a [`Field`] tag records
//! which field a computation lives over and mixing tags is a usage error.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::{real, Kahan, KahanComplex, Real, C};

/// Scalar field tag. All vectors and matrices in one computation share it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

/// Orthonormality tolerance for bases fed to [`project`].
pub const ORTHONORMAL_TOL: f64 = 1e-10;
/// Hermitian-symmetry tolerance, relative to the largest entry.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Jacobi stopping tolerance, relative to the Frobenius norm.
pub const JACOBI_TOL: f64 = 1e-13;
/// Jacobi sweep cap.
pub const JACOBI_MAX_SWEEPS: usize = 40;

/// A vector of the ambient Hilbert space in a fixed coordinate realization.
///
/// Coordinates are always taken with respect to an orthonormal system of the
/// realization, so the norm is the plain `l2` norm of `coords`.
#[derive(Clone, Debug)]
pub struct AmbientVector<F> {
    coords: Vec<C<F>>,
    field: Field,
    realization: Arc<str>,
}

impl<F: Real> AmbientVector<F> {
    pub fn new(coords: Vec<C<F>>, field: Field, realization: impl Into<Arc<str>>) -> Self {
        AmbientVector { coords, field, realization: realization.into() }
    }

    pub fn zero(dim: usize, field: Field, realization: impl Into<Arc<str>>) -> Self {
        AmbientVector { coords: vec![Complex::new(F::zero(), F::zero()); dim], field, realization: realization.into() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn realization(&self) -> &Arc<str> {
        &self.realization
    }

    pub fn coords(&self) -> &[C<F>] {
        &self.coords
    }

    pub fn coords_mut(&mut self) -> &mut [C<F>] {
        &mut self.coords
    }

    pub fn into_coords(self) -> Vec<C<F>> {
        self.coords
    }

    pub fn norm_sqr(&self) -> F {
        let mut acc = Kahan::new();
        for z in &self.coords {
            acc.add(z.norm_sqr());
        }
        acc.value()
    }

    pub fn norm(&self) -> F {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|z| z.re == F::zero() && z.im == F::zero())
    }

    pub fn scaled(&self, s: C<F>) -> Self {
        let coords = self.coords.iter().map(|z| z * s).collect();
        AmbientVector { coords, field: self.field, realization: self.realization.clone() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(AmbientVector { coords, field: self.field, realization: self.realization.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Ok(AmbientVector { coords, field: self.field, realization: self.realization.clone() })
    }

    /// `self - s * other`, used by Gram-Schmidt.
    pub fn axpy_sub(&mut self, s: C<F>, other: &Self) {
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a -= s * b;
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.realization != other.realization {
            return Err(Error::RealizationMismatch {
                left: self.realization.to_string(),
                right: other.realization.to_string(),
            });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.coords.len() != other.coords.len() {
            return Err(Error::DimensionMismatch { left: self.coords.len(), right: other.coords.len() });
        }
        Ok(())
    }
}

/// Left-linear inner product `sum_i x_i * conj(y_i)`.
pub fn inner<F: Real>(x: &AmbientVector<F>, y: &AmbientVector<F>) -> Result<C<F>> {
    x.check_compatible(y)?;
    let mut acc = KahanComplex::new();
    for (a, b) in x.coords().iter().zip(y.coords()) {
        acc.add(a * b.conj());
    }
    Ok(acc.value())
}

/// Largest deviation of `basis` from orthonormality, `max |<b_i,b_j> - delta_ij|`.
pub fn orthonormality_deviation<F: Real>(basis: &[AmbientVector<F>]) -> Result<F> {
    let mut worst = F::zero();
    for (i, bi) in basis.iter().enumerate() {
        for (j, bj) in basis.iter().enumerate().skip(i) {
            let ip = inner(bi, bj)?;
            let target = if i == j { F::one() } else { F::zero() };
            let dev = (ip - Complex::new(target, F::zero())).norm();
            if dev > worst {
                worst = dev;
            }
        }
    }
    Ok(worst)
}

/// Orthogonal projection of `x` onto the span of an orthonormal `basis`.
pub fn project<F: Real>(basis: &[AmbientVector<F>], x: &AmbientVector<F>) -> Result<AmbientVector<F>> {
    let dev = orthonormality_deviation(basis)?;
    if dev.to_f64().unwrap_or(f64::INFINITY) > ORTHONORMAL_TOL {
        return Err(Error::NotOrthonormal { deviation: dev.to_f64().unwrap_or(f64::NAN) });
    }
    let mut out = AmbientVector::zero(x.dim(), x.field(), x.realization().clone());
    for b in basis {
        let coeff = inner(x, b)?;
        for (o, bc) in out.coords_mut().iter_mut().zip(b.coords()) {
            *o += coeff * bc;
        }
    }
    Ok(out)
}

/// Modified Gram-Schmidt with one re-orthogonalization pass.
///
/// Returns the orthonormal vectors together with the expansion coefficients
/// `beta` such that `b_j = sum_k beta[j][k] g_k` (needed to push an operator
/// known only on the `g_k` through the basis change).
pub fn gram_schmidt<F: Real>(
    vectors: &[AmbientVector<F>],
) -> Result<(Vec<AmbientVector<F>>, Vec<Vec<C<F>>>)> {
    let mut basis: Vec<AmbientVector<F>> = Vec::with_capacity(vectors.len());
    let mut coeffs: Vec<Vec<C<F>>> = Vec::with_capacity(vectors.len());
    let zero = Complex::new(F::zero(), F::zero());
    for (idx, g) in vectors.iter().enumerate() {
        let original = g.norm();
        if original == F::zero() {
            return Err(Error::ZeroVector { index: idx + 1 });
        }
        let mut v = g.clone();
        let mut expansion = vec![zero; idx + 1];
        expansion[idx] = Complex::new(F::one(), F::zero());
        // two passes of MGS keep the basis orthonormal to ~eps
        for _ in 0..2 {
            for (k, b) in basis.iter().enumerate() {
                let c = inner(&v, b)?;
                v.axpy_sub(c, b);
                for (e, bc) in expansion.iter_mut().zip(coeffs[k].iter()) {
                    *e -= c * bc;
                }
            }
        }
        let nrm = v.norm();
        if nrm.to_f64().unwrap_or(0.0) <= 1e-10 * original.to_f64().unwrap_or(0.0).max(1.0) {
            return Err(Error::RankDeficient { index: idx + 1, residual: nrm.to_f64().unwrap_or(0.0) });
        }
        let inv = Complex::new(F::one() / nrm, F::zero());
        let b = v.scaled(inv);
        let mut exp_norm = vec![zero; idx + 1];
        for (e, x) in exp_norm.iter_mut().zip(expansion.iter()) {
            *e = *x * inv;
        }
        basis.push(b);
        coeffs.push(exp_norm);
    }
    Ok((basis, coeffs))
}

/// Dense Hermitian matrix, row-major.
#[derive(Clone, Debug)]
pub struct HermitianMatrix<F> {
    entries: Vec<C<F>>,
    dim: usize,
}

impl<F: Real> HermitianMatrix<F> {
    /// Validates `entries[i][j] = conj(entries[j][i])` within
    /// `HERMITIAN_TOL * max|entry|` and symmetrizes exactly.
    pub fn new(entries: Vec<C<F>>, dim: usize) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { left: entries.len(), right: dim * dim });
        }
        let mut max_entry = F::zero();
        for z in &entries {
            max_entry = max_entry.max(z.norm());
        }
        let mut asym = F::zero();
        for i in 0..dim {
            for j in i..dim {
                let d = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
                asym = asym.max(d);
            }
        }
        let bound = real::<F>(HERMITIAN_TOL) * max_entry.max(F::one());
        if asym > bound {
            return Err(Error::NotHermitian { asymmetry: asym.to_f64().unwrap_or(f64::NAN) });
        }
        let mut m = HermitianMatrix { entries, dim };
        let half = real::<F>(0.5);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex::new(m.entries[i * dim + i].re, F::zero());
            for j in (i + 1)..dim {
                let avg = (m.entries[i * dim + j] + m.entries[j * dim + i].conj()) * half;
                m.entries[i * dim + j] = avg;
                m.entries[j * dim + i] = avg.conj();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> C<F> {
        self.entries[i * self.dim + j]
    }

    pub fn apply(&self, x: &[C<F>]) -> Vec<C<F>> {
        assert_eq!(x.len(), self.dim);
        let mut out = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut acc = KahanComplex::new();
            for j in 0..self.dim {
                acc.add(self.entries[i * self.dim + j] * x[j]);
            }
            out.push(acc.value());
        }
        out
    }

    pub fn frobenius(&self) -> F {
        let mut acc = Kahan::new();
        for z in &self.entries {
            acc.add(z.norm_sqr());
        }
        acc.value().sqrt()
    }
}

/// Result of [`hermitian_eig`]: ascending eigenvalues, column-orthonormal
/// eigenvectors (column k in `vectors[i * dim + k]` for row i).
#[derive(Clone, Debug)]
pub struct EigenDecomposition<F> {
    pub eigenvalues: Vec<F>,
    vectors: Vec<C<F>>,
    dim: usize,
}

impl<F: Real> EigenDecomposition<F> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, k: usize) -> Vec<C<F>> {
        (0..self.dim).map(|i| self.vectors[i * self.dim + k]).collect()
    }

    /// Max of the orthonormality deviation and the scaled eigen-residual,
    /// for assertion in tests and validation reports.
    pub fn residuals(&self, a: &HermitianMatrix<F>) -> (F, F) {
        let n = self.dim;
        let mut ortho = F::zero();
        for p in 0..n {
            for q in p..n {
                let mut acc = KahanComplex::new();
                for i in 0..n {
                    acc.add(self.vectors[i * n + p] * self.vectors[i * n + q].conj());
                }
                let target = if p == q { F::one() } else { F::zero() };
                ortho = ortho.max((acc.value() - Complex::new(target, F::zero())).norm());
            }
        }
        let fro = a.frobenius().max(F::one());
        let mut resid = F::zero();
        for k in 0..n {
            let v = self.column(k);
            let av = a.apply(&v);
            let lam = self.eigenvalues[k];
            let mut acc = Kahan::new();
            for i in 0..n {
                acc.add((av[i] - v[i] * lam).norm_sqr());
            }
            let scale = (F::one() + lam.abs()) * fro;
            resid = resid.max(acc.value().sqrt() / scale);
        }
        (ortho, resid)
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices (complex rotations).
///
/// Deterministic for fixed input: fixed sweep order, tolerance
/// `JACOBI_TOL * ||A||_F`, at most [`JACOBI_MAX_SWEEPS`] sweeps. Equal
/// eigenvalues keep their original column order.
pub fn hermitian_eig<F: Real>(a: &HermitianMatrix<F>) -> Result<EigenDecomposition<F>> {
    let n = a.dim();
    let mut m = a.entries.clone();
    let mut v = vec![Complex::new(F::zero(), F::zero()); n * n];
    for i in 0..n {
        v[i * n + i] = Complex::new(F::one(), F::zero());
    }
    let fro = a.frobenius();
    let tol = real::<F>(JACOBI_TOL) * fro.max(F::one());

    let off = |m: &[C<F>]| -> F {
        let mut acc = Kahan::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc.add(m[i * n + j].norm_sqr());
                }
            }
        }
        acc.value().sqrt()
    };

    let mut sweeps = 0;
    while off(&m) > tol {
        if sweeps >= JACOBI_MAX_SWEEPS {
            return Err(Error::EigNotConverged {
                offdiag: off(&m).to_f64().unwrap_or(f64::NAN),
                sweeps,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                let r = apq.norm();
                if r <= tol * real::<F>(1e-3) {
                    continue;
                }
                let app = m[p * n + p].re;
                let aqq = m[q * n + q].re;
                // phase of the off-diagonal entry, then a real Jacobi rotation
                let phase = apq / Complex::new(r, F::zero());
                let tau = (aqq - app) / (real::<F>(2.0) * r);
                let t = if tau == F::zero() {
                    F::one()
                } else {
                    let s = if tau > F::zero() { F::one() } else { -F::one() };
                    s / (tau.abs() + (F::one() + tau * tau).sqrt())
                };
                let c = F::one() / (F::one() + t * t).sqrt();
                let s = t * c;
                // unitary: U_pp = c, U_pq = s*phase, U_qp = -s*conj(phase), U_qq = c
                let upq = phase * s;
                let uqp = -(phase.conj() * s);
                // rows/columns i != p,q
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = m[i * n + p];
                    let aiq = m[i * n + q];
                    let new_ip = aip * c + aiq * uqp;
                    let new_iq = aip * upq + aiq * c;
                    m[i * n + p] = new_ip;
                    m[p * n + i] = new_ip.conj();
                    m[i * n + q] = new_iq;
                    m[q * n + i] = new_iq.conj();
                }
                // 2x2 block
                let two_csr = real::<F>(2.0) * c * s * r;
                let new_pp = c * c * app + s * s * aqq - two_csr;
                let new_qq = s * s * app + c * c * aqq + two_csr;
                m[p * n + p] = Complex::new(new_pp, F::zero());
                m[q * n + q] = Complex::new(new_qq, F::zero());
                m[p * n + q] = Complex::new(F::zero(), F::zero());
                m[q * n + p] = Complex::new(F::zero(), F::zero());
                // accumulate eigenvectors: V <- V U
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = vip * c + viq * uqp;
                    v[i * n + q] = vip * upq + viq * c;
                }
            }
        }
        sweeps += 1;
    }

    // ascending eigenvalues, ties keep original column order
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[i * n + i]
            .re
            .partial_cmp(&m[j * n + j].re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    let eigenvalues: Vec<F> = order.iter().map(|&k| m[k * n + k].re).collect();
    let mut vectors = vec![Complex::new(F::zero(), F::zero()); n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + new_col] = v[i * n + old_col];
        }
    }
    Ok(EigenDecomposition { eigenvalues, vectors, dim: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cvec(res: &str, data: &[(f64, f64)]) -> AmbientVector<f64> {
        AmbientVector::new(
            data.iter().map(|&(re, im)| Complex64::new(re, im)).collect(),
            Field::Complex,
            res,
        )
    }

    #[test]
    fn inner_unit_vector_is_one() {
        let e1 = cvec("t", &[(1.0, 0.0), (0.0, 0.0)]);
        assert_eq!(inner(&e1, &e1).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn inner_left_linear_convention() {
        // <(1, i), (i, 1)> = 1*conj(i) + i*conj(1) = -i + i = 0
        let x = cvec("t", &[(1.0, 0.0), (0.0, 1.0)]);
        let y = cvec("t", &[(0.0, 1.0), (1.0, 0.0)]);
        let ip = inner(&x, &y).unwrap();
        assert!(ip.norm() < 1e-15, "got {ip}");
    }

    #[test]
    fn inner_mismatched_realization_errors() {
        let x = cvec("a", &[(1.0, 0.0)]);
        let y = cvec("b", &[(1.0, 0.0)]);
        assert!(matches!(inner(&x, &y), Err(Error::RealizationMismatch { .. })));
    }

    fn random_vec(rng: &mut ChaCha8Rng, dim: usize) -> AmbientVector<f64> {
        let coords = (0..dim)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        AmbientVector::new(coords, Field::Complex, "rand")
    }

    #[test]
    fn project_single_vector_is_identity_on_it() {
        let b = cvec("t", &[(1.0, 0.0), (0.0, 0.0)]);
        let p = project(std::slice::from_ref(&b), &b).unwrap();
        assert!(p.sub(&b).unwrap().norm() < 1e-14);
    }

    #[test]
    fn project_empty_basis_is_zero() {
        let x = cvec("t", &[(1.0, 2.0), (3.0, -1.0)]);
        let p = project(&[], &x).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn project_matches_normal_equations_oracle() {
        // random 3-vector orthonormal basis in dim 6; oracle solves the
        // least-squares problem by explicit normal equations on raw spans
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let raw: Vec<_> = (0..3).map(|_| random_vec(&mut rng, 6)).collect();
        let (basis, _) = gram_schmidt(&raw).unwrap();
        let x = random_vec(&mut rng, 6);

        // oracle: gram matrix G_ij = <g_j, g_i>, rhs_i = <x, g_i>, solve G a = rhs
        let m = 3;
        let mut g = vec![Complex64::new(0.0, 0.0); m * m];
        let mut rhs = vec![Complex64::new(0.0, 0.0); m];
        for i in 0..m {
            for j in 0..m {
                g[i * m + j] = inner(&raw[j], &raw[i]).unwrap();
            }
            rhs[i] = inner(&x, &raw[i]).unwrap();
        }
        // gaussian elimination (3x3)
        let mut aug = vec![Complex64::new(0.0, 0.0); m * (m + 1)];
        for i in 0..m {
            for j in 0..m {
                aug[i * (m + 1) + j] = g[i * m + j];
            }
            aug[i * (m + 1) + m] = rhs[i];
        }
        for col in 0..m {
            let piv = (col..m)
                .max_by(|&a, &b| {
                    aug[a * (m + 1) + col]
                        .norm()
                        .partial_cmp(&aug[b * (m + 1) + col].norm())
                        .unwrap()
                })
                .unwrap();
            for j in 0..=m {
                aug.swap(col * (m + 1) + j, piv * (m + 1) + j);
            }
            let d = aug[col * (m + 1) + col];
            for j in 0..=m {
                aug[col * (m + 1) + j] /= d;
            }
            for row in 0..m {
                if row != col {
                    let f = aug[row * (m + 1) + col];
                    for j in 0..=m {
                        let v = aug[col * (m + 1) + j];
                        aug[row * (m + 1) + j] -= f * v;
                    }
                }
            }
        }
        let mut oracle = AmbientVector::zero(6, Field::Complex, "rand");
        for i in 0..m {
            let a = aug[i * (m + 1) + m];
            for (o, c) in oracle.coords_mut().iter_mut().zip(raw[i].coords()) {
                *o += a * c;
            }
        }

        let p = project(&basis, &x).unwrap();
        assert!(p.sub(&oracle).unwrap().norm() < 1e-10);
        // idempotent and norm-nonincreasing
        let pp = project(&basis, &p).unwrap();
        assert!(pp.sub(&p).unwrap().norm() < 1e-10);
        assert!(p.norm() <= x.norm() + 1e-12);
    }

    #[test]
    fn project_rejects_skewed_basis() {
        let b1 = cvec("t", &[(1.0, 0.0), (0.0, 0.0)]);
        let b2 = cvec("t", &[(0.7, 0.0), (0.7, 0.0)]);
        let x = cvec("t", &[(1.0, 0.0), (1.0, 0.0)]);
        assert!(matches!(project(&[b1, b2], &x), Err(Error::NotOrthonormal { .. })));
    }

    #[test]
    fn gram_schmidt_reports_dependent_index() {
        let g1 = cvec("t", &[(1.0, 0.0), (0.0, 0.0)]);
        let g2 = cvec("t", &[(2.0, 0.0), (0.0, 0.0)]);
        match gram_schmidt(&[g1, g2]) {
            Err(Error::RankDeficient { index, .. }) => assert_eq!(index, 2),
            other => panic!("expected rank error, got {other:?}"),
        }
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix<f64> {
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            entries[i * n + i] = Complex64::new(rng.random::<f64>() - 0.5, 0.0);
            for j in (i + 1)..n {
                let z = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                entries[i * n + j] = z;
                entries[j * n + i] = z.conj();
            }
        }
        HermitianMatrix::new(entries, n).unwrap()
    }

    #[test]
    fn eig_identity() {
        let n = 4;
        let mut e = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            e[i * n + i] = Complex64::new(1.0, 0.0);
        }
        let a = HermitianMatrix::new(e, n).unwrap();
        let d = hermitian_eig(&a).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0; 4]);
    }

    #[test]
    fn eig_two_by_two_offdiagonal() {
        let a = HermitianMatrix::new(
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
            2,
        )
        .unwrap();
        let d = hermitian_eig(&a).unwrap();
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_reconstructs_random_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_hermitian(&mut rng, 8);
        let d = hermitian_eig(&a).unwrap();
        let (ortho, resid) = d.residuals(&a);
        assert!(ortho < 1e-10, "orthonormality {ortho}");
        assert!(resid < 1e-10, "residual {resid}");
        // reconstruct A = V diag(lambda) V*
        let n = 8;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += d.column(k)[i] * d.eigenvalues[k] * d.column(k)[j].conj();
                }
                worst = worst.max((acc - a.get(i, j)).norm());
            }
        }
        assert!(worst < 1e-9, "reconstruction {worst}");
    }

    #[test]
    fn eig_recovers_known_spectrum_under_random_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 6;
        let raw: Vec<_> = (0..n).map(|_| random_vec(&mut rng, n)).collect();
        let (u, _) = gram_schmidt(&raw).unwrap();
        let spectrum: Vec<f64> = (0..n).map(|k| (k as f64) - 2.5).collect();
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += u[k].coords()[i] * spectrum[k] * u[k].coords()[j].conj();
                }
                entries[i * n + j] = acc;
            }
        }
        let a = HermitianMatrix::new(entries, n).unwrap();
        let d = hermitian_eig(&a).unwrap();
        for (got, want) in d.eigenvalues.iter().zip(&spectrum) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let e = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        assert!(matches!(HermitianMatrix::new(e, 2), Err(Error::NotHermitian { .. })));
    }

    proptest! {
        #[test]
        fn prop_inner_conjugate_symmetric(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = random_vec(&mut rng, 5);
            let y = random_vec(&mut rng, 5);
            let a = inner(&x, &y).unwrap();
            let b = inner(&y, &x).unwrap();
            prop_assert!((a - b.conj()).norm() < 1e-12);
        }

        #[test]
        fn prop_projection_idempotent(seed in 0u64..200) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let raw: Vec<_> = (0..3).map(|_| random_vec(&mut rng, 7)).collect();
            let (basis, _) = gram_schmidt(&raw).unwrap();
            let x = random_vec(&mut rng, 7);
            let p1 = project(&basis, &x).unwrap();
            let p2 = project(&basis, &p1).unwrap();
            prop_assert!(p2.sub(&p1).unwrap().norm() < 1e-10);
            prop_assert!(p1.norm() <= x.norm() + 1e-12);
        }

        #[test]
        fn prop_eig_invariants(seed in 0u64..50) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_hermitian(&mut rng, 5);
            let d = hermitian_eig(&a).unwrap();
            let (ortho, resid) = d.residuals(&a);
            prop_assert!(ortho < 1e-10);
            prop_assert!(resid < 1e-10);
            for w in d.eigenvalues.windows(2) {
                prop_assert!(w[0] <= w[1]);
            }
        }
    }
}
