//! Sampling levels and scales.
//!
//! A [`SamplingLevel`] is one finite-dimensional triple: a subspace `H_n`
//! given by an orthonormal ambient basis, the compressed symmetric operator
//! `A_n` on it, and an orthonormal eigenbasis with its eigenvalue list. The
//! structured examples (cyclic shift average, grid derivative) carry their
//! eigenbases in closed DFT form instead of dense columns, so levels up to
//! dimension 28800 stay cheap; dense levels come out of the generic builder.
//!
//! A [`ScaleLevel`] attaches to each level the weighted vector family
//! `(e_j, c_j)` with unit weighted mass that drives every measure and
//! embedding downstream.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::linalg::{
    inner, AmbientVector, EigenDecomposition, Field, HermitianMatrix,
};
use crate::operators::{factorial, zigzag};
use crate::real::{real, Kahan, Real, C};

/// Absolute threshold distinguishing a structural zero overlap from rounding,
/// applied to `|<e_j, f>|` with `f` normalized.
pub const SEPARATION_TOL: f64 = 1e-12;
/// Weighted-mass identity tolerance for scales.
pub const SCALE_MASS_TOL: f64 = 1e-12;
/// Below this, successive differences are treated as converged to zero when
/// judging trends (double-precision accumulation noise sits near 1e-15).
pub const NOISE_FLOOR: f64 = 1e-13;

/// How the level realizes `H_n` inside its coordinate realization.
#[derive(Clone, Debug)]
enum LevelKind<F> {
    /// `H_n` spanned by explicit orthonormal columns; dense operator matrix
    /// and dense eigendecomposition.
    Generic {
        basis: Vec<AmbientVector<F>>,
        matrix: HermitianMatrix<F>,
        eigen: EigenDecomposition<F>,
    },
    /// Cyclic shift average on `2n+1` coordinates; DFT eigenbasis.
    Shift,
    /// Central difference on the cyclic grid with `2 n!^2` cells scaled by
    /// `n!/2`; DFT eigenbasis.
    Derivative,
}

/// One sampling level `(H_n, A_n, Omega_n, lambda_n)`.
#[derive(Clone, Debug)]
pub struct SamplingLevel<F> {
    n: usize,
    dim: usize,
    field: Field,
    realization: Arc<str>,
    kind: LevelKind<F>,
    /// Unit roots `exp(2 pi i m / dim)` for the DFT-backed kinds.
    roots: Arc<Vec<C<F>>>,
}

fn unit_roots<F: Real>(m: usize) -> Vec<C<F>> {
    let two_pi = F::PI() + F::PI();
    (0..m)
        .map(|i| {
            let theta = two_pi * real::<F>(i as f64) / real::<F>(m as f64);
            Complex::from_polar(F::one(), theta)
        })
        .collect()
}

impl<F: Real> SamplingLevel<F> {
    pub(crate) fn generic(
        n: usize,
        basis: Vec<AmbientVector<F>>,
        matrix: HermitianMatrix<F>,
        eigen: EigenDecomposition<F>,
        field: Field,
    ) -> Self {
        let realization = basis[0].realization().clone();
        let dim = basis.len();
        SamplingLevel {
            n,
            dim,
            field,
            realization,
            kind: LevelKind::Generic { basis, matrix, eigen },
            roots: Arc::new(Vec::new()),
        }
    }

    pub(crate) fn shift(n: usize) -> Self {
        let dim = 2 * n + 1;
        SamplingLevel {
            n,
            dim,
            field: Field::Complex,
            realization: format!("shift/{n}").into(),
            kind: LevelKind::Shift,
            roots: Arc::new(unit_roots(dim)),
        }
    }

    pub(crate) fn derivative(n: usize) -> Self {
        let f2 = (factorial(n) * factorial(n)) as usize;
        let dim = 2 * f2;
        SamplingLevel {
            n,
            dim,
            field: Field::Complex,
            realization: format!("grid/{n}").into(),
            kind: LevelKind::Derivative,
            roots: Arc::new(unit_roots(dim)),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of `H_n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn realization(&self) -> &Arc<str> {
        &self.realization
    }

    /// Dimension of the ambient coordinate realization.
    pub fn ambient_dim(&self) -> usize {
        match &self.kind {
            LevelKind::Generic { basis, .. } => basis[0].dim(),
            _ => self.dim,
        }
    }

    pub fn is_structured(&self) -> bool {
        !matches!(self.kind, LevelKind::Generic { .. })
    }

    /// Paper-side index label of eigenvector column `idx`.
    pub fn k_index(&self, idx: usize) -> i64 {
        match &self.kind {
            LevelKind::Generic { .. } | LevelKind::Shift => idx as i64,
            LevelKind::Derivative => idx as i64 - (self.dim / 2) as i64,
        }
    }

    pub fn eigenvalue(&self, idx: usize) -> F {
        match &self.kind {
            LevelKind::Generic { eigen, .. } => eigen.eigenvalues[idx],
            LevelKind::Shift => {
                let two_pi = F::PI() + F::PI();
                (two_pi * real::<F>(idx as f64) / real::<F>(self.dim as f64)).cos()
            }
            LevelKind::Derivative => {
                let fact = real::<F>(factorial(self.n) as f64);
                let f2 = real::<F>((self.dim / 2) as f64);
                let k = real::<F>(self.k_index(idx) as f64);
                fact * (F::PI() * k / f2).sin()
            }
        }
    }

    pub fn eigenvalues(&self) -> Vec<F> {
        (0..self.dim).map(|i| self.eigenvalue(i)).collect()
    }

    /// Eigenvector column `idx` in level coordinates.
    pub fn eigenvector(&self, idx: usize) -> Vec<C<F>> {
        match &self.kind {
            LevelKind::Generic { eigen, .. } => eigen.column(idx),
            LevelKind::Shift => {
                // f_k[l] = exp(-2 pi i l k / N) / sqrt(N), l in [-n, n]
                let nn = self.dim;
                let scale = F::one() / real::<F>(nn as f64).sqrt();
                (0..nn)
                    .map(|pos| {
                        let l = pos as i64 - self.n as i64;
                        let m = (-(l * idx as i64)).rem_euclid(nn as i64) as usize;
                        self.roots[m] * scale
                    })
                    .collect()
            }
            LevelKind::Derivative => {
                // normalized coefficients: f_k[l] = exp(2 pi i l k / M) / sqrt(M)
                let m_dim = self.dim;
                let f2 = (m_dim / 2) as i64;
                let k = idx as i64 - f2;
                let scale = F::one() / real::<F>(m_dim as f64).sqrt();
                (0..m_dim)
                    .map(|pos| {
                        let l = pos as i64 - f2;
                        let m = (l * k).rem_euclid(m_dim as i64) as usize;
                        self.roots[m] * scale
                    })
                    .collect()
            }
        }
    }

    /// Apply `A_n` in level coordinates.
    pub fn apply_op(&self, x: &[C<F>]) -> Vec<C<F>> {
        assert_eq!(x.len(), self.dim);
        match &self.kind {
            LevelKind::Generic { matrix, .. } => matrix.apply(x),
            LevelKind::Shift => {
                let nn = self.dim;
                let half = real::<F>(0.5);
                (0..nn)
                    .map(|i| (x[(i + nn - 1) % nn] + x[(i + 1) % nn]) * half)
                    .collect()
            }
            LevelKind::Derivative => {
                let m = self.dim;
                let s = real::<F>(factorial(self.n) as f64) * real::<F>(0.5);
                let minus_i = Complex::new(F::zero(), -F::one());
                (0..m)
                    .map(|p| minus_i * s * (x[(p + 1) % m] - x[(p + m - 1) % m]))
                    .collect()
            }
        }
    }

    /// Dense `A_n` matrix; intended for cross-checks at small dimension.
    pub fn a_matrix_dense(&self) -> Result<HermitianMatrix<F>> {
        match &self.kind {
            LevelKind::Generic { matrix, .. } => Ok(matrix.clone()),
            _ => {
                let d = self.dim;
                if d > 4096 {
                    return Err(Error::Invalid(format!(
                        "refusing to materialize a {d}x{d} dense operator"
                    )));
                }
                let mut entries = vec![Complex::new(F::zero(), F::zero()); d * d];
                for j in 0..d {
                    let mut e = vec![Complex::new(F::zero(), F::zero()); d];
                    e[j] = Complex::new(F::one(), F::zero());
                    let col = self.apply_op(&e);
                    for i in 0..d {
                        entries[i * d + j] = col[i];
                    }
                }
                HermitianMatrix::new(entries, d)
            }
        }
    }

    /// Level coordinates of an ambient vector lying in (or projected onto) `H_n`.
    pub fn level_coords(&self, x: &AmbientVector<F>) -> Result<Vec<C<F>>> {
        if x.realization() != &self.realization {
            return Err(Error::RealizationMismatch {
                left: x.realization().to_string(),
                right: self.realization.to_string(),
            });
        }
        match &self.kind {
            LevelKind::Generic { basis, .. } => {
                basis.iter().map(|b| inner(x, b)).collect()
            }
            _ => Ok(x.coords().to_vec()),
        }
    }

    /// Ambient vector with the given level coordinates.
    pub fn to_ambient(&self, coords: &[C<F>]) -> AmbientVector<F> {
        match &self.kind {
            LevelKind::Generic { basis, .. } => {
                let mut out = AmbientVector::zero(basis[0].dim(), self.field, self.realization.clone());
                for (c, b) in coords.iter().zip(basis) {
                    for (o, bc) in out.coords_mut().iter_mut().zip(b.coords()) {
                        *o += *c * bc;
                    }
                }
                out
            }
            _ => AmbientVector::new(coords.to_vec(), self.field, self.realization.clone()),
        }
    }

    /// Residual of `x` against membership in `H_n`.
    pub fn membership_residual(&self, x: &AmbientVector<F>) -> Result<F> {
        let coords = self.level_coords(x)?;
        let back = self.to_ambient(&coords);
        Ok(back.sub(x)?.norm())
    }

}

/// Batched analysis/synthesis against a level's eigenbasis.
///
/// `analyze` maps level coordinates to the coefficient list `<x, f_k>` over
/// the eigenbasis; `synthesize` is its inverse. DFT-backed levels go through
/// an FFT; dense levels multiply by the stored columns.
pub struct LevelTransform<'a, F: Real> {
    level: &'a SamplingLevel<F>,
    fft: Option<Arc<dyn Fft<F>>>,
    ifft: Option<Arc<dyn Fft<F>>>,
}

impl<'a, F: Real> LevelTransform<'a, F> {
    pub fn new(level: &'a SamplingLevel<F>) -> Self {
        let (fft, ifft) = match level.kind {
            LevelKind::Derivative => {
                let mut planner = FftPlanner::new();
                (
                    Some(planner.plan_fft_forward(level.dim)),
                    Some(planner.plan_fft_inverse(level.dim)),
                )
            }
            _ => (None, None),
        };
        LevelTransform { level, fft, ifft }
    }

    pub fn level(&self) -> &SamplingLevel<F> {
        self.level
    }

    /// `<x, f_k>` for every eigenvector, `x` in level coordinates.
    pub fn analyze(&self, x: &[C<F>]) -> Vec<C<F>> {
        let level = self.level;
        let d = level.dim;
        assert_eq!(x.len(), d);
        match &level.kind {
            LevelKind::Generic { eigen, .. } => (0..d)
                .map(|k| {
                    let col = eigen.column(k);
                    let mut acc = crate::real::KahanComplex::new();
                    for (xi, ci) in x.iter().zip(&col) {
                        acc.add(*xi * ci.conj());
                    }
                    acc.value()
                })
                .collect(),
            LevelKind::Shift => {
                // <x, f_k> = sum_l x_l exp(+2 pi i l k / N) / sqrt(N)
                let nn = d as i64;
                let scale = F::one() / real::<F>(d as f64).sqrt();
                (0..d)
                    .map(|k| {
                        let mut acc = crate::real::KahanComplex::new();
                        for pos in 0..d {
                            let l = pos as i64 - level.n as i64;
                            let m = (l * k as i64).rem_euclid(nn) as usize;
                            acc.add(x[pos] * level.roots[m]);
                        }
                        acc.value() * scale
                    })
                    .collect()
            }
            LevelKind::Derivative => {
                // index shift by F2 turns the cell transform into a plain DFT
                // with a (-1)^k twiddle: <x, f_k> = (-1)^k FFT(x)[k mod M] / sqrt(M)
                let mut buf = x.to_vec();
                self.fft.as_ref().unwrap().process(&mut buf);
                let f2 = (d / 2) as i64;
                let scale = F::one() / real::<F>(d as f64).sqrt();
                (0..d)
                    .map(|pos| {
                        let k = pos as i64 - f2;
                        let v = buf[k.rem_euclid(d as i64) as usize] * scale;
                        if k.rem_euclid(2) == 1 {
                            -v
                        } else {
                            v
                        }
                    })
                    .collect()
            }
        }
    }

    /// Inverse of [`Self::analyze`]: `x = sum_k alpha_k f_k`.
    pub fn synthesize(&self, alpha: &[C<F>]) -> Vec<C<F>> {
        let level = self.level;
        let d = level.dim;
        assert_eq!(alpha.len(), d);
        match &level.kind {
            LevelKind::Generic { eigen, .. } => {
                let mut out = vec![Complex::new(F::zero(), F::zero()); d];
                for (k, a) in alpha.iter().enumerate() {
                    let col = eigen.column(k);
                    for (o, c) in out.iter_mut().zip(&col) {
                        *o += *a * c;
                    }
                }
                out
            }
            LevelKind::Shift => {
                let nn = d as i64;
                let scale = F::one() / real::<F>(d as f64).sqrt();
                (0..d)
                    .map(|pos| {
                        let l = pos as i64 - level.n as i64;
                        let mut acc = crate::real::KahanComplex::new();
                        for (k, a) in alpha.iter().enumerate() {
                            let m = (-(l * k as i64)).rem_euclid(nn) as usize;
                            acc.add(*a * level.roots[m]);
                        }
                        acc.value() * scale
                    })
                    .collect()
            }
            LevelKind::Derivative => {
                let f2 = (d / 2) as i64;
                let mut buf = vec![Complex::new(F::zero(), F::zero()); d];
                for pos in 0..d {
                    let k = pos as i64 - f2;
                    let m = k.rem_euclid(d as i64) as usize;
                    let v = alpha[pos];
                    buf[m] = if k.rem_euclid(2) == 1 { -v } else { v };
                }
                self.ifft.as_ref().unwrap().process(&mut buf);
                let scale = F::one() / real::<F>(d as f64).sqrt();
                buf.into_iter().map(|v| v * scale).collect()
            }
        }
    }
}

/// Graph projection of the pair `(g, ag)` onto the graph of `A_n`.
///
/// Minimizes `||x - g||^2 + ||A_n x - ag||^2` over `x` in `H_n` by solving
/// `(I + A_n^2) c = u + A_n v` through the level's own eigendecomposition.
/// Returns `x`, `A_n x` (both ambient) and the residual norm of the pair.
pub fn graph_projection<F: Real>(
    level: &SamplingLevel<F>,
    g: &AmbientVector<F>,
    ag: &AmbientVector<F>,
) -> Result<(AmbientVector<F>, AmbientVector<F>, F)> {
    let u = level.level_coords(g)?;
    let v = level.level_coords(ag)?;
    let mv = level.apply_op(&v);
    let rhs: Vec<C<F>> = u.iter().zip(&mv).map(|(a, b)| a + b).collect();
    let tr = LevelTransform::new(level);
    let mut alpha = tr.analyze(&rhs);
    for (k, a) in alpha.iter_mut().enumerate() {
        let lam = level.eigenvalue(k);
        *a = *a / Complex::new(F::one() + lam * lam, F::zero());
    }
    let x = tr.synthesize(&alpha);
    let ax = level.apply_op(&x);
    let x_amb = level.to_ambient(&x);
    let ax_amb = level.to_ambient(&ax);
    let r1 = x_amb.sub(g)?.norm_sqr();
    let r2 = ax_amb.sub(ag)?.norm_sqr();
    Ok((x_amb, ax_amb, (r1 + r2).sqrt()))
}

/// One level of a scale: vectors `e_j` with weights `c_j`, unit weighted mass.
#[derive(Clone, Debug)]
pub struct ScaleLevel<F> {
    n: usize,
    e: Vec<AmbientVector<F>>,
    c: Vec<F>,
}

impl<F: Real> ScaleLevel<F> {
    /// Validates positivity and the weighted-mass identity.
    pub fn new(n: usize, e: Vec<AmbientVector<F>>, c: Vec<F>) -> Result<Self> {
        if e.len() != c.len() || e.is_empty() {
            return Err(Error::Invalid("scale needs matching nonempty e/c lists".into()));
        }
        for (j, (ej, cj)) in e.iter().zip(&c).enumerate() {
            if ej.is_zero() {
                return Err(Error::ZeroVector { index: j + 1 });
            }
            if !(*cj > F::zero()) {
                return Err(Error::Invalid(format!("weight c_{} must be positive", j + 1)));
            }
        }
        let scale = ScaleLevel { n, e, c };
        let mass = scale.mass();
        let dev = (mass - F::one()).abs().to_f64().unwrap_or(f64::NAN);
        if !(dev <= SCALE_MASS_TOL) {
            return Err(Error::Invalid(format!(
                "scale mass deviates from 1 by {dev:e} (tolerance {SCALE_MASS_TOL:e})"
            )));
        }
        Ok(scale)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of pairs `N_n`.
    pub fn count(&self) -> usize {
        self.e.len()
    }

    pub fn e_vectors(&self) -> &[AmbientVector<F>] {
        &self.e
    }

    pub fn c_weights(&self) -> &[F] {
        &self.c
    }

    /// `sum_j c_j ||e_j||^2`.
    pub fn mass(&self) -> F {
        let mut acc = Kahan::new();
        for (ej, cj) in self.e.iter().zip(&self.c) {
            acc.add(*cj * ej.norm_sqr());
        }
        acc.value()
    }

    /// `sum_j c_j ||A_n e_j||^2` on the given level.
    pub fn operator_mass(&self, level: &SamplingLevel<F>) -> Result<F> {
        let mut acc = Kahan::new();
        for (ej, cj) in self.e.iter().zip(&self.c) {
            let coords = level.level_coords(ej)?;
            let a = level.apply_op(&coords);
            let mut nrm = Kahan::new();
            for z in &a {
                nrm.add(z.norm_sqr());
            }
            acc.add(*cj * nrm.value());
        }
        Ok(acc.value())
    }
}

/// Limits `(e_j, c_j)` of a scale, closed-form for the fixtures.
#[derive(Clone, Debug)]
pub struct ScaleLimit<F> {
    pub e_limits: Vec<AmbientVector<F>>,
    pub c_limits: Vec<F>,
    pub provenance: Provenance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Extrapolated,
}

impl<F: Real> ScaleLimit<F> {
    /// Plain last-level extrapolation for operators without closed forms.
    pub fn extrapolated(scale: &ScaleLevel<F>) -> Self {
        ScaleLimit {
            e_limits: scale.e_vectors().to_vec(),
            c_limits: scale.c_weights().to_vec(),
            provenance: Provenance::Extrapolated,
        }
    }

    /// `sum_j c_j ||e_j||^2` over the stored prefix.
    pub fn mass(&self) -> F {
        let mut acc = Kahan::new();
        for (e, c) in self.e_limits.iter().zip(&self.c_limits) {
            acc.add(*c * e.norm_sqr());
        }
        acc.value()
    }
}

/// Scale construction for a generic level, following the existence argument:
/// `e_j` is the graph-projection approximant of `g_j` for `j <= n`, the last
/// vector is the eigenvector sum, and the weights are the normalized
/// `a_j = 1 / (2^j max(||e_j||^2, ||A_n e_j||^2))`.
pub fn build_scale_level<F: Real>(
    level: &SamplingLevel<F>,
    gs: &crate::operators::GraphSequence<F>,
) -> Result<ScaleLevel<F>> {
    let n = level.n();
    if gs.pairs().len() < n {
        return Err(Error::NotEnoughPairs { needed: n, available: gs.pairs().len() });
    }
    let mut e: Vec<AmbientVector<F>> = Vec::with_capacity(n + 1);
    for (g, ag) in gs.pairs().iter().take(n) {
        let (x, _, _) = graph_projection(level, g, ag)?;
        if x.norm().to_f64().unwrap_or(0.0) < 1e-14 {
            return Err(Error::Internal(format!(
                "graph-projection approximant of g_{} vanished",
                e.len() + 1
            )));
        }
        e.push(x);
    }
    // e_{n+1} = sum of the eigenbasis
    let d = level.dim();
    let mut sum = vec![Complex::new(F::zero(), F::zero()); d];
    for k in 0..d {
        let f = level.eigenvector(k);
        for (s, fc) in sum.iter_mut().zip(&f) {
            *s += *fc;
        }
    }
    e.push(level.to_ambient(&sum));

    let mut a = Vec::with_capacity(e.len());
    let two = real::<F>(2.0);
    for (j, ej) in e.iter().enumerate() {
        let coords = level.level_coords(ej)?;
        let aej = level.apply_op(&coords);
        let mut nrm = Kahan::new();
        for z in &aej {
            nrm.add(z.norm_sqr());
        }
        let denom = ej.norm_sqr().max(nrm.value());
        a.push(F::one() / (two.powi(j as i32 + 1) * denom));
    }
    let mut norm = Kahan::new();
    for (aj, ej) in a.iter().zip(&e) {
        norm.add(*aj * ej.norm_sqr());
    }
    let z = norm.value();
    let c: Vec<F> = a.iter().map(|aj| *aj / z).collect();
    ScaleLevel::new(n, e, c)
}

/// Closed-form scale for a shift level: `e_j` is the basis vector at the
/// zig-zag offset `l_j`, `c_j = 2^-j / (1 - 2^-N)` with `N = 2n+1`.
pub fn shift_scale_level<F: Real>(level: &SamplingLevel<F>) -> Result<ScaleLevel<F>> {
    if !matches!(level.kind, LevelKind::Shift) {
        return Err(Error::Invalid("shift_scale_level needs a shift level".into()));
    }
    let n = level.n();
    let count = 2 * n + 1;
    let dim = level.dim();
    let mut e = Vec::with_capacity(count);
    let mut c = Vec::with_capacity(count);
    let normalizer = F::one() - real::<F>(0.5).powi(count as i32);
    for j in 1..=count {
        let l = zigzag(j);
        let pos = (l + n as i64) as usize;
        let mut coords = vec![Complex::new(F::zero(), F::zero()); dim];
        coords[pos] = Complex::new(F::one(), F::zero());
        e.push(AmbientVector::new(coords, Field::Complex, level.realization().clone()));
        c.push(real::<F>(0.5).powi(j as i32) / normalizer);
    }
    ScaleLevel::new(n, e, c)
}

/// Grid Gaussian with the imaginary separating spike at cell zero:
/// `E^(n) = sum_{|l| <= L} E(l/n!) 1_{s_l} + (i/n!) 1_{s_0}`, in normalized
/// coordinates. The spike keeps every eigenbasis overlap nonzero.
pub(crate) fn derivative_gaussian<F: Real>(level: &SamplingLevel<F>) -> Result<AmbientVector<F>> {
    if !matches!(level.kind, LevelKind::Derivative) {
        return Err(Error::Invalid("derivative gaussian needs a derivative level".into()));
    }
    let n = level.n();
    let fact = factorial(n);
    let f2 = fact * fact;
    let cut = crate::operators::derivative_support_cut(n);
    let inv_sqrt_fact = F::one() / real::<F>(fact as f64).sqrt();
    let mut coords = vec![Complex::new(F::zero(), F::zero()); level.dim()];
    for l in -cut..=cut {
        let t = real::<F>(l as f64) / real::<F>(fact as f64);
        let v = crate::operators::gaussian_profile(t) * inv_sqrt_fact;
        coords[(l + f2) as usize] = Complex::new(v, F::zero());
    }
    let spike = F::one() / real::<F>(fact as f64) * inv_sqrt_fact;
    coords[f2 as usize] += Complex::new(F::zero(), spike);
    Ok(AmbientVector::new(coords, Field::Complex, level.realization().clone()))
}

/// Closed-form scale for a derivative level: `N_n = n!` cyclic translates of
/// the grid Gaussian by `floor(n! q_j)` cells, weights
/// `c_j = 2^-j / ((1 - 2^-N) ||E||^2)`.
pub fn derivative_scale_level<F: Real>(level: &SamplingLevel<F>) -> Result<ScaleLevel<F>> {
    if !matches!(level.kind, LevelKind::Derivative) {
        return Err(Error::Invalid("derivative_scale_level needs a derivative level".into()));
    }
    let n = level.n();
    let fact = factorial(n);
    let count = fact as usize;
    let base = derivative_gaussian(level)?;
    let norm_sq = base.norm_sqr();
    let qs = crate::operators::rationals(count);
    let normalizer = (F::one() - real::<F>(0.5).powi(count as i32)) * norm_sq;
    let dim = level.dim();
    let mut e = Vec::with_capacity(count);
    let mut c = Vec::with_capacity(count);
    for (j, q) in qs.iter().enumerate() {
        let offset = crate::operators::floor_times(fact, *q).rem_euclid(dim as i64) as usize;
        let mut coords = vec![Complex::new(F::zero(), F::zero()); dim];
        for (pos, v) in base.coords().iter().enumerate() {
            coords[(pos + offset) % dim] = *v;
        }
        e.push(AmbientVector::new(coords, Field::Complex, level.realization().clone()));
        c.push(real::<F>(0.5).powi(j as i32 + 1) / normalizer);
    }
    ScaleLevel::new(n, e, c)
}

/// Closed-form limit of the derivative scale: `c_j = 2^-j` and `e_j` the
/// translated Gaussian sampled on the level's grid (no spike).
pub fn derivative_scale_limit<F: Real>(
    level: &SamplingLevel<F>,
    count: usize,
) -> Result<ScaleLimit<F>> {
    if !matches!(level.kind, LevelKind::Derivative) {
        return Err(Error::Invalid("derivative_scale_limit needs a derivative level".into()));
    }
    let n = level.n();
    let fact = factorial(n);
    let f2 = fact * fact;
    let qs = crate::operators::rationals(count);
    let inv_sqrt_fact = F::one() / real::<F>(fact as f64).sqrt();
    let mut e = Vec::with_capacity(count);
    let mut c = Vec::with_capacity(count);
    for (j, q) in qs.iter().enumerate() {
        let shift = real::<F>(*q.numer() as f64) / real::<F>(*q.denom() as f64);
        let mut coords = vec![Complex::new(F::zero(), F::zero()); level.dim()];
        for l in -f2..f2 {
            let t = real::<F>(l as f64) / real::<F>(fact as f64) - shift;
            let v = crate::operators::gaussian_profile(t) * inv_sqrt_fact;
            coords[(l + f2) as usize] = Complex::new(v, F::zero());
        }
        e.push(AmbientVector::new(coords, Field::Complex, level.realization().clone()));
        c.push(real::<F>(0.5).powi(j as i32 + 1));
    }
    Ok(ScaleLimit { e_limits: e, c_limits: c, provenance: Provenance::ClosedForm })
}

/// Closed-form limit of the shift scale: `e_j = g_{l_j}`, `c_j = 2^-j`,
/// expressed in the realization of the given level.
pub fn shift_scale_limit<F: Real>(level: &SamplingLevel<F>, count: usize) -> Result<ScaleLimit<F>> {
    if !matches!(level.kind, LevelKind::Shift) {
        return Err(Error::Invalid("shift_scale_limit needs a shift level".into()));
    }
    let n = level.n() as i64;
    let dim = level.dim();
    let mut e = Vec::new();
    let mut c = Vec::new();
    for j in 1..=count {
        let l = zigzag(j);
        if l.abs() > n {
            break;
        }
        let mut coords = vec![Complex::new(F::zero(), F::zero()); dim];
        coords[(l + n) as usize] = Complex::new(F::one(), F::zero());
        e.push(AmbientVector::new(coords, Field::Complex, level.realization().clone()));
        c.push(real::<F>(0.5).powi(j as i32));
    }
    Ok(ScaleLimit { e_limits: e, c_limits: c, provenance: Provenance::ClosedForm })
}

/// Validation outcome for one level/scale pair.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub n: usize,
    pub checks: Vec<LevelCheck>,
}

#[derive(Clone, Debug)]
pub struct LevelCheck {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&LevelCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Runs the per-level compatibility checks: membership of each `e_j` in
/// `H_n`, the weighted operator mass (reported for cross-level comparison),
/// separation of the eigenbasis by the scale, and the unit-mass identity.
pub fn validate_level<F: Real>(
    level: &SamplingLevel<F>,
    scale: &ScaleLevel<F>,
) -> Result<ValidationReport> {
    let mut checks = Vec::new();

    let mut worst_membership = 0f64;
    for ej in scale.e_vectors() {
        let r = level.membership_residual(ej)?.to_f64().unwrap_or(f64::NAN);
        worst_membership = worst_membership.max(r);
    }
    checks.push(LevelCheck {
        name: "membership".into(),
        passed: worst_membership <= 1e-10,
        value: worst_membership,
        threshold: 1e-10,
    });

    let mass = scale.mass().to_f64().unwrap_or(f64::NAN);
    checks.push(LevelCheck {
        name: "scale-mass".into(),
        passed: (mass - 1.0).abs() <= SCALE_MASS_TOL,
        value: mass,
        threshold: SCALE_MASS_TOL,
    });

    let op_mass = scale.operator_mass(level)?.to_f64().unwrap_or(f64::NAN);
    checks.push(LevelCheck {
        name: "operator-mass".into(),
        passed: op_mass.is_finite(),
        value: op_mass,
        threshold: f64::INFINITY,
    });

    // separation: every eigenvector overlaps some e_j above threshold
    let tr = LevelTransform::new(level);
    let mut best_per_f = vec![F::zero(); level.dim()];
    for ej in scale.e_vectors() {
        let coords = level.level_coords(ej)?;
        let t = tr.analyze(&coords);
        for (best, v) in best_per_f.iter_mut().zip(&t) {
            let a = v.norm();
            if a > *best {
                *best = a;
            }
        }
    }
    let min_overlap = best_per_f
        .iter()
        .fold(F::infinity(), |m, v| m.min(*v))
        .to_f64()
        .unwrap_or(f64::NAN);
    checks.push(LevelCheck {
        name: "separation".into(),
        passed: min_overlap > SEPARATION_TOL,
        value: min_overlap,
        threshold: SEPARATION_TOL,
    });

    Ok(ValidationReport { n: level.n(), checks })
}

/// Successive differences of `A_n e_j^(n)` across levels, compared in the
/// realization of the last level.
#[derive(Clone, Debug)]
pub struct ConvergenceReport<F> {
    pub j: usize,
    /// `(n of the later level, ||A_{n'} e_j' - A_n e_j||)`
    pub diffs: Vec<(usize, F)>,
    /// Non-increasing up to [`NOISE_FLOOR`].
    pub monotone: bool,
}

/// Re-express `x` from `from`'s realization in `to`'s realization.
///
/// Shift truncations nest by zero padding; derivative grids refine exactly
/// (every coarse cell is a union of fine cells, so the normalized coefficient
/// splits by `1/sqrt(n+1)` per refinement step).
pub fn embed_into<F: Real>(
    x: &AmbientVector<F>,
    from: &SamplingLevel<F>,
    to: &SamplingLevel<F>,
) -> Result<AmbientVector<F>> {
    if x.realization() != from.realization() {
        return Err(Error::RealizationMismatch {
            left: x.realization().to_string(),
            right: from.realization().to_string(),
        });
    }
    if from.realization() == to.realization() {
        return Ok(x.clone());
    }
    match (&from.kind, &to.kind) {
        (LevelKind::Shift, LevelKind::Shift) => {
            let (n1, n2) = (from.n() as i64, to.n() as i64);
            if n2 < n1 {
                return Err(Error::IncompatibleRealizations {
                    from: from.realization().to_string(),
                    to: to.realization().to_string(),
                });
            }
            let mut coords = vec![Complex::new(F::zero(), F::zero()); to.dim()];
            for (pos, v) in x.coords().iter().enumerate() {
                let l = pos as i64 - n1;
                coords[(l + n2) as usize] = *v;
            }
            Ok(AmbientVector::new(coords, x.field(), to.realization().clone()))
        }
        (LevelKind::Derivative, LevelKind::Derivative) => {
            let (n1, n2) = (from.n(), to.n());
            if n2 < n1 {
                return Err(Error::IncompatibleRealizations {
                    from: from.realization().to_string(),
                    to: to.realization().to_string(),
                });
            }
            let mut cur = x.coords().to_vec();
            let mut n = n1;
            while n < n2 {
                let ratio = n + 1;
                let f2 = (factorial(n) * factorial(n)) as i64;
                let f2_next = (factorial(n + 1) * factorial(n + 1)) as i64;
                let mut next =
                    vec![Complex::new(F::zero(), F::zero()); (2 * f2_next) as usize];
                let split = F::one() / real::<F>(ratio as f64).sqrt();
                for (pos, v) in cur.iter().enumerate() {
                    if v.re == F::zero() && v.im == F::zero() {
                        continue;
                    }
                    let l = pos as i64 - f2;
                    let base = l * ratio as i64;
                    for r in 0..ratio as i64 {
                        next[(base + r + f2_next) as usize] = *v * split;
                    }
                }
                cur = next;
                n += 1;
            }
            Ok(AmbientVector::new(cur, x.field(), to.realization().clone()))
        }
        _ => Err(Error::IncompatibleRealizations {
            from: from.realization().to_string(),
            to: to.realization().to_string(),
        }),
    }
}

/// Measures convergence of `(A_n e_j^(n))_n` across at least three levels.
pub fn check_strong<F: Real>(
    levels: &[(&SamplingLevel<F>, &ScaleLevel<F>)],
    j: usize,
) -> Result<ConvergenceReport<F>> {
    if levels.len() < 3 {
        return Err(Error::NotEnoughLevels { needed: 3, available: levels.len() });
    }
    let last_level = levels.last().unwrap().0;
    let mut embedded: Vec<(usize, AmbientVector<F>)> = Vec::new();
    for (level, scale) in levels {
        if j == 0 || j > scale.count() {
            return Err(Error::Invalid(format!(
                "scale at n={} has no entry j={}",
                level.n(),
                j
            )));
        }
        let ej = &scale.e_vectors()[j - 1];
        let coords = level.level_coords(ej)?;
        let aej = level.to_ambient(&level.apply_op(&coords));
        embedded.push((level.n(), embed_into(&aej, level, last_level)?));
    }
    let mut diffs = Vec::new();
    for w in embedded.windows(2) {
        let d = w[1].1.sub(&w[0].1)?.norm();
        diffs.push((w[1].0, d));
    }
    let floor = real::<F>(NOISE_FLOOR);
    let monotone = diffs
        .windows(2)
        .all(|w| w[1].1.max(floor) <= w[0].1.max(floor));
    Ok(ConvergenceReport { j, diffs, monotone })
}
