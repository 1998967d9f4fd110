//! Discrete spectral measures, the finite unitaries and the cube embedding.
//!
//! Every eigenvector `f` gets a weight `mu(f) = sum_j c_j |<e_j, f>|^2`, a
//! coordinate list `U(x)(f) = <x, f> / sqrt(mu(f))`, and a truncated point of
//! the Hilbert cube `X(f)_j = sqrt(c_j) U(e_j)(f)`. The resulting weighted,
//! labeled point set is a [`SpectralCloud`]; integrals of test functions
//! against it drive all the limit diagnostics.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::AmbientVector;
use crate::real::{real, Kahan, KahanComplex, Real, C};
use crate::sampling::{LevelTransform, SamplingLevel, ScaleLevel};

/// Hard floor for spectral weights; anything below is a separation failure,
/// never silently clamped.
pub const WEIGHT_FLOOR: f64 = 1e-300;

/// A point of the truncated Hilbert cube: `depth` unit-disk coordinates.
#[derive(Clone, Debug)]
pub struct CubePoint<F> {
    coords: Vec<C<F>>,
}

impl<F: Real> CubePoint<F> {
    pub fn new(coords: Vec<C<F>>) -> Self {
        CubePoint { coords }
    }

    pub fn depth(&self) -> usize {
        self.coords.len()
    }

    /// 1-based coordinate accessor.
    pub fn coord(&self, j: usize) -> C<F> {
        self.coords[j - 1]
    }

    pub fn coords(&self) -> &[C<F>] {
        &self.coords
    }

    /// Largest coordinate modulus (must stay within the closed unit disk).
    pub fn max_modulus(&self) -> F {
        self.coords.iter().fold(F::zero(), |m, z| m.max(z.norm()))
    }

    /// Metric of the product topology truncated at the stored depth:
    /// `d(x, y) = sum_j 2^-j |x_j - y_j|`.
    pub fn distance(&self, other: &CubePoint<F>) -> F {
        let depth = self.coords.len().min(other.coords.len());
        let half = real::<F>(0.5);
        let mut acc = Kahan::new();
        let mut w = F::one();
        for j in 0..depth {
            w = w * half;
            acc.add(w * (self.coords[j] - other.coords[j]).norm());
        }
        acc.value()
    }
}

/// One embedded eigenvector: weight, eigenvalue and cube point.
#[derive(Clone, Debug)]
pub struct CloudPoint<F> {
    pub k_index: i64,
    pub weight: F,
    pub eigenvalue: F,
    pub cube: CubePoint<F>,
}

/// The level-n spectral data over the whole eigenbasis.
#[derive(Clone, Debug)]
pub struct SpectralCloud<F> {
    n: usize,
    depth: usize,
    points: Vec<CloudPoint<F>>,
}

impl<F: Real> SpectralCloud<F> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn points(&self) -> &[CloudPoint<F>] {
        &self.points
    }

    pub fn total_weight(&self) -> F {
        let mut acc = Kahan::new();
        for p in &self.points {
            acc.add(p.weight);
        }
        acc.value()
    }

    /// Build a cloud directly from raw data (test scaffolding, synthetic clouds).
    pub fn from_points(n: usize, depth: usize, points: Vec<CloudPoint<F>>) -> Self {
        SpectralCloud { n, depth, points }
    }
}

/// Spectral weights `mu(f) = sum_j c_j |<e_j, f>|^2` over the eigenbasis.
///
/// Positive and summing to one whenever the scale separates the eigenbasis;
/// a vanishing weight is reported as an error, not clamped.
pub fn compute_mu<F: Real>(level: &SamplingLevel<F>, scale: &ScaleLevel<F>) -> Result<Vec<F>> {
    let tr = LevelTransform::new(level);
    compute_mu_with(&tr, scale)
}

pub(crate) fn compute_mu_with<F: Real>(
    tr: &LevelTransform<'_, F>,
    scale: &ScaleLevel<F>,
) -> Result<Vec<F>> {
    let level = tr.level();
    let dim = level.dim();
    let mut acc = vec![Kahan::<F>::new(); dim];
    for (ej, cj) in scale.e_vectors().iter().zip(scale.c_weights()) {
        let coords = level.level_coords(ej)?;
        let t = tr.analyze(&coords);
        for (a, v) in acc.iter_mut().zip(&t) {
            a.add(*cj * v.norm_sqr());
        }
    }
    let floor = real::<F>(WEIGHT_FLOOR);
    let mut mu = Vec::with_capacity(dim);
    for (idx, a) in acc.iter().enumerate() {
        let w = a.value();
        if !(w > floor) {
            return Err(Error::ZeroWeight { index: idx });
        }
        mu.push(w);
    }
    Ok(mu)
}

/// Coordinates of `U_n(x)` over the eigenbasis: `<x, f> / sqrt(mu(f))`.
pub fn apply_un<F: Real>(
    level: &SamplingLevel<F>,
    mu: &[F],
    x: &AmbientVector<F>,
) -> Result<Vec<C<F>>> {
    let tr = LevelTransform::new(level);
    apply_un_with(&tr, mu, x)
}

pub(crate) fn apply_un_with<F: Real>(
    tr: &LevelTransform<'_, F>,
    mu: &[F],
    x: &AmbientVector<F>,
) -> Result<Vec<C<F>>> {
    let level = tr.level();
    if mu.len() != level.dim() {
        return Err(Error::DimensionMismatch { left: mu.len(), right: level.dim() });
    }
    let coords = level.level_coords(x)?;
    let t = tr.analyze(&coords);
    Ok(t.into_iter()
        .zip(mu)
        .map(|(v, w)| v / Complex::new(w.sqrt(), F::zero()))
        .collect())
}

/// `L2(mu)` norm of a coordinate list over the eigenbasis.
pub fn l2_mu_norm<F: Real>(values: &[C<F>], mu: &[F]) -> F {
    let mut acc = Kahan::new();
    for (v, w) in values.iter().zip(mu) {
        acc.add(v.norm_sqr() * *w);
    }
    acc.value().sqrt()
}

/// `|| lambda . U_n(x) - U_n(A_n x) ||_{L2(mu)}`; zero up to rounding by the
/// finite intertwining identity.
pub fn intertwine_residual<F: Real>(
    level: &SamplingLevel<F>,
    mu: &[F],
    x: &AmbientVector<F>,
) -> Result<F> {
    let tr = LevelTransform::new(level);
    let ux = apply_un_with(&tr, mu, x)?;
    let coords = level.level_coords(x)?;
    let ax = level.to_ambient(&level.apply_op(&coords));
    let uax = apply_un_with(&tr, mu, &ax)?;
    let mut acc = Kahan::new();
    for (k, (a, b)) in ux.iter().zip(&uax).enumerate() {
        let lam = level.eigenvalue(k);
        acc.add((*a * lam - *b).norm_sqr() * mu[k]);
    }
    Ok(acc.value().sqrt())
}

/// Embed the eigenbasis into the truncated cube:
/// `X(f)_j = sqrt(c_j) U(e_j)(f)` for `j <= N_n`, zero above.
pub fn embed_xn<F: Real>(
    level: &SamplingLevel<F>,
    scale: &ScaleLevel<F>,
    mu: &[F],
    depth: usize,
) -> Result<SpectralCloud<F>> {
    if depth == 0 {
        return Err(Error::Invalid("embedding depth must be at least 1".into()));
    }
    if mu.len() != level.dim() {
        return Err(Error::DimensionMismatch { left: mu.len(), right: level.dim() });
    }
    let tr = LevelTransform::new(level);
    let dim = level.dim();
    let zero = Complex::new(F::zero(), F::zero());
    let mut coord_rows: Vec<Vec<C<F>>> = vec![vec![zero; depth]; dim];
    for j in 1..=depth.min(scale.count()) {
        let ej = &scale.e_vectors()[j - 1];
        let cj = scale.c_weights()[j - 1];
        let sqrt_cj = cj.sqrt();
        let coords = level.level_coords(ej)?;
        let t = tr.analyze(&coords);
        for (row, v) in coord_rows.iter_mut().zip(&t) {
            row[j - 1] = *v * sqrt_cj;
        }
    }
    let mut points = Vec::with_capacity(dim);
    for (idx, mut row) in coord_rows.into_iter().enumerate() {
        let w = mu[idx];
        let inv_sqrt = F::one() / w.sqrt();
        for v in row.iter_mut() {
            *v = *v * inv_sqrt;
        }
        points.push(CloudPoint {
            k_index: level.k_index(idx),
            weight: w,
            eigenvalue: level.eigenvalue(idx),
            cube: CubePoint::new(row),
        });
    }
    Ok(SpectralCloud { n: level.n(), depth, points })
}

/// Test functions over the truncated cube: low-degree coordinate monomials
/// closed under conjugation. The family separates points, so trace
/// convergence over it is the computable surrogate for weak* convergence;
/// it is necessary evidence, not a finite certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TestFunction {
    One,
    /// `pi_a`
    Pi(usize),
    /// `conj(pi_a)`
    ConjPi(usize),
    /// `pi_a * conj(pi_b)`
    PiConjPi(usize, usize),
    /// `pi_a * pi_b`
    PiPi(usize, usize),
}

impl TestFunction {
    pub fn id(&self) -> String {
        match self {
            TestFunction::One => "one".into(),
            TestFunction::Pi(a) => format!("pi{a}"),
            TestFunction::ConjPi(a) => format!("cpi{a}"),
            TestFunction::PiConjPi(a, b) => format!("pi{a}cpi{b}"),
            TestFunction::PiPi(a, b) => format!("pi{a}pi{b}"),
        }
    }

    /// Polynomial degree in the coordinates.
    pub fn degree(&self) -> usize {
        match self {
            TestFunction::One => 0,
            TestFunction::Pi(_) | TestFunction::ConjPi(_) => 1,
            _ => 2,
        }
    }

    /// Largest coordinate index referenced (0 for the constant).
    pub fn max_coord(&self) -> usize {
        match self {
            TestFunction::One => 0,
            TestFunction::Pi(a) | TestFunction::ConjPi(a) => *a,
            TestFunction::PiConjPi(a, b) | TestFunction::PiPi(a, b) => (*a).max(*b),
        }
    }

    pub fn eval<F: Real>(&self, p: &CubePoint<F>) -> C<F> {
        match self {
            TestFunction::One => Complex::new(F::one(), F::zero()),
            TestFunction::Pi(a) => p.coord(*a),
            TestFunction::ConjPi(a) => p.coord(*a).conj(),
            TestFunction::PiConjPi(a, b) => p.coord(*a) * p.coord(*b).conj(),
            TestFunction::PiPi(a, b) => p.coord(*a) * p.coord(*b),
        }
    }
}

/// The dictionary up to degree two over coordinates `1..=range`:
/// `{1} u {pi_a} u {conj pi_a} u {pi_a conj pi_b} u {pi_a pi_b}`.
pub fn dictionary(range: usize, max_degree: usize) -> Vec<TestFunction> {
    let mut out = vec![TestFunction::One];
    if max_degree >= 1 {
        for a in 1..=range {
            out.push(TestFunction::Pi(a));
            out.push(TestFunction::ConjPi(a));
        }
    }
    if max_degree >= 2 {
        for a in 1..=range {
            for b in 1..=range {
                out.push(TestFunction::PiConjPi(a, b));
            }
            for b in a..=range {
                out.push(TestFunction::PiPi(a, b));
            }
        }
    }
    out
}

/// The `g` factor of a pairing.
#[derive(Clone, Copy, Debug)]
pub enum PairInput<'a, F> {
    /// Constant one.
    One,
    /// The eigenvalue function of the level.
    Lambda,
    /// Explicit coordinates over the eigenbasis.
    Values(&'a [C<F>]),
}

/// A computed pairing `int g (h o X) dmu`.
#[derive(Clone, Debug)]
pub struct PairingValue<F> {
    pub h_id: String,
    pub n: usize,
    pub value: C<F>,
}

/// `sum_f g(f) h(X(f)) mu(f)` with compensated summation.
pub fn pair<F: Real>(
    cloud: &SpectralCloud<F>,
    g: PairInput<'_, F>,
    h: &TestFunction,
) -> Result<PairingValue<F>> {
    if h.max_coord() > cloud.depth() {
        return Err(Error::DepthExceeded { coord: h.max_coord(), depth: cloud.depth() });
    }
    if let PairInput::Values(v) = g {
        if v.len() != cloud.points().len() {
            return Err(Error::DimensionMismatch { left: v.len(), right: cloud.points().len() });
        }
    }
    let mut acc = KahanComplex::new();
    for (idx, p) in cloud.points().iter().enumerate() {
        let gv = match g {
            PairInput::One => Complex::new(F::one(), F::zero()),
            PairInput::Lambda => Complex::new(p.eigenvalue, F::zero()),
            PairInput::Values(v) => v[idx],
        };
        acc.add(gv * h.eval(&p.cube) * p.weight);
    }
    Ok(PairingValue { h_id: h.id(), n: cloud.n(), value: acc.value() })
}

/// Tail of the weighted scale mass past index `j_cut`:
/// `sum_{j > j_cut} c_j ||e_j||^2`.
pub fn tail_mass<F: Real>(scale: &ScaleLevel<F>, j_cut: usize) -> F {
    let mut acc = Kahan::new();
    for (j, (ej, cj)) in scale.e_vectors().iter().zip(scale.c_weights()).enumerate() {
        if j + 1 > j_cut {
            acc.add(*cj * ej.norm_sqr());
        }
    }
    acc.value()
}

/// Kahan-summed `sum_f lambda(f)^2 mu(f)`, one side of the second-moment
/// identity (the other side is [`ScaleLevel::operator_mass`]).
pub fn eigenvalue_second_moment<F: Real>(level: &SamplingLevel<F>, mu: &[F]) -> F {
    let mut acc = Kahan::new();
    for (k, w) in mu.iter().enumerate() {
        let lam = level.eigenvalue(k);
        acc.add(lam * lam * *w);
    }
    acc.value()
}
