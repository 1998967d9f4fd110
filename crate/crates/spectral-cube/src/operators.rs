//! Operator definitions and level builders.
//!
//! Three ways to make a [`SamplingLevel`]: the generic builder compresses an
//! operator known through a graph sequence `(g_k, A g_k)` onto the span of
//! the first `n` vectors; the shift builder produces the cyclic average
//! `(RS + LS)/2` on `2n+1` coordinates with its DFT eigenbasis in closed
//! form; the derivative builder produces the scaled central difference
//! `-i (LS - RS) n!/2` on the cyclic grid with `2 n!^2` cells.

use std::sync::Arc;

use num_complex::Complex;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt, inner, AmbientVector, Field, HermitianMatrix};
use crate::real::{real, Real, C};
use crate::sampling::SamplingLevel;

pub fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// Zig-zag enumeration of the integers: `0, 1, -1, 2, -2, ...` (1-based).
pub fn zigzag(j: usize) -> i64 {
    assert!(j >= 1);
    if j % 2 == 0 {
        (j / 2) as i64
    } else {
        -(((j - 1) / 2) as i64)
    }
}

/// Enumeration of the rationals starting at `q_1 = 0`: the Calkin-Wilf
/// traversal of the positive rationals interleaved with its negatives.
/// Injective, and every rational appears at a computable index.
pub fn rationals(count: usize) -> Vec<Ratio<i64>> {
    let mut out = Vec::with_capacity(count);
    out.push(Ratio::from_integer(0));
    let mut q = Ratio::from_integer(1);
    while out.len() < count {
        out.push(q);
        if out.len() < count {
            out.push(-q);
        }
        // next positive rational in the Calkin-Wilf order
        let one = Ratio::from_integer(1);
        let two = Ratio::from_integer(2);
        q = one / (two * q.floor() - q + one);
    }
    out
}

/// Exact `floor(m * q)` for integer `m`.
pub fn floor_times(m: i64, q: Ratio<i64>) -> i64 {
    (Ratio::from_integer(m) * q).floor().to_integer()
}

/// Integer cube root: largest `r >= 0` with `r^3 <= x`.
fn icbrt(x: i128) -> i64 {
    let mut r = (x as f64).cbrt() as i128;
    while r > 0 && r * r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r as i64
}

/// Support half-width of the grid Gaussian at level `n`: `floor(n!^(5/3))`
/// capped to keep the support strictly inside the cyclic grid.
pub fn derivative_support_cut(n: usize) -> i64 {
    let fact = factorial(n) as i128;
    let f2 = (fact * fact) as i64;
    icbrt(fact.pow(5)).min(f2 - 3)
}

/// Unnormalized Gaussian profile `(2/pi)^(1/4) exp(-t^2)`, unit L2 norm.
pub fn gaussian_profile<F: Real>(t: F) -> F {
    let amp = real::<F>(2.0 / std::f64::consts::PI).powf(real::<F>(0.25));
    amp * (-(t * t)).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftDirection {
    Left,
    Right,
}

/// Cyclic coordinate shift: `Right` sends position `i` to `i+1` with
/// wraparound (so the top cell wraps to the bottom), `Left` is its inverse.
pub fn apply_shift_mod<F: Real>(coeffs: &[C<F>], direction: ShiftDirection) -> Vec<C<F>> {
    let m = coeffs.len();
    match direction {
        ShiftDirection::Right => (0..m).map(|i| coeffs[(i + m - 1) % m]).collect(),
        ShiftDirection::Left => (0..m).map(|i| coeffs[(i + 1) % m]).collect(),
    }
}

/// A sequence of pairs `(g_k, A g_k)` presenting an operator through its graph.
#[derive(Clone, Debug)]
pub struct GraphSequence<F> {
    pairs: Vec<(AmbientVector<F>, AmbientVector<F>)>,
    density_note: String,
}

impl<F: Real> GraphSequence<F> {
    pub fn new(
        pairs: Vec<(AmbientVector<F>, AmbientVector<F>)>,
        density_note: impl Into<String>,
    ) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Invalid("graph sequence needs at least one pair".into()));
        }
        let realization = pairs[0].0.realization().clone();
        let field = pairs[0].0.field();
        for (idx, (g, ag)) in pairs.iter().enumerate() {
            if g.is_zero() {
                return Err(Error::ZeroVector { index: idx + 1 });
            }
            for v in [g, ag] {
                if v.realization() != &realization {
                    return Err(Error::RealizationMismatch {
                        left: v.realization().to_string(),
                        right: realization.to_string(),
                    });
                }
                if v.field() != field {
                    return Err(Error::FieldMismatch);
                }
            }
        }
        Ok(GraphSequence { pairs, density_note: density_note.into() })
    }

    pub fn pairs(&self) -> &[(AmbientVector<F>, AmbientVector<F>)] {
        &self.pairs
    }

    pub fn density_note(&self) -> &str {
        &self.density_note
    }

    pub fn realization(&self) -> &Arc<str> {
        self.pairs[0].0.realization()
    }

    pub fn field(&self) -> Field {
        self.pairs[0].0.field()
    }
}

/// Which operator a run works with.
#[derive(Clone, Debug)]
pub enum OperatorKind<F> {
    Generic(GraphSequence<F>),
    Shift,
    Derivative,
    UserMatrix { matrix: HermitianMatrix<F>, realization: Arc<str> },
}

#[derive(Clone, Debug)]
pub struct OperatorSpec<F> {
    kind: OperatorKind<F>,
    field: Field,
}

impl<F: Real> OperatorSpec<F> {
    pub fn new(kind: OperatorKind<F>, field: Field) -> Result<Self> {
        if matches!(kind, OperatorKind::Shift | OperatorKind::Derivative) && field != Field::Complex
        {
            return Err(Error::ComplexRequired);
        }
        Ok(OperatorSpec { kind, field })
    }

    pub fn kind(&self) -> &OperatorKind<F> {
        &self.kind
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn label(&self) -> &'static str {
        match self.kind {
            OperatorKind::Generic(_) => "generic",
            OperatorKind::Shift => "shift",
            OperatorKind::Derivative => "derivative",
            OperatorKind::UserMatrix { .. } => "matrix",
        }
    }

    /// Graph sequence view of the operator, for the generic pipeline.
    pub fn graph_sequence(&self) -> Result<GraphSequence<F>> {
        match &self.kind {
            OperatorKind::Generic(gs) => Ok(gs.clone()),
            OperatorKind::UserMatrix { matrix, realization } => {
                let d = matrix.dim();
                let mut pairs = Vec::with_capacity(d);
                for k in 0..d {
                    let mut coords = vec![Complex::new(F::zero(), F::zero()); d];
                    coords[k] = Complex::new(F::one(), F::zero());
                    let g = AmbientVector::new(coords.clone(), self.field, realization.clone());
                    let ag = AmbientVector::new(matrix.apply(&coords), self.field, realization.clone());
                    pairs.push((g, ag));
                }
                GraphSequence::new(pairs, "standard basis of the matrix domain")
            }
            _ => Err(Error::Invalid(
                "structured operators use their dedicated level builders".into(),
            )),
        }
    }

    pub fn build_level(&self, n: usize) -> Result<SamplingLevel<F>> {
        match &self.kind {
            OperatorKind::Shift => Ok(build_shift_level(n)),
            OperatorKind::Derivative => build_derivative_level(n),
            _ => build_generic_level(&self.graph_sequence()?, n),
        }
    }

    pub fn build_scale(&self, level: &SamplingLevel<F>) -> Result<crate::sampling::ScaleLevel<F>> {
        match &self.kind {
            OperatorKind::Shift => crate::sampling::shift_scale_level(level),
            OperatorKind::Derivative => crate::sampling::derivative_scale_level(level),
            _ => crate::sampling::build_scale_level(level, &self.graph_sequence()?),
        }
    }
}

/// Compression of a graph-presented operator onto the span of `g_1..g_n`.
pub fn build_generic_level<F: Real>(gs: &GraphSequence<F>, n: usize) -> Result<SamplingLevel<F>> {
    if n == 0 {
        return Err(Error::LevelOutOfRange { n, min: 1, max: gs.pairs().len() });
    }
    if gs.pairs().len() < n {
        return Err(Error::NotEnoughPairs { needed: n, available: gs.pairs().len() });
    }
    let gvecs: Vec<AmbientVector<F>> = gs.pairs().iter().take(n).map(|(g, _)| g.clone()).collect();
    let (basis, coeffs) = gram_schmidt(&gvecs)?;
    // A b_j = sum_k beta_jk (A g_k), expressible because b_j lives in the span
    let mut a_basis: Vec<AmbientVector<F>> = Vec::with_capacity(n);
    for beta in &coeffs {
        let mut acc = AmbientVector::zero(
            gs.pairs()[0].0.dim(),
            gs.field(),
            gs.realization().clone(),
        );
        for (c, (_, ag)) in beta.iter().zip(gs.pairs()) {
            for (o, v) in acc.coords_mut().iter_mut().zip(ag.coords()) {
                *o += *c * v;
            }
        }
        a_basis.push(acc);
    }
    let mut entries = vec![Complex::new(F::zero(), F::zero()); n * n];
    for j in 0..n {
        for i in 0..n {
            entries[i * n + j] = inner(&a_basis[j], &basis[i])?;
        }
    }
    let matrix = HermitianMatrix::new(entries, n)?;
    let eigen = crate::linalg::hermitian_eig(&matrix)?;
    Ok(SamplingLevel::generic(n, basis, matrix, eigen, gs.field()))
}

/// Cyclic shift average on `2n+1` coordinates, DFT eigenbasis,
/// eigenvalues `cos(2 pi k / (2n+1))`.
pub fn build_shift_level<F: Real>(n: usize) -> SamplingLevel<F> {
    assert!(n >= 1, "shift level needs n >= 1");
    SamplingLevel::shift(n)
}

/// Scaled cyclic central difference on the grid with `2 n!^2` cells,
/// eigenvalues `n! sin(pi k / n!^2)`. Capped at `n = 5` (dimension 28800).
pub fn build_derivative_level<F: Real>(n: usize) -> Result<SamplingLevel<F>> {
    if !(2..=5).contains(&n) {
        return Err(Error::LevelOutOfRange { n, min: 2, max: 5 });
    }
    Ok(SamplingLevel::derivative(n))
}

/// Diagonal fixture: `g_k` the standard basis of a `k_max`-dimensional
/// truncation, `A g_k = k g_k`. Real scalar field.
pub fn diagonal_fixture<F: Real>(k_max: usize) -> GraphSequence<F> {
    let realization: Arc<str> = format!("diag/{k_max}").into();
    let mut pairs = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut g = vec![Complex::new(F::zero(), F::zero()); k_max];
        g[k - 1] = Complex::new(F::one(), F::zero());
        let mut ag = vec![Complex::new(F::zero(), F::zero()); k_max];
        ag[k - 1] = Complex::new(real::<F>(k as f64), F::zero());
        pairs.push((
            AmbientVector::new(g, Field::Real, realization.clone()),
            AmbientVector::new(ag, Field::Real, realization.clone()),
        ));
    }
    GraphSequence::new(pairs, "standard basis with eigenvalues 1..k_max").unwrap()
}

/// Identity fixture on independent, deliberately non-orthogonal vectors.
pub fn identity_fixture<F: Real>(dim: usize) -> GraphSequence<F> {
    let realization: Arc<str> = format!("ident/{dim}").into();
    let mut pairs = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut g = vec![Complex::new(F::zero(), F::zero()); dim];
        g[k] = Complex::new(F::one(), F::zero());
        if k + 1 < dim {
            g[k + 1] = Complex::new(real::<F>(0.5), F::zero());
        }
        let v = AmbientVector::new(g, Field::Real, realization.clone());
        pairs.push((v.clone(), v));
    }
    GraphSequence::new(pairs, "skewed basis, A = identity").unwrap()
}

/// Graph sequence of the shift average on a `2w+1`-dimensional truncation,
/// ordered by the zig-zag enumeration; images are truncated to the window.
pub fn shift_truncation_fixture<F: Real>(half_width: usize) -> GraphSequence<F> {
    let dim = 2 * half_width + 1;
    let realization: Arc<str> = format!("shifttrunc/{half_width}").into();
    let half = real::<F>(0.5);
    let mut pairs = Vec::with_capacity(dim);
    for j in 1..=dim {
        let l = zigzag(j);
        let mut g = vec![Complex::new(F::zero(), F::zero()); dim];
        g[(l + half_width as i64) as usize] = Complex::new(F::one(), F::zero());
        let mut ag = vec![Complex::new(F::zero(), F::zero()); dim];
        for target in [l - 1, l + 1] {
            if target.unsigned_abs() as usize <= half_width {
                ag[(target + half_width as i64) as usize] = Complex::new(half, F::zero());
            }
        }
        pairs.push((
            AmbientVector::new(g, Field::Complex, realization.clone()),
            AmbientVector::new(ag, Field::Complex, realization.clone()),
        ));
    }
    GraphSequence::new(pairs, "zig-zag basis of a shift truncation").unwrap()
}
