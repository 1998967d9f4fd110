//! Closed-form limit objects used as ground truth.
//!
//! For the shift fixture the limit embedding is the circle curve
//! `X(t)_j = 2^(-j/2) exp(2 pi i l_j t)` over the uniform measure on `[0,1]`,
//! with multiplier `cos(2 pi t)`; eigenvalue statistics follow the arcsine
//! law. For the derivative fixture it is the line curve
//! `X(w)_j = 2^(-j/2) exp(-pi i q_j w)` over the Gaussian weight
//! `phi(w) = sqrt(pi/2) exp(-pi^2 w^2 / 2)`, with multiplier `pi w`; the
//! normalized transform sends the Gaussian profile to the constant one.

use num_complex::Complex;
use num_rational::Ratio;

use crate::embedding::{CubePoint, TestFunction};
use crate::error::{Error, Result};
use crate::operators::{rationals, zigzag};
use crate::real::{real, Kahan, KahanComplex, Real, C};

/// Multiplier of the shift fixture: `cos(2 pi t)`.
pub fn shift_m<F: Real>(t: F) -> F {
    ((F::PI() + F::PI()) * t).cos()
}

/// Limit unitary of the shift fixture on basis vectors: `exp(2 pi i l t)`.
pub fn shift_u<F: Real>(l: i64, t: F) -> C<F> {
    Complex::from_polar(F::one(), (F::PI() + F::PI()) * real::<F>(l as f64) * t)
}

/// Circle curve in the truncated cube.
pub fn shift_curve<F: Real>(t: F, depth: usize) -> CubePoint<F> {
    let coords = (1..=depth)
        .map(|j| {
            let modulus = real::<F>(0.5).powf(real::<F>(j as f64) / real::<F>(2.0));
            let angle = (F::PI() + F::PI()) * real::<F>(zigzag(j) as f64) * t;
            Complex::from_polar(modulus, angle)
        })
        .collect();
    CubePoint::new(coords)
}

/// CDF of `cos(2 pi T)` for uniform `T`: `1 - arccos(x)/pi` on `[-1, 1]`.
pub fn arcsine_cdf<F: Real>(x: F) -> F {
    if x <= -F::one() {
        return F::zero();
    }
    if x >= F::one() {
        return F::one();
    }
    F::one() - x.acos() / F::PI()
}

/// Multiplier of the derivative fixture: `pi w`.
pub fn derivative_m<F: Real>(w: F) -> F {
    F::PI() * w
}

/// Gaussian weight `phi(w) = sqrt(pi/2) exp(-pi^2 w^2 / 2)`.
pub fn gaussian_weight<F: Real>(w: F) -> F {
    let half_pi = F::PI() / real::<F>(2.0);
    half_pi.sqrt() * (F::PI() * F::PI() * w * w / real::<F>(-2.0)).exp()
}

/// Line curve in the truncated cube, phased by the rational enumeration.
pub fn derivative_curve<F: Real>(w: F, depth: usize) -> CubePoint<F> {
    let qs = rationals(depth);
    let coords = (1..=depth)
        .map(|j| {
            let q = qs[j - 1];
            let modulus = real::<F>(0.5).powf(real::<F>(j as f64) / real::<F>(2.0));
            let angle = -F::PI() * ratio_to_real::<F>(q) * w;
            Complex::from_polar(modulus, angle)
        })
        .collect();
    CubePoint::new(coords)
}

fn ratio_to_real<F: Real>(q: Ratio<i64>) -> F {
    real::<F>(*q.numer() as f64) / real::<F>(*q.denom() as f64)
}

/// Standard normal CDF via a Chebyshev fit of the complementary error
/// function (absolute error below 1.2e-7, ample for the 1e-4 oracle checks).
pub fn normal_cdf<F: Real>(x: F) -> F {
    let half = real::<F>(0.5);
    half * erfc(-x / real::<F>(2.0).sqrt())
}

fn erfc<F: Real>(x: F) -> F {
    let z = x.abs();
    let t = real::<F>(2.0) / (real::<F>(2.0) + z);
    let poly = real::<F>(-1.26551223)
        + t * (real::<F>(1.00002368)
            + t * (real::<F>(0.37409196)
                + t * (real::<F>(0.09678418)
                    + t * (real::<F>(-0.18628806)
                        + t * (real::<F>(0.27886807)
                            + t * (real::<F>(-1.13520398)
                                + t * (real::<F>(1.48851587)
                                    + t * (real::<F>(-0.82215223)
                                        + t * real::<F>(0.17087277)))))))));
    let ans = t * (-z * z + poly).exp();
    if x >= F::zero() {
        ans
    } else {
        real::<F>(2.0) - ans
    }
}

/// Composite trapezoid rule on `[a, b]` with `n` panels.
pub fn trapezoid<F: Real>(f: impl Fn(F) -> F, a: F, b: F, n: usize) -> F {
    let h = (b - a) / real::<F>(n as f64);
    let mut acc = Kahan::new();
    acc.add((f(a) + f(b)) / real::<F>(2.0));
    for i in 1..n {
        acc.add(f(a + h * real::<F>(i as f64)));
    }
    acc.value() * h
}

/// Complex-valued composite trapezoid rule.
pub fn trapezoid_complex<F: Real>(f: impl Fn(F) -> C<F>, a: F, b: F, n: usize) -> C<F> {
    let h = (b - a) / real::<F>(n as f64);
    let mut acc = KahanComplex::new();
    let half = real::<F>(0.5);
    acc.add((f(a) + f(b)) * half);
    for i in 1..n {
        acc.add(f(a + h * real::<F>(i as f64)));
    }
    acc.value() * h
}

/// Normalized limit transform of the derivative fixture applied to a sampled
/// function: `(1 / sqrt(2 phi(w))) int exp(-pi i w t) psi(t) dt` by trapezoid
/// quadrature on the sample grid.
pub fn derivative_u<F: Real>(grid: &[F], values: &[C<F>], w: F) -> Result<C<F>> {
    if grid.len() != values.len() || grid.len() < 2 {
        return Err(Error::Invalid("need a sample grid with matching values".into()));
    }
    for v in values {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::Invalid("non-finite sample".into()));
        }
    }
    let mut acc = KahanComplex::new();
    let half = real::<F>(0.5);
    for i in 0..grid.len() - 1 {
        let (t0, t1) = (grid[i], grid[i + 1]);
        let f0 = Complex::from_polar(F::one(), -F::PI() * w * t0) * values[i];
        let f1 = Complex::from_polar(F::one(), -F::PI() * w * t1) * values[i + 1];
        acc.add((f0 + f1) * half * (t1 - t0));
    }
    let norm = (real::<F>(2.0) * gaussian_weight(w)).sqrt();
    Ok(acc.value() / norm)
}

/// `int h(X(t)) dt` over `[0, 1]` for the shift curve, by quadrature.
pub fn shift_pair_oracle<F: Real>(h: &TestFunction, depth: usize, panels: usize) -> C<F> {
    trapezoid_complex(
        |t| h.eval(&shift_curve::<F>(t, depth)),
        F::zero(),
        F::one(),
        panels,
    )
}

/// `int h(X(w)) phi(w) dw` for the derivative curve, by quadrature over a
/// window that drives the Gaussian tail below 1e-12.
pub fn derivative_pair_oracle<F: Real>(h: &TestFunction, depth: usize, panels: usize) -> C<F> {
    let radius = real::<F>(4.0);
    trapezoid_complex(
        |w| h.eval(&derivative_curve::<F>(w, depth)) * gaussian_weight(w),
        -radius,
        radius,
        panels,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn shift_multiplier_values() {
        assert_eq!(shift_m(0.0f64), 1.0);
        assert!(shift_m(0.25f64).abs() < 1e-15);
        assert!((shift_m(0.125f64) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn shift_u_values() {
        assert_eq!(shift_u::<f64>(0, 0.73), Complex64::new(1.0, 0.0));
        assert!((shift_u::<f64>(1, 0.5) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        // Fourier orthogonality by quadrature
        let ip = trapezoid_complex(
            |t| shift_u::<f64>(1, t) * shift_u::<f64>(2, t).conj(),
            0.0,
            1.0,
            4096,
        );
        assert!(ip.norm() < 1e-12, "got {ip}");
    }

    #[test]
    fn derivative_multiplier_values() {
        assert_eq!(derivative_m(0.0f64), 0.0);
        assert!((derivative_m(1.0f64) - std::f64::consts::PI).abs() < 1e-15);
        assert!((derivative_m(-2.0f64) + 2.0 * std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn gaussian_weight_integrates_to_one() {
        let total = trapezoid(gaussian_weight::<f64>, -6.0, 6.0, 200_000);
        assert!((total - 1.0).abs() < 1e-12, "got {total}");
    }

    #[test]
    fn curve_moduli_follow_half_powers() {
        let p = shift_curve(0.3f64, 10);
        for j in 1..=10usize {
            assert!((p.coord(j).norm() - 2.0f64.powf(-(j as f64) / 2.0)).abs() < 1e-14);
        }
        let q = derivative_curve(0.7f64, 10);
        for j in 1..=10usize {
            assert!((q.coord(j).norm() - 2.0f64.powf(-(j as f64) / 2.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn transform_of_gaussian_profile_is_constant_one() {
        // U(E)(w) = 1 for all w: the Gaussian maps to sqrt(2 phi), and the
        // normalization divides it out
        let n_pts = 40_001usize;
        let (a, b) = (-8.0f64, 8.0);
        let grid: Vec<f64> = (0..n_pts)
            .map(|i| a + (b - a) * i as f64 / (n_pts - 1) as f64)
            .collect();
        let values: Vec<Complex64> = grid
            .iter()
            .map(|&t| Complex64::new(crate::operators::gaussian_profile(t), 0.0))
            .collect();
        for w in [0.0f64, 0.5, -1.0, 2.0] {
            let u = derivative_u(&grid, &values, w).unwrap();
            assert!((u - Complex64::new(1.0, 0.0)).norm() < 1e-6, "w={w}: {u}");
        }
        // psi = 0 maps to 0
        let zeros = vec![Complex64::new(0.0, 0.0); n_pts];
        assert_eq!(derivative_u(&grid, &zeros, 0.3).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn plancherel_on_indicator() {
        // int |U(psi)|^2 phi dw = int |psi|^2 dt for psi = 1_[0,1]. The
        // transform side decays like 1/w^2, so the sampled-transform route
        // covers |w| <= 30 and the closed form |F|^2 = 4 sin^2(pi w/2)/(pi w)^2
        // supplies the tail: the 1/w^2 part analytically, the cosine part by
        // quadrature out to where its remainder is below 1e-8.
        let n_pts = 20_001usize;
        let grid: Vec<f64> = (0..n_pts).map(|i| -0.5 + 2.0 * i as f64 / (n_pts - 1) as f64).collect();
        let values: Vec<Complex64> = grid
            .iter()
            .map(|&t| {
                if t == 0.0 || t == 1.0 {
                    Complex64::new(0.5, 0.0)
                } else if (0.0..1.0).contains(&t) {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        // |U|^2 phi = |F|^2 / 2; the weight underflows past |w| ~ 12, so the
        // sampled route stays inside that and the closed form takes over
        let r0 = 10.0f64;
        let center = trapezoid(
            |w: f64| derivative_u(&grid, &values, w).unwrap().norm_sqr() * gaussian_weight(w),
            -r0,
            r0,
            4_000,
        );
        let pi = std::f64::consts::PI;
        let cos_part = trapezoid(|w: f64| (pi * w).cos() / (w * w), r0, 1.0e4, 2_000_000);
        let tail = 2.0 * (1.0 / r0 - cos_part) / (pi * pi);
        // the other side, by trapezoid on the same sample grid; the squared
        // integrand needs its own half values at the jump nodes (mean of the
        // one-sided squares), not the square of the half value
        let sq: Vec<f64> = grid
            .iter()
            .zip(&values)
            .map(|(&t, v)| if t == 0.0 || t == 1.0 { 0.5 } else { v.norm_sqr() })
            .collect();
        let mut rhs = 0.0;
        for i in 0..n_pts - 1 {
            rhs += (sq[i] + sq[i + 1]) / 2.0 * (grid[i + 1] - grid[i]);
        }
        let err = (center + tail - rhs).abs();
        assert!(err <= 1e-6, "plancherel mismatch {err:e}");
    }

    #[test]
    fn pushforward_cdfs_match_quadrature() {
        // cos(2 pi t) under uniform t has the arcsine CDF
        let samples = 1_000_000usize;
        for x in [-0.9f64, -0.5, 0.0, 0.3, 0.8] {
            let mass = (0..samples)
                .filter(|i| ((*i as f64 + 0.5) / samples as f64 * 2.0 * std::f64::consts::PI).cos() <= x)
                .count() as f64
                / samples as f64;
            assert!((mass - arcsine_cdf(x)).abs() < 1e-4, "x={x}");
        }
        // pi w under phi dw is standard normal
        for x in [-2.0f64, -1.0, 0.0, 0.5, 1.5] {
            let mass = trapezoid(
                |w: f64| {
                    if std::f64::consts::PI * w <= x {
                        gaussian_weight(w)
                    } else {
                        0.0
                    }
                },
                -6.0,
                6.0,
                1_000_000,
            );
            assert!((mass - normal_cdf(x)).abs() < 1e-4, "x={x}");
        }
    }
}
