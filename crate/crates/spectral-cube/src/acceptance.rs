//! The release gate: every numbered check the artifact must pass, runnable
//! both from `cargo test` (the `acceptance` integration target) and from the
//! command line (`verify`).
//!
//! Each criterion owns its tolerances as constants here; nothing is tuned at
//! run time. The checks fall into two groups: exact finite-level identities
//! (measure mass, isometry, intertwining, moment identities, tail sums) and
//! convergence trends against closed-form oracles (arcsine and normal
//! eigenvalue laws, multiplier recovery, Fourier coordinates, Cauchy gaps).

use std::time::Instant;

use num_bigint::BigInt;
use once_cell::sync::Lazy;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embedding::{
    compute_mu, dictionary, embed_xn, eigenvalue_second_moment, pair, tail_mass, PairInput,
    TestFunction,
};
use crate::limits::{estimate_multiplier, trace, weighted_eigenvalue_cdf, TraceWeight};
use crate::linalg::{inner, Field};
use crate::operators::{
    build_derivative_level, build_generic_level, build_shift_level, diagonal_fixture,
    gaussian_profile,
};
use crate::oracles;
use crate::sampling::{derivative_scale_level, graph_projection, shift_scale_level};
use crate::{Cloud, Level, Scale, Vector};

/// Cube truncation depth used throughout the gate.
pub const DEPTH: usize = 16;
/// Shift fixture levels.
pub const SHIFT_LEVELS: [usize; 8] = [1, 2, 4, 8, 16, 32, 64, 128];
/// Derivative fixture levels.
pub const DERIVATIVE_LEVELS: [usize; 4] = [2, 3, 4, 5];
/// Coordinate range of the trace dictionary: at the first derivative level
/// only two cube coordinates are active, and entries past index 6 only turn
/// on mid-window, which would put their switch-on jump into the monitored
/// gaps. Six matches the Fourier-coordinate check below.
pub const DICT_RANGE: usize = 6;
/// Kernel bandwidth for the shift multiplier recovery.
pub const SHIFT_BANDWIDTH: f64 = 0.02;
/// Kernel bandwidth for the derivative multiplier recovery. The weight
/// profile decays steeply along the curve, so the wider shift bandwidth
/// drags estimates toward small frequencies; 0.01 keeps the weighted
/// average local at the queried points.
pub const DERIVATIVE_BANDWIDTH: f64 = 0.01;

/// One fixture level with everything the criteria consume.
pub struct FixtureLevel {
    pub level: Level,
    pub scale: Scale,
    pub mu: Vec<f64>,
    pub cloud: Cloud,
}

pub struct Fixtures {
    pub shift: Vec<FixtureLevel>,
    pub derivative: Vec<FixtureLevel>,
}

fn build_fixture(level: Level, scale: Scale) -> FixtureLevel {
    let mu = compute_mu(&level, &scale).expect("fixture scale separates the eigenbasis");
    let cloud = embed_xn(&level, &scale, &mu, DEPTH).expect("embedding");
    FixtureLevel { level, scale, mu, cloud }
}

static FIXTURES: Lazy<Fixtures> = Lazy::new(|| {
    let shift = SHIFT_LEVELS
        .iter()
        .map(|&n| {
            let level = build_shift_level::<f64>(n);
            let scale = shift_scale_level(&level).expect("shift scale");
            build_fixture(level, scale)
        })
        .collect();
    let derivative = DERIVATIVE_LEVELS
        .iter()
        .map(|&n| {
            let level = build_derivative_level::<f64>(n).expect("derivative level");
            let scale = derivative_scale_level(&level).expect("derivative scale");
            build_fixture(level, scale)
        })
        .collect();
    Fixtures { shift, derivative }
});

pub fn fixtures() -> &'static Fixtures {
    &FIXTURES
}

/// Outcome of one criterion.
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
}

struct Check {
    details: Vec<String>,
    passed: bool,
}

impl Check {
    fn new() -> Self {
        Check { details: Vec::new(), passed: true }
    }

    fn note(&mut self, msg: String) {
        self.details.push(msg);
    }

    fn require(&mut self, ok: bool, msg: String) {
        if !ok {
            self.passed = false;
            self.details.push(format!("FAIL: {msg}"));
        }
    }

    fn finish(self, id: usize, name: &'static str) -> CriterionResult {
        CriterionResult { id, name, passed: self.passed, details: self.details }
    }
}

fn random_vector(rng: &mut ChaCha8Rng, level: &Level) -> Vector {
    let coords = (0..level.dim())
        .map(|_| crate::Scalar::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    Vector::new(coords, Field::Complex, level.realization().clone())
}

/// Criterion 1: exact finite-level identities on every fixture level.
pub fn criterion_finite_identities(seed: u64) -> CriterionResult {
    let started = Instant::now();
    let mut chk = Check::new();
    let fx = fixtures();
    for (tag, group) in [("shift", &fx.shift), ("derivative", &fx.derivative)] {
        for f in group.iter() {
            let n = f.level.n();
            let label = format!("{tag} n={n}");

            // probability mass
            let mass: f64 = f.cloud.total_weight();
            chk.require(
                (mass - 1.0).abs() <= 1e-12,
                format!("{label}: measure mass {mass:.16} off by {:.2e}", (mass - 1.0).abs()),
            );

            // isometry and intertwining on 100 random vectors
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 8) ^ (tag.len() as u64));
            let tr = crate::sampling::LevelTransform::new(&f.level);
            let mut worst_iso = 0f64;
            let mut worst_inter = 0f64;
            for _ in 0..100 {
                let x = random_vector(&mut rng, &f.level);
                let u = crate::embedding::apply_un_with(&tr, &f.mu, &x).unwrap();
                let iso = (crate::embedding::l2_mu_norm(&u, &f.mu) - x.norm()).abs() / x.norm();
                worst_iso = worst_iso.max(iso);

                let coords = f.level.level_coords(&x).unwrap();
                let ax = f.level.to_ambient(&f.level.apply_op(&coords));
                let uax = crate::embedding::apply_un_with(&tr, &f.mu, &ax).unwrap();
                let mut acc = crate::real::Kahan::new();
                for (k, (a, b)) in u.iter().zip(&uax).enumerate() {
                    let lam = f.level.eigenvalue(k);
                    acc.add((*a * lam - *b).norm_sqr() * f.mu[k]);
                }
                let resid = acc.value().sqrt() / (1.0 + ax.norm());
                worst_inter = worst_inter.max(resid);
            }
            chk.require(
                worst_iso <= 1e-10,
                format!("{label}: isometry deviation {worst_iso:.2e}"),
            );
            chk.require(
                worst_inter <= 1e-9,
                format!("{label}: intertwining residual {worst_inter:.2e}"),
            );

            // cube coordinate bound
            let mut worst_coord = 0f64;
            for p in f.cloud.points() {
                worst_coord = worst_coord.max(p.cube.max_modulus());
            }
            chk.require(
                worst_coord <= 1.0 + 1e-10,
                format!("{label}: cube coordinate modulus {worst_coord}"),
            );

            // moment identity pair(1, pi_a conj pi_b) = sqrt(c_a c_b) <e_a, e_b>
            let count = f.scale.count();
            let mut worst_moment = 0f64;
            for a in 1..=8usize {
                for b in 1..=8usize {
                    let lhs = pair(&f.cloud, PairInput::One, &TestFunction::PiConjPi(a, b))
                        .unwrap()
                        .value;
                    let rhs = if a <= count && b <= count {
                        let ca = f.scale.c_weights()[a - 1];
                        let cb = f.scale.c_weights()[b - 1];
                        inner(&f.scale.e_vectors()[a - 1], &f.scale.e_vectors()[b - 1]).unwrap()
                            * (ca * cb).sqrt()
                    } else {
                        crate::Scalar::new(0.0, 0.0)
                    };
                    worst_moment = worst_moment.max((lhs - rhs).norm());
                }
            }
            chk.require(
                worst_moment <= 1e-10,
                format!("{label}: moment identity deviation {worst_moment:.2e}"),
            );

            // eigenvalue second moment, two independent routes
            let lhs = eigenvalue_second_moment(&f.level, &f.mu);
            let rhs = f.scale.operator_mass(&f.level).unwrap();
            chk.require(
                (lhs - rhs).abs() <= 1e-9,
                format!("{label}: second moment {lhs} vs {rhs}"),
            );
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    chk.note(format!("all levels checked in {elapsed:.2}s"));
    chk.require(elapsed < 60.0, format!("runtime {elapsed:.1}s exceeds 60s"));
    chk.finish(1, "finite-identities")
}

/// Criterion 2: shift eigenvalue statistics against the arcsine law.
pub fn criterion_shift_limit_law() -> CriterionResult {
    let started = Instant::now();
    let mut chk = Check::new();
    let fx = fixtures();
    let mut distances = Vec::new();
    for f in &fx.shift {
        let n = f.level.n();
        if ![8, 16, 32, 64, 128].contains(&n) {
            continue;
        }
        let cdf = weighted_eigenvalue_cdf(&f.cloud);
        let d = cdf.sup_distance(oracles::arcsine_cdf);
        chk.note(format!("n={n}: arcsine sup-distance {d:.5}"));
        if n == 64 {
            chk.require(d <= 0.02, format!("n=64 distance {d} exceeds 0.02"));
        }
        distances.push(d);
    }
    chk.require(
        distances.windows(2).all(|w| w[1] <= w[0] + 1e-15),
        format!("distance sequence not non-increasing: {distances:?}"),
    );
    let elapsed = started.elapsed().as_secs_f64();
    chk.require(elapsed < 5.0, format!("runtime {elapsed:.1}s exceeds 5s"));
    chk.finish(2, "shift-limit-law")
}

/// Criterion 3: kernel recovery of the shift multiplier at n = 128.
pub fn criterion_shift_multiplier() -> CriterionResult {
    let started = Instant::now();
    let mut chk = Check::new();
    let fx = fixtures();
    let cloud = &fx.shift.last().unwrap().cloud;
    let ts = [0.0, 0.125, 0.25, 0.5];
    let queries: Vec<_> = ts.iter().map(|&t| oracles::shift_curve(t, DEPTH)).collect();
    let est = estimate_multiplier(cloud, &queries, SHIFT_BANDWIDTH).unwrap();
    for (t, v) in ts.iter().zip(&est.values) {
        match v {
            Some(m) => {
                let want = oracles::shift_m(*t);
                let err = (m - want).abs();
                chk.note(format!("t={t}: estimate {m:.6}, target {want:.6}, error {err:.4}"));
                chk.require(err <= 0.03, format!("t={t}: error {err} exceeds 0.03"));
            }
            None => chk.require(false, format!("t={t}: empty kernel mass")),
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    chk.require(elapsed < 5.0, format!("runtime {elapsed:.1}s exceeds 5s"));
    chk.finish(3, "shift-multiplier")
}

/// Exact dyadic comparison `closed_gap <= 2^(2-2n)` where `closed_gap` is the
/// exact deviation of the level-n Fourier coordinate from its limit
/// `2^-a delta_ab`. Evaluated in integer arithmetic, no rounding anywhere.
fn fourier_gap_within_exact(n: usize, big_n: usize, a: usize, b: usize) -> bool {
    let tol_exp = 2 * n as i64 - 2; // tolerance is 2^(2-2n)
    if a != b {
        return true; // exact deviation is zero
    }
    if a <= big_n {
        // deviation = 2^-a / (2^N - 1): require 2^(2n-2) <= 2^a (2^N - 1)
        let lhs = shifted_one(tol_exp);
        let rhs = (shifted_one(big_n as i64) - BigInt::from(1)) << a;
        lhs <= rhs
    } else {
        // coordinate absent at this level: deviation = 2^-a
        let lhs = shifted_one(tol_exp);
        let rhs = shifted_one(a as i64);
        lhs <= rhs
    }
}

fn shifted_one(exp: i64) -> BigInt {
    // 2^exp as an integer comparison helper; negative exponents only occur
    // for n = 1 hmm guard anyway
    if exp <= 0 {
        BigInt::from(1)
    } else {
        BigInt::from(1) << (exp as usize)
    }
}

/// Criterion 4: shift Fourier coordinates converge to `2^-a delta_ab` at the
/// geometric rate. The rate inequality is checked exactly in integer
/// arithmetic on the closed-form value; the computed pairing must agree with
/// the closed form to 1e-10 at every level, and directly with the limit at
/// the stated tolerance wherever that tolerance is above the double-precision
/// evaluation floor (1e-9).
pub fn criterion_shift_fourier() -> CriterionResult {
    let mut chk = Check::new();
    let fx = fixtures();
    for f in &fx.shift {
        let n = f.level.n();
        let big_n = 2 * n + 1;
        let tol = 2.0f64.powi(2 - 2 * n as i32);
        let literal = tol >= 1e-9;
        let mut worst_route = 0f64;
        let mut worst_literal = 0f64;
        for a in 1..=6usize {
            for b in 1..=6usize {
                let got = pair(&f.cloud, PairInput::One, &TestFunction::PiConjPi(a, b))
                    .unwrap()
                    .value;
                let closed = if a == b && a <= big_n {
                    2.0f64.powi(-(a as i32)) / (1.0 - 2.0f64.powi(-(big_n as i32)))
                } else {
                    0.0
                };
                worst_route = worst_route.max((got - crate::Scalar::new(closed, 0.0)).norm());
                chk.require(
                    fourier_gap_within_exact(n, big_n, a, b),
                    format!("n={n} a={a} b={b}: exact gap exceeds 2^(2-2n)"),
                );
                if literal {
                    let target = if a == b { 2.0f64.powi(-(a as i32)) } else { 0.0 };
                    worst_literal =
                        worst_literal.max((got - crate::Scalar::new(target, 0.0)).norm());
                }
            }
        }
        chk.require(
            worst_route <= 1e-10,
            format!("n={n}: pairing vs closed form deviates {worst_route:.2e}"),
        );
        if literal {
            chk.require(
                worst_literal <= tol,
                format!("n={n}: |pairing - limit| = {worst_literal:.2e} exceeds {tol:.2e}"),
            );
            chk.note(format!("n={n}: literal gap {worst_literal:.2e} <= {tol:.2e}"));
        } else {
            chk.note(format!(
                "n={n}: rate checked exactly (tolerance {tol:.1e} below f64 floor), \
                 float route agrees to {worst_route:.2e}"
            ));
        }
    }
    chk.finish(4, "shift-fourier")
}

/// Criterion 5: the derivative second moment approaches the limit energy 1
/// with strictly decreasing error; both computation routes agree, and the
/// limit value is confirmed by quadrature.
pub fn criterion_derivative_second_moment() -> CriterionResult {
    let started = Instant::now();
    let mut chk = Check::new();
    // oracle: the limit energy is int 4 t^2 E(t)^2 dt = 1
    let energy = oracles::trapezoid(
        |t: f64| {
            let e = gaussian_profile(t);
            4.0 * t * t * e * e
        },
        -8.0,
        8.0,
        200_000,
    );
    chk.require(
        (energy - 1.0).abs() <= 1e-10,
        format!("quadrature limit energy {energy} not 1"),
    );
    let fx = fixtures();
    let mut errors = Vec::new();
    for f in &fx.derivative {
        let n = f.level.n();
        let lhs = eigenvalue_second_moment(&f.level, &f.mu);
        let rhs = f.scale.operator_mass(&f.level).unwrap();
        chk.require(
            (lhs - rhs).abs() <= 1e-9,
            format!("n={n}: routes disagree {lhs} vs {rhs}"),
        );
        let err = (lhs - 1.0).abs();
        chk.note(format!("n={n}: second moment {lhs:.8}, |error| {err:.6}"));
        errors.push(err);
    }
    chk.require(
        errors.windows(2).all(|w| w[1] < w[0]),
        format!("errors not strictly decreasing: {errors:?}"),
    );
    let elapsed = started.elapsed().as_secs_f64();
    chk.require(elapsed < 30.0, format!("runtime {elapsed:.1}s exceeds 30s"));
    chk.finish(5, "derivative-second-moment")
}

/// Criterion 6: derivative eigenvalue statistics against the standard normal
/// law, and kernel recovery of the multiplier `pi w` at n = 4.
pub fn criterion_derivative_limit_law() -> CriterionResult {
    let mut chk = Check::new();
    let fx = fixtures();
    let mut by_n = std::collections::BTreeMap::new();
    for f in &fx.derivative {
        let cdf = weighted_eigenvalue_cdf(&f.cloud);
        let d = cdf.sup_distance(oracles::normal_cdf);
        by_n.insert(f.level.n(), d);
        chk.note(format!("n={}: normal sup-distance {d:.5}", f.level.n()));
    }
    chk.require(by_n[&4] <= 0.05, format!("n=4 distance {} exceeds 0.05", by_n[&4]));
    chk.require(
        by_n[&4] < by_n[&3],
        format!("distance did not decrease: n=3 {} vs n=4 {}", by_n[&3], by_n[&4]),
    );

    let cloud = &fx.derivative.iter().find(|f| f.level.n() == 4).unwrap().cloud;
    let ws = [0.0, 0.5, -0.5, 1.0, -1.0];
    let queries: Vec<_> = ws.iter().map(|&w| oracles::derivative_curve(w, DEPTH)).collect();
    let est = estimate_multiplier(cloud, &queries, DERIVATIVE_BANDWIDTH).unwrap();
    for (w, v) in ws.iter().zip(&est.values) {
        match v {
            Some(m) => {
                let want = oracles::derivative_m(*w);
                let err = (m - want).abs();
                chk.note(format!("w={w}: estimate {m:.5}, target {want:.5}, error {err:.4}"));
                chk.require(err <= 0.1, format!("w={w}: error {err} exceeds 0.1"));
            }
            None => chk.require(false, format!("w={w}: empty kernel mass")),
        }
    }
    chk.finish(6, "derivative-limit-law")
}

/// Criterion 7: the finite transform of the grid Gaussian has constant
/// modulus over the eigenbasis, and its pairings against first-coordinate
/// monomials converge to the oracle integrals with shrinking gaps.
pub fn criterion_derivative_transform() -> CriterionResult {
    let mut chk = Check::new();
    let fx = fixtures();
    for f in &fx.derivative {
        let n = f.level.n();
        let e = &f.scale.e_vectors()[0];
        let u = crate::embedding::apply_un(&f.level, &f.mu, e).unwrap();
        let norm_e = e.norm();
        let mut worst = 0f64;
        for v in &u {
            worst = worst.max((v.norm() - norm_e).abs());
        }
        chk.require(
            worst <= 1e-10,
            format!("n={n}: |U(E)| deviates from ||E|| by {worst:.2e}"),
        );
    }

    // trace of pair(U_n(E), pi_a) toward int pi_a(X(w)) phi(w) dw
    for a in [1usize, 2, 3] {
        let h = TestFunction::Pi(a);
        let oracle = oracles::derivative_pair_oracle::<f64>(&h, DEPTH, 100_000);
        let mut gaps = Vec::new();
        for f in fx.derivative.iter().filter(|f| f.level.n() <= 4) {
            let e = &f.scale.e_vectors()[0];
            let u = crate::embedding::apply_un(&f.level, &f.mu, e).unwrap();
            let v = pair(&f.cloud, PairInput::Values(&u), &h).unwrap().value;
            let gap = (v - oracle).norm();
            chk.note(format!(
                "a={a} n={}: pairing {:.6}{:+.6}i, oracle {:.6}{:+.6}i, gap {gap:.5}",
                f.level.n(),
                v.re,
                v.im,
                oracle.re,
                oracle.im
            ));
            gaps.push(gap);
        }
        chk.require(
            gaps.windows(2).all(|w| w[1] < w[0]),
            format!("a={a}: gaps not shrinking: {gaps:?}"),
        );
    }
    chk.finish(7, "derivative-transform")
}

/// Criterion 8: Cauchy diagnostics over the degree-two dictionary on both
/// fixtures: the final-level gap of every trace is at most 0.01 and the gaps
/// over the last three levels do not increase (below the double-precision
/// noise floor counts as converged). These traces integrate the dictionary
/// against the plain measures, the computable surrogate for weak*
/// convergence; eigenvalue-weighted limits are covered by the multiplier and
/// second-moment criteria.
pub fn criterion_cauchy() -> CriterionResult {
    let mut chk = Check::new();
    let fx = fixtures();
    let dict = dictionary(DICT_RANGE, 2);
    for (tag, group) in [("shift", &fx.shift), ("derivative", &fx.derivative)] {
        let clouds: Vec<&Cloud> = group.iter().map(|f| &f.cloud).collect();
        let mut worst_final = (0f64, String::new());
        for h in &dict {
            let t = trace(&clouds, TraceWeight::One, h).unwrap();
            let final_gap = t.final_gap();
            if final_gap > worst_final.0 {
                worst_final = (final_gap, h.id());
            }
            chk.require(
                final_gap <= 0.01,
                format!("{tag} h={}: final gap {final_gap:.4}", h.id()),
            );
            chk.require(
                t.gaps_monotone(),
                format!(
                    "{tag} h={}: gaps increase over the last levels: {:?}",
                    h.id(),
                    t.gaps()
                ),
            );
        }
        chk.note(format!(
            "{tag}: worst final gap {:.2e} (h={})",
            worst_final.0, worst_final.1
        ));
    }
    chk.finish(8, "cauchy")
}

/// Criterion 9: the generic builder reproduces the diagonal fixture exactly:
/// graph-projection residuals vanish once the vector enters the span, and the
/// spectrum is `1..n` on the nose.
pub fn criterion_generic_builder() -> CriterionResult {
    let mut chk = Check::new();
    let gs = diagonal_fixture::<f64>(8);
    for n in 1..=8usize {
        let level = build_generic_level(&gs, n).unwrap();
        let want: Vec<f64> = (1..=n).map(|k| k as f64).collect();
        chk.require(
            level.eigenvalues() == want,
            format!("n={n}: spectrum {:?} differs from {want:?}", level.eigenvalues()),
        );
        for (k, (g, ag)) in gs.pairs().iter().take(n).enumerate() {
            let (_, _, resid) = graph_projection(&level, g, ag).unwrap();
            chk.require(
                resid <= 1e-12,
                format!("n={n} k={}: graph residual {resid:.2e}", k + 1),
            );
        }
    }
    chk.note("diagonal fixture: spectra exact, residuals vanish for n >= k".into());
    chk.finish(9, "generic-builder")
}

/// Criterion 10: tail sums of the geometric scales match their closed form
/// `(2^-J - 2^-N) / (1 - 2^-N)` to 1e-14 and obey the uniform tail bound.
pub fn criterion_tail() -> CriterionResult {
    let mut chk = Check::new();
    let fx = fixtures();
    for (tag, group) in [("shift", &fx.shift), ("derivative", &fx.derivative)] {
        for f in group.iter() {
            let n = f.level.n();
            let count = f.scale.count();
            let big_n = count as i32;
            for j in (0..=count.min(24)).chain([count]) {
                let tail = tail_mass(&f.scale, j);
                let closed = if j >= count {
                    0.0
                } else {
                    (2.0f64.powi(-(j as i32)) - 2.0f64.powi(-big_n))
                        / (1.0 - 2.0f64.powi(-big_n))
                };
                chk.require(
                    (tail - closed).abs() <= 1e-14,
                    format!("{tag} n={n} J={j}: tail {tail:.16e} vs closed {closed:.16e}"),
                );
                let bound = 2.0f64.powi(-(j as i32)) / (1.0 - 2.0f64.powi(-big_n)) + 1e-14;
                chk.require(
                    tail <= bound,
                    format!("{tag} n={n} J={j}: tail {tail:.3e} above bound {bound:.3e}"),
                );
            }
        }
    }
    chk.finish(10, "tail")
}

/// Run one criterion by id.
pub fn run(id: usize, seed: u64) -> Option<CriterionResult> {
    Some(match id {
        1 => criterion_finite_identities(seed),
        2 => criterion_shift_limit_law(),
        3 => criterion_shift_multiplier(),
        4 => criterion_shift_fourier(),
        5 => criterion_derivative_second_moment(),
        6 => criterion_derivative_limit_law(),
        7 => criterion_derivative_transform(),
        8 => criterion_cauchy(),
        9 => criterion_generic_builder(),
        10 => criterion_tail(),
        _ => return None,
    })
}

/// Run every criterion, optionally filtered by name substring.
pub fn run_all(seed: u64, only: Option<&str>) -> Vec<CriterionResult> {
    (1..=10)
        .filter_map(|id| run(id, seed))
        .filter(|r| only.map_or(true, |f| r.name.contains(f)))
        .collect()
}
