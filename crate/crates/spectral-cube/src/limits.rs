//! Limit diagnostics across a family of clouds.
//!
//! The limit measure exists only as the weak* limit of the per-level pairing
//! functionals, so everything here is estimation and trend measurement, never
//! a certificate: moment traces with Cauchy gaps, persistence-filtered
//! epsilon-nets for the accumulation set, origin-mass and support weights,
//! kernel-regression estimates of the multiplier, and weighted eigenvalue
//! CDFs against oracle laws.


use crate::embedding::{pair, CubePoint, PairInput, SpectralCloud, TestFunction};
use crate::error::{Error, Result};
use crate::real::{real, Kahan, Real, C};
use crate::sampling::NOISE_FLOOR;

/// The `g` slot of a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceWeight {
    One,
    Lambda,
}

/// Pairing values of one test function across levels, with Cauchy summaries.
#[derive(Clone, Debug)]
pub struct MomentTrace<F> {
    pub h_id: String,
    /// `(n, pairing value)`, strictly increasing in `n`.
    pub samples: Vec<(usize, C<F>)>,
    /// Last pairing value.
    pub limit_estimate: C<F>,
    /// Max consecutive difference over the last half of the samples.
    pub cauchy_gap: F,
}

impl<F: Real> MomentTrace<F> {
    /// Consecutive differences `|v_{i+1} - v_i|`, one per level after the first.
    pub fn gaps(&self) -> Vec<F> {
        self.samples
            .windows(2)
            .map(|w| (w[1].1 - w[0].1).norm())
            .collect()
    }

    /// Difference at the final level.
    pub fn final_gap(&self) -> F {
        *self.gaps().last().expect("trace has at least three samples")
    }

    /// Whether the gaps at the last three levels are non-increasing, treating
    /// anything below [`NOISE_FLOOR`] as converged.
    pub fn gaps_monotone(&self) -> bool {
        let gaps = self.gaps();
        let start = gaps.len().saturating_sub(3);
        let floor = real::<F>(NOISE_FLOOR);
        gaps[start..]
            .windows(2)
            .all(|w| w[1].max(floor) <= w[0].max(floor))
    }
}

fn max_gap_over_last_half<F: Real>(samples: &[(usize, C<F>)]) -> F {
    let m = samples.len();
    let from = m.div_ceil(2); // 1-based index of the first sample in the window
    let mut worst = F::zero();
    for i in from.max(1)..m {
        let d = (samples[i].1 - samples[i - 1].1).norm();
        if d > worst {
            worst = d;
        }
    }
    worst
}

/// Pair `h` against every cloud and collect the trace. Needs at least three
/// clouds with strictly increasing `n`.
pub fn trace<F: Real>(
    clouds: &[&SpectralCloud<F>],
    g: TraceWeight,
    h: &TestFunction,
) -> Result<MomentTrace<F>> {
    if clouds.len() < 3 {
        return Err(Error::NotEnoughLevels { needed: 3, available: clouds.len() });
    }
    let mut samples = Vec::with_capacity(clouds.len());
    let mut prev_n = None;
    for cloud in clouds {
        if let Some(p) = prev_n {
            if cloud.n() <= p {
                return Err(Error::Invalid("clouds must have strictly increasing n".into()));
            }
        }
        prev_n = Some(cloud.n());
        let input = match g {
            TraceWeight::One => PairInput::One,
            TraceWeight::Lambda => PairInput::Lambda,
        };
        let v = pair(cloud, input, h)?;
        samples.push((cloud.n(), v.value));
    }
    let limit_estimate = samples.last().unwrap().1;
    let cauchy_gap = max_gap_over_last_half(&samples);
    Ok(MomentTrace { h_id: h.id(), samples, limit_estimate, cauchy_gap })
}

/// Representatives of the accumulation set of the embedded eigenbases.
#[derive(Clone, Debug)]
pub struct LimitSetEstimate<F> {
    pub representatives: Vec<CubePoint<F>>,
    pub radius: F,
    /// Levels whose clouds every representative had to touch.
    pub window: Vec<usize>,
}

/// Greedy epsilon-net over the last cloud, filtered by persistence: a net
/// point survives only if every cloud in the window has a point within
/// `radius` of it.
pub fn estimate_limit_set<F: Real>(
    clouds: &[&SpectralCloud<F>],
    radius: F,
) -> Result<LimitSetEstimate<F>> {
    if clouds.is_empty() {
        return Err(Error::NotEnoughLevels { needed: 1, available: 0 });
    }
    if !(radius > F::zero()) {
        return Err(Error::Invalid("radius must be positive".into()));
    }
    let last = clouds.last().unwrap();
    let mut net: Vec<CubePoint<F>> = Vec::new();
    for p in last.points() {
        if net.iter().all(|q| q.distance(&p.cube) >= radius) {
            net.push(p.cube.clone());
        }
    }
    let survivors = net
        .into_iter()
        .filter(|q| {
            clouds.iter().all(|cloud| {
                cloud
                    .points()
                    .iter()
                    .any(|p| p.cube.distance(q) <= radius)
            })
        })
        .collect();
    Ok(LimitSetEstimate {
        representatives: survivors,
        radius,
        window: clouds.iter().map(|c| c.n()).collect(),
    })
}

/// Per-level mass of the points whose first `l` coordinates all have modulus
/// below `1/k` (the open-box neighborhood of the cube origin).
pub fn origin_mass<F: Real>(
    clouds: &[&SpectralCloud<F>],
    k: usize,
    l: usize,
) -> Result<Vec<(usize, F)>> {
    if k == 0 {
        return Err(Error::Invalid("disk scale k must be positive".into()));
    }
    let mut out = Vec::with_capacity(clouds.len());
    for cloud in clouds {
        if l > cloud.depth() {
            return Err(Error::DepthExceeded { coord: l, depth: cloud.depth() });
        }
        let r = F::one() / real::<F>(k as f64);
        let mut acc = Kahan::new();
        for p in cloud.points() {
            let inside = (1..=l).all(|j| p.cube.coord(j).norm() < r);
            if inside {
                acc.add(p.weight);
            }
        }
        out.push((cloud.n(), acc.value()));
    }
    Ok(out)
}

/// Weight of the final cloud farther than `2 * radius` from every
/// representative; small when the estimate carries the support.
pub fn support_diagnostic<F: Real>(
    cloud: &SpectralCloud<F>,
    estimate: &LimitSetEstimate<F>,
) -> F {
    let two_r = estimate.radius + estimate.radius;
    let mut acc = Kahan::new();
    for p in cloud.points() {
        let near = estimate
            .representatives
            .iter()
            .any(|q| q.distance(&p.cube) <= two_r);
        if !near {
            acc.add(p.weight);
        }
    }
    acc.value()
}

/// Kernel-regression estimates of the multiplier at query points.
#[derive(Clone, Debug)]
pub struct MultiplierEstimate<F> {
    pub queries: Vec<CubePoint<F>>,
    /// `None` where the kernel mass at the query vanished.
    pub values: Vec<Option<F>>,
    pub bandwidth: F,
}

/// Denominator floor below which a query is flagged missing rather than
/// returned as zero.
pub const KERNEL_MASS_FLOOR: f64 = 1e-12;

/// Nadaraya-Watson estimate of the multiplier on a cloud:
/// `m(q) = sum lambda(f) mu(f) K(d(q, X(f))/bw) / sum mu(f) K(...)` with a
/// Gaussian kernel in the cube metric.
pub fn estimate_multiplier<F: Real>(
    cloud: &SpectralCloud<F>,
    queries: &[CubePoint<F>],
    bandwidth: F,
) -> Result<MultiplierEstimate<F>> {
    if !(bandwidth > F::zero()) {
        return Err(Error::Invalid("bandwidth must be positive".into()));
    }
    let half = real::<F>(0.5);
    let floor = real::<F>(KERNEL_MASS_FLOOR);
    let mut values = Vec::with_capacity(queries.len());
    for q in queries {
        let mut num = Kahan::new();
        let mut den = Kahan::new();
        for p in cloud.points() {
            let u = q.distance(&p.cube) / bandwidth;
            let w = (-half * u * u).exp() * p.weight;
            num.add(w * p.eigenvalue);
            den.add(w);
        }
        if den.value() < floor {
            values.push(None);
        } else {
            values.push(Some(num.value() / den.value()));
        }
    }
    Ok(MultiplierEstimate { queries: queries.to_vec(), values, bandwidth })
}

/// Right-continuous weighted CDF of the eigenvalues.
#[derive(Clone, Debug)]
pub struct EigenCdf<F> {
    /// `(lambda, cumulative mass)` sorted by lambda.
    pub steps: Vec<(F, F)>,
}

pub fn weighted_eigenvalue_cdf<F: Real>(cloud: &SpectralCloud<F>) -> EigenCdf<F> {
    let mut atoms: Vec<(F, F)> = cloud
        .points()
        .iter()
        .map(|p| (p.eigenvalue, p.weight))
        .collect();
    atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut acc = Kahan::new();
    let steps = atoms
        .into_iter()
        .map(|(lam, w)| {
            acc.add(w);
            (lam, acc.value())
        })
        .collect();
    EigenCdf { steps }
}

impl<F: Real> EigenCdf<F> {
    pub fn total_mass(&self) -> F {
        self.steps.last().map(|s| s.1).unwrap_or(F::zero())
    }

    /// Supremum distance to a continuous CDF, evaluated on both sides of
    /// every atom.
    pub fn sup_distance(&self, oracle: impl Fn(F) -> F) -> F {
        let mut worst = F::zero();
        let mut below = F::zero();
        for &(lam, cum) in &self.steps {
            let f = oracle(lam);
            worst = worst.max((f - cum).abs()).max((f - below).abs());
            below = cum;
        }
        worst
    }
}

/// A finite-coordinate open box in the cube.
#[derive(Clone, Debug)]
pub struct CoordinateBox {
    pub constraints: Vec<BoxConstraint>,
}

#[derive(Clone, Copy, Debug)]
pub enum BoxConstraint {
    /// `|pi_j| < r`
    AbsLt { coord: usize, r: f64 },
    /// `Re pi_j > c`
    ReGt { coord: usize, c: f64 },
    /// `Re pi_j < c`
    ReLt { coord: usize, c: f64 },
    /// `Im pi_j > c`
    ImGt { coord: usize, c: f64 },
    /// `Im pi_j < c`
    ImLt { coord: usize, c: f64 },
}

impl CoordinateBox {
    pub fn max_coord(&self) -> usize {
        self.constraints
            .iter()
            .map(|c| match c {
                BoxConstraint::AbsLt { coord, .. }
                | BoxConstraint::ReGt { coord, .. }
                | BoxConstraint::ReLt { coord, .. }
                | BoxConstraint::ImGt { coord, .. }
                | BoxConstraint::ImLt { coord, .. } => *coord,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn contains<F: Real>(&self, p: &CubePoint<F>) -> bool {
        self.constraints.iter().all(|c| match *c {
            BoxConstraint::AbsLt { coord, r } => p.coord(coord).norm() < real::<F>(r),
            BoxConstraint::ReGt { coord, c } => p.coord(coord).re > real::<F>(c),
            BoxConstraint::ReLt { coord, c } => p.coord(coord).re < real::<F>(c),
            BoxConstraint::ImGt { coord, c } => p.coord(coord).im > real::<F>(c),
            BoxConstraint::ImLt { coord, c } => p.coord(coord).im < real::<F>(c),
        })
    }
}

/// Per-level masses of an open box, with the lim-inf comparison against an
/// oracle value when one exists.
#[derive(Clone, Debug)]
pub struct LiminfReport<F> {
    pub masses: Vec<(usize, F)>,
    pub oracle: Option<F>,
    /// `oracle <= min of the last-half masses + slack`, when an oracle is given.
    pub verdict: Option<bool>,
}

/// Slack allowed when comparing an oracle mass with the lim-inf surrogate.
pub const LIMINF_SLACK: f64 = 0.02;

pub fn open_set_liminf_check<F: Real>(
    clouds: &[&SpectralCloud<F>],
    cube_box: &CoordinateBox,
    oracle: Option<F>,
) -> Result<LiminfReport<F>> {
    if clouds.is_empty() {
        return Err(Error::NotEnoughLevels { needed: 1, available: 0 });
    }
    let mut masses = Vec::with_capacity(clouds.len());
    for cloud in clouds {
        if cube_box.max_coord() > cloud.depth() {
            return Err(Error::DepthExceeded {
                coord: cube_box.max_coord(),
                depth: cloud.depth(),
            });
        }
        let mut acc = Kahan::new();
        for p in cloud.points() {
            if cube_box.contains(&p.cube) {
                acc.add(p.weight);
            }
        }
        masses.push((cloud.n(), acc.value()));
    }
    let verdict = oracle.map(|o| {
        let from = masses.len() / 2;
        let min_tail = masses[from..]
            .iter()
            .fold(F::infinity(), |m, &(_, v)| m.min(v));
        o <= min_tail + real::<F>(LIMINF_SLACK)
    });
    Ok(LiminfReport { masses, oracle, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{compute_mu, embed_xn, CloudPoint};
    use crate::oracles;
    use crate::operators::{build_derivative_level, build_shift_level};
    use crate::sampling::{derivative_scale_level, shift_scale_level};
    use num_complex::Complex64;

    const DEPTH: usize = 16;

    fn shift_cloud(n: usize) -> SpectralCloud<f64> {
        let level = build_shift_level::<f64>(n);
        let scale = shift_scale_level(&level).unwrap();
        let mu = compute_mu(&level, &scale).unwrap();
        embed_xn(&level, &scale, &mu, DEPTH).unwrap()
    }

    fn derivative_cloud(n: usize) -> SpectralCloud<f64> {
        let level = build_derivative_level::<f64>(n).unwrap();
        let scale = derivative_scale_level(&level).unwrap();
        let mu = compute_mu(&level, &scale).unwrap();
        embed_xn(&level, &scale, &mu, DEPTH).unwrap()
    }

    #[test]
    fn trace_of_constant_is_constant() {
        let clouds: Vec<_> = [1, 2, 4, 8].iter().map(|&n| shift_cloud(n)).collect();
        let refs: Vec<_> = clouds.iter().collect();
        let t = trace(&refs, TraceWeight::One, &TestFunction::One).unwrap();
        for (_, v) in &t.samples {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        }
        assert!(t.cauchy_gap < 1e-13);
    }

    #[test]
    fn trace_needs_three_clouds() {
        let clouds: Vec<_> = [1, 2].iter().map(|&n| shift_cloud(n)).collect();
        let refs: Vec<_> = clouds.iter().collect();
        assert!(matches!(
            trace(&refs, TraceWeight::One, &TestFunction::One),
            Err(Error::NotEnoughLevels { .. })
        ));
    }

    #[test]
    fn shift_diagonal_trace_converges_to_weight_limit() {
        // pair(1, pi_a conj pi_a) = 2^-a/(1 - 2^-(2n+1)) -> 2^-a
        let clouds: Vec<_> = [2, 4, 8, 16].iter().map(|&n| shift_cloud(n)).collect();
        let refs: Vec<_> = clouds.iter().collect();
        for a in [1usize, 3] {
            let t = trace(&refs, TraceWeight::One, &TestFunction::PiConjPi(a, a)).unwrap();
            for (n, v) in &t.samples {
                let want = 2.0f64.powi(-(a as i32)) / (1.0 - 2.0f64.powi(-(2 * *n as i32 + 1)));
                assert!((v.re - want).abs() < 1e-13 && v.im.abs() < 1e-13);
            }
            let lim = 2.0f64.powi(-(a as i32));
            assert!((t.limit_estimate.re - lim).abs() < 2.0f64.powi(-(2 * 16 + 1)) + 1e-12);
            assert!(t.gaps_monotone());
        }
    }

    #[test]
    fn shift_lambda_trace_is_exactly_zero() {
        // int lambda |pi_2 o X|^2 dmu = c_2 * mean of cos over a full period = 0,
        // matching the oracle integral of cos(2 pi t) against |X(t)_2|^2
        let clouds: Vec<_> = [2, 4, 8].iter().map(|&n| shift_cloud(n)).collect();
        let refs: Vec<_> = clouds.iter().collect();
        let t = trace(&refs, TraceWeight::Lambda, &TestFunction::PiConjPi(2, 2)).unwrap();
        for (_, v) in &t.samples {
            assert!(v.norm() < 1e-15, "got {v}");
        }
        let oracle = oracles::trapezoid(
            |t: f64| oracles::shift_m(t) * 0.25,
            0.0,
            1.0,
            4096,
        );
        assert!(oracle.abs() < 1e-12);
    }

    #[test]
    fn limit_set_of_repeated_cloud_is_a_net() {
        let c = shift_cloud(8);
        let est = estimate_limit_set(&[&c, &c], 0.05).unwrap();
        assert!(!est.representatives.is_empty());
        // every cloud point is near some representative
        for p in c.points() {
            let near = est
                .representatives
                .iter()
                .any(|q| q.distance(&p.cube) <= 0.05);
            assert!(near);
        }
    }

    #[test]
    fn shift_limit_set_tracks_oracle_curve() {
        let clouds: Vec<_> = [32, 64, 128].iter().map(|&n| shift_cloud(n)).collect();
        let refs: Vec<_> = clouds.iter().collect();
        let eps = 0.05;
        let est = estimate_limit_set(&refs, eps).unwrap();
        assert!(!est.representatives.is_empty());
        // every representative lies within 2 eps of the oracle circle,
        // sampled densely
        let samples: Vec<CubePoint<f64>> = (0..10_000)
            .map(|i| oracles::shift_curve(i as f64 / 10_000.0, DEPTH))
            .collect();
        for rep in &est.representatives {
            let d = samples
                .iter()
                .map(|s| s.distance(rep))
                .fold(f64::INFINITY, f64::min);
            assert!(d <= 2.0 * eps, "representative strays {d}");
        }
    }

    #[test]
    fn derivative_limit_set_concentrates_on_moderate_frequencies() {
        // representatives either track the oracle curve at moderate
        // frequencies or sit on far-frequency clusters that carry
        // negligible weight. The window starts at n=3: the level-2 scale has
        // only two pairs and its modulus normalizer (1 - 2^-2)^(-1/2) shifts
        // every coordinate by ~15%, more than any useful radius.
        let clouds: Vec<_> = [3, 4].iter().map(|&n| derivative_cloud(n)).collect();
        let refs: Vec<_> = clouds.iter().collect();
        let eps = 0.08;
        let est = estimate_limit_set(&refs, eps).unwrap();
        assert!(!est.representatives.is_empty());
        let samples: Vec<CubePoint<f64>> = (0..16_000)
            .map(|i| oracles::derivative_curve(-4.0 + 8.0 * i as f64 / 16_000.0, DEPTH))
            .collect();
        let last = refs.last().unwrap();
        let mut on_curve = 0usize;
        for rep in &est.representatives {
            let d = samples
                .iter()
                .map(|s| s.distance(rep))
                .fold(f64::INFINITY, f64::min);
            if d <= 2.0 * eps {
                on_curve += 1;
            } else {
                // far-frequency points rotate off the curve (the separating
                // spike dominates their overlaps) but their weight floor is
                // only ~1/n!^3 in total
                let nearby_mass: f64 = last
                    .points()
                    .iter()
                    .filter(|p| p.cube.distance(rep) <= 2.0 * eps)
                    .map(|p| p.weight)
                    .sum();
                assert!(
                    nearby_mass <= 2e-4,
                    "off-curve representative carries mass {nearby_mass}"
                );
            }
        }
        assert!(on_curve > 0, "no representative near the oracle curve");
    }

    #[test]
    fn origin_mass_examples() {
        let clouds: Vec<_> = [2, 4, 8].iter().map(|&n| shift_cloud(n)).collect();
        let refs: Vec<_> = clouds.iter().collect();
        // k = 1: every coordinate has modulus < 1, whole mass qualifies
        for (_, m) in origin_mass(&refs, 1, 4).unwrap() {
            assert!((m - 1.0).abs() < 1e-12);
        }
        // first coordinate has modulus sqrt(c_1) ~ 0.707 > 1/2: mass 0
        for (_, m) in origin_mass(&refs, 2, 1).unwrap() {
            assert_eq!(m, 0.0);
        }
        // the proof bound: mass <= tail(l) + l/k^2 for the geometric scale
        let deriv: Vec<_> = [2, 3, 4].iter().map(|&n| derivative_cloud(n)).collect();
        let drefs: Vec<_> = deriv.iter().collect();
        let (k, l) = (4usize, 4usize);
        for (n, m) in origin_mass(&drefs, k, l).unwrap() {
            let level = build_derivative_level::<f64>(n).unwrap();
            let scale = derivative_scale_level(&level).unwrap();
            let bound = crate::embedding::tail_mass(&scale, l)
                + l as f64 / (k * k) as f64
                + 1e-12;
            assert!(m <= bound, "n={n}: {m} > {bound}");
        }
    }

    #[test]
    fn support_diagnostic_small_on_late_window() {
        let clouds: Vec<_> = [64, 128].iter().map(|&n| shift_cloud(n)).collect();
        let refs: Vec<_> = clouds.iter().collect();
        let est = estimate_limit_set(&refs, 0.05).unwrap();
        let stray = support_diagnostic(refs[1], &est);
        assert!(stray <= 0.01, "stray mass {stray}");
        // an estimate containing every final point leaves nothing behind
        let everything = LimitSetEstimate {
            representatives: refs[1].points().iter().map(|p| p.cube.clone()).collect(),
            radius: 0.05,
            window: vec![64, 128],
        };
        assert_eq!(support_diagnostic(refs[1], &everything), 0.0);

        // derivative: the stray mass is bounded by the Gaussian tail of the
        // weights plus the spike floor ~1/n!^3 plus clustering slack
        let dclouds: Vec<_> = [3, 4].iter().map(|&n| derivative_cloud(n)).collect();
        let drefs: Vec<_> = dclouds.iter().collect();
        let dest = estimate_limit_set(&drefs, 0.08).unwrap();
        let stray = support_diagnostic(drefs[1], &dest);
        assert!(stray <= 2e-4, "derivative stray mass {stray}");
    }

    #[test]
    fn multiplier_constant_cloud() {
        // synthetic cloud with lambda = 3 everywhere
        let pts = (0..10)
            .map(|i| CloudPoint {
                k_index: i as i64,
                weight: 0.1,
                eigenvalue: 3.0,
                cube: oracles::shift_curve(i as f64 / 10.0, DEPTH),
            })
            .collect();
        let cloud = SpectralCloud::from_points(1, DEPTH, pts);
        let queries = vec![oracles::shift_curve(0.05, DEPTH), oracles::shift_curve(0.4, DEPTH)];
        let est = estimate_multiplier(&cloud, &queries, 0.05).unwrap();
        for v in est.values {
            assert!((v.unwrap() - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn multiplier_missing_when_kernel_mass_vanishes() {
        let pts = vec![CloudPoint {
            k_index: 0,
            weight: 1.0,
            eigenvalue: 1.0,
            cube: oracles::shift_curve(0.0, DEPTH),
        }];
        let cloud = SpectralCloud::from_points(1, DEPTH, pts);
        let far = oracles::shift_curve(0.5, DEPTH);
        let est = estimate_multiplier(&cloud, &[far], 0.001).unwrap();
        assert!(est.values[0].is_none());
    }

    #[test]
    fn multiplier_matches_oracles_on_fixtures() {
        let cloud = shift_cloud(128);
        let ts = [0.0, 0.125, 0.25, 0.5];
        let queries: Vec<_> = ts.iter().map(|&t| oracles::shift_curve(t, DEPTH)).collect();
        let est = estimate_multiplier(&cloud, &queries, 0.02).unwrap();
        for (t, v) in ts.iter().zip(&est.values) {
            let want = oracles::shift_m(*t);
            assert!((v.unwrap() - want).abs() <= 0.03, "t={t}");
        }

        let dcloud = derivative_cloud(4);
        let ws = [0.0, 0.5, -0.5, 1.0, -1.0];
        let queries: Vec<_> = ws.iter().map(|&w| oracles::derivative_curve(w, DEPTH)).collect();
        let est = estimate_multiplier(&dcloud, &queries, 0.01).unwrap();
        for (w, v) in ws.iter().zip(&est.values) {
            let want = oracles::derivative_m(*w);
            assert!((v.unwrap() - want).abs() <= 0.1, "w={w}: {:?}", v);
        }
    }

    #[test]
    fn cdf_mass_and_point_mass_step() {
        let pts = vec![CloudPoint {
            k_index: 0,
            weight: 1.0,
            eigenvalue: 2.0,
            cube: oracles::shift_curve(0.0, 4),
        }];
        let cloud = SpectralCloud::from_points(1, 4, pts);
        let cdf = weighted_eigenvalue_cdf(&cloud);
        // a point mass is the heaviside step at its eigenvalue
        assert_eq!(cdf.steps, vec![(2.0, 1.0)]);
        assert_eq!(cdf.total_mass(), 1.0);
    }

    #[test]
    fn cdf_against_oracle_laws() {
        let cdf = weighted_eigenvalue_cdf(&shift_cloud(64));
        assert!((cdf.total_mass() - 1.0).abs() < 1e-12);
        let d = cdf.sup_distance(oracles::arcsine_cdf);
        assert!(d <= 0.02, "arcsine distance {d}");

        let dcdf = weighted_eigenvalue_cdf(&derivative_cloud(4));
        assert!((dcdf.total_mass() - 1.0).abs() < 1e-12);
        let d = dcdf.sup_distance(oracles::normal_cdf);
        assert!(d <= 0.05, "normal distance {d}");
    }

    #[test]
    fn liminf_box_checks() {
        let clouds: Vec<_> = [8, 16, 32, 64].iter().map(|&n| shift_cloud(n)).collect();
        let refs: Vec<_> = clouds.iter().collect();
        // the whole cube
        let whole = CoordinateBox { constraints: vec![] };
        let rep = open_set_liminf_check(&refs, &whole, Some(1.0)).unwrap();
        for (_, m) in &rep.masses {
            assert!((m - 1.0).abs() < 1e-12);
        }
        assert_eq!(rep.verdict, Some(true));
        // {Re pi_2 > 0} pushes forward to {cos > 0}, Lebesgue mass 1/2
        let half = CoordinateBox {
            constraints: vec![BoxConstraint::ReGt { coord: 2, c: 0.0 }],
        };
        let rep = open_set_liminf_check(&refs, &half, Some(0.5)).unwrap();
        assert_eq!(rep.verdict, Some(true));
        let last = rep.masses.last().unwrap().1;
        assert!((last - 0.5).abs() < 0.02, "mass {last}");
        // empty box
        let empty = CoordinateBox {
            constraints: vec![
                BoxConstraint::ReGt { coord: 1, c: 0.5 },
                BoxConstraint::ReLt { coord: 1, c: -0.5 },
            ],
        };
        let rep = open_set_liminf_check(&refs, &empty, None).unwrap();
        for (_, m) in &rep.masses {
            assert_eq!(*m, 0.0);
        }
    }

    #[test]
    fn multiplier_is_pinned_by_the_scale_not_eigen_phases() {
        // fixture clouds read their coordinates off the scale's closed form,
        // so re-running after re-phasing stored eigenvectors is a no-op by
        // construction; verify two independent builds agree bit-for-bit
        let a = shift_cloud(16);
        let b = shift_cloud(16);
        let queries = vec![oracles::shift_curve(0.2, DEPTH)];
        let ea = estimate_multiplier(&a, &queries, 0.02).unwrap();
        let eb = estimate_multiplier(&b, &queries, 0.02).unwrap();
        assert_eq!(ea.values[0], eb.values[0]);
    }
}
