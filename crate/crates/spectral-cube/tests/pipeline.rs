//! Cross-module pipeline runs, including the single-precision instantiation:
//! the kernels are generic over the base float, so the whole chain must also
//! compile and behave at f32 (with correspondingly loose tolerances).

use spectral_cube::embedding::{compute_mu, embed_xn, pair, PairInput, TestFunction};
use spectral_cube::limits::{trace, weighted_eigenvalue_cdf, TraceWeight};
use spectral_cube::operators::{build_derivative_level, build_shift_level};
use spectral_cube::oracles;
use spectral_cube::sampling::{derivative_scale_level, shift_scale_level, validate_level};

#[test]
fn f32_shift_pipeline_end_to_end() {
    let level = build_shift_level::<f32>(8);
    let scale = shift_scale_level(&level).unwrap();
    let report = validate_level(&level, &scale).unwrap();
    assert!(report.check("membership").unwrap().passed);
    let mu = compute_mu(&level, &scale).unwrap();
    let total: f32 = mu.iter().sum();
    assert!((total - 1.0).abs() < 1e-5);
    let cloud = embed_xn(&level, &scale, &mu, 8).unwrap();
    let v = pair(&cloud, PairInput::One, &TestFunction::PiConjPi(2, 2)).unwrap();
    let want = 2.0f32.powi(-2) / (1.0 - 2.0f32.powi(-17));
    assert!((v.value.re - want).abs() < 1e-5);
    let cdf = weighted_eigenvalue_cdf(&cloud);
    assert!((cdf.total_mass() - 1.0).abs() < 1e-5);
    assert!(cdf.sup_distance(oracles::arcsine_cdf) < 0.08);
}

#[test]
fn f64_two_fixture_traces_share_machinery() {
    let shift_clouds: Vec<_> = [2usize, 4, 8]
        .iter()
        .map(|&n| {
            let level = build_shift_level::<f64>(n);
            let scale = shift_scale_level(&level).unwrap();
            let mu = compute_mu(&level, &scale).unwrap();
            embed_xn(&level, &scale, &mu, 12).unwrap()
        })
        .collect();
    let deriv_clouds: Vec<_> = [2usize, 3, 4]
        .iter()
        .map(|&n| {
            let level = build_derivative_level::<f64>(n).unwrap();
            let scale = derivative_scale_level(&level).unwrap();
            let mu = compute_mu(&level, &scale).unwrap();
            embed_xn(&level, &scale, &mu, 12).unwrap()
        })
        .collect();
    for clouds in [&shift_clouds, &deriv_clouds] {
        let refs: Vec<_> = clouds.iter().collect();
        let t = trace(&refs, TraceWeight::One, &TestFunction::One).unwrap();
        for (_, v) in &t.samples {
            assert!((v.re - 1.0).abs() < 1e-12 && v.im.abs() < 1e-12);
        }
    }
}
