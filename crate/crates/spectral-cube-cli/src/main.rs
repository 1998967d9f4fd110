//! Experiment driver: build sampling levels and scales, embed spectral
//! clouds, trace convergence over the test-function dictionary, compare
//! eigenvalue statistics and multiplier estimates against the closed-form
//! oracles, and run the release gate.

mod config;
mod outputs;

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use outputs::{fmt_f64, svg_chart, OutDir, Series};
use spectral_cube::embedding::{compute_mu, dictionary, embed_xn, tail_mass, SpectralCloud};
use spectral_cube::limits::{estimate_multiplier, trace, weighted_eigenvalue_cdf, TraceWeight};
use spectral_cube::oracles;
use spectral_cube::sampling::{validate_level, SamplingLevel, ScaleLevel};

#[derive(Parser)]
#[command(
    name = "spectral-cube",
    about = "finite spectral sampling, cube embeddings and limit diagnostics",
    version
)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Overrides {
    /// Run config file (TOML); defaults are used when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Operator: "shift", "derivative" or an operator spec file.
    #[arg(long, global = true)]
    operator: Option<String>,
    /// Comma-separated level list, e.g. 1,2,4,8.
    #[arg(long, global = true, value_delimiter = ',')]
    levels: Option<Vec<usize>>,
    /// Cube truncation depth.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Limit-set radius.
    #[arg(long = "eps", global = true)]
    eps: Option<f64>,
    /// Kernel bandwidth for multiplier estimates.
    #[arg(long, global = true)]
    bandwidth: Option<f64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Build levels and scales, validate them, write level tables.
    Sample,
    /// Embed the eigenbases as spectral clouds (one CSV per level).
    Embed,
    /// Trace the dictionary pairings across levels and report Cauchy gaps.
    Converge,
    /// Eigenvalue CDFs and multiplier estimates against the oracles, with plots.
    Spectrum,
    /// Run the acceptance gate; nonzero exit on any failed criterion.
    Verify {
        /// Only run criteria whose name contains this substring.
        #[arg(long)]
        only: Option<String>,
    },
}

fn effective_config(ov: &Overrides) -> Result<RunConfig> {
    let mut cfg = match &ov.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default_for(ov.operator.as_deref().unwrap_or("shift")),
    };
    if let Some(op) = &ov.operator {
        if cfg.operator != *op {
            cfg = RunConfig { operator: op.clone(), ..RunConfig::default_for(op) };
        }
    }
    if let Some(levels) = &ov.levels {
        cfg.levels = levels.clone();
    }
    if let Some(depth) = ov.depth {
        cfg.depth = depth;
    }
    if let Some(eps) = ov.eps {
        cfg.epsilon = eps;
    }
    if let Some(bw) = ov.bandwidth {
        cfg.bandwidth = bw;
    }
    if let Some(out) = &ov.out {
        cfg.out_dir = out.clone();
    }
    if let Some(seed) = ov.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32> {
    let cfg = effective_config(&cli.overrides)?;
    let out = OutDir::new(&cfg.out_dir, &cfg.hash())?;
    match cli.command {
        Command::Sample => cmd_sample(&cfg, &out).map(|_| 0),
        Command::Embed => cmd_embed(&cfg, &out).map(|_| 0),
        Command::Converge => cmd_converge(&cfg, &out).map(|_| 0),
        Command::Spectrum => cmd_spectrum(&cfg, &out).map(|_| 0),
        Command::Verify { only } => cmd_verify(&cfg, &out, only.as_deref()),
    }
}

fn build_levels(cfg: &RunConfig) -> Result<Vec<(SamplingLevel<f64>, ScaleLevel<f64>)>> {
    let spec = cfg.operator_spec()?;
    let mut out = Vec::with_capacity(cfg.levels.len());
    for &n in &cfg.levels {
        let level = spec
            .build_level(n)
            .with_context(|| format!("building level n={n}"))?;
        let scale = spec
            .build_scale(&level)
            .with_context(|| format!("building scale at n={n}"))?;
        out.push((level, scale));
    }
    Ok(out)
}

fn build_clouds(
    cfg: &RunConfig,
    levels: &[(SamplingLevel<f64>, ScaleLevel<f64>)],
) -> Result<Vec<SpectralCloud<f64>>> {
    levels
        .iter()
        .map(|(level, scale)| {
            let mu = compute_mu(level, scale)
                .with_context(|| format!("spectral weights at n={}", level.n()))?;
            Ok(embed_xn(level, scale, &mu, cfg.depth)?)
        })
        .collect()
}

fn cmd_sample(cfg: &RunConfig, out: &OutDir) -> Result<()> {
    let label = cfg.label();
    let levels = build_levels(cfg)?;
    let mut reports = Vec::new();
    for (level, scale) in &levels {
        let n = level.n();
        let mut rows = Vec::new();
        for k in 0..level.dim() {
            rows.push(format!(
                "eigen,{},{},,",
                level.k_index(k),
                fmt_f64(level.eigenvalue(k))
            ));
        }
        for (j, (ej, cj)) in scale.e_vectors().iter().zip(scale.c_weights()).enumerate() {
            let coords = level.level_coords(ej)?;
            let ae = level.to_ambient(&level.apply_op(&coords));
            rows.push(format!(
                "scale,{},{},{},{}",
                j + 1,
                fmt_f64(*cj),
                fmt_f64(ej.norm()),
                fmt_f64(ae.norm())
            ));
        }
        let path = out.write_csv(
            &format!("level_{label}_{n:04}.csv"),
            "record,index,value,norm_e,norm_ae",
            &rows,
        )?;
        println!("wrote {}", path.display());

        let report = validate_level(level, scale)?;
        reports.push(serde_json::json!({
            "n": n,
            "passed": report.all_passed(),
            "checks": report.checks.iter().map(|c| serde_json::json!({
                "name": c.name,
                "passed": c.passed,
                "value": c.value,
                "threshold": c.threshold,
            })).collect::<Vec<_>>(),
        }));
    }
    let path = out.write_json(
        &format!("validation_{label}.json"),
        &serde_json::Value::Array(reports),
    )?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_embed(cfg: &RunConfig, out: &OutDir) -> Result<()> {
    let label = cfg.label();
    let levels = build_levels(cfg)?;
    let clouds = build_clouds(cfg, &levels)?;
    for cloud in &clouds {
        let mut header = String::from("k_index,weight,eigenvalue");
        for j in 1..=cloud.depth() {
            header.push_str(&format!(",re_c{j},im_c{j}"));
        }
        let rows: Vec<String> = cloud
            .points()
            .iter()
            .map(|p| {
                let mut row = format!(
                    "{},{},{}",
                    p.k_index,
                    fmt_f64(p.weight),
                    fmt_f64(p.eigenvalue)
                );
                for c in p.cube.coords() {
                    row.push_str(&format!(",{},{}", fmt_f64(c.re), fmt_f64(c.im)));
                }
                row
            })
            .collect();
        let path = out.write_csv(&format!("cloud_{label}_{:04}.csv", cloud.n()), &header, &rows)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_converge(cfg: &RunConfig, out: &OutDir) -> Result<()> {
    let label = cfg.label();
    let levels = build_levels(cfg)?;
    let clouds = build_clouds(cfg, &levels)?;
    let refs: Vec<&SpectralCloud<f64>> = clouds.iter().collect();
    if refs.len() < 3 {
        bail!("convergence traces need at least 3 levels, have {}", refs.len());
    }
    let dict = dictionary(cfg.dict_range.min(cfg.depth), cfg.dict_degree);
    let mut report_entries = Vec::new();
    for h in &dict {
        let t_one = trace(&refs, TraceWeight::One, h)?;
        let t_lam = trace(&refs, TraceWeight::Lambda, h)?;
        let rows: Vec<String> = t_one
            .samples
            .iter()
            .zip(&t_lam.samples)
            .map(|(&(n, v1), &(_, vl))| {
                format!(
                    "{n},{},{},{},{}",
                    fmt_f64(v1.re),
                    fmt_f64(v1.im),
                    fmt_f64(vl.re),
                    fmt_f64(vl.im)
                )
            })
            .collect();
        out.write_csv(
            &format!("trace_{label}_{}.csv", h.id()),
            "n,one_re,one_im,lambda_re,lambda_im",
            &rows,
        )?;
        report_entries.push(serde_json::json!({
            "h": h.id(),
            "final_gap": t_one.final_gap(),
            "cauchy_gap": t_one.cauchy_gap,
            "gaps": t_one.gaps(),
            "monotone": t_one.gaps_monotone(),
            "limit_re": t_one.limit_estimate.re,
            "limit_im": t_one.limit_estimate.im,
        }));
    }
    let path = out.write_json(
        &format!("cauchy_{label}.json"),
        &serde_json::Value::Array(report_entries),
    )?;
    println!("wrote {} trace files and {}", dict.len(), path.display());
    Ok(())
}

fn oracle_cdf(cfg: &RunConfig) -> Option<fn(f64) -> f64> {
    match cfg.operator.as_str() {
        "shift" => Some(oracles::arcsine_cdf::<f64>),
        "derivative" => Some(oracles::normal_cdf::<f64>),
        _ => None,
    }
}

fn cmd_spectrum(cfg: &RunConfig, out: &OutDir) -> Result<()> {
    let label = cfg.label();
    let levels = build_levels(cfg)?;
    let clouds = build_clouds(cfg, &levels)?;
    let oracle = oracle_cdf(cfg);

    for cloud in &clouds {
        let cdf = weighted_eigenvalue_cdf(cloud);
        let rows: Vec<String> = cdf
            .steps
            .iter()
            .map(|&(lam, cum)| match oracle {
                Some(f) => format!("{},{},{}", fmt_f64(lam), fmt_f64(cum), fmt_f64(f(lam))),
                None => format!("{},{},", fmt_f64(lam), fmt_f64(cum)),
            })
            .collect();
        out.write_csv(
            &format!("cdf_{label}_{:04}.csv", cloud.n()),
            "lambda,cdf,oracle_cdf",
            &rows,
        )?;
        if let Some(f) = oracle {
            let d = cdf.sup_distance(f);
            println!("n={}: eigenvalue CDF sup-distance to oracle {d:.5}", cloud.n());
            let svg = svg_chart(
                &format!("{label} eigenvalue CDF, n={}", cloud.n()),
                out.hash(),
                &[
                    Series {
                        label: "empirical",
                        points: cdf.steps.clone(),
                        color: "#1f77b4",
                        scatter: false,
                    },
                    Series {
                        label: "oracle",
                        points: cdf.steps.iter().map(|&(x, _)| (x, f(x))).collect(),
                        color: "#d62728",
                        scatter: false,
                    },
                ],
            );
            out.write_svg(&format!("cdf_{label}_{:04}.svg", cloud.n()), &svg)?;
        }
    }

    if !cfg.mhat_queries.is_empty() {
        let last = clouds.last().expect("at least one level");
        let (queries, oracle_m): (Vec<_>, Vec<f64>) = match cfg.operator.as_str() {
            "shift" => cfg
                .mhat_queries
                .iter()
                .map(|&t| (oracles::shift_curve(t, cfg.depth), oracles::shift_m(t)))
                .unzip(),
            "derivative" => cfg
                .mhat_queries
                .iter()
                .map(|&w| (oracles::derivative_curve(w, cfg.depth), oracles::derivative_m(w)))
                .unzip(),
            _ => {
                println!("no oracle curve for this operator; skipping multiplier estimates");
                return Ok(());
            }
        };
        let est = estimate_multiplier(last, &queries, cfg.bandwidth)?;
        let rows: Vec<String> = cfg
            .mhat_queries
            .iter()
            .zip(est.values.iter())
            .zip(&oracle_m)
            .map(|((q, v), m)| match v {
                Some(v) => format!("{},{},{}", fmt_f64(*q), fmt_f64(*v), fmt_f64(*m)),
                None => format!("{},,{}", fmt_f64(*q), fmt_f64(*m)),
            })
            .collect();
        out.write_csv(
            &format!("mhat_{label}.csv"),
            "parameter,estimate,oracle",
            &rows,
        )?;
        let svg = svg_chart(
            &format!("{label} multiplier estimates, n={}", last.n()),
            out.hash(),
            &[
                Series {
                    label: "estimate",
                    points: cfg
                        .mhat_queries
                        .iter()
                        .zip(&est.values)
                        .filter_map(|(&q, v)| v.map(|v| (q, v)))
                        .collect(),
                    color: "#1f77b4",
                    scatter: true,
                },
                Series {
                    label: "oracle",
                    points: cfg.mhat_queries.iter().copied().zip(oracle_m).collect(),
                    color: "#d62728",
                    scatter: false,
                },
            ],
        );
        out.write_svg(&format!("mhat_{label}.svg"), &svg)?;
        println!("wrote multiplier estimates for {} query points", cfg.mhat_queries.len());
    } else {
        println!("empty query list: wrote CDFs only");
    }

    // tail masses of the final scale, a cheap uniformity diagnostic
    let (_, scale) = levels.last().expect("at least one level");
    let rows: Vec<String> = (0..=scale.count().min(24))
        .map(|j| format!("{j},{}", fmt_f64(tail_mass(scale, j))))
        .collect();
    out.write_csv(&format!("tail_{label}.csv"), "j,tail_mass", &rows)?;
    Ok(())
}

fn cmd_verify(cfg: &RunConfig, out: &OutDir, only: Option<&str>) -> Result<i32> {
    let results = spectral_cube::acceptance::run_all(cfg.seed, only);
    if results.is_empty() {
        bail!("no criterion matches filter {only:?}");
    }
    let mut all_passed = true;
    let mut entries = Vec::new();
    for r in &results {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} ({}): {verdict}", r.id, r.name);
        for d in &r.details {
            println!("    {d}");
        }
        all_passed &= r.passed;
        entries.push(serde_json::json!({
            "id": r.id,
            "name": r.name,
            "passed": r.passed,
            "details": r.details,
        }));
    }
    let path = out.write_json("verify.json", &serde_json::Value::Array(entries))?;
    println!("wrote {}", path.display());
    Ok(if all_passed { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_roundtrip_and_hash_stability() {
        let cfg = RunConfig::default();
        let h1 = cfg.hash();
        let text = toml::to_string(&cfg).unwrap();
        let back: RunConfig = toml::from_str(&text).unwrap();
        assert_eq!(h1, back.hash());
    }

    #[test]
    fn config_rejects_unsorted_levels() {
        let cfg = RunConfig { levels: vec![4, 2], ..RunConfig::default() };
        assert!(cfg.validate().is_err());
    }
}
