//! Run configuration and operator spec files (TOML).
//!
//! A run config pins everything a command needs: the operator, the level
//! list, the truncation depth, dictionary and diagnostic parameters, the
//! output directory and the seed. Every output file records the hash of the
//! effective config so artifacts can be traced back to their inputs.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use spectral_cube::linalg::{AmbientVector, Field, HermitianMatrix};
use spectral_cube::operators::{GraphSequence, OperatorKind, OperatorSpec};
use spectral_cube::Scalar;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// "shift", "derivative", or a path to an operator spec file.
    pub operator: String,
    /// Level indices, strictly increasing.
    pub levels: Vec<usize>,
    /// Cube truncation depth.
    pub depth: usize,
    /// Coordinate range of the test-function dictionary.
    pub dict_range: usize,
    /// Maximum monomial degree of the dictionary.
    pub dict_degree: usize,
    /// Radius for limit-set estimation.
    pub epsilon: f64,
    /// Kernel bandwidth for multiplier estimation.
    pub bandwidth: f64,
    /// Levels required to confirm limit-set representatives.
    pub window: Vec<usize>,
    /// Multiplier query points (curve parameters). Empty list skips the
    /// multiplier output.
    pub mhat_queries: Vec<f64>,
    pub out_dir: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            operator: "shift".into(),
            levels: vec![1, 2, 4, 8, 16, 32, 64, 128],
            depth: 16,
            dict_range: 6,
            dict_degree: 2,
            epsilon: 0.05,
            bandwidth: 0.02,
            window: vec![64, 128],
            mhat_queries: vec![0.0, 0.125, 0.25, 0.375, 0.5],
            out_dir: PathBuf::from("out"),
            seed: 7,
        }
    }
}

impl RunConfig {
    pub fn default_for(operator: &str) -> Self {
        let mut cfg = RunConfig { operator: operator.into(), ..RunConfig::default() };
        if operator == "derivative" {
            cfg.levels = vec![2, 3, 4, 5];
            cfg.window = vec![3, 4, 5];
            cfg.bandwidth = 0.01;
            cfg.mhat_queries = vec![-1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0];
        }
        cfg
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: RunConfig = toml::from_str(&text).context("parsing config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() {
            bail!("config needs at least one level");
        }
        if !self.levels.windows(2).all(|w| w[0] < w[1]) {
            bail!("levels must be strictly increasing: {:?}", self.levels);
        }
        if self.depth < 4 {
            bail!("depth must be at least 4");
        }
        if !(self.epsilon > 0.0) || !(self.bandwidth > 0.0) {
            bail!("epsilon and bandwidth must be positive");
        }
        Ok(())
    }

    /// FNV-1a fingerprint of the canonical serialized config. The output
    /// directory is not part of the fingerprint: it names where results go,
    /// not what they are.
    pub fn hash(&self) -> String {
        let canonical = RunConfig { out_dir: PathBuf::new(), ..self.clone() };
        let text = toml::to_string(&canonical).expect("config serializes");
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{h:016x}")
    }

    /// Short operator label used in file names.
    pub fn label(&self) -> String {
        match self.operator.as_str() {
            "shift" => "shift".into(),
            "derivative" => "derivative".into(),
            path => Path::new(path)
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "operator".into()),
        }
    }

    pub fn operator_spec(&self) -> Result<OperatorSpec<f64>> {
        match self.operator.as_str() {
            "shift" => Ok(OperatorSpec::new(OperatorKind::Shift, Field::Complex)?),
            "derivative" => Ok(OperatorSpec::new(OperatorKind::Derivative, Field::Complex)?),
            path => OperatorFile::load(Path::new(path))?.into_spec(),
        }
    }
}

/// Declarative description of a user operator.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    /// "shift" | "derivative" | "generic" | "matrix"
    pub kind: String,
    /// "real" | "complex"
    pub field: String,
    pub generic: Option<GenericSection>,
    pub matrix: Option<MatrixSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericSection {
    pub realization: String,
    pub dim: usize,
    /// Pairs `(g_k, A g_k)` as lists of `[re, im]` coordinates.
    pub pairs: Vec<GraphPair>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphPair {
    pub g: Vec<[f64; 2]>,
    pub ag: Vec<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSection {
    pub realization: String,
    pub dim: usize,
    /// Row-major complex entries as `[re, im]`.
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl OperatorFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading operator spec {}", path.display()))?;
        toml::from_str(&text).context("parsing operator spec")
    }

    pub fn into_spec(self) -> Result<OperatorSpec<f64>> {
        let field = match self.field.as_str() {
            "real" => Field::Real,
            "complex" => Field::Complex,
            other => bail!("unknown field `{other}` (use \"real\" or \"complex\")"),
        };
        let kind = match self.kind.as_str() {
            "shift" => OperatorKind::Shift,
            "derivative" => OperatorKind::Derivative,
            "generic" => {
                let sec = self.generic.context("generic operator needs a [generic] section")?;
                let realization: Arc<str> = sec.realization.as_str().into();
                let mut pairs = Vec::with_capacity(sec.pairs.len());
                for (idx, p) in sec.pairs.iter().enumerate() {
                    if p.g.len() != sec.dim || p.ag.len() != sec.dim {
                        bail!("pair {} has wrong dimension (expected {})", idx + 1, sec.dim);
                    }
                    let g = AmbientVector::new(to_complex(&p.g), field, realization.clone());
                    let ag = AmbientVector::new(to_complex(&p.ag), field, realization.clone());
                    pairs.push((g, ag));
                }
                OperatorKind::Generic(GraphSequence::new(pairs, "user-supplied graph pairs")?)
            }
            "matrix" => {
                let sec = self.matrix.context("matrix operator needs a [matrix] section")?;
                if sec.entries.len() != sec.dim {
                    bail!("matrix needs {} rows", sec.dim);
                }
                let mut entries = Vec::with_capacity(sec.dim * sec.dim);
                for row in &sec.entries {
                    if row.len() != sec.dim {
                        bail!("matrix rows must have {} entries", sec.dim);
                    }
                    entries.extend(row.iter().map(|&[re, im]| Scalar::new(re, im)));
                }
                OperatorKind::UserMatrix {
                    matrix: HermitianMatrix::new(entries, sec.dim)?,
                    realization: sec.realization.as_str().into(),
                }
            }
            other => bail!("unknown operator kind `{other}`"),
        };
        Ok(OperatorSpec::new(kind, field)?)
    }
}

fn to_complex(raw: &[[f64; 2]]) -> Vec<Scalar> {
    raw.iter().map(|&[re, im]| Scalar::new(re, im)).collect()
}
