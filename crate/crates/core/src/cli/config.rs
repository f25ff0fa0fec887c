//! Flat TOML run configuration.
//!
//! ```toml
//! version = 1
//! name = "my-lasso"
//! signal = "sparse"   # sparse | piecewise | saturated | block | lowrank
//! m = 48
//! n = 128
//! sparsity = 8
//! seed = 7
//! gamma = "auto"      # auto | inv-beta | optimal | <factor of 1/beta>
//! ```
//!
//! An explicit instance replaces the generated one with `matrix` (rows),
//! `observations`, `regularizer` and `lambda`. Rate predictions without an
//! instance use `predict_regime` with the constants of that regime and
//! `gammas`.

use std::path::Path;

use serde::Deserialize;

use crate::analysis::Regime;
use crate::error::{Error, Result};
use crate::harness::{builtin, ExperimentSpec, GammaPolicy, Instance, OperatorModel, SignalModel};
use crate::linalg::{DenseMatrix, DenseVector};
use crate::regularizers::Regularizer;
use crate::smooth::SmoothTerm;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GammaValue {
    Policy(String),
    Factor(f64),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    pub name: Option<String>,
    /// Start from a builtin spec and override the given fields.
    pub builtin: Option<String>,
    pub signal: Option<String>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub sparsity: Option<usize>,
    pub jumps: Option<usize>,
    pub saturation: Option<usize>,
    pub block_size: Option<usize>,
    pub active_blocks: Option<usize>,
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub rank: Option<usize>,
    pub operator: Option<String>,
    pub kernel_sigma: Option<f64>,
    pub delta: Option<f64>,
    pub lambda: Option<f64>,
    pub lambda_scale: Option<f64>,
    pub seed: Option<u64>,
    pub gamma: Option<GammaValue>,
    pub max_iters: Option<usize>,
    pub reference_max_iters: Option<usize>,
    pub record_every: Option<usize>,
    pub stop_tol: Option<f64>,
    pub zero_tol: Option<f64>,
    pub multistart: Option<usize>,
    pub x0: Option<Vec<f64>>,
    pub out: Option<String>,
    pub plot: Option<bool>,

    pub matrix: Option<Vec<Vec<f64>>>,
    pub observations: Option<Vec<f64>>,
    pub regularizer: Option<String>,

    pub predict_regime: Option<String>,
    pub alpha: Option<f64>,
    pub nu: Option<f64>,
    pub beta: Option<f64>,
    pub sigma_m: Option<f64>,
    #[serde(rename = "sigma_M")]
    pub sigma_big: Option<f64>,
    pub sigma_max: Option<f64>,
    pub gammas: Option<Vec<f64>>,
}

/// What a configuration describes.
#[derive(Debug, Clone)]
pub enum Problem {
    Generated(ExperimentSpec),
    Explicit { instance: Instance, spec: ExperimentSpec },
}

impl Problem {
    pub fn spec(&self) -> &ExperimentSpec {
        match self {
            Problem::Generated(s) => s,
            Problem::Explicit { spec, .. } => spec,
        }
    }

    pub fn spec_mut(&mut self) -> &mut ExperimentSpec {
        match self {
            Problem::Generated(s) => s,
            Problem::Explicit { spec, .. } => spec,
        }
    }
}

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| cfg_err(e.to_string()))?;
        if cfg.version != CONFIG_VERSION {
            return Err(cfg_err(format!(
                "unsupported config version {} (this build reads version {CONFIG_VERSION})",
                cfg.version
            )));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| cfg_err(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn gamma_policy(&self) -> Result<Option<GammaPolicy>> {
        match &self.gamma {
            None => Ok(None),
            Some(GammaValue::Policy(s)) => GammaPolicy::parse(s).map(Some),
            Some(GammaValue::Factor(c)) => GammaPolicy::parse(&c.to_string()).map(Some),
        }
    }

    fn signal_model(&self, base: Option<&SignalModel>) -> Result<SignalModel> {
        let need = |v: Option<usize>, key: &str| v.ok_or_else(|| cfg_err(format!("signal needs `{key}`")));
        let kind = match (&self.signal, base) {
            (Some(s), _) => s.as_str(),
            (None, Some(b)) => b.label(),
            (None, None) => return Err(cfg_err("missing `signal`")),
        };
        // fields of the base model act as defaults
        let base_val = |f: fn(&SignalModel) -> Option<usize>| base.and_then(f);
        Ok(match kind {
            "sparse" => SignalModel::Sparse {
                sparsity: need(self.sparsity.or(base_val(|b| match b {
                    SignalModel::Sparse { sparsity } => Some(*sparsity),
                    _ => None,
                })), "sparsity")?,
            },
            "piecewise" => SignalModel::PiecewiseConstant {
                jumps: need(self.jumps.or(base_val(|b| match b {
                    SignalModel::PiecewiseConstant { jumps } => Some(*jumps),
                    _ => None,
                })), "jumps")?,
            },
            "saturated" => SignalModel::Saturated {
                count: need(self.saturation.or(base_val(|b| match b {
                    SignalModel::Saturated { count } => Some(*count),
                    _ => None,
                })), "saturation")?,
            },
            "block" => SignalModel::BlockSparse {
                block_size: need(self.block_size.or(base_val(|b| match b {
                    SignalModel::BlockSparse { block_size, .. } => Some(*block_size),
                    _ => None,
                })), "block_size")?,
                active_blocks: need(self.active_blocks.or(base_val(|b| match b {
                    SignalModel::BlockSparse { active_blocks, .. } => Some(*active_blocks),
                    _ => None,
                })), "active_blocks")?,
            },
            "lowrank" => SignalModel::LowRank {
                rows: need(self.rows.or(base_val(|b| match b {
                    SignalModel::LowRank { rows, .. } => Some(*rows),
                    _ => None,
                })), "rows")?,
                cols: need(self.cols.or(base_val(|b| match b {
                    SignalModel::LowRank { cols, .. } => Some(*cols),
                    _ => None,
                })), "cols")?,
                rank: need(self.rank.or(base_val(|b| match b {
                    SignalModel::LowRank { rank, .. } => Some(*rank),
                    _ => None,
                })), "rank")?,
            },
            other => return Err(cfg_err(format!("unknown signal {other:?}"))),
        })
    }

    fn apply_options(&self, spec: &mut ExperimentSpec) -> Result<()> {
        if let Some(name) = &self.name {
            spec.name = name.clone();
        }
        if let Some(s) = self.seed {
            spec.seed = s;
        }
        if let Some(d) = self.delta {
            spec.delta = Some(d);
        }
        if let Some(l) = self.lambda {
            spec.lambda = Some(l);
        }
        if let Some(s) = self.lambda_scale {
            spec.lambda_scale = s;
        }
        let o = &mut spec.options;
        if let Some(g) = self.gamma_policy()? {
            o.gamma = g;
        }
        if let Some(v) = self.max_iters {
            o.max_iters = v;
        }
        if let Some(v) = self.reference_max_iters {
            o.reference_max_iters = v;
        }
        if let Some(v) = self.record_every {
            o.record_every = v;
        }
        if let Some(v) = self.stop_tol {
            o.stop_tol = Some(v);
        }
        if let Some(v) = self.zero_tol {
            o.zero_tol = Some(v);
        }
        if let Some(v) = self.multistart {
            o.multistart = v;
        }
        if let Some(x0) = &self.x0 {
            o.x0 = Some(DenseVector::from_vec(x0.clone()));
        }
        Ok(())
    }

    fn explicit_regularizer(&self, n: usize, lambda: f64) -> Result<Regularizer> {
        let name = self.regularizer.as_deref().ok_or_else(|| cfg_err("explicit instance needs `regularizer`"))?;
        match name {
            "l1" => Regularizer::l1(lambda),
            "tv1d" => Regularizer::tv1d(lambda),
            "linf" => Regularizer::linf(lambda),
            "group-l1l2" => {
                let bs = self.block_size.ok_or_else(|| cfg_err("group-l1l2 needs `block_size`"))?;
                Regularizer::group_contiguous(n, bs, lambda)
            }
            "nuclear" => {
                let rows = self.rows.ok_or_else(|| cfg_err("nuclear needs `rows`"))?;
                let cols = self.cols.ok_or_else(|| cfg_err("nuclear needs `cols`"))?;
                Regularizer::nuclear(rows, cols, lambda)
            }
            other => Err(cfg_err(format!("unknown regularizer {other:?}"))),
        }
    }

    /// Resolves the configuration into an experiment or explicit instance.
    pub fn problem(&self) -> Result<Problem> {
        if let Some(rows) = &self.matrix {
            let m = rows.len();
            let n = rows.first().map(|r| r.len()).unwrap_or(0);
            if m == 0 || n == 0 || rows.iter().any(|r| r.len() != n) {
                return Err(cfg_err("`matrix` must be a non-empty list of equal-length rows"));
            }
            let flat: Vec<f64> = rows.iter().flatten().cloned().collect();
            let a = DenseMatrix::from_row_slice(m, n, &flat);
            let y = DenseVector::from_vec(
                self.observations.clone().ok_or_else(|| cfg_err("explicit instance needs `observations`"))?,
            );
            let lambda = self.lambda.ok_or_else(|| cfg_err("explicit instance needs `lambda`"))?;
            let j = self.explicit_regularizer(n, lambda)?;
            let f = SmoothTerm::least_squares(a, y)?;
            let name = self.name.clone().unwrap_or_else(|| "instance".into());
            // placeholder spec carrying the run options
            let mut spec = ExperimentSpec::new(&name, SignalModel::Sparse { sparsity: 0 }, m, n, self.seed.unwrap_or(0));
            self.apply_options(&mut spec)?;
            let instance = Instance { name, f, j, x_true: None, delta: 0.0 };
            return Ok(Problem::Explicit { instance, spec });
        }
        let mut spec = match &self.builtin {
            Some(b) => builtin(b, None)?,
            None => {
                let name = self.name.clone().unwrap_or_else(|| "experiment".into());
                let signal = self.signal_model(None)?;
                let n = match signal {
                    SignalModel::LowRank { rows, cols, .. } => self.n.unwrap_or(rows * cols),
                    _ => self.n.ok_or_else(|| cfg_err("missing `n`"))?,
                };
                let m = self.m.unwrap_or(n);
                ExperimentSpec::new(&name, signal, m, n, 0)
            }
        };
        if self.builtin.is_some() {
            spec.signal = self.signal_model(Some(&spec.signal))?;
            if let Some(n) = self.n {
                spec.n = n;
            } else if let SignalModel::LowRank { rows, cols, .. } = spec.signal {
                spec.n = rows * cols;
            }
            if let Some(m) = self.m {
                spec.m = m;
            }
        }
        match self.operator.as_deref() {
            None => {}
            Some("gaussian") => spec.operator = OperatorModel::Gaussian,
            Some("blur") => {
                spec.operator = OperatorModel::Blur { kernel_sigma: self.kernel_sigma.unwrap_or(2.0) };
                spec.m = spec.n;
            }
            Some(other) => return Err(cfg_err(format!("unknown operator {other:?}"))),
        }
        if let (Some(s), OperatorModel::Blur { .. }) = (self.kernel_sigma, &spec.operator) {
            spec.operator = OperatorModel::Blur { kernel_sigma: s };
        }
        self.apply_options(&mut spec)?;
        spec.validate()?;
        Ok(Problem::Generated(spec))
    }

    pub fn regime(&self) -> Result<Option<Regime>> {
        match &self.predict_regime {
            None => Ok(None),
            Some(s) => Regime::parse(s).map(Some).ok_or_else(|| cfg_err(format!("unknown regime {s:?}"))),
        }
    }
}
