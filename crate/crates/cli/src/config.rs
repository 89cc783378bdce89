//! JSON run configuration. Every object rejects unknown keys.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use fmbound::bound_functionals::{EigenvalueSequence, PhiSpec};
use fmbound::experiments::{doubling_schedule, Ensemble, ReportFormat, RunOptions};
use fmbound::group_models::load_irrep_table;
use fmbound::{BlockSymbol, Error, GroupModel, Result, C64};
use serde::Deserialize;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub model: Option<ModelSpec>,
    pub symbol: Option<SymbolSpec>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub b: Option<f64>,
    pub s: Option<f64>,
    pub phi: Option<PhiSpec>,
    pub experiment: Option<Experiment>,
    pub ensemble: Option<Ensemble>,
    pub eigenvalues: Option<EigenvalueSpec>,
    pub schedule: Option<ScheduleSpec>,
    #[serde(default)]
    pub options: RunOptions,
    pub out: Option<PathBuf>,
    pub format: Option<ReportFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    SharpnessL2,
    HausdorffYoung,
    Hyp,
    Multiplier,
    Comparison,
    Sobolev,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    /// `Z_{n1} × … × Z_{nk}` with counting measure.
    Abelian {
        orders: Vec<usize>,
    },
    /// `S3`, `D4`, `Q8` or `Z<N>`.
    Builtin {
        name: String,
    },
    /// Irrep table in JSON, validated on load.
    Table {
        path: PathBuf,
    },
    Torus {
        dim: usize,
        truncation: usize,
        #[serde(default)]
        grid: Option<usize>,
    },
    Su2 {
        max_two_l: u32,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

impl Scalar {
    fn value(&self) -> C64 {
        match *self {
            Scalar::Real(re) => C64::new(re, 0.0),
            Scalar::Complex([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SymbolSpec {
    Identity,
    Zero,
    Averaging,
    /// One scalar per dual block, each block a multiple of the identity.
    Diagonal {
        values: Vec<Scalar>,
    },
    /// Identity on `SU(2)` levels `2l ≤ max_two_l`.
    Projection {
        max_two_l: u32,
    },
    /// Block entries in the `label,row,col,re,im` layout.
    Csv {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EigenvalueSpec {
    /// `√(1 - Δ)` on `(R/period Z)^dim`.
    Torus {
        dim: usize,
        count: usize,
        #[serde(default = "unit_period")]
        period: f64,
    },
    /// `λ_k = k^{1/q}`.
    Synthetic { q: f64, count: usize },
    /// One eigenvalue per line, nondecreasing.
    Csv { path: PathBuf, hausdorff_dim: f64 },
}

fn unit_period() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ScheduleSpec {
    Explicit(Vec<usize>),
    Doubling { k_max: usize, doublings: u32 },
}

impl ScheduleSpec {
    pub fn resolve(&self) -> Vec<usize> {
        match self {
            ScheduleSpec::Explicit(ks) => ks.clone(),
            ScheduleSpec::Doubling { k_max, doublings } => doubling_schedule(*k_max, *doublings),
        }
    }
}

fn missing(what: &str) -> Error {
    Error::InvalidConfiguration(format!("config is missing `{what}`"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidConfiguration(format!("cannot read {}: {e}", path.display())))
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        serde_json::from_str(&read(path)?)
            .map_err(|e| Error::InvalidConfiguration(format!("{}: {e}", path.display())))
    }

    pub fn model(&self) -> Result<Arc<GroupModel>> {
        match self.model.as_ref().ok_or_else(|| missing("model"))? {
            ModelSpec::Abelian { orders } => GroupModel::finite_abelian(orders),
            ModelSpec::Builtin { name } => GroupModel::builtin(name),
            ModelSpec::Table { path } => {
                Ok(GroupModel::from_table(load_irrep_table(&read(path)?)?))
            }
            ModelSpec::Torus {
                dim,
                truncation,
                grid,
            } => GroupModel::torus(*dim, *truncation, *grid),
            ModelSpec::Su2 { max_two_l } => Ok(GroupModel::su2(*max_two_l)),
        }
    }

    pub fn symbol(&self, model: &Arc<GroupModel>) -> Result<BlockSymbol> {
        let model = model.clone();
        match self.symbol.as_ref().ok_or_else(|| missing("symbol"))? {
            SymbolSpec::Identity => Ok(BlockSymbol::identity(model)),
            SymbolSpec::Zero => Ok(BlockSymbol::zero(model)),
            SymbolSpec::Averaging => BlockSymbol::averaging(model),
            SymbolSpec::Diagonal { values } => {
                let values: Vec<C64> = values.iter().map(Scalar::value).collect();
                BlockSymbol::from_scalars(model, &values)
            }
            SymbolSpec::Projection { max_two_l } => BlockSymbol::su2_projection(model, *max_two_l),
            SymbolSpec::Csv { path } => BlockSymbol::read_csv(model, read(path)?.as_bytes()),
        }
    }

    pub fn exponent(&self, value: Option<f64>, name: &str) -> Result<f64> {
        value.ok_or_else(|| missing(name))
    }

    pub fn eigenvalues(&self) -> Result<EigenvalueSequence> {
        match self
            .eigenvalues
            .as_ref()
            .ok_or_else(|| missing("eigenvalues"))?
        {
            EigenvalueSpec::Torus { dim, count, period } => {
                EigenvalueSequence::torus_with_period(*dim, *count, *period)
            }
            EigenvalueSpec::Synthetic { q, count } => EigenvalueSequence::synthetic(*q, *count),
            EigenvalueSpec::Csv {
                path,
                hausdorff_dim,
            } => EigenvalueSequence::from_csv(read(path)?.as_bytes(), Some(*hausdorff_dim)),
        }
    }

    pub fn schedule(&self, available: usize) -> Vec<usize> {
        match &self.schedule {
            Some(spec) => spec.resolve(),
            None => doubling_schedule(available, 13),
        }
    }
}
