//! Seeded verification campaigns and their reports.
//!
//! Trial `i` of a run draws from the ChaCha stream `(seed, i)`, so trials can
//! run in parallel while the report stays byte-identical for a given seed.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bound_functionals::{
    compact_symbol_functional, comparison_pair, hyp_exponent, hyp_sides, level_set_functional,
    m_phi, sobolev_sup, EigenvalueSequence, PhiFunction, PhiSpec, ScalarSymbolData,
};
use crate::error::{Error, Result};
use crate::fourier::{fourier_transform, BlockSymbol, GroupFunction};
use crate::group_models::GroupModel;
use crate::norm_estimation::{estimate_pq_norm, exact_l2_norm, lp_norm, AscentOptions};
use crate::singular_values::{lorentz_norm, mu_from_spectrum, spectrum_of_symbol};
use crate::{conjugate_exponent, weak_exponent, C64};

pub const SCHEMA: &str = "fmbound/1";
pub const DEFAULT_C_SAFETY: f64 = 10.0;
pub const SHARPNESS_TOL: f64 = 1e-6;
pub const ENDPOINT_TOL: f64 = 1e-10;
pub const ATTAINMENT_TOL: f64 = 1e-4;
pub const COMPARISON_TOL: f64 = 1e-12;
/// Relative increment over the last doubling below which a trend stabilizes.
pub const STABILIZING_INCREMENT: f64 = 0.05;
/// Relative increment over the whole schedule above which a trend grows.
pub const GROWING_INCREMENT: f64 = 0.2;
pub const TREND_MARGIN: f64 = 0.1;

/// Options shared by every randomized run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunOptions {
    pub trials: usize,
    pub seed: u64,
    pub c_safety: f64,
    pub ascent: AscentOptions,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            trials: 100,
            seed: 0,
            c_safety: DEFAULT_C_SAFETY,
            ascent: AscentOptions::default(),
        }
    }
}

impl RunOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.c_safety >= 1.0 && self.c_safety.is_finite()) {
            return Err(Error::InvalidConfiguration(format!(
                "C_safety must be a finite number ≥ 1, got {}",
                self.c_safety
            )));
        }
        self.ascent.validate()
    }

    fn trial_rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        rng
    }

    fn ascent_for<R: Rng>(&self, rng: &mut R) -> AscentOptions {
        AscentOptions {
            seed: rng.random(),
            ..self.ascent.clone()
        }
    }
}

/// Random symbol families for the multiplier campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Ensemble {
    Identity,
    Averaging,
    /// Diagonal blocks, entries uniform in `[0, 1)` with a random phase.
    DiagonalUniform,
    /// Dense blocks with complex Gaussian entries.
    DenseGaussian,
    /// `(1 + r)^{-exponent}` times a random phase, where `r` is the frequency
    /// length on the torus and a random rank on finite duals.
    Decaying {
        exponent: f64,
    },
    /// Each block is the identity with probability `fraction`, else zero.
    Indicator {
        fraction: f64,
    },
}

impl Ensemble {
    fn validate(&self) -> Result<()> {
        match *self {
            Ensemble::Decaying { exponent } if !(exponent > 0.0 && exponent.is_finite()) => Err(
                Error::InvalidConfiguration("decaying ensemble needs a positive exponent".into()),
            ),
            Ensemble::Indicator { fraction } if !(0.0..=1.0).contains(&fraction) => Err(
                Error::InvalidConfiguration("indicator fraction must lie in [0, 1]".into()),
            ),
            _ => Ok(()),
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Ensemble::Identity => "identity",
            Ensemble::Averaging => "averaging",
            Ensemble::DiagonalUniform => "diagonal-uniform",
            Ensemble::DenseGaussian => "dense-gaussian",
            Ensemble::Decaying { .. } => "decaying",
            Ensemble::Indicator { .. } => "indicator",
        }
    }

    pub fn sample<R: Rng>(&self, model: &Arc<GroupModel>, rng: &mut R) -> Result<BlockSymbol> {
        let phase =
            |rng: &mut R| C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        match *self {
            Ensemble::Identity => Ok(BlockSymbol::identity(model.clone())),
            Ensemble::Averaging => BlockSymbol::averaging(model.clone()),
            Ensemble::DenseGaussian => Ok(BlockSymbol::random_dense(model.clone(), rng)),
            Ensemble::DiagonalUniform => BlockSymbol::from_fn(model.clone(), |_, d| {
                DMatrix::from_fn(d, d, |i, j| {
                    if i == j {
                        phase(rng) * rng.random::<f64>()
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
            }),
            Ensemble::Decaying { exponent } => {
                let radii: Vec<f64> = match model.torus_model() {
                    Some(torus) => torus
                        .frequencies()
                        .iter()
                        .map(|m| m.iter().map(|&k| (k * k) as f64).sum::<f64>().sqrt())
                        .collect(),
                    None => {
                        let mut ranks: Vec<f64> =
                            (0..model.dual_measure().len()).map(|r| r as f64).collect();
                        ranks.shuffle(rng);
                        ranks
                    }
                };
                BlockSymbol::from_fn(model.clone(), |i, d| {
                    DMatrix::identity(d, d) * (phase(rng) * (1.0 + radii[i]).powf(-exponent))
                })
            }
            Ensemble::Indicator { fraction } => BlockSymbol::from_fn(model.clone(), |_, d| {
                if rng.random::<f64>() < fraction {
                    DMatrix::identity(d, d)
                } else {
                    DMatrix::zeros(d, d)
                }
            }),
        }
    }
}

/// One trial: the quantity being bounded, its bound, and their ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRow {
    pub trial: usize,
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl TrialRow {
    fn new(trial: usize, label: impl Into<String>, lhs: f64, rhs: f64) -> Result<Self> {
        if lhs.is_nan() || rhs.is_nan() {
            return Err(Error::Numerical {
                label: format!("trial {trial}"),
                reason: format!("NaN in trial values (lhs = {lhs}, rhs = {rhs})"),
            });
        }
        let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
        Ok(TrialRow {
            trial,
            label: label.into(),
            lhs,
            rhs,
            ratio,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub tolerance: f64,
    pub checked: usize,
    pub violations: usize,
    pub first_violation: Option<usize>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub trials: usize,
    pub max_ratio: f64,
    pub mean_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Stabilizing,
    Growing,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendSummary {
    pub threshold: f64,
    pub last_increment: f64,
    pub total_increment: f64,
    pub classification: Trend,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<PhiSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<Ensemble>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub schema: &'static str,
    pub experiment: String,
    pub model: String,
    pub parameters: Parameters,
    pub seed: u64,
    pub c_safety: f64,
    pub rows: Vec<TrialRow>,
    pub aggregate: Aggregate,
    pub assertions: Vec<Assertion>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trend: Option<TrendSummary>,
    pub notes: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

impl BoundReport {
    fn new(experiment: &str, model: String, parameters: Parameters, opts: &RunOptions) -> Self {
        BoundReport {
            schema: SCHEMA,
            experiment: experiment.into(),
            model,
            parameters,
            seed: opts.seed,
            c_safety: opts.c_safety,
            rows: Vec::new(),
            aggregate: Aggregate {
                trials: 0,
                max_ratio: 0.0,
                mean_ratio: 0.0,
            },
            assertions: Vec::new(),
            trend: None,
            notes: Vec::new(),
            passed: true,
        }
    }

    /// Checks `holds` on the rows selected by `applies`.
    fn check(
        &mut self,
        name: &str,
        tolerance: f64,
        applies: impl Fn(&TrialRow) -> bool,
        holds: impl Fn(&TrialRow) -> bool,
    ) {
        let mut checked = 0;
        let mut violations = 0;
        let mut first_violation = None;
        for row in self.rows.iter().filter(|r| applies(r)) {
            checked += 1;
            if !holds(row) {
                violations += 1;
                first_violation.get_or_insert(row.trial);
            }
        }
        self.assertions.push(Assertion {
            name: name.into(),
            tolerance,
            checked,
            violations,
            first_violation,
            passed: violations == 0,
        });
    }

    fn finish(mut self) -> Self {
        let ratios: Vec<f64> = self.rows.iter().map(|r| r.ratio).collect();
        self.aggregate = Aggregate {
            trials: ratios.len(),
            max_ratio: ratios.iter().copied().fold(0.0, f64::max),
            mean_ratio: if ratios.is_empty() {
                0.0
            } else {
                ratios.iter().sum::<f64>() / ratios.len() as f64
            },
        };
        self.passed = self.assertions.iter().all(|a| a.passed);
        self
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    /// Per-trial rows: `trial,label,lhs,rhs,ratio`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        if self.rows.is_empty() {
            w.write_record(["trial", "label", "lhs", "rhs", "ratio"])?;
        }
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn render(&self, format: ReportFormat) -> Result<Vec<u8>> {
        match format {
            ReportFormat::Json => Ok(self.to_json()?.into_bytes()),
            ReportFormat::Csv => {
                let mut buf = Vec::new();
                self.write_csv(&mut buf)?;
                Ok(buf)
            }
        }
    }

    /// Writes to a sibling temporary file, then renames it into place.
    pub fn write_atomic(&self, path: &Path, format: ReportFormat) -> Result<()> {
        write_atomic(path, &self.render(format)?)
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Runs `trial` for `0..count` in parallel and returns the rows in order,
/// failing on the lowest-indexed error.
fn run_trials(
    count: usize,
    trial: impl Fn(usize) -> Result<TrialRow> + Sync + Send,
) -> Result<Vec<TrialRow>> {
    let results: Vec<Result<TrialRow>> = (0..count).into_par_iter().map(trial).collect();
    results.into_iter().collect()
}

fn check_finite_model(model: &GroupModel) -> Result<()> {
    model.function_len().map(|_| ())
}

/// `‖A‖_{2→2}` estimated by ascent against the exact largest singular value,
/// which must also equal `sup_t μ_t(A)`. Trial 0 is the zero symbol.
pub fn run_sharpness_l2(model: &Arc<GroupModel>, opts: &RunOptions) -> Result<BoundReport> {
    opts.validate()?;
    check_finite_model(model)?;
    let params = Parameters {
        p: Some(2.0),
        q: Some(2.0),
        ..Parameters::default()
    };
    let mut report = BoundReport::new("sharpness-l2", model.descriptor(), params, opts);
    let sup_mu_matches = std::sync::Mutex::new(Vec::new());
    report.rows = run_trials(opts.trials + 1, |i| {
        let mut rng = opts.trial_rng(i);
        let (label, sigma) = if i == 0 {
            ("zero", BlockSymbol::zero(model.clone()))
        } else {
            (
                "dense-gaussian",
                BlockSymbol::random_dense(model.clone(), &mut rng),
            )
        };
        let est = estimate_pq_norm(&sigma, 2.0, 2.0, &opts.ascent_for(&mut rng))?.value;
        let exact = exact_l2_norm(&sigma)?;
        let sup_mu = mu_from_spectrum(&spectrum_of_symbol(&sigma)?).sup();
        if sup_mu != exact {
            sup_mu_matches.lock().expect("poisoned").push(i);
        }
        TrialRow::new(i, label, est, exact)
    })?;
    let mismatches = sup_mu_matches.into_inner().expect("poisoned");
    report.check(
        "estimate-matches-exact",
        SHARPNESS_TOL,
        |_| true,
        |r| (r.lhs - r.rhs).abs() <= SHARPNESS_TOL,
    );
    report.check(
        "exact-equals-sup-mu",
        0.0,
        |_| true,
        |r| !mismatches.contains(&r.trial),
    );
    Ok(report.finish())
}

/// `‖L_f‖_{L^{p'}(VN)} ≤ ‖f‖_{L^p}` on random functions, with `f = δ_e` as
/// trial 0 (equality).
pub fn run_hausdorff_young(
    model: &Arc<GroupModel>,
    p: f64,
    opts: &RunOptions,
) -> Result<BoundReport> {
    opts.validate()?;
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::InvalidConfiguration(format!(
            "Hausdorff-Young needs 1 < p ≤ 2, got {p}"
        )));
    }
    check_finite_model(model)?;
    let pc = conjugate_exponent(p);
    let params = Parameters {
        p: Some(p),
        q: Some(pc),
        ..Parameters::default()
    };
    let mut report = BoundReport::new("hausdorff-young", model.descriptor(), params, opts);
    let has_delta = model.finite_table().is_some();
    report.rows = run_trials(opts.trials + has_delta as usize, |i| {
        let (label, f) = if has_delta && i == 0 {
            ("delta", GroupFunction::delta(model.clone())?)
        } else {
            (
                "random",
                GroupFunction::random(model.clone(), &mut opts.trial_rng(i))?,
            )
        };
        let mu = mu_from_spectrum(&spectrum_of_symbol(&fourier_transform(&f)?)?);
        TrialRow::new(i, label, lorentz_norm(&mu, pc, pc)?, lp_norm(&f, p)?)
    })?;
    report.check(
        "hausdorff-young",
        ENDPOINT_TOL,
        |_| true,
        |r| r.lhs <= r.rhs + ENDPOINT_TOL,
    );
    if has_delta {
        report.check(
            "delta-saturation",
            ENDPOINT_TOL,
            |r| r.label == "delta",
            |r| (r.ratio - 1.0).abs() <= ENDPOINT_TOL,
        );
    }
    if p == 2.0 {
        report.check(
            "plancherel-equality",
            ENDPOINT_TOL,
            |_| true,
            |r| (r.ratio - 1.0).abs() <= ENDPOINT_TOL,
        );
    }
    Ok(report.finish())
}

/// Hausdorff-Young-Paley sides on random functions (trial 0 is `δ_e`).
pub fn run_hyp(
    model: &Arc<GroupModel>,
    phi: &PhiFunction,
    p: f64,
    b: f64,
    opts: &RunOptions,
) -> Result<BoundReport> {
    opts.validate()?;
    let e = hyp_exponent(p, b).map_err(|err| Error::InvalidConfiguration(err.to_string()))?;
    let m = m_phi(phi);
    if !m.is_finite() {
        return Err(Error::InvalidConfiguration(
            "M_phi infinite for the chosen phi".into(),
        ));
    }
    if model.finite_table().is_none() {
        return Err(Error::UnsupportedModel(
            "HYP runs need a finite group".into(),
        ));
    }
    let params = Parameters {
        p: Some(p),
        b: Some(b),
        phi: Some(phi.to_spec()),
        ..Parameters::default()
    };
    let mut report = BoundReport::new("hyp", model.descriptor(), params, opts);
    report.notes.push(format!("M_phi = {m}"));
    report.rows = run_trials(opts.trials + 1, |i| {
        let (label, f) = if i == 0 {
            ("delta", GroupFunction::delta(model.clone())?)
        } else {
            (
                "random",
                GroupFunction::random(model.clone(), &mut opts.trial_rng(i))?,
            )
        };
        let sides = hyp_sides(&f, phi, p, b)?;
        TrialRow::new(i, label, sides.lhs, sides.rhs())
    })?;
    report.check("finite-ratios", 0.0, |_| true, |r| r.ratio.is_finite());
    let c = opts.c_safety;
    report.check("hyp-safety", c, |_| true, |r| r.ratio <= c);
    if e == 0.0 {
        report.check(
            "hausdorff-young-endpoint",
            ENDPOINT_TOL,
            |_| true,
            |r| r.ratio <= 1.0 + ENDPOINT_TOL,
        );
        report.check(
            "delta-saturation",
            ENDPOINT_TOL,
            |r| r.label == "delta",
            |r| (r.ratio - 1.0).abs() <= ENDPOINT_TOL,
        );
    }
    Ok(report.finish())
}

/// Multiplier bound: ascent estimate of `‖A‖_{p→q}` against the level-set
/// functional (abelian) or the compact-dual functional (nonabelian).
pub fn run_multiplier_verification(
    model: &Arc<GroupModel>,
    ensemble: &Ensemble,
    p: f64,
    q: f64,
    opts: &RunOptions,
) -> Result<BoundReport> {
    opts.validate()?;
    ensemble.validate()?;
    if !(p > 1.0 && p <= 2.0 && q >= 2.0 && q.is_finite()) {
        return Err(Error::InvalidConfiguration(format!(
            "multiplier runs need 1 < p ≤ 2 ≤ q < ∞, got p = {p}, q = {q}"
        )));
    }
    check_finite_model(model)?;
    let params = Parameters {
        p: Some(p),
        q: Some(q),
        ensemble: Some(ensemble.clone()),
        ..Parameters::default()
    };
    let mut report = BoundReport::new("multiplier", model.descriptor(), params, opts);
    let abelian = model.is_abelian();
    report.notes.push(
        if abelian {
            "bound: level-set functional"
        } else {
            "bound: compact-dual functional"
        }
        .into(),
    );
    report.rows = run_trials(opts.trials, |i| {
        let mut rng = opts.trial_rng(i);
        let sigma = ensemble.sample(model, &mut rng)?;
        let bound = if abelian {
            level_set_functional(&ScalarSymbolData::from_symbol(&sigma)?, p, q)?
        } else {
            compact_symbol_functional(&sigma, p, q)?
        };
        let est = estimate_pq_norm(&sigma, p, q, &opts.ascent_for(&mut rng))?.value;
        TrialRow::new(i, ensemble.label(), est, bound)
    })?;
    let c = opts.c_safety;
    report.check(
        "safety",
        c,
        |_| true,
        |r| r.lhs <= c * r.rhs + COMPARISON_TOL,
    );
    if *ensemble == Ensemble::Averaging {
        report.check(
            "attainment",
            ATTAINMENT_TOL,
            |_| true,
            |r| (r.ratio - 1.0).abs() <= ATTAINMENT_TOL,
        );
    }
    Ok(report.finish())
}

/// Weak-norm versus `Σ d²` functional on the truncated `SU(2)` dual. Rows
/// start with the level projections (equality), then zero, then random blocks.
pub fn run_comparison(max_two_l: u32, p: f64, q: f64, opts: &RunOptions) -> Result<BoundReport> {
    opts.validate()?;
    if p == q {
        return Err(Error::InvalidConfiguration(
            "the comparison needs p ≠ q".into(),
        ));
    }
    let model = GroupModel::su2(max_two_l);
    let params = Parameters {
        p: Some(p),
        q: Some(q),
        r: Some(1.0 / weak_exponent(p, q)),
        ..Parameters::default()
    };
    let mut report = BoundReport::new("comparison", model.descriptor(), params, opts);
    let projections = max_two_l as usize + 1;
    report.rows = run_trials(projections + 1 + opts.trials, |i| {
        let (label, sigma) = if i < projections {
            (
                "projection".to_string(),
                BlockSymbol::su2_projection(model.clone(), i as u32)?,
            )
        } else if i == projections {
            ("zero".to_string(), BlockSymbol::zero(model.clone()))
        } else {
            let mut rng = opts.trial_rng(i);
            (
                "dense-gaussian".to_string(),
                BlockSymbol::random_dense(model.clone(), &mut rng),
            )
        };
        let (lhs, rhs) = comparison_pair(&sigma, p, q)
            .map_err(|err| Error::InvalidConfiguration(err.to_string()))?;
        TrialRow::new(i, label, lhs, rhs)
    })?;
    report.check(
        "comparison",
        COMPARISON_TOL,
        |_| true,
        |r| r.lhs <= r.rhs + COMPARISON_TOL * r.rhs.max(1.0),
    );
    report.check(
        "projection-equality",
        COMPARISON_TOL,
        |r| r.label == "projection",
        |r| (r.lhs - r.rhs).abs() <= COMPARISON_TOL * r.rhs.max(1.0),
    );
    Ok(report.finish())
}

/// `⌊k_max / 2^j⌋` for `j = doublings, …, 0`.
pub fn doubling_schedule(k_max: usize, doublings: u32) -> Vec<usize> {
    (0..=doublings).rev().map(|j| (k_max >> j).max(1)).collect()
}

pub fn classify_trend(values: &[f64]) -> (Trend, f64, f64) {
    let n = values.len();
    if n < 2 || values[0] <= 0.0 {
        return (Trend::Indeterminate, 0.0, 0.0);
    }
    let last = values[n - 1] / values[n - 2] - 1.0;
    let total = values[n - 1] / values[0] - 1.0;
    let trend = if total > GROWING_INCREMENT {
        Trend::Growing
    } else if last < STABILIZING_INCREMENT {
        Trend::Stabilizing
    } else {
        Trend::Indeterminate
    };
    (trend, last, total)
}

/// `max_{k ≤ K} k^{1/p-1/q} λ_k^{-s}` along an increasing schedule of `K`,
/// classified against the threshold `s = Q (1/p - 1/q)`.
pub fn run_sobolev_trend(
    lambda: &EigenvalueSequence,
    s: f64,
    p: f64,
    q: f64,
    schedule: &[usize],
) -> Result<BoundReport> {
    let config = |msg: String| Error::InvalidConfiguration(msg);
    let dim = lambda
        .hausdorff_dim()
        .ok_or_else(|| config("the eigenvalue source has no Hausdorff dimension".into()))?;
    if schedule.is_empty() || schedule.windows(2).any(|w| w[1] <= w[0]) || schedule[0] == 0 {
        return Err(config(
            "the K schedule must be positive and strictly increasing".into(),
        ));
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(config(format!(
            "s must be a finite nonnegative number, got {s}"
        )));
    }
    let k_max = *schedule.last().expect("nonempty");
    if k_max > lambda.len() {
        return Err(config(format!(
            "K = {k_max} exceeds the {} available eigenvalues",
            lambda.len()
        )));
    }
    let phi = PhiFunction::Reciprocal { alpha: s };
    let values = schedule
        .iter()
        .map(|&k| sobolev_sup(lambda, &phi, p, q, k))
        .collect::<Result<Vec<_>>>()
        .map_err(|err| config(err.to_string()))?;
    let opts = RunOptions {
        trials: schedule.len(),
        ..RunOptions::default()
    };
    let params = Parameters {
        p: Some(p),
        q: Some(q),
        s: Some(s),
        schedule: Some(schedule.to_vec()),
        ..Parameters::default()
    };
    let mut report = BoundReport::new("sobolev", format!("eigenvalues Q={dim}"), params, &opts);
    for (i, (&k, &v)) in schedule.iter().zip(&values).enumerate() {
        report
            .rows
            .push(TrialRow::new(i, format!("K={k}"), v, values[0])?);
    }
    let threshold = dim * weak_exponent(p, q);
    let (classification, last, total) = classify_trend(&values);
    report.trend = Some(TrendSummary {
        threshold,
        last_increment: last,
        total_increment: total,
        classification,
    });
    let expected = if s >= threshold + TREND_MARGIN {
        Some(Trend::Stabilizing)
    } else if s <= threshold - TREND_MARGIN {
        Some(Trend::Growing)
    } else {
        report.notes.push(format!(
            "boundary case: s within {TREND_MARGIN} of the threshold"
        ));
        None
    };
    if let Some(expected) = expected {
        let name = match expected {
            Trend::Growing => "growing",
            _ => "stabilizing",
        };
        let ok = classification == expected;
        report.assertions.push(Assertion {
            name: name.into(),
            tolerance: TREND_MARGIN,
            checked: 1,
            violations: (!ok) as usize,
            first_violation: (!ok).then_some(schedule.len() - 1),
            passed: ok,
        });
    }
    Ok(report.finish())
}
