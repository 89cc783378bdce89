//! `L^p` norms on models and lower bounds for `‖A‖_{L^p → L^q}`.
//!
//! The estimator is Boyd's nonlinear power method: with the duality map
//! `J_r(y) = |y|^{r-2} y` (and `0 ↦ 0`), iterate
//! `x ← J_{p'}(A* J_q(A x))` normalized in `L^p`. For `p ≤ q` the ratio
//! `‖Ax‖_q / ‖x‖_p` increases monotonically along the iteration. Every
//! returned value is the ratio of an explicit function, so it never exceeds
//! the true norm.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{apply_multiplier, inverse_transform, BlockSymbol, GroupFunction};
use crate::group_models::GroupModel;
use crate::singular_values::block_singular_values;
use crate::{conjugate_exponent, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AscentOptions {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Stop when the ratio changes by less than this, relatively.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        AscentOptions {
            restarts: 20,
            max_iterations: 500,
            tolerance: 1e-8,
            seed: 0,
        }
    }
}

impl AscentOptions {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iterations == 0 {
            return Err(Error::invalid(
                "restarts and max_iterations must be positive",
            ));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("ascent tolerance must be positive"));
        }
        Ok(())
    }
}

/// Outcome of [`estimate_pq_norm`].
#[derive(Debug, Clone)]
pub struct PqEstimate {
    /// Best ratio `‖Af‖_q / ‖f‖_p` found.
    pub value: f64,
    /// Start that produced it: 0 is the spectral start, `1..=restarts` random.
    pub best_start: usize,
    pub iterations: usize,
    /// Whether the best start met the tolerance within the iteration budget.
    pub converged: bool,
    /// The maximizing function, normalized in `L^p`.
    pub argmax: GroupFunction,
}

/// `(∫ |f|^p)^{1/p}` with the model's quadrature weights; `p = ∞` is the max.
pub fn lp_norm(f: &GroupFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::invalid(format!("L^p norm needs p ≥ 1, got {p}")));
    }
    Ok(lp_norm_raw(f.values(), p, f.model().point_weight()?))
}

fn lp_norm_raw(values: &[C64], p: f64, weight: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let sum: f64 = if p == 2.0 {
        values.iter().map(|v| v.norm_sqr()).sum()
    } else {
        values.iter().map(|v| v.norm().powf(p)).sum()
    };
    (sum * weight).powf(1.0 / p)
}

/// `‖A‖_{2→2} = sup_t μ_t(A)`: the largest singular value over all blocks.
pub fn exact_l2_norm(sigma: &BlockSymbol) -> Result<f64> {
    let mut best = 0.0f64;
    for (b, m) in sigma.model().dual_measure().iter().zip(sigma.blocks()) {
        best = best.max(block_singular_values(m, &b.label)?[0]);
    }
    Ok(best)
}

pub fn adjoint_symbol(sigma: &BlockSymbol) -> BlockSymbol {
    sigma.adjoint()
}

/// `J_r(y) = |y|^{r-2} y` in place.
fn duality_map(values: &mut [C64], r: f64) {
    if r == 2.0 {
        return;
    }
    for v in values.iter_mut() {
        let a = v.norm();
        *v = if a == 0.0 {
            C64::new(0.0, 0.0)
        } else {
            *v * a.powf(r - 2.0)
        };
    }
}

struct Ascent {
    value: f64,
    iterations: usize,
    converged: bool,
    x: GroupFunction,
}

fn ascend(
    sigma: &BlockSymbol,
    adjoint: &BlockSymbol,
    start: GroupFunction,
    p: f64,
    q: f64,
    opts: &AscentOptions,
) -> Result<Ascent> {
    let weight = sigma.model().point_weight()?;
    let pc = conjugate_exponent(p);
    let normalize = |mut f: GroupFunction| -> Option<GroupFunction> {
        let n = lp_norm_raw(f.values(), p, weight);
        if n == 0.0 || !n.is_finite() {
            return None;
        }
        f.values_mut().iter_mut().for_each(|v| *v /= n);
        Some(f)
    };
    let Some(mut x) = normalize(start.clone()) else {
        return Ok(Ascent {
            value: 0.0,
            iterations: 0,
            converged: true,
            x: start,
        });
    };
    let mut y = apply_multiplier(sigma, &x)?;
    let mut gamma = lp_norm_raw(y.values(), q, weight);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iterations {
        iterations += 1;
        if gamma == 0.0 {
            converged = true;
            break;
        }
        duality_map(y.values_mut(), q);
        let mut u = apply_multiplier(adjoint, &y)?;
        duality_map(u.values_mut(), pc);
        let Some(next) = normalize(u) else {
            converged = true;
            break;
        };
        let y_next = apply_multiplier(sigma, &next)?;
        let gamma_next = lp_norm_raw(y_next.values(), q, weight);
        if !gamma_next.is_finite() {
            return Err(Error::Numerical {
                label: "ascent".into(),
                reason: "non-finite ratio".into(),
            });
        }
        let change = (gamma_next - gamma).abs();
        if gamma_next >= gamma {
            x = next;
            y = y_next;
            gamma = gamma_next;
        }
        if change <= opts.tolerance * gamma {
            converged = true;
            break;
        }
    }
    Ok(Ascent {
        value: gamma,
        iterations,
        converged,
        x,
    })
}

/// Function whose transform is the top right singular vector of the block
/// with the largest operator norm, placed in the first column.
fn spectral_start(sigma: &BlockSymbol) -> Result<GroupFunction> {
    let mut best = (0usize, -1.0f64);
    for (i, (b, m)) in sigma
        .model()
        .dual_measure()
        .iter()
        .zip(sigma.blocks())
        .enumerate()
    {
        let top = block_singular_values(m, &b.label)?[0];
        if top > best.1 {
            best = (i, top);
        }
    }
    let (index, _) = best;
    let mut coeffs = BlockSymbol::zero(sigma.model().clone());
    let block = &sigma.blocks()[index];
    let d = block.nrows();
    let column = if d == 1 {
        DMatrix::from_element(1, 1, C64::new(1.0, 0.0))
    } else {
        // top eigenvector of σ*σ is the top right singular vector of σ
        let gram = block.adjoint() * block;
        let eig = nalgebra::linalg::SymmetricEigen::new(gram);
        let top = eig.eigenvalues.imax();
        eig.eigenvectors.columns(top, 1).into_owned()
    };
    for i in 0..d {
        coeffs.blocks_mut()[index][(i, 0)] = column[(i, 0)];
    }
    inverse_transform(&coeffs)
}

/// Lower bound for `‖A‖_{L^p → L^q}`, `1 < p ≤ 2 ≤ q < ∞`, by nonlinear power
/// iteration from a spectral start and `opts.restarts` seeded random starts.
///
/// Random start `i` draws from its own ChaCha stream `(seed, i)`, so the
/// result does not depend on how the restarts are scheduled. Ties between
/// starts go to the lowest index.
pub fn estimate_pq_norm(
    sigma: &BlockSymbol,
    p: f64,
    q: f64,
    opts: &AscentOptions,
) -> Result<PqEstimate> {
    if !(p > 1.0 && p <= 2.0 && q >= 2.0 && q.is_finite()) {
        return Err(Error::invalid(format!(
            "estimation needs 1 < p ≤ 2 ≤ q < ∞, got p = {p}, q = {q}"
        )));
    }
    opts.validate()?;
    let model: &Arc<GroupModel> = sigma.model();
    model.function_len()?;
    let adjoint = sigma.adjoint();
    let results = (0..=opts.restarts)
        .into_par_iter()
        .map(|i| {
            let start = if i == 0 {
                spectral_start(sigma)?
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                rng.set_stream(i as u64);
                GroupFunction::random(model.clone(), &mut rng)?
            };
            ascend(sigma, &adjoint, start, p, q, opts)
        })
        .collect::<Result<Vec<_>>>()?;
    let (best_start, best) = results
        .into_iter()
        .enumerate()
        .reduce(|a, b| if b.1.value > a.1.value { b } else { a })
        .expect("at least the spectral start");
    Ok(PqEstimate {
        value: best.value,
        best_start,
        iterations: best.iterations,
        converged: best.converged,
        argmax: best.x,
    })
}

/// `‖f‖_q` for a band-limited torus function given by its coefficients,
/// sampled on successively doubled grids.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRefinement {
    pub grids: Vec<usize>,
    pub values: Vec<f64>,
}

impl GridRefinement {
    /// `|v_{j+1} - v_j|` for consecutive grids.
    pub fn increments(&self) -> Vec<f64> {
        self.values
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .collect()
    }

    /// Each increment is at most half the previous one (or already at
    /// round-off level).
    pub fn is_converging(&self) -> bool {
        let inc = self.increments();
        let scale = self.values.last().copied().unwrap_or(0.0).abs().max(1e-300);
        inc.windows(2)
            .all(|w| w[1] <= 0.5 * w[0] || w[1] <= 1e-13 * scale)
    }
}

pub fn grid_refinement(coeffs: &BlockSymbol, q: f64, doublings: usize) -> Result<GridRefinement> {
    let torus = coeffs
        .model()
        .torus_model()
        .ok_or_else(|| Error::UnsupportedModel("grid refinement needs a torus model".into()))?;
    let mut grids = Vec::new();
    let mut values = Vec::new();
    let mut grid = torus.grid();
    for _ in 0..=doublings {
        let model = GroupModel::torus(torus.dim(), torus.truncation(), Some(grid))?;
        let f = inverse_transform(&BlockSymbol::new(model, coeffs.blocks().to_vec())?)?;
        grids.push(grid);
        values.push(lp_norm(&f, q)?);
        grid *= 2;
    }
    Ok(GridRefinement { grids, values })
}
