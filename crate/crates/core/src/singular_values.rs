//! Generalized singular numbers `μ_t(A) = inf{λ ≥ 0 : τ(E_λ(|A|)) ≤ t}` and
//! noncommutative Lorentz norms.
//!
//! For a block-diagonal multiplier the spectral measure of `|A|` relative to
//! `τ` is atomic: every singular value of every block carries that block's
//! trace weight. `t ↦ μ_t` is then a nonincreasing right-continuous step
//! function with finitely many steps, and every Lorentz norm integrates in
//! closed form.

use std::io::Write;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::BlockSymbol;
use crate::C64;

/// Values within this relative distance are merged into one step.
pub const TIE_RELATIVE_TOL: f64 = 1e-12;

/// Singular values with positive trace weights; order does not matter.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightedSpectrum {
    entries: Vec<(f64, f64)>,
}

impl WeightedSpectrum {
    /// Entries are `(value, weight)` with `value ≥ 0` and `weight > 0`.
    pub fn new(entries: Vec<(f64, f64)>) -> Result<Self> {
        for &(v, m) in &entries {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!(
                    "spectrum value {v} is not a finite nonnegative number"
                )));
            }
            if !(m > 0.0) || !m.is_finite() {
                return Err(Error::invalid(format!(
                    "spectrum weight {m} is not positive"
                )));
            }
        }
        Ok(WeightedSpectrum { entries })
    }

    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    pub fn total_weight(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Step {
    pub value: f64,
    pub width: f64,
}

/// Nonincreasing right-continuous step function on `[0, ∞)`: value `v_i` on
/// `[T_{i-1}, T_i)` with `T_i = w_1 + … + w_i`, and `0` from the total width on.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct StepFunction {
    steps: Vec<Step>,
}

impl StepFunction {
    /// Steps must have strictly decreasing positive values and positive widths.
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        for (i, s) in steps.iter().enumerate() {
            if !(s.value > 0.0 && s.value.is_finite()) {
                return Err(Error::invalid("step values must be positive and finite"));
            }
            if !(s.width > 0.0 && s.width.is_finite()) {
                return Err(Error::invalid("step widths must be positive and finite"));
            }
            if i > 0 && steps[i - 1].value <= s.value {
                return Err(Error::invalid("step values must be strictly decreasing"));
            }
        }
        Ok(StepFunction { steps })
    }

    pub fn empty() -> Self {
        StepFunction::default()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn total_width(&self) -> f64 {
        self.steps.iter().map(|s| s.width).sum()
    }

    /// `(value, left end, right end)` of every step.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.steps.iter().scan(0.0, |t, s| {
            let start = *t;
            *t += s.width;
            Some((s.value, start, *t))
        })
    }

    /// Largest value, `0` when empty.
    pub fn sup(&self) -> f64 {
        self.steps.first().map_or(0.0, |s| s.value)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.intervals()
            .find(|&(_, _, end)| t < end)
            .map_or(0.0, |(v, _, _)| v)
    }

    /// Multiplies every value by `|c|`; widths are unchanged.
    pub fn scale(&self, c: f64) -> Self {
        let c = c.abs();
        if c == 0.0 {
            return Self::empty();
        }
        StepFunction {
            steps: self
                .steps
                .iter()
                .map(|s| Step {
                    value: s.value * c,
                    width: s.width,
                })
                .collect(),
        }
    }

    /// `sup_t |self(t) - other(t)|`, exact over the merged breakpoints.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        let mut points: Vec<f64> = std::iter::once(0.0)
            .chain(self.intervals().map(|i| i.2))
            .chain(other.intervals().map(|i| i.2))
            .collect();
        points.sort_by(f64::total_cmp);
        // both functions are constant on [points[k], points[k+1])
        points
            .iter()
            .map(|&t| (self.eval(t) - other.eval(t)).abs())
            .fold(0.0, f64::max)
    }

    /// CSV rows `(value, width, cumulative_width)`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["value", "width", "cumulative_width"])?;
        for (v, start, end) in self.intervals() {
            w.write_record([v.to_string(), (end - start).to_string(), end.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Sorts descending, merges ties (relative [`TIE_RELATIVE_TOL`]) by summing
/// weights, and drops zero values.
pub fn mu_from_spectrum(sp: &WeightedSpectrum) -> StepFunction {
    let mut entries: Vec<(f64, f64)> = sp.entries.iter().copied().filter(|e| e.0 > 0.0).collect();
    entries.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut steps: Vec<Step> = Vec::new();
    for (value, weight) in entries {
        match steps.last_mut() {
            Some(last) if last.value - value <= TIE_RELATIVE_TOL * last.value => {
                last.width += weight;
            }
            _ => steps.push(Step {
                value,
                width: weight,
            }),
        }
    }
    StepFunction { steps }
}

/// `τ(E_λ(|A|))`: total weight of the values strictly greater than `λ`.
pub fn distribution(sp: &WeightedSpectrum, lambda: f64) -> f64 {
    sp.entries
        .iter()
        .filter(|e| e.0 > lambda)
        .map(|e| e.1)
        .sum()
}

/// Singular values of every block, each carrying the block's trace weight.
pub fn spectrum_of_symbol(sigma: &BlockSymbol) -> Result<WeightedSpectrum> {
    let mut entries = Vec::new();
    for (block, m) in sigma.model().dual_measure().iter().zip(sigma.blocks()) {
        for s in block_singular_values(m, &block.label)? {
            entries.push((s, block.weight));
        }
    }
    Ok(WeightedSpectrum { entries })
}

/// Singular values of one block, descending.
pub fn block_singular_values(m: &DMatrix<C64>, label: &str) -> Result<Vec<f64>> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numerical {
            label: label.to_string(),
            reason: "non-finite entry".into(),
        });
    }
    if m.nrows() == 1 {
        return Ok(vec![m[(0, 0)].norm()]);
    }
    let svd = nalgebra::linalg::SVD::try_new(m.clone(), false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical {
            label: label.to_string(),
            reason: "singular value iteration did not converge".into(),
        })?;
    let mut values: Vec<f64> = svd.singular_values.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// `(∫_0^∞ (t^{1/p} μ_t)^q dt/t)^{1/q}`, and `sup_t t^{1/p} μ_t` for `q = ∞`.
///
/// On a step `[a, b)` with value `v` the integrand contributes
/// `v^q (p/q) (b^{q/p} - a^{q/p})`. `p = ∞` is accepted only with `q = ∞`,
/// where it gives `sup μ`.
pub fn lorentz_norm(mu: &StepFunction, p: f64, q: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::invalid(format!(
            "Lorentz index p = {p} must be at least 1"
        )));
    }
    if !(q >= 1.0) {
        return Err(Error::invalid(format!(
            "Lorentz index q = {q} must be at least 1"
        )));
    }
    if q.is_infinite() {
        return weak_norm(mu, p);
    }
    if p.is_infinite() {
        return Err(Error::invalid("p = ∞ requires q = ∞"));
    }
    if mu.is_empty() {
        return Ok(0.0);
    }
    let ratio = q / p;
    let sum: f64 = mu
        .intervals()
        .map(|(v, a, b)| {
            let measure = if ratio == 1.0 {
                b - a
            } else {
                (b.powf(ratio) - a.powf(ratio)) / ratio
            };
            v.powf(q) * measure
        })
        .sum();
    Ok(sum.powf(1.0 / q))
}

/// `sup_t t^{1/r} μ_t = max_i v_i T_i^{1/r}`; `r = ∞` gives `sup μ`.
pub fn weak_norm(mu: &StepFunction, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::invalid(format!(
            "weak index r = {r} must be positive"
        )));
    }
    let inv = 1.0 / r;
    Ok(mu
        .intervals()
        .map(|(v, _, end)| if inv == 0.0 { v } else { v * end.powf(inv) })
        .fold(0.0, f64::max))
}
