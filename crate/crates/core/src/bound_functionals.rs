//! Right-hand sides of the multiplier estimates.
//!
//! All suprema over levels `s` are taken over the finite candidate set of
//! attained values: on an atomic measure `s ↦ s · m({|σ| ≥ s})^{θ}` increases
//! between consecutive candidates and jumps down right after each, so the
//! supremum is attained at a candidate. Unbounded quantities are reported as
//! `f64::INFINITY`, never as an error.

use std::f64::consts::PI;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{fourier_transform, BlockSymbol, GroupFunction};
use crate::group_models::EuclideanGridDual;
use crate::norm_estimation::lp_norm;
use crate::singular_values::{
    block_singular_values, mu_from_spectrum, spectrum_of_symbol, weak_norm, Step, StepFunction,
    WeightedSpectrum,
};
use crate::{conjugate_exponent, weak_exponent};

/// Slack allowed when checking exponent ranges such as `b ∈ [p, p']`.
const RANGE_TOL: f64 = 1e-12;

/// `|σ|` values with their measure weights.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScalarSymbolData {
    entries: Vec<(f64, f64)>,
}

impl ScalarSymbolData {
    pub fn new(entries: Vec<(f64, f64)>) -> Result<Self> {
        // the same constraints as a weighted spectrum
        WeightedSpectrum::new(entries.clone())?;
        Ok(ScalarSymbolData { entries })
    }

    /// `|σ(χ)|` with the dual weights of an abelian model.
    pub fn from_symbol(sigma: &BlockSymbol) -> Result<Self> {
        if !sigma.model().is_abelian() {
            return Err(Error::invalid(
                "scalar symbol data needs one-dimensional blocks",
            ));
        }
        let entries = sigma
            .model()
            .dual_measure()
            .iter()
            .zip(sigma.blocks())
            .map(|(b, m)| (m[(0, 0)].norm(), b.weight))
            .collect();
        Ok(ScalarSymbolData { entries })
    }

    /// Samples `|σ(ξ)|` on a Euclidean dual grid with cell-volume weights.
    pub fn from_euclidean(
        grid: &EuclideanGridDual,
        symbol: impl Fn(&[f64]) -> f64,
    ) -> Result<Self> {
        let weight = grid.cell_weight();
        let mut entries = Vec::with_capacity(grid.num_points());
        grid.for_each_point(|xi| entries.push((symbol(xi).abs(), weight)));
        Self::new(entries)
    }

    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    pub fn as_spectrum(&self) -> WeightedSpectrum {
        WeightedSpectrum::new(self.entries.clone()).expect("validated on construction")
    }
}

fn check_multiplier_range(p: f64, q: f64) -> Result<()> {
    if !(p > 1.0 && p <= 2.0 && q >= 2.0 && q.is_finite()) {
        return Err(Error::invalid(format!(
            "exponents must satisfy 1 < p ≤ 2 ≤ q < ∞, got p = {p}, q = {q}"
        )));
    }
    Ok(())
}

/// `sup_s s · m(level set)^θ` over candidate `(value, mass)` pairs, where
/// `mass` is the measure of `{values ≥ value}`. `θ = 0` degenerates to the
/// largest positive value.
fn level_sup(mut points: Vec<(f64, f64)>, theta: f64) -> f64 {
    points.retain(|p| p.0 > 0.0);
    points.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = 0.0f64;
    let mut mass = 0.0;
    let mut i = 0;
    while i < points.len() {
        let s = points[i].0;
        while i < points.len() && points[i].0 == s {
            mass += points[i].1;
            i += 1;
        }
        let candidate = if theta == 0.0 {
            s
        } else {
            s * mass.powf(theta)
        };
        best = best.max(candidate);
    }
    best
}

/// `sup_{s>0} s · (Σ_{|σ| ≥ s} weight)^{1/p - 1/q}`.
pub fn level_set_functional(data: &ScalarSymbolData, p: f64, q: f64) -> Result<f64> {
    check_multiplier_range(p, q)?;
    Ok(level_sup(data.entries.clone(), weak_exponent(p, q)))
}

/// `sup_{s>0} s · (Σ_{‖σ(ξ)‖_op ≥ s} d_ξ · w_ξ)^{1/p - 1/q}`.
///
/// The mass of a block is `d_ξ` times its trace weight: `d_ξ²` on Haar-mass-1
/// compact duals, `d_ξ² / |G|` under counting measure on a finite group.
pub fn compact_symbol_functional(sigma: &BlockSymbol, p: f64, q: f64) -> Result<f64> {
    check_multiplier_range(p, q)?;
    let mut points = Vec::with_capacity(sigma.blocks().len());
    for (b, m) in sigma.model().dual_measure().iter().zip(sigma.blocks()) {
        let opnorm = block_singular_values(m, &b.label)?[0];
        points.push((opnorm, b.dim as f64 * b.weight));
    }
    Ok(level_sup(points, weak_exponent(p, q)))
}

/// Serialized form of [`PhiFunction`]: `{"kind": "power" | "reciprocal" |
/// "indicator" | "step", …}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PhiSpec {
    /// `(1 + t)^{-alpha}`
    Power { alpha: f64 },
    /// `t^{-alpha}`
    Reciprocal { alpha: f64 },
    /// `1` on `[0, length]`, `0` beyond
    Indicator { length: f64 },
    /// explicit nonincreasing steps `[value, width]`
    Step { steps: Vec<[f64; 2]> },
}

/// The weight `φ` of the Hausdorff-Young-Paley inequality.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiFunction {
    Power { alpha: f64 },
    Reciprocal { alpha: f64 },
    Indicator { length: f64 },
    Step(StepFunction),
}

impl PhiFunction {
    pub fn from_spec(spec: &PhiSpec) -> Result<Self> {
        let positive = |x: f64, what: &str| {
            if x > 0.0 && x.is_finite() {
                Ok(x)
            } else {
                Err(Error::invalid(format!(
                    "{what} must be positive and finite, got {x}"
                )))
            }
        };
        Ok(match spec {
            PhiSpec::Power { alpha } => PhiFunction::Power {
                alpha: positive(*alpha, "alpha")?,
            },
            PhiSpec::Reciprocal { alpha } => PhiFunction::Reciprocal {
                alpha: positive(*alpha, "alpha")?,
            },
            PhiSpec::Indicator { length } => PhiFunction::Indicator {
                length: positive(*length, "indicator length")?,
            },
            PhiSpec::Step { steps } => {
                if steps.is_empty() {
                    return Err(Error::invalid("step φ needs at least one step"));
                }
                PhiFunction::Step(StepFunction::new(
                    steps
                        .iter()
                        .map(|s| Step {
                            value: s[0],
                            width: s[1],
                        })
                        .collect(),
                )?)
            }
        })
    }

    pub fn to_spec(&self) -> PhiSpec {
        match self {
            PhiFunction::Power { alpha } => PhiSpec::Power { alpha: *alpha },
            PhiFunction::Reciprocal { alpha } => PhiSpec::Reciprocal { alpha: *alpha },
            PhiFunction::Indicator { length } => PhiSpec::Indicator { length: *length },
            PhiFunction::Step(s) => PhiSpec::Step {
                steps: s.steps().iter().map(|s| [s.value, s.width]).collect(),
            },
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            PhiFunction::Power { alpha } => (1.0 + t).powf(-alpha),
            PhiFunction::Reciprocal { alpha } => t.powf(-alpha),
            PhiFunction::Indicator { length } => {
                if t <= *length {
                    1.0
                } else {
                    0.0
                }
            }
            PhiFunction::Step(s) => s.eval(t),
        }
    }

    /// `∫_a^c φ(t)^κ dt` for `0 ≤ a ≤ c`, `κ ≥ 0`; a zero exponent makes the
    /// factor identically 1.
    pub fn integral_of_power(&self, a: f64, c: f64, kappa: f64) -> f64 {
        if c <= a {
            return 0.0;
        }
        if kappa == 0.0 {
            return c - a;
        }
        match self {
            PhiFunction::Power { alpha } => {
                let beta = alpha * kappa;
                if (beta - 1.0).abs() < 1e-14 {
                    ((1.0 + c) / (1.0 + a)).ln()
                } else {
                    ((1.0 + c).powf(1.0 - beta) - (1.0 + a).powf(1.0 - beta)) / (1.0 - beta)
                }
            }
            PhiFunction::Reciprocal { alpha } => {
                let beta = alpha * kappa;
                if (beta - 1.0).abs() < 1e-14 {
                    if a == 0.0 {
                        f64::INFINITY
                    } else {
                        (c / a).ln()
                    }
                } else if beta > 1.0 && a == 0.0 {
                    f64::INFINITY
                } else {
                    (c.powf(1.0 - beta) - a.powf(1.0 - beta)) / (1.0 - beta)
                }
            }
            PhiFunction::Indicator { length } => (c.min(*length) - a).max(0.0),
            PhiFunction::Step(s) => s
                .intervals()
                .map(|(v, lo, hi)| v.powf(kappa) * (c.min(hi) - a.max(lo)).max(0.0))
                .sum(),
        }
    }
}

/// `M_φ = sup_{s>0} s · |{t : φ(t) ≥ s}|`.
pub fn m_phi(phi: &PhiFunction) -> f64 {
    match phi {
        // level set [0, s^{-1/α}]: s^{1 - 1/α} is bounded only for α = 1
        PhiFunction::Reciprocal { alpha } => {
            if (*alpha - 1.0).abs() < 1e-14 {
                1.0
            } else {
                f64::INFINITY
            }
        }
        // level set [0, s^{-1/α} - 1] for s ≤ 1: sup of s^{1-1/α} - s
        PhiFunction::Power { alpha } => {
            if *alpha < 1.0 {
                f64::INFINITY
            } else if (*alpha - 1.0).abs() < 1e-14 {
                1.0
            } else {
                let beta = (alpha - 1.0) / alpha;
                beta.powf(alpha - 1.0) / alpha
            }
        }
        PhiFunction::Indicator { length } => *length,
        PhiFunction::Step(s) => weak_norm(s, 1.0).expect("r = 1 is valid"),
    }
}

/// Both sides of the Hausdorff-Young-Paley inequality for one function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypSides {
    /// `(∫ (μ_t(L_f) φ(t)^{1/b - 1/p'})^b dt)^{1/b}`
    pub lhs: f64,
    /// `M_φ^{1/b - 1/p'}`
    pub rhs_factor: f64,
    /// `‖f‖_{L^p(G)}`
    pub f_norm: f64,
}

impl HypSides {
    pub fn rhs(&self) -> f64 {
        self.rhs_factor * self.f_norm
    }
}

/// `1/b - 1/p'` after checking `1 < p ≤ b ≤ p' < ∞`; snapped to 0 at `b = p'`.
pub fn hyp_exponent(p: f64, b: f64) -> Result<f64> {
    let pc = conjugate_exponent(p);
    if !(p > 1.0 && pc.is_finite() && b >= p - RANGE_TOL && b <= pc + RANGE_TOL) {
        return Err(Error::invalid(format!(
            "need 1 < p ≤ b ≤ p' < ∞, got p = {p}, b = {b}, p' = {pc}"
        )));
    }
    let e = 1.0 / b - 1.0 / pc;
    Ok(if e.abs() <= RANGE_TOL {
        0.0
    } else {
        e.max(0.0)
    })
}

/// Left side of the Hausdorff-Young-Paley inequality for a given `μ`.
///
/// On each step `[a, c)` with value `v` the integrand is `v^b φ(t)^{eb}`;
/// the `φ` factor integrates in closed form.
pub fn hyp_lhs(mu: &StepFunction, phi: &PhiFunction, p: f64, b: f64) -> Result<f64> {
    let e = hyp_exponent(p, b)?;
    let kappa = e * b;
    let mut total = 0.0;
    for (v, a, c) in mu.intervals() {
        let integral = phi.integral_of_power(a, c, kappa);
        total += v.powf(b) * integral;
    }
    Ok(total.powf(1.0 / b))
}

pub fn hyp_sides(f: &GroupFunction, phi: &PhiFunction, p: f64, b: f64) -> Result<HypSides> {
    let e = hyp_exponent(p, b)?;
    if f.model().finite_table().is_none() {
        return Err(Error::UnsupportedModel(
            "Hausdorff-Young-Paley sides are evaluated on finite models".into(),
        ));
    }
    let mu = mu_from_spectrum(&spectrum_of_symbol(&fourier_transform(f)?)?);
    let lhs = hyp_lhs(&mu, phi, p, b)?;
    let rhs_factor = if e == 0.0 { 1.0 } else { m_phi(phi).powf(e) };
    Ok(HypSides {
        lhs,
        rhs_factor,
        f_norm: lp_norm(f, p)?,
    })
}

/// Nondecreasing positive eigenvalues `λ_1 ≤ λ_2 ≤ …`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueSequence {
    values: Vec<f64>,
    hausdorff_dim: Option<f64>,
}

impl EigenvalueSequence {
    pub fn new(values: Vec<f64>, hausdorff_dim: Option<f64>) -> Result<Self> {
        if values.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::invalid("eigenvalues must be positive and finite"));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::invalid("eigenvalues must be nondecreasing"));
        }
        if let Some(q) = hausdorff_dim {
            if !(q > 0.0) {
                return Err(Error::invalid("Hausdorff dimension must be positive"));
            }
        }
        Ok(EigenvalueSequence {
            values,
            hausdorff_dim,
        })
    }

    /// `λ_k = k^{1/Q}`, `k = 1..=count`.
    pub fn synthetic(q: f64, count: usize) -> Result<Self> {
        if !(q > 0.0) {
            return Err(Error::invalid("Hausdorff dimension must be positive"));
        }
        Self::new(
            (1..=count).map(|k| (k as f64).powf(1.0 / q)).collect(),
            Some(q),
        )
    }

    /// First `count` eigenvalues of `√(1 - Δ)` on the torus `(R/Z)^d`, that
    /// is `√(1 + 4π²|m|²)` over `m ∈ Z^d` with multiplicity.
    pub fn torus(dim: usize, count: usize) -> Result<Self> {
        Self::torus_with_period(dim, count, 1.0)
    }

    /// As [`EigenvalueSequence::torus`] on `(R/LZ)^d`: `√(1 + (2π/L)²|m|²)`.
    pub fn torus_with_period(dim: usize, count: usize, period: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("torus dimension must be positive"));
        }
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::invalid("torus period must be positive"));
        }
        let freq2 = (2.0 * PI / period).powi(2);
        let mut radius = (count as f64).powf(1.0 / dim as f64).ceil() as i64 + 1;
        let norms = loop {
            let mut norms = Vec::new();
            let r2 = radius * radius;
            lattice_norms(dim, radius, 0, &mut |n2| {
                if n2 <= r2 {
                    norms.push(n2);
                }
            });
            if norms.len() >= count {
                break norms;
            }
            radius = radius * 3 / 2 + 1;
        };
        let mut norms = norms;
        norms.sort_unstable();
        norms.truncate(count);
        Self::new(
            norms
                .iter()
                .map(|&n2| (1.0 + freq2 * n2 as f64).sqrt())
                .collect(),
            Some(dim as f64),
        )
    }

    /// One eigenvalue per line; a non-numeric first line is taken as a header.
    pub fn from_csv<R: Read>(reader: R, hausdorff_dim: Option<f64>) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(reader);
        let mut values = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let field = rec.get(0).unwrap_or("").trim();
            match field.parse::<f64>() {
                Ok(v) => values.push(v),
                Err(_) if i == 0 => continue,
                Err(_) => {
                    return Err(Error::invalid(format!(
                        "line {}: `{field}` is not a number",
                        i + 1
                    )))
                }
            }
        }
        Self::new(values, hausdorff_dim)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn hausdorff_dim(&self) -> Option<f64> {
        self.hausdorff_dim
    }
}

fn lattice_norms(dim: usize, radius: i64, acc: i64, visit: &mut impl FnMut(i64)) {
    if dim == 0 {
        visit(acc);
        return;
    }
    for m in -radius..=radius {
        lattice_norms(dim - 1, radius, acc + m * m, visit);
    }
}

/// `max_{1 ≤ k ≤ K} k^{1/p - 1/q} φ(λ_k)`.
pub fn sobolev_sup(
    lambda: &EigenvalueSequence,
    phi: &PhiFunction,
    p: f64,
    q: f64,
    k_max: usize,
) -> Result<f64> {
    if k_max > lambda.len() {
        return Err(Error::invalid(format!(
            "K = {k_max} exceeds the {} available eigenvalues",
            lambda.len()
        )));
    }
    let theta = weak_exponent(p, q);
    Ok(lambda.values[..k_max]
        .iter()
        .enumerate()
        .map(|(i, &l)| ((i + 1) as f64).powf(theta) * phi.eval(l))
        .fold(0.0, f64::max))
}

/// `N(λ) = #{k : λ_k ≤ λ}`.
pub fn counting_function(lambda: &EigenvalueSequence, level: f64) -> usize {
    lambda.values.partition_point(|&v| v <= level)
}

/// `(‖A‖_{L^{r,∞}}, Σ d²-functional)` for `1/r = 1/p - 1/q`.
pub fn comparison_pair(sigma: &BlockSymbol, p: f64, q: f64) -> Result<(f64, f64)> {
    check_multiplier_range(p, q)?;
    if p == q {
        return Err(Error::invalid("the weak space L^{r,∞} needs p ≠ q"));
    }
    let r = 1.0 / weak_exponent(p, q);
    let lhs = weak_norm(&mu_from_spectrum(&spectrum_of_symbol(sigma)?), r)?;
    let rhs = compact_symbol_functional(sigma, p, q)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::GroupFunction;
    use crate::singular_values::lorentz_norm;
    use crate::{GroupModel, C64};
    use nalgebra::DMatrix;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn data(entries: &[(f64, f64)]) -> ScalarSymbolData {
        ScalarSymbolData::new(entries.to_vec()).unwrap()
    }

    /// `sup_s s · m({v ≥ s})^θ` by scanning a fine grid of levels plus the
    /// attained values; independent of the candidate-set shortcut.
    fn level_sup_oracle(entries: &[(f64, f64)], theta: f64) -> f64 {
        let max = entries.iter().map(|e| e.0).fold(0.0, f64::max);
        let mut levels: Vec<f64> = (1..=2000).map(|i| max * i as f64 / 2000.0).collect();
        levels.extend(entries.iter().map(|e| e.0).filter(|&v| v > 0.0));
        levels
            .iter()
            .map(|&s| {
                let m: f64 = entries.iter().filter(|e| e.0 >= s).map(|e| e.1).sum();
                if m == 0.0 {
                    0.0
                } else {
                    s * m.powf(theta)
                }
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn level_set_examples() {
        assert_eq!(
            level_set_functional(&data(&[(1.0, 4.0)]), 1.5, 3.0).unwrap(),
            4f64.powf(1.0 / 3.0)
        );
        // θ = 1/2 with (p, q) = (4/3, 4)
        assert!(
            (level_set_functional(&data(&[(1.0, 4.0)]), 4.0 / 3.0, 4.0).unwrap() - 2.0).abs()
                < 1e-14
        );
        assert_eq!(
            level_set_functional(&data(&[(0.0, 3.0)]), 1.5, 3.0).unwrap(),
            0.0
        );
        assert_eq!(
            level_set_functional(&ScalarSymbolData::default(), 1.5, 3.0).unwrap(),
            0.0
        );

        let dyadic: Vec<(f64, f64)> = (-10i32..=10).map(|k| (2f64.powi(-k.abs()), 1.0)).collect();
        let got = level_set_functional(&data(&dyadic), 4.0 / 3.0, 4.0).unwrap();
        // candidates 2^{-m} (2m + 1)^{1/2}, m = 0..=10
        let expected = (0..=10)
            .map(|m| 2f64.powi(-m) * ((2 * m + 1) as f64).sqrt())
            .fold(0.0, f64::max);
        assert_eq!(expected, 1.0);
        assert!((got - 1.0).abs() < 1e-14);

        assert!(level_set_functional(&data(&[(1.0, 1.0)]), 1.0, 3.0).is_err());
        assert!(level_set_functional(&data(&[(1.0, 1.0)]), 2.5, 3.0).is_err());
        assert!(level_set_functional(&data(&[(1.0, 1.0)]), 1.5, f64::INFINITY).is_err());
        // p = q degenerates to the largest value
        assert_eq!(
            level_set_functional(&data(&[(3.0, 0.1), (1.0, 9.0)]), 2.0, 2.0).unwrap(),
            3.0
        );
    }

    #[test]
    fn euclidean_indicator_of_ball() {
        // |{|ξ| ≤ 1}| = π in the plane; level set sup is |ball|^{1/r}
        let grid = EuclideanGridDual::new(2, 0.005, 1.5).unwrap();
        let d = ScalarSymbolData::from_euclidean(&grid, |xi| {
            if xi[0] * xi[0] + xi[1] * xi[1] <= 1.0 {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        let got = level_set_functional(&d, 1.5, 3.0).unwrap();
        let expected = PI.powf(1.0 / 3.0);
        assert!((got - expected).abs() < 1e-3, "{got} vs {expected}");
    }

    #[test]
    fn compact_functional_examples() {
        let su2 = GroupModel::su2(2);
        let (p, q) = (1.5, 3.0);
        let theta = weak_exponent(p, q);
        let proj = BlockSymbol::identity(su2.clone());
        assert!(
            (compact_symbol_functional(&proj, p, q).unwrap() - 14f64.powf(theta)).abs() < 1e-13
        );

        let big = GroupModel::su2(6);
        let c = 2.5;
        let single = BlockSymbol::from_fn(big.clone(), |i, d| {
            if i == 4 {
                DMatrix::identity(d, d) * C64::new(0.0, c)
            } else {
                DMatrix::zeros(d, d)
            }
        })
        .unwrap();
        let got = compact_symbol_functional(&single, p, q).unwrap();
        assert!((got - c * 5f64.powf(2.0 * theta)).abs() < 1e-12);
        assert_eq!(
            compact_symbol_functional(&BlockSymbol::zero(big), p, q).unwrap(),
            0.0
        );
    }

    #[test]
    fn m_phi_examples() {
        assert_eq!(m_phi(&PhiFunction::Reciprocal { alpha: 1.0 }), 1.0);
        assert_eq!(m_phi(&PhiFunction::Indicator { length: 2.5 }), 2.5);
        assert_eq!(
            m_phi(&PhiFunction::Reciprocal { alpha: 2.0 }),
            f64::INFINITY
        );
        assert_eq!(m_phi(&PhiFunction::Power { alpha: 0.5 }), f64::INFINITY);
        assert_eq!(m_phi(&PhiFunction::Power { alpha: 1.0 }), 1.0);
        let step = PhiFunction::from_spec(&PhiSpec::Step {
            steps: vec![[3.0, 1.0], [1.0, 4.0]],
        })
        .unwrap();
        assert_eq!(m_phi(&step), 5.0);
    }

    #[test]
    fn m_phi_power_matches_level_scan() {
        for alpha in [1.5, 2.0, 3.0] {
            let phi = PhiFunction::Power { alpha };
            // level set of (1+t)^{-α} ≥ s is [0, s^{-1/α} - 1]
            let scan = (1..=200_000)
                .map(|i| {
                    let s = i as f64 / 200_000.0;
                    s * (s.powf(-1.0 / alpha) - 1.0)
                })
                .fold(0.0, f64::max);
            assert!((m_phi(&phi) - scan).abs() < 1e-8, "alpha {alpha}");
        }
    }

    #[test]
    fn integral_of_power_matches_quadrature() {
        let phis = [
            PhiFunction::Power { alpha: 1.3 },
            PhiFunction::Reciprocal { alpha: 1.0 },
            PhiFunction::Indicator { length: 0.6 },
            PhiFunction::from_spec(&PhiSpec::Step {
                steps: vec![[2.0, 0.25], [0.5, 0.5]],
            })
            .unwrap(),
        ];
        for phi in &phis {
            for (a, c, kappa) in [(0.1, 0.9, 0.4), (0.3, 1.2, 1.0), (0.0, 0.5, 0.0)] {
                let n = 400_000;
                let h = (c - a) / n as f64;
                let approx: f64 = (0..n)
                    .map(|i| {
                        let v = phi.eval(a + (i as f64 + 0.5) * h);
                        if kappa == 0.0 {
                            1.0
                        } else {
                            v.powf(kappa)
                        }
                    })
                    .sum::<f64>()
                    * h;
                let exact = phi.integral_of_power(a, c, kappa);
                assert!(
                    (exact - approx).abs() < 1e-5,
                    "{phi:?} {a} {c} {kappa}: {exact} vs {approx}"
                );
            }
        }
        assert_eq!(
            PhiFunction::Reciprocal { alpha: 2.0 }.integral_of_power(0.0, 1.0, 1.0),
            f64::INFINITY
        );
    }

    #[test]
    fn hyp_examples() {
        let z5 = GroupModel::builtin("Z5").unwrap();
        let delta = GroupFunction::delta(z5.clone()).unwrap();
        let p = 1.5;
        let pc = conjugate_exponent(p);
        let sides = hyp_sides(&delta, &PhiFunction::Reciprocal { alpha: 1.0 }, p, pc).unwrap();
        assert!((sides.lhs - 1.0).abs() < 1e-14);
        assert_eq!(sides.rhs(), 1.0);

        let zero = GroupFunction::zeros(z5.clone()).unwrap();
        let sides = hyp_sides(&zero, &PhiFunction::Reciprocal { alpha: 1.0 }, p, p).unwrap();
        assert_eq!((sides.lhs, sides.rhs()), (0.0, 0.0));

        assert!(hyp_sides(&delta, &PhiFunction::Reciprocal { alpha: 1.0 }, p, 1.2).is_err());
        assert!(hyp_sides(&delta, &PhiFunction::Reciprocal { alpha: 1.0 }, p, 3.5).is_err());
    }

    #[test]
    fn hyp_paley_endpoint_closed_form() {
        // μ = 1 on [0, 1): lhs^p = ∫_0^1 t^{p-2} dt = 1/(p-1)
        let mu = StepFunction::new(vec![Step {
            value: 1.0,
            width: 1.0,
        }])
        .unwrap();
        for p in [1.25, 1.5, 1.75] {
            let got = hyp_lhs(&mu, &PhiFunction::Reciprocal { alpha: 1.0 }, p, p).unwrap();
            assert!((got - (1.0 / (p - 1.0)).powf(1.0 / p)).abs() < 1e-12);
        }
    }

    #[test]
    fn hyp_at_conjugate_endpoint_is_lorentz_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let d4 = GroupModel::builtin("D4").unwrap();
        let phis = [
            PhiFunction::Reciprocal { alpha: 1.0 },
            PhiFunction::Indicator { length: 0.25 },
            PhiFunction::Power { alpha: 2.0 },
        ];
        for _ in 0..20 {
            let f = GroupFunction::random(d4.clone(), &mut rng).unwrap();
            let mu =
                mu_from_spectrum(&spectrum_of_symbol(&fourier_transform(&f).unwrap()).unwrap());
            for p in [1.25, 1.5, 2.0] {
                let pc = conjugate_exponent(p);
                let norm = lorentz_norm(&mu, pc, pc).unwrap();
                for phi in &phis {
                    let sides = hyp_sides(&f, phi, p, pc).unwrap();
                    assert_eq!(sides.lhs, norm);
                    assert_eq!(sides.rhs_factor, 1.0);
                }
            }
        }
    }

    #[test]
    fn sobolev_and_counting_examples() {
        let lambda = EigenvalueSequence::synthetic(2.0, 100).unwrap();
        let phi = PhiFunction::Reciprocal { alpha: 0.7 };
        assert_eq!(
            sobolev_sup(&lambda, &phi, 2.0, 2.0, 100).unwrap(),
            phi.eval(lambda.values()[0])
        );
        assert!(sobolev_sup(&lambda, &phi, 1.5, 3.0, 101).is_err());

        assert_eq!(counting_function(&lambda, 0.5), 0);
        assert_eq!(counting_function(&lambda, 1e9), 100);
        for level in [1.3f64, 2.7, 5.05, 9.99] {
            let expected = (level * level).floor() as usize;
            assert_eq!(counting_function(&lambda, level), expected, "level {level}");
        }
        let cubic = EigenvalueSequence::synthetic(3.0, 5000).unwrap();
        assert_eq!(
            counting_function(&cubic, 7.3),
            (7.3f64.powi(3)).floor() as usize
        );
    }

    #[test]
    fn torus_spectrum() {
        let one = EigenvalueSequence::torus(1, 7).unwrap();
        let expected: Vec<f64> = [0, 1, 1, 4, 4, 9, 9]
            .iter()
            .map(|&n2: &i32| (1.0 + 4.0 * PI * PI * n2 as f64).sqrt())
            .collect();
        assert_eq!(one.values(), expected.as_slice());
        let two = EigenvalueSequence::torus(2, 1000).unwrap();
        assert_eq!(two.len(), 1000);
        // Weyl law on T²: N(λ) ≈ π (λ/2π)²
        let level = two.values()[999];
        let weyl = PI * (level / (2.0 * PI)).powi(2);
        assert!((counting_function(&two, level) as f64 / weyl - 1.0).abs() < 0.1);

        let wide = EigenvalueSequence::torus_with_period(1, 5, 2.0 * PI).unwrap();
        assert_eq!(wide.values()[..3], [1.0, 2f64.sqrt(), 2f64.sqrt()]);
        assert!(EigenvalueSequence::torus_with_period(1, 5, 0.0).is_err());
    }

    #[test]
    fn eigenvalue_csv() {
        let text = "lambda\n1.0\n2.0\n2.0\n3.5\n";
        let seq = EigenvalueSequence::from_csv(text.as_bytes(), Some(2.0)).unwrap();
        assert_eq!(seq.values(), &[1.0, 2.0, 2.0, 3.5]);
        assert!(EigenvalueSequence::from_csv("2\n1\n".as_bytes(), None).is_err());
        assert!(EigenvalueSequence::from_csv("1\nx\n".as_bytes(), None).is_err());
    }

    #[test]
    fn comparison_examples() {
        let su2 = GroupModel::su2(10);
        let (p, q) = (1.5, 3.0);
        let r = 1.0 / weak_exponent(p, q);
        let proj = BlockSymbol::su2_projection(su2.clone(), 2).unwrap();
        let (lhs, rhs) = comparison_pair(&proj, p, q).unwrap();
        assert!((lhs - 14f64.powf(1.0 / r)).abs() < 1e-12);
        assert!((rhs - 14f64.powf(1.0 / r)).abs() < 1e-12);
        assert_eq!(
            comparison_pair(&BlockSymbol::zero(su2.clone()), p, q).unwrap(),
            (0.0, 0.0)
        );
        assert!(comparison_pair(&proj, 2.0, 2.0).is_err());
    }

    #[test]
    fn phi_spec_rejects_unknown_fields() {
        let ok: PhiSpec = serde_json::from_str(r#"{"kind":"reciprocal","alpha":1.0}"#).unwrap();
        assert_eq!(ok, PhiSpec::Reciprocal { alpha: 1.0 });
        assert!(
            serde_json::from_str::<PhiSpec>(r#"{"kind":"reciprocal","alpha":1.0,"x":2}"#).is_err()
        );
        assert!(PhiFunction::from_spec(&PhiSpec::Power { alpha: -1.0 }).is_err());
        assert!(PhiFunction::from_spec(&PhiSpec::Step {
            steps: vec![[1.0, 1.0], [2.0, 1.0]]
        })
        .is_err());
    }

    fn scalar_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec(
            (
                (0u32..8).prop_map(|v| v as f64 * 0.25),
                (1u32..6).prop_map(|w| w as f64 * 0.125),
            ),
            0..16,
        )
    }

    proptest! {
        #[test]
        fn level_set_equals_weak_norm(entries in scalar_strategy(), pq in prop::sample::select(vec![(1.5, 3.0), (1.25, 4.0), (2.0, 2.5), (1.1, 2.0)])) {
            let (p, q) = pq;
            let d = ScalarSymbolData::new(entries).unwrap();
            let a = level_set_functional(&d, p, q).unwrap();
            let r = 1.0 / weak_exponent(p, q);
            let b = weak_norm(&mu_from_spectrum(&d.as_spectrum()), r).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.max(b).max(1e-300));
        }

        #[test]
        fn level_set_matches_scan(entries in scalar_strategy()) {
            let d = ScalarSymbolData::new(entries.clone()).unwrap();
            let got = level_set_functional(&d, 1.5, 3.0).unwrap();
            let oracle = level_sup_oracle(&entries, weak_exponent(1.5, 3.0));
            prop_assert!((got - oracle).abs() <= 1e-12 * got.max(1e-300));
        }

        #[test]
        fn functionals_are_homogeneous(entries in scalar_strategy(), c in 0.1f64..10.0) {
            let d = ScalarSymbolData::new(entries.clone()).unwrap();
            let scaled = ScalarSymbolData::new(entries.iter().map(|&(v, w)| (v * c, w)).collect()).unwrap();
            let a = level_set_functional(&d, 1.5, 3.0).unwrap() * c;
            let b = level_set_functional(&scaled, 1.5, 3.0).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
        }
    }
}
