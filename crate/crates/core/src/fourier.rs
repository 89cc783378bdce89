//! Group Fourier transform, inversion, multipliers and the convolution
//! operator `L_f h = f ∗ h` as an explicit matrix.
//!
//! Convention on finite groups: `f̂(π)_{ij} = w Σ_g f(g) conj(π_{ij}(g))`
//! with `w` the Haar weight. Since `g ↦ conj(π(g))` is a representation,
//! `(f ∗ h)^ = f̂ · ĥ` blockwise and a symbol `σ` acting by `ĥ ↦ σ ĥ`
//! commutes with right translations. On abelian models this is the usual
//! `Σ_x f(x) conj(χ(x))`. On the torus the coefficients are
//! `∫ f(x) e^{-2πi m·x} dx`, computed by FFT and truncated to `|m_i| ≤ K`.

use std::io::{Read, Write};
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::group_models::{FiniteGroupTable, GroupModel, ModelKind, TorusModel};
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

fn same_model(a: &Arc<GroupModel>, b: &Arc<GroupModel>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A function on the group: one value per finite element or torus grid point.
#[derive(Debug, Clone)]
pub struct GroupFunction {
    model: Arc<GroupModel>,
    values: Vec<C64>,
}

impl GroupFunction {
    pub fn new(model: Arc<GroupModel>, values: Vec<C64>) -> Result<Self> {
        let n = model.function_len()?;
        if values.len() != n {
            return Err(Error::invalid(format!(
                "function has {} values, model has {n} points",
                values.len()
            )));
        }
        Ok(GroupFunction { model, values })
    }

    pub fn zeros(model: Arc<GroupModel>) -> Result<Self> {
        let n = model.function_len()?;
        Ok(GroupFunction {
            model,
            values: vec![ZERO; n],
        })
    }

    pub fn constant(model: Arc<GroupModel>, c: C64) -> Result<Self> {
        let n = model.function_len()?;
        Ok(GroupFunction {
            model,
            values: vec![c; n],
        })
    }

    /// `δ_e`; finite groups only, since it is not band-limited on the torus.
    pub fn delta(model: Arc<GroupModel>) -> Result<Self> {
        let e = model
            .finite_table()
            .ok_or_else(|| Error::UnsupportedModel("delta needs a finite group".into()))?
            .identity();
        let mut f = Self::zeros(model)?;
        f.values[e] = C64::new(1.0, 0.0);
        Ok(f)
    }

    /// Standard complex Gaussian samples. On the torus the result is made
    /// band-limited by drawing Fourier coefficients instead.
    pub fn random<R: Rng + ?Sized>(model: Arc<GroupModel>, rng: &mut R) -> Result<Self> {
        if model.torus_model().is_some() {
            let sigma = BlockSymbol::random_scalar(model, rng)?;
            return inverse_transform(&sigma);
        }
        let n = model.function_len()?;
        let values = (0..n).map(|_| complex_normal(rng)).collect();
        Ok(GroupFunction { model, values })
    }

    pub fn model(&self) -> &Arc<GroupModel> {
        &self.model
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn scale(&self, c: C64) -> Self {
        GroupFunction {
            model: self.model.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// CSV rows `(label, row, col, re, im)` with `row = col = 0`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let labels = self.model.point_labels()?;
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["label", "row", "col", "re", "im"])?;
        for (label, v) in labels.iter().zip(&self.values) {
            w.write_record([
                label.as_str(),
                "0",
                "0",
                &v.re.to_string(),
                &v.im.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the CSV written by [`GroupFunction::write_csv`]; absent points are zero.
    pub fn read_csv<R: Read>(model: Arc<GroupModel>, reader: R) -> Result<Self> {
        let labels = model.point_labels()?;
        let mut f = Self::zeros(model)?;
        for rec in read_entries(reader)? {
            let idx = labels
                .iter()
                .position(|l| *l == rec.label)
                .ok_or_else(|| Error::invalid(format!("unknown point label `{}`", rec.label)))?;
            if rec.row != 0 || rec.col != 0 {
                return Err(Error::invalid("function rows must use row = col = 0"));
            }
            f.values[idx] = C64::new(rec.re, rec.im);
        }
        Ok(f)
    }
}

/// A multiplier symbol: one `d × d` complex matrix per dual block, in the
/// model's dual order.
#[derive(Debug, Clone)]
pub struct BlockSymbol {
    model: Arc<GroupModel>,
    blocks: Vec<DMatrix<C64>>,
}

impl BlockSymbol {
    pub fn new(model: Arc<GroupModel>, blocks: Vec<DMatrix<C64>>) -> Result<Self> {
        let dual = model.dual_measure();
        if blocks.len() != dual.len() {
            return Err(Error::invalid(format!(
                "symbol has {} blocks, model dual has {}",
                blocks.len(),
                dual.len()
            )));
        }
        for (m, b) in blocks.iter().zip(dual) {
            if m.nrows() != b.dim || m.ncols() != b.dim {
                return Err(Error::invalid(format!(
                    "block `{}` must be {}x{}, got {}x{}",
                    b.label,
                    b.dim,
                    b.dim,
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(BlockSymbol { model, blocks })
    }

    pub fn from_fn(
        model: Arc<GroupModel>,
        mut block: impl FnMut(usize, usize) -> DMatrix<C64>,
    ) -> Result<Self> {
        let blocks = model
            .dual_measure()
            .iter()
            .enumerate()
            .map(|(i, b)| block(i, b.dim))
            .collect();
        Self::new(model, blocks)
    }

    pub fn identity(model: Arc<GroupModel>) -> Self {
        let blocks = model
            .dual_measure()
            .iter()
            .map(|b| DMatrix::identity(b.dim, b.dim))
            .collect();
        BlockSymbol { model, blocks }
    }

    pub fn zero(model: Arc<GroupModel>) -> Self {
        let blocks = model
            .dual_measure()
            .iter()
            .map(|b| DMatrix::zeros(b.dim, b.dim))
            .collect();
        BlockSymbol { model, blocks }
    }

    /// Scalar symbol on a model whose blocks are all one-dimensional.
    pub fn from_scalars(model: Arc<GroupModel>, values: &[C64]) -> Result<Self> {
        if !model.is_abelian() {
            return Err(Error::invalid("scalar symbols need one-dimensional blocks"));
        }
        if values.len() != model.dual_measure().len() {
            return Err(Error::invalid(format!(
                "expected {} scalar values, got {}",
                model.dual_measure().len(),
                values.len()
            )));
        }
        let blocks = values
            .iter()
            .map(|&v| DMatrix::from_element(1, 1, v))
            .collect();
        Ok(BlockSymbol { model, blocks })
    }

    /// Identity on the trivial block, zero elsewhere: the projection onto
    /// constants (averaging) on compact models.
    pub fn averaging(model: Arc<GroupModel>) -> Result<Self> {
        let trivial = model
            .trivial_block()
            .ok_or_else(|| Error::UnsupportedModel("model has no trivial block".into()))?;
        let mut s = Self::zero(model);
        s.blocks[trivial][(0, 0)] = C64::new(1.0, 0.0);
        Ok(s)
    }

    /// Identity on the `SU(2)` levels `2l ≤ max_two_l`, zero above.
    pub fn su2_projection(model: Arc<GroupModel>, max_two_l: u32) -> Result<Self> {
        if !matches!(model.kind(), ModelKind::Su2(_)) {
            return Err(Error::UnsupportedModel(
                "projection symbols need the SU(2) dual".into(),
            ));
        }
        Self::from_fn(model, |i, d| {
            if i as u32 <= max_two_l {
                DMatrix::identity(d, d)
            } else {
                DMatrix::zeros(d, d)
            }
        })
    }

    /// Dense blocks with standard complex Gaussian entries.
    pub fn random_dense<R: Rng + ?Sized>(model: Arc<GroupModel>, rng: &mut R) -> Self {
        let blocks = model
            .dual_measure()
            .iter()
            .map(|b| DMatrix::from_fn(b.dim, b.dim, |_, _| complex_normal(rng)))
            .collect();
        BlockSymbol { model, blocks }
    }

    fn random_scalar<R: Rng + ?Sized>(model: Arc<GroupModel>, rng: &mut R) -> Result<Self> {
        let values: Vec<C64> = (0..model.dual_measure().len())
            .map(|_| complex_normal(rng))
            .collect();
        Self::from_scalars(model, &values)
    }

    pub fn model(&self) -> &Arc<GroupModel> {
        &self.model
    }

    pub fn blocks(&self) -> &[DMatrix<C64>] {
        &self.blocks
    }

    pub fn blocks_mut(&mut self) -> &mut [DMatrix<C64>] {
        &mut self.blocks
    }

    pub fn scale(&self, c: C64) -> Self {
        BlockSymbol {
            model: self.model.clone(),
            blocks: self.blocks.iter().map(|m| m * c).collect(),
        }
    }

    /// Blockwise conjugate transpose.
    pub fn adjoint(&self) -> Self {
        BlockSymbol {
            model: self.model.clone(),
            blocks: self.blocks.iter().map(|m| m.adjoint()).collect(),
        }
    }

    /// Blockwise product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if !same_model(&self.model, &other.model) {
            return Err(Error::ModelMismatch);
        }
        Ok(BlockSymbol {
            model: self.model.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a - b).camax())
            .fold(0.0, f64::max)
    }

    /// CSV rows `(label, row, col, re, im)`, one per matrix entry.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["label", "row", "col", "re", "im"])?;
        for (b, m) in self.model.dual_measure().iter().zip(&self.blocks) {
            for i in 0..b.dim {
                for j in 0..b.dim {
                    let v = m[(i, j)];
                    w.write_record([
                        b.label.as_str(),
                        &i.to_string(),
                        &j.to_string(),
                        &v.re.to_string(),
                        &v.im.to_string(),
                    ])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the CSV written by [`BlockSymbol::write_csv`]; absent entries are zero.
    pub fn read_csv<R: Read>(model: Arc<GroupModel>, reader: R) -> Result<Self> {
        let mut s = Self::zero(model);
        for rec in read_entries(reader)? {
            let (idx, dim) = s
                .model
                .dual_measure()
                .iter()
                .enumerate()
                .find(|(_, b)| b.label == rec.label)
                .map(|(i, b)| (i, b.dim))
                .ok_or_else(|| Error::invalid(format!("unknown block label `{}`", rec.label)))?;
            if rec.row >= dim || rec.col >= dim {
                return Err(Error::invalid(format!(
                    "entry ({}, {}) outside block `{}` of dimension {dim}",
                    rec.row, rec.col, rec.label
                )));
            }
            s.blocks[idx][(rec.row, rec.col)] = C64::new(rec.re, rec.im);
        }
        Ok(s)
    }
}

#[derive(serde::Deserialize)]
struct EntryRecord {
    label: String,
    row: usize,
    col: usize,
    re: f64,
    im: f64,
}

fn read_entries<R: Read>(reader: R) -> Result<Vec<EntryRecord>> {
    let mut r = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for rec in r.deserialize() {
        out.push(rec?);
    }
    Ok(out)
}

pub(crate) fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

pub fn fourier_transform(f: &GroupFunction) -> Result<BlockSymbol> {
    let model = f.model.clone();
    let blocks = match model.kind() {
        ModelKind::FiniteAbelian(g) => finite_transform(g.table(), &f.values),
        ModelKind::FiniteTable(t) => finite_transform(t, &f.values),
        ModelKind::Torus(t) => torus_transform(t, &f.values),
        ModelKind::Su2(_) => {
            return Err(Error::UnsupportedModel(
                "no group elements on the truncated SU(2) dual".into(),
            ))
        }
    };
    Ok(BlockSymbol { model, blocks })
}

fn finite_transform(table: &FiniteGroupTable, values: &[C64]) -> Vec<DMatrix<C64>> {
    let w = table.haar_weight();
    table
        .irreps()
        .iter()
        .map(|irrep| {
            let mut acc = DMatrix::<C64>::zeros(irrep.dim, irrep.dim);
            for (fg, m) in values.iter().zip(&irrep.matrices) {
                if *fg == ZERO {
                    continue;
                }
                for (a, b) in acc.iter_mut().zip(m.iter()) {
                    *a += fg * b.conj();
                }
            }
            acc * C64::new(w, 0.0)
        })
        .collect()
}

fn torus_transform(torus: &TorusModel, values: &[C64]) -> Vec<DMatrix<C64>> {
    let mut data = values.to_vec();
    torus.fft(&mut data, false);
    let norm = 1.0 / torus.num_points() as f64;
    torus
        .frequencies()
        .iter()
        .map(|m| DMatrix::from_element(1, 1, data[torus.grid_index(m)] * norm))
        .collect()
}

pub fn inverse_transform(sigma: &BlockSymbol) -> Result<GroupFunction> {
    let model = sigma.model.clone();
    let values = match model.kind() {
        ModelKind::FiniteAbelian(g) => finite_inverse(g.table(), &sigma.blocks),
        ModelKind::FiniteTable(t) => finite_inverse(t, &sigma.blocks),
        ModelKind::Torus(t) => torus_inverse(t, &sigma.blocks),
        ModelKind::Su2(_) => {
            return Err(Error::UnsupportedModel(
                "no group elements on the truncated SU(2) dual".into(),
            ))
        }
    };
    Ok(GroupFunction { model, values })
}

/// `f(g) = (1 / (w |G|)) Σ_π d_π Σ_{ij} f̂(π)_{ij} π_{ij}(g)`.
fn finite_inverse(table: &FiniteGroupTable, blocks: &[DMatrix<C64>]) -> Vec<C64> {
    let n = table.order();
    let scale = 1.0 / (table.haar_weight() * n as f64);
    let mut out = vec![ZERO; n];
    for (irrep, block) in table.irreps().iter().zip(blocks) {
        let d = irrep.dim as f64;
        for (g, m) in irrep.matrices.iter().enumerate() {
            let s: C64 = block.iter().zip(m.iter()).map(|(a, b)| a * b).sum();
            out[g] += s * d;
        }
    }
    out.iter_mut().for_each(|v| *v *= scale);
    out
}

fn torus_inverse(torus: &TorusModel, blocks: &[DMatrix<C64>]) -> Vec<C64> {
    let mut data = vec![ZERO; torus.num_points()];
    for (m, b) in torus.frequencies().iter().zip(blocks) {
        data[torus.grid_index(m)] = b[(0, 0)];
    }
    torus.fft(&mut data, true);
    data
}

/// Matrix of `h ↦ f ∗ h` in the delta basis: entry `(x, y) = w f(x y⁻¹)`.
pub fn convolution_matrix(f: &GroupFunction) -> Result<DMatrix<C64>> {
    let table = f
        .model
        .finite_table()
        .ok_or_else(|| Error::UnsupportedModel("convolution matrix needs a finite group".into()))?;
    let n = table.order();
    let w = table.haar_weight();
    Ok(DMatrix::from_fn(n, n, |x, y| {
        f.values[table.mul(x, table.inverse(y))] * w
    }))
}

/// `(f ∗ h)(x) = w Σ_g f(g) h(g⁻¹ x)` by direct summation.
pub fn convolve(f: &GroupFunction, h: &GroupFunction) -> Result<GroupFunction> {
    if !same_model(&f.model, &h.model) {
        return Err(Error::ModelMismatch);
    }
    let table = f
        .model
        .finite_table()
        .ok_or_else(|| Error::UnsupportedModel("direct convolution needs a finite group".into()))?;
    let n = table.order();
    let w = table.haar_weight();
    let values = (0..n)
        .map(|x| {
            (0..n)
                .map(|g| f.values[g] * h.values[table.mul(table.inverse(g), x)])
                .sum::<C64>()
                * w
        })
        .collect();
    Ok(GroupFunction {
        model: f.model.clone(),
        values,
    })
}

/// `Af = F⁻¹(σ · f̂)` blockwise.
pub fn apply_multiplier(sigma: &BlockSymbol, f: &GroupFunction) -> Result<GroupFunction> {
    if !same_model(&sigma.model, &f.model) {
        return Err(Error::ModelMismatch);
    }
    let fhat = fourier_transform(f)?;
    let product = sigma.compose(&fhat)?;
    inverse_transform(&product)
}

/// Right translation `(R_a f)(x) = f(x a)`. On the torus `a` is a flat grid
/// index and the translation is the corresponding grid shift.
pub fn translate_right(f: &GroupFunction, a: usize) -> Result<GroupFunction> {
    let model = f.model.clone();
    let values = if let Some(table) = model.finite_table() {
        if a >= table.order() {
            return Err(Error::invalid("translation element out of range"));
        }
        (0..table.order())
            .map(|x| f.values[table.mul(x, a)])
            .collect()
    } else if let Some(torus) = model.torus_model() {
        let shift = torus_coords(torus, a);
        (0..torus.num_points())
            .map(|x| {
                let c = torus_coords(torus, x);
                let moved: Vec<usize> = c
                    .iter()
                    .zip(&shift)
                    .map(|(ci, si)| (ci + si) % torus.grid())
                    .collect();
                f.values[moved.iter().fold(0, |acc, &v| acc * torus.grid() + v)]
            })
            .collect()
    } else {
        return Err(Error::UnsupportedModel(
            "translations need group elements".into(),
        ));
    };
    Ok(GroupFunction { model, values })
}

/// Left translation `(λ_a f)(x) = f(a⁻¹ x)`; finite groups only.
pub fn translate_left(f: &GroupFunction, a: usize) -> Result<GroupFunction> {
    let table = f
        .model
        .finite_table()
        .ok_or_else(|| Error::UnsupportedModel("left translation needs a finite group".into()))?;
    if a >= table.order() {
        return Err(Error::invalid("translation element out of range"));
    }
    let inv = table.inverse(a);
    let values = (0..table.order())
        .map(|x| f.values[table.mul(inv, x)])
        .collect();
    Ok(GroupFunction {
        model: f.model.clone(),
        values,
    })
}

fn torus_coords(torus: &TorusModel, mut idx: usize) -> Vec<usize> {
    let mut c = vec![0; torus.dim()];
    for axis in (0..torus.dim()).rev() {
        c[axis] = idx % torus.grid();
        idx /= torus.grid();
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn finite_models() -> Vec<Arc<GroupModel>> {
        ["Z6", "S3", "D4", "Q8"]
            .iter()
            .map(|n| GroupModel::builtin(n).unwrap())
            .collect()
    }

    #[test]
    fn delta_transforms_to_identity() {
        let z2 = GroupModel::builtin("Z2").unwrap();
        let f = GroupFunction::new(z2.clone(), vec![c(1.0), c(0.0)]).unwrap();
        let fhat = fourier_transform(&f).unwrap();
        assert_eq!(fhat.blocks()[0][(0, 0)], c(1.0));
        assert_eq!(fhat.blocks()[1][(0, 0)], c(1.0));
        for model in finite_models() {
            let d = GroupFunction::delta(model.clone()).unwrap();
            let fhat = fourier_transform(&d).unwrap();
            assert!(fhat.max_abs_diff(&BlockSymbol::identity(model)) < 1e-14);
        }
    }

    #[test]
    fn plancherel_on_finite_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for model in finite_models() {
            let f = GroupFunction::random(model.clone(), &mut rng).unwrap();
            let fhat = fourier_transform(&f).unwrap();
            let lhs: f64 = f.values().iter().map(|v| v.norm_sqr()).sum();
            let rhs: f64 = model
                .dual_measure()
                .iter()
                .zip(fhat.blocks())
                .map(|(b, m)| b.weight * m.norm_squared())
                .sum();
            assert!((lhs - rhs).abs() < 1e-10 * lhs, "{}", model.descriptor());
        }
    }

    #[test]
    fn round_trip_z6_and_identity_symbol() {
        let z6 = GroupModel::builtin("Z6").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let f = GroupFunction::random(z6.clone(), &mut rng).unwrap();
            let back = inverse_transform(&fourier_transform(&f).unwrap()).unwrap();
            worst = worst.max(f.max_abs_diff(&back));
        }
        assert!(worst < 1e-10);

        let s3 = GroupModel::builtin("S3").unwrap();
        let f = inverse_transform(&BlockSymbol::identity(s3.clone())).unwrap();
        assert!(f.max_abs_diff(&GroupFunction::delta(s3).unwrap()) < 1e-14);
    }

    #[test]
    fn convolution_matrix_examples() {
        let z2 = GroupModel::builtin("Z2").unwrap();
        let f = GroupFunction::new(z2, vec![c(2.0), c(5.0)]).unwrap();
        let m = convolution_matrix(&f).unwrap();
        assert_eq!(
            m,
            DMatrix::from_row_slice(2, 2, &[c(2.0), c(5.0), c(5.0), c(2.0)])
        );

        let s3 = GroupModel::builtin("S3").unwrap();
        let d = GroupFunction::delta(s3).unwrap();
        assert_eq!(convolution_matrix(&d).unwrap(), DMatrix::identity(6, 6));

        let torus = GroupModel::torus(1, 2, None).unwrap();
        let f = GroupFunction::zeros(torus).unwrap();
        assert!(matches!(
            convolution_matrix(&f),
            Err(Error::UnsupportedModel(_))
        ));
    }

    #[test]
    fn convolution_theorem() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for model in finite_models() {
            let f = GroupFunction::random(model.clone(), &mut rng).unwrap();
            let h = GroupFunction::random(model.clone(), &mut rng).unwrap();
            let lhs = fourier_transform(&convolve(&f, &h).unwrap()).unwrap();
            let rhs = fourier_transform(&f)
                .unwrap()
                .compose(&fourier_transform(&h).unwrap())
                .unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-10, "{}", model.descriptor());
            // the matrix oracle computes the same convolution
            let via_matrix = convolution_matrix(&f).unwrap()
                * DMatrix::from_column_slice(h.values().len(), 1, h.values());
            let direct = convolve(&f, &h).unwrap();
            let err = direct
                .values()
                .iter()
                .zip(via_matrix.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12);
        }
    }

    #[test]
    fn multipliers_commute_with_right_translations() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for model in finite_models() {
            let sigma = BlockSymbol::random_dense(model.clone(), &mut rng);
            let f = GroupFunction::random(model.clone(), &mut rng).unwrap();
            let n = model.function_len().unwrap();
            let a = rng.random_range(0..n);
            let lhs = apply_multiplier(&sigma, &translate_right(&f, a).unwrap()).unwrap();
            let rhs = translate_right(&apply_multiplier(&sigma, &f).unwrap(), a).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-10, "{}", model.descriptor());
        }
        let torus = GroupModel::torus(2, 2, None).unwrap();
        let sigma = BlockSymbol::random_dense(torus.clone(), &mut rng);
        let f = GroupFunction::random(torus.clone(), &mut rng).unwrap();
        let lhs = apply_multiplier(&sigma, &translate_right(&f, 13).unwrap()).unwrap();
        let rhs = translate_right(&apply_multiplier(&sigma, &f).unwrap(), 13).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }

    #[test]
    fn convolution_operators_commute_with_right_translations() {
        let s3 = GroupModel::builtin("S3").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = GroupFunction::random(s3.clone(), &mut rng).unwrap();
        let h = GroupFunction::random(s3.clone(), &mut rng).unwrap();
        for a in 0..6 {
            let lhs = convolve(&f, &translate_right(&h, a).unwrap()).unwrap();
            let rhs = translate_right(&convolve(&f, &h).unwrap(), a).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
        // but not with left translations in general
        let lhs = convolve(&f, &translate_left(&h, 1).unwrap()).unwrap();
        let rhs = translate_left(&convolve(&f, &h).unwrap(), 1).unwrap();
        assert!(lhs.max_abs_diff(&rhs) > 1e-6);
    }

    #[test]
    fn multiplier_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s3 = GroupModel::builtin("S3").unwrap();
        let f = GroupFunction::random(s3.clone(), &mut rng).unwrap();
        let same = apply_multiplier(&BlockSymbol::identity(s3.clone()), &f).unwrap();
        assert!(same.max_abs_diff(&f) < 1e-12);
        let zero = apply_multiplier(&BlockSymbol::zero(s3), &f).unwrap();
        assert!(zero.values().iter().all(|v| v.norm() < 1e-14));

        let z5 = GroupModel::builtin("Z5").unwrap();
        let f = GroupFunction::random(z5.clone(), &mut rng).unwrap();
        let mean = f.values().iter().sum::<C64>() / 5.0;
        let avg = apply_multiplier(&BlockSymbol::averaging(z5).unwrap(), &f).unwrap();
        assert!(avg.values().iter().all(|v| (v - mean).norm() < 1e-12));

        let z3 = GroupModel::builtin("Z3").unwrap();
        assert!(matches!(
            apply_multiplier(&BlockSymbol::identity(z3), &f),
            Err(Error::ModelMismatch)
        ));
    }

    #[test]
    fn haar_weighted_group_keeps_identities() {
        use crate::group_models::FiniteAbelianGroup;
        let model = Arc::new(GroupModel::new(ModelKind::FiniteAbelian(
            FiniteAbelianGroup::with_haar_weight(&[4], 0.5).unwrap(),
        )));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = GroupFunction::random(model.clone(), &mut rng).unwrap();
        let h = GroupFunction::random(model.clone(), &mut rng).unwrap();
        let fhat = fourier_transform(&f).unwrap();
        let back = inverse_transform(&fhat).unwrap();
        assert!(back.max_abs_diff(&f) < 1e-12);
        let l2: f64 = f.values().iter().map(|v| v.norm_sqr() * 0.5).sum();
        let plancherel: f64 = model
            .dual_measure()
            .iter()
            .zip(fhat.blocks())
            .map(|(b, m)| b.weight * m.norm_squared())
            .sum();
        assert!((l2 - plancherel).abs() < 1e-12 * l2);
        let lhs = fourier_transform(&convolve(&f, &h).unwrap()).unwrap();
        let rhs = fhat.compose(&fourier_transform(&h).unwrap()).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }

    #[test]
    fn torus_transforms_are_exact_on_band_limited_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (dim, k) in [(1, 5), (2, 3)] {
            let torus = GroupModel::torus(dim, k, None).unwrap();
            let coeffs = BlockSymbol::random_dense(torus.clone(), &mut rng);
            let f = inverse_transform(&coeffs).unwrap();
            let back = fourier_transform(&f).unwrap();
            assert!(back.max_abs_diff(&coeffs) < 1e-12);
            let l2: f64 =
                f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / f.values().len() as f64;
            let plancherel: f64 = coeffs.blocks().iter().map(|m| m.norm_squared()).sum();
            assert!((l2 - plancherel).abs() < 1e-10 * l2);
        }
        let torus = GroupModel::torus(1, 3, None).unwrap();
        let one = GroupFunction::constant(torus.clone(), c(1.0)).unwrap();
        let hat = fourier_transform(&one).unwrap();
        let trivial = torus.trivial_block().unwrap();
        assert!((hat.blocks()[trivial][(0, 0)] - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn su2_has_no_functions() {
        let su2 = GroupModel::su2(2);
        assert!(matches!(
            GroupFunction::zeros(su2.clone()),
            Err(Error::UnsupportedModel(_))
        ));
        assert!(matches!(
            inverse_transform(&BlockSymbol::identity(su2)),
            Err(Error::UnsupportedModel(_))
        ));
    }

    #[test]
    fn csv_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let d4 = GroupModel::builtin("D4").unwrap();
        let sigma = BlockSymbol::random_dense(d4.clone(), &mut rng);
        let mut buf = Vec::new();
        sigma.write_csv(&mut buf).unwrap();
        let back = BlockSymbol::read_csv(d4.clone(), buf.as_slice()).unwrap();
        assert_eq!(back.max_abs_diff(&sigma), 0.0);

        let f = GroupFunction::random(d4.clone(), &mut rng).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let back = GroupFunction::read_csv(d4.clone(), buf.as_slice()).unwrap();
        assert_eq!(back.max_abs_diff(&f), 0.0);

        let bad = "label,row,col,re,im\nnope,0,0,1,0\n";
        assert!(BlockSymbol::read_csv(d4, bad.as_bytes()).is_err());
    }
}
