//! Desk-scale realizations of a group `G` together with its dual.
//!
//! Every model exposes its dual as a list of blocks `(label, dimension,
//! trace weight)`. The trace of a block-diagonal multiplier is
//! `τ(A) = Σ_blocks weight · tr(σ_A(block))`, so the weights carry both the
//! Plancherel measure and the normalization of `τ`.
//!
//! Normalizations:
//! * finite groups carry a Haar weight `w` per point (counting measure by
//!   default) and block weights `d_π / (w |G|)`, which gives `τ(L_f) = f(e)`;
//! * the torus `T^d` has Haar mass 1 and the counting measure on `Z^d`;
//! * the truncated `SU(2)` dual uses Haar mass 1, hence block weights `d_l`;
//! * the Euclidean dual grid weighs every lattice point by the cell volume.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Tolerance for validating user-supplied representation data.
pub const VALIDATION_TOL: f64 = 1e-8;

/// One block of the dual: an irreducible representation (or character,
/// or frequency) with its dimension and trace weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualBlock {
    pub label: String,
    pub dim: usize,
    pub weight: f64,
}

/// An irreducible unitary representation given by its matrices `π(g)`,
/// listed in the element order of the owning table.
#[derive(Debug, Clone, PartialEq)]
pub struct Irrep {
    pub label: String,
    pub dim: usize,
    pub matrices: Vec<DMatrix<C64>>,
}

/// A finite group given by its multiplication table and a complete set of
/// inequivalent irreducible unitary representations.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroupTable {
    name: String,
    elements: Vec<String>,
    mult: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    irreps: Vec<Irrep>,
    haar_weight: f64,
}

impl FiniteGroupTable {
    /// Builds and validates a table. `mult` is row-major: `mult[a * n + b]`
    /// is the index of `a·b`.
    pub fn from_parts(
        name: impl Into<String>,
        elements: Vec<String>,
        mult: Vec<usize>,
        irreps: Vec<Irrep>,
    ) -> Result<Self> {
        let table = Self::assemble(name.into(), elements, mult, irreps, 1.0)?;
        table.validate_irreps()?;
        Ok(table)
    }

    fn assemble(
        name: String,
        elements: Vec<String>,
        mult: Vec<usize>,
        irreps: Vec<Irrep>,
        haar_weight: f64,
    ) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::MalformedTable("group has no elements".into()));
        }
        if mult.len() != n * n {
            return Err(Error::MalformedTable(format!(
                "multiplication table has {} entries, expected {}",
                mult.len(),
                n * n
            )));
        }
        if let Some(bad) = mult.iter().find(|&&c| c >= n) {
            return Err(Error::MalformedTable(format!(
                "multiplication table entry {bad} out of range"
            )));
        }
        if !(haar_weight.is_finite() && haar_weight > 0.0) {
            return Err(Error::invalid("Haar weight must be positive and finite"));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mult[e * n + g] == g && mult[g * n + e] == g))
            .ok_or_else(|| Error::MalformedTable("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| mult[g * n + h] == identity && mult[h * n + g] == identity)
                .ok_or_else(|| {
                    Error::MalformedTable(format!("element `{}` has no inverse", elements[g]))
                })?;
            inverses.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mult[a * n + b];
                for c in 0..n {
                    if mult[ab * n + c] != mult[a * n + mult[b * n + c]] {
                        return Err(Error::MalformedTable(format!(
                            "multiplication is not associative at ({}, {}, {})",
                            elements[a], elements[b], elements[c]
                        )));
                    }
                }
            }
        }
        for irrep in &irreps {
            if irrep.dim == 0 {
                return Err(Error::MalformedTable(format!(
                    "irrep `{}` has dimension 0",
                    irrep.label
                )));
            }
            if irrep.matrices.len() != n {
                return Err(Error::MalformedTable(format!(
                    "irrep `{}` lists {} matrices for {} elements",
                    irrep.label,
                    irrep.matrices.len(),
                    n
                )));
            }
            if irrep
                .matrices
                .iter()
                .any(|m| m.nrows() != irrep.dim || m.ncols() != irrep.dim)
            {
                return Err(Error::MalformedTable(format!(
                    "irrep `{}` has a matrix of the wrong shape",
                    irrep.label
                )));
            }
        }
        for (i, a) in irreps.iter().enumerate() {
            if irreps[..i].iter().any(|b| b.label == a.label) {
                return Err(Error::MalformedTable(format!(
                    "duplicate irrep label `{}`",
                    a.label
                )));
            }
        }
        Ok(FiniteGroupTable {
            name,
            elements,
            mult,
            identity,
            inverses,
            irreps,
            haar_weight,
        })
    }

    /// Checks the dimension sum, unitarity, the homomorphism property and
    /// Schur orthogonality, in that order, to [`VALIDATION_TOL`].
    pub fn validate_irreps(&self) -> Result<()> {
        let n = self.order();
        let dim_sum: usize = self.irreps.iter().map(|r| r.dim * r.dim).sum();
        if dim_sum != n {
            return Err(Error::DimensionSum {
                found: dim_sum,
                expected: n,
            });
        }
        for irrep in &self.irreps {
            let id = DMatrix::<C64>::identity(irrep.dim, irrep.dim);
            for (g, m) in irrep.matrices.iter().enumerate() {
                if (m.adjoint() * m - &id).camax() > VALIDATION_TOL {
                    return Err(Error::NonUnitary {
                        label: irrep.label.clone(),
                        element: self.elements[g].clone(),
                    });
                }
            }
        }
        for irrep in &self.irreps {
            for a in 0..n {
                for b in 0..n {
                    let lhs = &irrep.matrices[self.mul(a, b)];
                    let rhs = &irrep.matrices[a] * &irrep.matrices[b];
                    if (lhs - rhs).camax() > VALIDATION_TOL {
                        return Err(Error::Homomorphism {
                            label: irrep.label.clone(),
                            left: self.elements[a].clone(),
                            right: self.elements[b].clone(),
                        });
                    }
                }
            }
        }
        let inv_n = 1.0 / n as f64;
        for (ia, a) in self.irreps.iter().enumerate() {
            for b in &self.irreps[ia..] {
                let same = a.label == b.label;
                for i in 0..a.dim {
                    for j in 0..a.dim {
                        for k in 0..b.dim {
                            for l in 0..b.dim {
                                let inner: C64 = (0..n)
                                    .map(|g| a.matrices[g][(i, j)] * b.matrices[g][(k, l)].conj())
                                    .sum::<C64>()
                                    * inv_n;
                                let expected = if same && i == k && j == l {
                                    1.0 / a.dim as f64
                                } else {
                                    0.0
                                };
                                if (inner - expected).norm() > VALIDATION_TOL {
                                    return Err(Error::Orthogonality {
                                        label: a.label.clone(),
                                        other: b.label.clone(),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Shipped tables: `Z<N>` (for example `Z6`), `S3`, `D4` and `Q8`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "S3" => dihedral("S3", 3),
            "D4" => dihedral("D4", 4),
            "Q8" => quaternion(),
            _ => {
                let n = name
                    .strip_prefix('Z')
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| Error::invalid(format!("unknown built-in group `{name}`")))?;
                Ok(FiniteAbelianGroup::new(&[n])?.table)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TableFile = serde_json::from_str(text)?;
        if file.order != file.elements.len() {
            return Err(Error::MalformedTable(format!(
                "order {} disagrees with {} listed elements",
                file.order,
                file.elements.len()
            )));
        }
        let irreps = file
            .irreps
            .into_iter()
            .map(|r| {
                let matrices = r
                    .matrices
                    .iter()
                    .map(|rows| {
                        if rows.len() != r.dim || rows.iter().any(|row| row.len() != r.dim) {
                            return Err(Error::MalformedTable(format!(
                                "irrep `{}` has a matrix of the wrong shape",
                                r.label
                            )));
                        }
                        Ok(DMatrix::from_fn(r.dim, r.dim, |i, j| {
                            C64::new(rows[i][j][0], rows[i][j][1])
                        }))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Irrep {
                    label: r.label,
                    dim: r.dim,
                    matrices,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(
            file.name.unwrap_or_else(|| "user".into()),
            file.elements,
            file.mult_table,
            irreps,
        )
    }

    pub fn to_json(&self) -> Result<String> {
        let file = TableFile {
            name: Some(self.name.clone()),
            order: self.order(),
            elements: self.elements.clone(),
            mult_table: self.mult.clone(),
            irreps: self
                .irreps
                .iter()
                .map(|r| IrrepFile {
                    label: r.label.clone(),
                    dim: r.dim,
                    matrices: r
                        .matrices
                        .iter()
                        .map(|m| {
                            (0..r.dim)
                                .map(|i| (0..r.dim).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                                .collect()
                        })
                        .collect(),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order() + b]
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn haar_weight(&self) -> f64 {
        self.haar_weight
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Index of the trivial representation, if present.
    pub fn trivial_irrep(&self) -> Option<usize> {
        self.irreps.iter().position(|r| {
            r.dim == 1
                && r.matrices
                    .iter()
                    .all(|m| (m[(0, 0)] - C64::new(1.0, 0.0)).norm() <= VALIDATION_TOL)
        })
    }

    fn dual(&self) -> Vec<DualBlock> {
        let scale = 1.0 / (self.haar_weight * self.order() as f64);
        self.irreps
            .iter()
            .map(|r| DualBlock {
                label: r.label.clone(),
                dim: r.dim,
                weight: r.dim as f64 * scale,
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    order: usize,
    elements: Vec<String>,
    mult_table: Vec<usize>,
    irreps: Vec<IrrepFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IrrepFile {
    label: String,
    dim: usize,
    matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

/// Dihedral group of order `2n`, elements `r^k s^j` stored at `k + n j`.
fn dihedral(name: &str, n: usize) -> Result<FiniteGroupTable> {
    let order = 2 * n;
    let split = |g: usize| (g % n, g / n);
    let elements = (0..order)
        .map(|g| {
            let (k, j) = split(g);
            let r = match k {
                0 => String::new(),
                1 => "r".to_string(),
                _ => format!("r{k}"),
            };
            let s = if j == 1 { "s" } else { "" };
            if r.is_empty() && s.is_empty() {
                "e".to_string()
            } else {
                format!("{r}{s}")
            }
        })
        .collect::<Vec<_>>();
    let mut mult = Vec::with_capacity(order * order);
    for a in 0..order {
        for b in 0..order {
            let (ka, ja) = split(a);
            let (kb, jb) = split(b);
            // r^ka s^ja r^kb s^jb = r^(ka ± kb) s^(ja + jb)
            let k = if ja == 0 { ka + kb } else { ka + n - kb } % n;
            mult.push(k + n * ((ja + jb) % 2));
        }
    }
    let mut irreps = Vec::new();
    let mut one_dim = |label: &str, a: f64, b: f64| {
        let matrices = (0..order)
            .map(|g| {
                let (k, j) = split(g);
                DMatrix::from_element(1, 1, C64::new(a.powi(k as i32) * b.powi(j as i32), 0.0))
            })
            .collect();
        irreps.push(Irrep {
            label: label.to_string(),
            dim: 1,
            matrices,
        });
    };
    one_dim("trivial", 1.0, 1.0);
    one_dim("sign", 1.0, -1.0);
    if n.is_multiple_of(2) {
        one_dim("rot-sign", -1.0, 1.0);
        one_dim("rot-sign-sign", -1.0, -1.0);
    }
    for h in 1..=(n - 1) / 2 {
        let matrices = (0..order)
            .map(|g| {
                let (k, j) = split(g);
                let theta = 2.0 * PI * (h * k) as f64 / n as f64;
                let (sin, cos) = theta.sin_cos();
                let refl = if j == 1 { -1.0 } else { 1.0 };
                DMatrix::from_row_slice(
                    2,
                    2,
                    &[
                        C64::new(cos, 0.0),
                        C64::new(-sin * refl, 0.0),
                        C64::new(sin, 0.0),
                        C64::new(cos * refl, 0.0),
                    ],
                )
            })
            .collect();
        let label = if n == 3 {
            "standard".to_string()
        } else {
            format!("rho{h}")
        };
        irreps.push(Irrep {
            label,
            dim: 2,
            matrices,
        });
    }
    FiniteGroupTable::from_parts(name, elements, mult, irreps)
}

/// Quaternion group: `±1, ±i, ±j, ±k` stored as `2u + (sign < 0)` with
/// units `u = 1, i, j, k`.
fn quaternion() -> Result<FiniteGroupTable> {
    // unit products u·v = sign · w
    const UNIT_MUL: [[(i8, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    let units = ["1", "i", "j", "k"];
    let elements = (0..8)
        .map(|g| {
            let sign = if g % 2 == 1 { "-" } else { "" };
            format!("{sign}{}", units[g / 2])
        })
        .collect::<Vec<_>>();
    let sign_of = |g: usize| if g % 2 == 1 { -1i8 } else { 1 };
    let mut mult = Vec::with_capacity(64);
    for a in 0..8 {
        for b in 0..8 {
            let (s, w) = UNIT_MUL[a / 2][b / 2];
            let sign = s * sign_of(a) * sign_of(b);
            mult.push(2 * w + usize::from(sign < 0));
        }
    }
    let mut irreps = Vec::new();
    for (label, a, b) in [
        ("trivial", 1.0, 1.0),
        ("chi_i", 1.0, -1.0),
        ("chi_j", -1.0, 1.0),
        ("chi_k", -1.0, -1.0),
    ] {
        // value on the units 1, i, j, k; the sign is in the kernel
        let values = [1.0, a, b, a * b];
        irreps.push(Irrep {
            label: label.to_string(),
            dim: 1,
            matrices: (0..8)
                .map(|g| DMatrix::from_element(1, 1, C64::new(values[g / 2], 0.0)))
                .collect(),
        });
    }
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let im = C64::new(0.0, 1.0);
    let base = [
        [one, zero, zero, one],
        [im, zero, zero, -im],
        [zero, one, -one, zero],
        [zero, im, im, zero],
    ];
    irreps.push(Irrep {
        label: "spin".to_string(),
        dim: 2,
        matrices: (0..8)
            .map(|g| DMatrix::from_row_slice(2, 2, &base[g / 2]) * C64::new(sign_of(g) as f64, 0.0))
            .collect(),
    });
    FiniteGroupTable::from_parts("Q8", elements, mult, irreps)
}

/// `Z_{N1} × … × Z_{Nd}` with Haar weight `w` per point.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteAbelianGroup {
    orders: Vec<usize>,
    table: FiniteGroupTable,
}

impl FiniteAbelianGroup {
    pub fn new(orders: &[usize]) -> Result<Self> {
        Self::with_haar_weight(orders, 1.0)
    }

    pub fn with_haar_weight(orders: &[usize], haar_weight: f64) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::invalid(
                "finite abelian group needs at least one factor",
            ));
        }
        if orders.contains(&0) {
            return Err(Error::invalid("cyclic factor of order 0"));
        }
        let n: usize = orders.iter().product();
        let coords = |mut g: usize| {
            let mut c = vec![0usize; orders.len()];
            for (axis, &m) in orders.iter().enumerate().rev() {
                c[axis] = g % m;
                g /= m;
            }
            c
        };
        let index = |c: &[usize]| c.iter().zip(orders).fold(0, |acc, (&x, &m)| acc * m + x);
        let fmt = |c: &[usize]| {
            if c.len() == 1 {
                c[0].to_string()
            } else {
                let parts: Vec<_> = c.iter().map(|x| x.to_string()).collect();
                format!("({})", parts.join(","))
            }
        };
        let all: Vec<Vec<usize>> = (0..n).map(coords).collect();
        let elements = all.iter().map(|c| fmt(c)).collect();
        let mut mult = Vec::with_capacity(n * n);
        for a in &all {
            for b in &all {
                let sum: Vec<usize> = a
                    .iter()
                    .zip(b)
                    .zip(orders)
                    .map(|((x, y), m)| (x + y) % m)
                    .collect();
                mult.push(index(&sum));
            }
        }
        let irreps = all
            .iter()
            .map(|m| Irrep {
                label: format!("chi{}", fmt(m)),
                dim: 1,
                matrices: all
                    .iter()
                    .map(|x| {
                        let phase: f64 = m
                            .iter()
                            .zip(x)
                            .zip(orders)
                            .map(|((&mi, &xi), &ni)| ((mi * xi) % ni) as f64 / ni as f64)
                            .sum();
                        DMatrix::from_element(1, 1, C64::from_polar(1.0, 2.0 * PI * phase))
                    })
                    .collect(),
            })
            .collect();
        let name = if orders.len() == 1 {
            format!("Z{}", orders[0])
        } else {
            let parts: Vec<_> = orders.iter().map(|m| format!("Z{m}")).collect();
            parts.join("x")
        };
        let table = FiniteGroupTable::assemble(name, elements, mult, irreps, haar_weight)?;
        Ok(FiniteAbelianGroup {
            orders: orders.to_vec(),
            table,
        })
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn table(&self) -> &FiniteGroupTable {
        &self.table
    }
}

/// `T^d` with Haar mass 1, sampled on an `M^d` grid, dual truncated to
/// frequencies `|m_i| ≤ K`.
#[derive(Clone)]
pub struct TorusModel {
    dim: usize,
    truncation: usize,
    grid: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl TorusModel {
    /// Grid defaults to `4(K + 1)` points per axis.
    pub fn new(dim: usize, truncation: usize, grid: Option<usize>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("torus dimension must be positive"));
        }
        let grid = grid.unwrap_or(4 * (truncation + 1));
        if grid < 2 * truncation + 1 {
            return Err(Error::invalid(format!(
                "grid of {grid} points cannot resolve frequencies up to {truncation}"
            )));
        }
        let mut planner = FftPlanner::new();
        Ok(TorusModel {
            dim,
            truncation,
            grid,
            forward: planner.plan_fft_forward(grid),
            inverse: planner.plan_fft_inverse(grid),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn num_points(&self) -> usize {
        self.grid.pow(self.dim as u32)
    }

    /// Frequencies in lexicographic order, each axis running `-K..=K`.
    pub fn frequencies(&self) -> Vec<Vec<i64>> {
        let k = self.truncation as i64;
        let side = 2 * self.truncation + 1;
        (0..side.pow(self.dim as u32))
            .map(|mut idx| {
                let mut m = vec![0i64; self.dim];
                for axis in (0..self.dim).rev() {
                    m[axis] = (idx % side) as i64 - k;
                    idx /= side;
                }
                m
            })
            .collect()
    }

    /// Flat grid index holding the coefficient of frequency `m`.
    pub(crate) fn grid_index(&self, m: &[i64]) -> usize {
        let g = self.grid as i64;
        m.iter()
            .fold(0, |acc, &mi| acc * self.grid + mi.rem_euclid(g) as usize)
    }

    /// In-place multidimensional FFT over the sampling grid (unnormalized).
    pub(crate) fn fft(&self, data: &mut [C64], inverse: bool) {
        let plan = if inverse {
            &self.inverse
        } else {
            &self.forward
        };
        let m = self.grid;
        let mut line = vec![C64::new(0.0, 0.0); m];
        for axis in 0..self.dim {
            let stride = m.pow((self.dim - 1 - axis) as u32);
            let block = stride * m;
            for outer in (0..data.len()).step_by(block) {
                for inner in 0..stride {
                    let start = outer + inner;
                    for (i, v) in line.iter_mut().enumerate() {
                        *v = data[start + i * stride];
                    }
                    plan.process(&mut line);
                    for (i, v) in line.iter().enumerate() {
                        data[start + i * stride] = *v;
                    }
                }
            }
        }
    }

    fn dual(&self) -> Vec<DualBlock> {
        self.frequencies()
            .iter()
            .map(|m| DualBlock {
                label: format_frequency(m),
                dim: 1,
                weight: 1.0,
            })
            .collect()
    }
}

fn format_frequency(m: &[i64]) -> String {
    if m.len() == 1 {
        m[0].to_string()
    } else {
        let parts: Vec<_> = m.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

impl fmt::Debug for TorusModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusModel")
            .field("dim", &self.dim)
            .field("truncation", &self.truncation)
            .field("grid", &self.grid)
            .finish()
    }
}

impl PartialEq for TorusModel {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.truncation == other.truncation && self.grid == other.grid
    }
}

/// Lattice `hZ^n ∩ [-R, R]^n` discretizing `dξ` on `R^n`; scalar symbols only.
#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanGridDual {
    dim: usize,
    spacing: f64,
    extent: f64,
}

impl EuclideanGridDual {
    pub fn new(dim: usize, spacing: f64, extent: f64) -> Result<Self> {
        if dim == 0
            || !(spacing > 0.0)
            || !(extent > 0.0)
            || !spacing.is_finite()
            || !extent.is_finite()
        {
            return Err(Error::invalid(
                "Euclidean grid needs positive dimension, spacing and extent",
            ));
        }
        Ok(EuclideanGridDual {
            dim,
            spacing,
            extent,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cell_weight(&self) -> f64 {
        self.spacing.powi(self.dim as i32)
    }

    fn per_axis(&self) -> usize {
        // tolerate R/h landing a hair below an integer
        (self.extent / self.spacing + 1e-9).floor() as usize
    }

    pub fn num_points(&self) -> usize {
        (2 * self.per_axis() + 1).pow(self.dim as u32)
    }

    /// Calls `visit` on every lattice point.
    pub fn for_each_point(&self, mut visit: impl FnMut(&[f64])) {
        let half = self.per_axis() as i64;
        let side = (2 * half + 1) as usize;
        let mut xi = vec![0.0; self.dim];
        for mut idx in 0..self.num_points() {
            for axis in (0..self.dim).rev() {
                xi[axis] = ((idx % side) as i64 - half) as f64 * self.spacing;
                idx /= side;
            }
            visit(&xi);
        }
    }
}

/// Dual of `SU(2)` truncated at level `L`; levels are stored doubled.
#[derive(Debug, Clone, PartialEq)]
pub struct Su2DualTruncation {
    max_two_l: u32,
}

impl Su2DualTruncation {
    /// `max_two_l = 2L`.
    pub fn new(max_two_l: u32) -> Self {
        Su2DualTruncation { max_two_l }
    }

    pub fn max_two_l(&self) -> u32 {
        self.max_two_l
    }

    pub fn level_label(two_l: u32) -> String {
        if two_l.is_multiple_of(2) {
            format!("l={}", two_l / 2)
        } else {
            format!("l={two_l}/2")
        }
    }

    fn dual(&self) -> Vec<DualBlock> {
        (0..=self.max_two_l)
            .map(|two_l| {
                let d = two_l as usize + 1;
                DualBlock {
                    label: Self::level_label(two_l),
                    dim: d,
                    weight: d as f64,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    FiniteAbelian(FiniteAbelianGroup),
    FiniteTable(FiniteGroupTable),
    Torus(TorusModel),
    Su2(Su2DualTruncation),
}

/// A group model with its cached dual measure.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupModel {
    kind: ModelKind,
    dual: Vec<DualBlock>,
}

impl GroupModel {
    pub fn new(kind: ModelKind) -> Self {
        let dual = match &kind {
            ModelKind::FiniteAbelian(g) => g.table.dual(),
            ModelKind::FiniteTable(t) => t.dual(),
            ModelKind::Torus(t) => t.dual(),
            ModelKind::Su2(s) => s.dual(),
        };
        GroupModel { kind, dual }
    }

    pub fn finite_abelian(orders: &[usize]) -> Result<Arc<Self>> {
        Ok(Arc::new(Self::new(ModelKind::FiniteAbelian(
            FiniteAbelianGroup::new(orders)?,
        ))))
    }

    /// Built-in finite group by name; `Z<N>` resolves to the abelian model.
    pub fn builtin(name: &str) -> Result<Arc<Self>> {
        if let Some(n) = name.strip_prefix('Z').and_then(|s| s.parse::<usize>().ok()) {
            return Self::finite_abelian(&[n]);
        }
        Ok(Arc::new(Self::new(ModelKind::FiniteTable(
            FiniteGroupTable::builtin(name)?,
        ))))
    }

    pub fn from_table(table: FiniteGroupTable) -> Arc<Self> {
        Arc::new(Self::new(ModelKind::FiniteTable(table)))
    }

    pub fn torus(dim: usize, truncation: usize, grid: Option<usize>) -> Result<Arc<Self>> {
        Ok(Arc::new(Self::new(ModelKind::Torus(TorusModel::new(
            dim, truncation, grid,
        )?))))
    }

    pub fn su2(max_two_l: u32) -> Arc<Self> {
        Arc::new(Self::new(ModelKind::Su2(Su2DualTruncation::new(max_two_l))))
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    /// Blocks `(label, dimension, trace weight)` in canonical order.
    pub fn dual_measure(&self) -> &[DualBlock] {
        &self.dual
    }

    /// `τ(I)` as fixed by the model's normalization, computed independently
    /// of the dual weights: `1/w` for finite groups, the number of retained
    /// frequencies on the torus and `Σ d_l²` on the truncated `SU(2)` dual.
    pub fn tau_identity(&self) -> f64 {
        match &self.kind {
            ModelKind::FiniteAbelian(g) => 1.0 / g.table.haar_weight,
            ModelKind::FiniteTable(t) => 1.0 / t.haar_weight,
            ModelKind::Torus(t) => ((2 * t.truncation + 1) as f64).powi(t.dim as i32),
            ModelKind::Su2(s) => (1..=s.max_two_l as u64 + 1).map(|d| (d * d) as f64).sum(),
        }
    }

    pub fn finite_table(&self) -> Option<&FiniteGroupTable> {
        match &self.kind {
            ModelKind::FiniteAbelian(g) => Some(&g.table),
            ModelKind::FiniteTable(t) => Some(t),
            _ => None,
        }
    }

    pub fn torus_model(&self) -> Option<&TorusModel> {
        match &self.kind {
            ModelKind::Torus(t) => Some(t),
            _ => None,
        }
    }

    /// Whether every dual block is one-dimensional.
    pub fn is_abelian(&self) -> bool {
        self.dual.iter().all(|b| b.dim == 1)
    }

    /// Number of samples of a function on the group, if functions exist.
    pub fn function_len(&self) -> Result<usize> {
        match &self.kind {
            ModelKind::FiniteAbelian(g) => Ok(g.table.order()),
            ModelKind::FiniteTable(t) => Ok(t.order()),
            ModelKind::Torus(t) => Ok(t.num_points()),
            ModelKind::Su2(_) => Err(Error::UnsupportedModel(
                "the truncated SU(2) dual carries symbols only".into(),
            )),
        }
    }

    /// Quadrature weight of one sample in `∫_G`.
    pub fn point_weight(&self) -> Result<f64> {
        match &self.kind {
            ModelKind::FiniteAbelian(g) => Ok(g.table.haar_weight),
            ModelKind::FiniteTable(t) => Ok(t.haar_weight),
            ModelKind::Torus(t) => Ok(1.0 / t.num_points() as f64),
            ModelKind::Su2(_) => self.function_len().map(|_| 0.0),
        }
    }

    /// Index of the block of the trivial representation.
    pub fn trivial_block(&self) -> Option<usize> {
        match &self.kind {
            ModelKind::FiniteAbelian(g) => g.table.trivial_irrep(),
            ModelKind::FiniteTable(t) => t.trivial_irrep(),
            ModelKind::Torus(t) => {
                let side = 2 * t.truncation + 1;
                Some((side.pow(t.dim as u32) - 1) / 2)
            }
            ModelKind::Su2(_) => Some(0),
        }
    }

    /// Labels of group points (finite elements or torus grid coordinates).
    pub fn point_labels(&self) -> Result<Vec<String>> {
        match &self.kind {
            ModelKind::FiniteAbelian(g) => Ok(g.table.elements.clone()),
            ModelKind::FiniteTable(t) => Ok(t.elements.clone()),
            ModelKind::Torus(t) => {
                let m = t.grid;
                Ok((0..t.num_points())
                    .map(|mut idx| {
                        let mut c = vec![0i64; t.dim];
                        for axis in (0..t.dim).rev() {
                            c[axis] = (idx % m) as i64;
                            idx /= m;
                        }
                        format_frequency(&c)
                    })
                    .collect())
            }
            ModelKind::Su2(_) => self.function_len().map(|_| Vec::new()),
        }
    }

    /// Short human-readable descriptor used in reports.
    pub fn descriptor(&self) -> String {
        match &self.kind {
            ModelKind::FiniteAbelian(g) => {
                if g.table.haar_weight == 1.0 {
                    g.table.name.clone()
                } else {
                    format!("{} (haar weight {})", g.table.name, g.table.haar_weight)
                }
            }
            ModelKind::FiniteTable(t) => t.name.clone(),
            ModelKind::Torus(t) => format!("T{} K={} M={}", t.dim, t.truncation, t.grid),
            ModelKind::Su2(s) => format!("SU2 2L={}", s.max_two_l),
        }
    }
}

/// `make_finite_abelian` as a plain function.
pub fn make_finite_abelian(orders: &[usize]) -> Result<Arc<GroupModel>> {
    GroupModel::finite_abelian(orders)
}

/// `load_irrep_table` from the JSON file format.
pub fn load_irrep_table(text: &str) -> Result<FiniteGroupTable> {
    FiniteGroupTable::from_json(text)
}
