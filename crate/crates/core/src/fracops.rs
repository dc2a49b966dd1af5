//! Fractional sum and difference operators as dense triangular Toeplitz
//! matrices on a finite lattice.
//!
//! Functions are zero-extended outside the grid. Left operators are lower
//! triangular; every right operator is the exact transpose of its left
//! counterpart, so the summation-by-parts identities hold up to the rounding
//! of the two dot products.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{gl_weights, rl_diff_kernel, rl_sum_kernel, FractionalOrder, ToeplitzKernel};

/// Which lattice convention a [`Grid`] follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridFamily {
    /// Interior points `{a+1, …, b-1}` of the nabla family, unit step.
    Nabla,
    /// All points `{start, …, end}` of the delta family, step `h`.
    Delta,
}

/// A uniform integer lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: i64,
    pub end: i64,
    pub h: f64,
    pub family: GridFamily,
}

impl Grid {
    /// Interior lattice `{a+1, …, b-1}` with unit step. Needs `b ≥ a + 2`.
    pub fn nabla(a: i64, b: i64) -> Result<Self> {
        if b <= a.saturating_add(1) {
            return Err(Error::Validation(format!(
                "nabla grid needs b >= a + 2 for a non-empty interior, got a={a}, b={b}"
            )));
        }
        Ok(Self { start: a, end: b, h: 1.0, family: GridFamily::Nabla })
    }

    /// Lattice `{0, …, n}` with step `h > 0`.
    pub fn delta(n: i64, h: f64) -> Result<Self> {
        if n < 0 {
            return Err(Error::Validation(format!("delta grid needs n >= 0, got {n}")));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::Validation(format!("grid step h must be positive, got {h}")));
        }
        Ok(Self { start: 0, end: n, h, family: GridFamily::Delta })
    }

    /// Grid whose operators are `size × size`.
    pub fn with_size(family: GridFamily, size: usize, h: f64) -> Result<Self> {
        if size == 0 {
            return Err(Error::Validation("grid size must be at least 1".into()));
        }
        match family {
            GridFamily::Nabla => Self::nabla(0, size as i64 + 1),
            GridFamily::Delta => Self::delta(size as i64 - 1, h),
        }
    }

    /// Number of active points, which is the operator dimension.
    pub fn size(&self) -> usize {
        match self.family {
            GridFamily::Nabla => (self.end - self.start - 1) as usize,
            GridFamily::Delta => (self.end - self.start + 1) as usize,
        }
    }

    /// Integer labels of the active points.
    pub fn points(&self) -> impl Iterator<Item = i64> {
        let first = match self.family {
            GridFamily::Nabla => self.start + 1,
            GridFamily::Delta => self.start,
        };
        first..first + self.size() as i64
    }

    fn require_unit_step(&self) -> Result<()> {
        if self.family != GridFamily::Nabla || self.h != 1.0 {
            return Err(Error::Validation(
                "nabla fractional operators need a nabla grid with h = 1".into(),
            ));
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        let ok = match self.family {
            GridFamily::Nabla => self.end > self.start + 1 && self.h == 1.0,
            GridFamily::Delta => self.end >= self.start && self.h.is_finite() && self.h > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Validation(format!("invalid grid {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// What an [`OperatorMatrix`] realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorSource {
    NablaLeftSum,
    NablaLeftDiff,
    NablaRightDiff,
    DeltaLeftDiff,
    DeltaRightDiff,
    /// Nabla Sturm-Liouville operator `∇_a^μ(p · _b∇^μ x) + q x`.
    SturmLiouvilleNabla,
    /// Delta Sturm-Liouville operator `Δ_-^μ(p · Δ_+^μ x) + q x`.
    SturmLiouvilleDelta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorMeta {
    pub source: OperatorSource,
    pub mu: FractionalOrder,
    pub grid: Grid,
    pub side: Side,
}

/// Dense square operator matrix together with where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<f64>,
    meta: OperatorMeta,
}

impl OperatorMatrix {
    pub fn new(entries: DMatrix<f64>, meta: OperatorMeta) -> Result<Self> {
        if !entries.is_square() || entries.nrows() != meta.grid.size() {
            return Err(Error::Argument(format!(
                "operator is {}x{} but the grid has {} points",
                entries.nrows(),
                entries.ncols(),
                meta.grid.size()
            )));
        }
        Ok(Self { entries, meta })
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn meta(&self) -> &OperatorMeta {
        &self.meta
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        norm_inf(&self.entries)
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::Argument(format!(
                "vector of length {} applied to a {}x{} operator",
                x.len(),
                self.dim(),
                self.dim()
            )));
        }
        let y = &self.entries * DVector::from_column_slice(x);
        Ok(y.as_slice().to_vec())
    }

    /// The adjoint operator: transposed entries, opposite side.
    pub fn transpose(&self) -> Self {
        let source = match self.meta.source {
            OperatorSource::NablaLeftDiff => OperatorSource::NablaRightDiff,
            OperatorSource::NablaRightDiff => OperatorSource::NablaLeftDiff,
            OperatorSource::DeltaLeftDiff => OperatorSource::DeltaRightDiff,
            OperatorSource::DeltaRightDiff => OperatorSource::DeltaLeftDiff,
            other => other,
        };
        let side = match self.meta.side {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        };
        Self {
            entries: self.entries.transpose(),
            meta: OperatorMeta { source, side, ..self.meta },
        }
    }
}

pub(crate) fn norm_inf(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn lower_toeplitz(kernel: &ToeplitzKernel, scale: f64, n: usize) -> DMatrix<f64> {
    debug_assert!(kernel.len() >= n);
    DMatrix::from_fn(n, n, |i, j| if j <= i { kernel[i - j] * scale } else { 0.0 })
}

fn left_operator(
    grid: &Grid,
    mu: FractionalOrder,
    kernel: ToeplitzKernel,
    scale: f64,
    source: OperatorSource,
) -> OperatorMatrix {
    let n = grid.size();
    OperatorMatrix {
        entries: lower_toeplitz(&kernel, scale, n),
        meta: OperatorMeta { source, mu, grid: *grid, side: Side::Left },
    }
}

/// Nabla left fractional sum `∇_a^{-μ}` on `{a+1, …, b-1}`.
pub fn nabla_left_sum_matrix(grid: &Grid, mu: FractionalOrder) -> Result<OperatorMatrix> {
    grid.validate()?;
    grid.require_unit_step()?;
    let m = grid.size() - 1;
    Ok(left_operator(grid, mu, rl_sum_kernel(mu, m), 1.0, OperatorSource::NablaLeftSum))
}

/// R-L nabla left fractional difference `∇_a^μ` (n = 1).
pub fn nabla_left_diff_matrix(grid: &Grid, mu: FractionalOrder) -> Result<OperatorMatrix> {
    grid.validate()?;
    grid.require_unit_step()?;
    let m = grid.size() - 1;
    Ok(left_operator(grid, mu, rl_diff_kernel(mu, m), 1.0, OperatorSource::NablaLeftDiff))
}

/// R-L nabla right fractional difference `_b∇^μ`, the exact transpose of
/// [`nabla_left_diff_matrix`].
pub fn nabla_right_diff_matrix(grid: &Grid, mu: FractionalOrder) -> Result<OperatorMatrix> {
    Ok(nabla_left_diff_matrix(grid, mu)?.transpose())
}

/// G-L delta left fractional difference `Δ_-^μ` on `{0, …, N}`, scaled by `h^{-μ}`.
pub fn delta_left_diff_matrix(grid: &Grid, mu: FractionalOrder) -> Result<OperatorMatrix> {
    grid.validate()?;
    if grid.family != GridFamily::Delta {
        return Err(Error::Validation("delta fractional operators need a delta grid".into()));
    }
    let m = grid.size() - 1;
    let scale = grid.h.powf(-mu.get());
    Ok(left_operator(grid, mu, gl_weights(mu, m), scale, OperatorSource::DeltaLeftDiff))
}

/// G-L delta right fractional difference `Δ_+^μ`, the exact transpose of
/// [`delta_left_diff_matrix`].
pub fn delta_right_diff_matrix(grid: &Grid, mu: FractionalOrder) -> Result<OperatorMatrix> {
    Ok(delta_left_diff_matrix(grid, mu)?.transpose())
}

/// Matrix-free lower-triangular Toeplitz application:
/// `y[i] = scale · Σ_{k ≤ i} kernel[k] · x[i-k]`.
///
/// Coefficients past the end of `kernel` are taken as zero.
pub fn apply_operator(kernel: &[f64], scale: f64, x: &[f64]) -> Result<Vec<f64>> {
    if kernel.is_empty() {
        return Err(Error::Argument("empty kernel".into()));
    }
    Ok((0..x.len())
        .map(|i| {
            let acc: f64 = kernel
                .iter()
                .take(i + 1)
                .enumerate()
                .map(|(k, c)| c * x[i - k])
                .sum();
            scale * acc
        })
        .collect())
}

/// Matrix-free upper-triangular (transposed) application:
/// `y[i] = scale · Σ_k kernel[k] · x[i+k]`.
pub fn apply_operator_transposed(kernel: &[f64], scale: f64, x: &[f64]) -> Result<Vec<f64>> {
    if kernel.is_empty() {
        return Err(Error::Argument("empty kernel".into()));
    }
    let n = x.len();
    Ok((0..n)
        .map(|i| {
            let acc: f64 = kernel
                .iter()
                .take(n - i)
                .enumerate()
                .map(|(k, c)| c * x[i + k])
                .sum();
            scale * acc
        })
        .collect())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `|Σ_s u(s)(left·v)(s) − Σ_s v(s)(right·u)(s)|`.
pub fn sbp_residual(
    left: &OperatorMatrix,
    right: &OperatorMatrix,
    u: &[f64],
    v: &[f64],
) -> Result<f64> {
    sbp_residual_dense(left.entries(), right.entries(), u, v)
}

/// [`sbp_residual`] on bare matrices.
pub fn sbp_residual_dense(
    left: &DMatrix<f64>,
    right: &DMatrix<f64>,
    u: &[f64],
    v: &[f64],
) -> Result<f64> {
    let n = left.nrows();
    if !left.is_square() || right.shape() != left.shape() || u.len() != n || v.len() != n {
        return Err(Error::Argument(format!(
            "sbp residual needs matching sizes: left {:?}, right {:?}, u {}, v {}",
            left.shape(),
            right.shape(),
            u.len(),
            v.len()
        )));
    }
    let lv = left * DVector::from_column_slice(v);
    let ru = right * DVector::from_column_slice(u);
    Ok((dot(u, lv.as_slice()) - dot(v, ru.as_slice())).abs())
}
