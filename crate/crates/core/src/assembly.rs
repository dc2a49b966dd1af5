//! Assembly of the two discrete fractional Sturm-Liouville operators.
//!
//! Both are realized as `A · diag(p) · Aᵀ + diag(q)`, with `A` the left
//! fractional difference and `Aᵀ` its right-sided adjoint. Only the upper
//! triangle is summed; the lower one is a mirror, so the result is exactly
//! symmetric. The weight `r` stays out of the matrix and enters through the
//! generalized eigenproblem.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fracops::{
    delta_left_diff_matrix, nabla_left_diff_matrix, Grid, OperatorMatrix, OperatorMeta,
    OperatorSource, Side,
};
use crate::kernels::FractionalOrder;

/// Which fractional calculus the operator is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    /// Riemann-Liouville nabla form, `∇_a^μ(p · _b∇^μ x) + q x`.
    Rl,
    /// Grünwald-Letnikov delta form, `Δ_-^μ(p · Δ_+^μ x) + q x`.
    Gl,
}

impl std::fmt::Display for Form {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Form::Rl => "rl",
            Form::Gl => "gl",
        })
    }
}

/// A coefficient given as a constant or as explicit samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Profile {
    Constant(f64),
    Values(Vec<f64>),
}

impl Profile {
    pub(crate) fn sample(&self, name: &str, n: usize) -> Result<Vec<f64>> {
        match self {
            Profile::Constant(c) => Ok(vec![*c; n]),
            Profile::Values(v) if v.len() == n => Ok(v.clone()),
            Profile::Values(v) => Err(Error::Validation(format!(
                "{name} has {} values but the grid has {n} points",
                v.len()
            ))),
        }
    }
}

/// Coefficient functions before they are tied to a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSpec {
    pub p: Profile,
    pub q: Profile,
    pub r: Profile,
}

impl Default for CoefficientSpec {
    fn default() -> Self {
        Self {
            p: Profile::Constant(1.0),
            q: Profile::Constant(0.0),
            r: Profile::Constant(1.0),
        }
    }
}

/// Sampled `p > 0`, real `q` and `r > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coefficients {
    p: Vec<f64>,
    q: Vec<f64>,
    r: Vec<f64>,
}

fn check_positive(name: &str, v: &[f64]) -> Result<()> {
    let bad: Vec<usize> = v
        .iter()
        .enumerate()
        .filter(|(_, x)| !(x.is_finite() && **x > 0.0))
        .map(|(i, _)| i)
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(format!("{name} must be positive; offending indices {bad:?}")))
    }
}

impl Coefficients {
    pub fn new(p: Vec<f64>, q: Vec<f64>, r: Vec<f64>) -> Result<Self> {
        if p.len() != q.len() || p.len() != r.len() || p.is_empty() {
            return Err(Error::Validation(format!(
                "coefficient lengths differ or are empty: p {}, q {}, r {}",
                p.len(),
                q.len(),
                r.len()
            )));
        }
        check_positive("p", &p)?;
        check_positive("r", &r)?;
        if let Some(i) = q.iter().position(|x| !x.is_finite()) {
            return Err(Error::Validation(format!("q must be finite; offending index {i}")));
        }
        Ok(Self { p, q, r })
    }

    pub fn constant(n: usize, p: f64, q: f64, r: f64) -> Result<Self> {
        Self::new(vec![p; n], vec![q; n], vec![r; n])
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// Copy with every `q[i]` shifted by `c`.
    pub fn shift_q(&self, c: f64) -> Result<Self> {
        Self::new(self.p.clone(), self.q.iter().map(|x| x + c).collect(), self.r.clone())
    }
}

/// Broadcasts constants and validates the result against `grid`.
pub fn sample_coefficients(spec: &CoefficientSpec, grid: &Grid) -> Result<Coefficients> {
    let n = grid.size();
    Coefficients::new(spec.p.sample("p", n)?, spec.q.sample("q", n)?, spec.r.sample("r", n)?)
}

/// An assembled operator together with the data it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct SlProblem {
    pub coeffs: Coefficients,
    pub grid: Grid,
    pub mu: FractionalOrder,
    pub form: Form,
    pub matrix: OperatorMatrix,
}

impl SlProblem {
    pub fn weight(&self) -> &[f64] {
        self.coeffs.r()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// `A · diag(p) · Aᵀ + diag(q)` for lower-triangular `A`, bit-exactly symmetric.
fn sandwich(a: &DMatrix<f64>, p: &[f64], q: &[f64]) -> DMatrix<f64> {
    let n = a.nrows();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            // A is lower triangular: only k ≤ min(i, j) = i contributes.
            let mut acc = 0.0;
            for k in 0..=i {
                acc += a[(i, k)] * p[k] * a[(j, k)];
            }
            m[(i, j)] = acc;
            m[(j, i)] = acc;
        }
        m[(i, i)] += q[i];
    }
    m
}

fn assemble_with(
    coeffs: &Coefficients,
    grid: &Grid,
    mu: FractionalOrder,
    form: Form,
    left: OperatorMatrix,
) -> Result<SlProblem> {
    if coeffs.len() != grid.size() {
        return Err(Error::Validation(format!(
            "coefficients have {} samples but the grid has {} points",
            coeffs.len(),
            grid.size()
        )));
    }
    let entries = sandwich(left.entries(), coeffs.p(), coeffs.q());
    let source = match form {
        Form::Rl => OperatorSource::SturmLiouvilleNabla,
        Form::Gl => OperatorSource::SturmLiouvilleDelta,
    };
    let matrix = OperatorMatrix::new(entries, OperatorMeta { source, mu, grid: *grid, side: Side::Left })?;
    Ok(SlProblem { coeffs: coeffs.clone(), grid: *grid, mu, form, matrix })
}

/// Nabla (Riemann-Liouville) operator on `{a+1, …, b-1}`; requires `h = 1`.
pub fn assemble_l1(coeffs: &Coefficients, grid: &Grid, mu: FractionalOrder) -> Result<SlProblem> {
    let left = nabla_left_diff_matrix(grid, mu)?;
    assemble_with(coeffs, grid, mu, Form::Rl, left)
}

/// Delta (Grünwald-Letnikov) operator on `{0, …, N}` with step `h`.
pub fn assemble_l2(coeffs: &Coefficients, grid: &Grid, mu: FractionalOrder) -> Result<SlProblem> {
    let left = delta_left_diff_matrix(grid, mu)?;
    assemble_with(coeffs, grid, mu, Form::Gl, left)
}

pub fn assemble(form: Form, coeffs: &Coefficients, grid: &Grid, mu: FractionalOrder) -> Result<SlProblem> {
    match form {
        Form::Rl => assemble_l1(coeffs, grid, mu),
        Form::Gl => assemble_l2(coeffs, grid, mu),
    }
}

/// `⟨u, v⟩_r = Σ r[i] u[i] v[i]`.
pub fn weighted_inner(u: &[f64], v: &[f64], r: &[f64]) -> Result<f64> {
    if u.len() != v.len() || u.len() != r.len() {
        return Err(Error::Argument(format!(
            "weighted inner product of lengths {}, {} with weight {}",
            u.len(),
            v.len(),
            r.len()
        )));
    }
    Ok(u.iter().zip(v).zip(r).map(|((a, b), w)| w * a * b).sum())
}
