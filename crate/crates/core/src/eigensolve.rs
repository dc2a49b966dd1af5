//! Generalized symmetric eigenproblem `M x = λ diag(r) x`.
//!
//! The problem is reduced by congruence with `diag(r)^{-1/2}` to a standard
//! symmetric one and solved with cyclic-by-row Jacobi rotations. Eigenvectors
//! come back `r`-orthonormal, sorted by eigenvalue, with a fixed sign.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::assembly::{weighted_inner, SlProblem};
use crate::error::{Error, Result};
use crate::fracops::{norm_inf, OperatorMeta};

pub const MAX_SWEEPS: usize = 100;
/// Stop once the off-diagonal Frobenius norm is below this fraction of ‖S‖_F.
pub const OFF_NORM_RTOL: f64 = 1e-13;
/// Input asymmetry accepted by [`jacobi_eigen`], relative to ‖S‖∞.
pub const SYMMETRY_RTOL: f64 = 1e-12;
/// Eigenvalues closer than this fraction of ‖M‖∞ are treated as one cluster.
pub const CLUSTER_RTOL: f64 = 1e-8;
const SIGN_THRESHOLD: f64 = 1e-12;

/// `max |S - Sᵀ| / ‖S‖∞` (0 for the zero matrix).
pub fn symmetry_residual(s: &DMatrix<f64>) -> f64 {
    let scale = norm_inf(s);
    if scale == 0.0 {
        return 0.0;
    }
    (s - s.transpose()).abs().max() / scale
}

fn off_diagonal_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sum.sqrt()
}

/// In-progress Jacobi diagonalization. Exposed so callers can observe
/// sweep-by-sweep behaviour; [`jacobi_eigen`] drives it to completion.
#[derive(Debug, Clone)]
pub struct Jacobi {
    a: DMatrix<f64>,
    v: DMatrix<f64>,
    target: f64,
    sweeps: usize,
}

impl Jacobi {
    pub fn new(s: &DMatrix<f64>) -> Result<Self> {
        if !s.is_square() {
            return Err(Error::Argument(format!("matrix is {}x{}, not square", s.nrows(), s.ncols())));
        }
        if s.iter().any(|x| !x.is_finite()) {
            return Err(Error::Argument("matrix has non-finite entries".into()));
        }
        let asym = symmetry_residual(s);
        if asym > SYMMETRY_RTOL {
            return Err(Error::Argument(format!(
                "matrix is not symmetric: relative asymmetry {asym:e} exceeds {SYMMETRY_RTOL:e}"
            )));
        }
        let n = s.nrows();
        let target = OFF_NORM_RTOL * s.norm();
        Ok(Self { a: s.clone(), v: DMatrix::identity(n, n), target, sweeps: 0 })
    }

    pub fn off_norm(&self) -> f64 {
        off_diagonal_norm(&self.a)
    }

    /// Frobenius norm of the current iterate; rotations preserve it.
    pub fn frobenius_norm(&self) -> f64 {
        self.a.norm()
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn converged(&self) -> bool {
        self.off_norm() <= self.target
    }

    /// One cyclic-by-row pass over every off-diagonal pair.
    pub fn sweep(&mut self) {
        let n = self.a.nrows();
        for p in 0..n {
            for q in p + 1..n {
                self.rotate(p, q);
            }
        }
        self.sweeps += 1;
    }

    fn rotate(&mut self, p: usize, q: usize) {
        let apq = self.a[(p, q)];
        if apq == 0.0 {
            return;
        }
        let app = self.a[(p, p)];
        let aqq = self.a[(q, q)];
        let theta = (aqq - app) / (2.0 * apq);
        // smaller root of t² + 2θt - 1 = 0
        let t = if theta.abs() > 1e150 {
            0.5 / theta
        } else {
            theta.signum() / (theta.abs() + theta.mul_add(theta, 1.0).sqrt())
        };
        let c = 1.0 / t.mul_add(t, 1.0).sqrt();
        let s = t * c;
        let tau = s / (1.0 + c);

        let n = self.a.nrows();
        for k in 0..n {
            if k == p || k == q {
                continue;
            }
            let akp = self.a[(k, p)];
            let akq = self.a[(k, q)];
            let new_kp = akp - s * (akq + tau * akp);
            let new_kq = akq + s * (akp - tau * akq);
            self.a[(k, p)] = new_kp;
            self.a[(p, k)] = new_kp;
            self.a[(k, q)] = new_kq;
            self.a[(q, k)] = new_kq;
        }
        self.a[(p, p)] = app - t * apq;
        self.a[(q, q)] = aqq + t * apq;
        self.a[(p, q)] = 0.0;
        self.a[(q, p)] = 0.0;

        for k in 0..n {
            let vkp = self.v[(k, p)];
            let vkq = self.v[(k, q)];
            self.v[(k, p)] = vkp - s * (vkq + tau * vkp);
            self.v[(k, q)] = vkq + s * (vkp - tau * vkq);
        }
    }

    /// Runs sweeps until converged or [`MAX_SWEEPS`] is reached.
    pub fn run(mut self) -> Result<SymmetricEigen> {
        while !self.converged() {
            if self.sweeps >= MAX_SWEEPS {
                return Err(Error::Convergence {
                    sweeps: self.sweeps,
                    off_norm: self.off_norm(),
                    target: self.target,
                });
            }
            self.sweep();
        }
        let off_norm = self.off_norm();
        let n = self.a.nrows();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| self.a[(i, i)].total_cmp(&self.a[(j, j)]));
        let values = order.iter().map(|&i| self.a[(i, i)]).collect();
        let vectors = DMatrix::from_fn(n, n, |row, col| self.v[(row, order[col])]);
        Ok(SymmetricEigen { values, vectors, sweeps: self.sweeps, off_norm })
    }
}

/// Eigenpairs of a symmetric matrix, ascending, orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
    pub sweeps: usize,
    pub off_norm: f64,
}

/// Cyclic Jacobi eigensolver for a symmetric matrix.
pub fn jacobi_eigen(s: &DMatrix<f64>) -> Result<SymmetricEigen> {
    Jacobi::new(s)?.run()
}

/// Solver bookkeeping carried alongside the spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionMeta {
    pub sweeps: usize,
    pub off_norm: f64,
    /// Relative asymmetry of the congruence-reduced matrix.
    pub congruence_asymmetry: f64,
    pub operator: Option<OperatorMeta>,
}

/// Real spectrum of `M x = λ diag(r) x` with `r`-orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    values: Vec<f64>,
    vectors: DMatrix<f64>,
    residuals: Vec<f64>,
    meta: DecompositionMeta,
}

impl EigenDecomposition {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column `k` is the eigenvector of `values()[k]`.
    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k).iter().copied().collect()
    }

    /// `‖M x_k − λ_k diag(r) x_k‖∞` per pair.
    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn meta(&self) -> &DecompositionMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Copy with eigenvalue `k` replaced; used to probe residual checks.
    pub fn with_value(&self, k: usize, value: f64) -> Self {
        let mut out = self.clone();
        out.values[k] = value;
        out
    }
}

fn pair_residual(m: &DMatrix<f64>, r: &[f64], lambda: f64, x: &DVector<f64>) -> f64 {
    let mx = m * x;
    mx.iter()
        .zip(x.iter())
        .zip(r)
        .map(|((a, b), w)| (a - lambda * w * b).abs())
        .fold(0.0, f64::max)
}

fn r_normalize(x: &mut DVector<f64>, r: &[f64]) {
    let norm = weighted_inner(x.as_slice(), x.as_slice(), r).unwrap_or(0.0).sqrt();
    if norm > 0.0 {
        *x /= norm;
    }
}

/// Solves `M x = λ diag(r) x` for symmetric `M` and positive `r`.
pub fn generalized_symmetric_eigen(m: &DMatrix<f64>, r: &[f64]) -> Result<EigenDecomposition> {
    let n = m.nrows();
    if !m.is_square() || r.len() != n {
        return Err(Error::Argument(format!(
            "matrix {}x{} with weight of length {}",
            m.nrows(),
            m.ncols(),
            r.len()
        )));
    }
    if let Some(i) = r.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::Argument(format!("weight r must be positive; r[{i}] = {}", r[i])));
    }

    let inv_sqrt: Vec<f64> = r.iter().map(|w| 1.0 / w.sqrt()).collect();
    // scale factor computed once per unordered pair keeps S exactly symmetric
    // whenever M is
    let s = DMatrix::from_fn(n, n, |i, j| m[(i, j)] * (inv_sqrt[i] * inv_sqrt[j]));
    let congruence_asymmetry = symmetry_residual(&s);
    let eig = jacobi_eigen(&s)?;

    let mut vectors = DMatrix::from_fn(n, n, |i, k| eig.vectors[(i, k)] * inv_sqrt[i]);
    let mut cols: Vec<DVector<f64>> = (0..n).map(|k| vectors.column(k).into_owned()).collect();
    for x in cols.iter_mut() {
        r_normalize(x, r);
    }

    // Re-orthogonalize inside clusters of (near-)equal eigenvalues.
    let cluster_gap = CLUSTER_RTOL * norm_inf(m);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eig.values[end] - eig.values[end - 1] <= cluster_gap {
            end += 1;
        }
        if end - start > 1 {
            for k in start..end {
                for _ in 0..2 {
                    for j in start..k {
                        let proj = weighted_inner(cols[k].as_slice(), cols[j].as_slice(), r)?;
                        let xj = cols[j].clone();
                        cols[k].axpy(-proj, &xj, 1.0);
                    }
                }
                r_normalize(&mut cols[k], r);
            }
        }
        start = end;
    }

    for x in cols.iter_mut() {
        if let Some(first) = x.iter().copied().find(|v| v.abs() > SIGN_THRESHOLD) {
            if first < 0.0 {
                x.neg_mut();
            }
        }
    }
    for (k, x) in cols.iter().enumerate() {
        vectors.set_column(k, x);
    }

    let residuals = cols
        .iter()
        .zip(&eig.values)
        .map(|(x, &lambda)| pair_residual(m, r, lambda, x))
        .collect();

    Ok(EigenDecomposition {
        values: eig.values,
        vectors,
        residuals,
        meta: DecompositionMeta {
            sweeps: eig.sweeps,
            off_norm: eig.off_norm,
            congruence_asymmetry,
            operator: None,
        },
    })
}

/// Solves the eigenproblem of an assembled Sturm-Liouville operator.
pub fn solve_problem(problem: &SlProblem) -> Result<EigenDecomposition> {
    let mut d = generalized_symmetric_eigen(problem.matrix.entries(), problem.weight())?;
    d.meta.operator = Some(*problem.matrix.meta());
    Ok(d)
}

/// `max_k ‖M x_k − λ_k D x_k‖∞ / ‖M‖∞` on bare data.
pub fn residual_check_dense(m: &DMatrix<f64>, r: &[f64], decomp: &EigenDecomposition) -> Result<f64> {
    let n = m.nrows();
    if !m.is_square() || r.len() != n || decomp.vectors.nrows() != n {
        return Err(Error::Argument(format!(
            "residual check: matrix {}x{}, weight {}, eigenvectors of length {}",
            m.nrows(),
            m.ncols(),
            r.len(),
            decomp.vectors.nrows()
        )));
    }
    let scale = match norm_inf(m) {
        s if s > 0.0 => s,
        _ => 1.0,
    };
    let worst = decomp
        .values
        .iter()
        .enumerate()
        .map(|(k, &lambda)| pair_residual(m, r, lambda, &decomp.vectors.column(k).into_owned()))
        .fold(0.0, f64::max);
    Ok(worst / scale)
}

pub fn residual_check(problem: &SlProblem, decomp: &EigenDecomposition) -> Result<f64> {
    residual_check_dense(problem.matrix.entries(), problem.weight(), decomp)
}
