//! Coefficient sequences that generate every fractional operator.
//!
//! All three kernels are produced by ratio recurrences, so they stay finite
//! for any length; no two large gamma values are ever divided.

mod gamma;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gamma::{falling, gamma, log_gamma, rising};

/// Fractional order μ with 0 < μ ≤ 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(mu: f64) -> Result<Self> {
        if mu.is_finite() && mu > 0.0 && mu <= 1.0 {
            Ok(Self(mu))
        } else {
            Err(Error::Validation(format!("mu out of (0,1]: {mu}")))
        }
    }

    /// The integer order μ = 1.
    pub const ONE: Self = Self(1.0);

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 == 1.0
    }
}

impl<'de> Deserialize<'de> for FractionalOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let mu = f64::deserialize(d)?;
        FractionalOrder::new(mu).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<f64> for FractionalOrder {
    type Error = Error;

    fn try_from(mu: f64) -> Result<Self> {
        Self::new(mu)
    }
}

impl fmt::Display for FractionalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KernelKind {
    /// Signed generalized binomial weights of the delta difference.
    GlWeights,
    /// Rising-factorial kernel of the nabla left fractional sum.
    RlSumKernel,
    /// First backward difference of the (1-μ) sum kernel.
    RlDiffKernel,
}

/// Coefficients `c[0..=m]` of a lower-triangular Toeplitz operator.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzKernel {
    coeffs: Vec<f64>,
    kind: KernelKind,
    mu: FractionalOrder,
}

impl ToeplitzKernel {
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn mu(&self) -> FractionalOrder {
        self.mu
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }
}

impl std::ops::Index<usize> for ToeplitzKernel {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.coeffs[k]
    }
}

/// G-L weights `w[s] = (-1)^s μ(μ-1)…(μ-s+1)/s!` for `s = 0..=m`.
pub fn gl_weights(mu: FractionalOrder, m: usize) -> ToeplitzKernel {
    let mu_f = mu.get();
    let mut coeffs = Vec::with_capacity(m + 1);
    coeffs.push(1.0);
    for s in 1..=m {
        let s_f = s as f64;
        coeffs.push(coeffs[s - 1] * (s_f - 1.0 - mu_f) / s_f);
    }
    ToeplitzKernel { coeffs, kind: KernelKind::GlWeights, mu }
}

// c[k] = Γ(k+ν) / (Γ(ν) Γ(k+1)); valid for any ν ≥ 0 (ν = 0 gives [1, 0, 0, …]).
fn sum_kernel_raw(nu: f64, m: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(m + 1);
    c.push(1.0);
    for k in 1..=m {
        let k_f = k as f64;
        c.push(c[k - 1] * (k_f + nu - 1.0) / k_f);
    }
    c
}

/// Normalized kernel of the nabla left fractional sum:
/// `c[k] = (k+1)^(μ-1 rising) / Γ(μ)` at lag `k`.
pub fn rl_sum_kernel(mu: FractionalOrder, m: usize) -> ToeplitzKernel {
    ToeplitzKernel {
        coeffs: sum_kernel_raw(mu.get(), m),
        kind: KernelKind::RlSumKernel,
        mu,
    }
}

/// Kernel of the R-L nabla left difference with n = 1: `e[k] = d[k] - d[k-1]`
/// where `d` is the sum kernel of order `1-μ`.
pub fn rl_diff_kernel(mu: FractionalOrder, m: usize) -> ToeplitzKernel {
    let coeffs = if mu.is_integer() {
        let mut e = vec![0.0; m + 1];
        e[0] = 1.0;
        if m >= 1 {
            e[1] = -1.0;
        }
        e
    } else {
        let d = sum_kernel_raw(1.0 - mu.get(), m);
        let mut e = Vec::with_capacity(m + 1);
        e.push(d[0]);
        e.extend(d.windows(2).map(|w| w[1] - w[0]));
        e
    };
    ToeplitzKernel { coeffs, kind: KernelKind::RlDiffKernel, mu }
}

/// Builds the kernel of the given kind.
pub fn kernel(kind: KernelKind, mu: FractionalOrder, m: usize) -> ToeplitzKernel {
    match kind {
        KernelKind::GlWeights => gl_weights(mu, m),
        KernelKind::RlSumKernel => rl_sum_kernel(mu, m),
        KernelKind::RlDiffKernel => rl_diff_kernel(mu, m),
    }
}
