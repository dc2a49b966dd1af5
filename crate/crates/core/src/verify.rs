//! Named, seeded, tolerance-bearing checks of the spectral properties and
//! a sweep runner that collects them into a report.
//!
//! Every check has a matrix-level form (`*_defect`) that takes the operator
//! directly. The problem-level `check_*` functions build the operator from
//! parameters and call it; tests use the matrix-level forms to plant defects.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assembly::{assemble, weighted_inner, CoefficientSpec, Coefficients, Form, SlProblem};
use crate::eigensolve::{
    generalized_symmetric_eigen, residual_check_dense, symmetry_residual, EigenDecomposition,
    SYMMETRY_RTOL,
};
use crate::error::{Error, Result};
use crate::fracops::{
    delta_left_diff_matrix, nabla_left_diff_matrix, norm_inf, sbp_residual_dense, Grid, GridFamily,
};
use crate::kernels::{gl_weights, rl_diff_kernel, FractionalOrder};

pub const SBP_TOL: f64 = 1e-12;
pub const SELF_ADJOINT_TOL: f64 = 1e-10;
pub const SPECTRAL_TOL: f64 = 1e-8;
pub const KERNEL_TOL: f64 = 1e-12;
pub const CLASSICAL_TOL: f64 = 1e-10;

/// Random test vectors: uniform(-1, 1) drawn from this generator.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.3, seed_from_u64), uniform(-1,1) via rand 0.8";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    SelfAdjointness,
    Orthogonality,
    Reality,
    Sbp,
    KernelIdentity,
    ClassicalReduction,
}

impl CheckKind {
    pub const ALL: [CheckKind; 6] = [
        CheckKind::SelfAdjointness,
        CheckKind::Orthogonality,
        CheckKind::Reality,
        CheckKind::Sbp,
        CheckKind::KernelIdentity,
        CheckKind::ClassicalReduction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::SelfAdjointness => "self_adjointness",
            CheckKind::Orthogonality => "orthogonality",
            CheckKind::Reality => "reality",
            CheckKind::Sbp => "summation_by_parts",
            CheckKind::KernelIdentity => "kernel_identity",
            CheckKind::ClassicalReduction => "classical_reduction",
        }
    }

    /// The property being certified, in words.
    pub fn anchor(self, form: Option<Form>) -> &'static str {
        match (self, form) {
            (CheckKind::SelfAdjointness, Some(Form::Rl)) => "nabla DFSL operator L1 is self-adjoint",
            (CheckKind::SelfAdjointness, _) => "delta DFSL operator L2 is self-adjoint",
            (CheckKind::Orthogonality, Some(Form::Rl)) => {
                "eigenfunctions of L1 for distinct eigenvalues are r-orthogonal"
            }
            (CheckKind::Orthogonality, _) => "eigenfunctions of L2 for distinct eigenvalues are r-orthogonal",
            (CheckKind::Reality, Some(Form::Rl)) => "all eigenvalues of L1 x = λ r x are real",
            (CheckKind::Reality, _) => "all eigenvalues of L2 x = λ r x are real",
            (CheckKind::Sbp, Some(Form::Rl)) => "R-L nabla integration by parts formula",
            (CheckKind::Sbp, _) => "G-L delta integration by parts formula",
            (CheckKind::KernelIdentity, _) => "R-L nabla difference coefficients equal G-L weights (h = 1)",
            (CheckKind::ClassicalReduction, _) => "integer order reduces to classical nabla/delta differences",
        }
    }
}

/// Named coefficient choices used by the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientProfile {
    /// p = 1, q = 0, r = 1.
    Unit,
    /// p = 1.5 + 0.5 sin(0.7 i), q = 0.25 cos(1.3 i), r = 1 + i/N.
    Varying,
    Custom(CoefficientSpec),
}

impl CoefficientProfile {
    pub fn label(&self) -> String {
        match self {
            CoefficientProfile::Unit => "unit".into(),
            CoefficientProfile::Varying => "varying".into(),
            CoefficientProfile::Custom(_) => "custom".into(),
        }
    }

    pub fn sample(&self, n: usize) -> Result<Coefficients> {
        match self {
            CoefficientProfile::Unit => Coefficients::constant(n, 1.0, 0.0, 1.0),
            CoefficientProfile::Varying => {
                let nf = n as f64;
                Coefficients::new(
                    (0..n).map(|i| 1.5 + 0.5 * (0.7 * i as f64).sin()).collect(),
                    (0..n).map(|i| 0.25 * (1.3 * i as f64).cos()).collect(),
                    (0..n).map(|i| 1.0 + i as f64 / nf).collect(),
                )
            }
            CoefficientProfile::Custom(spec) => Coefficients::new(
                spec.p.sample("p", n)?,
                spec.q.sample("q", n)?,
                spec.r.sample("r", n)?,
            ),
        }
    }
}

/// Parameters a check ran with.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<Form>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub observed: f64,
    pub tolerance: f64,
    pub seed: Option<u64>,
    pub parameters: CheckParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckResult {
    fn new(kind: CheckKind, form: Option<Form>, observed: f64, tolerance: f64, seed: Option<u64>, parameters: CheckParams) -> Self {
        // NaN never passes
        let status = if observed <= tolerance { Status::Pass } else { Status::Fail };
        Self {
            name: kind.name().into(),
            anchor: kind.anchor(form).into(),
            status,
            observed,
            tolerance,
            seed,
            parameters,
            error: None,
        }
    }

    fn errored(kind: CheckKind, form: Option<Form>, tolerance: f64, seed: Option<u64>, parameters: CheckParams, err: &Error) -> Self {
        Self {
            observed: f64::INFINITY,
            status: Status::Fail,
            error: Some(err.to_string()),
            ..Self::new(kind, form, f64::INFINITY, tolerance, seed, parameters)
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn euclid(x: &[f64]) -> f64 {
    x.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn nonzero(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        1.0
    }
}

/// `max_trials |⟨Mu,v⟩ − ⟨u,Mv⟩| / (‖u‖₂‖v‖₂‖M‖∞)` over seeded uniform(-1,1) pairs.
pub fn self_adjointness_defect(m: &DMatrix<f64>, trials: usize, seed: u64) -> f64 {
    let n = m.nrows();
    let scale = nonzero(norm_inf(m));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let u = DVector::from_vec(random_vector(&mut rng, n));
        let v = DVector::from_vec(random_vector(&mut rng, n));
        let defect = ((m * &u).dot(&v) - u.dot(&(m * &v))).abs();
        worst = worst.max(defect / (nonzero(u.norm()) * nonzero(v.norm()) * scale));
    }
    worst
}

/// `max_{i≠j} |⟨x_i, x_j⟩_r|`.
pub fn orthogonality_defect(decomp: &EigenDecomposition, r: &[f64]) -> Result<f64> {
    let n = decomp.len();
    let cols: Vec<Vec<f64>> = (0..n).map(|k| decomp.vector(k)).collect();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max(weighted_inner(&cols[i], &cols[j], r)?.abs());
        }
    }
    Ok(worst)
}

/// Symmetry residual of `D^{-1/2} M D^{-1/2}` and the eigenpair residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealityDefect {
    pub congruence_asymmetry: f64,
    /// `None` when the congruence was too asymmetric to solve.
    pub residual: Option<f64>,
}

impl RealityDefect {
    pub fn observed(&self) -> f64 {
        self.congruence_asymmetry.max(self.residual.unwrap_or(0.0))
    }
}

pub fn reality_defect(m: &DMatrix<f64>, r: &[f64]) -> Result<RealityDefect> {
    if r.len() != m.nrows() {
        return Err(Error::Argument("weight length does not match the matrix".into()));
    }
    let n = m.nrows();
    let s = DMatrix::from_fn(n, n, |i, j| m[(i, j)] * (1.0 / r[i].sqrt() * (1.0 / r[j].sqrt())));
    let congruence_asymmetry = symmetry_residual(&s);
    if congruence_asymmetry > SYMMETRY_RTOL {
        return Ok(RealityDefect { congruence_asymmetry, residual: None });
    }
    let decomp = generalized_symmetric_eigen(m, r)?;
    let residual = residual_check_dense(m, r, &decomp)?;
    Ok(RealityDefect { congruence_asymmetry, residual: Some(residual) })
}

/// Max over seeded trials of the summation-by-parts residual, normalized by
/// `‖u‖₂‖v‖₂‖left‖∞`.
pub fn sbp_defect(left: &DMatrix<f64>, right: &DMatrix<f64>, trials: usize, seed: u64) -> Result<f64> {
    let n = left.nrows();
    let scale = nonzero(norm_inf(left));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let u = random_vector(&mut rng, n);
        let v = random_vector(&mut rng, n);
        let res = sbp_residual_dense(left, right, &u, &v)?;
        worst = worst.max(res / (nonzero(euclid(&u)) * nonzero(euclid(&v)) * scale));
    }
    Ok(worst)
}

/// Grid for an `n × n` operator of the given form; `h` only matters for G-L.
pub fn grid_for(form: Form, n: usize, h: f64) -> Result<Grid> {
    match form {
        Form::Rl => Grid::with_size(GridFamily::Nabla, n, 1.0),
        Form::Gl => Grid::with_size(GridFamily::Delta, n, h),
    }
}

/// Problem description shared by the operator-level checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemParams {
    pub form: Form,
    pub n: usize,
    pub mu: FractionalOrder,
    pub h: f64,
    pub coeffs: CoefficientProfile,
}

impl ProblemParams {
    pub fn new(form: Form, n: usize, mu: FractionalOrder, coeffs: CoefficientProfile) -> Self {
        Self { form, n, mu, h: 1.0, coeffs }
    }

    pub fn with_h(mut self, h: f64) -> Self {
        self.h = h;
        self
    }

    pub fn build(&self) -> Result<SlProblem> {
        let grid = grid_for(self.form, self.n, self.h)?;
        let coeffs = self.coeffs.sample(self.n)?;
        assemble(self.form, &coeffs, &grid, self.mu)
    }

    fn params(&self) -> CheckParams {
        CheckParams {
            form: Some(self.form),
            mu: Some(self.mu.get()),
            n: Some(self.n),
            h: (self.form == Form::Gl).then_some(self.h),
            coefficients: Some(self.coeffs.label()),
            ..Default::default()
        }
    }
}

fn finish(
    kind: CheckKind,
    form: Option<Form>,
    tol: f64,
    seed: Option<u64>,
    params: CheckParams,
    observed: Result<f64>,
) -> CheckResult {
    match observed {
        Ok(v) => CheckResult::new(kind, form, v, tol, seed, params),
        Err(e) => CheckResult::errored(kind, form, tol, seed, params, &e),
    }
}

pub fn check_self_adjointness(problem: &ProblemParams, trials: usize, seed: u64) -> CheckResult {
    let params = CheckParams { trials: Some(trials), ..problem.params() };
    let observed = problem
        .build()
        .map(|p| self_adjointness_defect(p.matrix.entries(), trials, seed));
    finish(CheckKind::SelfAdjointness, Some(problem.form), SELF_ADJOINT_TOL, Some(seed), params, observed)
}

pub fn check_orthogonality(problem: &ProblemParams) -> CheckResult {
    let observed = problem.build().and_then(|p| {
        let d = generalized_symmetric_eigen(p.matrix.entries(), p.weight())?;
        orthogonality_defect(&d, p.weight())
    });
    finish(CheckKind::Orthogonality, Some(problem.form), SPECTRAL_TOL, None, problem.params(), observed)
}

pub fn check_reality(problem: &ProblemParams) -> CheckResult {
    let observed = problem
        .build()
        .and_then(|p| reality_defect(p.matrix.entries(), p.weight()))
        .map(|d| d.observed());
    finish(CheckKind::Reality, Some(problem.form), SPECTRAL_TOL, None, problem.params(), observed)
}

pub fn check_sbp(form: Form, n: usize, mu: FractionalOrder, h: f64, trials: usize, seed: u64) -> CheckResult {
    let params = CheckParams {
        form: Some(form),
        mu: Some(mu.get()),
        n: Some(n),
        h: (form == Form::Gl).then_some(h),
        trials: Some(trials),
        ..Default::default()
    };
    let observed = grid_for(form, n, h).and_then(|grid| {
        let left = match form {
            Form::Rl => nabla_left_diff_matrix(&grid, mu)?,
            Form::Gl => delta_left_diff_matrix(&grid, mu)?,
        };
        let right = left.transpose();
        sbp_defect(left.entries(), right.entries(), trials, seed)
    });
    finish(CheckKind::Sbp, Some(form), SBP_TOL, Some(seed), params, observed)
}

pub fn check_kernel_identity(mu: FractionalOrder, m: usize) -> CheckResult {
    let e = rl_diff_kernel(mu, m);
    let w = gl_weights(mu, m);
    let observed = e
        .coeffs()
        .iter()
        .zip(w.coeffs())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let params = CheckParams { mu: Some(mu.get()), m: Some(m), ..Default::default() };
    CheckResult::new(CheckKind::KernelIdentity, None, observed, KERNEL_TOL, None, params)
}

/// `2 − 2cos((2k−1)π/(2N+1))`, k = 1..N: spectrum of the integer-order operator.
pub fn classical_spectrum(n: usize) -> Vec<f64> {
    let denom = (2 * n + 1) as f64;
    (1..=n)
        .map(|k| 2.0 - 2.0 * ((2 * k - 1) as f64 * PI / denom).cos())
        .collect()
}

pub fn check_classical_reduction(n: usize) -> CheckResult {
    let problem = ProblemParams::new(Form::Gl, n, FractionalOrder::ONE, CoefficientProfile::Unit);
    let params = CheckParams { n: Some(n), ..problem.params() };
    let observed = problem.build().and_then(|p| {
        let d = generalized_symmetric_eigen(p.matrix.entries(), p.weight())?;
        Ok(d.values()
            .iter()
            .zip(classical_spectrum(n))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    });
    finish(CheckKind::ClassicalReduction, None, CLASSICAL_TOL, None, params, observed)
}

/// What [`run_suite`] sweeps over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteConfig {
    pub mus: Vec<f64>,
    pub sizes: Vec<usize>,
    pub forms: Vec<Form>,
    pub coefficients: Vec<CoefficientProfile>,
    /// Step of the G-L grid.
    pub h: f64,
    pub trials: usize,
    pub kernel_m: usize,
    pub checks: Vec<CheckKind>,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            mus: vec![0.1, 0.25, 0.5, 0.75, 0.9, 1.0],
            sizes: vec![4, 16, 64],
            forms: vec![Form::Rl, Form::Gl],
            coefficients: vec![CoefficientProfile::Unit, CoefficientProfile::Varying],
            h: 1.0,
            trials: 100,
            kernel_m: 512,
            checks: CheckKind::ALL.to_vec(),
            seed: 20_240_601,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        for &mu in &self.mus {
            FractionalOrder::new(mu)?;
        }
        if let Some(0) = self.sizes.iter().copied().min() {
            return Err(Error::Validation("sizes must be at least 1".into()));
        }
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(Error::Validation(format!("h must be positive, got {}", self.h)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub toolkit: String,
    pub version: String,
    pub timestamp: String,
    pub rng: String,
    pub seed: u64,
    pub summary: Summary,
    pub results: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn from_results(results: Vec<CheckResult>, seed: u64) -> Self {
        let passed = results.iter().filter(|r| r.passed()).count();
        Self {
            toolkit: "dfsl".into(),
            version: crate::VERSION.into(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            rng: RNG_NAME.into(),
            seed,
            summary: Summary { total: results.len(), passed, failed: results.len() - passed },
            results,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }
}

/// SplitMix64 step; derives independent per-check seeds from the master seed.
fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs every configured check over the sweep. Failures are recorded, never
/// raised; only an invalid config is an error.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let wants = |k: CheckKind| config.checks.contains(&k);
    let mut results = Vec::new();
    let mut seed_index = 0u64;
    let mut next_seed = || {
        seed_index += 1;
        derive_seed(config.seed, seed_index)
    };

    if wants(CheckKind::KernelIdentity) {
        for &mu in &config.mus {
            results.push(check_kernel_identity(FractionalOrder::new(mu)?, config.kernel_m));
        }
    }
    if wants(CheckKind::ClassicalReduction) {
        for &n in &config.sizes {
            results.push(check_classical_reduction(n));
        }
    }
    for &form in &config.forms {
        for &mu in &config.mus {
            let mu = FractionalOrder::new(mu)?;
            for &n in &config.sizes {
                if wants(CheckKind::Sbp) {
                    results.push(check_sbp(form, n, mu, config.h, config.trials, next_seed()));
                }
                for profile in &config.coefficients {
                    let problem = ProblemParams::new(form, n, mu, profile.clone()).with_h(config.h);
                    if wants(CheckKind::SelfAdjointness) {
                        results.push(check_self_adjointness(&problem, config.trials, next_seed()));
                    }
                    if wants(CheckKind::Orthogonality) {
                        results.push(check_orthogonality(&problem));
                    }
                    if wants(CheckKind::Reality) {
                        results.push(check_reality(&problem));
                    }
                }
            }
        }
    }
    Ok(VerificationReport::from_results(results, config.seed))
}
