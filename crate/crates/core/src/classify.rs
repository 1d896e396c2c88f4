//! Pointwise refinement of the semi-symmetric classification.
//!
//! A semi-symmetric point is conformally flat, type N with null radiation, or
//! type D with `R = −12 Ψ2` and a Ricci tensor built from the two principal
//! null directions. The type D case splits on the two Ricci coefficients
//! `A`, `B`; the type N case splits on whether `k` is covariantly constant.

use nalgebra::Matrix4;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::expr::EvalError;
use crate::geometry::{GeometryError, LocalGeometry, SamplePoint};
use crate::metric_file::MetricFile;
use crate::np::{
    np_scalars, petrov_classify_scaled, principal_null_directions, spin_coefficients, swap_psi,
    NPData, NullRotation, PetrovType, SpinCoefficients, TetradJets, TetradValue,
};
use crate::spinor::{spinor_checks, SpinorChecks};
use crate::symmetry::{
    constant_null_vector_check, cross_validate, decomposability_check, recurrence_check,
    residual_suite, CrossCheck, ResidualReport, ResidualSuite, Verdict, SCALE_FLOOR,
};
use crate::tensor::{TensorValue, DIM};

type C = Complex64;

/// `A ≈ c_A (3Ψ2 + 2Φ11)` and `B ≈ c_B (3Ψ2 − 2Φ11)`, fitted on the Nariai
/// metric.
pub const AB_PROPORTIONALITY: (f64, f64) = (-2.0, 2.0);

/// Number of observers sampled by [`dec_check`].
pub const DEC_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    #[serde(rename = "not-semi-symmetric")]
    NotSemiSymmetric,
    O,
    #[serde(rename = "N-generic")]
    NGeneric,
    #[serde(rename = "N-second-order-candidate")]
    NSecondOrderCandidate,
    #[serde(rename = "D-generic-decomposable")]
    DGenericDecomposable,
    #[serde(rename = "D-special-A0")]
    DSpecialA0,
    #[serde(rename = "D-special-B0")]
    DSpecialB0,
    /// A verdict or an `A`/`B` zero test fell in the dead band.
    #[serde(rename = "indeterminate")]
    Indeterminate,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::NotSemiSymmetric => "not-semi-symmetric",
            Branch::O => "O",
            Branch::NGeneric => "N-generic",
            Branch::NSecondOrderCandidate => "N-second-order-candidate",
            Branch::DGenericDecomposable => "D-generic-decomposable",
            Branch::DSpecialA0 => "D-special-A0",
            Branch::DSpecialB0 => "D-special-B0",
            Branch::Indeterminate => "indeterminate",
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("cannot evaluate the tetrad at point `{point}`: {source}")]
    Tetrad { point: String, source: EvalError },
    #[error(
        "point `{point}` is semi-symmetric (residual {residual:e}, scale {scale:e}) \
         but has Petrov type {petrov}; only D, N and O are possible"
    )]
    TheoremViolation {
        point: String,
        petrov: PetrovType,
        residual: f64,
        scale: f64,
    },
}

impl ClassifyError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ClassifyError::Geometry(
                GeometryError::Degenerate { .. } | GeometryError::Signature { .. },
            ) => 2,
            ClassifyError::TheoremViolation { .. } => 4,
            _ => 1,
        }
    }
}

/// A residual with its scale and dead-band verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarCheck {
    pub value: f64,
    pub scale: f64,
    pub verdict: Verdict,
}

impl ScalarCheck {
    pub fn new(value: f64, scale: f64, tol: f64) -> Self {
        ScalarCheck {
            value,
            scale,
            verdict: Verdict::from_residual(value, scale, tol),
        }
    }

    fn from_report(r: &ResidualReport) -> Self {
        ScalarCheck {
            value: r.residual,
            scale: r.scale,
            verdict: r.verdict,
        }
    }
}

/// Spin-coefficient constraints. Entries that do not apply to a branch are
/// left empty.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Constraints {
    #[serde(rename = "A_sigma")]
    pub a_sigma: Option<ScalarCheck>,
    #[serde(rename = "A_lambda")]
    pub a_lambda: Option<ScalarCheck>,
    #[serde(rename = "A_mu")]
    pub a_mu: Option<ScalarCheck>,
    #[serde(rename = "A_rho")]
    pub a_rho: Option<ScalarCheck>,
    #[serde(rename = "B_kappa")]
    pub b_kappa: Option<ScalarCheck>,
    #[serde(rename = "B_nu")]
    pub b_nu: Option<ScalarCheck>,
    #[serde(rename = "B_pi")]
    pub b_pi: Option<ScalarCheck>,
    #[serde(rename = "B_tau")]
    pub b_tau: Option<ScalarCheck>,
    pub kappa: Option<ScalarCheck>,
    pub sigma_psi4_minus_rho_phi22: Option<ScalarCheck>,
}

impl Constraints {
    pub fn products(&self) -> [Option<ScalarCheck>; 8] {
        [
            self.a_sigma,
            self.a_lambda,
            self.a_mu,
            self.a_rho,
            self.b_kappa,
            self.b_nu,
            self.b_pi,
            self.b_tau,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecurrencePair {
    pub k: ScalarCheck,
    pub l: ScalarCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecReport {
    pub violated: bool,
    /// Most negative margin found, relative to the sample scale.
    pub worst_margin: f64,
    pub samples: usize,
}

/// One step of the tetrad adaptation, applied in order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameStep {
    Swap,
    Rotate(NullRotation),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub point: String,
    pub petrov: PetrovType,
    pub semi_symmetric: Verdict,
    pub branch: Branch,
    #[serde(rename = "A")]
    pub a: Option<f64>,
    #[serde(rename = "B")]
    pub b: Option<f64>,
    pub ab_fit_residual: Option<f64>,
    /// `A`, `B` against [`AB_PROPORTIONALITY`] times `3Ψ2 ± 2Φ11`.
    pub ab_consistency: Option<ScalarCheck>,
    /// Vanishing of every NP scalar outside the N or D pattern.
    pub pattern: Option<ScalarCheck>,
    pub constraints: Constraints,
    /// `κ = ν = τ = π = 0` on the A0 branch, `ρ = μ = σ = λ = 0` on B0.
    pub special: Option<ScalarCheck>,
    pub recurrence: Option<RecurrencePair>,
    pub decomposability: Option<ScalarCheck>,
    pub constant_null_vector: Option<ScalarCheck>,
    pub dec: DecReport,
    pub purely_electric: bool,
    pub frame: Vec<FrameStep>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub tol: f64,
    pub seed: u64,
    pub cross_validate: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            tol: crate::symmetry::DEFAULT_TOL,
            seed: 0,
            cross_validate: false,
        }
    }
}

/// Everything computed at one point.
#[derive(Debug, Clone, Serialize)]
pub struct PointAnalysis {
    pub point: String,
    pub coords: [f64; 4],
    pub residuals: ResidualSuite,
    pub petrov: PetrovType,
    /// NP data in the adapted tetrad.
    pub np: NPData,
    pub spin_coefficients: SpinCoefficients,
    pub classification: ClassificationReport,
    pub spinor: SpinorChecks,
    pub cross_validation: Option<Vec<CrossCheck>>,
}

/// Least-squares fit `R_ab ≈ A k_(a ℓ_b) + B m_(a m̄_b)`; returns `(A, B, residual)`
/// with the residual as the largest component misfit.
pub fn extract_ab(ricci: &TensorValue, g: &TensorValue, t: &TetradValue) -> (f64, f64, f64) {
    let lower = |v: &[f64; 4]| -> [f64; 4] {
        std::array::from_fn(|a| (0..DIM).map(|b| g.get(&[a, b]) * v[b]).sum())
    };
    let k = lower(&t.vectors[0]);
    let l = lower(&t.vectors[1]);
    let x = lower(&t.vectors[2]);
    let y = lower(&t.vectors[3]);
    // k_(a ℓ_b) and m_(a m̄_b) = x_a x_b + y_a y_b
    let e1 = |a: usize, b: usize| 0.5 * (k[a] * l[b] + l[a] * k[b]);
    let e2 = |a: usize, b: usize| x[a] * x[b] + y[a] * y[b];
    let (mut s11, mut s12, mut s22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for a in 0..DIM {
        for b in 0..DIM {
            let (u, v, r) = (e1(a, b), e2(a, b), *ricci.get(&[a, b]));
            s11 += u * u;
            s12 += u * v;
            s22 += v * v;
            r1 += u * r;
            r2 += v * r;
        }
    }
    let det = s11 * s22 - s12 * s12;
    let a_coef = (r1 * s22 - r2 * s12) / det;
    let b_coef = (r2 * s11 - r1 * s12) / det;
    let mut residual: f64 = 0.0;
    for a in 0..DIM {
        for b in 0..DIM {
            let fit = a_coef * e1(a, b) + b_coef * e2(a, b);
            residual = residual.max((ricci.get(&[a, b]) - fit).abs());
        }
    }
    (a_coef, b_coef, residual)
}

/// Orthonormal frame `e0 = (k+ℓ)/√2`, `e1 = (k−ℓ)/√2`, `e2 = √2 Re m`, `e3 = √2 Im m`.
fn orthonormal_frame(t: &TetradValue) -> [[f64; 4]; 4] {
    let v = &t.vectors;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let r2 = std::f64::consts::SQRT_2;
    [
        std::array::from_fn(|a| s * (v[0][a] + v[1][a])),
        std::array::from_fn(|a| s * (v[0][a] - v[1][a])),
        v[2].map(|x| r2 * x),
        v[3].map(|x| r2 * x),
    ]
}

/// Dominant energy condition test: `−G^a_b u^b` must be future-pointing
/// causal for [`DEC_SAMPLES`] unit timelike observers `u`, drawn with rapidity
/// up to 2 around `e0 = (k+ℓ)/√2`.
pub fn dec_check(einstein: &TensorValue, t: &TetradValue, tol: f64, seed: u64) -> DecReport {
    let e = orthonormal_frame(t);
    let mut frame_g = [[0.0; 4]; 4];
    for (i, row) in frame_g.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            for a in 0..DIM {
                for b in 0..DIM {
                    *x += e[i][a] * e[j][b] * einstein.get(&[a, b]);
                }
            }
        }
    }
    let eta = [1.0, -1.0, -1.0, -1.0];
    let gmax = frame_g.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut violated = false;
    for _ in 0..DEC_SAMPLES {
        let chi: f64 = rng.gen_range(0.0..2.0);
        let cos_t: f64 = rng.gen_range(-1.0..1.0);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let sin_t = (1.0 - cos_t * cos_t).sqrt();
        let u = [
            chi.cosh(),
            chi.sinh() * sin_t * phi.cos(),
            chi.sinh() * sin_t * phi.sin(),
            chi.sinh() * cos_t,
        ];
        // w^i = −η^{ii} G_ij u^j
        let w: [f64; 4] =
            std::array::from_fn(|i| -eta[i] * (0..4).map(|j| frame_g[i][j] * u[j]).sum::<f64>());
        let scale = (gmax * u[0]).max(SCALE_FLOOR);
        let norm: f64 = (0..4).map(|i| eta[i] * w[i] * w[i]).sum();
        let margin = (w[0] / scale).min(norm / (scale * scale));
        worst = worst.min(margin);
        if margin < -tol {
            violated = true;
        }
    }
    DecReport {
        violated,
        worst_margin: worst,
        samples: DEC_SAMPLES,
    }
}

/// Whether the magnetic part `H_ab = ½ ε_ac^{ef} C_efbd u^c u^d` vanishes
/// for `u = (k+ℓ)/√2` while the Weyl tensor does not.
pub fn purely_electric(weyl: &TensorValue, g: &TensorValue, ginv: &TensorValue, t: &TetradValue, tol: f64) -> bool {
    let u = orthonormal_frame(t)[0];
    let gm = Matrix4::from_fn(|a, b| *g.get(&[a, b]));
    let vol = gm.determinant().abs().sqrt();
    // C^{ef}_{bd}
    let mut raised = vec![0.0; 256];
    for e in 0..DIM {
        for f in 0..DIM {
            for b in 0..DIM {
                for d in 0..DIM {
                    let mut s = 0.0;
                    for p in 0..DIM {
                        for q in 0..DIM {
                            s += ginv.get(&[e, p]) * ginv.get(&[f, q]) * weyl.get(&[p, q, b, d]);
                        }
                    }
                    raised[((e * 4 + f) * 4 + b) * 4 + d] = s;
                }
            }
        }
    }
    let mut e_max: f64 = 0.0;
    let mut h_max: f64 = 0.0;
    for a in 0..DIM {
        for b in 0..DIM {
            let mut ev = 0.0;
            let mut hv = 0.0;
            for c in 0..DIM {
                for d in 0..DIM {
                    let uu = u[c] * u[d];
                    if uu == 0.0 {
                        continue;
                    }
                    ev += weyl.get(&[a, c, b, d]) * uu;
                    for e in 0..DIM {
                        for f in 0..DIM {
                            let s = levi_civita(a, c, e, f);
                            if s != 0.0 {
                                hv += 0.5 * s * vol * raised[((e * 4 + f) * 4 + b) * 4 + d] * uu;
                            }
                        }
                    }
                }
            }
            e_max = e_max.max(ev.abs());
            h_max = h_max.max(hv.abs());
        }
    }
    let scale = e_max.max(h_max);
    scale > SCALE_FLOOR && h_max <= tol * scale
}

fn levi_civita(a: usize, b: usize, c: usize, d: usize) -> f64 {
    let p = [a, b, c, d];
    let mut sign = 1.0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] == p[j] {
                return 0.0;
            }
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Rotation parameters below this are roundoff in an already adapted frame.
const NEGLIGIBLE_ROTATION: f64 = 1e-10;

fn chordal_from_zero(z: Option<C>) -> f64 {
    z.map_or(1.0, |z| z.norm() / (1.0 + z.norm_sqr()).sqrt())
}

/// Null rotations taking `psi` to the canonical D (`Ψ2` only) or N (`Ψ4`
/// only) frame. Other types are left alone.
pub fn adapting_steps(psi: &[C; 5], petrov: PetrovType) -> Vec<FrameStep> {
    if !matches!(petrov, PetrovType::D | PetrovType::N) {
        return Vec::new();
    }
    let mut steps = Vec::new();
    let mut current = *psi;
    // bring the most repeated direction to k
    let Some(&(_, first)) = principal_null_directions(&current).first() else {
        return steps;
    };
    let first = match first {
        None => None,
        Some(z) if z.norm() > 1.0 => {
            steps.push(FrameStep::Swap);
            current = swap_psi(&current);
            Some(C::new(1.0, 0.0) / z)
        }
        Some(z) => Some(z),
    };
    match first {
        None => {
            steps.push(FrameStep::Swap);
            current = swap_psi(&current);
        }
        Some(z) if z.norm() > NEGLIGIBLE_ROTATION => {
            let r = NullRotation::AboutL(z);
            steps.push(FrameStep::Rotate(r));
            current = r.apply_psi(&current);
        }
        Some(_) => {}
    }
    if petrov == PetrovType::D {
        // the other double direction goes to l; infinity is already there
        let other = principal_null_directions(&current)
            .into_iter()
            .map(|(_, z)| z)
            .max_by(|a, b| chordal_from_zero(*a).total_cmp(&chordal_from_zero(*b)));
        if let Some(Some(z2)) = other {
            if z2.norm() > NEGLIGIBLE_ROTATION {
                steps.push(FrameStep::Rotate(NullRotation::AboutK(C::new(1.0, 0.0) / z2)));
            }
        }
    }
    steps
}

fn apply_steps(t: &TetradJets, steps: &[FrameStep]) -> TetradJets {
    steps.iter().fold(t.clone(), |acc, s| match s {
        FrameStep::Swap => acc.swapped(),
        FrameStep::Rotate(r) => acc.transformed(r),
    })
}

fn spin_scale(s: &SpinCoefficients) -> f64 {
    s.named().iter().map(|(_, z)| z.norm()).fold(0.0, f64::max)
}

/// Inputs of the branch decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionInputs {
    pub semi: Verdict,
    pub petrov: PetrovType,
    /// `(A, B)` in the adapted type D tetrad.
    pub ab: Option<(f64, f64)>,
    /// `R` for the `A`/`B` zero-test scale.
    pub scalar: f64,
    /// `σ ≈ ρ ≈ 0` and `∇k = 0` with `k` null, on type N.
    pub n_second_order: bool,
}

/// The decision tree. Returns `None` for a semi-symmetric point of type I,
/// II or III.
pub fn decide_branch(inp: &DecisionInputs, tol: f64) -> Option<Branch> {
    match inp.semi {
        Verdict::Fails => return Some(Branch::NotSemiSymmetric),
        Verdict::Indeterminate => return Some(Branch::Indeterminate),
        Verdict::Holds => {}
    }
    Some(match inp.petrov {
        PetrovType::O => Branch::O,
        PetrovType::N if inp.n_second_order => Branch::NSecondOrderCandidate,
        PetrovType::N => Branch::NGeneric,
        PetrovType::D => {
            let Some((a, b)) = inp.ab else {
                return Some(Branch::Indeterminate);
            };
            let scale = a.abs().max(b.abs()).max(inp.scalar.abs());
            let a0 = Verdict::from_residual(a.abs(), scale, tol);
            let b0 = Verdict::from_residual(b.abs(), scale, tol);
            match (a0, b0) {
                (Verdict::Fails, Verdict::Fails) => Branch::DGenericDecomposable,
                (Verdict::Holds, Verdict::Fails) => Branch::DSpecialA0,
                (Verdict::Fails, Verdict::Holds) => Branch::DSpecialB0,
                _ => Branch::Indeterminate,
            }
        }
        PetrovType::I | PetrovType::II | PetrovType::III => return None,
    })
}

/// `κ = ν = τ = π = 0` (A0) or `ρ = μ = σ = λ = 0` (B0), scaled by the
/// larger of the spin-coefficient size and the curvature inverse length.
pub fn special_branch_check(
    branch: Branch,
    s: &SpinCoefficients,
    curvature_scale: f64,
    tol: f64,
) -> Option<ScalarCheck> {
    let set = match branch {
        Branch::DSpecialA0 => [s.kappa, s.nu, s.tau, s.pi],
        Branch::DSpecialB0 => [s.rho, s.mu, s.sigma, s.lambda],
        _ => return None,
    };
    let value = set.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = spin_scale(s).max(curvature_scale.sqrt());
    Some(ScalarCheck::new(value, scale, tol))
}

/// The eight products `Aσ, Aλ, Aμ, Aρ, Bκ, Bν, Bπ, Bτ`.
pub fn product_constraints(
    a: f64,
    b: f64,
    s: &SpinCoefficients,
    curvature_scale: f64,
    tol: f64,
) -> Constraints {
    let scale = a.abs().max(b.abs()) * spin_scale(s).max(curvature_scale.sqrt());
    let check = |coef: f64, z: C| Some(ScalarCheck::new((z * coef).norm(), scale, tol));
    Constraints {
        a_sigma: check(a, s.sigma),
        a_lambda: check(a, s.lambda),
        a_mu: check(a, s.mu),
        a_rho: check(a, s.rho),
        b_kappa: check(b, s.kappa),
        b_nu: check(b, s.nu),
        b_pi: check(b, s.pi),
        b_tau: check(b, s.tau),
        ..Constraints::default()
    }
}

/// Null-radiation constraints `κ = 0` and `σΨ4 = ρΦ22`.
pub fn null_radiation_constraints(np: &NPData, s: &SpinCoefficients, tol: f64) -> Constraints {
    let inv_len = spin_scale(s).max(np.scale().sqrt());
    let psi4 = np.psi[4];
    let phi22 = np.phi[2][2];
    let value = (s.sigma * psi4 - s.rho * phi22).norm();
    let scale = inv_len * psi4.norm().max(phi22.norm());
    Constraints {
        kappa: Some(ScalarCheck::new(s.kappa.norm(), inv_len, tol)),
        sigma_psi4_minus_rho_phi22: Some(ScalarCheck::new(value, scale, tol)),
        ..Constraints::default()
    }
}

/// Largest NP scalar outside the type N pattern (`Ψ4`, `Φ22` only, `R = 0`).
pub fn n_pattern_residual(np: &NPData) -> f64 {
    let mut r = np.scalar.abs();
    for z in &np.psi[..4] {
        r = r.max(z.norm());
    }
    for i in 0..3 {
        for j in 0..3 {
            if (i, j) != (2, 2) {
                r = r.max(np.phi[i][j].norm());
            }
        }
    }
    r
}

/// Largest violation of the type D pattern (`Ψ2`, `Φ11` only, `R = −12Ψ2`).
pub fn d_pattern_residual(np: &NPData) -> f64 {
    let mut r = (np.psi[2] * 12.0 + np.scalar).norm();
    for n in [0, 1, 3, 4] {
        r = r.max(np.psi[n].norm());
    }
    for i in 0..3 {
        for j in 0..3 {
            if (i, j) != (1, 1) {
                r = r.max(np.phi[i][j].norm());
            }
        }
    }
    r
}

/// Adds a warning when a metric declared static has a type other than I, D, O.
pub fn static_note(mut report: ClassificationReport, is_static: bool) -> ClassificationReport {
    if is_static && !matches!(report.petrov, PetrovType::I | PetrovType::D | PetrovType::O) {
        report.warnings.push(format!(
            "metric is flagged static but has Petrov type {}; static spacetimes are of type I, D or O",
            report.petrov
        ));
    }
    report
}

/// Full analysis at `point` with the file's own tetrad.
pub fn analyze_point(
    file: &MetricFile,
    point: &SamplePoint,
    opts: &ClassifyOptions,
) -> Result<PointAnalysis, ClassifyError> {
    let tetrad = file
        .metric
        .tetrad()
        .ok_or_else(|| GeometryError::MissingTetrad(file.name().to_string()))?;
    let jets = tetrad
        .jets(&file.metric.bindings(&point.coords))
        .map_err(|source| ClassifyError::Tetrad {
            point: point.name.clone(),
            source,
        })?;
    analyze_point_with_tetrad(file, point, &jets, opts)
}

/// Full analysis at `point` starting from the given tetrad fields.
pub fn analyze_point_with_tetrad(
    file: &MetricFile,
    point: &SamplePoint,
    tetrad: &TetradJets,
    opts: &ClassifyOptions,
) -> Result<PointAnalysis, ClassifyError> {
    let tol = opts.tol;
    let geom = file.metric.local(point)?;
    let residuals = residual_suite(&geom, tol)?;
    let cross = if opts.cross_validate {
        Some(cross_validate(&geom, tol)?)
    } else {
        None
    };
    let curv = geom.curvature();
    let g = geom.metric();
    let np0 = np_scalars(&curv, &g, &tetrad.value());
    let petrov = petrov_classify_scaled(&np0.psi, tol, np0.scale());

    let steps = adapting_steps(&np0.psi, petrov);
    let adapted = apply_steps(tetrad, &steps);
    let tv = adapted.value();
    let np = np_scalars(&curv, &g, &tv);
    let spin = spin_coefficients(&geom, &adapted)?;
    let classification = classify_with(
        &geom, file.is_static, &residuals, petrov, &np, &spin, &adapted, steps, opts,
    )?;
    Ok(PointAnalysis {
        point: point.name.clone(),
        coords: point.coords,
        residuals,
        petrov,
        spinor: spinor_checks(&np),
        np,
        spin_coefficients: spin,
        classification,
        cross_validation: cross,
    })
}

#[allow(clippy::too_many_arguments)]
fn classify_with(
    geom: &LocalGeometry,
    is_static: bool,
    residuals: &ResidualSuite,
    petrov: PetrovType,
    np: &NPData,
    spin: &SpinCoefficients,
    tetrad: &TetradJets,
    frame: Vec<FrameStep>,
    opts: &ClassifyOptions,
) -> Result<ClassificationReport, ClassifyError> {
    let tol = opts.tol;
    let curv = geom.curvature();
    let g = geom.metric();
    let tv = tetrad.value();
    let np_scale = np.scale();
    let mut report = ClassificationReport {
        point: geom.point_name().to_string(),
        petrov,
        semi_symmetric: residuals.semi.verdict,
        branch: Branch::Indeterminate,
        a: None,
        b: None,
        ab_fit_residual: None,
        ab_consistency: None,
        pattern: None,
        constraints: Constraints::default(),
        special: None,
        recurrence: None,
        decomposability: None,
        constant_null_vector: None,
        dec: dec_check(&curv.einstein, &tv, tol, opts.seed),
        purely_electric: purely_electric(&curv.weyl, &g, &geom.inverse_metric(), &tv, tol),
        frame,
        warnings: Vec::new(),
    };

    let mut n_second_order = false;
    match petrov {
        PetrovType::D => {
            report.pattern = Some(ScalarCheck::new(d_pattern_residual(np), np_scale, tol));
            let (a, b, fit) = extract_ab(&curv.ricci, &g, &tv);
            report.a = Some(a);
            report.b = Some(b);
            report.ab_fit_residual = Some(fit);
            let psi2 = np.psi[2];
            let phi11 = np.phi[1][1];
            let (ca, cb) = AB_PROPORTIONALITY;
            let pred_a = (psi2 * 3.0 + phi11 * 2.0) * ca;
            let pred_b = (psi2 * 3.0 - phi11 * 2.0) * cb;
            let miss = (pred_a - a).norm().max((pred_b - b).norm());
            let ab_scale = a.abs().max(b.abs()).max(curv.scalar.abs());
            report.ab_consistency = Some(ScalarCheck::new(miss, ab_scale, tol));
            let rk = recurrence_check(geom, tetrad, 0, tol)?;
            let rl = recurrence_check(geom, tetrad, 1, tol)?;
            report.recurrence = Some(RecurrencePair {
                k: ScalarCheck::from_report(&rk.report),
                l: ScalarCheck::from_report(&rl.report),
            });
            report.decomposability =
                Some(ScalarCheck::from_report(&decomposability_check(geom, tetrad, tol)?));
        }
        PetrovType::N => {
            report.pattern = Some(ScalarCheck::new(n_pattern_residual(np), np_scale, tol));
            report.constraints = null_radiation_constraints(np, spin, tol);
            let cn = constant_null_vector_check(geom, tetrad, tol)?;
            report.constant_null_vector = Some(ScalarCheck::from_report(&cn.report));
            let inv_len = spin_scale(spin).max(np_scale.sqrt());
            let shear_free = ScalarCheck::new(spin.sigma.norm().max(spin.rho.norm()), inv_len, tol);
            n_second_order = shear_free.verdict.holds() && cn.report.verdict.holds() && cn.null;
        }
        _ => {}
    }

    let inputs = DecisionInputs {
        semi: residuals.semi.verdict,
        petrov,
        ab: report.a.zip(report.b),
        scalar: curv.scalar,
        n_second_order,
    };
    let Some(branch) = decide_branch(&inputs, tol) else {
        return Err(ClassifyError::TheoremViolation {
            point: report.point,
            petrov,
            residual: residuals.semi.residual,
            scale: residuals.semi.scale,
        });
    };
    report.branch = branch;
    match branch {
        Branch::DGenericDecomposable => {
            let (a, b) = (report.a.unwrap_or(0.0), report.b.unwrap_or(0.0));
            report.constraints = product_constraints(a, b, spin, np_scale, tol);
            let mut chain: Vec<Verdict> = report
                .constraints
                .products()
                .iter()
                .flatten()
                .map(|c| c.verdict)
                .collect();
            chain.extend(report.recurrence.iter().flat_map(|r| [r.k.verdict, r.l.verdict]));
            chain.extend(report.decomposability.map(|d| d.verdict));
            if chain.iter().any(|v| !v.holds()) {
                report
                    .warnings
                    .push("generic type D point fails a product, recurrence or decomposability check".into());
            }
        }
        Branch::DSpecialA0 | Branch::DSpecialB0 => {
            report.special = special_branch_check(branch, spin, np_scale, tol);
        }
        _ => {}
    }
    if branch != Branch::NotSemiSymmetric {
        if let Some(p) = report.pattern {
            if !p.verdict.holds() {
                report
                    .warnings
                    .push(format!("NP data do not match the type {petrov} curvature pattern"));
            }
        }
    }
    Ok(static_note(report, is_static))
}

/// Classification summary at one point.
pub fn classify_point(
    file: &MetricFile,
    point: &SamplePoint,
    opts: &ClassifyOptions,
) -> Result<ClassificationReport, ClassifyError> {
    analyze_point(file, point, opts).map(|a| a.classification)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::load_builtin;

    fn builtin(name: &str) -> MetricFile {
        load_builtin(name).unwrap().unwrap()
    }

    #[test]
    fn decision_table() {
        let base = DecisionInputs {
            semi: Verdict::Holds,
            petrov: PetrovType::D,
            ab: Some((1.0, -1.0)),
            scalar: 0.0,
            n_second_order: false,
        };
        let tol = 1e-9;
        assert_eq!(decide_branch(&base, tol), Some(Branch::DGenericDecomposable));
        let a0 = DecisionInputs { ab: Some((0.0, 2.0)), ..base };
        assert_eq!(decide_branch(&a0, tol), Some(Branch::DSpecialA0));
        let b0 = DecisionInputs { ab: Some((2.0, 1e-14)), ..base };
        assert_eq!(decide_branch(&b0, tol), Some(Branch::DSpecialB0));
        let fuzzy = DecisionInputs { ab: Some((1.0, 3e-9)), ..base };
        assert_eq!(decide_branch(&fuzzy, tol), Some(Branch::Indeterminate));
        let fails = DecisionInputs { semi: Verdict::Fails, ..base };
        assert_eq!(decide_branch(&fails, tol), Some(Branch::NotSemiSymmetric));
        let ii = DecisionInputs { petrov: PetrovType::II, ..base };
        assert_eq!(decide_branch(&ii, tol), None);
        let n = DecisionInputs { petrov: PetrovType::N, n_second_order: true, ..base };
        assert_eq!(decide_branch(&n, tol), Some(Branch::NSecondOrderCandidate));
    }

    #[test]
    fn special_branches_on_synthetic_coefficients() {
        let mut s = SpinCoefficients::zero();
        s.rho = C::new(0.3, 0.0);
        s.mu = C::new(-0.2, 0.0);
        let a0 = special_branch_check(Branch::DSpecialA0, &s, 1.0, 1e-9).unwrap();
        assert!(a0.verdict.holds());
        let b0 = special_branch_check(Branch::DSpecialB0, &s, 1.0, 1e-9).unwrap();
        assert!(b0.verdict.fails());
        assert!(special_branch_check(Branch::O, &s, 1.0, 1e-9).is_none());
    }

    #[test]
    fn dec_flags_b0_einstein_tensor() {
        let file = builtin("minkowski");
        let t = file
            .metric
            .tetrad()
            .unwrap()
            .value(&file.metric.bindings(&[0.0; 4]))
            .unwrap();
        // G_ab = −A m_(a m̄_b) with η = diag(1, −1, −1, −1)
        let lower = |v: [f64; 4]| [v[0], -v[1], -v[2], -v[3]];
        let x = lower(t.vectors[2]);
        let y = lower(t.vectors[3]);
        let a = 0.7;
        let g = TensorValue::from_fn(crate::tensor::all_down(2), |i| {
            -a * (x[i[0]] * x[i[1]] + y[i[0]] * y[i[1]])
        });
        assert!(dec_check(&g, &t, 1e-9, 3).violated);
        let neg = TensorValue::from_fn(crate::tensor::all_down(2), |i| -g.get(i));
        assert!(dec_check(&neg, &t, 1e-9, 3).violated);
        let zero = TensorValue::zeros(crate::tensor::all_down(2));
        assert!(!dec_check(&zero, &t, 1e-9, 3).violated);
    }

    #[test]
    fn nariai_ab_proportionality() {
        let file = builtin("nariai");
        for p in file.metric.points() {
            let an = analyze_point(&file, p, &ClassifyOptions::default()).unwrap();
            let c = &an.classification;
            let (a, b) = (c.a.unwrap(), c.b.unwrap());
            let psi2 = an.np.psi[2].re;
            let phi11 = an.np.phi[1][1].re;
            let ca = a / (3.0 * psi2 + 2.0 * phi11);
            let cb = b / (3.0 * psi2 - 2.0 * phi11);
            assert!((ca - AB_PROPORTIONALITY.0).abs() < 1e-9, "{ca}");
            assert!((cb - AB_PROPORTIONALITY.1).abs() < 1e-9, "{cb}");
            assert!(c.ab_fit_residual.unwrap() < 1e-12);
        }
    }

    #[test]
    fn static_note_only_for_flagged_type_n() {
        let file = builtin("ppwave_linear");
        let p = &file.metric.points()[0];
        let report = classify_point(&file, p, &ClassifyOptions::default()).unwrap();
        assert!(report.warnings.is_empty());
        let flagged = static_note(report.clone(), true);
        assert_eq!(flagged.warnings.len(), 1);
        let unflagged = static_note(report.clone(), false);
        assert_eq!(unflagged, report);
    }

    #[test]
    fn adaptation_recovers_canonical_frames() {
        let z = C::new(0.0, 0.0);
        let d = [z, z, C::new(-0.4, 0.1), z, z];
        let n = [z, z, z, z, C::new(1.0, 0.0)];
        let rots = [
            NullRotation::AboutK(C::new(0.3, 0.8)),
            NullRotation::AboutL(C::new(-1.7, 0.2)),
            NullRotation::AboutK(C::new(2.5, -0.4)),
        ];
        for (psi, ty) in [(d, PetrovType::D), (n, PetrovType::N)] {
            let mixed = rots.iter().fold(psi, |acc, r| r.apply_psi(&acc));
            let steps = adapting_steps(&mixed, ty);
            let back = steps.iter().fold(mixed, |acc, s| match s {
                FrameStep::Swap => swap_psi(&acc),
                FrameStep::Rotate(r) => r.apply_psi(&acc),
            });
            let keep = if ty == PetrovType::D { 2 } else { 4 };
            let scale = back[keep].norm();
            for (i, v) in back.iter().enumerate() {
                if i != keep {
                    assert!(v.norm() < 1e-7 * scale, "{ty}: {back:?}");
                }
            }
        }
    }
}
