//! Residual tests for the curvature conditions and the null-vector probes.

use serde::Serialize;

use crate::geometry::{commutator_action, GeometryError, LocalGeometry};
use crate::jet::Jet;
use crate::np::TetradJets;
use crate::tensor::{all_down, Tensor, TensorValue, DIM};

/// Scales below this are treated as this value.
pub const SCALE_FLOOR: f64 = 1e-14;

/// Factor between the `holds` and `fails` thresholds.
pub const DEAD_BAND: f64 = 10.0;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionId {
    /// `∇_[a∇_b] R_cdef = 0`
    Semi,
    /// `∇_[a∇_b] C_cdef = 0`
    Conformal,
    /// `∇_[a∇_b] R_cd = 0`
    Ricci,
    /// `∇_a∇_b R_cdef = 0`
    SecondOrder,
    /// `∇_a R_bcde = 0`
    LocallySymmetric,
    /// `∇_c (k_a ℓ_b) = 0`
    Decomposability,
    /// `∇_a k_b = 0` with `k` null
    ConstantNullVector,
    /// `∇_a X_b = v_a X_b`
    Recurrence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

impl Verdict {
    /// `holds` iff `residual ≤ tol·scale`, `fails` iff `residual ≥ 10·tol·scale`.
    pub fn from_residual(residual: f64, scale: f64, tol: f64) -> Verdict {
        let scale = scale.max(SCALE_FLOOR);
        if residual <= tol * scale {
            Verdict::Holds
        } else if residual >= DEAD_BAND * tol * scale {
            Verdict::Fails
        } else {
            Verdict::Indeterminate
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Indeterminate => "indeterminate",
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }

    pub fn fails(self) -> bool {
        self == Verdict::Fails
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub condition: ConditionId,
    pub point: String,
    #[serde(rename = "value")]
    pub residual: f64,
    pub scale: f64,
    pub verdict: Verdict,
}

impl ResidualReport {
    pub fn new(condition: ConditionId, point: &str, residual: f64, scale: f64, tol: f64) -> Self {
        let scale = scale.max(SCALE_FLOOR);
        ResidualReport {
            condition,
            point: point.to_string(),
            residual,
            scale,
            verdict: Verdict::from_residual(residual, scale, tol),
        }
    }

    pub fn relative(&self) -> f64 {
        self.residual / self.scale
    }
}

fn commutator_report(
    geom: &LocalGeometry,
    condition: ConditionId,
    t: &TensorValue,
    tol: f64,
) -> (ResidualReport, TensorValue) {
    let riemann = geom.riemann_mixed();
    let action = commutator_action(&riemann, t);
    // the residual is bilinear in (Riemann, T)
    let largest = riemann.max_abs().max(t.max_abs());
    let scale = largest * largest;
    (
        ResidualReport::new(condition, geom.point_name(), action.max_abs(), scale, tol),
        action,
    )
}

/// Eq. `R·R = 0` through the Ricci identity.
pub fn semi_symmetry_residual(geom: &LocalGeometry, tol: f64) -> ResidualReport {
    let riemann = geom.curvature().riemann;
    commutator_report(geom, ConditionId::Semi, &riemann, tol).0
}

/// `R·C = 0` through the Ricci identity.
pub fn conformal_semi_symmetry_residual(geom: &LocalGeometry, tol: f64) -> ResidualReport {
    let weyl = geom.curvature().weyl;
    commutator_report(geom, ConditionId::Conformal, &weyl, tol).0
}

/// `R·Ric = 0` through the Ricci identity.
pub fn ricci_semi_symmetry_residual(geom: &LocalGeometry, tol: f64) -> ResidualReport {
    let ricci = geom.curvature().ricci;
    commutator_report(geom, ConditionId::Ricci, &ricci, tol).0
}

/// `max |∇_a∇_b R_cdef|`, by two covariant derivatives of the Riemann jet.
pub fn second_order_symmetry_residual(
    geom: &LocalGeometry,
    tol: f64,
) -> Result<ResidualReport, GeometryError> {
    let dd = geom.second_covariant_derivative(geom.riemann_jet())?;
    let residual = dd.data().iter().map(|j| j.value().abs()).fold(0.0, f64::max);
    let scale = geom.curvature().riemann.max_abs();
    Ok(ResidualReport::new(
        ConditionId::SecondOrder,
        geom.point_name(),
        residual,
        scale,
        tol,
    ))
}

/// `max |∇_a R_bcde|`.
pub fn locally_symmetric_residual(
    geom: &LocalGeometry,
    tol: f64,
) -> Result<ResidualReport, GeometryError> {
    let d = geom.covariant_derivative(geom.riemann_jet())?;
    let residual = d.data().iter().map(|j| j.value().abs()).fold(0.0, f64::max);
    let scale = geom.curvature().riemann.max_abs();
    Ok(ResidualReport::new(
        ConditionId::LocallySymmetric,
        geom.point_name(),
        residual,
        scale,
        tol,
    ))
}

/// Comparison of the Ricci-identity route with explicit differentiation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub condition: ConditionId,
    /// Residual from two explicit covariant derivatives, antisymmetrized.
    pub direct: f64,
    /// Residual from the Ricci identity.
    pub commutator: f64,
    /// `max |commutator − direct| / scale`.
    pub disagreement: f64,
}

/// Cross-validates the three commutator conditions against the direct route.
pub fn cross_validate(geom: &LocalGeometry, tol: f64) -> Result<Vec<CrossCheck>, GeometryError> {
    let curv = geom.curvature();
    let cases = [
        (ConditionId::Semi, geom.riemann_jet(), &curv.riemann),
        (ConditionId::Conformal, geom.weyl_jet(), &curv.weyl),
        (ConditionId::Ricci, geom.ricci_jet(), &curv.ricci),
    ];
    let mut out = Vec::with_capacity(3);
    for (condition, jet, value) in cases {
        let (report, action) = commutator_report(geom, condition, value, tol);
        let direct = geom.direct_commutator(jet)?;
        out.push(CrossCheck {
            condition,
            direct: direct.max_abs(),
            commutator: report.residual,
            disagreement: action.max_abs_diff(&direct) / report.scale,
        });
    }
    Ok(out)
}

/// All five curvature-condition residuals at a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualSuite {
    pub semi: ResidualReport,
    pub conformal: ResidualReport,
    pub ricci: ResidualReport,
    pub second_order: ResidualReport,
    #[serde(rename = "nabla_riemann")]
    pub locally_symmetric: ResidualReport,
}

pub fn residual_suite(geom: &LocalGeometry, tol: f64) -> Result<ResidualSuite, GeometryError> {
    Ok(ResidualSuite {
        semi: semi_symmetry_residual(geom, tol),
        conformal: conformal_semi_symmetry_residual(geom, tol),
        ricci: ricci_semi_symmetry_residual(geom, tol),
        second_order: second_order_symmetry_residual(geom, tol)?,
        locally_symmetric: locally_symmetric_residual(geom, tol)?,
    })
}

/// `∇_a X_b` of a lowered vector field together with the size of its two
/// ingredients (partial derivatives and connection terms).
fn gradient_with_scale(
    geom: &LocalGeometry,
    field_up: &Tensor<Jet>,
) -> Result<(TensorValue, TensorValue, f64), GeometryError> {
    let lowered = geom.lower_all(field_up);
    let nabla = geom.covariant_derivative(&lowered)?.map(Jet::value);
    let partial = Tensor::from_fn(all_down(2), |i| lowered.get(&[i[1]]).partial(i[0]).value());
    let connection = Tensor::from_fn(all_down(2), |i| nabla.get(i) - partial.get(i));
    let scale = partial.max_abs().max(connection.max_abs());
    let value = lowered.map(Jet::value);
    Ok((nabla, value, scale))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecurrenceResult {
    /// `v_a = Y^b ∇_a X_b` with `Y` the partner null vector.
    pub covector: [f64; 4],
    pub report: ResidualReport,
}

/// Tests `∇_a X_b = v_a X_b` for tetrad field `which` (0 = k, 1 = ℓ), using
/// the other real null field as partner.
pub fn recurrence_check(
    geom: &LocalGeometry,
    tetrad: &TetradJets,
    which: usize,
    tol: f64,
) -> Result<RecurrenceResult, GeometryError> {
    assert!(which < 2, "recurrence is tested for k or l");
    let partner = tetrad.fields[1 - which].map(Jet::value);
    let (nabla, x, scale) = gradient_with_scale(geom, &tetrad.fields[which])?;
    let v: [f64; 4] =
        std::array::from_fn(|a| (0..DIM).map(|b| partner.get(&[b]) * nabla.get(&[a, b])).sum());
    let mut residual: f64 = 0.0;
    let mut vx: f64 = 0.0;
    for a in 0..DIM {
        for b in 0..DIM {
            let term = v[a] * x.get(&[b]);
            vx = vx.max(term.abs());
            residual = residual.max((nabla.get(&[a, b]) - term).abs());
        }
    }
    Ok(RecurrenceResult {
        covector: v,
        report: ResidualReport::new(
            ConditionId::Recurrence,
            geom.point_name(),
            residual,
            scale.max(vx),
            tol,
        ),
    })
}

/// `max |∇_c (k_a ℓ_b)|`.
pub fn decomposability_check(
    geom: &LocalGeometry,
    tetrad: &TetradJets,
    tol: f64,
) -> Result<ResidualReport, GeometryError> {
    let (dk, k, sk) = gradient_with_scale(geom, &tetrad.fields[0])?;
    let (dl, l, sl) = gradient_with_scale(geom, &tetrad.fields[1])?;
    let mut residual: f64 = 0.0;
    for c in 0..DIM {
        for a in 0..DIM {
            for b in 0..DIM {
                let v = dk.get(&[c, a]) * l.get(&[b]) + k.get(&[a]) * dl.get(&[c, b]);
                residual = residual.max(v.abs());
            }
        }
    }
    let scale = (sk * l.max_abs()).max(sl * k.max_abs());
    Ok(ResidualReport::new(
        ConditionId::Decomposability,
        geom.point_name(),
        residual,
        scale,
        tol,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantNullReport {
    pub report: ResidualReport,
    /// `|k·k|`
    pub null_defect: f64,
    pub null: bool,
}

/// `max |∇_a k_b|` together with a nullness check on `k`.
pub fn constant_null_vector_check(
    geom: &LocalGeometry,
    tetrad: &TetradJets,
    tol: f64,
) -> Result<ConstantNullReport, GeometryError> {
    let (dk, k, scale) = gradient_with_scale(geom, &tetrad.fields[0])?;
    let k_up = tetrad.fields[0].map(Jet::value);
    let kk: f64 = (0..DIM).map(|a| k.get(&[a]) * k_up.get(&[a])).sum();
    let kk_scale: f64 = (0..DIM).map(|a| (k.get(&[a]) * k_up.get(&[a])).abs()).sum();
    Ok(ConstantNullReport {
        report: ResidualReport::new(
            ConditionId::ConstantNullVector,
            geom.point_name(),
            dk.max_abs(),
            scale,
            tol,
        ),
        null_defect: kk.abs(),
        null: kk.abs() <= tol * kk_scale.max(1.0),
    })
}
