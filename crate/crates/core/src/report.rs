//! Batch analysis over the points of a metric file and the golden records of
//! the built-in corpus.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{analyze_point, ClassificationReport, ClassifyError, ClassifyOptions, PointAnalysis};
use crate::metric_file::MetricFile;
use crate::np::{NPData, PetrovType, SpinCoefficients};
use crate::spinor::SpinorChecks;
use crate::symmetry::{CrossCheck, ResidualSuite, DEAD_BAND};

#[derive(Debug, Clone, Serialize)]
pub struct PointId {
    pub name: String,
    pub coords: [f64; 4],
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    pub tol: f64,
    pub dead_band: f64,
}

/// One point of an analysis, in the stable JSON layout.
#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub metric: String,
    pub point: PointId,
    pub residuals: ResidualSuite,
    pub petrov: PetrovType,
    pub np: NPData,
    pub spin_coefficients: SpinCoefficients,
    pub classification: ClassificationReport,
    pub spinor: SpinorChecks,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_validation: Option<Vec<CrossCheck>>,
    pub tolerances: Tolerances,
    pub seed: u64,
}

impl PointReport {
    fn new(metric: &str, a: PointAnalysis, opts: &ClassifyOptions) -> Self {
        PointReport {
            metric: metric.to_string(),
            point: PointId {
                name: a.point,
                coords: a.coords,
            },
            residuals: a.residuals,
            petrov: a.petrov,
            np: a.np,
            spin_coefficients: a.spin_coefficients,
            classification: a.classification,
            spinor: a.spinor,
            cross_validation: a.cross_validation,
            tolerances: Tolerances {
                tol: opts.tol,
                dead_band: DEAD_BAND,
            },
            seed: opts.seed,
        }
    }
}

/// Analyzes the named point, or every point when `point` is `None`. Points
/// are evaluated in parallel and reported in name order.
pub fn run_analysis(
    file: &MetricFile,
    point: Option<&str>,
    opts: &ClassifyOptions,
) -> Result<Vec<PointReport>, AnalysisError> {
    let points: Vec<_> = match point {
        Some(name) => vec![file
            .metric
            .point(name)
            .ok_or_else(|| AnalysisError::UnknownPoint(name.to_string()))?],
        None => file.metric.points().iter().collect(),
    };
    let mut reports = points
        .par_iter()
        .map(|p| analyze_point(file, p, opts).map(|a| PointReport::new(file.name(), a, opts)))
        .collect::<Result<Vec<_>, _>>()?;
    reports.sort_by(|a, b| a.point.name.cmp(&b.point.name));
    Ok(reports)
}

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error("no point named `{0}`")]
    UnknownPoint(String),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

impl AnalysisError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AnalysisError::UnknownPoint(_) => 1,
            AnalysisError::Classify(e) => e.exit_code(),
        }
    }
}

/// Stored expectations for one corpus point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenPoint {
    pub petrov: String,
    pub branch: String,
    /// Condition name to verdict, for the five residuals.
    pub verdicts: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenRecord {
    pub metric: String,
    pub points: BTreeMap<String, GoldenPoint>,
}

fn verdict_str(v: crate::symmetry::Verdict) -> String {
    v.as_str().to_string()
}

pub fn golden_record(metric: &str, reports: &[PointReport]) -> GoldenRecord {
    let points = reports
        .iter()
        .map(|r| {
            let s = &r.residuals;
            let verdicts = [
                ("semi", s.semi.verdict),
                ("conformal", s.conformal.verdict),
                ("ricci", s.ricci.verdict),
                ("second_order", s.second_order.verdict),
                ("nabla_riemann", s.locally_symmetric.verdict),
            ]
            .into_iter()
            .map(|(k, v)| (k.to_string(), verdict_str(v)))
            .collect();
            (
                r.point.name.clone(),
                GoldenPoint {
                    petrov: r.petrov.as_str().to_string(),
                    branch: r.classification.branch.as_str().to_string(),
                    verdicts,
                },
            )
        })
        .collect();
    GoldenRecord {
        metric: metric.to_string(),
        points,
    }
}

/// Human-readable differences between a stored and a fresh record.
pub fn golden_diff(expected: &GoldenRecord, actual: &GoldenRecord) -> Vec<String> {
    let mut out = Vec::new();
    for (name, exp) in &expected.points {
        match actual.points.get(name) {
            None => out.push(format!("{name}: missing from the run")),
            Some(act) => {
                if exp.petrov != act.petrov {
                    out.push(format!("{name}: petrov {} -> {}", exp.petrov, act.petrov));
                }
                if exp.branch != act.branch {
                    out.push(format!("{name}: branch {} -> {}", exp.branch, act.branch));
                }
                for (cond, v) in &exp.verdicts {
                    let got = act.verdicts.get(cond).map(String::as_str).unwrap_or("missing");
                    if v != got {
                        out.push(format!("{name}: {cond} {v} -> {got}"));
                    }
                }
            }
        }
    }
    for name in actual.points.keys() {
        if !expected.points.contains_key(name) {
            out.push(format!("{name}: not in the golden record"));
        }
    }
    out
}

/// One-line-per-point text rendering.
pub fn render_text(reports: &[PointReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let c = &r.classification;
        let v = &r.residuals;
        s.push_str(&format!(
            "{}/{}: petrov {} branch {} | semi {} conformal {} ricci {} second_order {} nabla_riemann {}\n",
            r.metric,
            r.point.name,
            r.petrov,
            c.branch,
            verdict_str(v.semi.verdict),
            verdict_str(v.conformal.verdict),
            verdict_str(v.ricci.verdict),
            verdict_str(v.second_order.verdict),
            verdict_str(v.locally_symmetric.verdict),
        ));
        if let (Some(a), Some(b)) = (c.a, c.b) {
            s.push_str(&format!("  A = {a:.6e}, B = {b:.6e}\n"));
        }
        for w in &c.warnings {
            s.push_str(&format!("  warning: {w}\n"));
        }
    }
    s
}
