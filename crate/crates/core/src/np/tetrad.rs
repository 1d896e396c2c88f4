use num_complex::Complex64;
use serde::Serialize;

use crate::expr::{Bindings, DiffError, EvalError, Expr};
use crate::geometry::{DerivativeTable, GeometryError, LocalGeometry, MetricField, SamplePoint};
use crate::jet::Jet;
use crate::tensor::{Tensor, TensorValue, Variance, DIM};

use super::rotation::NullRotation;

/// The four tetrad vector fields `k, ℓ, Re m, Im m` as contravariant
/// components in the chart.
#[derive(Debug, Clone)]
pub struct NullTetrad {
    fields: [[Expr; 4]; 4],
    tables: Vec<DerivativeTable>,
}

/// Order of the jets kept for tetrad fields; spin coefficients need one.
const TETRAD_ORDER: usize = 2;

pub const TETRAD_NAMES: [&str; 4] = ["k", "l", "m_re", "m_im"];

impl NullTetrad {
    pub fn new(
        k: [Expr; 4],
        l: [Expr; 4],
        m_re: [Expr; 4],
        m_im: [Expr; 4],
    ) -> Result<Self, DiffError> {
        let fields = [k, l, m_re, m_im];
        let tables = fields
            .iter()
            .flat_map(|f| f.iter())
            .map(|e| DerivativeTable::new(e, TETRAD_ORDER))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(NullTetrad { fields, tables })
    }

    /// Field `which` (0 = k, 1 = ℓ, 2 = Re m, 3 = Im m), component `a`.
    pub fn component(&self, which: usize, a: usize) -> &Expr {
        &self.fields[which][a]
    }

    pub fn value(&self, b: &Bindings) -> Result<TetradValue, EvalError> {
        let mut v = [[0.0; 4]; 4];
        for (w, field) in self.fields.iter().enumerate() {
            for a in 0..DIM {
                v[w][a] = field[a].eval(b)?;
            }
        }
        Ok(TetradValue { vectors: v })
    }

    pub fn jets(&self, b: &Bindings) -> Result<TetradJets, EvalError> {
        let mut fields = Vec::with_capacity(4);
        for w in 0..4 {
            let comps = (0..DIM)
                .map(|a| self.tables[w * 4 + a].jet(b, TETRAD_ORDER))
                .collect::<Result<Vec<_>, _>>()?;
            fields.push(Tensor::from_data(vec![Variance::Up], comps));
        }
        Ok(TetradJets {
            fields: fields.try_into().expect("four fields"),
        })
    }
}

/// Tetrad vectors (contravariant) at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TetradValue {
    /// `k, ℓ, Re m, Im m`.
    pub vectors: [[f64; 4]; 4],
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl TetradValue {
    pub fn k(&self) -> [Complex64; 4] {
        self.vectors[0].map(c)
    }

    pub fn l(&self) -> [Complex64; 4] {
        self.vectors[1].map(c)
    }

    pub fn m(&self) -> [Complex64; 4] {
        std::array::from_fn(|a| Complex64::new(self.vectors[2][a], self.vectors[3][a]))
    }

    pub fn mbar(&self) -> [Complex64; 4] {
        self.m().map(|z| z.conj())
    }

    pub fn transformed(&self, r: &NullRotation) -> TetradValue {
        let m = r.matrix();
        let mut out = [[0.0; 4]; 4];
        for (i, row) in m.iter().enumerate() {
            for (j, &coef) in row.iter().enumerate() {
                for a in 0..DIM {
                    out[i][a] += coef * self.vectors[j][a];
                }
            }
        }
        TetradValue { vectors: out }
    }

    /// Swaps `k ↔ ℓ` and `m ↔ m̄`, which maps `Ψ_n → Ψ_{4−n}`.
    pub fn swapped(&self) -> TetradValue {
        let v = &self.vectors;
        TetradValue {
            vectors: [v[1], v[0], v[2], v[3].map(|x| -x)],
        }
    }
}

/// Tetrad fields as jets around one point.
#[derive(Debug, Clone)]
pub struct TetradJets {
    /// `k, ℓ, Re m, Im m`, all contravariant.
    pub fields: [Tensor<Jet>; 4],
}

impl TetradJets {
    pub fn value(&self) -> TetradValue {
        TetradValue {
            vectors: std::array::from_fn(|w| {
                std::array::from_fn(|a| self.fields[w].get(&[a]).value())
            }),
        }
    }

    /// Applies a Lorentz transformation with constant parameters.
    pub fn transformed(&self, r: &NullRotation) -> TetradJets {
        let m = r.matrix();
        let fields = std::array::from_fn(|i| {
            Tensor::from_fn(vec![Variance::Up], |idx| {
                let order = self.fields[0].get(idx).order();
                let mut s = Jet::zero(order);
                for (j, &coef) in m[i].iter().enumerate() {
                    if coef != 0.0 {
                        s.add_scaled(coef, self.fields[j].get(idx));
                    }
                }
                s
            })
        });
        TetradJets { fields }
    }

    pub fn swapped(&self) -> TetradJets {
        let f = &self.fields;
        TetradJets {
            fields: [f[1].clone(), f[0].clone(), f[2].clone(), f[3].map(|j| j.scale(-1.0))],
        }
    }
}

/// `g_ab u^a v^b` for complex vectors, plus the sum of absolute term sizes.
pub fn inner(g: &TensorValue, u: &[Complex64; 4], v: &[Complex64; 4]) -> (Complex64, f64) {
    let mut s = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    for a in 0..DIM {
        for b in 0..DIM {
            let t = u[a] * v[b] * g.get(&[a, b]);
            s += t;
            mag += t.norm();
        }
    }
    (s, mag)
}

/// One normalization product of a tetrad check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductResidual {
    pub product: String,
    pub residual: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TetradReport {
    pub point: String,
    pub residuals: Vec<ProductResidual>,
    pub valid: bool,
}

impl TetradReport {
    pub fn failing(&self, tol: f64) -> Vec<&ProductResidual> {
        self.residuals
            .iter()
            .filter(|r| r.residual > tol * r.scale)
            .collect()
    }
}

/// Checks `k·k = ℓ·ℓ = m·m = 0`, `k·ℓ = 1`, `m·m̄ = −1`, `k·m = ℓ·m = 0`
/// (and the conjugate products) at `p`.
pub fn validate_tetrad_value(
    g: &TensorValue,
    t: &TetradValue,
    point: &str,
    tol: f64,
) -> TetradReport {
    let (k, l, m, mb) = (t.k(), t.l(), t.m(), t.mbar());
    let checks: [(&str, &[Complex64; 4], &[Complex64; 4], f64); 9] = [
        ("k.k", &k, &k, 0.0),
        ("l.l", &l, &l, 0.0),
        ("k.l", &k, &l, 1.0),
        ("m.m", &m, &m, 0.0),
        ("m.mbar", &m, &mb, -1.0),
        ("k.m", &k, &m, 0.0),
        ("k.mbar", &k, &mb, 0.0),
        ("l.m", &l, &m, 0.0),
        ("l.mbar", &l, &mb, 0.0),
    ];
    let residuals: Vec<ProductResidual> = checks
        .iter()
        .map(|(name, u, v, target)| {
            let (val, mag) = inner(g, u, v);
            ProductResidual {
                product: name.to_string(),
                residual: (val - target).norm(),
                scale: mag.max(1.0),
            }
        })
        .collect();
    let valid = residuals.iter().all(|r| r.residual <= tol * r.scale);
    TetradReport {
        point: point.to_string(),
        residuals,
        valid,
    }
}

/// Validates the metric's declared tetrad at a sample point.
pub fn validate_tetrad(
    m: &MetricField,
    p: &SamplePoint,
    tol: f64,
) -> Result<TetradReport, GeometryError> {
    let tetrad = m
        .tetrad()
        .ok_or_else(|| GeometryError::MissingTetrad(m.name().to_string()))?;
    let b = m.bindings(&p.coords);
    let eval_err = |source| GeometryError::Eval {
        point: p.name.clone(),
        source,
    };
    let gv = m.metric_at(&p.coords).map_err(eval_err)?;
    let g = Tensor::from_fn(crate::tensor::all_down(2), |i| gv[i[0]][i[1]]);
    let t = tetrad.value(&b).map_err(eval_err)?;
    Ok(validate_tetrad_value(&g, &t, &p.name, tol))
}

/// `∇_b X_a` of each tetrad covector at the point, slots `[b, a]`.
pub(crate) fn tetrad_gradients(
    geom: &LocalGeometry,
    t: &TetradJets,
) -> Result<[TensorValue; 4], GeometryError> {
    let mut out = Vec::with_capacity(4);
    for field in &t.fields {
        let lowered = geom.lower_all(field);
        out.push(geom.covariant_derivative(&lowered)?.map(Jet::value));
    }
    Ok(out.try_into().expect("four gradients"))
}
