//! Metric fields and the curvature pipeline.

mod local;

use thiserror::Error;

use crate::expr::{Bindings, DiffError, EvalError, Expr, Scope};
use crate::jet::{self, Jet, MAX_ORDER};
use crate::np::NullTetrad;

pub use local::{commutator_action, Curvature, LocalGeometry};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("metric is degenerate at point `{point}` (det g = {det:e})")]
    Degenerate { point: String, det: f64 },
    #[error("metric at point `{point}` has signature ({positive} positive, {negative} negative), expected (+,-,-,-)")]
    Signature {
        point: String,
        positive: usize,
        negative: usize,
    },
    #[error("cannot evaluate metric at point `{point}`: {source}")]
    Eval { point: String, source: EvalError },
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error("metric `{0}` declares no null tetrad")]
    MissingTetrad(String),
    #[error("tensor rank {0} exceeds the supported maximum of 6")]
    RankOverflow(usize),
}

/// A named point of the chart.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePoint {
    pub name: String,
    pub coords: [f64; 4],
}

/// Position of `(a, b)` in the upper-triangular component list.
pub fn sym_index(a: usize, b: usize) -> usize {
    let (i, j) = if a <= b { (a, b) } else { (b, a) };
    // rows of lengths 4, 3, 2, 1
    i * 4 - i * (i.saturating_sub(1)) / 2 + (j - i)
}

/// Upper-triangular `(a, b)` pairs in storage order.
pub const SYM_PAIRS: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

/// Every partial derivative `∂^α f` with `|α| <= order`, in jet storage order.
#[derive(Debug, Clone)]
pub(crate) struct DerivativeTable {
    order: usize,
    exprs: Vec<Expr>,
}

impl DerivativeTable {
    pub(crate) fn new(f: &Expr, order: usize) -> Result<Self, DiffError> {
        let ms = jet::monomials(order);
        let mut exprs: Vec<Expr> = Vec::with_capacity(ms.len());
        exprs.push(f.clone());
        for m in &ms[1..] {
            let var = m.iter().position(|&x| x > 0).expect("non-constant monomial");
            let mut parent = *m;
            parent[var] -= 1;
            let base = &exprs[jet::monomial_index(&parent)];
            let d = base.differentiate(var)?;
            exprs.push(d);
        }
        Ok(DerivativeTable { order, exprs })
    }

    pub(crate) fn jet(&self, b: &Bindings, order: usize) -> Result<Jet, EvalError> {
        let order = order.min(self.order);
        let n = jet::monomials(order).len();
        let values = self.exprs[..n]
            .iter()
            .map(|e| e.eval(b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Jet::from_derivatives(order, &values))
    }
}

/// A chart, a symmetric metric of expressions, parameter values, an optional
/// null tetrad and named sample points.
#[derive(Debug, Clone)]
pub struct MetricField {
    name: String,
    scope: Scope,
    param_values: Vec<f64>,
    components: Vec<Expr>,
    derivatives: Vec<DerivativeTable>,
    tetrad: Option<NullTetrad>,
    points: Vec<SamplePoint>,
}

impl MetricField {
    /// `components` are the ten entries `g_ab`, `a <= b`, in [`SYM_PAIRS`] order.
    pub fn new(
        name: impl Into<String>,
        scope: Scope,
        param_values: Vec<f64>,
        components: Vec<Expr>,
    ) -> Result<Self, GeometryError> {
        assert_eq!(scope.coord_count(), 4, "a chart has four coordinates");
        assert_eq!(components.len(), 10, "ten metric components");
        assert_eq!(param_values.len(), scope.param_count());
        let derivatives = components
            .iter()
            .map(|c| DerivativeTable::new(c, MAX_ORDER))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MetricField {
            name: name.into(),
            scope,
            param_values,
            components,
            derivatives,
            tetrad: None,
            points: Vec::new(),
        })
    }

    pub fn with_tetrad(mut self, tetrad: NullTetrad) -> Self {
        self.tetrad = Some(tetrad);
        self
    }

    pub fn with_points(mut self, points: Vec<SamplePoint>) -> Self {
        self.points = points;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn scope(&self) -> &Scope {
        &self.scope
    }

    pub fn param_values(&self) -> &[f64] {
        &self.param_values
    }

    pub fn component(&self, a: usize, b: usize) -> &Expr {
        &self.components[sym_index(a, b)]
    }

    pub fn tetrad(&self) -> Option<&NullTetrad> {
        self.tetrad.as_ref()
    }

    pub fn points(&self) -> &[SamplePoint] {
        &self.points
    }

    pub fn point(&self, name: &str) -> Option<&SamplePoint> {
        self.points.iter().find(|p| p.name == name)
    }

    pub fn bindings(&self, coords: &[f64; 4]) -> Bindings {
        Bindings::from_slices(coords, &self.param_values)
    }

    /// Numeric metric components at `coords`.
    pub fn metric_at(&self, coords: &[f64; 4]) -> Result<[[f64; 4]; 4], EvalError> {
        let b = self.bindings(coords);
        let mut g = [[0.0; 4]; 4];
        for (k, &(a, c)) in SYM_PAIRS.iter().enumerate() {
            let v = self.components[k].eval(&b)?;
            g[a][c] = v;
            g[c][a] = v;
        }
        Ok(g)
    }

    /// Checks that the metric is non-degenerate with signature (+,−,−,−) at `p`.
    pub fn check_point(&self, p: &SamplePoint) -> Result<(), GeometryError> {
        let g = self.metric_at(&p.coords).map_err(|source| GeometryError::Eval {
            point: p.name.clone(),
            source,
        })?;
        local::check_lorentzian(&p.name, &nalgebra::Matrix4::from_fn(|a, b| g[a][b]))
    }

    pub(crate) fn derivative_tables(&self) -> &[DerivativeTable] {
        &self.derivatives
    }

    /// Curvature data at a named sample point.
    pub fn local(&self, point: &SamplePoint) -> Result<LocalGeometry, GeometryError> {
        LocalGeometry::new(self, &point.name, &point.coords)
    }

    /// Curvature data at arbitrary coordinates.
    pub fn local_at(&self, coords: &[f64; 4]) -> Result<LocalGeometry, GeometryError> {
        LocalGeometry::new(self, "<anonymous>", coords)
    }
}

/// `Γ^a_{bc}` at `coords`.
pub fn christoffel(
    m: &MetricField,
    coords: &[f64; 4],
) -> Result<crate::tensor::TensorValue, GeometryError> {
    Ok(m.local_at(coords)?.christoffel())
}

/// Riemann, Ricci, scalar and Weyl curvature at `coords`.
pub fn curvature(m: &MetricField, coords: &[f64; 4]) -> Result<Curvature, GeometryError> {
    Ok(m.local_at(coords)?.curvature())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym_index_covers_upper_triangle() {
        for (k, &(a, b)) in SYM_PAIRS.iter().enumerate() {
            assert_eq!(sym_index(a, b), k);
            assert_eq!(sym_index(b, a), k);
        }
    }
}
