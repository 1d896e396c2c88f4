use std::collections::BTreeMap;

use thiserror::Error;

use super::{BinOp, Expr, Func, Node, Scope, Symbol};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("domain error: {reason} in `{expr}`")]
    Domain { reason: String, expr: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BindingsError {
    #[error("`{0}` is not declared")]
    Unknown(String),
    #[error("`{0}` is bound more than once")]
    Duplicate(String),
    #[error("`{0}` is not bound")]
    Missing(String),
    #[error("`{name}` is bound to the non-finite value {value}")]
    NonFinite { name: String, value: f64 },
}

/// Values for every coordinate and parameter of a [`Scope`], stored by index.
#[derive(Debug, Clone, PartialEq)]
pub struct Bindings {
    coords: Vec<f64>,
    params: Vec<f64>,
}

impl Bindings {
    pub fn from_slices(coords: &[f64], params: &[f64]) -> Self {
        Bindings {
            coords: coords.to_vec(),
            params: params.to_vec(),
        }
    }

    /// Builds bindings from `(name, value)` pairs; every declared name must be
    /// bound exactly once to a finite value.
    pub fn from_named<'a, I>(scope: &Scope, pairs: I) -> Result<Self, BindingsError>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let mut seen: BTreeMap<&str, f64> = BTreeMap::new();
        for (name, value) in pairs {
            if scope.resolve(name).is_none() {
                return Err(BindingsError::Unknown(name.to_string()));
            }
            if !value.is_finite() {
                return Err(BindingsError::NonFinite {
                    name: name.to_string(),
                    value,
                });
            }
            if seen.insert(name, value).is_some() {
                return Err(BindingsError::Duplicate(name.to_string()));
            }
        }
        let lookup = |name: &str| {
            seen.get(name)
                .copied()
                .ok_or_else(|| BindingsError::Missing(name.to_string()))
        };
        Ok(Bindings {
            coords: scope.coords().map(lookup).collect::<Result<_, _>>()?,
            params: scope.params().map(lookup).collect::<Result<_, _>>()?,
        })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn with_coords(&self, coords: &[f64]) -> Bindings {
        Bindings {
            coords: coords.to_vec(),
            params: self.params.clone(),
        }
    }

    fn value(&self, s: &Symbol) -> f64 {
        match s {
            Symbol::Coord { index, .. } => self.coords[*index],
            Symbol::Param { index, .. } => self.params[*index],
        }
    }
}

fn domain(reason: &str, e: &Expr) -> EvalError {
    EvalError::Domain {
        reason: reason.to_string(),
        expr: e.to_string(),
    }
}

pub(super) fn apply_func(f: Func, x: f64) -> Result<f64, &'static str> {
    Ok(match f {
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Tan => {
            if x.cos() == 0.0 {
                return Err("tangent pole");
            }
            x.tan()
        }
        Func::Sinh => x.sinh(),
        Func::Cosh => x.cosh(),
        Func::Tanh => x.tanh(),
        Func::Exp => x.exp(),
        Func::Log => {
            if x <= 0.0 {
                return Err("logarithm of a non-positive value");
            }
            x.ln()
        }
        Func::Sqrt => {
            if x < 0.0 {
                return Err("square root of a negative value");
            }
            x.sqrt()
        }
        Func::Abs => x.abs(),
    })
}

impl Expr {
    /// Evaluates in IEEE double precision.
    pub fn eval(&self, b: &Bindings) -> Result<f64, EvalError> {
        let v = match self.node() {
            Node::Const(c) => *c,
            Node::Var(s) => b.value(s),
            Node::Neg(a) => -a.eval(b)?,
            Node::Call(f, a) => {
                let x = a.eval(b)?;
                apply_func(*f, x).map_err(|r| domain(r, self))?
            }
            Node::Binary(op, l, r) => {
                let x = l.eval(b)?;
                let y = r.eval(b)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(domain("division by zero", self));
                        }
                        x / y
                    }
                    BinOp::Pow => pow(x, y).map_err(|r| domain(r, self))?,
                }
            }
        };
        if !v.is_finite() {
            return Err(domain("non-finite result", self));
        }
        Ok(v)
    }
}

fn pow(x: f64, y: f64) -> Result<f64, &'static str> {
    if x == 0.0 && y < 0.0 {
        return Err("zero raised to a negative power");
    }
    if y.fract() == 0.0 && y.abs() <= i32::MAX as f64 {
        return Ok(x.powi(y as i32));
    }
    if x < 0.0 {
        return Err("negative base with non-integer exponent");
    }
    Ok(x.powf(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn scope() -> Scope {
        Scope::new(&["t", "r", "theta", "phi"], &["M"])
    }

    fn bind(r: f64, theta: f64) -> Bindings {
        Bindings::from_named(
            &scope(),
            [("t", 0.0), ("r", r), ("theta", theta), ("phi", 0.0), ("M", 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn evaluates_simple_expressions() {
        let s = scope();
        let e = parse_expr("1-2*M/r", &s).unwrap();
        assert_eq!(e.eval(&bind(4.0, 0.0)).unwrap(), 0.5);
        let e = parse_expr("sin(theta)", &s).unwrap();
        assert_eq!(e.eval(&bind(4.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn reports_domain_errors_with_subexpression() {
        let s = scope();
        let e = parse_expr("1 + 1/r", &s).unwrap();
        let err = e.eval(&bind(0.0, 0.0)).unwrap_err();
        let EvalError::Domain { reason, expr } = err;
        assert_eq!(reason, "division by zero");
        assert_eq!(expr, "1.0 / r");

        let e = parse_expr("log(r - 5)", &s).unwrap();
        assert!(e.eval(&bind(4.0, 0.0)).is_err());
        let e = parse_expr("sqrt(r - 5)", &s).unwrap();
        assert!(e.eval(&bind(4.0, 0.0)).is_err());
    }

    #[test]
    fn bindings_are_validated() {
        let s = scope();
        let missing = Bindings::from_named(&s, [("t", 0.0), ("r", 1.0)]);
        assert!(matches!(missing, Err(BindingsError::Missing(_))));
        let dup = Bindings::from_named(
            &s,
            [("t", 0.0), ("t", 0.0), ("r", 1.0), ("theta", 0.0), ("phi", 0.0), ("M", 1.0)],
        );
        assert!(matches!(dup, Err(BindingsError::Duplicate(_))));
        let unknown = Bindings::from_named(&s, [("q", 0.0)]);
        assert!(matches!(unknown, Err(BindingsError::Unknown(_))));
        let nan = Bindings::from_named(&s, [("t", f64::NAN)]);
        assert!(matches!(nan, Err(BindingsError::NonFinite { .. })));
    }
}
