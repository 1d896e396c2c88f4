use thiserror::Error;

use super::{BinOp, Expr, Func, Node, Scope, Symbol};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiffError {
    #[error("`{0}` is not a chart coordinate")]
    NotACoordinate(String),
    #[error("abs is not differentiable here: `{0}`")]
    Abs(String),
}

impl Expr {
    /// Exact partial derivative with respect to the coordinate named `var`.
    pub fn differentiate_by_name(&self, scope: &Scope, var: &str) -> Result<Expr, DiffError> {
        let index = scope
            .coord_index(var)
            .ok_or_else(|| DiffError::NotACoordinate(var.to_string()))?;
        self.differentiate(index)
    }

    /// Exact partial derivative with respect to coordinate `index`, folded.
    pub fn differentiate(&self, index: usize) -> Result<Expr, DiffError> {
        if !self.depends_on_coord(index) {
            return Ok(Expr::zero());
        }
        Ok(match self.node() {
            Node::Const(_) => Expr::zero(),
            Node::Var(Symbol::Coord { index: i, .. }) if *i == index => Expr::one(),
            Node::Var(_) => Expr::zero(),
            Node::Neg(a) => Expr::neg(a.differentiate(index)?),
            Node::Binary(op, a, b) => {
                let da = a.differentiate(index)?;
                let db = b.differentiate(index)?;
                match op {
                    BinOp::Add => Expr::add(da, db),
                    BinOp::Sub => Expr::sub(da, db),
                    BinOp::Mul => Expr::add(Expr::mul(da, b.clone()), Expr::mul(a.clone(), db)),
                    BinOp::Div => {
                        // (a'b - ab') / b^2
                        let num = Expr::sub(Expr::mul(da, b.clone()), Expr::mul(a.clone(), db));
                        Expr::div(num, Expr::pow(b.clone(), Expr::constant(2.0)))
                    }
                    BinOp::Pow => {
                        if !b.depends_on_coord(index) {
                            // b a^(b-1) a'
                            let reduced = Expr::pow(a.clone(), Expr::sub(b.clone(), Expr::one()));
                            Expr::mul(Expr::mul(b.clone(), reduced), da)
                        } else {
                            // a^b (b' log a + b a'/a)
                            let log_term = Expr::mul(db, Expr::call(Func::Log, a.clone()));
                            let ratio = Expr::div(Expr::mul(b.clone(), da), a.clone());
                            Expr::mul(self.clone(), Expr::add(log_term, ratio))
                        }
                    }
                }
            }
            Node::Call(f, a) => {
                let da = a.differentiate(index)?;
                let outer = match f {
                    Func::Sin => Expr::call(Func::Cos, a.clone()),
                    Func::Cos => Expr::neg(Expr::call(Func::Sin, a.clone())),
                    Func::Tan => Expr::div(
                        Expr::one(),
                        Expr::pow(Expr::call(Func::Cos, a.clone()), Expr::constant(2.0)),
                    ),
                    Func::Sinh => Expr::call(Func::Cosh, a.clone()),
                    Func::Cosh => Expr::call(Func::Sinh, a.clone()),
                    Func::Tanh => Expr::sub(
                        Expr::one(),
                        Expr::pow(Expr::call(Func::Tanh, a.clone()), Expr::constant(2.0)),
                    ),
                    Func::Exp => self.clone(),
                    Func::Log => Expr::div(Expr::one(), a.clone()),
                    Func::Sqrt => Expr::div(Expr::constant(0.5), self.clone()),
                    Func::Abs => return Err(DiffError::Abs(self.to_string())),
                };
                Expr::mul(outer, da)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expr, Bindings};

    fn scope() -> Scope {
        Scope::new(&["t", "r", "theta", "phi"], &["M"])
    }

    #[test]
    fn power_rule_on_inverse_radius() {
        let s = scope();
        let e = parse_expr("2*M/r", &s).unwrap();
        let d = e.differentiate_by_name(&s, "r").unwrap();
        let b = Bindings::from_slices(&[0.0, 3.0, 1.0, 0.0], &[1.5]);
        let expected = -2.0 * 1.5 / 9.0;
        assert!((d.eval(&b).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn parameters_and_other_coordinates_are_constant() {
        let s = scope();
        let e = parse_expr("M", &s).unwrap();
        assert!(e.differentiate_by_name(&s, "r").unwrap().is_zero());
        let e = parse_expr("sin(theta)^2", &s).unwrap();
        assert!(e.differentiate_by_name(&s, "t").unwrap().is_zero());
    }

    #[test]
    fn rejects_parameters_and_abs() {
        let s = scope();
        let e = parse_expr("r", &s).unwrap();
        assert!(matches!(
            e.differentiate_by_name(&s, "M"),
            Err(DiffError::NotACoordinate(_))
        ));
        let e = parse_expr("abs(r - 3)", &s).unwrap();
        assert!(matches!(e.differentiate(1), Err(DiffError::Abs(_))));
        // abs of something independent of the variable is harmless
        assert!(e.differentiate(0).unwrap().is_zero());
    }

    #[test]
    fn identity_elimination_keeps_trees_small() {
        let s = scope();
        let e = parse_expr("r^2", &s).unwrap();
        let d = e.differentiate(1).unwrap();
        assert_eq!(d.to_string(), "2.0 * r");
        let d2 = d.differentiate(1).unwrap();
        assert_eq!(d2.as_const(), Some(2.0));
        assert!(d2.differentiate(1).unwrap().is_zero());
    }
}
