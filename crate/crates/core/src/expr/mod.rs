//! Scalar expressions over chart coordinates and named parameters.
//!
//! An [`Expr`] is an immutable, reference-counted tree. Every identifier is
//! resolved against a [`Scope`] when parsed, so evaluation is a flat lookup
//! into a [`Bindings`] vector rather than a name search.

mod diff;
mod eval;
mod parse;

use std::fmt;
use std::sync::Arc;

pub use diff::DiffError;
pub use eval::{Bindings, BindingsError, EvalError};
pub use parse::{parse_expr, ParseError};

/// Elementary functions understood by the parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// A resolved identifier: either the `index`-th chart coordinate or the
/// `index`-th parameter of the enclosing [`Scope`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Symbol {
    Coord { index: usize, name: Arc<str> },
    Param { index: usize, name: Arc<str> },
}

impl Symbol {
    pub fn name(&self) -> &str {
        match self {
            Symbol::Coord { name, .. } | Symbol::Param { name, .. } => name,
        }
    }
}

#[derive(Debug, PartialEq)]
pub enum Node {
    Const(f64),
    Var(Symbol),
    Neg(Expr),
    Binary(BinOp, Expr, Expr),
    Call(Func, Expr),
}

/// Immutable expression tree. Cloning is cheap.
#[derive(Clone, PartialEq)]
pub struct Expr(Arc<Node>);

/// Declared names an expression may refer to.
///
/// The constant `pi` is always available and behaves like a literal.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scope {
    coords: Vec<Arc<str>>,
    params: Vec<Arc<str>>,
}

impl Scope {
    pub fn new<S: AsRef<str>>(coords: &[S], params: &[S]) -> Self {
        Scope {
            coords: coords.iter().map(|s| Arc::from(s.as_ref())).collect(),
            params: params.iter().map(|s| Arc::from(s.as_ref())).collect(),
        }
    }

    pub fn coords(&self) -> impl Iterator<Item = &str> {
        self.coords.iter().map(|s| &**s)
    }

    pub fn params(&self) -> impl Iterator<Item = &str> {
        self.params.iter().map(|s| &**s)
    }

    pub fn coord_count(&self) -> usize {
        self.coords.len()
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| &**c == name)
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|c| &**c == name)
    }

    pub fn resolve(&self, name: &str) -> Option<Symbol> {
        if let Some(index) = self.coord_index(name) {
            return Some(Symbol::Coord {
                index,
                name: self.coords[index].clone(),
            });
        }
        self.param_index(name).map(|index| Symbol::Param {
            index,
            name: self.params[index].clone(),
        })
    }
}

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(value: f64) -> Expr {
        Expr(Arc::new(Node::Const(value)))
    }

    pub fn var(symbol: Symbol) -> Expr {
        Expr(Arc::new(Node::Var(symbol)))
    }

    pub fn zero() -> Expr {
        Expr::constant(0.0)
    }

    pub fn one() -> Expr {
        Expr::constant(1.0)
    }

    pub fn as_const(&self) -> Option<f64> {
        match *self.0 {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    fn is_one(&self) -> bool {
        self.as_const() == Some(1.0)
    }

    fn folded(value: f64) -> Option<Expr> {
        value.is_finite().then(|| Expr::constant(value))
    }

    pub fn neg(a: Expr) -> Expr {
        match a.node() {
            Node::Const(c) => Expr::constant(-c),
            Node::Neg(inner) => inner.clone(),
            _ => Expr(Arc::new(Node::Neg(a))),
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if let Some(e) = Expr::folded(x + y) {
                return e;
            }
        }
        Expr(Arc::new(Node::Binary(BinOp::Add, a, b)))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        if b.is_zero() {
            return a;
        }
        if a.is_zero() {
            return Expr::neg(b);
        }
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if let Some(e) = Expr::folded(x - y) {
                return e;
            }
        }
        Expr(Arc::new(Node::Binary(BinOp::Sub, a, b)))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        if a.is_zero() || b.is_zero() {
            return Expr::zero();
        }
        if a.is_one() {
            return b;
        }
        if b.is_one() {
            return a;
        }
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if let Some(e) = Expr::folded(x * y) {
                return e;
            }
        }
        Expr(Arc::new(Node::Binary(BinOp::Mul, a, b)))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        if b.is_one() {
            return a;
        }
        if a.is_zero() && !b.is_zero() {
            return Expr::zero();
        }
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if let Some(e) = Expr::folded(x / y) {
                return e;
            }
        }
        Expr(Arc::new(Node::Binary(BinOp::Div, a, b)))
    }

    pub fn pow(a: Expr, b: Expr) -> Expr {
        if b.is_one() {
            return a;
        }
        if b.is_zero() {
            return Expr::one();
        }
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if let Some(e) = Expr::folded(x.powf(y)) {
                return e;
            }
        }
        Expr(Arc::new(Node::Binary(BinOp::Pow, a, b)))
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        if let Some(x) = a.as_const() {
            if let Ok(v) = eval::apply_func(f, x) {
                if let Some(e) = Expr::folded(v) {
                    return e;
                }
            }
        }
        Expr(Arc::new(Node::Call(f, a)))
    }

    pub fn binary(op: BinOp, a: Expr, b: Expr) -> Expr {
        match op {
            BinOp::Add => Expr::add(a, b),
            BinOp::Sub => Expr::sub(a, b),
            BinOp::Mul => Expr::mul(a, b),
            BinOp::Div => Expr::div(a, b),
            BinOp::Pow => Expr::pow(a, b),
        }
    }

    /// Whether the expression depends on the coordinate with this index.
    pub fn depends_on_coord(&self, index: usize) -> bool {
        match self.node() {
            Node::Const(_) => false,
            Node::Var(Symbol::Coord { index: i, .. }) => *i == index,
            Node::Var(Symbol::Param { .. }) => false,
            Node::Neg(a) | Node::Call(_, a) => a.depends_on_coord(index),
            Node::Binary(_, a, b) => a.depends_on_coord(index) || b.depends_on_coord(index),
        }
    }

    /// Number of nodes in the tree (shared subtrees counted once per use).
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Const(_) | Node::Var(_) => 1,
            Node::Neg(a) | Node::Call(_, a) => 1 + a.size(),
            Node::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    fn precedence(&self) -> u8 {
        match self.node() {
            Node::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Node::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Node::Neg(_) => 3,
            Node::Const(c) if *c < 0.0 => 3,
            Node::Binary(BinOp::Pow, ..) => 4,
            Node::Const(_) | Node::Var(_) | Node::Call(..) => 5,
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints in the parser's own grammar; `parse(print(e))` evaluates like `e`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Const(c) => {
                if *c < 0.0 {
                    write!(f, "-{:?}", -c)
                } else {
                    write!(f, "{c:?}")
                }
            }
            Node::Var(s) => f.write_str(s.name()),
            Node::Neg(a) => {
                f.write_str("-")?;
                write_operand(f, a, 4)
            }
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
            Node::Binary(op, a, b) => {
                let (lhs, rhs) = match op {
                    BinOp::Add => (1, 2),
                    BinOp::Sub => (1, 2),
                    BinOp::Mul => (2, 3),
                    BinOp::Div => (2, 3),
                    // `^` is right-associative and its base is an atom.
                    BinOp::Pow => (5, 4),
                };
                write_operand(f, a, lhs)?;
                write!(f, " {} ", op.symbol())?;
                write_operand(f, b, rhs)
            }
        }
    }
}
