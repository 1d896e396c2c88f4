//! Truncated Taylor expansions ("jets") of scalar fields in four variables.
//!
//! A jet of order `n` at a point `p` stores the coefficients `c_α` of
//! `f(p + h) = Σ_{|α| ≤ n} c_α h^α + O(|h|^{n+1})`. Sums, products and partial
//! derivatives of jets are exact on the retained coefficients, so a chain of
//! jet operations reproduces symbolic differentiation up to rounding.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

pub const VARS: usize = 4;
pub const MAX_ORDER: usize = 4;

/// Multi-index of a monomial `h^α`.
pub type MultiIndex = [u8; VARS];

struct Tables {
    monomials: Vec<MultiIndex>,
    /// Number of monomials of total degree `<= k`, for `k = 0..=MAX_ORDER`.
    counts: [usize; MAX_ORDER + 1],
    /// `(i, j, k)` with `m_i * m_j = m_k`, sorted by the degree of `m_k`.
    products: Vec<(u16, u16, u16)>,
    /// Number of product triples whose result degree is `<= k`.
    product_counts: [usize; MAX_ORDER + 1],
    /// `shift[v][k]` is the index of `m_k + e_v`, when that has degree `<= MAX_ORDER`.
    shift: [Vec<Option<u16>>; VARS],
}

fn degree(a: &MultiIndex) -> usize {
    a.iter().map(|&x| x as usize).sum()
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut monomials = Vec::new();
        for d in 0..=MAX_ORDER {
            for a in 0..=d {
                for b in 0..=d - a {
                    for c in 0..=d - a - b {
                        let e = d - a - b - c;
                        monomials.push([a as u8, b as u8, c as u8, e as u8]);
                    }
                }
            }
        }
        let mut counts = [0; MAX_ORDER + 1];
        for (k, count) in counts.iter_mut().enumerate() {
            *count = monomials.iter().filter(|m| degree(m) <= k).count();
        }
        let lookup = |m: &MultiIndex| monomials.iter().position(|x| x == m);
        let mut products = Vec::new();
        for (i, a) in monomials.iter().enumerate() {
            for (j, b) in monomials.iter().enumerate() {
                if degree(a) + degree(b) > MAX_ORDER {
                    continue;
                }
                let sum = [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]];
                let k = lookup(&sum).expect("monomial in table");
                products.push((i as u16, j as u16, k as u16));
            }
        }
        products.sort_by_key(|&(_, _, k)| degree(&monomials[k as usize]));
        let mut product_counts = [0; MAX_ORDER + 1];
        for (k, count) in product_counts.iter_mut().enumerate() {
            *count = products
                .iter()
                .filter(|&&(_, _, r)| degree(&monomials[r as usize]) <= k)
                .count();
        }
        let shift = std::array::from_fn(|v| {
            monomials
                .iter()
                .map(|m| {
                    let mut n = *m;
                    n[v] += 1;
                    lookup(&n).map(|x| x as u16)
                })
                .collect()
        });
        Tables {
            monomials,
            counts,
            products,
            product_counts,
            shift,
        }
    })
}

/// All multi-indices of total degree `<= order`, in storage order.
pub fn monomials(order: usize) -> &'static [MultiIndex] {
    let t = tables();
    &t.monomials[..t.counts[order]]
}

/// Storage position of a multi-index.
pub fn monomial_index(alpha: &MultiIndex) -> usize {
    tables()
        .monomials
        .iter()
        .position(|m| m == alpha)
        .expect("multi-index within MAX_ORDER")
}

fn factorial(n: u8) -> f64 {
    (1..=n as u32).map(f64::from).product()
}

/// `α! = Π α_i!`
pub fn multi_factorial(alpha: &MultiIndex) -> f64 {
    alpha.iter().map(|&a| factorial(a)).product()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    order: usize,
    coeffs: Vec<f64>,
}

impl Jet {
    pub fn zero(order: usize) -> Jet {
        assert!(order <= MAX_ORDER);
        Jet {
            order,
            coeffs: vec![0.0; tables().counts[order]],
        }
    }

    pub fn constant(value: f64, order: usize) -> Jet {
        let mut j = Jet::zero(order);
        j.coeffs[0] = value;
        j
    }

    /// Builds a jet from partial derivatives `∂^α f(p)` listed in storage order.
    pub fn from_derivatives(order: usize, derivatives: &[f64]) -> Jet {
        let ms = monomials(order);
        assert!(derivatives.len() >= ms.len());
        Jet {
            order,
            coeffs: ms
                .iter()
                .zip(derivatives)
                .map(|(m, d)| d / multi_factorial(m))
                .collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `∂^α f(p)`.
    pub fn derivative_at(&self, alpha: &MultiIndex) -> f64 {
        self.coeffs[monomial_index(alpha)] * multi_factorial(alpha)
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let order = order.min(self.order);
        Jet {
            order,
            coeffs: self.coeffs[..tables().counts[order]].to_vec(),
        }
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `self += s * other`, truncating `other` to this jet's order.
    pub fn add_scaled(&mut self, s: f64, other: &Jet) {
        assert!(other.order >= self.order, "jet order mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
    }

    /// `self += a * b`, truncated to this jet's order.
    pub fn add_product(&mut self, a: &Jet, b: &Jet) {
        assert!(a.order >= self.order && b.order >= self.order, "jet order mismatch");
        let t = tables();
        for &(i, j, k) in &t.products[..t.product_counts[self.order]] {
            self.coeffs[k as usize] += a.coeffs[i as usize] * b.coeffs[j as usize];
        }
    }

    /// Partial derivative along variable `var`; the order drops by one.
    pub fn partial(&self, var: usize) -> Jet {
        assert!(self.order > 0, "cannot differentiate an order-0 jet");
        let t = tables();
        let order = self.order - 1;
        let coeffs = t.monomials[..t.counts[order]]
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let up = t.shift[var][k].expect("shift stays within MAX_ORDER") as usize;
                (m[var] as f64 + 1.0) * self.coeffs[up]
            })
            .collect();
        Jet { order, coeffs }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn recip(&self) -> Jet {
        let a0 = self.value();
        assert!(a0 != 0.0, "reciprocal of a jet with zero constant term");
        // 1/(a0 + d) = (1/a0) Σ (-d/a0)^n, d nilpotent at this order
        let mut d = self.scale(-1.0 / a0);
        d.coeffs[0] = 0.0;
        let mut result = Jet::constant(1.0, self.order);
        let mut power = Jet::constant(1.0, self.order);
        for _ in 0..self.order {
            power = &power * &d;
            result.add_scaled(1.0, &power);
        }
        result.scale(1.0 / a0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut out = self.truncate(order);
        out.add_scaled(1.0, rhs);
        out
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut out = self.truncate(order);
        out.add_scaled(-1.0, rhs);
        out
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let mut out = Jet::zero(self.order.min(rhs.order));
        out.add_product(self, rhs);
        out
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}
