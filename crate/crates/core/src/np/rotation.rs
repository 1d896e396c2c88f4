use num_complex::Complex64;
use serde::Serialize;

/// Lorentz transformations of a null tetrad, in the three standard classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "class", content = "param", rename_all = "kebab-case")]
pub enum NullRotation {
    /// `k' = k`, `m' = m + c̄ k`, `ℓ' = ℓ + c m + c̄ m̄ + |c|² k`.
    AboutK(Complex64),
    /// `ℓ' = ℓ`, `m' = m + c ℓ`, `k' = k + c̄ m + c m̄ + |c|² ℓ`.
    AboutL(Complex64),
    /// `z = A e^{iθ}`: `k' = A k`, `ℓ' = ℓ / A`, `m' = e^{iθ} m`.
    BoostSpin(Complex64),
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl NullRotation {
    /// Real matrix `M` with `X'_i = Σ_j M_ij X_j` on `(k, ℓ, Re m, Im m)`.
    pub fn matrix(&self) -> [[f64; 4]; 4] {
        match *self {
            NullRotation::AboutK(c) => {
                let (x, y) = (c.re, c.im);
                [
                    [1.0, 0.0, 0.0, 0.0],
                    [c.norm_sqr(), 1.0, 2.0 * x, -2.0 * y],
                    [x, 0.0, 1.0, 0.0],
                    [-y, 0.0, 0.0, 1.0],
                ]
            }
            NullRotation::AboutL(c) => {
                let (x, y) = (c.re, c.im);
                [
                    [1.0, c.norm_sqr(), 2.0 * x, 2.0 * y],
                    [0.0, 1.0, 0.0, 0.0],
                    [0.0, x, 1.0, 0.0],
                    [0.0, y, 0.0, 1.0],
                ]
            }
            NullRotation::BoostSpin(z) => {
                let a = z.norm();
                let (s, co) = z.arg().sin_cos();
                [
                    [a, 0.0, 0.0, 0.0],
                    [0.0, 1.0 / a, 0.0, 0.0],
                    [0.0, 0.0, co, -s],
                    [0.0, 0.0, s, co],
                ]
            }
        }
    }

    /// Induced transformation of the Weyl scalars.
    pub fn apply_psi(&self, psi: &[Complex64; 5]) -> [Complex64; 5] {
        match *self {
            NullRotation::AboutK(c) => std::array::from_fn(|n| {
                (0..=n)
                    .map(|j| psi[j] * c.powu((n - j) as u32) * binomial(n, j))
                    .sum()
            }),
            NullRotation::AboutL(c) => std::array::from_fn(|n| {
                (n..=4)
                    .map(|j| psi[j] * c.powu((j - n) as u32) * binomial(4 - n, j - n))
                    .sum()
            }),
            NullRotation::BoostSpin(z) => {
                std::array::from_fn(|n| psi[n] * z.powi(2 - n as i32))
            }
        }
    }
}

/// `Ψ_n → Ψ_{4−n}`, the effect of exchanging `k ↔ ℓ`, `m ↔ m̄`.
pub fn swap_psi(psi: &[Complex64; 5]) -> [Complex64; 5] {
    std::array::from_fn(|n| psi[4 - n])
}
