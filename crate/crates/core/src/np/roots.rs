//! Petrov type from the root multiplicities of the Weyl quartic
//! `Ψ0 + 4Ψ1 z + 6Ψ2 z² + 4Ψ3 z³ + Ψ4 z⁴`.
//!
//! The quartic is a binary form, so some roots may sit at infinity. A unitary
//! Möbius substitution moves all of them into the finite plane first; it is an
//! isometry of the chordal metric, so clustering is unaffected.

use nalgebra::{Matrix4, Schur};
use num_complex::Complex64;

use super::petrov::{PetrovType, ABS_FLOOR};

type C = Complex64;

/// Chordal diameter below which two roots count as one double root; larger
/// clusters get the looser bound `ROOT_GAP^{2/m}`.
pub const ROOT_GAP: f64 = 1e-5;

const BINOM4: [f64; 5] = [1.0, 4.0, 6.0, 4.0, 1.0];

fn poly_mul(a: &[C], b: &[C]) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_pow(a: &[C], n: usize) -> Vec<C> {
    (0..n).fold(vec![C::new(1.0, 0.0)], |acc, _| poly_mul(&acc, a))
}

/// Coefficients (constant first) of `Σ c_i (a w + b)^i (ā − b̄ w)^{4−i}`.
fn substituted(psi: &[C; 5], a: C, b: C) -> [C; 5] {
    let num = [b, a];
    let den = [a.conj(), -b.conj()];
    let mut out = [C::new(0.0, 0.0); 5];
    for i in 0..5 {
        let term = poly_mul(&poly_pow(&num, i), &poly_pow(&den, 4 - i));
        for (k, t) in term.iter().enumerate() {
            out[k] += psi[i] * BINOM4[i] * t;
        }
    }
    out
}

fn substitutions() -> impl Iterator<Item = (C, C)> {
    (0..12).map(|n| {
        let theta = 0.37 + 0.91 * n as f64;
        let phi = 1.13 + 2.39 * n as f64;
        let chi = 0.29 + 1.71 * n as f64;
        (
            C::from_polar(theta.cos(), phi),
            C::from_polar(theta.sin(), chi),
        )
    })
}

fn substituted_roots(psi: &[C; 5]) -> Option<((C, C), Vec<C>)> {
    let scale = psi.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale <= ABS_FLOOR {
        return None;
    }
    let p = psi.map(|z| z / scale);
    let ((a, b), coeffs) = substitutions()
        .map(|(a, b)| ((a, b), substituted(&p, a, b)))
        .max_by(|(_, x), (_, y)| {
            let rx = x[4].norm() / x.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let ry = y[4].norm() / y.iter().map(|z| z.norm()).fold(0.0, f64::max);
            rx.total_cmp(&ry)
        })
        .expect("substitution list is non-empty");
    let lead = coeffs[4];
    let mut companion = Matrix4::<C>::zeros();
    for i in 1..4 {
        companion[(i, i - 1)] = C::new(1.0, 0.0);
    }
    for i in 0..4 {
        companion[(i, 3)] = -coeffs[i] / lead;
    }
    let schur = Schur::new(companion);
    let (_, t) = schur.unpack();
    Some(((a, b), (0..4).map(|i| t[(i, i)]).collect()))
}

/// The four roots of the quartic after a unitary substitution that keeps the
/// leading coefficient well away from zero. Empty for the zero quartic.
pub fn quartic_roots(psi: &[C; 5]) -> Vec<C> {
    substituted_roots(psi).map(|(_, r)| r).unwrap_or_default()
}

fn chordal(a: C, b: C) -> f64 {
    (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
}

/// Largest separation allowed inside a cluster of `size` roots: a root of
/// multiplicity `m` splits by roughly `ε^{1/m}` under perturbations of size `ε`.
fn cluster_threshold(size: usize) -> f64 {
    ROOT_GAP.powf(2.0 / size as f64)
}

fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for part in set_partitions(n - 1) {
        for b in 0..part.len() {
            let mut p = part.clone();
            p[b].push(n - 1);
            out.push(p);
        }
        let mut p = part;
        p.push(vec![n - 1]);
        out.push(p);
    }
    out
}

fn diameter(roots: &[C], block: &[usize]) -> f64 {
    let mut d: f64 = 0.0;
    for (x, &a) in block.iter().enumerate() {
        for &b in &block[x + 1..] {
            d = d.max(chordal(roots[a], roots[b]));
        }
    }
    d
}

fn best_partition(roots: &[C]) -> Vec<Vec<usize>> {
    let mut best: Option<(usize, f64, Vec<Vec<usize>>)> = None;
    for part in set_partitions(roots.len()) {
        let worst = part
            .iter()
            .map(|b| diameter(roots, b) / cluster_threshold(b.len()))
            .fold(0.0, f64::max);
        if worst > 1.0 {
            continue;
        }
        let better = match &best {
            None => true,
            Some((n, w, _)) => part.len() < *n || (part.len() == *n && worst < *w),
        };
        if better {
            best = Some((part.len(), worst, part));
        }
    }
    best.map(|(_, _, p)| p).unwrap_or_default()
}

/// Multiplicities of the roots, largest first; empty for the zero quartic.
///
/// Among all partitions of the roots whose blocks are tight enough for their
/// size, the one with the fewest blocks wins (ties go to the tightest).
pub fn root_multiplicities(psi: &[C; 5]) -> Vec<usize> {
    let roots = quartic_roots(psi);
    let mut sizes: Vec<usize> = best_partition(&roots).iter().map(Vec::len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Distinct roots `z` of `Ψ0 + 4Ψ1 z + … + Ψ4 z⁴` with their multiplicities,
/// largest multiplicity first. `None` stands for the root at infinity, the
/// direction of `k` itself.
///
/// A root `z` is the null direction reached by [`super::NullRotation::AboutL`]
/// with parameter `z`, which sets `Ψ0' = 0`.
pub fn principal_null_directions(psi: &[C; 5]) -> Vec<(usize, Option<C>)> {
    let Some(((a, b), roots)) = substituted_roots(psi) else {
        return Vec::new();
    };
    let mut out: Vec<(usize, Option<C>)> = best_partition(&roots)
        .iter()
        .map(|block| {
            let w = block.iter().map(|&i| roots[i]).sum::<C>() / block.len() as f64;
            let num = a * w + b;
            let den = a.conj() - b.conj() * w;
            let z = if den.norm() <= 1e-12 * num.norm() {
                None
            } else {
                Some(num / den)
            };
            (block.len(), z)
        })
        .collect();
    out.sort_by_key(|d| std::cmp::Reverse(d.0));
    out
}

/// Petrov type read off the multiplicity pattern.
pub fn root_oracle_type(psi: &[C; 5]) -> PetrovType {
    match root_multiplicities(psi).as_slice() {
        [] => PetrovType::O,
        [1, 1, 1, 1] => PetrovType::I,
        [2, 1, 1] => PetrovType::II,
        [2, 2] => PetrovType::D,
        [3, 1] => PetrovType::III,
        [4] => PetrovType::N,
        other => unreachable!("a quartic has four roots, got pattern {other:?}"),
    }
}
