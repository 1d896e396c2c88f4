use num_complex::Complex64;
use serde::Serialize;

use super::rotation::{swap_psi, NullRotation};

type C = Complex64;

/// Absolute floor below which a Weyl scale counts as zero.
pub const ABS_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PetrovType {
    I,
    II,
    D,
    III,
    N,
    O,
}

impl PetrovType {
    pub fn as_str(self) -> &'static str {
        match self {
            PetrovType::I => "I",
            PetrovType::II => "II",
            PetrovType::D => "D",
            PetrovType::III => "III",
            PetrovType::N => "N",
            PetrovType::O => "O",
        }
    }
}

impl std::fmt::Display for PetrovType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn max_norm(psi: &[C; 5]) -> f64 {
    psi.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `I` and the sum of its term moduli.
fn invariant_i(p: &[C; 5]) -> (C, f64) {
    let t = [p[0] * p[4], -4.0 * p[1] * p[3], 3.0 * p[2] * p[2]];
    (t.iter().sum(), t.iter().map(|z| z.norm()).sum())
}

/// `J` (the Hankel determinant) and the sum of its term moduli.
fn invariant_j(p: &[C; 5]) -> (C, f64) {
    let t = [
        p[0] * p[2] * p[4],
        2.0 * p[1] * p[2] * p[3],
        -(p[2] * p[2] * p[2]),
        -(p[0] * p[3] * p[3]),
        -(p[1] * p[1] * p[4]),
    ];
    (t.iter().sum(), t.iter().map(|z| z.norm()).sum())
}

/// Frame transformations tried when looking for a frame with large `Ψ4`.
fn frame_candidates() -> Vec<Option<NullRotation>> {
    let mut out = vec![None];
    for c in [
        C::new(1.0, 0.0),
        C::new(-1.0, 0.0),
        C::new(0.0, 1.0),
        C::new(0.0, -1.0),
        C::new(0.5, 0.5),
        C::new(-0.5, 0.5),
        C::new(2.0, -1.0),
        C::new(-1.5, -2.0),
    ] {
        out.push(Some(NullRotation::AboutK(c)));
    }
    out
}

/// Moves to a frame where `Ψ4` is as large as possible relative to the other
/// components, then normalizes the largest component to modulus one.
fn psi4_frame(psi: &[C; 5]) -> [C; 5] {
    let mut best = *psi;
    let mut best_ratio = -1.0;
    let swapped = swap_psi(psi);
    for base in [psi, &swapped] {
        for r in frame_candidates() {
            let p = match r {
                Some(r) => r.apply_psi(base),
                None => *base,
            };
            let s = max_norm(&p);
            if s == 0.0 {
                continue;
            }
            let ratio = p[4].norm() / s;
            if ratio > best_ratio + 1e-12 {
                best_ratio = ratio;
                best = p;
            }
        }
    }
    let s = max_norm(&best);
    best.map(|z| z / s)
}

/// Petrov type from the five Weyl scalars, with `O` reserved for data whose
/// largest component is below the absolute floor.
pub fn petrov_classify(psi: &[C; 5], tol: f64) -> PetrovType {
    classify_with_zero_level(psi, tol, ABS_FLOOR)
}

/// As [`petrov_classify`], with `O` declared when `max |Ψ| ≤ tol · reference`
/// (for example the largest Riemann component at the point).
pub fn petrov_classify_scaled(psi: &[C; 5], tol: f64, reference: f64) -> PetrovType {
    classify_with_zero_level(psi, tol, tol * reference.max(ABS_FLOOR))
}

fn classify_with_zero_level(psi: &[C; 5], tol: f64, zero_level: f64) -> PetrovType {
    let scale = max_norm(psi);
    if scale <= zero_level {
        return PetrovType::O;
    }
    let p = psi.map(|z| z / scale);
    let (i, i_terms) = invariant_i(&p);
    let (j, j_terms) = invariant_j(&p);
    let special = i.norm() <= tol * i_terms && j.norm() <= tol * j_terms;

    if !special {
        let i3 = i * i * i;
        let j2 = 27.0 * j * j;
        // roundoff in I and J is proportional to their term sums, and it
        // propagates into I³ and 27J² through the first-order factors
        let noise = (i.norm().powi(2) * i_terms).max(27.0 * j.norm() * j_terms);
        if (i3 - j2).norm() > tol * noise {
            return PetrovType::I;
        }
    }

    let q = psi4_frame(psi);
    let k_terms = [
        q[1] * q[4] * q[4],
        -3.0 * q[4] * q[3] * q[2],
        2.0 * q[3] * q[3] * q[3],
    ];
    let k: C = k_terms.iter().sum();
    let k_zero = k.norm() <= tol * k_terms.iter().map(|z| z.norm()).sum::<f64>();

    if special {
        let l_terms = [q[2] * q[4], -(q[3] * q[3])];
        let l: C = l_terms.iter().sum();
        let l_zero = l.norm() <= tol * l_terms.iter().map(|z| z.norm()).sum::<f64>();
        if k_zero && l_zero {
            PetrovType::N
        } else {
            PetrovType::III
        }
    } else {
        let l = q[2] * q[4] - q[3] * q[3];
        let (iq, _) = invariant_i(&q);
        let n_terms = [12.0 * l * l, -(q[4] * q[4] * iq)];
        let n: C = n_terms.iter().sum();
        let n_zero = n.norm() <= tol * n_terms.iter().map(|z| z.norm()).sum::<f64>();
        if k_zero && n_zero {
            PetrovType::D
        } else {
            PetrovType::II
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn only(i: usize, v: C) -> [C; 5] {
        let mut p = [C::new(0.0, 0.0); 5];
        p[i] = v;
        p
    }

    #[test]
    fn canonical_forms() {
        let v = C::new(0.7, -0.2);
        assert_eq!(petrov_classify(&only(4, v), 1e-9), PetrovType::N);
        assert_eq!(petrov_classify(&only(0, v), 1e-9), PetrovType::N);
        assert_eq!(petrov_classify(&only(2, v), 1e-9), PetrovType::D);
        assert_eq!(petrov_classify(&only(3, v), 1e-9), PetrovType::III);
        assert_eq!(petrov_classify(&only(1, v), 1e-9), PetrovType::III);
        assert_eq!(petrov_classify(&[C::new(0.0, 0.0); 5], 1e-9), PetrovType::O);
        let mut ii = only(2, v);
        ii[4] = C::new(1.0, 0.0);
        assert_eq!(petrov_classify(&ii, 1e-9), PetrovType::II);
        let one = C::new(1.0, 0.0);
        let i_type = [one, C::new(0.0, 0.0), one, C::new(0.0, 0.0), one];
        assert_eq!(petrov_classify(&i_type, 1e-9), PetrovType::I);
    }

    #[test]
    fn special_type_i_values_of_psi2_are_type_d() {
        // (1, 0, a, 0, 1) is algebraically special exactly when a = ±1/3
        let one = C::new(1.0, 0.0);
        let z = C::new(0.0, 0.0);
        let p = [one, z, C::new(1.0 / 3.0, 0.0), z, one];
        assert_ne!(petrov_classify(&p, 1e-9), PetrovType::I);
    }

    #[test]
    fn scaled_variant_treats_small_weyl_as_o() {
        let p = only(2, C::new(1e-13, 0.0));
        assert_eq!(petrov_classify_scaled(&p, 1e-9, 1.0), PetrovType::O);
        assert_eq!(petrov_classify(&p, 1e-9), PetrovType::D);
    }
}
