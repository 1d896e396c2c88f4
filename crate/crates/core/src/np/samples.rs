//! Seeded generators of Weyl data with a prescribed Petrov type.

use num_complex::Complex64;
use rand::Rng;

use super::petrov::PetrovType;
use super::rotation::NullRotation;

type C = Complex64;

fn random_complex(rng: &mut impl Rng, radius: f64) -> C {
    C::from_polar(rng.gen_range(0.2..1.0) * radius, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Canonical Weyl data of the given type with random nonzero amplitudes.
pub fn canonical_psi(rng: &mut impl Rng, ty: PetrovType) -> [C; 5] {
    let z = C::new(0.0, 0.0);
    let amp = random_complex(rng, 1.0);
    match ty {
        PetrovType::I => {
            // (1, 0, a, 0, 1) is special only at a = ±1/3
            let a = loop {
                let a = random_complex(rng, 1.0);
                if (a - 1.0 / 3.0).norm() > 0.05 && (a + 1.0 / 3.0).norm() > 0.05 {
                    break a;
                }
            };
            [amp, z, amp * a, z, amp]
        }
        PetrovType::II => [z, z, amp, z, random_complex(rng, 1.0)],
        PetrovType::D => [z, z, amp, z, z],
        PetrovType::III => [z, z, z, amp, z],
        PetrovType::N => [z, z, z, z, amp],
        PetrovType::O => [z; 5],
    }
}

/// A random element of one of the three transformation classes.
pub fn random_rotation(rng: &mut impl Rng) -> NullRotation {
    match rng.gen_range(0..3) {
        0 => NullRotation::AboutK(random_complex(rng, 1.5)),
        1 => NullRotation::AboutL(random_complex(rng, 1.5)),
        _ => NullRotation::BoostSpin(C::from_polar(
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.0..std::f64::consts::TAU),
        )),
    }
}

/// Canonical data of type `ty` moved to a random frame by three random
/// transformations.
pub fn random_psi(rng: &mut impl Rng, ty: PetrovType) -> [C; 5] {
    let mut psi = canonical_psi(rng, ty);
    for _ in 0..3 {
        psi = random_rotation(rng).apply_psi(&psi);
    }
    psi
}

pub const ALL_TYPES: [PetrovType; 6] = [
    PetrovType::I,
    PetrovType::II,
    PetrovType::D,
    PetrovType::III,
    PetrovType::N,
    PetrovType::O,
];
