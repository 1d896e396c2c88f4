use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semisym::classify::{analyze_point, ClassifyOptions};
use semisym::corpus::load_all;
use semisym::np::samples::{canonical_psi, random_rotation, ALL_TYPES};
use semisym::np::PetrovType;
use semisym::spinor::{
    check_contracted_condition, check_ricci_commutator, check_weyl_condition_1,
    check_weyl_condition_2, make_condition_data, ConditionBranch, GeneralSpinor, SlotKind,
    SymSpinor,
};

type C = Complex64;

/// Canonical data of the type, with a real `Ψ2` for type D, moved by three
/// random frame changes.
fn sample(rng: &mut ChaCha8Rng, ty: PetrovType) -> [C; 5] {
    let mut psi = canonical_psi(rng, ty);
    if ty == PetrovType::D {
        psi[2] = C::new(psi[2].norm(), 0.0);
    }
    for _ in 0..3 {
        psi = random_rotation(rng).apply_psi(&psi);
    }
    psi
}

/// Smallest contracted-condition residual over real `R`. The residual is the
/// max norm of an affine function of `R`, hence convex.
fn best_contracted_residual(psi: &SymSpinor, bound: f64) -> (f64, f64) {
    let f = |r: f64| check_contracted_condition(psi, r);
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..100 {
        let a = lo + (hi - lo) / 3.0;
        let b = hi - (hi - lo) / 3.0;
        if f(a) <= f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let r = 0.5 * (lo + hi);
    (r, f(r))
}

#[test]
fn contracted_condition_admits_only_n_d_and_o() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..1000 {
        let ty = ALL_TYPES[i % ALL_TYPES.len()];
        let psi = sample(&mut rng, ty);
        let scale = psi.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        let s = SymSpinor::weyl(&psi);
        let (r, residual) = best_contracted_residual(&s, 100.0 * scale);
        let relative = residual / (scale * scale);
        match ty {
            PetrovType::N | PetrovType::O => {
                assert!(check_contracted_condition(&s, 0.0) / (scale * scale) < 1e-10, "sample {i} {ty}");
            }
            PetrovType::D => assert!(relative < 1e-8, "sample {i}: {relative} at R = {r}"),
            _ => assert!(relative > 1e-4, "sample {i} {ty}: {relative} at R = {r}"),
        }
    }
}

#[test]
fn type_d_needs_r_equal_to_minus_twelve_psi2() {
    let z = C::new(0.0, 0.0);
    for amp in [0.3, -1.7, 4.0] {
        let psi = SymSpinor::weyl(&[z, z, C::new(amp, 0.0), z, z]);
        assert!(check_contracted_condition(&psi, -12.0 * amp) < 1e-13);
        assert!(check_contracted_condition(&psi, 12.0 * amp) > 1.0);
        assert!(check_weyl_condition_1(&psi, -12.0 * amp) < 1e-13);
    }
}

fn phi_matrix(phi: &SymSpinor) -> nalgebra::Matrix3<C> {
    nalgebra::Matrix3::from_fn(|i, j| phi.get(i, j))
}

#[test]
fn admissible_families_have_rank_one_ricci_part() {
    for branch in [ConditionBranch::N, ConditionBranch::D] {
        for amp in [0.25, 1.0, -3.0] {
            let data = make_condition_data(branch, amp);
            let sv = phi_matrix(&data.phi).singular_values();
            let mut v: Vec<f64> = sv.iter().copied().collect();
            v.sort_by(|a, b| b.partial_cmp(a).unwrap());
            assert!(v[0] > 0.1 && v[1] < 1e-14, "{branch:?}: {v:?}");
            assert!(check_weyl_condition_1(&data.psi, data.r) < 1e-13);
            assert!(check_contracted_condition(&data.psi, data.r) < 1e-13);
            assert!(check_weyl_condition_2(&data.psi, &data.phi) < 1e-13);
            assert!(check_ricci_commutator(&data.psi, &data.phi, data.r) < 1e-13);
        }
    }
}

#[test]
fn mismatched_families_break_the_mixed_condition() {
    let n = make_condition_data(ConditionBranch::N, 1.0);
    let d = make_condition_data(ConditionBranch::D, 1.0);
    assert!(check_weyl_condition_2(&n.psi, &d.phi) > 0.1);
    assert!(check_weyl_condition_2(&d.psi, &n.phi) > 0.1);
}

fn random_spinor(rng: &mut ChaCha8Rng, kinds: Vec<SlotKind>) -> GeneralSpinor {
    GeneralSpinor::from_fn(kinds, |_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

#[test]
fn symmetrization_is_idempotent() {
    use SlotKind::{Primed, Unprimed};
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let t = random_spinor(&mut rng, vec![Unprimed, Primed, Unprimed, Unprimed, Primed]);
        let once = t.symmetrize(&[0, 2, 3]).unwrap();
        let twice = once.symmetrize(&[0, 2, 3]).unwrap();
        assert!(once.sub(&twice).max_abs() < 1e-14);
        let both = once.symmetrize(&[1, 4]).unwrap();
        let back = both.symmetrize(&[0, 2, 3]).unwrap();
        assert!(both.sub(&back).max_abs() < 1e-14);
        assert!(t.symmetrize(&[0, 1]).is_err());
    }
}

#[test]
fn symmetric_spinors_round_trip_through_the_general_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for ty in ALL_TYPES {
        let psi = sample(&mut rng, ty);
        let s = SymSpinor::weyl(&psi);
        let g = s.to_general();
        assert!(g.sub(&g.symmetrize(&[0, 1, 2, 3]).unwrap()).max_abs() < 1e-12);
        let back = SymSpinor::from_general(&g).to_psi();
        for (a, b) in psi.iter().zip(&back) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}

#[test]
fn spinor_and_tensor_verdicts_agree_on_the_corpus() {
    let opts = ClassifyOptions::default();
    for file in load_all() {
        for p in file.metric.points() {
            let a = analyze_point(&file, p, &opts).unwrap();
            let tag = format!("{}/{}", file.name(), p.name);
            assert_eq!(
                a.spinor.conformal_holds(1e-8),
                a.residuals.conformal.verdict.holds(),
                "{tag}: conformal {:?}",
                a.spinor
            );
            assert_eq!(
                a.spinor.ricci_holds(1e-8),
                a.residuals.ricci.verdict.holds(),
                "{tag}: ricci {:?}",
                a.spinor
            );
        }
    }
}
