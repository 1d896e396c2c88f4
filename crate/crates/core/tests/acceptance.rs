//! Acceptance checks, one PASS/FAIL line per criterion.

use std::process::{Command, ExitCode};
use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use semisym::classify::{analyze_point, dec_check, Branch, ClassifyOptions, PointAnalysis};
use semisym::corpus::{load_all, load_builtin};
use semisym::metric_file::MetricFile;
use semisym::np::samples::{canonical_psi, random_psi, random_rotation, ALL_TYPES};
use semisym::np::{petrov_classify, root_oracle_type, PetrovType};
use semisym::spinor::{
    check_contracted_condition, check_ricci_commutator, check_weyl_condition_1,
    check_weyl_condition_2, make_condition_data, ConditionBranch, SymSpinor,
};
use semisym::symmetry::ConditionId;
use semisym::tensor::{all_down, TensorValue};

type C = Complex64;
type Outcome = Result<String, String>;

const TOL: f64 = 1e-9;

fn builtin(name: &str) -> MetricFile {
    load_builtin(name).unwrap().unwrap()
}

fn analyses(file: &MetricFile, opts: &ClassifyOptions) -> Result<Vec<PointAnalysis>, String> {
    file.metric
        .points()
        .iter()
        .map(|p| analyze_point(file, p, opts).map_err(|e| format!("{}/{}: {e}", file.name(), p.name)))
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Smallest contracted-condition residual over real `R`, by ternary search on
/// a convex function.
fn min_contracted(psi: &SymSpinor, bound: f64) -> f64 {
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
    f(0.5 * (lo + hi))
}

fn criterion_1() -> Outcome {
    let mut worst_zero: f64 = 0.0;
    for branch in [ConditionBranch::N, ConditionBranch::D] {
        for amp in [0.5, 1.0, 2.5] {
            let d = make_condition_data(branch, amp);
            worst_zero = worst_zero
                .max(check_weyl_condition_1(&d.psi, d.r))
                .max(check_contracted_condition(&d.psi, d.r))
                .max(check_weyl_condition_2(&d.psi, &d.phi));
        }
    }
    ensure(worst_zero <= 1e-13, || format!("admissible data residual {worst_zero:e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut smallest = f64::INFINITY;
    for ty in [PetrovType::I, PetrovType::II, PetrovType::III] {
        for _ in 0..20 {
            let psi = canonical_psi(&mut rng, ty);
            let scale = psi.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let r = min_contracted(&SymSpinor::weyl(&psi), 100.0 * scale) / (scale * scale);
            smallest = smallest.min(r);
        }
    }
    ensure(smallest >= 1e-3, || format!("type I/II/III residual {smallest:e} for some R"))?;
    Ok(format!("admissible max {worst_zero:.1e}, I/II/III min over R {smallest:.3}"))
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = 0.0;
    for branch in [ConditionBranch::N, ConditionBranch::D] {
        for amp in [0.5, 1.0, 2.5] {
            let d = make_condition_data(branch, amp);
            worst = worst.max(check_ricci_commutator(&d.psi, &d.phi, d.r));
        }
    }
    ensure(worst <= 1e-13, || format!("residual {worst:e}"))?;
    let d = make_condition_data(ConditionBranch::D, 1.0);
    let counter = check_ricci_commutator(&d.psi, &d.phi, 0.0);
    ensure(counter >= 1e-3, || format!("R = 0 counterexample residual {counter:e}"))?;
    Ok(format!("families max {worst:.1e}, R = 0 type D {counter:.3}"))
}

fn criterion_3() -> Outcome {
    let opts = ClassifyOptions::default();
    let mut compared = 0;
    for file in load_all() {
        let mut weyl_points = 0;
        for a in analyses(&file, &opts)? {
            let (semi, conf) = (a.residuals.semi.verdict, a.residuals.conformal.verdict);
            if a.np.psi_scale() <= TOL * a.np.scale().max(1e-300) {
                continue;
            }
            weyl_points += 1;
            compared += 1;
            ensure(semi == conf, || format!("{}/{}: {semi:?} vs {conf:?}", file.name(), a.point))?;
            let expected = match file.name() {
                "schwarzschild" => Some(false),
                "nariai" | "product2x2" | "ppwave_linear" | "ppwave_quadratic_u" => Some(true),
                _ => None,
            };
            if let Some(holds) = expected {
                ensure(semi.holds() == holds && conf.holds() == holds, || {
                    format!("{}/{}: semi {semi:?}", file.name(), a.point)
                })?;
            }
        }
        ensure(weyl_points == 0 || weyl_points >= 5, || format!("{}: {weyl_points} points", file.name()))?;
    }
    Ok(format!("{compared} points, 0 disagreements"))
}

fn criterion_4() -> Outcome {
    let opts = ClassifyOptions::default();
    let mut checked = 0;
    for file in load_all() {
        for a in analyses(&file, &opts)? {
            let c = &a.classification;
            if c.semi_symmetric.holds() && c.petrov != PetrovType::O {
                checked += 1;
                ensure(matches!(c.petrov, PetrovType::D | PetrovType::N), || {
                    format!("{}/{}: type {}", file.name(), a.point, c.petrov)
                })?;
            }
        }
    }
    Ok(format!("{checked} curved semi-symmetric points, all D or N, no theorem violation"))
}

fn criterion_5() -> Outcome {
    let opts = ClassifyOptions::default();
    let z = |v: C, s: f64| v.norm() <= TOL * s;
    for a in analyses(&builtin("nariai"), &opts)? {
        let np = &a.np;
        let s = np.scale();
        ensure((np.scalar + 12.0 * np.psi[2].re).abs() <= TOL * s && np.psi[2].im.abs() <= TOL * s, || {
            format!("nariai/{}: R = {}, Ψ2 = {}", a.point, np.scalar, np.psi[2])
        })?;
        ensure([0, 1, 3, 4].iter().all(|&i| z(np.psi[i], s)), || format!("nariai/{}: Ψ {:?}", a.point, np.psi))?;
        ensure(
            (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).all(|(i, j)| (i, j) == (1, 1) || z(np.phi[i][j], s)),
            || format!("nariai/{}: Φ {:?}", a.point, np.phi),
        )?;
    }
    for name in ["ppwave_linear", "ppwave_quadratic_u"] {
        for a in analyses(&builtin(name), &opts)? {
            let np = &a.np;
            let s = np.scale();
            ensure(np.scalar.abs() <= TOL * s, || format!("{name}/{}: R = {}", a.point, np.scalar))?;
            ensure((0..4).all(|i| z(np.psi[i], s)) && !z(np.psi[4], s), || {
                format!("{name}/{}: Ψ {:?}", a.point, np.psi)
            })?;
            ensure(
                (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).all(|(i, j)| (i, j) == (2, 2) || z(np.phi[i][j], s)),
                || format!("{name}/{}: Φ {:?}", a.point, np.phi),
            )?;
        }
    }
    Ok("nariai R = -12 Ψ2 with only Ψ2, Φ11; pp-waves only Ψ4, Φ22 with R = 0".into())
}

fn criterion_6() -> Outcome {
    let opts = ClassifyOptions::default();
    let mut worst: f64 = 0.0;
    for name in ["nariai", "product2x2"] {
        for a in analyses(&builtin(name), &opts)? {
            let c = &a.classification;
            let tag = format!("{name}/{}", a.point);
            ensure(c.branch == Branch::DGenericDecomposable, || format!("{tag}: {}", c.branch))?;
            let mut checks: Vec<_> = c.constraints.products().into_iter().collect();
            let rec = c.recurrence.ok_or_else(|| format!("{tag}: no recurrence"))?;
            checks.extend([Some(rec.k), Some(rec.l), c.decomposability]);
            for check in checks {
                let check = check.ok_or_else(|| format!("{tag}: missing check"))?;
                worst = worst.max(check.value / check.scale);
                ensure(check.value <= TOL * check.scale, || format!("{tag}: {check:?}"))?;
            }
        }
    }
    Ok(format!("8 products, 2 recurrences, decomposability; worst relative {worst:.1e}"))
}

fn criterion_7() -> Outcome {
    let opts = ClassifyOptions::default();
    let mut quadratic_min = f64::INFINITY;
    for name in ["ppwave_linear", "ppwave_quadratic_u"] {
        for a in analyses(&builtin(name), &opts)? {
            let tag = format!("{name}/{}", a.point);
            let second = &a.residuals.second_order;
            let c = &a.classification;
            if name == "ppwave_linear" {
                ensure(second.relative() <= TOL, || format!("{tag}: second order {:e}", second.relative()))?;
                let k = c.constant_null_vector.ok_or_else(|| format!("{tag}: no null vector check"))?;
                ensure(k.verdict.holds(), || format!("{tag}: {k:?}"))?;
            } else {
                quadratic_min = quadratic_min.min(second.relative());
                ensure(second.relative() >= 1e-3, || format!("{tag}: second order {:e}", second.relative()))?;
                ensure(a.residuals.semi.verdict.holds(), || format!("{tag}: semi {:?}", a.residuals.semi))?;
            }
            for check in [c.constraints.kappa, c.constraints.sigma_psi4_minus_rho_phi22] {
                let check = check.ok_or_else(|| format!("{tag}: missing N constraint"))?;
                ensure(check.value <= TOL * check.scale, || format!("{tag}: {check:?}"))?;
            }
        }
    }
    Ok(format!("linear passes, quadratic fails with relative residual >= {quadratic_min:.3}"))
}

fn criterion_8() -> Outcome {
    let opts = ClassifyOptions {
        cross_validate: true,
        ..ClassifyOptions::default()
    };
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for file in load_all() {
        for a in analyses(&file, &opts)? {
            let checks = a.cross_validation.ok_or("cross-validation missing")?;
            for want in [ConditionId::Semi, ConditionId::Conformal, ConditionId::Ricci] {
                let c = checks
                    .iter()
                    .find(|c| c.condition == want)
                    .ok_or_else(|| format!("{}/{}: {want:?} missing", file.name(), a.point))?;
                count += 1;
                worst = worst.max(c.disagreement);
                ensure(c.disagreement <= 1e-7, || format!("{}/{} {want:?}: {:e}", file.name(), a.point, c.disagreement))?;
            }
        }
    }
    Ok(format!("{count} comparisons, worst disagreement {worst:.1e}"))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    for i in 0..1000 {
        let ty = ALL_TYPES[i % ALL_TYPES.len()];
        let psi = random_psi(&mut rng, ty);
        let (a, b) = (petrov_classify(&psi, TOL), root_oracle_type(&psi));
        ensure(a == b, || format!("sample {i}: classifier {a}, oracle {b}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for i in 0..100 {
        let ty = ALL_TYPES[i % ALL_TYPES.len()];
        let psi = random_psi(&mut rng, ty);
        let moved = random_rotation(&mut rng).apply_psi(&psi);
        let (a, b) = (petrov_classify(&psi, TOL), petrov_classify(&moved, TOL));
        ensure(a == b, || format!("transformation {i}: {a} became {b}"))?;
    }
    Ok("1000 oracle comparisons and 100 transformations, 0 disagreements".into())
}

fn criterion_10() -> Outcome {
    let file = builtin("minkowski");
    let t = file.metric.tetrad().unwrap().value(&file.metric.bindings(&[0.0; 4])).unwrap();
    let eta = [1.0, -1.0, -1.0, -1.0];
    let lower = |v: [f64; 4]| -> [f64; 4] { std::array::from_fn(|a| eta[a] * v[a]) };
    let (k, l) = (lower(t.vectors[0]), lower(t.vectors[1]));
    for a_coef in [0.7, -0.7] {
        // B = 0: R_ab = A k_(a ℓ_b), then G_ab = R_ab − (R/2) g_ab
        let ricci = TensorValue::from_fn(all_down(2), |i| 0.5 * a_coef * (k[i[0]] * l[i[1]] + l[i[0]] * k[i[1]]));
        let scalar: f64 = (0..4).map(|a| eta[a] * ricci.get(&[a, a])).sum();
        let einstein = TensorValue::from_fn(all_down(2), |i| {
            let g = if i[0] == i[1] { eta[i[0]] } else { 0.0 };
            ricci.get(i) - 0.5 * scalar * g
        });
        let dec = dec_check(&einstein, &t, TOL, 7);
        ensure(dec.violated && dec.samples == 100, || format!("A = {a_coef}: {dec:?}"))?;
    }
    let opts = ClassifyOptions::default();
    for name in ["minkowski", "ppwave_linear", "ppwave_quadratic_u"] {
        for a in analyses(&builtin(name), &opts)? {
            ensure(!a.classification.dec.violated, || format!("{name}/{} flagged", a.point))?;
        }
    }
    Ok("B = 0 flagged for both signs of A; Minkowski and pp-waves clean".into())
}

fn criterion_11() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_semisym");
    let args = ["analyze", "nariai", "--json", "--seed", "7"];
    let first = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
    let second = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
    ensure(first.status.success(), || String::from_utf8_lossy(&first.stderr).into_owned())?;
    ensure(first.stdout == second.stdout, || "analyze output differs between runs".into())?;
    let start = Instant::now();
    let run = Command::new(bin).args(["corpus", "run"]).output().map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    ensure(run.status.success(), || String::from_utf8_lossy(&run.stdout).into_owned())?;
    ensure(secs < 60.0, || format!("corpus run took {secs:.1} s"))?;
    Ok(format!("{} identical bytes; corpus run {secs:.2} s", first.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("admissible Weyl data for the spinor identities", criterion_1),
        ("Ricci commutator identity", criterion_2),
        ("semi-symmetry equals conformal semi-symmetry", criterion_3),
        ("admissible Petrov types", criterion_4),
        ("NP condition patterns", criterion_5),
        ("generic type D chain", criterion_6),
        ("pp-wave second-order split", criterion_7),
        ("commutator and direct routes agree", criterion_8),
        ("Petrov classifier", criterion_9),
        ("dominant energy condition", criterion_10),
        ("determinism and corpus timing", criterion_11),
    ];
    let mut failures = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", n + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {}: {name} ({why})", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
