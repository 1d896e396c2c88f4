use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use semisym::corpus::{load_all, load_builtin};
use semisym::metric_file::MetricFile;
use semisym::np::samples::{random_psi, random_rotation, ALL_TYPES};
use semisym::np::{
    np_scalars, petrov_classify, root_oracle_type, spin_coefficients, swap_psi, validate_tetrad,
    NPData, NullRotation, PetrovType, TetradJets,
};

type C = Complex64;

fn builtin(name: &str) -> MetricFile {
    load_builtin(name).unwrap().unwrap()
}

fn jets(file: &MetricFile, coords: &[f64; 4]) -> TetradJets {
    file.metric
        .tetrad()
        .unwrap()
        .jets(&file.metric.bindings(coords))
        .unwrap()
}

fn np_at(file: &MetricFile, name: &str) -> NPData {
    let p = file.metric.point(name).unwrap();
    let geom = file.metric.local(p).unwrap();
    np_scalars(&geom.curvature(), &geom.metric(), &jets(file, &p.coords).value())
}

fn max_diff(a: &[C; 5], b: &[C; 5]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn every_corpus_tetrad_is_valid() {
    for file in load_all() {
        for p in file.metric.points() {
            let report = validate_tetrad(&file.metric, p, 1e-12).unwrap();
            assert!(report.valid, "{}/{}: {:?}", file.name(), p.name, report.failing(1e-12));
        }
    }
}

#[test]
fn known_np_values() {
    let s = np_at(&builtin("schwarzschild"), "r3");
    assert!((s.psi[2] - C::new(-1.0 / 27.0, 0.0)).norm() < 1e-14);
    let n = np_at(&builtin("nariai"), "p1");
    let r = 4.0 / 1.69;
    assert!((n.scalar - r).abs() < 1e-12);
    assert!((n.psi[2] + C::new(r / 12.0, 0.0)).norm() < 1e-12);
    let pp = np_at(&builtin("ppwave_linear"), "p1");
    assert!(pp.phi[2][2].re > 0.0);
    let br = np_at(&builtin("bertotti_robinson"), "p1");
    assert!(br.psi_scale() < 1e-14);
    assert!((br.phi[1][1].re - 0.5 / 0.64).abs() < 1e-12);
}

#[test]
fn phi_is_hermitian_on_the_corpus() {
    for file in load_all() {
        for p in file.metric.points() {
            let np = np_at(&file, &p.name);
            assert!(np.hermiticity_defect() <= 1e-13 * np.scale().max(1.0));
        }
    }
}

#[test]
fn tetrad_transformations_reproduce_the_psi_rules() {
    let file = builtin("schwarzschild");
    let p = file.metric.point("r4").unwrap();
    let geom = file.metric.local(p).unwrap();
    let (curv, g) = (geom.curvature(), geom.metric());
    // start from a frame where every Ψ is nonzero
    let start = jets(&file, &p.coords)
        .value()
        .transformed(&NullRotation::AboutK(C::new(0.3, -0.5)))
        .transformed(&NullRotation::AboutL(C::new(-0.2, 0.4)));
    let psi = np_scalars(&curv, &g, &start).psi;
    assert!(psi.iter().all(|z| z.norm() > 1e-4));
    let rots = [
        NullRotation::AboutK(C::new(0.7, 0.2)),
        NullRotation::AboutL(C::new(-0.4, 1.1)),
        NullRotation::BoostSpin(C::from_polar(1.8, 0.6)),
    ];
    for r in rots {
        let direct = np_scalars(&curv, &g, &start.transformed(&r)).psi;
        let rule = r.apply_psi(&psi);
        assert!(max_diff(&direct, &rule) < 1e-13, "{r:?}: {direct:?} vs {rule:?}");
    }
    let swapped = np_scalars(&curv, &g, &start.swapped()).psi;
    assert!(max_diff(&swapped, &swap_psi(&psi)) < 1e-13);
}

#[test]
fn classifier_agrees_with_root_oracle_on_1000_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let mut disagreements = 0;
    for i in 0..1000 {
        let ty = ALL_TYPES[i % ALL_TYPES.len()];
        let psi = random_psi(&mut rng, ty);
        let a = petrov_classify(&psi, 1e-9);
        let b = root_oracle_type(&psi);
        if a != ty || b != ty {
            eprintln!("sample {i}: expected {ty}, classifier {a}, oracle {b}: {psi:?}");
            disagreements += 1;
        }
    }
    assert_eq!(disagreements, 0);
}

#[test]
fn classification_is_frame_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for i in 0..100 {
        let ty = ALL_TYPES[i % ALL_TYPES.len()];
        let psi = random_psi(&mut rng, ty);
        let moved = random_rotation(&mut rng).apply_psi(&psi);
        assert_eq!(petrov_classify(&moved, 1e-9), petrov_classify(&psi, 1e-9));
    }
    // and on actual tetrads of the corpus
    for (name, ty) in [("schwarzschild", PetrovType::D), ("ppwave_linear", PetrovType::N), ("product2x2", PetrovType::D)] {
        let file = builtin(name);
        for p in file.metric.points() {
            let geom = file.metric.local(p).unwrap();
            let t = jets(&file, &p.coords).value();
            for _ in 0..5 {
                let r = random_rotation(&mut rng);
                let np = np_scalars(&geom.curvature(), &geom.metric(), &t.transformed(&r));
                assert_eq!(petrov_classify(&np.psi, 1e-9), ty, "{name}/{}", p.name);
            }
        }
    }
}

#[test]
fn spin_coefficients_on_known_metrics() {
    let file = builtin("schwarzschild");
    let p = file.metric.point("r3").unwrap();
    let s = spin_coefficients(&file.metric.local(p).unwrap(), &jets(&file, &p.coords)).unwrap();
    assert!((s.rho - C::new(-1.0 / 3.0, 0.0)).norm() < 1e-13, "{:?}", s.rho);
    assert!((s.mu - C::new(-1.0 / 18.0, 0.0)).norm() < 1e-13, "{:?}", s.mu);
    assert!(s.kappa.norm() < 1e-14 && s.nu.norm() < 1e-14);
    for name in ["nariai", "product2x2", "bertotti_robinson"] {
        let file = builtin(name);
        for p in file.metric.points() {
            let s = spin_coefficients(&file.metric.local(p).unwrap(), &jets(&file, &p.coords)).unwrap();
            for (n, z) in s.named() {
                if matches!(n, "alpha" | "beta" | "epsilon" | "gamma") {
                    continue; // connection of the factor frames, not geometric
                }
                assert!(z.norm() < 1e-13, "{name}/{}: {n} = {z}", p.name);
            }
        }
    }
}
