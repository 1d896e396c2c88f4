//! Null tetrads, Newman-Penrose curvature scalars, spin coefficients and the
//! Petrov classifier.

mod petrov;
mod roots;
mod rotation;
pub mod samples;
mod tetrad;

use num_complex::Complex64;
use serde::Serialize;

use crate::conventions::{PHI_SIGN, PSI_SIGN};
use crate::geometry::{Curvature, GeometryError, LocalGeometry};
use crate::tensor::{TensorValue, DIM};

pub use petrov::{petrov_classify, petrov_classify_scaled, PetrovType};
pub use roots::{
    principal_null_directions, quartic_roots, root_multiplicities, root_oracle_type, ROOT_GAP,
};
pub use rotation::{swap_psi, NullRotation};
pub use tetrad::{
    inner, validate_tetrad, validate_tetrad_value, NullTetrad, ProductResidual, TetradJets,
    TetradReport, TetradValue, TETRAD_NAMES,
};

pub(crate) use tetrad::tetrad_gradients;

type C = Complex64;
type CVec = [C; 4];

/// Weyl and Ricci scalars at a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NPData {
    pub psi: [C; 5],
    pub phi: [[C; 3]; 3],
    #[serde(rename = "R")]
    pub scalar: f64,
}

impl NPData {
    pub fn zero() -> NPData {
        NPData {
            psi: [C::new(0.0, 0.0); 5],
            phi: [[C::new(0.0, 0.0); 3]; 3],
            scalar: 0.0,
        }
    }

    /// Largest modulus among all `Ψ`, `Φ` and `R`.
    pub fn scale(&self) -> f64 {
        let psi = self.psi.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let phi = self.phi.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
        psi.max(phi).max(self.scalar.abs())
    }

    pub fn psi_scale(&self) -> f64 {
        self.psi.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |Φ_ij − conj(Φ_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                d = d.max((self.phi[i][j] - self.phi[j][i].conj()).norm());
            }
        }
        d
    }
}

/// The twelve spin coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinCoefficients {
    pub kappa: C,
    pub sigma: C,
    pub rho: C,
    pub tau: C,
    pub epsilon: C,
    pub beta: C,
    pub alpha: C,
    pub gamma: C,
    pub pi: C,
    pub lambda: C,
    pub mu: C,
    pub nu: C,
}

impl SpinCoefficients {
    pub fn named(&self) -> [(&'static str, C); 12] {
        [
            ("kappa", self.kappa),
            ("sigma", self.sigma),
            ("rho", self.rho),
            ("tau", self.tau),
            ("epsilon", self.epsilon),
            ("beta", self.beta),
            ("alpha", self.alpha),
            ("gamma", self.gamma),
            ("pi", self.pi),
            ("lambda", self.lambda),
            ("mu", self.mu),
            ("nu", self.nu),
        ]
    }

    pub fn zero() -> SpinCoefficients {
        let z = C::new(0.0, 0.0);
        SpinCoefficients {
            kappa: z,
            sigma: z,
            rho: z,
            tau: z,
            epsilon: z,
            beta: z,
            alpha: z,
            gamma: z,
            pi: z,
            lambda: z,
            mu: z,
            nu: z,
        }
    }
}

/// `T_ab… u^a v^b…` for an all-lower real tensor and complex vectors.
pub fn contract(t: &TensorValue, vs: &[&CVec]) -> C {
    assert_eq!(t.rank(), vs.len());
    t.iter_indexed()
        .filter(|(_, &x)| x != 0.0)
        .map(|(idx, &x)| {
            idx.iter()
                .zip(vs)
                .fold(C::new(x, 0.0), |acc, (&i, v)| acc * v[i])
        })
        .sum()
}

/// NP scalars from curvature and tetrad vectors (contravariant) at a point.
pub fn np_scalars(curv: &Curvature, g: &TensorValue, t: &TetradValue) -> NPData {
    let (k, l, m, mb) = (t.k(), t.l(), t.m(), t.mbar());
    let w = &curv.weyl;
    let psi = [
        contract(w, &[&k, &m, &k, &m]),
        contract(w, &[&k, &l, &k, &m]),
        contract(w, &[&k, &m, &mb, &l]),
        contract(w, &[&k, &l, &mb, &l]),
        contract(w, &[&l, &mb, &l, &mb]),
    ]
    .map(|z| z * PSI_SIGN);

    let r = curv.scalar;
    let s = crate::tensor::Tensor::from_fn(crate::tensor::all_down(2), |i| {
        curv.ricci.get(i) - 0.25 * r * g.get(i)
    });
    let half = |u: &CVec, v: &CVec| contract(&s, &[u, v]) * (0.5 * PHI_SIGN);
    let phi11 = (contract(&s, &[&k, &l]) + contract(&s, &[&m, &mb])) * (0.25 * PHI_SIGN);
    let phi = [
        [half(&k, &k), half(&k, &m), half(&m, &m)],
        [half(&k, &mb), phi11, half(&l, &m)],
        [half(&mb, &mb), half(&l, &mb), half(&l, &l)],
    ];
    NPData {
        psi,
        phi,
        scalar: r,
    }
}

fn gradient_contract(grad: &TensorValue, x: &CVec, dir: &CVec) -> C {
    // grad[b][a] = ∇_b X_a; returns x^a dir^b ∇_b X_a
    let mut s = C::new(0.0, 0.0);
    for b in 0..DIM {
        for a in 0..DIM {
            let v = grad.get(&[b, a]);
            if *v != 0.0 {
                s += dir[b] * x[a] * v;
            }
        }
    }
    s
}

/// The twelve spin coefficients at the geometry's point.
pub fn spin_coefficients(
    geom: &LocalGeometry,
    t: &TetradJets,
) -> Result<SpinCoefficients, GeometryError> {
    let grads = tetrad_gradients(geom, t)?;
    let tv = t.value();
    let (k, l, m, mb) = (tv.k(), tv.l(), tv.m(), tv.mbar());
    let dk = &grads[0];
    let dl = &grads[1];
    // ∇_b m_a = ∇_b (Re m)_a + i ∇_b (Im m)_a
    let dm = |x: &CVec, dir: &CVec| {
        gradient_contract(&grads[2], x, dir) + C::i() * gradient_contract(&grads[3], x, dir)
    };
    let kd = |x: &CVec, dir: &CVec| gradient_contract(dk, x, dir);
    let ld = |x: &CVec, dir: &CVec| gradient_contract(dl, x, dir);
    let half = C::new(0.5, 0.0);
    Ok(SpinCoefficients {
        kappa: kd(&m, &k),
        rho: kd(&m, &mb),
        sigma: kd(&m, &m),
        tau: kd(&m, &l),
        nu: -ld(&mb, &l),
        mu: -ld(&mb, &m),
        lambda: -ld(&mb, &mb),
        pi: -ld(&mb, &k),
        epsilon: half * (kd(&l, &k) - dm(&mb, &k)),
        beta: half * (kd(&l, &m) - dm(&mb, &m)),
        alpha: half * (kd(&l, &mb) - dm(&mb, &mb)),
        gamma: half * (kd(&l, &l) - dm(&mb, &l)),
    })
}
