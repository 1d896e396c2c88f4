use nalgebra::{Matrix4, SymmetricEigen};

use super::{GeometryError, MetricField, SYM_PAIRS};
use crate::conventions::RIEMANN_SIGN;
use crate::jet::{Jet, MAX_ORDER};
use crate::tensor::{all_down, Tensor, TensorValue, Variance, DIM};

const UP: Variance = Variance::Up;
const DOWN: Variance = Variance::Down;

/// Curvature tensors at a point, all slots down.
#[derive(Debug, Clone)]
pub struct Curvature {
    pub riemann: TensorValue,
    pub ricci: TensorValue,
    pub scalar: f64,
    pub weyl: TensorValue,
    pub einstein: TensorValue,
}

/// Taylor data of the metric and its curvature around one point.
///
/// The metric jet has order 4, so the Christoffel symbols carry order 3 and
/// the Riemann, Ricci and Weyl fields order 2. Two covariant derivatives of a
/// curvature field therefore land on exact order-0 values.
#[derive(Debug, Clone)]
pub struct LocalGeometry {
    point: String,
    coords: [f64; 4],
    g: Tensor<Jet>,
    ginv: Tensor<Jet>,
    gamma: Tensor<Jet>,
    riemann: Tensor<Jet>,
    ricci: Tensor<Jet>,
    scalar: Jet,
    weyl: Tensor<Jet>,
}

type JetMatrix = Vec<Jet>;

fn jet_matmul(a: &JetMatrix, b: &JetMatrix, order: usize) -> JetMatrix {
    (0..16)
        .map(|k| {
            let (i, j) = (k / 4, k % 4);
            let mut s = Jet::zero(order);
            for e in 0..4 {
                s.add_product(&a[i * 4 + e], &b[e * 4 + j]);
            }
            s
        })
        .collect()
}

impl LocalGeometry {
    pub(crate) fn new(
        field: &MetricField,
        point: &str,
        coords: &[f64; 4],
    ) -> Result<Self, GeometryError> {
        let order = MAX_ORDER;
        let bindings = field.bindings(coords);
        let eval_err = |source| GeometryError::Eval {
            point: point.to_string(),
            source,
        };
        let mut comps: Vec<Jet> = vec![Jet::zero(order); 16];
        for (k, &(a, b)) in SYM_PAIRS.iter().enumerate() {
            let j = field.derivative_tables()[k]
                .jet(&bindings, order)
                .map_err(eval_err)?;
            comps[a * 4 + b] = j.clone();
            comps[b * 4 + a] = j;
        }

        let g0 = Matrix4::from_fn(|a, b| comps[a * 4 + b].value());
        check_lorentzian(point, &g0)?;
        let g0inv = g0.try_inverse().ok_or_else(|| GeometryError::Degenerate {
            point: point.to_string(),
            det: g0.determinant(),
        })?;

        // g^{-1} = Σ_n (−g0^{-1} δ)^n g0^{-1}, δ = g − g0 has no constant term.
        let g0inv_jets: JetMatrix = (0..16)
            .map(|k| Jet::constant(g0inv[(k / 4, k % 4)], order))
            .collect();
        let neg_delta: JetMatrix = comps
            .iter()
            .map(|j| {
                let mut d = j.scale(-1.0);
                d.add_scaled(1.0, &Jet::constant(j.value(), order));
                d
            })
            .collect();
        let step = jet_matmul(&g0inv_jets, &neg_delta, order);
        let mut term = g0inv_jets.clone();
        let mut inv = g0inv_jets.clone();
        for _ in 0..order {
            term = jet_matmul(&step, &term, order);
            for (acc, t) in inv.iter_mut().zip(&term) {
                acc.add_scaled(1.0, t);
            }
        }

        let g = Tensor::from_data(all_down(2), comps);
        let ginv = Tensor::from_data(vec![UP, UP], inv);

        // Γ_{dbc} = ½(∂_b g_dc + ∂_c g_db − ∂_d g_bc), then raise d.
        let dg: Vec<Tensor<Jet>> = (0..DIM)
            .map(|v| g.map(|j| j.partial(v)))
            .collect();
        let gamma_low = Tensor::from_fn(all_down(3), |i| {
            let (d, b, c) = (i[0], i[1], i[2]);
            let mut s = dg[b].get(&[d, c]).scale(0.5);
            s.add_scaled(0.5, dg[c].get(&[d, b]));
            s.add_scaled(-0.5, dg[d].get(&[b, c]));
            s
        });
        let gamma = Tensor::from_fn(vec![UP, DOWN, DOWN], |i| {
            let mut s = Jet::zero(order - 1);
            for d in 0..DIM {
                s.add_product(ginv.get(&[i[0], d]), gamma_low.get(&[d, i[1], i[2]]));
            }
            s
        });

        let dgamma: Vec<Tensor<Jet>> = (0..DIM)
            .map(|v| gamma.map(|j| j.partial(v)))
            .collect();
        let rorder = order - 2;
        let riemann_mixed = Tensor::from_fn(vec![UP, DOWN, DOWN, DOWN], |i| {
            let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
            let mut s = dgamma[c].get(&[a, d, b]).truncate(rorder);
            s.add_scaled(-1.0, dgamma[d].get(&[a, c, b]));
            for e in 0..DIM {
                s.add_product(gamma.get(&[a, c, e]), gamma.get(&[e, d, b]));
                let mut neg = Jet::zero(rorder);
                neg.add_product(gamma.get(&[a, d, e]), gamma.get(&[e, c, b]));
                s.add_scaled(-1.0, &neg);
            }
            s.scale(RIEMANN_SIGN)
        });
        let riemann = Tensor::from_fn(all_down(4), |i| {
            let mut s = Jet::zero(rorder);
            for e in 0..DIM {
                s.add_product(g.get(&[i[0], e]), riemann_mixed.get(&[e, i[1], i[2], i[3]]));
            }
            s
        });
        // R_ab = R^c_{acb} = g^{cd} R_{dacb}
        let ricci = Tensor::from_fn(all_down(2), |i| {
            let mut s = Jet::zero(rorder);
            for c in 0..DIM {
                for d in 0..DIM {
                    s.add_product(ginv.get(&[c, d]), riemann.get(&[d, i[0], c, i[1]]));
                }
            }
            s
        });
        let mut scalar = Jet::zero(rorder);
        for a in 0..DIM {
            for b in 0..DIM {
                scalar.add_product(ginv.get(&[a, b]), ricci.get(&[a, b]));
            }
        }
        // C_abcd = R_abcd − ½(g_ac R_db − g_ad R_cb − g_bc R_da + g_bd R_ca)
        //          + (R/6)(g_ac g_db − g_ad g_cb)
        let weyl = Tensor::from_fn(all_down(4), |i| {
            let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
            let gg = |x: usize, y: usize| g.get(&[x, y]);
            let rr = |x: usize, y: usize| ricci.get(&[x, y]);
            let mut s = riemann.get(i).clone();
            let mut ric = Jet::zero(rorder);
            ric.add_product(gg(a, c), rr(d, b));
            ric.add_scaled(-1.0, &(gg(a, d) * rr(c, b)));
            ric.add_scaled(-1.0, &(gg(b, c) * rr(d, a)));
            ric.add_product(gg(b, d), rr(c, a));
            s.add_scaled(-0.5, &ric);
            let mut metric_part = Jet::zero(rorder);
            metric_part.add_product(gg(a, c), gg(d, b));
            metric_part.add_scaled(-1.0, &(gg(a, d) * gg(c, b)));
            let mut sc = Jet::zero(rorder);
            sc.add_product(&scalar, &metric_part);
            s.add_scaled(1.0 / 6.0, &sc);
            s
        });

        Ok(LocalGeometry {
            point: point.to_string(),
            coords: *coords,
            g,
            ginv,
            gamma,
            riemann,
            ricci,
            scalar,
            weyl,
        })
    }

    pub fn point_name(&self) -> &str {
        &self.point
    }

    pub fn coords(&self) -> &[f64; 4] {
        &self.coords
    }

    pub fn metric_jet(&self) -> &Tensor<Jet> {
        &self.g
    }

    pub fn inverse_metric_jet(&self) -> &Tensor<Jet> {
        &self.ginv
    }

    pub fn riemann_jet(&self) -> &Tensor<Jet> {
        &self.riemann
    }

    pub fn ricci_jet(&self) -> &Tensor<Jet> {
        &self.ricci
    }

    pub fn scalar_jet(&self) -> &Jet {
        &self.scalar
    }

    pub fn weyl_jet(&self) -> &Tensor<Jet> {
        &self.weyl
    }

    pub fn metric(&self) -> TensorValue {
        self.g.map(Jet::value)
    }

    pub fn inverse_metric(&self) -> TensorValue {
        self.ginv.map(Jet::value)
    }

    pub fn christoffel(&self) -> TensorValue {
        self.gamma.map(Jet::value)
    }

    pub fn curvature(&self) -> Curvature {
        let ricci = self.ricci.map(Jet::value);
        let scalar = self.scalar.value();
        let g = self.metric();
        let einstein = Tensor::from_fn(all_down(2), |i| {
            ricci.get(i) - 0.5 * scalar * g.get(i)
        });
        Curvature {
            riemann: self.riemann.map(Jet::value),
            ricci,
            scalar,
            weyl: self.weyl.map(Jet::value),
            einstein,
        }
    }

    /// `R^a{}_{bcd}` at the point.
    pub fn riemann_mixed(&self) -> TensorValue {
        let riemann = self.riemann.map(Jet::value);
        let ginv = self.inverse_metric();
        riemann.with_variance(&[UP, DOWN, DOWN, DOWN], &self.metric(), &ginv)
    }

    /// Lowers every `Up` slot of a jet field with the metric jet.
    pub fn lower_all(&self, t: &Tensor<Jet>) -> Tensor<Jet> {
        let mut current = t.clone();
        for slot in 0..t.rank() {
            if current.variance()[slot] == DOWN {
                continue;
            }
            let order = current.data()[0].order();
            let mut variance = current.variance().to_vec();
            variance[slot] = DOWN;
            current = Tensor::from_fn(variance, |idx| {
                let mut j = idx.to_vec();
                let mut s = Jet::zero(order);
                for e in 0..DIM {
                    j[slot] = e;
                    s.add_product(self.g.get(&[idx[slot], e]), current.get(&j));
                }
                s
            });
        }
        current
    }

    /// `∇_a T`: prepends one lower slot; the jet order drops by one.
    pub fn covariant_derivative(&self, t: &Tensor<Jet>) -> Result<Tensor<Jet>, GeometryError> {
        let rank = t.rank() + 1;
        if rank > 6 {
            return Err(GeometryError::RankOverflow(rank));
        }
        let order = t
            .data()
            .iter()
            .map(Jet::order)
            .min()
            .expect("tensor has components");
        assert!(order >= 1, "field jet must have order >= 1 to differentiate");
        let mut variance = vec![DOWN];
        variance.extend_from_slice(t.variance());
        let out_order = order - 1;
        let slots = t.variance().to_vec();
        Ok(Tensor::from_fn(variance, |idx| {
            let a = idx[0];
            let inner = &idx[1..];
            let mut s = t.get(inner).partial(a).truncate(out_order);
            let mut j = inner.to_vec();
            for (slot, &var) in slots.iter().enumerate() {
                let orig = inner[slot];
                for e in 0..DIM {
                    j[slot] = e;
                    let (gamma, sign) = match var {
                        DOWN => (self.gamma.get(&[e, a, orig]), -1.0),
                        UP => (self.gamma.get(&[orig, a, e]), 1.0),
                    };
                    let mut prod = Jet::zero(out_order);
                    prod.add_product(gamma, t.get(&j));
                    s.add_scaled(sign, &prod);
                }
                j[slot] = orig;
            }
            s
        }))
    }

    /// `∇_a ∇_b T` (slots `a, b` prepended).
    pub fn second_covariant_derivative(
        &self,
        t: &Tensor<Jet>,
    ) -> Result<Tensor<Jet>, GeometryError> {
        let first = self.covariant_derivative(t)?;
        self.covariant_derivative(&first)
    }

    /// `2∇_[a∇_b] T` at the point, by differentiating twice.
    pub fn direct_commutator(&self, t: &Tensor<Jet>) -> Result<TensorValue, GeometryError> {
        let dd = self.second_covariant_derivative(t)?.map(Jet::value);
        Ok(Tensor::from_fn(dd.variance().to_vec(), |idx| {
            let mut swapped = idx.to_vec();
            swapped.swap(0, 1);
            dd.get(idx) - dd.get(&swapped)
        }))
    }
}

/// `2∇_[a∇_b] T_{c…}` for an all-lower `T`, from the Ricci identity:
/// `Σ_s R^f{}_{c_s a b} T_{c_1…f…c_r}`. `riemann` must be `R^a{}_{bcd}`.
pub fn commutator_action(riemann: &TensorValue, t: &TensorValue) -> TensorValue {
    assert_eq!(
        riemann.variance(),
        &[UP, DOWN, DOWN, DOWN],
        "commutator_action expects R^a_bcd"
    );
    assert!(
        t.variance().iter().all(|&v| v == DOWN),
        "commutator_action expects an all-lower tensor"
    );
    assert!(t.rank() <= 4, "commutator_action supports rank <= 4");
    let r = t.rank();
    Tensor::from_fn(all_down(r + 2), |idx| {
        let (a, b) = (idx[0], idx[1]);
        let inner = &idx[2..];
        let mut j = inner.to_vec();
        let mut s = 0.0;
        for slot in 0..r {
            let c = inner[slot];
            for f in 0..DIM {
                j[slot] = f;
                s += riemann.get(&[f, c, a, b]) * t.get(&j);
            }
            j[slot] = c;
        }
        s
    })
}

pub(super) fn check_lorentzian(point: &str, g0: &Matrix4<f64>) -> Result<(), GeometryError> {
    let det = g0.determinant();
    let scale = g0.abs().max();
    if !(det.abs() > 1e-12 * scale.powi(4)) {
        return Err(GeometryError::Degenerate {
            point: point.to_string(),
            det,
        });
    }
    let eig = SymmetricEigen::new(*g0);
    let positive = eig.eigenvalues.iter().filter(|&&l| l > 0.0).count();
    let negative = eig.eigenvalues.iter().filter(|&&l| l < 0.0).count();
    if positive != 1 || negative != 3 {
        return Err(GeometryError::Signature {
            point: point.to_string(),
            positive,
            negative,
        });
    }
    Ok(())
}
