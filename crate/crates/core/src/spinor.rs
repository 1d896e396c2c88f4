//! Brute-force two-spinor algebra in the dyad `o = (1, 0)`, `ι = (0, 1)`.
//!
//! Components are expansion coefficients: index value 0 is the `o` direction
//! and 1 the `ι` direction. Indices are raised with `ε^{01} = 1`, so a
//! contraction reads `κ_A λ^A = κ_0 λ_1 − κ_1 λ_0` and `o_A ι^A = 1`.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::np::NPData;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotKind {
    Unprimed,
    Primed,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpinorError {
    #[error("cannot contract a {0:?} slot with a {1:?} slot")]
    KindMismatch(SlotKind, SlotKind),
    #[error("slot {slot} out of range for a spinor with {rank} slots")]
    SlotOutOfRange { slot: usize, rank: usize },
}

/// A spinor with all indices lower and `2^n` stored components.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralSpinor {
    kinds: Vec<SlotKind>,
    data: Vec<C>,
}

fn bits(mut flat: usize, n: usize) -> Vec<u8> {
    let mut out = vec![0u8; n];
    for i in (0..n).rev() {
        out[i] = (flat & 1) as u8;
        flat >>= 1;
    }
    out
}

fn flat(idx: &[u8]) -> usize {
    idx.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// `ε^{xy}`.
fn eps_up(x: u8, y: u8) -> f64 {
    match (x, y) {
        (0, 1) => 1.0,
        (1, 0) => -1.0,
        _ => 0.0,
    }
}

impl GeneralSpinor {
    pub fn from_fn(kinds: Vec<SlotKind>, mut f: impl FnMut(&[u8]) -> C) -> Self {
        let n = kinds.len();
        let data = (0..1usize << n).map(|k| f(&bits(k, n))).collect();
        GeneralSpinor { kinds, data }
    }

    pub fn zeros(kinds: Vec<SlotKind>) -> Self {
        Self::from_fn(kinds, |_| C::new(0.0, 0.0))
    }

    /// A valence-1 spinor `κ_A` from its two components.
    pub fn vector(kind: SlotKind, c0: C, c1: C) -> Self {
        GeneralSpinor {
            kinds: vec![kind],
            data: vec![c0, c1],
        }
    }

    pub fn o(kind: SlotKind) -> Self {
        Self::vector(kind, C::new(1.0, 0.0), C::new(0.0, 0.0))
    }

    pub fn iota(kind: SlotKind) -> Self {
        Self::vector(kind, C::new(0.0, 0.0), C::new(1.0, 0.0))
    }

    /// `ε_AB` with `ε_01 = 1`.
    pub fn epsilon(kind: SlotKind) -> Self {
        Self::from_fn(vec![kind, kind], |i| C::new(eps_up(i[0], i[1]), 0.0))
    }

    pub fn scalar(value: C) -> Self {
        GeneralSpinor {
            kinds: Vec::new(),
            data: vec![value],
        }
    }

    pub fn rank(&self) -> usize {
        self.kinds.len()
    }

    pub fn kinds(&self) -> &[SlotKind] {
        &self.kinds
    }

    pub fn get(&self, idx: &[u8]) -> C {
        self.data[flat(idx)]
    }

    pub fn data(&self) -> &[C] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: C) -> Self {
        GeneralSpinor {
            kinds: self.kinds.clone(),
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &GeneralSpinor) -> Self {
        assert_eq!(self.kinds, other.kinds, "adding spinors of different valence");
        GeneralSpinor {
            kinds: self.kinds.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &GeneralSpinor) -> Self {
        self.add(&other.scale(C::new(-1.0, 0.0)))
    }

    pub fn outer(&self, other: &GeneralSpinor) -> Self {
        let n = other.rank();
        let mut kinds = self.kinds.clone();
        kinds.extend_from_slice(&other.kinds);
        Self::from_fn(kinds, |idx| self.get(&idx[..idx.len() - n]) * other.get(&idx[idx.len() - n..]))
    }

    /// Reorders slots: slot `i` of the result is slot `order[i]` of `self`.
    pub fn permute(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.rank());
        let kinds = order.iter().map(|&o| self.kinds[o]).collect();
        Self::from_fn(kinds, |idx| {
            let mut src = vec![0u8; idx.len()];
            for (i, &o) in order.iter().enumerate() {
                src[o] = idx[i];
            }
            self.get(&src)
        })
    }

    /// `Σ self_{…x…} ε^{xy} other_{…y…}` over each `(self slot, other slot)`
    /// pair; the free slots of `self` come first, then those of `other`.
    pub fn contract(
        &self,
        other: &GeneralSpinor,
        pairs: &[(usize, usize)],
    ) -> Result<GeneralSpinor, SpinorError> {
        for &(a, b) in pairs {
            if a >= self.rank() {
                return Err(SpinorError::SlotOutOfRange { slot: a, rank: self.rank() });
            }
            if b >= other.rank() {
                return Err(SpinorError::SlotOutOfRange { slot: b, rank: other.rank() });
            }
            if self.kinds[a] != other.kinds[b] {
                return Err(SpinorError::KindMismatch(self.kinds[a], other.kinds[b]));
            }
        }
        let free_a: Vec<usize> = (0..self.rank()).filter(|s| pairs.iter().all(|p| p.0 != *s)).collect();
        let free_b: Vec<usize> = (0..other.rank()).filter(|s| pairs.iter().all(|p| p.1 != *s)).collect();
        let mut kinds: Vec<SlotKind> = free_a.iter().map(|&s| self.kinds[s]).collect();
        kinds.extend(free_b.iter().map(|&s| other.kinds[s]));
        let np = pairs.len();
        Ok(Self::from_fn(kinds, |idx| {
            let mut ia = vec![0u8; self.rank()];
            let mut ib = vec![0u8; other.rank()];
            for (k, &s) in free_a.iter().enumerate() {
                ia[s] = idx[k];
            }
            for (k, &s) in free_b.iter().enumerate() {
                ib[s] = idx[free_a.len() + k];
            }
            let mut sum = C::new(0.0, 0.0);
            for combo in 0..1usize << (2 * np) {
                let mut weight = 1.0;
                for (p, &(a, b)) in pairs.iter().enumerate() {
                    let x = ((combo >> (2 * p)) & 1) as u8;
                    let y = ((combo >> (2 * p + 1)) & 1) as u8;
                    weight *= eps_up(x, y);
                    ia[a] = x;
                    ib[b] = y;
                }
                if weight != 0.0 {
                    sum += self.get(&ia) * other.get(&ib) * weight;
                }
            }
            sum
        }))
    }

    /// Average over all permutations of the named slots.
    pub fn symmetrize(&self, slots: &[usize]) -> Result<GeneralSpinor, SpinorError> {
        for &s in slots {
            if s >= self.rank() {
                return Err(SpinorError::SlotOutOfRange { slot: s, rank: self.rank() });
            }
            if self.kinds[s] != self.kinds[slots[0]] {
                return Err(SpinorError::KindMismatch(self.kinds[slots[0]], self.kinds[s]));
            }
        }
        let perms = permutations(slots.len());
        let inv = 1.0 / perms.len() as f64;
        Ok(Self::from_fn(self.kinds.clone(), |idx| {
            let mut src = idx.to_vec();
            let mut sum = C::new(0.0, 0.0);
            for p in &perms {
                for (k, &s) in slots.iter().enumerate() {
                    src[s] = idx[slots[p[k]]];
                }
                sum += self.get(&src);
            }
            sum * inv
        }))
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// A totally symmetric spinor with `p` unprimed and `q` primed indices,
/// stored by `(number of ι, number of ῑ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymSpinor {
    pub p: usize,
    pub q: usize,
    components: Vec<C>,
}

impl SymSpinor {
    pub fn zeros(p: usize, q: usize) -> Self {
        SymSpinor {
            p,
            q,
            components: vec![C::new(0.0, 0.0); (p + 1) * (q + 1)],
        }
    }

    pub fn get(&self, iotas: usize, iota_bars: usize) -> C {
        self.components[iotas * (self.q + 1) + iota_bars]
    }

    pub fn set(&mut self, iotas: usize, iota_bars: usize, v: C) {
        self.components[iotas * (self.q + 1) + iota_bars] = v;
    }

    /// `Ψ_ABCD` from `Ψ0..Ψ4`: the component with `k` ι's is `(−1)^k Ψ_{4−k}`.
    pub fn weyl(psi: &[C; 5]) -> Self {
        let mut s = SymSpinor::zeros(4, 0);
        for k in 0..5 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            s.set(k, 0, psi[4 - k] * sign);
        }
        s
    }

    /// `Φ_ABA'B'` from `Φ_ij`: the component with `2−i` ι's and `2−j` ῑ's is
    /// `(−1)^{i+j} Φ_ij`.
    pub fn ricci(phi: &[[C; 3]; 3]) -> Self {
        let mut s = SymSpinor::zeros(2, 2);
        for (i, row) in phi.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                s.set(2 - i, 2 - j, v * sign);
            }
        }
        s
    }

    pub fn to_psi(&self) -> [C; 5] {
        assert_eq!((self.p, self.q), (4, 0));
        std::array::from_fn(|n| {
            let k = 4 - n;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            self.get(k, 0) * sign
        })
    }

    pub fn kinds(&self) -> Vec<SlotKind> {
        let mut k = vec![SlotKind::Unprimed; self.p];
        k.extend(vec![SlotKind::Primed; self.q]);
        k
    }

    pub fn to_general(&self) -> GeneralSpinor {
        let p = self.p;
        GeneralSpinor::from_fn(self.kinds(), |idx| {
            let iotas = idx[..p].iter().filter(|&&b| b == 1).count();
            let bars = idx[p..].iter().filter(|&&b| b == 1).count();
            self.get(iotas, bars)
        })
    }

    /// Reads the symmetric components of `g` (which should already be
    /// symmetric in its unprimed and in its primed slots).
    pub fn from_general(g: &GeneralSpinor) -> Self {
        let p = g.kinds().iter().filter(|&&k| k == SlotKind::Unprimed).count();
        let q = g.rank() - p;
        assert!(
            g.kinds()[..p].iter().all(|&k| k == SlotKind::Unprimed),
            "unprimed slots must come first"
        );
        let mut s = SymSpinor::zeros(p, q);
        for i in 0..=p {
            for j in 0..=q {
                let mut idx = vec![0u8; p + q];
                idx[p - i..p].fill(1);
                idx[p + q - j..].fill(1);
                s.set(i, j, g.get(&idx));
            }
        }
        s
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

use SlotKind::Unprimed;

/// Normalization of the `ε` terms in `X_ABCD`.
pub const X_EPSILON_FACTOR: f64 = 1.0 / 24.0;

/// `X_ABCD = Ψ_ABCD + f·R (ε_AC ε_BD + ε_AD ε_BC)` with `f` = [`X_EPSILON_FACTOR`].
pub fn curvature_spinor(psi: &SymSpinor, r: f64) -> GeneralSpinor {
    curvature_spinor_with_factor(psi, r, X_EPSILON_FACTOR)
}

/// As [`curvature_spinor`] with an explicit `ε`-term factor.
pub fn curvature_spinor_with_factor(psi: &SymSpinor, r: f64, factor: f64) -> GeneralSpinor {
    let eps = GeneralSpinor::epsilon(Unprimed);
    let ee = eps.outer(&eps); // ε_AB ε_CD in slots [A, B, C, D]
    let ac_bd = ee.permute(&[0, 2, 1, 3]);
    let ad_bc = ee.permute(&[0, 2, 3, 1]);
    psi.to_general()
        .add(&ac_bd.add(&ad_bc).scale(C::new(factor * r, 0.0)))
}

/// `X_{AB(C}{}^G Ψ_{DEF)G}` for a given `X`.
fn weyl_condition_1_with(x: &GeneralSpinor, psi: &SymSpinor) -> GeneralSpinor {
    // X_{ABC}{}^G Ψ_{DEFG} = −Σ X_{ABCx} ε^{xy} Ψ_{DEFy}
    let t = x
        .contract(&psi.to_general(), &[(3, 3)])
        .expect("unprimed slots")
        .scale(C::new(-1.0, 0.0));
    t.symmetrize(&[2, 3, 4, 5]).expect("unprimed slots")
}

/// Residual of `X_{AB(C}{}^G Ψ_{DEF)G} = 0`.
pub fn check_weyl_condition_1(psi: &SymSpinor, r: f64) -> f64 {
    weyl_condition_1_with(&curvature_spinor(psi, r), psi).max_abs()
}

/// As [`check_weyl_condition_1`] with an explicit `ε`-term factor in `X`.
pub fn check_weyl_condition_1_with_factor(psi: &SymSpinor, r: f64, factor: f64) -> f64 {
    weyl_condition_1_with(&curvature_spinor_with_factor(psi, r, factor), psi).max_abs()
}

/// Residual of `12 Ψ_{(AD}{}^{BG} Ψ_{EF)BG} − R Ψ_ADEF = 0`.
pub fn check_contracted_condition(psi: &SymSpinor, r: f64) -> f64 {
    let g = psi.to_general();
    // each raised pair contributes ε^{yx} = −ε^{xy}; two pairs cancel
    let quad = g.contract(&g, &[(2, 2), (3, 3)]).expect("unprimed slots");
    let sym = quad.symmetrize(&[0, 1, 2, 3]).expect("unprimed slots");
    sym.scale(C::new(12.0, 0.0))
        .sub(&g.scale(C::new(r, 0.0)))
        .max_abs()
}

/// Residual of `Φ_{A'B'(C}{}^G Ψ_{DEF)G} = 0`.
pub fn check_weyl_condition_2(psi: &SymSpinor, phi: &SymSpinor) -> f64 {
    // Φ_{CGA'B'} with G raised against Ψ_{DEFG}: slots [C, A', B', D, E, F]
    let t = phi
        .to_general()
        .contract(&psi.to_general(), &[(1, 3)])
        .expect("unprimed slots")
        .scale(C::new(-1.0, 0.0));
    t.symmetrize(&[0, 3, 4, 5]).expect("unprimed slots").max_abs()
}

/// Residual of
/// `X_{ABC}{}^E Φ_{EDC'D'} + X_{ABD}{}^E Φ_{CEC'D'} + Φ_{ABC'}{}^{E'} Φ_{CDE'D'} + Φ_{ABD'}{}^{E'} Φ_{CDC'E'}`,
/// all terms arranged with free slots `[A, B, C, D, C', D']`.
pub fn check_ricci_commutator(psi: &SymSpinor, phi: &SymSpinor, r: f64) -> f64 {
    ricci_commutator(psi, phi, r).max_abs()
}

pub(crate) fn ricci_commutator(psi: &SymSpinor, phi: &SymSpinor, r: f64) -> GeneralSpinor {
    let x = curvature_spinor(psi, r);
    let f = phi.to_general();
    let minus = C::new(-1.0, 0.0);
    // [A,B,C] + [D,C',D']
    let t1 = x.contract(&f, &[(3, 0)]).expect("unprimed").scale(minus);
    // [A,B,D] + [C,C',D']
    let t2 = x
        .contract(&f, &[(3, 1)])
        .expect("unprimed")
        .scale(minus)
        .permute(&[0, 1, 3, 2, 4, 5]);
    // [A,B,C'] + [C,D,D']
    let t3 = f
        .contract(&f, &[(3, 2)])
        .expect("primed")
        .scale(minus)
        .permute(&[0, 1, 3, 4, 2, 5]);
    // [A,B,D'] + [C,D,C']
    let t4 = f
        .contract(&f, &[(3, 3)])
        .expect("primed")
        .scale(minus)
        .permute(&[0, 1, 3, 4, 5, 2]);
    t1.add(&t2).add(&t3).add(&t4)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConditionBranch {
    N,
    D,
}

/// Curvature data of one of the two admissible families.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionData {
    pub psi: SymSpinor,
    pub phi: SymSpinor,
    #[serde(rename = "R")]
    pub r: f64,
}

/// Type N: `Ψ4 = Φ22 = amplitude`, `R = 0`. Type D: `Ψ2 = Φ11 = amplitude`,
/// `R = −12 amplitude`.
pub fn make_condition_data(branch: ConditionBranch, amplitude: f64) -> ConditionData {
    let a = C::new(amplitude, 0.0);
    let z = C::new(0.0, 0.0);
    let mut phi = [[z; 3]; 3];
    match branch {
        ConditionBranch::N => {
            phi[2][2] = a;
            ConditionData {
                psi: SymSpinor::weyl(&[z, z, z, z, a]),
                phi: SymSpinor::ricci(&phi),
                r: 0.0,
            }
        }
        ConditionBranch::D => {
            phi[1][1] = a;
            ConditionData {
                psi: SymSpinor::weyl(&[z, z, a, z, z]),
                phi: SymSpinor::ricci(&phi),
                r: -12.0 * amplitude,
            }
        }
    }
}

/// Spinor-level residuals for NP data, each divided by the squared input scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpinorChecks {
    pub weyl_condition_1: f64,
    pub contracted: f64,
    pub weyl_condition_2: f64,
    pub ricci_commutator: f64,
    pub scale: f64,
}

impl SpinorChecks {
    /// Both Weyl conditions, the spinor form of conformal semi-symmetry.
    pub fn conformal_holds(&self, tol: f64) -> bool {
        self.weyl_condition_1 <= tol && self.weyl_condition_2 <= tol
    }

    pub fn ricci_holds(&self, tol: f64) -> bool {
        self.ricci_commutator <= tol
    }
}

pub fn spinor_checks(np: &NPData) -> SpinorChecks {
    let psi = SymSpinor::weyl(&np.psi);
    let phi = SymSpinor::ricci(&np.phi);
    let s = np.scale().max(1e-14);
    let s2 = s * s;
    SpinorChecks {
        weyl_condition_1: check_weyl_condition_1(&psi, np.scalar) / s2,
        contracted: check_contracted_condition(&psi, np.scalar) / s2,
        weyl_condition_2: check_weyl_condition_2(&psi, &phi) / s2,
        ricci_commutator: check_ricci_commutator(&psi, &phi, np.scalar) / s2,
        scale: s,
    }
}

/// Named results of the standalone verification suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub name: String,
    pub residual: f64,
    pub expect_zero: bool,
    pub passed: bool,
}

/// Residual threshold for "exactly zero" with O(1) inputs.
pub const EXACT_ZERO: f64 = 1e-13;

/// Minimum relative residual for a condition that must fail.
pub const NONZERO: f64 = 1e-3;

/// Runs every component-level identity for the two admissible families and
/// the counterexamples that must violate them.
pub fn lemma_suite() -> Vec<LemmaCheck> {
    let z = C::new(0.0, 0.0);
    let one = C::new(1.0, 0.0);
    let n = make_condition_data(ConditionBranch::N, 1.0);
    let d = make_condition_data(ConditionBranch::D, 1.0);
    let mut phi00 = [[z; 3]; 3];
    phi00[0][0] = one;
    let type_i = SymSpinor::weyl(&[one, z, one, z, one]);
    let type_ii = SymSpinor::weyl(&[z, z, one, z, one]);
    let type_iii = SymSpinor::weyl(&[z, z, z, one, z]);
    let zero = |name: &str, residual: f64| LemmaCheck {
        name: name.to_string(),
        residual,
        expect_zero: true,
        passed: residual <= EXACT_ZERO,
    };
    let nonzero = |name: &str, residual: f64| LemmaCheck {
        name: name.to_string(),
        residual,
        expect_zero: false,
        passed: residual >= NONZERO,
    };
    vec![
        zero("weyl_condition_1/N", check_weyl_condition_1(&n.psi, n.r)),
        zero("weyl_condition_1/D", check_weyl_condition_1(&d.psi, d.r)),
        nonzero("weyl_condition_1/III", check_weyl_condition_1(&type_iii, 0.0)),
        zero("contracted/N", check_contracted_condition(&n.psi, n.r)),
        zero("contracted/D", check_contracted_condition(&d.psi, d.r)),
        nonzero("contracted/I", check_contracted_condition(&type_i, 0.0)),
        nonzero("contracted/II", check_contracted_condition(&type_ii, 0.0)),
        nonzero("contracted/III", check_contracted_condition(&type_iii, 0.0)),
        zero("weyl_condition_2/N", check_weyl_condition_2(&n.psi, &n.phi)),
        zero("weyl_condition_2/D", check_weyl_condition_2(&d.psi, &d.phi)),
        nonzero(
            "weyl_condition_2/N with phi00",
            check_weyl_condition_2(&n.psi, &SymSpinor::ricci(&phi00)),
        ),
        zero("ricci_commutator/N", check_ricci_commutator(&n.psi, &n.phi, n.r)),
        zero("ricci_commutator/D", check_ricci_commutator(&d.psi, &d.phi, d.r)),
        nonzero(
            "ricci_commutator/D with R = 0",
            check_ricci_commutator(&d.psi, &d.phi, 0.0),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use SlotKind::Primed;

    fn c(x: f64) -> C {
        C::new(x, 0.0)
    }

    #[test]
    fn dyad_normalization() {
        let e = GeneralSpinor::epsilon(Unprimed);
        let ee = e.contract(&e, &[(0, 0), (1, 1)]).unwrap();
        assert_eq!(ee.get(&[]), c(2.0));
        let o = GeneralSpinor::o(Unprimed);
        let i = GeneralSpinor::iota(Unprimed);
        assert_eq!(o.contract(&i, &[(0, 0)]).unwrap().get(&[]), c(1.0));
        assert_eq!(o.contract(&o, &[(0, 0)]).unwrap().get(&[]), c(0.0));
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let o = GeneralSpinor::o(Unprimed);
        let ob = GeneralSpinor::o(Primed);
        assert_eq!(
            o.contract(&ob, &[(0, 0)]).unwrap_err(),
            SpinorError::KindMismatch(Unprimed, Primed)
        );
    }

    #[test]
    fn symmetrized_o_iota() {
        let o = GeneralSpinor::o(Unprimed);
        let i = GeneralSpinor::iota(Unprimed);
        let s = o.outer(&i).symmetrize(&[0, 1]).unwrap();
        let sym = SymSpinor::from_general(&s);
        assert_eq!([sym.get(0, 0), sym.get(1, 0), sym.get(2, 0)], [c(0.0), c(0.5), c(0.0)]);
        assert_eq!(s.symmetrize(&[0, 1]).unwrap(), s);
    }

    #[test]
    fn type_d_canonical_form_from_dyad() {
        let o = GeneralSpinor::o(Unprimed);
        let i = GeneralSpinor::iota(Unprimed);
        let psi2 = C::new(0.3, -0.1);
        let s = o
            .outer(&o)
            .outer(&i)
            .outer(&i)
            .symmetrize(&[0, 1, 2, 3])
            .unwrap()
            .scale(psi2 * 6.0);
        let psi = SymSpinor::from_general(&s).to_psi();
        let z = c(0.0);
        let expected = [z, z, psi2, z, z];
        for (a, b) in psi.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-15, "{psi:?}");
        }
    }

    #[test]
    fn type_n_contracted_with_o_vanishes() {
        let d = make_condition_data(ConditionBranch::N, 1.0);
        let o = GeneralSpinor::o(Unprimed);
        for slot in 0..4 {
            let r = d.psi.to_general().contract(&o, &[(slot, 0)]).unwrap();
            assert_eq!(r.max_abs(), 0.0);
        }
    }

    #[test]
    fn condition_data_shapes() {
        let n = make_condition_data(ConditionBranch::N, 1.0);
        assert_eq!(n.psi.to_psi()[4], c(1.0));
        assert_eq!(n.r, 0.0);
        let d = make_condition_data(ConditionBranch::D, 1.0);
        assert_eq!(d.psi.to_psi()[2], c(1.0));
        assert_eq!(d.r, -12.0);
        let d0 = make_condition_data(ConditionBranch::D, 0.0);
        assert_eq!(d0.psi.max_abs() + d0.phi.max_abs() + d0.r.abs(), 0.0);
    }

    #[test]
    fn lemma_suite_passes() {
        for check in lemma_suite() {
            assert!(check.passed, "{check:?}");
        }
    }

    #[test]
    fn epsilon_factor_is_pinned_by_type_d_data() {
        let d = make_condition_data(ConditionBranch::D, 1.0);
        assert!(check_weyl_condition_1_with_factor(&d.psi, d.r, 1.0 / 24.0) <= EXACT_ZERO);
        assert!(check_weyl_condition_1_with_factor(&d.psi, d.r, 1.0 / 12.0) >= NONZERO);
    }
}
