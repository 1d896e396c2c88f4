//! Sign switches shared by the curvature pipeline and the Newman-Penrose layer.
//!
//! The coordinate formula
//! `∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{ce}Γ^e_{db} − Γ^a_{de}Γ^e_{cb}` is
//! multiplied by [`RIEMANN_SIGN`]. With the value `-1` the stored tensor obeys
//! `(∇_a∇_b − ∇_b∇_a) ω_c = R^f{}_{cab} ω_f` for every covector, the Ricci
//! tensor is `R_ab = R^c{}_{acb}`, and in signature (+,−,−,−) a round sphere
//! factor contributes positively to `R`.
//!
//! Two identities pin these switches and are covered by tests:
//! * `R = −12 Ψ2` on every 2×2 product (dS₂×S², Bertotti-Robinson, the
//!   generic product), with `Ψ2 = C_abcd k^a m^b m̄^c ℓ^d`;
//! * `Φ22 > 0` for a pp-wave whose null dust focuses null geodesics
//!   (`H_xx + H_yy > 0` for `ds² = H du² + 2 du dv − dx² − dy²`).
//!
//! With `Φ_ab = −½(R_ab − ¼ R g_ab)` the type D Ricci decomposition
//! `R_ab = A k_(a ℓ_b) + B m_(a m̄_b)` then satisfies `A = −2(3Ψ2 + 2Φ11)` and
//! `B = 2(3Ψ2 − 2Φ11)`.

/// Overall factor applied to the coordinate Riemann formula.
pub const RIEMANN_SIGN: f64 = -1.0;

/// `Φ_ij = PHI_SIGN · ½ (R_ab − ¼ R g_ab) X^a Y^b` for the tetrad pairs
/// listed in [`crate::np::np_scalars`] (with `¼` in place of `½` for Φ11).
pub const PHI_SIGN: f64 = -1.0;

/// `Ψ_n = PSI_SIGN · C_abcd (...)` with the contractions of [`crate::np::np_scalars`].
pub const PSI_SIGN: f64 = 1.0;
