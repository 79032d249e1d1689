//! Commutator and locality checks for families of modes.
//!
//! A `ModeFamily` is an indexed family `m -> A_m` of operators on states;
//! bracket and locality checks are stated against such families so the same
//! code verifies Virasoro relations, screening commutation and the mixed
//! relations of deformation generators.

use super::Evaluator;
use crate::exactmath::{int, rat_binom, Scalar};
use crate::fockspace::State;
use num_traits::One;

/// An indexed family of operators `m -> A_m` acting on states.
pub struct ModeFamily<'a> {
    name: String,
    f: Box<dyn Fn(&Scalar, &State) -> State + 'a>,
}

impl<'a> ModeFamily<'a> {
    pub fn new(name: impl Into<String>, f: impl Fn(&Scalar, &State) -> State + 'a) -> Self {
        ModeFamily { name: name.into(), f: Box::new(f) }
    }

    /// Modes of a fixed state: `m -> v_m`.
    pub fn of_state(ev: &'a Evaluator, v: State, name: impl Into<String>) -> Self {
        ModeFamily::new(name, move |m, t| ev.mode_apply(&v, m, t))
    }

    /// The Virasoro family `n -> L(n)` of the evaluator's context.
    pub fn virasoro(ev: &'a Evaluator) -> Self {
        ModeFamily::new("L", move |m, t| {
            assert!(m.is_integer(), "Virasoro modes are integer-indexed");
            let omega = ev.omega().clone();
            ev.mode_apply(&omega, &(m.clone() + int(1)), t)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, m: &Scalar, t: &State) -> State {
        (self.f)(m, t)
    }
}

/// `[A_m, B_n] t`.
pub fn bracket_apply(
    a: &ModeFamily<'_>,
    m: &Scalar,
    b: &ModeFamily<'_>,
    n: &Scalar,
    t: &State,
) -> State {
    a.apply(m, &b.apply(n, t)).sub(&b.apply(n, &a.apply(m, t)))
}

/// `[F, G] t` for two plain operators given as closures.
pub fn op_bracket(
    f: &dyn Fn(&State) -> State,
    g: &dyn Fn(&State) -> State,
    t: &State,
) -> State {
    f(&g(t)).sub(&g(&f(t)))
}

/// The coefficient-wise content of `(z1 - z2)^order [a(z1), b(z2)] = 0` at
/// bidegree `(m, n)`:
///
/// ```text
/// sum_{k=0}^{order} (-1)^k C(order, k) [a_{m+order-k}, b_{n+k}] t
/// ```
///
/// which must vanish for all `m`, `n`, `t` exactly when the fields are
/// mutually local of that order.
pub fn locality_order_check(
    a: &ModeFamily<'_>,
    b: &ModeFamily<'_>,
    order: u32,
    m: &Scalar,
    n: &Scalar,
    t: &State,
) -> State {
    let mut acc = State::zero();
    for k in 0..=order {
        let sign = if k % 2 == 0 { Scalar::one() } else { int(-1) };
        let coeff = sign * rat_binom(&int(order as i64), k);
        let am = m.clone() + int((order - k) as i64);
        let bn = n.clone() + int(k as i64);
        acc.add_scaled(&bracket_apply(a, &am, b, &bn, t), &coeff);
    }
    acc
}
