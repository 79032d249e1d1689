//! Mode actions of vertex operators on Fock states, in exact arithmetic.
//!
//! Three primitives cover everything:
//!
//! * `heis_mode` — Heisenberg modes `h_i(n)` with the commutator
//!   `[h_i(m), h_j(n)] = m <h_i,h_j> delta_{m+n,0}`;
//! * `exp_mode` — modes of exponential vertex operators,
//!   `Y(e^b, x) = exp(sum_{k>0} b(-k)x^k/k) exp(-sum_{k>0} b(k)x^-k/k) e_b x^{b(0)}`,
//!   with the trivial two-cocycle `e_b e_g = e_{b+g}` fixed once and for all
//!   (every identity this crate checks is stated inside that one convention);
//! * `mode_apply` — modes of arbitrary states, reduced to the two primitives
//!   through the iterate formula
//!   `(a_{-n} w)_m = sum_i (-1)^i C(-n,i) (a_{-n-i} w_{m+i} - (-1)^n w_{m-n-i} a_i)`,
//!   valid verbatim for rational `m` because `a` is a Heisenberg generator
//!   with integer modes.
//!
//! Mode indices are rational: on a charge-`g` state the operator `Y(e^b, x)`
//! only produces powers in `x^{<b,g> + Z}`, so a mode outside `-<b,g> + Z`
//! acts as zero (never an error — charge sectors that miss the support of an
//! operator are annihilated by it).
//!
//! The evaluator memoizes the two expensive primitives keyed on monomials, so
//! repeated suite checks over a graded basis stay cheap.

mod checks;

pub use checks::{bracket_apply, locality_order_check, op_bracket, ModeFamily};

use crate::exactmath::{floor_int, int, rat_binom, Scalar};
use crate::fockspace::{conformal_vector, FockMonomial, LatticeContext, LatticePoint, State};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cell::RefCell;
use std::collections::HashMap;

/// Evaluates vertex-operator modes over a fixed lattice context.
pub struct Evaluator {
    ctx: LatticeContext,
    omega: State,
    memo_exp: RefCell<HashMap<(LatticePoint, Scalar, FockMonomial), State>>,
    memo_comp: RefCell<HashMap<(FockMonomial, Scalar, FockMonomial), State>>,
}

impl Evaluator {
    pub fn new(ctx: LatticeContext) -> Self {
        let omega = conformal_vector(&ctx);
        Evaluator {
            ctx,
            omega,
            memo_exp: RefCell::new(HashMap::new()),
            memo_comp: RefCell::new(HashMap::new()),
        }
    }

    pub fn ctx(&self) -> &LatticeContext {
        &self.ctx
    }

    /// The conformal vector of the context.
    pub fn omega(&self) -> &State {
        &self.omega
    }

    /// `h_color(n)` with `color` 1-based, matching partition colors.
    pub fn heis_mode(&self, color: u16, n: i64, s: &State) -> State {
        let mut out = State::zero();
        for (m, c) in s.terms() {
            out.add_scaled(&self.heis_mode_mono(color, n, m), c);
        }
        out
    }

    fn heis_mode_mono(&self, color: u16, n: i64, m: &FockMonomial) -> State {
        let h = self.ctx.basis_point(color as usize - 1);
        if n < 0 {
            let part = m.partition.with_part((-n) as u32, color);
            State::from_monomial(
                FockMonomial { partition: part, point: m.point.clone() },
                Scalar::one(),
            )
        } else if n == 0 {
            State::from_monomial(m.clone(), self.ctx.pairing(&h, &m.point))
        } else {
            let mut out = State::zero();
            for (idx, &(k, c)) in m.partition.parts().iter().enumerate() {
                if k as i64 != n {
                    continue;
                }
                let factor = int(n) * self.ctx.pairing(&h, &self.ctx.basis_point(c as usize - 1));
                if factor.is_zero() {
                    continue;
                }
                out.add_term(
                    FockMonomial {
                        partition: m.partition.without_index(idx),
                        point: m.point.clone(),
                    },
                    factor,
                );
            }
            out
        }
    }

    /// Mode `e^beta_m` of an exponential vertex operator.
    pub fn exp_mode(&self, beta: &LatticePoint, m: &Scalar, s: &State) -> State {
        let mut out = State::zero();
        for (mono, c) in s.terms() {
            out.add_scaled(&self.exp_mode_mono(beta, m, mono), c);
        }
        out
    }

    fn exp_mode_mono(&self, beta: &LatticePoint, m: &Scalar, t: &FockMonomial) -> State {
        let key = (beta.clone(), m.clone(), t.clone());
        if let Some(hit) = self.memo_exp.borrow().get(&key) {
            return hit.clone();
        }
        let result = self.exp_mode_mono_uncached(beta, m, t);
        self.memo_exp.borrow_mut().insert(key, result.clone());
        result
    }

    fn exp_mode_mono_uncached(&self, beta: &LatticePoint, m: &Scalar, t: &FockMonomial) -> State {
        let pairing_bg = self.ctx.pairing(beta, &t.point);
        let shifted = m.clone() + &pairing_bg;
        if !shifted.is_integer() {
            return State::zero(); // charge sector outside the operator's support
        }
        let n = shifted.to_integer();
        let target = t.point.add(beta);
        let rank = self.ctx.rank() as u16;
        // Pairings <beta, h_c> drive the annihilation half; coordinates
        // beta^c drive the creation half.
        let pair_with: Vec<Scalar> = (1..=rank)
            .map(|c| self.ctx.pairing(beta, &self.ctx.basis_point(c as usize - 1)))
            .collect();
        let coords = beta.coords().to_vec();

        let groups = t.partition.grouped();
        let mut out = State::zero();
        // Odometer over sub-multisets of the partition: s[g] <= mult[g].
        let mut sub = vec![0u32; groups.len()];
        loop {
            // Annihilation coefficient and weighted size of the selection.
            let mut coeff = Scalar::one();
            let mut removed: u64 = 0;
            for (g, &s) in sub.iter().enumerate() {
                if s == 0 {
                    continue;
                }
                let ((k, c), mult) = groups[g];
                removed += k as u64 * s as u64;
                let base = -pair_with[c as usize - 1].clone();
                coeff *= rat_binom(&int(mult as i64), s) * pow(&base, s);
            }
            if !coeff.is_zero() {
                let r = removed as i64 - n.to_i64().expect("mode index fits i64") - 1;
                if r >= 0 {
                    let mut remaining = t.partition.clone();
                    for (g, &s) in sub.iter().enumerate().rev() {
                        let ((k, c), _) = groups[g];
                        for _ in 0..s {
                            let idx = remaining
                                .parts()
                                .iter()
                                .position(|&p| p == (k, c))
                                .expect("selected part present");
                            remaining = remaining.without_index(idx);
                        }
                    }
                    for lambda in crate::exactmath::colored_partitions(r as u32, rank) {
                        let mut cr = coeff.clone();
                        for ((k, c), mult) in lambda.grouped() {
                            let base = coords[c as usize - 1].clone() / int(k as i64);
                            cr *= pow(&base, mult) / factorial(mult);
                            if cr.is_zero() {
                                break;
                            }
                        }
                        if cr.is_zero() {
                            continue;
                        }
                        out.add_term(
                            FockMonomial {
                                partition: remaining.union(&lambda),
                                point: target.clone(),
                            },
                            cr,
                        );
                    }
                }
            }
            // Advance the odometer.
            let mut g = 0;
            loop {
                if g == groups.len() {
                    return out;
                }
                if sub[g] < groups[g].1 {
                    sub[g] += 1;
                    break;
                }
                sub[g] = 0;
                g += 1;
            }
        }
    }

    /// Mode `v_m` of an arbitrary state, applied to a state: linear in both.
    pub fn mode_apply(&self, v: &State, m: &Scalar, t: &State) -> State {
        let mut out = State::zero();
        for (vm, vc) in v.terms() {
            for (tm, tc) in t.terms() {
                out.add_scaled(&self.mode_apply_mono(vm, m, tm), &(vc.clone() * tc.clone()));
            }
        }
        out
    }

    pub fn mode_apply_mono(&self, v: &FockMonomial, m: &Scalar, t: &FockMonomial) -> State {
        if v.partition.is_empty() {
            return if v.point.is_zero() {
                // The vacuum: 1_m = delta_{m,-1} id.
                if *m == int(-1) {
                    State::from_monomial(t.clone(), Scalar::one())
                } else {
                    State::zero()
                }
            } else {
                self.exp_mode_mono(&v.point, m, t)
            };
        }
        let key = (v.clone(), m.clone(), t.clone());
        if let Some(hit) = self.memo_comp.borrow().get(&key) {
            return hit.clone();
        }
        let result = self.composite_mono(v, m, t);
        self.memo_comp.borrow_mut().insert(key, result.clone());
        result
    }

    /// Iterate-formula expansion of `(h_c(-n) w)_m t` on monomials.
    fn composite_mono(&self, v: &FockMonomial, m: &Scalar, t: &FockMonomial) -> State {
        let ((n_u32, color), tail) = v.partition.split_first().expect("nonempty partition");
        let n = n_u32 as i64;
        let w = FockMonomial { partition: tail, point: v.point.clone() };

        let mut out = State::zero();
        // First half: sum_i (-1)^i C(-n,i) h_c(-n-i) (w_{m+i} t), truncated at
        // the annihilation bound of w on t.
        let w_weight = w.weight(&self.ctx);
        let bound = self.annihilation_bound(
            &w_weight,
            &w.point,
            &t.weight(&self.ctx),
            &t.point,
        ) - m.clone();
        if !bound.is_negative() {
            let imax = floor_int(&bound).to_i64().expect("bound fits i64");
            for i in 0..=imax {
                let inner = self.mode_apply_mono(&w, &(m.clone() + int(i)), t);
                if inner.is_zero() {
                    continue;
                }
                let sign = if i % 2 == 0 { Scalar::one() } else { int(-1) };
                let coeff = sign * rat_binom(&int(-n), i as u32);
                if coeff.is_zero() {
                    continue;
                }
                out.add_scaled(&self.heis_mode(color, -n - i, &inner), &coeff);
            }
        }
        // Second half: -(-1)^n sum_i (-1)^i C(-n,i) w_{m-n-i} (h_c(i) t); only
        // i = 0 and part sizes of t contribute.
        let neg_n_sign = if n % 2 == 0 { Scalar::one() } else { int(-1) };
        let mut inner_is: Vec<i64> = vec![0];
        for &(k, _) in t.partition.parts() {
            let k = k as i64;
            if !inner_is.contains(&k) {
                inner_is.push(k);
            }
        }
        for i in inner_is {
            let hit = self.heis_mode_mono(color, i, t);
            if hit.is_zero() {
                continue;
            }
            let sign = if i % 2 == 0 { Scalar::one() } else { int(-1) };
            let coeff = -neg_n_sign.clone() * sign * rat_binom(&int(-n), i as u32);
            if coeff.is_zero() {
                continue;
            }
            let outer_index = m.clone() - int(n) - int(i);
            for (hm, hc) in hit.terms() {
                out.add_scaled(
                    &self.mode_apply_mono(&w, &outer_index, hm),
                    &(coeff.clone() * hc.clone()),
                );
            }
        }
        out
    }

    /// Largest mode index that can act without annihilating: `v_m t = 0`
    /// whenever `m > wt(t) + wt(v) - h(charge_v + charge_t) - 1`, because the
    /// image sits in a charge sector whose weights are bounded below.
    pub fn annihilation_bound(
        &self,
        v_weight: &Scalar,
        v_charge: &LatticePoint,
        t_weight: &Scalar,
        t_charge: &LatticePoint,
    ) -> Scalar {
        let target = v_charge.add(t_charge);
        t_weight.clone() + v_weight.clone() - self.ctx.weight_of(&target) - Scalar::one()
    }

    /// `L(n) = omega_{n+1}`.
    pub fn virasoro_mode(&self, n: i64, s: &State) -> State {
        let omega = self.omega.clone();
        self.mode_apply(&omega, &int(n + 1), s)
    }

    /// Zero mode of `e^beta` (the screening charge when `wt(e^beta) = 1`).
    pub fn screening_charge(&self, beta: &LatticePoint, s: &State) -> State {
        self.exp_mode(beta, &Scalar::zero(), s)
    }
}

fn pow(base: &Scalar, exp: u32) -> Scalar {
    let mut acc = Scalar::one();
    for _ in 0..exp {
        acc *= base.clone();
    }
    acc
}

fn factorial(n: u32) -> Scalar {
    let mut acc = Scalar::one();
    for k in 2..=n.max(1) {
        acc *= int(k as i64);
    }
    acc
}
