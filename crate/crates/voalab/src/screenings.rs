//! Screening charges, their kernels, and generator constructions.
//!
//! A screening charge is the zero mode of a weight-one exponential `e^b`;
//! because `wt(e^b) = 1` it preserves conformal weight and commutes with the
//! whole Virasoro action.  Two flavours appear:
//!
//! * triplet contexts (`<a,a> = 2p`): long `e^a_0` and short `e^{-a/p}_0`;
//! * minimal contexts (`<a,a> = 2pp'`): `Q = e^{a/p'}_0` and
//!   `Qtilde = e^{-a/p}_0`.
//!
//! The kernel of the short screening inside the lattice algebra is the
//! triplet algebra, generated by `omega` together with `F = e^{-a}`,
//! `H = Q F`, `E = Q^2 F` of weight `2p-1`; inside the single-charge Fock
//! space it is the singlet algebra, generated by `omega` and `H`.  For
//! minimal contexts with `p' = 2` the charge operator
//! `G = sum_{i>=1} e^{a/2}_{-i} e^{a/2}_i / i` replaces the long screening in
//! the generator construction: `F = Q e^{-3a/2}`, `H = G F`, `E = G^2 F`.

use crate::exactmath::{
    floor_int, int, kernel_basis, Scalar, SpanBuilder, SparseMatrix, SparseVector,
};
use crate::fockspace::{FockMonomial, GradedBasis, LatticePoint, State};
use crate::vertexops::Evaluator;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Which screening charge of a context.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScreeningKind {
    /// `e^a_0` (triplet context) or `e^{a/p'}_0` (minimal context).
    Long,
    /// `e^{-a/p}_0` in both context flavours.
    Short,
}

/// The charge vector of a screening operator; its zero mode is the operator.
pub fn screening_charge_vector(ev: &Evaluator, kind: ScreeningKind) -> LatticePoint {
    let ctx = ev.ctx();
    assert_eq!(ctx.rank(), 1, "screening constructions are rank-one");
    let p = ctx.p() as i64;
    let t = match (kind, ctx.pprime()) {
        (ScreeningKind::Long, None) => int(1),
        (ScreeningKind::Long, Some(pp)) => Scalar::one() / int(pp as i64),
        (ScreeningKind::Short, _) => -(Scalar::one() / int(p)),
    };
    let point = ctx.alpha_times(t);
    debug_assert_eq!(ctx.weight_of(&point), Scalar::one(), "screenings have weight one");
    point
}

/// Apply one screening charge to a state.
pub fn apply_screening(ev: &Evaluator, kind: ScreeningKind, s: &State) -> State {
    let beta = screening_charge_vector(ev, kind);
    ev.screening_charge(&beta, s)
}

/// Kernel of a list of operators on one stratum of a graded basis, as states.
/// The operators are given by their images on each basis monomial; the kernel
/// of the stacked coefficient matrix is exact and independent of the order in
/// which the operators are listed.
pub fn joint_kernel_stratum(
    basis_states: &[FockMonomial],
    images: &[Vec<State>],
) -> Vec<State> {
    let ncols = basis_states.len();
    for imgs in images {
        assert_eq!(imgs.len(), ncols);
    }
    // Rows are indexed by (operator, output monomial).
    let mut row_of: BTreeMap<(usize, FockMonomial), usize> = BTreeMap::new();
    let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::new();
    for (op, imgs) in images.iter().enumerate() {
        for (col, img) in imgs.iter().enumerate() {
            for (mono, c) in img.terms() {
                let next = row_of.len();
                let r = *row_of.entry((op, mono.clone())).or_insert(next);
                if r == rows.len() {
                    rows.push(Vec::new());
                }
                rows[r].push((col, c.clone()));
            }
        }
    }
    let matrix = SparseMatrix::new(
        rows.into_iter().map(SparseVector::new).collect(),
        ncols,
    );
    kernel_basis(&matrix)
        .into_iter()
        .map(|v| {
            let mut s = State::zero();
            for (i, c) in v.entries() {
                s.add_term(basis_states[*i].clone(), c.clone());
            }
            s
        })
        .collect()
}

/// Per-stratum kernel of the given screenings over a graded basis.
pub fn kernel_strata(
    ev: &Evaluator,
    basis: &GradedBasis,
    kinds: &[ScreeningKind],
) -> BTreeMap<Scalar, Vec<State>> {
    let charges: Vec<LatticePoint> =
        kinds.iter().map(|&k| screening_charge_vector(ev, k)).collect();
    let mut out = BTreeMap::new();
    for (w, monos) in basis.strata() {
        let images: Vec<Vec<State>> = charges
            .iter()
            .map(|beta| {
                monos
                    .iter()
                    .map(|m| {
                        ev.screening_charge(
                            beta,
                            &State::from_monomial(m.clone(), Scalar::one()),
                        )
                    })
                    .collect()
            })
            .collect();
        out.insert(w.clone(), joint_kernel_stratum(monos, &images));
    }
    out
}

/// The triplet generator states `omega, F, H, E` of a triplet context.
pub struct TripletGenerators {
    pub omega: State,
    pub f: State,
    pub h: State,
    pub e: State,
}

pub fn triplet_generators(ev: &Evaluator) -> TripletGenerators {
    let ctx = ev.ctx();
    assert!(ctx.pprime().is_none(), "triplet generators need a triplet context");
    let f = State::exponential(ctx.basis_point(0).neg());
    let h = apply_screening(ev, ScreeningKind::Long, &f);
    let e = apply_screening(ev, ScreeningKind::Long, &h);
    TripletGenerators { omega: ev.omega().clone(), f, h, e }
}

/// The charge operator `G = sum_{i>=1} e^{a/2}_{-i} e^{a/2}_i / i` of a
/// minimal context with `p' = 2`.  Weight-preserving, charge shift `+a`; the
/// i-sum stops at the exact annihilation bound of the inner mode and the
/// first few omitted terms are verified to vanish.
pub fn charge_operator_g(ev: &Evaluator, s: &State) -> State {
    let ctx = ev.ctx();
    assert_eq!(ctx.pprime(), Some(2), "the charge operator needs p' = 2");
    let half = ctx.alpha_times(Scalar::one() / int(2));
    let mut out = State::zero();
    for (mono, coeff) in s.terms() {
        let t = State::from_monomial(mono.clone(), coeff.clone());
        let bound = ev.annihilation_bound(
            &Scalar::one(),
            &half,
            &mono.weight(ctx),
            &mono.point,
        );
        let imax = if bound.is_negative() {
            0
        } else {
            floor_int(&bound).to_i64().expect("bound fits i64")
        };
        for i in 1..=imax {
            let inner = ev.exp_mode(&half, &int(i), &t);
            if inner.is_zero() {
                continue;
            }
            let outer = ev.exp_mode(&half, &int(-i), &inner);
            out.add_scaled(&outer, &(Scalar::one() / int(i)));
        }
        // Tail witness: the first omitted inner modes all annihilate.
        for i in imax + 1..=imax + 3 {
            debug_assert!(ev.exp_mode(&half, &int(i), &t).is_zero());
        }
    }
    out
}

/// Generator states of the minimal-context kernel algebra for `p' = 2`:
/// `F = Q e^{-3a/2}`, `H = G F`, `E = G^2 F`.
pub struct MinimalGenerators {
    pub omega: State,
    pub f: State,
    pub h: State,
    pub e: State,
}

pub fn minimal_generators(ev: &Evaluator) -> MinimalGenerators {
    let ctx = ev.ctx();
    assert_eq!(ctx.pprime(), Some(2));
    let seed = State::exponential(ctx.alpha_times(-int(3) / int(2)));
    let f = apply_screening(ev, ScreeningKind::Long, &seed);
    let h = charge_operator_g(ev, &f);
    let e = charge_operator_g(ev, &h);
    MinimalGenerators { omega: ev.omega().clone(), f, h, e }
}

/// Per-weight dimensions (and spanning states) of the space generated from
/// the vacuum by iterated negative modes `u_{-j}` (`j >= 1`) of the given
/// homogeneous generators, inside the ambient graded basis.
pub fn strong_generation_span(
    ev: &Evaluator,
    gens: &[State],
    ambient: &GradedBasis,
) -> BTreeMap<Scalar, Vec<State>> {
    let ctx = ev.ctx();
    let degrees: Vec<Scalar> = gens
        .iter()
        .map(|g| g.homogeneous_weight(ctx).expect("generators must be homogeneous"))
        .collect();
    let weights = ambient.weights();
    let mut spans: BTreeMap<Scalar, Vec<State>> = BTreeMap::new();
    for w in &weights {
        let dim = ambient.stratum(w).len();
        let mut builder = SpanBuilder::new(dim);
        let mut kept: Vec<State> = Vec::new();
        let offer = |s: State, builder: &mut SpanBuilder, kept: &mut Vec<State>| {
            if s.is_zero() {
                return;
            }
            let coords = ambient
                .stratum_coordinates(w, &s)
                .expect("span state escaped the ambient basis");
            if builder.insert(&coords) {
                kept.push(s);
            }
        };
        if w.is_zero() {
            offer(State::vacuum(ctx.rank()), &mut builder, &mut kept);
        }
        for (w_prev, states) in spans.range(..w.clone()) {
            for (g, deg) in gens.iter().zip(&degrees) {
                // u_m maps weight w' to w' + deg - m - 1; negative modes only.
                let m = w_prev.clone() + deg.clone() - w.clone() - Scalar::one();
                if !(-m.clone()).is_positive() || !m.is_integer() {
                    continue;
                }
                for x in states {
                    offer(ev.mode_apply(g, &m, x), &mut builder, &mut kept);
                }
            }
        }
        spans.insert(w.clone(), kept);
    }
    spans
}

/// Dimension table of a strata map.
pub fn strata_dims(strata: &BTreeMap<Scalar, Vec<State>>) -> Vec<(Scalar, usize)> {
    strata.iter().map(|(w, v)| (w.clone(), v.len())).collect()
}
