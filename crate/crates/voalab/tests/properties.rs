//! Randomized invariant checks.  Every property is exact: the random choices
//! pick test points, never tolerances.

use num_traits::One;
use proptest::prelude::*;
use voalab::config::parse_scalar;
use voalab::exactmath::{floor_int, int, rat, Scalar};
use voalab::fockspace::{enumerate_basis, LatticeContext, SpaceSpec, State};
use voalab::vertexops::Evaluator;

fn coset_states(p: u32, max_weight: i64) -> Vec<State> {
    let ctx = LatticeContext::rank_one_triplet(p);
    let basis = enumerate_basis(&ctx, &SpaceSpec::Coset(ctx.zero_point()), &int(max_weight));
    basis
        .strata()
        .flat_map(|(_, monos)| monos.iter().cloned())
        .map(|m| State::from_monomial(m, Scalar::one()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_parsing_roundtrips_rationals(n in -9999i64..=9999, d in 1i64..=999) {
        prop_assert_eq!(parse_scalar(&format!("{n}/{d}")).unwrap(), rat(n, d));
        prop_assert_eq!(parse_scalar(&n.to_string()).unwrap(), int(n));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn heisenberg_modes_satisfy_the_oscillator_relations(
        p in 2u32..=3,
        m in -3i64..=3,
        n in -3i64..=3,
        pick in 0usize..64,
    ) {
        let states = coset_states(p, 3);
        let t = &states[pick % states.len()];
        let ev = Evaluator::new(LatticeContext::rank_one_triplet(p));
        let lhs = ev.heis_mode(1, m, &ev.heis_mode(1, n, t))
            .sub(&ev.heis_mode(1, n, &ev.heis_mode(1, m, t)));
        let rhs = if m + n == 0 {
            t.scaled(&int(m * 2 * p as i64))
        } else {
            State::zero()
        };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn modes_beyond_the_annihilation_bound_act_as_zero(
        p in 2u32..=3,
        k in -2i64..=2,
        extra in 1i64..=3,
        pick in 0usize..64,
    ) {
        let ctx = LatticeContext::rank_one_triplet(p);
        let ev = Evaluator::new(ctx.clone());
        let states = coset_states(p, 3);
        let t = &states[pick % states.len()];
        let beta = ctx.alpha_times(int(k));
        let (t_weight, t_charge) = {
            let (mono, _) = t.terms().next().unwrap();
            (mono.weight(&ctx), mono.point.clone())
        };
        let bound = ev.annihilation_bound(&ctx.weight_of(&beta), &beta, &t_weight, &t_charge);
        let mode = Scalar::from(floor_int(&bound)) + int(extra);
        prop_assert!(ev.exp_mode(&beta, &mode, t).is_zero());
    }

    #[test]
    fn vertex_modes_are_linear(
        n in -2i64..=2,
        a in -5i64..=5,
        b in 1i64..=4,
        i in 0usize..64,
        j in 0usize..64,
    ) {
        let ev = Evaluator::new(LatticeContext::rank_one_triplet(2));
        let states = coset_states(2, 3);
        let x = &states[i % states.len()];
        let y = &states[j % states.len()];
        let c = rat(a, b);
        let lhs = ev.virasoro_mode(n, &x.add(&y.scaled(&c)));
        let rhs = ev.virasoro_mode(n, x).add(&ev.virasoro_mode(n, y).scaled(&c));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn charge_incompatible_fractional_modes_vanish(
        q in -3i64..=2,
        pick in 0usize..64,
    ) {
        // At p = 2 the half-lattice point a/2 pairs integrally with every
        // integer-charge state, so any mode index in 1/2 + Z is incompatible
        // and must act as zero.
        let ctx = LatticeContext::rank_one_triplet(2);
        let ev = Evaluator::new(ctx.clone());
        let states = coset_states(2, 3);
        let t = &states[pick % states.len()];
        let beta = ctx.alpha_times(rat(1, 2));
        let mode = int(q) + rat(1, 2);
        prop_assert!(ev.exp_mode(&beta, &mode, t).is_zero());
    }
}
