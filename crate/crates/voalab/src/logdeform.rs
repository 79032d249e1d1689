//! Logarithmic deformation machinery: weight-one deformations of module
//! actions, the quadratic charge fields `G(z)`/`Gbar(z)`, the paired coset
//! modules they act on, and exact Jordan-block analysis of the deformed
//! grading operator.
//!
//! Two independent deformation paths are provided and cross-validated:
//!
//! * the generic one, `delta_apply`/`deformed_mode`, which expands
//!   `D(v,x) = x^{v_0} exp(sum_{n>=1} v_n/(-n) (-x)^{-n})` for a weight-one
//!   `v` and realizes the deformed action `a ~> sum_d (D_d a)_{m-d}`;
//! * the closed form on the paired coset modules, where the deformed
//!   Virasoro modes are exactly `L(n) + G(n)` with
//!   `G(n) = sum_j c_j (a_{n-1/p-j} a_{1/p+j} + a_{-1/p-j} a_{n+1/p+j})`,
//!   `a = e^{-alpha/p}`, and `c_j = (-1)^j/(j+1/p) binom(-2/p, j)`.
//!
//! The infinite j-sums defining `G(n)` and `Gbar(n)` truncate exactly at the
//! annihilation bound of the input monomial; the first few omitted terms are
//! verified to vanish (tail-zero witness).

use crate::exactmath::{
    floor_int, int, rat_binom, span_membership, Scalar, SparseMatrix, SparseVector,
};
use crate::fockspace::{
    coset_min_weight, enumerate_basis, FockMonomial, GradedBasis, LatticeContext,
    LatticePoint, SpaceSpec, State,
};
use crate::vertexops::Evaluator;
use crate::VoalabError;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Coefficients `c_j = (-1)^j/(j + 1/p) * binom(-2/p, j)` of the quadratic
/// charge field; `c_0 = p`.
pub fn phi_coefficients(p: u32, jmax: u32) -> Vec<Scalar> {
    assert!(p >= 2);
    let inv_p = Scalar::one() / int(p as i64);
    let exponent = -int(2) * inv_p.clone();
    (0..=jmax)
        .map(|j| {
            let sign = if j % 2 == 0 { Scalar::one() } else { -Scalar::one() };
            sign / (int(j as i64) + inv_p.clone()) * rat_binom(&exponent, j)
        })
        .collect()
}

/// Charge shift of `G(n)`: two `e^{-alpha/p}` factors.
pub fn g_charge(ctx: &LatticeContext) -> LatticePoint {
    ctx.alpha_times(-int(2) / int(ctx.p() as i64))
}

/// Charge shift of `Gbar(n)`: one `e^{alpha - alpha/p}` and one
/// `e^{-alpha/p}` factor.
pub fn gbar_charge(ctx: &LatticeContext) -> LatticePoint {
    ctx.alpha_times(Scalar::one() - int(2) / int(ctx.p() as i64))
}

fn quadratic_mode(
    ev: &Evaluator,
    outer_first: &LatticePoint,
    inner_second: &LatticePoint,
    n: i64,
    s: &State,
) -> State {
    let ctx = ev.ctx();
    let a_pt = ctx.alpha_times(-(Scalar::one() / int(ctx.p() as i64)));
    let inv_p = Scalar::one() / int(ctx.p() as i64);
    let mut out = State::zero();
    for (mono, coeff) in s.terms() {
        let t = State::from_monomial(mono.clone(), coeff.clone());
        let wt = mono.weight(ctx);
        // Term 1 has inner factor `a` at index 1/p + j; term 2 has inner
        // factor `inner_second` at index n + 1/p + j.  Each dies once its
        // index exceeds the annihilation bound for its own charge.
        let bound_a = ev.annihilation_bound(&ctx.weight_of(&a_pt), &a_pt, &wt, &mono.point);
        let bound_inner =
            ev.annihilation_bound(&ctx.weight_of(inner_second), inner_second, &wt, &mono.point);
        let jmax1 = floor_int(&(bound_a.clone() - inv_p.clone()));
        let jmax2 = floor_int(&(bound_inner.clone() - int(n) - inv_p.clone()));
        let jmax = jmax1.max(jmax2).to_i64().expect("truncation bound fits i64").max(-1);
        if jmax < 0 {
            continue;
        }
        let coeffs = phi_coefficients(ctx.p(), jmax as u32);
        for (j, c) in coeffs.iter().enumerate() {
            let j = j as i64;
            // outer_first_{n - 1/p - j} . a_{1/p + j}
            let inner = ev.exp_mode(&a_pt, &(inv_p.clone() + int(j)), &t);
            if !inner.is_zero() {
                let term =
                    ev.exp_mode(outer_first, &(int(n) - inv_p.clone() - int(j)), &inner);
                out.add_scaled(&term, c);
            }
            // a_{-1/p - j} . inner_second_{n + 1/p + j}
            let inner = ev.exp_mode(inner_second, &(int(n) + inv_p.clone() + int(j)), &t);
            if !inner.is_zero() {
                let term = ev.exp_mode(&a_pt, &(-inv_p.clone() - int(j)), &inner);
                out.add_scaled(&term, c);
            }
        }
        // Tail-zero witness: the next three omitted inner modes annihilate.
        for extra in 1..=3 {
            let j = int(jmax + extra);
            debug_assert!(ev
                .exp_mode(&a_pt, &(inv_p.clone() + j.clone()), &t)
                .is_zero());
            debug_assert!(ev
                .exp_mode(inner_second, &(int(n) + inv_p.clone() + j), &t)
                .is_zero());
        }
    }
    out
}

/// The quadratic charge mode `G(n)`; weight shift `-n`, charge shift
/// `-2 alpha / p`.  Incompatible sectors contribute zero.
pub fn g_mode(ev: &Evaluator, n: i64, s: &State) -> State {
    let ctx = ev.ctx();
    let a_pt = ctx.alpha_times(-(Scalar::one() / int(ctx.p() as i64)));
    quadratic_mode(ev, &a_pt.clone(), &a_pt, n, s)
}

/// The barred companion `Gbar(n)`, with `e^{alpha - alpha/p}` replacing one
/// factor; weight shift `-n-1` (the replaced factor has weight zero).
pub fn gbar_mode(ev: &Evaluator, n: i64, s: &State) -> State {
    let ctx = ev.ctx();
    let hat_pt = ctx.alpha_times(Scalar::one() - Scalar::one() / int(ctx.p() as i64));
    quadratic_mode(ev, &hat_pt.clone(), &hat_pt, n, s)
}

/// Deformed Virasoro mode on the paired coset modules: `L(n) + G(n)`.
pub fn deformed_virasoro_mode(ev: &Evaluator, n: i64, s: &State) -> State {
    let mut out = ev.virasoro_mode(n, s);
    out.add_scaled(&g_mode(ev, n, s), &Scalar::one());
    out
}

/// Sign of a paired coset module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum M2Sign {
    Plus,
    Minus,
}

/// The two defining coset representatives of the paired module.
pub fn m2_representatives(ctx: &LatticeContext, sign: M2Sign) -> [LatticePoint; 2] {
    let p = ctx.p() as i64;
    let (t1, t2) = match sign {
        M2Sign::Plus => (int(p + 1) / int(2 * p), int(p - 3) / int(2 * p)),
        M2Sign::Minus => (int(1) / int(2 * p), int(-3) / int(2 * p)),
    };
    [ctx.alpha_times(t1), ctx.alpha_times(t2)]
}

/// A paired coset module enumerated to a cutoff.  The two defining cosets
/// coincide for p = 2; coinciding summands are merged so each underlying
/// state is counted once.
pub struct M2Module {
    pub sign: M2Sign,
    pub summands: Vec<GradedBasis>,
    pub cutoff: Scalar,
}

impl M2Module {
    /// Minimum weight across the summands.
    pub fn min_weight(&self) -> Scalar {
        self.summands
            .iter()
            .filter_map(GradedBasis::min_weight)
            .min()
            .expect("module has at least one stratum")
    }

    /// All weights carrying states, ascending, merged across summands.
    pub fn weights(&self) -> Vec<Scalar> {
        let mut ws: Vec<Scalar> = self
            .summands
            .iter()
            .flat_map(|b| b.weights())
            .collect();
        ws.sort();
        ws.dedup();
        ws
    }

    /// Basis monomials of one weight stratum, across summands.
    pub fn stratum(&self, w: &Scalar) -> Vec<FockMonomial> {
        let mut out = Vec::new();
        for b in &self.summands {
            out.extend_from_slice(b.stratum(w));
        }
        out
    }

    /// Every basis monomial up to the cutoff.
    pub fn all_monomials(&self) -> Vec<FockMonomial> {
        self.weights().iter().flat_map(|w| self.stratum(w)).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.summands.iter().map(GradedBasis::total_dim).sum()
    }
}

/// Build the paired coset module with strata up to `extra_levels` above its
/// minimum weight.
pub fn build_m2(ctx: &LatticeContext, sign: M2Sign, extra_levels: u32) -> M2Module {
    assert!(ctx.pprime().is_none(), "paired modules live over triplet contexts");
    let reps = m2_representatives(ctx, sign);
    let mut distinct: Vec<LatticePoint> = Vec::new();
    for r in reps {
        if !distinct.iter().any(|d| d.same_coset(&r)) {
            distinct.push(r);
        }
    }
    let min = distinct
        .iter()
        .map(|r| coset_min_weight(ctx, r))
        .min()
        .expect("at least one coset");
    let cutoff = min + int(extra_levels as i64);
    let summands = distinct
        .iter()
        .map(|r| enumerate_basis(ctx, &SpaceSpec::Coset(r.clone()), &cutoff))
        .collect();
    M2Module { sign, summands, cutoff }
}

/// Expansion of the deformation operator
/// `D(v,x) a = x^{v_0} exp(sum_{n>=1} v_n/(-n) (-x)^{-n}) a` as a polynomial
/// in `y = x^{-1}` with state coefficients, for `a` with `v_0 a = 0` (then
/// `x^{v_0}` acts as the identity).  The expansion has at most `wt(a) + 1`
/// terms because `v_n` lowers weight by `n`.
pub fn delta_apply(
    ev: &Evaluator,
    v: &State,
    a: &State,
) -> Result<Vec<(u32, State)>, VoalabError> {
    let ctx = ev.ctx();
    if v.homogeneous_weight(ctx) != Some(Scalar::one()) {
        return Err(VoalabError::Rejected(
            "deformation direction must be homogeneous of weight one".into(),
        ));
    }
    if !ev.mode_apply(v, &Scalar::zero(), a).is_zero() {
        return Err(VoalabError::Rejected(
            "state is not annihilated by the zero mode of the deformation direction".into(),
        ));
    }
    let v_charge = {
        let charges: Vec<LatticePoint> = v.charge_components().into_keys().collect();
        assert_eq!(charges.len(), 1, "deformation direction must have a single charge");
        charges.into_iter().next().unwrap()
    };
    // T = sum_{n>=1} -((-1)^n / n) v_n y^n; exp(T) a = sum_k T^k a / k!.
    let apply_t = |input: &BTreeMap<u32, State>| -> BTreeMap<u32, State> {
        let mut out: BTreeMap<u32, State> = BTreeMap::new();
        for (d, s) in input {
            for (mono, coeff) in s.terms() {
                let comp = State::from_monomial(mono.clone(), coeff.clone());
                let bound = ev.annihilation_bound(
                    &Scalar::one(),
                    &v_charge,
                    &mono.weight(ctx),
                    &mono.point,
                );
                let max_n = floor_int(&bound).to_i64().expect("bound fits i64").max(0);
                for n in 1..=max_n {
                    let image = ev.mode_apply(v, &int(n), &comp);
                    if image.is_zero() {
                        continue;
                    }
                    let sign = if n % 2 == 0 { -Scalar::one() } else { Scalar::one() };
                    let c = sign / int(n);
                    out.entry(d + n as u32)
                        .or_insert_with(State::zero)
                        .add_scaled(&image, &c);
                }
            }
        }
        out.retain(|_, s| !s.is_zero());
        out
    };
    let mut total: BTreeMap<u32, State> = BTreeMap::new();
    let mut term: BTreeMap<u32, State> = BTreeMap::new();
    term.insert(0, a.clone());
    let mut k = 0u32;
    while !term.is_empty() {
        for (d, s) in &term {
            total.entry(*d).or_insert_with(State::zero).add_scaled(s, &Scalar::one());
        }
        k += 1;
        let mut next = apply_t(&term);
        for s in next.values_mut() {
            *s = s.scaled(&(Scalar::one() / int(k as i64)));
        }
        term = next;
    }
    total.retain(|_, s| !s.is_zero());
    Ok(total.into_iter().collect())
}

/// Mode of the deformed action `Ytilde(a,x) = Y(D(v,x)a, x)`:
/// `atilde_m = sum_d (D_d a)_{m-d}` applied to `t`.
pub fn deformed_mode(
    ev: &Evaluator,
    v: &State,
    a: &State,
    m: &Scalar,
    t: &State,
) -> Result<State, VoalabError> {
    let expansion = delta_apply(ev, v, a)?;
    let mut out = State::zero();
    for (d, coeff_state) in &expansion {
        let shifted = m.clone() - int(*d as i64);
        out.add_scaled(&ev.mode_apply(coeff_state, &shifted, t), &Scalar::one());
    }
    Ok(out)
}

/// Jordan data of an operator on one weight stratum.
#[derive(Debug, Clone)]
pub struct JordanReport {
    pub operator: String,
    pub weight: Scalar,
    pub eigenvalue: Scalar,
    /// Size of the largest Jordan block for the eigenvalue: the least k with
    /// `(A - h)^k = 0` on the generalized eigenspace; 0 when `h` is not an
    /// eigenvalue, 1 exactly when `A` is semisimple there.
    pub rank: usize,
    pub stratum_dim: usize,
}

/// Exact Jordan-index computation for `op` on the span of `basis` (which the
/// operator must preserve), at candidate eigenvalue `h`.
pub fn nilpotent_rank(
    op: &dyn Fn(&State) -> State,
    name: &str,
    basis: &[State],
    weight: &Scalar,
    h: &Scalar,
) -> JordanReport {
    let dim = basis.len();
    // Joint monomial coordinates for the basis and all images.
    let mut index: BTreeMap<FockMonomial, usize> = BTreeMap::new();
    let coords = |s: &State, index: &mut BTreeMap<FockMonomial, usize>| -> Vec<(FockMonomial, Scalar)> {
        s.terms().map(|(m, c)| (m.clone(), c.clone())).collect::<Vec<_>>()
            .into_iter()
            .inspect(|(m, _)| {
                let next = index.len();
                index.entry(m.clone()).or_insert(next);
            })
            .collect()
    };
    let basis_terms: Vec<_> = basis.iter().map(|s| coords(s, &mut index)).collect();
    let image_terms: Vec<_> = basis.iter().map(|s| coords(&op(s), &mut index)).collect();
    let ambient = index.len();
    let to_vec = |terms: &[(FockMonomial, Scalar)]| {
        SparseVector::new(terms.iter().map(|(m, c)| (index[m], c.clone())).collect())
    };
    let basis_vecs: Vec<SparseVector> = basis_terms.iter().map(|t| to_vec(t)).collect();
    // Matrix entries of op in the given basis: solve each image against it.
    let mut matrix = vec![vec![Scalar::zero(); dim]; dim];
    for (j, terms) in image_terms.iter().enumerate() {
        let img = to_vec(terms);
        let sol = span_membership(&img, &basis_vecs, ambient)
            .expect("operator image escaped the stratum span");
        for (i, c) in sol.into_iter().enumerate() {
            matrix[i][j] = c;
        }
    }
    // N = A - h; Jordan index = least k with ker(N^k) = ker(N^dim).
    for row in 0..dim {
        matrix[row][row] -= h.clone();
    }
    let kernel_dim = |m: &Vec<Vec<Scalar>>| -> usize {
        let rows: Vec<SparseVector> = m
            .iter()
            .map(|r| {
                SparseVector::new(
                    r.iter().enumerate().map(|(j, c)| (j, c.clone())).collect(),
                )
            })
            .collect();
        dim - crate::exactmath::rank(&SparseMatrix::new(rows, dim))
    };
    let mul = |a: &Vec<Vec<Scalar>>, b: &Vec<Vec<Scalar>>| -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::zero(); dim]; dim];
        for i in 0..dim {
            for k in 0..dim {
                if a[i][k].is_zero() {
                    continue;
                }
                for j in 0..dim {
                    if !b[k][j].is_zero() {
                        out[i][j] += a[i][k].clone() * b[k][j].clone();
                    }
                }
            }
        }
        out
    };
    let mut kernels = vec![0usize];
    let mut power = matrix.clone();
    for _ in 0..dim {
        kernels.push(kernel_dim(&power));
        power = mul(&power, &matrix);
    }
    let generalized = *kernels.last().unwrap();
    let rank = kernels.iter().position(|&d| d == generalized).unwrap();
    JordanReport {
        operator: name.to_string(),
        weight: weight.clone(),
        eigenvalue: h.clone(),
        rank,
        stratum_dim: dim,
    }
}

/// A field given by its mode family plus the conformal weight and charge
/// that govern its annihilation bound: modes with index above
/// `wt(t) + weight - h(charge + charge(t)) - 1` kill `t`.  The weight/charge
/// data is the locality certificate that makes n-product sums finite.
pub struct FieldOp<'a> {
    pub name: String,
    pub apply: Box<dyn Fn(&Scalar, &State) -> State + 'a>,
    pub weight: Scalar,
    pub charge: LatticePoint,
}

impl<'a> FieldOp<'a> {
    pub fn from_state(ev: &'a Evaluator, v: &State, name: &str) -> Self {
        let ctx = ev.ctx();
        let weight = v
            .homogeneous_weight(ctx)
            .expect("field state must be homogeneous");
        let charges: Vec<LatticePoint> = v.charge_components().into_keys().collect();
        assert_eq!(charges.len(), 1, "field state must have a single charge");
        let v = v.clone();
        FieldOp {
            name: name.to_string(),
            apply: Box::new(move |m, t| ev.mode_apply(&v, m, t)),
            weight,
            charge: charges.into_iter().next().unwrap(),
        }
    }

    pub fn quadratic_charge(ev: &'a Evaluator) -> Self {
        FieldOp {
            name: "G".to_string(),
            apply: Box::new(move |m, t| {
                assert!(m.is_integer());
                g_mode(ev, floor_int(m).to_i64().expect("mode fits i64"), t)
            }),
            weight: Scalar::one(),
            charge: g_charge(ev.ctx()),
        }
    }

    /// Largest mode index that can act without annihilating `t`.
    fn bound_on(&self, ev: &Evaluator, t: &State) -> Option<Scalar> {
        let ctx = ev.ctx();
        let mut best: Option<Scalar> = None;
        for (mono, _) in t.terms() {
            let b = ev.annihilation_bound(&self.weight, &self.charge, &mono.weight(ctx), &mono.point);
            best = Some(match best {
                Some(cur) => cur.max(b),
                None => b,
            });
        }
        best
    }
}

/// The `n`-th residue product of two mutually local fields, evaluated as its
/// `m`-th mode on `t`:
/// `(a_(n) b)_m t = sum_i (-1)^i binom(n,i) (a_{n-i} b_{m+i} - (-1)^n b_{n+m-i} a_i) t`.
/// Both sums truncate at the fields' annihilation bounds on `t`.
pub fn field_nth_product(
    ev: &Evaluator,
    a: &FieldOp<'_>,
    b: &FieldOp<'_>,
    n: i64,
    m: &Scalar,
    t: &State,
) -> State {
    let mut out = State::zero();
    let Some(bound_b) = b.bound_on(ev, t) else { return out };
    let Some(bound_a) = a.bound_on(ev, t) else { return out };
    // First sum: b_{m+i} t = 0 once m + i exceeds b's bound.
    let imax1 = floor_int(&(bound_b - m.clone())).to_i64().unwrap_or(-1);
    for i in 0..=imax1.max(-1) {
        let coeff = rat_binom(&int(n), i as u32)
            * if i % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        if coeff.is_zero() {
            continue;
        }
        let inner = (b.apply)(&(m.clone() + int(i)), t);
        if inner.is_zero() {
            continue;
        }
        out.add_scaled(&(a.apply)(&(int(n - i)), &inner), &coeff);
    }
    // Second sum: a_i t = 0 once i exceeds a's bound.
    let imax2 = floor_int(&bound_a).to_i64().unwrap_or(-1);
    let outer_sign = if n % 2 == 0 { Scalar::one() } else { -Scalar::one() };
    for i in 0..=imax2.max(-1) {
        let coeff = rat_binom(&int(n), i as u32)
            * if i % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        if coeff.is_zero() {
            continue;
        }
        let inner = (a.apply)(&int(i), t);
        if inner.is_zero() {
            continue;
        }
        let term = (b.apply)(&(int(n) + m.clone() - int(i)), &inner);
        out.add_scaled(&term, &(-outer_sign.clone() * coeff));
    }
    out
}
