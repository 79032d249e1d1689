//! Exact graded-basis enumeration for Fock spaces and lattice cosets.
//!
//! A coset space `V_{L+g}` is graded by the shifted weight
//! `wt(P e^x) = |P| + <x,x>/2 - <b,x>`, which is a positive-definite quadratic
//! in the lattice coordinates plus a linear shift.  All lattice points below a
//! weight cutoff are found by an exact rational ellipsoid walk (LDL^T
//! decomposition, one integer interval per coordinate level) — no floating
//! point and no heuristic bound.

use super::{FockMonomial, LatticeContext, LatticePoint};
use crate::exactmath::{colored_partitions, floor_int, int, sqrt_floor, Scalar, SparseVector};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Which graded space a basis lives in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceSpec {
    /// Full lattice coset `V_{L+g}`: all charges `g + m`, `m` integral.
    Coset(LatticePoint),
    /// Single-charge Fock space `M(1) x e^g`.
    Fock(LatticePoint),
}

/// All monomials of a graded space up to a weight cutoff, stratified by
/// weight.
#[derive(Debug, Clone)]
pub struct GradedBasis {
    space: SpaceSpec,
    cutoff: Scalar,
    strata: BTreeMap<Scalar, Vec<FockMonomial>>,
    /// Set when the cutoff lies below the lowest weight of the space, so the
    /// basis is empty for a reason the caller should surface.
    below_minimum: bool,
}

fn cmp_mon(a: &FockMonomial, b: &FockMonomial) -> Ordering {
    a.point.cmp(&b.point).then_with(|| a.partition.cmp(&b.partition))
}

impl GradedBasis {
    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn cutoff(&self) -> &Scalar {
        &self.cutoff
    }

    pub fn strata(&self) -> impl Iterator<Item = (&Scalar, &[FockMonomial])> {
        self.strata.iter().map(|(w, v)| (w, v.as_slice()))
    }

    pub fn stratum(&self, w: &Scalar) -> &[FockMonomial] {
        self.strata.get(w).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn weights(&self) -> Vec<Scalar> {
        self.strata.keys().cloned().collect()
    }

    pub fn min_weight(&self) -> Option<Scalar> {
        self.strata.keys().next().cloned()
    }

    pub fn total_dim(&self) -> usize {
        self.strata.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn below_minimum(&self) -> bool {
        self.below_minimum
    }

    pub fn index_in_stratum(&self, w: &Scalar, m: &FockMonomial) -> Option<usize> {
        let v = self.strata.get(w)?;
        v.binary_search_by(|probe| cmp_mon(probe, m)).ok()
    }

    /// Coordinates of a state inside one stratum.  `None` when the state has
    /// a monomial outside the stratum basis (wrong weight, wrong coset, or
    /// beyond the cutoff).
    pub fn stratum_coordinates(&self, w: &Scalar, s: &super::State) -> Option<SparseVector> {
        let mut entries = Vec::new();
        for (m, c) in s.terms() {
            let idx = self.index_in_stratum(w, m)?;
            entries.push((idx, c.clone()));
        }
        Some(SparseVector::new(entries))
    }
}

/// Sorted-by-weight `(weight, dimension)` table of a basis.
pub fn graded_dimension(basis: &GradedBasis) -> Vec<(Scalar, usize)> {
    basis.strata().map(|(w, v)| (w.clone(), v.len())).collect()
}

/// Unit-lower-triangular L and positive diagonal D with `A = L D L^T`.
fn ldl(a: &[Vec<Scalar>]) -> (Vec<Vec<Scalar>>, Vec<Scalar>) {
    let n = a.len();
    let mut l = vec![vec![Scalar::zero(); n]; n];
    let mut d = vec![Scalar::zero(); n];
    for j in 0..n {
        let mut dj = a[j][j].clone();
        for k in 0..j {
            dj -= l[j][k].clone() * l[j][k].clone() * d[k].clone();
        }
        assert!(dj.is_positive(), "gram matrix is not positive definite");
        d[j] = dj;
        l[j][j] = Scalar::from(BigInt::from(1));
        for i in j + 1..n {
            let mut v = a[i][j].clone();
            for k in 0..j {
                v -= l[i][k].clone() * l[j][k].clone() * d[k].clone();
            }
            l[i][j] = v / d[j].clone();
        }
    }
    (l, d)
}

/// Largest integer `k` with `k <= u + sqrt(bound)`, for rational `u` and
/// rational `bound >= 0`.
fn floor_plus_sqrt(u: &Scalar, bound: &Scalar) -> BigInt {
    let mut k = floor_int(u) + sqrt_floor(bound);
    // The true floor is k or k + 1; test the predicate (k+1 - u)^2 <= bound.
    let next = Scalar::from(&k + 1) - u.clone();
    if !next.is_positive() || &next * &next <= *bound {
        k += 1;
    }
    k
}

/// Smallest integer `k` with `k >= u - sqrt(bound)`.
fn ceil_minus_sqrt(u: &Scalar, bound: &Scalar) -> BigInt {
    -floor_plus_sqrt(&-u.clone(), bound)
}

/// All lattice points `x = rep + m`, `m` integral, with shifted weight
/// `h(x) <= cutoff`.  Exact: completes the square around the background
/// charge and walks integer intervals level by level.
fn coset_points(ctx: &LatticeContext, rep: &LatticePoint, cutoff: &Scalar) -> Vec<LatticePoint> {
    let n = ctx.rank();
    let gram: Vec<Vec<Scalar>> = (0..n)
        .map(|i| (0..n).map(|j| ctx.pairing(&ctx.basis_point(i), &ctx.basis_point(j))).collect())
        .collect();
    let (l, d) = ldl(&gram);
    let b = ctx.background();
    // h(x) = (1/2)(x-b)^T A (x-b) - <b,b>/2, so the ellipsoid radius is
    // R = 2*cutoff + <b,b>.
    let radius = int(2) * cutoff.clone() + ctx.pairing(&b, &b);
    let mut out = Vec::new();
    if radius.is_negative() {
        return out;
    }
    // Depth-first from the last coordinate: at level i the residual budget is
    // R - sum_{k>i} d_k y_k^2 and y_i = (x_i - b_i) + sum_{j>i} L_ji (x_j - b_j).
    let mut x = vec![Scalar::zero(); n];
    fn walk(
        level: isize,
        budget: &Scalar,
        x: &mut Vec<Scalar>,
        out: &mut Vec<LatticePoint>,
        l: &[Vec<Scalar>],
        d: &[Scalar],
        rep: &[Scalar],
        b: &[Scalar],
    ) {
        if level < 0 {
            out.push(LatticePoint::new(x.clone()));
            return;
        }
        let i = level as usize;
        let t: Scalar = (i + 1..x.len())
            .map(|j| l[j][i].clone() * (x[j].clone() - b[j].clone()))
            .sum();
        // (x_i - b_i + t)^2 <= budget / d_i with x_i = rep_i + m.
        let bound = budget.clone() / d[i].clone();
        let u = b[i].clone() - t - rep[i].clone();
        let lo = ceil_minus_sqrt(&u, &bound);
        let hi = floor_plus_sqrt(&u, &bound);
        let mut m = lo;
        while m <= hi {
            x[i] = rep[i].clone() + Scalar::from(m.clone());
            let y = x[i].clone() - b[i].clone() + (i + 1..x.len())
                .map(|j| l[j][i].clone() * (x[j].clone() - b[j].clone()))
                .sum::<Scalar>();
            let spent = d[i].clone() * &y * &y;
            walk(level - 1, &(budget.clone() - spent), x, out, l, d, rep, b, );
            m += 1;
        }
    }
    walk(
        n as isize - 1,
        &radius,
        &mut x,
        &mut out,
        &l,
        &d,
        rep.coords(),
        b.coords(),
    );
    // Every returned point really satisfies the cutoff, and in rank one the
    // first excluded neighbours on both sides really exceed it.
    for pt in &out {
        debug_assert!(ctx.weight_of(pt) <= *cutoff);
    }
    if n == 1 && !out.is_empty() {
        let lo = out.iter().map(|p| p.coords()[0].clone()).min().unwrap();
        let hi = out.iter().map(|p| p.coords()[0].clone()).max().unwrap();
        debug_assert!(ctx.weight_of(&LatticePoint::new(vec![lo - int(1)])) > *cutoff);
        debug_assert!(ctx.weight_of(&LatticePoint::new(vec![hi + int(1)])) > *cutoff);
    }
    out.sort();
    out
}

/// Exact minimum of the shifted weight over a coset.
pub fn coset_min_weight(ctx: &LatticeContext, rep: &LatticePoint) -> Scalar {
    let n = ctx.rank();
    let b = ctx.background();
    // The real minimiser is x = b; some corner of the surrounding integer box
    // (in m = x - rep coordinates) gives a finite starting cutoff.
    let mut best: Option<Scalar> = None;
    for mask in 0..1usize << n {
        let coords: Vec<Scalar> = (0..n)
            .map(|i| {
                let frac = b.coords()[i].clone() - rep.coords()[i].clone();
                let base = floor_int(&frac);
                let m = if mask >> i & 1 == 1 { base + 1 } else { base };
                rep.coords()[i].clone() + Scalar::from(m)
            })
            .collect();
        let w = ctx.weight_of(&LatticePoint::new(coords));
        if best.as_ref().is_none_or(|b| w < *b) {
            best = Some(w);
        }
    }
    let start = best.unwrap();
    coset_points(ctx, rep, &start)
        .iter()
        .map(|p| ctx.weight_of(p))
        .min()
        .expect("cutoff chosen to contain at least one point")
}

/// Enumerate the graded basis of a space up to `cutoff`.
pub fn enumerate_basis(ctx: &LatticeContext, space: &SpaceSpec, cutoff: &Scalar) -> GradedBasis {
    let points: Vec<LatticePoint> = match space {
        SpaceSpec::Fock(lambda) => {
            if ctx.weight_of(lambda) <= *cutoff {
                vec![lambda.clone()]
            } else {
                Vec::new()
            }
        }
        SpaceSpec::Coset(rep) => coset_points(ctx, rep, cutoff),
    };
    let below_minimum = points.is_empty();
    let mut strata: BTreeMap<Scalar, Vec<FockMonomial>> = BTreeMap::new();
    for pt in points {
        let h = ctx.weight_of(&pt);
        let kmax = floor_int(&(cutoff.clone() - &h));
        let kmax = kmax.to_u32().expect("weight budget fits in u32");
        for k in 0..=kmax {
            let weight = h.clone() + int(k as i64);
            let entry = strata.entry(weight).or_default();
            for part in colored_partitions(k, ctx.rank() as u16) {
                entry.push(FockMonomial { partition: part, point: pt.clone() });
            }
        }
    }
    for v in strata.values_mut() {
        v.sort_by(cmp_mon);
    }
    GradedBasis { space: space.clone(), cutoff: cutoff.clone(), strata, below_minimum }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    /// Brute-interval oracle for rank-one coset points.
    fn brute_points(ctx: &LatticeContext, rep: &Scalar, cutoff: &Scalar, span: i64) -> Vec<Scalar> {
        let mut out = Vec::new();
        for m in -span..=span {
            let t = rep.clone() + int(m);
            if ctx.weight_of(&LatticePoint::new(vec![t.clone()])) <= *cutoff {
                out.push(t);
            }
        }
        out
    }

    #[test]
    fn coset_points_match_brute_scan() {
        let cases: Vec<(LatticeContext, Scalar, Scalar)> = vec![
            (LatticeContext::rank_one_triplet(2), int(0), int(12)),
            (LatticeContext::rank_one_triplet(2), rat(3, 4), rat(75, 8)),
            (LatticeContext::rank_one_triplet(2), rat(1, 4), rat(51, 8)),
            (LatticeContext::rank_one_triplet(3), rat(-1, 3), int(10)),
            (LatticeContext::rank_one_minimal(3, 2), rat(1, 2), int(20)),
        ];
        for (ctx, rep, cutoff) in cases {
            let pts = coset_points(&ctx, &LatticePoint::new(vec![rep.clone()]), &cutoff);
            let got: Vec<Scalar> = pts.iter().map(|p| p.coords()[0].clone()).collect();
            let want = brute_points(&ctx, &rep, &cutoff, 60);
            assert_eq!(got, want, "rep {rep} cutoff {cutoff}");
            // Doubling the brute-scan span finds nothing new.
            assert_eq!(want, brute_points(&ctx, &rep, &cutoff, 120));
        }
    }

    #[test]
    fn rank_two_points_match_brute_scan() {
        let ctx = LatticeContext::simply_laced_triplet(vec![vec![2, -1], vec![-1, 2]], 2);
        let rep = ctx.zero_point();
        let cutoff = int(3);
        let pts = coset_points(&ctx, &rep, &cutoff);
        let mut brute = Vec::new();
        for m1 in -8..=8i64 {
            for m2 in -8..=8i64 {
                let p = LatticePoint::new(vec![int(m1), int(m2)]);
                if ctx.weight_of(&p) <= cutoff {
                    brute.push(p);
                }
            }
        }
        brute.sort();
        assert_eq!(pts, brute);
        assert!(pts.contains(&ctx.zero_point()));
    }

    #[test]
    fn fock_space_dimensions_are_partition_counts() {
        let ctx = LatticeContext::rank_one_triplet(2);
        let basis = enumerate_basis(&ctx, &SpaceSpec::Fock(ctx.zero_point()), &int(7));
        let dims: Vec<usize> = graded_dimension(&basis).into_iter().map(|(_, d)| d).collect();
        assert_eq!(dims, vec![1, 1, 2, 3, 5, 7, 11, 15]);
        let weights = basis.weights();
        assert_eq!(weights[0], int(0));
        assert_eq!(weights[7], int(7));
    }

    #[test]
    fn lattice_vertex_algebra_low_strata() {
        let ctx = LatticeContext::rank_one_triplet(2);
        let basis = enumerate_basis(&ctx, &SpaceSpec::Coset(ctx.zero_point()), &int(4));
        let table = graded_dimension(&basis);
        // w=0: vacuum.  w=1: a(-1)1 and e^a.  w=2: a(-2), a(-1)^2, a(-1)e^a.
        // w=3: three partitions of 3, two partition-1 dressings of e^a, e^{-a}.
        let dims: Vec<(Scalar, usize)> = table;
        assert_eq!(dims[0], (int(0), 1));
        assert_eq!(dims[1], (int(1), 2));
        assert_eq!(dims[2], (int(2), 3));
        assert_eq!(dims[3], (int(3), 6));
        // Spot-check membership and coordinates.
        let ea = FockMonomial::exponential(ctx.alpha_times(int(1)));
        assert!(basis.index_in_stratum(&int(1), &ea).is_some());
        let s = super::super::State::exponential(ctx.alpha_times(int(1)));
        let coords = basis.stratum_coordinates(&int(1), &s).unwrap();
        assert_eq!(coords.entries().len(), 1);
    }

    #[test]
    fn dressed_coset_lowest_stratum() {
        // The coset of (3/4)a for p = 2 contains both e^{(3/4)a} and
        // e^{(-1/4)a} at the minimum weight 3/8, and nothing else there.
        let ctx = LatticeContext::rank_one_triplet(2);
        let rep = ctx.alpha_times(rat(3, 4));
        assert_eq!(coset_min_weight(&ctx, &rep), rat(3, 8));
        let basis = enumerate_basis(&ctx, &SpaceSpec::Coset(rep), &rat(3, 8));
        assert_eq!(basis.total_dim(), 2);
        let pts: Vec<Scalar> =
            basis.stratum(&rat(3, 8)).iter().map(|m| m.point.coords()[0].clone()).collect();
        assert_eq!(pts, vec![rat(-1, 4), rat(3, 4)]);

        let rep_minus = ctx.alpha_times(rat(1, 4));
        assert_eq!(coset_min_weight(&ctx, &rep_minus), rat(-1, 8));
        let bm = enumerate_basis(&ctx, &SpaceSpec::Coset(rep_minus), &rat(-1, 8));
        assert_eq!(bm.total_dim(), 1);
    }

    #[test]
    fn weights_sit_on_one_arithmetic_ladder() {
        // Every stratum weight differs from the minimum by a nonnegative
        // integer for these cosets (the charge quadratic takes integer steps).
        let ctx = LatticeContext::rank_one_triplet(2);
        for rep in [rat(3, 4), rat(1, 4), int(0), rat(1, 2)] {
            let point = ctx.alpha_times(rep);
            let min = coset_min_weight(&ctx, &point);
            let basis = enumerate_basis(&ctx, &SpaceSpec::Coset(point), &(min.clone() + int(5)));
            assert!(!basis.below_minimum());
            for (w, _) in basis.strata() {
                let gap = w.clone() - min.clone();
                assert!(!gap.is_negative());
                assert!(gap.is_integer(), "gap {gap} not integral");
            }
        }
    }

    #[test]
    fn cutoff_below_minimum_flags_warning() {
        let ctx = LatticeContext::rank_one_triplet(2);
        let basis =
            enumerate_basis(&ctx, &SpaceSpec::Coset(ctx.alpha_times(rat(3, 4))), &rat(1, 4));
        assert!(basis.is_empty());
        assert!(basis.below_minimum());
    }

    #[test]
    fn minimal_context_weights() {
        let ctx = LatticeContext::rank_one_minimal(3, 2);
        // h(t a) = 6 t^2 - t.
        assert_eq!(coset_min_weight(&ctx, &ctx.zero_point()), int(0));
        let basis = enumerate_basis(&ctx, &SpaceSpec::Coset(ctx.zero_point()), &int(15));
        // e^{(-3/2)a} is not in this coset, but e^{-a} (weight 7) is.
        let has_minus_a = basis
            .stratum(&int(7))
            .iter()
            .any(|m| m.partition.is_empty() && m.point.coords()[0] == int(-1));
        assert!(has_minus_a);
    }
}
