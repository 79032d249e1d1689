//! Lattice contexts, Fock monomials and states.
//!
//! A context fixes a positive-definite rescaled root lattice together with the
//! shifted conformal structure: the rank-one triplet flavour has `<a,a> = 2p`
//! and background `((p-1)/2p) a`, the rank-one minimal flavour has
//! `<a,a> = 2pp'` and background `((p-p')/2pp') a`.  States are finite
//! rational combinations of monomials `h_{i1}(-n1)...h_{ik}(-nk) e^g` with `g`
//! a rational point of the dual lattice; weights come from the shifted `L(0)`:
//!
//! ```text
//! wt( P e^g ) = |P| + <g,g>/2 - <b,g>.
//! ```

mod basis;

pub use basis::{coset_min_weight, enumerate_basis, graded_dimension, GradedBasis, SpaceSpec};

use crate::exactmath::{int, rat, ColoredPartition, Scalar};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Which conformal shift the context carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContextMode {
    /// `<a,a> = 2p`, central charge `1 - 6(p-1)^2/p` in rank one.
    Triplet,
    /// `<a,a> = 2pp'`, central charge `1 - 6(p-p')^2/(pp')`; rank one only.
    Minimal,
}

/// A rescaled simply-laced lattice with its background charge.
#[derive(Debug, Clone)]
pub struct LatticeContext {
    rank: usize,
    p: u32,
    pprime: Option<u32>,
    mode: ContextMode,
    /// Pairings `<b_i, b_j>` of the scaled lattice basis (integer-valued).
    gram_scaled: Vec<Vec<Scalar>>,
    /// Inverse of `gram_scaled`, used by the conformal vector.
    gram_inv: Vec<Vec<Scalar>>,
    /// Background charge in scaled-basis coordinates.
    background: Vec<Scalar>,
    central: Scalar,
}

fn invert(m: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = m.len();
    let mut aug: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            let mut row = m[i].clone();
            for j in 0..n {
                row.push(if i == j { Scalar::one() } else { Scalar::zero() });
            }
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .find(|&r| !aug[r][col].is_zero())
            .expect("gram matrix is singular");
        aug.swap(col, p);
        let inv = Scalar::one() / aug[col][col].clone();
        for c in 0..2 * n {
            let v = aug[col][c].clone() * inv.clone();
            aug[col][c] = v;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in 0..2 * n {
                    let d = f.clone() * aug[col][c].clone();
                    aug[r][c] -= d;
                }
            }
        }
    }
    aug.into_iter().map(|row| row[n..].to_vec()).collect()
}

impl LatticeContext {
    /// Rank-one triplet context: `L = Z a` with `<a,a> = 2p`.
    /// `p = 1` is allowed as the degenerate free-boson case (zero background).
    pub fn rank_one_triplet(p: u32) -> Self {
        assert!(p >= 1, "p must be positive");
        let pq = int(p as i64);
        let gram_scaled = vec![vec![int(2) * &pq]];
        let gram_inv = invert(&gram_scaled);
        let background = vec![rat(p as i64 - 1, 2 * p as i64)];
        let central = int(1) - int(6) * (&pq - int(1)) * (&pq - int(1)) / &pq;
        LatticeContext {
            rank: 1,
            p,
            pprime: None,
            mode: ContextMode::Triplet,
            gram_scaled,
            gram_inv,
            background,
            central,
        }
    }

    /// Rank-one minimal-series context: `L = Z a` with `<a,a> = 2pp'`,
    /// `gcd(p, p') = 1`.
    pub fn rank_one_minimal(p: u32, pprime: u32) -> Self {
        assert!(p >= 2 && pprime >= 2, "both p and p' must be >= 2");
        assert_eq!(gcd(p, pprime), 1, "p and p' must be coprime");
        let (pi, qi) = (p as i64, pprime as i64);
        let gram_scaled = vec![vec![int(2 * pi * qi)]];
        let gram_inv = invert(&gram_scaled);
        let background = vec![rat(pi - qi, 2 * pi * qi)];
        let central = int(1) - rat(6 * (pi - qi) * (pi - qi), pi * qi);
        LatticeContext {
            rank: 1,
            p,
            pprime: Some(pprime),
            mode: ContextMode::Minimal,
            gram_scaled,
            gram_inv,
            background,
            central,
        }
    }

    /// Triplet context over an arbitrary simply-laced root lattice given by
    /// its Gram matrix (diagonal entries 2).  Rank one is the well-tested
    /// path; higher rank is constructible and shares all the code here.
    pub fn simply_laced_triplet(gram: Vec<Vec<i64>>, p: u32) -> Self {
        let rank = gram.len();
        assert!(rank >= 1);
        assert!(p >= 1);
        for (i, row) in gram.iter().enumerate() {
            assert_eq!(row.len(), rank, "gram must be square");
            assert_eq!(row[i], 2, "simply-laced gram has diagonal 2");
            for (j, &e) in row.iter().enumerate() {
                assert_eq!(e, gram[j][i], "gram must be symmetric");
            }
        }
        let gram_scaled: Vec<Vec<Scalar>> = gram
            .iter()
            .map(|row| row.iter().map(|&e| int(p as i64 * e)).collect())
            .collect();
        let gram_inv = invert(&gram_scaled);
        // rho in simple-root coordinates solves Gram . r = (1,...,1).
        let gram_q: Vec<Vec<Scalar>> =
            gram.iter().map(|row| row.iter().map(|&e| int(e)).collect()).collect();
        let gram_q_inv = invert(&gram_q);
        let r: Vec<Scalar> = (0..rank)
            .map(|i| (0..rank).map(|j| gram_q_inv[i][j].clone()).sum())
            .collect();
        let rho_sq: Scalar = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| r[i].clone() * gram_q[i][j].clone() * r[j].clone())
                    .sum::<Scalar>()
            })
            .sum();
        let background: Vec<Scalar> =
            r.iter().map(|ri| ri.clone() * rat(p as i64 - 1, p as i64)).collect();
        let pq = int(p as i64);
        let central =
            int(rank as i64) + int(12) * rho_sq * (int(2) - &pq - Scalar::one() / &pq);
        LatticeContext {
            rank,
            p,
            pprime: None,
            mode: ContextMode::Triplet,
            gram_scaled,
            gram_inv,
            background,
            central,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn pprime(&self) -> Option<u32> {
        self.pprime
    }

    pub fn mode(&self) -> ContextMode {
        self.mode
    }

    pub fn central_charge(&self) -> Scalar {
        self.central.clone()
    }

    pub fn gram_inv(&self) -> &[Vec<Scalar>] {
        &self.gram_inv
    }

    /// Background charge as a lattice point.
    pub fn background(&self) -> LatticePoint {
        LatticePoint::new(self.background.clone())
    }

    /// `<x, y>` for rational points in scaled-basis coordinates.
    pub fn pairing(&self, x: &LatticePoint, y: &LatticePoint) -> Scalar {
        assert_eq!(x.coords.len(), self.rank);
        assert_eq!(y.coords.len(), self.rank);
        let mut acc = Scalar::zero();
        for i in 0..self.rank {
            if x.coords[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                if y.coords[j].is_zero() {
                    continue;
                }
                acc += x.coords[i].clone() * self.gram_scaled[i][j].clone() * y.coords[j].clone();
            }
        }
        acc
    }

    /// Shifted conformal weight `<g,g>/2 - <b,g>` of `e^g`.
    pub fn weight_of(&self, gamma: &LatticePoint) -> Scalar {
        let b = self.background();
        self.pairing(gamma, gamma) / int(2) - self.pairing(&b, gamma)
    }

    /// The i-th scaled lattice basis vector (rank-one: the single generator
    /// `a`).
    pub fn basis_point(&self, i: usize) -> LatticePoint {
        assert!(i < self.rank);
        let mut coords = vec![Scalar::zero(); self.rank];
        coords[i] = Scalar::one();
        LatticePoint::new(coords)
    }

    pub fn zero_point(&self) -> LatticePoint {
        LatticePoint::new(vec![Scalar::zero(); self.rank])
    }

    /// Rank-one convenience: the point `c * a`.
    pub fn alpha_times(&self, c: Scalar) -> LatticePoint {
        assert_eq!(self.rank, 1, "alpha_times is a rank-one helper");
        LatticePoint::new(vec![c])
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A rational point of the dual lattice, in scaled-basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint {
    coords: Vec<Scalar>,
}

impl LatticePoint {
    pub fn new(coords: Vec<Scalar>) -> Self {
        LatticePoint { coords }
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &LatticePoint) -> LatticePoint {
        assert_eq!(self.coords.len(), other.coords.len());
        LatticePoint::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn sub(&self, other: &LatticePoint) -> LatticePoint {
        assert_eq!(self.coords.len(), other.coords.len());
        LatticePoint::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }

    pub fn neg(&self) -> LatticePoint {
        LatticePoint::new(self.coords.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, s: &Scalar) -> LatticePoint {
        LatticePoint::new(self.coords.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// True when the difference of the two points has integer coordinates,
    /// i.e. they name the same coset of the lattice.
    pub fn same_coset(&self, other: &LatticePoint) -> bool {
        self.coords
            .iter()
            .zip(&other.coords)
            .all(|(a, b)| (a.clone() - b.clone()).denom().is_one())
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            write!(f, "({})a", self.coords[0])
        } else {
            let parts: Vec<String> =
                self.coords.iter().enumerate().map(|(i, c)| format!("({c})b{}", i + 1)).collect();
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// One basis monomial `P e^g`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockMonomial {
    pub partition: ColoredPartition,
    pub point: LatticePoint,
}

impl FockMonomial {
    pub fn exponential(point: LatticePoint) -> Self {
        FockMonomial { partition: ColoredPartition::empty(), point }
    }

    pub fn vacuum(rank: usize) -> Self {
        FockMonomial {
            partition: ColoredPartition::empty(),
            point: LatticePoint::new(vec![Scalar::zero(); rank]),
        }
    }

    /// Shifted conformal weight of the monomial.
    pub fn weight(&self, ctx: &LatticeContext) -> Scalar {
        int(self.partition.total() as i64) + ctx.weight_of(&self.point)
    }
}

impl fmt::Display for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(n, color) in self.partition.parts() {
            if self.point.coords().len() == 1 {
                write!(f, "a(-{n})")?;
            } else {
                write!(f, "h{color}(-{n})")?;
            }
        }
        if self.point.is_zero() {
            if self.partition.is_empty() {
                write!(f, "1")?;
            }
        } else {
            write!(f, "e[{}]", self.point)?;
        }
        Ok(())
    }
}

/// Finite rational combination of Fock monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct State {
    terms: BTreeMap<FockMonomial, Scalar>,
}

impl State {
    pub fn zero() -> Self {
        State { terms: BTreeMap::new() }
    }

    pub fn vacuum(rank: usize) -> Self {
        State::from_monomial(FockMonomial::vacuum(rank), Scalar::one())
    }

    /// The pure exponential `e^g`.
    pub fn exponential(point: LatticePoint) -> Self {
        State::from_monomial(FockMonomial::exponential(point), Scalar::one())
    }

    pub fn from_monomial(m: FockMonomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        State { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &FockMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: FockMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &State, factor: &Scalar) {
        if factor.is_zero() {
            return;
        }
        for (m, c) in other.terms() {
            self.add_term(m.clone(), c.clone() * factor.clone());
        }
    }

    pub fn add(&self, other: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(other, &int(-1));
        out
    }

    pub fn scaled(&self, factor: &Scalar) -> State {
        let mut out = State::zero();
        out.add_scaled(self, factor);
        out
    }

    /// Decompose into homogeneous conformal-weight components.
    pub fn weight_components(&self, ctx: &LatticeContext) -> BTreeMap<Scalar, State> {
        let mut out: BTreeMap<Scalar, State> = BTreeMap::new();
        for (m, c) in self.terms() {
            out.entry(m.weight(ctx)).or_default().add_term(m.clone(), c.clone());
        }
        out
    }

    /// Decompose into charge sectors.
    pub fn charge_components(&self) -> BTreeMap<LatticePoint, State> {
        let mut out: BTreeMap<LatticePoint, State> = BTreeMap::new();
        for (m, c) in self.terms() {
            out.entry(m.point.clone()).or_default().add_term(m.clone(), c.clone());
        }
        out
    }

    /// The single weight of a homogeneous nonzero state.
    pub fn homogeneous_weight(&self, ctx: &LatticeContext) -> Option<Scalar> {
        let comps = self.weight_components(ctx);
        if comps.len() == 1 {
            comps.into_keys().next()
        } else {
            None
        }
    }

    /// Keep only components of weight <= cutoff.
    pub fn truncate_weight(&self, ctx: &LatticeContext, cutoff: &Scalar) -> State {
        let mut out = State::zero();
        for (m, c) in self.terms() {
            if &m.weight(ctx) <= cutoff {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}){m}")?;
        }
        Ok(())
    }
}

/// The shifted conformal vector of the context, as a state:
///
/// ```text
/// omega = (1/2) sum_{ij} (A^{-1})_{ij} h_i(-1) h_j(-1) 1  +  sum_i b_i h_i(-2) 1
/// ```
///
/// with `A` the scaled Gram matrix and `b` the background charge.  In rank one
/// this is `(1/(2<a,a>)) a(-1)^2 1 + b1 a(-2) 1`.
pub fn conformal_vector(ctx: &LatticeContext) -> State {
    let mut omega = State::zero();
    let zero = ctx.zero_point();
    for i in 0..ctx.rank() {
        for j in 0..ctx.rank() {
            let coeff = ctx.gram_inv()[i][j].clone() / int(2);
            if coeff.is_zero() {
                continue;
            }
            let part = ColoredPartition::new(vec![(1, (i + 1) as u16), (1, (j + 1) as u16)]);
            omega.add_term(FockMonomial { partition: part, point: zero.clone() }, coeff);
        }
    }
    let b = ctx.background();
    for i in 0..ctx.rank() {
        let bi = b.coords()[i].clone();
        if bi.is_zero() {
            continue;
        }
        let part = ColoredPartition::new(vec![(2, (i + 1) as u16)]);
        omega.add_term(FockMonomial { partition: part, point: zero.clone() }, bi);
    }
    omega
}
