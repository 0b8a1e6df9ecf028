//! Mode operators on the Fock space.
//!
//! Primitive modes: `a_{ij,m} = -x_{ij}(m)` and `a*_{ij,m} = ∂/∂x_{ij}(-m)`.
//! A generating-function product such as `a(z) a*(z) a*(z)` has the mode
//! `Σ_{k_1+k_2+k_3=m} a_{k_1} a*_{k_2} a*_{k_3}`; applied to a vector only
//! finitely many summands survive. [`apply_summable`] enumerates them:
//! finite-action factors are processed right to left with modes read off the
//! running vector's support, and the single flexible factor receives the
//! residual mode.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::{FockVector, VarKey};
use crate::kappa::KappaSpec;
use crate::lattice::{MultiIndex, OrderScheme};
use crate::rational::{self, Rational};
use crate::realization::{phi_b_terms, RealizationParams};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimitiveOp {
    /// Multiplication by `-x_{ij}(m)`.
    XMul { i: usize, j: usize, m: MultiIndex },
    /// `∂/∂x_{ij}(-m)`.
    XDer { i: usize, j: usize, m: MultiIndex },
    /// Multiplication by `y_i(k)`.
    YMul { i: usize, k: MultiIndex },
    /// `∂/∂y_i(k)`, defined for `k > 0` only.
    YDer { i: usize, k: MultiIndex },
    Scalar(Rational),
}

/// Applies a primitive operator, rejecting `y`-derivatives at non-positive modes.
pub fn apply_primitive(op: &PrimitiveOp, v: &FockVector, scheme: &OrderScheme) -> Result<FockVector> {
    if let PrimitiveOp::YDer { k, .. } | PrimitiveOp::YMul { k, .. } = op {
        k.check_dim(scheme.dim())?;
        if !scheme.is_positive(k) {
            return Err(Error::Contract(format!("y variable mode {k} is not positive")));
        }
    }
    Ok(apply_primitive_unchecked(op, v))
}

pub(crate) fn apply_primitive_unchecked(op: &PrimitiveOp, v: &FockVector) -> FockVector {
    match op {
        PrimitiveOp::XMul { i, j, m } => v.mul_var(&VarKey::x(*i, *j, m.clone()), &-Rational::one()),
        PrimitiveOp::XDer { i, j, m } => v.derive(&VarKey::x(*i, *j, -m)),
        PrimitiveOp::YMul { i, k } => v.mul_var(&VarKey::y(*i, k.clone()), &Rational::one()),
        PrimitiveOp::YDer { i, k } => v.derive(&VarKey::y(*i, k.clone())),
        PrimitiveOp::Scalar(c) => v.scaled(c),
    }
}

/// `Σ c · op(v)` over a finite list.
pub fn apply_combination(ops: &[(Rational, PrimitiveOp)], v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (c, op) in ops {
        out.add_scaled(&apply_primitive_unchecked(op, v), c);
    }
    out
}

/// Mode `m` of `κ·D a*_{ij}`: `Σ_t (-Σ_p s_p κ_{t,p}) a*_{ij,s}` with `s = m + t`.
pub fn kappa_d_astar_modes(spec: &KappaSpec, i: usize, j: usize, m: &MultiIndex) -> Vec<(Rational, PrimitiveOp)> {
    spec.support()
        .filter_map(|(t, row)| {
            let s = m + t;
            let c = -s.pair(row);
            (!c.is_zero()).then(|| (c, PrimitiveOp::XDer { i, j, m: s }))
        })
        .collect()
}

/// One generating-function factor with unassigned mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeriesFactor {
    A(usize, usize),
    AStar(usize, usize),
    /// `Φ(b_r)(z)`; commutes with every `x`-operator.
    PhiB(usize),
    KappaDAStar(usize, usize),
}

impl SeriesFactor {
    /// Flexible factors have unbounded mode support against a fixed vector.
    pub fn is_flexible(&self) -> bool {
        matches!(self, SeriesFactor::A(..) | SeriesFactor::PhiB(..))
    }

    fn check_indices(&self, n: usize) -> Result<()> {
        let bad = |what: &'static str, index: usize, max: usize| Err(Error::IndexOutOfRange { what, index, max });
        match *self {
            SeriesFactor::A(i, j) | SeriesFactor::AStar(i, j) | SeriesFactor::KappaDAStar(i, j) => {
                if i < 1 || i >= j {
                    return Err(Error::Contract(format!("x index pair ({i},{j}) is not 1 <= i < j")));
                }
                if j > n + 1 {
                    return bad("x column", j, n + 1);
                }
                Ok(())
            }
            SeriesFactor::PhiB(r) if r > n => bad("heisenberg", r, n),
            SeriesFactor::PhiB(_) => Ok(()),
        }
    }
}

impl fmt::Display for SeriesFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesFactor::A(i, j) => write!(f, "a[{i},{j}]"),
            SeriesFactor::AStar(i, j) => write!(f, "a*[{i},{j}]"),
            SeriesFactor::PhiB(r) => write!(f, "Phi(b_{r})"),
            SeriesFactor::KappaDAStar(i, j) => write!(f, "kD.a*[{i},{j}]"),
        }
    }
}

/// Ordered product of factors with a rational coefficient; the leftmost factor acts last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductTerm {
    coeff: Rational,
    factors: Vec<SeriesFactor>,
}

impl ProductTerm {
    /// Rejects terms with two flexible factors or an `A` factor that is not leftmost.
    pub fn new(coeff: Rational, factors: Vec<SeriesFactor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Contract("product term without factors".into()));
        }
        let flexible = factors.iter().filter(|f| f.is_flexible()).count();
        if flexible > 1 {
            return Err(Error::Contract(format!(
                "product term has {flexible} flexible factors: {}",
                fmt_factors(&factors)
            )));
        }
        if factors[1..].iter().any(|f| matches!(f, SeriesFactor::A(..))) {
            return Err(Error::Contract(format!(
                "multiplication factor must be leftmost: {}",
                fmt_factors(&factors)
            )));
        }
        Ok(ProductTerm { coeff, factors })
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn factors(&self) -> &[SeriesFactor] {
        &self.factors
    }

    pub fn negated(&self) -> ProductTerm {
        ProductTerm {
            coeff: -&self.coeff,
            factors: self.factors.clone(),
        }
    }

    pub fn scaled(&self, c: &Rational) -> ProductTerm {
        ProductTerm {
            coeff: &self.coeff * c,
            factors: self.factors.clone(),
        }
    }
}

fn fmt_factors(fs: &[SeriesFactor]) -> String {
    fs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for ProductTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.coeff < Rational::zero() { "-" } else { "+" };
        let mag = rational::to_string(&num_traits::Signed::abs(&self.coeff));
        write!(f, "{sign}{mag} {}", fmt_factors(&self.factors))
    }
}

/// Mode-independent term list of a field.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Field {
    terms: Vec<ProductTerm>,
}

impl Field {
    pub fn new(n: usize, terms: Vec<ProductTerm>) -> Result<Self> {
        for t in &terms {
            for f in t.factors() {
                f.check_indices(n)?;
            }
        }
        Ok(Field { terms })
    }

    pub fn single(n: usize, factor: SeriesFactor) -> Result<Self> {
        Field::new(n, vec![ProductTerm::new(Rational::one(), vec![factor])?])
    }

    pub fn terms(&self) -> &[ProductTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn negated(&self) -> Field {
        Field {
            terms: self.terms.iter().map(ProductTerm::negated).collect(),
        }
    }

    /// Concatenation of term lists.
    pub fn plus(&self, other: &Field) -> Field {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Field { terms }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.terms {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

/// A field together with a total mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummableOperator {
    pub field: Arc<Field>,
    pub mode: MultiIndex,
}

impl SummableOperator {
    pub fn new(field: Arc<Field>, mode: MultiIndex) -> Self {
        SummableOperator { field, mode }
    }

    /// Single-factor operator at mode `m`, e.g. `a_{ij,m}` or `a*_{ij,m}`.
    pub fn lift(n: usize, factor: SeriesFactor, m: MultiIndex) -> Result<Self> {
        Ok(SummableOperator::new(Arc::new(Field::single(n, factor)?), m))
    }

    pub fn apply(&self, v: &FockVector, params: &RealizationParams) -> FockVector {
        apply_summable(self, v, params)
    }
}

/// Applies a mode of a field to a vector.
pub fn apply_summable(op: &SummableOperator, v: &FockVector, params: &RealizationParams) -> FockVector {
    let mut out = FockVector::zero();
    if v.is_zero() {
        return out;
    }
    for term in op.field.terms() {
        let w = apply_term(term, &op.mode, v, params);
        if term.coeff().is_one() {
            out.absorb(w);
        } else {
            out.add_scaled(&w, term.coeff());
        }
    }
    out
}

/// `A(B v) - B(A v)`.
pub fn commutator_apply(
    a: &SummableOperator,
    b: &SummableOperator,
    v: &FockVector,
    params: &RealizationParams,
) -> FockVector {
    let ab = apply_summable(a, &apply_summable(b, v, params), params);
    let ba = apply_summable(b, &apply_summable(a, v, params), params);
    ab.sub(&ba)
}

fn apply_term(term: &ProductTerm, mode: &MultiIndex, v: &FockVector, params: &RealizationParams) -> FockVector {
    let factors = term.factors();
    // Φ(b) commutes with the x-operators, so it can always act last.
    let (head, rest): (SeriesFactor, Vec<SeriesFactor>) =
        match factors.iter().position(|f| matches!(f, SeriesFactor::PhiB(_))) {
            Some(p) => {
                let mut rest = factors.to_vec();
                let h = rest.remove(p);
                (h, rest)
            }
            None => (factors[0], factors[1..].to_vec()),
        };

    // residual mode -> partially contracted vector; `None` until the first contraction
    let mut states: Option<BTreeMap<MultiIndex, FockVector>> = None;
    for f in rest.iter().rev() {
        let mut next: BTreeMap<MultiIndex, FockVector> = BTreeMap::new();
        match &states {
            None => contract_finite(*f, mode, v, params.spec(), &mut next),
            Some(st) => {
                for (res, vec) in st {
                    contract_finite(*f, res, vec, params.spec(), &mut next);
                }
            }
        }
        next.retain(|_, w| !w.is_zero());
        if next.is_empty() {
            return FockVector::zero();
        }
        states = Some(next);
    }

    match states {
        None => apply_head(head, mode, v, params),
        Some(st) => {
            let mut out = FockVector::zero();
            for (res, vec) in &st {
                out.absorb(apply_head(head, res, vec, params));
            }
            out
        }
    }
}

/// Applies a finite-action factor at every mode pinned by the support of `vec`.
fn contract_finite(
    f: SeriesFactor,
    res: &MultiIndex,
    vec: &FockVector,
    spec: &KappaSpec,
    next: &mut BTreeMap<MultiIndex, FockVector>,
) {
    let (fi, fj) = match f {
        SeriesFactor::AStar(i, j) | SeriesFactor::KappaDAStar(i, j) => (i, j),
        _ => unreachable!("flexible factors are never contracted"),
    };
    for (mono, c) in vec.terms() {
        for (pos, (key, e)) in mono.factors().iter().enumerate() {
            let VarKey::X { i, j, m: q } = key else { continue };
            if *i != fi || *j != fj {
                continue;
            }
            let base = rational::mul_u32(c, *e);
            let lowered = mono.lower_at(pos);
            match f {
                // a*_k with k = -q; residual becomes res - k
                SeriesFactor::AStar(..) => {
                    next.entry(res + q)
                        .or_default()
                        .add_term(lowered, base);
                }
                // s = -q = k + t, coefficient -Σ_p s_p κ_{t,p}
                SeriesFactor::KappaDAStar(..) => {
                    for (t, row) in spec.support() {
                        let w = q.pair(row);
                        if w.is_zero() {
                            continue;
                        }
                        let k = &(-q) - t;
                        next.entry(res - &k)
                            .or_default()
                            .add_term(lowered.clone(), rational::mul(&base, &w));
                    }
                }
                _ => unreachable!(),
            }
        }
    }
}

fn apply_head(f: SeriesFactor, m: &MultiIndex, v: &FockVector, params: &RealizationParams) -> FockVector {
    match f {
        SeriesFactor::A(i, j) => apply_primitive_unchecked(&PrimitiveOp::XMul { i, j, m: m.clone() }, v),
        SeriesFactor::AStar(i, j) => apply_primitive_unchecked(&PrimitiveOp::XDer { i, j, m: m.clone() }, v),
        SeriesFactor::KappaDAStar(i, j) => apply_combination(&kappa_d_astar_modes(params.spec(), i, j, m), v),
        SeriesFactor::PhiB(r) => apply_combination(&phi_b_terms(params, r, m), v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn mi(v: &[i64]) -> MultiIndex {
        MultiIndex::from(v)
    }

    fn params() -> RealizationParams {
        RealizationParams::new(
            2,
            OrderScheme::all_ones(2),
            KappaSpec::point_at_zero(vec![int(1), int(-1)]).unwrap(),
            vec![int(0), int(1), int(2)],
        )
        .unwrap()
    }

    #[test]
    fn primitive_examples() {
        let s = OrderScheme::all_ones(2);
        let one = FockVector::one();
        let xm = apply_primitive(&PrimitiveOp::XMul { i: 1, j: 2, m: mi(&[1, 0]) }, &one, &s).unwrap();
        assert_eq!(xm.to_string(), "-x[1,2](1,0)");
        let x = FockVector::var(VarKey::x(1, 2, mi(&[1, 0])));
        let d = apply_primitive(&PrimitiveOp::XDer { i: 1, j: 2, m: mi(&[-1, 0]) }, &x, &s).unwrap();
        assert_eq!(d, FockVector::one());
        let d0 = apply_primitive(&PrimitiveOp::XDer { i: 1, j: 2, m: mi(&[3, 3]) }, &one, &s).unwrap();
        assert!(d0.is_zero());
        assert!(apply_primitive(&PrimitiveOp::YDer { i: 1, k: mi(&[-1, 0]) }, &one, &s).is_err());
    }

    #[test]
    fn kappa_d_examples() {
        let k = KappaSpec::point_at_zero(vec![int(2), int(3)]).unwrap();
        let m = mi(&[1, -2]);
        let modes = kappa_d_astar_modes(&k, 1, 2, &m);
        // -Σ m_p c_p = -(2 - 6) = 4
        assert_eq!(modes, vec![(int(4), PrimitiveOp::XDer { i: 1, j: 2, m: m.clone() })]);
        assert!(kappa_d_astar_modes(&k, 1, 2, &mi(&[0, 0])).is_empty());
        let c = KappaSpec::positive_cone_example(&OrderScheme::all_ones(2)).unwrap();
        assert!(kappa_d_astar_modes(&c, 1, 2, &mi(&[0, 0])).is_empty());
    }

    /// Brute-force expansion of `κ(w)·D a*(w)` as a truncated double series.
    #[test]
    fn kappa_d_matches_series_oracle() {
        let s = OrderScheme::all_ones(2);
        let c = KappaSpec::positive_cone(
            &s,
            vec![(mi(&[1, 1]), vec![int(1), int(-1)]), (mi(&[0, 1]), vec![int(5), int(0)])],
        )
        .unwrap();
        let mut k = c.clone();
        k.set(mi(&[0, 0]), 0, int(2)).unwrap();
        k.set(mi(&[0, 0]), 1, int(-3)).unwrap();
        // κ·D a* = Σ_p Σ_t κ_{t,p} w^t w_p ∂_{w_p} Σ_q a*_q w^{-q}
        //        = Σ_{t,q} (-Σ_p q_p κ_{t,p}) a*_q w^{t-q}
        // coefficient of w^{-m}: q - t = m
        let box_ = crate::lattice::mode_box(2, 4);
        for m in crate::lattice::mode_box(2, 2) {
            let mut oracle: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
            for q in &box_ {
                for (t, row) in k.support() {
                    if &(q - t) == &m {
                        let c = -q.pair(row);
                        *oracle.entry(q.clone()).or_insert_with(Rational::zero) += c;
                    }
                }
            }
            oracle.retain(|_, c| !c.is_zero());
            let got: BTreeMap<MultiIndex, Rational> = kappa_d_astar_modes(&k, 1, 2, &m)
                .into_iter()
                .map(|(c, op)| match op {
                    PrimitiveOp::XDer { m, .. } => (m, c),
                    _ => unreachable!(),
                })
                .collect();
            assert_eq!(got, oracle, "m={m}");
        }
    }

    #[test]
    fn product_term_contract() {
        use SeriesFactor::*;
        assert!(ProductTerm::new(int(1), vec![A(1, 2), PhiB(1)]).is_err());
        assert!(ProductTerm::new(int(1), vec![AStar(1, 2), A(1, 2)]).is_err());
        assert!(ProductTerm::new(int(1), vec![AStar(1, 2), PhiB(1)]).is_ok());
        assert!(Field::new(2, vec![ProductTerm::new(int(1), vec![A(1, 4)]).unwrap()]).is_err());
        assert!(Field::new(2, vec![ProductTerm::new(int(1), vec![A(2, 2)]).unwrap()]).is_err());
    }

    #[test]
    fn summable_examples() {
        use SeriesFactor::*;
        let p = params();
        let m = mi(&[1, -1]);
        let q = mi(&[0, 2]);
        let aas = SummableOperator::new(
            Arc::new(Field::new(2, vec![ProductTerm::new(int(1), vec![A(1, 2), AStar(1, 2)]).unwrap()]).unwrap()),
            m.clone(),
        );
        let v = FockVector::var(VarKey::x(1, 2, q.clone()));
        let expected = FockVector::var(VarKey::x(1, 2, &m + &q)).scaled(&int(-1));
        assert_eq!(aas.apply(&v, &p), expected);
        assert!(aas.apply(&FockVector::one(), &p).is_zero());

        let q1 = mi(&[1, 0]);
        let q2 = mi(&[-1, 1]);
        let ss = Arc::new(
            Field::new(2, vec![ProductTerm::new(int(1), vec![AStar(1, 2), AStar(1, 3)]).unwrap()]).unwrap(),
        );
        let v = FockVector::var(VarKey::x(1, 2, q1.clone())).mul(&FockVector::var(VarKey::x(1, 3, q2.clone())));
        for m in crate::lattice::mode_box(2, 2) {
            let w = SummableOperator::new(ss.clone(), m.clone()).apply(&v, &p);
            // a*_k = ∂/∂x(-k): contraction needs k1 = -q1, k2 = -q2
            if m == -&(&q1 + &q2) {
                assert_eq!(w, FockVector::one());
            } else {
                assert!(w.is_zero());
            }
        }
    }

    #[test]
    fn commutator_examples() {
        use SeriesFactor::*;
        let p = params();
        let a = SummableOperator::lift(2, A(1, 2), mi(&[1, 0])).unwrap();
        let b = SummableOperator::lift(2, AStar(1, 2), mi(&[-1, 0])).unwrap();
        let v = FockVector::var(VarKey::x(1, 2, mi(&[0, 0])));
        assert_eq!(commutator_apply(&a, &b, &v, &p), v);
        let c = SummableOperator::lift(2, AStar(1, 3), mi(&[-1, 0])).unwrap();
        let w = FockVector::var(VarKey::x(1, 3, mi(&[1, 0])));
        assert!(commutator_apply(&a, &c, &w, &p).is_zero());
        assert!(commutator_apply(&a, &a, &w, &p).is_zero());
    }
}
