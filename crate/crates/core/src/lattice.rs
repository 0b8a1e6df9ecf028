//! Multi-indices in `Z^{N+1}` and a configurable total group order.
//!
//! An [`OrderScheme`] splits the lattice into negative, zero and positive
//! parts: `m > 0` when the weighted sum `Σ w_i m_i` is positive, and on a
//! tie the first nonzero coordinate decides. Any choice of rational weights
//! gives a total order compatible with addition.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Element of `Z^{N+1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(SmallVec<[i64; 3]>);

impl MultiIndex {
    pub fn new(coords: impl IntoIterator<Item = i64>) -> Self {
        MultiIndex(coords.into_iter().collect())
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, dim))
    }

    /// The `p`-th standard basis vector.
    pub fn unit(dim: usize, p: usize) -> Self {
        let mut m = Self::zero(dim);
        m.0[p] = 1;
        m
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }

    /// `Σ_p self_p · values_p` for a per-coordinate list of rationals.
    pub fn pair(&self, values: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (c, v) in self.0.iter().zip(values) {
            if *c != 0 && !v.is_zero() {
                acc += v * Rational::from_integer(BigInt::from(*c));
            }
        }
        acc
    }

    /// Parses `"a,b,c"` (optionally wrapped in parentheses).
    pub fn parse(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        if inner.trim().is_empty() {
            return Err(Error::Parse(format!("empty multi-index {s:?}")));
        }
        inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad multi-index {s:?}")))
            })
            .collect::<Result<SmallVec<_>>>()
            .map(MultiIndex)
    }
}

impl From<Vec<i64>> for MultiIndex {
    fn from(v: Vec<i64>) -> Self {
        MultiIndex(v.into_iter().collect())
    }
}

impl From<&[i64]> for MultiIndex {
    fn from(v: &[i64]) -> Self {
        MultiIndex(v.iter().copied().collect())
    }
}

impl<'a> Add<&'a MultiIndex> for &'a MultiIndex {
    type Output = MultiIndex;
    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), rhs.dim());
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a MultiIndex> for &'a MultiIndex {
    type Output = MultiIndex;
    fn sub(self, rhs: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), rhs.dim());
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &MultiIndex {
    type Output = MultiIndex;
    fn neg(self) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| -a).collect())
    }
}

impl Add for MultiIndex {
    type Output = MultiIndex;
    fn add(self, rhs: MultiIndex) -> MultiIndex {
        &self + &rhs
    }
}

impl Sub for MultiIndex {
    type Output = MultiIndex;
    fn sub(self, rhs: MultiIndex) -> MultiIndex {
        &self - &rhs
    }
}

impl Neg for MultiIndex {
    type Output = MultiIndex;
    fn neg(self) -> MultiIndex {
        -&self
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter())
    }
}

/// All multi-indices of dimension `dim` with every coordinate in `[-radius, radius]`,
/// in lexicographic order.
pub fn mode_box(dim: usize, radius: i64) -> Vec<MultiIndex> {
    let side = (2 * radius + 1).max(0) as usize;
    let total = side.pow(dim as u32);
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![-radius; dim];
    if side == 0 {
        return out;
    }
    loop {
        out.push(MultiIndex::from(cur.clone()));
        let mut p = dim;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            if cur[p] < radius {
                cur[p] += 1;
                break;
            }
            cur[p] = -radius;
        }
    }
}

pub fn in_box(m: &MultiIndex, radius: i64) -> bool {
    m.coords().iter().all(|c| c.abs() <= radius)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// Weighted total order on `Z^{N+1}` with lexicographic tiebreak.
#[derive(Clone, PartialEq, Eq)]
pub struct OrderScheme {
    weights: Vec<Rational>,
    // weights scaled by the lcm of their denominators
    scaled: Vec<i64>,
}

impl OrderScheme {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Contract("order scheme needs at least one weight".into()));
        }
        let mut lcm = BigInt::one();
        for w in &weights {
            lcm = lcm.lcm(w.denom());
        }
        let scaled = weights
            .iter()
            .map(|w| {
                (w.numer() * (&lcm / w.denom()))
                    .to_i64()
                    .ok_or_else(|| Error::Contract(format!("weight {w} too large")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OrderScheme { weights, scaled })
    }

    /// All weights equal to 1.
    pub fn all_ones(dim: usize) -> Self {
        Self::new(vec![Rational::one(); dim]).expect("unit weights")
    }

    /// Weights `1, 2, …, dim`.
    pub fn ramp(dim: usize) -> Self {
        Self::new((1..=dim as i64).map(rational::int).collect()).expect("small weights")
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Sign of `m` without a dimension check. Callers guarantee matching lengths.
    pub fn sign_unchecked(&self, m: &MultiIndex) -> Sign {
        debug_assert_eq!(m.dim(), self.dim());
        let s: i128 = self
            .scaled
            .iter()
            .zip(m.coords())
            .map(|(w, c)| *w as i128 * *c as i128)
            .sum();
        match s.signum() {
            1 => Sign::Positive,
            -1 => Sign::Negative,
            _ => match m.coords().iter().find(|c| **c != 0) {
                Some(c) if *c > 0 => Sign::Positive,
                Some(_) => Sign::Negative,
                None => Sign::Zero,
            },
        }
    }

    pub fn is_positive(&self, m: &MultiIndex) -> bool {
        self.sign_unchecked(m) == Sign::Positive
    }

    pub fn order_sign(&self, m: &MultiIndex) -> Result<Sign> {
        m.check_dim(self.dim())?;
        Ok(self.sign_unchecked(m))
    }

    /// `θ(m)`: 1 when `m > 0`, else 0.
    pub fn theta(&self, m: &MultiIndex) -> Result<u8> {
        Ok(u8::from(self.order_sign(m)? == Sign::Positive))
    }

    pub fn weight_strings(&self) -> Vec<String> {
        self.weights.iter().map(rational::to_string).collect()
    }
}

impl fmt::Debug for OrderScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrderScheme{:?}", self.weight_strings())
    }
}

impl Serialize for OrderScheme {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.weight_strings().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mi(v: &[i64]) -> MultiIndex {
        MultiIndex::from(v)
    }

    #[test]
    fn sign_examples() {
        let s = OrderScheme::all_ones(2);
        assert_eq!(s.order_sign(&mi(&[0, 0])).unwrap(), Sign::Zero);
        assert_eq!(s.order_sign(&mi(&[2, -1])).unwrap(), Sign::Positive);
        assert_eq!(s.order_sign(&mi(&[1, -1])).unwrap(), Sign::Positive);
        assert_eq!(s.order_sign(&mi(&[-1, 1])).unwrap(), Sign::Negative);
    }

    #[test]
    fn theta_examples() {
        let s = OrderScheme::all_ones(2);
        assert_eq!(s.theta(&mi(&[0, 0])).unwrap(), 0);
        assert_eq!(s.theta(&mi(&[1, 0])).unwrap(), 1);
        assert_eq!(s.theta(&mi(&[-1, 0])).unwrap(), 0);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let s = OrderScheme::all_ones(2);
        assert!(matches!(
            s.theta(&mi(&[1, 0, 0])),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn fractional_weights_are_scaled() {
        let s = OrderScheme::new(vec![rational::ratio(1, 2), rational::ratio(-1, 3)]).unwrap();
        // 1/2*1 - 1/3*2 < 0
        assert_eq!(s.order_sign(&mi(&[1, 2])).unwrap(), Sign::Negative);
        // 1/2*2 - 1/3*3 = 0, tiebreak on first coordinate
        assert_eq!(s.order_sign(&mi(&[2, 3])).unwrap(), Sign::Positive);
    }

    #[test]
    fn box_enumeration() {
        let b = mode_box(2, 1);
        assert_eq!(b.len(), 9);
        assert_eq!(b[0], mi(&[-1, -1]));
        assert_eq!(b[8], mi(&[1, 1]));
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(mode_box(3, 0), vec![mi(&[0, 0, 0])]);
    }

    #[test]
    fn parse_and_display() {
        let m = MultiIndex::parse("(1,-2, 3)").unwrap();
        assert_eq!(m, mi(&[1, -2, 3]));
        assert_eq!(m.to_string(), "(1,-2,3)");
        assert!(MultiIndex::parse("1,x").is_err());
    }

    fn schemes() -> Vec<OrderScheme> {
        vec![
            OrderScheme::all_ones(3),
            OrderScheme::ramp(3),
            OrderScheme::new(vec![rational::int(0), rational::ratio(3, 2), rational::int(-1)]).unwrap(),
        ]
    }

    #[test]
    fn exhaustive_box_properties() {
        let b = mode_box(3, 2);
        for s in schemes() {
            for m in &b {
                let sm = s.sign_unchecked(m);
                assert_eq!(sm == Sign::Zero, m.is_zero());
                assert_eq!(s.sign_unchecked(&-m), sm.flip());
                if !m.is_zero() {
                    assert_eq!(s.theta(m).unwrap() + s.theta(&-m).unwrap(), 1);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn positives_closed_under_addition(
            a in proptest::collection::vec(-6i64..=6, 3),
            b in proptest::collection::vec(-6i64..=6, 3),
        ) {
            let (a, b) = (MultiIndex::from(a), MultiIndex::from(b));
            for s in schemes() {
                if s.is_positive(&a) && s.is_positive(&b) {
                    prop_assert!(s.is_positive(&(&a + &b)));
                }
            }
        }

        #[test]
        fn addition_is_a_group(
            a in proptest::collection::vec(-50i64..=50, 2),
            b in proptest::collection::vec(-50i64..=50, 2),
            c in proptest::collection::vec(-50i64..=50, 2),
        ) {
            let (a, b, c) = (MultiIndex::from(a), MultiIndex::from(b), MultiIndex::from(c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a + &(-&a)).is_zero());
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
        }
    }
}
