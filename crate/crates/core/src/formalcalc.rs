//! Formal δ-calculus in several variables.
//!
//! `δ(z/w) = Π_i Σ_k z_i^k w_i^{-k}` and `∂^{(j)} = Π_i ∂_{w_i}^{j_i} / j_i!`.
//! A [`DeltaExpr`] is a finite sum `Σ_j c_j(z, w) ∂^{(j)} δ(z/w)`, kept in a
//! canonical form where the coefficients no longer depend on the active `z`
//! variables. Canonicalization uses `z^a ∂^{(j)}δ = ∂^{(j)}(w^a δ)` and
//! Leibniz:
//!
//! `z^a ∂^{(j)}δ = Σ_{k ≤ j} Π_i binom(a_i, k_i) w^{a-k} ∂^{(j-k)}δ`,
//!
//! valid for negative exponents as well. Every step lowers either the
//! derivative order or the `z`-degree, so it terminates, and the normal form
//! is unique.
//!
//! Residues follow from the series: `Res_{z_i} ∂^{(j)}_{w_i} δ(z_i/w_i)` is
//! `w_i` for `j = 0`, `1` for `j = 1` and `0` for `j ≥ 2`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::MultiIndex;
use crate::rational::{self, Rational};

/// Generalized binomial coefficient `binom(a, k)` for any integer `a` and `k ≥ 0`.
pub fn binomial(a: i64, k: i64) -> Rational {
    if k < 0 {
        return Rational::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for t in 0..k {
        num *= BigInt::from(a - t);
        den *= BigInt::from(t + 1);
    }
    Rational::new(num, den)
}

fn factorial(k: i64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, t| acc * BigInt::from(t))
}

/// Laurent polynomial in `z_0..z_k` and `w_0..w_k`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<(MultiIndex, MultiIndex), Rational>,
}

impl LaurentPoly {
    pub fn zero(dim: usize) -> Self {
        LaurentPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::term(dim, MultiIndex::zero(dim), MultiIndex::zero(dim), Rational::one())
    }

    /// `c · z^a w^b`.
    pub fn term(dim: usize, a: MultiIndex, b: MultiIndex, c: Rational) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(a, b, c);
        p
    }

    pub fn z(dim: usize, i: usize) -> Self {
        Self::term(dim, MultiIndex::unit(dim, i), MultiIndex::zero(dim), Rational::one())
    }

    pub fn w(dim: usize, i: usize) -> Self {
        Self::term(dim, MultiIndex::zero(dim), MultiIndex::unit(dim, i), Rational::one())
    }

    /// `z_i - w_i`.
    pub fn z_minus_w(dim: usize, i: usize) -> Self {
        Self::z(dim, i).sub(&Self::w(dim, i))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &MultiIndex, &Rational)> {
        self.terms.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn coefficient(&self, a: &MultiIndex, b: &MultiIndex) -> Rational {
        self.terms
            .get(&(a.clone(), b.clone()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, a: MultiIndex, b: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.scaled(&-Rational::one()))
    }

    pub fn scaled(&self, c: &Rational) -> LaurentPoly {
        let mut out = Self::zero(self.dim);
        for ((a, b), x) in &self.terms {
            out.add_term(a.clone(), b.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = Self::zero(self.dim);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                out.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> LaurentPoly {
        (0..e).fold(Self::one(self.dim), |acc, _| acc.mul(self))
    }

    /// True when no term involves any `z` variable.
    pub fn is_w_only(&self) -> bool {
        self.terms.keys().all(|(a, _)| a.is_zero())
    }

    /// `Res_{z_i}`: keeps the terms with `z_i`-exponent `-1` and drops `z_i`.
    pub fn residue(&self, i: usize) -> LaurentPoly {
        let mut out = Self::zero(self.dim);
        for ((a, b), c) in &self.terms {
            if a.coords()[i] == -1 {
                let mut a2 = a.coords().to_vec();
                a2[i] = 0;
                out.add_term(MultiIndex::from(a2), b.clone(), c.clone());
            }
        }
        out
    }

    /// `Res_z` in all variables at once: the coefficient of `z^{(-1,…,-1)}`, as a polynomial in `w`.
    pub fn residue_all(&self) -> LaurentPoly {
        let target = MultiIndex::new(vec![-1; self.dim]);
        let mut out = Self::zero(self.dim);
        for ((a, b), c) in &self.terms {
            if *a == target {
                out.add_term(MultiIndex::zero(self.dim), b.clone(), c.clone());
            }
        }
        out
    }

    /// Substitutes `z = 1` (and keeps `w`).
    pub fn at_z_one(&self) -> LaurentPoly {
        let mut out = Self::zero(self.dim);
        for ((_, b), c) in &self.terms {
            out.add_term(MultiIndex::zero(self.dim), b.clone(), c.clone());
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b), c)| format!("{}*z^{a}*w^{b}", rational::to_string(c)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `Σ_j c_j ∂^{(j)} Π_{i active} δ(z_i/w_i)`.
///
/// Variables start active; a residue in an active variable integrates its
/// δ-factor away and marks it inactive.
#[derive(Clone, PartialEq, Eq)]
pub struct DeltaExpr {
    dim: usize,
    active: Vec<bool>,
    parts: BTreeMap<MultiIndex, LaurentPoly>,
}

impl DeltaExpr {
    pub fn zero(dim: usize) -> Self {
        DeltaExpr {
            dim,
            active: vec![true; dim],
            parts: BTreeMap::new(),
        }
    }

    /// `δ(z/w)`.
    pub fn delta(dim: usize) -> Self {
        Self::derivative(dim, MultiIndex::zero(dim))
    }

    /// `∂^{(j)} δ(z/w)`.
    pub fn derivative(dim: usize, j: MultiIndex) -> Self {
        Self::with_coefficient(LaurentPoly::one(dim), j).expect("valid order")
    }

    /// `c · ∂^{(j)} δ(z/w)`, canonicalized.
    pub fn with_coefficient(c: LaurentPoly, j: MultiIndex) -> Result<Self> {
        let dim = c.dim();
        j.check_dim(dim)?;
        if j.coords().iter().any(|x| *x < 0) {
            return Err(Error::Contract(format!("negative derivative order {j}")));
        }
        let mut d = Self::zero(dim);
        d.accumulate(&j, &c);
        Ok(d)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_active(&self, i: usize) -> bool {
        self.active[i]
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// Canonical parts `(j, c_j)`.
    pub fn parts(&self) -> impl Iterator<Item = (&MultiIndex, &LaurentPoly)> {
        self.parts.iter()
    }

    pub fn part(&self, j: &MultiIndex) -> LaurentPoly {
        self.parts.get(j).cloned().unwrap_or_else(|| LaurentPoly::zero(self.dim))
    }

    pub fn add(&self, other: &DeltaExpr) -> Result<DeltaExpr> {
        if self.dim != other.dim || self.active != other.active {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut out = self.clone();
        for (j, c) in &other.parts {
            out.accumulate(j, c);
        }
        Ok(out)
    }

    /// Adds `c ∂^{(j)}δ`, reducing the active `z`-dependence of `c`.
    fn accumulate(&mut self, j: &MultiIndex, c: &LaurentPoly) {
        for (a, b, x) in c.terms() {
            // split z^a into active (reduced) and inactive (kept) parts
            let mut a_act = vec![0i64; self.dim];
            let mut a_rest = vec![0i64; self.dim];
            for i in 0..self.dim {
                if self.active[i] {
                    a_act[i] = a.coords()[i];
                } else {
                    a_rest[i] = a.coords()[i];
                }
            }
            let a_rest = MultiIndex::from(a_rest);
            for k in lower_orders(j.coords()) {
                let mut coef = x.clone();
                for i in 0..self.dim {
                    coef *= binomial(a_act[i], k[i]);
                    if coef.is_zero() {
                        break;
                    }
                }
                if coef.is_zero() {
                    continue;
                }
                let w_exp: Vec<i64> = (0..self.dim).map(|i| b.coords()[i] + a_act[i] - k[i]).collect();
                let order: Vec<i64> = (0..self.dim).map(|i| j.coords()[i] - k[i]).collect();
                let entry = self
                    .parts
                    .entry(MultiIndex::from(order.clone()))
                    .or_insert_with(|| LaurentPoly::zero(self.dim));
                entry.add_term(a_rest.clone(), MultiIndex::from(w_exp), coef);
                if entry.is_zero() {
                    self.parts.remove(&MultiIndex::from(order));
                }
            }
        }
    }

    /// `Res_{z_i}`. For an active variable this integrates out its δ-factor.
    pub fn residue(&self, i: usize) -> Result<DeltaExpr> {
        if i >= self.dim {
            return Err(Error::IndexOutOfRange {
                what: "variable",
                index: i,
                max: self.dim - 1,
            });
        }
        let mut out = DeltaExpr {
            dim: self.dim,
            active: self.active.clone(),
            parts: BTreeMap::new(),
        };
        if !self.active[i] {
            for (j, c) in &self.parts {
                let r = c.residue(i);
                if !r.is_zero() {
                    out.parts.insert(j.clone(), r);
                }
            }
            return Ok(out);
        }
        out.active[i] = false;
        for (j, c) in &self.parts {
            let ji = j.coords()[i];
            // Res_z ∂^{(j)}_w δ(z/w) = binom(1, j) w^{1-j}
            let factor = binomial(1, ji);
            if factor.is_zero() {
                continue;
            }
            let mut shift = vec![0i64; self.dim];
            shift[i] = 1 - ji;
            let mono = LaurentPoly::term(self.dim, MultiIndex::zero(self.dim), MultiIndex::from(shift), factor);
            let mut j2 = j.coords().to_vec();
            j2[i] = 0;
            let j2 = MultiIndex::from(j2);
            let prev = out.parts.remove(&j2).unwrap_or_else(|| LaurentPoly::zero(self.dim));
            let sum = prev.add(&c.mul(&mono));
            if !sum.is_zero() {
                out.parts.insert(j2, sum);
            }
        }
        Ok(out)
    }

    /// Iterated residue over every variable; the result is a polynomial in `w`.
    pub fn residue_all(&self) -> LaurentPoly {
        let mut d = self.clone();
        for i in 0..self.dim {
            d = d.residue(i).expect("index in range");
        }
        d.part(&MultiIndex::zero(self.dim))
    }

    /// Expands to the coefficient of `z^a w^b` for `a` in a window; used by series oracles.
    pub fn series_coefficient(&self, a: &MultiIndex, b: &MultiIndex) -> Rational {
        // ∂^{(j)}_w δ(z/w) = Σ_p binom(-p, j) z^p w^{-p-j} per active variable
        let mut total = Rational::zero();
        for (j, c) in &self.parts {
            for (ca, cb, x) in c.terms() {
                let mut coef = x.clone();
                for i in 0..self.dim {
                    let (ai, bi) = (a.coords()[i] - ca.coords()[i], b.coords()[i] - cb.coords()[i]);
                    if self.active[i] {
                        // need z^p w^{-p-j}: p = ai, -p - j = bi
                        if -ai - j.coords()[i] != bi {
                            coef = Rational::zero();
                            break;
                        }
                        coef *= binomial(-ai, j.coords()[i]);
                    } else if ai != 0 || bi != 0 {
                        coef = Rational::zero();
                        break;
                    }
                    if coef.is_zero() {
                        break;
                    }
                }
                total += coef;
            }
        }
        total
    }
}

impl fmt::Display for DeltaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.parts.iter().map(|(j, c)| format!("({c})*d^{j}delta")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for DeltaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn lower_orders(j: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &ji in j {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=ji).map(move |k| {
                    let mut p = prefix.clone();
                    p.push(k);
                    p
                })
            })
            .collect();
    }
    out
}

/// `f · d`, returned in canonical form.
pub fn multiply_into_delta(f: &LaurentPoly, d: &DeltaExpr) -> Result<DeltaExpr> {
    if f.dim() != d.dim() {
        return Err(Error::DimensionMismatch {
            expected: d.dim(),
            found: f.dim(),
        });
    }
    let mut out = DeltaExpr {
        dim: d.dim,
        active: d.active.clone(),
        parts: BTreeMap::new(),
    };
    for (j, c) in d.parts() {
        out.accumulate(j, &f.mul(c));
    }
    Ok(out)
}

/// `f(z) δ(z) = f(1) δ(z)` for the point distribution `δ(z) = Σ_m z^m`.
/// Returns the coefficient of `δ(z)`; `f` must not involve `w`.
pub fn multiply_into_point_delta(f: &LaurentPoly) -> Result<Rational> {
    if f.terms().any(|(_, b, _)| !b.is_zero()) {
        return Err(Error::Contract("point delta takes a z-only polynomial".into()));
    }
    Ok(f.terms().map(|(_, _, c)| c.clone()).sum())
}

/// Polynomial in `λ` with coefficients in `w`.
#[derive(Clone, PartialEq, Eq)]
pub struct LambdaPoly {
    dim: usize,
    terms: BTreeMap<MultiIndex, LaurentPoly>,
}

impl LambdaPoly {
    pub fn zero(dim: usize) -> Self {
        LambdaPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// `λ^{(j)} = λ^j / j!`.
    pub fn divided_power(j: &MultiIndex) -> Self {
        let dim = j.dim();
        let fact: BigInt = j.coords().iter().map(|&x| factorial(x)).product();
        let mut p = Self::zero(dim);
        p.terms.insert(
            j.clone(),
            LaurentPoly::one(dim).scaled(&Rational::new(BigInt::one(), fact)),
        );
        p
    }

    /// Coefficient of the plain power `λ^j`.
    pub fn coefficient(&self, j: &MultiIndex) -> LaurentPoly {
        self.terms.get(j).cloned().unwrap_or_else(|| LaurentPoly::zero(self.dim))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &LaurentPoly)> {
        self.terms.iter()
    }

    fn add_term(&mut self, j: MultiIndex, c: LaurentPoly) {
        let prev = self.terms.remove(&j).unwrap_or_else(|| LaurentPoly::zero(self.dim));
        let sum = prev.add(&c);
        if !sum.is_zero() {
            self.terms.insert(j, sum);
        }
    }
}

impl fmt::Debug for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(j, c)| format!("({c})*lambda^{j}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Σ_j c_j(w) ∂^{(j)} δ ↦ Σ_j c_j(w) λ^{(j)}`.
pub fn fourier_lambda(d: &DeltaExpr) -> LambdaPoly {
    let mut out = LambdaPoly::zero(d.dim());
    for (j, c) in d.parts() {
        let fact: BigInt = j.coords().iter().map(|&x| factorial(x)).product();
        out.add_term(j.clone(), c.scaled(&Rational::new(BigInt::one(), fact)));
    }
    out
}
