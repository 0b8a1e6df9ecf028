//! The Fock space `C[x] ⊗ C[y]` as exact sparse polynomials.
//!
//! Variables are `x_{ij}(m)` for `1 ≤ i < j ≤ n+1` and `y_i(k)` for
//! `1 ≤ i ≤ n`, `k > 0`. Grading convention: `deg x_{ij}(q) = -q`,
//! `deg y_i(k) = k`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use smallvec::SmallVec;

use crate::lattice::{mode_box, MultiIndex, OrderScheme};
use crate::rational::{self, Rational};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKey {
    X { i: usize, j: usize, m: MultiIndex },
    Y { i: usize, k: MultiIndex },
}

impl VarKey {
    pub fn x(i: usize, j: usize, m: MultiIndex) -> Self {
        VarKey::X { i, j, m }
    }

    pub fn y(i: usize, k: MultiIndex) -> Self {
        VarKey::Y { i, k }
    }

    pub fn degree(&self) -> MultiIndex {
        match self {
            VarKey::X { m, .. } => -m,
            VarKey::Y { k, .. } => k.clone(),
        }
    }
}

impl fmt::Display for VarKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarKey::X { i, j, m } => write!(f, "x[{i},{j}]{m}"),
            VarKey::Y { i, k } => write!(f, "y[{i}]{k}"),
        }
    }
}

impl fmt::Debug for VarKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Product of variables with positive exponents, sorted by key.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(SmallVec<[(VarKey, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (VarKey, u32)>) -> Self {
        let mut m = Monomial::one();
        for (k, e) in factors {
            m = m.times(&k, e);
        }
        m
    }

    pub fn factors(&self) -> &[(VarKey, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, key: &VarKey) -> u32 {
        match self.0.binary_search_by(|(k, _)| k.cmp(key)) {
            Ok(pos) => self.0[pos].1,
            Err(_) => 0,
        }
    }

    /// `self · key^e`.
    pub fn times(&self, key: &VarKey, e: u32) -> Monomial {
        let mut out = self.clone();
        if e == 0 {
            return out;
        }
        match out.0.binary_search_by(|(k, _)| k.cmp(key)) {
            Ok(pos) => out.0[pos].1 += e,
            Err(pos) => out.0.insert(pos, (key.clone(), e)),
        }
        out
    }

    /// Lowers the exponent of the factor at `pos` by one.
    pub fn lower_at(&self, pos: usize) -> Monomial {
        let mut out = self.clone();
        if out.0[pos].1 == 1 {
            out.0.remove(pos);
        } else {
            out.0[pos].1 -= 1;
        }
        out
    }

    pub fn degree(&self, dim: usize) -> MultiIndex {
        let mut d = vec![0i64; dim];
        for (k, e) in &self.0 {
            for (acc, c) in d.iter_mut().zip(k.degree().coords()) {
                *acc += c * i64::from(*e);
            }
        }
        MultiIndex::from(d)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (n, (k, e)) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            write!(f, "{k}")?;
            if *e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Exact sparse polynomial with rational coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct FockVector {
    terms: BTreeMap<Monomial, Rational>,
}

impl FockVector {
    pub fn zero() -> Self {
        FockVector::default()
    }

    /// The vacuum `1`.
    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut v = FockVector::zero();
        v.add_term(m, c);
        v
    }

    pub fn var(key: VarKey) -> Self {
        Self::monomial(Monomial::one().times(&key, 1), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &FockVector, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), rational::mul(x, c));
        }
    }

    /// `self += other`, consuming `other`.
    pub fn absorb(&mut self, other: FockVector) {
        if self.terms.is_empty() {
            *self = other;
            return;
        }
        for (m, x) in other.terms {
            self.add_term(m, x);
        }
    }

    pub fn scaled(&self, c: &Rational) -> FockVector {
        if c.is_zero() {
            return FockVector::zero();
        }
        FockVector {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), rational::mul(x, c))).collect(),
        }
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    /// `c · key · self`.
    pub fn mul_var(&self, key: &VarKey, c: &Rational) -> FockVector {
        if c.is_zero() {
            return FockVector::zero();
        }
        FockVector {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.times(key, 1), rational::mul(x, c)))
                .collect(),
        }
    }

    /// `∂/∂key`.
    pub fn derive(&self, key: &VarKey) -> FockVector {
        let mut out = FockVector::zero();
        for (m, x) in &self.terms {
            if let Ok(pos) = m.0.binary_search_by(|(k, _)| k.cmp(key)) {
                let e = m.0[pos].1;
                out.add_term(m.lower_at(pos), rational::mul_u32(x, e));
            }
        }
        out
    }

    /// Polynomial product.
    pub fn mul(&self, other: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut m = a.clone();
                for (k, e) in b.factors() {
                    m = m.times(k, *e);
                }
                out.add_term(m, rational::mul(x, y));
            }
        }
        out
    }

    pub fn degree(&self, dim: usize) -> Homogeneity {
        let mut it = self.terms.keys().map(|m| m.degree(dim));
        let Some(first) = it.next() else {
            return Homogeneity::Zero;
        };
        if it.all(|d| d == first) {
            Homogeneity::Homogeneous(first)
        } else {
            Homogeneity::Inhomogeneous
        }
    }

    /// Component of degree `d`.
    pub fn homogeneous_part(&self, d: &MultiIndex) -> FockVector {
        FockVector {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| &m.degree(d.dim()) == d)
                .map(|(m, x)| (m.clone(), x.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{}", rational::to_string(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", rational::to_string(&mag))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FockVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Homogeneous(MultiIndex),
    Inhomogeneous,
}

/// Parameters for [`random_vector`].
#[derive(Debug, Clone)]
pub struct RandomVectorConfig {
    pub n: usize,
    pub scheme: OrderScheme,
    /// Every variable mode is drawn from `[-radius, radius]^{N+1}`.
    pub radius: i64,
    pub max_monomials: usize,
    pub max_factors: usize,
    pub max_exponent: u32,
    pub seed: u64,
}

impl RandomVectorConfig {
    pub fn new(n: usize, scheme: OrderScheme, radius: i64, seed: u64) -> Self {
        RandomVectorConfig {
            n,
            scheme,
            radius,
            max_monomials: 3,
            max_factors: 3,
            max_exponent: 2,
            seed,
        }
    }
}

struct VarSampler {
    n: usize,
    modes: Vec<MultiIndex>,
    positives: Vec<MultiIndex>,
}

impl VarSampler {
    fn new(cfg: &RandomVectorConfig) -> Self {
        let modes = mode_box(cfg.scheme.dim(), cfg.radius);
        let positives = modes
            .iter()
            .filter(|m| cfg.scheme.is_positive(m))
            .cloned()
            .collect();
        VarSampler {
            n: cfg.n,
            modes,
            positives,
        }
    }

    fn x(&self, rng: &mut ChaCha8Rng) -> VarKey {
        let i = rng.gen_range(1..=self.n);
        let j = rng.gen_range(i + 1..=self.n + 1);
        VarKey::x(i, j, self.modes[rng.gen_range(0..self.modes.len())].clone())
    }

    fn any(&self, rng: &mut ChaCha8Rng) -> VarKey {
        if self.positives.is_empty() || rng.gen_bool(0.6) {
            self.x(rng)
        } else {
            let i = rng.gen_range(1..=self.n);
            VarKey::y(i, self.positives[rng.gen_range(0..self.positives.len())].clone())
        }
    }
}

fn random_coefficient(rng: &mut ChaCha8Rng) -> Rational {
    let num = rng.gen_range(1..=9i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
    let den = rng.gen_range(1..=3i64);
    rational::ratio(num, den)
}

/// Deterministic random vector. Every monomial has at least one variable.
pub fn random_vector(cfg: &RandomVectorConfig) -> FockVector {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sampler = VarSampler::new(cfg);
    loop {
        let mut v = FockVector::zero();
        let count = rng.gen_range(1..=cfg.max_monomials.max(1));
        for _ in 0..count {
            let nf = rng.gen_range(1..=cfg.max_factors.max(1));
            let mut m = Monomial::one();
            for _ in 0..nf {
                let e = rng.gen_range(1..=cfg.max_exponent.max(1));
                m = m.times(&sampler.any(&mut rng), e);
            }
            v.add_term(m, random_coefficient(&mut rng));
        }
        if !v.is_zero() {
            return v;
        }
    }
}

/// Deterministic random vector, homogeneous of a degree drawn from the box.
///
/// Each monomial gets random factors and then one balancing `x` variable, so
/// the balancing mode may fall outside the box.
pub fn random_homogeneous_vector(cfg: &RandomVectorConfig) -> FockVector {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let sampler = VarSampler::new(cfg);
    let dim = cfg.scheme.dim();
    let target = sampler.modes[rng.gen_range(0..sampler.modes.len())].clone();
    loop {
        let mut v = FockVector::zero();
        let count = rng.gen_range(1..=cfg.max_monomials.max(1));
        for _ in 0..count {
            let nf = rng.gen_range(0..cfg.max_factors.max(1));
            let mut m = Monomial::one();
            for _ in 0..nf {
                let e = rng.gen_range(1..=cfg.max_exponent.max(1));
                m = m.times(&sampler.any(&mut rng), e);
            }
            // deg x(q) = -q, so q = deg(rest) - target
            let q = &m.degree(dim) - &target;
            let i = rng.gen_range(1..=cfg.n);
            let j = rng.gen_range(i + 1..=cfg.n + 1);
            m = m.times(&VarKey::x(i, j, q), 1);
            v.add_term(m, random_coefficient(&mut rng));
        }
        if !v.is_zero() {
            return v;
        }
    }
}

/// Test vectors: the vacuum, a few single-variable vectors, then seeded random ones.
pub fn test_vectors(cfg: &RandomVectorConfig, count: usize) -> Vec<FockVector> {
    let dim = cfg.scheme.dim();
    let mut out = vec![FockVector::one()];
    let mut singles = vec![FockVector::var(VarKey::x(1, 2, MultiIndex::zero(dim)))];
    let unit = MultiIndex::unit(dim, 0);
    if cfg.radius >= 1 {
        singles.push(FockVector::var(VarKey::x(1, cfg.n + 1, -&unit)));
        let pos = if cfg.scheme.is_positive(&unit) { unit } else { -&unit };
        singles.push(FockVector::var(VarKey::y(1, pos)));
    }
    for s in singles {
        if out.len() < count {
            out.push(s);
        }
    }
    let mut k = 0u64;
    while out.len() < count {
        let mut c = cfg.clone();
        c.seed = cfg.seed.wrapping_mul(1_000_003).wrapping_add(k);
        out.push(random_vector(&c));
        k += 1;
    }
    out.truncate(count.max(1));
    out
}
