//! Heisenberg modes `Φ(b_i)(m)` and the generator fields `ρ(E_r)`, `ρ(F_r)`, `ρ(H_r)`.
//!
//! Fields are built once per generator as mode-independent term lists and
//! cached; a mode is a field paired with a [`MultiIndex`].
//!
//! The `ρ(F_0)` field is a sum over chains `1 = q_1 < q_2 < … < q_i`, each
//! contributing the product `a*_{q_1 q_2} a*_{q_2 q_3} ⋯`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};

use crate::cartan::CartanMatrix;
use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::kappa::KappaSpec;
use crate::lattice::{MultiIndex, OrderScheme};
use crate::operators::{apply_summable, commutator_apply, Field, PrimitiveOp, ProductTerm, SeriesFactor, SummableOperator};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationParams {
    n: usize,
    scheme: OrderScheme,
    spec: KappaSpec,
    lambda: Vec<Rational>,
}

impl RealizationParams {
    /// Checks `n ≥ 2`, `n+1` values of `λ`, matching dimensions and orthogonality on the κ support.
    pub fn new(n: usize, scheme: OrderScheme, spec: KappaSpec, lambda: Vec<Rational>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Contract(format!("rank n must be at least 2, got {n}")));
        }
        if lambda.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                found: lambda.len(),
            });
        }
        if spec.dim() != scheme.dim() {
            return Err(Error::DimensionMismatch {
                expected: scheme.dim(),
                found: spec.dim(),
            });
        }
        for (m, row) in spec.support() {
            if !m.pair(row).is_zero() {
                return Err(Error::InvalidKappa(format!("orthogonality fails at {m}")));
            }
        }
        Ok(RealizationParams { n, scheme, spec, lambda })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N + 1`, the number of torus variables.
    pub fn dim(&self) -> usize {
        self.scheme.dim()
    }

    pub fn scheme(&self) -> &OrderScheme {
        &self.scheme
    }

    pub fn spec(&self) -> &KappaSpec {
        &self.spec
    }

    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }
}

/// Finite expansion of `Φ(b_i)(m)` into primitive operators.
///
/// For `1 ≤ i ≤ n`, with `s = m + t` over `t ∈ supp κ`, `s > 0`, and `c = Σ_p m_p κ_{t,p}`:
/// - `m < 0`: `c (∂_{y_{i-1}(s)} - ∂_{y_i(s)})` plus multiplication by `y_i(-m)`
/// - `m > 0`: `c (∂_{y_{i-1}(s)} - 2∂_{y_i(s)} + ∂_{y_{i+1}(s)})`
/// - `m = 0`: the scalar `-λ_i`
///
/// `y_0` and `y_{n+1}` do not exist and contribute nothing. `Φ(b_0) = -Σ_i Φ(b_i)`.
pub fn phi_b_terms(params: &RealizationParams, i: usize, m: &MultiIndex) -> Vec<(Rational, PrimitiveOp)> {
    let n = params.n;
    if i == 0 {
        let mut out = Vec::new();
        for r in 1..=n {
            out.extend(phi_b_terms(params, r, m).into_iter().map(|(c, op)| (-c, op)));
        }
        return out;
    }
    let scheme = &params.scheme;
    let neg_m = -m;
    let m_neg = scheme.is_positive(&neg_m);
    let m_pos = scheme.is_positive(m);
    let stencil: &[(isize, i64)] = if m_neg {
        &[(-1, 1), (0, -1)]
    } else if m_pos {
        &[(-1, 1), (0, -2), (1, 1)]
    } else {
        &[]
    };
    let mut out = Vec::new();
    for (t, row) in params.spec.support() {
        let s = m + t;
        if !scheme.is_positive(&s) {
            continue;
        }
        let c = m.pair(row);
        if c.is_zero() {
            continue;
        }
        for (shift, w) in stencil {
            let a = i as isize + shift;
            if a >= 1 && a as usize <= n {
                out.push((&c * rational::int(*w), PrimitiveOp::YDer { i: a as usize, k: s.clone() }));
            }
        }
    }
    if m_neg {
        out.push((Rational::one(), PrimitiveOp::YMul { i, k: neg_m }));
    }
    if m.is_zero() && !params.lambda[i].is_zero() {
        out.push((-&params.lambda[i], PrimitiveOp::Scalar(Rational::one())));
    }
    out
}

/// Strictly increasing chain `1 = q_1 < … < q_i`, all entries at most `n`.
/// The terminal `n + 1` is implicit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain {
    entries: Vec<usize>,
}

impl Chain {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.first() != Some(&1) || entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Contract(format!("not a chain starting at 1: {entries:?}")));
        }
        Ok(Chain { entries })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn last(&self) -> usize {
        *self.entries.last().expect("chains are nonempty")
    }

    /// Steps `(q_l, q_{l+1})` between consecutive entries.
    pub fn steps(&self) -> Vec<(usize, usize)> {
        self.entries.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Steps including the final step to `end`.
    pub fn steps_to(&self, end: usize) -> Vec<(usize, usize)> {
        let mut s = self.steps();
        s.push((self.last(), end));
        s
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainConstraint {
    None,
    LastEquals(usize),
    LastAtMost(usize),
    /// Last entry equals `last` and the entry before it is at most `penultimate`.
    PenultimateAtMostLastEquals { penultimate: usize, last: usize },
}

/// All chains with entries in `1..=n` satisfying the constraint, in lexicographic order.
pub fn chain_enumerate(n: usize, constraint: ChainConstraint) -> Vec<Chain> {
    let interior: Vec<usize> = (2..=n).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << interior.len()) {
        let mut entries = vec![1];
        entries.extend(interior.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, q)| *q));
        let last = *entries.last().unwrap();
        let keep = match constraint {
            ChainConstraint::None => true,
            ChainConstraint::LastEquals(t) => last == t,
            ChainConstraint::LastAtMost(t) => last <= t,
            ChainConstraint::PenultimateAtMostLastEquals { penultimate, last: t } => {
                entries.len() >= 2 && last == t && entries[entries.len() - 2] <= penultimate
            }
        };
        if keep {
            out.push(Chain { entries });
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    E(usize),
    F(usize),
    H(usize),
    /// The Heisenberg field `Φ(b_i)`.
    B(usize),
}

impl Generator {
    pub fn index(&self) -> usize {
        match *self {
            Generator::E(r) | Generator::F(r) | Generator::H(r) | Generator::B(r) => r,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::E(r) => write!(f, "E_{r}"),
            Generator::F(r) => write!(f, "F_{r}"),
            Generator::H(r) => write!(f, "H_{r}"),
            Generator::B(r) => write!(f, "b_{r}"),
        }
    }
}

/// Deliberate corruptions used to show that the relation suites are not vacuous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mutation {
    #[default]
    None,
    /// Flips the sign of the `κ·D a*_{r,r+1}` term of `ρ(E_r)`.
    FlipKappaD,
}

/// Generator fields for one parameter set, with a concurrent field cache.
#[derive(Debug)]
pub struct Realization {
    params: RealizationParams,
    cartan: CartanMatrix,
    mutation: Mutation,
    cache: RwLock<HashMap<Generator, Arc<Field>>>,
}

impl Realization {
    pub fn new(params: RealizationParams) -> Result<Self> {
        Self::with_mutation(params, Mutation::None)
    }

    pub fn with_mutation(params: RealizationParams, mutation: Mutation) -> Result<Self> {
        let cartan = CartanMatrix::new(params.n)?;
        Ok(Realization {
            params,
            cartan,
            mutation,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn params(&self) -> &RealizationParams {
        &self.params
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn field(&self, g: Generator) -> Result<Arc<Field>> {
        if g.index() > self.params.n {
            return Err(Error::IndexOutOfRange {
                what: "generator",
                index: g.index(),
                max: self.params.n,
            });
        }
        if let Some(f) = self.cache.read().expect("field cache poisoned").get(&g) {
            return Ok(f.clone());
        }
        let built = Arc::new(self.build(g)?);
        let mut w = self.cache.write().expect("field cache poisoned");
        Ok(w.entry(g).or_insert(built).clone())
    }

    pub fn mode(&self, g: Generator, m: &MultiIndex) -> Result<SummableOperator> {
        m.check_dim(self.params.dim())?;
        Ok(SummableOperator::new(self.field(g)?, m.clone()))
    }

    pub fn phi_b_mode(&self, i: usize, m: &MultiIndex) -> Result<SummableOperator> {
        self.mode(Generator::B(i), m)
    }

    pub fn rho_e(&self, r: usize, m: &MultiIndex) -> Result<SummableOperator> {
        self.mode(Generator::E(r), m)
    }

    pub fn rho_f(&self, r: usize, m: &MultiIndex) -> Result<SummableOperator> {
        self.mode(Generator::F(r), m)
    }

    pub fn rho_h(&self, r: usize, m: &MultiIndex) -> Result<SummableOperator> {
        self.mode(Generator::H(r), m)
    }

    pub fn apply(&self, op: &SummableOperator, v: &FockVector) -> FockVector {
        apply_summable(op, v, &self.params)
    }

    pub fn commutator(&self, a: &SummableOperator, b: &SummableOperator, v: &FockVector) -> FockVector {
        commutator_apply(a, b, v, &self.params)
    }

    /// Debug listing of a mode's term list.
    pub fn dump(&self, g: Generator, m: &MultiIndex) -> Result<String> {
        let op = self.mode(g, m)?;
        let mut s = format!("rho({g})({m}): {} terms\n", op.field.len());
        for t in op.field.terms() {
            s.push_str("  ");
            s.push_str(&t.to_string());
            s.push('\n');
        }
        Ok(s)
    }

    fn build(&self, g: Generator) -> Result<Field> {
        let n = self.params.n;
        let terms = match g {
            Generator::E(r) => self.e_terms(r)?,
            Generator::F(r) => f_terms(n, r)?,
            Generator::H(0) => {
                let mut all = Vec::new();
                for r in 1..=n {
                    all.extend(h_terms(n, r)?.iter().map(ProductTerm::negated));
                }
                all
            }
            Generator::H(r) => h_terms(n, r)?,
            Generator::B(0) => (1..=n)
                .map(|r| ProductTerm::new(-Rational::one(), vec![SeriesFactor::PhiB(r)]))
                .collect::<Result<_>>()?,
            Generator::B(r) => vec![ProductTerm::new(Rational::one(), vec![SeriesFactor::PhiB(r)])?],
        };
        Field::new(n, terms)
    }

    fn e_terms(&self, r: usize) -> Result<Vec<ProductTerm>> {
        use SeriesFactor::*;
        let n = self.params.n;
        let mut b = TermBuilder::default();
        if r == 0 {
            b.push(-1, vec![A(1, n + 1)])?;
            return Ok(b.0);
        }
        b.push(1, vec![A(r, r + 1), AStar(r, r + 1), AStar(r, r + 1)])?;
        for j in r + 2..=n + 1 {
            b.push(-1, vec![A(r + 1, j), AStar(r, j)])?;
        }
        for j in 1..r {
            b.push(1, vec![A(j, r), AStar(j, r + 1)])?;
        }
        for j in r + 2..=n + 1 {
            b.push(1, vec![A(r, j), AStar(r, j), AStar(r, r + 1)])?;
            b.push(-1, vec![A(r + 1, j), AStar(r + 1, j), AStar(r, r + 1)])?;
        }
        b.push(1, vec![AStar(r, r + 1), PhiB(r)])?;
        let sign = match self.mutation {
            Mutation::None => 1,
            Mutation::FlipKappaD => -1,
        };
        b.push(sign, vec![KappaDAStar(r, r + 1)])?;
        Ok(b.0)
    }
}

#[derive(Default)]
struct TermBuilder(Vec<ProductTerm>);

impl TermBuilder {
    fn push(&mut self, c: i64, factors: Vec<SeriesFactor>) -> Result<()> {
        self.0.push(ProductTerm::new(rational::int(c), factors)?);
        Ok(())
    }
}

fn chain_factors(steps: &[(usize, usize)]) -> Vec<SeriesFactor> {
    steps.iter().map(|&(a, b)| SeriesFactor::AStar(a, b)).collect()
}

fn f_terms(n: usize, r: usize) -> Result<Vec<ProductTerm>> {
    use SeriesFactor::*;
    let mut b = TermBuilder::default();
    if r > 0 {
        b.push(1, vec![A(r, r + 1)])?;
        for j in 1..r {
            b.push(-1, vec![A(j, r + 1), AStar(j, r)])?;
        }
        return Ok(b.0);
    }
    // block A: -a_{rj} · a*-chain from 1 to j · a*_{r,n+1}, penultimate chain entry ≤ r
    for r in 1..=n {
        for j in r + 1..=n + 1 {
            let paths: Vec<Vec<(usize, usize)>> = if j == n + 1 {
                chain_enumerate(n, ChainConstraint::LastAtMost(r))
                    .iter()
                    .map(|c| c.steps_to(n + 1))
                    .collect()
            } else {
                chain_enumerate(n, ChainConstraint::PenultimateAtMostLastEquals { penultimate: r, last: j })
                    .iter()
                    .map(Chain::steps)
                    .collect()
            };
            for steps in paths {
                let mut fs = vec![A(r, j)];
                fs.extend(chain_factors(&steps));
                fs.push(AStar(r, n + 1));
                b.push(-1, fs)?;
            }
        }
    }
    // block B: -(a*-chain from 1 to n+1) · Φ(b_r), last interior entry ≤ r
    for r in 1..=n {
        for c in chain_enumerate(n, ChainConstraint::LastAtMost(r)) {
            let mut fs = chain_factors(&c.steps_to(n + 1));
            fs.push(PhiB(r));
            b.push(-1, fs)?;
        }
    }
    // block C: -(a*-chain from 1 to r) · κ·D a*_{r,n+1}
    for r in 1..=n {
        for c in chain_enumerate(n, ChainConstraint::LastEquals(r)) {
            let mut fs = chain_factors(&c.steps());
            fs.push(KappaDAStar(r, n + 1));
            b.push(-1, fs)?;
        }
    }
    Ok(b.0)
}

fn h_terms(n: usize, r: usize) -> Result<Vec<ProductTerm>> {
    use SeriesFactor::*;
    let mut b = TermBuilder::default();
    b.push(2, vec![A(r, r + 1), AStar(r, r + 1)])?;
    for i in 1..r {
        b.push(1, vec![A(i, r + 1), AStar(i, r + 1)])?;
        b.push(-1, vec![A(i, r), AStar(i, r)])?;
    }
    for j in r + 2..=n + 1 {
        b.push(1, vec![A(r, j), AStar(r, j)])?;
        b.push(-1, vec![A(r + 1, j), AStar(r + 1, j)])?;
    }
    b.push(1, vec![PhiB(r)])?;
    Ok(b.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::VarKey;
    use crate::lattice::mode_box;
    use crate::rational::int;

    fn mi(v: &[i64]) -> MultiIndex {
        MultiIndex::from(v)
    }

    fn realization(n: usize) -> Realization {
        let lambda = (0..=n as i64).map(|k| int(k + 1)).collect();
        let params = RealizationParams::new(
            n,
            OrderScheme::all_ones(2),
            KappaSpec::point_at_zero(vec![int(3), int(-2)]).unwrap(),
            lambda,
        )
        .unwrap();
        Realization::new(params).unwrap()
    }

    fn entries(cs: &[Chain]) -> Vec<Vec<usize>> {
        cs.iter().map(|c| c.entries().to_vec()).collect()
    }

    #[test]
    fn chain_examples() {
        assert_eq!(entries(&chain_enumerate(2, ChainConstraint::None)), vec![vec![1], vec![1, 2]]);
        assert_eq!(chain_enumerate(3, ChainConstraint::None).len(), 4);
        assert_eq!(entries(&chain_enumerate(3, ChainConstraint::LastEquals(2))), vec![vec![1, 2]]);
        assert_eq!(
            entries(&chain_enumerate(
                4,
                ChainConstraint::PenultimateAtMostLastEquals { penultimate: 2, last: 4 }
            )),
            vec![vec![1, 2, 4], vec![1, 4]]
        );
        assert!(Chain::new(vec![2, 3]).is_err());
        assert!(Chain::new(vec![1, 3, 3]).is_err());
    }

    #[test]
    fn phi_b_examples() {
        let re = realization(2);
        let p = re.params();
        let one = FockVector::one();
        let zero = mi(&[0, 0]);
        for i in 1..=2 {
            let v = re.apply(&re.phi_b_mode(i, &zero).unwrap(), &one);
            assert_eq!(v, one.scaled(&-&p.lambda()[i]));
        }
        let m = mi(&[-1, 0]);
        let v = re.apply(&re.phi_b_mode(1, &m).unwrap(), &one);
        assert_eq!(v, FockVector::var(VarKey::y(1, mi(&[1, 0]))));
        // m > 0 on y_1(m): only ∂_{y_1} and ∂_{y_2} survive, coefficient -2 Σ m_p c_p
        let m = mi(&[1, 1]);
        let v = re.apply(&re.phi_b_mode(1, &m).unwrap(), &FockVector::var(VarKey::y(1, m.clone())));
        assert_eq!(v, one.scaled(&int(-2 * (3 - 2))));
    }

    #[test]
    fn vacuum_examples() {
        let re = realization(3);
        let one = FockVector::one();
        let zero = mi(&[0, 0]);
        for m in mode_box(2, 1) {
            let e0 = re.apply(&re.rho_e(0, &m).unwrap(), &one);
            assert_eq!(e0, FockVector::var(VarKey::x(1, 4, m.clone())));
            let f1 = re.apply(&re.rho_f(1, &m).unwrap(), &one);
            assert_eq!(f1, FockVector::var(VarKey::x(1, 2, m.clone())).scaled(&int(-1)));
            assert!(re.apply(&re.rho_f(0, &m).unwrap(), &one).is_zero());
            for r in 1..=3 {
                assert_eq!(
                    re.apply(&re.rho_h(r, &m).unwrap(), &one),
                    re.apply(&re.phi_b_mode(r, &m).unwrap(), &one)
                );
            }
        }
        for r in 1..=3 {
            assert!(re.apply(&re.rho_e(r, &zero).unwrap(), &one).is_zero());
            assert_eq!(re.apply(&re.rho_h(r, &zero).unwrap(), &one), one.scaled(&-&re.params().lambda()[r]));
        }
    }

    #[test]
    fn h_zero_is_negated_sum() {
        let re = realization(3);
        let v = crate::fock::random_vector(&crate::fock::RandomVectorConfig::new(
            3,
            OrderScheme::all_ones(2),
            1,
            5,
        ));
        for m in mode_box(2, 1) {
            let mut total = FockVector::zero();
            for r in 0..=3 {
                total.absorb(re.apply(&re.rho_h(r, &m).unwrap(), &v));
            }
            assert!(total.is_zero());
        }
    }

    /// Independent count of the ρ(F_0) summands via subsets of interior indices.
    fn f0_count(n: usize) -> usize {
        let mut count = 0;
        for r in 1..=n {
            for j in r + 1..=n + 1 {
                // paths 1 -> … -> j whose second-to-last vertex is ≤ r
                for mask in 0u32..(1 << (j.saturating_sub(2))) {
                    let mut path: Vec<usize> = vec![1];
                    path.extend((2..j).filter(|q| mask >> (q - 2) & 1 == 1));
                    if *path.last().unwrap() <= r {
                        count += 1;
                    }
                }
            }
            count += (0u32..(1 << (n - 1)))
                .filter(|mask| {
                    let last = (2..=n).filter(|q| mask >> (q - 2) & 1 == 1).max().unwrap_or(1);
                    last <= r
                })
                .count();
            count += 1 << (r.saturating_sub(2));
        }
        count
    }

    #[test]
    fn term_counts() {
        for n in 2..=5 {
            let re = realization(n);
            let zero = MultiIndex::zero(2);
            for r in 1..=n {
                let e = re.field(Generator::E(r)).unwrap().len();
                let plus = n + 1 - (r + 1);
                assert_eq!(e, 1 + 3 * plus + (r - 1) + 2, "E_{r}, n={n}");
                assert_eq!(re.field(Generator::F(r)).unwrap().len(), r);
                assert_eq!(re.field(Generator::H(r)).unwrap().len(), 2 + 2 * (r - 1) + 2 * plus);
            }
            assert_eq!(re.field(Generator::F(0)).unwrap().len(), f0_count(n), "n={n}");
            assert!(re.dump(Generator::F(0), &zero).unwrap().starts_with("rho(F_0)((0,0))"));
        }
        // n = 2 by hand: block A has (1,2),(1,3),(2,3)x2 -> 4, block B 1+2, block C 1+1
        assert_eq!(realization(2).field(Generator::F(0)).unwrap().len(), 9);
    }

    #[test]
    fn index_errors() {
        let re = realization(2);
        assert!(re.rho_e(3, &MultiIndex::zero(2)).is_err());
        assert!(re.rho_e(1, &MultiIndex::zero(3)).is_err());
        assert!(RealizationParams::new(1, OrderScheme::all_ones(2), KappaSpec::new(2), vec![int(0); 2]).is_err());
        assert!(RealizationParams::new(2, OrderScheme::all_ones(2), KappaSpec::new(2), vec![int(0); 2]).is_err());
    }
}
