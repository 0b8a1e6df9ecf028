//! Bracket identities of the oscillator fields `a_ij`, `a*_ij` and their
//! quadratic normally ordered products, at mode level.
//!
//! Writing `(a_α a*_β)_m` for the mode of the product, the checks are:
//! - `a`: `[a_{α,m}, a*_{β,n}] = δ_{αβ} δ_{m+n,0}`
//! - `b`: `[(a_α a*_α)_m, (a_β a*_β)_n] = 0`
//! - `c`: `[a_{α,m}, (κ·D a*_β)_n] = δ_{αβ} Σ_p m_p κ_{-m-n,p}`, and the same with the order reversed
//! - `d` through `i`: the summed identities over chain-adjacent index pairs
//! - `c1`: `[(a_α a*_α)_p, (a_{j,s+1} a*_{js})_q]`
//! - `kdw`: `[(a_α a*_α)_m, (κ·D a*_β)_n]`

use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;

use super::report::merge_lists;
use super::{CheckConfig, CheckRecord, Failure};
use crate::error::Result;
use crate::fock::FockVector;
use crate::lattice::{mode_box, MultiIndex};
use crate::operators::{
    apply_combination, apply_summable, commutator_apply, kappa_d_astar_modes, Field, PrimitiveOp, ProductTerm,
    SeriesFactor, SummableOperator,
};
use crate::rational;
use crate::realization::RealizationParams;

pub const LEMMA_IDS: [&str; 11] = [
    "lemma.a", "lemma.b", "lemma.c", "lemma.d", "lemma.e", "lemma.f", "lemma.g", "lemma.h", "lemma.i", "lemma.c1",
    "lemma.kdw",
];

struct Ctx<'a> {
    params: &'a RealizationParams,
    n: usize,
}

type Pair = (usize, usize);

impl Ctx<'_> {
    fn op(&self, factors: Vec<SeriesFactor>, m: &MultiIndex) -> SummableOperator {
        let term = ProductTerm::new(rational::one(), factors).expect("valid product");
        SummableOperator::new(Arc::new(Field::new(self.n, vec![term]).expect("valid indices")), m.clone())
    }

    /// `(a_α a*_β)_m`
    fn prod(&self, a: Pair, b: Pair, m: &MultiIndex) -> SummableOperator {
        self.op(vec![SeriesFactor::A(a.0, a.1), SeriesFactor::AStar(b.0, b.1)], m)
    }

    fn apply(&self, op: &SummableOperator, v: &FockVector) -> FockVector {
        apply_summable(op, v, self.params)
    }

    fn br(&self, x: &SummableOperator, y: &SummableOperator, v: &FockVector) -> FockVector {
        commutator_apply(x, y, v, self.params)
    }

    fn pairs(&self) -> Vec<Pair> {
        let top = self.n + 1;
        (1..=top).flat_map(|i| (i + 1..=top).map(move |j| (i, j))).collect()
    }
}

pub fn check_lemmas(cfg: &CheckConfig) -> Result<Vec<CheckRecord>> {
    let ctx = Ctx {
        params: &cfg.params,
        n: cfg.params.n(),
    };
    let modes = mode_box(cfg.params.dim(), cfg.lemma_radius);
    let vectors = cfg.test_vectors(cfg.vectors);
    let per_vector: Vec<Vec<CheckRecord>> = vectors
        .par_iter()
        .map(|v| {
            let mut recs: Vec<CheckRecord> = LEMMA_IDS.iter().map(|id| CheckRecord::new(*id)).collect();
            for m in &modes {
                for k in &modes {
                    check_at(&ctx, v, m, k, &mut recs);
                }
            }
            recs
        })
        .collect();
    Ok(merge_lists(per_vector))
}

fn check_at(ctx: &Ctx<'_>, v: &FockVector, m: &MultiIndex, k: &MultiIndex, recs: &mut [CheckRecord]) {
    let n = ctx.n;
    let top = n + 1;
    let spec = ctx.params.spec();
    let total = m + k;
    let pairs = ctx.pairs();
    let mut record = |slot: usize, inputs: &dyn Fn() -> String, lhs: FockVector, rhs: FockVector| {
        recs[slot].check(lhs == rhs, || Failure {
            inputs: format!("{} m={m} n={k}", inputs()),
            vector: v.to_string(),
            expected: rhs.to_string(),
            actual: lhs.to_string(),
        });
    };

    for &p in &pairs {
        for &q in &pairs {
            let a = ctx.op(vec![SeriesFactor::A(p.0, p.1)], m);
            let s = ctx.op(vec![SeriesFactor::AStar(q.0, q.1)], k);
            let rhs = if p == q && total.is_zero() { v.clone() } else { FockVector::zero() };
            record(0, &|| format!("a={p:?} b={q:?}"), ctx.br(&a, &s, v), rhs);

            let lhs = ctx.br(&ctx.prod(p, p, m), &ctx.prod(q, q, k), v);
            record(1, &|| format!("a={p:?} b={q:?}"), lhs, FockVector::zero());

            let value = if p == q { -spec.paired_central(m, &total) } else { rational::zero() };
            let kd_k = ctx.op(vec![SeriesFactor::KappaDAStar(q.0, q.1)], k);
            record(2, &|| format!("a={p:?} b={q:?}"), ctx.br(&a, &kd_k, v), v.scaled(&value));
            let kd_m = ctx.op(vec![SeriesFactor::KappaDAStar(q.0, q.1)], m);
            let a_k = ctx.op(vec![SeriesFactor::A(p.0, p.1)], k);
            record(2, &|| format!("reversed a={p:?} b={q:?}"), ctx.br(&kd_m, &a_k, v), v.scaled(&value));

            // kdw
            let lhs = ctx.br(&ctx.prod(p, p, m), &kd_k, v);
            let rhs = if p == q {
                let mut ops = kappa_d_astar_modes(spec, p.0, p.1, &total);
                for (t, row) in spec.support() {
                    let c = m.pair(row);
                    if !c.is_zero() {
                        ops.push((c, PrimitiveOp::XDer { i: p.0, j: p.1, m: &total + t }));
                    }
                }
                apply_combination(&ops, v)
            } else {
                FockVector::zero()
            };
            record(10, &|| format!("a={p:?} b={q:?}"), lhs, rhs);
        }
    }

    // c1
    for &mu in &pairs {
        for j in 1..=n {
            for s in j + 1..=n {
                let lhs = ctx.br(&ctx.prod(mu, mu, m), &ctx.prod((j, s + 1), (j, s), k), v);
                let sign = if mu.0 != j {
                    0
                } else if mu.1 == s + 1 {
                    -1
                } else if mu.1 == s {
                    1
                } else {
                    0
                };
                let rhs = if sign == 0 {
                    FockVector::zero()
                } else {
                    ctx.apply(&ctx.prod((j, s + 1), (j, s), &total), v).scaled(&rational::int(sign))
                };
                record(9, &|| format!("mu={mu:?} j={j} s={s}"), lhs, rhs);
            }
        }
    }

    for r in 1..=n {
        for s in 1..=n {
            let ins = || format!("r={r} s={s}");

            // d
            let mut lhs = FockVector::zero();
            for j in r + 2..=top {
                for kk in 1..s {
                    lhs.absorb(ctx.br(&ctx.prod((kk, s), (kk, s + 1), m), &ctx.prod((r, j), (r, j), k), v));
                }
            }
            let rhs = if s == r + 1 {
                ctx.apply(&ctx.prod((r, r + 1), (r, r + 2), &total), v).scaled(&rational::int(-1))
            } else {
                FockVector::zero()
            };
            record(3, &ins, lhs, rhs);

            // e
            let mut lhs = FockVector::zero();
            for j in 1..r {
                for kk in s + 2..=top {
                    lhs.absorb(ctx.br(&ctx.prod((s + 1, kk), (s, kk), m), &ctx.prod((j, r), (j, r + 1), k), v));
                }
            }
            record(4, &ins, lhs, FockVector::zero());

            // f
            let mut lhs = FockVector::zero();
            if r + 1 <= n {
                for j in r + 2..=top {
                    for kk in 1..s {
                        lhs.absorb(ctx.br(
                            &ctx.prod((kk, s), (kk, s + 1), m),
                            &ctx.prod((r + 1, j), (r + 1, j), k),
                            v,
                        ));
                    }
                }
            }
            record(5, &ins, lhs, FockVector::zero());

            // g
            let mut lhs = FockVector::zero();
            for j in r + 2..=top {
                for kk in s + 2..=top {
                    let left = ctx.prod((s + 1, kk), (s, kk), m);
                    lhs.absorb(ctx.br(&left, &ctx.prod((r, j), (r, j), k), v));
                    lhs.add_scaled(
                        &ctx.br(&left, &ctx.prod((r + 1, j), (r + 1, j), k), v),
                        &rational::int(-1),
                    );
                }
            }
            let mut rhs = FockVector::zero();
            if r == s {
                for j in r + 2..=top {
                    rhs.add_scaled(&ctx.apply(&ctx.prod((r + 1, j), (r, j), &total), v), &rational::int(-2));
                }
            }
            if r == s + 1 {
                for j in r + 2..=top {
                    rhs.absorb(ctx.apply(&ctx.prod((r, j), (r - 1, j), &total), v));
                }
            }
            if s == r + 1 {
                for j in r + 3..=top {
                    rhs.absorb(ctx.apply(&ctx.prod((r + 2, j), (r + 1, j), &total), v));
                }
            }
            record(6, &ins, lhs, rhs);

            // h
            let astar_s = ctx.op(vec![SeriesFactor::AStar(s, s + 1)], m);
            let mut lhs = FockVector::zero();
            for j in 1..r {
                lhs.absorb(ctx.br(&astar_s, &ctx.prod((j, r), (j, r + 1), k), v));
            }
            let rhs = if r == s + 1 {
                negated_astar(r - 1, r + 1, &total, v)
            } else {
                FockVector::zero()
            };
            record(7, &ins, lhs, rhs);

            // i
            let mut lhs = FockVector::zero();
            if r + 1 <= n {
                for j in r + 2..=top {
                    lhs.absorb(ctx.br(&astar_s, &ctx.prod((r + 1, j), (r, j), k), v));
                }
            }
            let rhs = if s == r + 1 {
                negated_astar(r, r + 2, &total, v)
            } else {
                FockVector::zero()
            };
            record(8, &ins, lhs, rhs);
        }
    }
}

fn negated_astar(i: usize, j: usize, m: &MultiIndex, v: &FockVector) -> FockVector {
    let op = PrimitiveOp::XDer { i, j, m: m.clone() };
    apply_combination(&[(rational::int(-1), op)], v)
}
