//! Relations (0)ii through (3) at mode level:
//! - R0ii: `Σ_l m_l K_{m,l} = 0`
//! - R1: `[H_i(m), H_j(n)] = A_ij Σ_l m_l K_{m+n,l}`
//! - R2E, R2F: `[H_i(m), E_j(n)] = A_ij E_j(m+n)`, `[H_i(m), F_j(n)] = -A_ij F_j(m+n)`
//! - R3: `[E_i(m), F_j(n)] = -δ_ij (H_i(m+n) + Σ_l m_l K_{m+n,l})`
//!
//! The factor `2/A_ij` of R3 only matters when `i = j`, where it equals 1.

use rayon::prelude::*;

use super::report::merge_lists;
use super::{CheckConfig, CheckRecord, Failure, ModeCache};
use crate::error::Result;
use crate::fock::FockVector;
use crate::lattice::mode_box;
use crate::rational;
use crate::realization::{Generator, Realization};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    R0ii,
    R1,
    R2E,
    R2F,
    R3,
}

impl Relation {
    pub const ALL: [Relation; 5] = [Relation::R0ii, Relation::R1, Relation::R2E, Relation::R2F, Relation::R3];

    pub fn id(&self) -> &'static str {
        match self {
            Relation::R0ii => "R0ii",
            Relation::R1 => "R1",
            Relation::R2E => "R2E",
            Relation::R2F => "R2F",
            Relation::R3 => "R3",
        }
    }
}

pub fn check_relations(cfg: &CheckConfig, which: &[Relation]) -> Result<Vec<CheckRecord>> {
    let re = Realization::new(cfg.params.clone())?;
    check_relations_on(&re, cfg, which, "")
}

/// Runs the relation checks against a given realization; ids get `prefix` prepended.
pub fn check_relations_on(
    re: &Realization,
    cfg: &CheckConfig,
    which: &[Relation],
    prefix: &str,
) -> Result<Vec<CheckRecord>> {
    let n = re.n();
    let spec = cfg.params.spec();
    let modes = mode_box(cfg.params.dim(), cfg.radius);
    let mut out = Vec::new();

    if which.contains(&Relation::R0ii) {
        let mut rec = CheckRecord::new(format!("{prefix}R0ii"));
        for m in &modes {
            let s = spec.paired_central(m, m);
            rec.check(s == rational::zero(), || Failure {
                inputs: format!("m={m}"),
                vector: String::new(),
                expected: "0".into(),
                actual: rational::to_string(&s),
            });
        }
        out.push(rec);
    }

    let bracket_rels: Vec<Relation> = which.iter().copied().filter(|r| *r != Relation::R0ii).collect();
    if bracket_rels.is_empty() {
        return Ok(out);
    }
    let vectors = cfg.test_vectors(cfg.vectors);
    let per_vector: Vec<Vec<CheckRecord>> = vectors
        .par_iter()
        .map(|v| {
            let mut cache = ModeCache::new(re, v);
            let mut recs = Vec::new();
            for rel in &bracket_rels {
                let mut rec = CheckRecord::new(format!("{prefix}{}", rel.id()));
                for i in 0..=n {
                    for j in 0..=n {
                        let a = re.cartan().a(i, j);
                        for m in &modes {
                            for k in &modes {
                                let total = m + k;
                                let (lhs, rhs) = match rel {
                                    Relation::R1 => {
                                        let lhs = cache.bracket(Generator::H(i), m, Generator::H(j), k);
                                        let c = spec.paired_central(m, &total) * rational::int(a);
                                        (lhs, v.scaled(&c))
                                    }
                                    Relation::R2E => {
                                        let lhs = cache.bracket(Generator::H(i), m, Generator::E(j), k);
                                        let rhs = cache.get(Generator::E(j), &total).scaled(&rational::int(a));
                                        (lhs, rhs)
                                    }
                                    Relation::R2F => {
                                        let lhs = cache.bracket(Generator::H(i), m, Generator::F(j), k);
                                        let rhs = cache.get(Generator::F(j), &total).scaled(&rational::int(-a));
                                        (lhs, rhs)
                                    }
                                    Relation::R3 => {
                                        let lhs = cache.bracket(Generator::E(i), m, Generator::F(j), k);
                                        let rhs = if i == j {
                                            let mut h = cache.get(Generator::H(i), &total).scaled(&rational::int(-1));
                                            h.add_scaled(v, &-spec.paired_central(m, &total));
                                            h
                                        } else {
                                            FockVector::zero()
                                        };
                                        (lhs, rhs)
                                    }
                                    Relation::R0ii => unreachable!(),
                                };
                                rec.check(lhs == rhs, || Failure {
                                    inputs: format!("i={i} j={j} m={m} n={k}"),
                                    vector: v.to_string(),
                                    expected: rhs.to_string(),
                                    actual: lhs.to_string(),
                                });
                            }
                        }
                    }
                }
                recs.push(rec);
            }
            recs
        })
        .collect();
    out.extend(merge_lists(per_vector));
    Ok(out)
}
