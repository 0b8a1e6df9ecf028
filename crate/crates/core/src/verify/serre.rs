//! Serre relations at mode level, for both `E` and `F`:
//! - S4i: `[X_i(m), X_i(n)] = 0`
//! - S4ii (E), S4iii (F): `[X_i(m_1), [X_i(m_2), X_j(n)]] = 0` when `A_ij = -1`
//! - `[X_i(m), X_j(n)] = 0` when `A_ij = 0`
//!
//! The nested commutators range over `m_1, m_2, n` independently in the
//! Serre box, whose radius and vector count are configured separately.

use rayon::prelude::*;

use super::report::merge_lists;
use super::{CheckConfig, CheckRecord, Failure, ModeCache};
use crate::error::Result;
use crate::fock::FockVector;
use crate::lattice::{mode_box, MultiIndex};
use crate::realization::{Generator, Realization};

#[derive(Clone, Copy)]
enum Family {
    E,
    F,
}

impl Family {
    fn gen(self, i: usize) -> Generator {
        match self {
            Family::E => Generator::E(i),
            Family::F => Generator::F(i),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Family::E => "E",
            Family::F => "F",
        }
    }
}

pub fn check_serre(cfg: &CheckConfig) -> Result<Vec<CheckRecord>> {
    let re = Realization::new(cfg.params.clone())?;
    check_serre_on(&re, cfg, "")
}

pub fn check_serre_on(re: &Realization, cfg: &CheckConfig, prefix: &str) -> Result<Vec<CheckRecord>> {
    let n = re.n();
    let modes = mode_box(cfg.params.dim(), cfg.serre_radius);
    let vectors = cfg.test_vectors(cfg.serre_vectors);
    let note = format!(
        "serre box radius {}, {} vectors",
        cfg.serre_radius, cfg.serre_vectors
    );
    let per_vector: Vec<Vec<CheckRecord>> = vectors
        .par_iter()
        .map(|v| {
            let mut cache = ModeCache::new(re, v);
            let mut recs = Vec::new();
            for fam in [Family::E, Family::F] {
                let mut same = CheckRecord::new(format!("{prefix}S4i-{}", fam.name())).note(note.clone());
                let mut zero = CheckRecord::new(format!("{prefix}S4-commuting-{}", fam.name())).note(note.clone());
                for i in 0..=n {
                    for j in 0..=n {
                        let a = re.cartan().a(i, j);
                        if i != j && a != 0 {
                            continue;
                        }
                        let rec = if i == j { &mut same } else { &mut zero };
                        for m in &modes {
                            for k in &modes {
                                let lhs = cache.bracket(fam.gen(i), m, fam.gen(j), k);
                                rec.check(lhs.is_zero(), || Failure {
                                    inputs: format!("i={i} j={j} m={m} n={k}"),
                                    vector: v.to_string(),
                                    expected: "0".into(),
                                    actual: lhs.to_string(),
                                });
                            }
                        }
                    }
                }
                let id = match fam {
                    Family::E => "S4ii",
                    Family::F => "S4iii",
                };
                let mut double = CheckRecord::new(format!("{prefix}{id}")).note(note.clone());
                for i in 0..=n {
                    for j in 0..=n {
                        if re.cartan().a(i, j) != -1 {
                            continue;
                        }
                        nested(&mut cache, fam.gen(i), fam.gen(j), &modes, &mut double, i, j);
                    }
                }
                recs.push(same);
                recs.push(double);
                recs.push(zero);
            }
            recs
        })
        .collect();
    Ok(merge_lists(per_vector))
}

/// Checks `[X(m1), [X(m2), Y(k)]] v = 0` for all triples in the box.
fn nested(
    cache: &mut ModeCache<'_>,
    x: Generator,
    y: Generator,
    modes: &[MultiIndex],
    rec: &mut CheckRecord,
    i: usize,
    j: usize,
) {
    let v = cache.vector().clone();
    // inner[(m2,k)] = [X(m2), Y(k)] v
    let mut inner: Vec<FockVector> = Vec::with_capacity(modes.len() * modes.len());
    for m2 in modes {
        for k in modes {
            inner.push(cache.bracket(x, m2, y, k));
        }
    }
    for m1 in modes {
        let u1 = cache.get(x, m1).clone();
        let yk_u1: Vec<FockVector> = modes.iter().map(|k| cache.apply_to(y, k, &u1)).collect();
        let xm2_u1: Vec<FockVector> = modes.iter().map(|m2| cache.apply_to(x, m2, &u1)).collect();
        for (a, m2) in modes.iter().enumerate() {
            for (b, k) in modes.iter().enumerate() {
                let outer = cache.apply_to(x, m1, &inner[a * modes.len() + b]);
                let mut lhs = outer;
                // minus [X(m2), Y(k)] X(m1) v
                lhs.add_scaled(&cache.apply_to(x, m2, &yk_u1[b]), &-crate::rational::one());
                lhs.add_scaled(&cache.apply_to(y, k, &xm2_u1[a]), &crate::rational::one());
                rec.check(lhs.is_zero(), || Failure {
                    inputs: format!("i={i} j={j} m1={m1} m2={m2} n={k}"),
                    vector: v.to_string(),
                    expected: "0".into(),
                    actual: lhs.to_string(),
                });
            }
        }
    }
}
