//! `[Φ(b_i)(m), Φ(b_j)(n)] = A_ij Σ_p m_p K_{m+n,p}` on every test vector, for `0 ≤ i, j ≤ n`.

use rayon::prelude::*;

use super::report::merge_lists;
use super::{CheckConfig, CheckRecord, Failure, ModeCache};
use crate::error::Result;
use crate::lattice::mode_box;
use crate::rational;
use crate::realization::{Generator, Realization};

pub fn check_heisenberg(cfg: &CheckConfig) -> Result<Vec<CheckRecord>> {
    let re = Realization::new(cfg.params.clone())?;
    let n = re.n();
    let spec = cfg.params.spec();
    let modes = mode_box(cfg.params.dim(), cfg.radius);

    let mut zeroth = CheckRecord::new("heisenberg.R0ii");
    for m in &modes {
        let s = spec.paired_central(m, m);
        zeroth.check(s == rational::zero(), || Failure {
            inputs: format!("m={m}"),
            vector: String::new(),
            expected: "0".into(),
            actual: rational::to_string(&s),
        });
    }

    let vectors = cfg.test_vectors(cfg.vectors);
    let per_vector: Vec<Vec<CheckRecord>> = vectors
        .par_iter()
        .map(|v| {
            let mut rec = CheckRecord::new("heisenberg.bracket");
            let mut cache = ModeCache::new(&re, v);
            for i in 0..=n {
                for j in 0..=n {
                    let a = re.cartan().a(i, j);
                    for m in &modes {
                        for k in &modes {
                            let lhs = cache.bracket(Generator::B(i), m, Generator::B(j), k);
                            let c = spec.paired_central(m, &(m + k)) * rational::int(a);
                            let rhs = v.scaled(&c);
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
            vec![rec]
        })
        .collect();

    let mut out = vec![zeroth];
    out.extend(merge_lists(per_vector));
    Ok(out)
}
