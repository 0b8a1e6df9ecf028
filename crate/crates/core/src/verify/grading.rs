//! Degree shift: `ρ(X)(m)` maps a homogeneous vector of degree `d` to one of
//! degree `d - m`, or to zero. Only meaningful when `κ` is supported at 0.

use rayon::prelude::*;

use super::{CheckConfig, CheckRecord, Failure};
use crate::error::Result;
use crate::fock::{random_homogeneous_vector, Homogeneity, RandomVectorConfig};
use crate::kappa::KappaSpec;
use crate::lattice::{mode_box, MultiIndex};
use crate::rational;
use crate::realization::{Generator, Realization, RealizationParams};

pub const GRADING_VECTORS: usize = 20;

pub fn check_grading(cfg: &CheckConfig) -> Result<Vec<CheckRecord>> {
    let dim = cfg.params.dim();
    let n = cfg.params.n();
    let zero = MultiIndex::zero(dim);
    let at_zero = cfg.params.spec().support().all(|(t, _)| *t == zero);
    let mut rec = CheckRecord::new("grading");
    let params = if at_zero {
        cfg.params.clone()
    } else {
        let mut values = vec![rational::zero(); dim];
        values[0] = rational::one();
        if dim > 1 {
            values[1] = rational::int(-1);
        }
        rec = rec.note("kappa replaced by a point-at-zero spec for this suite");
        RealizationParams::new(
            n,
            cfg.params.scheme().clone(),
            KappaSpec::point_at_zero(values)?,
            cfg.params.lambda().to_vec(),
        )?
    };
    let re = Realization::new(params)?;
    let modes = mode_box(dim, cfg.radius);
    let mut gens = Vec::new();
    for r in 0..=n {
        gens.extend([Generator::E(r), Generator::F(r), Generator::H(r), Generator::B(r)]);
    }
    let vectors: Vec<_> = (0..GRADING_VECTORS as u64)
        .map(|k| {
            let c = RandomVectorConfig::new(n, cfg.params.scheme().clone(), cfg.radius.min(1), cfg.seed.wrapping_add(k));
            random_homogeneous_vector(&c)
        })
        .collect();
    let parts: Vec<CheckRecord> = vectors
        .par_iter()
        .map(|v| {
            let mut r = CheckRecord::new("grading");
            let Homogeneity::Homogeneous(d) = v.degree(dim) else {
                r.fail(Failure {
                    inputs: "input vector".into(),
                    vector: v.to_string(),
                    expected: "homogeneous".into(),
                    actual: "inhomogeneous".into(),
                });
                return r;
            };
            for g in &gens {
                for m in &modes {
                    let op = re.mode(*g, m).expect("generator index in range");
                    let w = re.apply(&op, v);
                    let want = &d - m;
                    let got = w.degree(dim);
                    let ok = match &got {
                        Homogeneity::Zero => true,
                        Homogeneity::Homogeneous(e) => *e == want,
                        Homogeneity::Inhomogeneous => false,
                    };
                    r.check(ok, || Failure {
                        inputs: format!("{g}({m})"),
                        vector: v.to_string(),
                        expected: format!("degree {want}"),
                        actual: w.to_string(),
                    });
                }
            }
            r
        })
        .collect();
    for p in parts {
        rec.merge(p);
    }
    Ok(vec![rec])
}
