//! Sensitivity guard: rebuilds the realization with the `κ·D` term of every
//! `ρ(E_r)` sign-flipped and reruns R3 and S4ii. The guard passes iff the
//! broken build is caught.

use super::relations::{check_relations_on, Relation};
use super::serre::check_serre_on;
use super::{CheckConfig, CheckRecord, Failure};
use crate::error::Result;
use crate::realization::{Mutation, Realization};

pub fn mutation_guard(cfg: &CheckConfig) -> Result<CheckRecord> {
    let re = Realization::with_mutation(cfg.params.clone(), Mutation::FlipKappaD)?;
    let mut rec = CheckRecord::new("mutation");

    let r3 = check_relations_on(&re, cfg, &[Relation::R3], "mutation.")?;
    // the nested Serre sweep is only a second witness; a small box suffices
    let mut small = cfg.clone();
    small.serre_radius = cfg.serre_radius.min(1);
    small.serre_vectors = cfg.serre_vectors.min(4);
    let serre = check_serre_on(&re, &small, "mutation.")?;

    let mut caught = 0;
    for r in r3.iter().chain(serre.iter().filter(|r| r.id == "mutation.S4ii")) {
        rec.instances += r.instances;
        caught += r.failure_count;
        let mut line = format!("{}: {} of {} instances fail", r.id, r.failure_count, r.instances);
        if let Some(f) = r.failures.first() {
            line.push_str(&format!("; first at {}", f.inputs));
        }
        rec.notes.push(line);
    }
    if caught > 0 {
        return Ok(rec);
    }
    if cfg.params.spec().is_zero() {
        rec.notes.push("insensitive: kappa vanishes, so the flipped term is zero".into());
        return Ok(rec);
    }
    rec.fail(Failure {
        inputs: "flipped kappa.D term in rho(E_r)".into(),
        vector: String::new(),
        expected: "at least one failing instance".into(),
        actual: "no failures".into(),
    });
    Ok(rec)
}
