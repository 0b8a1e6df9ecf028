//! Relation suites checked by exact application to test vectors.
//!
//! Every identity is checked at mode level: a bracket of fields becomes the
//! commutator of their modes, and `c(w) ∂^{(j)}δ(z/w)` on the right becomes
//! the mode of `c` at the total mode, times `m^j` for the left mode `m`.
//! The relations between fields are therefore exactly the mode relations
//! checked here, over the configured box.
//!
//! Suites:
//! - `heisenberg`: brackets of `Φ(b_i)` and the zeroth relation
//! - `relations`: R0ii, R1, R2E, R2F, R3
//! - `serre`: S4i, S4ii, S4iii and vanishing brackets for `A_ij = 0`
//! - `lemmas`: auxiliary bracket identities of the oscillators
//! - `formal`: δ-calculus sweep
//! - `grading`: degree shift of every generator mode
//! - `mutation`: relation suite against a deliberately broken build
//! - `chains`: chain enumeration counts

mod cache;
pub mod chains;
pub mod formal;
pub mod grading;
pub mod heisenberg;
pub mod lemmas;
pub mod mutation;
pub mod relations;
pub mod report;
pub mod serre;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{test_vectors, FockVector, RandomVectorConfig};
use crate::realization::RealizationParams;

pub use cache::ModeCache;
pub use report::{CheckRecord, CheckReport, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Heisenberg,
    Relations,
    Serre,
    Lemmas,
    Formal,
    Grading,
    Mutation,
    Chains,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Heisenberg,
        Suite::Relations,
        Suite::Serre,
        Suite::Lemmas,
        Suite::Formal,
        Suite::Grading,
        Suite::Mutation,
        Suite::Chains,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Heisenberg => "heisenberg",
            Suite::Relations => "relations",
            Suite::Serre => "serre",
            Suite::Lemmas => "lemmas",
            Suite::Formal => "formal",
            Suite::Grading => "grading",
            Suite::Mutation => "mutation",
            Suite::Chains => "chains",
        }
    }

    /// Parses a comma-separated list; `all` selects every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Suite::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        if out.is_empty() {
            return Err(Error::Parse("no suite selected".into()));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Instance grid and test vectors for one parameter set.
#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub params: RealizationParams,
    /// Modes range over `[-radius, radius]^{N+1}`.
    pub radius: i64,
    pub vectors: usize,
    pub seed: u64,
    /// Box radius for the nested Serre commutators.
    pub serre_radius: i64,
    /// Vector count for the Serre suite.
    pub serre_vectors: usize,
    /// Box radius for the lemma suite.
    pub lemma_radius: i64,
}

impl CheckConfig {
    pub fn new(params: RealizationParams, radius: i64, vectors: usize, seed: u64) -> Result<Self> {
        if radius < 0 {
            return Err(Error::Contract("box radius must be nonnegative".into()));
        }
        if vectors == 0 {
            return Err(Error::Contract("at least one test vector is required".into()));
        }
        Ok(CheckConfig {
            params,
            radius,
            vectors,
            seed,
            serre_radius: radius,
            serre_vectors: vectors,
            lemma_radius: radius.min(1),
        })
    }

    /// Seeded test vectors with variable modes drawn from a box of radius `min(radius, 1)`.
    pub fn test_vectors(&self, count: usize) -> Vec<FockVector> {
        let cfg = RandomVectorConfig::new(self.params.n(), self.params.scheme().clone(), self.radius.min(1), self.seed);
        test_vectors(&cfg, count)
    }
}

/// Runs the selected suites and merges their records in suite order.
pub fn run_suites(cfg: &CheckConfig, suites: &[Suite]) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    for s in suites {
        let records = match s {
            Suite::Heisenberg => heisenberg::check_heisenberg(cfg)?,
            Suite::Relations => relations::check_relations(cfg, &relations::Relation::ALL)?,
            Suite::Serre => serre::check_serre(cfg)?,
            Suite::Lemmas => lemmas::check_lemmas(cfg)?,
            Suite::Formal => formal::check_formal(cfg.seed, cfg.params.dim())?,
            Suite::Grading => grading::check_grading(cfg)?,
            Suite::Mutation => vec![mutation::mutation_guard(cfg)?],
            Suite::Chains => vec![chains::check_chains(2..=6)],
        };
        report.extend(records);
    }
    Ok(report)
}
