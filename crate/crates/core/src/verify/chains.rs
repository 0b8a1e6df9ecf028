//! Chain counts against a recursive enumeration that shares no code with
//! [`chain_enumerate`].

use std::ops::RangeInclusive;

use super::{CheckRecord, Failure};
use crate::realization::{chain_enumerate, ChainConstraint};

fn extend(n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(prefix.clone());
    let start = prefix.last().copied().unwrap_or(0) + 1;
    for q in start..=n {
        prefix.push(q);
        extend(n, prefix, out);
        prefix.pop();
    }
}

fn reference(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    extend(n, &mut vec![1], &mut out);
    out.sort();
    out
}

pub fn check_chains(ns: RangeInclusive<usize>) -> CheckRecord {
    let mut rec = CheckRecord::new("chains");
    for n in ns {
        let got: Vec<Vec<usize>> = chain_enumerate(n, ChainConstraint::None)
            .iter()
            .map(|c| c.entries().to_vec())
            .collect();
        let want = reference(n);
        let count = 1usize << (n - 1);
        rec.check(got == want && got.len() == count, || Failure {
            inputs: format!("n={n}"),
            vector: String::new(),
            expected: format!("{count} chains"),
            actual: format!("{} chains, reference {}", got.len(), want.len()),
        });
        for t in 1..=n {
            let got = chain_enumerate(n, ChainConstraint::LastEquals(t)).len();
            let want = reference(n).iter().filter(|c| c.last() == Some(&t)).count();
            rec.check(got == want, || Failure {
                inputs: format!("n={n} last={t}"),
                vector: String::new(),
                expected: want.to_string(),
                actual: got.to_string(),
            });
        }
    }
    rec
}
