//! δ-calculus sweep. Canonical forms are compared against coefficient
//! extraction from the formal series, on a finite window of exponents.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CheckRecord, Failure};
use crate::error::Result;
use crate::formalcalc::{binomial, fourier_lambda, multiply_into_delta, DeltaExpr, LambdaPoly, LaurentPoly};
use crate::lattice::{mode_box, MultiIndex};
use crate::rational::{self, Rational};

/// Random cases per identity.
pub const CASES: usize = 50;
const WINDOW: i64 = 4;

pub fn check_formal(seed: u64, dim: usize) -> Result<Vec<CheckRecord>> {
    let dims: Vec<usize> = if dim <= 2 { vec![1, 2] } else { vec![1, 2, dim] };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f0a1);
    Ok(vec![
        fourier_sweep(),
        lowers_order(&mut rng, &dims)?,
        annihilates(&mut rng, &dims)?,
        residue_series(&mut rng, &dims)?,
        residue_orders(),
        residue_iterated(&mut rng, &dims),
        confluence(&mut rng, &dims)?,
    ])
}

fn factorial(k: i64) -> Rational {
    (1..=k).fold(rational::one(), |acc, t| acc * rational::int(t))
}

/// `F^λ ∂^{(j)}δ = λ^j / j!` for every order with entries at most 3, in one and two variables.
fn fourier_sweep() -> CheckRecord {
    let mut rec = CheckRecord::new("formal.fourier");
    for dim in 1..=2 {
        for j in mode_box(dim, 3).into_iter().filter(|j| j.coords().iter().all(|x| *x >= 0)) {
            let got = fourier_lambda(&DeltaExpr::derivative(dim, j.clone()));
            let denom = j.coords().iter().fold(rational::one(), |acc, x| acc * factorial(*x));
            let expected = LaurentPoly::one(dim).scaled(&(rational::one() / denom));
            let ok = got.terms().count() == 1 && got.coefficient(&j) == expected && got == LambdaPoly::divided_power(&j);
            rec.check(ok, || Failure {
                inputs: format!("j={j}"),
                vector: String::new(),
                expected: format!("{expected}"),
                actual: format!("{got:?}"),
            });
        }
    }
    rec
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let mut p = 0;
    while p == 0 {
        p = rng.gen_range(-5..=5);
    }
    rational::ratio(p, rng.gen_range(1..=3))
}

/// Random Laurent polynomial in `w` only.
fn random_w_poly(rng: &mut ChaCha8Rng, dim: usize) -> LaurentPoly {
    let mut p = LaurentPoly::zero(dim);
    while p.is_zero() {
        for _ in 0..rng.gen_range(1..=3) {
            let b: Vec<i64> = (0..dim).map(|_| rng.gen_range(-2..=2)).collect();
            p.add_term(MultiIndex::zero(dim), MultiIndex::from(b), random_rational(rng));
        }
    }
    p
}

/// Random Laurent polynomial in both `z` and `w`.
fn random_poly(rng: &mut ChaCha8Rng, dim: usize, terms: usize) -> LaurentPoly {
    let mut p = LaurentPoly::zero(dim);
    while p.is_zero() {
        for _ in 0..terms {
            let a: Vec<i64> = (0..dim).map(|_| rng.gen_range(-2..=2)).collect();
            let b: Vec<i64> = (0..dim).map(|_| rng.gen_range(-2..=2)).collect();
            p.add_term(MultiIndex::from(a), MultiIndex::from(b), random_rational(rng));
        }
    }
    p
}

fn random_order(rng: &mut ChaCha8Rng, dim: usize) -> MultiIndex {
    MultiIndex::from((0..dim).map(|_| rng.gen_range(0..=3)).collect::<Vec<i64>>())
}

/// Coefficient of `z^a w^b` in `f · d`, from the series of `d`.
fn product_series(f: &LaurentPoly, d: &DeltaExpr, a: &MultiIndex, b: &MultiIndex) -> Rational {
    f.terms()
        .map(|(fa, fb, x)| x * d.series_coefficient(&(a - fa), &(b - fb)))
        .sum()
}

/// First window point where `lhs` and `f · d` disagree as series.
fn series_mismatch(lhs: &DeltaExpr, f: &LaurentPoly, d: &DeltaExpr) -> Option<String> {
    let window = mode_box(d.dim(), WINDOW);
    for a in &window {
        for b in &window {
            let want = product_series(f, d, a, b);
            let got = lhs.series_coefficient(a, b);
            if want != got {
                return Some(format!("z^{a} w^{b}: series {} vs reduced {}", want, got));
            }
        }
    }
    None
}

/// `(z_i - w_i) ∂^{(j + e_i)}δ = ∂^{(j)}δ`, times a random `c(w)`.
fn lowers_order(rng: &mut ChaCha8Rng, dims: &[usize]) -> Result<CheckRecord> {
    let mut rec = CheckRecord::new("formal.z-minus-w-lowers");
    for case in 0..CASES {
        let dim = dims[case % dims.len()];
        let i = rng.gen_range(0..dim);
        let c = random_w_poly(rng, dim);
        let j = random_order(rng, dim);
        let d = DeltaExpr::with_coefficient(c.clone(), &j + &MultiIndex::unit(dim, i))?;
        let f = LaurentPoly::z_minus_w(dim, i);
        let lhs = multiply_into_delta(&f, &d)?;
        let rhs = DeltaExpr::with_coefficient(c.clone(), j.clone())?;
        let mismatch = series_mismatch(&lhs, &f, &d);
        rec.check(lhs == rhs && mismatch.is_none(), || Failure {
            inputs: format!("dim={dim} i={i} j={j} c={c}"),
            vector: mismatch.unwrap_or_default(),
            expected: rhs.to_string(),
            actual: lhs.to_string(),
        });
    }
    Ok(rec)
}

/// `(z_i - w_i)^{j_i + 1} ∂^{(j)}δ = 0`, times a random `c(w)`.
fn annihilates(rng: &mut ChaCha8Rng, dims: &[usize]) -> Result<CheckRecord> {
    let mut rec = CheckRecord::new("formal.z-minus-w-annihilates");
    for case in 0..CASES {
        let dim = dims[case % dims.len()];
        let i = rng.gen_range(0..dim);
        let c = random_w_poly(rng, dim);
        let j = random_order(rng, dim);
        let d = DeltaExpr::with_coefficient(c.clone(), j.clone())?;
        let f = LaurentPoly::z_minus_w(dim, i).pow(j.coords()[i] as u32 + 1);
        let lhs = multiply_into_delta(&f, &d)?;
        let mismatch = series_mismatch(&lhs, &f, &d);
        rec.check(lhs.is_zero() && mismatch.is_none(), || Failure {
            inputs: format!("dim={dim} i={i} j={j} c={c}"),
            vector: mismatch.unwrap_or_default(),
            expected: "0".into(),
            actual: lhs.to_string(),
        });
    }
    Ok(rec)
}

/// `Res_{z_i}` of `c(w) ∂^{(j)}δ` against the `z_i^{-1}` coefficients of the series.
fn residue_series(rng: &mut ChaCha8Rng, dims: &[usize]) -> Result<CheckRecord> {
    let mut rec = CheckRecord::new("formal.residue-series");
    for case in 0..CASES {
        let dim = dims[case % dims.len()];
        let i = rng.gen_range(0..dim);
        let c = random_w_poly(rng, dim);
        let j = random_order(rng, dim);
        let d = DeltaExpr::with_coefficient(c.clone(), j.clone())?;
        let r = d.residue(i)?;
        let mut mismatch = None;
        let window = mode_box(dim, WINDOW);
        'outer: for a in window.iter().filter(|a| a.coords()[i] == 0) {
            let mut at = a.coords().to_vec();
            at[i] = -1;
            let at = MultiIndex::from(at);
            for b in &window {
                let want = d.series_coefficient(&at, b);
                let got = r.series_coefficient(a, b);
                if want != got {
                    mismatch = Some(format!("z^{a} w^{b}: series {want} vs residue {got}"));
                    break 'outer;
                }
            }
        }
        rec.check(mismatch.is_none(), || Failure {
            inputs: format!("dim={dim} i={i} j={j} c={c}"),
            vector: String::new(),
            expected: "series coefficients".into(),
            actual: mismatch.unwrap_or_default(),
        });
    }
    Ok(rec)
}

/// `Res_z ∂^{(j)}_w δ(z/w)` in one variable: `w`, `1`, then `0` from order 2 on.
fn residue_orders() -> CheckRecord {
    let mut rec = CheckRecord::new("formal.residue-orders").note(
        "with δ(z/w) = Σ z^k w^-k the first-order residue is 1, not 0; only orders ≥ 2 vanish",
    );
    for j in 0..=6 {
        let r = DeltaExpr::derivative(1, MultiIndex::from(vec![j])).residue_all();
        let expected = LaurentPoly::term(
            1,
            MultiIndex::zero(1),
            MultiIndex::from(vec![1 - j]),
            binomial(1, j),
        );
        // series: ∂^{(j)}_w w^1 = binom(1, j) w^{1-j}
        let series = DeltaExpr::derivative(1, MultiIndex::from(vec![j]))
            .series_coefficient(&MultiIndex::from(vec![-1]), &MultiIndex::from(vec![1 - j]));
        rec.check(r == expected && series == binomial(1, j), || Failure {
            inputs: format!("j={j}"),
            vector: String::new(),
            expected: expected.to_string(),
            actual: r.to_string(),
        });
    }
    rec
}

/// Iterated `Res_{z_i}` in any order equals the total residue `Res_z`.
fn residue_iterated(rng: &mut ChaCha8Rng, dims: &[usize]) -> CheckRecord {
    let mut rec = CheckRecord::new("formal.residue-iterated");
    for case in 0..CASES {
        let dim = dims[case % dims.len()];
        let mut f = random_poly(rng, dim, 6);
        // make sure some terms survive
        f.add_term(MultiIndex::new(vec![-1; dim]), MultiIndex::zero(dim), random_rational(rng));
        let forward = (0..dim).fold(f.clone(), |p, i| p.residue(i));
        let backward = (0..dim).rev().fold(f.clone(), |p, i| p.residue(i));
        let total = f.residue_all();
        let direct: LaurentPoly = f
            .terms()
            .filter(|(a, _, _)| a.coords().iter().all(|x| *x == -1))
            .fold(LaurentPoly::zero(dim), |acc, (_, b, c)| {
                acc.add(&LaurentPoly::term(dim, MultiIndex::zero(dim), b.clone(), c.clone()))
            });
        rec.check(forward == total && backward == total && direct == total, || Failure {
            inputs: format!("f={f}"),
            vector: String::new(),
            expected: direct.to_string(),
            actual: format!("iterated {forward}, reversed {backward}, total {total}"),
        });
    }
    rec
}

/// Multiplying in two steps or at once gives the same canonical form and transform.
fn confluence(rng: &mut ChaCha8Rng, dims: &[usize]) -> Result<CheckRecord> {
    let mut rec = CheckRecord::new("formal.confluence");
    for case in 0..CASES {
        let dim = dims[case % dims.len()];
        let f = random_poly(rng, dim, 2);
        let g = random_poly(rng, dim, 2);
        let d = DeltaExpr::with_coefficient(random_w_poly(rng, dim), random_order(rng, dim))?;
        let stepwise = multiply_into_delta(&f, &multiply_into_delta(&g, &d)?)?;
        let fg = f.mul(&g);
        let once = multiply_into_delta(&fg, &d)?;
        let mismatch = series_mismatch(&once, &fg, &d);
        let ok = stepwise == once && fourier_lambda(&stepwise) == fourier_lambda(&once) && mismatch.is_none();
        rec.check(ok, || Failure {
            inputs: format!("f={f} g={g} d={d}"),
            vector: mismatch.unwrap_or_default(),
            expected: once.to_string(),
            actual: stepwise.to_string(),
        });
    }
    Ok(rec)
}
