//! Central cocycle data `κ_{m,p}`.
//!
//! A [`KappaSpec`] is a finitely supported map `(m, p) ↦ κ_{m,p}`. Validity
//! means two linear conditions:
//! - orthogonality: `Σ_p m_p κ_{m,p} = 0` at every support point
//! - decomposition: `Σ_p m_p κ_{-m-n,p} = 0` whenever `m > 0` and `n > 0`
//!
//! The central element `K_{m,l}` acts as the scalar `-κ_{-m,l}`.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{in_box, mode_box, MultiIndex, OrderScheme};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaSpec {
    dim: usize,
    // support point -> values indexed by p; all-zero rows are dropped
    entries: BTreeMap<MultiIndex, Vec<Rational>>,
}

/// One record of the κ-spec file format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaRecord {
    pub m: Vec<i64>,
    pub p: usize,
    pub value: String,
}

impl KappaSpec {
    /// The zero cocycle on `Z^dim`.
    pub fn new(dim: usize) -> Self {
        KappaSpec {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn set(&mut self, m: MultiIndex, p: usize, value: Rational) -> Result<()> {
        m.check_dim(self.dim)?;
        if p >= self.dim {
            return Err(Error::IndexOutOfRange {
                what: "kappa component",
                index: p,
                max: self.dim - 1,
            });
        }
        let row = self
            .entries
            .entry(m.clone())
            .or_insert_with(|| vec![Rational::zero(); self.dim]);
        row[p] = value;
        if row.iter().all(Zero::is_zero) {
            self.entries.remove(&m);
        }
        Ok(())
    }

    pub fn get(&self, m: &MultiIndex, p: usize) -> Rational {
        self.entries
            .get(m)
            .and_then(|row| row.get(p))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Values `κ_{m,0..N}` at a support point.
    pub fn row(&self, m: &MultiIndex) -> Option<&[Rational]> {
        self.entries.get(m).map(Vec::as_slice)
    }

    /// Support points with their value rows, in ascending order.
    pub fn support(&self) -> impl Iterator<Item = (&MultiIndex, &[Rational])> {
        self.entries.iter().map(|(m, r)| (m, r.as_slice()))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Scalar of `K_{m,l}`: `-κ_{-m,l}`.
    pub fn central_scalar(&self, m: &MultiIndex, l: usize) -> Result<Rational> {
        m.check_dim(self.dim)?;
        if l >= self.dim {
            return Err(Error::IndexOutOfRange {
                what: "central index",
                index: l,
                max: self.dim - 1,
            });
        }
        Ok(-self.get(&-m, l))
    }

    /// `Σ_l m_l · central_scalar(r, l)`, the scalar of `Σ_l m_l K_{r,l}`.
    pub fn paired_central(&self, m: &MultiIndex, r: &MultiIndex) -> Rational {
        match self.entries.get(&-r) {
            Some(row) => -m.pair(row),
            None => Rational::zero(),
        }
    }

    pub fn from_records(dim: usize, records: &[KappaRecord]) -> Result<Self> {
        let mut spec = KappaSpec::new(dim);
        let mut seen = std::collections::BTreeSet::new();
        for rec in records {
            let m = MultiIndex::from(rec.m.clone());
            if !seen.insert((m.clone(), rec.p)) {
                return Err(Error::Parse(format!("duplicate kappa entry at m={m}, p={}", rec.p)));
            }
            spec.set(m, rec.p, rational::parse(&rec.value)?)?;
        }
        Ok(spec)
    }

    pub fn to_records(&self) -> Vec<KappaRecord> {
        let mut out = Vec::new();
        for (m, row) in &self.entries {
            for (p, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    out.push(KappaRecord {
                        m: m.coords().to_vec(),
                        p,
                        value: rational::to_string(v),
                    });
                }
            }
        }
        out
    }

    /// Reads a JSON list of `{m, p, value}` records.
    pub fn load(path: &Path, dim: usize) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let records: Vec<KappaRecord> = serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("kappa file {}: {e}", path.display())))?;
        Self::from_records(dim, &records)
    }

    /// κ supported only at `0` with the given values `c_0..c_N`.
    pub fn point_at_zero(values: Vec<Rational>) -> Result<Self> {
        let dim = values.len();
        if dim == 0 {
            return Err(Error::InvalidKappa("point-at-zero needs at least one value".into()));
        }
        let mut spec = KappaSpec::new(dim);
        for (p, v) in values.into_iter().enumerate() {
            spec.set(MultiIndex::zero(dim), p, v)?;
        }
        Ok(spec)
    }

    /// κ supported on strictly positive points, each row orthogonal to its point.
    pub fn positive_cone(
        scheme: &OrderScheme,
        rows: Vec<(MultiIndex, Vec<Rational>)>,
    ) -> Result<Self> {
        let dim = scheme.dim();
        let mut spec = KappaSpec::new(dim);
        for (m, vals) in rows {
            m.check_dim(dim)?;
            if vals.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: vals.len(),
                });
            }
            if !scheme.is_positive(&m) {
                return Err(Error::InvalidKappa(format!("positive-cone point {m} is not positive")));
            }
            let s = m.pair(&vals);
            if !s.is_zero() {
                return Err(Error::InvalidKappa(format!(
                    "positive-cone row at {m} violates orthogonality: sum is {}",
                    rational::to_string(&s)
                )));
            }
            for (p, v) in vals.into_iter().enumerate() {
                spec.set(m.clone(), p, v)?;
            }
        }
        Ok(spec)
    }

    /// The stock positive-cone example: `κ_{(1,…,1)} = (1, -1, 0, …)`.
    pub fn positive_cone_example(scheme: &OrderScheme) -> Result<Self> {
        let dim = scheme.dim();
        if dim < 2 {
            return Err(Error::InvalidKappa("positive-cone example needs N >= 1".into()));
        }
        let mut vals = vec![Rational::zero(); dim];
        vals[0] = rational::int(1);
        vals[1] = rational::int(-1);
        Self::positive_cone(scheme, vec![(MultiIndex::new(vec![1; dim]), vals)])
    }

    pub fn validate(&self, scheme: &OrderScheme, radius: i64) -> Result<KappaValidation> {
        validate_kappa(self, scheme, radius)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecompositionMethod {
    /// `-r` has no decomposition `m + n` with `m, n > 0` inside the box.
    Vacuous,
    /// The decompositions affinely span the space, so `κ_{r,·}` must vanish.
    Span,
    /// Each enumerated decomposition is checked individually.
    Enumeration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum KappaViolation {
    Orthogonality {
        r: MultiIndex,
        value: String,
    },
    Decomposition {
        r: MultiIndex,
        m: MultiIndex,
        n: MultiIndex,
        value: String,
    },
    /// Spanning decomposition set but a nonzero row and no enumerated witness.
    DecompositionSpan {
        r: MultiIndex,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointCheck {
    pub r: MultiIndex,
    pub decompositions: usize,
    pub decomposition_method: DecompositionMethod,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KappaValidation {
    pub pass: bool,
    pub radius: i64,
    pub points: Vec<PointCheck>,
    pub violations: Vec<KappaViolation>,
}

/// Checks orthogonality at every support point and the decomposition condition on all decompositions inside the box.
pub fn validate_kappa(spec: &KappaSpec, scheme: &OrderScheme, radius: i64) -> Result<KappaValidation> {
    if scheme.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: scheme.dim(),
        });
    }
    if radius < 0 {
        return Err(Error::Contract("validation box radius must be nonnegative".into()));
    }
    let positives: Vec<MultiIndex> = mode_box(spec.dim(), radius)
        .into_iter()
        .filter(|m| scheme.is_positive(m))
        .collect();
    let mut points = Vec::new();
    let mut violations = Vec::new();
    for (r, row) in spec.support() {
        let e1 = r.pair(row);
        if !e1.is_zero() {
            violations.push(KappaViolation::Orthogonality {
                r: r.clone(),
                value: rational::to_string(&e1),
            });
        }
        let target = -r;
        let decomps: Vec<(MultiIndex, MultiIndex)> = positives
            .iter()
            .filter_map(|m| {
                let n = &target - m;
                (in_box(&n, radius) && scheme.is_positive(&n)).then(|| (m.clone(), n))
            })
            .collect();
        let method = if decomps.is_empty() {
            DecompositionMethod::Vacuous
        } else if affinely_spans(decomps.iter().map(|(m, _)| m), spec.dim()) {
            DecompositionMethod::Span
        } else {
            DecompositionMethod::Enumeration
        };
        let mut witnessed = false;
        for (m, n) in &decomps {
            let v = m.pair(row);
            if !v.is_zero() {
                witnessed = true;
                violations.push(KappaViolation::Decomposition {
                    r: r.clone(),
                    m: m.clone(),
                    n: n.clone(),
                    value: rational::to_string(&v),
                });
            }
        }
        if method == DecompositionMethod::Span && !witnessed && row.iter().any(|v| !v.is_zero()) {
            violations.push(KappaViolation::DecompositionSpan { r: r.clone() });
        }
        points.push(PointCheck {
            r: r.clone(),
            decompositions: decomps.len(),
            decomposition_method: method,
        });
    }
    Ok(KappaValidation {
        pass: violations.is_empty(),
        radius,
        points,
        violations,
    })
}

fn affinely_spans<'a>(points: impl Iterator<Item = &'a MultiIndex>, dim: usize) -> bool {
    let pts: Vec<&MultiIndex> = points.collect();
    if pts.len() < dim + 1 {
        return false;
    }
    let base = pts[0];
    let rows: Vec<Vec<Rational>> = pts[1..]
        .iter()
        .map(|p| (*p - base).coords().iter().map(|&c| rational::int(c)).collect())
        .collect();
    rank(rows) == dim
}

fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                for k in c..cols {
                    let d = &f * &rows[r][k];
                    rows[i][k] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn mi(v: &[i64]) -> MultiIndex {
        MultiIndex::from(v)
    }

    #[test]
    fn point_at_zero_passes() {
        let s = OrderScheme::all_ones(2);
        let k = KappaSpec::point_at_zero(vec![int(1), int(-1)]).unwrap();
        let v = k.validate(&s, 2).unwrap();
        assert!(v.pass);
        assert_eq!(v.points[0].decomposition_method, DecompositionMethod::Vacuous);
        let k3 = KappaSpec::point_at_zero(vec![int(1), int(2), int(3)]).unwrap();
        assert!(k3.validate(&OrderScheme::all_ones(3), 1).unwrap().pass);
    }

    #[test]
    fn negative_point_fails_with_witness() {
        let s = OrderScheme::all_ones(2);
        let mut k = KappaSpec::new(2);
        k.set(mi(&[-2, 0]), 0, int(1)).unwrap();
        let v = k.validate(&s, 2).unwrap();
        assert!(!v.pass);
        assert!(v.violations.contains(&KappaViolation::Decomposition {
            r: mi(&[-2, 0]),
            m: mi(&[1, 0]),
            n: mi(&[1, 0]),
            value: "1".into(),
        }));
    }

    #[test]
    fn positive_point_passes() {
        let s = OrderScheme::all_ones(2);
        let mut k = KappaSpec::new(2);
        k.set(mi(&[1, 1]), 0, int(1)).unwrap();
        k.set(mi(&[1, 1]), 1, int(-1)).unwrap();
        assert!(k.validate(&s, 2).unwrap().pass);
        assert_eq!(k, KappaSpec::positive_cone_example(&s).unwrap());
    }

    #[test]
    fn span_method_is_reported() {
        // -r = (2,2) has many decompositions inside radius 2
        let s = OrderScheme::all_ones(2);
        let mut k = KappaSpec::new(2);
        k.set(mi(&[-2, -2]), 0, int(1)).unwrap();
        k.set(mi(&[-2, -2]), 1, int(-1)).unwrap();
        let v = k.validate(&s, 2).unwrap();
        assert_eq!(v.points[0].decomposition_method, DecompositionMethod::Span);
        assert!(!v.pass);
        assert!(v.violations.iter().all(|x| matches!(x, KappaViolation::Decomposition { .. })));
    }

    #[test]
    fn positive_cone_rejects_bad_rows() {
        let s = OrderScheme::all_ones(2);
        assert!(KappaSpec::positive_cone(&s, vec![(mi(&[1, 1]), vec![int(1), int(1)])]).is_err());
        assert!(KappaSpec::positive_cone(&s, vec![(mi(&[-1, 0]), vec![int(0), int(1)])]).is_err());
    }

    #[test]
    fn central_scalar_examples() {
        let k = KappaSpec::point_at_zero(vec![int(5), int(0)]).unwrap();
        assert_eq!(k.central_scalar(&mi(&[0, 0]), 0).unwrap(), int(-5));
        assert_eq!(k.central_scalar(&mi(&[1, 0]), 0).unwrap(), int(0));
        assert!(k.central_scalar(&mi(&[0, 0]), 2).is_err());
        let c = KappaSpec::positive_cone_example(&OrderScheme::all_ones(2)).unwrap();
        assert_eq!(c.central_scalar(&mi(&[-1, -1]), 0).unwrap(), int(-1));
    }

    #[test]
    fn zeroth_relation_holds_on_valid_specs() {
        let s = OrderScheme::all_ones(2);
        let specs = [
            KappaSpec::point_at_zero(vec![ratio(3, 2), int(-7)]).unwrap(),
            KappaSpec::positive_cone(
                &s,
                vec![
                    (mi(&[1, 1]), vec![int(1), int(-1)]),
                    (mi(&[2, 0]), vec![int(0), int(4)]),
                ],
            )
            .unwrap(),
        ];
        for k in &specs {
            assert!(k.validate(&s, 2).unwrap().pass);
            for m in mode_box(2, 3) {
                let sum = (0..2).fold(Rational::zero(), |acc, l| {
                    acc + rational::int(m.coords()[l]) * k.central_scalar(&m, l).unwrap()
                });
                assert!(sum.is_zero(), "m={m}");
            }
        }
    }

    #[test]
    fn shrinking_support_keeps_pass() {
        let s = OrderScheme::all_ones(2);
        let k = KappaSpec::positive_cone(
            &s,
            vec![
                (mi(&[1, 1]), vec![int(1), int(-1)]),
                (mi(&[2, 0]), vec![int(0), int(4)]),
            ],
        )
        .unwrap();
        let mut smaller = k.clone();
        smaller.set(mi(&[2, 0]), 1, int(0)).unwrap();
        assert!(smaller.validate(&s, 2).unwrap().pass);
        assert_eq!(smaller.support().count(), 1);
    }

    #[test]
    fn records_round_trip() {
        let k = KappaSpec::positive_cone_example(&OrderScheme::all_ones(2)).unwrap();
        let json = serde_json::to_string(&k.to_records()).unwrap();
        let recs: Vec<KappaRecord> = serde_json::from_str(&json).unwrap();
        assert_eq!(KappaSpec::from_records(2, &recs).unwrap(), k);
        let dup = vec![recs[0].clone(), recs[0].clone()];
        assert!(KappaSpec::from_records(2, &dup).is_err());
    }
}
