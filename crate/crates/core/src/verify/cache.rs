use std::collections::HashMap;

use crate::fock::FockVector;
use crate::lattice::MultiIndex;
use crate::rational;
use crate::realization::{Generator, Realization};

/// Memoized `g(m) v` for one fixed vector `v`.
pub struct ModeCache<'a> {
    re: &'a Realization,
    v: &'a FockVector,
    map: HashMap<(Generator, MultiIndex), FockVector>,
}

impl<'a> ModeCache<'a> {
    pub fn new(re: &'a Realization, v: &'a FockVector) -> Self {
        ModeCache {
            re,
            v,
            map: HashMap::new(),
        }
    }

    pub fn vector(&self) -> &FockVector {
        self.v
    }

    pub fn get(&mut self, g: Generator, m: &MultiIndex) -> &FockVector {
        let key = (g, m.clone());
        if !self.map.contains_key(&key) {
            let w = self.apply_to(g, m, self.v);
            self.map.insert(key.clone(), w);
        }
        &self.map[&key]
    }

    fn cached(&self, g: Generator, m: &MultiIndex) -> &FockVector {
        &self.map[&(g, m.clone())]
    }

    /// `g(m) w` for an arbitrary vector, uncached.
    pub fn apply_to(&self, g: Generator, m: &MultiIndex, w: &FockVector) -> FockVector {
        if w.is_zero() {
            return FockVector::zero();
        }
        let op = self.re.mode(g, m).expect("generator index checked by caller");
        self.re.apply(&op, w)
    }

    /// `[g(m), h(n)] v`.
    pub fn bracket(&mut self, g: Generator, m: &MultiIndex, h: Generator, n: &MultiIndex) -> FockVector {
        self.get(h, n);
        self.get(g, m);
        let mut a = self.apply_to(g, m, self.cached(h, n));
        let b = self.apply_to(h, n, self.cached(g, m));
        a.add_scaled(&b, &-rational::one());
        a
    }
}
