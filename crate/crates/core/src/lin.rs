//! Sparse finite linear combinations with [`MuScalar`] coefficients.

use std::collections::BTreeMap;

use crate::scalar::MuScalar;

/// A finite formal sum `Σ c_k·k`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lin<K: Ord> {
    terms: BTreeMap<K, MuScalar>,
}

impl<K: Ord> Default for Lin<K> {
    fn default() -> Self {
        Lin { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Lin<K> {
    pub fn zero() -> Self {
        Lin::default()
    }

    pub fn single(k: K, c: MuScalar) -> Self {
        let mut l = Lin::zero();
        l.add_term(k, c);
        l
    }

    pub fn basis(k: K) -> Self {
        Lin::single(k, MuScalar::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (K, MuScalar)>>(it: I) -> Self {
        let mut l = Lin::zero();
        for (k, c) in it {
            l.add_term(k, c);
        }
        l
    }

    pub fn add_term(&mut self, k: K, c: MuScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&k);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Lin<K>, c: &MuScalar) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn add_assign(&mut self, other: &Lin<K>) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn add(&self, other: &Lin<K>) -> Lin<K> {
        let mut r = self.clone();
        r.add_assign(other);
        r
    }

    pub fn sub(&self, other: &Lin<K>) -> Lin<K> {
        let mut r = self.clone();
        r.add_scaled(other, &MuScalar::from_int(-1));
        r
    }

    pub fn neg(&self) -> Lin<K> {
        self.scale(&MuScalar::from_int(-1))
    }

    pub fn scale(&self, c: &MuScalar) -> Lin<K> {
        if c.is_zero() {
            return Lin::zero();
        }
        Lin { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &K) -> MuScalar {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&K, &MuScalar)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn leading(&self) -> Option<(&K, &MuScalar)> {
        self.terms.iter().next_back()
    }

    pub fn remove(&mut self, k: &K) -> Option<MuScalar> {
        self.terms.remove(k)
    }

    /// Coefficient-wise complex conjugation (keys unchanged).
    pub fn conj(&self) -> Lin<K> {
        Lin { terms: self.terms.iter().map(|(k, v)| (k.clone(), v.conj())).collect() }
    }

    pub fn map_coeffs<F: FnMut(&MuScalar) -> MuScalar>(&self, mut f: F) -> Lin<K> {
        Lin::from_terms(self.terms.iter().map(|(k, v)| (k.clone(), f(v))))
    }

    /// Linear extension of a key map.
    pub fn map_lin<K2: Ord + Clone, F: FnMut(&K) -> Lin<K2>>(&self, mut f: F) -> Lin<K2> {
        let mut out = Lin::zero();
        for (k, v) in &self.terms {
            out.add_scaled(&f(k), v);
        }
        out
    }

    pub fn try_map_lin<K2: Ord + Clone, E, F: FnMut(&K) -> Result<Lin<K2>, E>>(
        &self,
        mut f: F,
    ) -> Result<Lin<K2>, E> {
        let mut out = Lin::zero();
        for (k, v) in &self.terms {
            out.add_scaled(&f(k)?, v);
        }
        Ok(out)
    }
}

impl<K: Ord + Clone> FromIterator<(K, MuScalar)> for Lin<K> {
    fn from_iter<I: IntoIterator<Item = (K, MuScalar)>>(it: I) -> Self {
        Lin::from_terms(it)
    }
}
