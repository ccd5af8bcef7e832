//! Exact linear algebra over ℚ(i)(μ).
//!
//! [`Echelon`] keeps a sparse row-reduced basis of a subspace, pivoting on the
//! largest key of each row, and yields canonical normal forms modulo that
//! subspace. The dense helpers operate on small square or rectangular systems.

use std::collections::BTreeMap;

use crate::error::{QpbError, Result};
use crate::lin::Lin;
use crate::scalar::MuScalar;

/// Incrementally built echelon basis; each stored row has leading (largest)
/// key equal to its pivot with coefficient one.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, Lin<K>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn rows(&self) -> impl Iterator<Item = &Lin<K>> {
        self.rows.values()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.rows.contains_key(k)
    }

    /// Normal form of `v`: no pivot keys survive.
    pub fn reduce(&self, v: &Lin<K>) -> Lin<K> {
        let mut v = v.clone();
        let mut bound: Option<K> = None;
        loop {
            // largest key strictly below `bound` that is a pivot
            let next = v
                .iter()
                .rev()
                .map(|(k, _)| k)
                .filter(|k| bound.as_ref().is_none_or(|b| *k < b))
                .find(|k| self.rows.contains_key(*k))
                .cloned();
            let Some(k) = next else { break };
            let c = v.coeff(&k);
            v.add_scaled(&self.rows[&k], &(-&c));
            bound = Some(k);
        }
        v
    }

    /// Adds `v` to the span; returns false when it was already contained.
    pub fn insert(&mut self, v: &Lin<K>) -> bool {
        let r = self.reduce(v);
        let Some((k, c)) = r.leading() else { return false };
        let k = k.clone();
        let row = r.scale(&c.inv().expect("nonzero leading coefficient"));
        self.rows.insert(k, row);
        true
    }

    pub fn contains(&self, v: &Lin<K>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Fully reduced basis (each pivot appears in exactly one row).
    pub fn reduced_basis(&self) -> Vec<Lin<K>> {
        let keys: Vec<K> = self.rows.keys().cloned().collect();
        let mut out = Vec::new();
        for k in keys {
            let row = &self.rows[&k];
            let (lead_k, _) = row.leading().unwrap();
            let mut tail = row.clone();
            tail.remove(lead_k);
            let mut r = self.reduce(&tail);
            r.add_term(k.clone(), MuScalar::one());
            out.push(r);
        }
        out
    }
}

/// Rank of a family of vectors.
pub fn rank_of<K: Ord + Clone>(vs: &[Lin<K>]) -> usize {
    let mut e = Echelon::new();
    for v in vs {
        e.insert(v);
    }
    e.rank()
}

pub type Matrix = Vec<Vec<MuScalar>>;

pub fn zeros(r: usize, c: usize) -> Matrix {
    vec![vec![MuScalar::zero(); c]; r]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = MuScalar::one();
    }
    m
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = zeros(n, m);
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[k][j].is_zero() {
                    out[i][j] = &out[i][j] + &(aik * &b[k][j]);
                }
            }
        }
    }
    out
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for j in c..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    if !m[r][j].is_zero() {
                        let t = &f * &m[r][j];
                        m[i][j] = &m[i][j] - &t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut m = m.clone();
    rref(&mut m).len()
}

/// Basis of the right null space {x : m·x = 0}.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<MuScalar>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![MuScalar::zero(); cols];
            x[f] = MuScalar::one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = -&a[r][f];
            }
            x
        })
        .collect()
}

/// Solves m·x = b; errors when inconsistent. Free variables are set to zero.
pub fn solve(m: &Matrix, b: &[MuScalar]) -> Result<Vec<MuScalar>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return Err(QpbError::Invalid("inconsistent linear system".into()));
    }
    let mut x = vec![MuScalar::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols].clone();
    }
    Ok(x)
}

pub fn inverse(m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(identity(n)[i].iter().cloned());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(QpbError::Invalid("singular matrix".into()));
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}
