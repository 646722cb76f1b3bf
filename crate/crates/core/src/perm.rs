//! Leaf permutations. Stored 0-based; the JSON/CLI surface is 1-based.

use std::fmt;

use crate::error::{Error, Result};

/// A bijection of `{0, .., k-1}`; `map[i]` is the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation { map: (0..k).collect() }
    }

    pub fn from_vec(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &m in &map {
            if m >= map.len() || seen[m] {
                return Err(Error::Malformed(format!("{map:?} is not a permutation")));
            }
            seen[m] = true;
        }
        Ok(Permutation { map })
    }

    /// Builds from 1-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::Malformed("permutation images are 1-based".into()));
        }
        Self::from_vec(images.iter().map(|i| i - 1).collect())
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.map.iter().map(|i| i + 1).collect()
    }

    /// Transposition of `a` and `b` (0-based) on `k` points.
    pub fn transposition(k: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(k);
        p.map.swap(a, b);
        p
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &m) in self.map.iter().enumerate() {
            inv[m] = i;
        }
        Permutation { map: inv }
    }

    /// `self` first, then `next`: `i ↦ next(self(i))`.
    pub fn then(&self, next: &Permutation) -> Self {
        assert_eq!(self.len(), next.len(), "permutation sizes differ");
        Permutation { map: self.map.iter().map(|&i| next.map[i]).collect() }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.len());
        for _ in 0..e.unsigned_abs() {
            acc = acc.then(&base);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &m)| i == m)
    }

    /// Some `s` with `i ↦ i + s (mod k)` for all `i`.
    pub fn cyclic_shift(&self) -> Option<usize> {
        let k = self.len();
        if k == 0 {
            return Some(0);
        }
        let s = (self.map[0] + k) % k;
        self.map.iter().enumerate().all(|(i, &m)| m == (i + s) % k).then_some(s)
    }

    /// Points moved by the permutation.
    pub fn support(&self) -> Vec<usize> {
        self.map.iter().enumerate().filter(|(i, m)| i != *m).map(|(i, _)| i).collect()
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] || self.map[start] == start {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut j = self.map[start];
            while j != start {
                seen[j] = true;
                cyc.push(j);
                j = self.map[j];
            }
            out.push(cyc);
        }
        out
    }

    /// 0 for even permutations, 1 for odd ones.
    pub fn sign_bit(&self) -> u8 {
        (self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2) as u8
    }

    /// Replaces source point `a` by `m` consecutive points mapped in order onto
    /// `m` consecutive points starting at the old image of `a`.
    pub fn expand(&self, a: usize, m: usize) -> Self {
        let b = self.map[a];
        let shift = |p: usize| if p > b { p + m - 1 } else { p };
        let mut map = Vec::with_capacity(self.len() + m - 1);
        for (i, &p) in self.map.iter().enumerate() {
            if i == a {
                map.extend((0..m).map(|j| b + j));
            } else {
                map.push(shift(p));
            }
        }
        Permutation { map }
    }

    /// Inverse of [`expand`](Self::expand): collapses sources `a..a+m` (which
    /// must map to consecutive images in order) into a single point.
    pub fn contract(&self, a: usize, m: usize) -> Self {
        let b = self.map[a];
        debug_assert!((0..m).all(|j| self.map[a + j] == b + j));
        let mut map = Vec::with_capacity(self.len() + 1 - m);
        for (i, &p) in self.map.iter().enumerate() {
            if i > a && i < a + m {
                continue;
            }
            map.push(if p > b { p - (m - 1) } else { p });
        }
        Permutation { map }
    }

    /// Adjacent transpositions `s_1, .., s_r` (given by their lower point) with
    /// `self = s_r ∘ … ∘ s_1`, i.e. applying `s_1` first.
    pub fn adjacent_factors(&self) -> Vec<usize> {
        // bubble sort on positions: self ∘ s_1 ∘ … ∘ s_r = id
        let mut arr = self.map.clone();
        let mut out = Vec::new();
        let n = arr.len();
        for pass in 0..n {
            for i in 0..n.saturating_sub(1 + pass) {
                if arr[i] > arr[i + 1] {
                    arr.swap(i, i + 1);
                    out.push(i);
                }
            }
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_one_based())
    }
}
