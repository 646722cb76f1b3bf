//! Exact piecewise-linear maps of (0,1] with slopes in a unit group.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::Scalar;
use crate::tree::LeafInterval;

/// `x ↦ img_left + λ^slope_exp · (x − dom_left)` on `(dom_left, dom_right]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Piece<S> {
    pub dom_left: S,
    pub dom_right: S,
    pub img_left: S,
    pub slope_exp: i64,
}

impl<S: Scalar> Piece<S> {
    pub fn img_right(&self) -> S {
        self.at(self.dom_right)
    }

    pub fn at(&self, x: S) -> S {
        self.img_left + S::unit_power(self.slope_exp) * (x - self.dom_left)
    }

    /// Preimage of `y` under the affine extension of the piece.
    pub fn preimage(&self, y: S) -> S {
        self.dom_left + S::unit_power(-self.slope_exp) * (y - self.img_left)
    }
}

/// Canonical form: pieces in domain order, adjacent pieces never share both
/// slope and a continuous junction. Equality of maps is equality of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PLMap<S> {
    pieces: Vec<Piece<S>>,
}

impl<S: Scalar> PLMap<S> {
    pub fn identity() -> Self {
        PLMap { pieces: vec![Piece { dom_left: S::zero(), dom_right: S::one(), img_left: S::zero(), slope_exp: 0 }] }
    }

    /// Map sending each domain leaf affinely onto its paired range leaf.
    pub fn from_leaf_pairs(pairs: impl IntoIterator<Item = (LeafInterval<S>, LeafInterval<S>)>) -> Self {
        let pieces = pairs
            .into_iter()
            .map(|(d, r)| Piece {
                dom_left: d.left,
                dom_right: d.right(),
                img_left: r.left,
                slope_exp: r.depth as i64 - d.depth as i64,
            })
            .collect();
        Self::normalized(pieces)
    }

    fn normalized(pieces: Vec<Piece<S>>) -> Self {
        let mut out: Vec<Piece<S>> = Vec::with_capacity(pieces.len());
        for p in pieces {
            if let Some(last) = out.last_mut() {
                if last.slope_exp == p.slope_exp && last.img_right() == p.img_left {
                    last.dom_right = p.dom_right;
                    continue;
                }
            }
            out.push(p);
        }
        PLMap { pieces: out }
    }

    pub fn pieces(&self) -> &[Piece<S>] {
        &self.pieces
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Breakpoints strictly inside (0,1).
    pub fn breakpoints(&self) -> Vec<S> {
        self.pieces[..self.pieces.len() - 1].iter().map(|p| p.dom_right).collect()
    }

    /// Image of `t ∈ (0,1]` under the left-continuous map.
    pub fn evaluate(&self, t: S) -> Result<S> {
        if t <= S::zero() || t > S::one() {
            return Err(Error::Domain(t.to_string()));
        }
        let i = self.pieces.partition_point(|p| p.dom_right < t);
        Ok(self.pieces[i].at(t))
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &PLMap<S>) -> Self {
        let mut out = Vec::new();
        for p in &self.pieces {
            let (a, b) = (p.img_left, p.img_right());
            let start = next.pieces.partition_point(|q| q.dom_right <= a);
            for q in &next.pieces[start..] {
                if q.dom_left >= b {
                    break;
                }
                let y0 = a.max(q.dom_left);
                let y1 = b.min(q.dom_right);
                out.push(Piece {
                    dom_left: p.preimage(y0),
                    dom_right: p.preimage(y1),
                    img_left: q.at(y0),
                    slope_exp: p.slope_exp + q.slope_exp,
                });
            }
        }
        Self::normalized(out)
    }

    pub fn inverse(&self) -> Self {
        let mut inv: Vec<Piece<S>> = self
            .pieces
            .iter()
            .map(|p| Piece { dom_left: p.img_left, dom_right: p.img_right(), img_left: p.dom_left, slope_exp: -p.slope_exp })
            .collect();
        inv.sort_by_key(|p| p.dom_left);
        Self::normalized(inv)
    }

    /// Checks that domain and image pieces both tile (0,1].
    pub fn check_bijective(&self) -> Result<()> {
        let tiles = |mut iv: Vec<(S, S)>| {
            iv.sort();
            let mut cur = S::zero();
            for (l, r) in iv {
                if l != cur || r <= l {
                    return false;
                }
                cur = r;
            }
            cur == S::one()
        };
        let dom = self.pieces.iter().map(|p| (p.dom_left, p.dom_right)).collect();
        let img = self.pieces.iter().map(|p| (p.img_left, p.img_right())).collect();
        if tiles(dom) && tiles(img) {
            Ok(())
        } else {
            Err(Error::Invariant("map pieces do not tile (0,1]".into()))
        }
    }
}

impl<S: Scalar> fmt::Display for PLMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.pieces {
            writeln!(
                f,
                "({}, {}] -> ({}, {}]  slope {}^{}",
                p.dom_left,
                p.dom_right,
                p.img_left,
                p.img_right(),
                S::SYMBOL,
                p.slope_exp
            )?;
        }
        Ok(())
    }
}
