//! The ternary group over Z[β]: generators, relators, and the two
//! homomorphisms to Z/2 whose joint kernel has index 4.

use std::fmt;

use crate::diagram::BetaDiagram;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::relators::{verify_with, RelatorInstance, RelatorReport};
use crate::ring::ZBeta;
use crate::tree::{TernaryCaret, TernaryCaretTree};
use crate::word::{GenKind, GeneratorSymbol as G, Word};

/// Generator `x_i` / `y_i`: with `i = 2q + r`, the domain is an `a`-spine with
/// `q + 1` carets carrying an extra `a`-caret (for `x`) or `b`-caret (for `y`)
/// on leaf `2q + r + 1`; the range is the `a`-spine with `q + 2` carets.
pub fn beta_generator(kind: GenKind, i: u32) -> Result<BetaDiagram> {
    let caret = match kind {
        GenKind::X => TernaryCaret::A,
        GenKind::Y => TernaryCaret::B,
        _ => return Err(Error::InvalidGenerator(format!("{}{i} is not an x or y generator", kind.letter()))),
    };
    let q = i as usize / 2;
    let domain = TernaryCaretTree::spine(q + 1, TernaryCaret::A).expand_leaf(i as usize, caret)?;
    let k = domain.leaf_count();
    BetaDiagram::new(domain, Permutation::identity(k), TernaryCaretTree::spine(q + 2, TernaryCaret::A))
}

/// Transposition of leaves `n + 1` and `n + 2` of the `a`-spine with
/// `⌊n/2⌋ + 2` carets; written `p_n` in words over the ternary system.
pub fn beta_transposition(n: u32) -> Result<BetaDiagram> {
    let spine = TernaryCaretTree::spine(n as usize / 2 + 2, TernaryCaret::A);
    let k = spine.leaf_count();
    BetaDiagram::permutation(spine, Permutation::transposition(k, n as usize, n as usize + 1))
}

pub fn beta_symbol(sym: G) -> Result<BetaDiagram> {
    sym.validate()?;
    let base = match sym.kind {
        GenKind::P => beta_transposition(sym.index)?,
        GenKind::C => return Err(Error::InvalidGenerator("cycle generators are not defined for the ternary system".into())),
        k => beta_generator(k, sym.index)?,
    };
    base.pow(sym.exp)
}

pub fn compile_beta_word(w: &Word) -> Result<BetaDiagram> {
    let mut acc = BetaDiagram::identity();
    for &s in w.symbols() {
        acc = acc.compose(&beta_symbol(s)?)?;
    }
    Ok(acc)
}

/// Instances of `a_i b_j = b_j a_{i+2}` (`i > j`, `a, b ∈ {x, y}`) and
/// `y_k² = x_k x_{k+1}` with all indices `i, j, k` at most `max`.
pub fn beta_relator_instances(max: u32) -> Vec<RelatorInstance> {
    let mut out = Vec::new();
    let kinds = [(GenKind::X, "x"), (GenKind::Y, "y")];
    for i in 0..=max {
        for j in 0..i {
            for (a, an) in kinds {
                for (b, bn) in kinds {
                    let ai = G::new(a, i, 1);
                    let bj = G::new(b, j, 1);
                    out.push(RelatorInstance::new(
                        &format!("{an}{bn}"),
                        vec![ai, bj],
                        vec![bj, G::new(a, i + 2, 1)],
                        vec![("i", i), ("j", j)],
                    ));
                }
            }
        }
    }
    for k in 0..=max {
        out.push(RelatorInstance::new("yy=xx", vec![G::y(k).pow(2)], vec![G::x(k), G::x(k + 1)], vec![("k", k)]));
    }
    out
}

pub fn verify_beta_relators(max: u32) -> RelatorReport {
    verify_with::<ZBeta, _>(&beta_relator_instances(max), |w| Ok(compile_beta_word(w)?.to_plmap()))
}

/// Parity of `b`-carets over both trees, a homomorphism onto Z/2 sending
/// `y`-generators to 1.
pub fn beta_parity(v: &BetaDiagram) -> u8 {
    v.y_parity()
}

/// Sign of the leaf permutation; ternary expansions replace one point by
/// three consecutive ones, an even change.
pub fn perm_sign(v: &BetaDiagram) -> u8 {
    v.perm_sign()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Index4Class {
    pub rho: u8,
    pub phi: u8,
}

impl std::ops::Add for Index4Class {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Index4Class { rho: self.rho ^ o.rho, phi: self.phi ^ o.phi }
    }
}

impl Index4Class {
    /// Membership in the index-4 kernel.
    pub fn is_even(self) -> bool {
        self.rho == 0 && self.phi == 0
    }
}

impl fmt::Display for Index4Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.rho, self.phi)
    }
}

pub fn index4_class(v: &BetaDiagram) -> Index4Class {
    Index4Class { rho: perm_sign(v), phi: beta_parity(v) }
}

/// Elements realizing the four classes `(0,0), (0,1), (1,0), (1,1)`.
pub fn index4_witnesses() -> Result<[BetaDiagram; 4]> {
    let y0 = beta_generator(GenKind::Y, 0)?;
    let t = beta_transposition(0)?;
    let ty = t.compose(&y0)?;
    Ok([BetaDiagram::identity(), y0, t, ty])
}
