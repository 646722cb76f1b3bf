//! The y-parity homomorphism, its kernels, and the constructive machinery
//! showing the kernel is generated by (proper) transpositions.

use std::fmt;

use crate::canonical::canonical_triple;
use crate::diagram::{ElementClass, TreePairDiagram};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::presentation::compile_word;
use crate::ring::{Scalar, ZTau};
use crate::tree::{make_exposed, Caret, CaretKind, CaretTree, LeafInterval, Step, Tree};
use crate::word::{GeneratorSymbol, Word};

/// Image of `v` under the y-parity homomorphism to Z/2.
pub fn y_parity(v: &TreePairDiagram) -> u8 {
    v.y_parity()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    Ftau,
    Ttau,
    Vtau,
    Txz,
    Vxz,
}

impl std::str::FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ftau" | "f" => Ok(Group::Ftau),
            "ttau" | "t" => Ok(Group::Ttau),
            "vtau" | "v" => Ok(Group::Vtau),
            "txz" => Ok(Group::Txz),
            "vxz" => Ok(Group::Vxz),
            _ => Err(Error::Parse(format!("unknown group {s:?}"))),
        }
    }
}

pub fn member(v: &TreePairDiagram, g: Group) -> bool {
    let class = v.classify();
    match g {
        Group::Ftau => class == ElementClass::F,
        Group::Ttau => class <= ElementClass::T,
        Group::Vtau => true,
        Group::Txz => class <= ElementClass::T && v.y_parity() == 0,
        Group::Vxz => v.y_parity() == 0,
    }
}

/// `z_n = y_{2n} y_{2n+2}`, a parity-0 element of F.
pub fn z_generator(n: u32) -> Result<TreePairDiagram> {
    compile_word(&Word(vec![GeneratorSymbol::y(2 * n), GeneratorSymbol::y(2 * n + 2)]))
}

/// Whether the diagram has equal domain and range trees.
pub fn is_permutation_diagram(v: &TreePairDiagram) -> bool {
    v.domain() == v.range()
}

/// One recorded stage of [`factor_into_permutations`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    /// `y`-carets in both trees of the remaining diagram.
    pub y_carets: usize,
    /// Carets in the domain of the remaining diagram.
    pub carets: usize,
    /// True for steps removing a pair of `y`-carets.
    pub y_step: bool,
}

#[derive(Clone, Debug)]
pub struct PermFactorization {
    /// Permutation diagrams whose left-to-right product is the input.
    pub factors: Vec<TreePairDiagram>,
    /// Remaining-diagram statistics, starting with the canonical triple.
    pub audit: Vec<Stage>,
}

fn y_total(d: &TreePairDiagram) -> usize {
    d.domain().count_type(Caret::Y) + d.range().count_type(Caret::Y)
}

fn stage(d: &TreePairDiagram, y_step: bool) -> Stage {
    Stage { y_carets: y_total(d), carets: d.domain().caret_count(), y_step }
}

/// Permutation sending `from[j]` to `to[j]` and the remaining points to the
/// remaining images in increasing order.
fn partial_to_perm(k: usize, from: &[usize], to: &[usize]) -> Permutation {
    let mut map = vec![usize::MAX; k];
    for (&f, &t) in from.iter().zip(to) {
        map[f] = t;
    }
    let mut free = (0..k).filter(|t| !to.contains(t));
    for m in map.iter_mut().filter(|m| **m == usize::MAX) {
        *m = free.next().unwrap();
    }
    Permutation::from_vec(map).expect("bijection by construction")
}

/// Pre-composes `d` with `(domain, σ, domain)` so that domain leaves
/// `(i, i+1)` go to range leaves `(j, j+1)`, then removes the caret pair
/// above them. Returns the inverse factor `(domain, σ⁻¹, domain)`.
fn cancel_pair(d: &mut TreePairDiagram, i: usize, j: usize) -> Result<TreePairDiagram> {
    let k = d.leaf_count();
    let inv = d.perm().inverse();
    let sigma = partial_to_perm(k, &[i, i + 1], &[inv.apply(j), inv.apply(j + 1)]);
    let factor = TreePairDiagram::permutation(d.domain().clone(), sigma.inverse())?;
    let perm = sigma.then(d.perm());
    let mut dom = d.domain().clone();
    let mut rng = d.range().clone();
    let dpath = dom.leaf_path(i)?;
    let rpath = rng.leaf_path(j)?;
    dom.collapse_in_place(&dpath[..dpath.len() - 1])?;
    rng.collapse_in_place(&rpath[..rpath.len() - 1])?;
    *d = TreePairDiagram::new(dom, perm.contract(i, 2), rng)?;
    Ok(factor)
}

/// Leftmost exposed caret, as its first leaf index.
fn leftmost_exposed(t: &CaretTree) -> Option<usize> {
    t.exposed_carets().into_iter().map(|(_, i)| i).min()
}

/// Writes a parity-0 element as a product of permutation diagrams
/// `(S, σ, S)`. `y`-carets of the canonical triple are paired left to right;
/// each pairing creates an exposed `y`-caret in the domain and a matching one
/// in the range, and a leaf permutation makes them cancel. Once only
/// `x`-carets remain, exposed carets are cancelled the same way.
pub fn factor_into_permutations(v: &TreePairDiagram) -> Result<PermFactorization> {
    if v.y_parity() != 0 {
        return Err(Error::ParityViolation);
    }
    if is_permutation_diagram(v) {
        return Ok(PermFactorization { factors: vec![v.clone()], audit: vec![stage(v, false)] });
    }
    let mut d = canonical_triple(v)?;
    let mut audit = vec![stage(&d, false)];
    let mut factors = Vec::new();
    loop {
        let mut ys: Vec<(usize, Vec<usize>)> = d
            .domain()
            .caret_paths()
            .into_iter()
            .filter(|p| d.domain().subtree(p).unwrap().root_caret() == Some(Caret::Y))
            .map(|p| (d.domain().first_leaf_under(&p).unwrap(), p))
            .collect();
        if ys.is_empty() {
            break;
        }
        if ys.len() < 2 {
            return Err(Error::Invariant("odd number of y-carets in a parity-0 canonical triple".into()));
        }
        ys.sort();
        let before = y_total(&d);
        // expose the first y-caret
        let exposure = make_exposed(d.domain(), &ys[0].1)?;
        for s in &exposure.script {
            d.apply_domain_step(s)?;
        }
        let mut c1_leaf = d.domain().first_leaf_under(&exposure.exposed)?;
        // second y-caret: re-locate the leftmost y other than the exposed one
        let c2 = d
            .domain()
            .caret_paths()
            .into_iter()
            .filter(|p| *p != exposure.exposed && d.domain().subtree(p).unwrap().root_caret() == Some(Caret::Y))
            .min_by_key(|p| d.domain().first_leaf_under(p).unwrap())
            .ok_or_else(|| Error::Invariant("second y-caret vanished".into()))?;
        let c2_leaf = d.domain().first_leaf_under(&c2)?;
        let d1_leaf = d.perm().apply(c2_leaf);
        // y on the left leaf of c2 (mirrored on the range as a y-caret), then y(y,·) → x(·,x)
        d.apply_domain_step(&Step::Expand { leaf: c2_leaf, caret: Caret::Y })?;
        d.apply_domain_step(&Step::Move { path: c2.clone(), mv: crate::tree::YY_TO_XX })?;
        if c2_leaf < c1_leaf {
            c1_leaf += 1;
        }
        let factor = cancel_pair(&mut d, c1_leaf, d1_leaf)?;
        if !factor.perm().is_identity() {
            factors.push(factor);
        }
        let st = stage(&d, true);
        if st.y_carets + 2 != before {
            return Err(Error::Invariant(format!("y-caret count went from {before} to {}", st.y_carets)));
        }
        audit.push(st);
    }
    while d.leaf_count() > 1 {
        let i = leftmost_exposed(d.domain()).unwrap();
        let j = leftmost_exposed(d.range()).unwrap();
        let factor = cancel_pair(&mut d, i, j)?;
        if !factor.perm().is_identity() {
            factors.push(factor);
        }
        audit.push(stage(&d, false));
    }
    debug_assert!(d.domain().is_leaf() && d.range().is_leaf());
    Ok(PermFactorization { factors, audit })
}

/// `(T, (a b), T)` with `T` having at least three carets.
#[derive(Clone, PartialEq, Eq)]
pub struct ProperTransposition(TreePairDiagram);

impl ProperTransposition {
    pub fn new(d: TreePairDiagram) -> Result<Self> {
        if d.domain() != d.range() {
            return Err(Error::Precondition("domain and range trees differ".into()));
        }
        let cycles = d.perm().cycles();
        if cycles.len() != 1 || cycles[0].len() != 2 {
            return Err(Error::Precondition("permutation is not a transposition".into()));
        }
        if d.domain().caret_count() < 3 {
            return Err(Error::Precondition("tree has fewer than three carets".into()));
        }
        Ok(ProperTransposition(d))
    }

    /// Transposition of leaves `a` and `b` (0-based) of `tree`.
    pub fn on(tree: CaretTree, a: usize, b: usize) -> Result<Self> {
        let k = tree.leaf_count();
        if a >= k || b >= k || a == b {
            return Err(Error::Precondition(format!("leaves {a}, {b} invalid for {k} leaves")));
        }
        Self::new(TreePairDiagram::permutation(tree, Permutation::transposition(k, a, b))?)
    }

    pub fn diagram(&self) -> &TreePairDiagram {
        &self.0
    }

    pub fn tree(&self) -> &CaretTree {
        self.0.domain()
    }

    /// The two swapped leaves, in increasing order.
    pub fn involved(&self) -> (usize, usize) {
        let c = &self.0.perm().cycles()[0];
        (c[0].min(c[1]), c[0].max(c[1]))
    }

    /// Equal element on a tree where the uninvolved leaf `u` carries a caret.
    fn expand_uninvolved(&self, u: usize, c: Caret) -> Result<Self> {
        let (a, b) = self.involved();
        debug_assert!(u != a && u != b);
        Self::new(self.0.expand(u, c)?)
    }
}

impl fmt::Debug for ProperTransposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProperTransposition{:?}", self.0)
    }
}

/// Adds `x`-carets to a permutation diagram until its tree has at least
/// `min` carets, on fixed leaves when there are any (so the permutation keeps
/// its cycle type) and on every leaf otherwise.
fn pad_permutation(d: &TreePairDiagram, min: usize) -> Result<TreePairDiagram> {
    let mut d = d.clone();
    while d.domain().caret_count() < min {
        let fixed = (0..d.leaf_count()).rev().find(|&i| d.perm().apply(i) == i);
        match fixed {
            Some(u) => d = d.expand(u, Caret::X)?,
            None => {
                for leaf in (0..d.leaf_count()).rev() {
                    d = d.expand(leaf, Caret::X)?;
                }
            }
        }
    }
    debug_assert!(is_permutation_diagram(&d));
    Ok(d)
}

/// Splits a permutation diagram into proper transpositions (left to right).
pub fn split_permutation(d: &TreePairDiagram) -> Result<Vec<ProperTransposition>> {
    if !is_permutation_diagram(d) {
        return Err(Error::Precondition("not a permutation diagram".into()));
    }
    if d.perm().is_identity() {
        return Ok(vec![]);
    }
    let d = pad_permutation(d, 3)?;
    let k = d.leaf_count();
    let mut sigma = d.perm().clone();
    let mut out = Vec::new();
    while let Some(&i) = sigma.support().first() {
        let a = sigma.inverse().apply(i);
        let t = Permutation::transposition(k, i, a);
        out.push(ProperTransposition::new(TreePairDiagram::permutation(d.domain().clone(), t.clone())?)?);
        sigma = t.then(&sigma);
    }
    Ok(out)
}

/// Writes a parity-0 element as a product of proper transpositions.
pub fn factor_into_proper_transpositions(v: &TreePairDiagram) -> Result<Vec<ProperTransposition>> {
    let perms = factor_into_permutations(v)?;
    let mut out = Vec::new();
    for f in &perms.factors {
        out.extend(split_permutation(f)?);
    }
    Ok(out)
}

/// An element `g` of the parity-0 kernel with `g · t2 · g⁻¹ = t1`.
pub fn conjugator(t1: &ProperTransposition, t2: &ProperTransposition) -> Result<TreePairDiagram> {
    let (mut t1, mut t2) = (t1.clone(), t2.clone());
    // pad the smaller tree on its last uninvolved leaf
    while t1.tree().leaf_count() != t2.tree().leaf_count() {
        let small = if t1.tree().leaf_count() < t2.tree().leaf_count() { &mut t1 } else { &mut t2 };
        let u = last_uninvolved(small);
        *small = small.expand_uninvolved(u, Caret::X)?;
    }
    let k = t1.tree().leaf_count();
    let (a1, b1) = t1.involved();
    let (a2, b2) = t2.involved();
    let sigma = partial_to_perm(k, &[a1, b1], &[a2, b2]);
    let mut g = TreePairDiagram::new(t1.tree().clone(), sigma.clone(), t2.tree().clone())?;
    if g.y_parity() == 1 {
        // a y-caret on an uninvolved leaf, an x-caret on its image
        let u = last_uninvolved(&t1);
        let mut dom = g.domain().clone();
        let mut rng = g.range().clone();
        dom.expand_leaf_in_place(u, Caret::Y)?;
        rng.expand_leaf_in_place(sigma.apply(u), Caret::X)?;
        g = TreePairDiagram::new(dom, sigma.expand(u, 2), rng)?;
    }
    Ok(g)
}

fn last_uninvolved(t: &ProperTransposition) -> usize {
    let (a, b) = t.involved();
    (0..t.tree().leaf_count()).rev().find(|&u| u != a && u != b).expect("at least four leaves")
}

/// Intermediate elements of [`commutator_transposition`].
#[derive(Clone, Debug)]
pub struct CommutatorWitness {
    /// Leaf of the common tree moved entirely off itself.
    pub source: LeafInterval<ZTau>,
    /// Image of `source`, also a leaf of the common tree.
    pub target: LeafInterval<ZTau>,
    pub g: TreePairDiagram,
    pub u: TreePairDiagram,
    pub h: TreePairDiagram,
    /// `h · u · h⁻¹ · u⁻¹`, a transposition swapping `source` and `target`.
    pub w: ProperTransposition,
}

fn overlaps<S: Scalar>(a: &LeafInterval<S>, b: &LeafInterval<S>) -> bool {
    a.left < b.right() && b.left < a.right()
}

fn contains<S: Scalar>(outer: &LeafInterval<S>, inner: &LeafInterval<S>) -> bool {
    outer.left <= inner.left && inner.right() <= outer.right()
}

/// Some tree having both (disjoint) intervals as leaves.
fn tree_with_leaves(targets: &[LeafInterval<ZTau>]) -> Option<CaretTree> {
    fn go(node: LeafInterval<ZTau>, targets: &[LeafInterval<ZTau>]) -> Option<CaretTree> {
        if targets.contains(&node) || !targets.iter().any(|t| overlaps(&node, t)) {
            return Some(Tree::Leaf);
        }
        if targets.iter().all(|t| t.depth <= node.depth) {
            return None;
        }
        'types: for &c in Caret::all() {
            let mut kids = Vec::new();
            let mut left = node.left;
            for &leg in c.legs() {
                let child = LeafInterval { left, depth: node.depth + leg };
                if targets.iter().any(|t| overlaps(&child, t) && !contains(&child, t)) {
                    continue 'types;
                }
                match go(child, targets) {
                    Some(sub) => kids.push(sub),
                    None => continue 'types,
                }
                left = child.right();
            }
            return Some(Tree::Node(c, kids));
        }
        None
    }
    go(LeafInterval { left: ZTau::ZERO, depth: 0 }, targets)
}

/// Builds, from a non-identity `v`, a proper transposition in the normal
/// closure of `v` via two commutators: with a leaf `I` sent affinely onto a
/// disjoint leaf `J`, and both split by an `x`-caret into `(l0, l1)` and
/// `(k0, k1)`, `g` swaps `l0, l1`, `u = g·v⁻¹·g·v` swaps both pairs, `h`
/// swaps `l0, k0`, and `w = h·u·h·u` swaps `I` with `J`. Searches at most
/// `max_rounds` rounds of refinement for a suitable `I`.
pub fn commutator_transposition(v: &TreePairDiagram, max_rounds: usize) -> Result<CommutatorWitness> {
    if v.is_identity() {
        return Err(Error::Identity);
    }
    let mut d = v.clone();
    for _ in 0..=max_rounds {
        let dom = d.domain().leaf_intervals();
        let rng = d.range().leaf_intervals();
        for (i, src) in dom.iter().enumerate() {
            let dst = rng[d.perm().apply(i)];
            if overlaps(src, &dst) {
                continue;
            }
            let Some(z) = tree_with_leaves(&[*src, dst]) else { continue };
            if z.leaf_count() < 3 {
                continue;
            }
            return commutator_from(v, &z, *src, dst);
        }
        for leaf in (0..d.leaf_count()).rev() {
            d = d.expand(leaf, Caret::X)?;
        }
    }
    Err(Error::SearchExhausted(format!("no leaf moved off itself within {max_rounds} refinement rounds")))
}

fn commutator_from(
    v: &TreePairDiagram,
    z: &CaretTree,
    source: LeafInterval<ZTau>,
    target: LeafInterval<ZTau>,
) -> Result<CommutatorWitness> {
    let leaves = z.leaf_intervals();
    let l = leaves.iter().position(|x| *x == source).unwrap();
    let k = leaves.iter().position(|x| *x == target).unwrap();
    // split both with x-carets; expand the later one first so indices stay valid
    let mut zz = z.clone();
    zz.expand_leaf_in_place(l.max(k), Caret::X)?;
    zz.expand_leaf_in_place(l.min(k), Caret::X)?;
    let (l0, k0) = if l < k { (l, k + 1) } else { (l + 1, k) };
    let n = zz.leaf_count();
    let g = TreePairDiagram::permutation(zz.clone(), Permutation::transposition(n, l0, l0 + 1))?;
    let h = TreePairDiagram::permutation(zz.clone(), Permutation::transposition(n, l0, k0))?;
    let vinv = v.invert();
    let u = TreePairDiagram::product([&g, &vinv, &g, v])?;
    let w = TreePairDiagram::product([&h, &u, &h, &u])?;
    let swap = TreePairDiagram::permutation(z.clone(), Permutation::transposition(z.leaf_count(), l, k))?;
    if !w.equals(&swap) {
        return Err(Error::Invariant("commutator is not the expected transposition".into()));
    }
    let w = ProperTransposition::new(pad_permutation(&swap, 3)?)?;
    Ok(CommutatorWitness { source, target, g, u, h, w })
}
