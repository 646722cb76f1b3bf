//! Standard generators of the golden-ratio groups and word compilation.

use crate::canonical::canonical_triple;
use crate::diagram::{ElementClass, TreePairDiagram};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::tree::{Caret, CaretTree, Step, Tree};
use crate::word::{GenKind, GeneratorSymbol, Word};

/// Diagram of a single generator raised to its exponent.
pub fn generator(sym: GeneratorSymbol) -> Result<TreePairDiagram> {
    sym.validate()?;
    let n = sym.index as usize;
    match sym.kind {
        GenKind::C => {
            let k = n + 2;
            let s = sym.exp.rem_euclid(k as i64) as usize;
            let perm = Permutation::from_vec((0..k).map(|i| (i + s) % k).collect())?;
            TreePairDiagram::permutation(CaretTree::spine(n + 1, Caret::X), perm)
        }
        GenKind::P if sym.exp % 2 == 0 => Ok(TreePairDiagram::identity()),
        _ => base_generator(sym.kind, n)?.pow(sym.exp),
    }
}

fn base_generator(kind: GenKind, n: usize) -> Result<TreePairDiagram> {
    match kind {
        GenKind::X | GenKind::Y => {
            let c = if kind == GenKind::X { Caret::X } else { Caret::Y };
            let domain = CaretTree::spine(n + 1, Caret::X).expand_leaf(n, c)?;
            TreePairDiagram::new(domain, Permutation::identity(n + 3), CaretTree::spine(n + 2, Caret::X))
        }
        GenKind::C => generator(GeneratorSymbol::c(n as u32)),
        GenKind::P => {
            TreePairDiagram::permutation(CaretTree::spine(n + 2, Caret::X), Permutation::transposition(n + 3, n, n + 1))
        }
    }
}

/// Left-to-right product of the generators in `w`.
pub fn compile_word(w: &Word) -> Result<TreePairDiagram> {
    let mut acc = TreePairDiagram::identity();
    for &s in w.symbols() {
        s.validate()?;
        // π_i fixes the last leaf of its spine, so on any longer x-spine it is
        // still the transposition of leaves i and i + 1
        let k = acc.leaf_count();
        if s.kind == GenKind::P && s.index as usize + 3 <= k && is_x_spine(acc.range()) {
            if s.exp % 2 != 0 {
                let t = Permutation::transposition(k, s.index as usize, s.index as usize + 1);
                let (domain, perm, range) = acc.into_parts();
                acc = TreePairDiagram::new(domain, perm.then(&t), range)?;
            }
            continue;
        }
        acc = acc.compose(&generator(s)?)?;
    }
    Ok(acc)
}

fn is_x_spine(t: &CaretTree) -> bool {
    let mut t = t;
    while let Tree::Node(c, ch) = t {
        if *c != Caret::X || !ch[0].is_leaf() {
            return false;
        }
        t = &ch[1];
    }
    true
}

/// Positive word `g` with `compile(g) = (tree, id, spine)`, read off by
/// rotating the first spine caret whose left child is a caret.
fn peel(tree: &CaretTree) -> Result<Vec<GeneratorSymbol>> {
    let mut t = tree.clone();
    let mut out: Vec<GeneratorSymbol> = Vec::new();
    let mut n = 0u32;
    let mut spine = Vec::new();
    loop {
        let (kind, ch) = match t.subtree(&spine) {
            Some(Tree::Node(Caret::X, ch)) => match ch[0].root_caret() {
                None => {
                    spine.push(1);
                    n += 1;
                    continue;
                }
                Some(Caret::X) => (GenKind::X, ch),
                Some(Caret::Y) => (GenKind::Y, ch),
            },
            Some(Tree::Leaf) => break,
            _ => return Err(Error::Invariant("spine is not all x".into())),
        };
        // x(C(g1, g2), rest) → x(g1, x(g2, rest))
        let gc = ch[0].children();
        let rotated = Tree::node(
            Caret::X,
            vec![gc[0].clone(), Tree::node(Caret::X, vec![gc[1].clone(), ch[1].clone()])],
        );
        replace_subtree(&mut t, &spine, rotated);
        match out.last_mut() {
            Some(last) if last.kind == kind && last.index == n => last.exp += 1,
            _ => out.push(GeneratorSymbol::new(kind, n, 1)),
        }
    }
    Ok(out)
}

fn replace_subtree(t: &mut CaretTree, path: &[usize], new: CaretTree) {
    let mut cur = t;
    for &p in path {
        let Tree::Node(_, ch) = cur else { unreachable!() };
        cur = &mut ch[p];
    }
    *cur = new;
}

/// Word for `(spine, perm, spine)` on `k ≥ 3` leaves: a single `c_{k-2}`
/// power when it is a cyclic shift, otherwise a product of adjacent
/// transpositions `π_i`.
fn permutation_word(perm: &Permutation) -> Word {
    let k = perm.len();
    if perm.is_identity() {
        return Word::empty();
    }
    let cyc = GeneratorSymbol::c(k as u32 - 2);
    if let Some(s) = perm.cyclic_shift() {
        return Word(vec![cyc.pow(s as i64)]);
    }
    let mut w = Word::empty();
    for i in perm.adjacent_factors() {
        if i + 3 <= k {
            w.push(GeneratorSymbol::p(i as u32));
        } else {
            // the last pair is π_{k-3} conjugated by c_{k-2}
            w.push(cyc.inverse());
            w.push(GeneratorSymbol::p(k as u32 - 3));
            w.push(cyc);
        }
    }
    w.normalized()
}

/// Normal form `p · m · q⁻¹`: `p` a positive `x`/`y` word in increasing
/// order with `y`-exponents 1, `m` a word in cycles and transpositions (one
/// cycle power for T-elements), `q` a positive `x` word.
pub fn to_normal_word(v: &TreePairDiagram) -> Result<Word> {
    let mut d = canonical_triple(v)?;
    if !d.perm().is_identity() && d.leaf_count() < 3 {
        let last = d.leaf_count() - 1;
        d.apply_range_step(&Step::Expand { leaf: last, caret: Caret::X })?;
    }
    let p = peel(d.domain())?;
    let q = peel(d.range())?;
    let middle = permutation_word(d.perm());
    let w = Word(p).concat(&middle).concat(&Word(q).inverse());
    Ok(w.normalized())
}

/// Checks the syntactic shape produced by [`to_normal_word`]; for elements of
/// class T the middle must be a single cycle power, for F it must be empty.
pub fn check_normal_shape(w: &Word, class: ElementClass) -> std::result::Result<(), String> {
    let syms = w.symbols();
    let pre = syms.iter().take_while(|s| matches!(s.kind, GenKind::X | GenKind::Y) && s.exp > 0).count();
    let post = syms[pre..]
        .iter()
        .rev()
        .take_while(|s| s.kind == GenKind::X && s.exp < 0)
        .count();
    let (prefix, rest) = syms.split_at(pre);
    let (middle, suffix) = rest.split_at(rest.len() - post);
    let key = |s: &GeneratorSymbol| (s.index, s.kind == GenKind::Y);
    if prefix.windows(2).any(|p| key(&p[0]) >= key(&p[1])) {
        return Err(format!("positive part of {w} is not in increasing order"));
    }
    if prefix.iter().any(|s| s.kind == GenKind::Y && s.exp != 1) {
        return Err(format!("y exponent other than 1 in {w}"));
    }
    if suffix.windows(2).any(|p| p[0].index <= p[1].index) {
        return Err(format!("negative part of {w} is not in decreasing order"));
    }
    if middle.iter().any(|s| !matches!(s.kind, GenKind::C | GenKind::P)) {
        return Err(format!("middle of {w} contains x or y"));
    }
    match class {
        ElementClass::F if !middle.is_empty() => Err(format!("F-element {w} has a non-empty middle")),
        ElementClass::T if middle.len() != 1 || middle[0].kind != GenKind::C => {
            Err(format!("T-element {w} does not have a single cycle power in the middle"))
        }
        _ => Ok(()),
    }
}
