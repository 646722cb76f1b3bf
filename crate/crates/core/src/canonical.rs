//! Canonical representatives of golden-ratio diagrams: the range tree has only
//! `x`-carets, every `y`-caret of the domain has a leaf as left child, and the
//! right spine of the domain consists of `x`-carets.

use crate::diagram::TreePairDiagram;
use crate::error::Result;
use crate::tree::{path_string, Caret, CaretTree, Step, Tree, XX_TO_YY, YY_TO_XX};

/// First caret in post-order satisfying `pred`; it has no satisfying descendant.
pub(crate) fn find_lowest(t: &CaretTree, pred: &dyn Fn(&CaretTree) -> bool) -> Option<Vec<usize>> {
    fn go(t: &CaretTree, path: &mut Vec<usize>, pred: &dyn Fn(&CaretTree) -> bool) -> Option<Vec<usize>> {
        if let Tree::Node(_, ch) = t {
            for (j, c) in ch.iter().enumerate() {
                path.push(j);
                let hit = go(c, path, pred);
                path.pop();
                if hit.is_some() {
                    return hit;
                }
            }
            if pred(t) {
                return Some(path.clone());
            }
        }
        None
    }
    go(t, &mut Vec::new(), pred)
}

fn child(path: &[usize], j: usize) -> Vec<usize> {
    let mut p = path.to_vec();
    p.push(j);
    p
}

fn is_y_with_inner_left(t: &CaretTree) -> bool {
    matches!(t, Tree::Node(Caret::Y, ch) if !ch[0].is_leaf())
}

/// Which tree of the diagram an edit targets.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Side {
    Domain,
    Range,
}

pub(crate) struct Editor {
    pub d: TreePairDiagram,
}

impl Editor {
    pub fn tree(&self, side: Side) -> &CaretTree {
        match side {
            Side::Domain => self.d.domain(),
            Side::Range => self.d.range(),
        }
    }

    pub fn step(&mut self, side: Side, s: Step<Caret>) -> Result<()> {
        match side {
            Side::Domain => self.d.apply_domain_step(&s),
            Side::Range => self.d.apply_range_step(&s),
        }
    }

    pub fn expand_at(&mut self, side: Side, path: &[usize], caret: Caret) -> Result<()> {
        let leaf = self.tree(side).first_leaf_under(path)?;
        self.step(side, Step::Expand { leaf, caret })
    }

    pub fn xx_to_yy(&mut self, side: Side, path: &[usize]) -> Result<()> {
        self.step(side, Step::Move { path: path.to_vec(), mv: XX_TO_YY })
    }

    pub fn yy_to_xx(&mut self, side: Side, path: &[usize]) -> Result<()> {
        self.step(side, Step::Move { path: path.to_vec(), mv: YY_TO_XX })
    }

    /// Turns the leaf at `path` into `y(y(·,·),·)` using two `x`-expansions.
    pub fn graft_yy(&mut self, side: Side, path: &[usize]) -> Result<()> {
        self.expand_at(side, path, Caret::X)?;
        self.expand_at(side, &child(path, 1), Caret::X)?;
        self.xx_to_yy(side, path)
    }

    /// Makes the subtree at `path` `x`-rooted. It must be a leaf, `x`-rooted,
    /// or a `y`-caret with a leaf on its left.
    fn make_x_rooted(&mut self, side: Side, path: &[usize]) -> Result<()> {
        match self.tree(side).subtree(path) {
            Some(Tree::Leaf) => self.expand_at(side, path, Caret::X),
            Some(Tree::Node(Caret::X, _)) => Ok(()),
            Some(Tree::Node(Caret::Y, ch)) if ch[0].is_leaf() => {
                // y(l, r) with l → y(p,q),r' gives y(y(y(p,q),r'),r) → x(y(p,q), x(r', r))
                self.graft_yy(side, &child(path, 0))?;
                self.yy_to_xx(side, path)
            }
            _ => Err(crate::Error::Invariant(format!(
                "cannot make {} x-rooted",
                path_string::<Caret>(path)
            ))),
        }
    }
}

/// Removes the `y`-caret at `path` (its left subtree `a` must have no `y`-caret
/// violating the current goal) by pushing it into the left subtree: with
/// `L = x(a, b)`, `b` made `x`-rooted, two moves give `x(y(a, b1), x(b2, R))`.
/// Returns the path of the remaining `y`-caret, or `None` if it disappeared.
fn push_y_left(ed: &mut Editor, side: Side, path: &[usize]) -> Result<Option<Vec<usize>>> {
    let left = child(path, 0);
    match ed.tree(side).subtree(&left) {
        Some(Tree::Leaf) => Ok(None),
        Some(Tree::Node(Caret::Y, _)) => {
            ed.yy_to_xx(side, path)?;
            Ok(None)
        }
        Some(Tree::Node(Caret::X, _)) => {
            ed.make_x_rooted(side, &child(&left, 1))?;
            ed.xx_to_yy(side, &left)?;
            ed.yy_to_xx(side, path)?;
            Ok(Some(left))
        }
        None => unreachable!("y-caret has children"),
    }
}

/// Equivalent diagram with an all-`x` range, `y`-carets of the domain only
/// with leaf left children, and an all-`x` right spine in the domain.
pub fn canonical_triple(v: &TreePairDiagram) -> Result<TreePairDiagram> {
    let mut ed = Editor { d: v.clone() };
    // range: eliminate y-carets from the bottom up
    while let Some(p) = find_lowest(ed.d.range(), &|t| t.root_caret() == Some(Caret::Y)) {
        let mut cur = p;
        loop {
            if ed.d.range().subtree(&cur).unwrap().children()[0].is_leaf() {
                // y(·, R) → y(y(·,·), R) → x(·, x(·, R))
                ed.expand_at(Side::Range, &child(&cur, 0), Caret::Y)?;
                ed.yy_to_xx(Side::Range, &cur)?;
                break;
            }
            match push_y_left(&mut ed, Side::Range, &cur)? {
                Some(next) => cur = next,
                None => break,
            }
        }
    }
    // domain: y-carets must have leaf left children
    while let Some(mut cur) = find_lowest(ed.d.domain(), &is_y_with_inner_left) {
        while let Some(next) = push_y_left(&mut ed, Side::Domain, &cur)? {
            cur = next;
            if !is_y_with_inner_left(ed.d.domain().subtree(&cur).unwrap()) {
                break;
            }
        }
    }
    // domain: right spine all x
    let mut spine = Vec::new();
    loop {
        match ed.d.domain().subtree(&spine) {
            Some(Tree::Node(Caret::Y, _)) => ed.make_x_rooted(Side::Domain, &spine)?,
            Some(Tree::Node(Caret::X, _)) => spine.push(1),
            _ => break,
        }
    }
    debug_assert!(is_canonical(&ed.d));
    Ok(ed.d)
}

/// Whether `v` satisfies the conditions produced by [`canonical_triple`].
pub fn is_canonical(v: &TreePairDiagram) -> bool {
    let mut spine_x = true;
    let mut t = v.domain();
    while let Tree::Node(c, ch) = t {
        spine_x &= *c == Caret::X;
        t = &ch[1];
    }
    spine_x
        && v.range().count_type(Caret::Y) == 0
        && find_lowest(v.domain(), &is_y_with_inner_left).is_none()
}
