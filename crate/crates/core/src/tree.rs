//! Caret trees: iterated subdivisions of an interval.
//!
//! A caret of arity `m` splits an interval of width `λ^d` into `m` pieces of
//! widths `λ^(d + leg_j)`. Binary carets live over Z[τ] (`x`: short leg first,
//! `y`: long leg first); ternary carets live over Z[β] with the short leg in
//! first, middle or last position.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::{self, Write as _};
use std::hash::Hash;
use std::sync::OnceLock;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ring::{Scalar, ZBeta, ZTau};

pub trait CaretKind: Copy + Eq + Ord + Hash + fmt::Debug + Send + Sync + 'static {
    type Scalar: Scalar;
    const ARITY: usize;

    fn all() -> &'static [Self];
    /// Depth increment of each leg relative to the parent interval.
    fn legs(self) -> &'static [u32];
    fn tag(self) -> char;
    fn from_tag(c: char) -> Option<Self>;
    /// Contribution of one caret to the y-parity homomorphism.
    fn parity_weight(self) -> u8;
    fn basic_moves() -> &'static [BasicMove<Self>];
}

/// Binary carets over Z[τ].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Caret {
    X,
    Y,
}

impl CaretKind for Caret {
    type Scalar = ZTau;
    const ARITY: usize = 2;

    fn all() -> &'static [Self] {
        &[Caret::X, Caret::Y]
    }
    fn legs(self) -> &'static [u32] {
        match self {
            Caret::X => &[2, 1],
            Caret::Y => &[1, 2],
        }
    }
    fn tag(self) -> char {
        match self {
            Caret::X => 'x',
            Caret::Y => 'y',
        }
    }
    fn from_tag(c: char) -> Option<Self> {
        match c.to_ascii_lowercase() {
            'x' => Some(Caret::X),
            'y' => Some(Caret::Y),
            _ => None,
        }
    }
    fn parity_weight(self) -> u8 {
        (self == Caret::Y) as u8
    }
    fn basic_moves() -> &'static [BasicMove<Self>] {
        static MOVES: OnceLock<Vec<BasicMove<Caret>>> = OnceLock::new();
        MOVES.get_or_init(derive_basic_moves::<Caret>)
    }
}

/// Ternary carets over Z[β], named by the position of the short (β²) leg.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TernaryCaret {
    A,
    B,
    C,
}

impl CaretKind for TernaryCaret {
    type Scalar = ZBeta;
    const ARITY: usize = 3;

    fn all() -> &'static [Self] {
        &[TernaryCaret::A, TernaryCaret::B, TernaryCaret::C]
    }
    fn legs(self) -> &'static [u32] {
        match self {
            TernaryCaret::A => &[2, 1, 1],
            TernaryCaret::B => &[1, 2, 1],
            TernaryCaret::C => &[1, 1, 2],
        }
    }
    fn tag(self) -> char {
        match self {
            TernaryCaret::A => 'a',
            TernaryCaret::B => 'b',
            TernaryCaret::C => 'c',
        }
    }
    fn from_tag(c: char) -> Option<Self> {
        match c.to_ascii_lowercase() {
            'a' => Some(TernaryCaret::A),
            'b' => Some(TernaryCaret::B),
            'c' => Some(TernaryCaret::C),
            _ => None,
        }
    }
    fn parity_weight(self) -> u8 {
        (self == TernaryCaret::B) as u8
    }
    fn basic_moves() -> &'static [BasicMove<Self>] {
        static MOVES: OnceLock<Vec<BasicMove<TernaryCaret>>> = OnceLock::new();
        MOVES.get_or_init(derive_basic_moves::<TernaryCaret>)
    }
}

/// Finite rooted caret tree. Values are immutable in spirit: every edit
/// method has a non-mutating counterpart returning a new tree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Tree<C> {
    Leaf,
    Node(C, Vec<Tree<C>>),
}

pub type CaretTree = Tree<Caret>;
pub type TernaryCaretTree = Tree<TernaryCaret>;

/// A leaf occupying `[left, left + λ^depth)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LeafInterval<S> {
    pub left: S,
    pub depth: u32,
}

impl<S: Scalar> LeafInterval<S> {
    pub fn width(&self) -> S {
        S::unit_power(self.depth as i64)
    }
    pub fn right(&self) -> S {
        self.left + self.width()
    }
}

/// Two-caret configuration: `root` with a `child` caret on leg `pos`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Shape<C> {
    pub root: C,
    pub pos: usize,
    pub child: C,
}

impl<C: CaretKind> Shape<C> {
    /// Leaf depths relative to the root interval, left to right.
    pub fn depths(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(2 * C::ARITY - 1);
        for (j, &l) in self.root.legs().iter().enumerate() {
            if j == self.pos {
                out.extend(self.child.legs().iter().map(|&c| l + c));
            } else {
                out.push(l);
            }
        }
        out
    }
}

impl<C: CaretKind> fmt::Display for Shape<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = vec!["·".into(); C::ARITY];
        parts[self.pos] = format!("{}(..)", self.child.tag());
        write!(f, "{}({})", self.root.tag(), parts.join(","))
    }
}

/// Replacement of one two-caret shape by another with identical leaf widths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasicMove<C> {
    pub from: Shape<C>,
    pub to: Shape<C>,
}

/// All two-caret shapes grouped by their width tuple.
pub fn shape_classes<C: CaretKind>() -> BTreeMap<Vec<u32>, Vec<Shape<C>>> {
    let mut classes: BTreeMap<Vec<u32>, Vec<Shape<C>>> = BTreeMap::new();
    for &root in C::all() {
        for pos in 0..C::ARITY {
            for &child in C::all() {
                let s = Shape { root, pos, child };
                classes.entry(s.depths()).or_default().push(s);
            }
        }
    }
    classes
}

/// Every ordered pair of distinct shapes sharing a width tuple.
pub fn derive_basic_moves<C: CaretKind>() -> Vec<BasicMove<C>> {
    let mut out = Vec::new();
    for shapes in shape_classes::<C>().values() {
        for &from in shapes {
            for &to in shapes {
                if from != to {
                    out.push(BasicMove { from, to });
                }
            }
        }
    }
    out
}

/// One replayable edit of a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step<C> {
    /// Replace leaf `leaf` (0-based, in order) by a caret.
    Expand { leaf: usize, caret: C },
    /// Apply a basic move at the node addressed by `path`.
    Move { path: Vec<usize>, mv: BasicMove<C> },
}

pub type Script<C> = Vec<Step<C>>;

/// Formats a path of child positions; binary trees use `L`/`R`.
pub fn path_string<C: CaretKind>(path: &[usize]) -> String {
    if path.is_empty() {
        return "root".into();
    }
    path.iter()
        .map(|&p| if C::ARITY == 2 { ["L", "R"][p].to_string() } else { p.to_string() })
        .collect::<Vec<_>>()
        .join("")
}

/// Parses `L`/`R` strings (binary) or digit strings (ternary); `root` or empty is the root.
pub fn parse_path<C: CaretKind>(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() || s.eq_ignore_ascii_case("root") {
        return Ok(vec![]);
    }
    s.chars()
        .map(|c| match c.to_ascii_uppercase() {
            'L' if C::ARITY == 2 => Ok(0),
            'R' if C::ARITY == 2 => Ok(1),
            d if d.is_ascii_digit() && (d as usize - '0' as usize) < C::ARITY => Ok(d as usize - '0' as usize),
            _ => Err(Error::Parse(format!("bad path step {c:?}"))),
        })
        .collect()
}

impl<C: CaretKind> Tree<C> {
    pub fn caret(c: C) -> Self {
        Tree::Node(c, vec![Tree::Leaf; C::ARITY])
    }

    pub fn node(c: C, children: Vec<Tree<C>>) -> Self {
        assert_eq!(children.len(), C::ARITY);
        Tree::Node(c, children)
    }

    /// Right-leaning chain of `n` carets of type `c`.
    pub fn spine(n: usize, c: C) -> Self {
        let mut t = Tree::Leaf;
        for _ in 0..n {
            let mut ch = vec![Tree::Leaf; C::ARITY];
            ch[C::ARITY - 1] = t;
            t = Tree::Node(c, ch);
        }
        t
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf)
    }

    pub fn root_caret(&self) -> Option<C> {
        match self {
            Tree::Leaf => None,
            Tree::Node(c, _) => Some(*c),
        }
    }

    pub fn children(&self) -> &[Tree<C>] {
        match self {
            Tree::Leaf => &[],
            Tree::Node(_, ch) => ch,
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(_, ch) => ch.iter().map(Tree::leaf_count).sum(),
        }
    }

    pub fn caret_count(&self) -> usize {
        match self {
            Tree::Leaf => 0,
            Tree::Node(_, ch) => 1 + ch.iter().map(Tree::caret_count).sum::<usize>(),
        }
    }

    pub fn count_type(&self, c: C) -> usize {
        match self {
            Tree::Leaf => 0,
            Tree::Node(t, ch) => (*t == c) as usize + ch.iter().map(|x| x.count_type(c)).sum::<usize>(),
        }
    }

    pub fn parity_weight(&self) -> u8 {
        match self {
            Tree::Leaf => 0,
            Tree::Node(t, ch) => ch.iter().fold(t.parity_weight(), |acc, x| acc ^ x.parity_weight()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Tree::Leaf => 0,
            Tree::Node(_, ch) => 1 + ch.iter().map(Tree::depth).max().unwrap_or(0),
        }
    }

    pub fn subtree(&self, path: &[usize]) -> Option<&Tree<C>> {
        let mut t = self;
        for &p in path {
            t = t.children().get(p)?;
        }
        Some(t)
    }

    fn subtree_mut(&mut self, path: &[usize]) -> Option<&mut Tree<C>> {
        let mut t = self;
        for &p in path {
            t = match t {
                Tree::Leaf => return None,
                Tree::Node(_, ch) => ch.get_mut(p)?,
            };
        }
        Some(t)
    }

    /// In-order index of the first leaf under `path`.
    pub fn first_leaf_under(&self, path: &[usize]) -> Result<usize> {
        let mut t = self;
        let mut idx = 0;
        for &p in path {
            let ch = t.children();
            if p >= ch.len() {
                return Err(Error::NoNodeAtPath(path_string::<C>(path)));
            }
            idx += ch[..p].iter().map(Tree::leaf_count).sum::<usize>();
            t = &ch[p];
        }
        Ok(idx)
    }

    /// Path from the root to the leaf with in-order index `leaf`.
    pub fn leaf_path(&self, mut leaf: usize) -> Result<Vec<usize>> {
        let count = self.leaf_count();
        if leaf >= count {
            return Err(Error::LeafOutOfRange { leaf, count });
        }
        let mut path = Vec::new();
        let mut t = self;
        while let Tree::Node(_, ch) = t {
            for (j, c) in ch.iter().enumerate() {
                let n = c.leaf_count();
                if leaf < n {
                    path.push(j);
                    t = c;
                    break;
                }
                leaf -= n;
            }
        }
        Ok(path)
    }

    /// Paths of all carets in pre-order.
    pub fn caret_paths(&self) -> Vec<Vec<usize>> {
        fn go<C: CaretKind>(t: &Tree<C>, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if let Tree::Node(_, ch) = t {
                out.push(path.clone());
                for (j, c) in ch.iter().enumerate() {
                    path.push(j);
                    go(c, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Carets whose children are all leaves, as (path, first leaf index).
    pub fn exposed_carets(&self) -> Vec<(Vec<usize>, usize)> {
        self.caret_paths()
            .into_iter()
            .filter(|p| self.subtree(p).unwrap().children().iter().all(Tree::is_leaf))
            .map(|p| {
                let i = self.first_leaf_under(&p).unwrap();
                (p, i)
            })
            .collect()
    }

    /// Leaf intervals over the base interval `[0, 1)`.
    pub fn leaf_intervals(&self) -> Vec<LeafInterval<C::Scalar>> {
        self.leaf_intervals_from(C::Scalar::zero(), 0)
    }

    pub fn leaf_intervals_from(&self, left: C::Scalar, depth: u32) -> Vec<LeafInterval<C::Scalar>> {
        fn go<C: CaretKind>(t: &Tree<C>, left: C::Scalar, depth: u32, out: &mut Vec<LeafInterval<C::Scalar>>) {
            match t {
                Tree::Leaf => out.push(LeafInterval { left, depth }),
                Tree::Node(c, ch) => {
                    let mut l = left;
                    for (sub, &leg) in ch.iter().zip(c.legs()) {
                        let d = depth + leg;
                        go(sub, l, d, out);
                        l = l + C::Scalar::unit_power(d as i64);
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(self.leaf_count());
        go(self, left, depth, &mut out);
        out
    }

    /// Replaces leaf `leaf` (0-based in-order) by a caret of type `c`.
    pub fn expand_leaf(&self, leaf: usize, c: C) -> Result<Self> {
        let mut t = self.clone();
        t.expand_leaf_in_place(leaf, c)?;
        Ok(t)
    }

    pub fn expand_leaf_in_place(&mut self, leaf: usize, c: C) -> Result<()> {
        let path = self.leaf_path(leaf)?;
        *self.subtree_mut(&path).unwrap() = Tree::caret(c);
        Ok(())
    }

    /// Replaces leaf `leaf` by the whole tree `graft`.
    pub fn graft_in_place(&mut self, leaf: usize, graft: &Tree<C>) -> Result<()> {
        let path = self.leaf_path(leaf)?;
        *self.subtree_mut(&path).unwrap() = graft.clone();
        Ok(())
    }

    /// Collapses the caret at `path` (all of whose children must be leaves) to a leaf.
    pub fn collapse_in_place(&mut self, path: &[usize]) -> Result<()> {
        let node = self.subtree_mut(path).ok_or_else(|| Error::NoNodeAtPath(path_string::<C>(path)))?;
        if !node.children().iter().all(Tree::is_leaf) || node.is_leaf() {
            return Err(Error::Precondition(format!("caret at {} is not exposed", path_string::<C>(path))));
        }
        *node = Tree::Leaf;
        Ok(())
    }

    /// The shape of the node at `path` when viewed as `root` with a caret on leg `pos`.
    pub fn shape_at(&self, path: &[usize], pos: usize) -> Option<Shape<C>> {
        match self.subtree(path)? {
            Tree::Node(root, ch) => ch.get(pos)?.root_caret().map(|child| Shape { root: *root, pos, child }),
            Tree::Leaf => None,
        }
    }

    /// Basic moves applicable at `path`.
    pub fn moves_at(&self, path: &[usize]) -> Vec<BasicMove<C>> {
        C::basic_moves()
            .iter()
            .filter(|mv| self.shape_at(path, mv.from.pos) == Some(mv.from))
            .copied()
            .collect()
    }

    pub fn apply_move_in_place(&mut self, path: &[usize], mv: &BasicMove<C>) -> Result<()> {
        if self.shape_at(path, mv.from.pos) != Some(mv.from) {
            return Err(Error::ShapeMismatch(format!(
                "node at {} does not have shape {}",
                path_string::<C>(path),
                mv.from
            )));
        }
        let node = self.subtree_mut(path).unwrap();
        let Tree::Node(_, ch) = std::mem::replace(node, Tree::Leaf) else { unreachable!() };
        let mut slots = Vec::with_capacity(2 * C::ARITY - 1);
        for (j, c) in ch.into_iter().enumerate() {
            if j == mv.from.pos {
                let Tree::Node(_, gc) = c else { unreachable!() };
                slots.extend(gc);
            } else {
                slots.push(c);
            }
        }
        let mut slots = slots.into_iter();
        let mut children = Vec::with_capacity(C::ARITY);
        for j in 0..C::ARITY {
            if j == mv.to.pos {
                children.push(Tree::Node(mv.to.child, slots.by_ref().take(C::ARITY).collect()));
            } else {
                children.push(slots.next().unwrap());
            }
        }
        *node = Tree::Node(mv.to.root, children);
        Ok(())
    }

    pub fn apply_move(&self, path: &[usize], mv: &BasicMove<C>) -> Result<Self> {
        let mut t = self.clone();
        t.apply_move_in_place(path, mv)?;
        Ok(t)
    }

    /// Applies the unique basic move available at `path`.
    pub fn basic_move(&self, path: &[usize]) -> Result<Self> {
        let moves = self.moves_at(path);
        match moves.as_slice() {
            [mv] => self.apply_move(path, mv),
            [] => Err(Error::ShapeMismatch(format!(
                "no basic move applies at {}",
                path_string::<C>(path)
            ))),
            _ => Err(Error::ShapeMismatch(format!(
                "{} basic moves apply at {}; choose one explicitly",
                moves.len(),
                path_string::<C>(path)
            ))),
        }
    }

    pub fn apply_step(&mut self, step: &Step<C>) -> Result<()> {
        match step {
            Step::Expand { leaf, caret } => self.expand_leaf_in_place(*leaf, *caret),
            Step::Move { path, mv } => self.apply_move_in_place(path, mv),
        }
    }

    pub fn replay(&self, script: &[Step<C>]) -> Result<Self> {
        let mut t = self.clone();
        for s in script {
            t.apply_step(s)?;
        }
        Ok(t)
    }

    /// Transforms the subtree at `path` (by leaf expansions and basic moves) so
    /// its root caret has type `target`; the steps are appended to `script`.
    pub fn force_root(&mut self, path: &[usize], target: C, script: &mut Script<C>) -> Result<()> {
        let current = match self.subtree(path) {
            None => return Err(Error::NoNodeAtPath(path_string::<C>(path))),
            Some(Tree::Leaf) => {
                let leaf = self.first_leaf_under(path)?;
                let step = Step::Expand { leaf, caret: target };
                self.apply_step(&step)?;
                script.push(step);
                return Ok(());
            }
            Some(Tree::Node(c, _)) => *c,
        };
        if current == target {
            return Ok(());
        }
        for mv in move_route(current, target)? {
            let mut child = path.to_vec();
            child.push(mv.from.pos);
            self.force_root(&child, mv.from.child, script)?;
            let step = Step::Move { path: path.to_vec(), mv };
            self.apply_step(&step)?;
            script.push(step);
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        match self {
            Tree::Leaf => json!("leaf"),
            Tree::Node(c, ch) if C::ARITY == 2 => json!({
                "caret": c.tag().to_string(),
                "left": ch[0].to_json(),
                "right": ch[1].to_json(),
            }),
            Tree::Node(c, ch) => json!({
                "caret": c.tag().to_string(),
                "children": ch.iter().map(Tree::to_json).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("tree JSON: {m}"));
        match v {
            Value::String(s) if s == "leaf" => Ok(Tree::Leaf),
            Value::Object(o) => {
                let tag = o.get("caret").and_then(Value::as_str).ok_or_else(|| bad("missing caret"))?;
                let mut chars = tag.chars();
                let c = match (chars.next(), chars.next()) {
                    (Some(ch), None) => C::from_tag(ch),
                    _ => None,
                }
                .ok_or_else(|| bad(&format!("unknown caret {tag:?}")))?;
                let children: Vec<Tree<C>> = if C::ARITY == 2 && o.contains_key("left") {
                    let l = o.get("left").ok_or_else(|| bad("missing left"))?;
                    let r = o.get("right").ok_or_else(|| bad("missing right"))?;
                    vec![Tree::from_json(l)?, Tree::from_json(r)?]
                } else {
                    o.get("children")
                        .and_then(Value::as_array)
                        .ok_or_else(|| bad("missing children"))?
                        .iter()
                        .map(Tree::from_json)
                        .collect::<Result<_>>()?
                };
                if children.len() != C::ARITY {
                    return Err(bad(&format!("caret needs {} children", C::ARITY)));
                }
                Ok(Tree::Node(c, children))
            }
            _ => Err(bad("expected \"leaf\" or a caret object")),
        }
    }

    /// Graphviz body for this tree; node ids are prefixed by `prefix`, leaf `i`
    /// is labelled by `labels[i]`.
    pub fn dot_body(&self, prefix: &str, labels: &[String], out: &mut String) {
        fn go<C: CaretKind>(
            t: &Tree<C>,
            prefix: &str,
            labels: &[String],
            next_leaf: &mut usize,
            counter: &mut usize,
            out: &mut String,
        ) -> String {
            let id = format!("{prefix}{}", *counter);
            *counter += 1;
            match t {
                Tree::Leaf => {
                    let label = labels.get(*next_leaf).cloned().unwrap_or_default();
                    *next_leaf += 1;
                    let _ = writeln!(out, "  {id} [shape=plaintext,label=\"{label}\"];");
                }
                Tree::Node(c, ch) => {
                    let _ = writeln!(out, "  {id} [shape=circle,label=\"{}\"];", c.tag());
                    for sub in ch {
                        let cid = go(sub, prefix, labels, next_leaf, counter, out);
                        let _ = writeln!(out, "  {id} -> {cid};");
                    }
                }
            }
            id
        }
        go(self, prefix, labels, &mut 0, &mut 0, out);
    }

    pub fn to_dot(&self) -> String {
        let labels: Vec<String> = (1..=self.leaf_count()).map(|i| i.to_string()).collect();
        let mut s = String::from("digraph tree {\n  node [fontname=\"Helvetica\"];\n");
        self.dot_body("n", &labels, &mut s);
        s.push_str("}\n");
        s
    }
}

/// Shortest sequence of basic moves turning a root caret of type `from` into
/// one of type `to` (looking only at root types).
pub fn move_route<C: CaretKind>(from: C, to: C) -> Result<Vec<BasicMove<C>>> {
    let mut prev: HashMap<C, BasicMove<C>> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = HashSet::from([from]);
    while let Some(c) = queue.pop_front() {
        if c == to {
            let mut route = Vec::new();
            let mut cur = to;
            while cur != from {
                let mv = prev[&cur];
                route.push(mv);
                cur = mv.from.root;
            }
            route.reverse();
            return Ok(route);
        }
        for mv in C::basic_moves().iter().filter(|m| m.from.root == c) {
            if seen.insert(mv.to.root) {
                prev.insert(mv.to.root, *mv);
                queue.push_back(mv.to.root);
            }
        }
    }
    Err(Error::Invariant(format!("no basic-move route from {from:?} to {to:?}")))
}

/// Common refinement of two trees over the same interval, with the scripts
/// that turn each input into it.
#[derive(Clone, Debug)]
pub struct Unification<C> {
    pub common: Tree<C>,
    pub script_a: Script<C>,
    pub script_b: Script<C>,
}

pub fn unify<C: CaretKind>(a: &Tree<C>, b: &Tree<C>) -> Result<Unification<C>> {
    fn go<C: CaretKind>(
        ta: &mut Tree<C>,
        tb: &mut Tree<C>,
        path: &mut Vec<usize>,
        sa: &mut Script<C>,
        sb: &mut Script<C>,
    ) -> Result<()> {
        let ca = ta.subtree(path).and_then(Tree::root_caret);
        let cb = tb.subtree(path).and_then(Tree::root_caret);
        match (ca, cb) {
            (None, None) => return Ok(()),
            (Some(c), _) => tb.force_root(path, c, sb)?,
            (None, Some(c)) => ta.force_root(path, c, sa)?,
        }
        for j in 0..C::ARITY {
            path.push(j);
            go(ta, tb, path, sa, sb)?;
            path.pop();
        }
        Ok(())
    }
    let (mut ta, mut tb) = (a.clone(), b.clone());
    let (mut sa, mut sb) = (Vec::new(), Vec::new());
    go(&mut ta, &mut tb, &mut Vec::new(), &mut sa, &mut sb)?;
    if ta != tb {
        return Err(Error::Invariant("unification produced different trees".into()));
    }
    Ok(Unification { common: ta, script_a: sa, script_b: sb })
}

/// Result of [`make_exposed`].
#[derive(Clone, Debug)]
pub struct Exposure {
    pub tree: CaretTree,
    /// Path of a `y`-caret whose children are both leaves.
    pub exposed: Vec<usize>,
    /// Steps applied to the input; expansions name the leaves that were added.
    pub script: Script<Caret>,
}

/// The caret shape `x(·, x(·,·))`.
pub const XX_SHAPE: Shape<Caret> = Shape { root: Caret::X, pos: 1, child: Caret::X };
/// The caret shape `y(y(·,·), ·)`.
pub const YY_SHAPE: Shape<Caret> = Shape { root: Caret::Y, pos: 0, child: Caret::Y };
pub const XX_TO_YY: BasicMove<Caret> = BasicMove { from: XX_SHAPE, to: YY_SHAPE };
pub const YY_TO_XX: BasicMove<Caret> = BasicMove { from: YY_SHAPE, to: XX_SHAPE };

/// Produces an exposed `y`-caret from the `y`-caret at `ynode`, whose left
/// child must be a leaf: two `x`-carets are added on that leaf, switched to
/// `y` type, and then the upper two of the resulting three `y`-carets are
/// switched back to `x`. The subdivision and the number of `y`-carets are
/// unchanged.
pub fn make_exposed(t: &CaretTree, ynode: &[usize]) -> Result<Exposure> {
    match t.subtree(ynode) {
        Some(Tree::Node(Caret::Y, ch)) if ch[0].is_leaf() => {}
        Some(_) => {
            return Err(Error::Precondition(format!(
                "node at {} is not a y-caret with a leaf on its left leg",
                path_string::<Caret>(ynode)
            )))
        }
        None => return Err(Error::NoNodeAtPath(path_string::<Caret>(ynode))),
    }
    let mut tree = t.clone();
    let mut script = Vec::new();
    let left_leaf = tree.first_leaf_under(ynode)?;
    let mut left_path = ynode.to_vec();
    left_path.push(0);
    let steps = [
        Step::Expand { leaf: left_leaf, caret: Caret::X },
        Step::Expand { leaf: left_leaf + 1, caret: Caret::X },
        Step::Move { path: left_path.clone(), mv: XX_TO_YY },
        Step::Move { path: ynode.to_vec(), mv: YY_TO_XX },
    ];
    for s in steps {
        tree.apply_step(&s)?;
        script.push(s);
    }
    Ok(Exposure { tree, exposed: left_path, script })
}

/// Builds a tree realizing the given leaf subdivision of `[0,1)`, trying caret
/// types in declaration order. Returns `None` when no tree realizes it.
pub fn realize<C: CaretKind>(leaves: &[LeafInterval<C::Scalar>]) -> Option<Tree<C>> {
    if leaves.is_empty() {
        return None;
    }
    let index: HashMap<C::Scalar, usize> = leaves.iter().enumerate().map(|(i, l)| (l.left, i)).collect();
    let mut failed = HashSet::new();
    fn go<C: CaretKind>(
        leaves: &[LeafInterval<C::Scalar>],
        index: &HashMap<C::Scalar, usize>,
        s: usize,
        e: usize,
        depth: u32,
        failed: &mut HashSet<(usize, usize, u32)>,
    ) -> Option<Tree<C>> {
        if e - s == 1 {
            return (leaves[s].depth == depth).then_some(Tree::Leaf);
        }
        if e - s < C::ARITY || failed.contains(&(s, e, depth)) {
            return None;
        }
        'types: for &c in C::all() {
            let mut start = s;
            let mut left = leaves[s].left;
            let mut children = Vec::with_capacity(C::ARITY);
            for (j, &leg) in c.legs().iter().enumerate() {
                let d = depth + leg;
                let right = left + C::Scalar::unit_power(d as i64);
                let end = if j + 1 == C::ARITY {
                    e
                } else {
                    match index.get(&right) {
                        Some(&k) if k > start && k < e => k,
                        _ => continue 'types,
                    }
                };
                match go(leaves, index, start, end, d, failed) {
                    Some(t) => children.push(t),
                    None => continue 'types,
                }
                start = end;
                left = right;
            }
            return Some(Tree::Node(c, children));
        }
        failed.insert((s, e, depth));
        None
    }
    go(leaves, &index, 0, leaves.len(), 0, &mut failed)
}

/// All trees with exactly `n` carets.
pub fn enumerate_trees<C: CaretKind>(n: usize) -> Vec<Tree<C>> {
    let mut memo: Vec<Vec<Tree<C>>> = vec![vec![Tree::Leaf]];
    for k in 1..=n {
        let mut out = Vec::new();
        // distribute k-1 carets over ARITY children
        fn splits(total: usize, parts: usize) -> Vec<Vec<usize>> {
            if parts == 1 {
                return vec![vec![total]];
            }
            (0..=total)
                .flat_map(|h| {
                    splits(total - h, parts - 1).into_iter().map(move |mut rest| {
                        rest.insert(0, h);
                        rest
                    })
                })
                .collect()
        }
        for split in splits(k - 1, C::ARITY) {
            let mut combos: Vec<Vec<Tree<C>>> = vec![vec![]];
            for &sz in &split {
                combos = combos
                    .into_iter()
                    .flat_map(|pre| {
                        memo[sz].iter().map(move |t| {
                            let mut v = pre.clone();
                            v.push(t.clone());
                            v
                        })
                    })
                    .collect();
            }
            for &c in C::all() {
                for ch in &combos {
                    out.push(Tree::Node(c, ch.clone()));
                }
            }
        }
        memo.push(out);
    }
    memo.swap_remove(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    type T = CaretTree;

    fn t(a: i128, b: i128) -> ZTau {
        ZTau::new(a, b)
    }

    fn li(left: ZTau, depth: u32) -> LeafInterval<ZTau> {
        LeafInterval { left, depth }
    }

    #[test]
    fn single_caret_intervals() {
        let x = T::caret(Caret::X);
        assert_eq!(x.leaf_intervals(), vec![li(t(0, 0), 2), li(ZTau::tau_power(2), 1)]);
        let y = T::caret(Caret::Y);
        assert_eq!(y.leaf_intervals(), vec![li(t(0, 0), 1), li(ZTau::GEN, 2)]);
    }

    #[test]
    fn nested_x_intervals() {
        let tree = T::caret(Caret::X).expand_leaf(1, Caret::X).unwrap();
        let tau2 = ZTau::tau_power(2);
        let tau3 = ZTau::tau_power(3);
        assert_eq!(tree.leaf_intervals(), vec![li(ZTau::ZERO, 2), li(tau2, 3), li(tau2 + tau3, 2)]);
        assert_eq!(tau2 + tau3, ZTau::GEN);
        assert_eq!(tree, T::spine(2, Caret::X));
    }

    #[test]
    fn expand_out_of_range() {
        assert_eq!(T::Leaf.expand_leaf(1, Caret::X), Err(Error::LeafOutOfRange { leaf: 1, count: 1 }));
        assert_eq!(T::Leaf.expand_leaf(0, Caret::X).unwrap(), T::caret(Caret::X));
    }

    #[test]
    fn binary_basic_move_pair() {
        let moves = derive_basic_moves::<Caret>();
        assert_eq!(moves, vec![XX_TO_YY, YY_TO_XX]);
        let xx = T::spine(2, Caret::X);
        let yy = xx.basic_move(&[]).unwrap();
        assert_eq!(yy, T::node(Caret::Y, vec![T::caret(Caret::Y), T::Leaf]));
        assert_eq!(yy.basic_move(&[]).unwrap(), xx);
        assert_eq!(xx.leaf_intervals(), yy.leaf_intervals());
        assert!(matches!(T::caret(Caret::X).basic_move(&[]), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn exposed_y_caret() {
        let y = T::caret(Caret::Y);
        let e = make_exposed(&y, &[]).unwrap();
        assert_eq!(e.tree.count_type(Caret::Y), 1);
        assert_eq!(e.tree.leaf_intervals()[3..], y.leaf_intervals()[1..]);
        let exposed = e.tree.subtree(&e.exposed).unwrap();
        assert_eq!(exposed, &T::caret(Caret::Y));
        // refined left leg widths sum to its width
        let left = &e.tree.leaf_intervals()[..3];
        let sum = left.iter().fold(ZTau::ZERO, |a, l| a + l.width());
        assert_eq!(sum, ZTau::GEN);
        assert!(make_exposed(&T::caret(Caret::X), &[]).is_err());
    }

    #[test]
    fn unify_same_tree_is_empty() {
        let a = T::spine(3, Caret::X).expand_leaf(0, Caret::Y).unwrap();
        let u = unify(&a, &a).unwrap();
        assert_eq!(u.common, a);
        assert!(u.script_a.is_empty() && u.script_b.is_empty());
    }

    #[test]
    fn unify_x_with_y() {
        let u = unify(&T::caret(Caret::X), &T::caret(Caret::Y)).unwrap();
        let depths: Vec<u32> = u.common.leaf_intervals().iter().map(|l| l.depth).collect();
        assert_eq!(depths, vec![2, 3, 2]);
        assert_eq!(T::caret(Caret::X).replay(&u.script_a).unwrap(), u.common);
        assert_eq!(T::caret(Caret::Y).replay(&u.script_b).unwrap(), u.common);
    }

    #[test]
    fn realize_recovers_subdivisions() {
        for n in 0..=4 {
            for tree in enumerate_trees::<Caret>(n) {
                let r: T = realize(&tree.leaf_intervals()).unwrap();
                assert_eq!(r.leaf_intervals(), tree.leaf_intervals());
            }
        }
        // [0,τ³) ∪ [τ³,1) is not a caret subdivision
        let bad = vec![li(ZTau::ZERO, 3), li(ZTau::tau_power(3), 0)];
        assert!(realize::<Caret>(&bad).is_none());
    }

    #[test]
    fn json_round_trip() {
        let tree = T::spine(2, Caret::X).expand_leaf(0, Caret::Y).unwrap();
        assert_eq!(T::from_json(&tree.to_json()).unwrap(), tree);
        let tern = TernaryCaretTree::caret(TernaryCaret::B).expand_leaf(2, TernaryCaret::C).unwrap();
        assert_eq!(TernaryCaretTree::from_json(&tern.to_json()).unwrap(), tern);
        assert!(T::from_json(&json!({"caret": "q", "left": "leaf", "right": "leaf"})).is_err());
    }

    #[test]
    fn paths() {
        assert_eq!(parse_path::<Caret>("LR").unwrap(), vec![0, 1]);
        assert_eq!(path_string::<Caret>(&[1, 0]), "RL");
        assert!(parse_path::<Caret>("LX").is_err());
        assert_eq!(parse_path::<TernaryCaret>("20").unwrap(), vec![2, 0]);
    }

    #[test]
    fn tree_counts() {
        assert_eq!(enumerate_trees::<Caret>(3).len(), 5 * 8);
        assert_eq!(enumerate_trees::<TernaryCaret>(2).len(), 27);
    }
}
