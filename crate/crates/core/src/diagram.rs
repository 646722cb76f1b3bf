//! Tree-pair diagrams `(domain, perm, range)`: leaf `i` of the domain maps
//! affinely onto leaf `perm(i)` of the range.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::plmap::PLMap;
use crate::tree::{realize, unify, Caret, CaretKind, LeafInterval, Step, TernaryCaret, Tree};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Diagram<C> {
    domain: Tree<C>,
    perm: Permutation,
    range: Tree<C>,
}

pub type TreePairDiagram = Diagram<Caret>;
pub type BetaDiagram = Diagram<TernaryCaret>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementClass {
    F,
    T,
    V,
}

impl fmt::Display for ElementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElementClass::F => "F",
            ElementClass::T => "T",
            ElementClass::V => "V",
        })
    }
}

impl<C: CaretKind> Diagram<C> {
    pub fn new(domain: Tree<C>, perm: Permutation, range: Tree<C>) -> Result<Self> {
        let (kd, kr) = (domain.leaf_count(), range.leaf_count());
        if kd != kr || perm.len() != kd {
            return Err(Error::Malformed(format!(
                "domain has {kd} leaves, range has {kr}, permutation has {} points",
                perm.len()
            )));
        }
        Ok(Diagram { domain, perm, range })
    }

    /// Diagram `(tree, id, tree)`.
    pub fn trivial(tree: Tree<C>) -> Self {
        let k = tree.leaf_count();
        Diagram { domain: tree.clone(), perm: Permutation::identity(k), range: tree }
    }

    /// Diagram `(tree, perm, tree)`.
    pub fn permutation(tree: Tree<C>, perm: Permutation) -> Result<Self> {
        Self::new(tree.clone(), perm, tree)
    }

    pub fn identity() -> Self {
        Self::trivial(Tree::Leaf)
    }

    pub fn domain(&self) -> &Tree<C> {
        &self.domain
    }

    pub fn range(&self) -> &Tree<C> {
        &self.range
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn leaf_count(&self) -> usize {
        self.perm.len()
    }

    pub fn into_parts(self) -> (Tree<C>, Permutation, Tree<C>) {
        (self.domain, self.perm, self.range)
    }

    pub fn to_plmap(&self) -> PLMap<C::Scalar> {
        let dom = self.domain.leaf_intervals();
        let rng = self.range.leaf_intervals();
        PLMap::from_leaf_pairs(dom.into_iter().enumerate().map(|(i, d)| (d, rng[self.perm.apply(i)])))
    }

    pub fn evaluate(&self, t: C::Scalar) -> Result<C::Scalar> {
        self.to_plmap().evaluate(t)
    }

    pub fn invert(&self) -> Self {
        Diagram { domain: self.range.clone(), perm: self.perm.inverse(), range: self.domain.clone() }
    }

    /// Adds a caret of type `c` on domain leaf `leaf` and on its image leaf.
    pub fn expand(&self, leaf: usize, c: C) -> Result<Self> {
        let mut d = self.clone();
        d.apply_domain_step(&Step::Expand { leaf, caret: c })?;
        Ok(d)
    }

    /// Applies a step to the domain tree; expansions are mirrored on the range.
    pub fn apply_domain_step(&mut self, step: &Step<C>) -> Result<()> {
        if let Step::Expand { leaf, caret } = step {
            let count = self.leaf_count();
            if *leaf >= count {
                return Err(Error::LeafOutOfRange { leaf: *leaf, count });
            }
            let img = self.perm.apply(*leaf);
            self.range.expand_leaf_in_place(img, *caret)?;
            self.perm = self.perm.expand(*leaf, C::ARITY);
        }
        self.domain.apply_step(step)
    }

    /// Applies a step to the range tree; expansions are mirrored on the domain.
    pub fn apply_range_step(&mut self, step: &Step<C>) -> Result<()> {
        if let Step::Expand { leaf, caret } = step {
            let count = self.leaf_count();
            if *leaf >= count {
                return Err(Error::LeafOutOfRange { leaf: *leaf, count });
            }
            let src = self.perm.inverse().apply(*leaf);
            self.domain.expand_leaf_in_place(src, *caret)?;
            self.perm = self.perm.expand(src, C::ARITY);
        }
        self.range.apply_step(step)
    }

    /// `self` first, then `next`.
    pub fn compose(&self, next: &Self) -> Result<Self> {
        let u = unify(&self.range, &next.domain)?;
        let mut f = self.clone();
        for s in &u.script_a {
            f.apply_range_step(s)?;
        }
        let mut g = next.clone();
        for s in &u.script_b {
            g.apply_domain_step(s)?;
        }
        debug_assert_eq!(f.range, g.domain);
        Ok(Diagram { domain: f.domain, perm: f.perm.then(&g.perm), range: g.range })
    }

    /// Left-to-right product of a sequence of diagrams.
    pub fn product<'a>(items: impl IntoIterator<Item = &'a Self>) -> Result<Self> {
        let mut acc = Self::identity();
        for d in items {
            acc = acc.compose(d)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.invert() } else { self.clone() };
        let mut acc = Self::identity();
        for _ in 0..e.unsigned_abs() {
            acc = acc.compose(&base)?;
        }
        Ok(acc)
    }

    /// Same map of (0,1].
    pub fn equals(&self, other: &Self) -> bool {
        self.to_plmap() == other.to_plmap()
    }

    pub fn is_identity(&self) -> bool {
        self.to_plmap().is_identity()
    }

    /// Removes redundant caret pairs, including those that only become visible
    /// after basic moves. Works on the two leaf subdivisions: a block of
    /// consecutive domain leaves shaped like one caret and sent in order onto
    /// an identically shaped range block merges whenever both merged
    /// subdivisions are still realized by caret trees.
    pub fn reduce(&self) -> Self {
        let mut dom = self.domain.leaf_intervals();
        let mut rng = self.range.leaf_intervals();
        let mut perm = self.perm.clone();
        let m = C::ARITY;
        'outer: loop {
            let k = perm.len();
            if k < m {
                break;
            }
            for i in 0..=k - m {
                let b = perm.apply(i);
                if b + m > k || (1..m).any(|j| perm.apply(i + j) != b + j) {
                    continue;
                }
                for &c in C::all() {
                    let legs = c.legs();
                    let (Some(d), Some(e)) = (dom[i].depth.checked_sub(legs[0]), rng[b].depth.checked_sub(legs[0]))
                    else {
                        continue;
                    };
                    if (0..m).any(|j| dom[i + j].depth != d + legs[j] || rng[b + j].depth != e + legs[j]) {
                        continue;
                    }
                    let mut nd = dom.clone();
                    nd.splice(i..i + m, [LeafInterval { left: dom[i].left, depth: d }]);
                    let mut nr = rng.clone();
                    nr.splice(b..b + m, [LeafInterval { left: rng[b].left, depth: e }]);
                    if realize::<C>(&nd).is_none() || realize::<C>(&nr).is_none() {
                        continue;
                    }
                    dom = nd;
                    rng = nr;
                    perm = perm.contract(i, m);
                    continue 'outer;
                }
            }
            break;
        }
        let domain = realize::<C>(&dom).expect("reduced domain subdivision is realizable");
        let range = realize::<C>(&rng).expect("reduced range subdivision is realizable");
        Diagram { domain, perm, range }
    }

    /// Smallest of F ⊂ T ⊂ V containing the element. Expansions and basic
    /// moves preserve both "identity" and "cyclic shift", so any
    /// representative gives the same answer.
    pub fn classify(&self) -> ElementClass {
        if self.perm.is_identity() {
            ElementClass::F
        } else if self.perm.cyclic_shift().is_some() {
            ElementClass::T
        } else {
            ElementClass::V
        }
    }

    /// Parity of the weighted caret count over both trees.
    pub fn y_parity(&self) -> u8 {
        self.domain.parity_weight() ^ self.range.parity_weight()
    }

    /// 0 for even leaf permutations, 1 for odd.
    pub fn perm_sign(&self) -> u8 {
        self.perm.sign_bit()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "domain": self.domain.to_json(),
            "perm": self.perm.to_one_based(),
            "range": self.range.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("diagram JSON: missing {k}")));
        let domain = Tree::from_json(field("domain")?)?;
        let range = Tree::from_json(field("range")?)?;
        let perm: Vec<usize> = serde_json::from_value(field("perm")?.clone())
            .map_err(|e| Error::Parse(format!("diagram JSON: perm: {e}")))?;
        Self::new(domain, Permutation::from_one_based(&perm)?, range)
    }

    /// Graphviz rendering of both trees. V-elements carry leaf numbers; for
    /// T-elements leaf 1 and its image are circled.
    pub fn to_dot(&self) -> String {
        let k = self.leaf_count();
        let class = self.classify();
        let mut dom_labels = vec![String::new(); k];
        let mut rng_labels = vec![String::new(); k];
        for i in 0..k {
            let label = match class {
                ElementClass::F => String::new(),
                ElementClass::T if i == 0 => "o".into(),
                ElementClass::T => String::new(),
                ElementClass::V => (i + 1).to_string(),
            };
            dom_labels[i] = label.clone();
            rng_labels[self.perm.apply(i)] = label;
        }
        let mut s = String::from("digraph diagram {\n  node [fontname=\"Helvetica\"];\n");
        s.push_str("  subgraph cluster_domain {\n  label=\"domain\";\n");
        self.domain.dot_body("d", &dom_labels, &mut s);
        s.push_str("  }\n  subgraph cluster_range {\n  label=\"range\";\n");
        self.range.dot_body("r", &rng_labels, &mut s);
        s.push_str("  }\n}\n");
        s
    }
}

impl<C: CaretKind> fmt::Debug for Diagram<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?}, {:?})", self.domain, self.perm, self.range)
    }
}

impl<C: CaretKind> fmt::Display for Diagram<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn tree<C: CaretKind>(t: &Tree<C>, out: &mut String) {
            match t {
                Tree::Leaf => out.push('.'),
                Tree::Node(c, ch) => {
                    out.push(c.tag());
                    out.push('(');
                    for (j, sub) in ch.iter().enumerate() {
                        if j > 0 {
                            out.push(',');
                        }
                        tree(sub, out);
                    }
                    out.push(')');
                }
            }
        }
        let (mut d, mut r) = (String::new(), String::new());
        tree(&self.domain, &mut d);
        tree(&self.range, &mut r);
        let perm = self.perm.to_one_based().iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
        write!(f, "domain {d}  perm [{perm}]  range {r}")
    }
}
