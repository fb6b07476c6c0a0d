//! k-non-crossing trees in butterfly form.
//!
//! The root carries a single ordered group of children. Every other node
//! carries exactly `k` ordered groups, i.e. `k - 1` separators. This is the
//! combinatorial reading of `B = z / ((1 - r_1 B) ... (1 - r_k B))` and
//! `T = z / (1 - r_k B)`: a butterfly is one atom with `k` sequences of
//! butterflies, and a tree is the root atom with one sequence of them.
//!
//! Canonical text: a node is `(` group `|` group ... `)` where each group is
//! the concatenation of its children; a tree is the concatenation of the
//! root's children. The bare root is the empty string.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{bad, Error, Result};
use crate::signature::{class_of_level, EdgeClassHist};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KnctNode {
    pub groups: Vec<Vec<KnctNode>>,
}

impl KnctNode {
    pub fn leaf(k: usize) -> Self {
        KnctNode {
            groups: vec![Vec::new(); k],
        }
    }

    /// Number of nodes in this subtree, itself included.
    pub fn size(&self) -> usize {
        1 + self
            .groups
            .iter()
            .flatten()
            .map(KnctNode::size)
            .sum::<usize>()
    }

    fn write_canonical(&self, out: &mut String) {
        out.push('(');
        for (g, group) in self.groups.iter().enumerate() {
            if g > 0 {
                out.push('|');
            }
            for child in group {
                child.write_canonical(out);
            }
        }
        out.push(')');
    }

    fn check(&self, k: usize) -> Result<()> {
        if self.groups.len() != k {
            return Err(Error::MalformedTree(format!(
                "node has {} groups, expected {k}",
                self.groups.len()
            )));
        }
        self.groups.iter().flatten().try_for_each(|c| c.check(k))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KnctTree {
    k: usize,
    root: Vec<KnctNode>,
}

impl KnctTree {
    pub fn new(k: usize, root: Vec<KnctNode>) -> Result<Self> {
        if k < 2 {
            return Err(bad(format!("k must be at least 2, got {k}")));
        }
        root.iter().try_for_each(|c| c.check(k))?;
        Ok(KnctTree { k, root })
    }

    pub fn bare(k: usize) -> Self {
        KnctTree {
            k,
            root: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn root_children(&self) -> &[KnctNode] {
        &self.root
    }

    /// Non-root node count `m`; the tree has `m + 1` nodes and `m` edges.
    pub fn edges(&self) -> usize {
        self.root.iter().map(KnctNode::size).sum()
    }

    pub fn canonical(&self) -> String {
        let mut s = String::new();
        for c in &self.root {
            c.write_canonical(&mut s);
        }
        s
    }

    /// Parses the canonical encoding; whitespace is ignored.
    pub fn parse(k: usize, text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let mut root = Vec::new();
        while pos < chars.len() {
            root.push(parse_node(&chars, &mut pos)?);
        }
        KnctTree::new(k, root)
    }

    /// Edge tally under the top-down shift rule. Root edges get class
    /// `k - offset` (mod k); the child in group `g` of a node whose own
    /// edge has class `c` gets class `c + g` (mod k).
    pub fn edge_class_histogram(&self, offset: usize) -> EdgeClassHist {
        let mut hist = EdgeClassHist::zeros(self.k);
        let root_class = class_of_level(-(offset as i64), self.k);
        fn walk(node: &KnctNode, class: usize, k: usize, hist: &mut EdgeClassHist) {
            hist.bump(class);
            for (g, group) in node.groups.iter().enumerate() {
                let child_class = class_of_level((class + g + 1) as i64, k);
                for child in group {
                    walk(child, child_class, k, hist);
                }
            }
        }
        for c in &self.root {
            walk(c, root_class, self.k, &mut hist);
        }
        hist
    }

    /// Edge tally where an edge's class is simply its group index (root
    /// edges: class `k`).
    pub fn positional_histogram(&self) -> EdgeClassHist {
        let mut hist = EdgeClassHist::zeros(self.k);
        fn walk(node: &KnctNode, class: usize, hist: &mut EdgeClassHist) {
            hist.bump(class);
            for (g, group) in node.groups.iter().enumerate() {
                for child in group {
                    walk(child, g + 1, hist);
                }
            }
        }
        for c in &self.root {
            walk(c, self.k, &mut hist);
        }
        hist
    }

    /// Cyclically shifts every node's groups, top-down, so that afterwards
    /// each edge sits in the group whose index equals its shift-rule class.
    pub fn rotate_subtrees(&self) -> KnctTree {
        fn rot(node: &KnctNode, class: usize, k: usize) -> KnctNode {
            let mut groups = vec![Vec::new(); k];
            for (g, group) in node.groups.iter().enumerate() {
                let target = class_of_level((class + g + 1) as i64, k);
                groups[target - 1] = group.iter().map(|c| rot(c, target, k)).collect();
            }
            KnctNode { groups }
        }
        KnctTree {
            k: self.k,
            root: self.root.iter().map(|c| rot(c, self.k, self.k)).collect(),
        }
    }

    /// Inverse of [`KnctTree::rotate_subtrees`].
    pub fn unrotate_subtrees(&self) -> KnctTree {
        fn unrot(node: &KnctNode, class: usize, k: usize) -> KnctNode {
            let mut groups = vec![Vec::new(); k];
            for (g, group) in node.groups.iter().enumerate() {
                let child_class = g + 1;
                let source = class_of_level(child_class as i64 - class as i64, k);
                groups[source - 1] = group.iter().map(|c| unrot(c, child_class, k)).collect();
            }
            KnctNode { groups }
        }
        KnctTree {
            k: self.k,
            root: self.root.iter().map(|c| unrot(c, self.k, self.k)).collect(),
        }
    }
}

fn parse_node(chars: &[char], pos: &mut usize) -> Result<KnctNode> {
    if chars.get(*pos) != Some(&'(') {
        return Err(Error::MalformedTree(format!(
            "expected '(' at offset {}",
            *pos
        )));
    }
    *pos += 1;
    let mut groups = vec![Vec::new()];
    loop {
        match chars.get(*pos) {
            Some('(') => {
                let child = parse_node(chars, pos)?;
                groups.last_mut().unwrap().push(child);
            }
            Some('|') => {
                groups.push(Vec::new());
                *pos += 1;
            }
            Some(')') => {
                *pos += 1;
                return Ok(KnctNode { groups });
            }
            Some(c) => {
                return Err(Error::MalformedTree(format!(
                    "unexpected {c:?} at offset {}",
                    *pos
                )))
            }
            None => return Err(Error::MalformedTree("unbalanced parentheses".into())),
        }
    }
}

impl fmt::Display for KnctTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// JSON form `{"k": .., "root": [node, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeJson {
    pub k: usize,
    pub root: Vec<KnctNode>,
}

impl Serialize for KnctTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TreeJson {
            k: self.k,
            root: self.root.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KnctTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = TreeJson::deserialize(d)?;
        KnctTree::new(j.k, j.root).map_err(serde::de::Error::custom)
    }
}

/// Every tree with `m` non-root nodes, each exactly once.
///
/// Built bottom-up from the butterfly recursion: a node of size `s` is a
/// composition of `s - 1` over its `k` groups, each group a forest. The
/// result is materialized.
pub fn enumerate_trees(k: usize, m: usize) -> Result<std::vec::IntoIter<KnctTree>> {
    if k < 2 {
        return Err(bad(format!("k must be at least 2, got {k}")));
    }
    let forests = forest_table(k, m);
    let trees: Vec<KnctTree> = forests[m]
        .iter()
        .map(|f| KnctTree { k, root: f.clone() })
        .collect();
    Ok(trees.into_iter())
}

/// `table[s]` lists every ordered forest with `s` nodes.
fn forest_table(k: usize, m: usize) -> Vec<Vec<Vec<KnctNode>>> {
    let mut forests: Vec<Vec<Vec<KnctNode>>> = vec![vec![Vec::new()]];
    let mut nodes: Vec<Vec<KnctNode>> = vec![Vec::new()];
    for s in 1..=m {
        let mut these = Vec::new();
        for_each_composition(s - 1, k, &mut |parts| {
            let mut acc: Vec<Vec<Vec<KnctNode>>> = vec![Vec::new()];
            for &part in parts {
                let mut next = Vec::with_capacity(acc.len() * forests[part].len());
                for prefix in &acc {
                    for f in &forests[part] {
                        let mut groups = prefix.clone();
                        groups.push(f.clone());
                        next.push(groups);
                    }
                }
                acc = next;
            }
            these.extend(acc.into_iter().map(|groups| KnctNode { groups }));
        });
        nodes.push(these);

        let mut fs = Vec::new();
        for first in 1..=s {
            for head in &nodes[first] {
                for tail in &forests[s - first] {
                    let mut f = Vec::with_capacity(tail.len() + 1);
                    f.push(head.clone());
                    f.extend(tail.iter().cloned());
                    fs.push(f);
                }
            }
        }
        forests.push(fs);
    }
    forests
}

fn for_each_composition(total: usize, parts: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(left: usize, parts: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() + 1 == parts {
            cur.push(left);
            f(cur);
            cur.pop();
            return;
        }
        for a in 0..=left {
            cur.push(a);
            rec(left - a, parts, cur, f);
            cur.pop();
        }
    }
    rec(total, parts, &mut Vec::with_capacity(parts), f);
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeMap, HashSet};

    #[test]
    fn counts_by_generation() {
        assert_eq!(enumerate_trees(2, 2).unwrap().count(), 3);
        assert_eq!(enumerate_trees(2, 4).unwrap().count(), 55);
        for k in 2..=4 {
            let trees: Vec<_> = enumerate_trees(k, 0).unwrap().collect();
            assert_eq!(trees, vec![KnctTree::bare(k)]);
        }
        assert!(enumerate_trees(1, 2).is_err());
    }

    #[test]
    fn distinct_with_correct_size() {
        let mut seen = HashSet::new();
        for t in enumerate_trees(3, 4).unwrap() {
            assert_eq!(t.edges(), 4);
            assert!(seen.insert(t.canonical()));
        }
        assert_eq!(seen.len(), 140);
    }

    #[test]
    fn canonical_round_trip() {
        for t in enumerate_trees(3, 3).unwrap() {
            assert_eq!(KnctTree::parse(3, &t.canonical()).unwrap(), t);
        }
        let t = KnctTree::parse(2, " ( (|) | ) (|) ").unwrap();
        assert_eq!(t.canonical(), "((|)|)(|)");
        assert_eq!(t.edges(), 3);
        assert!(matches!(
            KnctTree::parse(3, "(|)"),
            Err(Error::MalformedTree(_))
        ));
        assert!(matches!(
            KnctTree::parse(2, "((|)"),
            Err(Error::MalformedTree(_))
        ));
        assert!(matches!(
            KnctTree::parse(2, "x"),
            Err(Error::MalformedTree(_))
        ));
    }

    #[test]
    fn single_edge_is_class_k() {
        for k in 2..=5 {
            let t = KnctTree::new(k, vec![KnctNode::leaf(k)]).unwrap();
            let mut want = vec![0; k];
            want[k - 1] = 1;
            assert_eq!(t.edge_class_histogram(0).counts(), &want[..]);
        }
    }

    #[test]
    fn group_k_child_of_root_child_is_class_k() {
        for k in 2..=4 {
            let mut node = KnctNode::leaf(k);
            node.groups[k - 1].push(KnctNode::leaf(k));
            let t = KnctTree::new(k, vec![node]).unwrap();
            assert_eq!(t.edge_class_histogram(0).get(k), 2);
        }
    }

    #[test]
    fn k2_m2_histograms() {
        let mut tally: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for t in enumerate_trees(2, 2).unwrap() {
            *tally
                .entry(t.edge_class_histogram(0).counts().to_vec())
                .or_default() += 1;
        }
        assert_eq!(tally, BTreeMap::from([(vec![0, 2], 2), (vec![1, 1], 1)]));
    }

    #[test]
    fn offset_moves_root_class() {
        let t = KnctTree::parse(3, "(||)").unwrap();
        assert_eq!(t.edge_class_histogram(1).counts(), &[0, 1, 0]);
        assert_eq!(t.edge_class_histogram(2).counts(), &[1, 0, 0]);
    }

    #[test]
    fn rotation_trivial_cases() {
        assert_eq!(KnctTree::bare(3).rotate_subtrees(), KnctTree::bare(3));
        // root children sit at class k, so their groups stay put
        let t = KnctTree::parse(3, "((||)(||)||)(||(||))").unwrap();
        let r = t.rotate_subtrees();
        assert_eq!(r.root_children()[1], t.root_children()[1]);
    }

    #[test]
    fn rotation_transports_statistic_k3() {
        for m in 0..=4 {
            let trees: Vec<_> = enumerate_trees(3, m).unwrap().collect();
            let mut images = HashSet::new();
            for t in &trees {
                let r = t.rotate_subtrees();
                assert_eq!(r.positional_histogram(), t.edge_class_histogram(0));
                assert_eq!(r.unrotate_subtrees(), *t);
                assert_eq!(r.edges(), m);
                images.insert(r.canonical());
            }
            assert_eq!(images.len(), trees.len());
        }
    }

    #[test]
    fn json_shape() {
        let t = KnctTree::parse(2, "(|(|))").unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(
            s,
            r#"{"k":2,"root":[{"groups":[[],[{"groups":[[],[]]}]]}]}"#
        );
        assert_eq!(serde_json::from_str::<KnctTree>(&s).unwrap(), t);
        assert!(
            serde_json::from_str::<KnctTree>(r#"{"k":3,"root":[{"groups":[[],[]]}]}"#).is_err()
        );
    }
}
