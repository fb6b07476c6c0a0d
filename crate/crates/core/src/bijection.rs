//! Contour-walk bijection between k-non-crossing trees and k-Dyck paths,
//! and the splitting of a path bounded by `-t` into `t + 1` unbounded ones.
//!
//! Walking around a tree, descending an edge is an up-step, passing a
//! separator is an up-step, and climbing back along an edge is a down-step.
//! A node entered at level `L + 1` from level `L` visits group `g` at level
//! `L + g` and returns to `L` after group `k`. So the down-step of an edge
//! lands on the level its parent visited it from, which is exactly the
//! class assigned by [`KnctTree::edge_class_histogram`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::{step_delta, KDyckPath, Step};
use crate::signature::{EdgeClassHist, ResidueStats};
use crate::tree::{KnctNode, KnctTree};

pub fn tree_to_path(tree: &KnctTree) -> KDyckPath {
    let k = tree.k();
    let mut steps = Vec::with_capacity((k + 1) * tree.edges());
    fn emit(node: &KnctNode, steps: &mut Vec<Step>) {
        steps.push(Step::Up);
        for (g, group) in node.groups.iter().enumerate() {
            if g > 0 {
                steps.push(Step::Up);
            }
            for child in group {
                emit(child, steps);
            }
        }
        steps.push(Step::Down);
    }
    for child in tree.root_children() {
        emit(child, &mut steps);
    }
    KDyckPath::from_trusted(k, 0, steps)
}

/// Inverse of [`tree_to_path`], by first-return decomposition.
///
/// A nonempty path at base level `b` splits at its first return to `b`;
/// the prime piece is `U F_1 U F_2 ... U F_k D` where the `g`-th up-step is
/// the last one leaving level `b + g - 1` and `F_g` is a sequence of primes
/// at level `b + g`.
pub fn path_to_tree(path: &KDyckPath) -> Result<KnctTree> {
    if path.t() != 0 {
        return Err(Error::MalformedPath(format!(
            "tree decoding needs a path with boundary 0, got t = {}",
            path.t()
        )));
    }
    let k = path.k();
    let steps = path.steps();
    let mut after = Vec::with_capacity(steps.len());
    let mut level = 0i64;
    for s in steps {
        level += step_delta(*s, k);
        after.push(level);
    }
    let decoder = Decoder {
        k,
        steps,
        after: &after,
    };
    let root = decoder.forest(0, steps.len(), 0)?;
    KnctTree::new(k, root)
}

struct Decoder<'a> {
    k: usize,
    steps: &'a [Step],
    after: &'a [i64],
}

impl Decoder<'_> {
    fn before(&self, i: usize) -> i64 {
        if i == 0 {
            0
        } else {
            self.after[i - 1]
        }
    }

    fn forest(&self, lo: usize, hi: usize, base: i64) -> Result<Vec<KnctNode>> {
        let mut nodes = Vec::new();
        let mut i = lo;
        while i < hi {
            let j = (i..hi).find(|&j| self.after[j] == base).ok_or_else(|| {
                Error::MalformedPath(format!("no return to level {base} after step {i}"))
            })?;
            nodes.push(self.node(i, j, base)?);
            i = j + 1;
        }
        Ok(nodes)
    }

    fn node(&self, i: usize, j: usize, base: i64) -> Result<KnctNode> {
        if self.steps[i] != Step::Up || self.steps[j] != Step::Down {
            return Err(Error::MalformedPath(format!(
                "steps {i}..={j} do not form an excursion"
            )));
        }
        let mut groups = Vec::with_capacity(self.k);
        let mut start = i + 1;
        for g in 1..self.k {
            let level = base + g as i64;
            let sep = (start..j)
                .rev()
                .find(|&x| self.steps[x] == Step::Up && self.before(x) == level)
                .ok_or_else(|| {
                    Error::MalformedPath(format!("no up-step leaves level {level} in {i}..{j}"))
                })?;
            groups.push(self.forest(start, sep, level)?);
            start = sep + 1;
        }
        groups.push(self.forest(start, j, base + self.k as i64)?);
        Ok(KnctNode { groups })
    }
}

/// Edge statistic of the tree next to the residue statistic of its path.
pub fn statistic_transport(tree: &KnctTree) -> (EdgeClassHist, ResidueStats) {
    (
        tree.edge_class_histogram(0),
        tree_to_path(tree).residue_histogram(),
    )
}

/// A path bounded by `-t` split into `t + 1` paths bounded by 0.
///
/// Component `s` lives at vertical offset `-s` in the source path, so its
/// root edges carry the mark `r_{k-s}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundedDecomposition {
    k: usize,
    t: usize,
    components: Vec<KDyckPath>,
}

impl BoundedDecomposition {
    pub fn new(k: usize, t: usize, components: Vec<KDyckPath>) -> Result<Self> {
        if components.len() != t + 1 {
            return Err(Error::MalformedDecomposition(format!(
                "{} components for t = {t}",
                components.len()
            )));
        }
        if let Some(c) = components.iter().find(|c| c.k() != k || c.t() != 0) {
            return Err(Error::MalformedDecomposition(format!(
                "component {c} has k = {}, t = {}; expected k = {k}, t = 0",
                c.k(),
                c.t()
            )));
        }
        Ok(BoundedDecomposition { k, t, components })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn components(&self) -> &[KDyckPath] {
        &self.components
    }

    /// Vertical offset `-s` of each component.
    pub fn offsets(&self) -> Vec<i64> {
        (0..=self.t).map(|s| -(s as i64)).collect()
    }

    /// Marker index `k - s` carried by the root edges of component `s`.
    pub fn root_marks(&self) -> Vec<usize> {
        (0..=self.t).map(|s| self.k - s).collect()
    }

    pub fn down_steps(&self) -> usize {
        self.components.iter().map(KDyckPath::down_steps).sum()
    }

    /// Sum over components of their edge tallies, each taken with its own
    /// root offset.
    pub fn transported_histogram(&self) -> Result<EdgeClassHist> {
        let mut total = EdgeClassHist::zeros(self.k);
        for (s, c) in self.components.iter().enumerate() {
            total = total.add(&path_to_tree(c)?.edge_class_histogram(s));
        }
        Ok(total)
    }
}

/// Splits a bounded path. Let `u` be the last up-step leaving level -1.
/// Everything after `u` is component 0. The prefix before `u`, with `u`
/// moved to its front and everything lifted by one, is a path bounded by
/// `-(t - 1)`, which is split recursively into components `1..=t`. A path
/// that never dips below 0 is component 0 and the rest are empty.
pub fn decompose_bounded(path: &KDyckPath) -> Result<BoundedDecomposition> {
    let (k, t) = (path.k(), path.t());
    let parts = split(path.steps(), t, k);
    let components = parts
        .into_iter()
        .map(|p| KDyckPath::validate(k, 0, p).map_err(|e| Error::MalformedPath(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    BoundedDecomposition::new(k, t, components)
}

fn split(steps: &[Step], t: usize, k: usize) -> Vec<Vec<Step>> {
    if t == 0 {
        return vec![steps.to_vec()];
    }
    let mut level = 0i64;
    let mut cut = None;
    for (i, s) in steps.iter().enumerate() {
        if *s == Step::Up && level == -1 {
            cut = Some(i);
        }
        level += step_delta(*s, k);
    }
    match cut {
        None => {
            let mut out = vec![steps.to_vec()];
            out.extend(std::iter::repeat_n(Vec::new(), t));
            out
        }
        Some(i) => {
            let mut lifted = Vec::with_capacity(i + 1);
            lifted.push(Step::Up);
            lifted.extend_from_slice(&steps[..i]);
            let mut out = vec![steps[i + 1..].to_vec()];
            out.extend(split(&lifted, t - 1, k));
            out
        }
    }
}

/// Inverse of [`decompose_bounded`].
pub fn recombine(decomposition: &BoundedDecomposition) -> Result<KDyckPath> {
    let steps = join(decomposition.components())?;
    KDyckPath::validate(decomposition.k, decomposition.t, steps)
        .map_err(|e| Error::MalformedDecomposition(e.to_string()))
}

fn join(components: &[KDyckPath]) -> Result<Vec<Step>> {
    let (first, rest) = components
        .split_first()
        .ok_or_else(|| Error::MalformedDecomposition("no components".into()))?;
    if rest.is_empty() {
        return Ok(first.steps().to_vec());
    }
    let lifted = join(rest)?;
    match lifted.split_first() {
        None => Ok(first.steps().to_vec()),
        Some((Step::Up, prefix)) => {
            let mut out = prefix.to_vec();
            out.push(Step::Up);
            out.extend_from_slice(first.steps());
            Ok(out)
        }
        Some((Step::Down, _)) => Err(Error::MalformedDecomposition(
            "inner part starts with a down-step".into(),
        )),
    }
}
