//! k-Dyck paths with a lower boundary `-t`: validation, residue statistics
//! and exhaustive generation.
//!
//! A path is a word over `U = (1, 1)` and `D = (1, -k)`. It starts and ends
//! at level 0 and never goes below `-t`, where `0 <= t < k`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{bad, Error, Result};
use crate::signature::{class_of_level, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Up,
    Down,
}

impl Step {
    pub fn letter(self) -> char {
        match self {
            Step::Up => 'U',
            Step::Down => 'D',
        }
    }
}

pub(crate) fn check_params(k: usize, t: usize) -> Result<()> {
    if k < 2 {
        return Err(bad(format!("k must be at least 2, got {k}")));
    }
    if t >= k {
        return Err(bad(format!(
            "boundary t must satisfy 0 <= t < k, got t={t}, k={k}"
        )));
    }
    Ok(())
}

/// Parses a `U`/`D` word; whitespace is ignored.
pub fn parse_steps(s: &str) -> Result<Vec<Step>> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .enumerate()
        .map(|(i, c)| match c {
            'U' => Ok(Step::Up),
            'D' => Ok(Step::Down),
            other => Err(Error::MalformedPath(format!(
                "unexpected character {other:?} at position {i}"
            ))),
        })
        .collect()
}

pub fn steps_to_string(steps: &[Step]) -> String {
    steps.iter().map(|s| s.letter()).collect()
}

/// A validated k-Dyck path with boundary `-t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KDyckPath {
    k: usize,
    t: usize,
    steps: Vec<Step>,
}

impl KDyckPath {
    /// Checks every invariant and wraps the steps.
    pub fn validate(k: usize, t: usize, steps: Vec<Step>) -> Result<Self> {
        check_params(k, t)?;
        let mut level = 0i64;
        for (i, s) in steps.iter().enumerate() {
            level += step_delta(*s, k);
            if level < -(t as i64) {
                return Err(Error::BoundaryViolation {
                    position: i,
                    level,
                    t,
                });
            }
        }
        if level != 0 {
            return Err(Error::EndpointViolation(level));
        }
        Ok(KDyckPath { k, t, steps })
    }

    pub fn parse(k: usize, t: usize, word: &str) -> Result<Self> {
        KDyckPath::validate(k, t, parse_steps(word)?)
    }

    /// The empty path.
    pub fn empty(k: usize, t: usize) -> Result<Self> {
        KDyckPath::validate(k, t, Vec::new())
    }

    pub(crate) fn from_trusted(k: usize, t: usize, steps: Vec<Step>) -> Self {
        debug_assert!(KDyckPath::validate(k, t, steps.clone()).is_ok());
        KDyckPath { k, t, steps }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn into_steps(self) -> Vec<Step> {
        self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn down_steps(&self) -> usize {
        self.steps.iter().filter(|s| **s == Step::Down).count()
    }

    /// Reinterprets the same word under a looser boundary.
    pub fn with_boundary(&self, t: usize) -> Result<Self> {
        KDyckPath::validate(self.k, t, self.steps.clone())
    }

    /// Level after each step.
    pub fn level_profile(&self) -> Vec<i64> {
        self.steps
            .iter()
            .scan(0i64, |level, s| {
                *level += step_delta(*s, self.k);
                Some(*level)
            })
            .collect()
    }

    /// Lowest level reached (0 for the empty path).
    pub fn min_level(&self) -> i64 {
        self.level_profile().into_iter().min().unwrap_or(0).min(0)
    }

    /// Landing levels of the down-steps, left to right.
    pub fn down_landings(&self) -> Vec<i64> {
        self.steps
            .iter()
            .zip(self.level_profile())
            .filter(|(s, _)| **s == Step::Down)
            .map(|(_, l)| l)
            .collect()
    }

    /// Tally of down-steps by landing level modulo `k`; residue 0 is
    /// stored at index `k`.
    pub fn residue_histogram(&self) -> Signature {
        let mut counts = vec![0usize; self.k];
        for level in self.down_landings() {
            counts[class_of_level(level, self.k) - 1] += 1;
        }
        Signature::new(counts)
    }
}

impl fmt::Display for KDyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&steps_to_string(&self.steps))
    }
}

pub(crate) fn step_delta(s: Step, k: usize) -> i64 {
    match s {
        Step::Up => 1,
        Step::Down => -(k as i64),
    }
}

/// JSON form `{"k": .., "t": .., "steps": "UUD.."}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathJson {
    pub k: usize,
    pub t: usize,
    pub steps: String,
}

impl From<&KDyckPath> for PathJson {
    fn from(p: &KDyckPath) -> Self {
        PathJson {
            k: p.k,
            t: p.t,
            steps: p.to_string(),
        }
    }
}

impl TryFrom<PathJson> for KDyckPath {
    type Error = Error;
    fn try_from(j: PathJson) -> Result<Self> {
        KDyckPath::parse(j.k, j.t, &j.steps)
    }
}

impl Serialize for KDyckPath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PathJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for KDyckPath {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PathJson::deserialize(d)?;
        KDyckPath::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl FromStr for Step {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "U" => Ok(Step::Up),
            "D" => Ok(Step::Down),
            _ => Err(Error::MalformedPath(format!("not a step: {s:?}"))),
        }
    }
}

/// Streams every path with `m` down-steps in lexicographic order (`U < D`).
///
/// Each call to `next` rewrites the tail of one working buffer: find the
/// rightmost `U` that may become a `D`, flip it, and refill the suffix with
/// its lexicographically smallest completion (all remaining ups, then all
/// downs). Any prefix that respects the boundary and the step budget has
/// such a completion, so no dead ends are explored.
#[derive(Clone, Debug)]
pub struct PathIter {
    k: usize,
    t: usize,
    steps: Vec<Step>,
    // levels[i] = level before step i
    levels: Vec<i64>,
    frozen: usize,
    state: IterState,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum IterState {
    Fresh,
    Running,
    Done,
}

impl PathIter {
    fn new(k: usize, m: usize, t: usize, prefix: &[Step]) -> Result<Self> {
        check_params(k, t)?;
        let len = (k + 1) * m;
        let ups_total = k * m;
        let mut levels = Vec::with_capacity(len + 1);
        levels.push(0i64);
        let (mut ups, mut downs) = (0usize, 0usize);
        let mut state = IterState::Fresh;
        for s in prefix {
            match s {
                Step::Up => ups += 1,
                Step::Down => downs += 1,
            }
            let next = levels.last().unwrap() + step_delta(*s, k);
            if ups > ups_total || downs > m || next < -(t as i64) {
                state = IterState::Done;
            }
            levels.push(next);
        }
        let mut steps = prefix.to_vec();
        if state != IterState::Done {
            steps.extend(std::iter::repeat_n(Step::Up, ups_total - ups));
            steps.extend(std::iter::repeat_n(Step::Down, m - downs));
            levels.truncate(prefix.len() + 1);
            for i in prefix.len()..len {
                let next = levels[i] + step_delta(steps[i], k);
                levels.push(next);
            }
        }
        Ok(PathIter {
            k,
            t,
            steps,
            levels,
            frozen: prefix.len(),
            state,
        })
    }

    fn advance(&mut self) -> bool {
        let len = self.steps.len();
        let (mut ups, mut downs) = (0usize, 0usize);
        for i in (self.frozen..len).rev() {
            match self.steps[i] {
                Step::Down => downs += 1,
                Step::Up => {
                    ups += 1;
                    if downs >= 1 && self.levels[i] - self.k as i64 >= -(self.t as i64) {
                        self.steps[i] = Step::Down;
                        let rest_ups = ups;
                        for j in 0..rest_ups {
                            self.steps[i + 1 + j] = Step::Up;
                        }
                        for j in (i + 1 + rest_ups)..len {
                            self.steps[j] = Step::Down;
                        }
                        for j in i..len {
                            self.levels[j + 1] = self.levels[j] + step_delta(self.steps[j], self.k);
                        }
                        return true;
                    }
                }
            }
        }
        false
    }
}

impl Iterator for PathIter {
    type Item = KDyckPath;

    fn next(&mut self) -> Option<KDyckPath> {
        match self.state {
            IterState::Done => return None,
            IterState::Fresh => self.state = IterState::Running,
            IterState::Running => {
                if !self.advance() {
                    self.state = IterState::Done;
                    return None;
                }
            }
        }
        Some(KDyckPath::from_trusted(self.k, self.t, self.steps.clone()))
    }
}

impl std::iter::FusedIterator for PathIter {}

/// Every path with `m` down-steps and boundary `-t`, each exactly once.
pub fn enumerate_paths(k: usize, m: usize, t: usize) -> Result<PathIter> {
    PathIter::new(k, m, t, &[])
}

/// The paths that begin with `prefix`, in the same order as
/// [`enumerate_paths`]. An infeasible prefix yields nothing.
pub fn enumerate_paths_with_prefix(
    k: usize,
    m: usize,
    t: usize,
    prefix: &[Step],
) -> Result<PathIter> {
    PathIter::new(k, m, t, prefix)
}

/// All feasible prefixes of length `depth` (capped at the path length) in
/// lexicographic order. Their completion sets partition the full
/// enumeration and concatenate back to it in this order.
pub fn path_partitions(k: usize, m: usize, t: usize, depth: usize) -> Result<Vec<Vec<Step>>> {
    check_params(k, t)?;
    let depth = depth.min((k + 1) * m);
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(depth);
    #[allow(clippy::too_many_arguments)]
    fn walk(
        k: usize,
        m: usize,
        t: usize,
        depth: usize,
        level: i64,
        ups: usize,
        downs: usize,
        prefix: &mut Vec<Step>,
        out: &mut Vec<Vec<Step>>,
    ) {
        if prefix.len() == depth {
            out.push(prefix.clone());
            return;
        }
        if ups < k * m {
            prefix.push(Step::Up);
            walk(k, m, t, depth, level + 1, ups + 1, downs, prefix, out);
            prefix.pop();
        }
        if downs < m && level - k as i64 >= -(t as i64) {
            prefix.push(Step::Down);
            walk(
                k,
                m,
                t,
                depth,
                level - k as i64,
                ups,
                downs + 1,
                prefix,
                out,
            );
            prefix.pop();
        }
    }
    walk(k, m, t, depth, 0, 0, 0, &mut prefix, &mut out);
    Ok(out)
}

const PARTITION_DEPTH: usize = 8;

/// Collects every path using the current rayon pool; the result is in the
/// same order as [`enumerate_paths`].
pub fn par_enumerate_paths(k: usize, m: usize, t: usize) -> Result<Vec<KDyckPath>> {
    let parts = path_partitions(k, m, t, PARTITION_DEPTH)?;
    let chunks: Vec<Vec<KDyckPath>> = parts
        .par_iter()
        .map(|p| enumerate_paths_with_prefix(k, m, t, p).map(|it| it.collect()))
        .collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Number of paths per residue signature, computed in parallel.
pub fn residue_census(k: usize, m: usize, t: usize) -> Result<BTreeMap<Signature, u64>> {
    let parts = path_partitions(k, m, t, PARTITION_DEPTH)?;
    let maps: Vec<BTreeMap<Signature, u64>> = parts
        .par_iter()
        .map(|p| {
            let mut map = BTreeMap::new();
            for path in enumerate_paths_with_prefix(k, m, t, p)? {
                *map.entry(path.residue_histogram()).or_insert(0) += 1;
            }
            Ok(map)
        })
        .collect::<Result<_>>()?;
    let mut total = BTreeMap::new();
    for map in maps {
        for (sig, n) in map {
            *total.entry(sig).or_insert(0) += n;
        }
    }
    Ok(total)
}
