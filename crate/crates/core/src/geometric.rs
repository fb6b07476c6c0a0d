//! Non-crossing spanning trees on points in convex position (the k = 2
//! geometric model), used as an independent oracle for the bivariate
//! left/right count.

use std::fmt;

use crate::error::{bad, Error, Result};
use crate::signature::EdgeClassHist;

/// Largest point count accepted by [`enumerate_geometric_ncts`].
pub const MAX_POINTS: usize = 9;

/// A non-crossing spanning tree on points `1..=n` placed on a circle in
/// label order, rooted at point 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeometricNct {
    n: usize,
    // each pair stored as (min, max), sorted
    edges: Vec<(usize, usize)>,
}

/// Two chords cross in the interior iff they share no endpoint and exactly
/// one endpoint of the second lies strictly between those of the first.
pub fn chords_cross(e: (usize, usize), f: (usize, usize)) -> bool {
    let (a, b) = (e.0.min(e.1), e.0.max(e.1));
    let (c, d) = f;
    if a == c || a == d || b == c || b == d {
        return false;
    }
    let inside = |x: usize| a < x && x < b;
    inside(c) != inside(d)
}

impl GeometricNct {
    /// Checks edge count, connectivity and acyclicity, and that no two
    /// chords cross.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(bad("a tree needs at least one point"));
        }
        let mut edges: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        edges.sort_unstable();
        if edges.len() != n - 1 {
            return Err(Error::MalformedTree(format!(
                "{} edges on {n} points",
                edges.len()
            )));
        }
        let mut dsu = Dsu::new(n);
        for &(a, b) in &edges {
            if a < 1 || b > n || a == b {
                return Err(Error::MalformedTree(format!("bad edge {a}-{b}")));
            }
            if !dsu.union(a - 1, b - 1) {
                return Err(Error::MalformedTree(format!("edge {a}-{b} closes a cycle")));
            }
        }
        for (i, &e) in edges.iter().enumerate() {
            if let Some(&f) = edges[i + 1..].iter().find(|&&f| chords_cross(e, f)) {
                return Err(Error::MalformedTree(format!(
                    "edges {}-{} and {}-{} cross",
                    e.0, e.1, f.0, f.1
                )));
            }
        }
        Ok(GeometricNct { n, edges })
    }

    /// Parses `1-5,1-9,3-2` style edge lists; `n` is the largest label.
    pub fn parse(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for part in text
            .split([',', ' ', '\n'])
            .filter(|s| !s.trim().is_empty())
        {
            let (a, b) = part
                .trim()
                .split_once('-')
                .ok_or_else(|| Error::MalformedTree(format!("expected a-b, got {part:?}")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::MalformedTree(format!("bad label {s:?}: {e}")))
            };
            edges.push((parse(a)?, parse(b)?));
        }
        let n = edges.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(1);
        GeometricNct::new(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges oriented away from point 1 as `(parent, child)`, in BFS order.
    pub fn oriented_edges(&self) -> Vec<(usize, usize)> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.n + 1];
        let mut queue = std::collections::VecDeque::from([1]);
        seen[1] = true;
        let mut out = Vec::with_capacity(self.edges.len());
        while let Some(p) = queue.pop_front() {
            for &c in &adj[p] {
                if !seen[c] {
                    seen[c] = true;
                    out.push((p, c));
                    queue.push_back(c);
                }
            }
        }
        out
    }

    /// `(j, n - 1 - j)`: an edge `p -> c` is left (class 1) when `c < p`
    /// and right (class 2) otherwise.
    pub fn classify_left_right(&self) -> EdgeClassHist {
        let mut hist = EdgeClassHist::zeros(2);
        for (p, c) in self.oriented_edges() {
            hist.bump(if c < p { 1 } else { 2 });
        }
        hist
    }
}

impl fmt::Display for GeometricNct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}-{b}")?;
        }
        Ok(())
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// All non-crossing spanning trees on `n` circle points, found by
/// backtracking over the chords in lexicographic order with cycle and
/// crossing pruning.
pub fn enumerate_geometric_ncts(n: usize) -> Result<Vec<GeometricNct>> {
    if !(1..=MAX_POINTS).contains(&n) {
        return Err(bad(format!(
            "geometric enumeration needs 1 <= n <= {MAX_POINTS}, got {n}"
        )));
    }
    let chords: Vec<(usize, usize)> = (1..=n)
        .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(n - 1);
    search(n, &chords, 0, &mut chosen, &mut out);
    Ok(out)
}

fn search(
    n: usize,
    chords: &[(usize, usize)],
    from: usize,
    chosen: &mut Vec<(usize, usize)>,
    out: &mut Vec<GeometricNct>,
) {
    let need = n - 1 - chosen.len();
    if need == 0 {
        out.push(GeometricNct {
            n,
            edges: chosen.clone(),
        });
        return;
    }
    if chords.len() - from < need {
        return;
    }
    for i in from..chords.len() - need + 1 {
        let e = chords[i];
        if chosen.iter().any(|&f| chords_cross(e, f)) || closes_cycle(n, chosen, e) {
            continue;
        }
        chosen.push(e);
        search(n, chords, i + 1, chosen, out);
        chosen.pop();
    }
}

fn closes_cycle(n: usize, chosen: &[(usize, usize)], e: (usize, usize)) -> bool {
    let mut dsu = Dsu::new(n);
    for &(a, b) in chosen {
        dsu.union(a - 1, b - 1);
    }
    dsu.find(e.0 - 1) == dsu.find(e.1 - 1)
}
