use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{bad, Error, Result};

/// Residue class in `1..=k` of a level; residue 0 maps to `k`.
pub fn class_of_level(level: i64, k: usize) -> usize {
    match level.rem_euclid(k as i64) as usize {
        0 => k,
        r => r,
    }
}

/// A length-`k` tally `(a_1, ..., a_k)` of down-steps (or edges) by residue
/// class, with class 0 stored in the last slot.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Signature(Vec<usize>);

/// Down-step tally of a path.
pub type ResidueStats = Signature;
/// Edge tally of a tree.
pub type EdgeClassHist = Signature;

impl Signature {
    pub fn new(counts: Vec<usize>) -> Self {
        Signature(counts)
    }

    pub fn zeros(k: usize) -> Self {
        Signature(vec![0; k])
    }

    /// Checked constructor used by the formula layer.
    pub fn for_k(k: usize, counts: Vec<usize>) -> Result<Self> {
        if counts.len() != k {
            return Err(bad(format!(
                "signature has {} entries, expected k = {k}",
                counts.len()
            )));
        }
        Ok(Signature(counts))
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// `N = a_1 + ... + a_k`.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    /// `a_class`, 1-indexed.
    pub fn get(&self, class: usize) -> usize {
        self.0[class - 1]
    }

    pub(crate) fn bump(&mut self, class: usize) {
        self.0[class - 1] += 1;
    }

    pub fn add(&self, other: &Signature) -> Signature {
        Signature(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Signature {
    type Err = Error;

    /// Accepts `1,3,6` or `(1,3,6)`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        inner
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|e| bad(format!("bad signature entry {x:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Signature)
    }
}

/// Every signature of length `k` with entries summing to `total`, in
/// lexicographic order.
pub fn all_signatures(k: usize, total: usize) -> Vec<Signature> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Signature>) {
        if cur.len() + 1 == k {
            cur.push(left);
            out.push(Signature(cur.clone()));
            cur.pop();
            return;
        }
        for a in 0..=left {
            cur.push(a);
            rec(k, left - a, cur, out);
            cur.pop();
        }
    }
    if k > 0 {
        rec(k, total, &mut cur, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes() {
        assert_eq!(class_of_level(0, 3), 3);
        assert_eq!(class_of_level(-1, 2), 1);
        assert_eq!(class_of_level(-2, 3), 1);
        assert_eq!(class_of_level(5, 3), 2);
    }

    #[test]
    fn enumerates_compositions() {
        let sigs = all_signatures(3, 2);
        assert_eq!(sigs.len(), 6);
        assert_eq!(sigs[0].counts(), &[0, 0, 2]);
        assert!(sigs.iter().all(|s| s.total() == 2 && s.k() == 3));
        assert_eq!(all_signatures(2, 0), vec![Signature::new(vec![0, 0])]);
    }

    #[test]
    fn text_forms() {
        let s: Signature = "(1,3,6)".parse().unwrap();
        assert_eq!(s.to_string(), "(1,3,6)");
        assert_eq!("0, 2".parse::<Signature>().unwrap().counts(), &[0, 2]);
        assert!("1,x".parse::<Signature>().is_err());
    }
}
