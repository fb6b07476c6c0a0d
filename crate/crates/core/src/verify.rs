//! Cross-checks of the three counting routes over parameter ranges.
//!
//! A sweep is split into independent cells `(k, t, m)` that run on the
//! current rayon pool; the report lists them in a fixed order regardless
//! of scheduling.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::arith::BigCount;
use crate::bijection::{decompose_bounded, path_to_tree, recombine, tree_to_path};
use crate::error::Result;
use crate::formulas::{
    fuss_catalan, kdyck_count_t0, nct_bivariate, nct_bivariate_printed, nct_total, refined_count,
};
use crate::geometric::enumerate_geometric_ncts;
use crate::path::{enumerate_paths, residue_census};
use crate::series::{tree_gf, verify_substitution, ZSeries};
use crate::signature::{all_signatures, Signature};
use crate::tree::enumerate_trees;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CellReport {
    pub k: usize,
    pub t: usize,
    pub m: usize,
    pub paths: u64,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl CellReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for CellReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={} t={} m={}: {} ({} paths, {:.1} ms)",
            self.k,
            self.t,
            self.m,
            if self.passed() { "pass" } else { "FAIL" },
            self.paths,
            self.elapsed.as_secs_f64() * 1e3
        )?;
        for c in self.checks.iter().filter(|c| !c.passed) {
            write!(f, "\n    {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Exhaustive per-signature path counts against the closed form, and the
/// signature sum against the total.
pub fn check_formula_cell(k: usize, t: usize, m: usize) -> Result<(u64, Vec<Check>)> {
    let census = residue_census(k, m, t)?;
    let total: u64 = census.values().sum();
    let mut bad = Vec::new();
    let mut formula_sum = BigCount::zero();
    for a in all_signatures(k, m) {
        let formula = refined_count(t, &a)?;
        let oracle = census.get(&a).copied().unwrap_or(0);
        if formula != oracle {
            bad.push(format!("{a}: formula {formula}, enumeration {oracle}"));
        }
        if t == 0 && m > 0 && kdyck_count_t0(&a)? != formula {
            bad.push(format!(
                "{a}: bounded form at t=0 disagrees with the t=0 form"
            ));
        }
        formula_sum += formula;
    }
    let mut checks = vec![Check::new(
        "signature counts",
        bad.is_empty(),
        bad.join("; "),
    )];
    let mut totals_ok = formula_sum == total;
    let mut detail = format!("signature sum {formula_sum}, enumeration {total}");
    if t == 0 {
        let fc = fuss_catalan(k, m)?;
        totals_ok &= fc == total;
        detail.push_str(&format!(", Fuss-Catalan {fc}"));
    }
    checks.push(Check::new("totals", totals_ok, detail));
    Ok((total, checks))
}

/// Coefficient of `z^(m + t + 1)` in `series` against the closed form, term
/// by term; no monomial outside the signature set may appear.
pub fn check_series_cell(series: &ZSeries<BigInt>, k: usize, t: usize, m: usize) -> Result<Check> {
    let poly = series.coeff(m + t + 1)?;
    let mut bad = Vec::new();
    let mut seen = 0usize;
    for a in all_signatures(k, m) {
        let exps: Vec<u32> = a.counts().iter().map(|&x| x as u32).collect();
        let got = poly.coefficient(&exps);
        let want = refined_count(t, &a)?.to_bigint();
        if got != want {
            bad.push(format!("{a}: series {got}, formula {want}"));
        }
        if got != BigInt::from(0) {
            seen += 1;
        }
    }
    if seen != poly.len() {
        bad.push(format!(
            "{} monomials outside degree {m}",
            poly.len() - seen
        ));
    }
    Ok(Check::new(
        "series coefficients",
        bad.is_empty(),
        bad.join("; "),
    ))
}

/// Tree/path bijection at `t = 0`; decomposition and transport for `t > 0`.
pub fn check_bijection_cell(k: usize, t: usize, m: usize) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    if t == 0 {
        let paths: HashSet<String> = enumerate_paths(k, m, 0)?.map(|p| p.to_string()).collect();
        let mut image = HashSet::new();
        let (mut round_trip, mut transport) = (Vec::new(), Vec::new());
        let mut trees = 0usize;
        for tree in enumerate_trees(k, m)? {
            trees += 1;
            let p = tree_to_path(&tree);
            if p.residue_histogram() != tree.edge_class_histogram(0) {
                transport.push(tree.canonical());
            }
            if path_to_tree(&p)? != tree {
                round_trip.push(tree.canonical());
            }
            image.insert(p.to_string());
        }
        checks.push(Check::new(
            "bijection",
            image.len() == trees && image == paths,
            format!(
                "{trees} trees, {} distinct images, {} paths",
                image.len(),
                paths.len()
            ),
        ));
        checks.push(Check::new(
            "round trip",
            round_trip.is_empty(),
            round_trip.join(" "),
        ));
        checks.push(Check::new(
            "statistic transport",
            transport.is_empty(),
            transport.join(" "),
        ));
    } else {
        let (mut round_trip, mut transport) = (Vec::new(), Vec::new());
        for p in enumerate_paths(k, m, t)? {
            let d = decompose_bounded(&p)?;
            if recombine(&d)? != p || d.down_steps() != m {
                round_trip.push(p.to_string());
            }
            if d.transported_histogram()? != p.residue_histogram() {
                transport.push(p.to_string());
            }
        }
        checks.push(Check::new(
            "decompose/recombine",
            round_trip.is_empty(),
            round_trip.join(" "),
        ));
        checks.push(Check::new(
            "bounded transport",
            transport.is_empty(),
            transport.join(" "),
        ));
    }
    Ok(checks)
}

#[derive(Clone, Debug)]
pub struct BivariateRow {
    pub n: usize,
    pub j: usize,
    pub oracle: u64,
    /// `None` when the formula did not even divide exactly.
    pub formula: Option<BigCount>,
}

impl BivariateRow {
    pub fn passed(&self) -> bool {
        self.formula.as_ref().is_some_and(|f| *f == self.oracle)
    }
}

/// Geometric left/right tallies against the bivariate formula (or its
/// misprinted variant), plus the row total against `C(3n-3, n-1)/(2n-1)`.
pub fn check_bivariate(n: usize, printed: bool) -> Result<(Vec<BivariateRow>, Check)> {
    let mut tally: BTreeMap<usize, u64> = BTreeMap::new();
    let trees = enumerate_geometric_ncts(n)?;
    for t in &trees {
        *tally.entry(t.classify_left_right().get(1)).or_default() += 1;
    }
    let mut rows = Vec::new();
    for j in 0..=n - 2 {
        let formula = if printed {
            nct_bivariate_printed(n, j)
        } else {
            nct_bivariate(n, j)
        };
        rows.push(BivariateRow {
            n,
            j,
            oracle: tally.get(&j).copied().unwrap_or(0),
            formula: formula.ok(),
        });
    }
    let total = nct_total(n)?;
    let check = Check::new(
        "geometric total",
        total == trees.len() as u64,
        format!("{} trees, closed form {total}", trees.len()),
    );
    Ok((rows, check))
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub ks: Vec<usize>,
    /// `None` means every `t < k`.
    pub ts: Option<Vec<usize>>,
    pub ms: Vec<usize>,
    pub bivariate_ns: Vec<usize>,
    pub printed_bivariate: bool,
    pub series: bool,
    pub bijection: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            ks: vec![2, 3],
            ts: None,
            ms: (0..=5).collect(),
            bivariate_ns: (2..=8).collect(),
            printed_bivariate: false,
            series: true,
            bijection: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SubstitutionReport {
    pub k: usize,
    pub order: usize,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub cells: Vec<CellReport>,
    pub substitution: Vec<SubstitutionReport>,
    pub bivariate: Vec<(Vec<BivariateRow>, Check)>,
    pub elapsed: Duration,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(CellReport::passed)
            && self.substitution.iter().all(|s| s.passed)
            && self
                .bivariate
                .iter()
                .all(|(rows, c)| c.passed && rows.iter().all(BivariateRow::passed))
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cells {
            writeln!(f, "{c}")?;
        }
        for s in &self.substitution {
            writeln!(
                f,
                "substitution k={} order={}: {}",
                s.k,
                s.order,
                if s.passed { "pass" } else { "FAIL" }
            )?;
        }
        for (rows, check) in &self.bivariate {
            let n = rows.first().map_or(0, |r| r.n);
            let failed: Vec<String> = rows
                .iter()
                .filter(|r| !r.passed())
                .map(|r| match &r.formula {
                    Some(v) => format!("j={}: formula {v}, oracle {}", r.j, r.oracle),
                    None => format!("j={}: formula not integral, oracle {}", r.j, r.oracle),
                })
                .collect();
            let ok = failed.is_empty() && check.passed;
            write!(f, "bivariate n={n}: {}", if ok { "pass" } else { "FAIL" })?;
            for line in &failed {
                write!(f, "\n    mismatch {line}")?;
            }
            if !check.passed {
                write!(f, "\n    {}", check.detail)?;
            }
            writeln!(f)?;
        }
        write!(
            f,
            "{} ({:.2} s)",
            if self.passed() {
                "all identities hold"
            } else {
                "verification FAILED"
            },
            self.elapsed.as_secs_f64()
        )
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport> {
    let start = Instant::now();
    let mut wanted = Vec::new();
    for &k in &config.ks {
        let ts: Vec<usize> = match &config.ts {
            Some(ts) => ts.iter().copied().filter(|&t| t < k).collect(),
            None => (0..k).collect(),
        };
        for t in ts {
            for &m in &config.ms {
                wanted.push((k, t, m));
            }
        }
    }
    let max_m = config.ms.iter().copied().max().unwrap_or(0);

    // one series per (k, t), shared by its cells
    let mut series: BTreeMap<(usize, usize), ZSeries<BigInt>> = BTreeMap::new();
    if config.series {
        let keys: Vec<(usize, usize)> = wanted
            .iter()
            .map(|&(k, t, _)| (k, t))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let built: Vec<((usize, usize), ZSeries<BigInt>)> = keys
            .par_iter()
            .map(|&(k, t)| tree_gf(k, t, max_m + t + 1).map(|s| ((k, t), s)))
            .collect::<Result<_>>()?;
        series.extend(built);
    }

    let cells: Vec<CellReport> = wanted
        .par_iter()
        .map(|&(k, t, m)| {
            let started = Instant::now();
            let (paths, mut checks) = check_formula_cell(k, t, m)?;
            if let Some(s) = series.get(&(k, t)) {
                checks.push(check_series_cell(s, k, t, m)?);
            }
            if config.bijection {
                checks.extend(check_bijection_cell(k, t, m)?);
            }
            Ok(CellReport {
                k,
                t,
                m,
                paths,
                checks,
                elapsed: started.elapsed(),
            })
        })
        .collect::<Result<_>>()?;

    let substitution = if config.series {
        let mut ks: Vec<usize> = config.ks.clone();
        ks.dedup();
        ks.par_iter()
            .map(|&k| {
                let order = (max_m + k).max(1);
                verify_substitution::<BigInt>(k, order).map(|passed| SubstitutionReport {
                    k,
                    order,
                    passed,
                })
            })
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    let bivariate = config
        .bivariate_ns
        .par_iter()
        .map(|&n| check_bivariate(n, config.printed_bivariate))
        .collect::<Result<_>>()?;

    Ok(SweepReport {
        cells,
        substitution,
        bivariate,
        elapsed: start.elapsed(),
    })
}

/// Signature of a path-oracle count, convenient for spot checks.
pub fn oracle_count(k: usize, t: usize, a: &Signature) -> Result<u64> {
    Ok(enumerate_paths(k, a.total(), t)?
        .filter(|p| p.residue_histogram() == *a)
        .count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_sweep_passes() {
        let cfg = SweepConfig {
            ks: vec![2],
            ms: vec![0, 1, 2],
            bivariate_ns: vec![2, 3],
            ..Default::default()
        };
        let r = run_sweep(&cfg).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.cells.len(), 6);
    }

    #[test]
    fn printed_variant_fails_at_three() {
        let (rows, _) = check_bivariate(3, true).unwrap();
        assert!(!rows.iter().all(BivariateRow::passed));
        let (rows, check) = check_bivariate(3, false).unwrap();
        assert!(rows.iter().all(BivariateRow::passed) && check.passed);
    }
}
