//! Closed-form counts.
//!
//! Everything is parameterized by `N`, the number of down-steps (equally,
//! the number of non-root nodes). A tree on `n` nodes has `N = n - 1`
//! edges; a path bounded by `-t` with `N` down-steps is the coefficient of
//! `z^(N + t + 1)` in its generating function.

use crate::arith::{binomial, exact_div, BigCount};
use crate::error::{bad, Result};
use crate::signature::{all_signatures, Signature};

/// Non-crossing trees on `n` nodes with `j` left and `n - 1 - j` right
/// edges: `C(n-2+j, j) C(2n-2-j, n-2-j) / (n - 1)`.
pub fn nct_bivariate(n: usize, j: usize) -> Result<BigCount> {
    check_bivariate(n, j)?;
    let (n, j) = (n as i64, j as i64);
    let num = &binomial(n - 2 + j, j) * &binomial(2 * n - 2 - j, n - 2 - j);
    exact_div(&num, &BigCount::from((n - 1) as u64))
}

/// The same count with the first factor written as `C(n-2-j, j)`. Kept only
/// so the verification suite can show that this variant is wrong.
pub fn nct_bivariate_printed(n: usize, j: usize) -> Result<BigCount> {
    check_bivariate(n, j)?;
    let (n, j) = (n as i64, j as i64);
    let num = &binomial(n - 2 - j, j) * &binomial(2 * n - 2 - j, n - 2 - j);
    exact_div(&num, &BigCount::from((n - 1) as u64))
}

fn check_bivariate(n: usize, j: usize) -> Result<()> {
    if n < 2 || j > n - 2 {
        return Err(bad(format!(
            "bivariate count needs n >= 2 and 0 <= j <= n - 2, got n={n}, j={j}"
        )));
    }
    Ok(())
}

/// Total non-crossing trees on `n >= 1` nodes: `C(3n-3, n-1) / (2n - 1)`.
pub fn nct_total(n: usize) -> Result<BigCount> {
    if n == 0 {
        return Err(bad("n must be at least 1"));
    }
    let n = n as i64;
    exact_div(
        &binomial(3 * n - 3, n - 1),
        &BigCount::from((2 * n - 1) as u64),
    )
}

/// k-Dyck paths (boundary 0) with residue signature `a`, `N = sum a >= 1`:
/// `(1/N) prod_{h<k} C(N-1+a_h, a_h) * C(N+a_k, a_k-1)`.
///
/// Zero when `a_k = 0`: the last down-step always lands on level 0.
pub fn kdyck_count_t0(a: &Signature) -> Result<BigCount> {
    let (k, n) = check_signature(a)?;
    let mut acc = BigCount::one();
    for h in 1..k {
        let ah = a.get(h) as i64;
        acc = &acc * &binomial(n - 1 + ah, ah);
    }
    let ak = a.get(k) as i64;
    acc = &acc * &binomial(n + ak, ak - 1);
    exact_div(&acc, &BigCount::from(n as u64))
}

/// k-Dyck paths bounded by `-t` with residue signature `a`, `N = sum a >= 1`:
/// `(a_{k-t} + ... + a_k) / (N (N+1)) * prod_{h<k-t} C(N-1+a_h, a_h)
///  * prod_{l>=k-t} C(N+a_l, a_l)`.
pub fn kdyck_count_bounded(t: usize, a: &Signature) -> Result<BigCount> {
    let (k, n) = check_signature(a)?;
    if t >= k {
        return Err(bad(format!(
            "boundary t must satisfy 0 <= t < k, got t={t}, k={k}"
        )));
    }
    let marked: usize = (k - t..=k).map(|l| a.get(l)).sum();
    let mut acc = BigCount::from(marked);
    for h in 1..k - t {
        let ah = a.get(h) as i64;
        acc = &acc * &binomial(n - 1 + ah, ah);
    }
    for l in k - t..=k {
        let al = a.get(l) as i64;
        acc = &acc * &binomial(n + al, al);
    }
    exact_div(&acc, &BigCount::from((n * (n + 1)) as u64))
}

/// [`kdyck_count_bounded`] extended to `N = 0`, where the empty path is the
/// only object.
pub fn refined_count(t: usize, a: &Signature) -> Result<BigCount> {
    if a.k() >= 2 && a.total() == 0 {
        if t >= a.k() {
            return Err(bad(format!(
                "boundary t must satisfy 0 <= t < k, got t={t}, k={}",
                a.k()
            )));
        }
        return Ok(BigCount::one());
    }
    kdyck_count_bounded(t, a)
}

fn check_signature(a: &Signature) -> Result<(usize, i64)> {
    let k = a.k();
    if k < 2 {
        return Err(bad(format!("signature needs k >= 2 entries, got {k}")));
    }
    let n = a.total();
    if n == 0 {
        return Err(bad("signature must have at least one down-step"));
    }
    Ok((k, n as i64))
}

/// `C((k+1)m, m) / (km + 1)`, the number of k-Dyck paths with `m`
/// down-steps.
pub fn fuss_catalan(k: usize, m: usize) -> Result<BigCount> {
    if k < 2 {
        return Err(bad(format!("k must be at least 2, got {k}")));
    }
    let (k, m) = (k as i64, m as i64);
    exact_div(
        &binomial((k + 1) * m, m),
        &BigCount::from((k * m + 1) as u64),
    )
}

/// Sum of the refined counts over every signature with `m` down-steps.
pub fn bounded_total(k: usize, t: usize, m: usize) -> Result<BigCount> {
    if k < 2 {
        return Err(bad(format!("k must be at least 2, got {k}")));
    }
    all_signatures(k, m)
        .iter()
        .map(|a| refined_count(t, a))
        .sum()
}
