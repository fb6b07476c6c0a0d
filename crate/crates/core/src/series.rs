//! Truncated power series in one variable whose coefficients are sparse
//! polynomials in the markers `r_1, ..., r_k`.
//!
//! The coefficient ring is generic. Anything exact that `num-traits` can
//! describe as a ring works; [`crate::BigSeries`] (over `BigInt`) is the one
//! the verification code uses, while `i64`/`i128` are handy for small
//! orders.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{bad, Error, Result};

/// An exact commutative ring.
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Coefficient for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Sparse polynomial in `r_1..r_k`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<C> {
    vars: usize,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Coefficient> MultiPoly<C> {
    pub fn zero(vars: usize) -> Self {
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: C) -> Self {
        let mut p = MultiPoly::zero(vars);
        p.add_term(vec![0; vars], c);
        p
    }

    pub fn one(vars: usize) -> Self {
        MultiPoly::constant(vars, C::one())
    }

    /// The marker `r_i`, 1-indexed.
    pub fn var(vars: usize, i: usize) -> Self {
        let mut e = vec![0; vars];
        e[i - 1] = 1;
        let mut p = MultiPoly::zero(vars);
        p.add_term(e, C::one());
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &C)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `r^exponents`.
    pub fn coefficient(&self, exponents: &[u32]) -> C {
        self.terms.get(exponents).cloned().unwrap_or_else(C::zero)
    }

    fn add_term(&mut self, e: Vec<u32>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Value at `r_1 = ... = r_k = 1`.
    pub fn eval_at_ones(&self) -> C {
        self.terms.values().cloned().fold(C::zero(), |a, b| a + b)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = MultiPoly::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Coefficient> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, p)| **p > 0)
                .map(|(v, p)| {
                    if *p == 1 {
                        format!("r{}", v + 1)
                    } else {
                        format!("r{}^{p}", v + 1)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                f.write_str(&mono.join("*"))?;
            } else {
                write!(f, "{c}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Power series truncated after `z^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZSeries<C> {
    vars: usize,
    coeffs: Vec<MultiPoly<C>>,
}

impl<C: Coefficient> ZSeries<C> {
    pub fn zero(vars: usize, order: usize) -> Self {
        ZSeries {
            vars,
            coeffs: vec![MultiPoly::zero(vars); order + 1],
        }
    }

    pub fn one(vars: usize, order: usize) -> Self {
        ZSeries::monomial(vars, order, 0, MultiPoly::one(vars))
    }

    /// `p * z^power` (zero if `power > order`).
    pub fn monomial(vars: usize, order: usize, power: usize, p: MultiPoly<C>) -> Self {
        let mut s = ZSeries::zero(vars, order);
        if power <= order {
            s.coeffs[power] = p;
        }
        s
    }

    pub fn from_coeffs(vars: usize, coeffs: Vec<MultiPoly<C>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(bad("a series needs at least the constant coefficient"));
        }
        if coeffs.iter().any(|p| p.vars != vars) {
            return Err(bad(
                "coefficient polynomials disagree on the number of markers",
            ));
        }
        Ok(ZSeries { vars, coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn coeffs(&self) -> &[MultiPoly<C>] {
        &self.coeffs
    }

    /// `[z^power]` of the series.
    pub fn coeff(&self, power: usize) -> Result<&MultiPoly<C>> {
        self.coeffs.get(power).ok_or(Error::OutOfRange {
            index: power,
            order: self.order(),
        })
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        if self.vars != other.vars {
            return Err(bad(format!(
                "marker count mismatch: {} vs {}",
                self.vars, other.vars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(ZSeries {
            vars: self.vars,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(ZSeries {
            vars: self.vars,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let order = self.order();
        let mut out = ZSeries::zero(self.vars, order);
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs[..=order - i]
                .iter()
                .enumerate()
                .filter(|(_, b)| !b.is_zero())
            {
                out.coeffs[i + j] = out.coeffs[i + j].add(&a.mul(b));
            }
        }
        Ok(out)
    }

    /// Multiplies every coefficient by a polynomial.
    pub fn scale(&self, p: &MultiPoly<C>) -> Self {
        ZSeries {
            vars: self.vars,
            coeffs: self.coeffs.iter().map(|c| c.mul(p)).collect(),
        }
    }

    /// Multiplies by `z^power`, truncating.
    pub fn shift(&self, power: usize) -> Self {
        let mut out = ZSeries::zero(self.vars, self.order());
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + power <= self.order() {
                out.coeffs[i + power] = c.clone();
            }
        }
        out
    }

    /// Multiplicative inverse of a series whose constant term is 1.
    pub fn reciprocal(&self) -> Result<Self> {
        if self.coeffs[0] != MultiPoly::one(self.vars) {
            return Err(Error::NonUnitConstantTerm);
        }
        let order = self.order();
        let mut inv: Vec<MultiPoly<C>> = Vec::with_capacity(order + 1);
        inv.push(MultiPoly::one(self.vars));
        for n in 1..=order {
            let mut acc = MultiPoly::zero(self.vars);
            for i in 1..=n {
                if !self.coeffs[i].is_zero() && !inv[n - i].is_zero() {
                    acc = acc.add(&self.coeffs[i].mul(&inv[n - i]));
                }
            }
            inv.push(acc.neg());
        }
        Ok(ZSeries {
            vars: self.vars,
            coeffs: inv,
        })
    }

    /// `self(inner)`, truncated at `inner`'s order. `inner` must have zero
    /// constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(bad(
                "inner series of a composition must have zero constant term",
            ));
        }
        let order = self.order();
        let mut out = ZSeries::monomial(self.vars, order, 0, self.coeffs[0].clone());
        let mut power = ZSeries::one(self.vars, order);
        for n in 1..=order {
            power = power.mul(inner)?;
            if !self.coeffs[n].is_zero() {
                out = out.add(&power.scale(&self.coeffs[n]))?;
            }
        }
        Ok(out)
    }
}

/// `1 - r_j * s`.
fn one_minus_marked<C: Coefficient>(s: &ZSeries<C>, j: usize) -> ZSeries<C> {
    let marked = s.scale(&MultiPoly::var(s.vars, j));
    ZSeries::one(s.vars, s.order())
        .sub(&marked)
        .expect("same shape")
}

/// The butterfly series: the unique `B` with `B(0) = 0` and
/// `B = z / ((1 - r_1 B) ... (1 - r_k B))`, by fixed-point iteration from
/// `B = 0`. Each pass fixes at least one more coefficient, so at most
/// `order + 1` passes run.
pub fn solve_butterfly<C: Coefficient>(k: usize, order: usize) -> Result<ZSeries<C>> {
    if k < 2 || order < 1 {
        return Err(bad(format!(
            "butterfly series needs k >= 2 and order >= 1, got k={k}, order={order}"
        )));
    }
    let mut b = ZSeries::zero(k, order);
    for _ in 0..=order {
        let next = inverse_product(&b, 1..=k)?.shift(1);
        if next == b {
            break;
        }
        b = next;
    }
    Ok(b)
}

/// `prod_{j in marks} 1 / (1 - r_j s)`.
fn inverse_product<C: Coefficient>(
    s: &ZSeries<C>,
    marks: impl IntoIterator<Item = usize>,
) -> Result<ZSeries<C>> {
    let mut acc = ZSeries::one(s.vars, s.order());
    for j in marks {
        acc = acc.mul(&one_minus_marked(s, j).reciprocal()?)?;
    }
    Ok(acc)
}

/// `v (1 - r_1 v) ... (1 - r_k v)` as a series in `v`.
pub fn substitution_series<C: Coefficient>(k: usize, order: usize) -> Result<ZSeries<C>> {
    let v = ZSeries::monomial(k, order, 1, MultiPoly::one(k));
    let mut acc = v.clone();
    for j in 1..=k {
        acc = acc.mul(&one_minus_marked(&v, j))?;
    }
    Ok(acc)
}

/// Checks that `B(v (1 - r_1 v) ... (1 - r_k v)) = v` up to `v^order`.
pub fn verify_substitution<C: Coefficient>(k: usize, order: usize) -> Result<bool> {
    let b: ZSeries<C> = solve_butterfly(k, order)?;
    let composed = b.compose(&substitution_series(k, order)?)?;
    Ok(composed == ZSeries::monomial(k, order, 1, MultiPoly::one(k)))
}

/// Marked generating function of paths bounded by `-t`:
/// `F = z^(t+1) prod_{j=k-t}^{k} 1 / (1 - r_j B)`.
///
/// For `t = 0` this is the tree series `T = z / (1 - r_k B)`. The
/// coefficient of `z^(N + t + 1) r^a` counts paths with `N` down-steps and
/// residue signature `a`.
pub fn tree_gf<C: Coefficient>(k: usize, t: usize, order: usize) -> Result<ZSeries<C>> {
    if t >= k {
        return Err(bad(format!(
            "boundary t must satisfy 0 <= t < k, got t={t}, k={k}"
        )));
    }
    let b = solve_butterfly(k, order.max(1))?;
    let f = inverse_product(&b, k - t..=k)?.shift(t + 1);
    if order == 0 {
        return ZSeries::from_coeffs(k, vec![f.coeffs[0].clone()]);
    }
    Ok(f)
}

/// One line of the `series` export: `{"z": n, "terms": [{"exponents": [..], "count": ".."}]}`.
#[derive(Clone, Debug, Serialize)]
pub struct CoeffJson {
    pub z: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TermJson {
    pub exponents: Vec<u32>,
    pub count: String,
}

impl CoeffJson {
    pub fn new<C: Coefficient>(z: usize, p: &MultiPoly<C>) -> Self {
        CoeffJson {
            z,
            terms: p
                .terms()
                .map(|(e, c)| TermJson {
                    exponents: e.to_vec(),
                    count: c.to_string(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type S = ZSeries<BigInt>;
    type P = MultiPoly<BigInt>;

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn identity_and_geometric() {
        let s = S::from_coeffs(
            2,
            vec![P::one(2), P::var(2, 1), P::var(2, 2).mul(&P::var(2, 2))],
        )
        .unwrap();
        assert_eq!(S::one(2, 2).mul(&s).unwrap(), s);

        let x = one_minus_marked(&S::monomial(2, 5, 1, P::one(2)), 1);
        let inv = x.reciprocal().unwrap();
        for i in 0..=5u32 {
            assert_eq!(inv.coeff(i as usize).unwrap().coefficient(&[i, 0]), int(1));
            assert_eq!(inv.coeff(i as usize).unwrap().len(), 1);
        }
    }

    #[test]
    fn errors() {
        let a = S::zero(2, 3);
        let b = S::zero(2, 4);
        assert_eq!(a.add(&b), Err(Error::OrderMismatch(3, 4)));
        assert_eq!(a.reciprocal(), Err(Error::NonUnitConstantTerm));
        assert!(matches!(
            a.coeff(4),
            Err(Error::OutOfRange { index: 4, order: 3 })
        ));
        assert!(tree_gf::<BigInt>(2, 2, 4).is_err());
        assert!(solve_butterfly::<BigInt>(1, 4).is_err());
    }

    #[test]
    fn butterfly_leading_terms() {
        let b: S = solve_butterfly(3, 4).unwrap();
        assert!(b.coeff(0).unwrap().is_zero());
        assert_eq!(*b.coeff(1).unwrap(), P::one(3));
        let want = P::var(3, 1).add(&P::var(3, 2)).add(&P::var(3, 3));
        assert_eq!(*b.coeff(2).unwrap(), want);
    }

    #[test]
    fn substitution_identity() {
        assert!(verify_substitution::<BigInt>(2, 8).unwrap());
        assert!(verify_substitution::<BigInt>(3, 6).unwrap());
        for k in 2..=5 {
            assert!(verify_substitution::<BigInt>(k, 1).unwrap());
        }
    }

    #[test]
    fn tree_series_small_coefficients() {
        let f: S = tree_gf(2, 0, 5).unwrap();
        assert!(f.coeff(0).unwrap().is_zero());
        assert_eq!(*f.coeff(1).unwrap(), P::one(2));
        assert_eq!(*f.coeff(2).unwrap(), P::var(2, 2));
        let r1 = P::var(2, 1);
        let r2 = P::var(2, 2);
        let want = r2.mul(&r2).mul(&P::constant(2, int(2))).add(&r1.mul(&r2));
        assert_eq!(*f.coeff(3).unwrap(), want);
    }

    #[test]
    fn generic_over_machine_integers() {
        let big: S = tree_gf(3, 1, 6).unwrap();
        let small: ZSeries<i64> = tree_gf(3, 1, 6).unwrap();
        for n in 0..=6 {
            let (pb, ps) = (big.coeff(n).unwrap(), small.coeff(n).unwrap());
            assert_eq!(pb.len(), ps.len());
            for (e, c) in ps.terms() {
                assert_eq!(pb.coefficient(e), int(*c));
            }
        }
    }

    #[test]
    fn composition_with_identity() {
        let s: S = tree_gf(2, 1, 5).unwrap();
        let z = S::monomial(2, 5, 1, P::one(2));
        assert_eq!(s.compose(&z).unwrap(), s);
        assert!(s.compose(&S::one(2, 5)).is_err());
    }

    #[test]
    fn display() {
        let p = P::var(2, 1).mul(&P::var(2, 2)).add(&P::constant(2, int(3)));
        assert_eq!(p.to_string(), "3 + r1*r2");
        assert_eq!(P::zero(2).to_string(), "0");
    }

    fn small_series(order: usize) -> impl Strategy<Value = ZSeries<i64>> {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), order).prop_map(
            move |rows| {
                let mut coeffs = vec![MultiPoly::one(2)];
                for row in rows {
                    let p = MultiPoly::constant(2, row[0])
                        .add(&MultiPoly::var(2, 1).mul(&MultiPoly::constant(2, row[1])))
                        .add(&MultiPoly::var(2, 2).mul(&MultiPoly::constant(2, row[2])));
                    coeffs.push(p);
                }
                ZSeries::from_coeffs(2, coeffs).unwrap()
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 64, rng_seed: proptest::test_runner::RngSeed::Fixed(7), ..ProptestConfig::default() })]
        #[test]
        fn reciprocal_is_inverse(x in small_series(5)) {
            let inv = x.reciprocal().unwrap();
            prop_assert_eq!(inv.mul(&x).unwrap(), ZSeries::one(2, 5));
        }

        #[test]
        fn multiplication_commutes(x in small_series(4), y in small_series(4)) {
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        }
    }
}
