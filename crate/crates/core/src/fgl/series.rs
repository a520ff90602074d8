use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::{CoeffRing, RingElem, Scalars};
use crate::error::{Error, Result};

/// A commutative algebra over a [`CoeffRing`] in which the arguments we feed
/// to power series are nilpotent, so that evaluation is a finite sum.
pub trait TruncatedAlgebra: Clone {
    fn coeff_ring(&self) -> &Arc<CoeffRing>;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn scaled(&self, c: &RingElem) -> Self;
    fn is_zero_elem(&self) -> bool;

    /// `self^0, ..., self^max`, stopping early once a power vanishes.
    fn powers(&self, max: u32) -> Vec<Self> {
        let mut out = vec![self.one_like()];
        for k in 1..=max {
            let next = out[k as usize - 1].times(self);
            let done = next.is_zero_elem();
            out.push(next);
            if done {
                break;
            }
        }
        out
    }
}

/// Univariate power series `sum c_k x^k`, truncated above degree `N`.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    ring: Arc<CoeffRing>,
    coeffs: Vec<RingElem>,
}

impl Series {
    pub fn zero(ring: &Arc<CoeffRing>, truncation: u32) -> Series {
        Series {
            ring: ring.clone(),
            coeffs: vec![RingElem::zero(ring); truncation as usize + 1],
        }
    }

    /// The series `x`.
    pub fn variable(ring: &Arc<CoeffRing>, truncation: u32) -> Series {
        let mut s = Series::zero(ring, truncation);
        if truncation >= 1 {
            s.coeffs[1] = RingElem::one(ring);
        }
        s
    }

    /// Build from coefficients `c_0, c_1, ...`; entries above `N` are dropped.
    pub fn from_coeffs(ring: &Arc<CoeffRing>, truncation: u32, coeffs: Vec<RingElem>) -> Series {
        let mut s = Series::zero(ring, truncation);
        for (k, c) in coeffs.into_iter().enumerate().take(truncation as usize + 1) {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn truncation(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn ring(&self) -> &Arc<CoeffRing> {
        &self.ring
    }

    /// Coefficient of `x^k`; zero above the truncation.
    pub fn coeff(&self, k: usize) -> RingElem {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| RingElem::zero(&self.ring))
    }

    pub fn coeffs(&self) -> &[RingElem] {
        &self.coeffs
    }

    pub fn neg(&self) -> Series {
        Series {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.plus(&other.neg())
    }

    /// Evaluate at a nilpotent element of any truncated algebra.
    pub fn eval_at<A: TruncatedAlgebra>(&self, p: &A) -> A {
        let powers = p.powers(self.truncation());
        let mut acc = p.zero_like();
        for (k, pk) in powers.iter().enumerate() {
            let c = &self.coeffs[k];
            if !c.is_zero() && !pk.is_zero_elem() {
                acc = acc.plus(&pk.scaled(c));
            }
        }
        acc
    }

    /// `self(inner(x))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Series) -> Result<Series> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NotNilpotent(format!(
                "inner series has constant term {}",
                inner.coeffs[0]
            )));
        }
        Ok(self.eval_at(inner))
    }

    pub fn derivative(&self) -> Series {
        let n = self.truncation();
        let coeffs = (1..=n as usize)
            .map(|k| {
                self.coeffs[k]
                    .scale(&BigRational::from_integer(BigInt::from(k)))
                    .expect("integer scaling stays integral")
            })
            .collect();
        Series::from_coeffs(&self.ring, n, coeffs)
    }

    /// Formal antiderivative with zero constant term. Needs rational scalars.
    pub fn integral(&self) -> Result<Series> {
        if self.ring.scalars() != Scalars::Rational {
            return Err(Error::Unsupported("integration requires rational coefficients".into()));
        }
        let n = self.truncation();
        let mut coeffs = vec![RingElem::zero(&self.ring)];
        for k in 0..n as usize {
            coeffs.push(self.coeffs[k].scale(&BigRational::new(1.into(), BigInt::from(k + 1)))?);
        }
        Ok(Series::from_coeffs(&self.ring, n, coeffs))
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn reciprocal(&self) -> Result<Series> {
        let c0_inv = self.coeffs[0].inverse().ok_or(Error::Singular)?;
        let n = self.truncation() as usize;
        let mut out = vec![c0_inv.clone()];
        for k in 1..=n {
            let mut acc = RingElem::zero(&self.ring);
            for j in 1..=k {
                acc = &acc + &(&self.coeffs[j] * &out[k - j]);
            }
            out.push(-&(&acc * &c0_inv));
        }
        Ok(Series::from_coeffs(&self.ring, n as u32, out))
    }

    /// Compositional inverse `g` with `self(g(x)) = x`. Requires a zero
    /// constant term and a unit linear coefficient.
    pub fn reversion(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NotNilpotent(format!(
                "series has constant term {}",
                self.coeffs[0]
            )));
        }
        let n = self.truncation();
        let lin_inv = self.coeff(1).inverse().ok_or(Error::Singular)?;
        let x = Series::variable(&self.ring, n);
        let mut higher = self.clone();
        higher.coeffs[1] = RingElem::zero(&self.ring);
        // g = lin^{-1} (x - higher(g)); each pass fixes one more degree.
        let mut g = x.scaled(&lin_inv);
        for _ in 0..n {
            g = x.sub(&higher.eval_at(&g)).scaled(&lin_inv);
        }
        Ok(g)
    }

    pub fn change_ring(&self, target: &Arc<CoeffRing>) -> Result<Series> {
        Ok(Series {
            ring: target.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.change_ring(target))
                .collect::<Result<_>>()?,
        })
    }
}

impl TruncatedAlgebra for Series {
    fn coeff_ring(&self) -> &Arc<CoeffRing> {
        &self.ring
    }

    fn zero_like(&self) -> Self {
        Series::zero(&self.ring, self.truncation())
    }

    fn one_like(&self) -> Self {
        let mut s = self.zero_like();
        s.coeffs[0] = RingElem::one(&self.ring);
        s
    }

    fn plus(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation()) as usize;
        Series {
            ring: self.ring.clone(),
            coeffs: (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(),
        }
    }

    fn times(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation()) as usize;
        let mut out = vec![RingElem::zero(&self.ring); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Series {
            ring: self.ring.clone(),
            coeffs: out,
        }
    }

    fn scaled(&self, c: &RingElem) -> Self {
        Series {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    fn is_zero_elem(&self) -> bool {
        self.coeffs.iter().all(RingElem::is_zero)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0 + O(x^{})", self.truncation() + 1)
        } else {
            write!(f, "{} + O(x^{})", terms.join(" + "), self.truncation() + 1)
        }
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series({self})")
    }
}

/// Multivariate power series truncated above total degree `N`.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiSeries {
    ring: Arc<CoeffRing>,
    nvars: usize,
    truncation: u32,
    terms: BTreeMap<Vec<u32>, RingElem>,
}

impl MultiSeries {
    pub fn zero(ring: &Arc<CoeffRing>, nvars: usize, truncation: u32) -> MultiSeries {
        MultiSeries {
            ring: ring.clone(),
            nvars,
            truncation,
            terms: BTreeMap::new(),
        }
    }

    pub fn variable(ring: &Arc<CoeffRing>, nvars: usize, truncation: u32, index: usize) -> MultiSeries {
        let mut s = MultiSeries::zero(ring, nvars, truncation);
        let mut e = vec![0; nvars];
        e[index] = 1;
        s.insert(e, RingElem::one(ring));
        s
    }

    /// Embed a univariate series in variable `index`.
    pub fn from_series(series: &Series, nvars: usize, index: usize) -> MultiSeries {
        let mut s = MultiSeries::zero(series.ring(), nvars, series.truncation());
        for (k, c) in series.coeffs().iter().enumerate() {
            let mut e = vec![0; nvars];
            e[index] = k as u32;
            s.insert(e, c.clone());
        }
        s
    }

    fn insert(&mut self, exps: Vec<u32>, c: RingElem) {
        if c.is_zero() || exps.iter().sum::<u32>() > self.truncation {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> RingElem {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| RingElem::zero(&self.ring))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &RingElem)> {
        self.terms.iter()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn sub(&self, other: &MultiSeries) -> MultiSeries {
        self.plus(&other.scaled(&RingElem::from_int(&self.ring, -1)))
    }
}

impl TruncatedAlgebra for MultiSeries {
    fn coeff_ring(&self) -> &Arc<CoeffRing> {
        &self.ring
    }

    fn zero_like(&self) -> Self {
        MultiSeries::zero(&self.ring, self.nvars, self.truncation)
    }

    fn one_like(&self) -> Self {
        let mut s = self.zero_like();
        s.insert(vec![0; self.nvars], RingElem::one(&self.ring));
        s
    }

    fn plus(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (e, c) in &other.terms {
            s.insert(e.clone(), c.clone());
        }
        s
    }

    fn times(&self, other: &Self) -> Self {
        let mut s = self.zero_like();
        for (ea, ca) in &self.terms {
            let da: u32 = ea.iter().sum();
            for (eb, cb) in &other.terms {
                if da + eb.iter().sum::<u32>() > self.truncation {
                    continue;
                }
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                s.insert(e, ca * cb);
            }
        }
        s
    }

    fn scaled(&self, c: &RingElem) -> Self {
        let mut s = self.zero_like();
        for (e, a) in &self.terms {
            s.insert(e.clone(), a * c);
        }
        s
    }

    fn is_zero_elem(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.terms.iter().map(|(e, c)| format!("({c})*x^{e:?}")).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiSeries[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RingKind;

    fn q() -> Arc<CoeffRing> {
        CoeffRing::new(RingKind::UniversalRational, 6).unwrap()
    }

    fn ints(ring: &Arc<CoeffRing>, v: &[i64]) -> Vec<RingElem> {
        v.iter().map(|&c| RingElem::from_int(ring, c)).collect()
    }

    #[test]
    fn reciprocal_of_one_minus_x() {
        let r = q();
        let s = Series::from_coeffs(&r, 5, ints(&r, &[1, -1]));
        let inv = s.reciprocal().unwrap();
        assert_eq!(inv, Series::from_coeffs(&r, 5, ints(&r, &[1, 1, 1, 1, 1, 1])));
    }

    #[test]
    fn reversion_inverts_composition() {
        let r = q();
        let s = Series::from_coeffs(&r, 6, ints(&r, &[0, 1, 3, -2, 5]));
        let g = s.reversion().unwrap();
        let x = Series::variable(&r, 6);
        assert_eq!(s.compose(&g).unwrap(), x);
        assert_eq!(g.compose(&s).unwrap(), x);
    }

    #[test]
    fn integral_then_derivative() {
        let r = q();
        let s = Series::from_coeffs(&r, 4, ints(&r, &[1, 2, 3, 4]));
        let back = s.integral().unwrap().derivative();
        assert_eq!(back, Series::from_coeffs(&r, 4, ints(&r, &[1, 2, 3, 4])));
    }

    #[test]
    fn multiseries_truncates_total_degree() {
        let r = q();
        let x = MultiSeries::variable(&r, 2, 3, 0);
        let y = MultiSeries::variable(&r, 2, 3, 1);
        let s = x.plus(&y);
        let cube = s.times(&s).times(&s);
        assert_eq!(cube.coeff(&[2, 1]), RingElem::from_int(&r, 3));
        assert!(cube.times(&x).is_zero_elem());
    }
}
