//! Products of projective spaces and their cohomology rings
//! `A*(pt)[z_1, ..., z_k] / (z_i^{n_i + 1})`.

mod morphism;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{check_ring, graded_lex, same_ring, CoeffRing, RingElem};
use crate::error::{Error, Result};
use crate::fgl::{Fgl, TruncatedAlgebra};

pub use morphism::{Morphism, Shape};

/// `P^{n_1} x ... x P^{n_k}`; the empty product is the point.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Space {
    factors: Vec<u32>,
}

impl Space {
    pub fn new(factors: Vec<u32>) -> Space {
        Space { factors }
    }

    pub fn point() -> Space {
        Space::new(Vec::new())
    }

    pub fn projective(n: u32) -> Space {
        Space::new(vec![n])
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, t: usize) -> u32 {
        self.factors[t]
    }

    /// Total dimension, which is also the nilpotency bound of the ring.
    pub fn dim(&self) -> u32 {
        self.factors.iter().sum()
    }

    pub fn is_point(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn product(&self, other: &Space) -> Space {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Space::new(factors)
    }

    /// Split off the first `k` factors.
    pub fn split_at(&self, k: usize) -> (Space, Space) {
        (
            Space::new(self.factors[..k].to_vec()),
            Space::new(self.factors[k..].to_vec()),
        )
    }

    /// Monomial basis in graded-lex order; `prod (n_i + 1)` tuples.
    pub fn basis(&self) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = vec![Vec::new()];
        for &n in &self.factors {
            out = out
                .into_iter()
                .flat_map(|e| {
                    (0..=n).map(move |i| {
                        let mut f = e.clone();
                        f.push(i);
                        f
                    })
                })
                .collect();
        }
        out.sort_by(|a, b| graded_lex(a, b));
        out
    }

    pub fn contains_monomial(&self, e: &[u32]) -> bool {
        e.len() == self.factors.len() && e.iter().zip(&self.factors).all(|(a, n)| a <= n)
    }

    /// Parse `P2xP1`, `P3` or `pt`.
    pub fn parse(spec: &str) -> Result<Space> {
        let trimmed = spec.trim();
        if trimmed == "pt" {
            return Ok(Space::point());
        }
        let mut factors = Vec::new();
        let mut offset = spec.len() - spec.trim_start().len();
        for part in trimmed.split('x') {
            let digits = part
                .strip_prefix('P')
                .filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
                .ok_or_else(|| Error::parse(part, offset, "expected a factor of the form P<n>"))?;
            let n = digits
                .parse()
                .map_err(|_| Error::parse(part, offset, "dimension too large"))?;
            factors.push(n);
            offset += part.len() + 1;
        }
        Ok(Space::new(factors))
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("pt");
        }
        let parts: Vec<String> = self.factors.iter().map(|n| format!("P{n}")).collect();
        f.write_str(&parts.join("x"))
    }
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Space({self})")
    }
}

pub(crate) fn check_space(expected: &Space, found: &Space) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::SpaceMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        })
    }
}

/// A cohomology class: map from in-bounds exponent tuples to nonzero
/// coefficients.
#[derive(Clone)]
pub struct CohClass {
    space: Space,
    ring: Arc<CoeffRing>,
    terms: BTreeMap<Vec<u32>, RingElem>,
}

impl CohClass {
    pub fn zero(space: &Space, ring: &Arc<CoeffRing>) -> CohClass {
        CohClass {
            space: space.clone(),
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(space: &Space, ring: &Arc<CoeffRing>) -> CohClass {
        CohClass::constant(space, RingElem::one(ring))
    }

    pub fn constant(space: &Space, c: RingElem) -> CohClass {
        let ring = c.ring().clone();
        let mut out = CohClass::zero(space, &ring);
        out.insert(vec![0; space.num_factors()], c);
        out
    }

    /// `c * z^e`; zero if `e` exceeds the nilpotency bounds.
    pub fn monomial(space: &Space, e: Vec<u32>, c: RingElem) -> Result<CohClass> {
        if e.len() != space.num_factors() {
            return Err(Error::InvalidConfig(format!(
                "exponent tuple of length {} on {space}",
                e.len()
            )));
        }
        let ring = c.ring().clone();
        let mut out = CohClass::zero(space, &ring);
        out.insert(e, c);
        Ok(out)
    }

    /// The generator `z_t = e(O(1))` pulled back from factor `t`.
    pub fn zeta(space: &Space, ring: &Arc<CoeffRing>, t: usize) -> Result<CohClass> {
        if t >= space.num_factors() {
            return Err(Error::IndexOutOfRange {
                index: t,
                bound: space.num_factors(),
            });
        }
        let mut e = vec![0; space.num_factors()];
        e[t] = 1;
        CohClass::monomial(space, e, RingElem::one(ring))
    }

    pub fn from_terms(
        space: &Space,
        ring: &Arc<CoeffRing>,
        terms: impl IntoIterator<Item = (Vec<u32>, RingElem)>,
    ) -> Result<CohClass> {
        let mut out = CohClass::zero(space, ring);
        for (e, c) in terms {
            if e.len() != space.num_factors() {
                return Err(Error::InvalidConfig(format!(
                    "exponent tuple of length {} on {space}",
                    e.len()
                )));
            }
            check_ring(ring, c.ring())?;
            out.insert(e, c);
        }
        Ok(out)
    }

    fn insert(&mut self, e: Vec<u32>, c: RingElem) {
        if c.is_zero() || !self.space.contains_monomial(&e) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn ring(&self) -> &Arc<CoeffRing> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &RingElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> RingElem {
        self.terms.get(e).cloned().unwrap_or_else(|| RingElem::zero(&self.ring))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_compatible(&self, other: &CohClass) -> Result<()> {
        check_space(&self.space, &other.space)?;
        check_ring(&self.ring, &other.ring)
    }

    pub fn add(&self, other: &CohClass) -> Result<CohClass> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &CohClass) -> Result<CohClass> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CohClass {
        CohClass {
            space: self.space.clone(),
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &RingElem) -> Result<CohClass> {
        check_ring(&self.ring, s.ring())?;
        let mut out = CohClass::zero(&self.space, &self.ring);
        for (e, c) in &self.terms {
            out.insert(e.clone(), c * s);
        }
        Ok(out)
    }

    /// Cup product: truncated polynomial multiplication.
    pub fn cup(&self, other: &CohClass) -> Result<CohClass> {
        self.check_compatible(other)?;
        let mut out = CohClass::zero(&self.space, &self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if self.space.contains_monomial(&e) {
                    out.insert(e, ca * cb);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> CohClass {
        let mut acc = CohClass::one(&self.space, &self.ring);
        for _ in 0..k {
            acc = acc.cup(self).expect("same space");
        }
        acc
    }

    /// External product `self x other` on `X x Y`.
    pub fn cross(&self, other: &CohClass) -> Result<CohClass> {
        check_ring(&self.ring, &other.ring)?;
        let space = self.space.product(&other.space);
        let mut out = CohClass::zero(&space, &self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = ea.clone();
                e.extend_from_slice(eb);
                out.insert(e, ca * cb);
            }
        }
        Ok(out)
    }

    /// Whether every term has positive z-degree.
    pub fn is_nilpotent(&self) -> bool {
        self.terms.keys().all(|e| e.iter().any(|&x| x > 0))
    }

    fn render_monomial(e: &[u32]) -> String {
        e.iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .map(|(t, &x)| {
                if x == 1 {
                    format!("z{}", t + 1)
                } else {
                    format!("z{}^{}", t + 1, x)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Terms in graded-lex order of their exponent tuples.
    pub fn sorted_terms(&self) -> Vec<(&Vec<u32>, &RingElem)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| graded_lex(a.0, b.0));
        v
    }
}

impl PartialEq for CohClass {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for CohClass {}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let mono = CohClass::render_monomial(e);
            let coeff = c.to_string();
            let term = if mono.is_empty() {
                if c.num_terms() > 1 && i > 0 {
                    format!("({coeff})")
                } else {
                    coeff
                }
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{mono}")
            } else if c.num_terms() == 1 {
                format!("{coeff}*{mono}")
            } else {
                format!("({coeff})*{mono}")
            };
            if i == 0 {
                f.write_str(&term)?;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {term}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CohClass[{}]({self})", self.space)
    }
}

impl TruncatedAlgebra for CohClass {
    fn coeff_ring(&self) -> &Arc<CoeffRing> {
        &self.ring
    }

    fn zero_like(&self) -> Self {
        CohClass::zero(&self.space, &self.ring)
    }

    fn one_like(&self) -> Self {
        CohClass::one(&self.space, &self.ring)
    }

    fn plus(&self, other: &Self) -> Self {
        self.add(other).expect("same space and ring")
    }

    fn times(&self, other: &Self) -> Self {
        self.cup(other).expect("same space and ring")
    }

    fn scaled(&self, c: &RingElem) -> Self {
        self.scale(c).expect("same ring")
    }

    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

fn check_nilpotency_bound(space: &Space, law: &Fgl) -> Result<()> {
    if space.dim() > law.truncation() {
        return Err(Error::TruncationUnsound {
            needed: space.dim(),
            available: law.truncation(),
        });
    }
    Ok(())
}

/// `F(p, q)` on a space whose nilpotency bound is within the truncation.
pub fn fgl_eval(law: &Fgl, p: &CohClass, q: &CohClass) -> Result<CohClass> {
    p.check_compatible(q)?;
    check_ring(law.ring(), p.ring())?;
    for arg in [p, q] {
        if !arg.is_nilpotent() {
            return Err(Error::NotNilpotent(arg.to_string()));
        }
    }
    check_nilpotency_bound(p.space(), law)?;
    Ok(law.eval(p, q))
}

/// Euler class of `O(d_1, ..., d_k)`: the formal sum of `[d_t](z_t)`.
pub fn euler(space: &Space, degrees: &[i64], law: &Fgl) -> Result<CohClass> {
    if degrees.len() != space.num_factors() {
        return Err(Error::InvalidConfig(format!(
            "{} degrees given for {space}",
            degrees.len()
        )));
    }
    check_nilpotency_bound(space, law)?;
    let ring = law.ring();
    let mut acc = CohClass::zero(space, ring);
    for (t, &d) in degrees.iter().enumerate() {
        let z = CohClass::zeta(space, ring, t)?;
        let e = law.m_series(d).eval_at(&z);
        acc = law.eval(&acc, &e);
    }
    Ok(acc)
}

/// External product of cohomology classes.
pub fn cross_coh(alpha: &CohClass, beta: &CohClass) -> Result<CohClass> {
    alpha.cross(beta)
}
