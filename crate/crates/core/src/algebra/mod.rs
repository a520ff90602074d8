//! Exact arithmetic in graded commutative coefficient rings.
//!
//! A [`CoeffRing`] is a polynomial ring over the integers or the rationals in
//! finitely many graded symbols. Elements ([`RingElem`]) are sparse maps from
//! exponent tuples to nonzero rational coefficients, kept in canonical form so
//! that structural equality is mathematical equality.

mod matrix;
mod parse;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use matrix::RingMatrix;

/// The three built-in coefficient rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingKind {
    /// Plain integers; carries the additive law.
    Additive,
    /// `Z[beta]` with `deg(beta) = -1`; carries the multiplicative law.
    Multiplicative,
    /// `Q[b_1, ..., b_{N-1}]` with `deg(b_m) = -m`, truncated below degree `-N`.
    UniversalRational,
}

impl RingKind {
    pub const ALL: [RingKind; 3] = [
        RingKind::Additive,
        RingKind::Multiplicative,
        RingKind::UniversalRational,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RingKind::Additive => "additive",
            RingKind::Multiplicative => "multiplicative",
            RingKind::UniversalRational => "universal",
        }
    }

    pub fn from_name(name: &str) -> Option<RingKind> {
        match name {
            "additive" => Some(RingKind::Additive),
            "multiplicative" => Some(RingKind::Multiplicative),
            "universal" => Some(RingKind::UniversalRational),
            _ => None,
        }
    }
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Scalar arithmetic allowed in a ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scalars {
    Integer,
    Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub degree: i64,
}

/// Descriptor of a graded coefficient ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoeffRing {
    kind: RingKind,
    truncation: u32,
    scalars: Scalars,
    symbols: Vec<Symbol>,
}

impl CoeffRing {
    /// The default ring of a kind: integral for the additive and
    /// multiplicative kinds, rational for the universal one.
    pub fn new(kind: RingKind, truncation: u32) -> Result<Arc<CoeffRing>> {
        let scalars = match kind {
            RingKind::UniversalRational => Scalars::Rational,
            _ => Scalars::Integer,
        };
        CoeffRing::with_scalars(kind, truncation, scalars)
    }

    pub fn with_scalars(kind: RingKind, truncation: u32, scalars: Scalars) -> Result<Arc<CoeffRing>> {
        if truncation == 0 {
            return Err(Error::InvalidConfig("truncation must be at least 1".into()));
        }
        let symbols = match kind {
            RingKind::Additive => Vec::new(),
            RingKind::Multiplicative => vec![Symbol {
                name: "beta".into(),
                degree: -1,
            }],
            RingKind::UniversalRational => (1..truncation)
                .map(|m| Symbol {
                    name: format!("b{m}"),
                    degree: -(m as i64),
                })
                .collect(),
        };
        Ok(Arc::new(CoeffRing {
            kind,
            truncation,
            scalars,
            symbols,
        }))
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn scalars(&self) -> Scalars {
        self.scalars
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    /// Whether products drop monomials of degree below `-N`.
    pub fn truncates(&self) -> bool {
        self.kind == RingKind::UniversalRational
    }

    /// The same ring with rational scalars.
    pub fn rational_extension(&self) -> Arc<CoeffRing> {
        Arc::new(CoeffRing {
            scalars: Scalars::Rational,
            ..self.clone()
        })
    }

    pub fn monomial_degree(&self, exps: &[u32]) -> i64 {
        exps.iter().zip(&self.symbols).map(|(&e, s)| e as i64 * s.degree).sum()
    }

    fn keeps(&self, exps: &[u32]) -> bool {
        !self.truncates() || self.monomial_degree(exps) >= -(self.truncation as i64)
    }

    fn describe(&self) -> String {
        format!("{}[N={},{:?}]", self.kind, self.truncation, self.scalars)
    }
}

pub(crate) fn same_ring(a: &Arc<CoeffRing>, b: &Arc<CoeffRing>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub(crate) fn check_ring(a: &Arc<CoeffRing>, b: &Arc<CoeffRing>) -> Result<()> {
    if same_ring(a, b) {
        Ok(())
    } else {
        Err(Error::RingMismatch(a.describe(), b.describe()))
    }
}

/// Exponent tuple over the symbol table of a ring.
pub type Monomial = Vec<u32>;

/// An element of a [`CoeffRing`] in canonical form.
#[derive(Clone)]
pub struct RingElem {
    ring: Arc<CoeffRing>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl RingElem {
    pub fn zero(ring: &Arc<CoeffRing>) -> RingElem {
        RingElem {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<CoeffRing>) -> RingElem {
        RingElem::from_int(ring, 1)
    }

    pub fn from_int(ring: &Arc<CoeffRing>, value: i64) -> RingElem {
        let mut terms = BTreeMap::new();
        if value != 0 {
            terms.insert(vec![0; ring.symbols.len()], BigRational::from_integer(value.into()));
        }
        RingElem {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_rational(ring: &Arc<CoeffRing>, value: BigRational) -> Result<RingElem> {
        RingElem::from_terms(ring, [(vec![0; ring.symbols.len()], value)])
    }

    /// The `index`-th symbol of the ring.
    pub fn symbol(ring: &Arc<CoeffRing>, index: usize) -> Result<RingElem> {
        if index >= ring.symbols.len() {
            return Err(Error::IndexOutOfRange {
                index,
                bound: ring.symbols.len(),
            });
        }
        let mut exps = vec![0; ring.symbols.len()];
        exps[index] = 1;
        RingElem::from_terms(ring, [(exps, BigRational::one())])
    }

    pub fn from_terms(
        ring: &Arc<CoeffRing>,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Result<RingElem> {
        let mut map: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != ring.symbols.len() {
                return Err(Error::InvalidConfig(format!(
                    "monomial of length {} in a ring with {} symbols",
                    exps.len(),
                    ring.symbols.len()
                )));
            }
            if ring.scalars == Scalars::Integer && !c.is_integer() {
                return Err(Error::NotIntegral(c.to_string()));
            }
            if !ring.keeps(&exps) {
                continue;
            }
            *map.entry(exps).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(RingElem {
            ring: ring.clone(),
            terms: map,
        })
    }

    /// Parse the text form, e.g. `1 - 2*beta^2` or `1/2*b1^2 + b2`.
    pub fn parse(ring: &Arc<CoeffRing>, text: &str) -> Result<RingElem> {
        parse::parse_ring_elem(ring, text)
    }

    pub fn ring(&self) -> &Arc<CoeffRing> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_scalar().is_some_and(|c| c.is_one())
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&vec![0; self.ring.symbols.len()])
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// `Some(c)` if the element is the scalar `c`.
    pub fn as_scalar(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Degrees of the monomials present.
    pub fn degrees(&self) -> BTreeSet<i64> {
        self.terms.keys().map(|m| self.ring.monomial_degree(m)).collect()
    }

    pub fn checked_add(&self, other: &RingElem) -> Result<RingElem> {
        check_ring(&self.ring, &other.ring)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(v) => {
                    *v += c;
                    if v.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Ok(RingElem {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn checked_sub(&self, other: &RingElem) -> Result<RingElem> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &RingElem) -> Result<RingElem> {
        check_ring(&self.ring, &other.ring)?;
        if self.is_zero() || other.is_zero() {
            return Ok(RingElem::zero(&self.ring));
        }
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                if !self.ring.keeps(&m) {
                    continue;
                }
                let c = ca * cb;
                match terms.get_mut(&m) {
                    Some(v) => *v += c,
                    None => {
                        terms.insert(m, c);
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(RingElem {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn pow(&self, exp: u32) -> RingElem {
        let mut acc = RingElem::one(&self.ring);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Multiply by a rational scalar. Fails in an integral ring if the
    /// result is not integral.
    pub fn scale(&self, s: &BigRational) -> Result<RingElem> {
        RingElem::from_terms(&self.ring, self.terms.iter().map(|(m, c)| (m.clone(), c * s)))
    }

    /// Multiplicative inverse, when the element is a unit.
    ///
    /// Units are nonzero scalars (restricted to `+-1` over the integers) and,
    /// in the truncated universal ring, anything with an invertible constant
    /// term.
    pub fn inverse(&self) -> Option<RingElem> {
        let c = self.constant_term();
        if c.is_zero() {
            return None;
        }
        if self.ring.scalars == Scalars::Integer && !c.abs().is_one() {
            return None;
        }
        let c_inv = c.recip();
        let unit = RingElem::from_rational(&self.ring, c_inv.clone()).ok()?;
        if self.as_scalar().is_some() {
            return Some(unit);
        }
        if !self.ring.truncates() {
            return None;
        }
        // self = c (1 + n) with n nilpotent: every product lowers the degree.
        let n = self.scale(&c_inv).ok()? - RingElem::one(&self.ring);
        let mut acc = RingElem::one(&self.ring);
        let mut power = RingElem::one(&self.ring);
        loop {
            power = &power * &-&n;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Some(&acc * &unit)
    }

    /// The same element viewed in `target`, which must have the same kind and
    /// symbol table. Moving to an integral ring requires integral coefficients.
    pub fn change_ring(&self, target: &Arc<CoeffRing>) -> Result<RingElem> {
        if target.kind != self.ring.kind || target.symbols != self.ring.symbols {
            return Err(Error::RingMismatch(self.ring.describe(), target.describe()));
        }
        RingElem::from_terms(target, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    /// Terms in graded-lex order: by total exponent, then earlier symbols first.
    fn sorted_terms(&self) -> Vec<(&Monomial, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| graded_lex(a.0, b.0));
        v
    }

    fn render_monomial(&self, m: &Monomial) -> String {
        m.iter()
            .zip(&self.ring.symbols)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, s)| {
                if e == 1 {
                    s.name.clone()
                } else {
                    format!("{}^{}", s.name, e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Ascending total degree; within a degree, larger exponents on earlier
/// positions come first.
pub(crate) fn graded_lex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}

fn render_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let mono = self.render_monomial(m);
            let negative = c.is_negative();
            let abs = c.abs();
            let body = if mono.is_empty() {
                render_rational(&abs)
            } else if abs.is_one() {
                mono
            } else {
                format!("{}*{}", render_rational(&abs), mono)
            };
            match (i, negative) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElem({self})")
    }
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for RingElem {}

impl<'a> Add<&'a RingElem> for &'a RingElem {
    type Output = RingElem;
    fn add(self, rhs: &'a RingElem) -> RingElem {
        self.checked_add(rhs).expect("ring mismatch in addition")
    }
}

impl<'a> Sub<&'a RingElem> for &'a RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &'a RingElem) -> RingElem {
        self.checked_sub(rhs).expect("ring mismatch in subtraction")
    }
}

impl<'a> Mul<&'a RingElem> for &'a RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &'a RingElem) -> RingElem {
        self.checked_mul(rhs).expect("ring mismatch in multiplication")
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for RingElem {
    type Output = RingElem;
    fn add(self, rhs: RingElem) -> RingElem {
        &self + &rhs
    }
}

impl Sub for RingElem {
    type Output = RingElem;
    fn sub(self, rhs: RingElem) -> RingElem {
        &self - &rhs
    }
}

impl Mul for RingElem {
    type Output = RingElem;
    fn mul(self, rhs: RingElem) -> RingElem {
        &self * &rhs
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        -&self
    }
}

/// Small-integer view of a rational, for tests and rendering decisions.
pub fn rational_to_i64(c: &BigRational) -> Option<i64> {
    if c.is_integer() {
        c.numer().to_i64()
    } else {
        None
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
