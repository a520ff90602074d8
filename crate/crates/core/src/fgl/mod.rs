//! Formal group laws over the built-in coefficient rings.
//!
//! A law is stored through its nonlinear coefficients `a_ij` (`i, j >= 1`,
//! `i + j <= N`), so `F(x, 0) = x` holds by construction. Everything that
//! involves division (the logarithm, `[P^n]`) is computed over the rational
//! extension of the ring and moved back when the result is integral.

mod series;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::{CoeffRing, RingElem, RingKind, Scalars};
use crate::error::{Error, Result};

pub use series::{MultiSeries, Series, TruncatedAlgebra};

/// A truncated formal group law `F(x, y) = x + y + sum a_ij x^i y^j`.
#[derive(Clone, PartialEq, Eq)]
pub struct Fgl {
    ring: Arc<CoeffRing>,
    coeffs: BTreeMap<(u32, u32), RingElem>,
}

impl Fgl {
    /// The built-in law of the ring's kind, truncated at the ring's `N`.
    pub fn build(ring: &Arc<CoeffRing>) -> Result<Fgl> {
        let n = ring.truncation();
        let mut coeffs = BTreeMap::new();
        match ring.kind() {
            RingKind::Additive => {}
            RingKind::Multiplicative => {
                if n >= 2 {
                    coeffs.insert((1, 1), -RingElem::symbol(ring, 0)?);
                }
            }
            RingKind::UniversalRational => {
                if ring.scalars() != Scalars::Rational {
                    return Err(Error::Unsupported(
                        "the universal law needs rational coefficient arithmetic".into(),
                    ));
                }
                let log = universal_log(ring);
                let exp = log.reversion()?;
                let sum = MultiSeries::from_series(&log, 2, 0).plus(&MultiSeries::from_series(&log, 2, 1));
                let law = exp.eval_at(&sum);
                for (e, c) in law.terms() {
                    match (e[0], e[1]) {
                        (1, 0) | (0, 1) => debug_assert!(c.is_one()),
                        (i, j) if i >= 1 && j >= 1 => {
                            coeffs.insert((i, j), c.clone());
                        }
                        _ => unreachable!("pure power x^{}y^{} in a group law", e[0], e[1]),
                    }
                }
            }
        }
        Ok(Fgl {
            ring: ring.clone(),
            coeffs,
        })
    }

    /// A law with arbitrary coefficients; used to probe what the checks detect.
    pub fn from_coefficients(
        ring: &Arc<CoeffRing>,
        coeffs: impl IntoIterator<Item = ((u32, u32), RingElem)>,
    ) -> Result<Fgl> {
        let n = ring.truncation();
        let mut map = BTreeMap::new();
        for ((i, j), c) in coeffs {
            if i == 0 || j == 0 || i + j > n {
                return Err(Error::IndexOutOfRange {
                    index: (i + j) as usize,
                    bound: n as usize,
                });
            }
            if !c.is_zero() {
                map.insert((i, j), c);
            }
        }
        Ok(Fgl {
            ring: ring.clone(),
            coeffs: map,
        })
    }

    pub fn ring(&self) -> &Arc<CoeffRing> {
        &self.ring
    }

    pub fn kind(&self) -> RingKind {
        self.ring.kind()
    }

    pub fn truncation(&self) -> u32 {
        self.ring.truncation()
    }

    /// `a_ij`, zero when absent.
    pub fn coefficient(&self, i: u32, j: u32) -> RingElem {
        self.coeffs
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| RingElem::zero(&self.ring))
    }

    /// Nonzero nonlinear coefficients.
    pub fn coefficients(&self) -> impl Iterator<Item = (&(u32, u32), &RingElem)> {
        self.coeffs.iter()
    }

    /// The same law with `a_ij` negated.
    pub fn with_flipped_coefficient(&self, i: u32, j: u32) -> Fgl {
        let mut out = self.clone();
        if let Some(c) = out.coeffs.get_mut(&(i, j)) {
            *c = -&*c;
        }
        out
    }

    /// `F(p, q)` in any algebra where `p` and `q` are nilpotent of order at
    /// most `N`. No nilpotency check happens here.
    pub fn eval<A: TruncatedAlgebra>(&self, p: &A, q: &A) -> A {
        p.plus(q).plus(&self.nonlinear(p, q))
    }

    /// `sum a_ij p^i q^j`.
    fn nonlinear<A: TruncatedAlgebra>(&self, p: &A, q: &A) -> A {
        let n = self.truncation();
        let pp = p.powers(n);
        let qp = q.powers(n);
        let mut acc = p.zero_like();
        for (&(i, j), c) in &self.coeffs {
            if let (Some(pi), Some(qj)) = (pp.get(i as usize), qp.get(j as usize)) {
                if pi.is_zero_elem() || qj.is_zero_elem() {
                    continue;
                }
                acc = acc.plus(&pi.times(qj).scaled(c));
            }
        }
        acc
    }

    /// `F` as a bivariate series.
    pub fn as_series(&self) -> MultiSeries {
        let n = self.truncation();
        let x = MultiSeries::variable(&self.ring, 2, n, 0);
        let y = MultiSeries::variable(&self.ring, 2, n, 1);
        self.eval(&x, &y)
    }

    /// The formal inverse `i(x)` with `F(x, i(x)) = 0`.
    pub fn inverse(&self) -> Series {
        let n = self.truncation();
        let x = Series::variable(&self.ring, n);
        let minus_x = x.neg();
        let mut inv = minus_x.clone();
        // inv = -x - sum a_ij x^i inv^j; each pass fixes one more degree.
        for _ in 0..n {
            inv = minus_x.sub(&self.nonlinear(&x, &inv));
        }
        inv
    }

    /// The `m`-series `[m](x)`.
    pub fn m_series(&self, m: i64) -> Series {
        let n = self.truncation();
        let x = Series::variable(&self.ring, n);
        let mut acc = Series::zero(&self.ring, n);
        for _ in 0..m.unsigned_abs() {
            acc = self.eval(&x, &acc);
        }
        if m < 0 {
            self.inverse().eval_at(&acc)
        } else {
            acc
        }
    }

    /// The logarithm over the rational extension of the ring, from the
    /// invariant differential: `log'(x) = 1 / (dF/dy)(x, 0)`.
    pub fn log(&self) -> Result<Series> {
        let n = self.truncation();
        let q = self.ring.rational_extension();
        let mut omega = vec![RingElem::one(&q)];
        for i in 1..n {
            omega.push(self.coefficient(i, 1).change_ring(&q)?);
        }
        let omega = Series::from_coeffs(&q, n, omega);
        omega.reciprocal()?.integral()
    }

    /// Compositional inverse of [`Fgl::log`].
    pub fn exp(&self) -> Result<Series> {
        self.log()?.reversion()
    }

    /// `g_n = [P^n]`, the pushforward of 1 along `P^n -> pt`:
    /// `(n + 1)` times the coefficient of `x^{n+1}` in the logarithm.
    pub fn pn_class(&self, n: u32) -> Result<RingElem> {
        let needed = n + 1;
        if needed > self.truncation() {
            return Err(Error::TruncationUnsound {
                needed,
                available: self.truncation(),
            });
        }
        let log = self.log()?;
        let g = log
            .coeff(needed as usize)
            .scale(&BigRational::from_integer(BigInt::from(needed)))?;
        g.change_ring(&self.ring).map_err(|_| Error::NotIntegral(g.to_string()))
    }

    /// `g_0, ..., g_{N-1}` in one pass.
    pub fn pn_classes(&self) -> Result<Vec<RingElem>> {
        let log = self.log()?;
        (0..self.truncation())
            .map(|n| {
                let g = log
                    .coeff(n as usize + 1)
                    .scale(&BigRational::from_integer(BigInt::from(n + 1)))?;
                g.change_ring(&self.ring).map_err(|_| Error::NotIntegral(g.to_string()))
            })
            .collect()
    }
}

impl std::fmt::Debug for Fgl {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Fgl({}, N={}: x + y", self.kind(), self.truncation())?;
        for ((i, j), c) in &self.coeffs {
            write!(f, " + ({c})x^{i}y^{j}")?;
        }
        write!(f, ")")
    }
}

/// `x + sum_{m=1}^{N-1} b_m x^{m+1}`.
fn universal_log(ring: &Arc<CoeffRing>) -> Series {
    let n = ring.truncation();
    let mut coeffs = vec![RingElem::zero(ring), RingElem::one(ring)];
    for m in 1..n as usize {
        coeffs.push(RingElem::symbol(ring, m - 1).expect("b_m exists for m < N"));
    }
    Series::from_coeffs(ring, n, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;

    fn law(kind: RingKind, n: u32) -> Fgl {
        Fgl::build(&CoeffRing::new(kind, n).unwrap()).unwrap()
    }

    fn elem(f: &Fgl, s: &str) -> RingElem {
        RingElem::parse(f.ring(), s).unwrap()
    }

    #[test]
    fn built_in_coefficients() {
        assert_eq!(law(RingKind::Additive, 5).coefficients().count(), 0);
        let m = law(RingKind::Multiplicative, 5);
        assert_eq!(m.coefficient(1, 1), elem(&m, "-beta"));
        assert_eq!(m.coefficients().count(), 1);
        let u = law(RingKind::UniversalRational, 5);
        assert_eq!(u.coefficient(1, 1), elem(&u, "-2*b1"));
    }

    /// Hand expansion of exp(log x + log y) through total degree 3 with
    /// log x = x + b1 x^2 + b2 x^3: exp(z) = z - b1 z^2 + (2 b1^2 - b2) z^3, so the x^2 y
    /// coefficient is -2 b1^2 + 3 (2 b1^2 - b2).
    #[test]
    fn universal_degree_three_matches_hand_expansion() {
        let u = law(RingKind::UniversalRational, 5);
        assert_eq!(u.coefficient(2, 1), elem(&u, "4*b1^2 - 3*b2"));
        assert_eq!(u.coefficient(1, 2), elem(&u, "4*b1^2 - 3*b2"));
    }

    #[test]
    fn universal_needs_rational_scalars() {
        let ring = CoeffRing::with_scalars(RingKind::UniversalRational, 4, Scalars::Integer).unwrap();
        assert!(matches!(Fgl::build(&ring), Err(Error::Unsupported(_))));
    }

    #[test]
    fn inverse_series() {
        let a = law(RingKind::Additive, 5);
        assert_eq!(a.inverse(), Series::variable(a.ring(), 5).neg());
        // -x - beta x^2 - beta^2 x^3 - ...
        let m = law(RingKind::Multiplicative, 5);
        let inv = m.inverse();
        assert_eq!(inv.coeff(1), elem(&m, "-1"));
        for k in 2..=5 {
            assert_eq!(inv.coeff(k), elem(&m, &format!("-beta^{}", k - 1)));
        }
        let u = law(RingKind::UniversalRational, 6);
        let x = Series::variable(u.ring(), 6);
        assert!(u.eval(&x, &u.inverse()).is_zero_elem());
    }

    #[test]
    fn m_series_examples() {
        let m = law(RingKind::Multiplicative, 5);
        let x = Series::variable(m.ring(), 5);
        assert_eq!(m.m_series(1), x);
        assert!(m.m_series(0).is_zero_elem());
        let two = m.m_series(2);
        assert_eq!(two.coeff(1), elem(&m, "2"));
        assert_eq!(two.coeff(2), elem(&m, "-beta"));
        assert!(two.coeffs()[3..].iter().all(RingElem::is_zero));
        let a = law(RingKind::Additive, 5);
        let xa = Series::variable(a.ring(), 5);
        assert_eq!(a.m_series(-3), xa.scaled(&RingElem::from_int(a.ring(), -3)));
    }

    #[test]
    fn logarithms() {
        let a = law(RingKind::Additive, 5);
        let x = Series::variable(&a.ring().rational_extension(), 5);
        assert_eq!(a.log().unwrap(), x);
        // -log(1 - beta x) / beta
        let m = law(RingKind::Multiplicative, 6);
        let log = m.log().unwrap();
        let q = m.ring().rational_extension();
        for k in 0..6usize {
            let expected = RingElem::parse(&q, &format!("beta^{k}"))
                .unwrap()
                .scale(&rational(1, k as i64 + 1))
                .unwrap();
            assert_eq!(log.coeff(k + 1), expected);
        }
        let u = law(RingKind::UniversalRational, 6);
        let log = u.log().unwrap();
        assert_eq!(log.coeff(1), elem(&u, "1"));
        for m in 1..6 {
            assert_eq!(log.coeff(m + 1), elem(&u, &format!("b{m}")));
        }
    }

    #[test]
    fn pn_classes_closed_forms() {
        let a = law(RingKind::Additive, 6);
        assert!(a.pn_class(0).unwrap().is_one());
        for n in 1..6 {
            assert!(a.pn_class(n).unwrap().is_zero());
        }
        let m = law(RingKind::Multiplicative, 7);
        for n in 0..7 {
            assert_eq!(m.pn_class(n).unwrap(), elem(&m, &format!("beta^{n}")));
        }
        let u = law(RingKind::UniversalRational, 7);
        for n in 1..7 {
            assert_eq!(u.pn_class(n).unwrap(), elem(&u, &format!("{}*b{n}", n + 1)));
        }
        assert_eq!(
            u.pn_class(7),
            Err(Error::TruncationUnsound {
                needed: 8,
                available: 7
            })
        );
        assert_eq!(m.pn_classes().unwrap().len(), 7);
    }
}
