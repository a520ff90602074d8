//! Gysin pushforwards `f_!`, the diagonal kernel `Δ_!(1)` and the diamond
//! operators.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::algebra::{CoeffRing, RingElem, RingKind, RingMatrix};
use crate::error::{Error, Result};
use crate::fgl::Fgl;
use crate::spaces::{self, check_space, CohClass, Morphism, Shape, Space};

/// A deliberate corruption of a theory, used to show that the checks can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mutation {
    /// Negate `a_ij` in the formal group law while keeping the projective
    /// space classes `g_n` of the original law.
    FlipLawCoefficient { i: u32, j: u32 },
    /// Negate the single entry `C_ij` of every diagonal kernel large enough to
    /// contain it.
    FlipKernelCoefficient { i: u32, j: u32 },
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mutation::FlipLawCoefficient { i, j } => write!(f, "law:{i},{j}"),
            Mutation::FlipKernelCoefficient { i, j } => write!(f, "kernel:{i},{j}"),
        }
    }
}

impl Mutation {
    /// Parse `law:i,j` or `kernel:i,j`.
    pub fn parse(text: &str) -> Result<Mutation> {
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::parse(text, 0, "expected law:i,j or kernel:i,j"))?;
        let offset = kind.len() + 1;
        let (i, j) = rest
            .split_once(',')
            .ok_or_else(|| Error::parse(rest, offset, "expected two indices"))?;
        let index = |s: &str, pos: usize| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| Error::parse(s, pos, "expected a nonnegative integer"))
        };
        let i = index(i, offset)?;
        let j = index(j, offset + rest.find(',').unwrap_or(0) + 1)?;
        match kind {
            "law" => Ok(Mutation::FlipLawCoefficient { i, j }),
            "kernel" => Ok(Mutation::FlipKernelCoefficient { i, j }),
            other => Err(Error::parse(other, 0, "unknown mutation kind")),
        }
    }
}

/// Dual-basis data for `Δ: P^n -> P^n x P^n`.
#[derive(Clone, Debug)]
pub struct GysinKernel {
    n: u32,
    m: RingMatrix,
    c: RingMatrix,
    k: CohClass,
}

impl GysinKernel {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Pairing matrix `M_kl = g_{n-k-l}`.
    pub fn pairing(&self) -> &RingMatrix {
        &self.m
    }

    /// Coefficient matrix `C = M^{-1}` of the kernel.
    pub fn coefficients(&self) -> &RingMatrix {
        &self.c
    }

    /// `K = sum C_ij z1^i z2^j` on `P^n x P^n`.
    pub fn class(&self) -> &CohClass {
        &self.k
    }
}

/// An oriented theory: formal group law, fundamental class data and a
/// memoized kernel cache.
pub struct Theory {
    law: Fgl,
    g: Vec<RingElem>,
    mutation: Option<Mutation>,
    kernels: RwLock<HashMap<u32, Arc<GysinKernel>>>,
}

impl Theory {
    pub fn new(kind: RingKind, truncation: u32) -> Result<Theory> {
        let ring = CoeffRing::new(kind, truncation)?;
        Theory::from_law(Fgl::build(&ring)?)
    }

    pub fn from_law(law: Fgl) -> Result<Theory> {
        let g = law.pn_classes()?;
        Ok(Theory {
            law,
            g,
            mutation: None,
            kernels: RwLock::new(HashMap::new()),
        })
    }

    /// A corrupted copy with an empty kernel cache.
    pub fn with_mutation(&self, mutation: Mutation) -> Result<Theory> {
        let law = match mutation {
            Mutation::FlipLawCoefficient { i, j } => {
                if i == 0 || j == 0 || i + j > self.truncation() {
                    return Err(Error::InvalidConfig(format!(
                        "no law coefficient a_{i}{j} at truncation {}",
                        self.truncation()
                    )));
                }
                self.law.with_flipped_coefficient(i, j)
            }
            Mutation::FlipKernelCoefficient { .. } => self.law.clone(),
        };
        Ok(Theory {
            law,
            g: self.g.clone(),
            mutation: Some(mutation),
            kernels: RwLock::new(HashMap::new()),
        })
    }

    pub fn law(&self) -> &Fgl {
        &self.law
    }

    pub fn ring(&self) -> &Arc<CoeffRing> {
        self.law.ring()
    }

    pub fn kind(&self) -> RingKind {
        self.law.kind()
    }

    pub fn truncation(&self) -> u32 {
        self.law.truncation()
    }

    pub fn mutation(&self) -> Option<Mutation> {
        self.mutation
    }

    /// `g_n = p_!(1)` for `p: P^n -> pt`.
    pub fn pn_class(&self, n: u32) -> Result<&RingElem> {
        self.g.get(n as usize).ok_or(Error::TruncationUnsound {
            needed: n + 1,
            available: self.truncation(),
        })
    }

    pub fn kernel(&self, n: u32) -> Result<Arc<GysinKernel>> {
        if let Some(k) = self.kernels.read().expect("kernel cache").get(&n) {
            return Ok(k.clone());
        }
        let built = Arc::new(self.build_kernel(n)?);
        let mut cache = self.kernels.write().expect("kernel cache");
        Ok(cache.entry(n).or_insert(built).clone())
    }

    fn build_kernel(&self, n: u32) -> Result<GysinKernel> {
        let ring = self.ring();
        let size = n as usize + 1;
        let g: Vec<RingElem> = (0..=n).map(|k| self.pn_class(k).cloned()).collect::<Result<_>>()?;
        let m = RingMatrix::from_fn(ring, size, size, |k, l| {
            if k + l <= n as usize {
                g[n as usize - k - l].clone()
            } else {
                RingElem::zero(ring)
            }
        });
        let mut c = m.inverse()?;
        if let Some(Mutation::FlipKernelCoefficient { i, j }) = self.mutation {
            if i <= n && j <= n {
                let v = -c.get(i as usize, j as usize);
                c.set(i as usize, j as usize, v);
            }
        }
        let space = Space::new(vec![n, n]);
        let terms = (0..size).flat_map(|i| (0..size).map(move |j| (i, j)));
        let k = CohClass::from_terms(
            &space,
            ring,
            terms.map(|(i, j)| (vec![i as u32, j as u32], c.get(i, j).clone())),
        )?;
        Ok(GysinKernel { n, m, c, k })
    }

    /// The matrix `a_ij` of the decomposition
    /// `Δ_!(1) = 1 x z^n + z^n x 1 + sum a_ij z^i x z^j`; the boundary row and
    /// column are zero except `a_0n = a_n0 = 1`.
    pub fn diag_coefficients(&self, n: u32) -> Result<RingMatrix> {
        Ok(self.kernel(n)?.coefficients().clone())
    }

    /// `Δ_!(1)` on `X x X`, assembled from the factor kernels.
    pub fn kernel_class(&self, space: &Space) -> Result<CohClass> {
        let mut product = CohClass::one(&Space::point(), self.ring());
        for &n in space.factors() {
            product = product.cross(self.kernel(n)?.class())?;
        }
        Morphism::pair_shuffle(space).pullback(&product)
    }

    /// Euler class of `O(d_1, ..., d_k)` under this theory's law.
    pub fn euler(&self, space: &Space, degrees: &[i64]) -> Result<CohClass> {
        spaces::euler(space, degrees, &self.law)
    }

    /// Gysin pushforward `f_!`.
    pub fn pushforward(&self, f: &Morphism, alpha: &CohClass) -> Result<CohClass> {
        check_space(f.source(), alpha.space())?;
        let ring = alpha.ring();
        let target = f.target();
        match f.shape() {
            Shape::Projection { keep } => {
                let mut terms = Vec::new();
                for (e, c) in alpha.terms() {
                    let mut coeff = c.clone();
                    let mut kept = Vec::new();
                    for (t, (&x, &k)) in e.iter().zip(keep).enumerate() {
                        if k {
                            kept.push(x);
                        } else {
                            coeff = &coeff * self.pn_class(f.source().factor(t) - x)?;
                        }
                    }
                    terms.push((kept, coeff));
                }
                CohClass::from_terms(target, ring, terms)
            }
            Shape::LinearEmbed { factor, source_dim } => {
                let shift = target.factor(*factor) - source_dim;
                let terms = alpha.terms().map(|(e, c)| {
                    let mut e = e.clone();
                    e[*factor] += shift;
                    (e, c.clone())
                });
                CohClass::from_terms(target, ring, terms)
            }
            Shape::Diagonal { factor } => {
                let t = *factor;
                let q = Morphism::drop_factor(target, t + 1)?;
                let kernel = self.kernel(f.source().factor(t))?;
                let placed = kernel.class().terms().map(|(e, c)| {
                    let mut full = vec![0; target.num_factors()];
                    full[t] = e[0];
                    full[t + 1] = e[1];
                    (full, c.clone())
                });
                let placed = CohClass::from_terms(target, ring, placed)?;
                q.pullback(alpha)?.cup(&placed)
            }
            Shape::Permutation { .. } => f.inverse_permutation().expect("permutation").pullback(alpha),
            Shape::Composite(parts) => parts.iter().try_fold(alpha.clone(), |acc, p| self.pushforward(p, &acc)),
        }
    }

    /// `f_◇ = f_! f^*`.
    pub fn lower_diamond(&self, f: &Morphism, alpha: &CohClass) -> Result<CohClass> {
        self.pushforward(f, &f.pullback(alpha)?)
    }
}

impl fmt::Debug for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Theory")
            .field("kind", &self.kind())
            .field("truncation", &self.truncation())
            .field("mutation", &self.mutation)
            .finish()
    }
}
