use std::fmt;

use super::{check_space, CohClass, Space};
use crate::error::{Error, Result};

/// The primitive building blocks of the morphism category.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Shape {
    /// Forget the factors whose `keep` flag is false.
    Projection { keep: Vec<bool> },
    /// Linear `P^m -> P^n` on one factor; the target dimension is read from
    /// the target space.
    LinearEmbed { factor: usize, source_dim: u32 },
    /// Duplicate factor `t` into target positions `t` and `t + 1`.
    Diagonal { factor: usize },
    /// `target[j] = source[sigma[j]]`.
    Permutation { sigma: Vec<usize> },
    /// Components in application order.
    Composite(Vec<Morphism>),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Morphism {
    source: Space,
    target: Space,
    shape: Shape,
}

impl Morphism {
    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn projection(source: &Space, keep: Vec<bool>) -> Result<Morphism> {
        if keep.len() != source.num_factors() {
            return Err(Error::InvalidMorphism(format!(
                "projection mask of length {} on {source}",
                keep.len()
            )));
        }
        let target = Space::new(
            source
                .factors()
                .iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(&n, _)| n)
                .collect(),
        );
        Ok(Morphism {
            source: source.clone(),
            target,
            shape: Shape::Projection { keep },
        })
    }

    /// Projection forgetting the single factor `t`.
    pub fn drop_factor(source: &Space, t: usize) -> Result<Morphism> {
        if t >= source.num_factors() {
            return Err(Error::IndexOutOfRange {
                index: t,
                bound: source.num_factors(),
            });
        }
        let keep = (0..source.num_factors()).map(|i| i != t).collect();
        Morphism::projection(source, keep)
    }

    /// The map to the point.
    pub fn structure_map(source: &Space) -> Morphism {
        Morphism::projection(source, vec![false; source.num_factors()]).expect("mask fits")
    }

    /// Linear embedding into `target`, replacing factor `t` by `P^m`.
    pub fn linear_embedding(target: &Space, t: usize, m: u32) -> Result<Morphism> {
        if t >= target.num_factors() {
            return Err(Error::IndexOutOfRange {
                index: t,
                bound: target.num_factors(),
            });
        }
        if m > target.factor(t) {
            return Err(Error::InvalidMorphism(format!(
                "cannot embed P{m} into P{}",
                target.factor(t)
            )));
        }
        let mut source = target.factors().to_vec();
        source[t] = m;
        Ok(Morphism {
            source: Space::new(source),
            target: target.clone(),
            shape: Shape::LinearEmbed {
                factor: t,
                source_dim: m,
            },
        })
    }

    /// Linear embedding out of `source`, enlarging factor `t` to `P^n`.
    pub fn embed_into(source: &Space, t: usize, n: u32) -> Result<Morphism> {
        if t >= source.num_factors() {
            return Err(Error::IndexOutOfRange {
                index: t,
                bound: source.num_factors(),
            });
        }
        let mut target = source.factors().to_vec();
        target[t] = n;
        Morphism::linear_embedding(&Space::new(target), t, source.factor(t))
    }

    pub fn diagonal(source: &Space, t: usize) -> Result<Morphism> {
        if t >= source.num_factors() {
            return Err(Error::IndexOutOfRange {
                index: t,
                bound: source.num_factors(),
            });
        }
        let mut target = source.factors().to_vec();
        target.insert(t + 1, source.factor(t));
        Ok(Morphism {
            source: source.clone(),
            target: Space::new(target),
            shape: Shape::Diagonal { factor: t },
        })
    }

    pub fn permutation(source: &Space, sigma: Vec<usize>) -> Result<Morphism> {
        let k = source.num_factors();
        let mut seen = vec![false; k];
        if sigma.len() != k {
            return Err(Error::InvalidMorphism(format!(
                "permutation of length {} on {source}",
                sigma.len()
            )));
        }
        for &s in &sigma {
            if s >= k || seen[s] {
                return Err(Error::InvalidMorphism(format!("{sigma:?} is not a permutation")));
            }
            seen[s] = true;
        }
        let target = Space::new(sigma.iter().map(|&s| source.factor(s)).collect());
        Ok(Morphism {
            source: source.clone(),
            target,
            shape: Shape::Permutation { sigma },
        })
    }

    pub fn identity(space: &Space) -> Morphism {
        Morphism::permutation(space, (0..space.num_factors()).collect()).expect("identity")
    }

    pub fn is_identity(&self) -> bool {
        match &self.shape {
            Shape::Permutation { sigma } => sigma.iter().enumerate().all(|(i, &s)| i == s),
            Shape::Projection { keep } => keep.iter().all(|&k| k),
            Shape::LinearEmbed { factor, source_dim } => self.target.factor(*factor) == *source_dim,
            _ => false,
        }
    }

    /// `next . self`.
    pub fn then(&self, next: &Morphism) -> Result<Morphism> {
        check_space(&self.target, &next.source)?;
        let mut parts = Vec::new();
        for m in [self, next] {
            match &m.shape {
                Shape::Composite(inner) => parts.extend(inner.iter().cloned()),
                _ if m.is_identity() => {}
                _ => parts.push(m.clone()),
            }
        }
        Ok(match parts.len() {
            0 => Morphism::identity(&self.source),
            1 => parts.pop().expect("one part"),
            _ => Morphism {
                source: self.source.clone(),
                target: next.target.clone(),
                shape: Shape::Composite(parts),
            },
        })
    }

    /// Compose a chain given in application order.
    pub fn chain(parts: &[Morphism]) -> Result<Morphism> {
        let (first, rest) = parts
            .split_first()
            .ok_or_else(|| Error::InvalidMorphism("empty composite".into()))?;
        rest.iter().try_fold(first.clone(), |acc, m| acc.then(m))
    }

    /// `X -> X x X`.
    pub fn full_diagonal(space: &Space) -> Morphism {
        let k = space.num_factors();
        let mut parts = Vec::new();
        let mut current = space.clone();
        for t in 0..k {
            let d = Morphism::diagonal(&current, 2 * t).expect("index in range");
            current = d.target.clone();
            parts.push(d);
        }
        let sigma: Vec<usize> = (0..k).map(|t| 2 * t).chain((0..k).map(|t| 2 * t + 1)).collect();
        parts.push(Morphism::permutation(&current, sigma).expect("valid unshuffle"));
        Morphism::chain(&parts).unwrap_or_else(|_| Morphism::identity(space))
    }

    /// `X x X -> X x X` swapping the halves.
    pub fn transposition(space: &Space) -> Morphism {
        let k = space.num_factors();
        let sigma = (k..2 * k).chain(0..k).collect();
        Morphism::permutation(&space.product(space), sigma).expect("valid swap")
    }

    /// `X x X -> (P^{n_1} x P^{n_1}) x ... x (P^{n_k} x P^{n_k})`.
    pub fn pair_shuffle(space: &Space) -> Morphism {
        let k = space.num_factors();
        let sigma = (0..k).flat_map(|t| [t, k + t]).collect();
        Morphism::permutation(&space.product(space), sigma).expect("valid shuffle")
    }

    /// `self x id_T`.
    pub fn times_identity(&self, t: &Space) -> Morphism {
        self.extend(t, false)
    }

    /// `id_T x self`.
    pub fn identity_times(&self, t: &Space) -> Morphism {
        self.extend(t, true)
    }

    fn extend(&self, extra: &Space, left: bool) -> Morphism {
        let e = extra.num_factors();
        let join = |s: &Space| {
            if left {
                extra.product(s)
            } else {
                s.product(extra)
            }
        };
        let shift = if left { e } else { 0 };
        let shape = match &self.shape {
            Shape::Projection { keep } => {
                let mut k = keep.clone();
                if left {
                    k.splice(0..0, std::iter::repeat_n(true, e));
                } else {
                    k.extend(std::iter::repeat_n(true, e));
                }
                Shape::Projection { keep: k }
            }
            Shape::LinearEmbed { factor, source_dim } => Shape::LinearEmbed {
                factor: factor + shift,
                source_dim: *source_dim,
            },
            Shape::Diagonal { factor } => Shape::Diagonal { factor: factor + shift },
            Shape::Permutation { sigma } => {
                let moved: Vec<usize> = sigma.iter().map(|s| s + shift).collect();
                let fixed_len = if left { 0 } else { sigma.len() };
                let fixed = (0..e).map(|i| i + fixed_len);
                Shape::Permutation {
                    sigma: if left {
                        fixed.chain(moved).collect()
                    } else {
                        moved.into_iter().chain(fixed).collect()
                    },
                }
            }
            Shape::Composite(parts) => Shape::Composite(parts.iter().map(|p| p.extend(extra, left)).collect()),
        };
        Morphism {
            source: join(&self.source),
            target: join(&self.target),
            shape,
        }
    }

    /// `f x g : X x Y -> X' x Y'`.
    pub fn product(f: &Morphism, g: &Morphism) -> Morphism {
        g.identity_times(&f.source)
            .then(&f.times_identity(&g.target))
            .expect("spaces line up")
    }

    /// Pullback of a monomial; `None` when it dies in the target ring.
    pub(crate) fn pull_monomial(&self, e: &[u32]) -> Option<Vec<u32>> {
        match &self.shape {
            Shape::Projection { keep } => {
                let mut it = e.iter();
                Some(
                    keep.iter()
                        .map(|&k| if k { *it.next().expect("length") } else { 0 })
                        .collect(),
                )
            }
            Shape::LinearEmbed { factor, source_dim } => (e[*factor] <= *source_dim).then(|| e.to_vec()),
            Shape::Diagonal { factor } => {
                let t = *factor;
                let merged = e[t] + e[t + 1];
                if merged > self.source.factor(t) {
                    return None;
                }
                let mut out = e.to_vec();
                out[t] = merged;
                out.remove(t + 1);
                Some(out)
            }
            Shape::Permutation { sigma } => {
                let mut out = vec![0; e.len()];
                for (j, &s) in sigma.iter().enumerate() {
                    out[s] = e[j];
                }
                Some(out)
            }
            Shape::Composite(parts) => parts.iter().rev().try_fold(e.to_vec(), |acc, p| p.pull_monomial(&acc)),
        }
    }

    /// Ring homomorphism `f^*`.
    pub fn pullback(&self, alpha: &CohClass) -> Result<CohClass> {
        check_space(&self.target, alpha.space())?;
        let mut out = CohClass::zero(&self.source, alpha.ring());
        for (e, c) in alpha.terms() {
            if let Some(pe) = self.pull_monomial(e) {
                out.insert(pe, c.clone());
            }
        }
        Ok(out)
    }

    /// Inverse permutation, as a morphism out of the target.
    pub fn inverse_permutation(&self) -> Option<Morphism> {
        match &self.shape {
            Shape::Permutation { sigma } => {
                let mut inv = vec![0; sigma.len()];
                for (j, &s) in sigma.iter().enumerate() {
                    inv[s] = j;
                }
                Morphism::permutation(&self.target, inv).ok()
            }
            _ => None,
        }
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            Shape::Projection { keep } => {
                let mask: String = keep.iter().map(|&k| if k { '1' } else { '0' }).collect();
                write!(f, "proj({mask})")
            }
            Shape::LinearEmbed { factor, .. } => {
                write!(f, "embed({},{})", factor + 1, self.target.factor(*factor))
            }
            Shape::Diagonal { factor } => write!(f, "diag({})", factor + 1),
            Shape::Permutation { sigma } => {
                let s: Vec<String> = sigma.iter().map(|i| (i + 1).to_string()).collect();
                write!(f, "perm({})", s.join(","))
            }
            Shape::Composite(parts) => {
                let s: Vec<String> = parts.iter().rev().map(|p| p.to_string()).collect();
                f.write_str(&s.join(";"))
            }
        }
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}: {} -> {}", self.source, self.target)
    }
}
