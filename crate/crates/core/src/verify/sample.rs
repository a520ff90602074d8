use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{CoeffRing, RingElem, RingKind};
use crate::homodual::HomClass;
use crate::spaces::{CohClass, Space};

/// Range of total z-degrees `|e|` that sampled classes may occupy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeWindow {
    pub min: u32,
    pub max: u32,
}

impl DegreeWindow {
    pub fn all() -> DegreeWindow {
        DegreeWindow { min: 0, max: u32::MAX }
    }

    pub fn top(space: &Space) -> DegreeWindow {
        DegreeWindow {
            min: space.dim(),
            max: space.dim(),
        }
    }

    fn contains(&self, e: &[u32]) -> bool {
        let d: u32 = e.iter().sum();
        self.min <= d && d <= self.max
    }
}

/// Deterministic source of random classes.
pub struct Sampler {
    rng: ChaCha8Rng,
    magnitude: i64,
}

/// FNV-1a, used to derive independent per-task seeds.
fn fnv1a(parts: &[&[u8]]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for part in parts {
        for &b in *part {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h ^= 0xff;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

impl Sampler {
    pub const DEFAULT_MAGNITUDE: i64 = 3;

    pub fn new(seed: u64) -> Sampler {
        Sampler::with_magnitude(seed, Sampler::DEFAULT_MAGNITUDE)
    }

    pub fn with_magnitude(seed: u64, magnitude: i64) -> Sampler {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            magnitude: magnitude.max(1),
        }
    }

    /// A sampler whose stream depends only on the suite seed and the task.
    pub fn for_task(seed: u64, check: &str, theory: &str, space: &str) -> Sampler {
        Sampler::new(fnv1a(&[
            &seed.to_le_bytes(),
            check.as_bytes(),
            theory.as_bytes(),
            space.as_bytes(),
        ]))
    }

    fn nonzero(&mut self) -> i64 {
        let m = self.magnitude;
        let v = self.rng.gen_range(1..=m);
        if self.rng.gen_bool(0.5) {
            -v
        } else {
            v
        }
    }

    /// A nonzero coefficient: a small integer (half-integer in the universal
    /// ring), sometimes plus a multiple of a symbol monomial.
    pub fn coefficient(&mut self, ring: &Arc<CoeffRing>) -> RingElem {
        let base = if ring.kind() == RingKind::UniversalRational && self.rng.gen_bool(0.3) {
            let q = BigRational::new(BigInt::from(self.nonzero()), BigInt::from(2));
            RingElem::from_rational(ring, q).expect("rational ring")
        } else {
            RingElem::from_int(ring, self.nonzero())
        };
        let symbols = ring.symbols().len();
        if symbols == 0 || self.rng.gen_bool(0.5) {
            return base;
        }
        let sym = RingElem::symbol(ring, self.rng.gen_range(0..symbols)).expect("symbol");
        let power = if ring.kind() == RingKind::Multiplicative {
            self.rng.gen_range(1..=2)
        } else {
            1
        };
        let extra = &sym.pow(power) * &RingElem::from_int(ring, self.nonzero());
        let sum = &base + &extra;
        if sum.is_zero() {
            base
        } else {
            sum
        }
    }

    pub fn coh(&mut self, space: &Space, ring: &Arc<CoeffRing>, window: DegreeWindow) -> CohClass {
        let terms: Vec<_> = space
            .basis()
            .into_iter()
            .filter(|e| window.contains(e))
            .map(|e| (e, self.coefficient(ring)))
            .collect();
        CohClass::from_terms(space, ring, terms).expect("basis monomials")
    }

    pub fn hom(&mut self, space: &Space, ring: &Arc<CoeffRing>, window: DegreeWindow) -> HomClass {
        let values: Vec<_> = space
            .basis()
            .into_iter()
            .filter(|e| window.contains(e))
            .map(|e| (e, self.coefficient(ring)))
            .collect();
        HomClass::from_values(space, ring, values).expect("basis monomials")
    }
}

/// One sampled cohomology class.
pub fn sample_coh(space: &Space, ring: &Arc<CoeffRing>, seed: u64, window: DegreeWindow) -> CohClass {
    Sampler::new(seed).coh(space, ring, window)
}

/// One sampled homology class.
pub fn sample_hom(space: &Space, ring: &Arc<CoeffRing>, seed: u64, window: DegreeWindow) -> HomClass {
    Sampler::new(seed).hom(space, ring, window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational_to_i64;

    #[test]
    fn deterministic() {
        let r = CoeffRing::new(RingKind::UniversalRational, 6).unwrap();
        let x = Space::new(vec![2, 1]);
        let a = sample_coh(&x, &r, 7, DegreeWindow::all());
        assert_eq!(a, sample_coh(&x, &r, 7, DegreeWindow::all()));
        assert_eq!(a.terms().count(), 6);
        assert_ne!(a, sample_coh(&x, &r, 8, DegreeWindow::all()));
        assert_eq!(
            sample_hom(&x, &r, 7, DegreeWindow::all()),
            sample_hom(&x, &r, 7, DegreeWindow::all())
        );
    }

    #[test]
    fn window_top_degree() {
        let r = CoeffRing::new(RingKind::Additive, 4).unwrap();
        let p1 = Space::projective(1);
        for seed in 0..10 {
            let a = sample_coh(&p1, &r, seed, DegreeWindow::top(&p1));
            let keys: Vec<_> = a.terms().map(|(e, _)| e.clone()).collect();
            assert_eq!(keys, vec![vec![1]]);
        }
    }

    #[test]
    fn coefficients_are_bounded() {
        let r = CoeffRing::new(RingKind::Multiplicative, 4).unwrap();
        let mut s = Sampler::with_magnitude(3, 2);
        for _ in 0..200 {
            let c = s.coefficient(&r);
            assert!(!c.is_zero());
            for (_, q) in c.terms() {
                let v = rational_to_i64(q).unwrap();
                assert!((1..=2).contains(&v.abs()));
            }
        }
    }

    #[test]
    fn task_seeds_differ() {
        let a = Sampler::for_task(1, "V5", "additive", "P1").rng.gen::<u64>();
        let b = Sampler::for_task(1, "V6", "additive", "P1").rng.gen::<u64>();
        let c = Sampler::for_task(1, "V5", "additive", "P1").rng.gen::<u64>();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }
}
