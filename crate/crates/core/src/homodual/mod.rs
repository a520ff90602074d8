//! Homology as the dual of cohomology: cap, cross and slant products, the
//! covariant and wrong-way maps, fundamental classes and the duality maps.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{check_ring, graded_lex, same_ring, CoeffRing, RingElem, RingMatrix};
use crate::error::{Error, Result};
use crate::gysin::Theory;
use crate::spaces::{check_space, CohClass, Morphism, Shape, Space};

/// A homology class, stored as its values on the monomial basis.
#[derive(Clone)]
pub struct HomClass {
    space: Space,
    ring: Arc<CoeffRing>,
    values: BTreeMap<Vec<u32>, RingElem>,
}

impl HomClass {
    pub fn zero(space: &Space, ring: &Arc<CoeffRing>) -> HomClass {
        HomClass {
            space: space.clone(),
            ring: ring.clone(),
            values: BTreeMap::new(),
        }
    }

    /// The functional dual to `z^e`.
    pub fn basis_dual(space: &Space, ring: &Arc<CoeffRing>, e: Vec<u32>) -> Result<HomClass> {
        HomClass::from_values(space, ring, [(e, RingElem::one(ring))])
    }

    pub fn from_values(
        space: &Space,
        ring: &Arc<CoeffRing>,
        values: impl IntoIterator<Item = (Vec<u32>, RingElem)>,
    ) -> Result<HomClass> {
        let mut out = HomClass::zero(space, ring);
        for (e, v) in values {
            if !space.contains_monomial(&e) {
                return Err(Error::InvalidConfig(format!(
                    "{e:?} is not a basis monomial of {space}"
                )));
            }
            check_ring(ring, v.ring())?;
            out.add_value(e, v);
        }
        Ok(out)
    }

    fn add_value(&mut self, e: Vec<u32>, v: RingElem) {
        if v.is_zero() {
            return;
        }
        let sum = match self.values.remove(&e) {
            Some(old) => &old + &v,
            None => v,
        };
        if !sum.is_zero() {
            self.values.insert(e, sum);
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn ring(&self) -> &Arc<CoeffRing> {
        &self.ring
    }

    /// Value on `z^e`.
    pub fn value(&self, e: &[u32]) -> RingElem {
        self.values
            .get(e)
            .cloned()
            .unwrap_or_else(|| RingElem::zero(&self.ring))
    }

    pub fn values(&self) -> impl Iterator<Item = (&Vec<u32>, &RingElem)> {
        self.values.iter()
    }

    /// Values in graded-lex order of the basis.
    pub fn sorted_values(&self) -> Vec<(&Vec<u32>, &RingElem)> {
        let mut v: Vec<_> = self.values.iter().collect();
        v.sort_by(|a, b| graded_lex(a.0, b.0));
        v
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    fn check_compatible(&self, other: &HomClass) -> Result<()> {
        check_space(&self.space, &other.space)?;
        check_ring(&self.ring, &other.ring)
    }

    pub fn add(&self, other: &HomClass) -> Result<HomClass> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, v) in &other.values {
            out.add_value(e.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &HomClass) -> Result<HomClass> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HomClass {
        HomClass {
            values: self.values.iter().map(|(e, v)| (e.clone(), -v)).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, s: &RingElem) -> Result<HomClass> {
        check_ring(&self.ring, s.ring())?;
        let mut out = HomClass::zero(&self.space, &self.ring);
        for (e, v) in &self.values {
            out.add_value(e.clone(), v * s);
        }
        Ok(out)
    }
}

impl PartialEq for HomClass {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && same_ring(&self.ring, &other.ring) && self.values == other.values
    }
}

impl Eq for HomClass {}

impl fmt::Display for HomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .sorted_values()
            .into_iter()
            .map(|(e, v)| {
                let idx: Vec<String> = e.iter().map(u32::to_string).collect();
                format!("({}): {v}", idx.join(","))
            })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl fmt::Debug for HomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomClass[{}]{self}", self.space)
    }
}

fn monomial(space: &Space, ring: &Arc<CoeffRing>, e: &[u32]) -> CohClass {
    CohClass::monomial(space, e.to_vec(), RingElem::one(ring)).expect("basis monomial")
}

/// The canonical pairing `<alpha, a>`.
pub fn pair(alpha: &CohClass, a: &HomClass) -> Result<RingElem> {
    check_space(alpha.space(), a.space())?;
    check_ring(alpha.ring(), a.ring())?;
    let mut acc = RingElem::zero(a.ring());
    for (e, c) in alpha.terms() {
        if let Some(v) = a.values.get(e) {
            acc = &acc + &(c * v);
        }
    }
    Ok(acc)
}

/// `(f_* a)(b) = a(f^* b)`.
pub fn pushforward_hom(f: &Morphism, a: &HomClass) -> Result<HomClass> {
    check_space(f.source(), a.space())?;
    let target = f.target();
    let mut values = Vec::new();
    for e in target.basis() {
        if let Some(pe) = f.pull_monomial(&e) {
            values.push((e, a.value(&pe)));
        }
    }
    HomClass::from_values(target, a.ring(), values)
}

/// `(f^! a)(b) = a(f_! b)`.
pub fn shriek_hom(theory: &Theory, f: &Morphism, a: &HomClass) -> Result<HomClass> {
    check_space(f.target(), a.space())?;
    let source = f.source();
    let mut values = Vec::new();
    for e in source.basis() {
        let pushed = theory.pushforward(f, &monomial(source, a.ring(), &e))?;
        values.push((e, pair(&pushed, a)?));
    }
    HomClass::from_values(source, a.ring(), values)
}

/// `[X] = p^!(1)` for the structure map; its value on `z^e` is
/// `prod_t g_{n_t - e_t}`.
pub fn fundamental_class(theory: &Theory, space: &Space) -> Result<HomClass> {
    let mut values = Vec::new();
    for e in space.basis() {
        let mut v = RingElem::one(theory.ring());
        for (&x, &n) in e.iter().zip(space.factors()) {
            v = &v * theory.pn_class(n - x)?;
        }
        values.push((e, v));
    }
    HomClass::from_values(space, theory.ring(), values)
}

/// `(alpha ∩ a)(b) = a(b ∪ alpha)`.
pub fn cap(alpha: &CohClass, a: &HomClass) -> Result<HomClass> {
    check_space(alpha.space(), a.space())?;
    check_ring(alpha.ring(), a.ring())?;
    let space = a.space();
    let mut out = HomClass::zero(space, a.ring());
    for e in space.basis() {
        for (f, c) in alpha.terms() {
            let sum: Vec<u32> = e.iter().zip(f).map(|(x, y)| x + y).collect();
            if let Some(v) = a.values.get(&sum) {
                out.add_value(e.clone(), c * v);
            }
        }
    }
    Ok(out)
}

/// Homological cross product on `X x Y`.
pub fn cross_hom(a: &HomClass, b: &HomClass) -> Result<HomClass> {
    check_ring(a.ring(), b.ring())?;
    let space = a.space().product(b.space());
    let mut out = HomClass::zero(&space, a.ring());
    for (ea, va) in &a.values {
        for (eb, vb) in &b.values {
            let mut e = ea.clone();
            e.extend_from_slice(eb);
            out.add_value(e, va * vb);
        }
    }
    Ok(out)
}

fn split_trailing(total: &Space, tail: &Space) -> Result<usize> {
    let k = total.num_factors();
    let ky = tail.num_factors();
    if ky > k || total.factors()[k - ky..] != *tail.factors() {
        return Err(Error::SpaceMismatch {
            expected: format!("X x {tail}"),
            found: total.to_string(),
        });
    }
    Ok(k - ky)
}

fn split_leading(total: &Space, head: &Space) -> Result<usize> {
    let kx = head.num_factors();
    if kx > total.num_factors() || total.factors()[..kx] != *head.factors() {
        return Err(Error::SpaceMismatch {
            expected: format!("{head} x Y"),
            found: total.to_string(),
        });
    }
    Ok(kx)
}

/// `alpha / a` for `alpha` on `X x Y` and `a` on the trailing factors `Y`.
pub fn slant_l(alpha: &CohClass, a: &HomClass) -> Result<CohClass> {
    check_ring(alpha.ring(), a.ring())?;
    let kx = split_trailing(alpha.space(), a.space())?;
    let (x, _) = alpha.space().split_at(kx);
    let mut terms = Vec::new();
    for (e, c) in alpha.terms() {
        if let Some(v) = a.values.get(&e[kx..]) {
            terms.push((e[..kx].to_vec(), c * v));
        }
    }
    CohClass::from_terms(&x, alpha.ring(), terms)
}

/// `alpha \ b` for `alpha` on the leading factors `X` and `b` on `X x Y`.
pub fn slant_r(alpha: &CohClass, b: &HomClass) -> Result<HomClass> {
    check_ring(alpha.ring(), b.ring())?;
    let kx = split_leading(b.space(), alpha.space())?;
    let (_, y) = b.space().split_at(kx);
    let mut out = HomClass::zero(&y, b.ring());
    for (e, v) in &b.values {
        let c = alpha.coeff(&e[..kx]);
        if !c.is_zero() {
            out.add_value(e[kx..].to_vec(), &c * v);
        }
    }
    Ok(out)
}

/// The factor forgotten by a projection that drops exactly one factor.
pub fn dropped_factor(p: &Morphism) -> Result<usize> {
    match p.shape() {
        Shape::Projection { keep } if keep.iter().filter(|k| !**k).count() == 1 => {
            Ok(keep.iter().position(|k| !k).expect("one dropped factor"))
        }
        _ => Err(Error::InvalidMorphism(format!(
            "{p} does not forget exactly one factor"
        ))),
    }
}

/// Projective bundle coordinate `psi_i(a) = p_*(z^i ∩ a)`.
pub fn psi(i: u32, p: &Morphism, a: &HomClass) -> Result<HomClass> {
    let t = dropped_factor(p)?;
    let n = p.source().factor(t);
    if i > n {
        return Err(Error::IndexOutOfRange {
            index: i as usize,
            bound: n as usize + 1,
        });
    }
    let mut e = vec![0; p.source().num_factors()];
    e[t] = i;
    pushforward_hom(p, &cap(&monomial(p.source(), a.ring(), &e), a)?)
}

/// All coordinates `(psi_0(a), ..., psi_n(a))`.
pub fn pbt_coordinates(p: &Morphism, a: &HomClass) -> Result<Vec<HomClass>> {
    let n = p.source().factor(dropped_factor(p)?);
    (0..=n).map(|i| psi(i, p, a)).collect()
}

/// Matrix of `⊕ psi_i`, rows indexed by `(i, base monomial)` and columns by
/// the basis of the bundle.
pub fn pbt_matrix(p: &Morphism, ring: &Arc<CoeffRing>) -> Result<RingMatrix> {
    let source_basis = p.source().basis();
    let target_basis = p.target().basis();
    let n = p.source().factor(dropped_factor(p)?) as usize;
    let rows = (n + 1) * target_basis.len();
    let mut m = RingMatrix::zeros(ring, rows, source_basis.len());
    for (col, e) in source_basis.iter().enumerate() {
        let dual = HomClass::basis_dual(p.source(), ring, e.clone())?;
        for (i, coord) in pbt_coordinates(p, &dual)?.into_iter().enumerate() {
            for (r, f) in target_basis.iter().enumerate() {
                m.set(i * target_basis.len() + r, col, coord.value(f));
            }
        }
    }
    Ok(m)
}

/// The unique class with `psi_i(section) = xs[i]`.
pub fn pbt_section(xs: &[HomClass], p: &Morphism, ring: &Arc<CoeffRing>) -> Result<HomClass> {
    let n = p.source().factor(dropped_factor(p)?) as usize;
    if xs.len() != n + 1 {
        return Err(Error::IndexOutOfRange {
            index: xs.len(),
            bound: n + 1,
        });
    }
    let target_basis = p.target().basis();
    let mut rhs = Vec::with_capacity(xs.len() * target_basis.len());
    for x in xs {
        check_space(p.target(), x.space())?;
        rhs.extend(target_basis.iter().map(|f| x.value(f)));
    }
    let inverse = pbt_matrix(p, ring)?.inverse()?;
    let solution = inverse.apply(&rhs)?;
    HomClass::from_values(p.source(), ring, p.source().basis().into_iter().zip(solution))
}

/// `D•(alpha) = alpha ∩ [X]`.
pub fn duality_to_hom(theory: &Theory, alpha: &CohClass) -> Result<HomClass> {
    cap(alpha, &fundamental_class(theory, alpha.space())?)
}

/// `D_•(a) = Δ_!(1) / a`.
pub fn duality_to_coh(theory: &Theory, a: &HomClass) -> Result<CohClass> {
    slant_l(&theory.kernel_class(a.space())?, a)
}

/// `f^◇ = f_* f^!`.
pub fn upper_diamond(theory: &Theory, f: &Morphism, a: &HomClass) -> Result<HomClass> {
    pushforward_hom(f, &shriek_hom(theory, f, a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RingKind;

    fn theory(kind: RingKind) -> Theory {
        Theory::new(kind, 6).unwrap()
    }

    fn values(a: &HomClass, space: &Space) -> Vec<String> {
        space.basis().iter().map(|e| a.value(e).to_string()).collect()
    }

    #[test]
    fn fundamental_classes() {
        let a = theory(RingKind::Additive);
        let pt = Space::point();
        assert_eq!(values(&fundamental_class(&a, &pt).unwrap(), &pt), ["1"]);
        let p2 = Space::projective(2);
        assert_eq!(values(&fundamental_class(&a, &p2).unwrap(), &p2), ["0", "0", "1"]);
        let m = theory(RingKind::Multiplicative);
        let p1 = Space::projective(1);
        assert_eq!(values(&fundamental_class(&m, &p1).unwrap(), &p1), ["beta", "1"]);
        let p = Morphism::structure_map(&p2);
        let unit = HomClass::basis_dual(&pt, m.ring(), vec![]).unwrap();
        assert_eq!(shriek_hom(&m, &p, &unit).unwrap(), fundamental_class(&m, &p2).unwrap());
        let p1p1 = p1.product(&p1);
        let f = fundamental_class(&m, &p1).unwrap();
        assert_eq!(cross_hom(&f, &f).unwrap(), fundamental_class(&m, &p1p1).unwrap());
    }

    #[test]
    fn pairing_and_cap() {
        let a = theory(RingKind::Additive);
        let p1 = Space::projective(1);
        let fc = fundamental_class(&a, &p1).unwrap();
        let z = CohClass::zeta(&p1, a.ring(), 0).unwrap();
        let one = CohClass::one(&p1, a.ring());
        assert!(pair(&z, &fc).unwrap().is_one());
        assert!(pair(&one, &fc).unwrap().is_zero());
        assert_eq!(cap(&one, &fc).unwrap(), fc);
        let zc = cap(&z, &fc).unwrap();
        assert_eq!(values(&zc, &p1), ["1", "0"]);
        assert_eq!(duality_to_hom(&a, &z).unwrap(), zc);
    }

    #[test]
    fn slants() {
        let a = theory(RingKind::Additive);
        let p1 = Space::projective(1);
        let p1p1 = p1.product(&p1);
        let fc = fundamental_class(&a, &p1).unwrap();
        let z = CohClass::zeta(&p1, a.ring(), 0).unwrap();
        let zz = z.cross(&z).unwrap();
        assert_eq!(slant_l(&zz, &fc).unwrap(), z);
        let k = a.kernel_class(&p1).unwrap();
        assert_eq!(slant_l(&k, &fc).unwrap(), CohClass::one(&p1, a.ring()));
        let pt_class = fundamental_class(&a, &Space::point()).unwrap();
        assert_eq!(slant_l(&z, &pt_class).unwrap(), z);
        let ff = cross_hom(&fc, &fc).unwrap();
        assert_eq!(ff.space(), &p1p1);
        assert_eq!(slant_r(&z, &ff).unwrap(), fc);
        let one = CohClass::one(&p1, a.ring());
        let drop_first = Morphism::projection(&p1p1, vec![false, true]).unwrap();
        assert_eq!(slant_r(&one, &ff).unwrap(), pushforward_hom(&drop_first, &ff).unwrap());
    }

    #[test]
    fn shriek_of_embedding() {
        let u = theory(RingKind::UniversalRational);
        let i = Morphism::embed_into(&Space::projective(1), 0, 2).unwrap();
        let fc = fundamental_class(&u, i.target()).unwrap();
        let pulled = shriek_hom(&u, &i, &fc).unwrap();
        assert_eq!(&pulled.value(&[0]), u.pn_class(1).unwrap());
    }

    #[test]
    fn projective_bundle_coordinates() {
        let m = theory(RingKind::Multiplicative);
        let p2 = Space::projective(2);
        let p = Morphism::structure_map(&p2);
        let fc = fundamental_class(&m, &p2).unwrap();
        assert!(psi(2, &p, &fc).unwrap().value(&[]).is_one());
        assert_eq!(psi(0, &p, &fc).unwrap(), pushforward_hom(&p, &fc).unwrap());
        assert!(psi(3, &p, &fc).is_err());
        let unit = HomClass::basis_dual(&Space::point(), m.ring(), vec![]).unwrap();
        let zero = HomClass::zero(&Space::point(), m.ring());
        let xs = vec![zero.clone(), zero, unit];
        let phi = pbt_section(&xs, &p, m.ring()).unwrap();
        assert_eq!(pbt_coordinates(&p, &phi).unwrap(), xs);
    }

    #[test]
    fn duality_roundtrip_on_p1() {
        for kind in RingKind::ALL {
            let t = theory(kind);
            let p1 = Space::projective(1);
            for e in p1.basis() {
                let alpha = CohClass::monomial(&p1, e.clone(), RingElem::one(t.ring())).unwrap();
                let a = duality_to_hom(&t, &alpha).unwrap();
                assert_eq!(duality_to_coh(&t, &a).unwrap(), alpha);
                let dual = HomClass::basis_dual(&p1, t.ring(), e).unwrap();
                let back = duality_to_coh(&t, &dual).unwrap();
                assert_eq!(duality_to_hom(&t, &back).unwrap(), dual);
            }
        }
        let a = theory(RingKind::Additive);
        let p1 = Space::projective(1);
        let fc = fundamental_class(&a, &p1).unwrap();
        assert_eq!(duality_to_coh(&a, &fc).unwrap(), CohClass::one(&p1, a.ring()));
    }
}
