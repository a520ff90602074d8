use std::fmt::{self, Display};

use super::sample::{DegreeWindow, Sampler};
use super::Witness;
use crate::algebra::{RingElem, RingMatrix};
use crate::error::Error;
use crate::fgl::{MultiSeries, Series};
use crate::gysin::Theory;
use crate::homodual::{
    cap, cross_hom, fundamental_class, pbt_coordinates, pbt_matrix, pbt_section, psi, pushforward_hom, shriek_hom,
    slant_l, slant_r, upper_diamond, HomClass,
};
use crate::spaces::{fgl_eval, CohClass, Morphism, Shape, Space};

pub(crate) enum Outcome {
    Fail(Witness),
    Error(Error),
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        Outcome::Error(e)
    }
}

pub(crate) type CheckResult = Result<(), Outcome>;

pub(crate) type CheckFn = fn(&mut Probe) -> CheckResult;

/// Everything a check needs: the theory, the space and a sampler.
pub(crate) struct Probe<'a> {
    pub theory: &'a Theory,
    pub space: &'a Space,
    pub samples: usize,
    pub sampler: Sampler,
}

impl Probe<'_> {
    fn coh(&mut self, space: &Space) -> CohClass {
        self.sampler.coh(space, self.theory.ring(), DegreeWindow::all())
    }

    fn hom(&mut self, space: &Space) -> HomClass {
        self.sampler.hom(space, self.theory.ring(), DegreeWindow::all())
    }

    fn coh_basis(&self, space: &Space) -> Vec<CohClass> {
        let ring = self.theory.ring();
        space
            .basis()
            .into_iter()
            .map(|e| CohClass::monomial(space, e, RingElem::one(ring)).expect("basis"))
            .collect()
    }

    fn hom_basis(&self, space: &Space) -> Vec<HomClass> {
        let ring = self.theory.ring();
        space
            .basis()
            .into_iter()
            .map(|e| HomClass::basis_dual(space, ring, e).expect("basis"))
            .collect()
    }
}

fn expect<T: PartialEq + Display>(identity: &str, inputs: &[(&str, &dyn Display)], lhs: &T, rhs: &T) -> CheckResult {
    if lhs == rhs {
        return Ok(());
    }
    Err(Outcome::Fail(Witness {
        identity: identity.to_string(),
        inputs: inputs.iter().map(|(k, v)| format!("{k} = {v}")).collect(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }))
}

fn fail(identity: &str, inputs: &[(&str, &dyn Display)], message: &str) -> CheckResult {
    Err(Outcome::Fail(Witness {
        identity: identity.to_string(),
        inputs: inputs.iter().map(|(k, v)| format!("{k} = {v}")).collect(),
        lhs: message.to_string(),
        rhs: String::new(),
    }))
}

struct MatrixDisplay<'a>(&'a RingMatrix);

impl Display for MatrixDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.0.rows())
            .map(|i| {
                let row: Vec<String> = (0..self.0.cols()).map(|j| self.0.get(i, j).to_string()).collect();
                format!("[{}]", row.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Generator morphisms exercised on a space, with stable names.
pub fn test_morphisms(space: &Space) -> Vec<(String, Morphism)> {
    let k = space.num_factors();
    let mut out = vec![("proj-to-pt".to_string(), Morphism::structure_map(space))];
    if k >= 2 {
        out.push((
            "proj-drop-last".into(),
            Morphism::drop_factor(space, k - 1).expect("factor"),
        ));
        out.push((
            "proj-drop-first".into(),
            Morphism::drop_factor(space, 0).expect("factor"),
        ));
    }
    for t in 0..k {
        let n = space.factor(t);
        if n >= 1 {
            out.push((
                format!("embed-hyperplane-{}", t + 1),
                Morphism::linear_embedding(space, t, n - 1).expect("embedding"),
            ));
        }
        if n >= 2 {
            out.push((
                format!("embed-point-{}", t + 1),
                Morphism::linear_embedding(space, t, 0).expect("embedding"),
            ));
        }
    }
    for t in 0..k {
        out.push((
            format!("diag-{}", t + 1),
            Morphism::diagonal(space, t).expect("diagonal"),
        ));
    }
    if k >= 2 {
        out.push(("full-diagonal".into(), Morphism::full_diagonal(space)));
        out.push((
            "perm-swap".into(),
            Morphism::permutation(space, (0..k).rev().collect()).expect("permutation"),
        ));
    }
    if let Some(t) = (0..k).rev().find(|&t| space.factor(t) >= 1) {
        let embed = Morphism::linear_embedding(space, t, space.factor(t) - 1).expect("embedding");
        let diag = Morphism::diagonal(space, 0).expect("diagonal");
        let drop = Morphism::drop_factor(diag.target(), 0).expect("factor");
        let composite = Morphism::chain(&[embed, diag, drop]).expect("composable");
        out.push(("composite".into(), composite));
    }
    if k == 0 {
        let p1 = Space::projective(1);
        out.push((
            "point-into-p1".into(),
            Morphism::linear_embedding(&p1, 0, 0).expect("embedding"),
        ));
    }
    out
}

fn small_morphisms() -> Vec<(String, Morphism)> {
    let p1 = Space::projective(1);
    vec![
        ("id-p1".into(), Morphism::identity(&p1)),
        ("proj-p1".into(), Morphism::structure_map(&p1)),
        (
            "point-into-p1".into(),
            Morphism::linear_embedding(&p1, 0, 0).expect("embedding"),
        ),
        ("diag-p1".into(), Morphism::diagonal(&p1, 0).expect("diagonal")),
    ]
}

fn is_embedding(f: &Morphism) -> bool {
    match f.shape() {
        Shape::LinearEmbed { .. } | Shape::Diagonal { .. } => true,
        Shape::Permutation { .. } | Shape::Projection { .. } => false,
        Shape::Composite(parts) => {
            parts.iter().all(|p| is_embedding(p) || p.is_identity())
                && parts.iter().any(is_embedding)
                && !parts.iter().any(|p| matches!(p.shape(), Shape::Projection { .. }))
        }
    }
}

fn unit_degrees(space: &Space, slots: &[usize]) -> Vec<i64> {
    (0..space.num_factors())
        .map(|t| i64::from(slots.contains(&t)))
        .collect()
}

/// `P^n` over a base, realized as the last factor of the space; the point is
/// treated as `P^0` over itself.
struct Bundle {
    base: Space,
    n: u32,
    total: Space,
    p: Morphism,
}

fn bundle(space: &Space) -> Bundle {
    let total = if space.is_point() {
        Space::projective(0)
    } else {
        space.clone()
    };
    let last = total.num_factors() - 1;
    let p = Morphism::drop_factor(&total, last).expect("factor");
    Bundle {
        base: p.target().clone(),
        n: total.factor(last),
        total,
        p,
    }
}

/// `a_ij` with the boundary convention `a_0n = a_n0 = 1`, other boundary
/// entries zero.
fn decomposition_coefficient(c: &RingMatrix, n: u32, i: u32, j: u32, one: &RingElem) -> RingElem {
    if i == 0 || j == 0 {
        if (i == 0 && j == n) || (j == 0 && i == n) {
            one.clone()
        } else {
            RingElem::zero(one.ring())
        }
    } else {
        c.get(i as usize, j as usize).clone()
    }
}

pub(crate) fn fgl_axioms(theory: &Theory) -> CheckResult {
    let law = theory.law();
    let ring = theory.ring();
    let n = theory.truncation();
    let var = |i| MultiSeries::variable(ring, 3, n, i);
    let (x, y, z) = (var(0), var(1), var(2));
    let zero = MultiSeries::zero(ring, 3, n);
    expect("F(x,0) = x", &[], &law.eval(&x, &zero), &x)?;
    expect("F(0,x) = x", &[], &law.eval(&zero, &x), &x)?;
    expect("F(x,y) = F(y,x)", &[], &law.eval(&x, &y), &law.eval(&y, &x))?;
    expect(
        "F(F(x,y),z) = F(x,F(y,z))",
        &[],
        &law.eval(&law.eval(&x, &y), &z),
        &law.eval(&x, &law.eval(&y, &z)),
    )?;
    for (&(i, j), a) in law.coefficients() {
        let b = law.coefficient(j, i);
        expect("a_ij = a_ji", &[("i", &i), ("j", &j)], a, &b)?;
        let degree = 1 - i64::from(i) - i64::from(j);
        if a.degrees().iter().any(|&d| d != degree) {
            fail(
                "deg a_ij = 1 - i - j",
                &[("i", &i), ("j", &j), ("a_ij", a)],
                "inhomogeneous coefficient",
            )?;
        }
    }
    let s = Series::variable(ring, n);
    let iota = law.inverse();
    let cancel = law.eval(&s, &iota);
    expect("F(x, i(x)) = 0", &[], &cancel, &Series::zero(ring, n))?;
    for m in -2i64..=2 {
        for k in -2i64..=2 {
            let lhs = law.m_series(m + k);
            let rhs = law.eval(&law.m_series(m), &law.m_series(k));
            expect("[m+k](x) = F([m](x), [k](x))", &[("m", &m), ("k", &k)], &lhs, &rhs)?;
        }
    }
    let log = law.log()?;
    let exp = law.exp()?;
    let xq = Series::variable(log.ring(), n);
    expect("log(exp(x)) = x", &[], &log.compose(&exp)?, &xq)?;
    expect("exp(log(x)) = x", &[], &exp.compose(&log)?, &xq)?;
    Ok(())
}

pub(crate) fn orientation(p: &mut Probe) -> CheckResult {
    let t = p.theory;
    let x = p.space;
    let ring = t.ring();
    for f in 0..x.num_factors() {
        let e = t.euler(x, &unit_degrees(x, &[f]))?;
        let z = CohClass::zeta(x, ring, f)?;
        expect("e(O(1)) on a factor = its generator", &[("factor", &(f + 1))], &e, &z)?;
        let zero_degrees = vec![0; x.num_factors()];
        let e0 = t.euler(x, &zero_degrees)?;
        expect("e(O) = 0", &[], &e0, &CohClass::zero(x, ring))?;
        for d in -2i64..=2 {
            for d2 in -2i64..=2 {
                let mut a = zero_degrees.clone();
                a[f] = d;
                let mut b = zero_degrees.clone();
                b[f] = d2;
                let mut ab = zero_degrees.clone();
                ab[f] = d + d2;
                let lhs = t.euler(x, &ab)?;
                let rhs = fgl_eval(t.law(), &t.euler(x, &a)?, &t.euler(x, &b)?)?;
                expect(
                    "e(O(d+d')) = F(e(O(d)), e(O(d')))",
                    &[("d", &d), ("d'", &d2)],
                    &lhs,
                    &rhs,
                )?;
            }
        }
    }
    let p1 = Space::projective(1);
    let gamma = t.euler(&p1, &[1])?;
    expect(
        "restriction of the Chern element to P0 is 0",
        &[],
        &gamma.coeff(&[0]),
        &RingElem::zero(ring),
    )?;
    let basis = RingMatrix::from_fn(ring, 2, 2, |i, j| match i {
        0 => RingElem::from_int(ring, (j == 0) as i64),
        _ => gamma.coeff(&[j as u32]),
    });
    if basis.inverse().is_err() {
        fail(
            "{1, e(O(1))} is a basis of A(P1)",
            &[("e(O(1))", &gamma)],
            "coordinate matrix is not invertible",
        )?;
    }
    Ok(())
}

pub(crate) fn pbt_bijectivity(p: &mut Probe) -> CheckResult {
    let ring = p.theory.ring().clone();
    let totals: Vec<(Space, usize)> = if p.space.is_point() {
        vec![(Space::projective(0), 0)]
    } else {
        (0..p.space.num_factors()).map(|t| (p.space.clone(), t)).collect()
    };
    for (total, t) in totals {
        let proj = Morphism::drop_factor(&total, t)?;
        let matrix = pbt_matrix(&proj, &ring)?;
        if matrix.inverse().is_err() {
            fail(
                "⊕psi_i is bijective",
                &[("projection", &proj)],
                "coordinate matrix is singular",
            )?;
        }
        for a in p.hom_basis(&total) {
            let coords = pbt_coordinates(&proj, &a)?;
            let back = pbt_section(&coords, &proj, &ring)?;
            expect("section(⊕psi(a)) = a", &[("projection", &proj), ("a", &a)], &back, &a)?;
        }
        let n = total.factor(t);
        for i in 0..=n {
            for x in p.hom_basis(proj.target()) {
                let xs: Vec<HomClass> = (0..=n)
                    .map(|j| {
                        if j == i {
                            x.clone()
                        } else {
                            HomClass::zero(proj.target(), &ring)
                        }
                    })
                    .collect();
                let phi = pbt_section(&xs, &proj, &ring)?;
                let coords = pbt_coordinates(&proj, &phi)?;
                for (j, (c, want)) in coords.iter().zip(&xs).enumerate() {
                    expect("psi_j(section(x)) = x_j", &[("i", &i), ("j", &j), ("x", &x)], c, want)?;
                }
            }
        }
    }
    Ok(())
}

pub(crate) fn normalizations(p: &mut Probe) -> CheckResult {
    let t = p.theory;
    let x = p.space;
    let ring = t.ring();
    for (name, f) in test_morphisms(x).into_iter().filter(|(_, f)| is_embedding(f)) {
        let i1 = t.pushforward(&f, &CohClass::one(f.source(), ring))?;
        for beta in p.coh_basis(f.target()) {
            let lhs = t.lower_diamond(&f, &beta)?;
            let rhs = i1.cup(&beta)?;
            expect("i_! i^* = i_!(1) ∪", &[("i", &name), ("beta", &beta)], &lhs, &rhs)?;
        }
        for a in p.hom_basis(f.target()) {
            let lhs = upper_diamond(t, &f, &a)?;
            let rhs = cap(&i1, &a)?;
            expect("i_* i^! = i_!(1) ∩", &[("i", &name), ("a", &a)], &lhs, &rhs)?;
        }
        match f.shape() {
            Shape::LinearEmbed { factor, source_dim } if *source_dim + 1 == f.target().factor(*factor) => {
                let divisor = t.euler(f.target(), &unit_degrees(f.target(), &[*factor]))?;
                expect("i_!(1) = e(O(D)) for a hyperplane", &[("i", &name)], &i1, &divisor)?;
            }
            Shape::Diagonal { factor } if f.source().factor(*factor) == 1 => {
                let divisor = t.euler(f.target(), &unit_degrees(f.target(), &[*factor, factor + 1]))?;
                expect("Δ_!(1) = e(O(1,1)) on P1 x P1", &[("i", &name)], &i1, &divisor)?;
            }
            _ => {}
        }
    }
    for f in 0..x.num_factors() {
        let n = x.factor(f);
        for j in 0..=n {
            let i = Morphism::linear_embedding(x, f, n - j)?;
            let lhs = t.pushforward(&i, &CohClass::one(i.source(), ring))?;
            let rhs = CohClass::zeta(x, ring, f)?.pow(j);
            expect("z^j = i^j_!(1)", &[("factor", &(f + 1)), ("j", &j)], &lhs, &rhs)?;
        }
    }
    Ok(())
}

pub(crate) fn cohomological_projection(p: &mut Probe) -> CheckResult {
    let t = p.theory;
    for (name, f) in test_morphisms(p.space) {
        for _ in 0..p.samples {
            let alpha = p.coh(f.target());
            let alpha2 = p.coh(f.target());
            let beta = p.coh(f.source());
            let pulled = f.pullback(&alpha)?;
            let inputs: [(&str, &dyn Display); 3] = [("f", &name), ("alpha", &alpha), ("beta", &beta)];
            let lhs = t.pushforward(&f, &pulled.cup(&beta)?)?;
            let rhs = alpha.cup(&t.pushforward(&f, &beta)?)?;
            expect("f_!(f^*(alpha) ∪ beta) = alpha ∪ f_!(beta)", &inputs, &lhs, &rhs)?;
            let lhs = t.pushforward(&f, &beta.cup(&pulled)?)?;
            let rhs = t.pushforward(&f, &beta)?.cup(&alpha)?;
            expect("f_!(beta ∪ f^*(alpha)) = f_!(beta) ∪ alpha", &inputs, &lhs, &rhs)?;
            let lhs = f.pullback(&alpha.cup(&alpha2)?)?;
            let rhs = pulled.cup(&f.pullback(&alpha2)?)?;
            expect("f^*(alpha ∪ alpha') = f^*(alpha) ∪ f^*(alpha')", &inputs, &lhs, &rhs)?;
            let to_pt = Morphism::structure_map(f.target());
            let lhs = t.pushforward(&to_pt, &t.pushforward(&f, &beta)?)?;
            let rhs = t.pushforward(&Morphism::structure_map(f.source()), &beta)?;
            expect("(p ∘ f)_! = p_! f_!", &inputs, &lhs, &rhs)?;
        }
    }
    let x = p.space;
    let one = CohClass::one(x, t.ring());
    let lhs = t.pushforward(&Morphism::full_diagonal(x), &one)?;
    let rhs = t.kernel_class(x)?;
    expect("Δ_!(1) = shuffle^*(K x ... x K)", &[], &lhs, &rhs)?;
    Ok(())
}

pub(crate) fn first_projection(p: &mut Probe) -> CheckResult {
    let t = p.theory;
    for (name, f) in test_morphisms(p.space) {
        for _ in 0..p.samples {
            let alpha = p.coh(f.source());
            let a = p.hom(f.target());
            let lhs = pushforward_hom(&f, &cap(&alpha, &shriek_hom(t, &f, &a)?)?)?;
            let rhs = cap(&t.pushforward(&f, &alpha)?, &a)?;
            expect(
                "f_*(alpha ∩ f^!(a)) = f_!(alpha) ∩ a",
                &[("f", &name), ("alpha", &alpha), ("a", &a)],
                &lhs,
                &rhs,
            )?;
        }
    }
    Ok(())
}

pub(crate) fn second_projection(p: &mut Probe) -> CheckResult {
    let t = p.theory;
    for extra in [Space::point(), Space::projective(1)] {
        for (name, f) in test_morphisms(p.space) {
            let lifted = f.identity_times(&extra);
            for _ in 0..p.samples {
                let alpha = p.coh(lifted.source());
                let a = p.hom(f.target());
                let lhs = slant_l(&alpha, &shriek_hom(t, &f, &a)?)?;
                let rhs = slant_l(&t.pushforward(&lifted, &alpha)?, &a)?;
                expect(
                    "alpha / f^!(a) = (id x f)_!(alpha) / a",
                    &[("T", &extra), ("f", &name), ("alpha", &alpha), ("a", &a)],
                    &lhs,
                    &rhs,
                )?;
            }
        }
    }
    Ok(())
}

pub(crate) fn transposition(p: &mut Probe) -> CheckResult {
    let t = p.theory;
    let x = p.space.clone();
    let xx = x.product(&x);
    let diag = Morphism::full_diagonal(&x);
    let tau = Morphism::transposition(&x);
    for &n in x.factors() {
        let c = t.diag_coefficients(n)?;
        if !c.is_symmetric() {
            fail(
                "C = C^T",
                &[("n", &n), ("C", &MatrixDisplay(&c))],
                "kernel matrix is not symmetric",
            )?;
        }
    }
    let k = t.kernel_class(&x)?;
    expect("τ^*(Δ_!(1)) = Δ_!(1)", &[], &tau.pullback(&k)?, &k)?;
    let k_half = x.num_factors();
    let p1 = Morphism::projection(&xx, (0..2 * k_half).map(|i| i < k_half).collect())?;
    let p2 = Morphism::projection(&xx, (0..2 * k_half).map(|i| i >= k_half).collect())?;
    for alpha in p.coh_basis(&x) {
        let lhs = p1.pullback(&alpha)?.cup(&k)?;
        let rhs = p2.pullback(&alpha)?.cup(&k)?;
        expect(
            "p_1^*(alpha) ∪ Δ_!(1) = p_2^*(alpha) ∪ Δ_!(1)",
            &[("alpha", &alpha)],
            &lhs,
            &rhs,
        )?;
        let d_alpha = t.pushforward(&diag, &alpha)?;
        for _ in 0..p.samples {
            let beta = p.coh(&xx);
            let lhs = d_alpha.cup(&beta)?;
            let rhs = d_alpha.cup(&tau.pullback(&beta)?)?;
            expect(
                "Δ_!(alpha) ∪ beta = Δ_!(alpha) ∪ τ^*(beta)",
                &[("alpha", &alpha), ("beta", &beta)],
                &lhs,
                &rhs,
            )?;
            let a = p.hom(&xx);
            let lhs = cap(&d_alpha, &a)?;
            let rhs = cap(&d_alpha, &pushforward_hom(&tau, &a)?)?;
            expect(
                "Δ_!(alpha) ∩ a = Δ_!(alpha) ∩ τ_*(a)",
                &[("alpha", &alpha), ("a", &a)],
                &lhs,
                &rhs,
            )?;
        }
    }
    Ok(())
}

pub(crate) fn diagonal_slant(p: &mut Probe) -> CheckResult {
    let t = p.theory;
    let x = p.space;
    let ring = t.ring();
    let one = CohClass::one(x, ring);
    let k = t.pushforward(&Morphism::full_diagonal(x), &one)?;
    let fc = fundamental_class(t, x)?;
    expect(
        "Δ_!(1) / [X] = 1",
        &[("Δ_!(1)", &k), ("[X]", &fc)],
        &slant_l(&k, &fc)?,
        &one,
    )?;
    let xx = x.product(x);
    let half = x.num_factors();
    let p1 = Morphism::projection(&xx, (0..2 * half).map(|i| i < half).collect())?;
    let p2 = Morphism::projection(&xx, (0..2 * half).map(|i| i >= half).collect())?;
    for alpha in p.coh_basis(x) {
        let lhs = t.pushforward(&p1, &k.cup(&p2.pullback(&alpha)?)?)?;
        expect(
            "p_1!(Δ_!(1) ∪ p_2^*(alpha)) = alpha",
            &[("alpha", &alpha)],
            &lhs,
            &alpha,
        )?;
    }
    Ok(())
}

pub(crate) fn poincare_roundtrip(p: &mut Probe) -> CheckResult {
    let t = p.theory;
    let x = p.space;
    let k = t.kernel_class(x)?;
    let fc = fundamental_class(t, x)?;
    for alpha in p.coh_basis(x) {
        let there = cap(&alpha, &fc)?;
        let back = slant_l(&k, &there)?;
        expect(
            "D_•(D•(alpha)) = alpha",
            &[("alpha", &alpha), ("D•(alpha)", &there)],
            &back,
            &alpha,
        )?;
    }
    for a in p.hom_basis(x) {
        let there = slant_l(&k, &a)?;
        let back = cap(&there, &fc)?;
        expect("D•(D_•(a)) = a", &[("a", &a), ("D_•(a)", &there)], &back, &a)?;
    }
    Ok(())
}

pub(crate) fn duality_transport(p: &mut Probe) -> CheckResult {
    let t = p.theory;
    for (name, f) in test_morphisms(p.space) {
        let k_target = t.kernel_class(f.target())?;
        let fc_source = fundamental_class(t, f.source())?;
        for beta in p.coh_basis(f.source()) {
            let lhs = t.pushforward(&f, &beta)?;
            let rhs = slant_l(&k_target, &pushforward_hom(&f, &cap(&beta, &fc_source)?)?)?;
            expect("f_! = D_•^Y f_* D•_X", &[("f", &name), ("beta", &beta)], &lhs, &rhs)?;
        }
        for a in p.hom_basis(f.target()) {
            let lhs = shriek_hom(t, &f, &a)?;
            let rhs = cap(&f.pullback(&slant_l(&k_target, &a)?)?, &fc_source)?;
            expect("f^! = D•_X f^* D_•^Y", &[("f", &name), ("a", &a)], &lhs, &rhs)?;
        }
    }
    Ok(())
}

fn lemma_diag_range(t: &Theory) -> std::ops::RangeInclusive<u32> {
    1..=3u32.min(t.truncation().saturating_sub(1))
}

pub(crate) fn lemma_diag(p: &mut Probe) -> CheckResult {
    let t = p.theory;
    let x = p.space;
    let projections: Vec<Morphism> = (0..=*lemma_diag_range(t).end())
        .map(|k| {
            let total = x.product(&Space::projective(k));
            Morphism::drop_factor(&total, x.num_factors())
        })
        .collect::<Result<_, _>>()?;
    for n in lemma_diag_range(t) {
        let c = t.diag_coefficients(n)?;
        let a_n = |j: u32| c.get(n as usize, j as usize).clone();
        let mut recursion = RingElem::zero(t.ring());
        for j in 1..=n {
            recursion = &recursion - &(&a_n(j) * t.pn_class(n - j)?);
        }
        expect(
            "g_n = -sum_j a_nj g_{n-j}",
            &[("n", &n), ("a", &MatrixDisplay(&c))],
            t.pn_class(n)?,
            &recursion,
        )?;
        for a in p.hom_basis(x) {
            let lhs = upper_diamond(t, &projections[n as usize], &a)?;
            let mut rhs = HomClass::zero(x, t.ring());
            for j in 1..=n {
                let term = upper_diamond(t, &projections[(n - j) as usize], &a)?.scale(&a_n(j))?;
                rhs = rhs.sub(&term)?;
            }
            expect("p_n^◇ = -sum_j a_nj p_{n-j}^◇", &[("n", &n), ("a", &a)], &lhs, &rhs)?;
        }
        for beta in p.coh_basis(x) {
            let lhs = t.lower_diamond(&projections[n as usize], &beta)?;
            let mut rhs = CohClass::zero(x, t.ring());
            for j in 1..=n {
                let term = t.lower_diamond(&projections[(n - j) as usize], &beta)?.scale(&a_n(j))?;
                rhs = rhs.sub(&term)?;
            }
            expect(
                "p^n_◇ = -sum_j a_nj p^{n-j}_◇",
                &[("n", &n), ("beta", &beta)],
                &lhs,
                &rhs,
            )?;
        }
    }
    Ok(())
}

pub(crate) fn identity_decomposition(p: &mut Probe) -> CheckResult {
    let t = p.theory;
    let b = bundle(p.space);
    let n = b.n;
    let last = b.total.num_factors() - 1;
    let c = t.diag_coefficients(n)?;
    let one = RingElem::one(t.ring());
    let embeddings: Vec<Morphism> = (0..=n)
        .map(|i| Morphism::linear_embedding(&b.total, last, n - i))
        .collect::<Result<_, _>>()?;
    let projections: Vec<Morphism> = (0..=n)
        .map(|j| Morphism::drop_factor(&b.total.product(&Space::projective(n - j)), last + 1))
        .collect::<Result<_, _>>()?;
    for a in p.hom_basis(&b.total) {
        let mut sum = HomClass::zero(&b.total, t.ring());
        for i in 0..=n {
            let s = upper_diamond(t, &embeddings[i as usize], &a)?;
            for j in 0..=n {
                let coeff = decomposition_coefficient(&c, n, i, j, &one);
                if coeff.is_zero() {
                    continue;
                }
                let term = upper_diamond(t, &projections[j as usize], &s)?.scale(&coeff)?;
                sum = sum.add(&term)?;
            }
        }
        expect(
            "id = sum a_ij p_{1,n-j}^◇ s_i^◇",
            &[("a", &a), ("a_ij", &MatrixDisplay(&c))],
            &sum,
            &a,
        )?;
    }
    Ok(())
}

fn upper(t: &Theory, chain: &[&Morphism], a: &HomClass) -> Result<HomClass, Error> {
    chain.iter().try_fold(a.clone(), |acc, f| upper_diamond(t, f, &acc))
}

pub(crate) fn lemma_diamond(p: &mut Probe) -> CheckResult {
    let t = p.theory;
    let b = bundle(p.space);
    let n = b.n;
    let last = b.total.num_factors() - 1;
    let z = &b.total;
    for i in 0..=n {
        for j in 0..=n {
            let y = z.product(&Space::projective(n - j));
            let f = Morphism::drop_factor(&y, last + 1)?;
            let g = Morphism::linear_embedding(z, last, n - i)?;
            let top = Morphism::linear_embedding(&y, last, n - i)?;
            let big_f = Morphism::drop_factor(top.source(), last + 1)?;
            let h = top.then(&f)?;
            let h2 = big_f.then(&g)?;
            let label = format!("i = {i}, j = {j}");
            for a in p.hom_basis(z) {
                let hd = upper_diamond(t, &h, &a)?;
                let inputs: [(&str, &dyn Display); 2] = [("square", &label), ("a", &a)];
                expect("h^◇ = (g F)^◇", &inputs, &hd, &upper_diamond(t, &h2, &a)?)?;
                expect("h^◇ = g^◇ f^◇", &inputs, &hd, &upper(t, &[&f, &g], &a)?)?;
                expect("h^◇ = f^◇ g^◇", &inputs, &hd, &upper(t, &[&g, &f], &a)?)?;
            }
            for a in p.hom_basis(g.source()) {
                let lhs = pushforward_hom(&g, &upper_diamond(t, &big_f, &a)?)?;
                let rhs = upper_diamond(t, &f, &pushforward_hom(&g, &a)?)?;
                expect("g_* F^◇ = f^◇ g_*", &[("square", &label), ("a", &a)], &lhs, &rhs)?;
            }
        }
    }
    for j in 0..=n {
        let w = z.product(&Space::projective(n - j));
        let big_f = Morphism::drop_factor(&w, last + 1)?;
        let top = Morphism::drop_factor(&w, last)?;
        let f = Morphism::drop_factor(top.target(), last)?;
        let g = b.p.clone();
        let h = big_f.then(&g)?;
        let label = format!("projections, j = {j}");
        for a in p.hom_basis(&b.base) {
            let hd = upper_diamond(t, &h, &a)?;
            let inputs: [(&str, &dyn Display); 2] = [("square", &label), ("a", &a)];
            expect("h^◇ = (f top)^◇", &inputs, &hd, &upper_diamond(t, &top.then(&f)?, &a)?)?;
            expect("h^◇ = g^◇ f^◇", &inputs, &hd, &upper(t, &[&f, &g], &a)?)?;
            expect("h^◇ = f^◇ g^◇", &inputs, &hd, &upper(t, &[&g, &f], &a)?)?;
        }
        for a in p.hom_basis(z) {
            let lhs = pushforward_hom(&g, &upper_diamond(t, &big_f, &a)?)?;
            let rhs = upper_diamond(t, &f, &pushforward_hom(&g, &a)?)?;
            expect("g_* F^◇ = f^◇ g_*", &[("square", &label), ("a", &a)], &lhs, &rhs)?;
        }
    }
    for i in 0..=n {
        let s = Morphism::linear_embedding(z, last, n - i)?;
        for a in p.hom_basis(z) {
            let lhs = pushforward_hom(&b.p, &upper_diamond(t, &s, &a)?)?;
            let rhs = psi(i, &b.p, &a)?;
            expect("p_* s_i^◇ = psi_i", &[("i", &i), ("a", &a)], &lhs, &rhs)?;
        }
    }
    Ok(())
}

pub(crate) fn up_then_down(p: &mut Probe) -> CheckResult {
    let t = p.theory;
    let x = p.space;
    for k in 0..=3u32.min(t.truncation().saturating_sub(1)) {
        let total = x.product(&Space::projective(k));
        let proj = Morphism::drop_factor(&total, x.num_factors())?;
        let g = t.pushforward(&proj, &CohClass::one(&total, t.ring()))?;
        for a in p.hom_basis(x) {
            let lhs = pushforward_hom(&proj, &shriek_hom(t, &proj, &a)?)?;
            expect("p_*(p^!(a)) = p_!(1) ∩ a", &[("n", &k), ("a", &a)], &lhs, &cap(&g, &a)?)?;
        }
    }
    Ok(())
}

pub(crate) fn associativity(p: &mut Probe) -> CheckResult {
    let t = p.theory;
    let ring = t.ring().clone();
    let p1 = Space::projective(1);
    for (x, y) in [(p.space.clone(), p1.clone()), (p1.clone(), p.space.clone())] {
        let xy = x.product(&y);
        let kx = x.num_factors();
        let p_x = Morphism::projection(&xy, (0..xy.num_factors()).map(|i| i < kx).collect())?;
        let p_y = Morphism::projection(&xy, (0..xy.num_factors()).map(|i| i >= kx).collect())?;
        for _ in 0..p.samples {
            let alpha = p.coh(&xy);
            let beta = p.coh(&y);
            let gamma = p.coh(&x);
            let a = p.hom(&y);
            let b = p.hom(&x);
            let inputs: [(&str, &dyn Display); 5] = [
                ("alpha", &alpha),
                ("beta", &beta),
                ("gamma", &gamma),
                ("a", &a),
                ("b", &b),
            ];
            let lhs = slant_l(&alpha, &cap(&beta, &a)?)?;
            let rhs = slant_l(&alpha.cup(&p_y.pullback(&beta)?)?, &a)?;
            expect("alpha/(beta ∩ a) = (alpha ∪ p_Y^*(beta))/a", &inputs, &lhs, &rhs)?;
            let lhs = gamma.cup(&slant_l(&alpha, &a)?)?;
            let rhs = slant_l(&p_x.pullback(&gamma)?.cup(&alpha)?, &a)?;
            expect("gamma ∪ (alpha/a) = (p_X^*(gamma) ∪ alpha)/a", &inputs, &lhs, &rhs)?;
            let lhs = cap(&slant_l(&alpha, &a)?, &b)?;
            let rhs = pushforward_hom(&p_x, &cap(&alpha, &cross_hom(&b, &a)?)?)?;
            expect("(alpha/a) ∩ b = p^X_*(alpha ∩ (b x a))", &inputs, &lhs, &rhs)?;
        }
    }
    let gs = small_morphisms();
    for (fname, f) in test_morphisms(p.space) {
        for (gname, g) in &gs {
            let fg = Morphism::product(&f, g);
            let alpha = p.coh(fg.target());
            let a = p.hom(g.source());
            let lhs = slant_l(&fg.pullback(&alpha)?, &a)?;
            let rhs = f.pullback(&slant_l(&alpha, &pushforward_hom(g, &a)?)?)?;
            expect(
                "(f x g)^*(alpha)/a = f^*(alpha/g_*(a))",
                &[("f", &fname), ("g", gname), ("alpha", &alpha), ("a", &a)],
                &lhs,
                &rhs,
            )?;
        }
        for _ in 0..p.samples {
            let alpha = p.coh(f.target());
            let a = p.hom(f.source());
            let lhs = cap(&alpha, &pushforward_hom(&f, &a)?)?;
            let rhs = pushforward_hom(&f, &cap(&f.pullback(&alpha)?, &a)?)?;
            expect(
                "alpha ∩ f_*(a) = f_*(f^*(alpha) ∩ a)",
                &[("f", &fname), ("alpha", &alpha), ("a", &a)],
                &lhs,
                &rhs,
            )?;
        }
    }
    let x = p.space;
    let diag = Morphism::full_diagonal(x);
    let pt_class = fundamental_class(t, &Space::point())?;
    for _ in 0..p.samples {
        let alpha = p.coh(x);
        let beta = p.coh(x);
        let a = p.hom(x);
        let inputs: [(&str, &dyn Display); 3] = [("alpha", &alpha), ("beta", &beta), ("a", &a)];
        let lhs = slant_r(&alpha, &pushforward_hom(&diag, &a)?)?;
        expect("alpha \\ Δ_*(a) = alpha ∩ a", &inputs, &lhs, &cap(&alpha, &a)?)?;
        expect("1 ∩ a = a", &inputs, &cap(&CohClass::one(x, &ring), &a)?, &a)?;
        let lhs = cap(&alpha.cup(&beta)?, &a)?;
        let rhs = cap(&alpha, &cap(&beta, &a)?)?;
        expect("(alpha ∪ beta) ∩ a = alpha ∩ (beta ∩ a)", &inputs, &lhs, &rhs)?;
        expect(
            "alpha ∪ beta = beta ∪ alpha",
            &inputs,
            &alpha.cup(&beta)?,
            &beta.cup(&alpha)?,
        )?;
        expect("alpha / [pt] = alpha", &inputs, &slant_l(&alpha, &pt_class)?, &alpha)?;
        expect("[pt] x a = a", &inputs, &cross_hom(&pt_class, &a)?, &a)?;
    }
    Ok(())
}
