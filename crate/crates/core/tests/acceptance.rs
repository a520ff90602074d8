//! Acceptance criteria, run as a plain binary so that every criterion prints
//! its own pass/fail line under `cargo test`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use orient_duality::{
    check_ids, duality_to_hom, pair, reports_to_json, run_suite, CheckConfig, CheckReport, CohClass, Mutation,
    RingElem, RingKind, Space, Theory,
};

const GRID: [&[u32]; 6] = [&[1], &[2], &[3], &[1, 1], &[1, 2], &[2, 2]];

fn grid() -> Vec<Space> {
    GRID.iter().map(|f| Space::new(f.to_vec())).collect()
}

fn config(checks: &[&str], samples: usize) -> CheckConfig {
    let mut cfg = CheckConfig::new(RingKind::ALL.to_vec(), grid(), 10);
    cfg.seed = 20240229;
    cfg.samples = samples;
    cfg.checks = checks.iter().map(|c| c.to_string()).collect();
    cfg
}

fn failures(reports: &[CheckReport]) -> Vec<String> {
    reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| {
            let w = r.witness.as_ref().expect("failures carry witnesses");
            format!(
                "{} {} {}: {} | {} != {}",
                r.check, r.theory, r.space, w.identity, w.lhs, w.rhs
            )
        })
        .collect()
}

fn elem(theory: &Theory, text: &str) -> RingElem {
    RingElem::parse(theory.ring(), text).expect("valid literal")
}

/// Kernel on P1 against the Euler class of the diagonal divisor.
fn kernel_divisor_mismatch(theory: &Theory) -> Result<Option<String>, String> {
    let kernel = theory.kernel(1).map_err(|e| e.to_string())?;
    let divisor = theory
        .euler(&Space::new(vec![1, 1]), &[1, 1])
        .map_err(|e| e.to_string())?;
    Ok((kernel.class() != &divisor)
        .then(|| format!("{}: K = {} but e(O(1,1)) = {}", theory.kind(), kernel.class(), divisor)))
}

fn criterion_1() -> Result<(), String> {
    for kind in RingKind::ALL {
        let theory = Theory::new(kind, 10).map_err(|e| e.to_string())?;
        if let Some(m) = kernel_divisor_mismatch(&theory)? {
            return Err(m);
        }
    }
    Ok(())
}

fn criterion_2() -> Result<(), String> {
    let n_max = 9;
    for kind in RingKind::ALL {
        let theory = Theory::new(kind, 10).map_err(|e| e.to_string())?;
        let top = if kind == RingKind::Multiplicative { 6 } else { n_max };
        for n in 0..=top {
            let expected = match (kind, n) {
                (_, 0) => elem(&theory, "1"),
                (RingKind::Additive, _) => elem(&theory, "0"),
                (RingKind::Multiplicative, _) => elem(&theory, &format!("beta^{n}")),
                (RingKind::UniversalRational, _) => elem(&theory, &format!("{}*b{n}", n + 1)),
            };
            let g = theory.pn_class(n).map_err(|e| e.to_string())?;
            if g != &expected {
                return Err(format!("{kind}: g_{n} = {g}, expected {expected}"));
            }
            if n == 0 {
                continue;
            }
            let a = theory.diag_coefficients(n).map_err(|e| e.to_string())?;
            let mut recursion = RingElem::zero(theory.ring());
            for j in 1..=n {
                let g_rest = theory.pn_class(n - j).map_err(|e| e.to_string())?;
                recursion = &recursion - &(a.get(n as usize, j as usize) * g_rest);
            }
            if recursion != expected {
                return Err(format!(
                    "{kind}: recursion gives g_{n} = {recursion}, expected {expected}"
                ));
            }
        }
    }
    Ok(())
}

fn run_checks(
    checks: &[&str],
    samples: usize,
    mutation: Option<Mutation>,
    spaces: Option<Vec<Space>>,
) -> Result<(), String> {
    let mut cfg = config(checks, samples);
    cfg.mutation = mutation;
    if let Some(s) = spaces {
        cfg.spaces = s;
    }
    let reports = run_suite(&cfg).map_err(|e| e.to_string())?;
    let expected = cfg.theories.len() * cfg.spaces.len() * checks.len();
    if reports.len() != expected {
        return Err(format!("expected {expected} reports, got {}", reports.len()));
    }
    let bad = failures(&reports);
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad.join("\n      "))
    }
}

const OPERATOR_CHECKS: [&str; 8] = [
    "V4-normalizations",
    "V8-transposition",
    "V9-diagonal-slant-fundamental",
    "V11-duality-transport",
    "V12-lemma-diag",
    "V13-identity-decomposition",
    "V14-lemma-diamond",
    "V15-up-then-down",
];

fn criterion_3() -> Result<(), String> {
    run_checks(&["V10-poincare-roundtrip"], 1, None, None)
}

fn criterion_4() -> Result<(), String> {
    run_checks(
        &["V6-first-projection-formula", "V7-second-projection-formula"],
        20,
        None,
        None,
    )
}

fn criterion_5() -> Result<(), String> {
    run_checks(&OPERATOR_CHECKS, 4, None, None)
}

fn criterion_6() -> Result<(), String> {
    let theory = Theory::new(RingKind::Additive, 10).map_err(|e| e.to_string())?;
    for n in 0..=3 {
        let space = Space::projective(n);
        for i in 0..=n {
            for j in 0..=n {
                let zi = CohClass::monomial(&space, vec![i], RingElem::one(theory.ring())).unwrap();
                let zj = CohClass::monomial(&space, vec![j], RingElem::one(theory.ring())).unwrap();
                let dj = duality_to_hom(&theory, &zj).map_err(|e| e.to_string())?;
                let value = pair(&zi, &dj).map_err(|e| e.to_string())?;
                let expected = RingElem::from_int(theory.ring(), i64::from(i + j == n));
                if value != expected {
                    return Err(format!("P{n}: <z^{i}, D(z^{j})> = {value}, expected {expected}"));
                }
            }
        }
    }
    Ok(())
}

fn mutated_suite(m: Mutation, checks: &[&str]) -> Result<bool, String> {
    let mut cfg = CheckConfig::new(vec![RingKind::Multiplicative], vec![Space::projective(2)], 10);
    cfg.samples = 2;
    cfg.checks = checks.iter().map(|c| c.to_string()).collect();
    cfg.mutation = Some(m);
    let reports = run_suite(&cfg).map_err(|e| e.to_string())?;
    Ok(reports.iter().any(|r| !r.passed() && r.witness.is_some()))
}

/// Every single sign flip, of a law coefficient or of a kernel entry, must
/// be caught by criterion 1, 3 or 5 restricted to the multiplicative theory
/// on P2. All three detectors run on every mutation.
fn criterion_7() -> Result<(), String> {
    let base = Theory::new(RingKind::Multiplicative, 10).map_err(|e| e.to_string())?;
    let n = 2;
    let c = base.diag_coefficients(n).map_err(|e| e.to_string())?;
    let mut mutations = Vec::new();
    for i in 0..=n {
        for j in 0..=n - i {
            if i > 0 && j > 0 && !base.law().coefficient(i, j).is_zero() {
                mutations.push(Mutation::FlipLawCoefficient { i, j });
            }
            if !c.get(i as usize, j as usize).is_zero() {
                mutations.push(Mutation::FlipKernelCoefficient { i, j });
            }
        }
    }
    if mutations.is_empty() {
        return Err("no nonzero coefficient to perturb".into());
    }
    for m in mutations {
        let mutated = base.with_mutation(m).map_err(|e| e.to_string())?;
        let by_1 = kernel_divisor_mismatch(&mutated)?.is_some();
        let by_3 = mutated_suite(m, &["V10-poincare-roundtrip"])?;
        let by_5 = mutated_suite(m, &OPERATOR_CHECKS)?;
        if !(by_1 || by_3 || by_5) {
            return Err(format!("mutation {m} went undetected"));
        }
    }
    Ok(())
}

fn criterion_8() -> Result<(), String> {
    let mut cfg = config(&[], 3);
    cfg.theories = vec![RingKind::Multiplicative, RingKind::UniversalRational];
    cfg.spaces = vec![Space::new(vec![1, 1]), Space::projective(2)];
    cfg.truncation = 6;
    assert_eq!(check_ids().len(), 16);
    let first = reports_to_json(&run_suite(&cfg).map_err(|e| e.to_string())?);
    let second = reports_to_json(&run_suite(&cfg).map_err(|e| e.to_string())?);
    if first != second {
        return Err("reports differ between identical runs".into());
    }
    Ok(())
}

type Criterion = (&'static str, fn() -> Result<(), String>, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("kernel oracle (divisor case)", criterion_1, Duration::from_secs(1)),
        (
            "closed-form g-values with Lemma-diag recursion",
            criterion_2,
            Duration::from_secs(5),
        ),
        ("Poincare duality roundtrips", criterion_3, Duration::from_secs(60)),
        ("both projection formulae", criterion_4, Duration::from_secs(60)),
        ("operator identities", criterion_5, Duration::from_secs(30)),
        ("classical Chow pairing", criterion_6, Duration::from_secs(1)),
        ("mutation sensitivity", criterion_7, Duration::from_secs(5)),
        ("determinism", criterion_8, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(()) if elapsed > *budget => Err(format!("took {elapsed:.2?}, budget {budget:.0?}")),
            other => other,
        };
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {name} ({elapsed:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({elapsed:.2?})\n      {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
