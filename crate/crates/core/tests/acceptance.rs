//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure or time overrun.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use splint_core::affine::{self, AffineWeight};
use splint_core::character::{self, FormalCharacter};
use splint_core::qseries::{self, AlternatingThetaOptions, ScalarSeries};
use splint_core::splint::{self, Embedding, Splint};
use splint_core::{Rational, RootSystem, Weight};

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn rs(name: &str) -> std::result::Result<RootSystem, String> {
    RootSystem::parse(name).map_err(err)
}

fn weyl_denominator_identity() -> Outcome {
    let mut times = Vec::new();
    for name in ["A1", "A2", "B2", "G2", "A3"] {
        let start = Instant::now();
        let g = rs(name)?;
        let product = character::weyl_denominator(&g);
        let mut alternating = FormalCharacter::new();
        for (w, sign) in g.weyl_orbit(g.rho()).map_err(err)? {
            alternating.add_term(&w - g.rho(), sign as i64);
        }
        ensure!(
            product == alternating,
            "{name}: product and alternating sum differ"
        );
        let elapsed = start.elapsed();
        ensure!(elapsed < Duration::from_secs(1), "{name} took {elapsed:?}");
        times.push(format!("{name} {:.1?}", elapsed));
    }
    Ok(times.join(", "))
}

fn freudenthal_vs_weyl() -> Outcome {
    let mut count = 0;
    for name in ["A1", "A2", "B2", "G2"] {
        let g = rs(name)?;
        for mu in affine::dominant_weights_up_to(&g, rat(12)) {
            let f = character::freudenthal_character(&g, &mu).map_err(err)?;
            let w = character::character_via_weyl(&g, &mu).map_err(err)?;
            ensure!(
                *f == w,
                "{name} {:?}: characters differ",
                g.dynkin_labels(&mu)
            );
            count += 1;
        }
    }
    Ok(format!("{count} modules"))
}

fn dims(sub: &RootSystem, table: &splint::BranchingTable) -> std::result::Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for (nu, c) in table.iter() {
        for _ in 0..*c {
            out.push(character::weyl_dimension(sub, nu).map_err(err)?);
        }
    }
    out.sort_unstable();
    Ok(out)
}

fn splint_branching() -> Outcome {
    let mut report = Vec::new();
    for (name, alg) in [("A2A2", "G2"), ("A1A1", "B2")] {
        let s = &splint::find_splint(name, Some(alg)).map_err(err)?.splint;
        let g = s.ambient();
        let sub = s.subalgebra().map_err(err)?;
        let probes = splint::label_box(g, 3);
        for mu in &probes {
            let a = splint::branch_via_splint(s, mu).map_err(err)?;
            let b = splint::branch_direct(g, &sub, mu).map_err(err)?;
            ensure!(a == b, "{alg} {:?}: routes differ", g.dynkin_labels(mu));
        }
        report.push(format!("{alg} {} weights", probes.len()));
        if alg == "G2" {
            ensure!(probes.len() == 16, "expected 16 G2 probes");
            let seven = splint::branch_via_splint(s, &g.weight_from_labels(&[1, 0]).map_err(err)?)
                .map_err(err)?;
            ensure!(
                dims(&sub, &seven)? == vec![1, 3, 3],
                "7 does not split as 3+3+1"
            );
            let adj = splint::branch_via_splint(s, &g.weight_from_labels(&[0, 1]).map_err(err)?)
                .map_err(err)?;
            ensure!(
                dims(&sub, &adj)? == vec![3, 3, 8],
                "14 does not split as 8+3+3"
            );
        }
    }
    Ok(report.join(", "))
}

/// The splint with its highest stem image replaced by a simple root.
fn corrupted(s: &Splint) -> std::result::Result<Splint, String> {
    let mut images = s.phi2().images().to_vec();
    let last = images.len() - 1;
    images[last] = s.ambient().simple_roots()[0].clone();
    let phi2 = Embedding::new(s.stem().clone(), s.ambient().clone(), images).map_err(err)?;
    Splint::new(
        format!("{}-corrupt", s.name()),
        s.phi1().clone(),
        phi2,
        s.correspondence().to_vec(),
    )
    .map_err(err)
}

fn denominator_identity() -> Outcome {
    let mut report = Vec::new();
    for name in ["G2:A2A2", "B2:A1A1"] {
        let s = &splint::find_splint(name, None).map_err(err)?.splint;
        let r = qseries::verify_denominator_splint(s, 8);
        ensure!(r.passed, "{name}: mismatch {:?}", r.mismatch);
        let bad = qseries::verify_denominator_splint(&corrupted(s)?, 8);
        ensure!(!bad.passed, "{name}: corrupted splint passed");
        let at = bad.mismatch.map(|m| m.relative_grade).unwrap_or_default();
        report.push(format!("{name} ok, control fails at grade {at}"));
    }
    Ok(report.join(", "))
}

#[allow(clippy::needless_range_loop)]
fn matrix_relation() -> Outcome {
    let g = rs("A1")?;
    let cutoff = 6;
    let mut report = Vec::new();
    for (level, labels) in [(1, 0), (1, 1), (2, 0), (2, 1)] {
        let mu = AffineWeight::from_labels(&g, &[labels], level).map_err(err)?;
        let b = affine::graded_branch_to_g(&g, &mu, cutoff).map_err(err)?;
        let bound = b
            .entries
            .keys()
            .map(|xi| g.inner_product(g.rho(), xi).unwrap())
            .max()
            .unwrap_or_default();
        let m = affine::multiplicity_matrix(&g, bound).map_err(err)?;
        let inv = affine::invert_multiplicity_matrix(&m).map_err(err)?;
        let size = m.size();
        for i in 0..size {
            for j in 0..size {
                let v: i64 = (0..size).map(|k| inv[i][k] * m.entries[k][j]).sum();
                ensure!(v == i64::from(i == j), "M⁻¹M ≠ I at ({i}, {j})");
            }
        }
        for n in 0..=cutoff {
            let bn: Vec<i64> = m.basis.iter().map(|xi| b.get(xi, n)).collect();
            let sigma: Vec<i64> = m
                .basis
                .iter()
                .map(|nu| affine::string_function(&g, &mu, nu, cutoff).map(|s| s.get(n)))
                .collect::<Result<_, _>>()
                .map_err(err)?;
            ensure!(
                m.apply(&bn) == sigma,
                "level {level} [{labels}] grade {n}: σ ≠ M b"
            );
            let recovered: Vec<i64> = inv
                .iter()
                .map(|row| row.iter().zip(&sigma).map(|(a, s)| a * s).sum())
                .collect();
            ensure!(
                recovered == bn,
                "level {level} [{labels}] grade {n}: M⁻¹σ ≠ b"
            );
        }
        report.push(format!("k={level} [{labels}] block {size}"));
    }
    Ok(report.join(", "))
}

fn affine_splint_routes() -> Outcome {
    let mut report = Vec::new();
    for name in ["G2:A2A2", "B2:A1A1"] {
        let s = &splint::find_splint(name, None).map_err(err)?.splint;
        let g = s.ambient();
        let vac = AffineWeight::highest(g, Weight::zero(g.ambient_dim()), 1).map_err(err)?;
        let composed = affine::branch_affine_to_subalgebra(s, &vac, 2).map_err(err)?;
        let direct = affine::branch_affine_to_subalgebra_direct(s, &vac, 2).map_err(err)?;
        let matrix = affine::branch_affine_to_subalgebra_matrix(s, &vac, 2).map_err(err)?;
        ensure!(
            composed == direct,
            "{name}: composed and direct routes differ"
        );
        ensure!(matrix == direct, "{name}: matrix and direct routes differ");
        ensure!(direct.is_nonnegative(), "{name}: negative coefficient");
        report.push(format!("{name} {} targets", direct.entries.len()));
    }
    Ok(report.join(", "))
}

fn eta_pentagonal() -> Outcome {
    let n_max = 50;
    let c = rat(n_max);
    let mut direct = ScalarSeries::monomial(rat(0), rat(1), c);
    for n in 1..=n_max {
        let mut f = ScalarSeries::monomial(rat(0), rat(1), c);
        f.add_term(rat(n), rat(-1));
        direct = direct.mul(&f);
    }
    let eta = qseries::eta(c + Rational::new(1, 24)).shift(Rational::new(-1, 24));
    ensure!(eta == direct, "eta differs from the direct product");
    let mut pentagonal = BTreeMap::new();
    for k in -6i64..=6 {
        pentagonal.insert(k * (3 * k - 1) / 2, if k % 2 == 0 { 1 } else { -1 });
    }
    for n in 0..=n_max {
        let want = pentagonal.get(&n).copied().unwrap_or(0);
        let got = eta.coefficient(&rat(n)).copied().unwrap_or_default();
        ensure!(got == rat(want), "q^{n}: {got} ≠ {want}");
    }
    Ok("to grade 50".into())
}

fn theta_identities() -> Outcome {
    let mut report = Vec::new();
    for name in ["G2:A2A2", "B2:A1A1"] {
        let s = &splint::find_splint(name, None).map_err(err)?.splint;
        let e5 = qseries::verify_theta_product(s, 4).map_err(err)?;
        ensure!(e5.passed, "{name} product form: mismatch {:?}", e5.mismatch);
        let e6 = qseries::verify_theta_alternating(s, 4, AlternatingThetaOptions::default())
            .map_err(err)?;
        ensure!(
            e6.passed,
            "{name} alternating form: mismatch {:?}",
            e6.mismatch
        );
        let bad5 = qseries::verify_theta_product(&corrupted(s)?, 4).map_err(err)?;
        ensure!(!bad5.passed, "{name}: corrupted product form passed");
        let control = AlternatingThetaOptions {
            drop_weyl_term: true,
            ..AlternatingThetaOptions::default()
        };
        let bad6 = qseries::verify_theta_alternating(s, 4, control).map_err(err)?;
        ensure!(!bad6.passed, "{name}: dropped Weyl term passed");
        report.push(format!("{name} ok"));
    }
    Ok(report.join(", "))
}

fn q_dimension() -> Outcome {
    let probes: [(&str, &[i64], i64); 8] = [
        ("A1", &[0], 1),
        ("A1", &[1], 1),
        ("A1", &[2], 2),
        ("A2", &[1, 0], 1),
        ("B2", &[0, 1], 1),
        ("B2", &[1, 0], 1),
        ("G2", &[1, 0], 1),
        ("A3", &[0, 1, 0], 1),
    ];
    for (name, labels, level) in probes {
        let g = rs(name)?;
        let mu = AffineWeight::from_labels(&g, labels, level).map_err(err)?;
        let qd = affine::q_dimension(&g, &mu, 1).map_err(err)?;
        let dim = character::weyl_dimension(&g, &mu.finite).map_err(err)? as i64;
        ensure!(
            qd.get(0) == dim,
            "{name} {labels:?}: grade 0 is {} not {dim}",
            qd.get(0)
        );
    }
    let a1 = rs("A1")?;
    let vac = AffineWeight::from_labels(&a1, &[0], 1).map_err(err)?;
    let qd = affine::q_dimension(&a1, &vac, 1).map_err(err)?;
    ensure!(qd.get(1) == 3, "Â1 level-1 vacuum grade 1 is {}", qd.get(1));
    Ok(format!("{} probes", probes.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "1 weyl denominator",
            weyl_denominator_identity,
            Duration::from_secs(5),
        ),
        (
            "2 freudenthal vs weyl",
            freudenthal_vs_weyl,
            Duration::from_secs(30),
        ),
        (
            "3 splint branching",
            splint_branching,
            Duration::from_secs(120),
        ),
        (
            "4 affine denominator",
            denominator_identity,
            Duration::from_secs(120),
        ),
        (
            "5 multiplicity matrix",
            matrix_relation,
            Duration::from_secs(60),
        ),
        (
            "6 affine splint routes",
            affine_splint_routes,
            Duration::from_secs(300),
        ),
        ("7 eta pentagonal", eta_pentagonal, Duration::from_secs(1)),
        (
            "8 theta identities",
            theta_identities,
            Duration::from_secs(300),
        ),
        ("9 q-dimension", q_dimension, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; exceeded {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {name} ({elapsed:.2?}): {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL {name} ({elapsed:.2?}): {reason}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
