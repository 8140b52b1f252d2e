//! Acceptance criteria, one PASS/FAIL line each.

use std::process::Command;
use std::time::{Duration, Instant};

use ybcomm::bethe::{verify_b_equals_bhat, verify_psi_closed_forms};
use ybcomm::commutation::{verify_coefficient_routes, verify_grid_coefficients, verify_multiple_commutation, CommutationInstance};
use ybcomm::degeneration::{check_degenerate_r, exponent_identity_random};
use ybcomm::grid::{check_domain_wall, check_psi_equals_w};
use ybcomm::gt::{
    verify_golden, verify_minor_commutativity, verify_qdet_diagonalization, verify_relation_gz, verify_singular_ladder,
};
use ybcomm::report::VerificationReport;
use ybcomm::rmatrix::{check_flavor_duality, check_unitarity, check_yang_baxter};
use ybcomm::sample::SamplePlan;
use ybcomm::RFlavor;

const SEED: u64 = 0;

fn plan(tag: &str, count: usize) -> SamplePlan {
    SamplePlan::new(SEED, count).derive(tag)
}

struct Outcome {
    failures: Vec<String>,
    elapsed: Duration,
}

fn run(budget: Option<Duration>, body: impl FnOnce() -> Vec<VerificationReport>) -> Outcome {
    let start = Instant::now();
    let reports = body();
    let elapsed = start.elapsed();
    let mut failures: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{} {:?} {:?}: {} {:?}", r.identity, r.flavor, r.instance, r.status, r.note))
        .collect();
    if reports.is_empty() {
        failures.push("no checks ran".into());
    }
    if let Some(b) = budget {
        if elapsed > b {
            failures.push(format!("took {elapsed:?}, budget {b:?}"));
        }
    }
    Outcome { failures, elapsed }
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

const TRIG_AND_RATIONAL: [RFlavor; 2] = [RFlavor::TrigA, RFlavor::Rational];

fn r_matrix_structure() -> Outcome {
    run(secs(5), || {
        let mut out = Vec::new();
        for rank in 2..=4 {
            for flavor in RFlavor::ALL {
                out.push(check_yang_baxter(flavor, rank, &plan(&format!("ybe/{flavor}/{rank}"), 5)));
                out.push(check_unitarity(flavor, rank, &plan(&format!("unitarity/{flavor}/{rank}"), 5)));
            }
            out.push(check_flavor_duality(rank, &plan(&format!("duality/{rank}"), 100)));
        }
        out
    })
}

fn psi_equals_w() -> Outcome {
    run(secs(30), || {
        let mut out = Vec::new();
        for flavor in TRIG_AND_RATIONAL {
            for rank in 2..=3 {
                for len in 1..=4 {
                    out.push(check_psi_equals_w(flavor, rank, len, 2, &plan(&format!("psi-w/{flavor}/{rank}/{len}"), 5)));
                }
            }
        }
        out
    })
}

fn domain_wall() -> Outcome {
    run(secs(5), || {
        let mut out = Vec::new();
        for flavor in TRIG_AND_RATIONAL {
            for n in 1..=4 {
                out.push(check_domain_wall(flavor, n, &plan(&format!("domain-wall/{flavor}/{n}"), 5)));
            }
        }
        out
    })
}

const COMMUTATION_SIZES: [&[usize]; 5] = [&[1, 1], &[2, 1], &[2, 2], &[1, 1, 1], &[2, 1, 1]];

fn multiple_commutation() -> Outcome {
    run(secs(300), || {
        let mut out = Vec::new();
        for flavor in TRIG_AND_RATIONAL {
            for sizes in COMMUTATION_SIZES {
                let key = format!("{flavor}/{sizes:?}");
                let union = CommutationInstance::on_union(flavor, sizes).expect("valid instance");
                out.push(verify_multiple_commutation(&union, &plan(&format!("relation/{key}"), 3)));
                out.push(verify_grid_coefficients(&union, &plan(&format!("grid/{key}"), 3)));
            }
            for sizes in [&[1, 1][..], &[2, 1], &[1, 1, 1]] {
                let n = sizes.iter().sum::<usize>() + 1;
                let extra = CommutationInstance::new(flavor, sizes, n).expect("valid instance");
                out.push(verify_multiple_commutation(&extra, &plan(&format!("extra/{flavor}/{sizes:?}"), 3)));
            }
        }
        out
    })
}

fn coefficient_routes() -> Outcome {
    run(secs(30), || {
        let mut out = Vec::new();
        for flavor in TRIG_AND_RATIONAL {
            for sizes in [[1, 1, 1], [2, 1, 1]] {
                let instance = CommutationInstance::new(flavor, &sizes, 0).expect("valid instance");
                out.push(verify_coefficient_routes(&instance, &plan(&format!("routes/{flavor}/{sizes:?}"), 5)));
            }
        }
        out
    })
}

fn bethe_vectors() -> Outcome {
    run(secs(300), || {
        let mut out = Vec::new();
        for n in 2..=3 {
            out.push(verify_b_equals_bhat(3, n, 2, &plan(&format!("b-bhat/{n}"), 3)));
            out.push(verify_psi_closed_forms(3, n, &plan(&format!("psi/{n}"), 3)));
        }
        for flavor in TRIG_AND_RATIONAL {
            for n in 3..=4 {
                out.push(verify_relation_gz(flavor, 3, n, 2, &plan(&format!("relation/{flavor}/{n}"), 3)));
            }
        }
        out
    })
}

fn gt_eigenvectors() -> Outcome {
    run(secs(120), || {
        let mut out = Vec::new();
        for flavor in TRIG_AND_RATIONAL {
            for rank in 2..=3 {
                for n in 1..=3 {
                    out.push(verify_qdet_diagonalization(flavor, rank, n, &plan(&format!("qdet/{flavor}/{rank}/{n}"), 3)));
                    out.push(verify_singular_ladder(flavor, rank, n, &plan(&format!("ladder/{flavor}/{rank}/{n}"), 3)));
                }
                out.push(verify_minor_commutativity(flavor, rank, 2, 20, &plan(&format!("minor/{flavor}/{rank}"), 1)));
            }
        }
        out
    })
}

fn golden() -> Outcome {
    run(secs(1), || vec![verify_golden(&plan("golden", 6))])
}

fn degeneration() -> Outcome {
    run(secs(5), || {
        let mut out: Vec<_> = (2..=4).map(|rank| check_degenerate_r(rank, 2, &plan(&format!("jet/{rank}"), 5))).collect();
        out.push(exponent_identity_random(200, 6, &plan("exponents", 1)));
        out
    })
}

fn report_without_durations() -> Result<String, String> {
    let output = Command::new(env!("CARGO_BIN_EXE_ybcomm"))
        .args(["verify", "--suite", "all", "--seed", "7", "--format", "json"])
        .output()
        .map_err(|e| e.to_string())?;
    if !output.status.success() {
        return Err(format!("exit status {}", output.status));
    }
    let text = String::from_utf8(output.stdout).map_err(|e| e.to_string())?;
    Ok(text.lines().filter(|l| !l.trim_start().starts_with("\"duration_ms\"")).collect::<Vec<_>>().join("\n"))
}

fn determinism() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    match (report_without_durations(), report_without_durations()) {
        (Ok(a), Ok(b)) => {
            if a != b {
                failures.push("reports differ between runs".into());
            }
            if !a.contains("\"report_version\": \"1\"") {
                failures.push("missing report_version".into());
            }
        }
        (Err(e), _) | (_, Err(e)) => failures.push(e),
    }
    Outcome { failures, elapsed: start.elapsed() }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 r-matrix structure", r_matrix_structure),
        ("2 psi equals W", psi_equals_w),
        ("3 domain wall equals Izergin-Korepin", domain_wall),
        ("4 multiple commutation relations", multiple_commutation),
        ("5 coefficient routes", coefficient_routes),
        ("6 bethe vectors and GT relation", bethe_vectors),
        ("7 qdet, quantum minors, singular vectors", gt_eigenvectors),
        ("8 golden example", golden),
        ("9 degeneration", degeneration),
        ("10 determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (name, criterion) in criteria {
        let outcome = criterion();
        let status = if outcome.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} criterion {name} ({:.1}s)", outcome.elapsed.as_secs_f64());
        for f in &outcome.failures {
            println!("    {f}");
        }
        if !outcome.failures.is_empty() {
            failed.push(name);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
