//! Acceptance suite: one PASS/FAIL line per criterion, with a pinned time budget each.
//! Every criterion is an exact identity or set equality, so there is no numerical tolerance.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hessq::appendix::{w_i, SubsetIndex};
use hessq::checks::{run_with, RunConfig};
use hessq::exec::{par_map, Mode};
use hessq::hess::HessenbergFunction;
use hessq::poly::{poly, Polynomial};
use hessq::qsym::{e_interval, QSym};
use hessq::report::{Params, Status, VerificationReport};
use hessq::singular::jacobian;

type Outcome = std::result::Result<String, String>;

/// Title, time budget in seconds, and the check itself.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn config() -> RunConfig {
    RunConfig {
        max_n_identity: 7,
        max_n_groebner: 4,
        seed: 42,
        trials: 200,
        jacobian_trials: 100,
        mode: Mode::default(),
    }
}

fn run_tasks(tasks: Vec<(&'static str, Params)>) -> Vec<VerificationReport> {
    let cfg = config();
    par_map(Mode::default(), &tasks, |(id, p)| {
        run_with(id, p, &cfg).unwrap_or_else(|e| {
            let mut r = VerificationReport::new(*id, p.clone());
            let mut s = hessq::report::SubCheck::new("run");
            s.fail(e.to_string());
            r.push(s);
            r.finish()
        })
    })
}

fn describe(r: &VerificationReport) -> String {
    format!(
        "{} {:?}: {:?} {:?}",
        r.check_id,
        r.params,
        r.status,
        r.witnesses.first().or(r.reason.as_ref())
    )
}

/// Every report passes; `required` names subchecks that must have been attempted and passed.
fn all_pass(reports: &[VerificationReport], required: &[&str]) -> Outcome {
    let mut checked = 0;
    for r in reports {
        if r.status != Status::Pass {
            return Err(describe(r));
        }
        for s in &r.subchecks {
            if required.iter().any(|name| s.name.starts_with(name)) && s.status != Status::Pass {
                return Err(format!("{} {:?}: [{}] {:?}", r.check_id, r.params, s.name, s.status));
            }
            checked += s.checked;
        }
    }
    Ok(format!("{} reports, {checked} exact checks", reports.len()))
}

fn golden(label: &str, got: Polynomial, expected: &str) -> std::result::Result<(), String> {
    let want = poly(expected);
    if got == want {
        Ok(())
    } else {
        Err(format!("{label}: got {got}, expected {want}"))
    }
}

fn c1() -> Outcome {
    let reports = run_tasks((1..=7).map(|n| ("e-recursion", Params::n(n))).collect());
    let summary = all_pass(&reports, &["recursion = determinant"])?;
    let t = QSym::new(3);
    let e = |i, b| t.e(i, b).map_err(|e| e.to_string());
    golden("E_1^(3)", e(1, 3)?, "x_1 + x_2 + x_3")?;
    golden(
        "E_2^(3)",
        e(2, 3)?,
        "x_1*x_2 + x_1*x_3 + x_2*x_3 + q_1_2 + q_2_3",
    )?;
    golden(
        "E_3^(3)",
        e(3, 3)?,
        "x_1*x_2*x_3 + x_1*q_2_3 + x_3*q_1_2 + q_1_3",
    )?;
    golden("E_2^(2)", e(2, 2)?, "x_1*x_2 + q_1_2")?;
    golden("E_1^(1)", e(1, 1)?, "x_1")?;
    Ok(summary + ", n = 3 table matches")
}

fn c2() -> Outcome {
    all_pass(&run_tasks((2..=6).map(|n| ("grading", Params::n(n))).collect()), &[])
}

fn c3() -> Outcome {
    all_pass(&run_tasks((2..=5).map(|n| ("cramer", Params::n(n))).collect()), &[])
}

fn c4() -> Outcome {
    all_pass(&run_tasks((2..=6).map(|n| ("f-conj", Params::n(n))).collect()), &[])
}

fn c5() -> Outcome {
    let mut tasks: Vec<(&'static str, Params)> =
        (2..=7).map(|n| ("f-recursions", Params::n(n))).collect();
    let mut ideals = 0;
    for n in 3..=5 {
        for h in HessenbergFunction::all(n) {
            if h.is_indecomposable() && !h.is_full() {
                tasks.push(("f-ideal-equality", Params::n_h(&h)));
                ideals += 1;
            }
        }
    }
    let summary = all_pass(&run_tasks(tasks), &[])?;
    Ok(format!("{summary}, {ideals} ideal equalities"))
}

fn c6() -> Outcome {
    let tasks = [3, 4]
        .into_iter()
        .flat_map(HessenbergFunction::all)
        .map(|h| ("hilbert-eq", Params::n_h(&h).with_trunc(20)))
        .collect();
    all_pass(&run_tasks(tasks), &["closed forms", "coordinate staircase", "quantum staircase"])
}

fn c7() -> Outcome {
    let listed: Vec<HessenbergFunction> = [[2, 3, 4, 4], [3, 4, 4, 4], [2, 4, 4, 4], [4, 4, 4, 4]]
        .iter()
        .map(|v| HessenbergFunction::from_values(v.to_vec()).unwrap())
        .collect();
    let mut hs: Vec<HessenbergFunction> = [3, 4]
        .into_iter()
        .flat_map(HessenbergFunction::all)
        .filter(|h| h.is_indecomposable())
        .collect();
    for h in &listed {
        if !hs.contains(h) {
            return Err(format!("{h} is not indecomposable"));
        }
    }
    hs.sort();
    let tasks = hs.iter().map(|h| ("main-theorem", Params::n_h(h))).collect();
    all_pass(
        &run_tasks(tasks),
        &[
            "forward images graded",
            "well-definedness",
            "inverse on coordinates",
            "inverse on quantum side",
            "closed forms",
            "coordinate staircase",
            "quantum staircase",
        ],
    )
}

/// `E1[2,3]*E1[4,4] + E2[1,2]` style cells.
fn cell(s: &str) -> Polynomial {
    s.split('+')
        .map(|term| {
            term.split('*')
                .map(|f| match f.trim() {
                    "0" => Polynomial::zero(),
                    "1" => Polynomial::one(),
                    f => {
                        let i: usize = f[1..2].parse().unwrap();
                        let (a, b) = f[3..f.len() - 1].split_once(',').unwrap();
                        e_interval(i, a.parse().unwrap(), b.parse().unwrap()).unwrap()
                    }
                })
                .product::<Polynomial>()
        })
        .sum()
}

fn printed_jacobian(n: usize, rows: &[&[&str]]) -> std::result::Result<(), String> {
    let j = jacobian(&HessenbergFunction::full(n)).map_err(|e| e.to_string())?;
    if j.columns.len() != n * (n + 1) / 2 || rows.len() != n {
        return Err(format!("n = {n}: shape"));
    }
    for (i, row) in rows.iter().enumerate() {
        for (c, s) in row.iter().enumerate() {
            if j.entries.get(i, c) != &cell(s) {
                return Err(format!("n = {n}: entry ({}, {}) is not {s}", i + 1, c + 1));
            }
        }
    }
    Ok(())
}

fn c8() -> Outcome {
    let reports = run_tasks((2..=6).map(|n| ("jacobian", Params::n(n).with_trials(100))).collect());
    let summary = all_pass(&reports, &["closed form = derivative", "full rank"])?;
    printed_jacobian(
        3,
        &[
            &["1", "1", "1", "0", "0", "0"],
            &["E1[2,3]", "E1[1,1]+E1[3,3]", "E1[1,2]", "1", "1", "0"],
            &["E2[2,3]", "E1[1,1]*E1[3,3]", "E2[1,2]", "E1[3,3]", "E1[1,1]", "1"],
        ],
    )?;
    printed_jacobian(
        4,
        &[
            &["1", "1", "1", "1", "0", "0", "0", "0", "0", "0"],
            &[
                "E1[2,4]", "E1[1,1]+E1[3,4]", "E1[1,2]+E1[4,4]", "E1[1,3]", "1", "1", "1", "0", "0",
                "0",
            ],
            &[
                "E2[2,4]",
                "E1[1,1]*E1[3,4]+E2[3,4]",
                "E2[1,2]+E1[1,2]*E1[4,4]",
                "E2[1,3]",
                "E1[3,4]",
                "E1[1,1]+E1[4,4]",
                "E1[1,2]",
                "1",
                "1",
                "0",
            ],
            &[
                "E3[2,4]",
                "E1[1,1]*E2[3,4]",
                "E2[1,2]*E1[4,4]",
                "E3[1,3]",
                "E2[3,4]",
                "E1[1,1]*E1[4,4]",
                "E2[1,2]",
                "E1[4,4]",
                "E1[1,1]",
                "1",
            ],
        ],
    )?;
    Ok(summary + ", n = 3, 4 tables match")
}

fn c9() -> Outcome {
    all_pass(
        &run_tasks(vec![("pet3-singular", Params::default())]),
        &["solution set", "together with the relations", "coordinate solution set"],
    )
}

fn c10() -> Outcome {
    let mut tasks: Vec<(&'static str, Params)> =
        (3..=7).map(|n| ("xyz-identity", Params::n(n))).collect();
    tasks.extend((3..=7).map(|n| ("cyclic-quotient", Params::n(n))));
    all_pass(&run_tasks(tasks), &[])
}

fn c11() -> Outcome {
    let mut tasks = Vec::new();
    for n in 3..=6 {
        for m in 2..n {
            tasks.push((
                "singular-hm",
                Params::n(n).with_m(m).with_trials(200).with_seed(42),
            ));
        }
    }
    let reports = run_tasks(tasks);
    let summary = all_pass(&reports, &["containment (exact)", "genericity (sampled)"])?;
    let mut groebner = 0;
    for r in &reports {
        let off = r.data.get("samples_off_locus").and_then(|v| v.as_u64()).unwrap_or(0);
        if off < 200 {
            return Err(format!("{:?}: only {off} off-locus samples", r.params));
        }
        if r.params.n.unwrap() <= 4 {
            for s in r.subchecks.iter().filter(|s| {
                s.name.starts_with("Schubert rank") || s.name.starts_with("radical certificate")
            }) {
                if s.status != Status::Pass {
                    return Err(format!("{:?}: [{}] {:?}", r.params, s.name, s.status));
                }
                groebner += 1;
            }
        }
    }
    Ok(format!("{summary}, {groebner} ideal-level certificates at n <= 4"))
}

fn c12() -> Outcome {
    let reports = run_tasks((3..=12).map(|n| ("appendix", Params::n(n))).collect());
    let summary = all_pass(&reports, &["set identity", "union of components", "irredundancy"])?;
    let i = SubsetIndex::new(9, &[1, 2, 3, 6, 7]).map_err(|e| e.to_string())?;
    let w = w_i(&i).to_string();
    if w != "432158769" {
        return Err(format!("w_I = {w}"));
    }
    Ok(summary + ", w_{1,2,3,6,7} = 432158769")
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("recursion = determinant, n <= 7", 60, c1),
        ("grading, n <= 6", 60, c2),
        ("Cramer identity, n <= 5", 120, c3),
        ("F = conjugate entry, n <= 6", 60, c4),
        ("F and F~ recursions n <= 7, ideal equality n <= 5", 120, c5),
        ("Hilbert series, every h at n = 3, 4, degree 20", 600, c6),
        ("isomorphism certificate, indecomposable h at n = 3, 4", 900, c7),
        ("Jacobians, n <= 6", 120, c8),
        ("singular locus of Pet_3", 60, c9),
        ("XY - Z^n and cyclic quotient, 3 <= n <= 7", 60, c10),
        ("singular locus of Hess(N,h_m), n <= 6", 600, c11),
        ("appendix combinatorics, 3 <= n <= 12", 10, c12),
    ];
    let mut failed = 0;
    let total = Instant::now();
    for (k, (title, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let budget = Duration::from_secs(*budget);
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {title} [{:.2} s / {} s] {detail}",
            k + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!(
        "{} of 12 criteria passed in {:.1} s",
        12 - failed,
        total.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
