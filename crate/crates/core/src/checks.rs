//! Registry of named checks, single runs and the full suite.

use std::time::Instant;

use crate::appendix::{verify_appendix_identities_with, MAX_N_APPENDIX};
use crate::error::{Error, Result};
use crate::exec::{par_map, Mode};
use crate::flag::{f, verify_conj_entries, verify_f_recursions, verify_ideal_equality};
use crate::hess::HessenbergFunction;
use crate::ideals::flag_vars;
use crate::iso::{
    default_trunc, phi, verify_cramer_identity, verify_hilbert_equality, verify_key_correspondence,
    verify_main_theorem,
};
use crate::poly::{GradedDegree, Polynomial};
use crate::qsym::{verify_e_recursion_with, QSym, MAX_N_IDENTITY};
use crate::report::{Params, SubCheck, VerificationReport};
use crate::singular::{
    cyclic_quotient_certificate, inductive_identity_check, pet3_singular_check, verify_jacobian,
    verify_singular_locus_with, xyz_identity_check, MAX_N_LOCUS,
};

/// One registry entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckInfo {
    pub id: &'static str,
    /// parameters the check reads
    pub params: &'static str,
    pub statement: &'static str,
}

/// Sorted by id.
pub const REGISTRY: &[CheckInfo] = &[
    CheckInfo {
        id: "appendix",
        params: "n (3..=12)",
        statement: "subsets J of [n-1] other than [n-1], [2,n-1], [1,n-2] are exactly those lying in \
                    [n-1]\\{j} for some 2 <= j <= n-2 or in [2,n-2]; these index sets are irredundant",
    },
    CheckInfo {
        id: "cramer",
        params: "n (2..=5)",
        statement: "q_rs equals the determinant of the (s-r+1)-square matrix of differences E_k^(s) - E_k^(s-1)",
    },
    CheckInfo {
        id: "cyclic-quotient",
        params: "n (3..=7)",
        statement: "for h_2, X = x_21^2 - x_31, Y, Z = x_21 and the inverse substitutions identify the chart \
                    with (XY - Z^n) times an affine space",
    },
    CheckInfo {
        id: "e-recursion",
        params: "n (1..=7)",
        statement: "E_i^[a,b] from the recursion equals the signed coefficient of det(lambda I - M_[a,b]); \
                    q = 0 gives e_i; closed-form partial derivatives",
    },
    CheckInfo {
        id: "f-conj",
        params: "n (2..=6)",
        statement: "F_ij equals the (i,j) entry of g^-1 N g on the chart",
    },
    CheckInfo {
        id: "f-ideal-equality",
        params: "h (indecomposable, not full, n <= 5)",
        statement: "the F and truncated F~ generators of h generate the same ideal",
    },
    CheckInfo {
        id: "f-recursions",
        params: "n (2..=7)",
        statement: "F~^<m> = F~^<m-1> - x_im F~^<m-1>_mj and F_ij = F~^<m_j>_ij - sum x_il F_lj",
    },
    CheckInfo {
        id: "grading",
        params: "n (2..=6)",
        statement: "E_r^(s) is homogeneous of degree 2r, F_ij of degree 2(i-j+1), phi(x_ij) of degree 2(i-j)",
    },
    CheckInfo {
        id: "hilbert-eq",
        params: "h, trunc",
        statement: "both quotient rings of phi_h have the product Hilbert series, by closed form and by \
                    counting standard monomials",
    },
    CheckInfo {
        id: "inductive-identity",
        params: "n (2..=7)",
        statement: "E_{n-i+1}^[i,n] with q_kn = 0 (i < k < n) equals x_n E_{n-i}^[i,n-1] + q_in",
    },
    CheckInfo {
        id: "jacobian",
        params: "n (2..=6), trials, seed",
        statement: "closed-form partials of ^hE_i^(n) equal the derivatives; the full-flag Jacobian has rank n",
    },
    CheckInfo {
        id: "key-correspondence",
        params: "n (2..=4), trunc",
        statement: "phi(x_{n-s+1,n-s} - x_{n-s+2,n-s+1}) = x_s and phi(-F_{n+1-r,n+1-s}) = q_rs modulo (E^(n))",
    },
    CheckInfo {
        id: "main-theorem",
        params: "h, trunc",
        statement: "x_ij -> ^hE_{i-j}^(n-j) is a well-defined graded isomorphism with the stated inverse",
    },
    CheckInfo {
        id: "pet3-singular",
        params: "none",
        statement: "the singular locus of Pet_3 in the chart is x_1 = x_3 = q_12 = q_23 = 0, i.e. the point eB",
    },
    CheckInfo {
        id: "singular-hm",
        params: "m, n (3..=6), trials, seed",
        statement: "the singular locus of Hess(N,h_m) in the chart is x_i1 = 0 (i >= 2), x_nj = 0 (2 <= j <= m), \
                    the Schubert variety of w_m",
    },
    CheckInfo {
        id: "xyz-identity",
        params: "n (3..=8)",
        statement: "sum_k x_21^k F~^<2>_{n-k,1} = XY - Z^n, with the partial sums for every i > 2",
    },
];

pub fn lookup(id: &str) -> Result<&'static CheckInfo> {
    REGISTRY
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownCheck(id.to_string()))
}

/// Size limits and randomness shared by every run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub max_n_identity: usize,
    pub max_n_groebner: usize,
    pub seed: u64,
    pub trials: usize,
    pub jacobian_trials: usize,
    pub mode: Mode,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_n_identity: 6,
            max_n_groebner: 4,
            seed: 42,
            trials: 200,
            jacobian_trials: 100,
            mode: Mode::default(),
        }
    }
}

/// Homogeneity and degrees of `E_r^(s)`, `F_ij` and `phi(x_ij)`.
pub fn verify_grading(n: usize) -> Result<VerificationReport> {
    if !(2..=6).contains(&n) {
        return Err(Error::InvalidParams(format!("n = {n} outside 2..=6")));
    }
    let mut report = VerificationReport::new("grading", Params::n(n));
    let degree_is = |p: &Polynomial, d: usize| p.graded_degree() == Ok(GradedDegree::Homogeneous(d as u32));
    let table = QSym::new(n);
    let mut e = SubCheck::new("E_r^(s) of degree 2r");
    for s in 1..=n {
        for r in 1..=s {
            let p = table.e(r, s)?;
            e.record_bool(degree_is(&p, 2 * r), || format!("E_{r}^({s})"));
        }
    }
    report.push(e);
    let mut fs = SubCheck::new("F_ij of degree 2(i-j+1)");
    for j in 1..n {
        for i in j + 1..=n {
            let p = f(i, j, n)?;
            fs.record_bool(degree_is(&p, 2 * (i - j + 1)), || format!("F_{i}_{j}"));
        }
    }
    report.push(fs);
    let mut ph = SubCheck::new("phi(x_ij) of degree 2(i-j)");
    for v in flag_vars(n) {
        let img = phi(&Polynomial::var(v), n)?;
        let d = v.degree().expect("graded") as usize;
        ph.record_bool(degree_is(&img, d), || format!("phi({v})"));
    }
    report.push(ph);
    Ok(report.finish())
}

fn need_n(p: &Params, lo: usize, hi: usize) -> Result<usize> {
    let n = match (p.n, &p.h) {
        (Some(n), _) => n,
        (None, Some(h)) => h.len(),
        (None, None) => return Err(Error::InvalidParams("missing n".into())),
    };
    if n < lo || n > hi {
        return Err(Error::InvalidParams(format!("n = {n} outside {lo}..={hi}")));
    }
    Ok(n)
}

fn need_h(p: &Params) -> Result<HessenbergFunction> {
    let h = p
        .h
        .clone()
        .ok_or_else(|| Error::InvalidParams("missing h".into()))?;
    let h = HessenbergFunction::from_values(h).map_err(|e| Error::InvalidParams(e.to_string()))?;
    if let Some(n) = p.n {
        if n != h.n() {
            return Err(Error::InvalidParams(format!("n = {n} but h has length {}", h.n())));
        }
    }
    Ok(h)
}

/// Run one check with default limits.
pub fn run(check_id: &str, params: &Params) -> Result<VerificationReport> {
    run_with(check_id, params, &RunConfig::default())
}

pub fn run_with(check_id: &str, params: &Params, cfg: &RunConfig) -> Result<VerificationReport> {
    lookup(check_id)?;
    let start = Instant::now();
    let seed = params.seed.unwrap_or(cfg.seed);
    let groebner = |n: usize| n <= cfg.max_n_groebner;
    let mut report = match check_id {
        "appendix" => verify_appendix_identities_with(need_n(params, 3, MAX_N_APPENDIX)?, cfg.mode)?,
        "cramer" => verify_cramer_identity(need_n(params, 2, 5)?),
        "cyclic-quotient" => cyclic_quotient_certificate(need_n(params, 3, 7)?)?,
        "e-recursion" => verify_e_recursion_with(need_n(params, 1, MAX_N_IDENTITY)?, cfg.mode)?,
        "f-conj" => verify_conj_entries(need_n(params, 2, 6)?),
        "f-ideal-equality" => {
            let h = need_h(params)?;
            need_n(params, 2, 5)?;
            verify_ideal_equality(&h)
        }
        "f-recursions" => verify_f_recursions(need_n(params, 2, 7)?),
        "grading" => verify_grading(need_n(params, 2, 6)?)?,
        "hilbert-eq" => {
            let h = need_h(params)?;
            let trunc = params.trunc.unwrap_or(20);
            verify_hilbert_equality(&h, trunc, groebner(h.n()))
        }
        "inductive-identity" => inductive_identity_check(need_n(params, 2, 7)?)?,
        "jacobian" => verify_jacobian(
            need_n(params, 2, MAX_N_LOCUS)?,
            params.trials.unwrap_or(cfg.jacobian_trials),
            seed,
        )?,
        "key-correspondence" => {
            let n = need_n(params, 2, 6)?;
            let trunc = params.trunc.unwrap_or(default_trunc(n));
            if groebner(n) {
                verify_key_correspondence(n, trunc)
            } else {
                let mut r = VerificationReport::new("key-correspondence", Params::n(n).with_trunc(trunc));
                r.not_attempted(format!("membership above n = {}", cfg.max_n_groebner));
                r
            }
        }
        "main-theorem" => {
            let h = need_h(params)?;
            let trunc = params.trunc.unwrap_or(default_trunc(h.n()));
            verify_main_theorem(&h, trunc, groebner(h.n()))
        }
        "pet3-singular" => pet3_singular_check()?,
        "singular-hm" => {
            let n = need_n(params, 3, MAX_N_LOCUS)?;
            let m = params
                .m
                .ok_or_else(|| Error::InvalidParams("missing m".into()))?;
            let trials = params.trials.unwrap_or(cfg.trials);
            verify_singular_locus_with(m, n, trials, seed, cfg.mode, groebner(n))?
        }
        "xyz-identity" => xyz_identity_check(need_n(params, 3, 8)?)?,
        other => return Err(Error::UnknownCheck(other.to_string())),
    };
    report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    Ok(report)
}

/// Every task of the full suite, in output order.
pub fn suite(cfg: &RunConfig) -> Vec<(&'static str, Params)> {
    let id_max = |hi: usize| hi.min(cfg.max_n_identity);
    let mut tasks: Vec<(&'static str, Params)> = Vec::new();
    for n in 3..=MAX_N_APPENDIX {
        tasks.push(("appendix", Params::n(n)));
    }
    for n in 2..=id_max(5) {
        tasks.push(("cramer", Params::n(n)));
    }
    for n in 3..=id_max(7) {
        tasks.push(("cyclic-quotient", Params::n(n)));
    }
    for n in 1..=id_max(MAX_N_IDENTITY) {
        tasks.push(("e-recursion", Params::n(n)));
    }
    for n in 2..=id_max(6) {
        tasks.push(("f-conj", Params::n(n)));
    }
    for n in 3..=id_max(5) {
        for h in HessenbergFunction::all(n) {
            if h.is_indecomposable() && !h.is_full() {
                tasks.push(("f-ideal-equality", Params::n_h(&h)));
            }
        }
    }
    for n in 2..=id_max(7) {
        tasks.push(("f-recursions", Params::n(n)));
    }
    for n in 2..=id_max(6) {
        tasks.push(("grading", Params::n(n)));
    }
    for n in 3..=4 {
        for h in HessenbergFunction::all(n) {
            tasks.push(("hilbert-eq", Params::n_h(&h).with_trunc(20)));
        }
    }
    for n in 2..=id_max(7) {
        tasks.push(("inductive-identity", Params::n(n)));
    }
    for n in 2..=id_max(MAX_N_LOCUS) {
        tasks.push((
            "jacobian",
            Params::n(n).with_trials(cfg.jacobian_trials).with_seed(cfg.seed),
        ));
    }
    for n in 2..=4 {
        tasks.push(("key-correspondence", Params::n(n).with_trunc(default_trunc(n))));
    }
    for n in 3..=4 {
        for h in HessenbergFunction::all(n) {
            if h.is_indecomposable() {
                tasks.push(("main-theorem", Params::n_h(&h).with_trunc(default_trunc(n))));
            }
        }
    }
    tasks.push(("pet3-singular", Params::default()));
    for n in 3..=id_max(MAX_N_LOCUS) {
        for m in 2..n {
            tasks.push((
                "singular-hm",
                Params::n(n).with_m(m).with_trials(cfg.trials).with_seed(cfg.seed),
            ));
        }
    }
    for n in 3..=id_max(8) {
        tasks.push(("xyz-identity", Params::n(n)));
    }
    tasks
}

/// The full suite, ordered by check id and then parameters. Tasks run concurrently
/// under the parallel mode; an error becomes a failing report.
pub fn run_all(cfg: &RunConfig) -> Vec<VerificationReport> {
    let tasks = suite(cfg);
    par_map(cfg.mode, &tasks, |(id, params)| {
        run_with(id, params, cfg).unwrap_or_else(|e| {
            let mut r = VerificationReport::new(*id, params.clone());
            let mut s = SubCheck::new("run");
            s.fail(e.to_string());
            r.push(s);
            r.finish()
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    #[test]
    fn registry_sorted_and_unique() {
        let ids: Vec<&str> = REGISTRY.iter().map(|c| c.id).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn unknown_and_invalid() {
        assert!(matches!(run("unknown", &Params::n(3)), Err(Error::UnknownCheck(_))));
        assert!(matches!(run("xyz-identity", &Params::n(2)), Err(Error::InvalidParams(_))));
        assert!(matches!(run("main-theorem", &Params::n(3)), Err(Error::InvalidParams(_))));
        let bad = Params {
            h: Some(vec![1, 3, 2]),
            ..Default::default()
        };
        assert!(matches!(run("main-theorem", &bad), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn single_runs() {
        assert_eq!(run("xyz-identity", &Params::n(5)).unwrap().status, Status::Pass);
        let h = HessenbergFunction::peterson(3);
        assert_eq!(run("main-theorem", &Params::n_h(&h)).unwrap().status, Status::Pass);
        assert_eq!(run("grading", &Params::n(5)).unwrap().status, Status::Pass);
    }

    #[test]
    fn groebner_cap_marks_not_attempted() {
        let cfg = RunConfig {
            max_n_groebner: 2,
            ..Default::default()
        };
        let h = HessenbergFunction::peterson(3);
        let r = run_with("main-theorem", &Params::n_h(&h), &cfg).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert!(r
            .subchecks
            .iter()
            .any(|s| s.name == "well-definedness" && s.status == Status::NotAttempted));
        let k = run_with("key-correspondence", &Params::n(3), &cfg).unwrap();
        assert_eq!(k.status, Status::NotAttempted);
    }

    #[test]
    fn suite_is_ordered_by_id() {
        let tasks = suite(&RunConfig::default());
        let ids: Vec<&str> = tasks.iter().map(|t| t.0).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
        for id in ids {
            lookup(id).unwrap();
        }
    }
}
