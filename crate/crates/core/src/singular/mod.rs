//! Jacobians, singular loci of `Hess(N,h_m) ∩ Ω_e°`, the cyclic quotient for `h_2` and
//! the Schubert description of the singular locus.

mod cyclic;
mod jacobian;
mod sampler;
mod schubert;

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::json;

pub use cyclic::{
    big_x, big_y, cyclic_quotient_certificate, forward_map, inverse_map, p_n,
    triangular_elimination, xyz_identity_check,
};
pub use jacobian::{
    coordinate_columns, coordinate_jacobian, hm_singular_equations, jacobian, jacobian_columns,
    rank_at, JacobianMatrix,
};
pub use sampler::{
    random_rational, sample_variety_point, sample_with, trial_rng, MAX_CONSECUTIVE_FAILURES,
};
pub use schubert::{r_w, schubert_minors, w_m, Permutation};
pub(crate) use schubert::combinations;

use crate::error::{Error, Result};
use crate::exec::{par_map, Mode};
use crate::flag::{ideal_generators, Flavor};
use crate::hess::HessenbergFunction;
use crate::ideals::{buchberger_in, flag_vars, term_limit, GroebnerBasis};
use crate::iso::{inverse_q, inverse_x, psi};
use crate::linalg::RatMatrix;
use crate::poly::{AffinePoint, PolyMatrix, Polynomial, VarId};
use crate::qsym::{specialize_h, QSym};
use crate::report::{Params, Status, SubCheck, VerificationReport};

/// Largest `n` accepted by [`verify_singular_locus`].
pub const MAX_N_LOCUS: usize = 6;
/// Largest `n` for the Schubert comparison.
pub const MAX_N_SCHUBERT: usize = 5;
/// Largest `n` for the ideal-level certificate.
pub const MAX_N_RADICAL: usize = 4;
/// Highest power tried when certifying `v ∈ rad(J)`.
pub const MAX_RADICAL_POWER: u32 = 3;
/// Off-locus samples are drawn in at most this many rounds of `trials`.
const MAX_SAMPLE_ROUNDS: usize = 10;
/// Seed offset separating locus points from variety samples.
const LOCUS_STREAM: u64 = 0x5151_5151;

fn check_m(m: usize, n: usize) -> Result<()> {
    if m < 2 || m + 1 > n {
        return Err(Error::IndexOutOfRange(format!("m = {m} needs 2 <= m <= n-1, n = {n}")));
    }
    Ok(())
}

/// `{x_{i1} : 2 <= i <= n} ∪ {x_{nj} : 2 <= j <= m}`.
pub fn claimed_singular_locus(m: usize, n: usize) -> Result<Vec<VarId>> {
    check_m(m, n)?;
    let mut out: Vec<VarId> = (2..=n).map(|i| VarId::flag(i, 1)).collect();
    out.extend((2..=m).map(|j| VarId::flag(n, j)));
    Ok(out)
}

fn show_point(pt: &AffinePoint) -> String {
    let parts: Vec<String> = pt.iter().map(|(v, x)| format!("{v}={x}")).collect();
    parts.join(", ")
}

/// `E_{n-i+1}^{[i,n]}` with `q_{kn} = 0` for `i < k < n` equals `x_n E_{n-i}^{[i,n-1]} + q_{in}`.
pub fn inductive_identity_check(n: usize) -> Result<VerificationReport> {
    if !(2..=7).contains(&n) {
        return Err(Error::InvalidParams(format!("n = {n} outside 2..=7")));
    }
    let mut report = VerificationReport::new("inductive-identity", Params::n(n));
    let table = QSym::new(n);
    let mut sub = SubCheck::new("last-column expansion");
    for i in 1..n {
        let killed: BTreeSet<VarId> = (i + 1..n).map(|k| VarId::q(k, n)).collect();
        let lhs = table.e_interval(n - i + 1, i, n)?.kill(&killed);
        let rhs = Polynomial::var(VarId::x(n)) * table.e_interval(n - i, i, n - 1)?
            + Polynomial::var(VarId::q(i, n));
        sub.record(lhs - rhs, || format!("i = {i}"));
    }
    report.push(sub);
    Ok(report.finish())
}

/// Everything the per-point checks need, built once.
struct LocusData {
    n: usize,
    m: usize,
    h: HessenbergFunction,
    claimed: BTreeSet<VarId>,
    gens: Vec<Polynomial>,
    coord_jac: PolyMatrix,
    quantum_jac: JacobianMatrix,
    hess_e: Vec<Polynomial>,
    /// `(x_s or q_rs, its preimage in the chart)`
    pullback: Vec<(VarId, Polynomial)>,
}

impl LocusData {
    fn new(m: usize, n: usize) -> Result<Self> {
        let h = HessenbergFunction::h_m(m, n)?;
        let gens = ideal_generators(&h, Flavor::F)?;
        let quantum_jac = jacobian(&h)?;
        let table = QSym::new(n);
        let hess_e = (1..=n)
            .map(|i| Ok(specialize_h(&table.e(i, n)?, &h)))
            .collect::<Result<Vec<_>>>()?;
        let mut pullback = Vec::new();
        for &(r, s) in &quantum_jac.columns {
            let img = if r == s { inverse_x(s, n)? } else { inverse_q(r, s, n)? };
            pullback.push((VarId::q_or_x(r, s), img));
        }
        Ok(LocusData {
            n,
            m,
            claimed: claimed_singular_locus(m, n)?.into_iter().collect(),
            coord_jac: coordinate_jacobian(&gens, n),
            gens,
            h,
            quantum_jac,
            hess_e,
            pullback,
        })
    }

    fn codim(&self) -> usize {
        self.n - self.m
    }

    fn on_locus(&self, pt: &AffinePoint) -> bool {
        self.claimed.iter().all(|v| pt.get(*v).is_some_and(|x| x.is_zero()))
    }
}

/// What one sampled point showed.
struct PointOutcome {
    on_locus: bool,
    failures: Vec<String>,
}

fn examine_point(data: &LocusData, pt: &AffinePoint) -> Result<PointOutcome> {
    let on_locus = data.on_locus(pt);
    let mut failures = Vec::new();
    for (k, g) in data.gens.iter().enumerate() {
        if !g.evaluate(pt)?.is_zero() {
            failures.push(format!("generator {} nonzero at {}", k + 1, show_point(pt)));
        }
    }
    let coord: RatMatrix = data.coord_jac.evaluate(pt)?;
    let deficient = coord.rank() < data.codim();
    if deficient != on_locus {
        failures.push(format!(
            "coordinate Jacobian rank {} (codimension {}), on claimed locus: {on_locus}, point {}",
            coord.rank(),
            data.codim(),
            show_point(pt)
        ));
    }
    let mut qpt = AffinePoint::new();
    for (v, img) in &data.pullback {
        qpt.set(*v, img.evaluate(pt)?);
    }
    for (i, e) in data.hess_e.iter().enumerate() {
        if !e.evaluate(&qpt)?.is_zero() {
            failures.push(format!("E_{} nonzero at the image of {}", i + 1, show_point(pt)));
        }
    }
    let quantum = data.quantum_jac.evaluate(&qpt)?;
    let q_deficient = quantum.rank() < data.n;
    let last_row_zero = quantum.row_is_zero(data.n - 1);
    if q_deficient != last_row_zero || q_deficient != deficient {
        failures.push(format!(
            "quantum rank {}, last row zero: {last_row_zero}, coordinate deficient: {deficient}, point {}",
            quantum.rank(),
            show_point(pt)
        ));
    }
    Ok(PointOutcome { on_locus, failures })
}

fn containment(data: &LocusData) -> Result<SubCheck> {
    let mut sub = SubCheck::new("containment (exact)");
    for (k, g) in data.gens.iter().enumerate() {
        sub.record(g.kill(&data.claimed), || format!("generator {} on the locus", k + 1));
    }
    let killed = data.coord_jac.map(|p| p.kill(&data.claimed));
    let live: Vec<usize> = (0..killed.cols())
        .filter(|&c| (0..killed.rows()).any(|r| !killed.get(r, c).is_zero()))
        .collect();
    let rows: Vec<usize> = (0..killed.rows()).collect();
    for cols in combinations(&live, data.codim()) {
        let minor = killed.submatrix(&rows, &cols).determinant()?;
        sub.record(minor, || format!("maximal minor on columns {cols:?}"));
    }
    Ok(sub)
}

fn genericity(data: &LocusData, trials: usize, seed: u64, mode: Mode) -> Result<(SubCheck, usize, usize)> {
    let mut sub = SubCheck::new("genericity (sampled)");
    let (mut off, mut on) = (0usize, 0usize);
    let mut next = 0u64;
    for _ in 0..MAX_SAMPLE_ROUNDS {
        if off >= trials {
            break;
        }
        let batch: Vec<u64> = (next..next + (trials - off) as u64).collect();
        next += batch.len() as u64;
        let outcomes = par_map(mode, &batch, |&t| {
            let pt = sample_with(&data.h, &mut trial_rng(seed, t))?;
            examine_point(data, &pt)
        });
        for o in outcomes {
            let o = o?;
            if o.on_locus {
                on += 1;
            } else {
                off += 1;
            }
            sub.checked += 1;
            for f in o.failures {
                sub.fail(f);
            }
        }
    }
    if off < trials && sub.status != Status::Fail {
        sub.inconclusive(format!("only {off} of {trials} samples left the claimed locus"));
    }
    Ok((sub, off, on))
}

/// Random points of `V(claimed)`: all must have a deficient Jacobian.
fn locus_points(data: &LocusData, count: usize, seed: u64, mode: Mode) -> Result<SubCheck> {
    let mut sub = SubCheck::new("points on the claimed locus (sampled)");
    let ids: Vec<u64> = (0..count as u64).collect();
    let outcomes = par_map(mode, &ids, |&t| {
        let mut rng = trial_rng(seed ^ LOCUS_STREAM, t);
        let mut pt = AffinePoint::new();
        for v in flag_vars(data.n) {
            let val = if data.claimed.contains(&v) {
                BigRational::zero()
            } else {
                random_rational(&mut rng)
            };
            pt.set(v, val);
        }
        examine_point(data, &pt)
    });
    for o in outcomes {
        sub.checked += 1;
        for f in o?.failures {
            sub.fail(f);
        }
    }
    Ok(sub)
}

fn schubert_match(data: &LocusData, groebner: bool) -> Result<SubCheck> {
    let mut sub = SubCheck::new("Schubert rank conditions");
    if data.n > MAX_N_SCHUBERT || !groebner {
        sub.not_attempted(format!("n = {} above the limit for this check", data.n));
        return Ok(sub);
    }
    let w = w_m(data.m, data.n)?;
    let minors = schubert_minors(&w)?;
    for d in &minors {
        sub.record(d.kill(&data.claimed), || format!("minor {d} on the locus"));
    }
    let bound = 2 * (data.n as u32 - 1);
    let gb = buchberger_in(&minors, &flag_vars(data.n), Some(bound), term_limit());
    membership_of_vars(&mut sub, &gb, &data.claimed, 1);
    Ok(sub)
}

/// Record whether some power `v^k`, `k <= max_power`, of each variable lies in the ideal.
fn membership_of_vars(
    sub: &mut SubCheck,
    gb: &Result<GroebnerBasis>,
    vars: &BTreeSet<VarId>,
    max_power: u32,
) {
    let gb = match gb {
        Ok(gb) => gb,
        Err(Error::ResourceLimit { terms, limit }) => {
            sub.inconclusive(format!("term ceiling reached ({terms} > {limit})"));
            return;
        }
        Err(e) => {
            sub.fail(format!("basis construction failed: {e}"));
            return;
        }
    };
    for v in vars {
        let mut found = false;
        for k in 1..=max_power {
            match gb.member(&Polynomial::var(*v).pow(k)) {
                Ok(true) => {
                    found = true;
                    break;
                }
                Ok(false) => {}
                Err(_) => break,
            }
        }
        if found {
            sub.checked += 1;
        } else if max_power == 1 {
            sub.fail(format!("{v} not in the ideal"));
        } else {
            sub.inconclusive(format!("no power of {v} up to {max_power} found in the ideal"));
        }
    }
}

/// `ψ` of the last-row partials together with the `F` generators has radical `(claimed)`.
fn radical_certificate(data: &LocusData, groebner: bool) -> Result<SubCheck> {
    let mut sub = SubCheck::new(format!("radical certificate, m = {}", data.m));
    if data.n > MAX_N_RADICAL || !groebner {
        sub.not_attempted(format!("n = {} above the limit for this check", data.n));
        return Ok(sub);
    }
    let mut gens = Vec::new();
    for e in hm_singular_equations(data.m, data.n)? {
        let p = psi(&e, data.n)?;
        sub.record(p.kill(&data.claimed), || format!("pullback of {e} on the locus"));
        gens.push(p);
    }
    gens.extend(ideal_generators(&data.h, Flavor::F)?);
    let gens: Vec<Polynomial> = gens.into_iter().filter(|p| !p.is_zero()).collect();
    let bound = MAX_RADICAL_POWER * 2 * (data.n as u32 - 1);
    let gb = buchberger_in(&gens, &flag_vars(data.n), Some(bound), term_limit());
    membership_of_vars(&mut sub, &gb, &data.claimed, MAX_RADICAL_POWER);
    Ok(sub)
}

/// The singular locus of `Hess(N,h_m) ∩ Ω_e°` is `V(claimed)`: exact containment, sampled
/// genericity, the Schubert rank conditions and, for small `n`, a radical certificate.
pub fn verify_singular_locus(m: usize, n: usize, trials: usize, seed: u64) -> Result<VerificationReport> {
    verify_singular_locus_with(m, n, trials, seed, Mode::default(), true)
}

pub fn verify_singular_locus_with(
    m: usize,
    n: usize,
    trials: usize,
    seed: u64,
    mode: Mode,
    groebner: bool,
) -> Result<VerificationReport> {
    check_m(m, n)?;
    if n > MAX_N_LOCUS {
        return Err(Error::InvalidParams(format!("n = {n} above {MAX_N_LOCUS}")));
    }
    let mut report = VerificationReport::new(
        "singular-hm",
        Params::n(n).with_m(m).with_trials(trials).with_seed(seed),
    );
    let data = LocusData::new(m, n)?;
    report.insert_data(
        "claimed_locus",
        json!(data.claimed.iter().map(|v| v.to_string()).collect::<Vec<_>>()),
    );
    report.push(containment(&data)?);
    let (gen, off, on) = genericity(&data, trials, seed, mode)?;
    report.insert_data("samples_off_locus", json!(off));
    report.insert_data("samples_on_locus", json!(on));
    report.push(gen);
    report.push(locus_points(&data, (trials / 5).max(5), seed, mode)?);
    report.push(schubert_match(&data, groebner)?);
    report.push(radical_certificate(&data, groebner)?);

    let mut step = SubCheck::new("inductive step");
    if m == 2 {
        step.not_attempted("base case");
    } else if n > MAX_N_RADICAL || !groebner {
        step.not_attempted(format!("n = {n} above the limit for this check"));
    } else {
        let prev = LocusData::new(m - 1, n)?;
        let mut expected = prev.claimed.clone();
        expected.insert(VarId::flag(n, m));
        step.record_bool(expected == data.claimed, || {
            "locus for m differs from locus for m-1 plus x_{n,m}".into()
        });
        let cert = radical_certificate(&prev, true)?;
        step.checked += cert.checked;
        match cert.status {
            Status::Pass => {}
            Status::Fail => step.fail(format!("m-1 certificate failed: {:?}", cert.witnesses)),
            _ => step.inconclusive(cert.reason.unwrap_or_default()),
        }
    }
    report.push(step);
    Ok(report.finish())
}

/// `Pet_3`: the last-row partials cut out `x_1 = x_3 = q_12 = q_23 = 0`, pulled back to `{eB}`.
pub fn pet3_singular_check() -> Result<VerificationReport> {
    let h = HessenbergFunction::peterson(3);
    let mut report = VerificationReport::new("pet3-singular", Params::n_h(&h));
    let eqs = hm_singular_equations(2, 3)?;
    report.insert_data(
        "equations",
        json!(eqs.iter().map(|p| p.to_string()).collect::<Vec<_>>()),
    );
    let quantum: BTreeSet<VarId> =
        [VarId::x(1), VarId::x(3), VarId::q(1, 2), VarId::q(2, 3)].into_iter().collect();
    let qvars: Vec<VarId> = jacobian_columns(&h).iter().map(|&(r, s)| VarId::q_or_x(r, s)).collect();
    let mut qside = SubCheck::new("solution set of the partials");
    for g in &eqs {
        qside.record(g.kill(&quantum), || format!("{g} at x_1 = x_3 = q_12 = q_23 = 0"));
    }
    let gb = buchberger_in(&eqs, &qvars, Some(8), term_limit());
    membership_of_vars(&mut qside, &gb, &quantum, 1);
    report.push(qside);

    let origin: BTreeSet<VarId> = qvars.iter().copied().collect();
    let mut with_e = SubCheck::new("together with the relations: the origin");
    let table = QSym::new(3);
    let mut gens = eqs.clone();
    for i in 1..=3 {
        gens.push(specialize_h(&table.e(i, 3)?, &h));
    }
    let gb = buchberger_in(&gens, &qvars, Some(8), term_limit());
    membership_of_vars(&mut with_e, &gb, &origin, 1);
    report.push(with_e);

    let data = LocusData::new(2, 3)?;
    let mut cside = radical_certificate(&data, true)?;
    cside.name = "coordinate solution set {eB}".into();
    report.push(cside);
    report.insert_data(
        "solution",
        json!(quantum.iter().map(|v| v.to_string()).collect::<Vec<_>>()),
    );
    Ok(report.finish())
}

/// Closed-form Jacobians against derivatives, their zero pattern, and full rank of the
/// full-flag Jacobian at random points.
pub fn verify_jacobian(n: usize, trials: usize, seed: u64) -> Result<VerificationReport> {
    if !(2..=MAX_N_LOCUS).contains(&n) {
        return Err(Error::InvalidParams(format!("n = {n} outside 2..={MAX_N_LOCUS}")));
    }
    let mut report = VerificationReport::new(
        "jacobian",
        Params::n(n).with_trials(trials).with_seed(seed),
    );
    let mut hs = vec![HessenbergFunction::peterson(n), HessenbergFunction::full(n)];
    for m in 2..n {
        hs.push(HessenbergFunction::h_m(m, n)?);
    }
    hs.dedup();
    let mut pattern = SubCheck::new("zero pattern and unit entries");
    for h in &hs {
        let j = jacobian(h)?;
        report.push(j.check_against_derivatives());
        pattern.record_bool(
            j.columns.len() == n + h.surviving_q_set().len(),
            || format!("column count for {h}"),
        );
        for &(r, s) in &j.columns {
            for i in 1..=s - r {
                pattern.record(j.entry(i, r, s).expect("column").clone(), || {
                    format!("entry ({i}, q_{r}_{s}) for {h}")
                });
            }
            pattern.record_bool(j.entry(s - r + 1, r, s).expect("column").is_one(), || {
                format!("entry ({}, q_{r}_{s}) for {h}", s - r + 1)
            });
        }
    }
    report.push(pattern);

    let full = jacobian(&HessenbergFunction::full(n))?;
    let vars = full.column_vars();
    let mut rank = SubCheck::new("full rank for the full flag variety");
    let trial_ids: Vec<u64> = (0..trials as u64).collect();
    let ranks = par_map(Mode::default(), &trial_ids, |&t| {
        let mut rng = trial_rng(seed, t);
        let mut pt = AffinePoint::new();
        for v in &vars {
            pt.set(*v, random_rational(&mut rng));
        }
        full.evaluate(&pt).map(|m| (m.rank(), pt))
    });
    for r in ranks {
        let (k, pt) = r?;
        rank.record_bool(k == n, || format!("rank {k} at {}", show_point(&pt)));
    }
    report.push(rank);
    Ok(report.finish())
}
