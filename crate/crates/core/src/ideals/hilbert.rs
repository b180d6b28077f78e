use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::groebner::{buchberger_in, term_limit, Exps, GroebnerBasis};
use crate::error::{Error, Result};
use crate::hess::HessenbergFunction;
use crate::poly::{GradedDegree, Polynomial, VarId};
use crate::report::{Params, SubCheck, VerificationReport};

/// One factor of a symbolic series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Factor {
    /// `1 - t^d`
    OneMinus(u32),
    /// `1 + t^2 + ... + t^{2k}`
    EvenGeometric(u32),
}

impl Factor {
    fn multiply(&self, c: &mut [i64]) {
        match *self {
            Factor::OneMinus(d) => {
                let d = d as usize;
                for i in (d..c.len()).rev() {
                    c[i] -= c[i - d];
                }
            }
            Factor::EvenGeometric(k) => {
                // (1 - t^{2k+2}) / (1 - t^2)
                Factor::OneMinus(2 * k + 2).multiply(c);
                divide_one_minus(c, 2);
            }
        }
    }

    /// `d -> exponent` of `(1 - t^d)`.
    fn canonical_into(&self, map: &mut BTreeMap<u32, i32>, sign: i32) {
        match *self {
            Factor::OneMinus(d) => *map.entry(d).or_default() += sign,
            Factor::EvenGeometric(k) => {
                *map.entry(2 * k + 2).or_default() += sign;
                *map.entry(2).or_default() -= sign;
            }
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Factor::OneMinus(d) => write!(f, "(1-t^{d})"),
            Factor::EvenGeometric(k) => {
                let parts: Vec<String> = (0..=k)
                    .map(|e| match e {
                        0 => "1".to_string(),
                        1 => "t^2".to_string(),
                        _ => format!("t^{}", 2 * e),
                    })
                    .collect();
                write!(f, "({})", parts.join("+"))
            }
        }
    }
}

fn divide_one_minus(c: &mut [i64], d: usize) {
    for i in d..c.len() {
        c[i] += c[i - d];
    }
}

/// `numerator / prod (1 - t^d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub numerator: Vec<Factor>,
    pub denominator: Vec<u32>,
}

impl Factorization {
    /// Every factor rewritten through `(1 - t^d)`, with zero exponents dropped.
    pub fn canonical(&self) -> BTreeMap<u32, i32> {
        let mut map = BTreeMap::new();
        for f in &self.numerator {
            f.canonical_into(&mut map, 1);
        }
        for &d in &self.denominator {
            *map.entry(d).or_default() -= 1;
        }
        map.retain(|_, e| *e != 0);
        map
    }

    pub fn expand(&self, bound: u32) -> Vec<i64> {
        let mut c = vec![0i64; bound as usize + 1];
        c[0] = 1;
        for f in &self.numerator {
            f.multiply(&mut c);
        }
        for &d in &self.denominator {
            divide_one_minus(&mut c, d as usize);
        }
        c
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num: Vec<Factor> = self.numerator.clone();
        num.sort();
        let mut den = self.denominator.clone();
        den.sort();
        if num.is_empty() {
            f.write_str("1")?;
        }
        for x in &num {
            write!(f, "{x}")?;
        }
        if !den.is_empty() {
            f.write_str(" / ")?;
            for d in den {
                write!(f, "(1-t^{d})")?;
            }
        }
        Ok(())
    }
}

/// Hilbert series truncated at `bound`, optionally with a closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSeries {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub factors: Option<Factorization>,
    /// coefficient of `t^i` for `0 <= i <= bound`
    pub coefficients: Vec<i64>,
    pub bound: u32,
}

impl HilbertSeries {
    pub fn from_factors(factors: Factorization, bound: u32) -> Self {
        let coefficients = factors.expand(bound);
        HilbertSeries {
            factors: Some(factors),
            coefficients,
            bound,
        }
    }

    pub fn from_coefficients(coefficients: Vec<i64>) -> Self {
        let bound = coefficients.len().saturating_sub(1) as u32;
        HilbertSeries {
            factors: None,
            coefficients,
            bound,
        }
    }

    pub fn canonical(&self) -> Option<BTreeMap<u32, i32>> {
        self.factors.as_ref().map(Factorization::canonical)
    }

    /// Expansions agree through the smaller bound, and closed forms agree when both exist.
    pub fn agrees_with(&self, other: &HilbertSeries) -> bool {
        let k = self.bound.min(other.bound) as usize + 1;
        if self.coefficients[..k] != other.coefficients[..k] {
            return false;
        }
        match (self.canonical(), other.canonical()) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }

    /// First degree where the expansions differ.
    pub fn first_difference(&self, other: &HilbertSeries) -> Option<usize> {
        let k = self.bound.min(other.bound) as usize + 1;
        (0..k).find(|&i| self.coefficients[i] != other.coefficients[i])
    }

    pub fn expansion_string(&self) -> String {
        let parts: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (i, 1) => format!("t^{i}"),
                (1, c) => format!("{c}t"),
                (i, c) => format!("{c}t^{i}"),
            })
            .collect();
        let body = if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        };
        format!("{body} + O(t^{})", self.bound + 1)
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.factors {
            Some(fac) => write!(f, "{fac} = {}", self.expansion_string()),
            None => f.write_str(&self.expansion_string()),
        }
    }
}

/// `prod_v 1/(1 - t^{deg v})`.
pub fn free_series(vars: &[VarId], bound: u32) -> Result<HilbertSeries> {
    let denominator = vars
        .iter()
        .map(|v| v.degree().ok_or(Error::UngradedVariable(*v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(HilbertSeries::from_factors(
        Factorization {
            numerator: Vec::new(),
            denominator,
        },
        bound,
    ))
}

/// Closed form on the coordinate side:
/// `prod_{j < i <= h(j)} 1/(1 - t^{2(i-j+1)}) * prod_{k=1}^{n-1} (1 + t^2 + ... + t^{2k})`.
pub fn product_series_coordinate(h: &HessenbergFunction, bound: u32) -> HilbertSeries {
    let n = h.n();
    let denominator = (1..n)
        .flat_map(|j| (j + 1..=h.at(j)).map(move |i| 2 * (i - j + 1) as u32))
        .collect();
    let numerator = (1..n as u32).map(Factor::EvenGeometric).collect();
    HilbertSeries::from_factors(
        Factorization {
            numerator,
            denominator,
        },
        bound,
    )
}

/// Closed form on the quantum side, read off from the generators: `n` variables of degree 2,
/// the surviving `q_{rs}` of degree `2(s-r+1)`, cut by relations of degrees `2, 4, ..., 2n`.
pub fn product_series_quantum(h: &HessenbergFunction, bound: u32) -> HilbertSeries {
    let n = h.n();
    let mut denominator = vec![2u32; n];
    denominator.extend(h.surviving_q_set().into_iter().map(|(r, s)| 2 * (s - r + 1) as u32));
    let numerator = (1..=n as u32).map(|k| Factor::OneMinus(2 * k)).collect();
    HilbertSeries::from_factors(
        Factorization {
            numerator,
            denominator,
        },
        bound,
    )
}

/// Count standard monomials of `basis` per degree up to `bound`.
pub fn standard_monomial_counts(basis: &GroebnerBasis, bound: u32) -> Vec<i64> {
    let ring = basis.ring();
    let leads = basis.lead_exps();
    let mut counts = vec![0i64; bound as usize + 1];
    let mut cur: Exps = smallvec::SmallVec::from_elem(0, ring.len());
    fn divisible(leads: &[Exps], e: &[u16]) -> bool {
        leads
            .iter()
            .any(|l| l.iter().zip(e).all(|(a, b)| a <= b))
    }
    fn go(
        k: usize,
        deg: u32,
        bound: u32,
        ring: &super::Ring,
        leads: &[Exps],
        cur: &mut Exps,
        counts: &mut [i64],
    ) {
        if k == cur.len() {
            counts[deg as usize] += 1;
            return;
        }
        let w = ring.weight(k);
        let mut d = deg;
        loop {
            go(k + 1, d, bound, ring, leads, cur, counts);
            d += w;
            if d > bound {
                break;
            }
            cur[k] += 1;
            if divisible(leads, cur) {
                break;
            }
        }
        cur[k] = 0;
    }
    if !divisible(&leads, &cur) {
        go(0, 0, bound, ring, &leads, &mut cur, &mut counts);
    }
    counts
}

/// Hilbert function of `R/(gens)` through degree `bound`, where `R` is generated by `vars`
/// together with every variable occurring in `gens`.
pub fn staircase_series(gens: &[Polynomial], vars: &[VarId], bound: u32) -> Result<HilbertSeries> {
    let gb = buchberger_in(gens, vars, Some(bound), term_limit())?;
    Ok(HilbertSeries::from_coefficients(standard_monomial_counts(
        &gb, bound,
    )))
}

/// Certificate that `gens` is a regular sequence in the polynomial ring on `vars`.
pub fn regular_sequence_certificate(
    gens: &[Polynomial],
    vars: &[VarId],
    bound: u32,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("regular-sequence", Params::default().with_trunc(bound));
    let mut all_vars: Vec<VarId> = vars.to_vec();
    for g in gens {
        all_vars.extend(g.variables());
    }
    all_vars.sort();
    all_vars.dedup();
    if gens.len() > all_vars.len() {
        return Err(Error::InvalidParams(format!(
            "{} generators in {} variables",
            gens.len(),
            all_vars.len()
        )));
    }
    let mut degrees = Vec::with_capacity(gens.len());
    for g in gens {
        match g.graded_degree()? {
            GradedDegree::Homogeneous(d) if d > 0 => degrees.push(d),
            GradedDegree::Inhomogeneous => return Err(Error::NotHomogeneous),
            _ => {
                return Err(Error::InvalidParams(
                    "regular sequence members must have positive degree".into(),
                ))
            }
        }
    }

    let gb = match buchberger_in(gens, &all_vars, Some(bound), term_limit()) {
        Ok(gb) => gb,
        Err(Error::ResourceLimit { terms, limit }) => {
            let mut s = SubCheck::new("hilbert series");
            s.inconclusive(format!("term ceiling reached ({terms} > {limit})"));
            report.push(s);
            return Ok(report.finish());
        }
        Err(e) => return Err(e),
    };
    let staircase = HilbertSeries::from_coefficients(standard_monomial_counts(&gb, bound));
    let free = free_series(&all_vars, bound)?;
    let mut fac = free.factors.clone().expect("free series has factors");
    fac.numerator.extend(degrees.iter().map(|&d| Factor::OneMinus(d)));
    let expected = HilbertSeries::from_factors(fac, bound);

    let mut s = SubCheck::new("hilbert series");
    s.record_bool(staircase.agrees_with(&expected), || {
        let d = staircase.first_difference(&expected).unwrap_or(0);
        format!(
            "degree {d}: staircase {} vs expected {}",
            staircase.coefficients[d], expected.coefficients[d]
        )
    });
    report.push(s);

    let mut z = SubCheck::new("origin only");
    if gens.len() == all_vars.len() {
        let ring = gb.ring();
        let leads = gb.lead_exps();
        for k in 0..ring.len() {
            let pure = leads
                .iter()
                .any(|l| l[k] > 0 && l.iter().enumerate().all(|(j, &e)| j == k || e == 0));
            z.checked += 1;
            if !pure {
                z.inconclusive(format!(
                    "no pure power of {} among leading terms through degree {bound}",
                    ring.vars()[k]
                ));
            }
        }
    } else {
        z.not_attempted("fewer generators than variables");
    }
    report.push(z);
    report.insert_data("staircase", serde_json::json!(staircase.coefficients));
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{poly, Polynomial};
    use crate::qsym::QSym;
    use crate::report::Status;

    #[test]
    fn single_square() {
        let s = staircase_series(&[poly("x_1^2")], &[], 8).unwrap();
        assert_eq!(s.coefficients, vec![1, 0, 1, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn free_ring() {
        let s = staircase_series(&[], &[VarId::x(1)], 6).unwrap();
        assert_eq!(s.coefficients, vec![1, 0, 1, 0, 1, 0, 1]);
        let v = [VarId::x(1), VarId::x(2), VarId::q(1, 2)];
        let s = staircase_series(&[], &v, 10).unwrap();
        assert!(s.agrees_with(&free_series(&v, 10).unwrap()));
    }

    #[test]
    fn n2_quantum_ring() {
        let t = QSym::new(2);
        let gens = [t.e(1, 2).unwrap(), t.e(2, 2).unwrap()];
        let vars = [VarId::x(1), VarId::x(2), VarId::q(1, 2)];
        let s = staircase_series(&gens, &vars, 12).unwrap();
        assert_eq!(s.coefficients, vec![1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]);
        let h = HessenbergFunction::full(2);
        assert!(s.agrees_with(&product_series_quantum(&h, 12)));
        assert!(s.agrees_with(&product_series_coordinate(&h, 12)));
    }

    #[test]
    fn product_formulas() {
        let pet = HessenbergFunction::peterson(3);
        let c = product_series_coordinate(&pet, 12);
        let expect = Factorization {
            numerator: vec![Factor::EvenGeometric(1), Factor::EvenGeometric(2)],
            denominator: vec![4, 4],
        };
        assert_eq!(c.coefficients, expect.expand(12));
        assert_eq!(c.to_string().split(" = ").next().unwrap(), "(1+t^2)(1+t^2+t^4) / (1-t^4)(1-t^4)");
        for n in 1..=5 {
            for h in HessenbergFunction::all(n) {
                let a = product_series_coordinate(&h, 30);
                let b = product_series_quantum(&h, 30);
                assert_eq!(a.canonical(), b.canonical(), "h = {h}");
                assert!(a.agrees_with(&b));
            }
        }
        // identity: Poincare polynomial of the flag variety, n! in total
        let id = product_series_coordinate(&HessenbergFunction::identity(4), 20);
        assert_eq!(id.coefficients.iter().sum::<i64>(), 24);
    }

    #[test]
    fn regular_sequences() {
        let r = regular_sequence_certificate(&[poly("x_1^2")], &[VarId::x(1), VarId::x(2)], 10).unwrap();
        assert_eq!(r.status, Status::Pass);
        let t = QSym::new(3);
        let mut gens: Vec<Polynomial> = (1..=3).map(|i| t.e(i, 3).unwrap()).collect();
        for (r, s) in [(1, 2), (2, 3), (1, 3)] {
            gens.push(Polynomial::var(VarId::q(r, s)));
        }
        let r = regular_sequence_certificate(&gens, &[], 16).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.to_text());
        // x_1 x_2, x_1^2 is not regular
        let r = regular_sequence_certificate(&[poly("x_1*x_2"), poly("x_1^2")], &[], 10).unwrap();
        assert_eq!(r.status, Status::Fail);
    }
}
