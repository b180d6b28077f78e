//! Quantized elementary symmetric polynomials `E_i^{[a,b]}`, their specializations
//! and partial derivatives.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::exec::{par_map, Mode};
use crate::hess::HessenbergFunction;
use crate::poly::{PolyMatrix, Polynomial, Substitution, VarId};
use crate::report::{Params, SubCheck, VerificationReport};

/// Largest `n` for the recursion/determinant comparison.
pub const MAX_N_IDENTITY: usize = 7;
/// Largest `n` for the derivative comparison.
pub const MAX_N_DERIVATIVE: usize = 6;

fn x(s: usize) -> Polynomial {
    Polynomial::var(VarId::x(s))
}

fn q(r: usize, s: usize) -> Polynomial {
    Polynomial::var(VarId::q(r, s))
}

/// All `E_i^{[a,b]}` with `1 <= a <= b <= n`, built eagerly by the recursion in `b`.
#[derive(Clone, Debug)]
pub struct QSym {
    n: usize,
    table: HashMap<(usize, usize, usize), Polynomial>,
}

impl QSym {
    pub fn new(n: usize) -> Self {
        let mut t = QSym {
            n,
            table: HashMap::new(),
        };
        for a in 1..=n {
            for b in a..=n {
                for i in 1..=b - a + 1 {
                    let mut e = t.lookup(i, a, b - 1);
                    e += t.lookup(i - 1, a, b - 1) * x(b);
                    for k in 1..i {
                        let lower = t.lookup(i - 1 - k, a, b - 1 - k);
                        if !lower.is_zero() {
                            e += lower * q(b - k, b);
                        }
                    }
                    t.table.insert((i, a, b), e);
                }
            }
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn lookup(&self, i: usize, a: usize, b: usize) -> Polynomial {
        if i == 0 {
            return Polynomial::one();
        }
        if b + 1 < a + i {
            return Polynomial::zero();
        }
        self.table[&(i, a, b)].clone()
    }

    /// `E_i^{[a,b]}` with `E_0 = 1` and `E_i = 0` whenever `i > b - a + 1`.
    pub fn e_interval(&self, i: usize, a: usize, b: usize) -> Result<Polynomial> {
        if i == 0 {
            return Ok(Polynomial::one());
        }
        if a < 1 || b > self.n {
            return Err(Error::IndexOutOfRange(format!(
                "E_{i}^[{a},{b}] with n = {}",
                self.n
            )));
        }
        Ok(self.lookup(i, a, b))
    }

    /// `E_i^{(b)} = E_i^{[1,b]}`.
    pub fn e(&self, i: usize, b: usize) -> Result<Polynomial> {
        if b == 0 {
            return Ok(if i == 0 {
                Polynomial::one()
            } else {
                Polynomial::zero()
            });
        }
        self.e_interval(i, 1, b)
    }

    /// `^hE_i^{[a,b]}`.
    pub fn e_interval_h(&self, i: usize, a: usize, b: usize, h: &HessenbergFunction) -> Result<Polynomial> {
        Ok(specialize_h(&self.e_interval(i, a, b)?, h))
    }

    /// `∂E_j^{(n)} / ∂q_{rs}` by the closed form, with `q_{ss} = x_s` when `r = s`.
    pub fn de_dq(&self, j: usize, r: usize, s: usize) -> Result<Polynomial> {
        let n = self.n;
        if !(1 <= r && r <= s && s <= n) || j > n {
            return Err(Error::IndexOutOfRange(format!(
                "dE_{j}/dq_{r}{s} with n = {n}"
            )));
        }
        if j <= s - r {
            return Ok(Polynomial::zero());
        }
        let i = j - (s - r);
        let mut out = Polynomial::zero();
        for k in 0..i {
            let left = self.e_interval(i - 1 - k, 1, r - 1)?;
            if left.is_zero() {
                continue;
            }
            let right = self.e_interval(k, s + 1, n)?;
            if !right.is_zero() {
                out += left * right;
            }
        }
        Ok(out)
    }

    /// `∂E_i^{(n)} / ∂x_s` by the closed form.
    pub fn de_dx(&self, i: usize, s: usize) -> Result<Polynomial> {
        self.de_dq(i, s, s)
    }
}

/// `E_i^{[a,b]}` from a fresh table.
pub fn e_interval(i: usize, a: usize, b: usize) -> Result<Polynomial> {
    if i == 0 {
        return Ok(Polynomial::one());
    }
    QSym::new(b.max(a)).e_interval(i, a, b)
}

/// `M_{[a,b]}`: `x_a..x_b` on the diagonal, `q_{rs}` above it, `-1` on the subdiagonal.
pub fn m_matrix(a: usize, b: usize) -> PolyMatrix {
    let size = (b + 1).saturating_sub(a);
    PolyMatrix::from_fn(size, size, |p, c| {
        let (r, s) = (a + p, a + c);
        if r == s {
            x(r)
        } else if r < s {
            q(r, s)
        } else if r == s + 1 {
            Polynomial::constant(-1)
        } else {
            Polynomial::zero()
        }
    })
}

/// `(-1)^i` times the coefficient of `lambda^{m-i}` in `det(lambda I - M_{[a,b]})`, `m = b-a+1`.
pub fn e_charpoly(i: usize, a: usize, b: usize) -> Result<Polynomial> {
    let m = (b + 1).saturating_sub(a);
    if a < 1 || i > m {
        return Err(Error::IndexOutOfRange(format!("E_{i}^[{a},{b}] by determinant")));
    }
    Ok(e_charpoly_all(a, b)?.swap_remove(i))
}

/// `[E_0, ..., E_m]` on `[a,b]` from a single characteristic polynomial.
pub fn e_charpoly_all(a: usize, b: usize) -> Result<Vec<Polynomial>> {
    if a < 1 {
        return Err(Error::IndexOutOfRange(format!("interval [{a},{b}]")));
    }
    let m = (b + 1).saturating_sub(a);
    let lambda = Polynomial::var(VarId::Lambda);
    let mat = m_matrix(a, b);
    let char_mat = PolyMatrix::from_fn(m, m, |p, c| {
        let e = -mat.get(p, c);
        if p == c {
            &lambda + &e
        } else {
            e
        }
    });
    let det = char_mat.determinant()?;
    Ok((0..=m)
        .map(|i| {
            let coeff = det.lambda_coefficient((m - i) as u32);
            if i % 2 == 1 {
                -coeff
            } else {
                coeff
            }
        })
        .collect())
}

/// Elementary symmetric `e_i(x_1..x_n)` by summing over `i`-subsets.
fn elementary_by_subsets(i: usize, n: usize) -> Polynomial {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == i)
        .map(|m| {
            (1..=n)
                .filter(|s| m & (1 << (s - 1)) != 0)
                .map(x)
                .product::<Polynomial>()
        })
        .sum()
}

/// Recursion against determinant on every interval, the printed `n = 3` values, the
/// classical limit `q = 0`, and the closed-form derivatives (`n <= 6`).
pub fn verify_e_recursion(n: usize) -> Result<VerificationReport> {
    verify_e_recursion_with(n, Mode::default())
}

pub fn verify_e_recursion_with(n: usize, mode: Mode) -> Result<VerificationReport> {
    if !(1..=MAX_N_IDENTITY).contains(&n) {
        return Err(Error::InvalidParams(format!("n = {n} outside 1..={MAX_N_IDENTITY}")));
    }
    let mut report = VerificationReport::new("e-recursion", Params::n(n));
    let table = QSym::new(n);
    let intervals: Vec<(usize, usize)> = (1..=n).flat_map(|a| (a..=n).map(move |b| (a, b))).collect();
    let diffs = par_map(mode, &intervals, |&(a, b)| {
        let dets = e_charpoly_all(a, b)?;
        let mut out = Vec::new();
        for (i, d) in dets.into_iter().enumerate() {
            out.push((i, table.e_interval(i, a, b)? - d));
        }
        Ok::<_, Error>(out)
    });
    let mut agree = SubCheck::new("recursion = determinant");
    for (&(a, b), d) in intervals.iter().zip(diffs) {
        for (i, diff) in d? {
            agree.record(diff, || format!("E_{i}^[{a},{b}]"));
        }
    }
    report.push(agree);

    let mut printed = SubCheck::new("printed values");
    if n >= 3 {
        let e3 = x(1) * x(2) * x(3) + x(1) * q(2, 3) + x(3) * q(1, 2) + q(1, 3);
        printed.record(table.e(3, 3)? - e3, || "E_3^(3)".into());
        printed.record(table.e(2, 2)? - (x(1) * x(2) + q(1, 2)), || "E_2^(2)".into());
    } else {
        printed.not_attempted("needs n >= 3");
    }
    report.push(printed);

    let mut classical = SubCheck::new("q = 0 gives elementary symmetric polynomials");
    let all_q: BTreeSet<VarId> = (2..=n)
        .flat_map(|s| (1..s).map(move |r| VarId::q(r, s)))
        .collect();
    for i in 1..=n {
        let diff = table.e(i, n)?.kill(&all_q) - elementary_by_subsets(i, n);
        classical.record(diff, || format!("e_{i}"));
    }
    report.push(classical);

    let mut derivs = SubCheck::new("closed-form derivatives");
    if n <= MAX_N_DERIVATIVE {
        for i in 1..=n {
            let e = table.e(i, n)?;
            for s in 1..=n {
                for r in 1..=s {
                    let d = table.de_dq(i, r, s)? - e.derivative(VarId::q_or_x(r, s));
                    derivs.record(d, || format!("dE_{i}/dq_{r}_{s}"));
                }
            }
        }
    } else {
        derivs.not_attempted(format!("n = {n} above {MAX_N_DERIVATIVE}"));
    }
    report.push(derivs);
    Ok(report.finish())
}

/// Set every `q_{rs}` in the zeroed set of `h` to zero.
pub fn specialize_h(p: &Polynomial, h: &HessenbergFunction) -> Polynomial {
    let kill: BTreeSet<VarId> = h
        .zeroed_q_set()
        .into_iter()
        .map(|(r, s)| VarId::q(r, s))
        .collect();
    p.kill(&kill)
}

/// `Ě_i^{(n)}`: drop `q_{rs}` with `s - r > 1` and rename `q_{s,s+1}` to `q_s`.
pub fn classical_specialization(i: usize, n: usize) -> Result<Polynomial> {
    if i < 1 || i > n {
        return Err(Error::IndexOutOfRange(format!("classical E_{i}^({n})")));
    }
    let e = QSym::new(n).e(i, n)?;
    let mut sigma = Substitution::new();
    for s in 2..=n {
        for r in 1..s {
            let img = if s == r + 1 {
                Polynomial::var(VarId::Qc(r as u8))
            } else {
                Polynomial::zero()
            };
            sigma.insert(VarId::q(r, s), img);
        }
    }
    e.substitute(&sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{poly, GradedDegree};

    #[test]
    fn small_values() {
        let t = QSym::new(3);
        assert_eq!(t.e(1, 2).unwrap(), poly("x_1 + x_2"));
        assert_eq!(t.e_interval(2, 1, 2).unwrap(), poly("x_1*x_2 + q_1_2"));
        assert_eq!(
            t.e(2, 3).unwrap(),
            poly("x_1*x_2 + x_1*x_3 + x_2*x_3 + q_1_2 + q_2_3")
        );
        assert_eq!(
            t.e_interval(3, 1, 3).unwrap(),
            poly("x_1*x_2*x_3 + x_1*q_2_3 + x_3*q_1_2 + q_1_3")
        );
        assert!(t.e_interval(0, 5, 3).unwrap().is_one());
        assert!(t.e_interval(0, 3, 2).unwrap().is_one());
        assert!(t.e_interval(2, 3, 3).unwrap().is_zero());
        assert!(t.e_interval(1, 1, 4).is_err());
    }

    #[test]
    fn determinant_agrees() {
        assert_eq!(e_charpoly(2, 2, 3).unwrap(), poly("x_2*x_3 + q_2_3"));
        assert_eq!(e_charpoly(1, 1, 4).unwrap(), poly("x_1 + x_2 + x_3 + x_4"));
        let t = QSym::new(4);
        for a in 1..=4 {
            for b in a..=4 {
                for i in 1..=b - a + 1 {
                    assert_eq!(t.e_interval(i, a, b).unwrap(), e_charpoly(i, a, b).unwrap());
                }
            }
        }
    }

    #[test]
    fn charpoly_constant_term_at_n3() {
        let lambda = Polynomial::var(VarId::Lambda);
        let m = m_matrix(1, 3);
        let c = PolyMatrix::from_fn(3, 3, |p, k| {
            let e = -m.get(p, k);
            if p == k {
                &lambda + &e
            } else {
                e
            }
        });
        let det = c.determinant().unwrap();
        assert_eq!(
            det.lambda_coefficient(0),
            -poly("x_1*x_2*x_3 + x_1*q_2_3 + x_3*q_1_2 + q_1_3")
        );
    }

    #[test]
    fn specialization() {
        let t = QSym::new(3);
        let pet = HessenbergFunction::peterson(3);
        assert_eq!(
            specialize_h(&t.e(3, 3).unwrap(), &pet),
            poly("x_1*x_2*x_3 + x_1*q_2_3 + x_3*q_1_2")
        );
        let full = HessenbergFunction::full(3);
        assert_eq!(specialize_h(&t.e(3, 3).unwrap(), &full), t.e(3, 3).unwrap());
        let id = HessenbergFunction::identity(3);
        assert_eq!(
            specialize_h(&t.e(2, 3).unwrap(), &id),
            poly("x_1*x_2 + x_1*x_3 + x_2*x_3")
        );
    }

    #[test]
    fn classical() {
        assert_eq!(classical_specialization(2, 2).unwrap(), poly("x_1*x_2 + qc_1"));
        assert_eq!(
            classical_specialization(2, 3).unwrap(),
            poly("x_1*x_2 + x_1*x_3 + x_2*x_3 + qc_1 + qc_2")
        );
        assert_eq!(
            classical_specialization(1, 5).unwrap(),
            poly("x_1 + x_2 + x_3 + x_4 + x_5")
        );
        assert!(classical_specialization(0, 3).is_err());
    }

    #[test]
    fn derivatives() {
        let t = QSym::new(3);
        assert_eq!(t.de_dx(3, 1).unwrap(), poly("x_2*x_3 + q_2_3"));
        assert_eq!(t.de_dx(3, 2).unwrap(), poly("x_1*x_3"));
        assert!(t.de_dq(2, 1, 2).unwrap().is_one());
        assert!(t.de_dq(2, 1, 3).unwrap().is_zero());
        assert!(t.de_dq(3, 1, 3).unwrap().is_one());
        for j in 1..=3 {
            let e = t.e(j, 3).unwrap();
            for s in 1..=3 {
                for r in 1..=s {
                    let v = VarId::q_or_x(r, s);
                    assert_eq!(t.de_dq(j, r, s).unwrap(), e.derivative(v));
                }
            }
        }
    }

    #[test]
    fn recursion_report() {
        for n in 1..=5 {
            let r = verify_e_recursion(n).unwrap();
            assert!(r.is_pass(), "n = {n}: {:?}", r.witnesses);
        }
        assert!(verify_e_recursion(8).is_err());
    }

    #[test]
    fn subset_oracle() {
        assert_eq!(elementary_by_subsets(2, 3), poly("x_1*x_2 + x_1*x_3 + x_2*x_3"));
        assert!(elementary_by_subsets(0, 4).is_one());
    }

    #[test]
    fn homogeneous_of_degree_2i() {
        let t = QSym::new(5);
        for b in 1..=5 {
            for i in 1..=b {
                assert_eq!(
                    t.e(i, b).unwrap().graded_degree(),
                    Ok(GradedDegree::Homogeneous(2 * i as u32))
                );
            }
        }
    }
}
