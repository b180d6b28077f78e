//! Coordinates on the opposite Schubert cell: the unipotent matrix `g`, the defining
//! polynomials `F_{i,j}` and the truncated determinants `F̃^{<m>}_{i,j}`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hess::HessenbergFunction;
use crate::poly::{PolyMatrix, Polynomial, VarId};
use crate::report::{Params, SubCheck, VerificationReport};

/// Entry `g_{kc}` (1-based) of the lower unitriangular matrix; `g_{n+1,c} = 0`.
pub fn g_entry(k: usize, c: usize, n: usize) -> Polynomial {
    if k > n || k < c {
        Polynomial::zero()
    } else if k == c {
        Polynomial::one()
    } else {
        Polynomial::var(VarId::flag(k, c))
    }
}

/// `(Ng)_{kj} = g_{k+1,j}` for the Jordan block `N`.
pub fn ng_entry(k: usize, j: usize, n: usize) -> Polynomial {
    g_entry(k + 1, j, n)
}

/// The symbolic matrix `g`.
pub fn unipotent(n: usize) -> PolyMatrix {
    PolyMatrix::from_fn(n, n, |i, j| g_entry(i + 1, j + 1, n))
}

/// The regular nilpotent Jordan block with ones on the superdiagonal.
pub fn jordan(n: usize) -> PolyMatrix {
    PolyMatrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            Polynomial::one()
        } else {
            Polynomial::zero()
        }
    })
}

/// `g^{-1} = sum_k (-L)^k` where `L = g - I` is strictly lower triangular.
pub fn unipotent_inverse(n: usize) -> PolyMatrix {
    let neg_l = PolyMatrix::from_fn(n, n, |i, j| {
        if i > j {
            -g_entry(i + 1, j + 1, n)
        } else {
            Polynomial::zero()
        }
    });
    let mut acc = PolyMatrix::identity(n);
    let mut power = PolyMatrix::identity(n);
    for _ in 1..n {
        power = power.mul(&neg_l).expect("square");
        acc = acc.add(&power).expect("square");
    }
    acc
}

fn check_ij(i: usize, j: usize, n: usize) -> Result<()> {
    if j < 1 || j >= i || i > n {
        return Err(Error::IndexOutOfRange(format!("F_{{{i},{j}}} with n = {n}")));
    }
    Ok(())
}

/// Rows `a..=i`, columns `a..i` of `g` plus the column `(Ng)_{*,j}`, where `a = max(j-1, 1)`.
pub fn f_matrix(i: usize, j: usize, n: usize) -> Result<PolyMatrix> {
    check_ij(i, j, n)?;
    let a = j.saturating_sub(1).max(1);
    let size = i - a + 1;
    Ok(PolyMatrix::from_fn(size, size, |p, c| {
        let row = a + p;
        if c + 1 == size {
            ng_entry(row, j, n)
        } else {
            g_entry(row, a + c, n)
        }
    }))
}

/// `F_{i,j}` for `1 <= j < i <= n`.
pub fn f(i: usize, j: usize, n: usize) -> Result<Polynomial> {
    f_matrix(i, j, n)?.determinant()
}

/// `F_{i,j}` straight from the definition: the full `n x n` determinant of `g`
/// with column `i` replaced by column `j` of `Ng`.
pub fn f_by_definition(i: usize, j: usize, n: usize) -> Result<Polynomial> {
    check_ij(i, j, n)?;
    PolyMatrix::from_fn(n, n, |r, c| {
        if c + 1 == i {
            ng_entry(r + 1, j, n)
        } else {
            g_entry(r + 1, c + 1, n)
        }
    })
    .determinant()
}

/// Entry `(i, j)` of `g^{-1} N g`, from the symbolic inverse.
pub fn conj_entry(i: usize, j: usize, n: usize) -> Result<Polynomial> {
    if i < 1 || j < 1 || i > n || j > n {
        return Err(Error::IndexOutOfRange(format!("({i},{j}) with n = {n}")));
    }
    let inv = unipotent_inverse(n);
    Ok((1..=n)
        .map(|k| inv.get(i - 1, k - 1) * &ng_entry(k, j, n))
        .sum())
}

/// Every entry of `g^{-1} N g`.
pub fn conj_matrix(n: usize) -> PolyMatrix {
    unipotent_inverse(n)
        .mul(&jordan(n).mul(&unipotent(n)).expect("square"))
        .expect("square")
}

/// `F̃^{<m>}_{i,j}`: rows `a..=m` and `i`, columns `a..=m` of `g` plus `(Ng)_{*,j}`.
pub fn f_tilde(i: usize, j: usize, m: usize, n: usize) -> Result<Polynomial> {
    if !(1 <= j && j < n && j <= m && m < n && m < i && i <= n) {
        return Err(Error::IndexOutOfRange(format!(
            "F~^<{m}>_{{{i},{j}}} with n = {n}"
        )));
    }
    let a = j.saturating_sub(1).max(1);
    let rows: Vec<usize> = (a..=m).chain(std::iter::once(i)).collect();
    let size = rows.len();
    PolyMatrix::from_fn(size, size, |p, c| {
        if c + 1 == size {
            ng_entry(rows[p], j, n)
        } else {
            g_entry(rows[p], a + c, n)
        }
    })
    .determinant()
}

/// Which family of determinants generates the ideal of `Hess(N,h)` in the chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    F,
    FTilde,
}

/// A generator together with its indices, for reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub i: usize,
    pub j: usize,
    /// truncation level for `F̃`, `None` for `F`
    pub m: Option<usize>,
    pub poly: Polynomial,
}

impl Generator {
    pub fn label(&self) -> String {
        match self.m {
            None => format!("F_{{{},{}}}", self.i, self.j),
            Some(m) => format!("F~^<{m}>_{{{},{}}}", self.i, self.j),
        }
    }
}

/// Generators ordered by `j`, then `i`.
pub fn ideal_generators_labeled(h: &HessenbergFunction, flavor: Flavor) -> Result<Vec<Generator>> {
    let n = h.n();
    let mut out = Vec::new();
    match flavor {
        Flavor::F => {
            for j in 1..n {
                for i in h.at(j) + 1..=n {
                    out.push(Generator {
                        i,
                        j,
                        m: None,
                        poly: f(i, j, n)?,
                    });
                }
            }
        }
        Flavor::FTilde => {
            if !h.is_indecomposable() || h.is_full() {
                return Err(Error::UnsupportedFlavor(format!(
                    "truncated generators need an indecomposable, non-full h; got {h}"
                )));
            }
            for j in 1..n.saturating_sub(1) {
                let m = h.at(j);
                if m >= n {
                    continue;
                }
                for i in m + 1..=n {
                    out.push(Generator {
                        i,
                        j,
                        m: Some(m),
                        poly: f_tilde(i, j, m, n)?,
                    });
                }
            }
        }
    }
    Ok(out)
}

pub fn ideal_generators(h: &HessenbergFunction, flavor: Flavor) -> Result<Vec<Polynomial>> {
    Ok(ideal_generators_labeled(h, flavor)?
        .into_iter()
        .map(|g| g.poly)
        .collect())
}

/// Checks `F̃^{<m>} = F̃^{<m-1>} - x_{im} F̃^{<m-1>}_{m,j}` and
/// `F_{i,j} = F̃^{<m>}_{i,j} - sum_{l=m+1}^{i-1} x_{il} F_{l,j}` for every admissible triple.
pub fn verify_f_recursions(n: usize) -> VerificationReport {
    let mut report = VerificationReport::new("f-recursions", Params::n(n));
    let mut fs: BTreeMap<(usize, usize), Polynomial> = BTreeMap::new();
    for j in 1..n {
        for i in j + 1..=n {
            fs.insert((i, j), f(i, j, n).expect("valid indices"));
        }
    }
    let xv = |i: usize, l: usize| Polynomial::var(VarId::flag(i, l));
    let mut step = SubCheck::new("truncation step");
    let mut transition = SubCheck::new("transition to F");
    let mut boundary = SubCheck::new("boundary F~^<i-1> = F");
    for j in 1..n {
        for m in j..n {
            for i in m + 1..=n {
                let ft = f_tilde(i, j, m, n).expect("valid indices");
                if m > j {
                    let lhs = f_tilde(i, j, m - 1, n).expect("valid")
                        - xv(i, m) * f_tilde(m, j, m - 1, n).expect("valid");
                    step.record(&ft - &lhs, || format!("(i,j,m)=({i},{j},{m})"));
                }
                let rhs: Polynomial = &ft
                    - (m + 1..i)
                        .map(|l| xv(i, l) * &fs[&(l, j)])
                        .sum::<Polynomial>();
                transition.record(&fs[&(i, j)] - &rhs, || format!("(i,j,m)=({i},{j},{m})"));
                if m + 1 == i {
                    boundary.record(&fs[&(i, j)] - &ft, || format!("(i,j)=({i},{j})"));
                }
            }
        }
    }
    report.push(step);
    report.push(transition);
    report.push(boundary);
    report.finish()
}

/// Bidirectional triangular reduction between the `F` and `F̃` generators of `h`:
/// every generator of one family is written as an explicit combination of the other
/// and the combination is checked exactly.
pub fn verify_ideal_equality(h: &HessenbergFunction) -> VerificationReport {
    let n = h.n();
    let mut report = VerificationReport::new("f-ideal-equality", Params::n_h(h));
    if !h.is_indecomposable() || h.is_full() {
        report.not_attempted("requires an indecomposable, non-full h");
        return report;
    }
    let xv = |i: usize, l: usize| Polynomial::var(VarId::flag(i, l));
    let mut forward = SubCheck::new("F in (F~)");
    let mut backward = SubCheck::new("F~ in (F)");
    for j in 1..n.saturating_sub(1) {
        let m = h.at(j);
        if m >= n {
            continue;
        }
        let ft: BTreeMap<usize, Polynomial> = (m + 1..=n)
            .map(|i| (i, f_tilde(i, j, m, n).expect("valid")))
            .collect();
        let fv: BTreeMap<usize, Polynomial> =
            (m + 1..=n).map(|i| (i, f(i, j, n).expect("valid"))).collect();
        // F_i = sum_l c_{il} F~_l, c_i = e_i - sum_{l=m+1}^{i-1} x_{il} c_l
        let mut coeffs: BTreeMap<usize, BTreeMap<usize, Polynomial>> = BTreeMap::new();
        for i in m + 1..=n {
            let mut c: BTreeMap<usize, Polynomial> = BTreeMap::new();
            c.insert(i, Polynomial::one());
            for l in m + 1..i {
                for (k, cl) in &coeffs[&l] {
                    let e = c.entry(*k).or_default();
                    *e -= xv(i, l) * cl;
                }
            }
            let combo: Polynomial = c.iter().map(|(k, ck)| ck * &ft[k]).sum();
            forward.record(&fv[&i] - &combo, || format!("F_{{{i},{j}}}"));
            coeffs.insert(i, c);
            let back: Polynomial = &fv[&i] + (m + 1..i).map(|l| xv(i, l) * &fv[&l]).sum::<Polynomial>();
            backward.record(&ft[&i] - &back, || format!("F~^<{m}>_{{{i},{j}}}"));
        }
    }
    report.push(forward);
    report.push(backward);
    report.finish()
}

/// Whether the determinant path and the inverse path agree for every `j < i <= n`.
pub fn verify_conj_entries(n: usize) -> VerificationReport {
    let mut report = VerificationReport::new("f-conj", Params::n(n));
    let conj = conj_matrix(n);
    let mut sub = SubCheck::new("F = (g^-1 N g)_ij");
    for j in 1..n {
        for i in j + 1..=n {
            let d = f(i, j, n).expect("valid") - conj.get(i - 1, j - 1);
            sub.record(d, || format!("(i,j)=({i},{j})"));
        }
    }
    report.push(sub);
    report.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{poly, GradedDegree};
    use crate::report::Status;

    #[test]
    fn small_f() {
        assert_eq!(f(2, 1, 2).unwrap(), poly("-x_2_1^2"));
        assert_eq!(
            f(3, 1, 3).unwrap(),
            poly("x_2_1^2*x_3_2 - x_2_1*x_3_1 - x_3_1*x_3_2")
        );
        assert_eq!(f(2, 1, 3).unwrap(), poly("x_3_1 - x_2_1^2"));
        assert!(f(1, 2, 3).is_err());
        assert!(f(4, 1, 3).is_err());
    }

    #[test]
    fn definition_and_conjugation_agree() {
        for n in 2..=5 {
            let conj = conj_matrix(n);
            for j in 1..n {
                for i in j + 1..=n {
                    let fij = f(i, j, n).unwrap();
                    assert_eq!(fij, f_by_definition(i, j, n).unwrap(), "({i},{j}) n={n}");
                    assert_eq!(&fij, conj.get(i - 1, j - 1), "({i},{j}) n={n}");
                    assert_eq!(fij, conj_entry(i, j, n).unwrap());
                }
            }
        }
    }

    #[test]
    fn conjugate_at_origin_is_n() {
        let c = conj_matrix(4);
        for i in 1..=4 {
            for j in 1..=4 {
                let expect = if j == i + 1 { 1 } else { 0 };
                assert_eq!(c.get(i - 1, j - 1).constant_term(), expect.into());
            }
        }
    }

    #[test]
    fn inverse_is_inverse() {
        let g = unipotent(4);
        let prod = g.mul(&unipotent_inverse(4)).unwrap();
        assert_eq!(prod, PolyMatrix::identity(4));
        assert!(g.determinant().unwrap().is_one());
    }

    #[test]
    fn truncated_examples() {
        assert_eq!(
            f_tilde(3, 1, 2, 3).unwrap(),
            poly("x_2_1^2*x_3_2 - x_2_1*x_3_1 - x_3_1*x_3_2")
        );
        for n in 3..=6 {
            for i in 2..=n {
                let next = if i < n {
                    format!("x_{}_1 - ", i + 1)
                } else {
                    "-".to_string()
                };
                let expect = poly(&format!("{next}x_{i}_1*x_2_1"));
                assert_eq!(f_tilde(i, 1, 1, n).unwrap(), expect);
            }
            for j in 2..n {
                for i in j + 1..=n {
                    let mut s = format!(
                        "x_{j}_{jm}*x_{i}_{j} - x_{i}_{jm} - x_{jp}_{j}*x_{i}_{j}",
                        jm = j - 1,
                        jp = j + 1
                    );
                    if i < n {
                        s = format!("x_{}_{j} + {s}", i + 1);
                    }
                    assert_eq!(f_tilde(i, j, j, n).unwrap(), poly(&s), "({i},{j}) n={n}");
                }
            }
        }
    }

    #[test]
    fn degrees() {
        for n in 2..=5 {
            for j in 1..n {
                for i in j + 1..=n {
                    assert_eq!(
                        f(i, j, n).unwrap().graded_degree(),
                        Ok(GradedDegree::Homogeneous(2 * (i - j + 1) as u32))
                    );
                }
            }
        }
    }

    #[test]
    fn generators() {
        let pet = HessenbergFunction::peterson(3);
        assert_eq!(
            ideal_generators(&pet, Flavor::F).unwrap(),
            vec![f(3, 1, 3).unwrap()]
        );
        assert!(ideal_generators(&HessenbergFunction::full(4), Flavor::F)
            .unwrap()
            .is_empty());
        let h2 = HessenbergFunction::h_m(2, 5).unwrap();
        let labels: Vec<String> = ideal_generators_labeled(&h2, Flavor::FTilde)
            .unwrap()
            .iter()
            .map(Generator::label)
            .collect();
        assert_eq!(
            labels,
            vec!["F~^<2>_{3,1}", "F~^<2>_{4,1}", "F~^<2>_{5,1}"]
        );
        assert!(matches!(
            ideal_generators(&HessenbergFunction::identity(3), Flavor::FTilde),
            Err(Error::UnsupportedFlavor(_))
        ));
    }

    #[test]
    fn recursions_small() {
        assert_eq!(verify_f_recursions(3).status, Status::Pass);
        assert_eq!(verify_f_recursions(4).status, Status::Pass);
        let h: HessenbergFunction = "2,4,4,4".parse().unwrap();
        assert_eq!(verify_ideal_equality(&h).status, Status::Pass);
    }
}
