use crate::error::{Error, Result};
use crate::hess::HessenbergFunction;
use crate::ideals::flag_vars;
use crate::linalg::RatMatrix;
use crate::poly::{AffinePoint, PolyMatrix, Polynomial, VarId};
use crate::qsym::{specialize_h, QSym};
use crate::report::SubCheck;

/// `∂ ^hE_i^{(n)} / ∂q_{rs}` with rows `i = 1..n` and one column per surviving `(r,s)`,
/// the diagonal `q_{ss} = x_s` first.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianMatrix {
    pub n: usize,
    pub h: HessenbergFunction,
    pub columns: Vec<(usize, usize)>,
    pub entries: PolyMatrix,
}

/// Surviving `(r,s)` with `r <= s`, in the global variable order.
pub fn jacobian_columns(h: &HessenbergFunction) -> Vec<(usize, usize)> {
    let mut cols: Vec<(usize, usize)> = (1..=h.n()).map(|s| (s, s)).collect();
    let mut strict: Vec<(usize, usize)> = h.surviving_q_set().into_iter().collect();
    strict.sort_by_key(|&(r, s)| (s - r, r));
    cols.extend(strict);
    cols
}

pub fn jacobian(h: &HessenbergFunction) -> Result<JacobianMatrix> {
    let n = h.n();
    let table = QSym::new(n);
    let columns = jacobian_columns(h);
    let mut entries = PolyMatrix::zeros(n, columns.len());
    for i in 1..=n {
        for (c, &(r, s)) in columns.iter().enumerate() {
            entries.set(i - 1, c, specialize_h(&table.de_dq(i, r, s)?, h));
        }
    }
    Ok(JacobianMatrix {
        n,
        h: h.clone(),
        columns,
        entries,
    })
}

impl JacobianMatrix {
    pub fn column_vars(&self) -> Vec<VarId> {
        self.columns.iter().map(|&(r, s)| VarId::q_or_x(r, s)).collect()
    }

    /// Row `i` (1-based).
    pub fn row(&self, i: usize) -> Vec<Polynomial> {
        (0..self.columns.len())
            .map(|c| self.entries.get(i - 1, c).clone())
            .collect()
    }

    pub fn entry(&self, i: usize, r: usize, s: usize) -> Option<&Polynomial> {
        let c = self.columns.iter().position(|&p| p == (r, s))?;
        Some(self.entries.get(i - 1, c))
    }

    pub fn evaluate(&self, pt: &AffinePoint) -> Result<RatMatrix> {
        self.entries.evaluate(pt)
    }

    /// Compare every closed-form entry with the symbolic derivative.
    pub fn check_against_derivatives(&self) -> SubCheck {
        let table = QSym::new(self.n);
        let mut sub = SubCheck::new(format!("closed form = derivative, h = {}", self.h));
        let vars = self.column_vars();
        for i in 1..=self.n {
            let e = specialize_h(&table.e(i, self.n).expect("in range"), &self.h);
            for (c, v) in vars.iter().enumerate() {
                let d = e.derivative(*v) - self.entries.get(i - 1, c);
                sub.record(d, || format!("row {i}, column {v}"));
            }
        }
        sub
    }
}

pub fn rank_at(m: &JacobianMatrix, pt: &AffinePoint) -> Result<usize> {
    Ok(m.evaluate(pt)?.rank())
}

/// `∂ ^{h_m}E_n^{(n)} / ∂q_{rs}` over all surviving `(r,s)`, diagonal included.
pub fn hm_singular_equations(m: usize, n: usize) -> Result<Vec<Polynomial>> {
    if m < 2 || m + 1 > n {
        return Err(Error::IndexOutOfRange(format!("m = {m} needs 2 <= m <= n-1, n = {n}")));
    }
    let h = HessenbergFunction::h_m(m, n)?;
    Ok(jacobian(&h)?.row(n))
}

/// Rows: the generators `F_{i,j}`, `i > h(j)`; columns: the chart coordinates.
pub fn coordinate_jacobian(gens: &[Polynomial], n: usize) -> PolyMatrix {
    let vars = coordinate_columns(n);
    PolyMatrix::from_fn(gens.len(), vars.len(), |r, c| gens[r].derivative(vars[c]))
}

/// Chart coordinates in the column order of [`coordinate_jacobian`].
pub fn coordinate_columns(n: usize) -> Vec<VarId> {
    let mut v = flag_vars(n);
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly;
    use crate::qsym::e_interval;
    use num_rational::BigRational;
    use num_traits::Zero;

    /// `E1[2,3]*E1[4,4] + E2[1,2]` style cells, `1` and `0` allowed.
    fn cell(s: &str) -> Polynomial {
        s.split('+')
            .map(|term| {
                term.split('*')
                    .map(|f| {
                        let f = f.trim();
                        match f {
                            "0" => Polynomial::zero(),
                            "1" => Polynomial::one(),
                            _ => {
                                let i: usize = f[1..2].parse().unwrap();
                                let inner = &f[3..f.len() - 1];
                                let (a, b) = inner.split_once(',').unwrap();
                                e_interval(i, a.parse().unwrap(), b.parse().unwrap()).unwrap()
                            }
                        }
                    })
                    .product::<Polynomial>()
            })
            .sum()
    }

    fn check_printed(n: usize, rows: &[&[&str]]) {
        let j = jacobian(&HessenbergFunction::full(n)).unwrap();
        assert_eq!(j.columns.len(), n * (n + 1) / 2);
        for (i, row) in rows.iter().enumerate() {
            for (c, s) in row.iter().enumerate() {
                assert_eq!(j.entries.get(i, c), &cell(s), "row {} col {}", i + 1, c);
            }
        }
    }

    #[test]
    fn printed_n3() {
        check_printed(
            3,
            &[
                &["1", "1", "1", "0", "0", "0"],
                &["E1[2,3]", "E1[1,1]+E1[3,3]", "E1[1,2]", "1", "1", "0"],
                &["E2[2,3]", "E1[1,1]*E1[3,3]", "E2[1,2]", "E1[3,3]", "E1[1,1]", "1"],
            ],
        );
    }

    #[test]
    fn printed_n4() {
        check_printed(
            4,
            &[
                &["1", "1", "1", "1", "0", "0", "0", "0", "0", "0"],
                &[
                    "E1[2,4]", "E1[1,1]+E1[3,4]", "E1[1,2]+E1[4,4]", "E1[1,3]", "1", "1", "1", "0",
                    "0", "0",
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
        );
    }

    #[test]
    fn peterson_drops_q13() {
        let full = jacobian(&HessenbergFunction::full(3)).unwrap();
        let pet = jacobian(&HessenbergFunction::peterson(3)).unwrap();
        assert_eq!(pet.columns, vec![(1, 1), (2, 2), (3, 3), (1, 2), (2, 3)]);
        for i in 1..=3 {
            assert_eq!(pet.row(i)[..], full.row(i)[..5]);
        }
        let origin: AffinePoint = pet
            .column_vars()
            .into_iter()
            .map(|v| (v, BigRational::zero()))
            .fold(AffinePoint::new(), |p, (v, x)| p.with(v, x));
        assert_eq!(rank_at(&pet, &origin).unwrap(), 2);
    }

    #[test]
    fn closed_form_matches() {
        for n in 3..=5 {
            let mut hs = vec![HessenbergFunction::peterson(n), HessenbergFunction::full(n)];
            for m in 2..n {
                hs.push(HessenbergFunction::h_m(m, n).unwrap());
            }
            for h in hs {
                let j = jacobian(&h).unwrap();
                assert_eq!(j.check_against_derivatives().status, crate::report::Status::Pass);
            }
        }
    }

    #[test]
    fn pet3_equations() {
        let eqs = hm_singular_equations(2, 3).unwrap();
        assert_eq!(
            eqs,
            vec![
                poly("x_2*x_3 + q_2_3"),
                poly("x_1*x_3"),
                poly("x_1*x_2 + q_1_2"),
                poly("x_3"),
                poly("x_1"),
            ]
        );
        assert!(hm_singular_equations(1, 3).is_err());
        assert!(hm_singular_equations(3, 3).is_err());
    }
}
