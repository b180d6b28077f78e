//! `Hess(N,h_2) ∩ Ω_e°` as the surface `XY = Z^n` times an affine space.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::flag::f_tilde;
use crate::poly::{CycVar, Polynomial, VarId};
use crate::report::{Params, SubCheck, VerificationReport};

fn x(i: usize, j: usize) -> Polynomial {
    Polynomial::var(VarId::flag(i, j))
}

fn cyc(c: CycVar) -> Polynomial {
    Polynomial::var(VarId::Cyc(c))
}

/// `F̃^{<2>}_{i,1}`, `3 <= i <= n`.
fn ft(i: usize, n: usize) -> Polynomial {
    f_tilde(i, 1, 2, n).expect("3 <= i <= n")
}

/// `X = x_21^2 - x_31`.
pub fn big_x() -> Polynomial {
    x(2, 1).pow(2) - x(3, 1)
}

/// `Y = x_21^{n-2} + x_32 x_21^{n-3} + ... + x_{n2}`.
pub fn big_y(n: usize) -> Polynomial {
    let z = x(2, 1);
    let mut y = z.pow(n as u32 - 2);
    for k in 3..=n {
        y += x(k, 2) * z.pow((n - k) as u32);
    }
    y
}

/// `P_n = XY - Z^n` written in the chart coordinates.
pub fn p_n(n: usize) -> Polynomial {
    big_x() * big_y(n) - x(2, 1).pow(n as u32)
}

fn check_n(n: usize, max: usize) -> Result<()> {
    if n < 3 || n > max {
        return Err(Error::InvalidParams(format!("n = {n} outside 3..={max}")));
    }
    Ok(())
}

/// `Σ_{k=0}^{n-3} x_21^k F̃^{<2>}_{n-k,1} = XY - Z^n`, and the partial sums from every `i > 2`.
pub fn xyz_identity_check(n: usize) -> Result<VerificationReport> {
    check_n(n, 8)?;
    let mut report = VerificationReport::new("xyz-identity", Params::n(n));
    let z = x(2, 1);
    let mut main = SubCheck::new("sum of truncated generators = XY - Z^n");
    let total: Polynomial = (0..=n - 3)
        .map(|k| z.pow(k as u32) * ft(n - k, n))
        .sum();
    main.record(total - p_n(n), || format!("n = {n}"));
    report.push(main);

    let mut partial = SubCheck::new("partial sums");
    for i in 3..=n {
        let lhs: Polynomial = (0..=n - i)
            .map(|k| z.pow(k as u32) * ft(n - k, n))
            .sum();
        let tail: Polynomial = (i..=n)
            .map(|l| z.pow((n - l) as u32) * x(l, 2))
            .sum();
        let rhs = -(x(i, 1) * z.pow((n - i + 1) as u32)) + tail * big_x();
        partial.record(lhs - rhs, || format!("i = {i}"));
    }
    report.push(partial);
    Ok(report.finish())
}

/// `x_{i+1,1} ↦ x_21 x_{i1} + x_31 x_{i2} - x_21^2 x_{i2}` for `i = 3..n-1`, composed so that
/// every `x_{i1}`, `i >= 4`, is written in the remaining coordinates.
pub fn triangular_elimination(n: usize) -> BTreeMap<VarId, Polynomial> {
    let mut images: BTreeMap<VarId, Polynomial> = BTreeMap::new();
    let mut prev = x(3, 1);
    for i in 3..n {
        let next = x(2, 1) * &prev + x(3, 1) * x(i, 2) - x(2, 1).pow(2) * x(i, 2);
        images.insert(VarId::flag(i + 1, 1), next.clone());
        prev = next;
    }
    images
}

/// `X, Y, Z` in the chart coordinates.
pub fn forward_map(n: usize) -> BTreeMap<VarId, Polynomial> {
    BTreeMap::from([
        (VarId::Cyc(CycVar::X), big_x()),
        (VarId::Cyc(CycVar::Y), big_y(n)),
        (VarId::Cyc(CycVar::Z), x(2, 1)),
    ])
}

/// `x_21 ↦ Z`, `x_31 ↦ -X + Z^2`, `x_{n2} ↦ Y - Z^{n-2} - Σ_{k=3}^{n-1} x_{k2} Z^{n-k}`.
pub fn inverse_map(n: usize) -> BTreeMap<VarId, Polynomial> {
    let z = cyc(CycVar::Z);
    let mut xn2 = cyc(CycVar::Y) - z.pow(n as u32 - 2);
    for k in 3..n {
        xn2 -= x(k, 2) * z.pow((n - k) as u32);
    }
    BTreeMap::from([
        (VarId::flag(2, 1), z.clone()),
        (VarId::flag(3, 1), z.pow(2) - cyc(CycVar::X)),
        (VarId::flag(n, 2), xn2),
    ])
}

/// Round trips of the forward and inverse maps and the image of the ideal.
pub fn cyclic_quotient_certificate(n: usize) -> Result<VerificationReport> {
    check_n(n, 7)?;
    let mut report = VerificationReport::new("cyclic-quotient", Params::n(n));
    let fwd = forward_map(n);
    let inv = inverse_map(n);
    let elim = triangular_elimination(n);

    let mut shape = SubCheck::new("truncated generators are triangular");
    for i in 3..n {
        let expected = x(i + 1, 1) - (x(2, 1) * x(i, 1) + x(3, 1) * x(i, 2) - x(2, 1).pow(2) * x(i, 2));
        shape.record(ft(i, n) - expected, || format!("F~_{{{i},1}}"));
    }
    report.push(shape);

    let mut there = SubCheck::new("inverse after forward on X, Y, Z");
    for (v, img) in &fwd {
        there.record(img.subst(&inv) - Polynomial::var(*v), || format!("{v}"));
    }
    report.push(there);

    let mut back = SubCheck::new("forward after inverse on the chart");
    for (v, img) in &inv {
        back.record(img.subst(&fwd) - Polynomial::var(*v), || format!("{v}"));
    }
    for (v, img) in &elim {
        let round = img.subst(&inv).subst(&fwd);
        back.record(round - img, || format!("{v} modulo the triangular relations"));
    }
    report.push(back);

    let mut ideal = SubCheck::new("image of the ideal is (XY - Z^n)");
    for i in 3..n {
        ideal.record(ft(i, n).subst(&elim), || format!("F~_{{{i},1}} after elimination"));
    }
    let pn = p_n(n);
    ideal.record(ft(n, n).subst(&elim) - &pn, || "F~_{n,1} after elimination - P_n".into());
    let relation = cyc(CycVar::X) * cyc(CycVar::Y) - cyc(CycVar::Z).pow(n as u32);
    ideal.record(relation.subst(&fwd) - &pn, || "forward(XY - Z^n) - P_n".into());
    ideal.record(pn.subst(&inv) - relation, || "inverse(P_n) - (XY - Z^n)".into());
    report.push(ideal);
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    #[test]
    fn n3_truncated_generator() {
        let expected = -x(2, 1).pow(3) + (x(2, 1).pow(2) - x(3, 1)) * (x(2, 1) + x(3, 2));
        assert_eq!(ft(3, 3), expected);
        assert_eq!(p_n(3), expected);
    }

    #[test]
    fn identities_hold() {
        for n in 3..=8 {
            assert_eq!(xyz_identity_check(n).unwrap().status, Status::Pass, "n = {n}");
        }
        assert!(xyz_identity_check(2).is_err());
        assert!(xyz_identity_check(9).is_err());
    }

    #[test]
    fn certificates_pass() {
        for n in 3..=7 {
            let r = cyclic_quotient_certificate(n).unwrap();
            assert_eq!(r.status, Status::Pass, "n = {n}: {:?}", r.witnesses);
        }
    }

    #[test]
    fn relation_vanishes_at_origin() {
        let rel = cyc(CycVar::X) * cyc(CycVar::Y) - cyc(CycVar::Z).pow(4);
        let zero = BTreeMap::from([
            (VarId::Cyc(CycVar::X), Polynomial::zero()),
            (VarId::Cyc(CycVar::Y), Polynomial::zero()),
            (VarId::Cyc(CycVar::Z), Polynomial::zero()),
        ]);
        assert!(rel.subst(&zero).is_zero());
    }

    #[test]
    fn z_round_trip() {
        let z = cyc(CycVar::Z);
        assert_eq!(z.subst(&forward_map(5)).subst(&inverse_map(5)), z);
    }
}
