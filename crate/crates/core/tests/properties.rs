use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use hessq::appendix::{h_i, w_i, SubsetIndex};
use hessq::flag::{ideal_generators, Flavor};
use hessq::hess::HessenbergFunction;
use hessq::ideals::{buchberger, GroebnerBasis};
use hessq::poly::{AffinePoint, PolyMatrix, Polynomial, VarId};
use hessq::qsym::{e_charpoly, e_interval, specialize_h};
use hessq::singular::Permutation;

fn build(vars: &[VarId], terms: Vec<(Vec<u32>, i64)>) -> Polynomial {
    terms
        .into_iter()
        .map(|(exps, c)| {
            exps.iter()
                .zip(vars)
                .map(|(&e, &v)| Polynomial::var(v).pow(e))
                .product::<Polynomial>()
                * Polynomial::constant(c)
        })
        .sum()
}

fn poly_in(vars: Vec<VarId>, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let k = vars.len();
    prop::collection::vec((prop::collection::vec(0..=max_exp, k), -6i64..=6), 0..=max_terms)
        .prop_map(move |terms| build(&vars, terms))
}

fn mixed_vars() -> Vec<VarId> {
    vec![VarId::x(1), VarId::x(2), VarId::flag(2, 1), VarId::q(1, 2)]
}

fn small() -> impl Strategy<Value = Polynomial> {
    poly_in(mixed_vars(), 2, 4)
}

fn quantum3() -> impl Strategy<Value = Polynomial> {
    poly_in(
        vec![VarId::x(1), VarId::x(3), VarId::q(1, 2), VarId::q(1, 3), VarId::q(2, 3)],
        2,
        4,
    )
}

fn chart3() -> impl Strategy<Value = Polynomial> {
    poly_in(vec![VarId::flag(2, 1), VarId::flag(3, 1), VarId::flag(3, 2)], 1, 4)
}

fn hess(n: usize) -> impl Strategy<Value = HessenbergFunction> {
    let all = HessenbergFunction::all(n);
    (0..all.len()).prop_map(move |k| all[k].clone())
}

/// Peterson ideal at n = 3 in the chart, truncated above everything the tests produce.
fn pet3_basis() -> &'static GroebnerBasis {
    static GB: OnceLock<GroebnerBasis> = OnceLock::new();
    GB.get_or_init(|| {
        let gens = ideal_generators(&HessenbergFunction::peterson(3), Flavor::F).unwrap();
        buchberger(&gens, Some(16)).unwrap()
    })
}

/// Each homogeneous component of `a` is a nonzero multiple of the same component of `b`.
fn componentwise_proportional(a: &Polynomial, b: &Polynomial) -> bool {
    let split = |p: &Polynomial| {
        let mut out: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in p.terms() {
            out.entry(m.graded_degree().unwrap())
                .or_default()
                .add_term(m.clone(), c.clone());
        }
        out
    };
    let (sa, sb) = (split(a), split(b));
    sa.len() == sb.len()
        && sa.iter().zip(&sb).all(|((da, pa), (db, pb))| {
            let ca = pa.terms().next().unwrap().1.clone();
            let cb = pb.terms().next().unwrap().1.clone();
            da == db && pa.scale(&cb) == pb.scale(&ca)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in small(), b in small(), c in small()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(), a.clone());
    }

    #[test]
    fn leibniz_rule(a in small(), b in small()) {
        for v in mixed_vars() {
            prop_assert_eq!(
                (&a * &b).derivative(v),
                a.derivative(v) * &b + &a * b.derivative(v)
            );
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in small(), b in small(), vals in prop::collection::vec(-9i64..=9, 4)) {
        let mut pt = AffinePoint::new();
        for (v, x) in mixed_vars().into_iter().zip(vals) {
            pt.set(v, BigRational::from_integer(BigInt::from(x)));
        }
        let ea = a.evaluate(&pt).unwrap();
        let eb = b.evaluate(&pt).unwrap();
        prop_assert_eq!((&a * &b).evaluate(&pt).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).evaluate(&pt).unwrap(), ea + eb);
    }

    #[test]
    fn substitution_composes(p in small(), s1 in small(), s2 in small(), t1 in small(), t2 in small()) {
        let sigma = BTreeMap::from([(VarId::x(1), s1), (VarId::flag(2, 1), s2)]);
        let tau = BTreeMap::from([(VarId::x(2), t1), (VarId::q(1, 2), t2)]);
        let mut composite: BTreeMap<VarId, Polynomial> =
            sigma.iter().map(|(v, img)| (*v, img.subst(&tau))).collect();
        for (v, img) in &tau {
            composite.entry(*v).or_insert_with(|| img.clone());
        }
        prop_assert_eq!(p.subst(&sigma).subst(&tau), p.subst(&composite));
    }

    #[test]
    fn determinant_is_multiplicative(e in prop::collection::vec(small(), 8)) {
        let a = PolyMatrix::from_rows(vec![vec![e[0].clone(), e[1].clone()], vec![e[2].clone(), e[3].clone()]]);
        let b = PolyMatrix::from_rows(vec![vec![e[4].clone(), e[5].clone()], vec![e[6].clone(), e[7].clone()]]);
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.determinant().unwrap(), a.determinant().unwrap() * b.determinant().unwrap());
        let at = PolyMatrix::from_fn(2, 2, |i, j| a.get(j, i).clone());
        prop_assert_eq!(at.determinant().unwrap(), a.determinant().unwrap());
    }

    #[test]
    fn recursion_matches_charpoly(a in 1usize..=5, len in 0usize..=4, i in 1usize..=5) {
        let b = (a + len).min(5);
        let i = i.min(b - a + 1);
        prop_assert_eq!(e_interval(i, a, b).unwrap(), e_charpoly(i, a, b).unwrap());
    }

    #[test]
    fn specialization_is_a_homomorphism(h in hess(3), a in quantum3(), b in quantum3()) {
        prop_assert_eq!(specialize_h(&(&a * &b), &h), specialize_h(&a, &h) * specialize_h(&b, &h));
        prop_assert_eq!(specialize_h(&(&a + &b), &h), specialize_h(&a, &h) + specialize_h(&b, &h));
        prop_assert_eq!(specialize_h(&specialize_h(&a, &h), &h), specialize_h(&a, &h));
    }

    #[test]
    fn decompose_round_trip(h in (1usize..=6).prop_flat_map(hess)) {
        let parts = h.decompose();
        prop_assert!(parts.iter().all(|p| p.is_indecomposable()));
        prop_assert_eq!(HessenbergFunction::concat(&parts).unwrap(), h.clone());
        prop_assert_eq!(parts.iter().map(|p| p.dimension()).sum::<usize>(), h.dimension());
    }

    #[test]
    fn membership_is_linear(p in chart3(), q in chart3(), c in -4i64..=4) {
        let gb = pet3_basis();
        let g = &gb.generators()[0];
        let in_ideal = g * &p;
        prop_assert!(gb.member(&in_ideal).unwrap());
        prop_assert!(gb.member(&(&in_ideal + g * &q * Polynomial::constant(c))).unwrap());
        prop_assert_eq!(gb.member(&(&q + &in_ideal)).unwrap(), gb.member(&q).unwrap());
    }

    #[test]
    fn reduction_is_idempotent(p in chart3()) {
        let gb = pet3_basis();
        let r = gb.reduce(&p).unwrap();
        let rr = gb.reduce(&r).unwrap();
        prop_assert!(componentwise_proportional(&r, &rr));
        prop_assert_eq!(r.is_zero(), gb.member(&p).unwrap());
    }

    #[test]
    fn parabolic_longest_is_an_involution(n in 2usize..=12, mask in any::<u32>()) {
        let members: Vec<usize> = (1..n).filter(|k| mask & (1 << (k - 1)) != 0).collect();
        let i = SubsetIndex::new(n, &members).unwrap();
        let w = w_i(&i);
        prop_assert!(w.is_involution());
        prop_assert_eq!(w.compose(&w).unwrap(), Permutation::identity(n));
        prop_assert_eq!(h_i(&i).dimension(), i.len());
    }
}
