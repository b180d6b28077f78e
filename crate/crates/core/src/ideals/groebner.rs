use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::poly::{GradedDegree, Monomial, Polynomial, VarId};

pub const DEFAULT_TERM_LIMIT: usize = 2_000_000;
pub const TERM_LIMIT_ENV: &str = "HESSQ_TERM_LIMIT";

/// Term ceiling from the environment, or the default.
pub fn term_limit() -> usize {
    std::env::var(TERM_LIMIT_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_TERM_LIMIT)
}

pub(crate) type Exps = SmallVec<[u16; 16]>;

/// Variables of a polynomial ring in the global variable order. Position 0 is the most
/// significant in the lexicographic tie-break, so `x_1 > x_2 > ... > q_{rs} > x_{ij}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    vars: Vec<VarId>,
    weights: Vec<u32>,
    index: HashMap<VarId, usize>,
}

impl Ring {
    pub fn new(vars: impl IntoIterator<Item = VarId>) -> Result<Self> {
        let set: BTreeSet<VarId> = vars.into_iter().collect();
        let vars: Vec<VarId> = set.into_iter().collect();
        let weights = vars
            .iter()
            .map(|v| v.degree().ok_or(Error::UngradedVariable(*v)))
            .collect::<Result<Vec<_>>>()?;
        let index = vars.iter().enumerate().map(|(k, v)| (*v, k)).collect();
        Ok(Ring {
            vars,
            weights,
            index,
        })
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn weight(&self, k: usize) -> u32 {
        self.weights[k]
    }

    pub(crate) fn exps_of(&self, m: &Monomial) -> Exps {
        let mut e: Exps = SmallVec::from_elem(0, self.vars.len());
        for (v, p) in m.iter() {
            e[self.index[&v]] = p as u16;
        }
        e
    }

    pub(crate) fn monomial_of(&self, e: &[u16]) -> Monomial {
        Monomial::from_pairs(
            e.iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(k, &p)| (self.vars[k], p as u32)),
        )
    }

    pub(crate) fn degree_of(&self, e: &[u16]) -> u32 {
        e.iter()
            .zip(&self.weights)
            .map(|(&p, &w)| p as u32 * w)
            .sum()
    }

    fn to_dense(&self, p: &Polynomial, deg: u32) -> DPoly {
        let mut terms: Vec<(Exps, BigInt)> =
            p.terms().map(|(m, c)| (self.exps_of(m), c.clone())).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        DPoly { deg, terms }
    }

    fn to_sparse(&self, p: &DPoly) -> Polynomial {
        Polynomial::from_terms(p.terms.iter().map(|(e, c)| (self.monomial_of(e), c.clone())))
    }
}

/// Homogeneous polynomial with terms sorted in decreasing lexicographic order of exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct DPoly {
    pub deg: u32,
    pub terms: Vec<(Exps, BigInt)>,
}

impl DPoly {
    fn lead(&self) -> &Exps {
        &self.terms[0].0
    }

    fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    fn make_primitive(&mut self) {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if self.lc().is_negative() {
            g = -g;
        }
        if !g.is_one() && !g.is_zero() {
            for (_, c) in &mut self.terms {
                *c /= &g;
            }
        }
    }
}

fn divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn quotient(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn coprime(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

fn support_mask(e: &[u16]) -> u64 {
    e.iter()
        .enumerate()
        .filter(|(_, &p)| p > 0)
        .fold(0u64, |m, (k, _)| m | (1u64 << (k % 64)))
}

/// `a*p - b*shift*g` where `shift*lead(g) = lead(p)`, dropping the cancelled head.
fn combine(p: &[(Exps, BigInt)], a: &BigInt, g: &DPoly, shift: &[u16], b: &BigInt) -> Vec<(Exps, BigInt)> {
    let mut out = Vec::with_capacity(p.len() + g.terms.len());
    let shifted = g.terms[1..].iter().map(|(e, c)| {
        let m: Exps = e.iter().zip(shift).map(|(x, y)| x + y).collect();
        (m, c * b)
    });
    let mut left = p[1..].iter().peekable();
    let mut right = shifted.peekable();
    let a_one = a.is_one();
    loop {
        match (left.peek(), right.peek()) {
            (None, None) => break,
            (Some(_), None) => {
                let (e, c) = left.next().unwrap();
                out.push((e.clone(), if a_one { c.clone() } else { c * a }));
            }
            (None, Some(_)) => {
                let (e, c) = right.next().unwrap();
                out.push((e, -c));
            }
            (Some(l), Some(r)) => match l.0.cmp(&r.0) {
                Ordering::Greater => {
                    let (e, c) = left.next().unwrap();
                    out.push((e.clone(), if a_one { c.clone() } else { c * a }));
                }
                Ordering::Less => {
                    let (e, c) = right.next().unwrap();
                    out.push((e, -c));
                }
                Ordering::Equal => {
                    let (e, c) = left.next().unwrap();
                    let (_, d) = right.next().unwrap();
                    let v = if a_one { c - d } else { c * a - d };
                    if !v.is_zero() {
                        out.push((e.clone(), v));
                    }
                }
            },
        }
    }
    out
}

struct Reducer<'a> {
    basis: &'a [DPoly],
    active: &'a [usize],
    masks: &'a [u64],
}

impl Reducer<'_> {
    fn find(&self, e: &[u16], skip: Option<usize>) -> Option<usize> {
        let m = support_mask(e);
        self.active.iter().copied().find(|&k| {
            Some(k) != skip && self.masks[k] & !m == 0 && divides(self.basis[k].lead(), e)
        })
    }

    /// Full normal form; `skip` excludes one basis index, `keep_head` leaves the first term alone.
    fn normal_form_with(&self, p: &DPoly, skip: Option<usize>, keep_head: bool) -> DPoly {
        let mut done: Vec<(Exps, BigInt)> = Vec::new();
        let mut rest: Vec<(Exps, BigInt)> = if keep_head {
            done.push(p.terms[0].clone());
            p.terms[1..].to_vec()
        } else {
            p.terms.clone()
        };
        let mut pos = 0;
        let mut steps = 0usize;
        while pos < rest.len() {
            match self.find(&rest[pos].0, skip) {
                None => {
                    done.push(std::mem::take(&mut rest[pos]));
                    pos += 1;
                }
                Some(k) => {
                    let g = &self.basis[k];
                    let c = &rest[pos].1;
                    let d = c.gcd(g.lc());
                    let a = g.lc() / &d;
                    let b = c / &d;
                    let shift = quotient(&rest[pos].0, g.lead());
                    rest = combine(&rest[pos..], &a, g, &shift, &b);
                    pos = 0;
                    if !a.is_one() {
                        for (_, c) in &mut done {
                            *c *= &a;
                        }
                    }
                    steps += 1;
                    if steps.is_multiple_of(8) {
                        strip_content(&mut rest, &mut done);
                    }
                }
            }
        }
        let mut out = DPoly {
            deg: p.deg,
            terms: done,
        };
        if !out.terms.is_empty() {
            out.make_primitive();
        }
        out
    }

    fn normal_form(&self, p: &DPoly) -> DPoly {
        self.normal_form_with(p, None, false)
    }
}

fn strip_content(a: &mut [(Exps, BigInt)], b: &mut [(Exps, BigInt)]) {
    let mut g = BigInt::zero();
    for (_, c) in a.iter().chain(b.iter()) {
        g = g.gcd(c);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() {
        return;
    }
    for (_, c) in a.iter_mut().chain(b.iter_mut()) {
        *c /= &g;
    }
}

/// Degree-truncated reduced Gröbner basis of a homogeneous ideal.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Ring,
    basis: Vec<DPoly>,
    degree_bound: Option<u32>,
    generators: Vec<Polynomial>,
}

fn homogeneous_degree(p: &Polynomial) -> Result<Option<u32>> {
    match p.graded_degree()? {
        GradedDegree::Zero => Ok(None),
        GradedDegree::Homogeneous(d) => Ok(Some(d)),
        GradedDegree::Inhomogeneous => Err(Error::NotHomogeneous),
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Exps,
    deg: u32,
}

/// Buchberger completion over the variables of `gens`.
pub fn buchberger(gens: &[Polynomial], degree_bound: Option<u32>) -> Result<GroebnerBasis> {
    buchberger_in(gens, &[], degree_bound, term_limit())
}

/// Buchberger completion in a ring that also contains `extra_vars`.
pub fn buchberger_in(
    gens: &[Polynomial],
    extra_vars: &[VarId],
    degree_bound: Option<u32>,
    limit: usize,
) -> Result<GroebnerBasis> {
    let mut vars: BTreeSet<VarId> = extra_vars.iter().copied().collect();
    for g in gens {
        vars.extend(g.variables());
    }
    let ring = Ring::new(vars)?;
    let mut inputs: BTreeMap<u32, Vec<DPoly>> = BTreeMap::new();
    for g in gens {
        let Some(d) = homogeneous_degree(g)? else {
            continue;
        };
        if degree_bound.is_some_and(|bound| d > bound) {
            continue;
        }
        inputs.entry(d).or_default().push(ring.to_dense(g, d));
    }

    let mut basis: Vec<DPoly> = Vec::new();
    let mut masks: Vec<u64> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut total_terms = 0usize;

    loop {
        let next_pair = pairs.iter().map(|p| p.deg).min();
        let next_input = inputs.keys().next().copied();
        let deg = match (next_pair, next_input) {
            (None, None) => break,
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (Some(a), Some(b)) => a.min(b),
        };
        let mut batch: Vec<Pair> = Vec::new();
        pairs.retain(|p| {
            if p.deg == deg {
                batch.push(p.clone());
                false
            } else {
                true
            }
        });
        batch.sort_by(|a, b| a.lcm.cmp(&b.lcm).then(a.i.cmp(&b.i)).then(a.j.cmp(&b.j)));
        let mut todo: Vec<DPoly> = batch
            .iter()
            .map(|p| s_poly(&basis[p.i], &basis[p.j], &p.lcm, deg))
            .collect();
        if next_input == Some(deg) {
            todo.extend(inputs.remove(&deg).unwrap());
        }
        for s in todo {
            let h = Reducer {
                basis: &basis,
                active: &active,
                masks: &masks,
            }
            .normal_form(&s);
            if h.terms.is_empty() {
                continue;
            }
            total_terms += h.terms.len();
            if total_terms > limit {
                return Err(Error::ResourceLimit {
                    terms: total_terms,
                    limit,
                });
            }
            let hk = basis.len();
            masks.push(support_mask(h.lead()));
            basis.push(h);
            update_pairs(&basis, &mut active, &mut pairs, hk, degree_bound, &ring);
        }
    }

    // tail reduction
    active.sort_by(|&a, &b| basis[b].lead().cmp(basis[a].lead()));
    let mut reduced: Vec<DPoly> = Vec::with_capacity(active.len());
    for &k in &active {
        let r = Reducer {
            basis: &basis,
            active: &active,
            masks: &masks,
        };
        let p = r.normal_form_with(&basis[k], Some(k), true);
        reduced.push(p);
    }
    let generators = reduced.iter().map(|p| ring.to_sparse(p)).collect();
    Ok(GroebnerBasis {
        ring,
        basis: reduced,
        degree_bound,
        generators,
    })
}

fn s_poly(f: &DPoly, g: &DPoly, l: &Exps, deg: u32) -> DPoly {
    let d = f.lc().gcd(g.lc());
    let a = g.lc() / &d;
    let b = f.lc() / &d;
    let sf = quotient(l, f.lead());
    let sg = quotient(l, g.lead());
    let fs: Vec<(Exps, BigInt)> = f
        .terms
        .iter()
        .map(|(e, c)| (e.iter().zip(&sf).map(|(x, y)| x + y).collect(), c.clone()))
        .collect();
    let terms = combine(&fs, &a, g, &sg, &b);
    let mut p = DPoly { deg, terms };
    if !p.terms.is_empty() {
        p.make_primitive();
    }
    p
}

/// Gebauer-Möller installation of the new element `h`.
fn update_pairs(
    basis: &[DPoly],
    active: &mut Vec<usize>,
    pairs: &mut Vec<Pair>,
    h: usize,
    bound: Option<u32>,
    ring: &Ring,
) {
    let lh = basis[h].lead().clone();
    let mut c: Vec<(usize, Exps)> = active
        .iter()
        .map(|&g| (g, lcm(&lh, basis[g].lead())))
        .collect();
    let mut d: Vec<(usize, Exps)> = Vec::new();
    while let Some((g1, l1)) = c.pop() {
        let keep = coprime(&lh, basis[g1].lead())
            || !c
                .iter()
                .chain(d.iter())
                .any(|(_, l2)| divides(l2, &l1));
        if keep {
            d.push((g1, l1));
        }
    }
    let e: Vec<(usize, Exps)> = d
        .into_iter()
        .filter(|(g, _)| !coprime(&lh, basis[*g].lead()))
        .collect();
    pairs.retain(|p| {
        !(divides(&lh, &p.lcm)
            && lcm(basis[p.i].lead(), &lh) != p.lcm
            && lcm(&lh, basis[p.j].lead()) != p.lcm)
    });
    for (g, l) in e {
        let deg = ring.degree_of(&l);
        if bound.is_some_and(|b| deg > b) {
            continue;
        }
        pairs.push(Pair {
            i: g,
            j: h,
            lcm: l,
            deg,
        });
    }
    active.retain(|&g| !divides(&lh, basis[g].lead()));
    active.push(h);
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn degree_bound(&self) -> Option<u32> {
        self.degree_bound
    }

    /// Basis elements, primitive with positive leading coefficient.
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis
            .iter()
            .map(|p| self.ring.monomial_of(p.lead()))
            .collect()
    }

    pub(crate) fn lead_exps(&self) -> Vec<Exps> {
        self.basis.iter().map(|p| p.lead().clone()).collect()
    }

    /// Normal form of `p`, component by component. The result is determined up to a
    /// nonzero rational factor per homogeneous component; it is zero iff `p` lies in the ideal.
    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial> {
        let mut components: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in p.terms() {
            let d = m.graded_degree().map_err(Error::UngradedVariable)?;
            components
                .entry(d)
                .or_default()
                .add_term(m.clone(), c.clone());
        }
        if let (Some(bound), Some(&top)) = (self.degree_bound, components.keys().next_back()) {
            if top > bound {
                return Err(Error::DegreeBoundExceeded { degree: top, bound });
            }
        }
        let foreign: Vec<VarId> = p
            .variables()
            .into_iter()
            .filter(|v| !self.ring.index.contains_key(v))
            .collect();
        let (ring, basis) = if foreign.is_empty() {
            (self.ring.clone(), self.basis.clone())
        } else {
            let ring = Ring::new(self.ring.vars.iter().copied().chain(foreign))?;
            let basis = self
                .basis
                .iter()
                .map(|b| ring.to_dense(&self.ring.to_sparse(b), b.deg))
                .collect();
            (ring, basis)
        };
        let masks: Vec<u64> = basis.iter().map(|b: &DPoly| support_mask(b.lead())).collect();
        let active: Vec<usize> = (0..basis.len()).collect();
        let r = Reducer {
            basis: &basis,
            active: &active,
            masks: &masks,
        };
        let mut out = Polynomial::zero();
        for (d, comp) in components {
            let nf = r.normal_form(&ring.to_dense(&comp, d));
            out += ring.to_sparse(&nf);
        }
        Ok(out)
    }

    pub fn member(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.reduce(p)?.is_zero())
    }
}

/// `p ∈ (gens)`, deciding with a basis truncated at `bound`.
pub fn member(p: &Polynomial, gens: &[Polynomial], bound: u32) -> Result<bool> {
    if p.is_zero() {
        return Ok(true);
    }
    buchberger(gens, Some(bound))?.member(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly;

    #[test]
    fn single_variable() {
        let gb = buchberger(&[poly("x_1")], None).unwrap();
        assert_eq!(gb.generators(), &[poly("x_1")]);
    }

    #[test]
    fn reduction_to_q() {
        let gens = [poly("x_1 + x_2"), poly("x_1*x_2 + q_1_2")];
        let gb = buchberger(&gens, Some(8)).unwrap();
        let r = gb.reduce(&poly("x_1^2")).unwrap();
        // normal form is q_12 up to a unit
        assert_eq!(r, poly("q_1_2"));
        assert!(gb.member(&poly("x_1^2 - q_1_2")).unwrap());
        assert!(!gb.member(&poly("q_1_2")).unwrap());
        assert!(gb.member(&Polynomial::zero()).unwrap());
        for g in &gens {
            assert!(gb.reduce(g).unwrap().is_zero());
        }
    }

    #[test]
    fn unit_is_not_a_member_of_a_proper_ideal() {
        let gb = buchberger(&[poly("x_1^2"), poly("x_2*x_1")], None).unwrap();
        assert_eq!(gb.reduce(&Polynomial::one()).unwrap(), Polynomial::one());
    }

    #[test]
    fn degree_bound_is_enforced() {
        let gb = buchberger(&[poly("x_1^2")], Some(4)).unwrap();
        assert!(matches!(
            gb.reduce(&poly("x_1^3")),
            Err(Error::DegreeBoundExceeded { degree: 6, bound: 4 })
        ));
    }

    #[test]
    fn inhomogeneous_generators_rejected() {
        assert_eq!(
            buchberger(&[poly("x_1 + q_1_2")], None).unwrap_err(),
            Error::NotHomogeneous
        );
    }

    #[test]
    fn term_ceiling() {
        let gens = [poly("x_1 + x_2 + x_3"), poly("x_1*x_2 + x_1*x_3 + x_2*x_3"), poly("x_1*x_2*x_3")];
        assert!(matches!(
            buchberger_in(&gens, &[], None, 3),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn foreign_variables_in_queries() {
        let gb = buchberger(&[poly("x_1")], None).unwrap();
        assert!(gb.member(&poly("x_1*q_2_3")).unwrap());
        assert!(!gb.member(&poly("x_2*q_2_3")).unwrap());
    }

    #[test]
    fn symmetric_ideal_basis_is_reduced() {
        let gens = [
            poly("x_1 + x_2 + x_3"),
            poly("x_1*x_2 + x_1*x_3 + x_2*x_3"),
            poly("x_1*x_2*x_3"),
        ];
        let gb = buchberger(&gens, None).unwrap();
        let leads = gb.leading_monomials();
        for (a, la) in leads.iter().enumerate() {
            for (b, lb) in leads.iter().enumerate() {
                if a != b {
                    assert_ne!(la.mul(&Monomial::one()), lb.clone());
                }
            }
        }
        // complete homogeneous h_1(x_1,x_2,x_3), h_2(x_2,x_3), h_3(x_3)
        assert_eq!(gb.len(), 3);
        assert!(gb.member(&poly("x_3^3")).unwrap());
        assert!(!gb.member(&poly("x_3^2")).unwrap());
    }
}
