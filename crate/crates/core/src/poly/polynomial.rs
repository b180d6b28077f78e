use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use super::{Monomial, VarId};
use crate::error::{Error, Result};

/// Sparse polynomial with arbitrary-precision integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradedDegree {
    Zero,
    Homogeneous(u32),
    Inhomogeneous,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: VarId) -> Self {
        Self::term(Monomial::var(v), 1)
    }

    pub fn term(m: Monomial, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, BigInt)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&Monomial::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.variables()).collect()
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Largest exponent of `v` across all terms.
    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Coefficient of `v^k` when `self` is read as a polynomial in `v`.
    pub fn coefficient_in(&self, v: VarId, k: u32) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            if e == k {
                out.terms.insert(rest, c.clone());
            }
        }
        out
    }

    /// Coefficient of `lambda^k`.
    pub fn lambda_coefficient(&self, k: u32) -> Polynomial {
        self.coefficient_in(VarId::Lambda, k)
    }

    pub fn derivative(&self, v: VarId) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                out.add_term(m.with_exponent(v, e - 1), c * BigInt::from(e));
            }
        }
        out
    }

    pub fn graded_degree(&self) -> Result<GradedDegree> {
        let mut deg = None;
        let mut homogeneous = true;
        for m in self.terms.keys() {
            let d = m.graded_degree().map_err(Error::UngradedVariable)?;
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => homogeneous = false,
                _ => {}
            }
        }
        Ok(match deg {
            None => GradedDegree::Zero,
            Some(_) if !homogeneous => GradedDegree::Inhomogeneous,
            Some(d) => GradedDegree::Homogeneous(d),
        })
    }

    /// Drop every term containing one of `vars`, i.e. set them to zero.
    pub fn kill(&self, vars: &BTreeSet<VarId>) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.variables().any(|v| vars.contains(&v)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitute according to `sigma`.
    pub fn substitute(&self, sigma: &Substitution) -> Result<Polynomial> {
        let mut powers: HashMap<(VarId, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut fixed = Monomial::one();
            let mut prod = Polynomial::constant(c.clone());
            for (v, e) in m.iter() {
                match sigma.images.get(&v) {
                    Some(img) => {
                        let pw = powers
                            .entry((v, e))
                            .or_insert_with(|| img.pow(e))
                            .clone();
                        prod = &prod * &pw;
                    }
                    None if sigma.keeps(v) => fixed = fixed.mul(&Monomial::power(v, e)),
                    None => return Err(Error::UnmappedVariable(v)),
                }
                if prod.is_zero() {
                    break;
                }
            }
            if !prod.is_zero() {
                out += prod.mul_monomial(&fixed, &BigInt::one());
            }
        }
        Ok(out)
    }

    /// Substitute, keeping every unmapped variable.
    pub fn subst(&self, images: &BTreeMap<VarId, Polynomial>) -> Polynomial {
        let sigma = Substitution {
            images: images.clone(),
            fixed: Fixed::Others,
        };
        self.substitute(&sigma).expect("all unmapped variables are kept")
    }

    pub fn evaluate(&self, pt: &AffinePoint) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (v, e) in m.iter() {
                let val = pt.get(v).ok_or(Error::UnassignedVariable(v))?;
                t *= Pow::pow(val, e);
            }
            total += t;
        }
        Ok(total)
    }

    /// Plug in the values assigned by `pt`; unassigned variables stay symbolic.
    pub fn partial_eval(&self, pt: &AffinePoint) -> RationalPoly {
        let mut out: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut coeff = BigRational::from_integer(c.clone());
            let mut rest = Monomial::one();
            for (v, e) in m.iter() {
                match pt.get(v) {
                    Some(val) => coeff *= Pow::pow(val, e),
                    None => rest = rest.mul(&Monomial::power(v, e)),
                }
            }
            if coeff.is_zero() {
                continue;
            }
            let slot = out.entry(rest).or_insert_with(BigRational::zero);
            *slot += coeff;
        }
        out.retain(|_, c| !c.is_zero());
        RationalPoly { terms: out }
    }

    /// Gcd of all coefficients, nonnegative; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        use num_integer::Integer;
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn is_homogeneous(&self) -> bool {
        matches!(
            self.graded_degree(),
            Ok(GradedDegree::Homogeneous(_) | GradedDegree::Zero)
        )
    }

    pub fn max_abs_coefficient(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }
}

/// Polynomial with rational coefficients produced by partial evaluation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RationalPoly {
    pub terms: BTreeMap<Monomial, BigRational>,
}

impl RationalPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.variables()).collect()
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn coefficient_in(&self, v: VarId, k: u32) -> RationalPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            if e == k {
                terms.insert(rest, c.clone());
            }
        }
        RationalPoly { terms }
    }

    /// The constant value if no variables remain.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Fixed {
    Others,
    Only(BTreeSet<VarId>),
}

/// Variable images for [`Polynomial::substitute`], plus which unmapped variables stay fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    images: BTreeMap<VarId, Polynomial>,
    fixed: Fixed,
}

impl Default for Substitution {
    fn default() -> Self {
        Substitution::new()
    }
}

impl Substitution {
    /// Every unmapped variable is kept as is.
    pub fn new() -> Self {
        Substitution {
            images: BTreeMap::new(),
            fixed: Fixed::Others,
        }
    }

    /// Only the listed unmapped variables are kept; any other is an error.
    pub fn strict(fixed: impl IntoIterator<Item = VarId>) -> Self {
        Substitution {
            images: BTreeMap::new(),
            fixed: Fixed::Only(fixed.into_iter().collect()),
        }
    }

    pub fn with(mut self, v: VarId, p: Polynomial) -> Self {
        self.images.insert(v, p);
        self
    }

    pub fn insert(&mut self, v: VarId, p: Polynomial) {
        self.images.insert(v, p);
    }

    pub fn get(&self, v: VarId) -> Option<&Polynomial> {
        self.images.get(&v)
    }

    pub fn images(&self) -> &BTreeMap<VarId, Polynomial> {
        &self.images
    }

    fn keeps(&self, v: VarId) -> bool {
        match &self.fixed {
            Fixed::Others => true,
            Fixed::Only(s) => s.contains(&v),
        }
    }

    /// `tau ∘ self`: apply `self` first, then `tau`. Unmapped variables of `self` are
    /// routed through `tau`.
    pub fn then(&self, tau: &Substitution) -> Result<Substitution> {
        let mut images = BTreeMap::new();
        for (v, p) in &self.images {
            images.insert(*v, p.substitute(tau)?);
        }
        for (v, p) in &tau.images {
            images.entry(*v).or_insert_with(|| p.clone());
        }
        Ok(Substitution {
            images,
            fixed: tau.fixed.clone(),
        })
    }
}

/// Exact rational values for a set of variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AffinePoint {
    values: BTreeMap<VarId, BigRational>,
}

impl AffinePoint {
    pub fn new() -> Self {
        AffinePoint::default()
    }

    pub fn set(&mut self, v: VarId, val: BigRational) {
        self.values.insert(v, val);
    }

    pub fn with(mut self, v: VarId, val: BigRational) -> Self {
        self.set(v, val);
        self
    }

    pub fn get(&self, v: VarId) -> Option<&BigRational> {
        self.values.get(&v)
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.values.contains_key(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &BigRational)> {
        self.values.iter().map(|(v, r)| (*v, r))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl std::fmt::Display for AffinePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, (v, r)) in self.values.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}={r}")?;
        }
        write!(f, "}}")
    }
}

fn mul_polys(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() || b.is_zero() {
        return Polynomial::zero();
    }
    let (a, b) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if a.len() == 1 {
        let (m, c) = a.terms.iter().next().unwrap();
        return b.mul_monomial(m, c);
    }
    let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(a.len() * b.len());
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            *acc.entry(ma.mul(mb)).or_default() += ca * cb;
        }
    }
    Polynomial {
        terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign<Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: Polynomial) {
        if self.terms.len() < rhs.terms.len() {
            let lhs = std::mem::replace(self, rhs);
            for (m, c) in lhs.terms {
                self.add_term(m, c);
            }
        } else {
            for (m, c) in rhs.terms {
                self.add_term(m, c);
            }
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl SubAssign<Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: Polynomial) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(mut self) -> Polynomial {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $body:expr) => {
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                $body(self, rhs)
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                $body(&self, &rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                $body(&self, rhs)
            }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Polynomial, b: &Polynomial| {
    let mut out = a.clone();
    out += b;
    out
});
binop!(Sub, sub, |a: &Polynomial, b: &Polynomial| {
    let mut out = a.clone();
    out -= b;
    out
});
binop!(Mul, mul, mul_polys);

impl From<VarId> for Polynomial {
    fn from(v: VarId) -> Self {
        Polynomial::var(v)
    }
}

impl From<i64> for Polynomial {
    fn from(c: i64) -> Self {
        Polynomial::constant(c)
    }
}

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(iter: I) -> Polynomial {
        let mut acc = Polynomial::zero();
        for p in iter {
            acc += p;
        }
        acc
    }
}

impl std::iter::Product for Polynomial {
    fn product<I: Iterator<Item = Polynomial>>(iter: I) -> Polynomial {
        let mut acc = Polynomial::one();
        for p in iter {
            acc = &acc * &p;
        }
        acc
    }
}
