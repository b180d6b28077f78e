use smallvec::SmallVec;

use super::VarId;

/// Power product with sparse exponents, sorted by the global variable order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: SmallVec<[(VarId, u32); 4]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: VarId) -> Self {
        Self::power(v, 1)
    }

    pub fn power(v: VarId, e: u32) -> Self {
        let mut m = Monomial::one();
        if e > 0 {
            m.exps.push((v, e));
        }
        m
    }

    /// Build from arbitrary pairs; repeated variables are merged and zero exponents dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, u32)>) -> Self {
        let mut v: Vec<(VarId, u32)> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        v.sort_by_key(|a| a.0);
        let mut exps: SmallVec<[(VarId, u32); 4]> = SmallVec::new();
        for (var, e) in v {
            match exps.last_mut() {
                Some(last) if last.0 == var => last.1 += e,
                _ => exps.push((var, e)),
            }
        }
        Monomial { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        self.exps.iter().copied()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.exps
            .binary_search_by(|p| p.0.cmp(&v))
            .map(|k| self.exps[k].1)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|p| p.1).sum()
    }

    /// Graded degree, or the first ungraded variable encountered.
    pub fn graded_degree(&self) -> Result<u32, VarId> {
        let mut d = 0;
        for &(v, e) in &self.exps {
            d += v.degree().ok_or(v)? * e;
        }
        Ok(d)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.exps, &other.exps);
        let mut exps = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    exps.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    exps.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    exps.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&a[i..]);
        exps.extend_from_slice(&b[j..]);
        Monomial { exps }
    }

    /// Remove the variable entirely, returning its exponent.
    pub fn split_off(&self, v: VarId) -> (u32, Monomial) {
        let mut rest = self.clone();
        match rest.exps.binary_search_by(|p| p.0.cmp(&v)) {
            Ok(k) => {
                let e = rest.exps.remove(k).1;
                (e, rest)
            }
            Err(_) => (0, rest),
        }
    }

    pub fn with_exponent(&self, v: VarId, e: u32) -> Monomial {
        let (_, mut rest) = self.split_off(v);
        if e > 0 {
            let k = rest.exps.binary_search_by(|p| p.0.cmp(&v)).unwrap_err();
            rest.exps.insert(k, (v, e));
        }
        rest
    }

    pub fn variables(&self) -> impl Iterator<Item = VarId> + '_ {
        self.exps.iter().map(|p| p.0)
    }
}
