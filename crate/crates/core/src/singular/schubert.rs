use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flag::g_entry;
use crate::poly::{PolyMatrix, Polynomial};

/// A permutation of `[n]` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    one_line: Vec<usize>,
}

impl Permutation {
    pub fn new(one_line: Vec<usize>) -> Result<Self> {
        let n = one_line.len();
        let seen: BTreeSet<usize> = one_line.iter().copied().collect();
        if seen.len() != n || seen.iter().any(|&v| v < 1 || v > n) {
            return Err(Error::InvalidParams(format!("{one_line:?} is not a permutation")));
        }
        Ok(Permutation { one_line })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            one_line: (1..=n).collect(),
        }
    }

    pub fn longest(n: usize) -> Self {
        Permutation {
            one_line: (1..=n).rev().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.one_line.len()
    }

    /// `w(i)`, 1-based.
    pub fn at(&self, i: usize) -> usize {
        self.one_line[i - 1]
    }

    pub fn one_line(&self) -> &[usize] {
        &self.one_line
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch(self.n(), other.n()));
        }
        Ok(Permutation {
            one_line: other.one_line.iter().map(|&i| self.at(i)).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (k, &v) in self.one_line.iter().enumerate() {
            inv[v - 1] = k + 1;
        }
        Permutation { one_line: inv }
    }

    pub fn is_involution(&self) -> bool {
        self.inverse() == *self
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n() > 9 { " " } else { "" };
        let parts: Vec<String> = self.one_line.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(sep))
    }
}

/// `w_m = 1, n-1, n-2, ..., n-m+1, n, n-m, n-m-1, ..., 2`.
pub fn w_m(m: usize, n: usize) -> Result<Permutation> {
    if m < 2 || m + 1 > n {
        return Err(Error::IndexOutOfRange(format!("m = {m} needs 2 <= m <= n-1, n = {n}")));
    }
    let one_line = (1..=n)
        .map(|i| {
            if i == 1 {
                1
            } else if i <= m {
                n + 1 - i
            } else if i == m + 1 {
                n
            } else {
                n + 2 - i
            }
        })
        .collect();
    Permutation::new(one_line)
}

/// `|{i in [p] : w(i) <= q}|`.
pub fn r_w(w: &Permutation, p: usize, q: usize) -> usize {
    (1..=p).filter(|&i| w.at(i) <= q).count()
}

pub(crate) fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for t in start..items.len() {
            if items.len() - t < k - cur.len() {
                break;
            }
            cur.push(items[t]);
            go(items, k, t + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Nonzero minors cutting out `X_w ∩ Ω_e°`: in the chart `V_p` is spanned by the first `p`
/// columns of `g`, so `dim(V_p ∩ F_q) >= r_w(p,q)` says the rows `q+1..n`, columns `1..p`
/// have rank at most `p - r_w(p,q)`.
pub fn schubert_minors(w: &Permutation) -> Result<Vec<Polynomial>> {
    let n = w.n();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in 1..=n {
        for q in 1..n {
            let size = p - r_w(w, p, q) + 1;
            if size > p || size > n - q {
                continue;
            }
            let rows: Vec<usize> = (q + 1..=n).collect();
            let cols: Vec<usize> = (1..=p).collect();
            for rs in combinations(&rows, size) {
                for cs in combinations(&cols, size) {
                    let m = PolyMatrix::from_fn(size, size, |a, b| g_entry(rs[a], cs[b], n));
                    let d = m.determinant()?;
                    if d.is_zero() {
                        continue;
                    }
                    let key = d.to_string();
                    let neg = (-&d).to_string();
                    if seen.contains(&key) || seen.contains(&neg) {
                        continue;
                    }
                    seen.insert(key);
                    out.push(d);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_m_values() {
        assert_eq!(w_m(2, 3).unwrap(), Permutation::identity(3));
        assert_eq!(w_m(2, 5).unwrap().one_line(), &[1, 4, 5, 3, 2]);
        assert_eq!(w_m(3, 5).unwrap().one_line(), &[1, 4, 3, 5, 2]);
        assert_eq!(w_m(4, 5).unwrap().one_line(), &[1, 4, 3, 2, 5]);
        assert!(w_m(5, 5).is_err());
    }

    #[test]
    fn rank_function() {
        let w = w_m(2, 4).unwrap(); // 1 3 4 2
        assert_eq!(r_w(&w, 1, 1), 1);
        assert_eq!(r_w(&w, 2, 2), 1);
        assert_eq!(r_w(&w, 3, 3), 2);
        assert_eq!(r_w(&w, 4, 4), 4);
    }

    #[test]
    fn permutation_algebra() {
        let w = Permutation::new(vec![2, 3, 1]).unwrap();
        assert_eq!(w.compose(&w.inverse()).unwrap(), Permutation::identity(3));
        assert!(!w.is_involution());
        assert!(Permutation::longest(5).is_involution());
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(&[1, 2, 3, 4, 5], 2).len(), 10);
        assert_eq!(combinations(&[1, 2], 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn longest_element_imposes_nothing() {
        assert!(schubert_minors(&Permutation::longest(4)).unwrap().is_empty());
    }
}
