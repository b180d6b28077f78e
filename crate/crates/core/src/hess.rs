//! Hessenberg functions `h: [n] -> [n]`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nondecreasing function with `h(j) >= j`. Values are stored 1-based as in `h(1), ..., h(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawHess", into = "RawHess")]
pub struct HessenbergFunction {
    values: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawHess {
    n: usize,
    h: Vec<usize>,
}

impl TryFrom<RawHess> for HessenbergFunction {
    type Error = Error;
    fn try_from(raw: RawHess) -> Result<Self> {
        if raw.h.len() != raw.n {
            return Err(Error::SizeMismatch(raw.n, raw.h.len()));
        }
        HessenbergFunction::from_values(raw.h)
    }
}

impl From<HessenbergFunction> for RawHess {
    fn from(h: HessenbergFunction) -> Self {
        RawHess {
            n: h.n(),
            h: h.values,
        }
    }
}

impl HessenbergFunction {
    pub fn from_values(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::InvalidParams("empty Hessenberg function".into()));
        }
        for (k, &v) in values.iter().enumerate() {
            let j = k + 1;
            if k > 0 && v < values[k - 1] {
                return Err(Error::NotNondecreasing { position: j });
            }
            if v < j {
                return Err(Error::BelowDiagonal { j, value: v });
            }
            if v > n {
                return Err(Error::IndexOutOfRange(format!("h({j}) = {v} > n = {n}")));
            }
        }
        Ok(HessenbergFunction { values })
    }

    pub fn identity(n: usize) -> Self {
        HessenbergFunction {
            values: (1..=n).collect(),
        }
    }

    pub fn full(n: usize) -> Self {
        HessenbergFunction { values: vec![n; n] }
    }

    /// `(2, 3, ..., n, n)`.
    pub fn peterson(n: usize) -> Self {
        HessenbergFunction {
            values: (1..=n).map(|j| (j + 1).min(n)).collect(),
        }
    }

    /// `(m, n, ..., n)`.
    pub fn h_m(m: usize, n: usize) -> Result<Self> {
        if m < 1 || m > n {
            return Err(Error::IndexOutOfRange(format!("m = {m} for n = {n}")));
        }
        let mut values = vec![n; n];
        values[0] = m;
        HessenbergFunction::from_values(values)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// `h(j)` for `1 <= j <= n`.
    pub fn at(&self, j: usize) -> usize {
        self.values[j - 1]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn is_indecomposable(&self) -> bool {
        (1..self.n()).all(|j| self.at(j) > j)
    }

    pub fn is_full(&self) -> bool {
        self.values.iter().all(|&v| v == self.n())
    }

    /// Split at every `j < n` with `h(j) = j`.
    pub fn decompose(&self) -> Vec<HessenbergFunction> {
        let mut parts = Vec::new();
        let mut start = 0;
        for j in 1..=self.n() {
            if self.at(j) == j {
                parts.push(HessenbergFunction {
                    values: self.values[start..j].iter().map(|v| v - start).collect(),
                });
                start = j;
            }
        }
        parts
    }

    /// Inverse of [`decompose`](Self::decompose).
    pub fn concat(parts: &[HessenbergFunction]) -> Result<Self> {
        let mut values = Vec::new();
        for p in parts {
            let off = values.len();
            values.extend(p.values.iter().map(|v| v + off));
        }
        HessenbergFunction::from_values(values)
    }

    pub fn dimension(&self) -> usize {
        (1..=self.n()).map(|j| self.at(j) - j).sum()
    }

    /// Pairs `(r, s)` with `q_{rs}` set to zero: `2 <= s <= n`, `1 <= r <= n - h(n+1-s)`.
    pub fn zeroed_q_set(&self) -> BTreeSet<(usize, usize)> {
        let n = self.n();
        let mut out = BTreeSet::new();
        for s in 2..=n {
            for r in 1..=n - self.at(n + 1 - s) {
                out.insert((r, s));
            }
        }
        out
    }

    /// Pairs `(r, s)`, `r < s`, whose `q_{rs}` survives the specialization.
    pub fn surviving_q_set(&self) -> BTreeSet<(usize, usize)> {
        let zeroed = self.zeroed_q_set();
        let n = self.n();
        (1..=n)
            .flat_map(|s| (1..s).map(move |r| (r, s)))
            .filter(|p| !zeroed.contains(p))
            .collect()
    }

    pub fn leq(&self, other: &HessenbergFunction) -> Result<bool> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch(self.n(), other.n()));
        }
        Ok(self.values.iter().zip(&other.values).all(|(a, b)| a <= b))
    }

    /// Box `(i, j)` lies in the staircase iff `i <= h(j)`.
    pub fn contains_box(&self, i: usize, j: usize) -> bool {
        i <= self.at(j)
    }

    /// Rows top to bottom, `#` for boxes in the staircase and `.` otherwise.
    pub fn diagram(&self) -> String {
        let n = self.n();
        let mut s = String::new();
        for i in 1..=n {
            for j in 1..=n {
                s.push(if self.contains_box(i, j) { '#' } else { '.' });
            }
            s.push('\n');
        }
        s
    }

    /// Every Hessenberg function on `[n]`.
    pub fn all(n: usize) -> Vec<HessenbergFunction> {
        fn go(n: usize, prefix: &mut Vec<usize>, out: &mut Vec<HessenbergFunction>) {
            let j = prefix.len() + 1;
            if j > n {
                out.push(HessenbergFunction {
                    values: prefix.clone(),
                });
                return;
            }
            let lo = prefix.last().copied().unwrap_or(1).max(j);
            for v in lo..=n {
                prefix.push(v);
                go(n, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for HessenbergFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for HessenbergFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad Hessenberg value `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        HessenbergFunction::from_values(values)
    }
}
