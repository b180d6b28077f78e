//! Cells of the Peterson variety indexed by subsets of `[n-1]`, the permutations `w_I`,
//! the functions `h_I`, and the irreducible decomposition of `Sing(Pet_n)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exec::{par_map, Mode};
use crate::hess::HessenbergFunction;
use crate::report::{Params, SubCheck, VerificationReport};
use crate::singular::Permutation;

/// Largest `n` for the exhaustive enumeration.
pub const MAX_N_APPENDIX: usize = 12;

/// A subset `I ⊆ [n-1]`, stored as a bit mask (bit `k-1` for `k`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubsetIndex {
    n: usize,
    mask: u32,
}

impl SubsetIndex {
    pub fn new(n: usize, members: &[usize]) -> Result<Self> {
        if !(1..=32).contains(&n) {
            return Err(Error::InvalidParams(format!("n = {n} outside 1..=32")));
        }
        let mut mask = 0u32;
        for &k in members {
            if k < 1 || k >= n {
                return Err(Error::IndexOutOfRange(format!("{k} is not in [{}]", n - 1)));
            }
            mask |= 1 << (k - 1);
        }
        Ok(SubsetIndex { n, mask })
    }

    fn from_mask(n: usize, mask: u32) -> Self {
        SubsetIndex { n, mask }
    }

    /// `[a,b] ∩ [n-1]`, empty when `a > b`.
    pub fn interval(n: usize, a: usize, b: usize) -> Self {
        let mut mask = 0u32;
        for k in a.max(1)..=b.min(n - 1) {
            mask |= 1 << (k - 1);
        }
        SubsetIndex { n, mask }
    }

    pub fn full(n: usize) -> Self {
        Self::interval(n, 1, n - 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, k: usize) -> bool {
        k >= 1 && k < self.n && self.mask & (1 << (k - 1)) != 0
    }

    pub fn members(&self) -> Vec<usize> {
        (1..self.n).filter(|&k| self.contains(k)).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_subset(&self, other: &SubsetIndex) -> bool {
        self.mask & !other.mask == 0
    }

    /// All subsets of `[n-1]`.
    pub fn all(n: usize) -> Vec<SubsetIndex> {
        (0..1u32 << (n - 1)).map(|m| Self::from_mask(n, m)).collect()
    }
}

impl fmt::Display for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members().iter().map(|k| k.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Maximal runs of consecutive members, as closed intervals.
pub fn components(i: &SubsetIndex) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for k in i.members() {
        match out.last_mut() {
            Some((_, b)) if *b + 1 == k => *b = k,
            _ => out.push((k, k)),
        }
    }
    out
}

/// Product of the longest elements of the parabolic subgroups on the components of `I`.
pub fn w_i(i: &SubsetIndex) -> Permutation {
    let n = i.n();
    let mut w = Permutation::identity(n);
    for (a, b) in components(i) {
        // the longest element of S_{[a, b+1]} reverses those positions
        let one_line: Vec<usize> = (1..=n)
            .map(|p| if p >= a && p <= b + 1 { a + b + 1 - p } else { p })
            .collect();
        let w0 = Permutation::new(one_line).expect("a permutation");
        w = w.compose(&w0).expect("same size");
    }
    w
}

/// `h_I(k) = k + 1` for `k ∈ I`, `k` otherwise.
pub fn h_i(i: &SubsetIndex) -> HessenbergFunction {
    let values = (1..=i.n())
        .map(|k| if i.contains(k) { k + 1 } else { k })
        .collect();
    HessenbergFunction::from_values(values).expect("valid by construction")
}

fn excluded(n: usize) -> [SubsetIndex; 3] {
    [
        SubsetIndex::full(n),
        SubsetIndex::interval(n, 2, n - 1),
        SubsetIndex::interval(n, 1, n - 2),
    ]
}

/// `{J ⊆ [n-1] : J ≠ [n-1], [2,n-1], [1,n-2]}`, intervals read literally.
pub fn sing_cell_set(n: usize) -> Result<BTreeSet<SubsetIndex>> {
    if !(2..=MAX_N_APPENDIX).contains(&n) {
        return Err(Error::InvalidParams(format!("n = {n} outside 2..={MAX_N_APPENDIX}")));
    }
    let ex = excluded(n);
    Ok(SubsetIndex::all(n)
        .into_iter()
        .filter(|j| !ex.contains(j))
        .collect())
}

/// Index sets of the irreducible components: `[n-1] \ {j}` for `2 <= j <= n-2`, and `[2,n-2]`.
pub fn singular_components(n: usize) -> Vec<SubsetIndex> {
    let full = SubsetIndex::full(n);
    let mut out: Vec<SubsetIndex> = (2..n.saturating_sub(1))
        .map(|j| SubsetIndex::from_mask(n, full.mask & !(1 << (j - 1))))
        .collect();
    out.push(SubsetIndex::interval(n, 2, n.saturating_sub(2)));
    out
}

/// Set identity, union and irredundancy, by enumeration of all `2^{n-1}` subsets.
pub fn verify_appendix_identities(n: usize) -> Result<VerificationReport> {
    verify_appendix_identities_with(n, Mode::default())
}

pub fn verify_appendix_identities_with(n: usize, mode: Mode) -> Result<VerificationReport> {
    if !(3..=MAX_N_APPENDIX).contains(&n) {
        return Err(Error::InvalidParams(format!("n = {n} outside 3..={MAX_N_APPENDIX}")));
    }
    let mut report = VerificationReport::new("appendix", Params::n(n));
    let sing = sing_cell_set(n)?;
    let ex = excluded(n);
    let comps = singular_components(n);
    let middle = SubsetIndex::interval(n, 2, n - 2);

    // split the enumeration by the top bits of the mask
    let prefix_bits = (n - 1).min(4);
    let prefixes: Vec<u32> = (0..1u32 << prefix_bits).collect();
    let low = (n - 1 - prefix_bits) as u32;
    let results = par_map(mode, &prefixes, |&p| {
        let mut identity = Vec::new();
        let mut union = Vec::new();
        for rest in 0..1u32 << low {
            let j = SubsetIndex::from_mask(n, (p << low) | rest);
            let lhs = !ex.contains(&j);
            let rhs = (2..=n - 2).any(|k| !j.contains(k)) || j.is_subset(&middle);
            if lhs != rhs {
                identity.push(format!("{j}: left {lhs}, right {rhs}"));
            }
            let covered = comps.iter().any(|c| j.is_subset(c));
            if covered != sing.contains(&j) {
                union.push(format!("{j}: in a component {covered}, singular cell {}", !covered));
            }
        }
        (identity, union)
    });
    let mut identity = SubCheck::new("set identity");
    let mut union = SubCheck::new("union of components = singular cells");
    for (l, u) in results {
        for w in l {
            identity.fail(w);
        }
        for w in u {
            union.fail(w);
        }
    }
    identity.checked = 1 << (n - 1);
    union.checked = 1 << (n - 1);
    report.push(identity);
    report.push(union);

    let mut irr = SubCheck::new("irredundancy");
    for (a, ca) in comps.iter().enumerate() {
        for (b, cb) in comps.iter().enumerate() {
            if a != b {
                irr.record_bool(!ca.is_subset(cb), || format!("{ca} inside {cb}"));
            }
        }
    }
    report.push(irr);

    let mut count = SubCheck::new("cell count 2^(n-1) - 3");
    if n >= 4 {
        count.record_bool(sing.len() == (1 << (n - 1)) - 3, || {
            format!("{} cells", sing.len())
        });
    } else {
        count.not_attempted("the three excluded subsets coincide for n <= 3");
    }
    report.push(count);

    report.insert_data("degenerate", json!(n <= 3));
    report.insert_data(
        "components",
        json!(comps.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
    );
    report.insert_data(
        "singular_cells",
        json!(sing.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
    );
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    fn s(n: usize, m: &[usize]) -> SubsetIndex {
        SubsetIndex::new(n, m).unwrap()
    }

    #[test]
    fn components_of_subsets() {
        assert_eq!(components(&s(9, &[1, 2, 3, 6, 7])), vec![(1, 3), (6, 7)]);
        assert!(components(&s(9, &[])).is_empty());
        assert_eq!(components(&s(4, &[2])), vec![(2, 2)]);
    }

    #[test]
    fn longest_parabolic_products() {
        assert_eq!(w_i(&s(9, &[1, 2, 3, 6, 7])).to_string(), "432158769");
        assert_eq!(w_i(&s(5, &[])), Permutation::identity(5));
        assert_eq!(w_i(&SubsetIndex::full(6)), Permutation::longest(6));
    }

    #[test]
    fn hessenberg_of_subsets() {
        assert_eq!(h_i(&SubsetIndex::full(5)), HessenbergFunction::peterson(5));
        assert_eq!(h_i(&s(4, &[])), HessenbergFunction::identity(4));
        assert_eq!(h_i(&s(4, &[2])).values(), &[1, 3, 3, 4]);
    }

    #[test]
    fn cells_small_n() {
        let four: Vec<String> = sing_cell_set(4).unwrap().iter().map(|j| j.to_string()).collect();
        let mut expected = vec!["{}", "{1}", "{2}", "{3}", "{1,3}"];
        expected.sort();
        let mut got = four.clone();
        got.sort();
        assert_eq!(got, expected);
        // literal reading: [1] = {1} and [2,1] = [1,0] = ∅ are all excluded
        assert!(sing_cell_set(2).unwrap().is_empty());
        let three = sing_cell_set(3).unwrap();
        assert_eq!(three.into_iter().collect::<Vec<_>>(), vec![s(3, &[])]);
        assert_eq!(singular_components(3), vec![s(3, &[])]);
        assert_eq!(singular_components(4), vec![s(4, &[1, 3]), s(4, &[2])]);
    }

    #[test]
    fn large_survivors_are_full_minus_one() {
        for n in 4..=8 {
            for j in sing_cell_set(n).unwrap() {
                if j.len() == n - 2 {
                    let missing: Vec<usize> = (1..n).filter(|&k| !j.contains(k)).collect();
                    assert_eq!(missing.len(), 1);
                    assert!((2..=n - 2).contains(&missing[0]));
                }
                assert!(j.len() <= n - 2);
            }
        }
    }

    #[test]
    fn identities_all_n() {
        for n in 3..=MAX_N_APPENDIX {
            let r = verify_appendix_identities(n).unwrap();
            assert_eq!(r.status, Status::Pass, "n = {n}: {:?}", r.witnesses);
        }
        assert!(verify_appendix_identities(2).is_err());
    }

    #[test]
    fn involutions_and_dimensions() {
        for n in 2..=8 {
            for i in SubsetIndex::all(n) {
                assert!(w_i(&i).is_involution());
                assert_eq!(h_i(&i).dimension(), i.len());
            }
        }
    }
}
