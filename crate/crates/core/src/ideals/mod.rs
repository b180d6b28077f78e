//! Homogeneous ideals: truncated Gröbner bases, membership and Hilbert series.

mod groebner;
mod hilbert;

pub use groebner::{
    buchberger, buchberger_in, member, term_limit, GroebnerBasis, Ring, DEFAULT_TERM_LIMIT,
    TERM_LIMIT_ENV,
};
pub use hilbert::{
    free_series, product_series_coordinate, product_series_quantum, regular_sequence_certificate,
    standard_monomial_counts, staircase_series, Factor, Factorization, HilbertSeries,
};

use crate::hess::HessenbergFunction;
use crate::poly::VarId;

/// `x_{ij}`, `1 <= j < i <= n`.
pub fn flag_vars(n: usize) -> Vec<VarId> {
    (1..n)
        .flat_map(|j| (j + 1..=n).map(move |i| VarId::flag(i, j)))
        .collect()
}

/// `x_1, ..., x_n` and the `q_{rs}` surviving in `h`.
pub fn quantum_vars(h: &HessenbergFunction) -> Vec<VarId> {
    let mut v: Vec<VarId> = (1..=h.n()).map(VarId::x).collect();
    v.extend(h.surviving_q_set().into_iter().map(|(r, s)| VarId::q(r, s)));
    v
}
