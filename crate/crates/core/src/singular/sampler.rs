use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::flag::{ideal_generators, ideal_generators_labeled, Flavor};
use crate::hess::HessenbergFunction;
use crate::ideals::flag_vars;
use crate::poly::{AffinePoint, VarId};

pub const MAX_CONSECUTIVE_FAILURES: usize = 100;
const NUM_RANGE: i64 = 20;
const DEN_RANGE: i64 = 8;
/// one draw in this many is exactly zero, to land on special strata
const ZERO_ONE_IN: u32 = 5;

/// Per-trial generator: the root seed fixes the key, the trial index picks the stream.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Numerator in `[-20, 20]`, denominator in `[1, 8]`, zero with probability about 1/5.
pub fn random_rational(rng: &mut impl Rng) -> BigRational {
    if rng.gen_ratio(1, ZERO_ONE_IN) {
        return BigRational::zero();
    }
    let num = rng.gen_range(-NUM_RANGE..=NUM_RANGE);
    let den = rng.gen_range(1..=DEN_RANGE);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn random_nonzero(rng: &mut impl Rng) -> BigRational {
    loop {
        let v = random_rational(rng);
        if !v.is_zero() {
            return v;
        }
    }
}

fn is_hm(h: &HessenbergFunction, m: usize) -> bool {
    HessenbergFunction::h_m(m, h.n()).is_ok_and(|g| g == *h)
}

fn supported(h: &HessenbergFunction) -> bool {
    let n = h.n();
    n >= 3 && (*h == HessenbergFunction::peterson(n) || (2..n).any(|m| is_hm(h, m)))
}

/// A rational point on `Hess(N,h) ∩ Ω_e°` for `h = h_m` or the Peterson function,
/// checked against every `F_{i,j}`.
pub fn sample_variety_point(h: &HessenbergFunction, seed: u64) -> Result<AffinePoint> {
    sample_with(h, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn sample_with(h: &HessenbergFunction, rng: &mut ChaCha8Rng) -> Result<AffinePoint> {
    if !supported(h) {
        return Err(Error::InvalidParams(format!(
            "sampling needs h_m or the Peterson function, got {h}"
        )));
    }
    let check = ideal_generators(h, Flavor::F)?;
    for _ in 0..MAX_CONSECUTIVE_FAILURES {
        let candidate = if is_hm(h, 2) {
            Some(cyclic_point(h.n(), rng))
        } else {
            triangular_point(h, rng)?
        };
        if let Some(pt) = candidate {
            let mut ok = true;
            for g in &check {
                if !g.evaluate(&pt)?.is_zero() {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(pt);
            }
        }
    }
    Err(Error::SamplerStuck {
        attempts: MAX_CONSECUTIVE_FAILURES,
    })
}

/// Solve the truncated generators one at a time for a variable that occurs linearly.
fn triangular_point(h: &HessenbergFunction, rng: &mut ChaCha8Rng) -> Result<Option<AffinePoint>> {
    let n = h.n();
    let mut pt = AffinePoint::new();
    for g in ideal_generators_labeled(h, Flavor::FTilde)? {
        let p = &g.poly;
        let mut open: Vec<VarId> = p.variables().into_iter().filter(|v| !pt.contains(*v)).collect();
        open.sort_by_key(|v| match *v {
            VarId::Flag(i, j) => (j, std::cmp::Reverse(i)),
            _ => (u8::MAX, std::cmp::Reverse(0)),
        });
        let Some(pos) = open.iter().position(|v| p.degree_in(*v) == 1) else {
            for v in open {
                pt.set(v, random_rational(rng));
            }
            if !p.evaluate(&pt)?.is_zero() {
                return Ok(None);
            }
            continue;
        };
        let target = open.remove(pos);
        for v in open {
            pt.set(v, random_rational(rng));
        }
        let rest = p.partial_eval(&pt);
        let a = rest.coefficient_in(target, 1).as_constant();
        let b = rest.coefficient_in(target, 0).as_constant();
        match (a, b) {
            (Some(a), Some(b)) if !a.is_zero() => pt.set(target, -b / a),
            _ => return Ok(None),
        }
    }
    for v in flag_vars(n) {
        if !pt.contains(v) {
            pt.set(v, random_rational(rng));
        }
    }
    Ok(Some(pt))
}

/// `h_2`: draw `(X, Y, Z)` on `XY = Z^n` and undo the elimination of the first column.
fn cyclic_point(n: usize, rng: &mut ChaCha8Rng) -> AffinePoint {
    let (x, y, z) = if rng.gen_ratio(1, ZERO_ONE_IN) {
        (BigRational::zero(), random_rational(rng), BigRational::zero())
    } else {
        let x = random_nonzero(rng);
        let z = random_rational(rng);
        let y = pow(&z, n) / &x;
        (x, y, z)
    };
    let mut pt = AffinePoint::new();
    let f = |i: usize, j: usize| VarId::flag(i, j);
    pt.set(f(2, 1), z.clone());
    pt.set(f(3, 1), &z * &z - &x);
    let mut tail = BigRational::zero();
    for k in 3..n {
        let v = random_rational(rng);
        tail += &v * pow(&z, n - k);
        pt.set(f(k, 2), v);
    }
    pt.set(f(n, 2), y - pow(&z, n - 2) - tail);
    let (x21, x31) = (pt.get(f(2, 1)).unwrap().clone(), pt.get(f(3, 1)).unwrap().clone());
    for i in 3..n {
        let xi1 = pt.get(f(i, 1)).unwrap().clone();
        let xi2 = pt.get(f(i, 2)).unwrap().clone();
        let next = &x21 * xi1 + &x31 * &xi2 - &x21 * &x21 * xi2;
        pt.set(f(i + 1, 1), next);
    }
    for j in 3..n {
        for i in j + 1..=n {
            pt.set(f(i, j), random_rational(rng));
        }
    }
    pt
}

fn pow(x: &BigRational, e: usize) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..e {
        out *= x;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::f;

    #[test]
    fn h2_points_satisfy_equations() {
        for n in 3..=6 {
            let h = HessenbergFunction::h_m(2, n).unwrap();
            for seed in 0..20 {
                let pt = sample_variety_point(&h, seed).unwrap();
                assert_eq!(pt.len(), n * (n - 1) / 2);
                assert!(f(n, 1, n).unwrap().evaluate(&pt).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn triangular_points() {
        for n in 3..=6 {
            let mut hs = vec![HessenbergFunction::peterson(n)];
            for m in 3..n {
                hs.push(HessenbergFunction::h_m(m, n).unwrap());
            }
            for h in hs {
                for seed in 0..10 {
                    let pt = sample_variety_point(&h, seed).unwrap();
                    assert_eq!(pt.len(), n * (n - 1) / 2, "h = {h}");
                }
            }
        }
    }

    #[test]
    fn determinism() {
        let h = HessenbergFunction::h_m(3, 5).unwrap();
        assert_eq!(
            sample_variety_point(&h, 42).unwrap(),
            sample_variety_point(&h, 42).unwrap()
        );
        let a = sample_with(&h, &mut trial_rng(7, 1)).unwrap();
        let b = sample_with(&h, &mut trial_rng(7, 2)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn unsupported_h() {
        assert!(sample_variety_point(&HessenbergFunction::identity(3), 0).is_err());
        assert!(sample_variety_point(&HessenbergFunction::full(4), 0).is_err());
    }
}
