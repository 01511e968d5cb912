//! Exact integer helpers: extended gcd, two-modulus CRT, and the exhaustive
//! witness search for even-order counterexample families.

use num_integer::{gcd, lcm};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::recurrence::RecurrenceSpec;

/// `(g, x, y)` with `g = gcd(a, b) > 0` and `a·x + b·y = g`.
pub fn extended_gcd(a: i64, b: i64) -> Result<(i64, i64, i64)> {
    if a == 0 && b == 0 {
        return Err(Error::GcdOfZeros);
    }
    let (mut old_r, mut r) = (a, b);
    let (mut old_x, mut x) = (1i64, 0i64);
    let (mut old_y, mut y) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_x, x) = (x, old_x - q * x);
        (old_y, y) = (y, old_y - q * y);
    }
    if old_r < 0 {
        Ok((-old_r, -old_x, -old_y))
    } else {
        Ok((old_r, old_x, old_y))
    }
}

/// The system `x ≡ residue_a (mod modulus_a)`, `x ≡ residue_b (mod modulus_b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CongruencePair {
    residue_a: i64,
    modulus_a: i64,
    residue_b: i64,
    modulus_b: i64,
}

impl CongruencePair {
    pub fn new(residue_a: i64, modulus_a: i64, residue_b: i64, modulus_b: i64) -> Result<Self> {
        for m in [modulus_a, modulus_b] {
            if m < 1 {
                return Err(Error::NonPositiveModulus(m));
            }
        }
        Ok(Self {
            residue_a: residue_a.rem_euclid(modulus_a),
            modulus_a,
            residue_b: residue_b.rem_euclid(modulus_b),
            modulus_b,
        })
    }

    pub fn residues(&self) -> (i64, i64) {
        (self.residue_a, self.residue_b)
    }

    pub fn moduli(&self) -> (i64, i64) {
        (self.modulus_a, self.modulus_b)
    }
}

/// Unique solution modulo `lcm(modulus_a, modulus_b)` as `(solution, lcm)`,
/// or `None` when the residues disagree modulo the gcd of the moduli.
pub fn crt_solve(sys: &CongruencePair) -> Option<(i64, i64)> {
    let (ra, ma) = (sys.residue_a, sys.modulus_a);
    let (rb, mb) = (sys.residue_b, sys.modulus_b);
    // moduli are positive, so this cannot fail
    let (g, p, _) = extended_gcd(ma, mb).ok()?;
    if (rb - ra) % g != 0 {
        return None;
    }
    let l = ma / g * mb;
    // x = ra + ma * s with ma * s ≡ rb - ra (mod mb)
    let step = mb / g;
    let s = (((rb - ra) / g) as i128 * p as i128).rem_euclid(step as i128);
    let x = (ra as i128 + ma as i128 * s).rem_euclid(l as i128) as i64;
    Some((x, l))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum WitnessBranch {
    /// `tk ≡ t'k`, `tm1 + n/2 ≡ t'm2`, `tm2 + n/2 ≡ t'm1`.
    CaseI,
    /// `tk ≡ -t'k`, `tm1 - tk + n/2 ≡ t'm1`, `tm2 - tk + n/2 ≡ t'm2`.
    CaseII,
}

/// A solution `(t, t')` of one of the two counterexample congruence systems.
///
/// When `(t', t)` solves the same branch the pair is reported once, with
/// `t < t'` and `exchange_closed = true`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Remark5Witness {
    pub t: usize,
    pub t_prime: usize,
    pub branch: WitnessBranch,
    pub exchange_closed: bool,
}

impl Remark5Witness {
    /// The ordered pairs this record stands for.
    pub fn orientations(&self) -> Vec<(usize, usize)> {
        if self.exchange_closed {
            vec![(self.t, self.t_prime), (self.t_prime, self.t)]
        } else {
            vec![(self.t, self.t_prime)]
        }
    }
}

/// Which sign the `tk` term carries in the second congruence system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CaseIiForm {
    /// `tm + tk + n/2 ≡ t'm`, the form found in the literature. It does not
    /// match the spectral zero-sets (see `remark5_witnesses_as_printed`).
    Printed,
    /// `tm - tk + n/2 ≡ t'm`, which follows from `ε^{t'k} = ε^{-tk}`.
    Corrected,
}

/// All solutions `(t, t')`, `1 ≤ t, t' < n`, `gcd(n, t) = 1`,
/// `t' ≢ ±t (mod n)`, of the two congruence systems that describe
/// non-affinely-regular solution families for even `n`. Exhaustive search.
pub fn remark5_witnesses(spec: &RecurrenceSpec) -> Result<Vec<Remark5Witness>> {
    witnesses(spec, CaseIiForm::Corrected)
}

/// Same search with the second system's `tk` term added instead of
/// subtracted. Kept for comparison: this variant disagrees with the spectral
/// classification (for example at `(12, 1, 4, 2)`).
pub fn remark5_witnesses_as_printed(spec: &RecurrenceSpec) -> Result<Vec<Remark5Witness>> {
    witnesses(spec, CaseIiForm::Printed)
}

fn witnesses(spec: &RecurrenceSpec, form: CaseIiForm) -> Result<Vec<Remark5Witness>> {
    let n = spec.n();
    if !n.is_multiple_of(2) {
        return Err(Error::OddOrder(n));
    }
    let half = n / 2;
    let (m1, m2, k) = (spec.m1(), spec.m2(), spec.k());
    let congruent = |a: usize, b: usize| a % n == b % n;

    let solves = |t: usize, tp: usize, branch: WitnessBranch| -> bool {
        match branch {
            WitnessBranch::CaseI => {
                congruent(t * k, tp * k)
                    && congruent(t * m1 + half, tp * m2)
                    && congruent(t * m2 + half, tp * m1)
            }
            WitnessBranch::CaseII => {
                let tk = (t * k) % n;
                let shift = match form {
                    CaseIiForm::Printed => tk + half,
                    CaseIiForm::Corrected => n - tk + half,
                };
                congruent(t * k + tp * k, 0)
                    && congruent(t * m1 + shift, tp * m1)
                    && congruent(t * m2 + shift, tp * m2)
            }
        }
    };

    let mut found = Vec::new();
    for branch in [WitnessBranch::CaseI, WitnessBranch::CaseII] {
        for t in 1..n {
            if gcd(t, n) != 1 {
                continue;
            }
            for tp in 1..n {
                if tp == t || tp + t == n || !solves(t, tp, branch) {
                    continue;
                }
                let mirrored = gcd(tp, n) == 1 && solves(tp, t, branch);
                if mirrored && tp < t {
                    continue;
                }
                found.push(Remark5Witness {
                    t,
                    t_prime: tp,
                    branch,
                    exchange_closed: mirrored,
                });
            }
        }
    }
    found.sort();
    Ok(found)
}

/// `gcd(a, b, c)` over non-negative integers.
pub fn gcd3(a: usize, b: usize, c: usize) -> usize {
    gcd(gcd(a, b), c)
}

pub fn lcm_usize(a: usize, b: usize) -> usize {
    lcm(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(n: usize, m1: i64, m2: i64, k: i64) -> RecurrenceSpec {
        RecurrenceSpec::new(n, m1, m2, k).unwrap()
    }

    #[test]
    fn extended_gcd_examples() {
        assert_eq!(extended_gcd(6, 5).unwrap(), (1, 1, -1));
        let (g, x, y) = extended_gcd(12, 8).unwrap();
        assert_eq!(g, 4);
        assert_eq!(12 * x + 8 * y, 4);
        assert_eq!(extended_gcd(0, 0), Err(Error::GcdOfZeros));
        let (g, x, y) = extended_gcd(-9, 6).unwrap();
        assert_eq!((g, -9 * x + 6 * y), (3, 3));
    }

    #[test]
    fn coprime_gcds_for_thirty() {
        // gcd(30, 6) = 6 and gcd(30, 5) = 5 are coprime
        let (g, x, y) = extended_gcd(gcd(30, 6), gcd(30, 5)).unwrap();
        assert_eq!(g, 1);
        assert_eq!(6 * x + 5 * y, 1);
    }

    #[test]
    fn crt_examples() {
        let sys = CongruencePair::new(1, 5, 4, 6).unwrap();
        assert_eq!(crt_solve(&sys), Some((16, 30)));
        let sys = CongruencePair::new(1, 2, 0, 2).unwrap();
        assert_eq!(crt_solve(&sys), None);
        let sys = CongruencePair::new(1, 5, -1, 6).unwrap();
        assert_eq!(crt_solve(&sys), Some((11, 30)));
        assert!(CongruencePair::new(0, 0, 1, 3).is_err());
    }

    #[test]
    fn crt_agrees_with_scan() {
        for ma in 1..=60i64 {
            for mb in 1..=60i64 {
                for (ra, rb) in [(0, 0), (1, 0), (ma - 1, mb / 2), (ma / 3, mb - 1)] {
                    let sys = CongruencePair::new(ra, ma, rb, mb).unwrap();
                    let l = num_integer::lcm(ma, mb);
                    let scan: Vec<i64> = (0..l)
                        .filter(|x| (x - ra).rem_euclid(ma) == 0 && (x - rb).rem_euclid(mb) == 0)
                        .collect();
                    match crt_solve(&sys) {
                        Some((x, m)) => {
                            assert_eq!(m, l);
                            assert_eq!(scan, vec![x], "ma={ma} mb={mb} ra={ra} rb={rb}");
                        }
                        None => assert!(scan.is_empty()),
                    }
                }
            }
        }
    }

    #[test]
    fn thirty_gon_witness() {
        // 1·6 ≡ 11·6, 1·7 + 15 ≡ 11·2, 1·2 + 15 ≡ 11·7 (mod 30)
        let w = remark5_witnesses(&spec(30, 7, 2, 6)).unwrap();
        assert!(w
            .iter()
            .any(|w| w.orientations().contains(&(1, 11)) && w.branch == WitnessBranch::CaseI));
    }

    #[test]
    fn hexagon_has_no_witness() {
        assert!(remark5_witnesses(&spec(6, 2, 1, 1)).unwrap().is_empty());
        assert!(remark5_witnesses_as_printed(&spec(6, 2, 1, 1))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn odd_order_rejected() {
        assert_eq!(
            remark5_witnesses(&spec(15, 5, 3, 2)),
            Err(Error::OddOrder(15))
        );
    }

    #[test]
    fn printed_second_system_differs_from_corrected() {
        let s = spec(12, 1, 4, 2);
        assert!(remark5_witnesses_as_printed(&s).unwrap().is_empty());
        let corrected = remark5_witnesses(&s).unwrap();
        assert!(corrected.iter().all(|w| w.branch == WitnessBranch::CaseII));
        let pairs: Vec<_> = corrected.iter().flat_map(|w| w.orientations()).collect();
        assert!(pairs.contains(&(1, 5)));
    }

    #[test]
    fn witness_pairs_share_gcd_with_n() {
        for n in (4..=24).step_by(2) {
            for m1 in 1..n as i64 {
                for m2 in 1..n as i64 {
                    for k in 1..n as i64 {
                        let Ok(s) = RecurrenceSpec::new(n, m1, m2, k) else {
                            continue;
                        };
                        if !s.gcd_condition() {
                            continue;
                        }
                        for w in remark5_witnesses(&s).unwrap() {
                            assert_eq!(gcd(w.t, n), gcd(w.t_prime, n), "{s:?} {w:?}");
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn extended_gcd_bezout(a in -10_000i64..10_000, b in -10_000i64..10_000) {
            prop_assume!(a != 0 || b != 0);
            let (g, x, y) = extended_gcd(a, b).unwrap();
            prop_assert!(g > 0);
            prop_assert_eq!(a * x + b * y, g);
            prop_assert_eq!(g as u64, gcd(a.unsigned_abs(), b.unsigned_abs()));
        }

        #[test]
        fn crt_solution_satisfies_both(ra in -500i64..500, ma in 1i64..500, rb in -500i64..500, mb in 1i64..500) {
            let sys = CongruencePair::new(ra, ma, rb, mb).unwrap();
            if let Some((x, l)) = crt_solve(&sys) {
                prop_assert_eq!((x - ra).rem_euclid(ma), 0);
                prop_assert_eq!((x - rb).rem_euclid(mb), 0);
                prop_assert!((0..l).contains(&x));
            } else {
                prop_assert_ne!((ra - rb).rem_euclid(gcd(ma, mb)), 0);
            }
        }
    }
}
