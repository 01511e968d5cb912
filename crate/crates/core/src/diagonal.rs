//! Side and diagonal lengths of the regular `n`-gon inscribed in a circle of
//! diameter 1, `d_j = sin(jπ/n)`, and the exhaustive search for two distinct
//! index pairs sharing the same length ratio.

use serde::Serialize;

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};

/// Differences below this are certified equal.
pub const EQUAL_BELOW: f64 = 1e-24;
/// Differences above this are certified unequal.
pub const DISTINCT_ABOVE: f64 = 1e-20;

/// Two index pairs `(k, l) ≠ (k', l')` with `d_k / d_l = d_k' / d_l' ≠ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioCollision {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub k_prime: usize,
    pub l_prime: usize,
    pub ratio: f64,
}

fn check_index(n: usize, j: usize) -> Result<()> {
    if j == 0 || 2 * j > n {
        return Err(Error::DiagonalIndex { j, max: n / 2 });
    }
    Ok(())
}

pub fn diagonal_length(n: usize, j: usize) -> Result<f64> {
    check_index(n, j)?;
    Ok((std::f64::consts::PI * j as f64 / n as f64).sin())
}

pub fn diagonal_length_dd(n: usize, j: usize) -> Result<DoubleDouble> {
    check_index(n, j)?;
    Ok(DoubleDouble::sin_pi_fraction(j as u64, n as u64))
}

/// Tests every quadruple in `[1, ⌊n/2⌋]⁴` with `k ≠ l` and
/// `(k, l) ≠ (k', l')` through the cross product
/// `d_k·d_l' − d_k'·d_l` in double-double.
///
/// Returns every collision found. A difference between [`EQUAL_BELOW`] and
/// [`DISTINCT_ABOVE`] is neither and aborts the scan.
pub fn lemma3_scan(n: usize) -> Result<Vec<RatioCollision>> {
    let half = n / 2;
    if half == 0 {
        return Ok(Vec::new());
    }
    let d: Vec<DoubleDouble> = (0..=half)
        .map(|j| {
            if j == 0 {
                DoubleDouble::ZERO
            } else {
                DoubleDouble::sin_pi_fraction(j as u64, n as u64)
            }
        })
        .collect();

    let mut collisions = Vec::new();
    for k in 1..=half {
        for l in (1..=half).filter(|&l| l != k) {
            for kp in 1..=half {
                for lp in 1..=half {
                    if (k, l) == (kp, lp) || kp == lp {
                        continue;
                    }
                    let gap = (d[k] * d[lp] - d[kp] * d[l]).abs().to_f64();
                    if gap < EQUAL_BELOW {
                        collisions.push(RatioCollision {
                            n,
                            k,
                            l,
                            k_prime: kp,
                            l_prime: lp,
                            ratio: d[k].to_f64() / d[l].to_f64(),
                        });
                    } else if gap <= DISTINCT_ABOVE {
                        return Err(Error::CertificationGap {
                            n,
                            k,
                            l,
                            k_prime: kp,
                            l_prime: lp,
                            gap,
                        });
                    }
                }
            }
        }
    }
    Ok(collisions)
}

/// All `(k, l)` in `[1, ⌊n/2⌋]²` with `|d_k / d_l − r| ≤ tol`.
pub fn ratio_lookup(n: usize, r: f64, tol: f64) -> Vec<(usize, usize)> {
    let half = n / 2;
    let d: Vec<f64> = (0..=half)
        .map(|j| (std::f64::consts::PI * j as f64 / n as f64).sin())
        .collect();
    let mut out = Vec::new();
    for k in 1..=half {
        for l in 1..=half {
            if (d[k] / d[l] - r).abs() <= tol {
                out.push((k, l));
            }
        }
    }
    out
}
