//! The recurrence `p[j+m1] - p[j+m2] = w (p[j+k] - p[j])` as a circulant
//! system.
//!
//! Its coefficient row is `c_0 = w`, `c_k = -w`, `c_{m1} = 1`, `c_{m2} = -1`,
//! so the eigenvalue on the Fourier polygon `v_t` is
//! `μ_t = w (1 - ε^{tk}) + ε^{tm1} - ε^{tm2}` and the solutions are exactly the
//! combinations of `v_t` over the zero-set `{t : μ_t = 0}`. Every nonzero
//! `t` with `ε^{tk} ≠ 1` pins one ratio `w_t = (ε^{tm1} - ε^{tm2}) / (ε^{tk} - 1)`;
//! grouping equal ratios gives the admissible families.
//!
//! Zero-sets are then sorted into the terminal cases:
//!
//! | case | zero-set besides 0       | w        |
//! |------|--------------------------|----------|
//! | A    | empty                    | any      |
//! | B    | `{t}`                    | non-real |
//! | C    | `{t, n-t}`               | real     |
//! | D    | `{t, t'}`, `t' ≠ n-t`    | non-real |
//! | E    | `{t, t', n-t, n-t'}`     | real     |
//!
//! D and E only occur for even `n`. The list is exhaustive when `|w| ≠ 1`
//! and `gcd(n, k, m1 - m2) = 1`; outside those hypotheses other patterns
//! appear and are labelled [`CaseLabel::Unclassified`].

use num_integer::gcd;
use serde::Serialize;

use crate::cyclotomic::{fourier_vector, root_power_unchecked, ComplexPolygon, C64};
use crate::error::{Error, Result};
use crate::modular::gcd3;

/// The integer data `(n, m1, m2, k)` of a recurrence, with the offsets
/// reduced into `[1, n-1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RecurrenceSpec {
    n: usize,
    m1: usize,
    m2: usize,
    k: usize,
}

impl RecurrenceSpec {
    pub fn new(n: usize, m1: i64, m2: i64, k: i64) -> Result<Self> {
        let invalid = |reason| Error::InvalidRecurrence {
            n: n as i64,
            m1,
            m2,
            k,
            reason,
        };
        if n < 4 {
            return Err(invalid("n must be at least 4"));
        }
        let reduce = |x: i64| x.rem_euclid(n as i64) as usize;
        let (rm1, rm2, rk) = (reduce(m1), reduce(m2), reduce(k));
        if rk == 0 {
            return Err(invalid("k is divisible by n"));
        }
        if rm1 == rm2 {
            return Err(invalid("m1 - m2 is divisible by n"));
        }
        if rm1 == 0 || rm2 == 0 {
            return Err(invalid("m1 and m2 must not be divisible by n"));
        }
        Ok(Self {
            n,
            m1: rm1,
            m2: rm2,
            k: rk,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m1(&self) -> usize {
        self.m1
    }

    pub fn m2(&self) -> usize {
        self.m2
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `(m1 - m2) mod n`, never zero.
    pub fn m(&self) -> usize {
        (self.m1 + self.n - self.m2) % self.n
    }

    /// `gcd(n, k, m1 - m2) = 1`.
    pub fn gcd_condition(&self) -> bool {
        gcd3(self.n, self.k, self.m()) == 1
    }

    /// `n` odd, or `n > 2·gcd(n, k)·gcd(n, m1 - m2)`.
    pub fn evenness_bound(&self) -> bool {
        self.n % 2 == 1 || self.n > 2 * gcd(self.n, self.k) * gcd(self.n, self.m())
    }

    pub fn meets_hypotheses(&self) -> bool {
        self.gcd_condition() && self.evenness_bound()
    }

    /// `m1 + m2 ≡ k (mod n)`.
    pub fn congruence_check(&self) -> bool {
        (self.m1 + self.m2) % self.n == self.k
    }

    /// First row of the circulant coefficient matrix for ratio `w`.
    pub fn first_row(&self, w: C64) -> Vec<C64> {
        let mut row = vec![C64::new(0.0, 0.0); self.n];
        row[0] += w;
        row[self.k] -= w;
        row[self.m1] += 1.0;
        row[self.m2] -= 1.0;
        row
    }
}

/// Tolerances for the spectral analysis. All are relative; see the field
/// docs for the scale each one is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// `|μ_t| ≤ zero · (1 + Σ|c_j|)` counts as a zero eigenvalue.
    pub zero: f64,
    /// Ratios group together when `|w_t - w_s| ≤ grouping · (1 + |w_t|)`.
    pub grouping: f64,
    /// `||w| - 1| ≤ unit_modulus` flags the family.
    pub unit_modulus: f64,
    /// `|Im w| ≤ real` counts as real.
    pub real: f64,
    /// Basis residual allowed by `solution_basis`.
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero: 1e-9,
            grouping: 1e-9,
            unit_modulus: 1e-9,
            real: 1e-9,
            residual: 1e-9,
        }
    }
}

impl Tolerances {
    /// Every field set to the same value.
    pub fn uniform(tol: f64) -> Self {
        Self {
            zero: tol,
            grouping: tol,
            unit_modulus: tol,
            real: tol,
            residual: tol,
        }
    }

    fn zero_bound(&self, w: C64) -> f64 {
        self.zero * (1.0 + 2.0 * w.norm() + 2.0)
    }
}

/// `μ_t = w (1 - ε^{tk}) + ε^{tm1} - ε^{tm2}`.
pub fn recurrence_eigenvalue(spec: &RecurrenceSpec, w: C64, t: i64) -> C64 {
    let n = spec.n;
    let e = |j: i64| root_power_unchecked(n, j);
    w * (C64::new(1.0, 0.0) - e(t * spec.k as i64)) + e(t * spec.m1 as i64) - e(t * spec.m2 as i64)
}

/// The indices `t ∈ [0, n)` with `μ_t = 0` for this `w`.
pub fn zero_set(spec: &RecurrenceSpec, w: C64, tol: &Tolerances) -> Vec<usize> {
    let bound = tol.zero_bound(w);
    (0..spec.n)
        .filter(|&t| recurrence_eigenvalue(spec, w, t as i64).norm() <= bound)
        .collect()
}

/// `max_j |p[j+m1] - p[j+m2] - w (p[j+k] - p[j])|`.
pub fn recurrence_residual(polygon: &ComplexPolygon, m1: i64, m2: i64, k: i64, w: C64) -> f64 {
    (0..polygon.n() as i64)
        .map(|j| {
            let lhs = polygon.vertex(j + m1) - polygon.vertex(j + m2);
            let rhs = w * (polygon.vertex(j + k) - polygon.vertex(j));
            (lhs - rhs).norm()
        })
        .fold(0.0, f64::max)
}

/// One admissible ratio together with every Fourier index it annihilates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioFamily {
    pub w: C64,
    /// Sorted, always starts with 0.
    pub zero_set: Vec<usize>,
    pub is_unit_modulus: bool,
}

impl RatioFamily {
    pub fn is_real(&self, tol: &Tolerances) -> bool {
        self.w.im.abs() <= tol.real
    }
}

pub fn admissible_ratios(spec: &RecurrenceSpec) -> Vec<RatioFamily> {
    admissible_ratios_with(spec, &Tolerances::default())
}

/// Groups the ratios `w_t` over all `t` with `ε^{tk} ≠ 1`, dropping `w = 0`.
/// Each family's zero-set is recomputed from the eigenvalues, so indices with
/// `ε^{tk} = 1` are included whenever they are zeros too.
pub fn admissible_ratios_with(spec: &RecurrenceSpec, tol: &Tolerances) -> Vec<RatioFamily> {
    let n = spec.n;
    let mut families: Vec<RatioFamily> = Vec::new();
    for t in 1..n {
        if (t * spec.k).is_multiple_of(n) {
            continue;
        }
        let t = t as i64;
        let e = |j: i64| root_power_unchecked(n, j);
        let w = (e(t * spec.m1 as i64) - e(t * spec.m2 as i64))
            / (e(t * spec.k as i64) - C64::new(1.0, 0.0));
        if w.norm() <= tol.zero {
            continue;
        }
        // a grouped index must also be a spectral zero of its family
        let known = families.iter().any(|f| {
            (f.w - w).norm() <= tol.grouping * (1.0 + w.norm())
                && f.zero_set.contains(&(t as usize))
        });
        if known {
            continue;
        }
        let zero_set = zero_set(spec, w, tol);
        debug_assert!(zero_set.contains(&(t as usize)));
        families.push(RatioFamily {
            w,
            zero_set,
            is_unit_modulus: (w.norm() - 1.0).abs() <= tol.unit_modulus,
        });
    }
    families
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseLabel {
    A,
    B,
    C,
    D,
    E,
    /// A zero-set outside the case table; only possible when `|w| = 1` or
    /// `gcd(n, k, m1 - m2) > 1`.
    Unclassified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// No solution has pairwise distinct vertices.
    Degenerate,
    Regular(usize),
    AffinelyRegular(usize),
    CounterexampleFamily(usize, usize),
    OutsideCaseList,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HypothesisFlags {
    pub gcd_condition: bool,
    pub evenness_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub spec: RecurrenceSpec,
    pub w: C64,
    pub case_label: CaseLabel,
    pub zero_set: Vec<usize>,
    pub hypothesis_flags: HypothesisFlags,
    pub verdict: Verdict,
    pub congruence_check: bool,
    pub is_unit_modulus: bool,
    pub is_real: bool,
}

pub fn classify(spec: &RecurrenceSpec, w: C64) -> Result<CaseReport> {
    classify_with(spec, w, &Tolerances::default())
}

pub fn classify_with(spec: &RecurrenceSpec, w: C64, tol: &Tolerances) -> Result<CaseReport> {
    if w.norm() <= tol.zero {
        return Err(Error::ZeroRatio);
    }
    let n = spec.n;
    let zeros = zero_set(spec, w, tol);
    let extra: Vec<usize> = zeros.iter().copied().filter(|&t| t != 0).collect();
    let is_real = w.im.abs() <= tol.real;
    let is_unit_modulus = (w.norm() - 1.0).abs() <= tol.unit_modulus;
    let even = n.is_multiple_of(2);
    let has_half = even && extra.contains(&(n / 2));
    let coprime = |t: usize| gcd(t, n) == 1;
    let mirrored = |t: usize| extra.contains(&(n - t));

    let (case_label, verdict) = match (extra.len(), is_real) {
        (0, _) => (CaseLabel::A, Verdict::Degenerate),
        (1, false) if !has_half => {
            let t = extra[0];
            let v = if coprime(t) {
                Verdict::Regular(t)
            } else {
                Verdict::Degenerate
            };
            (CaseLabel::B, v)
        }
        (2, true) if !has_half && extra[0] + extra[1] == n => {
            let t = extra[0];
            let v = if coprime(t) {
                Verdict::AffinelyRegular(t)
            } else {
                Verdict::Degenerate
            };
            (CaseLabel::C, v)
        }
        (2, false) if even && !has_half && extra[0] + extra[1] != n => {
            let (t, tp) = (extra[0], extra[1]);
            let v = if coprime(t) && coprime(tp) {
                Verdict::CounterexampleFamily(t, tp)
            } else {
                Verdict::Degenerate
            };
            (CaseLabel::D, v)
        }
        (4, true) if even && !has_half && extra.iter().all(|&t| mirrored(t)) => {
            // extra = {t, t', n-t', n-t} in sorted order
            let (t, tp) = (extra[0], extra[1]);
            let v = if coprime(t) && coprime(tp) {
                Verdict::CounterexampleFamily(t, tp)
            } else {
                Verdict::Degenerate
            };
            (CaseLabel::E, v)
        }
        _ => {
            if spec.gcd_condition() && !is_unit_modulus {
                return Err(Error::UnmatchedZeroSet { zero_set: zeros });
            }
            (CaseLabel::Unclassified, Verdict::OutsideCaseList)
        }
    };

    Ok(CaseReport {
        spec: *spec,
        w,
        case_label,
        zero_set: zeros,
        hypothesis_flags: HypothesisFlags {
            gcd_condition: spec.gcd_condition(),
            evenness_bound: spec.evenness_bound(),
        },
        verdict,
        congruence_check: spec.congruence_check(),
        is_unit_modulus,
        is_real,
    })
}

/// The Fourier polygons `v_t` over the zero-set: a basis of all solutions.
/// Each one is pushed through the recurrence as a check.
pub fn solution_basis(spec: &RecurrenceSpec, w: C64) -> Result<Vec<ComplexPolygon>> {
    solution_basis_with(spec, w, &Tolerances::default())
}

pub fn solution_basis_with(
    spec: &RecurrenceSpec,
    w: C64,
    tol: &Tolerances,
) -> Result<Vec<ComplexPolygon>> {
    let report = classify_with(spec, w, tol)?;
    let scale = 1.0 + w.norm();
    report
        .zero_set
        .iter()
        .map(|&t| {
            let v = fourier_vector(spec.n, t as i64)?;
            let residual =
                recurrence_residual(&v, spec.m1 as i64, spec.m2 as i64, spec.k as i64, w);
            if residual > tol.residual * scale {
                return Err(Error::ResidualCheckFailed { t, residual });
            }
            Ok(v)
        })
        .collect()
}

/// A family that contradicts the regular / affinely regular conclusion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepViolation {
    pub spec: RecurrenceSpec,
    pub w: C64,
    pub zero_set: Vec<usize>,
    pub case_label: Option<CaseLabel>,
    pub reason: String,
}

/// A non-degenerate case D/E family found on a spec that fails the
/// evenness bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleDetection {
    pub spec: RecurrenceSpec,
    pub w: C64,
    pub case_label: CaseLabel,
    pub t: usize,
    pub t_prime: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepScope {
    /// Only specs meeting both hypotheses.
    Hypotheses,
    /// Also classify specs with `gcd(n, k, m1 - m2) = 1` that fail the
    /// evenness bound, and report their counterexample families.
    WithControlGroup,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub n_min: usize,
    pub n_max: usize,
    pub specs_checked: usize,
    pub families_checked: usize,
    pub passed: usize,
    /// Families whose only solutions have repeated vertices.
    pub vacuous: usize,
    pub unit_modulus_skipped: usize,
    pub violations: Vec<SweepViolation>,
    pub control_specs: usize,
    pub counterexamples: Vec<CounterexampleDetection>,
}

/// Exhaustive check over `4 ≤ n ≤ n_max`: every family with `|w| ≠ 1` that
/// admits a polygon with distinct vertices must be case B with
/// `m1 + m2 ≢ k`, or case C with `m1 + m2 ≡ k` and real `w`.
pub fn theorem2_sweep(n_max: usize) -> Result<SweepReport> {
    theorem2_sweep_range(4, n_max, SweepScope::Hypotheses, &Tolerances::default())
}

pub fn theorem2_sweep_range(
    n_min: usize,
    n_max: usize,
    scope: SweepScope,
    tol: &Tolerances,
) -> Result<SweepReport> {
    if n_max < 4 {
        return Err(Error::SweepRange(n_max));
    }
    let mut report = SweepReport {
        n_min: n_min.max(4),
        n_max,
        specs_checked: 0,
        families_checked: 0,
        passed: 0,
        vacuous: 0,
        unit_modulus_skipped: 0,
        violations: Vec::new(),
        control_specs: 0,
        counterexamples: Vec::new(),
    };
    for n in report.n_min..=n_max {
        for m1 in 1..n as i64 {
            for m2 in 1..n as i64 {
                for k in 1..n as i64 {
                    let Ok(spec) = RecurrenceSpec::new(n, m1, m2, k) else {
                        continue;
                    };
                    if !spec.gcd_condition() {
                        continue;
                    }
                    if spec.evenness_bound() {
                        report.specs_checked += 1;
                        check_spec(&spec, tol, &mut report);
                    } else if scope == SweepScope::WithControlGroup {
                        report.control_specs += 1;
                        detect_counterexamples(&spec, tol, &mut report);
                    }
                }
            }
        }
    }
    Ok(report)
}

fn check_spec(spec: &RecurrenceSpec, tol: &Tolerances, report: &mut SweepReport) {
    for family in admissible_ratios_with(spec, tol) {
        if family.is_unit_modulus {
            report.unit_modulus_skipped += 1;
            continue;
        }
        report.families_checked += 1;
        let violation = |case_label, reason: &str| SweepViolation {
            spec: *spec,
            w: family.w,
            zero_set: family.zero_set.clone(),
            case_label,
            reason: reason.to_string(),
        };
        let case = match classify_with(spec, family.w, tol) {
            Ok(case) => case,
            Err(e) => {
                report.violations.push(violation(None, &e.to_string()));
                continue;
            }
        };
        if case.verdict == Verdict::Degenerate {
            report.vacuous += 1;
            continue;
        }
        let ok = match case.case_label {
            CaseLabel::B => !case.congruence_check,
            CaseLabel::C => case.congruence_check && family.w.im.abs() < tol.real,
            _ => false,
        };
        if ok {
            report.passed += 1;
        } else {
            report.violations.push(violation(
                Some(case.case_label),
                "non-degenerate family outside cases B/C or with the wrong congruence",
            ));
        }
    }
}

fn detect_counterexamples(spec: &RecurrenceSpec, tol: &Tolerances, report: &mut SweepReport) {
    for family in admissible_ratios_with(spec, tol) {
        if family.is_unit_modulus {
            continue;
        }
        if let Ok(case) = classify_with(spec, family.w, tol) {
            if let Verdict::CounterexampleFamily(t, t_prime) = case.verdict {
                report.counterexamples.push(CounterexampleDetection {
                    spec: *spec,
                    w: family.w,
                    case_label: case.case_label,
                    t,
                    t_prime,
                });
            }
        }
    }
}
