//! Infeasibility certificates: a requested `(spectrum, K, pins)` that an implemented
//! theorem rules out.
//!
//! Feasibility is monotone in `K` (dropping a member keeps a family Λ-orthogonal), so a
//! certificate for `K` also covers every larger family size.

use serde::{Deserialize, Serialize};

use crate::bounds::{d3_special_root, dp1_bound, shift_power_bound};
use crate::coding::SchmidtSpectrum;
use crate::constructions::shift_power_index;
use crate::linalg::UnitaryMatrix;
use crate::scalar::Real;

/// Slack on every `λ_0 > bound` comparison.
pub const CERTIFICATE_SLACK: f64 = 1e-12;

/// Tolerance for recognizing a pinned member as a phase times a shift power.
const SHIFT_MATCH_TOL: f64 = 1e-9;

/// Which theorem proves the request infeasible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "theorem", rename_all = "snake_case")]
pub enum Certificate {
    /// `λ_0 > d/K`.
    Wcsg { bound: f64 },
    /// `K ≥ d² − 1` forces the maximally entangled spectrum.
    UniformityTheorem { deviation: f64 },
    /// `K ≥ d + 1` requires `λ_0 ≤ ½(1 + √((d−2)/(d+2)))`.
    Dp1 { bound: f64 },
    /// `m` distinct pinned shift powers require `λ_0 ≤ (K−m)/(2K−m−d)`.
    ShiftPower { m: usize, bound: f64 },
    /// `d = 3`, `K ≥ 5`, two pinned shift powers and `λ_2 = 0`.
    D3Lambda2Zero { bound: f64 },
}

impl Certificate {
    pub fn describe(&self) -> String {
        match self {
            Certificate::Wcsg { bound } => format!("lambda0 exceeds d/K = {bound:.6}"),
            Certificate::UniformityTheorem { deviation } => {
                format!("K >= d^2 - 1 requires a uniform spectrum (deviation {deviation:.3e})")
            }
            Certificate::Dp1 { bound } => format!("K >= d + 1 requires lambda0 <= {bound:.6}"),
            Certificate::ShiftPower { m, bound } => {
                format!("{m} pinned shift powers require lambda0 <= {bound:.6}")
            }
            Certificate::D3Lambda2Zero { bound } => {
                format!("d = 3, lambda2 = 0 with I and X pinned requires lambda0 <= {bound:.6}")
            }
        }
    }
}

/// Number of distinct shift powers `X^k` (up to phase) among the pinned members.
pub fn distinct_shift_powers<T: Real>(pinned: &[UnitaryMatrix<T>]) -> usize {
    let mut seen: Vec<usize> = pinned.iter().filter_map(|u| shift_power_index(u, T::lit(SHIFT_MATCH_TOL))).collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// First theorem (in the order uniformity, WCSG, dp1, shift-power, `d = 3` special)
/// that excludes `k` Λ-orthogonal members containing `pinned`.
pub fn certify_infeasible<T: Real>(
    s: &SchmidtSpectrum<T>,
    k: usize,
    pinned: &[UnitaryMatrix<T>],
) -> Option<Certificate> {
    let d = s.d();
    let lambda0 = s.largest().to_f64().unwrap_or(f64::NAN);
    let exceeds = |bound: f64| lambda0 > bound + CERTIFICATE_SLACK;

    if k > d * d {
        return Some(Certificate::Wcsg { bound: d as f64 / k as f64 });
    }
    if d >= 2 && k >= d * d - 1 {
        let deviation = s.uniformity_deviation().to_f64().unwrap_or(f64::NAN);
        if deviation > CERTIFICATE_SLACK {
            return Some(Certificate::UniformityTheorem { deviation });
        }
    }
    let wcsg = d as f64 / k as f64;
    if k >= d && exceeds(wcsg) {
        return Some(Certificate::Wcsg { bound: wcsg });
    }
    if d >= 2 && k > d {
        let bound = dp1_bound::<f64>(d).expect("d >= 2");
        if exceeds(bound) {
            return Some(Certificate::Dp1 { bound });
        }
    }
    let m = distinct_shift_powers(pinned);
    if m >= 1 && k > d {
        let r = shift_power_bound(d, k, m).expect("domain checked");
        let bound = *r.numer() as f64 / *r.denom() as f64;
        if exceeds(bound) {
            return Some(Certificate::ShiftPower { m, bound });
        }
    }
    if d == 3 && k >= 5 && m >= 2 && s.lambda(2) == T::zero() {
        // Any two distinct powers of the 3-cycle become {I, X} after a common left shift.
        let bound = d3_special_root::<f64>().lambda0_star;
        if exceeds(bound) {
            return Some(Certificate::D3Lambda2Zero { bound });
        }
    }
    None
}

/// Largest `K` not excluded by any certificate (the certified-infeasible threshold is
/// one above it).
pub fn certified_cap<T: Real>(s: &SchmidtSpectrum<T>, pinned: &[UnitaryMatrix<T>]) -> usize {
    let d = s.d();
    let start = pinned.len().max(1);
    (start..=d * d).take_while(|&k| certify_infeasible(s, k, pinned).is_none()).last().unwrap_or(start - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{clock, shift};

    fn spectrum(l: &[f64]) -> SchmidtSpectrum<f64> {
        SchmidtSpectrum::new(l.to_vec()).unwrap()
    }

    fn ix(d: usize) -> Vec<UnitaryMatrix<f64>> {
        vec![UnitaryMatrix::identity(d), shift(d).unwrap()]
    }

    #[test]
    fn wcsg_certificate() {
        let c = certify_infeasible(&spectrum(&[0.76, 0.12, 0.12]), 4, &[]);
        assert!(matches!(c, Some(Certificate::Wcsg { bound }) if bound == 0.75));
        assert_eq!(certify_infeasible(&spectrum(&[0.6, 0.2, 0.2]), 5, &[]), None);
    }

    #[test]
    fn uniformity_certificate() {
        let c = certify_infeasible(&spectrum(&[0.35, 0.33, 0.32]), 8, &[]);
        assert!(matches!(c, Some(Certificate::UniformityTheorem { .. })));
        let c = certify_infeasible(&spectrum(&[0.5, 0.5]), 3, &[]);
        assert_eq!(c, None);
        let c = certify_infeasible(&spectrum(&[0.9, 0.1]), 3, &[]);
        assert!(matches!(c, Some(Certificate::UniformityTheorem { .. })));
    }

    #[test]
    fn dp1_certificate() {
        let c = certify_infeasible(&spectrum(&[0.74, 0.13, 0.13]), 4, &[]);
        assert!(matches!(c, Some(Certificate::Dp1 { .. })));
        assert_eq!(certify_infeasible(&spectrum(&[0.72, 0.14, 0.14]), 4, &[]), None);
    }

    #[test]
    fn shift_power_certificate_needs_pins() {
        let s = spectrum(&[0.70, 0.3, 0.0]);
        assert_eq!(certify_infeasible(&s, 4, &[]), None);
        let c = certify_infeasible(&s, 4, &ix(3));
        assert!(matches!(c, Some(Certificate::ShiftPower { m: 2, bound }) if (bound - 2.0 / 3.0).abs() < 1e-15));
        // A clock member is not a shift power.
        let iz = vec![UnitaryMatrix::identity(3), clock(3).unwrap()];
        assert_eq!(certify_infeasible(&s, 4, &iz), None);
        // The boundary point itself is not excluded.
        assert_eq!(certify_infeasible(&spectrum(&[2.0 / 3.0, 1.0 / 3.0, 0.0]), 4, &ix(3)), None);
    }

    #[test]
    fn d3_special_certificate() {
        let s = spectrum(&[0.595, 0.405, 0.0]);
        assert_eq!(certify_infeasible(&s, 5, &[]), None);
        assert!(matches!(certify_infeasible(&s, 5, &ix(3)), Some(Certificate::D3Lambda2Zero { .. })));
        let x = shift::<f64>(3).unwrap();
        let pins = vec![x.clone(), x.pow(2)];
        assert!(matches!(certify_infeasible(&s, 5, &pins), Some(Certificate::D3Lambda2Zero { .. })));
    }

    #[test]
    fn caps() {
        assert_eq!(certified_cap(&SchmidtSpectrum::<f64>::uniform(3), &[]), 9);
        assert_eq!(certified_cap(&spectrum(&[0.35, 0.35, 0.3]), &[]), 7);
        assert_eq!(certified_cap(&spectrum(&[0.74, 0.13, 0.13]), &[]), 3);
        assert_eq!(certified_cap(&spectrum(&[0.7, 0.3]), &[]), 2);
        assert_eq!(certified_cap(&spectrum(&[0.70, 0.3, 0.0]), &ix(3)), 3);
    }
}
