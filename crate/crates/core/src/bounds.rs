//! Closed-form upper limits on the largest Schmidt weight `λ_0` that still admits `K`
//! Λ-orthogonal encoding unitaries.
//!
//! Integer-argument bounds are returned as exact rationals; the irrational ones are
//! generic over the float type.

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

fn rational(num: usize, den: usize) -> Rational64 {
    Rational64::new(num as i64, den as i64)
}

/// `λ_0 ≤ d/K`, valid for `d ≤ K ≤ d²`.
pub fn wcsg_bound(d: usize, k: usize) -> Result<Rational64> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension d = {d} must be at least 2")));
    }
    if k < d || k > d * d {
        return Err(Error::Domain(format!("K = {k} outside [{d}, {}]", d * d)));
    }
    Ok(rational(d, k))
}

/// `λ_0 ≤ ½(1 + √((d−2)/(d+2)))` for any family of `d + 1` members.
pub fn dp1_bound<T: Real>(d: usize) -> Result<T> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension d = {d} must be at least 2")));
    }
    let dt = T::from_usize_lossy(d);
    let two = T::lit(2.0);
    Ok(T::lit(0.5) * (T::one() + ((dt - two) / (dt + two)).sqrt()))
}

/// `λ_0 ≤ (K − m)/(2K − m − d)` when the family contains `m` distinct powers of the shift
/// (the identity among them). Never below `1/2`.
pub fn shift_power_bound(d: usize, k: usize, m: usize) -> Result<Rational64> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension d = {d} must be at least 2")));
    }
    if m < 1 || m > d {
        return Err(Error::Domain(format!("shift-power count m = {m} outside [1, {d}]")));
    }
    if k < d + 1 || k > d * d {
        return Err(Error::Domain(format!("K = {k} outside [{}, {}]", d + 1, d * d)));
    }
    Ok(rational(k - m, 2 * k - m - d))
}

/// `f(η) = 2(1−η) − η³/(1−η²)`; feasibility of five `3×3` members containing `I` and
/// `X` with `λ_2 = 0` requires `f(η) ≤ 0`.
pub fn d3_root_function<T: Real>(eta: T) -> T {
    let two = T::lit(2.0);
    two * (T::one() - eta) - eta.powi(3) / (T::one() - eta * eta)
}

/// Root of [`d3_root_function`] and the corresponding limit on `λ_0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecialRoot<T> {
    pub eta_star: T,
    /// `1/(1 + η*)`, from `η = (1 − λ_0)/λ_0`.
    pub lambda0_star: T,
}

/// Bisection on a bracketing interval. Returns the midpoint once the bracket has
/// collapsed to floating-point resolution or after `max_iter` halvings.
pub fn bisect<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T, max_iter: usize) -> Result<T> {
    let (mut f_lo, f_hi) = (f(lo), f(hi));
    if f_lo == T::zero() {
        return Ok(lo);
    }
    if f_hi == T::zero() {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Domain(format!("no sign change on [{lo}, {hi}]")));
    }
    let half = T::lit(0.5);
    for _ in 0..max_iter {
        let mid = (lo + hi) * half;
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == T::zero() {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * half)
}

/// Solves `2(1−η) − η³/(1−η²) = 0` on `(0.6, 0.999)`.
pub fn d3_special_root<T: Real>() -> SpecialRoot<T> {
    let eta_star = bisect(d3_root_function, T::lit(0.6), T::lit(0.999), 200).expect("f changes sign on (0.6, 0.999)");
    SpecialRoot { eta_star, lambda0_star: T::one() / (T::one() + eta_star) }
}

/// Shift-power entry of a [`BoundReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftPowerEntry {
    pub m: usize,
    pub value: f64,
    /// Exact value as `num/den`.
    pub exact: String,
    /// False once `K > 2d`, where the limit can no longer undercut `d/K`.
    pub binding: bool,
}

/// Every bound applicable to a `(d, K)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub d: usize,
    pub k: usize,
    pub wcsg: f64,
    pub wcsg_exact: String,
    /// Present iff `K = d + 1`.
    pub dp1: Option<f64>,
    pub shift_power: Option<ShiftPowerEntry>,
    /// `d = 3`, `K ≥ 5`, `m ≥ 2`, `λ_2 = 0` refinement, when requested.
    pub d3_lambda2_zero: Option<f64>,
    pub applicable_min: f64,
}

fn exact_string(r: Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Collects the bounds for `(d, K)`, optionally with `m` pinned shift powers.
/// `lambda2_zero` requests the special `d = 3` refinement.
pub fn bound_report(d: usize, k: usize, pinned_shift_powers: Option<usize>, lambda2_zero: bool) -> Result<BoundReport> {
    let wcsg = wcsg_bound(d, k)?;
    let wcsg_f = wcsg.to_f64().unwrap_or(f64::NAN);
    let mut min = wcsg_f;

    let dp1 = if k == d + 1 { Some(dp1_bound::<f64>(d)?) } else { None };
    if let Some(v) = dp1 {
        min = min.min(v);
    }

    let shift_power = match pinned_shift_powers {
        Some(m) => {
            let r = shift_power_bound(d, k, m)?;
            let value = r.to_f64().unwrap_or(f64::NAN);
            let binding = k <= 2 * d;
            if binding {
                min = min.min(value);
            }
            Some(ShiftPowerEntry { m, value, exact: exact_string(r), binding })
        }
        None => None,
    };

    let d3_lambda2_zero = if lambda2_zero && d == 3 && k >= 5 && pinned_shift_powers.is_some_and(|m| m >= 2) {
        let v = d3_special_root::<f64>().lambda0_star;
        min = min.min(v);
        Some(v)
    } else {
        None
    };

    Ok(BoundReport {
        d,
        k,
        wcsg: wcsg_f,
        wcsg_exact: exact_string(wcsg),
        dp1,
        shift_power,
        d3_lambda2_zero,
        applicable_min: min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wcsg_examples() {
        assert_eq!(wcsg_bound(3, 4).unwrap(), Rational64::new(3, 4));
        assert_eq!(wcsg_bound(3, 5).unwrap(), Rational64::new(3, 5));
        for d in 2..8 {
            assert_eq!(wcsg_bound(d, d * d).unwrap(), Rational64::new(1, d as i64));
        }
        assert!(wcsg_bound(3, 2).is_err());
        assert!(wcsg_bound(3, 10).is_err());
        assert!(wcsg_bound(1, 1).is_err());
    }

    #[test]
    fn dp1_examples() {
        assert!((dp1_bound::<f64>(3).unwrap() - 0.723607).abs() < 1e-4);
        assert_eq!(dp1_bound::<f64>(2).unwrap(), 0.5);
        let v = dp1_bound::<f64>(10).unwrap();
        assert!(v < 10.0 / 11.0);
        assert!(dp1_bound::<f64>(1).is_err());
        assert!((dp1_bound::<f32>(3).unwrap() - 0.723607).abs() < 1e-4);
    }

    #[test]
    fn shift_power_examples() {
        for d in 2..9usize {
            let r = shift_power_bound(d, d + 1, 2).unwrap();
            assert_eq!(r, Rational64::new(d as i64 - 1, d as i64));
            assert_eq!(shift_power_bound(d, d + 2, 2).unwrap(), Rational64::new(d as i64, d as i64 + 2));
            for k in d + 1..=d * d {
                assert_eq!(shift_power_bound(d, k, d).unwrap(), Rational64::new(1, 2));
            }
        }
        assert_eq!(shift_power_bound(4, 5, 3).unwrap(), Rational64::new(2, 3));
        assert!(shift_power_bound(3, 3, 2).is_err());
        assert!(shift_power_bound(3, 4, 0).is_err());
        assert!(shift_power_bound(3, 4, 4).is_err());
    }

    #[test]
    fn special_root() {
        let r = d3_special_root::<f64>();
        assert!((r.eta_star - 0.68889).abs() < 1e-4);
        assert!((r.lambda0_star - 0.5921).abs() < 1e-4);
        assert!(d3_root_function(r.eta_star).abs() <= 1e-12);
        assert!(r.lambda0_star < 0.6);
        let r32 = d3_special_root::<f32>();
        assert!((r32.eta_star - 0.68889).abs() < 1e-4);
    }

    #[test]
    fn bisect_requires_sign_change() {
        assert!(bisect(|x: f64| x * x + 1.0, -1.0, 1.0, 100).is_err());
        let r = bisect(|x: f64| x * x - 2.0, 0.0, 2.0, 200).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn report_examples() {
        let r = bound_report(3, 4, None, false).unwrap();
        assert_eq!(r.wcsg, 0.75);
        assert!((r.dp1.unwrap() - 0.7236).abs() < 1e-4);
        assert_eq!(r.applicable_min, r.dp1.unwrap());

        let r = bound_report(3, 4, Some(2), false).unwrap();
        assert!((r.applicable_min - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.shift_power.as_ref().unwrap().exact, "2/3");

        let r = bound_report(2, 4, None, false).unwrap();
        assert_eq!((r.wcsg, r.applicable_min), (0.5, 0.5));
        assert!(r.dp1.is_none());

        let r = bound_report(3, 5, Some(2), true).unwrap();
        assert_eq!(r.shift_power.as_ref().unwrap().value, 0.6);
        assert!((r.d3_lambda2_zero.unwrap() - 0.5921).abs() < 1e-4);
        assert!((r.applicable_min - 0.5921).abs() < 1e-4);

        let r = bound_report(3, 7, Some(2), false).unwrap();
        assert!(!r.shift_power.as_ref().unwrap().binding);
        assert_eq!(r.applicable_min, 3.0 / 7.0);

        assert!(bound_report(3, 3, Some(2), false).is_err());
    }

    #[test]
    fn report_invariants_on_grid() {
        for d in 2..=8usize {
            for k in d..=d * d {
                let m_choices: Vec<Option<usize>> =
                    if k > d { std::iter::once(None).chain((1..=d).map(Some)).collect() } else { vec![None] };
                for m in m_choices {
                    let r = bound_report(d, k, m, true).unwrap();
                    assert!(r.applicable_min <= r.wcsg);
                    for v in [Some(r.wcsg), r.dp1, r.shift_power.as_ref().map(|s| s.value), r.d3_lambda2_zero]
                        .into_iter()
                        .flatten()
                    {
                        assert!(v > 0.0 && v <= 1.0, "bound {v} out of (0, 1] at d={d} K={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn monotonicity() {
        for d in 2..=8usize {
            for k in d..d * d {
                assert!(wcsg_bound(d, k + 1).unwrap() < wcsg_bound(d, k).unwrap());
            }
            for k in d + 1..=d * d {
                for m in 1..d {
                    let lo = shift_power_bound(d, k, m + 1).unwrap();
                    let hi = shift_power_bound(d, k, m).unwrap();
                    assert!(lo <= hi, "d={d} K={k} m={m}");
                    assert!(lo >= Rational64::new(1, 2));
                }
            }
            if d >= 3 {
                let dp1 = dp1_bound::<f64>(d).unwrap();
                assert!(dp1 < wcsg_bound(d, d + 1).unwrap().to_f64().unwrap());
            }
        }
    }
}
