//! Closed-form encoding families and completion of a `d² − 1` family to `d²`.

use num_complex::Complex;
use rand_distr::{Distribution, StandardNormal};

use crate::coding::{augment, verify_family, EncodingFamily, SchmidtSpectrum};
use crate::error::{Error, Result};
use crate::linalg::{unitarity_defect, ComplexMatrix, UnitaryMatrix};
use crate::scalar::Real;

fn require_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension d = {d} must be at least 2")));
    }
    Ok(())
}

/// Cyclic shift `X|j⟩ = |j+1 mod d⟩`: a one at `(j+1 mod d, j)`.
pub fn shift<T: Real>(d: usize) -> Result<UnitaryMatrix<T>> {
    require_dim(d)?;
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    Ok(UnitaryMatrix::from_trusted(ComplexMatrix::from_fn(d, d, |i, j| if i == (j + 1) % d { one } else { zero })))
}

/// Clock `Z = diag(1, ω, …, ω^{d−1})`, `ω = e^{2πi/d}`.
pub fn clock<T: Real>(d: usize) -> Result<UnitaryMatrix<T>> {
    require_dim(d)?;
    let step = T::TAU() / T::from_usize_lossy(d);
    let thetas: Vec<T> = (0..d).map(|l| step * T::from_usize_lossy(l)).collect();
    Ok(UnitaryMatrix::diagonal_phases(&thetas))
}

/// The Weyl pair `(X, Z)` in dimension `d`.
#[derive(Debug, Clone)]
pub struct ShiftClockPair<T> {
    pub d: usize,
    pub x: UnitaryMatrix<T>,
    pub z: UnitaryMatrix<T>,
}

impl<T: Real> ShiftClockPair<T> {
    pub fn new(d: usize) -> Result<Self> {
        Ok(Self { d, x: shift(d)?, z: clock(d)? })
    }

    /// `ω = e^{2πi/d}`, so that `ZX = ω XZ`.
    pub fn omega(&self) -> Complex<T> {
        Complex::from_polar(T::one(), T::TAU() / T::from_usize_lossy(self.d))
    }

    /// `X^k Z^l`.
    pub fn weyl(&self, k: usize, l: usize) -> UnitaryMatrix<T> {
        let m = self.x.pow(k as u32).matrix().matmul(self.z.pow(l as u32).matrix()).expect("square");
        UnitaryMatrix::from_trusted(m)
    }
}

/// `{X^k Z^l : 0 ≤ k, l < d}` (k outer, l inner) over the maximally entangled spectrum.
pub fn pauli_family<T: Real>(d: usize) -> Result<EncodingFamily<T>> {
    let pair = ShiftClockPair::new(d)?;
    let members = (0..d).flat_map(|k| (0..d).map(move |l| (k, l))).map(|(k, l)| pair.weyl(k, l)).collect();
    EncodingFamily::new(SchmidtSpectrum::uniform(d), members)
}

/// `{I, X, …, X^{K−1}}` for `K ≤ d`: disjoint supports make these Λ-orthogonal for every
/// spectrum.
pub fn shift_power_family<T: Real>(s: &SchmidtSpectrum<T>, k: usize) -> Result<EncodingFamily<T>> {
    let d = s.d();
    if k == 0 || k > d {
        return Err(Error::Domain(format!("shift-power family needs 1 ≤ K ≤ d = {d}, got {k}")));
    }
    let x = shift::<T>(d)?;
    EncodingFamily::new(s.clone(), (0..k).map(|p| x.pow(p as u32)).collect())
}

/// Returns `k` if `u = e^{iφ} X^k` within `tol` (entrywise), else `None`.
pub fn shift_power_index<T: Real>(u: &UnitaryMatrix<T>, tol: T) -> Option<usize> {
    let d = u.dim();
    let x = shift::<T>(d).ok()?;
    (0..d).find(|&k| {
        let target = x.pow(k as u32);
        let phase = u.get(k % d, 0);
        if (phase.norm() - T::one()).abs() > tol {
            return false;
        }
        target.matrix().scale(phase).max_abs_diff(u.matrix()) <= tol
    })
}

/// Recovers the missing `d²`-th member of a Λ-orthogonal family of `d² − 1` unitaries.
///
/// The single completion column `φ` of the augmented message matrix gives
/// `S_ij = φ_{j·d+i}/√λ_j`. Such a family forces the spectrum to be uniform, and then `S`
/// is unitary and Λ-orthogonal to every input member. Both facts are checked on the way
/// out, so a non-uniform spectrum surfaces as [`Error::SpectrumNotUniform`] whenever the
/// input was accepted at a loose `tol`.
pub fn complete_to_full<T: Real>(f: &EncodingFamily<T>, tol: T, seed: u64) -> Result<UnitaryMatrix<T>>
where
    StandardNormal: Distribution<T>,
{
    let d = f.d();
    if f.len() + 1 != d * d {
        return Err(Error::InvalidFamily(format!("need d² − 1 = {} members, got {}", d * d - 1, f.len())));
    }
    let check = verify_family(f, tol);
    if !check.passed {
        return Err(Error::FamilyNotOrthogonal { residual: check.worst_residual.to_f64().unwrap_or(f64::NAN) });
    }
    let s = f.spectrum();
    if s.has_zero() {
        return Err(Error::SpectrumHasZero);
    }
    let deviation = s.uniformity_deviation();
    if deviation > T::lit(1e-8) {
        return Err(Error::SpectrumNotUniform { deviation: deviation.to_f64().unwrap_or(f64::NAN) });
    }
    let m = augment(f, tol, seed)?;
    let b = d * d - 1;
    let s_mat = ComplexMatrix::from_fn(d, d, |i, j| m.phi(b, i, j).unscale(s.lambda(j).sqrt()));

    let defect = unitarity_defect(&s_mat)?;
    if defect > T::lit(1e-8) {
        return Err(Error::CompletionNotUnitary { defect: defect.to_f64().unwrap_or(f64::NAN) });
    }
    let completed = UnitaryMatrix::from_trusted(s_mat);

    let mut members = f.unitaries().to_vec();
    members.push(completed.clone());
    let full = EncodingFamily::new(s.clone(), members)?;
    let full_check = verify_family(&full, tol.max(T::lit(1e-8)));
    if !full_check.passed {
        return Err(Error::CompletionNotUnitary { defect: full_check.worst_residual.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(completed)
}
