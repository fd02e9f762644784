//! Λ-orthogonality residual `F = Σ_{a<b} |tr(Λ U_a† U_b)|²` and its gradient in the
//! local chart `U ↦ U·exp(iH(θ))`.

use num_complex::Complex;

use crate::coding::{lambda_gram_unchecked, EncodingFamily};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// Number of real parameters of a `d×d` Hermitian matrix.
#[inline]
pub fn params_per_member(d: usize) -> usize {
    d * d
}

/// Hermitian `H(θ)`: `θ[0..d]` is the real diagonal, then `(Re, Im)` of each upper entry
/// `H_kl`, `k < l`, in row-major order.
pub fn hermitian_from_params<T: Real>(d: usize, theta: &[T]) -> ComplexMatrix<T> {
    assert_eq!(theta.len(), params_per_member(d), "parameter vector length");
    let mut h = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        h.set(k, k, Complex::new(theta[k], T::zero()));
    }
    let mut p = d;
    for k in 0..d {
        for l in k + 1..d {
            let z = Complex::new(theta[p], theta[p + 1]);
            h.set(k, l, z);
            h.set(l, k, z.conj());
            p += 2;
        }
    }
    h
}

pub(crate) fn objective_of<T: Real>(members: &[ComplexMatrix<T>], lambdas: &[T]) -> T {
    let mut f = T::zero();
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            f = f + lambda_gram_unchecked(&members[a], &members[b], lambdas).norm_sqr();
        }
    }
    f
}

/// `max_{a<b} |tr(Λ U_a† U_b)|`.
pub(crate) fn max_overlap_of<T: Real>(members: &[ComplexMatrix<T>], lambdas: &[T]) -> T {
    let mut worst = T::zero();
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            worst = worst.max(lambda_gram_unchecked(&members[a], &members[b], lambdas).norm());
        }
    }
    worst
}

/// Sum of squared pairwise overlaps; zero iff the family is exactly Λ-orthogonal.
pub fn objective<T: Real>(family: &EncodingFamily<T>) -> T {
    let members: Vec<_> = family.unitaries().iter().map(|u| u.matrix().clone()).collect();
    objective_of(&members, family.spectrum().lambdas())
}

/// Gradient of `F` with respect to the chart parameters of each member listed in `free`,
/// evaluated at `θ = 0`. Members not listed are held fixed and contribute no parameters.
pub fn gradient<T: Real>(family: &EncodingFamily<T>, free: &[usize]) -> Result<Vec<T>> {
    if let Some(&bad) = free.iter().find(|&&c| c >= family.len()) {
        return Err(Error::InvalidConfig(format!("free index {bad} outside a family of {}", family.len())));
    }
    let members: Vec<_> = family.unitaries().iter().map(|u| u.matrix().clone()).collect();
    let mut out = Vec::with_capacity(free.len() * params_per_member(family.d()));
    gradient_into(&members, family.spectrum().lambdas(), free, &mut out);
    Ok(out)
}

pub(crate) fn gradient_into<T: Real>(members: &[ComplexMatrix<T>], lambdas: &[T], free: &[usize], out: &mut Vec<T>) {
    let d = lambdas.len();
    let k = members.len();
    out.clear();

    // Overlaps g[a][c] = tr(Λ U_a† U_c).
    let mut g = vec![Complex::new(T::zero(), T::zero()); k * k];
    for a in 0..k {
        for c in a + 1..k {
            let v = lambda_gram_unchecked(&members[a], &members[c], lambdas);
            g[a * k + c] = v;
            g[c * k + a] = v.conj();
        }
    }

    let two = T::lit(2.0);
    for &c in free {
        // ∂F/∂conj(U_c) = Σ_{a≠c} g_ac · U_a Λ
        let mut wirt = ComplexMatrix::zeros(d, d);
        for a in (0..k).filter(|&a| a != c) {
            let coeff = g[a * k + c];
            for i in 0..d {
                let row = members[a].row(i);
                for j in 0..d {
                    let z = wirt.get(i, j) + coeff * row[j].scale(lambdas[j]);
                    wirt.set(i, j, z);
                }
            }
        }
        // dF = 2 Re tr(W† U_c i dH) = 2 Re(i tr(A dH)),  A = W† U_c
        let a_mat = wirt.adjoint_matmul(&members[c]).expect("square");
        for kk in 0..d {
            out.push(-two * a_mat.get(kk, kk).im);
        }
        for kk in 0..d {
            for l in kk + 1..d {
                let (akl, alk) = (a_mat.get(kk, l), a_mat.get(l, kk));
                out.push(-two * (akl.im + alk.im));
                out.push(two * (akl.re - alk.re));
            }
        }
    }
}

/// Real residual vector `(Re g_ab, Im g_ab)` over pairs `a < b`, and its Jacobian with
/// respect to the chart parameters of the `free` members (row-major, one row per
/// residual). `F = |r|²` and `∇F = 2 Jᵀ r`.
pub(crate) fn residuals_and_jacobian<T: Real>(
    members: &[ComplexMatrix<T>],
    lambdas: &[T],
    free: &[usize],
) -> (Vec<T>, Vec<T>) {
    let d = lambdas.len();
    let k = members.len();
    let per = params_per_member(d);
    let n = free.len() * per;
    let mut slot = vec![None; k];
    for (s, &c) in free.iter().enumerate() {
        slot[c] = Some(s);
    }
    let lam: Vec<_> = lambdas.iter().map(|l| Complex::new(*l, T::zero())).collect();
    let lam = ComplexMatrix::diagonal(&lam);

    let mut r = Vec::new();
    let mut jac = Vec::new();
    let i_unit = Complex::new(T::zero(), T::one());
    for a in 0..k {
        for b in a + 1..k {
            let g = lambda_gram_unchecked(&members[a], &members[b], lambdas);
            r.push(g.re);
            r.push(g.im);
            let mut row = vec![Complex::new(T::zero(), T::zero()); n];
            let p = members[a].adjoint_matmul(&members[b]).expect("square");
            // δg = i tr(Λ U_a† U_b H_b) − i tr(U_a† U_b Λ H_a)
            if let Some(sb) = slot[b] {
                let x = lam.matmul(&p).expect("square");
                fill_trace_derivs(&x, i_unit, &mut row[sb * per..(sb + 1) * per]);
            }
            if let Some(sa) = slot[a] {
                let x = p.matmul(&lam).expect("square");
                fill_trace_derivs(&x, -i_unit, &mut row[sa * per..(sa + 1) * per]);
            }
            jac.extend(row.iter().map(|z| z.re));
            jac.extend(row.iter().map(|z| z.im));
        }
    }
    (r, jac)
}

/// Adds `coeff · ∂ tr(X H(θ)) / ∂θ` to `out`.
fn fill_trace_derivs<T: Real>(x: &ComplexMatrix<T>, coeff: Complex<T>, out: &mut [Complex<T>]) {
    let d = x.rows();
    for k in 0..d {
        out[k] = out[k] + coeff * x.get(k, k);
    }
    let mut p = d;
    let i_unit = Complex::new(T::zero(), T::one());
    for k in 0..d {
        for l in k + 1..d {
            let (xkl, xlk) = (x.get(k, l), x.get(l, k));
            out[p] = out[p] + coeff * (xlk + xkl);
            out[p + 1] = out[p + 1] + coeff * i_unit * (xlk - xkl);
            p += 2;
        }
    }
}
