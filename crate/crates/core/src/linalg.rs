//! Dense complex linear algebra: just enough for message matrices and the
//! unitary-group optimizer.
//!
//! Matrices are row-major `Vec<Complex<T>>` with explicit shape. Defects are
//! reported in the entrywise max-modulus norm `‖·‖_max`.

use std::fmt;

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense row-major complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: fmt::Debug> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.data.chunks(self.cols.max(1)) {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

impl<T: Real> ComplexMatrix<T> {
    /// Builds a matrix from row-major entries, rejecting bad shapes and non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!("matrix dimensions must be positive, got {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("matrix has non-finite entries".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(n, m, rows.into_iter().flatten().collect())
    }

    /// Assembles a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<Complex<T>>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("columns of unequal length".into()));
        }
        let mut data = vec![Complex::new(T::zero(), T::zero()); rows * cols];
        for (j, col) in columns.iter().enumerate() {
            for (i, z) in col.iter().enumerate() {
                data[i * cols + j] = *z;
            }
        }
        Self::from_vec(rows, cols, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Complex::new(T::zero(), T::zero()))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(
            n,
            n,
            |i, j| {
                if i == j {
                    Complex::new(T::one(), T::zero())
                } else {
                    Complex::new(T::zero(), T::zero())
                }
            },
        )
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(entries: &[Complex<T>]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { Complex::new(T::zero(), T::zero()) })
    }

    /// Matrix with i.i.d. standard complex Gaussian entries (real and imaginary parts N(0, 1/2)).
    pub fn gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self
    where
        StandardNormal: Distribution<T>,
    {
        let half = T::lit(std::f64::consts::FRAC_1_SQRT_2);
        Self::from_fn(rows, cols, |_, _| {
            let re: T = StandardNormal.sample(rng);
            let im: T = StandardNormal.sample(rng);
            Complex::new(re * half, im * half)
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex<T>) {
        self.data[i * self.cols + j] = z;
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex<T>>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o = *o + a * *b;
                }
            }
        }
        Ok(out)
    }

    /// `self† · rhs` without materializing the adjoint.
    pub fn adjoint_matmul(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot form A†B for {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.cols, rhs.cols);
        for k in 0..self.rows {
            let a_row = self.row(k);
            let b_row = rhs.row(k);
            for (i, a) in a_row.iter().enumerate() {
                let ac = a.conj();
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o = *o + ac * *b;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| *z * c).collect() }
    }

    pub fn scale_real(&self, c: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.scale(c)).collect() }
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "shapes {}x{} and {}x{} differ",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    /// Entrywise max modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Induced 1-norm (max column sum of moduli).
    pub fn one_norm(&self) -> T {
        (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j).norm()).sum::<T>()).fold(T::zero(), T::max)
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self.get(i, i))
    }

    /// `‖self − rhs‖_max`; panics on shape mismatch.
    pub fn max_abs_diff(&self, rhs: &Self) -> T {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        self.data.iter().zip(&rhs.data).fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    /// Multiplies by the conjugate phase of the largest-modulus entry so that entry is real
    /// positive. Near-ties (within `1e-9` relative) go to the lowest row-major index.
    pub fn canonical_phase(&self) -> Self {
        let peak = self.max_abs();
        if peak == T::zero() {
            return self.clone();
        }
        let cutoff = peak * (T::one() - T::lit(1e-9));
        let pivot = self.data.iter().find(|z| z.norm() >= cutoff).copied().unwrap_or(self.data[0]);
        let phase = pivot.unscale(pivot.norm()).conj();
        self.scale(phase)
    }

    /// Cast entries to another real type.
    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        let conv = |x: T| U::from_f64(x.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(U::nan);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| Complex::new(conv(z.re), conv(z.im))).collect(),
        }
    }
}

/// Conjugate transpose.
pub fn adjoint<T: Real>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    m.adjoint()
}

pub fn matmul<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    a.matmul(b)
}

/// Outcome of a unitarity test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitarityCheck<T> {
    pub is_unitary: bool,
    /// `‖m†m − I‖_max`
    pub defect: T,
}

/// `‖m†m − I‖_max`.
pub fn unitarity_defect<T: Real>(m: &ComplexMatrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let gram = m.adjoint_matmul(m)?;
    Ok(gram.max_abs_diff(&ComplexMatrix::identity(m.rows())))
}

pub fn check_unitary<T: Real>(m: &ComplexMatrix<T>, tol: T) -> Result<UnitarityCheck<T>> {
    let defect = unitarity_defect(m)?;
    Ok(UnitarityCheck { is_unitary: defect <= tol, defect })
}

/// Inverse by Gauss–Jordan elimination with partial pivoting.
pub fn inverse<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = ComplexMatrix::identity(n);
    let scale = m.max_abs();
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a.get(x, col).norm().partial_cmp(&a.get(y, col).norm()).unwrap()).unwrap();
        let p = a.get(pivot, col);
        if p.norm() <= scale * T::epsilon() * T::from_usize_lossy(n) {
            return Err(Error::Singular);
        }
        if pivot != col {
            for j in 0..n {
                let (x, y) = (a.get(col, j), a.get(pivot, j));
                a.set(col, j, y);
                a.set(pivot, j, x);
                let (x, y) = (inv.get(col, j), inv.get(pivot, j));
                inv.set(col, j, y);
                inv.set(pivot, j, x);
            }
        }
        let pinv = Complex::new(T::one(), T::zero()) / p;
        for j in 0..n {
            a.set(col, j, a.get(col, j) * pinv);
            inv.set(col, j, inv.get(col, j) * pinv);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = a.get(r, col);
            if factor.norm_sqr() == T::zero() {
                continue;
            }
            for j in 0..n {
                a.set(r, j, a.get(r, j) - factor * a.get(col, j));
                inv.set(r, j, inv.get(r, j) - factor * inv.get(col, j));
            }
        }
    }
    Ok(inv)
}

/// Unitary factor of the polar decomposition `m = U·P`, i.e. the nearest unitary in
/// Frobenius norm. Scaled Newton iteration `X ← (γX + (γX)^{-†})/2`.
pub fn polar_unitary<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let half = T::lit(0.5);
    let stop = T::epsilon() * T::from_usize_lossy(4 * n);
    let mut x = m.clone();
    for _ in 0..100 {
        let x_inv = inverse(&x)?;
        let near = unitarity_defect(&x)? < T::lit(1e-2);
        let gamma = if near { T::one() } else { (x_inv.frobenius_norm() / x.frobenius_norm()).sqrt() };
        let next = x.scale_real(gamma).add(&x_inv.adjoint().scale_real(T::one() / gamma))?.scale_real(half);
        let change = next.max_abs_diff(&x);
        x = next;
        if change <= stop {
            break;
        }
    }
    Ok(x)
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
pub fn expm<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let norm = m.one_norm();
    let mut squarings = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm > T::lit(0.5) {
        scaled_norm = scaled_norm * T::lit(0.5);
        squarings += 1;
    }
    let a = m.scale_real(T::lit(0.5).powi(squarings as i32));
    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=30 {
        term = term.matmul(&a)?.scale_real(T::one() / T::from_usize_lossy(k));
        sum = sum.add(&term)?;
        if term.max_abs() <= T::epsilon() * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum)?;
    }
    Ok(sum)
}

fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * *y)
}

fn norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Largest `|⟨v_a, v_b⟩ − δ_ab|` over the set.
pub fn gram_defect<T: Real>(vectors: &[Vec<Complex<T>>]) -> T {
    let mut worst = T::zero();
    for (a, va) in vectors.iter().enumerate() {
        for (b, vb) in vectors.iter().enumerate().skip(a) {
            let mut g = inner(va, vb);
            if a == b {
                g = g - Complex::new(T::one(), T::zero());
            }
            worst = worst.max(g.norm());
        }
    }
    worst
}

/// Extends an orthonormal set of `k` vectors in `C^n` to an orthonormal basis, returning
/// the `n − k` new vectors.
///
/// Candidates are complex Gaussian vectors, projected out of the current span by two
/// passes of modified Gram–Schmidt; a candidate keeping less than `1e-6` of its norm is
/// discarded and redrawn.
pub fn orthonormal_complete<T: Real, R: Rng + ?Sized>(
    vectors: &[Vec<Complex<T>>],
    tol: T,
    rng: &mut R,
) -> Result<Vec<Vec<Complex<T>>>>
where
    StandardNormal: Distribution<T>,
{
    let n = match vectors.first() {
        Some(v) => v.len(),
        None => return Err(Error::DimensionMismatch("need at least one input vector".into())),
    };
    if vectors.iter().any(|v| v.len() != n) {
        return Err(Error::DimensionMismatch("input vectors of unequal length".into()));
    }
    if vectors.len() > n {
        return Err(Error::DimensionMismatch(format!("{} vectors cannot be orthonormal in C^{n}", vectors.len())));
    }
    let defect = gram_defect(vectors);
    if defect > tol {
        return Err(Error::InputNotOrthonormal { defect: defect.to_f64().unwrap_or(f64::NAN) });
    }

    let mut basis: Vec<Vec<Complex<T>>> = vectors.to_vec();
    let mut added = Vec::with_capacity(n - vectors.len());
    let reject = T::lit(1e-6);
    let mut attempts = 0usize;
    while basis.len() < n {
        attempts += 1;
        if attempts > 100 * n {
            return Err(Error::Domain("orthonormal completion failed to find independent candidates".into()));
        }
        let mut cand = ComplexMatrix::<T>::gaussian(n, 1, rng).column(0);
        let start = norm(&cand);
        for _ in 0..2 {
            for q in &basis {
                let c = inner(q, &cand);
                for (x, qi) in cand.iter_mut().zip(q) {
                    *x = *x - c * *qi;
                }
            }
        }
        let left = norm(&cand);
        if left < reject * start {
            continue;
        }
        for x in cand.iter_mut() {
            *x = x.unscale(left);
        }
        basis.push(cand.clone());
        added.push(cand);
    }
    Ok(added)
}

/// A square matrix certified unitary to tolerance.
#[derive(Clone, PartialEq)]
pub struct UnitaryMatrix<T> {
    mat: ComplexMatrix<T>,
}

impl<T: fmt::Debug> fmt::Debug for UnitaryMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Unitary{:?}", self.mat)
    }
}

impl<T: Real> UnitaryMatrix<T> {
    /// Certifies `mat` at the default tolerance for `T`.
    pub fn new(mat: ComplexMatrix<T>) -> Result<Self> {
        Self::with_tol(mat, T::unitarity_tol())
    }

    pub fn with_tol(mat: ComplexMatrix<T>, tol: T) -> Result<Self> {
        let check = check_unitary(&mat, tol)?;
        if !check.is_unitary {
            return Err(Error::NotUnitary { defect: check.defect.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(Self { mat })
    }

    /// Nearest unitary to an arbitrary nonsingular square matrix.
    pub fn project(mat: &ComplexMatrix<T>) -> Result<Self> {
        Self::new(polar_unitary(mat)?)
    }

    /// Haar-like random unitary: polar factor of a complex Gaussian matrix.
    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self
    where
        StandardNormal: Distribution<T>,
    {
        loop {
            let g = ComplexMatrix::gaussian(d, d, rng);
            if let Ok(u) = Self::project(&g) {
                return u;
            }
        }
    }

    pub fn identity(d: usize) -> Self {
        Self { mat: ComplexMatrix::identity(d) }
    }

    /// Diagonal unitary `diag(e^{iθ_k})`.
    pub fn diagonal_phases(thetas: &[T]) -> Self {
        let entries: Vec<_> = thetas.iter().map(|&t| Complex::from_polar(T::one(), t)).collect();
        Self { mat: ComplexMatrix::diagonal(&entries) }
    }

    pub(crate) fn from_trusted(mat: ComplexMatrix<T>) -> Self {
        debug_assert!(mat.is_square());
        Self { mat }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.mat
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.mat.get(i, j)
    }

    pub fn adjoint(&self) -> Self {
        Self { mat: self.mat.adjoint() }
    }

    /// Product of two unitaries, re-certified.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        Self::new(self.mat.matmul(&rhs.mat)?)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.dim());
        for _ in 0..k {
            out = Self { mat: out.mat.matmul(&self.mat).expect("square") };
        }
        out
    }

    /// Global phase fixed so the largest-modulus entry is real positive.
    pub fn canonical_phase(&self) -> Self {
        Self { mat: self.mat.canonical_phase() }
    }

    pub fn cast<U: Real>(&self) -> UnitaryMatrix<U> {
        UnitaryMatrix { mat: self.mat.cast() }
    }
}
