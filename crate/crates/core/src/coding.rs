//! Schmidt spectra, Λ-orthogonal encoding families and the augmented message matrix.
//!
//! A two-qudit state `Σ_j √λ_j |jj⟩` encoded by a local unitary `U` on the first qudit
//! becomes `Σ_{ij} √λ_j U_ij |ij⟩`. Two encodings are perfectly distinguishable iff
//! `tr(Λ U_a† U_b) = 0` with `Λ = diag(λ)`.
//!
//! Product-basis states are flattened with the *column-major* convention
//! `|ij⟩ ↦ j·d + i`, so that all `d` entries sharing a Schmidt index `j` are contiguous.
//! Every vector, message matrix and serialized artifact in this crate uses it.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{orthonormal_complete, unitarity_defect, ComplexMatrix, UnitaryMatrix};
use crate::scalar::Real;

/// Flat index of the product-basis state `|ij⟩` in dimension `d`.
#[inline]
pub fn flat_index(d: usize, i: usize, j: usize) -> usize {
    j * d + i
}

/// Squared Schmidt coefficients `λ_0 ≥ λ_1 ≥ … ≥ λ_{d−1} ≥ 0`, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum<T> {
    lambdas: Vec<T>,
}

impl<T: Real> SchmidtSpectrum<T> {
    /// Validates a descending, normalized spectrum.
    pub fn new(lambdas: Vec<T>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::InvalidSpectrum("spectrum is empty".into()));
        }
        if let Some(bad) = lambdas.iter().find(|l| !l.is_finite() || **l < T::zero()) {
            return Err(Error::InvalidSpectrum(format!("coefficient {bad} is negative or non-finite")));
        }
        let sum: T = lambdas.iter().copied().sum();
        if (sum - T::one()).abs() > T::normalization_tol() {
            return Err(Error::InvalidSpectrum(format!("coefficients sum to {sum}, not 1")));
        }
        if lambdas.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpectrum("coefficients must be sorted in descending order".into()));
        }
        Ok(Self { lambdas })
    }

    /// Sorts descending before validating; the flag reports whether the order changed.
    pub fn from_unsorted(mut lambdas: Vec<T>) -> Result<(Self, bool)> {
        let before = lambdas.clone();
        lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        let reordered = before != lambdas;
        Ok((Self::new(lambdas)?, reordered))
    }

    /// Maximally entangled spectrum `λ_j = 1/d`.
    pub fn uniform(d: usize) -> Self {
        assert!(d > 0, "dimension must be positive");
        Self { lambdas: vec![T::one() / T::from_usize_lossy(d); d] }
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[T] {
        &self.lambdas
    }

    #[inline]
    pub fn lambda(&self, j: usize) -> T {
        self.lambdas[j]
    }

    /// `λ_0`, the largest coefficient.
    #[inline]
    pub fn largest(&self) -> T {
        self.lambdas[0]
    }

    /// `η_j = λ_j / λ_0`.
    pub fn eta_j(&self, j: usize) -> T {
        self.lambdas[j] / self.lambdas[0]
    }

    /// `η = (1 − λ_0)/λ_0 = Σ_{j≥1} η_j`.
    pub fn eta(&self) -> T {
        (T::one() - self.lambdas[0]) / self.lambdas[0]
    }

    pub fn has_zero(&self) -> bool {
        self.lambdas.iter().any(|l| *l == T::zero())
    }

    /// `max_j |λ_j − 1/d|`.
    pub fn uniformity_deviation(&self) -> T {
        let u = T::one() / T::from_usize_lossy(self.d());
        self.lambdas.iter().fold(T::zero(), |m, l| m.max((*l - u).abs()))
    }

    pub fn is_uniform(&self, tol: T) -> bool {
        self.uniformity_deviation() <= tol
    }

    /// `Λ = diag(λ_0, …, λ_{d−1})`.
    pub fn lambda_matrix(&self) -> ComplexMatrix<T> {
        let entries: Vec<_> = self.lambdas.iter().map(|l| Complex::new(*l, T::zero())).collect();
        ComplexMatrix::diagonal(&entries)
    }

    pub fn cast<U: Real>(&self) -> SchmidtSpectrum<U> {
        SchmidtSpectrum { lambdas: self.lambdas.iter().map(|l| U::lit(l.to_f64().unwrap_or(f64::NAN))).collect() }
    }
}

/// An ordered list of `K` local unitaries together with the spectrum they encode against.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodingFamily<T> {
    spectrum: SchmidtSpectrum<T>,
    unitaries: Vec<UnitaryMatrix<T>>,
}

impl<T: Real> EncodingFamily<T> {
    pub fn new(spectrum: SchmidtSpectrum<T>, unitaries: Vec<UnitaryMatrix<T>>) -> Result<Self> {
        let d = spectrum.d();
        let k = unitaries.len();
        if k == 0 || k > d * d {
            return Err(Error::InvalidFamily(format!("family size {k} outside 1..={}", d * d)));
        }
        if let Some(u) = unitaries.iter().find(|u| u.dim() != d) {
            return Err(Error::DimensionMismatch(format!(
                "member of dimension {} in a family over a dimension-{d} spectrum",
                u.dim()
            )));
        }
        Ok(Self { spectrum, unitaries })
    }

    pub fn spectrum(&self) -> &SchmidtSpectrum<T> {
        &self.spectrum
    }

    pub fn unitaries(&self) -> &[UnitaryMatrix<T>] {
        &self.unitaries
    }

    pub fn into_parts(self) -> (SchmidtSpectrum<T>, Vec<UnitaryMatrix<T>>) {
        (self.spectrum, self.unitaries)
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.spectrum.d()
    }

    /// Number of members `K`.
    #[inline]
    pub fn len(&self) -> usize {
        self.unitaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unitaries.is_empty()
    }
}

/// `|Ψ⟩ = (U ⊗ I)|ψ⟩` as a `d²` amplitude vector in flat `j·d + i` order.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageState<T> {
    d: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> MessageState<T> {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn amplitude(&self, i: usize, j: usize) -> Complex<T> {
        self.amplitudes[flat_index(self.d, i, j)]
    }

    pub fn norm(&self) -> T {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }
}

fn same_dim<T: Real>(a: &UnitaryMatrix<T>, b: &UnitaryMatrix<T>, s: &SchmidtSpectrum<T>) -> Result<()> {
    if a.dim() != s.d() || b.dim() != s.d() {
        return Err(Error::DimensionMismatch(format!(
            "unitaries of dimension {} and {} against a dimension-{} spectrum",
            a.dim(),
            b.dim(),
            s.d()
        )));
    }
    Ok(())
}

/// `tr(Λ a† b) = Σ_{ij} λ_j conj(a_ij) b_ij`, the overlap of the two encoded states.
pub fn lambda_gram<T: Real>(a: &UnitaryMatrix<T>, b: &UnitaryMatrix<T>, s: &SchmidtSpectrum<T>) -> Result<Complex<T>> {
    same_dim(a, b, s)?;
    Ok(lambda_gram_unchecked(a.matrix(), b.matrix(), s.lambdas()))
}

pub(crate) fn lambda_gram_unchecked<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>, lambdas: &[T]) -> Complex<T> {
    let d = lambdas.len();
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..d {
        let (ra, rb) = (a.row(i), b.row(i));
        for j in 0..d {
            acc = acc + (ra[j].conj() * rb[j]).scale(lambdas[j]);
        }
    }
    acc
}

/// Pairwise Λ-inner products of a family.
#[derive(Debug, Clone, PartialEq)]
pub struct PairOverlap<T> {
    pub a: usize,
    pub b: usize,
    pub value: Complex<T>,
}

/// Result of [`verify_family`].
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyCheck<T> {
    pub passed: bool,
    /// `max_{a≠b} |tr(Λ U_a† U_b)|`, zero for a single member.
    pub worst_residual: T,
    pub worst_pair: Option<(usize, usize)>,
    /// `max_a |tr(Λ U_a† U_a) − 1|`; identically zero up to roundoff for unitary members.
    pub diagonal_defect: T,
}

/// All off-diagonal overlaps `a < b`.
pub fn pair_overlaps<T: Real>(f: &EncodingFamily<T>) -> Vec<PairOverlap<T>> {
    let lambdas = f.spectrum.lambdas();
    let mut out = Vec::with_capacity(f.len() * f.len().saturating_sub(1) / 2);
    for a in 0..f.len() {
        for b in a + 1..f.len() {
            let value = lambda_gram_unchecked(f.unitaries[a].matrix(), f.unitaries[b].matrix(), lambdas);
            out.push(PairOverlap { a, b, value });
        }
    }
    out
}

/// Checks Λ-orthogonality: passes iff every off-diagonal overlap has modulus `≤ tol`.
pub fn verify_family<T: Real>(f: &EncodingFamily<T>, tol: T) -> FamilyCheck<T> {
    let lambdas = f.spectrum.lambdas();
    let mut worst = T::zero();
    let mut worst_pair = None;
    for p in pair_overlaps(f) {
        let r = p.value.norm();
        if worst_pair.is_none() || r > worst {
            worst = r;
            worst_pair = Some((p.a, p.b));
        }
    }
    let one = Complex::new(T::one(), T::zero());
    let diagonal_defect = f
        .unitaries
        .iter()
        .map(|u| (lambda_gram_unchecked(u.matrix(), u.matrix(), lambdas) - one).norm())
        .fold(T::zero(), T::max);
    FamilyCheck { passed: worst <= tol && diagonal_defect <= tol, worst_residual: worst, worst_pair, diagonal_defect }
}

/// Encoded state `Σ √λ_j U_ij |ij⟩`.
pub fn message_state<T: Real>(u: &UnitaryMatrix<T>, s: &SchmidtSpectrum<T>) -> Result<MessageState<T>> {
    let d = s.d();
    if u.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "unitary of dimension {} against spectrum of dimension {d}",
            u.dim()
        )));
    }
    let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); d * d];
    for j in 0..d {
        let root = s.lambda(j).sqrt();
        for i in 0..d {
            amplitudes[flat_index(d, i, j)] = u.get(i, j).scale(root);
        }
    }
    Ok(MessageState { d, amplitudes })
}

fn require_orthogonal<T: Real>(f: &EncodingFamily<T>, tol: T) -> Result<()> {
    let check = verify_family(f, tol);
    if !check.passed {
        let residual = check.worst_residual.max(check.diagonal_defect);
        return Err(Error::FamilyNotOrthogonal { residual: residual.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(())
}

fn message_vectors<T: Real>(f: &EncodingFamily<T>) -> Vec<Vec<Complex<T>>> {
    f.unitaries
        .iter()
        .map(|u| message_state(u, &f.spectrum).expect("family members share the spectrum dimension").into_amplitudes())
        .collect()
}

/// The `d² × K` matrix whose column `a` is the message state of member `a`.
pub fn build_message_columns<T: Real>(f: &EncodingFamily<T>, tol: T) -> Result<ComplexMatrix<T>> {
    require_orthogonal(f, tol)?;
    ComplexMatrix::from_columns(&message_vectors(f))
}

/// Augmented message matrix: `K` message columns followed by `d² − K` orthonormal
/// completion columns `φ^(b)`. Rows are indexed by `j·d + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedMessageMatrix<T> {
    d: usize,
    k: usize,
    mat: ComplexMatrix<T>,
    defect: T,
}

impl<T: Real> AugmentedMessageMatrix<T> {
    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of message columns `K`.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    /// `‖M†M − I‖_max` measured at construction.
    pub fn unitarity_defect(&self) -> T {
        self.defect
    }

    /// `M_{ij,col}`.
    pub fn entry(&self, i: usize, j: usize, col: usize) -> Complex<T> {
        self.mat.get(flat_index(self.d, i, j), col)
    }

    /// `φ^(b)_ij` for a completion column `K ≤ b < d²`.
    pub fn phi(&self, b: usize, i: usize, j: usize) -> Complex<T> {
        assert!(b >= self.k && b < self.d * self.d, "column {b} is not a completion column");
        self.entry(i, j, b)
    }

    pub fn completion_columns(&self) -> std::ops::Range<usize> {
        self.k..self.d * self.d
    }
}

/// Builds the augmented message matrix of a Λ-orthogonal family.
///
/// The completion is not unique; `seed` fixes the random candidates used to build it.
/// Fails with [`Error::FamilyNotOrthogonal`] unless the family verifies at `tol` and the
/// resulting matrix is unitary to within the exact-family tolerance of `T`.
pub fn augment<T: Real>(f: &EncodingFamily<T>, tol: T, seed: u64) -> Result<AugmentedMessageMatrix<T>>
where
    StandardNormal: Distribution<T>,
{
    require_orthogonal(f, tol)?;
    let d = f.d();
    let mut columns = message_vectors(f);
    if columns.len() < d * d {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let extra = orthonormal_complete(&columns, tol.max(T::unitarity_tol()), &mut rng).map_err(|e| match e {
            Error::InputNotOrthonormal { defect } => Error::FamilyNotOrthogonal { residual: defect },
            other => other,
        })?;
        columns.extend(extra);
    }
    let mat = ComplexMatrix::from_columns(&columns)?;
    let defect = unitarity_defect(&mat)?;
    if defect > T::exact_family_tol() {
        return Err(Error::FamilyNotOrthogonal { residual: defect.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(AugmentedMessageMatrix { d, k: f.len(), mat, defect })
}

/// One column-mass identity `d − K λ_j = Σ_b Σ_i |φ^(b)_ij|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoeqTerm<T> {
    pub j: usize,
    /// `d − K λ_j`
    pub expected: T,
    /// `Σ_{b ≥ K} Σ_i |φ^(b)_ij|²`
    pub completion_mass: T,
    pub residual: T,
}

/// Evaluates the column-mass identity for every Schmidt index `j`.
pub fn foeq_check<T: Real>(m: &AugmentedMessageMatrix<T>, s: &SchmidtSpectrum<T>) -> Result<Vec<FoeqTerm<T>>> {
    let d = m.d;
    if s.d() != d {
        return Err(Error::DimensionMismatch(format!("matrix for d = {d}, spectrum for d = {}", s.d())));
    }
    let dt = T::from_usize_lossy(d);
    let kt = T::from_usize_lossy(m.k);
    Ok((0..d)
        .map(|j| {
            let expected = dt - kt * s.lambda(j);
            let completion_mass = m
                .completion_columns()
                .flat_map(|b| (0..d).map(move |i| (b, i)))
                .fold(T::zero(), |acc, (b, i)| acc + m.phi(b, i, j).norm_sqr());
            FoeqTerm { j, expected, completion_mass, residual: (expected - completion_mass).abs() }
        })
        .collect())
}

/// Whether `λ_0 ≤ d/K` (with `1e-12` slack) permits `K` messages.
pub fn wcsg_feasible<T: Real>(s: &SchmidtSpectrum<T>, k: usize) -> bool {
    let bound = T::from_usize_lossy(s.d()) / T::from_usize_lossy(k);
    s.largest() <= bound + T::lit(1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn spectrum(l: &[f64]) -> SchmidtSpectrum<f64> {
        SchmidtSpectrum::new(l.to_vec()).unwrap()
    }

    fn z2() -> UnitaryMatrix<f64> {
        UnitaryMatrix::new(ComplexMatrix::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)])).unwrap()
    }

    fn x(d: usize) -> UnitaryMatrix<f64> {
        UnitaryMatrix::new(ComplexMatrix::from_fn(
            d,
            d,
            |i, j| if i == (j + 1) % d { c(1.0, 0.0) } else { c(0.0, 0.0) },
        ))
        .unwrap()
    }

    fn pauli2() -> Vec<UnitaryMatrix<f64>> {
        let xz = x(2).mul(&z2()).unwrap();
        vec![UnitaryMatrix::identity(2), x(2), z2(), xz]
    }

    #[test]
    fn spectrum_validation() {
        assert!(SchmidtSpectrum::new(vec![0.5, 0.5]).is_ok());
        assert!(SchmidtSpectrum::new(vec![0.4, 0.6]).is_err());
        assert!(SchmidtSpectrum::new(vec![0.7, 0.2]).is_err());
        assert!(SchmidtSpectrum::new(vec![1.1, -0.1]).is_err());
        assert!(SchmidtSpectrum::<f64>::new(vec![]).is_err());
        let (s, moved) = SchmidtSpectrum::<f64>::from_unsorted(vec![0.2, 0.5, 0.3]).unwrap();
        assert!(moved);
        assert_eq!(s.lambdas(), &[0.5, 0.3, 0.2]);
        assert!((s.eta() - 1.0).abs() < 1e-15);
        assert!((s.eta_j(1) - 0.6).abs() < 1e-15);
        assert!(!s.has_zero());
        assert!(spectrum(&[1.0, 0.0]).has_zero());
    }

    #[test]
    fn lambda_gram_examples() {
        let s = spectrum(&[0.7, 0.3]);
        let id = UnitaryMatrix::identity(2);
        assert!((lambda_gram(&id, &id, &s).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(lambda_gram(&id, &x(2), &s).unwrap(), c(0.0, 0.0));
        let g = lambda_gram(&id, &z2(), &s).unwrap();
        // 0.7·1 + 0.3·(−1)
        assert!((g - c(0.4, 0.0)).norm() < 1e-15);
        let s3 = spectrum(&[0.5, 0.3, 0.2]);
        assert!(matches!(lambda_gram(&id, &id, &s3), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn verify_family_examples() {
        let single = EncodingFamily::new(spectrum(&[0.7, 0.3]), vec![UnitaryMatrix::identity(2)]).unwrap();
        let r = verify_family(&single, 1e-12);
        assert!(r.passed);
        assert_eq!(r.worst_residual, 0.0);
        assert_eq!(r.worst_pair, None);

        let fam = EncodingFamily::new(SchmidtSpectrum::uniform(2), pauli2()).unwrap();
        // Oracle: all six pairwise traces written out by hand.
        let s = SchmidtSpectrum::<f64>::uniform(2);
        let mut brute = 0.0f64;
        for a in 0..4 {
            for b in a + 1..4 {
                let (ua, ub) = (&fam.unitaries()[a], &fam.unitaries()[b]);
                let mut t = c(0.0, 0.0);
                for i in 0..2 {
                    for j in 0..2 {
                        t += ua.get(i, j).conj() * ub.get(i, j) * s.lambda(j);
                    }
                }
                brute = brute.max(t.norm());
            }
        }
        assert!(brute <= 1e-15);
        let r = verify_family(&fam, 1e-12);
        assert!(r.passed && r.worst_residual <= 1e-15);

        let iz = EncodingFamily::new(spectrum(&[0.7, 0.3]), vec![UnitaryMatrix::identity(2), z2()]).unwrap();
        let r = verify_family(&iz, 1e-9);
        assert!(!r.passed);
        assert!((r.worst_residual - 0.4).abs() < 1e-15);
        assert_eq!(r.worst_pair, Some((0, 1)));
    }

    #[test]
    fn family_construction_errors() {
        assert!(EncodingFamily::<f64>::new(SchmidtSpectrum::uniform(2), vec![]).is_err());
        assert!(EncodingFamily::new(SchmidtSpectrum::<f64>::uniform(2), vec![UnitaryMatrix::identity(3)]).is_err());
        let five = vec![UnitaryMatrix::<f64>::identity(2); 5];
        assert!(EncodingFamily::new(SchmidtSpectrum::uniform(2), five).is_err());
    }

    #[test]
    fn message_state_examples() {
        let id = UnitaryMatrix::identity(2);
        let m = message_state(&id, &spectrum(&[1.0, 0.0])).unwrap();
        assert_eq!(m.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u = SchmidtSpectrum::uniform(2);
        let bell = message_state(&id, &u).unwrap();
        for (got, want) in bell.amplitudes().iter().zip([h, 0.0, 0.0, h]) {
            assert!((got - c(want, 0.0)).norm() < 1e-15);
        }
        let flipped = message_state(&x(2), &u).unwrap();
        for (got, want) in flipped.amplitudes().iter().zip([0.0, h, h, 0.0]) {
            assert!((got - c(want, 0.0)).norm() < 1e-15);
        }
        assert_eq!(flipped.amplitude(1, 0), flipped.amplitudes()[1]);
    }

    #[test]
    fn message_columns() {
        let single = EncodingFamily::new(spectrum(&[1.0, 0.0]), vec![UnitaryMatrix::identity(2)]).unwrap();
        let m = build_message_columns(&single, 1e-12).unwrap();
        assert_eq!((m.rows(), m.cols()), (4, 1));
        assert_eq!(m.column(0), vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);

        let fam = EncodingFamily::new(SchmidtSpectrum::uniform(2), pauli2()).unwrap();
        let m = build_message_columns(&fam, 1e-12).unwrap();
        assert!(unitarity_defect(&m).unwrap() < 1e-15);

        let x3 = x(3);
        let fam3 =
            EncodingFamily::new(spectrum(&[0.5, 0.3, 0.2]), vec![UnitaryMatrix::identity(3), x3.clone(), x3.pow(2)])
                .unwrap();
        let m = build_message_columns(&fam3, 1e-12).unwrap();
        assert_eq!((m.rows(), m.cols()), (9, 3));
        let gram = m.adjoint_matmul(&m).unwrap();
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);

        let iz = EncodingFamily::new(spectrum(&[0.7, 0.3]), vec![UnitaryMatrix::identity(2), z2()]).unwrap();
        assert!(matches!(build_message_columns(&iz, 1e-9), Err(Error::FamilyNotOrthogonal { .. })));
    }

    #[test]
    fn augment_full_family_needs_no_completion() {
        let fam = EncodingFamily::new(SchmidtSpectrum::uniform(2), pauli2()).unwrap();
        let m = augment(&fam, 1e-12, 0).unwrap();
        assert_eq!(m.completion_columns().len(), 0);
        assert!(m.unitarity_defect() < 1e-15);
        for t in foeq_check(&m, fam.spectrum()).unwrap() {
            assert!(t.expected.abs() < 1e-15 && t.completion_mass == 0.0);
        }
    }

    #[test]
    fn augment_product_state_single_member() {
        let s = spectrum(&[1.0, 0.0]);
        let fam = EncodingFamily::new(s.clone(), vec![UnitaryMatrix::identity(2)]).unwrap();
        let m = augment(&fam, 1e-12, 3).unwrap();
        assert_eq!(m.completion_columns().len(), 3);
        assert!(m.unitarity_defect() < 1e-12);
        let terms = foeq_check(&m, &s).unwrap();
        assert!((terms[0].expected - 1.0).abs() < 1e-15);
        assert!((terms[1].expected - 2.0).abs() < 1e-15);
        // Oracle: the completion of e_0 spans e_1..e_3, so column j=0 keeps mass 1
        // (basis state |10⟩) and column j=1 keeps mass 2 (|01⟩, |11⟩).
        assert!((terms[0].completion_mass - 1.0).abs() < 1e-12);
        assert!((terms[1].completion_mass - 2.0).abs() < 1e-12);
        assert!(terms.iter().all(|t| t.residual <= 1e-9));
    }

    #[test]
    fn augment_two_member_family_with_zero_coefficient() {
        let s = spectrum(&[1.0, 0.0]);
        let fam = EncodingFamily::new(s.clone(), vec![UnitaryMatrix::identity(2), x(2).mul(&z2()).unwrap()]).unwrap();
        let m = augment(&fam, 1e-12, 5).unwrap();
        assert_eq!(m.completion_columns().len(), 2);
        assert!(check_rows_orthonormal(m.matrix()) < 1e-12);
        assert!(foeq_check(&m, &s).unwrap().iter().all(|t| t.residual <= 1e-9));
    }

    fn check_rows_orthonormal(m: &ComplexMatrix<f64>) -> f64 {
        let mmh = m.matmul(&m.adjoint()).unwrap();
        mmh.max_abs_diff(&ComplexMatrix::identity(m.rows()))
    }

    #[test]
    fn augment_random_single_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for (d, l) in [(2usize, vec![0.8, 0.2]), (3, vec![0.5, 0.3, 0.2]), (4, vec![0.4, 0.3, 0.2, 0.1])] {
            let s = spectrum(&l);
            let u = UnitaryMatrix::random(d, &mut rng);
            let fam = EncodingFamily::new(s.clone(), vec![u]).unwrap();
            let m = augment(&fam, 1e-12, 1).unwrap();
            assert_eq!(m.completion_columns().len(), d * d - 1);
            assert!(m.unitarity_defect() < 1e-12);
            assert!(check_rows_orthonormal(m.matrix()) < 1e-12);
            assert!(foeq_check(&m, &s).unwrap().iter().all(|t| t.residual <= 1e-9));
        }
    }

    #[test]
    fn augment_rejects_non_orthogonal() {
        let iz = EncodingFamily::new(spectrum(&[0.7, 0.3]), vec![UnitaryMatrix::identity(2), z2()]).unwrap();
        assert!(matches!(augment(&iz, 1e-9, 0), Err(Error::FamilyNotOrthogonal { .. })));
    }

    #[test]
    fn wcsg_feasibility() {
        assert!(wcsg_feasible(&spectrum(&[0.75, 0.25, 0.0]), 4));
        assert!(!wcsg_feasible(&spectrum(&[0.61, 0.39, 0.0]), 5));
        assert!(wcsg_feasible(&spectrum(&[1.0, 0.0, 0.0]), 3));
    }

    #[test]
    fn generic_over_f32() {
        let s = SchmidtSpectrum::<f32>::new(vec![0.7, 0.3]).unwrap();
        let id = UnitaryMatrix::<f32>::identity(2);
        let z = UnitaryMatrix::<f32>::new(ComplexMatrix::diagonal(&[Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0)]))
            .unwrap();
        assert!((lambda_gram(&id, &z, &s).unwrap().re - 0.4).abs() < 1e-6);
    }
}
