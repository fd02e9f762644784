//! JSON file formats. Matrices are row-major arrays of `[re, im]` pairs.
//!
//! ```json
//! { "d": 2, "lambdas": [0.5, 0.5], "unitaries": [ [ [[1,0],[0,0]], [[0,0],[1,0]] ] ] }
//! ```

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::coding::{AugmentedMessageMatrix, EncodingFamily, FoeqTerm, SchmidtSpectrum};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, UnitaryMatrix};

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &ComplexMatrix<f64>) -> JsonMatrix {
    (0..m.rows()).map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect()).collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> Result<ComplexMatrix<f64>> {
    ComplexMatrix::from_rows(rows.iter().map(|r| r.iter().map(|[re, im]| Complex::new(*re, *im)).collect()).collect())
}

/// On-disk encoding family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub d: usize,
    pub lambdas: Vec<f64>,
    pub unitaries: Vec<JsonMatrix>,
}

impl FamilyFile {
    pub fn from_family(f: &EncodingFamily<f64>) -> Self {
        Self {
            d: f.d(),
            lambdas: f.spectrum().lambdas().to_vec(),
            unitaries: f.unitaries().iter().map(|u| matrix_to_json(u.matrix())).collect(),
        }
    }

    /// Validates shape, spectrum and unitarity (at `unitarity_tol`). Error messages name
    /// the offending field.
    pub fn to_family(&self, unitarity_tol: f64) -> Result<EncodingFamily<f64>> {
        if self.lambdas.len() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "field `lambdas` has {} entries but `d` is {}",
                self.lambdas.len(),
                self.d
            )));
        }
        let spectrum = SchmidtSpectrum::new(self.lambdas.clone())
            .map_err(|e| Error::InvalidSpectrum(format!("field `lambdas`: {e}")))?;
        let mut members = Vec::with_capacity(self.unitaries.len());
        for (a, rows) in self.unitaries.iter().enumerate() {
            if rows.len() != self.d || rows.iter().any(|r| r.len() != self.d) {
                return Err(Error::DimensionMismatch(format!("field `unitaries[{a}]` is not {0}x{0}", self.d)));
            }
            let m = matrix_from_json(rows)?;
            let u = UnitaryMatrix::with_tol(m, unitarity_tol)
                .map_err(|e| Error::InvalidFamily(format!("field `unitaries[{a}]`: {e}")))?;
            members.push(u);
        }
        EncodingFamily::new(spectrum, members).map_err(|e| Error::InvalidFamily(format!("field `unitaries`: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("family serializes")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// One row of the column-mass identity table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoeqRow {
    pub j: usize,
    pub expected: f64,
    pub completion_mass: f64,
    pub residual: f64,
}

impl From<&FoeqTerm<f64>> for FoeqRow {
    fn from(t: &FoeqTerm<f64>) -> Self {
        Self { j: t.j, expected: t.expected, completion_mass: t.completion_mass, residual: t.residual }
    }
}

/// On-disk augmented message matrix, rows in `j·d + i` order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentedFile {
    pub d: usize,
    pub k: usize,
    pub matrix: JsonMatrix,
    pub unitarity_defect: f64,
    pub foeq: Vec<FoeqRow>,
}

impl AugmentedFile {
    pub fn new(m: &AugmentedMessageMatrix<f64>, foeq: &[FoeqTerm<f64>]) -> Self {
        Self {
            d: m.d(),
            k: m.k(),
            matrix: matrix_to_json(m.matrix()),
            unitarity_defect: m.unitarity_defect(),
            foeq: foeq.iter().map(FoeqRow::from).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::pauli_family;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pauli_round_trip() {
        let f = pauli_family::<f64>(3).unwrap();
        let text = FamilyFile::from_family(&f).to_json();
        let back = FamilyFile::from_json(&text).unwrap().to_family(1e-10).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn malformed_fields_are_named() {
        let mut file = FamilyFile::from_family(&pauli_family::<f64>(2).unwrap());
        file.lambdas = vec![0.5, 0.25, 0.25];
        let err = file.to_family(1e-10).unwrap_err().to_string();
        assert!(err.contains("lambdas"), "{err}");

        let mut file = FamilyFile::from_family(&pauli_family::<f64>(2).unwrap());
        file.unitaries[1][0][0] = [2.0, 0.0];
        let err = file.to_family(1e-10).unwrap_err().to_string();
        assert!(err.contains("unitaries[1]"), "{err}");

        assert!(FamilyFile::from_json("{\"d\": 2, \"lambdas\": [0.5,").is_err());
        assert!(FamilyFile::from_json("{\"d\": 2, \"lambdas\": [0.5, 0.5]}").is_err());
    }

    proptest! {
        #[test]
        fn random_unitary_round_trip(seed in any::<u64>(), d in 2usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = UnitaryMatrix::<f64>::random(d, &mut rng);
            let f = EncodingFamily::new(SchmidtSpectrum::uniform(d), vec![u]).unwrap();
            let text = FamilyFile::from_family(&f).to_json();
            let back = FamilyFile::from_json(&text).unwrap().to_family(1e-10).unwrap();
            prop_assert!(back.unitaries()[0].matrix().max_abs_diff(f.unitaries()[0].matrix()) <= 1e-15);
            prop_assert_eq!(back.spectrum(), f.spectrum());
        }
    }
}
