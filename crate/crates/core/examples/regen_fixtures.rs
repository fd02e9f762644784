//! Rebuilds the family fixtures under `tests/fixtures/`.
//!
//! ```text
//! cargo run --release -p densecode --example regen_fixtures
//! ```

use std::path::PathBuf;

use densecode::constructions::{pauli_family, shift, shift_power_family};
use densecode::io::FamilyFile;
use densecode::search::find_family;
use densecode::{augment, verify_family, EncodingFamily64, SchmidtSpectrum64, SearchConfig64, UnitaryMatrix64};

const ARCHIVE_RESIDUAL: f64 = 1e-9;

fn spectrum(l: &[f64]) -> SchmidtSpectrum64 {
    SchmidtSpectrum64::new(l.to_vec()).expect("valid spectrum")
}

fn searched(l: &[f64], k: usize, pins: Vec<UnitaryMatrix64>, seed: u64) -> EncodingFamily64 {
    let cfg = SearchConfig64::new(k)
        .with_pinned(pins)
        .with_restarts(64)
        .with_max_iters(20_000)
        .with_success_residual(ARCHIVE_RESIDUAL)
        .with_seed(seed);
    let r = find_family(&spectrum(l), &cfg).expect("valid request");
    r.family.unwrap_or_else(|| panic!("no family for {l:?}, K = {k} (best {:e})", r.final_residual))
}

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    std::fs::create_dir_all(&dir).expect("fixture directory");
    let x3 = shift::<f64>(3).expect("d >= 2");
    let i3 = UnitaryMatrix64::identity(3);

    let fixtures: Vec<(&str, EncodingFamily64)> = vec![
        ("pauli_d2", pauli_family(2).unwrap()),
        ("pauli_d3", pauli_family(3).unwrap()),
        ("pauli_d4", pauli_family(4).unwrap()),
        (
            "identity_product_d2",
            EncodingFamily64::new(spectrum(&[1.0, 0.0]), vec![UnitaryMatrix64::identity(2)]).unwrap(),
        ),
        ("shift_powers_d3", shift_power_family(&spectrum(&[0.5, 0.3, 0.2]), 3).unwrap()),
        ("shift_powers_d4", shift_power_family(&spectrum(&[0.4, 0.3, 0.2, 0.1]), 4).unwrap()),
        ("search_d2_k2", searched(&[0.7, 0.3], 2, vec![], 1)),
        ("search_d3_k4_pinned_ix", searched(&[2.0 / 3.0, 1.0 / 3.0, 0.0], 4, vec![i3, x3], 2)),
        ("search_d3_k5", searched(&[0.55, 0.25, 0.2], 5, vec![], 3)),
        ("search_d3_k6", searched(&[0.45, 0.3, 0.25], 6, vec![], 4)),
        ("search_d4_k5", searched(&[0.6, 0.2, 0.1, 0.1], 5, vec![], 5)),
        ("search_d4_k8", searched(&[0.4, 0.3, 0.2, 0.1], 8, vec![], 6)),
    ];

    for (name, family) in fixtures {
        let check = verify_family(&family, ARCHIVE_RESIDUAL);
        assert!(check.passed, "{name}: residual {:e}", check.worst_residual);
        let m = augment(&family, ARCHIVE_RESIDUAL, 0).unwrap_or_else(|e| panic!("{name}: {e}"));
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, FamilyFile::from_family(&family).to_json() + "\n").expect("write fixture");
        println!(
            "{name:<24} K = {:>2}  residual {:.2e}  M defect {:.2e}",
            family.len(),
            check.worst_residual,
            m.unitarity_defect()
        );
    }
}
