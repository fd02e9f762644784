//! Grid sweep of the sorted probability simplex, recording the largest family found at
//! each point.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{max_k, SearchConfig};
use crate::coding::SchmidtSpectrum;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// One scanned spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub lambdas: Vec<f64>,
    pub max_k_found: usize,
    /// `min(d², ⌊d/λ_0⌋)`.
    pub wcsg_cap: usize,
    /// Every `K` above this is excluded by a certificate.
    pub certified_infeasible_above: usize,
}

fn partitions(n: usize, parts: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 0 {
        if n == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    for p in (0..=max_part.min(n)).rev() {
        if p * parts < n {
            break;
        }
        prefix.push(p);
        partitions(n - p, parts - 1, p, prefix, out);
        prefix.pop();
    }
}

/// Descending spectra on the lattice `{c/n}`, `n = 1/step`, plus the uniform point when it
/// is off-lattice. Sorted by `(λ_0, λ_1, …)` ascending.
pub fn simplex_grid<T: Real>(d: usize, step: f64) -> Result<Vec<SchmidtSpectrum<T>>> {
    if !(0.005..=0.1).contains(&step) {
        return Err(Error::Domain(format!("grid step {step} outside [0.005, 0.1]")));
    }
    if d < 2 {
        return Err(Error::Domain(format!("dimension d = {d} must be at least 2")));
    }
    let n = (1.0 / step).round() as usize;
    if ((n as f64) * step - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("grid step {step} does not divide 1")));
    }
    let mut counts = Vec::new();
    partitions(n, d, n, &mut Vec::with_capacity(d), &mut counts);
    let mut grid: Vec<Vec<T>> = counts
        .into_iter()
        .map(|c| c.into_iter().map(|x| T::from_usize_lossy(x) / T::from_usize_lossy(n)).collect())
        .collect();
    if !n.is_multiple_of(d) {
        grid.push(vec![T::one() / T::from_usize_lossy(d); d]);
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    grid.into_iter().map(SchmidtSpectrum::new).collect()
}

/// Runs [`max_k`] at every grid point. Points are processed in parallel; each gets a
/// seed derived from `cfg.seed` and its index, and rows come back in grid order.
pub fn simplex_scan<T: Real>(d: usize, step: f64, cfg: &SearchConfig<T>) -> Result<Vec<ScanRow>>
where
    StandardNormal: Distribution<T>,
{
    let grid = simplex_grid::<T>(d, step)?;
    grid.par_iter()
        .enumerate()
        .map(|(idx, s)| {
            let mut point_cfg = cfg.clone();
            point_cfg.seed = cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(idx as u64);
            let r = max_k(s, &point_cfg)?;
            Ok(ScanRow {
                lambdas: s.lambdas().iter().map(|l| l.to_f64().unwrap_or(f64::NAN)).collect(),
                max_k_found: r.k,
                wcsg_cap: r.wcsg_cap,
                certified_infeasible_above: r.certified_cap,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = simplex_grid::<f64>(3, 0.1).unwrap();
        // Partitions of 10 into at most 3 parts, plus the uniform point.
        assert_eq!(g.len(), 14 + 1);
        assert!(g.iter().any(|s| s.is_uniform(1e-15)));
        for s in &g {
            assert!(s.lambdas().windows(2).all(|w| w[0] >= w[1]));
        }
        assert_eq!(g.last().unwrap().lambdas(), &[1.0, 0.0, 0.0]);
        assert!(simplex_grid::<f64>(3, 0.2).is_err());
        assert!(simplex_grid::<f64>(3, 0.03).is_err());
    }

    #[test]
    fn grid_includes_uniform_when_on_lattice() {
        let g = simplex_grid::<f64>(2, 0.1).unwrap();
        assert_eq!(g.iter().filter(|s| s.is_uniform(1e-15)).count(), 1);
    }
}
