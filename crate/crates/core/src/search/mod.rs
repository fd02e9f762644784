//! Multi-start search for Λ-orthogonal families on the product of unitary groups.
//!
//! Each free member moves in the chart `U·exp(iH)`. A run starts with gradient descent
//! (`H = −α ∇_θ F`, first-order map `U(I + iH)`, polar re-projection, step halving on
//! rejection and growth by 1.3 on acceptance) and then switches to damped Gauss–Newton
//! on the real overlap residuals, which converges to zero-residual sets that plain
//! descent only approaches sublinearly. Restarts are independent and run in parallel;
//! results are merged by restart index so the outcome depends only on the seed.

mod certify;
mod objective;
mod scan;

pub use certify::{certified_cap, certify_infeasible, distinct_shift_powers, Certificate, CERTIFICATE_SLACK};
pub use objective::{gradient, hermitian_from_params, objective, params_per_member};
pub use scan::{simplex_grid, simplex_scan, ScanRow};

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::coding::{verify_family, wcsg_feasible, EncodingFamily, SchmidtSpectrum};
use crate::constructions::{pauli_family, shift_power_family};
use crate::error::{Error, Result};
use crate::linalg::{expm, polar_unitary, unitarity_defect, ComplexMatrix, UnitaryMatrix};
use crate::scalar::Real;

use objective::{gradient_into, max_overlap_of, objective_of, residuals_and_jacobian};

/// Iterations of plain gradient descent before switching to damped Gauss–Newton.
const GD_WARMUP: usize = 200;

/// Search parameters for [`find_family`].
#[derive(Debug, Clone)]
pub struct SearchConfig<T> {
    pub target_k: usize,
    /// Members held fixed; the identity is pinned when this is empty.
    pub pinned: Vec<UnitaryMatrix<T>>,
    pub restarts: usize,
    pub max_iters: usize,
    /// Success threshold on `max_{a<b} |tr(Λ U_a† U_b)|`.
    pub success_residual: T,
    pub seed: u64,
}

impl<T: Real> SearchConfig<T> {
    pub fn new(target_k: usize) -> Self {
        Self { target_k, pinned: Vec::new(), restarts: 32, max_iters: 5000, success_residual: T::lit(1e-6), seed: 0 }
    }

    pub fn with_pinned(mut self, pinned: Vec<UnitaryMatrix<T>>) -> Self {
        self.pinned = pinned;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_success_residual(mut self, r: T) -> Self {
        self.success_residual = r;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Outcome of [`find_family`].
#[derive(Debug, Clone)]
pub struct SearchReport<T> {
    pub success: bool,
    /// Present iff `success`; re-verified at the configured residual.
    pub family: Option<EncodingFamily<T>>,
    /// Best `max_{a<b} |tr(Λ U_a† U_b)|` reached over all restarts run.
    pub final_residual: T,
    /// Objective value per iteration of the reported restart.
    pub objective_trace: Vec<T>,
    pub iterations_used: usize,
    pub restarts_used: usize,
    pub seed: u64,
    /// Set when an implemented theorem rules the request out.
    pub certificate: Option<Certificate>,
    /// `λ_0 > d/K`: the request violates the WCSG limit.
    pub wcsg_violated: bool,
}

impl<T> SearchReport<T> {
    /// Failure backed by a theorem rather than by the optimizer alone.
    pub fn certified(&self) -> bool {
        self.certificate.is_some()
    }
}

struct RestartOutcome<T> {
    index: usize,
    members: Vec<ComplexMatrix<T>>,
    residual: T,
    trace: Vec<T>,
    iterations: usize,
    success: bool,
}

fn restart_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn random_permutation<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        let j = rng.gen_range(0..=i);
        p.swap(i, j);
    }
    p
}

fn initial_member<T: Real, R: Rng + ?Sized>(d: usize, near_permutation: bool, rng: &mut R) -> ComplexMatrix<T>
where
    StandardNormal: Distribution<T>,
{
    if near_permutation {
        let perm = random_permutation(d, rng);
        let one = Complex::new(T::one(), T::zero());
        let zero = Complex::new(T::zero(), T::zero());
        let p = ComplexMatrix::from_fn(d, d, |i, j| if perm[j] == i { one } else { zero });
        let noisy = p.add(&ComplexMatrix::gaussian(d, d, rng).scale_real(T::lit(0.3))).expect("same shape");
        if let Ok(u) = polar_unitary(&noisy) {
            return u;
        }
    }
    UnitaryMatrix::random(d, rng).into_matrix()
}

fn step_member<T: Real>(u: &ComplexMatrix<T>, theta: &[T], alpha: T) -> Option<ComplexMatrix<T>> {
    let d = u.rows();
    let h = hermitian_from_params(d, theta).scale(Complex::new(T::zero(), -alpha));
    let first_order = ComplexMatrix::identity(d).add(&h).ok()?;
    let moved = u.matmul(&first_order).ok()?;
    let projected = polar_unitary(&moved).ok()?;
    if unitarity_defect(&projected).ok()? > T::unitarity_tol() {
        return None;
    }
    Some(projected)
}

fn exp_step<T: Real>(u: &ComplexMatrix<T>, theta: &[T]) -> Option<ComplexMatrix<T>> {
    let d = u.rows();
    let h = hermitian_from_params(d, theta).scale(Complex::new(T::zero(), T::one()));
    let moved = u.matmul(&expm(&h).ok()?).ok()?;
    let projected = polar_unitary(&moved).ok()?;
    if unitarity_defect(&projected).ok()? > T::unitarity_tol() {
        return None;
    }
    Some(projected)
}

/// Minimizer of `|r + Jδ|² + μ|δ|²`, solved in whichever of the residual or parameter
/// spaces is smaller.
fn damped_step<T: Real>(r: &[T], jac: &[T], n: usize, mu: T) -> Option<Vec<T>> {
    let m = r.len();
    if m <= n {
        let mut a = vec![T::zero(); m * m];
        for i in 0..m {
            for j in 0..=i {
                let v: T = (0..n).map(|p| jac[i * n + p] * jac[j * n + p]).sum();
                a[i * m + j] = v;
                a[j * m + i] = v;
            }
            a[i * m + i] = a[i * m + i] + mu;
        }
        let y = cholesky_solve(&mut a, m, r.to_vec())?;
        Some((0..n).map(|p| -(0..m).map(|i| jac[i * n + p] * y[i]).sum::<T>()).collect())
    } else {
        let mut a = vec![T::zero(); n * n];
        for p in 0..n {
            for q in 0..=p {
                let v: T = (0..m).map(|i| jac[i * n + p] * jac[i * n + q]).sum();
                a[p * n + q] = v;
                a[q * n + p] = v;
            }
            a[p * n + p] = a[p * n + p] + mu;
        }
        let rhs = (0..n).map(|p| -(0..m).map(|i| jac[i * n + p] * r[i]).sum::<T>()).collect();
        cholesky_solve(&mut a, n, rhs)
    }
}

/// Solves `A x = b` for symmetric positive definite `A` (overwritten by its factor).
fn cholesky_solve<T: Real>(a: &mut [T], n: usize, mut b: Vec<T>) -> Option<Vec<T>> {
    for j in 0..n {
        let mut diag = a[j * n + j];
        for k in 0..j {
            diag = diag - a[j * n + k] * a[j * n + k];
        }
        if !(diag > T::zero()) {
            return None;
        }
        let diag = diag.sqrt();
        a[j * n + j] = diag;
        for i in j + 1..n {
            let mut v = a[i * n + j];
            for k in 0..j {
                v = v - a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = v / diag;
        }
    }
    for i in 0..n {
        let mut v = b[i];
        for k in 0..i {
            v = v - a[i * n + k] * b[k];
        }
        b[i] = v / a[i * n + i];
    }
    for i in (0..n).rev() {
        let mut v = b[i];
        for k in i + 1..n {
            v = v - a[k * n + i] * b[k];
        }
        b[i] = v / a[i * n + i];
    }
    Some(b)
}

/// One optimizer run from a fresh random start.
fn run_restart<T: Real>(
    index: usize,
    lambdas: &[T],
    pinned: &[ComplexMatrix<T>],
    free_count: usize,
    cfg: &SearchConfig<T>,
) -> RestartOutcome<T>
where
    StandardNormal: Distribution<T>,
{
    let d = lambdas.len();
    let mut rng = restart_rng(cfg.seed, index);
    let mut members: Vec<ComplexMatrix<T>> = pinned.to_vec();
    let bias = rng.gen_bool(0.5);
    for f in 0..free_count {
        members.push(initial_member(d, bias && f == 0, &mut rng));
    }
    let free: Vec<usize> = (pinned.len()..members.len()).collect();
    let per = params_per_member(d);
    let target = cfg.success_residual * cfg.success_residual;

    let mut value = objective_of(&members, lambdas);
    let mut trace = Vec::with_capacity(cfg.max_iters.min(4096) + 1);
    trace.push(value);
    let mut iterations = 0;

    // First-order phase: cheap steps while far from any solution.
    let warmup = cfg.max_iters.min(GD_WARMUP);
    let mut grad = Vec::with_capacity(free.len() * per);
    let mut alpha = T::lit(0.5);
    let min_alpha = T::lit(1e-14);
    while iterations < warmup && value > target {
        iterations += 1;
        gradient_into(&members, lambdas, &free, &mut grad);
        let gnorm = grad.iter().map(|g| *g * *g).sum::<T>().sqrt();
        if gnorm == T::zero() || !gnorm.is_finite() {
            break;
        }
        let mut accepted = false;
        while alpha >= min_alpha {
            let mut trial = members.clone();
            let mut ok = true;
            for (slot, &c) in free.iter().enumerate() {
                match step_member(&members[c], &grad[slot * per..(slot + 1) * per], alpha) {
                    Some(u) => trial[c] = u,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                let trial_value = objective_of(&trial, lambdas);
                if trial_value < value {
                    members = trial;
                    value = trial_value;
                    alpha = alpha * T::lit(1.3);
                    accepted = true;
                    break;
                }
            }
            alpha = alpha * T::lit(0.5);
        }
        trace.push(value);
        if !accepted {
            break;
        }
    }

    // Damped Gauss–Newton on the overlap residuals, damping proportional to |r|.
    let mut nu = T::lit(1e-2);
    while iterations < cfg.max_iters && value > target {
        iterations += 1;
        let (r, jac) = residuals_and_jacobian(&members, lambdas, &free);
        let rnorm = value.sqrt();
        let mut accepted = false;
        while nu < T::lit(1e12) {
            let delta = match damped_step(&r, &jac, free.len() * per, nu * rnorm) {
                Some(x) => x,
                None => {
                    nu = nu * T::lit(4.0);
                    continue;
                }
            };
            let mut trial = members.clone();
            let mut ok = true;
            for (slot, &c) in free.iter().enumerate() {
                match exp_step(&members[c], &delta[slot * per..(slot + 1) * per]) {
                    Some(u) => trial[c] = u,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                let trial_value = objective_of(&trial, lambdas);
                if trial_value < value {
                    members = trial;
                    value = trial_value;
                    nu = (nu / T::lit(3.0)).max(T::lit(1e-10));
                    accepted = true;
                    break;
                }
            }
            nu = nu * T::lit(4.0);
        }
        trace.push(value);
        if !accepted {
            break;
        }
    }

    let residual = max_overlap_of(&members, lambdas);
    RestartOutcome { index, members, residual, trace, iterations, success: residual <= cfg.success_residual }
}

fn validate<T: Real>(s: &SchmidtSpectrum<T>, cfg: &SearchConfig<T>) -> Result<Vec<UnitaryMatrix<T>>> {
    let d = s.d();
    if cfg.target_k == 0 || cfg.target_k > d * d {
        return Err(Error::InvalidConfig(format!("target K = {} outside 1..={}", cfg.target_k, d * d)));
    }
    if cfg.restarts == 0 {
        return Err(Error::InvalidConfig("at least one restart is required".into()));
    }
    if !(cfg.success_residual > T::zero()) {
        return Err(Error::InvalidConfig("success residual must be positive".into()));
    }
    let pinned = if cfg.pinned.is_empty() { vec![UnitaryMatrix::identity(d)] } else { cfg.pinned.clone() };
    if pinned.len() > cfg.target_k {
        return Err(Error::InvalidConfig(format!(
            "{} pinned members exceed target K = {}",
            pinned.len(),
            cfg.target_k
        )));
    }
    let fam = EncodingFamily::new(s.clone(), pinned.clone())?;
    let check = verify_family(&fam, cfg.success_residual);
    if !check.passed {
        return Err(Error::PinnedNotOrthogonal { residual: check.worst_residual.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(pinned)
}

/// Seeks `cfg.target_k` Λ-orthogonal unitaries for spectrum `s`, containing the pinned
/// members.
///
/// The optimizer never certifies its own output: a reported family is re-checked with
/// [`verify_family`]. Failure is evidence only, unless [`SearchReport::certificate`] is set.
pub fn find_family<T: Real>(s: &SchmidtSpectrum<T>, cfg: &SearchConfig<T>) -> Result<SearchReport<T>>
where
    StandardNormal: Distribution<T>,
{
    let pinned = validate(s, cfg)?;
    let certificate = certify_infeasible(s, cfg.target_k, &pinned);
    let wcsg_violated = cfg.target_k >= s.d() && !wcsg_feasible(s, cfg.target_k);
    let pinned_mats: Vec<_> = pinned.iter().map(|u| u.matrix().clone()).collect();
    let free_count = cfg.target_k - pinned.len();
    let lambdas = s.lambdas();

    let outcomes: Vec<RestartOutcome<T>> = if free_count == 0 {
        let residual = max_overlap_of(&pinned_mats, lambdas);
        vec![RestartOutcome {
            index: 0,
            members: pinned_mats.clone(),
            residual,
            trace: vec![objective_of(&pinned_mats, lambdas)],
            iterations: 0,
            success: residual <= cfg.success_residual,
        }]
    } else {
        let batch = rayon::current_num_threads().max(1);
        let mut done = Vec::new();
        let mut next = 0;
        while next < cfg.restarts {
            let end = (next + batch).min(cfg.restarts);
            let mut chunk: Vec<_> =
                (next..end).into_par_iter().map(|i| run_restart(i, lambdas, &pinned_mats, free_count, cfg)).collect();
            chunk.sort_by_key(|o| o.index);
            let hit = chunk.iter().any(|o| o.success);
            done.extend(chunk);
            next = end;
            if hit {
                break;
            }
        }
        done
    };

    let winner = outcomes.iter().find(|o| o.success);
    let best = winner.unwrap_or_else(|| {
        outcomes
            .iter()
            .min_by(|a, b| a.residual.partial_cmp(&b.residual).unwrap_or(std::cmp::Ordering::Equal))
            .expect("at least one restart")
    });
    let restarts_used = match winner {
        Some(w) => w.index + 1,
        None => outcomes.len(),
    };

    let mut family = None;
    let mut success = false;
    if best.success {
        let members = best.members.iter().cloned().map(UnitaryMatrix::new).collect::<Result<Vec<_>>>()?;
        let fam = EncodingFamily::new(s.clone(), members)?;
        if verify_family(&fam, cfg.success_residual).passed {
            family = Some(fam);
            success = true;
        }
    }

    Ok(SearchReport {
        success,
        family,
        final_residual: best.residual,
        objective_trace: best.trace.clone(),
        iterations_used: best.iterations,
        restarts_used,
        seed: cfg.seed,
        certificate,
        wcsg_violated,
    })
}

/// How [`max_k`] established feasibility of its answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    /// Closed-form family (shift powers for `K ≤ d`, Weyl operators at the uniform spectrum).
    Construction,
    /// Numerical search succeeded.
    Search,
}

/// Result of [`max_k`].
#[derive(Debug, Clone)]
pub struct MaxKResult<T> {
    /// Largest `K` for which a family was found: a lower bound on the true maximum.
    pub k: usize,
    pub witness: Witness,
    pub family: EncodingFamily<T>,
    /// Every `K` above this value is excluded by a certificate.
    pub certified_cap: usize,
    /// `min(d², ⌊d/λ_0⌋)`.
    pub wcsg_cap: usize,
    /// Search reports for each `K` tried, largest first.
    pub reports: Vec<(usize, SearchReport<T>)>,
}

/// `min(d², ⌊d/λ_0 + 1e-12⌋)`.
pub fn wcsg_cap<T: Real>(s: &SchmidtSpectrum<T>) -> usize {
    let d = s.d();
    let lambda0 = s.largest().to_f64().unwrap_or(f64::NAN);
    ((d as f64 / lambda0 + 1e-12).floor() as usize).min(d * d)
}

fn uses_default_pins<T: Real>(pinned: &[UnitaryMatrix<T>]) -> bool {
    match pinned {
        [] => true,
        [only] => only.matrix().max_abs_diff(&ComplexMatrix::identity(only.dim())) == T::zero(),
        _ => false,
    }
}

/// Estimates the largest family size for `s` by searching downward from the largest `K`
/// no certificate excludes. `K = d² − 1` is never returned: it is only ever feasible
/// together with `d²`.
pub fn max_k<T: Real>(s: &SchmidtSpectrum<T>, cfg_base: &SearchConfig<T>) -> Result<MaxKResult<T>>
where
    StandardNormal: Distribution<T>,
{
    let d = s.d();
    let pins = &cfg_base.pinned;
    let wcsg = wcsg_cap(s);
    let cap = certified_cap(s, pins);
    let start = wcsg.min(cap);
    let constructions = uses_default_pins(pins);
    let uniform = s.is_uniform(T::lit(CERTIFICATE_SLACK));
    let mut reports = Vec::new();

    for k in (d + 1..=start).rev() {
        if k + 1 == d * d && !uniform {
            continue;
        }
        if constructions && uniform {
            let full = pauli_family::<T>(d)?;
            let (_, mut members) = full.into_parts();
            members.truncate(k);
            let family = EncodingFamily::new(s.clone(), members)?;
            return Ok(MaxKResult {
                k,
                witness: Witness::Construction,
                family,
                certified_cap: cap,
                wcsg_cap: wcsg,
                reports,
            });
        }
        if pins.len() > k {
            continue;
        }
        let mut cfg = cfg_base.clone();
        cfg.target_k = k;
        cfg.seed = cfg_base.seed.wrapping_add((k as u64) << 32);
        let report = find_family(s, &cfg)?;
        let found = report.family.clone();
        reports.push((k, report));
        if let Some(family) = found {
            return Ok(MaxKResult { k, witness: Witness::Search, family, certified_cap: cap, wcsg_cap: wcsg, reports });
        }
    }

    let k = d.min(start.max(1));
    if constructions {
        let family = shift_power_family(s, k)?;
        return Ok(MaxKResult {
            k,
            witness: Witness::Construction,
            family,
            certified_cap: cap,
            wcsg_cap: wcsg,
            reports,
        });
    }
    for k in (pins.len().max(1)..=k).rev() {
        let mut cfg = cfg_base.clone();
        cfg.target_k = k;
        let report = find_family(s, &cfg)?;
        let found = report.family.clone();
        reports.push((k, report));
        if let Some(family) = found {
            return Ok(MaxKResult { k, witness: Witness::Search, family, certified_cap: cap, wcsg_cap: wcsg, reports });
        }
    }
    Err(Error::InvalidConfig("pinned members admit no family of any size".into()))
}
