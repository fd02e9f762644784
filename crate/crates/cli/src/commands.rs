use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use densecode::bounds::bound_report;
use densecode::constructions::{complete_to_full, pauli_family};
use densecode::io::{matrix_from_json, AugmentedFile, FamilyFile};
use densecode::linalg::unitarity_defect;
use densecode::search::{find_family, simplex_scan, SearchReport};
use densecode::{augment as build_augmented, foeq_check, pair_overlaps, verify_family, EncodingFamily64, Error};
use densecode::{SearchConfig64, UnitaryMatrix64};
use serde::Serialize;

use crate::manifest::RunManifest;
use crate::parse::{parse_lambdas, parse_pins};
use crate::{ScanArgs, SearchArgs, Status};

/// Members must be unitary to this accuracy when read from disk.
const FILE_UNITARITY_TOL: f64 = 1e-9;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_family(path: &Path) -> Result<EncodingFamily64> {
    let text = read(path)?;
    let file = FamilyFile::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.to_family(FILE_UNITARITY_TOL).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn write_family(path: &Path, f: &EncodingFamily64) -> Result<()> {
    write(path, &(FamilyFile::from_family(f).to_json() + "\n"))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

#[derive(Serialize)]
struct PairRow {
    a: usize,
    b: usize,
    re: f64,
    im: f64,
    abs: f64,
}

#[derive(Serialize)]
struct VerifyOutput {
    passed: bool,
    d: usize,
    k: usize,
    tol: f64,
    worst_residual: f64,
    worst_pair: Option<(usize, usize)>,
    diagonal_defect: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pairs: Option<Vec<PairRow>>,
}

pub fn verify(input: &Path, tol: f64, verbose: bool, json: bool) -> Result<Status> {
    let text = read(input)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", input.display()))?;
    if value.get("matrix").is_some() {
        return verify_augmented(input, &text, tol, json);
    }
    let file = FamilyFile::from_json(&text).with_context(|| format!("parsing {}", input.display()))?;
    let family = file.to_family(FILE_UNITARITY_TOL).map_err(|e| anyhow!("{}: {e}", input.display()))?;
    let check = verify_family(&family, tol);
    let pairs = verbose.then(|| {
        pair_overlaps(&family)
            .into_iter()
            .map(|p| PairRow { a: p.a, b: p.b, re: p.value.re, im: p.value.im, abs: p.value.norm() })
            .collect::<Vec<_>>()
    });
    let out = VerifyOutput {
        passed: check.passed,
        d: family.d(),
        k: family.len(),
        tol,
        worst_residual: check.worst_residual,
        worst_pair: check.worst_pair,
        diagonal_defect: check.diagonal_defect,
        pairs,
    };
    if json {
        print_json(&out)?;
    } else {
        println!("d = {}, K = {}, tol = {:e}", out.d, out.k, tol);
        match out.worst_pair {
            Some((a, b)) => {
                println!("worst pair ({a}, {b}): residual {:.6} ({:e})", out.worst_residual, out.worst_residual)
            }
            None => println!("single member, no pairs"),
        }
        println!("diagonal defect {:e}", out.diagonal_defect);
        if let Some(rows) = &out.pairs {
            println!("{:>4} {:>4} {:>14} {:>14} {:>12}", "a", "b", "re", "im", "|g|");
            for r in rows {
                println!("{:>4} {:>4} {:>14.6e} {:>14.6e} {:>12.4e}", r.a, r.b, r.re, r.im, r.abs);
            }
        }
        println!("{}", if out.passed { "PASS" } else { "FAIL" });
    }
    Ok(if out.passed { Status::Ok } else { Status::Negative })
}

fn verify_augmented(input: &Path, text: &str, tol: f64, json: bool) -> Result<Status> {
    let file: AugmentedFile = serde_json::from_str(text).with_context(|| format!("parsing {}", input.display()))?;
    let m = matrix_from_json(&file.matrix).map_err(|e| anyhow!("field `matrix`: {e}"))?;
    if m.rows() != file.d * file.d || !m.is_square() {
        bail!("field `matrix` is {}x{}, expected {2}x{2}", m.rows(), m.cols(), file.d * file.d);
    }
    let defect = unitarity_defect(&m)?;
    let passed = defect <= tol;
    if json {
        print_json(&serde_json::json!({ "passed": passed, "unitarity_defect": defect, "tol": tol }))?;
    } else {
        println!("augmented matrix {0}x{0}: unitarity defect {defect:e}", m.rows());
        println!("{}", if passed { "PASS" } else { "FAIL" });
    }
    Ok(if passed { Status::Ok } else { Status::Negative })
}

pub fn bounds(d: usize, k: usize, m: Option<usize>, lambda2_zero: bool, json: bool) -> Result<Status> {
    let r = bound_report(d, k, m, lambda2_zero)?;
    if json {
        print_json(&r)?;
        return Ok(Status::Ok);
    }
    println!("upper bounds on lambda0 for d = {d}, K = {k}");
    println!("{:<28} {:>10}  exact", "bound", "value");
    println!("{:<28} {:>10.6}  {}", "d/K", r.wcsg, r.wcsg_exact);
    if let Some(v) = r.dp1 {
        println!("{:<28} {:>10.6}", "K = d+1", v);
    }
    if let Some(sp) = &r.shift_power {
        let label = format!("shift powers (m = {})", sp.m);
        let note = if sp.binding { "" } else { "  (not binding, K > 2d)" };
        println!("{:<28} {:>10.6}  {}{}", label, sp.value, sp.exact, note);
    }
    if let Some(v) = r.d3_lambda2_zero {
        println!("{:<28} {:>10.6}", "d = 3, lambda2 = 0", v);
    }
    println!("{:<28} {:>10.6}", "applicable minimum", r.applicable_min);
    Ok(Status::Ok)
}

pub fn construct_pauli(argv: &[String], d: usize, out: &Path) -> Result<Status> {
    let f = pauli_family::<f64>(d)?;
    write_family(out, &f)?;
    RunManifest::new("construct pauli", argv).input("d", d).write_for(out)?;
    println!("wrote {} members to {}", f.len(), out.display());
    Ok(Status::Ok)
}

pub fn construct_complete(argv: &[String], input: &Path, out: &Path, seed: u64, tol: f64) -> Result<Status> {
    let f = load_family(input)?;
    let last = match complete_to_full(&f, tol, seed) {
        Ok(u) => u,
        Err(
            e @ (Error::SpectrumNotUniform { .. }
            | Error::CompletionNotUnitary { .. }
            | Error::FamilyNotOrthogonal { .. }),
        ) => {
            eprintln!("completion failed: {e}");
            return Ok(Status::Negative);
        }
        Err(e) => return Err(e.into()),
    };
    let (spectrum, mut members) = f.into_parts();
    members.push(last);
    let full = EncodingFamily64::new(spectrum, members)?;
    write_family(out, &full)?;
    RunManifest::new("construct complete", argv)
        .input("in", input.display())
        .input("tol", tol)
        .seed(seed)
        .write_for(out)?;
    println!("wrote {} members to {}", full.len(), out.display());
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct SearchOutput<'a> {
    success: bool,
    certified: bool,
    certificate: Option<&'a densecode::search::Certificate>,
    wcsg_violated: bool,
    final_residual: f64,
    iterations_used: usize,
    restarts_used: usize,
    seed: u64,
}

impl<'a> From<&'a SearchReport<f64>> for SearchOutput<'a> {
    fn from(r: &'a SearchReport<f64>) -> Self {
        Self {
            success: r.success,
            certified: r.certified(),
            certificate: r.certificate.as_ref(),
            wcsg_violated: r.wcsg_violated,
            final_residual: r.final_residual,
            iterations_used: r.iterations_used,
            restarts_used: r.restarts_used,
            seed: r.seed,
        }
    }
}

pub fn search(argv: &[String], a: &SearchArgs) -> Result<Status> {
    let (spectrum, reordered) = parse_lambdas(&a.lambdas, a.d)?;
    if reordered {
        eprintln!("warning: --lambdas sorted to descending order {:?}", spectrum.lambdas());
    }
    let pins: Vec<UnitaryMatrix64> = match &a.pin {
        Some(raw) => parse_pins(raw, a.d)?,
        None => Vec::new(),
    };
    let cfg = SearchConfig64::new(a.k)
        .with_pinned(pins)
        .with_restarts(a.restarts)
        .with_max_iters(a.max_iters)
        .with_success_residual(a.residual)
        .with_seed(a.seed);
    let report = find_family(&spectrum, &cfg)?;

    if a.json {
        print_json(&SearchOutput::from(&report))?;
    } else {
        println!(
            "{} after {} restart(s): best residual {:e} ({} iterations)",
            if report.success { "found" } else { "not found" },
            report.restarts_used,
            report.final_residual,
            report.iterations_used
        );
        if report.wcsg_violated {
            println!("requested K exceeds d/lambda0");
        }
    }
    if let Some(c) = &report.certificate {
        eprintln!("certified infeasible: {}", c.describe());
    }

    if let (Some(out), Some(family)) = (&a.out, &report.family) {
        write_family(out, family)?;
        RunManifest::new("search", argv)
            .input("d", a.d)
            .input("lambdas", &a.lambdas)
            .input("k", a.k)
            .input("pin", a.pin.as_deref().unwrap_or("I"))
            .input("restarts", a.restarts)
            .input("max_iters", a.max_iters)
            .input("residual", a.residual)
            .seed(a.seed)
            .write_for(out)?;
    }
    Ok(if report.success { Status::Ok } else { Status::Negative })
}

pub fn scan(argv: &[String], a: &ScanArgs) -> Result<Status> {
    let cfg = SearchConfig64::new(1)
        .with_restarts(a.restarts)
        .with_max_iters(a.max_iters)
        .with_success_residual(a.residual)
        .with_seed(a.seed);
    let rows = simplex_scan(a.d, a.step, &cfg)?;

    let mut w = csv::Writer::from_path(&a.out).with_context(|| format!("writing {}", a.out.display()))?;
    let mut header: Vec<String> = (0..a.d).map(|j| format!("lambda{j}")).collect();
    header.extend(["max_k_found", "wcsg_cap", "certified_infeasible_above"].map(String::from));
    w.write_record(&header)?;
    for r in &rows {
        let mut rec: Vec<String> = r.lambdas.iter().map(|l| l.to_string()).collect();
        rec.push(r.max_k_found.to_string());
        rec.push(r.wcsg_cap.to_string());
        rec.push(r.certified_infeasible_above.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    RunManifest::new("scan", argv)
        .input("d", a.d)
        .input("step", a.step)
        .input("restarts", a.restarts)
        .input("max_iters", a.max_iters)
        .input("residual", a.residual)
        .seed(a.seed)
        .write_for(&a.out)?;
    println!("scanned {} spectra into {}", rows.len(), a.out.display());
    Ok(Status::Ok)
}

pub fn augment(argv: &[String], input: &Path, out: &Path, seed: u64, tol: f64, json: bool) -> Result<Status> {
    let family = load_family(input)?;
    let m = match build_augmented(&family, tol, seed) {
        Ok(m) => m,
        Err(e @ Error::FamilyNotOrthogonal { .. }) => {
            eprintln!("cannot augment: {e}");
            return Ok(Status::Negative);
        }
        Err(e) => return Err(e.into()),
    };
    let foeq = foeq_check(&m, family.spectrum())?;
    let file = AugmentedFile::new(&m, &foeq);
    write(out, &(serde_json::to_string_pretty(&file)? + "\n"))?;
    RunManifest::new("augment", argv).input("in", input.display()).input("tol", tol).seed(seed).write_for(out)?;

    let worst_foeq = foeq.iter().fold(0.0f64, |acc, t| acc.max(t.residual));
    let passed = m.unitarity_defect() <= 1e-9 && worst_foeq <= 1e-9;
    if json {
        print_json(&serde_json::json!({
            "passed": passed,
            "unitarity_defect": m.unitarity_defect(),
            "foeq": file.foeq,
        }))?;
    } else {
        println!(
            "augmented {0}x{0} matrix, K = {1}, unitarity defect {2:e}",
            m.matrix().rows(),
            m.k(),
            m.unitarity_defect()
        );
        println!("{:>3} {:>14} {:>16} {:>12}", "j", "d - K*lambda_j", "completion mass", "residual");
        for t in &foeq {
            println!("{:>3} {:>14.6} {:>16.6} {:>12.3e}", t.j, t.expected, t.completion_mass, t.residual);
        }
        println!("{}", if passed { "PASS" } else { "FAIL" });
    }
    Ok(if passed { Status::Ok } else { Status::Negative })
}
