use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};
use symkl::arith::modular::{factorize, jacobi, primes_up_to};
use symkl::derham::{default_bound, kernel_generator_positivity};
use symkl::hodge::{dims, hodge_polygon_compact, irregularity_and_rigidity};
use symkl::lfunction::{eta_oracle_level6_weight4, lambda3_closed_form, spec_for_points};
use symkl::local_factors::zeta_poly_from_table;
use symkl::{
    cohomology, completed_lambda, conductor, epsilon_sign, euler_record, euler_record_auto, euler_record_auto_with,
    fe_defect, filtration_jumps, gamma_factor, graded_kernel_generator, hodge_numbers, verify_record,
    EulerFactorRecord, GradedElement, HodgeVariant, IntPolynomial, MomentTable, QuadParams, RecordOptions,
};

use crate::cache::{route_name, Cache, CacheEntry};
use crate::error::{CliError, CliResult};
use crate::output::{Failure, Report};

/// Defect below which a functional-equation check passes.
pub const FE_TOLERANCE: f64 = 1e-6;

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.12e}", z.re)
    } else {
        format!("{:.12e} {} {:.12e}i", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs())
    }
}

fn fmt_point(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{}{}i", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs())
    }
}

/// `a`, `a+bi`, `a-bi`, `bi`.
pub fn parse_complex(s: &str) -> CliResult<Complex64> {
    let bad = || CliError::Usage(format!("`{s}` is not a complex number"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(i, c)| (c == '+' || c == '-') && !matches!(body.as_bytes()[i - 1], b'e' | b'E'))
        .map(|(i, _)| i)
        .last();
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    Ok(Complex64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?))
}

pub fn default_points(k: u32) -> Vec<Complex64> {
    let c = (k + 2) as f64 / 2.0;
    vec![
        Complex64::new(c + 0.2, 0.0),
        Complex64::new(c - 0.3, 0.9),
        Complex64::new(c + 0.6, -1.3),
    ]
}

pub fn cmd_moments(k: u32, p: u64, n: u32) -> CliResult<Report> {
    let table = MomentTable::new(p, k);
    let mut report = Report::new(&["n", "q", "moment"]);
    let mut values = Vec::new();
    let mut q = BigInt::from(1);
    for i in 1..=n {
        q *= p;
        let m = table.at(i)?[k as usize].clone();
        report.row([i.to_string(), q.to_string(), m.to_string()]);
        values.push(m.to_string());
    }
    report.json = json!({ "k": k, "p": p, "moments": values });
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Cache,
    Computed,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Cache => "cache",
            Source::Computed => "computed",
        }
    }
}

/// Cached record if present and valid, otherwise a fresh one (stored when a cache is given).
pub fn record_for(k: u32, p: u64, cache: Option<&Cache>, refresh: bool) -> CliResult<(EulerFactorRecord, Source)> {
    if let Some(c) = cache {
        if !refresh {
            if let Some(r) = c.load(k, p)? {
                return Ok((r, Source::Cache));
            }
        }
    }
    let record = euler_record_auto_with(k, &MomentTable::new(p, k), RecordOptions::default())?;
    if let Some((name, _)) = record.checks.iter().find(|(_, ok)| !**ok) {
        return Err(symkl::Error::CheckFailed {
            check: name.clone(),
            detail: format!("k={k} p={p}"),
        }
        .into());
    }
    if let Some(c) = cache {
        c.store(&record)?;
    }
    Ok((record, Source::Computed))
}

pub fn cmd_euler(k: u32, pmax: u64, cache: Option<&Cache>, refresh: bool) -> CliResult<Report> {
    if k == 0 {
        return Err(CliError::Usage("k must be positive".into()));
    }
    let results: Vec<(u64, CliResult<(EulerFactorRecord, Source)>)> = primes_up_to(pmax)
        .into_par_iter()
        .map(|p| (p, record_for(k, p, cache, refresh)))
        .collect();
    let mut report = Report::new(&["p", "route", "source", "M", "checks"]);
    let mut entries = Vec::new();
    for (p, res) in results {
        match res {
            Ok((r, source)) => {
                let checks: Vec<&str> = r.checks.keys().map(String::as_str).collect();
                report.row([
                    p.to_string(),
                    route_name(r.route).to_string(),
                    source.name().to_string(),
                    r.m.to_string(),
                    checks.join(" "),
                ]);
                let mut e = serde_json::to_value(CacheEntry::from_record(&r, 0)).expect("entry serializes");
                let obj = e.as_object_mut().expect("object");
                obj.remove("created_at");
                obj.insert("source".into(), json!(source.name()));
                entries.push(e);
            }
            Err(e) => {
                report.row([p.to_string(), "-".into(), "-".into(), "-".into(), format!("FAILED: {e}")]);
                let mut f = Failure::from_error(&e);
                f.detail = format!("k={k} p={p}: {}", f.detail);
                report.failures.push(f);
            }
        }
    }
    report.json = json!({
        "k": k,
        "pmax": pmax,
        "cache_dir": cache.map(|c| c.dir().display().to_string()),
        "entries": entries,
    });
    Ok(report)
}

fn hodge_string(k: u32, v: HodgeVariant) -> String {
    let h = hodge_numbers(k, v);
    let parts: Vec<String> = h
        .entries
        .iter()
        .map(|(&(p, q, _), &mult)| if mult == 1 { format!("({p},{q})") } else { format!("{mult}x({p},{q})") })
        .collect();
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(" ")
    }
}

pub fn cmd_invariants(k: u32) -> CliResult<Report> {
    if k == 0 {
        return Err(CliError::Usage("k must be positive".into()));
    }
    let cond = conductor(k)?;
    let gamma = gamma_factor(k)?;
    let eps = epsilon_sign(k);
    let d = dims(k);
    let irr = irregularity_and_rigidity(k);
    let poly = hodge_polygon_compact(k);
    let status = |c: bool| if c { "conjectural" } else { "proved" };
    let mut report = Report::new(&["invariant", "value", "status"]);
    let cond_str = if cond.two_exponent > 0 {
        format!("{} = {} * 2^{}", cond.value, cond.odd_part, cond.two_exponent)
    } else {
        cond.value.to_string()
    };
    report.row(["conductor".into(), cond_str, status(cond.conjectural).to_string()]);
    report.row(["gamma degree m".into(), gamma.m.to_string(), status(false).into()]);
    report.row(["gamma shifts".into(), format!("{:?}", gamma.shifts), status(false).into()]);
    report.row(["sign".into(), format!("{:+}", eps.sign), status(eps.conjectural).into()]);
    if let Some(t) = eps.t {
        report.row(["sign t_k".into(), t.to_string(), status(eps.conjectural).into()]);
    }
    report.row(["dim H1 / H1_mid".into(), format!("{} / {}", d.h1, d.h1_mid), status(false).into()]);
    report.row([
        "dim H1~ / H1~_mid".into(),
        format!("{} / {}", d.h1_tilde, d.h1_mid_tilde),
        status(false).into(),
    ]);
    for (name, v) in [
        ("hodge H1", HodgeVariant::H1),
        ("hodge H1_mid", HodgeVariant::H1Mid),
        ("hodge H1~", HodgeVariant::H1Tilde),
        ("hodge H1~_mid", HodgeVariant::H1MidTilde),
    ] {
        report.row([name.to_string(), hodge_string(k, v), status(false).into()]);
    }
    report.row(["hodge polygon".into(), format!("{:?}", poly.vertices()), status(false).into()]);
    report.row([
        "irr / irr~ / swan_2".into(),
        format!("{} / {} / {}", irr.irr, irr.irr_tilde, irr.swan_at_2),
        status(false).into(),
    ]);
    report.row(["rig / rig~".into(), format!("{} / {}", irr.rig, irr.rig_tilde), status(false).into()]);
    let hodge_json = |v| {
        hodge_numbers(k, v)
            .entries
            .iter()
            .map(|(&(p, q, w), &mult)| json!({ "p": p, "q": q, "weight": w, "mult": mult }))
            .collect::<Vec<_>>()
    };
    report.json = json!({
        "k": k,
        "conductor": {
            "value": cond.value.to_string(),
            "odd_part": cond.odd_part.to_string(),
            "two_exponent": cond.two_exponent,
            "conjectural": cond.conjectural,
        },
        "gamma": { "m": gamma.m, "shifts": gamma.shifts },
        "sign": { "value": eps.sign, "conjectural": eps.conjectural, "t": eps.t },
        "dims": { "h1": d.h1, "h1_mid": d.h1_mid, "h1_tilde": d.h1_tilde, "h1_mid_tilde": d.h1_mid_tilde },
        "hodge": {
            "h1": hodge_json(HodgeVariant::H1),
            "h1_mid": hodge_json(HodgeVariant::H1Mid),
            "h1_tilde": hodge_json(HodgeVariant::H1Tilde),
            "h1_mid_tilde": hodge_json(HodgeVariant::H1MidTilde),
        },
        "hodge_polygon": poly.vertices(),
        "irregularity": { "irr": irr.irr, "irr_tilde": irr.irr_tilde, "swan_at_2": irr.swan_at_2 },
        "rigidity": { "rig": irr.rig, "rig_tilde": irr.rig_tilde },
    });
    Ok(report)
}

/// `z^r eta_a` terms in degree order, e.g. `eta_6 - 3 z eta_4`.
pub fn fmt_element(x: &GradedElement) -> String {
    let mut out = String::new();
    for (i, (&(r, a), c)) in x.terms.iter().enumerate() {
        let neg = c.numer() < &BigInt::from(0);
        let (num, den) = (c.numer().magnitude(), c.denom());
        out.push_str(match (i, neg) {
            (0, false) => "",
            (0, true) => "-",
            (_, false) => " + ",
            (_, true) => " - ",
        });
        if *den != BigInt::from(1) {
            out.push_str(&format!("{num}/{den} "));
        } else if *num != 1u32.into() {
            out.push_str(&format!("{num} "));
        }
        match r {
            0 => {}
            1 => out.push_str("z "),
            _ => out.push_str(&format!("z^{r} ")),
        }
        out.push_str(&format!("eta_{a}"));
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

pub fn cmd_derham(k: u32, bound: Option<u32>) -> CliResult<Report> {
    if k == 0 {
        return Err(CliError::Usage("k must be positive".into()));
    }
    let bound = bound.unwrap_or_else(|| default_bound(k));
    let coh = cohomology(k, bound)?;
    let mut report = Report::new(&["item", "value"]);
    report.row(["degree bound".into(), bound.to_string()]);
    report.row(["dim H0".into(), coh.h0.len().to_string()]);
    report.row(["dim H1".into(), coh.h1.len().to_string()]);
    let basis: Vec<String> = coh.h1.iter().map(fmt_element).collect();
    for (j, b) in basis.iter().enumerate() {
        report.row([format!("H1 class {j}"), b.clone()]);
    }
    let mut kernel = Value::Null;
    if k % 2 == 0 {
        let sigma = graded_kernel_generator(k)?;
        let positive: Vec<bool> = (0..=5)
            .map(|r| kernel_generator_positivity(k, r))
            .collect::<symkl::Result<_>>()?;
        report.row(["kernel generator".into(), fmt_element(&sigma)]);
        report.row(["D_0 z^r sigma survives, r <= 5".into(), format!("{positive:?}")]);
        if let Some(r) = positive.iter().position(|&b| !b) {
            report
                .failures
                .push(Failure::new("kernel-positivity", format!("k={k}: z^{r} sigma collapses")));
        }
        kernel = json!({ "element": fmt_element(&sigma), "survives": positive });
    }
    let jumps = filtration_jumps(k);
    let jumps_json = match &jumps {
        Ok(j) => {
            report.row(["filtration jumps (computed)".into(), format!("{:?}", j.computed)]);
            report.row(["filtration jumps (Hodge numbers)".into(), format!("{:?}", j.from_hodge_numbers)]);
            report.row(["theorem cross-check", "agrees"]);
            json!({ "computed": j.computed, "from_hodge_numbers": j.from_hodge_numbers, "agrees": true })
        }
        Err(e) => {
            report.row(["theorem cross-check".into(), format!("FAILED: {e}")]);
            report.failures.push(Failure::new("filtration-jumps", e.to_string()));
            json!({ "agrees": false, "error": e.to_string() })
        }
    };
    report.json = json!({
        "k": k,
        "bound": bound,
        "h0": coh.h0.len(),
        "h1": basis,
        "quotient_dims": coh.quotient_dims,
        "kernel_generator": kernel,
        "filtration_jumps": jumps_json,
    });
    Ok(report)
}

pub fn cmd_fe_check(k: u32, points: &[Complex64], quad: &QuadParams) -> CliResult<Report> {
    if k == 0 {
        return Err(CliError::Usage("k must be positive".into()));
    }
    let spec = spec_for_points(k, points, quad)?;
    let mut report = Report::new(&["s", "Lambda(s)", "error estimate", "terms", "defect", "status"]);
    let mut rows = Vec::new();
    for &s in points {
        let (value, err, terms) = if spec.is_trivial() {
            (Complex64::new(1.0, 0.0), 0.0, 0)
        } else {
            let l = completed_lambda(&spec, s, quad)?;
            (l.value, l.error_estimate, l.terms)
        };
        let defect = fe_defect(&spec, s, quad)?;
        let ok = defect < FE_TOLERANCE;
        report.row([
            fmt_point(s),
            fmt_complex(value),
            format!("{err:.1e}"),
            terms.to_string(),
            format!("{defect:.3e}"),
            if ok { "ok" } else { "FAIL" }.to_string(),
        ]);
        if !ok {
            report.failures.push(Failure::new(
                "fe-defect",
                format!("k={k} s={}: defect {defect:e} >= {FE_TOLERANCE:e}", fmt_point(s)),
            ));
        }
        rows.push(json!({
            "s": [s.re, s.im],
            "lambda": [value.re, value.im],
            "error_estimate": err,
            "terms": terms,
            "defect": defect,
        }));
    }
    let flags: Vec<&str> = spec.conjectural_flags.iter().map(String::as_str).collect();
    if !flags.is_empty() {
        report.notes.push(format!("conjectural inputs: {}", flags.join(", ")));
    }
    report.notes.push(format!(
        "conductor {}, sign {:+}, gamma shifts {:?}, Euler factors for p <= {}",
        spec.conductor,
        spec.sign,
        spec.gamma_shifts,
        spec.euler.keys().last().copied().unwrap_or(1)
    ));
    report.json = json!({
        "k": k,
        "conductor": spec.conductor.to_string(),
        "sign": spec.sign,
        "gamma_shifts": spec.gamma_shifts,
        "conjectural": flags,
        "tolerance": FE_TOLERANCE,
        "points": rows,
    });
    Ok(report)
}

type Check = (&'static str, fn() -> Result<String, String>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err_str<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn check_closed_forms() -> Result<String, String> {
    let poly = IntPolynomial::from_i64s;
    for p in primes_up_to(30) {
        let table = MomentTable::new(p, 4);
        let chi = jacobi(p as i64, 3) as i64;
        let p2 = (p * p) as i64;
        let expect = [
            poly(&[1, -1]),
            poly(&[1, -1]),
            poly(&[1, -1]).mul(&poly(&[1, -chi * p2])),
            if p == 2 { poly(&[1, -1]) } else { poly(&[1, -1]).mul(&poly(&[1, -p2])) },
        ];
        for (k, e) in (1..=4).zip(expect) {
            let z = zeta_poly_from_table(k, &table).map_err(err_str)?;
            ensure(z == e, || format!("Z_{k}({p}) = {z}, expected {e}"))?;
        }
    }
    Ok("Z_1..Z_4 for p <= 30".into())
}

fn check_records() -> Result<String, String> {
    let mut n = 0;
    for p in primes_up_to(7) {
        let table = MomentTable::new(p, 8);
        for k in 1..=8 {
            let r = euler_record(k, &table, RecordOptions::default()).map_err(|e| format!("k={k} p={p}: {e}"))?;
            let back = CacheEntry::from_record(&r, 0).to_record()?;
            ensure(back == r, || format!("k={k} p={p}: cache round trip differs"))?;
            verify_record(&back).map_err(|e| format!("k={k} p={p}: {e}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} certified records (k <= 8, p <= 7), cache round trip re-verified"))
}

fn check_conductors() -> Result<String, String> {
    for k in (1..=99u32).step_by(2) {
        let c = conductor(k).map_err(err_str)?;
        let direct: BigInt = (1..=k as u64)
            .step_by(2)
            .map(|n| factorize(n).iter().filter(|(_, e)| e % 2 == 1).map(|(p, _)| p).product::<u64>())
            .map(BigInt::from)
            .product();
        ensure(c.value == direct, || format!("cond_{k} = {}, product {direct}", c.value))?;
    }
    let c5 = conductor(5).map_err(err_str)?.value;
    ensure(c5 == BigInt::from(15), || format!("cond_5 = {c5}"))?;
    Ok("odd k <= 99, cond_5 = 15".into())
}

fn check_hodge() -> Result<String, String> {
    for k in 1..=50 {
        for v in [HodgeVariant::H1, HodgeVariant::H1Mid, HodgeVariant::H1Tilde, HodgeVariant::H1MidTilde] {
            let h = hodge_numbers(k, v);
            ensure(h.is_symmetric(), || format!("k={k} {v:?} not symmetric"))?;
        }
        let d = dims(k);
        ensure(hodge_numbers(k, HodgeVariant::H1).dimension() == d.h1, || format!("k={k}: dim H1"))?;
        gamma_factor(k).map_err(|e| format!("k={k}: {e}"))?;
    }
    Ok("k <= 50: symmetry, dimensions, Serre recipe".into())
}

fn check_derham() -> Result<String, String> {
    for k in 1..=8 {
        let c = cohomology(k, default_bound(k)).map_err(|e| format!("k={k}: {e}"))?;
        ensure(c.h1.len() == dims(k).h1, || format!("k={k}: dim H1 = {}", c.h1.len()))?;
        filtration_jumps(k).map_err(err_str)?;
        if k % 2 == 0 {
            graded_kernel_generator(k).map_err(err_str)?;
        }
    }
    Ok("k <= 8: bases, jumps, kernel generators".into())
}

fn check_fe3() -> Result<String, String> {
    let q = QuadParams::default();
    let fe = [Complex64::new(2.25, -1.0), Complex64::new(2.75, 0.3)];
    let cf = [Complex64::new(3.5, 0.0), Complex64::new(2.4, 0.7)];
    let all: Vec<Complex64> = fe.iter().chain(&cf).copied().collect();
    let spec = spec_for_points(3, &all, &q).map_err(err_str)?;
    let mut defect: f64 = 0.0;
    for s in fe {
        defect = defect.max(fe_defect(&spec, s, &q).map_err(err_str)?);
    }
    let mut rel: f64 = 0.0;
    for s in cf {
        let got = completed_lambda(&spec, s, &q).map_err(err_str)?.value;
        let want = lambda3_closed_form(s);
        rel = rel.max((got - want).norm() / want.norm());
    }
    ensure(defect < FE_TOLERANCE && rel < 1e-8, || format!("defect {defect:e}, closed form {rel:e}"))?;
    Ok(format!("k = 3: defect {defect:.1e}, closed form {rel:.1e}"))
}

fn check_eta6() -> Result<String, String> {
    let eta = eta_oracle_level6_weight4(7);
    for p in [5u64, 7] {
        let r = euler_record_auto(6, &MomentTable::new(p, 6)).map_err(err_str)?;
        let want = IntPolynomial::new(vec![
            BigInt::from(1),
            -(BigInt::from(eta[p as usize]) * BigInt::from(p * p)),
            BigInt::from(p).pow(7),
        ]);
        ensure(r.m == want, || format!("M_6({p}) = {}, eta gives {want}", r.m))?;
    }
    Ok("M_6(5), M_6(7) match the weight-4 level-6 eta product".into())
}

pub const SELFCHECKS: &[Check] = &[
    ("closed-forms", check_closed_forms),
    ("records", check_records),
    ("conductors", check_conductors),
    ("hodge", check_hodge),
    ("derham", check_derham),
    ("fe-k3", check_fe3),
    ("eta-k6", check_eta6),
];

pub fn cmd_selfcheck() -> Report {
    let mut report = Report::new(&["check", "status", "detail", "seconds"]);
    let mut results = BTreeMap::new();
    for &(name, f) in SELFCHECKS {
        let t = Instant::now();
        let out = f();
        let secs = t.elapsed().as_secs_f64();
        let (status, detail) = match &out {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        report.row([name.to_string(), status.into(), detail.clone(), format!("{secs:.1}")]);
        if out.is_err() {
            report.failures.push(Failure::new(name, detail.clone()));
        }
        results.insert(name, json!({ "pass": out.is_ok(), "detail": detail, "seconds": secs }));
    }
    report.json = json!({ "checks": results });
    report
}
