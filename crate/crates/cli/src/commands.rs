use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Context;
use qresource::catalog::{self, CatalogEntry};
use qresource::canonical::{classify_slocc, schmidt_decompose, sd_class_of};
use qresource::lu::{lu_invariance_trial, lu_invariants, psdc3_counterexample, random_state, LuTrialConfig, SeedStream};
use qresource::oracle::{
    sample_outcome, sdc_measurement, simulate_bennett, simulate_nielsen_circuit, simulate_ptp, simulate_sdc,
    TeleportOutcome,
};
use qresource::state::qubit_entropy;
use qresource::suitability::entropy_criterion_with_tolerance;
use qresource::tolerance::EPS_COND;
use qresource::{three_tangle, Error, Protocol, PureState, SuitabilityReport, UnknownQubit};
use serde_json::{json, Value};

use crate::{Cli, Command, SimKind, Source, UnknownArgs};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_UNDEFINED: u8 = 3;
const EXIT_INTERNAL: u8 = 1;

/// A command that did not complete; `stdout` carries any status output that
/// still belongs on standard output.
pub struct Failure {
    pub code: u8,
    pub message: String,
    pub stdout: Option<String>,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let code = match e.downcast_ref::<Error>() {
            Some(Error::ProtocolUndefined(_)) => EXIT_UNDEFINED,
            Some(Error::Consistency(_)) => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: format!("{e:#}"),
            stdout: None,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::new(e).into()
    }
}

type Outcome = Result<String, Failure>;

struct Ctx {
    json: bool,
    tolerance: f64,
    seed: u64,
}

impl Ctx {
    fn emit(&self, value: &Value, human: impl FnOnce() -> String) -> String {
        if self.json {
            let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
            s.push('\n');
            s
        } else {
            human()
        }
    }

    fn report(&self, protocol: Protocol, state: &PureState) -> qresource::Result<SuitabilityReport> {
        Ok(protocol.check(state)?.with_tolerance(self.tolerance))
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let tolerance = cli.tolerance.unwrap_or(EPS_COND);
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::Argument(format!("tolerance must be a positive number, got {tolerance}")).into());
    }
    let ctx = Ctx {
        json: cli.json,
        tolerance,
        seed: cli.seed,
    };
    match &cli.command {
        Command::Check { source, protocol } => check(&ctx, &load(source)?, *protocol),
        Command::Analyze { source } => analyze(&ctx, &load(source)?),
        Command::Schmidt { source } => schmidt(&ctx, &load(source)?),
        Command::Classify { source } => classify(&ctx, &load(source)?),
        Command::Invariants { source } => invariants(&ctx, &load(source)?),
        Command::Simulate {
            kind,
            source,
            unknown,
            bits,
            message,
            trials,
        } => {
            let state = load(source)?;
            match kind {
                SimKind::Sdc => sdc(&ctx, &state, *bits, message.as_deref()),
                _ => teleport(&ctx, *kind, &state, unknown, *trials),
            }
        }
        Command::LuTest {
            protocol,
            name,
            file,
            trials,
            witness,
        } => {
            if *witness {
                return lu_witness(&ctx);
            }
            let source = Source {
                name: name.clone(),
                file: file.clone(),
            };
            let protocol = protocol.expect("clap requires --protocol without --witness");
            lu_test(&ctx, &load(&source)?, protocol, *trials)
        }
        Command::Matrix => matrix(&ctx),
        Command::Catalog { name, export, write } => catalog_cmd(&ctx, name.as_deref(), *export, write.as_deref()),
    }
}

fn load(source: &Source) -> Result<PureState, Failure> {
    if let Some(name) = &source.name {
        return Ok(catalog::lookup(name)?.state);
    }
    let path = source.file.as_ref().expect("clap requires --name or --file");
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    PureState::from_json(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::from)
}

fn mark(v: bool) -> &'static str {
    if v {
        "✓"
    } else {
        "✗"
    }
}

fn report_table(out: &mut String, r: &SuitabilityReport) {
    let _ = writeln!(out, "protocol   {}", r.protocol);
    let _ = writeln!(out, "verdict    {}", r.verdict);
    let _ = writeln!(out, "tolerance  {:e}", r.tolerance());
    let _ = writeln!(out, "{:<12} {:>14}  ok", "condition", "residual");
    for (label, value) in &r.residuals {
        let _ = writeln!(out, "{label:<12} {value:>14.6e}  {}", mark(*value < r.tolerance()));
    }
    let failing = r.failing();
    if failing.is_empty() {
        let _ = writeln!(out, "failing    none");
    } else {
        let _ = writeln!(out, "failing    {}", failing.join(", "));
    }
}

fn report_json(r: &SuitabilityReport) -> Value {
    json!({
        "protocol": r.protocol,
        "verdict": r.verdict,
        "tolerance": r.tolerance(),
        "residuals": r.residuals,
        "failing": r.failing(),
    })
}

fn check(ctx: &Ctx, state: &PureState, protocol: Protocol) -> Outcome {
    let r = ctx.report(protocol, state)?;
    Ok(ctx.emit(&report_json(&r), || {
        let mut out = String::new();
        report_table(&mut out, &r);
        out
    }))
}

fn analyze(ctx: &Ctx, state: &PureState) -> Outcome {
    if state.n_qubits() != 3 {
        return Err(Error::Argument(format!("analyze needs a three-qubit state, got {} qubits", state.n_qubits())).into());
    }
    let class = classify_slocc(state)?;
    let sd = schmidt_decompose(state)?;
    let inv = lu_invariants(state)?;
    let reports = [Protocol::PTP, Protocol::PSDC2, Protocol::PSDC3]
        .map(|p| ctx.report(p, state))
        .into_iter()
        .collect::<qresource::Result<Vec<_>>>()?;
    let value = json!({
        "class": class,
        "schmidt": { "lambda": sd.lambda(), "phi": sd.phi() },
        "entropies": [inv.s1, inv.s2, inv.s3],
        "tangle": inv.tangle,
        "verdicts": reports.iter().map(|r| (r.protocol.label().to_string(), json!(r.verdict))).collect::<serde_json::Map<_, _>>(),
        "failing": reports.iter().map(|r| (r.protocol.label().to_string(), json!(r.failing()))).collect::<serde_json::Map<_, _>>(),
    });
    Ok(ctx.emit(&value, || {
        let mut out = String::new();
        let _ = writeln!(out, "state      {state}");
        let _ = writeln!(out, "class      {class}");
        let _ = writeln!(out, "schmidt    {sd}");
        let _ = writeln!(out, "entropy    S1 = {:.9}  S2 = {:.9}  S3 = {:.9}", inv.s1, inv.s2, inv.s3);
        let _ = writeln!(out, "tangle     {:.9}", inv.tangle);
        for r in &reports {
            let failing = r.failing();
            let detail = if failing.is_empty() {
                String::new()
            } else {
                format!("  (failing {})", failing.join(", "))
            };
            let _ = writeln!(out, "{:<10} {}{detail}", r.protocol.label(), r.verdict);
        }
        out
    }))
}

fn schmidt(ctx: &Ctx, state: &PureState) -> Outcome {
    let sd = schmidt_decompose(state)?;
    let class = sd_class_of(&sd);
    let value = json!({ "decomposition": sd, "class": class });
    Ok(ctx.emit(&value, || {
        let mut out = String::new();
        let l = sd.lambda();
        for (i, x) in l.iter().enumerate() {
            let _ = writeln!(out, "λ{i}  {x:.12}");
        }
        let _ = writeln!(out, "φ   {:.12}", sd.phi());
        let _ = writeln!(out, "class from shape  {class}");
        for (k, u) in sd.unitaries().factors().iter().enumerate() {
            let _ = writeln!(out, "U{}  [[{}, {}], [{}, {}]]", k + 1, u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
        }
        out
    }))
}

fn classify(ctx: &Ctx, state: &PureState) -> Outcome {
    let class = classify_slocc(state)?;
    let tangle = three_tangle(state)?;
    let value = json!({ "class": class, "tangle": tangle });
    Ok(ctx.emit(&value, || format!("{class}\n")))
}

fn invariants(ctx: &Ctx, state: &PureState) -> Outcome {
    let inv = lu_invariants(state)?;
    Ok(ctx.emit(&json!(inv), || {
        format!(
            "S1      {:.12}\nS2      {:.12}\nS3      {:.12}\ntangle  {:.12}\n",
            inv.s1, inv.s2, inv.s3, inv.tangle
        )
    }))
}

fn unknown_qubit(ctx: &Ctx, args: &UnknownArgs) -> Result<UnknownQubit, Failure> {
    if let (Some(alpha), Some(beta)) = (args.alpha, args.beta) {
        return Ok(UnknownQubit::new(alpha, beta)?);
    }
    let mut rng = SeedStream::new(ctx.seed).child(1).rng(0);
    let q = random_state(&mut rng, 1)?;
    Ok(UnknownQubit::new(q.amplitude(0), q.amplitude(1))?)
}

fn undefined(ctx: &Ctx, e: Error) -> Failure {
    let message = e.to_string();
    let stdout = if ctx.json {
        json_line(&json!({ "status": "protocol-undefined", "reason": message }))
    } else {
        "status     protocol-undefined\n".to_string()
    };
    Failure {
        code: EXIT_UNDEFINED,
        message,
        stdout: Some(stdout),
    }
}

fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn teleport(ctx: &Ctx, kind: SimKind, state: &PureState, args: &UnknownArgs, trials: usize) -> Outcome {
    let unknown = unknown_qubit(ctx, args)?;
    let result = match kind {
        SimKind::Teleport => simulate_ptp(state, &unknown),
        SimKind::Bennett => simulate_bennett(state, &unknown),
        SimKind::Nielsen => simulate_nielsen_circuit(state, &unknown),
        SimKind::Sdc => unreachable!("dense coding is dispatched separately"),
    };
    let outcomes = match result {
        Ok(o) => o,
        Err(e @ Error::ProtocolUndefined(_)) => return Err(undefined(ctx, e)),
        Err(e) => return Err(e.into()),
    };
    let mut counts = vec![0usize; outcomes.len()];
    if trials > 0 {
        let mut rng = SeedStream::new(ctx.seed).child(2).rng(0);
        for _ in 0..trials {
            counts[sample_outcome(&outcomes, &mut rng)] += 1;
        }
    }
    let mut value = json!({
        "status": "ok",
        "unknown": { "alpha": [unknown.alpha.re, unknown.alpha.im], "beta": [unknown.beta.re, unknown.beta.im] },
        "outcomes": outcomes,
    });
    if trials > 0 {
        value["samples"] = json!({ "trials": trials, "counts": counts });
    }
    Ok(ctx.emit(&value, || {
        let mut out = String::new();
        let _ = writeln!(out, "unknown    α = {:.6}  β = {:.6}", unknown.alpha, unknown.beta);
        let _ = writeln!(out, "{:<8} {:>12} {:>14}", "outcome", "probability", "fidelity");
        for TeleportOutcome {
            outcome,
            probability,
            fidelity,
        } in &outcomes
        {
            let f = fidelity.map_or_else(|| "-".to_string(), |f| format!("{f:.12}"));
            let _ = writeln!(out, "{outcome:<8} {probability:>12.9} {f:>14}");
        }
        if trials > 0 {
            let _ = writeln!(out, "sampled    {trials} runs: {counts:?}");
        }
        out
    }))
}

fn sdc(ctx: &Ctx, state: &PureState, bits: Option<usize>, message: Option<&str>) -> Outcome {
    let messages: Vec<String> = match (message, bits) {
        (Some(m), Some(b)) if m.len() != b => {
            return Err(Error::Argument(format!("message '{m}' does not have {b} bits")).into());
        }
        (Some(m), _) => vec![m.to_string()],
        (None, b) => {
            let b = b.unwrap_or(2);
            if !(b == 2 || b == 3) {
                return Err(Error::Argument(format!("dense coding carries 2 or 3 bits, not {b}")).into());
            }
            (0..1usize << b).map(|m| format!("{m:0b$b}")).collect()
        }
    };
    let mut rows = Vec::with_capacity(messages.len());
    for m in &messages {
        let decoded = match simulate_sdc(state, m) {
            Ok(d) => d,
            Err(e @ Error::ProtocolUndefined(_)) => return Err(undefined(ctx, e)),
            Err(e) => return Err(e.into()),
        };
        let probability = sdc_measurement(state, m)?
            .get(usize::from_str_radix(&decoded, 2).expect("binary"))
            .copied()
            .unwrap_or(0.0);
        rows.push((m.clone(), decoded, probability));
    }
    let value = json!({
        "status": "ok",
        "results": rows
            .iter()
            .map(|(m, d, p)| json!({ "message": m, "decoded": d, "probability": p }))
            .collect::<Vec<_>>(),
    });
    Ok(ctx.emit(&value, || {
        let mut out = String::new();
        let _ = writeln!(out, "{:<8} {:<8} {:>12}", "sent", "decoded", "probability");
        for (m, d, p) in &rows {
            let _ = writeln!(out, "{m:<8} {d:<8} {p:>12.9}");
        }
        out
    }))
}

fn lu_test(ctx: &Ctx, state: &PureState, protocol: Protocol, trials: usize) -> Outcome {
    let config = LuTrialConfig::new(protocol, trials, ctx.seed)?;
    let report = lu_invariance_trial(state, &config)?;
    Ok(ctx.emit(&json!(report), || {
        format!(
            "protocol   {protocol}\nagree      {}/{}\nwitnesses  {}\n",
            report.agree,
            report.trials,
            report.witnesses.len()
        )
    }))
}

fn lu_witness(ctx: &Ctx) -> Outcome {
    let (ghz, c, lu) = psdc3_counterexample();
    let before = ctx.report(Protocol::PSDC3, &ghz)?;
    let after = ctx.report(Protocol::PSDC3, &c)?;
    let value = json!({
        "state": ghz,
        "unitary": lu,
        "image": c,
        "before": report_json(&before),
        "after": report_json(&after),
    });
    Ok(ctx.emit(&value, || {
        let mut out = String::new();
        let _ = writeln!(out, "state      {ghz}");
        let _ = writeln!(out, "unitary    H ⊗ I ⊗ I");
        let _ = writeln!(out, "image      {c}");
        let _ = writeln!(out, "PSDC3 on state  {}", before.verdict);
        let _ = writeln!(out, "PSDC3 on image  {}  (failing {})", after.verdict, after.failing().join(", "));
        out
    }))
}

struct Row {
    name: String,
    cells: Vec<(String, bool)>,
}

/// One cell: the live value, flagged when a stored expectation disagrees.
fn cell(live: Option<bool>, expected: Option<bool>) -> (String, bool) {
    match live {
        None => ("·".into(), true),
        Some(v) => {
            let ok = expected.is_none_or(|e| e == v);
            (format!("{}{}", mark(v), if ok { "" } else { "!" }), ok)
        }
    }
}

fn matrix_row(ctx: &Ctx, entry: &CatalogEntry) -> qresource::Result<Row> {
    let s = &entry.state;
    let n = s.n_qubits();
    let verdict = |p: Protocol| -> qresource::Result<Option<bool>> {
        match p.qubits() {
            Some(q) if q != n => Ok(None),
            _ => Ok(Some(ctx.report(p, s)?.verdict)),
        }
    };
    let ptp = if n == 3 { Protocol::PTP } else { Protocol::PTP_N };
    let ptp_live = if n >= 3 { verdict(ptp)? } else { None };
    let mut cells = vec![
        cell(ptp_live, entry.expected_verdict(ptp)),
        cell(verdict(Protocol::PSDC2)?, entry.expected_verdict(Protocol::PSDC2)),
        cell(verdict(Protocol::PSDC3)?, entry.expected_verdict(Protocol::PSDC3)),
        cell(verdict(Protocol::BENNETT)?, entry.expected_verdict(Protocol::BENNETT)),
    ];
    if n == 3 {
        let ln2 = std::f64::consts::LN_2;
        let e1 = (qubit_entropy(s, 1)? - ln2).abs() < 1e-9;
        let e3 = (qubit_entropy(s, 3)? - ln2).abs() < 1e-9;
        // the entropy columns must agree with the verdicts they characterize
        let e3_criterion = entropy_criterion_with_tolerance(s, Protocol::PTP, ctx.tolerance)?;
        let e1_criterion = entropy_criterion_with_tolerance(s, Protocol::PSDC2, ctx.tolerance)?;
        cells.push(cell(Some(e1), Some(e1_criterion)));
        cells.push(cell(Some(e3), Some(e3_criterion)));
        let class = classify_slocc(s)?;
        let ok = entry.expected_class().is_none_or(|c| c == class);
        cells.push((format!("{class}{}", if ok { "" } else { "!" }), ok));
    } else {
        cells.extend([("·".into(), true), ("·".into(), true), ("·".into(), true)]);
    }
    Ok(Row {
        name: entry.name.clone(),
        cells,
    })
}

fn matrix(ctx: &Ctx) -> Outcome {
    const HEAD: [&str; 7] = ["PTP", "PSDC2", "PSDC3", "BENNETT", "S1=ln2", "S3=ln2", "class"];
    let rows = catalog::catalog()
        .iter()
        .map(|e| matrix_row(ctx, e))
        .collect::<qresource::Result<Vec<_>>>()?;
    let mismatches: usize = rows.iter().map(|r| r.cells.iter().filter(|c| !c.1).count()).sum();
    let value = json!({
        "columns": HEAD,
        "rows": rows
            .iter()
            .map(|r| json!({ "name": r.name, "cells": r.cells.iter().map(|c| &c.0).collect::<Vec<_>>() }))
            .collect::<Vec<_>>(),
        "mismatches": mismatches,
    });
    let text = ctx.emit(&value, || {
        let mut out = String::new();
        let _ = write!(out, "{:<16}", "state");
        for h in HEAD {
            let _ = write!(out, " {h:<8}");
        }
        out.push('\n');
        for r in &rows {
            let _ = write!(out, "{:<16}", r.name);
            for (c, _) in &r.cells {
                let _ = write!(out, " {c:<8}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "mismatches: {mismatches}");
        out
    });
    if mismatches > 0 {
        return Err(Failure {
            code: EXIT_INTERNAL,
            message: format!("{mismatches} cells disagree with the stored expectations"),
            stdout: Some(text),
        });
    }
    Ok(text)
}

fn catalog_cmd(ctx: &Ctx, name: Option<&str>, export: bool, write: Option<&Path>) -> Outcome {
    if let Some(path) = write {
        fs::write(path, catalog::catalog_json()).with_context(|| format!("writing {}", path.display()))?;
        return Ok(format!("wrote {}\n", path.display()));
    }
    if export {
        return Ok(catalog::catalog_json());
    }
    if let Some(name) = name {
        let entry = catalog::lookup(name)?;
        let outcomes = entry.verify()?;
        let value = json!({ "entry": entry, "checks": outcomes });
        return Ok(ctx.emit(&value, || {
            let mut out = String::new();
            let _ = writeln!(out, "{}  {}", entry.name, entry.description);
            for (k, v) in &entry.parameters {
                let _ = writeln!(out, "  {k} = {v}");
            }
            let _ = writeln!(out, "  {}", entry.state);
            for (e, o) in entry.expected.iter().zip(&outcomes) {
                let _ = writeln!(out, "  {} {:<28} {}", mark(o.ok), o.expected, e.claim);
            }
            out
        }));
    }
    let entries = catalog::catalog();
    let value = json!(entries
        .iter()
        .map(|e| json!({ "name": e.name, "description": e.description }))
        .collect::<Vec<_>>());
    Ok(ctx.emit(&value, || {
        let mut out = String::new();
        for e in &entries {
            let _ = writeln!(out, "{:<16} {}", e.name, e.description);
        }
        out
    }))
}
