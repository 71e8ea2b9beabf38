//! Command execution and report rendering for the CLI.
//!
//! Reports contain only exact values: rationals print as `p/q` or as an
//! integer, and nothing depends on time or locale.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::bundle::DecomposableBundle;
use crate::calculus::{dual_bundle, endp_degree, tensor_bundle};
use crate::connection::{compatible_residue_check, connection_exists_with};
use crate::document::InputDocument;
use crate::error::Error;
use crate::pairing::PairedBundle;
use crate::stability::{classify_bundle, classify_paired, hn_filtration, WitnessKind};

pub(crate) fn ser_bigint<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(n)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Command {
    Info,
    Tensor,
    Dual,
    Hn,
    Classify,
    Connect,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct RunOptions {
    /// Machine-readable output: the document format for `info`, `dual` and
    /// `tensor`, JSON for the other commands.
    pub emit: bool,
    pub aux_m: Option<u64>,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn summary(e: &DecomposableBundle) -> String {
    let mut out = String::new();
    for (k, s) in e.summands().iter().enumerate() {
        writeln!(out, "summand {k}: {s} (par-deg {})", s.par_deg()).unwrap();
    }
    out
}

fn require_pairing(doc: &InputDocument) -> Result<PairedBundle, Error> {
    match doc.paired() {
        Some(p) => p,
        None => Err(Error::InvalidPairing("this command requires a `pairing:` section".into())),
    }
}

/// Runs `command` on a parsed document. Errors are domain errors (exit code 2).
pub fn run(command: Command, doc: &InputDocument, opts: RunOptions) -> Result<String, Error> {
    match command {
        Command::Info => Ok(if opts.emit { doc.serialize() } else { info(doc) }),
        Command::Dual => {
            let d = dual_bundle(&doc.bundle());
            Ok(if opts.emit {
                InputDocument::from_bundle(&d).serialize()
            } else {
                summary(&d)
            })
        }
        Command::Tensor => {
            let e = doc.bundle();
            let t = tensor_bundle(&e, &e)?;
            Ok(if opts.emit {
                InputDocument::from_bundle(&t).serialize()
            } else {
                let r = e.rank();
                let mut out = String::new();
                for (k, s) in t.summands().iter().enumerate() {
                    writeln!(out, "summand {k} = {} x {}: {s} (par-deg {})", k / r, k % r, s.par_deg())
                        .unwrap();
                }
                out
            })
        }
        Command::Hn => {
            let hn = hn_filtration(&doc.bundle());
            Ok(if opts.emit { to_json(&hn) } else { hn.to_string() })
        }
        Command::Classify => classify(doc, opts),
        Command::Connect => connect(doc, opts),
    }
}

fn info(doc: &InputDocument) -> String {
    let e = doc.bundle();
    let mut out = String::new();
    writeln!(out, "rank: {}", e.rank()).unwrap();
    writeln!(out, "degree: {}", e.degree()).unwrap();
    writeln!(out, "par-deg: {}", e.par_deg()).unwrap();
    writeln!(out, "slope: {}", e.par_slope()).unwrap();
    out.push_str(&summary(&e));
    for (label, steps) in e.curve().labels().iter().zip(e.flags().points) {
        let steps: Vec<String> = steps
            .iter()
            .map(|s| format!("{} x{}", s.weight, s.multiplicity))
            .collect();
        writeln!(out, "flag {label}: {}", steps.join(", ")).unwrap();
    }
    writeln!(out, "End^p degree: {}", endp_degree(&e)).unwrap();
    if let Some(l) = &doc.value_line {
        writeln!(out, "value line: {l} (par-deg {})", l.par_deg()).unwrap();
    }
    if let Some(p) = doc.paired() {
        match p {
            Ok(p) => {
                writeln!(out, "pairing: {} sigma {:?}", p.kind(), p.matching()).unwrap();
                let report = p.validate();
                writeln!(out, "pairing valid: {}", report.is_valid()).unwrap();
                for v in &report.violations {
                    writeln!(out, "violation: {v}").unwrap();
                }
                match p.adjoint_rank() {
                    Ok(r) => writeln!(out, "adjoint rank: {r}").unwrap(),
                    Err(e) => writeln!(out, "adjoint rank: {e}").unwrap(),
                }
            }
            Err(e) => writeln!(out, "pairing: {e}").unwrap(),
        }
    }
    out
}

fn classify(doc: &InputDocument, opts: RunOptions) -> Result<String, Error> {
    let p = require_pairing(doc)?;
    let c = classify_paired(&p)?;
    if opts.emit {
        return Ok(to_json(&c));
    }
    let mu = p.bundle().par_slope();
    let mut out = c.verdict.to_string();
    if let Some(w) = &c.witness {
        let what = match (w.slope > mu, w.kind) {
            (true, _) => "destabilizing isotropic",
            (false, WitnessKind::Aligned) => "equal-slope isotropic",
            (false, WitnessKind::Diagonal) => "equal-slope diagonal isotropic line in",
        };
        write!(out, "; {what} {}", w.subset).unwrap();
    }
    out.push('\n');
    if let Some(w) = &c.witness {
        writeln!(out, "witness slope: {}", w.slope).unwrap();
    }
    writeln!(out, "bundle slope: {mu}").unwrap();
    writeln!(out, "underlying bundle: {}", classify_bundle(p.bundle())).unwrap();
    writeln!(
        out,
        "slope test agrees: {}",
        c.underlying_semistable == c.verdict.semistable
    )
    .unwrap();
    Ok(out)
}

fn connect(doc: &InputDocument, opts: RunOptions) -> Result<String, Error> {
    let p = require_pairing(doc)?;
    let report = connection_exists_with(&p, opts.aux_m)?;
    if opts.emit {
        return Ok(to_json(&report));
    }
    let mut out = format!("exists: {}", report.exists);
    for (k, deg) in &report.witnesses {
        write!(out, ", witness summand {k} with par-deg {deg}").unwrap();
    }
    out.push('\n');
    if let Some(ledger) = &report.ledger {
        for (k, row) in ledger.iter().enumerate() {
            let marked: Vec<String> = row.marked.iter().map(ToString::to_string).collect();
            let aux: Vec<String> = row
                .auxiliary
                .iter()
                .map(|a| format!("{}={}", a.label, a.residue))
                .collect();
            write!(out, "ledger summand {k}: marked {}", marked.join(" ")).unwrap();
            if !aux.is_empty() {
                write!(out, "; auxiliary {}", aux.join(" ")).unwrap();
            }
            out.push('\n');
        }
        let ohtsuki = ledger.iter().all(|row| row.satisfies_ohtsuki());
        writeln!(out, "ohtsuki: {ohtsuki}").unwrap();
        writeln!(out, "compatible: {}", compatible_residue_check(&p, ledger)?).unwrap();
    }
    Ok(out)
}
