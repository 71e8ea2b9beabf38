//! Line-oriented text format for bundle descriptions.
//!
//! ```text
//! # comments and blank lines are ignored
//! curve: x0 x1 xinf
//! line L: deg 0 weights 0 0 0
//! summand: deg 1 weights 1/4 0 0
//! summand: deg -2 weights 3/4 0 0
//! pairing: symplectic match 0-1
//! ```
//!
//! `curve:` and at least one `summand:` are required. `line L:` is the value
//! line of the pairing and is required when `pairing:` is present. A pairing
//! lists 2-cycles `a-b` and explicit fixed points `k-k`. Under an orthogonal
//! pairing an unlisted summand is taken as self-paired only if `M ⊗ M = L`.

use std::fmt;

use crate::bundle::{DecomposableBundle, ParabolicLineBundle};
use crate::calculus::tensor;
use crate::error::Error;
use crate::pairing::{PairedBundle, PairingKind};
use crate::rational::{MarkedCurve, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairingSpec {
    pub kind: PairingKind,
    /// Full involution on summand indices.
    pub matching: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InputDocument {
    pub curve: MarkedCurve,
    pub value_line: Option<ParabolicLineBundle>,
    pub summands: Vec<ParabolicLineBundle>,
    pub pairing: Option<PairingSpec>,
}

/// A parse failure at a 1-based line number; line 0 means the whole document.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

/// A `pairing:` line: its line number, kind and explicit `a-b` entries.
type RawPairing = (usize, PairingKind, Vec<(usize, usize)>);

#[derive(Default)]
struct Raw {
    curve: Option<(usize, Vec<String>)>,
    value_line: Option<(usize, ParabolicLineBundle)>,
    summands: Vec<(usize, ParabolicLineBundle)>,
    pairing: Option<RawPairing>,
}

fn parse_line_bundle(rest: &str) -> Result<ParabolicLineBundle, String> {
    let mut tokens = rest.split_whitespace();
    if tokens.next() != Some("deg") {
        return Err("expected `deg <integer> weights ...`".into());
    }
    let degree = tokens
        .next()
        .ok_or("missing degree")?
        .parse::<num_bigint::BigInt>()
        .map_err(|_| "degree must be an integer".to_string())?;
    if tokens.next() != Some("weights") {
        return Err("expected `weights` after the degree".into());
    }
    let weights = tokens
        .map(|t| t.parse::<Rational>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    ParabolicLineBundle::new(degree, weights).map_err(|e| e.to_string())
}

fn parse_pairing(rest: &str) -> Result<(PairingKind, Vec<(usize, usize)>), String> {
    let mut tokens = rest.split_whitespace();
    let kind = match tokens.next() {
        Some("orthogonal") => PairingKind::Orthogonal,
        Some("symplectic") => PairingKind::Symplectic,
        Some(other) => return Err(format!("unknown pairing kind {other:?}")),
        None => return Err("missing pairing kind".into()),
    };
    let mut pairs = Vec::new();
    match tokens.next() {
        None => {}
        Some("match") => {
            for t in tokens {
                let (a, b) = t
                    .split_once('-')
                    .ok_or_else(|| format!("bad matching entry {t:?}, expected a-b"))?;
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| format!("bad matching entry {t:?}, expected a-b"))
                };
                pairs.push((parse(a)?, parse(b)?));
            }
        }
        Some(other) => return Err(format!("expected `match`, found {other:?}")),
    }
    Ok((kind, pairs))
}

fn resolve_matching(
    kind: PairingKind,
    pairs: &[(usize, usize)],
    summands: &[ParabolicLineBundle],
    value_line: &ParabolicLineBundle,
) -> Result<Vec<usize>, String> {
    let rank = summands.len();
    let mut matching: Vec<Option<usize>> = vec![None; rank];
    for &(a, b) in pairs {
        for index in [a, b] {
            if index >= rank {
                return Err(format!("matching index {index} out of range for rank {rank}"));
            }
        }
        if matching[a].is_some() || matching[b].is_some() {
            let k = if matching[a].is_some() { a } else { b };
            return Err(format!("bad matching: index {k} appears twice"));
        }
        if a == b && kind == PairingKind::Symplectic {
            return Err(format!("symplectic matching has fixed point {a}"));
        }
        matching[a] = Some(b);
        matching[b] = Some(a);
    }
    matching
        .into_iter()
        .enumerate()
        .map(|(k, m)| match (m, kind) {
            (Some(j), _) => Ok(j),
            (None, PairingKind::Symplectic) => {
                Err(format!("symplectic matching has fixed point {k}"))
            }
            (None, PairingKind::Orthogonal) => {
                let square = tensor(&summands[k], &summands[k]).map_err(|e| e.to_string())?;
                if &square == value_line {
                    Ok(k)
                } else {
                    Err(format!(
                        "summand {k} is unmatched and cannot pair with itself: its square is ({square}), not L"
                    ))
                }
            }
        })
        .collect()
}

fn pe(line: usize, message: String) -> ParseError {
    ParseError { line, message }
}

pub fn parse(text: &str) -> Result<InputDocument, Vec<ParseError>> {
    let mut raw = Raw::default();
    let mut errors = Vec::new();
    let mut seen_curve = false;
    let mut seen_summand = false;

    for (n, line) in text.lines().enumerate() {
        let lineno = n + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, rest)) = line.split_once(':') else {
            errors.push(pe(lineno, format!("expected `key: value`, found {line:?}")));
            continue;
        };
        match key.trim() {
            "curve" => {
                if std::mem::replace(&mut seen_curve, true) {
                    errors.push(pe(lineno, "duplicate `curve:` section".into()));
                    continue;
                }
                let labels: Vec<String> = rest.split_whitespace().map(String::from).collect();
                match MarkedCurve::new(labels.clone()) {
                    Ok(_) => raw.curve = Some((lineno, labels)),
                    Err(e) => errors.push(pe(lineno, e.to_string())),
                }
            }
            "line L" => {
                if raw.value_line.is_some() {
                    errors.push(pe(lineno, "duplicate `line L:` section".into()));
                    continue;
                }
                match parse_line_bundle(rest) {
                    Ok(b) => raw.value_line = Some((lineno, b)),
                    Err(e) => errors.push(pe(lineno, e)),
                }
            }
            "summand" => {
                seen_summand = true;
                match parse_line_bundle(rest) {
                    Ok(b) => raw.summands.push((lineno, b)),
                    Err(e) => errors.push(pe(lineno, e)),
                }
            }
            "pairing" => {
                if raw.pairing.is_some() {
                    errors.push(pe(lineno, "duplicate `pairing:` section".into()));
                    continue;
                }
                match parse_pairing(rest) {
                    Ok((kind, pairs)) => raw.pairing = Some((lineno, kind, pairs)),
                    Err(e) => errors.push(pe(lineno, e)),
                }
            }
            other => errors.push(pe(lineno, format!("unknown section {other:?}"))),
        }
    }

    let curve = match &raw.curve {
        Some((_, labels)) => MarkedCurve::new(labels.clone()).ok(),
        None if seen_curve => None,
        None => {
            errors.push(pe(0, "missing `curve:` section".into()));
            None
        }
    };
    if !seen_summand {
        errors.push(pe(0, "at least one `summand:` is required".into()));
    }
    if let Some(curve) = &curve {
        let n = curve.len();
        let bundles = raw.value_line.iter().chain(raw.summands.iter());
        for (lineno, b) in bundles {
            if b.points() != n {
                errors.push(pe(*lineno, Error::WeightCount { expected: n, found: b.points() }.to_string()));
            }
        }
    }

    let mut pairing = None;
    if let Some((lineno, kind, pairs)) = &raw.pairing {
        match &raw.value_line {
            None => errors.push(pe(*lineno, "a pairing requires a `line L:` section".into())),
            Some((_, l)) if errors.is_empty() => {
                let summands: Vec<ParabolicLineBundle> =
                    raw.summands.iter().map(|(_, b)| b.clone()).collect();
                match resolve_matching(*kind, pairs, &summands, l) {
                    Ok(matching) => pairing = Some(PairingSpec { kind: *kind, matching }),
                    Err(e) => errors.push(pe(*lineno, e)),
                }
            }
            Some(_) => {}
        }
    }

    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(InputDocument {
        curve: curve.expect("checked above"),
        value_line: raw.value_line.map(|(_, b)| b),
        summands: raw.summands.into_iter().map(|(_, b)| b).collect(),
        pairing,
    })
}

impl InputDocument {
    pub fn from_bundle(bundle: &DecomposableBundle) -> Self {
        InputDocument {
            curve: bundle.curve().clone(),
            value_line: None,
            summands: bundle.summands().to_vec(),
            pairing: None,
        }
    }

    pub fn bundle(&self) -> DecomposableBundle {
        DecomposableBundle::new(self.curve.clone(), self.summands.clone())
            .expect("shape checked at parse time")
    }

    /// `None` when the document has no pairing.
    pub fn paired(&self) -> Option<Result<PairedBundle, Error>> {
        let spec = self.pairing.as_ref()?;
        let l = self.value_line.clone()?;
        Some(PairedBundle::new(self.bundle(), l, spec.kind, spec.matching.clone()))
    }

    /// Canonical text form; [`parse`] reads it back to an equal document.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str("curve:");
        for label in self.curve.labels() {
            out.push(' ');
            out.push_str(label);
        }
        out.push('\n');
        if let Some(l) = &self.value_line {
            out.push_str(&format!("line L: {l}\n"));
        }
        for s in &self.summands {
            out.push_str(&format!("summand: {s}\n"));
        }
        if let Some(p) = &self.pairing {
            out.push_str(&format!("pairing: {}", p.kind));
            let cycles: Vec<String> = p
                .matching
                .iter()
                .enumerate()
                .filter(|&(k, &j)| k <= j)
                .map(|(k, j)| format!("{k}-{j}"))
                .collect();
            if !cycles.is_empty() {
                out.push_str(" match ");
                out.push_str(&cycles.join(" "));
            }
            out.push('\n');
        }
        out
    }
}
