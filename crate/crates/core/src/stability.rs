//! Harder–Narasimhan and socle filtrations, and stability verdicts.
//!
//! For a direct sum of parabolic line bundles the HN filtration is read off
//! by grouping summands by parabolic degree. Paired bundles are tested
//! against summand-aligned isotropic subsets; strict stability is reported
//! as three-valued because isotropic line subbundles that are not aligned
//! with the summands are not enumerated.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::bundle::{DecomposableBundle, ParabolicLineBundle};
use crate::calculus::{dual_bundle, tensor_bundle};
use crate::error::Error;
use crate::pairing::{IsotropicSubset, PairedBundle, PairingKind};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct HnGroup {
    pub slope: Rational,
    pub indices: Vec<usize>,
}

/// Slope-sorted summand groups; `V^i` is spanned by the first `i` groups.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct HnFiltration {
    pub groups: Vec<HnGroup>,
}

impl HnFiltration {
    pub fn is_semistable(&self) -> bool {
        self.groups.len() == 1
    }

    pub fn top(&self) -> &HnGroup {
        &self.groups[0]
    }
}

impl fmt::Display for HnFiltration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.groups.iter().enumerate() {
            let idx: Vec<String> = g.indices.iter().map(usize::to_string).collect();
            writeln!(f, "group {}: slope {} summands {{{}}}", i + 1, g.slope, idx.join(","))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stable {
    Yes,
    No,
    Undetermined,
}

impl fmt::Display for Stable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stable::Yes => "yes",
            Stable::No => "no",
            Stable::Undetermined => "undetermined",
        })
    }
}

/// Invariant: `stable == Yes` implies `polystable` implies `semistable`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct StabilityVerdict {
    pub semistable: bool,
    pub polystable: bool,
    pub stable: Stable,
}

impl fmt::Display for StabilityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "semistable: {}, polystable: {}, stable: {}",
            self.semistable, self.polystable, self.stable
        )
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    /// A set of summands.
    Aligned,
    /// The line `{(s, i·s)}` inside two isomorphic self-paired summands.
    Diagonal,
}

/// An isotropic subbundle whose slope is at least the slope of the bundle.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub subset: IsotropicSubset,
    pub slope: Rational,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PairedClassification {
    pub verdict: StabilityVerdict,
    /// Semistability of the underlying parabolic bundle (all slopes equal).
    pub underlying_semistable: bool,
    pub witness: Option<Witness>,
}

pub fn hn_filtration(e: &DecomposableBundle) -> HnFiltration {
    let mut by_slope: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
    for (k, s) in e.summands().iter().enumerate() {
        by_slope.entry(s.par_deg()).or_default().push(k);
    }
    HnFiltration {
        groups: by_slope
            .into_iter()
            .rev()
            .map(|(slope, indices)| HnGroup { slope, indices })
            .collect(),
    }
}

/// Checks that the HN filtration of `E* ⊗ L` is the reversed dual of the
/// HN filtration of `E`: group `i` of `E` reappears as group `m + 1 - i`
/// with slope `par-deg(L) - μ_i`.
pub fn hn_dual_check(e: &DecomposableBundle, l: &ParabolicLineBundle) -> Result<bool, Error> {
    let l_bundle = DecomposableBundle::line(e.curve().clone(), l.clone())?;
    let twisted = tensor_bundle(&dual_bundle(e), &l_bundle)?;
    let ours = hn_filtration(e).groups;
    let theirs = hn_filtration(&twisted).groups;
    if ours.len() != theirs.len() {
        return Ok(false);
    }
    let l_deg = l.par_deg();
    Ok(ours.iter().zip(theirs.iter().rev()).all(|(g, h)| {
        g.indices == h.indices && h.slope == &l_deg - &g.slope
    }))
}

/// Socle filtration of a semistable bundle, as lists of summand indices.
///
/// A semistable direct sum of lines is already polystable, so the socle is
/// everything and the filtration has a single step.
pub fn socle_filtration(e: &DecomposableBundle) -> Result<Vec<Vec<usize>>, Error> {
    let hn = hn_filtration(e);
    if !hn.is_semistable() {
        return Err(Error::NotSemistable);
    }
    let socle = hn.groups.into_iter().next().expect("nonempty bundle").indices;
    debug_assert_eq!(socle.len(), e.rank());
    Ok(vec![socle])
}

pub fn classify_bundle(e: &DecomposableBundle) -> StabilityVerdict {
    let semistable = hn_filtration(e).is_semistable();
    StabilityVerdict {
        semistable,
        polystable: semistable,
        stable: if e.rank() == 1 { Stable::Yes } else { Stable::No },
    }
}

/// Classifies a valid paired bundle.
///
/// Semistability is decided over aligned isotropic subsets and reported
/// next to the underlying slope test; the two always agree for valid input.
pub fn classify_paired(p: &PairedBundle) -> Result<PairedClassification, Error> {
    let report = p.validate();
    if let Some(v) = report.violations.first() {
        return Err(Error::InvalidPairing(v.to_string()));
    }
    let mu = p.bundle().par_slope();
    let underlying_semistable = hn_filtration(p.bundle()).is_semistable();

    // Slopes are compared as `sum_S / |S|` against each other and against
    // `total / r` by cross-multiplying integer numerators over a common
    // denominator.
    let scaled = scaled_par_degrees(p.bundle());
    let total: BigInt = scaled.iter().sum();
    let rank = BigInt::from(p.rank());
    let mut best: Option<(IsotropicSubset, BigInt, BigInt)> = None;
    for subset in p.isotropic_subsets()? {
        let sum: BigInt = subset.indices.iter().map(|&k| &scaled[k]).sum();
        let size = BigInt::from(subset.indices.len());
        if best.as_ref().is_none_or(|(_, s, n)| &sum * n > s * &size) {
            best = Some((subset, sum, size));
        }
    }
    let semistable = best.as_ref().is_none_or(|(_, s, n)| s * &rank <= &total * n);

    let mut witness = best
        .filter(|(_, s, n)| s * &rank >= &total * n)
        .map(|(subset, _, _)| Witness {
            kind: WitnessKind::Aligned,
            slope: p.subset_slope(&subset.indices),
            subset,
        });
    if witness.is_none() {
        witness = diagonal_witness(p).filter(|w| w.slope >= mu);
    }

    let stable = if p.rank() == 1 && p.kind() == PairingKind::Orthogonal {
        Stable::Yes
    } else if witness.is_some() {
        Stable::No
    } else {
        Stable::Undetermined
    };
    Ok(PairedClassification {
        verdict: StabilityVerdict {
            semistable,
            polystable: semistable,
            stable,
        },
        underlying_semistable,
        witness,
    })
}

/// Parabolic degrees of the summands times the lcm of their denominators.
fn scaled_par_degrees(e: &DecomposableBundle) -> Vec<BigInt> {
    let degrees: Vec<Rational> = e.summands().iter().map(ParabolicLineBundle::par_deg).collect();
    let common = degrees.iter().fold(BigInt::one(), |acc, d| acc.lcm(&d.denom()));
    degrees
        .iter()
        .map(|d| d.numer() * (&common / d.denom()))
        .collect()
}

fn diagonal_witness(p: &PairedBundle) -> Option<Witness> {
    let fixed = p.hyperbolic_pieces().self_paired;
    for (n, &a) in fixed.iter().enumerate() {
        for &b in &fixed[n + 1..] {
            if p.bundle().summand(a) == p.bundle().summand(b) {
                return Some(Witness {
                    kind: WitnessKind::Diagonal,
                    subset: IsotropicSubset { indices: vec![a, b] },
                    slope: p.bundle().summand(a).par_deg(),
                });
            }
        }
    }
    None
}
