//! Orthogonal and symplectic structures in standard matching form.
//!
//! A pairing `φ: E ⊗ E → L` on `E = ⊕ M_k` is recorded by an involution `σ`
//! of the summand indices: `φ` pairs `M_k` with `M_σ(k)` and nothing else.
//! `φ̃: E → L ⊗ E*` is then an isomorphism exactly when every
//! `M_σ(k) ≅ M_k* ⊗ L` as parabolic line bundles.

use std::fmt;

use serde::Serialize;

use crate::bundle::{DecomposableBundle, ParabolicLineBundle};
use crate::calculus::{dual, tensor};
use crate::error::Error;
use crate::rational::Rational;

/// Default cap on the rank accepted by [`PairedBundle::isotropic_subsets`].
pub const ENUMERATION_BOUND: usize = 20;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairingKind {
    Orthogonal,
    Symplectic,
}

impl fmt::Display for PairingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairingKind::Orthogonal => "orthogonal",
            PairingKind::Symplectic => "symplectic",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairedBundle {
    bundle: DecomposableBundle,
    value_line: ParabolicLineBundle,
    kind: PairingKind,
    matching: Vec<usize>,
}

/// One way a [`PairedBundle`] can fail to encode a nondegenerate pairing.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    /// `σ(σ(k)) != k`.
    NotInvolution { index: usize },
    /// An alternating form cannot pair a line with itself.
    SymplecticFixedPoint { index: usize },
    /// `M_σ(k)` differs from `M_k* ⊗ L`.
    Mismatch {
        index: usize,
        expected: String,
        found: String,
    },
    /// `r · par-deg(L) != 2 · par-deg(E)`.
    DegreeIdentity { lhs: Rational, rhs: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotInvolution { index } => {
                write!(f, "matching is not an involution at {index}")
            }
            Violation::SymplecticFixedPoint { index } => {
                write!(f, "symplectic matching has fixed point {index}")
            }
            Violation::Mismatch {
                index,
                expected,
                found,
            } => write!(
                f,
                "summand paired with {index} is ({found}), expected ({expected})"
            ),
            Violation::DegreeIdentity { lhs, rhs } => {
                write!(f, "r*par-deg(L) = {lhs} but 2*par-deg(E) = {rhs}")
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A set of summand indices on which the pairing vanishes. Indices are sorted.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct IsotropicSubset {
    pub indices: Vec<usize>,
}

impl fmt::Display for IsotropicSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, k) in self.indices.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str("}")
    }
}

/// The orbits of `σ`: 2-cycles `(k, σ(k))` with `k < σ(k)`, then fixed points.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct HyperbolicPieces {
    pub pairs: Vec<(usize, usize)>,
    pub self_paired: Vec<usize>,
}

impl PairedBundle {
    /// Checks shape only. Whether the data really describes a nondegenerate
    /// pairing is left to [`PairedBundle::validate`].
    pub fn new(
        bundle: DecomposableBundle,
        value_line: ParabolicLineBundle,
        kind: PairingKind,
        matching: Vec<usize>,
    ) -> Result<Self, Error> {
        let rank = bundle.rank();
        if value_line.points() != bundle.curve().len() {
            return Err(Error::WeightCount {
                expected: bundle.curve().len(),
                found: value_line.points(),
            });
        }
        if matching.len() != rank {
            return Err(Error::MatchingLength {
                expected: rank,
                found: matching.len(),
            });
        }
        if let Some(&index) = matching.iter().find(|&&j| j >= rank) {
            return Err(Error::IndexOutOfRange { index, rank });
        }
        if kind == PairingKind::Symplectic && rank % 2 == 1 {
            return Err(Error::SymplecticOddRank(rank));
        }
        Ok(PairedBundle {
            bundle,
            value_line,
            kind,
            matching,
        })
    }

    /// Builds the matching from a list of 2-cycles; the rest are fixed points.
    pub fn from_pairs(
        bundle: DecomposableBundle,
        value_line: ParabolicLineBundle,
        kind: PairingKind,
        pairs: &[(usize, usize)],
    ) -> Result<Self, Error> {
        let rank = bundle.rank();
        let mut matching: Vec<usize> = (0..rank).collect();
        let mut seen = vec![false; rank];
        for &(a, b) in pairs {
            for index in [a, b] {
                if index >= rank {
                    return Err(Error::IndexOutOfRange { index, rank });
                }
            }
            if seen[a] || seen[b] {
                return Err(Error::NotInvolution(if seen[a] { a } else { b }));
            }
            seen[a] = true;
            seen[b] = true;
            matching[a] = b;
            matching[b] = a;
        }
        Self::new(bundle, value_line, kind, matching)
    }

    pub fn bundle(&self) -> &DecomposableBundle {
        &self.bundle
    }

    pub fn value_line(&self) -> &ParabolicLineBundle {
        &self.value_line
    }

    pub fn kind(&self) -> PairingKind {
        self.kind
    }

    pub fn matching(&self) -> &[usize] {
        &self.matching
    }

    pub fn partner(&self, k: usize) -> usize {
        self.matching[k]
    }

    pub fn rank(&self) -> usize {
        self.bundle.rank()
    }

    /// The line `M_k* ⊗ L` that must sit opposite `M_k`.
    pub fn expected_partner(&self, k: usize) -> ParabolicLineBundle {
        tensor(&dual(self.bundle.summand(k)), &self.value_line).expect("shapes checked at construction")
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (k, &j) in self.matching.iter().enumerate() {
            if self.matching[j] != k {
                violations.push(Violation::NotInvolution { index: k });
            }
            if self.kind == PairingKind::Symplectic && j == k {
                violations.push(Violation::SymplecticFixedPoint { index: k });
            }
            let expected = self.expected_partner(k);
            let found = self.bundle.summand(j);
            if &expected != found {
                violations.push(Violation::Mismatch {
                    index: k,
                    expected: expected.to_string(),
                    found: found.to_string(),
                });
            }
        }
        let lhs = &Rational::from(self.rank() as i64) * &self.value_line.par_deg();
        let rhs = &Rational::from(2) * &self.bundle.par_deg();
        if lhs != rhs {
            violations.push(Violation::DegreeIdentity { lhs, rhs });
        }
        ValidationReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    pub fn is_isotropic(&self, indices: &[usize]) -> Result<bool, Error> {
        let rank = self.rank();
        let mut member = vec![false; rank];
        for &index in indices {
            if index >= rank {
                return Err(Error::IndexOutOfRange { index, rank });
            }
            member[index] = true;
        }
        Ok(indices.iter().all(|&k| !member[self.matching[k]]))
    }

    fn require_involution(&self) -> Result<(), Error> {
        match (0..self.rank()).find(|&k| self.matching[self.matching[k]] != k) {
            Some(k) => Err(Error::NotInvolution(k)),
            None => Ok(()),
        }
    }

    pub fn hyperbolic_pieces(&self) -> HyperbolicPieces {
        let mut pairs = Vec::new();
        let mut self_paired = Vec::new();
        for (k, &j) in self.matching.iter().enumerate() {
            if j == k {
                self_paired.push(k);
            } else if k < j {
                pairs.push((k, j));
            }
        }
        HyperbolicPieces { pairs, self_paired }
    }

    pub fn isotropic_subsets(&self) -> Result<Vec<IsotropicSubset>, Error> {
        self.isotropic_subsets_bounded(ENUMERATION_BOUND)
    }

    /// All nonempty summand-aligned isotropic subsets, ordered by the bitmask
    /// `Σ 2^k` of their indices.
    ///
    /// Each 2-cycle contributes nothing, its left leg or its right leg;
    /// fixed points never appear.
    pub fn isotropic_subsets_bounded(&self, bound: usize) -> Result<Vec<IsotropicSubset>, Error> {
        let rank = self.rank();
        let bound = bound.min(63);
        if rank > bound {
            return Err(Error::RankAboveBound { rank, bound });
        }
        self.require_involution()?;
        let pairs = self.hyperbolic_pieces().pairs;
        let mut masks: Vec<u64> = vec![0];
        for &(a, b) in &pairs {
            masks = masks
                .into_iter()
                .flat_map(|m| [m, m | 1 << a, m | 1 << b])
                .collect();
        }
        masks.retain(|&m| m != 0);
        masks.sort_unstable();
        Ok(masks
            .into_iter()
            .map(|m| IsotropicSubset {
                indices: (0..rank).filter(|k| m >> k & 1 == 1).collect(),
            })
            .collect())
    }

    /// Rank of the adjoint bundle: `dim SO(r)` or `dim Sp(r)`.
    pub fn adjoint_rank(&self) -> Result<usize, Error> {
        let r = self.rank();
        match self.kind {
            PairingKind::Orthogonal => Ok(r * (r - 1) / 2),
            PairingKind::Symplectic if r % 2 == 1 => Err(Error::SymplecticOddRank(r)),
            PairingKind::Symplectic => Ok(r * (r + 1) / 2),
        }
    }

    /// `par-deg` of the sub-bundle spanned by `indices` divided by its rank.
    pub fn subset_slope(&self, indices: &[usize]) -> Rational {
        let total: Rational = indices.iter().map(|&k| self.bundle.summand(k).par_deg()).sum();
        &total / &Rational::from(indices.len() as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, MarkedCurve};

    fn line(d: i64, w: &[Rational]) -> ParabolicLineBundle {
        ParabolicLineBundle::new(d, w.to_vec()).unwrap()
    }

    fn z() -> Rational {
        Rational::zero()
    }

    fn hyperbolic(kind: PairingKind) -> PairedBundle {
        let e = DecomposableBundle::new(
            MarkedCurve::with_points(3).unwrap(),
            vec![line(1, &[q(1, 4), z(), z()]), line(-2, &[q(3, 4), z(), z()])],
        )
        .unwrap();
        PairedBundle::new(e, ParabolicLineBundle::trivial(3), kind, vec![1, 0]).unwrap()
    }

    #[test]
    fn validate_examples() {
        let p = hyperbolic(PairingKind::Symplectic);
        assert!(p.is_valid(), "{:?}", p.validate());
        assert_eq!(p.value_line().par_deg(), z());
        assert_eq!(p.bundle().par_deg(), z());

        let fixed = PairedBundle::new(
            p.bundle().clone(),
            ParabolicLineBundle::trivial(3),
            PairingKind::Symplectic,
            vec![0, 1],
        )
        .unwrap();
        let report = fixed.validate();
        assert!(report
            .violations
            .contains(&Violation::SymplecticFixedPoint { index: 0 }));
        assert!(report
            .violations
            .contains(&Violation::SymplecticFixedPoint { index: 1 }));

        let b = line(0, &[q(2, 3), q(2, 3), z()]);
        let l = line(2, &[q(1, 3), q(1, 3), z()]);
        let selfp = PairedBundle::new(
            DecomposableBundle::line(MarkedCurve::with_points(3).unwrap(), b).unwrap(),
            l,
            PairingKind::Orthogonal,
            vec![0],
        )
        .unwrap();
        assert!(selfp.is_valid());
        assert_eq!(
            &Rational::from(1) * &selfp.value_line().par_deg(),
            &Rational::from(2) * &selfp.bundle().par_deg()
        );
        assert_eq!(selfp.value_line().par_deg(), q(8, 3));
    }

    #[test]
    fn validate_reports_mismatch_and_broken_involution() {
        let p = hyperbolic(PairingKind::Orthogonal);
        let wrong_l = PairedBundle::new(
            p.bundle().clone(),
            line(1, &[z(), z(), z()]),
            PairingKind::Orthogonal,
            vec![1, 0],
        )
        .unwrap();
        let report = wrong_l.validate();
        assert!(matches!(report.violations[0], Violation::Mismatch { index: 0, .. }));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DegreeIdentity { .. })));

        let e = DecomposableBundle::new(
            MarkedCurve::with_points(1).unwrap(),
            vec![ParabolicLineBundle::trivial(1); 3],
        )
        .unwrap();
        let cyc = PairedBundle::new(e, ParabolicLineBundle::trivial(1), PairingKind::Orthogonal, vec![1, 2, 0])
            .unwrap();
        assert!(cyc
            .validate()
            .violations
            .contains(&Violation::NotInvolution { index: 0 }));
        assert_eq!(cyc.isotropic_subsets(), Err(Error::NotInvolution(0)));
    }

    #[test]
    fn construction_errors() {
        let p = hyperbolic(PairingKind::Orthogonal);
        let e = p.bundle().clone();
        let o = ParabolicLineBundle::trivial(3);
        assert_eq!(
            PairedBundle::new(e.clone(), o.clone(), PairingKind::Orthogonal, vec![0]),
            Err(Error::MatchingLength { expected: 2, found: 1 })
        );
        assert_eq!(
            PairedBundle::new(e.clone(), o.clone(), PairingKind::Orthogonal, vec![0, 5]),
            Err(Error::IndexOutOfRange { index: 5, rank: 2 })
        );
        let odd = DecomposableBundle::line(MarkedCurve::with_points(3).unwrap(), o.clone()).unwrap();
        assert_eq!(
            PairedBundle::new(odd, o.clone(), PairingKind::Symplectic, vec![0]),
            Err(Error::SymplecticOddRank(1))
        );
        assert_eq!(
            PairedBundle::from_pairs(e, o, PairingKind::Orthogonal, &[(0, 1), (1, 0)]),
            Err(Error::NotInvolution(1))
        );
    }

    #[test]
    fn isotropy_examples() {
        let p = hyperbolic(PairingKind::Symplectic);
        assert_eq!(p.is_isotropic(&[0]), Ok(true));
        assert_eq!(p.is_isotropic(&[0, 1]), Ok(false));
        assert_eq!(
            p.is_isotropic(&[2]),
            Err(Error::IndexOutOfRange { index: 2, rank: 2 })
        );
        let c = MarkedCurve::with_points(1).unwrap();
        let one = PairedBundle::new(
            DecomposableBundle::line(c, ParabolicLineBundle::trivial(1)).unwrap(),
            ParabolicLineBundle::trivial(1),
            PairingKind::Orthogonal,
            vec![0],
        )
        .unwrap();
        assert_eq!(one.is_isotropic(&[0]), Ok(false));
        assert!(one.isotropic_subsets().unwrap().is_empty());
    }

    #[test]
    fn isotropic_subset_examples() {
        let p = hyperbolic(PairingKind::Symplectic);
        let subsets: Vec<Vec<usize>> = p
            .isotropic_subsets()
            .unwrap()
            .into_iter()
            .map(|s| s.indices)
            .collect();
        assert_eq!(subsets, vec![vec![0], vec![1]]);

        let c = MarkedCurve::with_points(1).unwrap();
        let e = DecomposableBundle::new(c, vec![ParabolicLineBundle::trivial(1); 4]).unwrap();
        let two = PairedBundle::from_pairs(
            e,
            ParabolicLineBundle::trivial(1),
            PairingKind::Symplectic,
            &[(0, 1), (2, 3)],
        )
        .unwrap();
        assert_eq!(two.isotropic_subsets().unwrap().len(), 8);
        assert_eq!(
            two.isotropic_subsets_bounded(3),
            Err(Error::RankAboveBound { rank: 4, bound: 3 })
        );
    }

    #[test]
    fn hyperbolic_piece_examples() {
        let p = hyperbolic(PairingKind::Symplectic);
        assert_eq!(
            p.hyperbolic_pieces(),
            HyperbolicPieces { pairs: vec![(0, 1)], self_paired: vec![] }
        );
        let c = MarkedCurve::with_points(1).unwrap();
        let o = ParabolicLineBundle::trivial(1);
        let diag = PairedBundle::new(
            DecomposableBundle::new(c.clone(), vec![o.clone(); 2]).unwrap(),
            o.clone(),
            PairingKind::Orthogonal,
            vec![0, 1],
        )
        .unwrap();
        assert_eq!(
            diag.hyperbolic_pieces(),
            HyperbolicPieces { pairs: vec![], self_paired: vec![0, 1] }
        );
        let mixed = PairedBundle::new(
            DecomposableBundle::new(c, vec![o.clone(); 3]).unwrap(),
            o,
            PairingKind::Orthogonal,
            vec![2, 1, 0],
        )
        .unwrap();
        assert_eq!(
            mixed.hyperbolic_pieces(),
            HyperbolicPieces { pairs: vec![(0, 2)], self_paired: vec![1] }
        );
    }

    #[test]
    fn adjoint_rank_examples() {
        assert_eq!(hyperbolic(PairingKind::Symplectic).adjoint_rank(), Ok(3));
        assert_eq!(hyperbolic(PairingKind::Orthogonal).adjoint_rank(), Ok(1));
        let c = MarkedCurve::with_points(1).unwrap();
        let o = ParabolicLineBundle::trivial(1);
        let one = PairedBundle::new(
            DecomposableBundle::line(c, o.clone()).unwrap(),
            o,
            PairingKind::Orthogonal,
            vec![0],
        )
        .unwrap();
        assert_eq!(one.adjoint_rank(), Ok(0));
    }
}
