//! Residue-level model of algebraic connections.
//!
//! An algebraic connection on a parabolic line bundle `(d, λ)` is a
//! logarithmic connection on the underlying line bundle whose residue at
//! each marked point `x_i` is the weight `λ_i`. For any logarithmic
//! connection, `degree + Σ residues = 0`, so one can exist only when the
//! parabolic degree vanishes.
//!
//! Conversely, when `d + Σ λ_i = 0`, write the underlying bundle as
//! `O(Σ_{j ≤ m+d} y_j - Σ_{k ≤ m} z_k)`. Its tautological connection `D₀`
//! has residue `-1` at each `y_j` and `+1` at each `z_k`. A meromorphic
//! 1-form `ω` with residues `λ_i` at `x_i`, `+1` at `y_j` and `-1` at `z_k`
//! exists because those residues add up to zero, and `D₀ + ω` is the
//! required connection. A [`ResidueLedger`] records the residues of `ω`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::bundle::ParabolicLineBundle;
use crate::error::Error;
use crate::pairing::PairedBundle;
use crate::rational::Rational;

/// `degree + Σ residues == 0`.
pub fn ohtsuki_check(degree: &BigInt, residues: &[Rational]) -> bool {
    (Rational::from(degree.clone()) + residues.iter().sum::<Rational>()).is_zero()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AuxiliaryResidue {
    pub label: String,
    pub residue: Rational,
}

/// Residues of the 1-form `ω` building a connection on one line summand.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ResidueLedger {
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub degree: BigInt,
    /// One per marked point, in curve order.
    pub marked: Vec<Rational>,
    /// `y_j` entries (residue `+1`) followed by `z_k` entries (residue `-1`).
    pub auxiliary: Vec<AuxiliaryResidue>,
}

impl ResidueLedger {
    /// Sum of all residues of `ω`; zero for a form that exists.
    pub fn form_residue_sum(&self) -> Rational {
        self.marked.iter().chain(self.auxiliary.iter().map(|a| &a.residue)).sum()
    }

    /// Residues of the tautological connection `D₀` at the auxiliary points.
    pub fn tautological_residues(&self) -> Vec<Rational> {
        self.auxiliary.iter().map(|a| -&a.residue).collect()
    }

    /// Residues of `D₀ + ω` at the marked points followed by the auxiliary
    /// points, where the two poles cancel.
    pub fn connection_residues(&self) -> Vec<Rational> {
        let cancelled = self
            .auxiliary
            .iter()
            .zip(self.tautological_residues())
            .map(|(a, t)| &a.residue + &t);
        self.marked.iter().cloned().chain(cancelled).collect()
    }

    /// The Ohtsuki identity for both `D₀` and `D₀ + ω`.
    pub fn satisfies_ohtsuki(&self) -> bool {
        ohtsuki_check(&self.degree, &self.connection_residues())
            && ohtsuki_check(&self.degree, &self.tautological_residues())
    }
}

pub fn build_residue_ledger(b: &ParabolicLineBundle) -> Result<ResidueLedger, Error> {
    build_residue_ledger_with(b, None)
}

/// Builds the ledger with `m` poles of `ω` of residue `-1`; the default is
/// the least admissible `m = max(0, -degree)`.
pub fn build_residue_ledger_with(
    b: &ParabolicLineBundle,
    aux_m: Option<u64>,
) -> Result<ResidueLedger, Error> {
    let par_deg = b.par_deg();
    if !par_deg.is_zero() {
        return Err(Error::NonzeroParDeg(par_deg));
    }
    let d = b.degree();
    let required = if d.is_negative() {
        (-d).to_u64().expect("degree fits in u64")
    } else {
        0
    };
    let m = aux_m.unwrap_or(required);
    if m < required {
        return Err(Error::AuxiliaryTooSmall { m, required });
    }
    let y_count = (BigInt::from(m) + d).to_u64().expect("nonnegative since m >= -d");
    let mut auxiliary = Vec::with_capacity((y_count + m) as usize);
    for j in 1..=y_count {
        auxiliary.push(AuxiliaryResidue {
            label: format!("y{j}"),
            residue: Rational::one(),
        });
    }
    for k in 1..=m {
        auxiliary.push(AuxiliaryResidue {
            label: format!("z{k}"),
            residue: -Rational::one(),
        });
    }
    let ledger = ResidueLedger {
        degree: d.clone(),
        marked: b.weights().to_vec(),
        auxiliary,
    };
    debug_assert!(ledger.form_residue_sum().is_zero());
    Ok(ledger)
}

/// Outcome of the existence test for an algebraic connection on a paired bundle.
///
/// Invariant: `exists` iff `witnesses` is empty.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CriterionReport {
    pub exists: bool,
    /// `(k, par-deg(M_k))` for each 2-cycle `(k, σ(k))`, `k < σ(k)`, whose
    /// legs have nonzero parabolic degree.
    pub witnesses: Vec<(usize, Rational)>,
    /// One ledger per summand; present iff `exists`.
    pub ledger: Option<Vec<ResidueLedger>>,
}

pub fn connection_exists(p: &PairedBundle) -> Result<CriterionReport, Error> {
    connection_exists_with(p, None)
}

/// A connection compatible with the pairing exists iff every hyperbolic
/// piece `V ⊕ (V* ⊗ L)` has `par-deg(V) = 0`. Fixed points of `σ` satisfy
/// `2 par-deg(M_k) = par-deg(L) = 0` automatically. When it exists, the
/// direct sum of the line connections from [`build_residue_ledger`] is one.
pub fn connection_exists_with(p: &PairedBundle, aux_m: Option<u64>) -> Result<CriterionReport, Error> {
    if let Some(v) = p.validate().violations.first() {
        return Err(Error::InvalidPairing(v.to_string()));
    }
    let l_deg = p.value_line().par_deg();
    if !l_deg.is_zero() {
        return Err(Error::ValueLineDegree(l_deg));
    }
    let witnesses: Vec<(usize, Rational)> = p
        .hyperbolic_pieces()
        .pairs
        .into_iter()
        .map(|(k, _)| (k, p.bundle().summand(k).par_deg()))
        .filter(|(_, deg)| !deg.is_zero())
        .collect();
    let ledger = if witnesses.is_empty() {
        Some(
            p.bundle()
                .summands()
                .iter()
                .map(|s| build_residue_ledger_with(s, aux_m))
                .collect::<Result<Vec<_>, _>>()?,
        )
    } else {
        None
    };
    Ok(CriterionReport {
        exists: witnesses.is_empty(),
        witnesses,
        ledger,
    })
}

/// Residue-level compatibility with the pairing: `φ̃` carries the connection
/// on `M_k` to the one induced on `M_σ(k)* ⊗ L` from `M_σ(k)` and the
/// connection on `L`, whose residues are the weights of `L`.
///
/// The induced residue on the parabolic line bundle `M_σ(k)* ⊗ L` is
/// normalized into `[0,1)`, the range of its weights.
pub fn compatible_residue_check(p: &PairedBundle, ledgers: &[ResidueLedger]) -> Result<bool, Error> {
    let n = p.bundle().curve().len();
    if ledgers.len() != p.rank() || ledgers.iter().any(|l| l.marked.len() != n) {
        return Err(Error::LedgerShape);
    }
    let l = p.value_line();
    Ok((0..p.rank()).all(|k| {
        let partner = &ledgers[p.partner(k)];
        (0..n).all(|i| {
            let induced = (l.weight(i) - &partner.marked[i]).frac();
            ledgers[k].marked[i] == induced
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::DecomposableBundle;
    use crate::calculus::dual;
    use crate::pairing::PairingKind;
    use crate::rational::{q, MarkedCurve};

    fn line(d: i64, w: &[Rational]) -> ParabolicLineBundle {
        ParabolicLineBundle::new(d, w.to_vec()).unwrap()
    }

    fn z() -> Rational {
        Rational::zero()
    }

    fn hyperbolic(a: ParabolicLineBundle, b: ParabolicLineBundle) -> PairedBundle {
        let n = a.points();
        PairedBundle::new(
            DecomposableBundle::new(MarkedCurve::with_points(n).unwrap(), vec![a, b]).unwrap(),
            ParabolicLineBundle::trivial(n),
            PairingKind::Symplectic,
            vec![1, 0],
        )
        .unwrap()
    }

    #[test]
    fn ohtsuki_examples() {
        assert!(ohtsuki_check(&BigInt::from(-1), &[q(1, 2), q(1, 2), z()]));
        assert!(ohtsuki_check(&BigInt::from(0), &[z(), z(), z()]));
        assert!(!ohtsuki_check(&BigInt::from(1), &[q(1, 4), z(), z()]));
    }

    #[test]
    fn ledger_examples() {
        let b = line(-1, &[q(1, 2), q(1, 2), z()]);
        let ledger = build_residue_ledger(&b).unwrap();
        assert_eq!(ledger.marked, vec![q(1, 2), q(1, 2), z()]);
        assert_eq!(
            ledger.auxiliary,
            vec![AuxiliaryResidue { label: "z1".into(), residue: q(-1, 1) }]
        );
        assert!(ledger.form_residue_sum().is_zero());
        assert!(ledger.satisfies_ohtsuki());

        let trivial = build_residue_ledger(&ParabolicLineBundle::trivial(3)).unwrap();
        assert_eq!(trivial.marked, vec![z(), z(), z()]);
        assert!(trivial.auxiliary.is_empty());
        assert!(trivial.form_residue_sum().is_zero());

        assert_eq!(
            build_residue_ledger(&line(1, &[q(1, 4), z(), z()])),
            Err(Error::NonzeroParDeg(q(5, 4)))
        );
    }

    #[test]
    fn larger_auxiliary_divisors() {
        let b = line(-1, &[q(1, 2), q(1, 2), z()]);
        let wide = build_residue_ledger_with(&b, Some(3)).unwrap();
        let labels: Vec<&str> = wide.auxiliary.iter().map(|a| a.label.as_str()).collect();
        assert_eq!(labels, ["y1", "y2", "z1", "z2", "z3"]);
        assert!(wide.form_residue_sum().is_zero());
        assert!(wide.satisfies_ohtsuki());
        assert_eq!(
            build_residue_ledger_with(&b, Some(0)),
            Err(Error::AuxiliaryTooSmall { m: 0, required: 1 })
        );
    }

    #[test]
    fn criterion_examples() {
        let m = line(-1, &[q(1, 2), q(1, 2), z()]);
        assert_eq!(dual(&m), m);
        let p = hyperbolic(m.clone(), m);
        let report = connection_exists(&p).unwrap();
        assert!(report.exists);
        assert!(report.witnesses.is_empty());
        let ledger = report.ledger.unwrap();
        assert_eq!(ledger.len(), 2);
        assert!(compatible_residue_check(&p, &ledger).unwrap());

        let p = hyperbolic(line(1, &[q(1, 4), z(), z()]), line(-2, &[q(3, 4), z(), z()]));
        let report = connection_exists(&p).unwrap();
        assert!(!report.exists);
        assert_eq!(report.witnesses, vec![(0, q(5, 4))]);
        assert_eq!(report.ledger, None);

        let one = PairedBundle::new(
            DecomposableBundle::line(MarkedCurve::with_points(3).unwrap(), line(-1, &[q(1, 2), q(1, 2), z()]))
                .unwrap(),
            ParabolicLineBundle::trivial(3),
            PairingKind::Orthogonal,
            vec![0],
        )
        .unwrap();
        assert!(connection_exists(&one).unwrap().exists);
    }

    #[test]
    fn criterion_errors() {
        let a = line(0, &[q(1, 2), z(), z()]);
        let l = line(1, &[z(), z(), z()]);
        let p = PairedBundle::new(
            DecomposableBundle::new(MarkedCurve::with_points(3).unwrap(), vec![a.clone(), a]).unwrap(),
            l,
            PairingKind::Symplectic,
            vec![1, 0],
        )
        .unwrap();
        assert!(p.is_valid());
        assert_eq!(connection_exists(&p), Err(Error::ValueLineDegree(q(1, 1))));

        let bad = hyperbolic(line(0, &[z(), z(), z()]), line(1, &[z(), z(), z()]));
        assert!(matches!(connection_exists(&bad), Err(Error::InvalidPairing(_))));
    }

    #[test]
    fn compatibility_examples() {
        let m = line(-1, &[q(1, 2), q(1, 2), z()]);
        let p = hyperbolic(m.clone(), m);
        let mut ledger = connection_exists(&p).unwrap().ledger.unwrap();
        ledger[0].marked[0] = &ledger[0].marked[0] + &q(1, 7);
        assert!(!compatible_residue_check(&p, &ledger).unwrap());
        ledger.pop();
        assert_eq!(compatible_residue_check(&p, &ledger), Err(Error::LedgerShape));

        let flat = hyperbolic(line(2, &[z(), z(), z()]), line(-2, &[z(), z(), z()]));
        let report = connection_exists(&flat).unwrap();
        assert!(!report.exists);
        let zero = hyperbolic(ParabolicLineBundle::trivial(3), ParabolicLineBundle::trivial(3));
        let ledger = connection_exists(&zero).unwrap().ledger.unwrap();
        assert!(ledger.iter().all(|l| l.marked.iter().all(Rational::is_zero)));
        assert!(compatible_residue_check(&zero, &ledger).unwrap());
    }

    #[test]
    fn ledgers_differ_only_off_the_marked_points() {
        let m = line(-1, &[q(1, 2), q(1, 2), z()]);
        let p = hyperbolic(m.clone(), m);
        let a = connection_exists_with(&p, None).unwrap().ledger.unwrap();
        let b = connection_exists_with(&p, Some(2)).unwrap().ledger.unwrap();
        assert_ne!(a, b);
        assert!(compatible_residue_check(&p, &b).unwrap());
        for (k, j) in p.hyperbolic_pieces().pairs {
            for i in 0..3 {
                let diff = (&a[k].marked[i] - &b[k].marked[i]) + (&a[j].marked[i] - &b[j].marked[i]);
                assert!(diff.is_zero());
            }
        }
    }
}
