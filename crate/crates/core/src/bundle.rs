//! Parabolic line bundles and their direct sums.
//!
//! A decomposable bundle carries its quasi-parabolic flags implicitly: at a
//! marked point the flag step of weight `w` is spanned by the summands whose
//! weight there is at least `w`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::Error;
use crate::rational::{MarkedCurve, Rational};

/// A line bundle of integer degree with one weight in `[0,1)` per marked point.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ParabolicLineBundle {
    degree: BigInt,
    weights: Vec<Rational>,
}

impl ParabolicLineBundle {
    pub fn new(degree: impl Into<BigInt>, weights: Vec<Rational>) -> Result<Self, Error> {
        if let Some(w) = weights.iter().find(|w| !w.is_unit_interval()) {
            return Err(Error::WeightOutOfRange(w.clone()));
        }
        Ok(ParabolicLineBundle {
            degree: degree.into(),
            weights,
        })
    }

    /// `O_X` with no nonzero weight.
    pub fn trivial(points: usize) -> Self {
        ParabolicLineBundle {
            degree: BigInt::zero(),
            weights: vec![Rational::zero(); points],
        }
    }

    pub fn degree(&self) -> &BigInt {
        &self.degree
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, point: usize) -> &Rational {
        &self.weights[point]
    }

    pub fn points(&self) -> usize {
        self.weights.len()
    }

    pub fn par_deg(&self) -> Rational {
        Rational::from(self.degree.clone()) + self.weights.iter().sum::<Rational>()
    }

    /// Order of vanishing at `point` of the sheaf `E_s` inside `E`.
    ///
    /// `E_s = E^{(s-[s])}(-[s]S)`, and the local factor `E^{i,f}` equals `E`
    /// for `f <= α_i` and `E(-x_i)` for `f > α_i`.
    pub fn vanishing_order(&self, point: usize, s: &Rational) -> BigInt {
        let (frac, floor) = s.frac_shift();
        if frac > self.weights[point] {
            floor + 1
        } else {
            floor
        }
    }

    /// Degree of the sheaf `E_t` of the ℝ-indexed filtration.
    pub fn filtration_degree(&self, t: &Rational) -> BigInt {
        let (frac, floor) = t.frac_shift();
        let dropped = self.weights.iter().filter(|w| frac > **w).count();
        &self.degree - BigInt::from(dropped) - floor * BigInt::from(self.weights.len())
    }
}

impl fmt::Display for ParabolicLineBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg {} weights", self.degree)?;
        for w in &self.weights {
            write!(f, " {w}")?;
        }
        Ok(())
    }
}

impl Serialize for ParabolicLineBundle {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("ParabolicLineBundle", 2)?;
        st.serialize_field("degree", &self.degree.to_string())?;
        st.serialize_field("weights", &self.weights)?;
        st.end()
    }
}

/// One step of an induced flag: a weight and `dim F_{i,j}/F_{i,j+1}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FlagStep {
    pub weight: Rational,
    pub multiplicity: usize,
}

/// Induced flags at every marked point, in curve order.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FlagDescription {
    pub points: Vec<Vec<FlagStep>>,
}

/// An ordered direct sum of parabolic line bundles on a common marked curve.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecomposableBundle {
    curve: MarkedCurve,
    summands: Vec<ParabolicLineBundle>,
}

impl DecomposableBundle {
    pub fn new(curve: MarkedCurve, summands: Vec<ParabolicLineBundle>) -> Result<Self, Error> {
        if summands.is_empty() {
            return Err(Error::EmptyBundle);
        }
        if let Some(bad) = summands.iter().find(|s| s.points() != curve.len()) {
            return Err(Error::WeightCount {
                expected: curve.len(),
                found: bad.points(),
            });
        }
        Ok(DecomposableBundle { curve, summands })
    }

    pub fn line(curve: MarkedCurve, line: ParabolicLineBundle) -> Result<Self, Error> {
        Self::new(curve, vec![line])
    }

    pub fn curve(&self) -> &MarkedCurve {
        &self.curve
    }

    pub fn summands(&self) -> &[ParabolicLineBundle] {
        &self.summands
    }

    pub fn summand(&self, k: usize) -> &ParabolicLineBundle {
        &self.summands[k]
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    /// Degree of the underlying vector bundle.
    pub fn degree(&self) -> BigInt {
        self.summands.iter().map(|s| s.degree()).sum()
    }

    pub fn par_deg(&self) -> Rational {
        self.summands.iter().map(ParabolicLineBundle::par_deg).sum()
    }

    pub fn par_slope(&self) -> Rational {
        &self.par_deg() / &Rational::from(self.rank() as i64)
    }

    pub fn filtration_degree(&self, t: &Rational) -> BigInt {
        self.summands.iter().map(|s| s.filtration_degree(t)).sum()
    }

    /// Distinct weights at `point`, descending, with multiplicities.
    pub fn induced_flag(&self, point: &str) -> Result<Vec<FlagStep>, Error> {
        let i = self
            .curve
            .index_of(point)
            .ok_or_else(|| Error::UnknownPoint(point.to_string()))?;
        Ok(self.flag_at(i))
    }

    fn flag_at(&self, i: usize) -> Vec<FlagStep> {
        let mut weights: Vec<&Rational> = self.summands.iter().map(|s| s.weight(i)).collect();
        weights.sort_unstable_by(|a, b| b.cmp(a));
        let mut steps: Vec<FlagStep> = Vec::new();
        for w in weights {
            match steps.last_mut() {
                Some(step) if step.weight == *w => step.multiplicity += 1,
                _ => steps.push(FlagStep {
                    weight: w.clone(),
                    multiplicity: 1,
                }),
            }
        }
        steps
    }

    pub fn flags(&self) -> FlagDescription {
        FlagDescription {
            points: (0..self.curve.len()).map(|i| self.flag_at(i)).collect(),
        }
    }
}
