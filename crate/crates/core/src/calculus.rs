//! Parabolic dual, tensor product and Hom.
//!
//! For line bundles these have closed forms:
//!
//! * `dual(d, α)` has degree `-d - #{i : α_i > 0}` and weight `1 - α_i`
//!   where `α_i > 0`, else `0`.
//! * `(d, α) ⊗ (e, β)` has degree `d + e + Σ floor(α_i + β_i)` and weight
//!   `frac(α_i + β_i)`.
//! * `Hom(a, b) = b ⊗ dual(a)`.
//!
//! The `*_oracle_degree` functions recompute filtration degrees of tensor
//! products and Homs straight from the ℝ-indexed filtrations of the factors,
//! independently of the closed forms.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::bundle::{DecomposableBundle, ParabolicLineBundle};
use crate::error::Error;
use crate::rational::{q, Rational};

pub fn dual(b: &ParabolicLineBundle) -> ParabolicLineBundle {
    let mut degree = -b.degree().clone();
    let weights = b
        .weights()
        .iter()
        .map(|w| {
            if w.is_zero() {
                Rational::zero()
            } else {
                degree -= 1;
                Rational::one() - w
            }
        })
        .collect();
    ParabolicLineBundle::new(degree, weights).expect("dual weights stay in [0,1)")
}

pub fn tensor(a: &ParabolicLineBundle, b: &ParabolicLineBundle) -> Result<ParabolicLineBundle, Error> {
    if a.points() != b.points() {
        return Err(Error::CurveMismatch);
    }
    let mut degree = a.degree() + b.degree();
    let weights = a
        .weights()
        .iter()
        .zip(b.weights())
        .map(|(x, y)| {
            let (frac, carry) = (x + y).frac_shift();
            degree += carry;
            frac
        })
        .collect();
    Ok(ParabolicLineBundle::new(degree, weights).expect("fractional parts lie in [0,1)"))
}

pub fn hom(a: &ParabolicLineBundle, b: &ParabolicLineBundle) -> Result<ParabolicLineBundle, Error> {
    tensor(b, &dual(a))
}

pub fn dual_bundle(e: &DecomposableBundle) -> DecomposableBundle {
    DecomposableBundle::new(e.curve().clone(), e.summands().iter().map(dual).collect())
        .expect("dual preserves shape")
}

/// Summand `(i, j)` of the result sits at index `i * rank(b) + j`.
pub fn tensor_bundle(a: &DecomposableBundle, b: &DecomposableBundle) -> Result<DecomposableBundle, Error> {
    if a.curve() != b.curve() {
        return Err(Error::CurveMismatch);
    }
    let mut summands = Vec::with_capacity(a.rank() * b.rank());
    for x in a.summands() {
        for y in b.summands() {
            summands.push(tensor(x, y)?);
        }
    }
    DecomposableBundle::new(a.curve().clone(), summands)
}

pub fn hom_bundle(a: &DecomposableBundle, b: &DecomposableBundle) -> Result<DecomposableBundle, Error> {
    tensor_bundle(b, &dual_bundle(a))
}

/// Degree of the bundle underlying `End^p(E) = E ⊗ E*`.
pub fn endp_degree(e: &DecomposableBundle) -> BigInt {
    tensor_bundle(e, &dual_bundle(e))
        .expect("same curve")
        .degree()
}

/// Sample points covering every cell of a period-1 step function whose
/// breakpoints are congruent to `breaks` mod 1.
fn period_samples(breaks: impl IntoIterator<Item = Rational>) -> Vec<Rational> {
    let mut marks: Vec<Rational> = breaks.into_iter().map(|r| r.frac()).collect();
    marks.push(Rational::zero());
    marks.push(Rational::one());
    marks.sort();
    marks.dedup();
    let half = q(1, 2);
    let mut samples = marks.clone();
    for pair in marks.windows(2) {
        samples.push(&(&pair[0] + &pair[1]) * &half);
    }
    samples
}

/// Degree of the subsheaf generated by all `V_α ⊗ W_{t-α}`.
///
/// Inside the line bundle `V_0 ⊗ W_0`, a sum of line subsheaves vanishes at
/// each point to the least order among its generators, so the minimum over
/// splits `α` is taken point by point.
pub fn tensor_oracle_degree(
    a: &ParabolicLineBundle,
    b: &ParabolicLineBundle,
    t: &Rational,
) -> Result<BigInt, Error> {
    if a.points() != b.points() {
        return Err(Error::CurveMismatch);
    }
    let mut degree = a.degree() + b.degree();
    for i in 0..a.points() {
        let splits = period_samples([a.weight(i).clone(), t - b.weight(i)]);
        let order = splits
            .iter()
            .map(|alpha| a.vanishing_order(i, alpha) + b.vanishing_order(i, &(t - alpha)))
            .min()
            .expect("nonempty sample set");
        degree -= order;
    }
    Ok(degree)
}

/// Degree of `ℱ_t` for `Hom(V, W)`: the sheaf of homomorphisms
/// `V_0 → W_0` carrying `V_α` into `W_{α+t}` for every `α`.
///
/// A local section of `Hom(V_0, W_0)` qualifies iff its vanishing order at
/// each point is at least `ord W_{α+t} - ord V_α` for all `α`.
pub fn hom_oracle_degree(
    a: &ParabolicLineBundle,
    b: &ParabolicLineBundle,
    t: &Rational,
) -> Result<BigInt, Error> {
    if a.points() != b.points() {
        return Err(Error::CurveMismatch);
    }
    let mut degree = b.degree() - a.degree();
    for i in 0..a.points() {
        let splits = period_samples([a.weight(i).clone(), b.weight(i) - t]);
        let order = splits
            .iter()
            .map(|alpha| b.vanishing_order(i, &(alpha + t)) - a.vanishing_order(i, alpha))
            .max()
            .expect("nonempty sample set");
        degree -= order;
    }
    Ok(degree)
}

/// `true` for `O_X` with the trivial parabolic structure.
pub fn is_trivial(b: &ParabolicLineBundle) -> bool {
    b.degree().is_zero() && b.weights().iter().all(Rational::is_zero)
}
