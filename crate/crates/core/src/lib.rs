//! Exact computations with orthogonal and symplectic parabolic bundles on
//! the projective line, restricted to bundles that split as direct sums of
//! parabolic line bundles.
//!
//! * [`rational`]: exact scalars and marked curves
//! * [`bundle`]: parabolic line bundles, direct sums, degrees, filtrations
//! * [`calculus`]: dual, tensor product, Hom
//! * [`pairing`]: orthogonal/symplectic structures in matching form
//! * [`stability`]: Harder–Narasimhan filtrations and stability verdicts
//! * [`connection`]: residue ledgers and the existence criterion for
//!   algebraic connections
//! * [`document`] and [`report`]: the text format and reports used by the CLI

pub mod bundle;
pub mod calculus;
pub mod connection;
pub mod document;
pub mod error;
pub mod pairing;
pub mod rational;
pub mod report;
pub mod stability;

pub use bundle::{DecomposableBundle, FlagDescription, FlagStep, ParabolicLineBundle};
pub use error::Error;
pub use pairing::{PairedBundle, PairingKind};
pub use rational::{frac_shift, q, MarkedCurve, Rational};
