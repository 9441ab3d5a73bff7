//! Cyclic algebras of degree `p` over characteristic-`p` function fields.
//!
//! The crate is layered bottom-up:
//!
//! * [`ff`], [`upoly`], [`poly`], [`ratfunc`]: exact arithmetic in `F_q`,
//!   `F_q[x]` and `F_q(t_1, ..., t_m)`.
//! * [`tower`]: extension towers (Artin–Schreier, p-th root and simple
//!   algebraic steps), norms, minimal polynomials and norm-equation search.
//! * [`symbol`], [`certificate`]: symbols `[a, b)`, Brauer expressions,
//!   rewrite relations and replayable equivalence certificates.
//! * [`invariants`]: local invariants on the univariate backend `F_q(t)`,
//!   used as an independent oracle.
//! * [`frobenius`]: Frobenius pushforward, Albert decompositions and the
//!   reduction to a cyclic step.
//! * [`bounds`], [`drivers`], [`experiment`]: the bound calculator, the
//!   constructive drivers and a seeded experiment harness.

pub mod bounds;
pub mod certificate;
pub mod display;
pub mod drivers;
pub mod error;
pub mod experiment;
pub mod ff;
pub mod frobenius;
pub mod invariants;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod scenario;
pub mod symbol;
pub mod tower;
pub mod upoly;

pub use error::{Error, Result};
