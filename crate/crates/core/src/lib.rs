//! Exact computation in the variants `(IS_n, *_α)` of the finite symmetric
//! inverse semigroup, where `β *_α γ = β α γ` for a fixed idempotent `α = id_A`.
//!
//! The crate covers:
//!
//! * [`pinj`]: partial injections of `{1, ..., n}` and their composition;
//! * [`variant`]: the sandwich product, variant idempotents and the variant
//!   isomorphism criterion;
//! * [`isolated`]: closures, isolated and completely isolated subsemigroups;
//! * [`nilpotent`]: strict orders on the doubled carrier, `Mon`, `Λ_S`, and the
//!   maximal nilpotent subsemigroups;
//! * [`iso`]: backtracking (anti-)isomorphism search for small semigroups;
//! * [`verify`] and [`export`]: the verification harness and its output formats.
//!
//! Composition acts left to right throughout: `(βγ)(x) = γ(β(x))`.

pub mod error;
pub mod export;
pub mod iso;
pub mod isolated;
pub mod limits;
pub mod nilpotent;
pub mod pinj;
pub mod variant;
pub mod verify;

pub use error::{Error, Result};
pub use isolated::Subsemigroup;
pub use limits::Limits;
pub use pinj::{ElementSet, PartialInjection};
pub use variant::SandwichContext;
