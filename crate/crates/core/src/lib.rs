//! Exact computation in countable models of Presburger arithmetic.
//!
//! The crate is organised bottom-up:
//!
//! * [`residues`]: profinite residue sequences and the CRT set codec.
//! * [`orders`]: computable linear orders used as Archimedean skeletons.
//! * [`models`]: `Z`, `Z[r̂]`, `V_L`, `P_L`, `V_S`, cut closures and products.
//! * [`arch`]: Archimedean classes, dependence equations, cuts, automorphisms
//!   and the finite-basis isomorphism builder.
//! * [`logic`]: formulas, Cooper quantifier elimination, evaluation in models,
//!   and the order-to-group formula translations.
//! * [`bfgames`]: back-and-forth relations on finite linear orders.

pub mod arch;
pub mod arith;
pub mod bfgames;
pub mod error;
pub mod logic;
pub mod models;
pub mod orders;
pub mod residues;

pub use error::{Error, Result};
pub use models::{Element, Model};
pub use orders::Order;
pub use residues::ResidueSequence;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/residues.md")]
    mod residues {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/logic.md")]
    mod logic {}
    #[doc = include_str!("../../../book/src/arch.md")]
    mod arch {}
    #[doc = include_str!("../../../book/src/starred.md")]
    mod starred {}
    #[doc = include_str!("../../../book/src/games.md")]
    mod games {}
}
