//! Exact structure constants of torus-equivariant K-theory.
//!
//! The crate covers Bott towers, Bott-Samelson varieties and Kac-Moody flag
//! varieties. Flag-variety constants are expressed in the Kostant-Kumar basis
//! and computed by a recursive operator on Bott-Samelson words; an independent
//! Demazure-operator oracle is provided for cross-checking.

pub mod error;
pub mod root_weyl;
pub mod char_ring;
pub mod bott_tower;
pub mod rule_engine;
pub mod flag_kt;
pub mod kk_oracle;

pub use bott_tower::{BitWord, FixedPointClass, Generator, TowerSpec};
pub use char_ring::{CharPoly, Lattice};
pub use flag_kt::{QTable, WordSpec};
pub use kk_oracle::{DualityReport, PsiTable, WeylFunction};
pub use error::{Error, Result};
pub use root_weyl::{CartanMatrix, RootVec, Side, WeylElt};
pub use rule_engine::{LMonomials, RulePoly};
