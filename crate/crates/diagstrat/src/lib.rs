//! Exact-arithmetic engine for cyclotomic (oriented) Brauer diagram
//! categories: morphism bases, normal-order composition, the weakly
//! triangular and weakly cellular structure on truncations, Gram forms,
//! decomposition data, blocks, standard-module characters and the Fock-space
//! coideal action.

pub mod diagram;
pub mod error;
pub mod field;
pub mod linalg;
pub mod params;

pub use error::{Error, Result};
pub use field::FieldElement;
pub use params::{CategoryConfig, Content, Flavor, RawConfig, SharpImage};
