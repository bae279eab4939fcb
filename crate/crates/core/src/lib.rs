//! Plücker spaces of finite affine spaces AG(n, q).
//!
//! The crate builds the line space of AG(n, q) together with its concurrence
//! relation, reconstructs point maps from line maps, and checks the
//! correspondence between collineations and Plücker-space isomorphisms by
//! exhaustive computation.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod gf;
pub mod groups;
pub mod maps;
pub mod pluecker;

pub use error::{Error, Result};
pub use geometry::{LineId, Meet, PointId, Space, SpaceDesc};
pub use gf::{Field, FieldElem};
