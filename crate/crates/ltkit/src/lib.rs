//! Exact arithmetic for the Lubin-Tate tower: period maps, Newton polygons,
//! Hecke steps on polygons, Bruhat-Tits cells and ramified Witt vectors.

pub mod error;
pub mod valcore;
pub mod series;
pub mod periods;

pub use error::{Error, Result};
pub mod polygon;
pub mod hecke;
pub mod building;
pub mod cells;
pub mod wittlab;
pub mod cli;
