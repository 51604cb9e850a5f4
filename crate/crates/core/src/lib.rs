//! Exact computations on exterior order-q subplanes of PG(2,q^3), their
//! splashes and covers, through the Bruck-Bose representation in PG(6,q).
//!
//! Layers, bottom up: [`gfq`] (the field tower), [`projgeom`] (projective
//! spaces over any tower level), [`bruckbose`] (the regular 2-spread and
//! the coordinate dictionary), [`splash`], [`curves`] and [`verify`].

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bitset;
pub mod bruckbose;
pub mod curves;
pub mod error;
pub mod gfq;
pub mod linalg;
pub mod poly;
pub mod projgeom;
pub mod splash;
pub mod verify;

pub use error::{FieldError, GeomError};
pub use gfq::{Elem, Field, FieldSpec, FieldTower, Level};
