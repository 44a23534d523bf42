//! Exact computations with bicomplexes, modules over the zigzag algebra and
//! tricomplexes.
//!
//! The crate is layered. [`field`], [`matrix`], [`sparse`] and [`graded`]
//! provide exact linear algebra over `Q` and `F_p`; [`module`] treats every
//! object as a graded space with a list of operators. On top of that sit
//! [`bicomplex`] (decomposition into indecomposables and spectral sequence
//! pages), [`zigzag`] (projective modules, complexes up to homotopy and the
//! braid generators) and [`tricomplex`] (the stable category of trigraded
//! modules over the exterior algebra on three generators and its braid
//! group action). [`random`] holds seeded generators for property tests.

pub mod bicomplex;
pub mod error;
pub mod field;
pub mod graded;
pub mod matrix;
pub mod module;
pub mod random;
pub mod sparse;
pub mod tricomplex;
pub mod zigzag;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use graded::{Deg, GradedMap, GradedSpace};
pub use matrix::Matrix;
pub use module::GradedModule;
