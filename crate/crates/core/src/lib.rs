//! Lp Steiner coefficients of convex bodies: exact combinatorics, body
//! models, adaptive quadrature, coefficient evaluation and verification.

pub mod bodies;
pub mod combinatorics;
pub mod error;
pub mod quadrature;
pub mod steiner;
pub mod verify;

pub use bodies::{parse_body, Body, BodySpec};
pub use error::{Error, Result};
pub use quadrature::{Accuracy, IntegralEstimate};
pub use steiner::{CoeffResult, Exponents, FunctionalId, Note, PValue, SeriesResult, Truncation};
