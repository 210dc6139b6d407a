//! Exact φ-Newton polygons and irreducibility certificates for Schur-type
//! integer polynomials
//!
//! `f(x) = a_n φ(x)^n/(n+1)! + Σ_{j<n} a_j(x) φ(x)^j/(j+1)!`.
//!
//! All arithmetic is exact: integers are arbitrary precision and every slope
//! comparison is done on reduced fractions.

pub mod certifier;
pub mod cli;
pub mod modp;
pub mod oracle;
pub mod poly;
pub mod polygon;
pub mod primes;
pub mod valuation;


pub use poly::{parse_poly, IntPoly, PhiExpansion};
pub use polygon::{build_polygon, NewtonPolygon};
pub use certifier::{certify, certify_with, Certificate, CertifyOptions, SchurInput, Verdict};
