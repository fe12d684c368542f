//! Exact wall-and-chamber computations on Picard-rank-one index-2 Fano
//! threefolds of degree `d = H^3` in 1..=5.
//!
//! Everything downstream of a degree choice is exact rational arithmetic:
//! Chern characters are `(a0, a1, a2, a3)` coefficient vectors against powers
//! of the ample generator `H`, charges and walls are computed over `Q`, and
//! floats appear only when the SVG renderer formats coordinates.
//!
//! Module layout mirrors the dependency order:
//!
//! ```text
//! numclass   rational Chern vectors, Riemann-Roch, Hilbert polynomials
//! weakstab   twisted charges, slopes, the quadratic form, the boundary test
//! walls      numerical walls, the candidate scanner, strip certificates
//! svg        deterministic atlas rendering
//! kulattice  the rank-2 residual lattice, mutations, rotation, Serre
//! specseq    sparse spectral-sequence page bookkeeping
//! expr       the small class-expression language used by callers
//! verify     the compiled-in acceptance checks
//! ```

pub mod expr;
pub mod kulattice;
pub mod numclass;
pub mod rat;
pub mod specseq;
pub mod svg;
pub mod verify;
pub mod walls;
pub mod weakstab;

pub use numclass::{ChernCharacter, FanoContext, HilbertPolynomial};
pub use walls::{CandidateWall, Wall, WallLocus, Window};
pub use weakstab::{ChargeValue, SlopeValue, TiltPoint};
