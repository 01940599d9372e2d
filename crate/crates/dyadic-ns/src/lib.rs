//! Numerical operators on a periodic spectral grid: Littlewood-Paley
//! analysis, Besov and Chemin-Lerner norms, Bony paraproducts, heat and
//! Oseen operators, and a Picard fixed-point solver for mild solutions of
//! the incompressible Navier-Stokes equations — plus a verification harness
//! that measures every inequality the library's analysis relies on.
//!
//! Everything lives on the torus `[0, 2π)^d` (d = 2 or 3) with integer
//! frequencies, an FFT-exact calculus, and 2× zero-padded products so that
//! quadratic nonlinearities of band-limited fields are alias-free.
//!
//! The `examples/` directory demonstrates each capability as a runnable
//! program; the `dyadic-ns` binary exposes the verification suites, a
//! trajectory solver and a norm calculator.

pub mod calculus;
pub mod cutoff;
pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod harness;
pub mod heat_oseen;
pub mod io;
pub mod littlewood_paley;
pub mod norms;
pub mod paraproduct;
pub mod random;
pub mod solver;
pub mod timegrid;

pub use error::{Error, Result};
pub use field::SpectralField;
pub use grid::{make_grid, Grid};
pub use timegrid::{TimeGrid, TimeSeriesField};
