//! Isogeometric thermal buckling of laminated composite plates with
//! level-set cutouts and curvilinear stiffeners.
//!
//! The pipeline is:
//!
//! 1. [`geometry`]: a NURBS patch describes the plate and its solution space.
//! 2. [`laminate`]: ply data is integrated through the thickness into the
//!    FSDT constitutive matrix and unit thermal resultants.
//! 3. [`levelset`]: signed-distance shapes classify elements as material,
//!    void or cut, and supply the enrichment function.
//! 4. [`cut_quadrature`]: cut elements are triangulated so integration only
//!    covers material.
//! 5. [`plate`] and [`stiffener`]: element kernels for stiffness, geometric
//!    stiffness and thermal load.
//! 6. [`solver`]: assembly, boundary conditions, the prestress solve and the
//!    buckling eigenproblem.
//! 7. [`driver`]: JSON model files, analysis orchestration, sweeps, CSV and
//!    VTK output.

pub mod cut_quadrature;
pub mod driver;
pub mod error;
pub mod geometry;
pub mod laminate;
pub mod levelset;
pub mod plate;
pub mod solver;
pub mod stiffener;

pub use error::{Error, Result};
