//! Casimir energies and forces between real metals described by a surface
//! impedance, at zero and at finite temperature.
//!
//! Lengths are in metres, temperatures in kelvin, energies per unit area in
//! J/m², pressures in Pa and sphere–plate forces in N. Integrals are carried
//! out in the reduced variables `xi = 2 a zeta / c` and `y = 2 a q`.

pub mod constants;
pub mod error;
pub mod finite_t;
pub mod impedance;
pub mod quad;
pub mod series;
pub mod zero_t;

pub use constants::{Geometry, Material, PhysicalConstants, ThermalState};
pub use error::{Error, Result};
pub use impedance::{Formalism, ImpedanceKind, ImpedanceModel, ReducedModel, ReflectionFactors};
pub use quad::{QuadratureConfig, QuadratureResult};
pub use zero_t::{
    Casimir, Decomposition, Deviation, Observable, ObservableKind, Quantity, Warning,
};
