//! Design, simulation and search for milligram-scale jumping robots that
//! store energy in a planar spring, wind it with a voice-coil-driven double
//! ratchet, and launch when a magnet pair snaps apart.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod actuator;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod optimize;
pub mod param;
pub mod ratchet;
pub mod spring;

pub use error::{Error, Result};
pub use model::{
    ActuatorSpec, BodySpec, CoilSpec, DriveKind, DriveSource, MassItem, MaterialSpec, RatchetSpec,
    ReleaseSpec, RobotDesign, SpringSpec, Violation,
};
