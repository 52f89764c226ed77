pub mod classify;
pub mod cli;
pub mod config;
pub mod error;
pub mod euler;
pub mod families;
pub mod forms;
pub mod intersect;
pub mod pencil;
pub mod plot;
pub mod point;
pub mod report;
pub mod roots;
pub mod scalar;
pub mod verify;

pub use config::Tolerances;
pub use error::Error;
pub use point::ProjPoint;
