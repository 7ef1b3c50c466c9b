//! Computational toolkit for partition regularity of integer linear systems.

pub mod cli;
pub mod cst;
pub mod deuber;
pub mod dynsets;
pub mod error;
pub mod exactq;
pub mod ipcore;
pub mod rado;
pub mod window;

pub use error::{Error, Result};
pub use window::SetWindow;
