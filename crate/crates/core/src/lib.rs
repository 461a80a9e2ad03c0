pub mod approx;
pub mod error;
pub mod matcore;
mod optim;
pub mod orthkit;
pub mod range;
pub mod sample;
pub mod settings;
pub mod states;
pub mod triangle;

pub use error::{Error, Result};
pub use matcore::{c64, Matrix, C64};
pub use settings::{Settings, Verdict};
