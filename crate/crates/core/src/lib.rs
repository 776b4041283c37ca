pub mod besov;
pub mod error;
pub mod families;
pub mod fft;
pub mod index;
pub mod lab;
pub mod pde;
pub mod signal;
pub mod stft;

pub use error::{Error, Result};
