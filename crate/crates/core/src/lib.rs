//! Calculators and optimizers for measuring a lossy optical phase when the
//! resource being rationed is the number of photons lost at the sample.
//!
//! Every strategy is scored by its Fisher information per mean lost photon
//! (`F′`). The crate covers:
//!
//! * [`specfun`]: the principal Lambert W branch and the constants it fixes
//!   for optimal classical multi-pass interrogation.
//! * [`channels`]: lossy-phase composition and photon accounting.
//! * [`analytic`]: closed-form classical and quantum-bound strategies.
//! * [`gaussian`]: phase-squeezed Gaussian probes read out by homodyne.
//! * [`network`]: coherent light in an interferometer that revisits the
//!   sample `h` times with beam-splitter mixing in between.
//! * [`imperfect`]: multi-pass strategies with preparation, round-trip and
//!   measurement losses.

pub mod analytic;
pub mod channels;
mod error;
pub mod gaussian;
pub mod imperfect;
pub mod network;
pub mod optimize;
pub mod specfun;

pub use channels::{LossyPhase, PassCount, Transmissivity};
pub use error::{Error, Result};
