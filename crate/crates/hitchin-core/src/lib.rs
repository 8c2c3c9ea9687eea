//! Singular fibers of rank-2 irregular Hitchin fibrations on the projective
//! line with two poles: exact closed-form classification, parabolic weight
//! arithmetic and an independent numerical oracle on the spectral pencil.

pub mod batch;
pub mod classifier;
pub mod error;
pub mod exact;
pub mod kodaira;
pub mod numerics;
pub mod oracle;
pub mod polar;
mod splitting;
pub mod strata;
pub mod weights;

pub use classifier::{classify, classify_with_weights, Classification, FiberReport};
pub use error::{Error, NonEllipticReason, Result};
pub use exact::{Exact, Gaussian};
pub use kodaira::{GrothClass, KodairaType};
pub use polar::{validate, CaseTag, DerivedInvariants, PolarData};
pub use weights::ParabolicWeights;
