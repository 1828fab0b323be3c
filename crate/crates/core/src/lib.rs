pub mod ensemble;
pub mod error;
pub mod invariants;
pub mod io;
pub mod measures;
pub mod poly;
pub mod qmat;
pub mod xstates;

pub use error::{EnsembleError, MeasureError, StateError, XStateError};
pub use invariants::{DerivedInvariants, InvariantSet};
pub use io::{StateFile, StateFileError};
pub use measures::{NegativityBounds, NegativityMethod, NegativityResult, WitnessValue};
pub use qmat::{BlochForm, DensityMatrix, HermitianMatrix4, MomentSet};
pub use xstates::{CanonicalXSpec, CasePrediction, RankLabel, XStateParams};
