//! Matrix realizations of noncommutative embedded surfaces: the fuzzy sphere
//! and the noncommutative torus, with projected connections, curvature and
//! closed traces, plus a classical Poisson-geometric reference.

pub mod algebra;
pub mod calculus;
pub mod classical;
pub mod error;
pub mod report;
pub mod sphere;
pub mod suite;
pub mod torus;

pub use algebra::{AlgebraElement, ToleranceSpec};
pub use calculus::{ConnectionKind, CurvatureTensor, ModuleOperator, ModuleVector, NCGeometry};
pub use classical::{DerivativeMode, Surface};
pub use error::{Error, Result};
pub use report::{Anchor, CheckResult, ParamValue, SuiteReport};
pub use sphere::FuzzySphere;
pub use suite::SuiteOptions;
pub use torus::NCTorus;
