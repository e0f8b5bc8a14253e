//! Exact computations with etale subalgebras of central simple algebras:
//! types, the generator map and its inverse, ideal systems, Plücker
//! geometry of lines and quadrics, and brute-force counting oracles over
//! small finite fields.

pub mod algebra;
pub mod error;
pub mod etale;
pub mod factor;
pub mod field;
pub mod ideal;
pub mod linalg;
pub mod moduli;
pub mod oracle;
pub mod partition;
pub mod plucker;
pub mod poly;
pub mod serial;

pub use algebra::{Algebra, AlgebraKind, Element};
pub use error::{Error, ErrorClass, Result};
pub use etale::{is_etale_subalgebra, EtaleSubalgebra};
pub use field::{Field, Scalar};
pub use ideal::RightIdeal;
pub use linalg::{Matrix, Subspace};
pub use moduli::{IdealSystem, PsiConfig};
pub use oracle::EnumerationReport;
pub use partition::Partition;
pub use plucker::{PairKind, PluckerPoint, PointPairOnQuadric, QuadraticSpace};
pub use poly::Poly;
