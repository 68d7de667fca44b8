//! Interpolation matrices, weak combinatorics and existence certificates for
//! hypersurfaces with a general fat point.

pub mod atlas;
pub mod certificate;
pub mod error;
pub mod field;
pub mod incidence;
pub mod interpolation;
pub mod linalg;
pub mod locus;
pub mod monomial;
pub mod points;
pub mod poly;
pub mod primes;

pub use atlas::{ConfigurationRecord, Metadata, Source, Validator};
pub use certificate::{Certificate, CertificateKind, Combinatorics, Format, LineBound, Verdict};
pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals, Scalar, DEFAULT_PRIME};
pub use incidence::{Hyperplane, IncidenceSource, IncidenceStructure, WeakTable};
pub use interpolation::{SystemDims, UnexpectednessReport, ZeroTestReport, ZeroVerdict};
pub use linalg::Matrix;
pub use locus::{LocusExpander, DEFAULT_BUDGET};
pub use monomial::{Exponents, MonomialBasis};
pub use points::{Chart, PointConfiguration, PointSet};
pub use poly::{Poly, PolyRecord};
