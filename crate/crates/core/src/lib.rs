//! Point-module parametrization data for finitely presented graded algebras
//! and skew PBW extensions over a field.
//!
//! The pipeline: a presentation of a quadratic (or higher-degree) graded
//! algebra is multilinearized into slotted commutative polynomials; the
//! truncated point schemes X_m cut out by those polynomials in products of
//! projective spaces are enumerated exhaustively over small prime fields; the
//! projections dropping the last coordinate are tested for bijectivity to
//! locate an empirical stabilization degree. For multiparameter quantum
//! affine space the degree-2 data is made explicit: the slotted relation
//! matrices F and G, the variety E cut out by the maximal minors of F, and
//! the mutually inverse successor maps sigma and theta on E obtained from
//! one-dimensional kernels. Skew PBW extensions reduce to that case through
//! their associated graded algebra.
//!
//! Module layout:
//!
//! * [`scalar`] — exact field arithmetic over Q and F_p.
//! * [`ncpoly`] — free-algebra polynomials, words, and presentations.
//! * [`cpoly`] — slotted commutative polynomials, matrices, minors, kernels.
//! * [`parse`] — text formats for presentations and extension files.
//! * [`pointscheme`] — truncated point schemes, projections, stabilization.
//! * [`quantumaffine`] — F, G, the variety E, successor maps, orbits.
//! * [`skewpbw`] — skew PBW extensions, associated graded data, catalog.

pub mod cpoly;
pub mod ncpoly;
pub mod parse;
pub mod pointscheme;
pub mod quantumaffine;
pub mod scalar;
pub mod skewpbw;

pub use cpoly::{CPoly, CpolyError, Minor, Monomial, PolyMatrix, ScalarMat, SlotVar};
pub use ncpoly::{parse_presentation, NcPoly, Presentation, Word};
pub use parse::ParseError;
pub use pointscheme::{
    build_truncated_system, check_phi_bijective, enumerate_points, find_stabilization,
    multilinearize, projective_points, FiberWitness, PhiReport, ProjPoint, SchemeError,
    SchemePoint, StabilizationReport, TruncatedSystem,
};
pub use quantumaffine::{
    sigma_permutation_report, QaError, QuantumAffineParams, SigmaReport, SuccessorMaps, VarietyE,
    MAX_VARS,
};
pub use scalar::{FieldSpec, Scalar, ScalarError};
pub use skewpbw::{
    analyze_extension, builtin_catalog, catalog_entry, parse_extension, AnalysisReport,
    CatalogEntry, SkewPbwError, SkewPbwPresentation,
};
