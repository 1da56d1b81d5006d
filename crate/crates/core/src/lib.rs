//! Exact-arithmetic toolkit for plane curve singularities: truncated power
//! series, branch parametrizations and value semigroups, differential forms,
//! standard bases of the module of forms along a curve, bases of the module
//! of logarithmic forms, and analytic invariants.

pub mod curve;
pub mod forms;
pub mod invariants;
pub mod saito;
pub mod series;
pub mod stdbasis;

pub use curve::{Branch, CurveError, DioSolution, RingBasis, Semigroup};
pub use forms::{CofactorResult, FormError, OneForm};
pub use invariants::{InvError, InvariantReport, TauRoutes};
pub use saito::{Candidate, CandidateSet, ClosedForm, SaitoBasis, SaitoError, SyzygyRow};
pub use stdbasis::{SBElement, SBError, SBResult, SProcessRecord};
pub use series::{BiSeries, Rat, SeriesError, TSeries, Var};
