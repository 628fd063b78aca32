//! Twisted torus knots: braid words, exact invariants, bridge-spectrum
//! bounds, parametric families and gap certificates.

pub mod braid;
pub mod certificate;
pub mod families;
pub mod invariants;
pub mod oracle;
pub mod poly;
pub mod spectrum;

pub use braid::{ttk_braid, BraidError, BraidWord, Permutation, TtkParams};
pub use certificate::{validate_certificate, GapCertificate, ValidationFailure};
pub use families::{certify_gaps, FamilyError, TwistPair};
pub use invariants::{alexander, InvariantError, InvariantReport};
pub use poly::{LaurentPoly, PolyError};
pub use spectrum::{spectrum_report, BoundReport, SpectrumError};
