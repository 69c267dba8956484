//! Exact machinery for degree-6 algebras with orthogonal involution built
//! from a 3-fold Pfister form `<<a,b,c>>`: field backends, quadratic-form
//! deciders, quaternion symbols and a certifier that emits replayable
//! certificates for non-trivial classes in `G+(A,s)/H(A,s)`.

pub mod certifier;
pub mod error;
pub mod fields;
pub mod involution;
pub mod oracle;
pub mod quadform;
pub mod quaternion;
pub mod trace;

pub use error::{Error, Result};
pub use fields::{Element, Field, FieldDescriptor, SquareClass, ValuationRef, Value};
pub use trace::{NodeKind, ProofTrace, TriState, Witness};
