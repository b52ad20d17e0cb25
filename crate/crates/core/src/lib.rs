//! Exact arithmetic over GF(p^r), the projective group PGL2(F_q) and an
//! atlas of its finite subgroups up to conjugacy.
//!
//! ```
//! use pgl2_core::{atlas, Pgl2};
//!
//! let g = Pgl2::new(2, 2).unwrap();
//! let classes = atlas::predicted_atlas(&g).unwrap();
//! assert_eq!(classes.len(), 9);
//! ```

pub mod addsub;
pub mod atlas;
pub mod cli;
pub mod construct;
pub mod error;
pub mod gf;
pub mod groups;
pub mod pgl2;

pub use addsub::AdditiveSubgroup;
pub use atlas::{ClassDescriptor, VerificationReport};
pub use error::{Error, Result};
pub use gf::{Field, FieldElement};
pub use groups::{ClassLabel, Family, Subgroup};
pub use pgl2::{DetClass, Pgl2, ProjMatrix, ProjPoint};
