//! Executable orthogonal categories, AQFT operads, localizations and
//! chain-complex valued field theories over exact rationals.

pub mod aqft;
pub mod bundle;
pub mod cat;
pub mod corpus;
pub mod error;
pub mod homalg;
pub mod linalg;
pub mod localize;
pub mod operad;
pub mod ortho;
pub mod rational;
pub mod report;
pub mod strictify;

pub use error::{Error, Result};
