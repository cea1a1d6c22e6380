//! Exact homological algebra: bounded complexes, chain maps, homology,
//! dg-algebras, truncated tensor algebras and Yoneda complexes.

pub mod complex;
pub mod dga;
pub mod free;
pub mod yoneda;

pub use complex::{complex_from_i64, ChainComplex, ChainMap, HomologyBasis};
pub use dga::{AlgRef, Basis, DgAlgebra, DgAlgebraMap, MultTable};
pub use free::{free_dga, free_dga_labeled, free_map, FreeDga};
pub use yoneda::{hom_labels, yoneda_complex, yoneda_post, yoneda_pre};
