//! Generalized minimum poset weights of linear codes over small finite
//! fields, the duality between a code's weight hierarchy and its dual's,
//! and poset weight distributions of MDS and Near-MDS poset codes.
//!
//! Everything is generic over [`Field`]. The aliases at the crate root fix
//! the field to [`FieldSpec`], the runtime GF(q) used for file input, or to
//! the bit-level [`Gf2`].

pub mod code;
pub mod distribution;
pub mod error;
pub mod field;
pub mod hierarchy;
pub mod matrix;
pub mod matroid;
pub mod poset;
pub mod selftest;
mod subspace;

pub use code::{Codeword, LinearCode, ShortenedCode};
pub use distribution::{
    classify, count_exact_support, distribution, hamming_nmds_closed_form, mds_closed_form, nmds_closed_form,
    ClassReport, CodeClass, CountMethod, DistMethod, DistributionReport, IdealCount,
};
pub use error::{Error, Result};
pub use field::{Field, FieldElem, FieldSpec, Gf2};
pub use hierarchy::{
    d_r_oracle, d_r_theorem2, duality_partition, full_hierarchy, DualityPartition, Method, WeightHierarchy,
};
pub use matrix::Matrix;
pub use matroid::{RankKind, RankProfile};
pub use poset::{Ideal, Poset};

/// Subset of `[n]`, bit `i` for element `i+1`.
pub type Mask = u32;

/// A code over a runtime-chosen GF(q).
pub type Code = LinearCode<FieldSpec>;
pub type BinaryCode = LinearCode<Gf2>;
pub type GfMatrix = Matrix<FieldSpec>;
pub type BinaryMatrix = Matrix<Gf2>;
pub type Profile<'a> = RankProfile<'a, FieldSpec>;

#[inline]
pub fn popcount(set: Mask) -> usize {
    set.count_ones() as usize
}
