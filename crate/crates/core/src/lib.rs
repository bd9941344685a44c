//! Exact computation with foliated affine and projective structures on
//! singular holomorphic foliations by curves.

pub mod algebra;
pub mod chern;
pub mod foliation;
pub mod geodesic;
pub mod indices;
pub mod localan;
pub mod symfun;
