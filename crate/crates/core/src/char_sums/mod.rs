//! Finite fields, Gauss and Jacobi sums, root-of-unity sums, point counts and
//! zeta polynomials of explicit curve towers.

pub mod characters;
pub mod coleman;
pub mod curves;
pub mod field;
pub mod sums;
pub mod tower;

pub use characters::{AddChar, MultChar};
pub use coleman::{coleman_gauss_check, coleman_jacobi_check, GaussDescent, GaussVerdict, JacobiDescent};
pub use curves::{
    artin_schreier_point_count, fermat_point_count, hyperelliptic_point_count, zeta_from_counts,
    PointCount,
};
pub use field::{FieldView, Fq, FIELD_GUARD};
pub use sums::{gauss_sum, jacobi_sum, primitive_char_sum, s_rho_n};
pub use tower::{f_poly, h_level, stabilization_check, Family, HLevel, Stabilization};
