//! Exact arithmetic for linear q-difference modules: curvatures at
//! cyclotomic places, curvature-based triviality scans, diagonal generic
//! Galois groups as integer relation lattices, the deformation bridge to
//! differential modules, and certified theta-based numeric solutions.

pub mod curvature;
pub mod cyclotomic;
pub mod deform;
pub mod expr;
pub mod field;
pub mod frac;
pub mod galois;
pub mod matrix;
pub mod poly;
pub mod qmodule;
pub mod snf;
pub mod testutil;
pub mod theta;

pub use curvature::{
    curvature_at, good_place, prolongation_curvature, triviality_scan, Conclusion, CurvatureError,
    CurvatureReport, PlaceState, PlaceStatus, Verdict,
};
pub use cyclotomic::{
    cyc_x_field, cyclotomic, q_field, reduce_at_place, x_field, CycField, CycFun, CyclotomicPlace,
    PolyQ, RatFun, RatQ, ReduceError,
};
pub use deform::{
    deform, diff_curvature, diff_triviality_scan, qx_field, specialize_q1, specialize_q_value,
    DeformError, DiffModule, QxFun, SpecializedModule,
};
pub use expr::{parse_ratfun, print_ratfun, ParseError};
pub use field::{rat_int, FieldCtx, Prec, Rat, QQ};
pub use frac::{Frac, FracField};
pub use galois::{
    bruteforce_kernel, diagonal_galois_group, factor_constant, is_q_power, relation_lattice,
    verify_by_curvatures,
    DiagonalGroupDescription, FactorError, FactoredConstant, RelationLattice,
};
pub use matrix::Mat;
pub use poly::Poly;
pub use qmodule::{module_from_strings, Construction, ModuleError, QDiffModule};
pub use theta::{
    char_solution_eval, frobenius_series, fundamental_eval, log_solution_eval, theta_eval,
    BallValue, FundamentalValue, SeriesSolution, ThetaError,
};
