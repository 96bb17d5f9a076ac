//! Exact scalars: rationals, cyclotomic numbers, monomial constants, the
//! coefficient field `Q(ζ_N)(q^{1/D})` and truncated Laurent series.

pub mod cyclo;
pub mod field;
pub mod mono;
pub mod poly;
pub mod rational;
pub mod series;

pub use cyclo::{make_root_of_unity, CycloNumber};
pub use field::FieldElement;
pub use mono::MonoConst;
pub use rational::{int, rat, Rational};
pub use series::{residue_coefficient, series_expand, LaurentSeries, UPoly, UniRational};
