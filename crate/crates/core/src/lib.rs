//! Exact symbolic computations for cubical structures on Weierstrass formal groups.

pub mod coeffring;
pub mod cubical;
pub mod involution;
pub mod qchar;
pub mod series;
pub mod ssq;
pub mod weierstrass;
