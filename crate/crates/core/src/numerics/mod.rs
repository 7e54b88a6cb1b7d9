//! Special functions, quadrature, root finding and seeded random streams
//! shared by every model module.

mod quad;
mod rng;
mod roots;
pub(crate) mod special;

pub use quad::{integrate, integrate_semi_infinite, QuadratureSpec, DEFAULT_ABS_TOL, DEFAULT_REL_TOL};
pub use rng::{NormalSource, RngStream};
pub use roots::find_root;
pub use special::{erfc, normal_pdf, std_normal_cdf, std_normal_quantile};
