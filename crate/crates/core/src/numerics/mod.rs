//! Special functions and one-dimensional numerical routines.
//!
//! Everything here is pure: no global state, safe to call from any thread.

mod optimize;
mod quadrature;
mod roots;
mod special;

pub use optimize::{maximize_scalar, Extremum};
pub use quadrature::{integrate, integrate_with_error, QuadratureEstimate, Region};
pub use roots::find_root;
pub use special::{
    erf, erfc, gaussian_pdf, gaussian_tail, gaussian_tail_below, inv_erf, inv_erfc, Gaussian,
};

use crate::error::{Error, Result};

/// Default absolute tolerance for [`integrate`].
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// Default bracket-width tolerance for [`find_root`].
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Default argmax tolerance for [`maximize_scalar`].
pub const DEFAULT_MAX_TOL: f64 = 1e-11;

/// A finite closed interval with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Self { lo, hi })
        } else {
            Err(Error::InvalidInterval { lo, hi })
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}
