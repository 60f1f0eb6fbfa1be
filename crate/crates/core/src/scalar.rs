//! Scalar abstraction for the numerical half of the crate.
//!
//! Everything that carries a rate, a fidelity or an expectation value is
//! generic over [`Real`]. The combinatorial half (Pauli strings, graphs,
//! schedules) is exact and has no scalar parameter.

use core::fmt::{Debug, Display, LowerExp};
use core::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Real floating-point scalar used for rates, fidelities and fits.
pub trait Real:
    Float + FromPrimitive + Debug + Display + LowerExp + Default + Sum + Send + Sync + 'static
{
    /// Lossless-enough conversion from an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    /// Conversion to `f64` for sampling and serialization.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar converts to f64")
    }

    /// KKT tolerance used by the nonnegative least-squares solver.
    #[inline]
    fn default_kkt_tol() -> Self {
        Self::lit(1e-10).max(Self::epsilon() * Self::lit(1e3))
    }
}

impl<T> Real for T where
    T: Float + FromPrimitive + Debug + Display + LowerExp + Default + Sum + Send + Sync + 'static
{
}
