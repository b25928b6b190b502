use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real floating-point scalar the solvers are generic over.
///
/// Implemented for `f32` and `f64`. Thresholds quoted as absolute `f64`
/// constants are mapped through [`Scalar::tol`], which never returns
/// anything below a small multiple of the type's machine epsilon so the
/// same code stays meaningful in single precision.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Sum + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal, panicking only if the type cannot hold it.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// A relative tolerance: `x`, raised to `16·eps` when the type is too coarse.
    fn tol(x: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(16.0);
        Self::lit(x).max(floor)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
