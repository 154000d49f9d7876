use std::fmt;

use num_traits::{PrimInt, Signed};

/// Exact signed machine integers usable as matrix entries.
///
/// All arithmetic on a `Scalar` goes through the checked operations of
/// [`PrimInt`], so overflow surfaces as an error instead of wrapping.
pub trait Scalar: PrimInt + Signed + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn as_i128(self) -> i128;
    fn from_i128(x: i128) -> Option<Self>;
}

macro_rules! impl_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn as_i128(self) -> i128 {
                self as i128
            }
            fn from_i128(x: i128) -> Option<Self> {
                <$t>::try_from(x).ok()
            }
        }
    )*};
}

impl_scalar!(i32, i64, i128);
