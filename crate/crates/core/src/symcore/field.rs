use std::fmt;
use std::ops::Neg;

use num_traits::{Num, Signed};

/// Coefficient field for polynomials and rational functions.
///
/// Arithmetic must be exact: `Eq` rules out floating point, which is the
/// point. `BigRational` is the workhorse instantiation; small-width ratios
/// work for tests that want to stay cheap.
pub trait Field:
    Num + Clone + Eq + Neg<Output = Self> + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    fn pow_u32(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    fn pow_i64(&self, e: i64) -> Self {
        if e >= 0 {
            self.pow_u32(e as u32)
        } else {
            self.pow_u32((-e) as u32).inv()
        }
    }
}

impl<T> Field for T where
    T: Num + Clone + Eq + Neg<Output = T> + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

/// Fields whose elements carry a sign, used only for pretty-printing.
pub trait OrderedField: Field + Signed {}

impl<T: Field + Signed> OrderedField for T {}
