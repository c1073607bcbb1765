//! Scalar abstractions shared by the closed-form layers.
//!
//! [`Real`] is any IEEE float the entropy formulas can run in. [`Weight`]
//! additionally admits exact rationals so that probabilities can be carried
//! without rounding until the last step.

use std::fmt::Debug;
use std::iter::Sum;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + Sum + Debug + Default + Send + Sync + 'static {
    /// Tolerance on the total of a probability vector.
    const NORMALIZATION_TOL: f64;

    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 fits every Real")
    }
}

impl Real for f32 {
    const NORMALIZATION_TOL: f64 = 1e-6;
}

impl Real for f64 {
    const NORMALIZATION_TOL: f64 = 1e-12;
}

/// A mixture weight or probability: a float or an exact rational.
pub trait Weight: Clone + Debug + PartialOrd + Zero + One + Send + Sync {
    /// `num / den` in this representation.
    fn from_ratio(num: &BigUint, den: &BigUint) -> Self;

    /// `exp(ln_value)`, or `None` when the representation cannot hold it exactly.
    fn from_ln(ln_value: f64) -> Option<Self>;

    fn to_f64(&self) -> f64;

    fn is_negative(&self) -> bool {
        self.to_f64() < 0.0
    }

    /// Whether `sum` is 1 within this representation's tolerance.
    fn is_unit_total(sum: &Self) -> bool;

    /// Exact-aware summation.
    fn total<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
        Self: 'a;
}

fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    ToPrimitive::to_f64(&BigRational::new(
        BigInt::from(num.clone()),
        BigInt::from(den.clone()),
    ))
    .unwrap_or(f64::NAN)
}

macro_rules! float_weight {
    ($t:ty) => {
        impl Weight for $t {
            fn from_ratio(num: &BigUint, den: &BigUint) -> Self {
                ratio_to_f64(num, den) as $t
            }

            fn from_ln(ln_value: f64) -> Option<Self> {
                Some(ln_value.exp() as $t)
            }

            fn to_f64(&self) -> f64 {
                f64::from(*self)
            }

            fn is_unit_total(sum: &Self) -> bool {
                (f64::from(*sum) - 1.0).abs() <= <$t as Real>::NORMALIZATION_TOL
            }

            fn total<'a, I>(items: I) -> Self
            where
                I: IntoIterator<Item = &'a Self>,
            {
                let mut acc = NeumaierSum::<$t>::default();
                for x in items {
                    acc.add(*x);
                }
                acc.value()
            }
        }
    };
}

float_weight!(f32);
float_weight!(f64);

impl Weight for BigRational {
    fn from_ratio(num: &BigUint, den: &BigUint) -> Self {
        BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
    }

    fn from_ln(_ln_value: f64) -> Option<Self> {
        None
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn is_unit_total(sum: &Self) -> bool {
        sum.is_one()
    }

    fn total<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
    {
        items
            .into_iter()
            .fold(BigRational::zero(), |acc, x| acc + x)
    }
}

/// Neumaier's compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum<T> {
    sum: T,
    compensation: T,
}

impl<T: Float> NeumaierSum<T> {
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation = self.compensation + ((self.sum - t) + x);
        } else {
            self.compensation = self.compensation + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.compensation
    }
}

impl<T: Float + Default> FromIterator<T> for NeumaierSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = NeumaierSum {
            sum: T::zero(),
            compensation: T::zero(),
        };
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator of floats.
pub fn stable_sum<T: Float + Default, I: IntoIterator<Item = T>>(iter: I) -> T {
    iter.into_iter().collect::<NeumaierSum<T>>().value()
}
