use std::fmt::Debug;

use num_traits::{Num, Signed, ToPrimitive};

use crate::Rational;

/// Field element the series evaluators can run over.
pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug + Send + Sync {
    fn from_rational(r: &Rational) -> Self;

    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_rational(r: &Rational) -> Self {
        r.to_f32().unwrap_or(f32::NAN)
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_agree() {
        let r = Rational::new(1.into(), 3.into());
        assert_eq!(<f64 as Scalar>::from_rational(&r), 1.0 / 3.0);
        assert_eq!(<f32 as Scalar>::from_rational(&r), 1.0f32 / 3.0);
        assert_eq!(Rational::from_rational(&r), r);
        assert!((Scalar::to_f64(&r) - 1.0 / 3.0).abs() < 1e-16);
    }
}
