use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::QSequence;
use crate::{Error, Rational, Result};

/// The closed interval of all numbers whose first `m` digits are `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cylinder {
    pub base: Vec<u64>,
    pub inf: Rational,
    pub sup: Rational,
    pub measure: Rational,
}

impl Cylinder {
    pub fn new(base: &[u64], q: &QSequence) -> Result<Self> {
        let mut num = BigUint::zero();
        let mut den = BigUint::one();
        for (i, &c) in base.iter().enumerate() {
            let qk = q.q(i + 1);
            if c >= qk {
                return Err(Error::domain(format!(
                    "cylinder digit {c} at position {} is outside 0..{qk}",
                    i + 1
                )));
            }
            num = num * qk + c;
            den *= qk;
        }
        let den = BigInt::from(den);
        let inf = Rational::new(BigInt::from(num.clone()), den.clone());
        let sup = Rational::new(BigInt::from(num + 1u32), den.clone());
        Ok(Cylinder {
            base: base.to_vec(),
            inf,
            sup,
            measure: Rational::new(BigInt::one(), den),
        })
    }

    pub fn rank(&self) -> usize {
        self.base.len()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.inf <= *x && *x <= self.sup
    }

    pub fn contains_interior(&self, x: &Rational) -> bool {
        self.inf < *x && *x < self.sup
    }
}

/// Every rank-`m` cylinder, in lexicographic order of its base.
pub fn all_cylinders(q: &QSequence, m: usize) -> impl Iterator<Item = Vec<u64>> {
    let radices = q.terms(m);
    let total: u64 = radices.iter().product();
    (0..total).map(move |mut idx| {
        let mut digits = vec![0; radices.len()];
        for (d, &r) in digits.iter_mut().zip(&radices).rev() {
            *d = idx % r;
            idx /= r;
        }
        digits
    })
}
