//! Generators and independent reference implementations shared by the
//! integration tests.

#![allow(dead_code)]

use cantor_core::numeral::{DigitString, QSequence, Tail};
use cantor_core::{Rational, SalemFunction, SalemSystem};
use num_bigint::BigInt;
use rand::Rng;

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn q(n: u64) -> QSequence {
    QSequence::constant(n).unwrap()
}

/// One of a constant, periodic or growing base sequence.
pub fn random_base<R: Rng>(rng: &mut R) -> QSequence {
    match rng.gen_range(0..3) {
        0 => q(rng.gen_range(2..=7)),
        1 => {
            let len = rng.gen_range(1..=4);
            QSequence::periodic((0..len).map(|_| rng.gen_range(2..=6)).collect()).unwrap()
        }
        _ => {
            let a = rng.gen_range(2..=4);
            QSequence::explicit(vec![a, a + rng.gen_range(0..=2)]).unwrap()
        }
    }
}

/// Base sequences over which every rational has an eventually periodic
/// expansion.
pub fn random_periodic_base<R: Rng>(rng: &mut R) -> QSequence {
    if rng.gen_bool(0.5) {
        q(rng.gen_range(2..=7))
    } else {
        let len = rng.gen_range(2..=4);
        QSequence::periodic((0..len).map(|_| rng.gen_range(2..=6)).collect()).unwrap()
    }
}

pub fn random_unit_rational<R: Rng>(rng: &mut R, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    ratio(rng.gen_range(0..=d), d)
}

pub fn random_digits<R: Rng>(rng: &mut R, base: &QSequence, len: usize) -> Vec<u64> {
    (1..=len).map(|k| rng.gen_range(0..base.q(k))).collect()
}

pub fn truncated<R: Rng>(rng: &mut R, base: &QSequence, len: usize) -> DigitString {
    DigitString::new(base.clone(), random_digits(rng, base, len), Tail::Truncated).unwrap()
}

/// A valid tuple system over `q` digits: partial sums `β_1..β_{q-1}` are
/// drawn from (0, 1) and the coefficients are their differences, so some
/// `p_i` may be negative.
pub fn random_system<R: Rng>(rng: &mut R, q: usize, den: i64) -> SalemFunction {
    let mut beta = vec![ratio(0, 1)];
    beta.extend((1..q).map(|_| ratio(rng.gen_range(1..den), den)));
    beta.push(ratio(1, 1));
    let p = beta.windows(2).map(|w| &w[1] - &w[0]).collect();
    SalemSystem::tuple(p).validate().unwrap()
}

/// Digits of `num/den` in base `q`, by long division in machine integers.
pub fn long_division(num: u64, den: u64, q: &[u64]) -> Vec<u64> {
    let mut r = num;
    q.iter()
        .map(|&b| {
            let t = r * b;
            r = t % den;
            t / den
        })
        .collect()
}

/// g for a tuple system on a finite digit string followed by zeros,
/// straight from the series.
pub fn salem_series(p: &[Rational], digits: &[u64]) -> Rational {
    let mut sum = ratio(0, 1);
    let mut prod = ratio(1, 1);
    for &d in digits {
        let d = d as usize;
        let beta: Rational = p[..d].iter().sum();
        sum += &beta * &prod;
        prod *= &p[d];
    }
    sum
}
