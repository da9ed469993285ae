//! Exact bounds by cylinder enumeration.
//!
//! A program deletes digit positions that do not depend on the digits
//! themselves. On a rank-d cylinder the image of a program is therefore the
//! cylinder spelled by the surviving digits, i.e. the interval
//! `[N/D, (N+1)/D]` with `N` the mixed-radix number formed by the kept
//! digits and `D` the product of their bases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::set::{GkSetSpec, MeasureBounds, Relation, Resolved, Rhs};
use crate::{Error, Rational, Result};

/// Largest number of digit combinations enumerated in one call.
pub const MAX_CYLINDERS: u64 = 1 << 34;

/// Image denominators must stay below this so products fit in `u128`.
const MAX_DENOMINATOR: u128 = 1 << 63;

const BLOCK: u64 = 1 << 15;

/// One digit position that either side reads.
#[derive(Debug, Clone, Copy)]
struct Slot {
    radix: u64,
    w_lhs: u128,
    w_rhs: u128,
}

#[derive(Debug, Clone, Copy)]
enum Test {
    /// Inside iff `N + 1 <= lo`, outside iff `N >= hi`.
    Const { lo: u128, hi: u128 },
    /// Compares two intervals `[N_L/D_L, (N_L+1)/D_L]` and `[N_R/D_R, ...]`.
    Program { d_lhs: u128, d_rhs: u128 },
}

impl Test {
    /// `Some(true)` inside, `Some(false)` outside, `None` straddling.
    fn classify(&self, nl: u128, nr: u128) -> Option<bool> {
        match *self {
            Test::Const { lo, hi } => {
                if nl < lo {
                    Some(true)
                } else if nl >= hi {
                    Some(false)
                } else {
                    None
                }
            }
            Test::Program { d_lhs, d_rhs } => {
                if (nl + 1) * d_rhs <= nr * d_lhs {
                    Some(true)
                } else if nl * d_rhs >= (nr + 1) * d_lhs {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }
}

fn kept(deleted: &[usize], depth: usize) -> Vec<bool> {
    let mut keep = vec![true; depth + 1];
    keep[0] = false;
    for &p in deleted {
        keep[p] = false;
    }
    keep
}

/// Mixed-radix weights of the kept positions and the product of their bases.
fn weights(q: &[u64], keep: &[bool]) -> Result<(Vec<u128>, u128)> {
    let mut w = vec![0u128; keep.len()];
    let mut d: u128 = 1;
    for p in (1..keep.len()).rev() {
        if keep[p] {
            w[p] = d;
            d = d
                .checked_mul(q[p] as u128)
                .filter(|&d| d < MAX_DENOMINATOR)
                .ok_or_else(|| Error::Unsupported("image denominator exceeds 2^63".into()))?;
        }
    }
    Ok((w, d))
}

pub(crate) fn floor_ceil(x: &Rational, d: u128) -> (u128, u128) {
    let scaled = x * Rational::from_integer(BigInt::from(d));
    let (fl, rem) = scaled.numer().div_mod_floor(scaled.denom());
    let fl = fl.to_u128().expect("threshold within [0, d]");
    (fl, if rem == BigInt::from(0) { fl } else { fl + 1 })
}

/// Counts of inside and outside digit combinations over `slots`.
fn enumerate(slots: &[Slot], total: u64, test: Test) -> (u64, u64) {
    let blocks = total.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let start = b * BLOCK;
            let count = BLOCK.min(total - start);
            let mut digits = vec![0u64; slots.len()];
            let (mut nl, mut nr) = (0u128, 0u128);
            let mut rest = start;
            for (i, s) in slots.iter().enumerate().rev() {
                digits[i] = rest % s.radix;
                rest /= s.radix;
                nl += digits[i] as u128 * s.w_lhs;
                nr += digits[i] as u128 * s.w_rhs;
            }
            let (mut inside, mut outside) = (0u64, 0u64);
            for step in 0..count {
                match test.classify(nl, nr) {
                    Some(true) => inside += 1,
                    Some(false) => outside += 1,
                    None => {}
                }
                if step + 1 == count {
                    break;
                }
                let mut i = slots.len() - 1;
                loop {
                    let s = slots[i];
                    digits[i] += 1;
                    nl += s.w_lhs;
                    nr += s.w_rhs;
                    if digits[i] < s.radix {
                        break;
                    }
                    digits[i] = 0;
                    nl -= s.w_lhs * s.radix as u128;
                    nr -= s.w_rhs * s.radix as u128;
                    i -= 1;
                }
            }
            (inside, outside)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

pub(crate) fn bounds_resolved(r: &Resolved, depth: usize) -> Result<MeasureBounds> {
    let needed = r.required_depth();
    if depth < needed {
        return Err(Error::depth("measure_bounds", needed, depth));
    }
    let mut q = vec![0u64];
    q.extend(r.q.terms(depth));
    let keep_l = kept(&r.lhs, depth);
    let (w_l, d_l) = weights(&q, &keep_l)?;
    let (keep_r, w_r, test) = match &r.rhs {
        Rhs::Const(c) => {
            let (lo, hi) = floor_ceil(c, d_l);
            (
                vec![false; depth + 1],
                vec![0u128; depth + 1],
                Test::Const { lo, hi },
            )
        }
        Rhs::Program(deleted) => {
            let keep_r = kept(deleted, depth);
            let (w_r, d_r) = weights(&q, &keep_r)?;
            (
                keep_r,
                w_r,
                Test::Program {
                    d_lhs: d_l,
                    d_rhs: d_r,
                },
            )
        }
    };
    let slots: Vec<Slot> = (1..=depth)
        .filter(|&p| keep_l[p] || keep_r[p])
        .map(|p| Slot {
            radix: q[p],
            w_lhs: w_l[p],
            w_rhs: w_r[p],
        })
        .collect();
    let total = slots
        .iter()
        .try_fold(1u64, |acc, s| {
            acc.checked_mul(s.radix).filter(|&t| t <= MAX_CYLINDERS)
        })
        .ok_or_else(|| {
            Error::Unsupported(format!(
                "depth {depth} needs more than {MAX_CYLINDERS} digit combinations"
            ))
        })?;
    let (mut inside, mut outside) = enumerate(&slots, total, test);
    if r.relation == Relation::GreaterOrEqual {
        std::mem::swap(&mut inside, &mut outside);
    }
    let frac = |n: u64| Rational::new(n.into(), total.into());
    Ok(MeasureBounds {
        lower: frac(inside),
        upper: frac(total - outside),
        depth,
        decided_mass: frac(inside + outside),
    })
}

/// Exact bounds on the measure of the set from all rank-`depth` cylinders.
pub fn measure_bounds(spec: &GkSetSpec, depth: usize) -> Result<MeasureBounds> {
    bounds_resolved(&spec.resolve()?, depth)
}
