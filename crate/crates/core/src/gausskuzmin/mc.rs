use rand::Rng;

use super::bounds::floor_ceil;
use super::set::{GkSetSpec, Relation, Resolved, Rhs};
use crate::sampling::{run_chunks, Estimate};
use crate::{Error, Result};

/// Refinement stops once a denominator would pass this.
const CAP: u128 = 1 << 62;

/// Precomputed data for deciding one sample.
struct Sampler {
    /// `q[p]` for `p = 1..`; `q[0]` unused.
    q: Vec<u64>,
    keep_l: Vec<bool>,
    keep_r: Vec<bool>,
    consumed: usize,
    /// Per lhs level: `(floor(c D), ceil(c D))` for a constant threshold.
    levels: Option<Vec<(u128, u128)>>,
    relation: Relation,
}

impl Sampler {
    fn new(r: &Resolved) -> Self {
        let consumed = r.consumed();
        // Positions past `consumed` are kept by both sides; 64 of them
        // already pass the cap for any base.
        let len = consumed + 65;
        let mut q = vec![0u64];
        q.extend(r.q.terms(len));
        let mask = |deleted: &[usize]| {
            let mut keep = vec![true; len + 1];
            keep[0] = false;
            for &p in deleted {
                keep[p] = false;
            }
            keep
        };
        let keep_l = mask(&r.lhs);
        let (keep_r, levels) = match &r.rhs {
            Rhs::Program(d) => (mask(d), None),
            Rhs::Const(c) => {
                let mut levels = Vec::new();
                let mut d: u128 = 1;
                levels.push(floor_ceil(c, d));
                for p in 1..=len {
                    if keep_l[p] {
                        match d.checked_mul(q[p] as u128).filter(|&n| n <= CAP) {
                            Some(n) => d = n,
                            None => break,
                        }
                        levels.push(floor_ceil(c, d));
                    }
                }
                (vec![false; len + 1], Some(levels))
            }
        };
        Sampler {
            q,
            keep_l,
            keep_r,
            consumed,
            levels,
            relation: r.relation,
        }
    }

    /// Draws digits of z until the inequality is decided. A side whose
    /// denominator would pass the cap stops refining; once every side has
    /// stopped, midpoints decide.
    fn hit<R: Rng>(&self, rng: &mut R) -> bool {
        let (mut nl, mut dl, mut level, mut frozen_l) = (0u128, 1u128, 0usize, false);
        let (mut nr, mut dr, mut frozen_r) = (0u128, 1u128, self.levels.is_some());
        let mut p = 1;
        let inside = loop {
            let e = rng.gen_range(0..self.q[p]) as u128;
            let q = self.q[p] as u128;
            if self.keep_l[p] && !frozen_l {
                if dl * q > CAP {
                    frozen_l = true;
                } else {
                    nl = nl * q + e;
                    dl *= q;
                    level += 1;
                }
            }
            if self.keep_r[p] && !frozen_r {
                if dr * q > CAP {
                    frozen_r = true;
                } else {
                    nr = nr * q + e;
                    dr *= q;
                }
            }
            let decided = match &self.levels {
                Some(levels) => {
                    let (lo, hi) = levels[level];
                    if nl < lo {
                        Some(true)
                    } else if nl >= hi {
                        Some(false)
                    } else if frozen_l {
                        Some(2 * nl + 1 < 2 * lo + 1)
                    } else {
                        None
                    }
                }
                None => {
                    if (nl + 1) * dr <= nr * dl {
                        Some(true)
                    } else if nl * dr >= (nr + 1) * dl {
                        Some(false)
                    } else if frozen_l && frozen_r && p >= self.consumed {
                        Some((2 * nl + 1) * dr < (2 * nr + 1) * dl)
                    } else {
                        None
                    }
                }
            };
            if let Some(v) = decided {
                break v;
            }
            p += 1;
        };
        inside == (self.relation == Relation::Less)
    }
}

/// Hit fraction over `samples` uniform points z, drawn as independent
/// uniform digits, with its binomial standard error.
pub fn measure_mc(spec: &GkSetSpec, samples: u64, seed: u64) -> Result<Estimate> {
    if samples == 0 {
        return Err(Error::domain("need at least one sample"));
    }
    let sampler = Sampler::new(&spec.resolve()?);
    let hits: u64 = run_chunks(samples, seed, |rng, count| {
        (0..count).filter(|_| sampler.hit(rng)).count() as u64
    })
    .into_iter()
    .sum();
    Ok(Estimate::from_hits(hits, samples))
}
