use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::QSequence;
use crate::{Error, Rational, Result};

/// Extra digits examined past the requested depth when looking for a
/// periodic remainder.
pub const DEFAULT_PROBE: usize = 1 << 16;

/// What follows the explicit prefix of a [`DigitString`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    /// All further digits are 0.
    Zero,
    /// Every further digit is `q_k - 1`.
    Max,
    /// The listed digits repeat forever.
    Periodic(Vec<u64>),
    /// Nothing is known past the prefix.
    Truncated,
}

/// A representation `Δ^Q_{ε_1 ε_2 ...}`: a finite prefix of digits plus a
/// description of the remaining ones, over a fixed base sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitString {
    base: QSequence,
    prefix: Vec<u64>,
    tail: Tail,
}

/// Value of a digit string: exact, or the exact interval a truncated
/// string pins down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evaluation {
    Exact(Rational),
    Interval { lower: Rational, upper: Rational },
}

impl Evaluation {
    pub fn exact(self) -> Option<Rational> {
        match self {
            Evaluation::Exact(r) => Some(r),
            Evaluation::Interval { .. } => None,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            Evaluation::Exact(r) => r == x,
            Evaluation::Interval { lower, upper } => lower <= x && x <= upper,
        }
    }
}

/// Outcome of [`classify_rationality`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rationality {
    /// Terminating expansion. `dual` is the MAX-tail form, absent for the
    /// endpoints 0 and 1 which have a single representation.
    QRational {
        canonical: DigitString,
        dual: Option<DigitString>,
    },
    /// Eventually periodic, non-terminating expansion.
    QIrrational(DigitString),
    /// Neither termination nor a repeated remainder within the probe depth.
    Undecided(DigitString),
}

fn lcm(a: usize, b: usize) -> usize {
    a / a.gcd(&b) * b
}

impl DigitString {
    pub fn new(base: QSequence, prefix: Vec<u64>, tail: Tail) -> Result<Self> {
        for (i, &d) in prefix.iter().enumerate() {
            let q = base.q(i + 1);
            if d >= q {
                return Err(Error::domain(format!(
                    "digit {d} at position {} is outside 0..{q}",
                    i + 1
                )));
            }
        }
        if let Tail::Periodic(cycle) = &tail {
            if cycle.is_empty() {
                return Err(Error::domain("periodic tail needs at least one digit"));
            }
            let start = prefix.len() + 1;
            let head_rest = base.preperiod().unwrap_or(0).saturating_sub(prefix.len());
            let window = head_rest
                + lcm(
                    cycle.len(),
                    base.period_from(start + head_rest).unwrap_or(1),
                );
            for j in 0..window {
                let d = cycle[j % cycle.len()];
                let q = base.q(start + j);
                if d >= q {
                    return Err(Error::domain(format!(
                        "periodic digit {d} at position {} is outside 0..{q}",
                        start + j
                    )));
                }
            }
        }
        Ok(DigitString { base, prefix, tail })
    }

    pub fn zero(base: QSequence) -> Self {
        DigitString {
            base,
            prefix: Vec::new(),
            tail: Tail::Zero,
        }
    }

    /// The all-`(q_k - 1)` string, i.e. the number 1.
    pub fn one(base: QSequence) -> Self {
        DigitString {
            base,
            prefix: Vec::new(),
            tail: Tail::Max,
        }
    }

    pub fn base(&self) -> &QSequence {
        &self.base
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    /// Number of digits known: unbounded unless truncated.
    pub fn known_depth(&self) -> Option<usize> {
        match self.tail {
            Tail::Truncated => Some(self.prefix.len()),
            _ => None,
        }
    }

    /// Digit `ε_k`, 1-indexed; `None` past the end of a truncated string.
    pub fn digit(&self, k: usize) -> Option<u64> {
        assert!(k >= 1, "digits are 1-indexed");
        if k <= self.prefix.len() {
            return Some(self.prefix[k - 1]);
        }
        match &self.tail {
            Tail::Zero => Some(0),
            Tail::Max => Some(self.base.q(k) - 1),
            Tail::Periodic(c) => Some(c[(k - self.prefix.len() - 1) % c.len()]),
            Tail::Truncated => None,
        }
    }

    /// Extends the explicit prefix to at least `len` digits by unrolling the
    /// tail.
    pub fn materialize(&self, len: usize) -> Result<DigitString> {
        let have = self.prefix.len();
        if len <= have {
            return Ok(self.clone());
        }
        if self.tail == Tail::Truncated {
            return Err(Error::depth("digit access", len, have));
        }
        let mut out = self.clone();
        out.prefix
            .extend((have + 1..=len).map(|k| self.digit(k).unwrap()));
        if let Tail::Periodic(c) = &mut out.tail {
            let n = c.len();
            c.rotate_left((len - have) % n);
        }
        Ok(out)
    }

    /// Drops the first `n` digits; the result lives over `(q_{n+1}, ...)`.
    pub(crate) fn drop_digits(&self, n: usize) -> Result<DigitString> {
        let mut out = self.materialize(n)?;
        if out.prefix.len() < n {
            return Err(Error::depth("shift", n, out.prefix.len()));
        }
        out.prefix.drain(..n);
        out.base = self.base.drop_front(n);
        Ok(out)
    }

    /// Deletes digit `m`; the result lives over `Q` with `q_m` removed.
    pub(crate) fn delete_digit(&self, m: usize) -> Result<DigitString> {
        let mut out = self.materialize(m)?;
        if out.prefix.len() < m {
            return Err(Error::depth("generalized shift", m, out.prefix.len()));
        }
        out.prefix.remove(m - 1);
        out.base = self.base.remove(m);
        Ok(out)
    }

    /// Σ ε_k / (q_1 ⋯ q_k) over the prefix, with `q_1 ⋯ q_L`.
    fn prefix_sum(&self) -> (Rational, BigUint) {
        let mut num = BigUint::zero();
        let mut den = BigUint::one();
        for (i, &d) in self.prefix.iter().enumerate() {
            let q = self.base.q(i + 1);
            num = num * q + d;
            den *= q;
        }
        (
            Rational::new(BigInt::from(num), BigInt::from(den.clone())),
            den,
        )
    }

    /// Value of a purely periodic digit cycle over an eventually periodic
    /// base, as a number in [0, 1].
    fn periodic_value(cycle: &[u64], base: &QSequence) -> Result<Rational> {
        let head = base.preperiod().ok_or_else(|| {
            Error::Unsupported(
                "periodic digits over a non-periodic base have no exact rational value".into(),
            )
        })?;
        // Digits sitting over the non-periodic head of the base.
        let mut num = BigUint::zero();
        let mut den = BigUint::one();
        for k in 1..=head {
            let q = base.q(k);
            num = num * q + cycle[(k - 1) % cycle.len()];
            den *= q;
        }
        let period = lcm(cycle.len(), base.period_from(head + 1).unwrap());
        let mut block_num = BigUint::zero();
        let mut block_den = BigUint::one();
        for j in 0..period {
            let k = head + 1 + j;
            let q = base.q(k);
            block_num = block_num * q + cycle[(k - 1) % cycle.len()];
            block_den *= q;
        }
        // block value = block_num / block_den, repeated geometrically.
        let repeated = Rational::new(
            BigInt::from(block_num),
            BigInt::from(block_den - BigUint::one()),
        );
        let head_value = Rational::new(BigInt::from(num), BigInt::from(den.clone()));
        Ok(head_value + repeated / Rational::from_integer(BigInt::from(den)))
    }

    /// Value of the represented number.
    pub fn eval(&self) -> Result<Evaluation> {
        let (sum, den) = self.prefix_sum();
        let scale = Rational::new(BigInt::one(), BigInt::from(den));
        let tail = match &self.tail {
            Tail::Zero => Rational::zero(),
            Tail::Max => Rational::one(),
            Tail::Periodic(c) => Self::periodic_value(c, &self.base.drop_front(self.prefix.len()))?,
            Tail::Truncated => {
                return Ok(Evaluation::Interval {
                    upper: &sum + &scale,
                    lower: sum,
                })
            }
        };
        Ok(Evaluation::Exact(sum + tail * scale))
    }

    /// Exact value, failing on truncated strings.
    pub fn value(&self) -> Result<Rational> {
        match self.eval()? {
            Evaluation::Exact(r) => Ok(r),
            Evaluation::Interval { .. } => Err(Error::depth(
                "exact evaluation of a truncated string",
                self.prefix.len() + 1,
                self.prefix.len(),
            )),
        }
    }

    /// Normal form: MAX tails are carried into the prefix (except for the
    /// number 1, which keeps its all-MAX form), all-zero cycles become ZERO
    /// and trailing zeros before a ZERO tail are trimmed.
    pub fn canonical(&self) -> DigitString {
        let mut out = self.clone();
        if let Tail::Periodic(c) = &out.tail {
            if c.iter().all(|&d| d == 0) {
                out.tail = Tail::Zero;
            }
        }
        if out.tail == Tail::Max {
            loop {
                let Some(&last) = out.prefix.last() else {
                    // All digits maximal: the number 1.
                    return out;
                };
                let q = out.base.q(out.prefix.len());
                if last + 1 < q {
                    *out.prefix.last_mut().unwrap() += 1;
                    out.tail = Tail::Zero;
                    break;
                }
                out.prefix.pop();
            }
        }
        if out.tail == Tail::Zero {
            while out.prefix.last() == Some(&0) {
                out.prefix.pop();
            }
        }
        out
    }

    pub fn to_repr(&self) -> DigitStringRepr {
        DigitStringRepr {
            prefix: self.prefix.clone(),
            tail: match &self.tail {
                Tail::Zero => TailRepr::Zero,
                Tail::Max => TailRepr::Max,
                Tail::Periodic(c) => TailRepr::Periodic(c.clone()),
                Tail::Truncated => TailRepr::Truncated(self.prefix.len()),
            },
        }
    }

    pub fn from_repr(repr: DigitStringRepr, base: QSequence) -> Result<Self> {
        let tail = match repr.tail {
            TailRepr::Zero => Tail::Zero,
            TailRepr::Max => Tail::Max,
            TailRepr::Periodic(c) => Tail::Periodic(c),
            TailRepr::Truncated(depth) => {
                if depth != repr.prefix.len() {
                    return Err(Error::domain(format!(
                        "truncated depth {depth} does not match prefix length {}",
                        repr.prefix.len()
                    )));
                }
                Tail::Truncated
            }
        };
        DigitString::new(base, repr.prefix, tail)
    }
}

/// JSON form of a digit string (the base travels separately).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitStringRepr {
    pub prefix: Vec<u64>,
    pub tail: TailRepr,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailRepr {
    Zero,
    Max,
    Periodic(Vec<u64>),
    Truncated(usize),
}

/// Greedy digit generator over exact remainders. With `x = a/b` the
/// remainder keeps the denominator `b`, so the state is just `a`.
struct Greedy<'a> {
    base: &'a QSequence,
    num: BigInt,
    den: BigInt,
    pos: usize,
}

impl<'a> Greedy<'a> {
    fn new(x: &Rational, base: &'a QSequence) -> Self {
        Greedy {
            base,
            num: x.numer().clone(),
            den: x.denom().clone(),
            pos: 0,
        }
    }

    fn next_digit(&mut self) -> u64 {
        self.pos += 1;
        let t = &self.num * self.base.q(self.pos);
        let (d, r) = t.div_mod_floor(&self.den);
        self.num = r;
        u64::try_from(d).expect("digit fits u64")
    }

    fn terminated(&self) -> bool {
        self.num.is_zero()
    }

    /// Remainder state keyed by the base phase, when the base is periodic at
    /// the next position.
    fn state(&self) -> Option<(BigInt, usize)> {
        self.base
            .phase_of(self.pos + 1)
            .map(|phase| (self.num.clone(), phase))
    }
}

fn check_unit(x: &Rational) -> Result<()> {
    if x.is_negative() || *x > Rational::one() {
        return Err(Error::domain(format!("{x} is outside [0, 1]")));
    }
    Ok(())
}

/// Leading `n` digits of the canonical representation of `x`.
pub fn leading_digits(x: &Rational, base: &QSequence, n: usize) -> Result<Vec<u64>> {
    check_unit(x)?;
    if x.is_one() {
        return Ok((1..=n).map(|k| base.q(k) - 1).collect());
    }
    let mut g = Greedy::new(x, base);
    Ok((0..n).map(|_| g.next_digit()).collect())
}

/// Expansion of `x` to `depth` digits. See [`expand_with_probe`].
pub fn expand(x: &Rational, base: &QSequence, depth: usize) -> Result<DigitString> {
    expand_with_probe(x, base, depth, DEFAULT_PROBE)
}

/// Greedy expansion `ε_k = floor(r_{k-1} q_k)` to exactly `depth` digits.
///
/// The tail is ZERO when the expansion has terminated, PERIODIC when the
/// remainder after `depth` digits recurs (with the same base phase) within
/// `probe` further digits, and TRUNCATED otherwise. `x = 1` expands to the
/// all-maximal string.
pub fn expand_with_probe(
    x: &Rational,
    base: &QSequence,
    depth: usize,
    probe: usize,
) -> Result<DigitString> {
    check_unit(x)?;
    if depth == 0 {
        return Err(Error::domain("expansion depth must be at least 1"));
    }
    if x.is_one() {
        return Ok(DigitString {
            prefix: (1..=depth).map(|k| base.q(k) - 1).collect(),
            base: base.clone(),
            tail: Tail::Max,
        });
    }
    let mut g = Greedy::new(x, base);
    let prefix: Vec<u64> = (0..depth).map(|_| g.next_digit()).collect();
    let tail = if g.terminated() {
        Tail::Zero
    } else if let Some(start) = g.state() {
        let mut cycle = Vec::new();
        let mut seen = HashMap::new();
        seen.insert(start, 0usize);
        let mut tail = Tail::Truncated;
        for j in 1..=probe {
            cycle.push(g.next_digit());
            if g.terminated() {
                break;
            }
            let state = g.state().expect("periodic base stays periodic");
            match seen.get(&state) {
                Some(0) => {
                    tail = Tail::Periodic(cycle);
                    break;
                }
                // Eventually periodic, but not from this position.
                Some(_) => break,
                None => {
                    seen.insert(state, j);
                }
            }
        }
        tail
    } else {
        Tail::Truncated
    };
    Ok(DigitString {
        base: base.clone(),
        prefix,
        tail,
    })
}

/// Decides whether `x` is Q-rational by running the greedy expansion for up
/// to `probe_depth` digits.
pub fn classify_rationality(
    x: &Rational,
    base: &QSequence,
    probe_depth: usize,
) -> Result<Rationality> {
    check_unit(x)?;
    if x.is_zero() {
        return Ok(Rationality::QRational {
            canonical: DigitString::zero(base.clone()),
            dual: None,
        });
    }
    if x.is_one() {
        return Ok(Rationality::QRational {
            canonical: DigitString::one(base.clone()),
            dual: None,
        });
    }
    let mut g = Greedy::new(x, base);
    let mut digits = Vec::new();
    let mut seen: HashMap<(BigInt, usize), usize> = HashMap::new();
    while digits.len() < probe_depth {
        if let Some(state) = g.state() {
            if let Some(&start) = seen.get(&state) {
                let cycle = digits.split_off(start);
                return Ok(Rationality::QIrrational(DigitString {
                    base: base.clone(),
                    prefix: digits,
                    tail: Tail::Periodic(cycle),
                }));
            }
            seen.insert(state, digits.len());
        }
        digits.push(g.next_digit());
        if g.terminated() {
            let mut dual = digits.clone();
            *dual.last_mut().unwrap() -= 1;
            return Ok(Rationality::QRational {
                canonical: DigitString {
                    base: base.clone(),
                    prefix: digits,
                    tail: Tail::Zero,
                },
                dual: Some(DigitString {
                    base: base.clone(),
                    prefix: dual,
                    tail: Tail::Max,
                }),
            });
        }
    }
    Ok(Rationality::Undecided(DigitString {
        base: base.clone(),
        prefix: digits,
        tail: Tail::Truncated,
    }))
}

impl DigitString {
    /// Canonical exact representation of `x`: ZERO tail when `x` is
    /// Q-rational, PERIODIC when the expansion cycles, TRUNCATED at
    /// `probe_depth` otherwise.
    pub fn from_rational(x: &Rational, base: &QSequence, probe_depth: usize) -> Result<Self> {
        Ok(match classify_rationality(x, base, probe_depth)? {
            Rationality::QRational { canonical, .. } => canonical,
            Rationality::QIrrational(d) | Rationality::Undecided(d) => d,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn q2() -> QSequence {
        QSequence::constant(2).unwrap()
    }

    fn factorial_base() -> QSequence {
        QSequence::explicit(vec![2, 3]).unwrap()
    }

    #[test]
    fn expand_examples() {
        let d = expand(&ratio(1, 2), &q2(), 4).unwrap();
        assert_eq!(d.prefix(), &[1, 0, 0, 0]);
        assert_eq!(d.tail(), &Tail::Zero);

        let d = expand(&ratio(5, 6), &factorial_base(), 2).unwrap();
        assert_eq!(d.prefix(), &[1, 2]);
        assert_eq!(d.tail(), &Tail::Zero);

        let d = expand(&ratio(1, 3), &q2(), 6).unwrap();
        assert_eq!(d.prefix(), &[0, 1, 0, 1, 0, 1]);
        assert_eq!(d.tail(), &Tail::Periodic(vec![0, 1]));
        assert_eq!(d.value().unwrap(), ratio(1, 3));
    }

    #[test]
    fn expand_one_is_all_max() {
        let d = expand(&ratio(1, 1), &factorial_base(), 3).unwrap();
        assert_eq!(d.prefix(), &[1, 2, 3]);
        assert_eq!(d.tail(), &Tail::Max);
        assert_eq!(d.value().unwrap(), ratio(1, 1));
    }

    #[test]
    fn expand_rejects_out_of_range() {
        assert!(matches!(
            expand(&ratio(3, 2), &q2(), 2),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            expand(&ratio(-1, 2), &q2(), 2),
            Err(Error::Domain(_))
        ));
        assert!(expand(&ratio(1, 2), &q2(), 0).is_err());
    }

    #[test]
    fn expand_preperiodic_past_depth_is_truncated() {
        // 1/12 = 0.000101010..._2; after one digit the tail 1/6 is not purely periodic.
        let d = expand(&ratio(1, 12), &q2(), 1).unwrap();
        assert_eq!(d.tail(), &Tail::Truncated);
        assert!(d.eval().unwrap().contains(&ratio(1, 12)));
        let d = expand(&ratio(1, 12), &q2(), 2).unwrap();
        assert_eq!(d.tail(), &Tail::Periodic(vec![0, 1]));
    }

    #[test]
    fn expand_non_periodic_base_truncates() {
        // (3, 5, 7, ...) never lets 1/2 terminate.
        let q = QSequence::explicit(vec![3, 5]).unwrap();
        let d = expand(&ratio(1, 2), &q, 4).unwrap();
        assert_eq!(d.tail(), &Tail::Truncated);
        let Evaluation::Interval { lower, upper } = d.eval().unwrap() else {
            panic!("expected interval")
        };
        assert!(lower <= ratio(1, 2) && ratio(1, 2) <= upper);
        assert_eq!(upper - lower, ratio(1, 3 * 5 * 7 * 9));
    }

    #[test]
    fn eval_examples() {
        let d = DigitString::new(q2(), vec![1, 0], Tail::Zero).unwrap();
        assert_eq!(d.value().unwrap(), ratio(1, 2));
        let d = DigitString::new(factorial_base(), vec![1, 2], Tail::Zero).unwrap();
        assert_eq!(d.value().unwrap(), ratio(5, 6));
        assert_eq!(
            DigitString::zero(factorial_base()).value().unwrap(),
            ratio(0, 1)
        );
        assert_eq!(
            DigitString::one(factorial_base()).value().unwrap(),
            ratio(1, 1)
        );
    }

    #[test]
    fn eval_periodic_over_periodic_base() {
        // Base (2,3,2,3,...), digits (1,2) repeating: value = (1/2 + 2/6) / (1 - 1/6) = 1.
        let q = QSequence::periodic(vec![2, 3]).unwrap();
        let d = DigitString::new(q.clone(), vec![], Tail::Periodic(vec![1, 2])).unwrap();
        assert_eq!(d.value().unwrap(), ratio(1, 1));
        // digits (0,1) repeating: (1/6) / (5/6) = 1/5.
        let d = DigitString::new(q, vec![], Tail::Periodic(vec![0, 1])).unwrap();
        assert_eq!(d.value().unwrap(), ratio(1, 5));
    }

    #[test]
    fn periodic_over_arithmetic_base_is_unsupported() {
        let d = DigitString::new(factorial_base(), vec![], Tail::Periodic(vec![1])).unwrap();
        assert!(matches!(d.eval(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn digit_validation() {
        assert!(DigitString::new(q2(), vec![2], Tail::Zero).is_err());
        assert!(DigitString::new(factorial_base(), vec![1, 2, 3], Tail::Zero).is_ok());
        assert!(DigitString::new(factorial_base(), vec![1, 3], Tail::Zero).is_err());
        assert!(DigitString::new(
            QSequence::periodic(vec![3, 2]).unwrap(),
            vec![],
            Tail::Periodic(vec![2])
        )
        .is_err());
        assert!(DigitString::new(q2(), vec![], Tail::Periodic(vec![])).is_err());
    }

    #[test]
    fn classify_examples() {
        match classify_rationality(&ratio(1, 2), &q2(), 64).unwrap() {
            Rationality::QRational {
                canonical,
                dual: Some(dual),
            } => {
                assert_eq!(canonical.prefix(), &[1]);
                assert_eq!(canonical.tail(), &Tail::Zero);
                assert_eq!(dual.prefix(), &[0]);
                assert_eq!(dual.tail(), &Tail::Max);
                assert_eq!(dual.value().unwrap(), ratio(1, 2));
            }
            other => panic!("{other:?}"),
        }
        match classify_rationality(&ratio(1, 3), &q2(), 64).unwrap() {
            Rationality::QIrrational(d) => {
                assert_eq!(d.tail(), &Tail::Periodic(vec![0, 1]));
                assert_eq!(d.value().unwrap(), ratio(1, 3));
            }
            other => panic!("{other:?}"),
        }
        for q in [q2(), factorial_base()] {
            assert_eq!(
                classify_rationality(&ratio(0, 1), &q, 8).unwrap(),
                Rationality::QRational {
                    canonical: DigitString::zero(q.clone()),
                    dual: None
                }
            );
        }
        let q = QSequence::explicit(vec![3, 5]).unwrap();
        assert!(matches!(
            classify_rationality(&ratio(1, 2), &q, 32).unwrap(),
            Rationality::Undecided(_)
        ));
    }

    #[test]
    fn canonical_forms() {
        let d = DigitString::new(q2(), vec![0, 1], Tail::Max)
            .unwrap()
            .canonical();
        assert_eq!(d, DigitString::new(q2(), vec![1], Tail::Zero).unwrap());
        let d = DigitString::new(q2(), vec![1, 1], Tail::Max)
            .unwrap()
            .canonical();
        assert_eq!(d, DigitString::one(q2()));
        let d = DigitString::new(q2(), vec![1, 0, 0], Tail::Periodic(vec![0, 0]))
            .unwrap()
            .canonical();
        assert_eq!(d, DigitString::new(q2(), vec![1], Tail::Zero).unwrap());
    }

    #[test]
    fn materialize_rotates_cycle() {
        let d = DigitString::new(q2(), vec![1], Tail::Periodic(vec![0, 1, 1])).unwrap();
        let m = d.materialize(3).unwrap();
        assert_eq!(m.prefix(), &[1, 0, 1]);
        assert_eq!(m.tail(), &Tail::Periodic(vec![1, 0, 1]));
        assert_eq!(m.value().unwrap(), d.value().unwrap());
        let t = DigitString::new(q2(), vec![1], Tail::Truncated).unwrap();
        assert!(matches!(
            t.materialize(2),
            Err(Error::InsufficientDepth { .. })
        ));
    }

    #[test]
    fn repr_json() {
        let d = expand(&ratio(1, 2), &q2(), 4).unwrap();
        assert_eq!(
            serde_json::to_string(&d.to_repr()).unwrap(),
            r#"{"prefix":[1,0,0,0],"tail":"zero"}"#
        );
        let d = expand(&ratio(1, 3), &q2(), 2).unwrap();
        assert_eq!(
            serde_json::to_string(&d.to_repr()).unwrap(),
            r#"{"prefix":[0,1],"tail":{"periodic":[0,1]}}"#
        );
        let r: DigitStringRepr =
            serde_json::from_str(r#"{"prefix":[1,0],"tail":{"truncated":2}}"#).unwrap();
        let back = DigitString::from_repr(r, q2()).unwrap();
        assert_eq!(back.known_depth(), Some(2));
        let bad: DigitStringRepr =
            serde_json::from_str(r#"{"prefix":[1,0],"tail":{"truncated":3}}"#).unwrap();
        assert!(DigitString::from_repr(bad, q2()).is_err());
    }
}
