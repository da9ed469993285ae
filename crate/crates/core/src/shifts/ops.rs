use num_bigint::BigInt;
use num_traits::One;

use super::{Atom, ShiftProgram};
use crate::numeral::{classify_rationality, leading_digits, DigitString, QSequence, Rationality};
use crate::{Error, Rational, Result};

/// Something the shift operators act on.
pub trait Shiftable: Sized {
    /// σⁿ.
    fn shift(&self, n: usize) -> Result<Self>;

    /// σ_m, `m >= 1`.
    fn gen_shift(&self, m: usize) -> Result<Self>;
}

/// Digit-drop semantics: σⁿ removes the first `n` digits, σ_m removes the
/// m-th, and the base sequence loses the same terms.
impl Shiftable for DigitString {
    fn shift(&self, n: usize) -> Result<Self> {
        self.drop_digits(n)
    }

    fn gen_shift(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("generalized shift index must be >= 1"));
        }
        self.delete_digit(m)
    }
}

/// An exact number together with the base sequence it is read in.
///
/// Shifts act through the closed forms on the canonical (ZERO-tail)
/// representation, so only the first few digits are ever computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    pub value: Rational,
    pub base: QSequence,
}

impl Point {
    pub fn new(value: Rational, base: QSequence) -> Result<Self> {
        if value < Rational::from_integer(BigInt::from(0)) || value > Rational::one() {
            return Err(Error::domain(format!("{value} is outside [0, 1]")));
        }
        Ok(Point { value, base })
    }
}

/// Σ_{i≤n} ε_i/(q_1⋯q_i) and q_1⋯q_n for the given digits.
fn partial_sum(digits: &[u64], base: &QSequence) -> (Rational, BigInt) {
    let mut num = BigInt::from(0);
    let mut den = BigInt::one();
    for (i, &d) in digits.iter().enumerate() {
        let q = base.q(i + 1);
        num = num * q + d;
        den *= q;
    }
    (Rational::new(num, den.clone()), den)
}

/// σⁿ(x) = q_1⋯q_n · (x − Σ_{i≤n} ε_i/(q_1⋯q_i)).
pub fn shift_closed_form(x: &Rational, base: &QSequence, n: usize) -> Result<Rational> {
    let digits = leading_digits(x, base, n)?;
    let (sum, den) = partial_sum(&digits, base);
    Ok((x - sum) * Rational::from_integer(den))
}

/// σ_m(x) = x q_m − ε_m/(q_1⋯q_{m−1}) − (q_m − 1) Σ_{i<m} ε_i/(q_1⋯q_i).
pub fn gen_shift_closed_form(x: &Rational, base: &QSequence, m: usize) -> Result<Rational> {
    if m == 0 {
        return Err(Error::domain("generalized shift index must be >= 1"));
    }
    let digits = leading_digits(x, base, m)?;
    let (sum, den) = partial_sum(&digits[..m - 1], base);
    let qm = BigInt::from(base.q(m));
    let eps = BigInt::from(digits[m - 1]);
    Ok(x * Rational::from_integer(qm.clone())
        - Rational::new(eps, den)
        - Rational::from_integer(qm - 1) * sum)
}

impl Shiftable for Point {
    fn shift(&self, n: usize) -> Result<Self> {
        Ok(Point {
            value: shift_closed_form(&self.value, &self.base, n)?,
            base: self.base.drop_front(n),
        })
    }

    fn gen_shift(&self, m: usize) -> Result<Self> {
        Ok(Point {
            value: gen_shift_closed_form(&self.value, &self.base, m)?,
            base: self.base.remove(m),
        })
    }
}

/// Applies the atoms left to right.
pub fn apply_program<S: Shiftable + Clone>(program: &ShiftProgram, x: &S) -> Result<S> {
    let atoms = program.atoms()?;
    let mut cur: Option<S> = None;
    for (i, atom) in atoms.iter().enumerate() {
        let src = cur.as_ref().unwrap_or(x);
        let next = match atom {
            Atom::Sigma => src.shift(1),
            Atom::Gen(m) => src.gen_shift(*m),
        };
        cur = Some(next.map_err(|e| match e {
            Error::InsufficientDepth {
                needed, available, ..
            } => Error::InsufficientDepth {
                context: format!("atom {i} ({atom:?}) of shift program"),
                needed,
                available,
            },
            other => other,
        })?);
    }
    Ok(cur.unwrap_or_else(|| x.clone()))
}

/// Which representation of a Q-rational the shift acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Representation {
    #[default]
    Zero,
    Max,
}

/// The requested representation of `x`. Q-irrationals, 0 and 1 have a
/// single one, which is returned for either flag.
pub fn representation(
    x: &Rational,
    base: &QSequence,
    which: Representation,
    probe_depth: usize,
) -> Result<DigitString> {
    Ok(match classify_rationality(x, base, probe_depth)? {
        Rationality::QRational { canonical, dual } => match (which, dual) {
            (Representation::Max, Some(d)) => d,
            _ => canonical,
        },
        Rationality::QIrrational(d) | Rationality::Undecided(d) => d,
    })
}

/// Both sides of `x = Σ_{i≤n} ε_i/(q_1⋯q_i) + σⁿ(x)/(q_1⋯q_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub holds: bool,
    pub lhs: Rational,
    pub rhs: Rational,
    pub shifted: Rational,
}

/// Checks the reconstruction identity. σⁿ(x) is taken from the digit-drop
/// route when the expansion of `x` is exact, and otherwise from `n`
/// single-step shifts.
pub fn reconstruct_identity(x: &Rational, base: &QSequence, n: usize) -> Result<Reconstruction> {
    let repr = DigitString::from_rational(x, base, n.max(1) + 512)?;
    let shifted = match repr.shift(n).and_then(|s| s.value()) {
        Ok(v) => v,
        Err(Error::InsufficientDepth { .. }) | Err(Error::Unsupported(_)) => {
            let mut p = Point::new(x.clone(), base.clone())?;
            for _ in 0..n {
                p = p.shift(1)?;
            }
            p.value
        }
        Err(e) => return Err(e),
    };
    let digits = leading_digits(x, base, n)?;
    let (sum, den) = partial_sum(&digits, base);
    let rhs = sum + &shifted / Rational::from_integer(den);
    Ok(Reconstruction {
        holds: rhs == *x,
        lhs: x.clone(),
        rhs,
        shifted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeral::{expand, Tail};
    use crate::rational::ratio;

    fn q2() -> QSequence {
        QSequence::constant(2).unwrap()
    }

    fn fac() -> QSequence {
        QSequence::explicit(vec![2, 3]).unwrap()
    }

    fn point(x: Rational, q: QSequence) -> Point {
        Point::new(x, q).unwrap()
    }

    #[test]
    fn shift_examples() {
        assert_eq!(
            point(ratio(5, 8), q2()).shift(1).unwrap().value,
            ratio(1, 4)
        );
        assert_eq!(
            point(ratio(3, 7), q2()).shift(0).unwrap().value,
            ratio(3, 7)
        );
        let s = point(ratio(5, 6), fac()).shift(1).unwrap();
        assert_eq!(s.value, ratio(2, 3));
        assert_eq!(s.base.terms(3), vec![3, 4, 5]);

        let d = expand(&ratio(5, 6), &fac(), 3).unwrap().shift(1).unwrap();
        assert_eq!(d.prefix(), &[2, 0]);
        assert_eq!(d.value().unwrap(), ratio(2, 3));
    }

    #[test]
    fn gen_shift_examples() {
        assert_eq!(
            point(ratio(3, 4), q2()).gen_shift(2).unwrap().value,
            ratio(1, 2)
        );
        assert_eq!(
            point(ratio(5, 8), q2()).gen_shift(1).unwrap().value,
            ratio(1, 4)
        );
        let g = point(ratio(5, 6), fac()).gen_shift(2).unwrap();
        assert_eq!(g.value, ratio(1, 2));
        assert_eq!(g.base.terms(3), vec![2, 4, 5]);
        let d = expand(&ratio(5, 6), &fac(), 2)
            .unwrap()
            .gen_shift(2)
            .unwrap();
        assert_eq!(d.prefix(), &[1]);
        assert_eq!(d.value().unwrap(), ratio(1, 2));
    }

    #[test]
    fn shifts_of_one_stay_one() {
        for base in [q2(), fac(), QSequence::periodic(vec![3, 2]).unwrap()] {
            let one = point(ratio(1, 1), base.clone());
            for m in 1..5 {
                assert_eq!(one.gen_shift(m).unwrap().value, ratio(1, 1));
                assert_eq!(one.shift(m).unwrap().value, ratio(1, 1));
            }
            let d = DigitString::one(base);
            assert_eq!(d.gen_shift(3).unwrap().value().unwrap(), ratio(1, 1));
        }
    }

    #[test]
    fn truncated_input_reports_depth() {
        let d = DigitString::new(q2(), vec![1, 0], Tail::Truncated).unwrap();
        assert!(matches!(
            d.shift(3),
            Err(Error::InsufficientDepth {
                needed: 3,
                available: 2,
                ..
            })
        ));
        assert!(matches!(
            d.gen_shift(3),
            Err(Error::InsufficientDepth { .. })
        ));
        assert!(d.gen_shift(2).is_ok());
        assert!(d.gen_shift(0).is_err());
    }

    #[test]
    fn program_examples() {
        let x = expand(&ratio(13, 16), &q2(), 4).unwrap();
        let p = ShiftProgram::new(vec![Atom::Gen(2), Atom::Gen(2), Atom::Sigma]);
        let y = apply_program(&p, &x).unwrap();
        assert_eq!(y.value().unwrap(), ratio(1, 2));
        assert_eq!(y.value().unwrap(), x.shift(3).unwrap().value().unwrap());
        let py = apply_program(&p, &point(ratio(13, 16), q2())).unwrap();
        assert_eq!(py.value, ratio(1, 2));

        assert_eq!(apply_program(&ShiftProgram::identity(), &x).unwrap(), x);
    }

    #[test]
    fn program_error_names_atom() {
        let d = DigitString::new(q2(), vec![1, 0, 1], Tail::Truncated).unwrap();
        let p = ShiftProgram::new(vec![Atom::Sigma, Atom::Gen(3)]);
        match apply_program(&p, &d) {
            Err(Error::InsufficientDepth { context, .. }) => assert!(context.contains("atom 1")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn endpoint_jump_of_gen_shift() {
        // 1/2 in base 2: σ_1 sends [1]000... to 0 and [0]111... to 1.
        let zero = representation(&ratio(1, 2), &q2(), Representation::Zero, 64).unwrap();
        let max = representation(&ratio(1, 2), &q2(), Representation::Max, 64).unwrap();
        assert_eq!(zero.gen_shift(1).unwrap().value().unwrap(), ratio(0, 1));
        assert_eq!(max.gen_shift(1).unwrap().value().unwrap(), ratio(1, 1));
    }

    #[test]
    fn reconstruct_examples() {
        let r = reconstruct_identity(&ratio(5, 6), &fac(), 1).unwrap();
        assert!(r.holds);
        assert_eq!(r.shifted, ratio(2, 3));
        assert!(reconstruct_identity(&ratio(2, 9), &q2(), 0).unwrap().holds);
        let r = reconstruct_identity(&ratio(5, 8), &q2(), 2).unwrap();
        assert!(r.holds);
        assert_eq!(r.shifted, ratio(1, 2));
        // Non-terminating over a non-periodic base falls back to single steps.
        let odd = QSequence::explicit(vec![3, 5]).unwrap();
        assert!(reconstruct_identity(&ratio(1, 2), &odd, 4).unwrap().holds);
    }
}
