use rand::Rng;
use rayon::prelude::*;

use super::system::SalemFunction;
use crate::numeral::{DigitString, QSequence, Tail, DEFAULT_PROBE};
use crate::sampling::{run_chunks, Estimate};
use crate::shifts::{apply_program, representation, Representation, ShiftProgram};
use crate::{Error, Rational, Result, Scalar};

/// Value of the Salem function at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct SalemValue<T> {
    pub value: T,
    /// Bound on `|g(x) - value|`; zero when exact.
    pub err_bound: T,
    /// Series terms summed explicitly.
    pub terms: usize,
    pub exact: bool,
}

/// Coefficients converted to a scalar type.
pub struct Coeffs<T> {
    p: Vec<Vec<T>>,
    beta: Vec<Vec<T>>,
    g_bound: T,
}

impl<T> Coeffs<T> {
    fn col(&self, n: usize) -> (&[T], &[T]) {
        let i = (n - 1) % self.p.len();
        (&self.p[i], &self.beta[i])
    }
}

/// One row of an evaluation table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub x: Rational,
    pub g: Rational,
    pub err_bound: Rational,
}

/// Grid for [`SalemFunction::table`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Grid {
    Points(Vec<Rational>),
    /// `k/n` for `k = 0..=n`.
    Uniform(u64),
}

impl Grid {
    pub fn points(&self) -> Result<Vec<Rational>> {
        match self {
            Grid::Points(p) => Ok(p.clone()),
            Grid::Uniform(0) => Err(Error::domain("uniform grid needs n >= 1")),
            Grid::Uniform(n) => Ok((0..=*n)
                .map(|k| Rational::new(k.into(), (*n).into()))
                .collect()),
        }
    }
}

/// g on both representations of a point.
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointProbe {
    pub zero: SalemValue<Rational>,
    /// Absent when the point has a single representation.
    pub max: Option<SalemValue<Rational>>,
}

impl EndpointProbe {
    /// Jump `g(MAX form) - g(ZERO form)` when both values are exact.
    pub fn jump(&self) -> Option<Rational> {
        let max = self.max.as_ref()?;
        (max.exact && self.zero.exact).then(|| &max.value - &self.zero.value)
    }
}

/// Left side minus right side of the k-th functional equation.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual<T> {
    pub value: T,
    /// Combined truncation error of both sides.
    pub err_bound: T,
}

impl SalemFunction {
    pub fn coeffs<T: Scalar>(&self) -> Coeffs<T> {
        let conv = |v: &[Rational]| v.iter().map(T::from_rational).collect::<Vec<T>>();
        Coeffs {
            p: self.columns.iter().map(|c| conv(&c.p)).collect(),
            beta: self.columns.iter().map(|c| conv(&c.beta)).collect(),
            g_bound: T::from_rational(&self.g_bound),
        }
    }

    /// The q-ary base this function reads its argument in.
    pub fn base(&self) -> QSequence {
        QSequence::constant(self.q as u64).expect("validated q >= 2")
    }

    fn check_base(&self, x: &DigitString) -> Result<()> {
        match x.base().as_constant() {
            Some(q) if q == self.q as u64 => Ok(()),
            _ => Err(Error::domain(format!(
                "argument must be written in base {}",
                self.q
            ))),
        }
    }

    /// Partial sum `Σ_{k≤terms} β_{α_{n_k}} Π_{j<k} p_{α_{n_j}}` and the
    /// running product after it.
    fn series<T: Scalar>(
        &self,
        c: &Coeffs<T>,
        terms: usize,
        mut digit: impl FnMut(usize) -> Result<u64>,
    ) -> Result<(T, T)> {
        let mut sum = T::zero();
        let mut prod = T::one();
        for k in 1..=terms {
            let n = self.reorder.n(k)?;
            let d = digit(n)? as usize;
            let (p, beta) = c.col(n);
            sum = sum + beta[d].clone() * prod.clone();
            prod = prod * p[d].clone();
        }
        Ok((sum, prod))
    }

    fn digit_of(x: &DigitString) -> impl FnMut(usize) -> Result<u64> + '_ {
        move |n| {
            x.digit(n)
                .ok_or_else(|| Error::depth("Salem series digit", n, x.known_depth().unwrap_or(0)))
        }
    }

    /// g(x), summing until `(max |p|)^K < tol` unless the tail of `x` lets
    /// the series be closed exactly.
    pub fn eval<T: Scalar>(&self, x: &DigitString, tol: &Rational) -> Result<SalemValue<T>> {
        let c = self.coeffs::<T>();
        self.eval_with(&c, x, tol)
    }

    pub fn eval_with<T: Scalar>(
        &self,
        c: &Coeffs<T>,
        x: &DigitString,
        tol: &Rational,
    ) -> Result<SalemValue<T>> {
        self.check_base(x)?;
        if let Some(v) = self.eval_closed(c, x)? {
            return Ok(v);
        }
        let terms = self.terms_for(tol)?;
        let (value, prod) = self.series(c, terms, Self::digit_of(x))?;
        Ok(SalemValue {
            value,
            err_bound: prod.abs() * c.g_bound.clone(),
            terms,
            exact: false,
        })
    }

    /// Exact value when the digits read after a finite point are constant
    /// (or, in reading order, periodic).
    fn eval_closed<T: Scalar>(
        &self,
        c: &Coeffs<T>,
        x: &DigitString,
    ) -> Result<Option<SalemValue<T>>> {
        let x = match x.tail() {
            Tail::Zero => x.canonical(),
            _ => x.clone(),
        };
        let len = x.prefix().len();
        let exact = |value: T, terms: usize| SalemValue {
            value,
            err_bound: T::zero(),
            terms,
            exact: true,
        };
        let constant_tail = match x.tail() {
            // β_0 = 0 at every position, so the remaining terms vanish.
            Tail::Zero => Some(0),
            Tail::Max => Some(self.q as u64 - 1),
            Tail::Periodic(cyc) if cyc.iter().all(|&d| d == cyc[0]) => Some(cyc[0]),
            _ => None,
        };
        if let Some(tail_digit) = constant_tail {
            if tail_digit != 0 && self.matrix {
                return Ok(None);
            }
            let terms = match self.reorder.covering_prefix(len) {
                Ok(k) => k,
                Err(Error::InsufficientDepth { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            let (sum, prod) = self.series(c, terms, Self::digit_of(&x))?;
            if tail_digit == 0 {
                return Ok(Some(exact(sum, terms)));
            }
            let (p, beta) = c.col(1);
            let d = tail_digit as usize;
            let rest = beta[d].clone() / (T::one() - p[d].clone());
            return Ok(Some(exact(sum + prod * rest, terms)));
        }
        if let (Tail::Periodic(cycle), false, true) =
            (x.tail(), self.matrix, self.reorder.is_identity())
        {
            let (sum, prod) = self.series(c, len, Self::digit_of(&x))?;
            let (p, beta) = c.col(1);
            let mut block_sum = T::zero();
            let mut block_prod = T::one();
            for &d in cycle {
                let d = d as usize;
                block_sum = block_sum + beta[d].clone() * block_prod.clone();
                block_prod = block_prod * p[d].clone();
            }
            let rest = block_sum / (T::one() - block_prod);
            return Ok(Some(exact(sum + prod * rest, len + cycle.len())));
        }
        Ok(None)
    }

    /// g at an exact rational, read in its canonical representation.
    pub fn eval_rational<T: Scalar>(&self, x: &Rational, tol: &Rational) -> Result<SalemValue<T>> {
        let d = DigitString::from_rational(x, &self.base(), DEFAULT_PROBE)?;
        self.eval(&d, tol)
    }

    /// Points `σ_{n_{k-1}}∘…∘σ_{n_1}(x)` and `σ_{n_k}∘…∘σ_{n_1}(x)`, where
    /// each step removes the digit sitting at original position `n_j`.
    pub fn orbit_pair(&self, x: &DigitString, k: usize) -> Result<(DigitString, DigitString)> {
        if k == 0 {
            return Err(Error::domain("functional equations are indexed from k = 1"));
        }
        let positions: Vec<usize> = (1..=k).map(|j| self.reorder.n(j)).collect::<Result<_>>()?;
        let before = ShiftProgram::deleting_original_positions(&positions[..k - 1])?;
        let after = ShiftProgram::deleting_original_positions(&positions)?;
        Ok((apply_program(&before, x)?, apply_program(&after, x)?))
    }

    /// `f(y_{k-1}) - β_{α_{n_k}} - p_{α_{n_k}} f(y_k)` for an arbitrary
    /// evaluator `f`.
    pub fn residual_of<T: Scalar>(
        &self,
        x: &DigitString,
        k: usize,
        f: impl Fn(&DigitString) -> Result<SalemValue<T>>,
    ) -> Result<Residual<T>> {
        self.check_base(x)?;
        let (before, after) = self.orbit_pair(x, k)?;
        let n = self.reorder.n(k)?;
        let d = Self::digit_of(x)(n)? as usize;
        let col = self.column(n);
        let p = T::from_rational(&col.p[d]);
        let beta = T::from_rational(&col.beta[d]);
        let left = f(&before)?;
        let right = f(&after)?;
        Ok(Residual {
            value: left.value - beta - p.clone() * right.value,
            err_bound: left.err_bound + p.abs() * right.err_bound,
        })
    }

    /// Residual of the k-th functional equation for this function.
    pub fn residual<T: Scalar>(
        &self,
        x: &DigitString,
        k: usize,
        tol: &Rational,
    ) -> Result<Residual<T>> {
        let c = self.coeffs::<T>();
        self.residual_of(x, k, |y| self.eval_with(&c, y, tol))
    }

    /// `∫_0^1 g = (β_1 + … + β_{q-1}) / (q - 1)`.
    pub fn integral(&self) -> Result<Rational> {
        if self.matrix {
            return Err(Error::Unsupported(
                "closed-form integral is only available for a fixed coefficient tuple".into(),
            ));
        }
        let s: Rational = self.columns[0].beta.iter().sum();
        Ok(s / Rational::from_integer((self.q as i64 - 1).into()))
    }

    /// Monte-Carlo mean of g over uniform x (uniform independent digits),
    /// in double precision.
    pub fn integral_mc(&self, samples: u64, seed: u64, tol: &Rational) -> Result<Estimate> {
        if samples == 0 {
            return Err(Error::domain("need at least one sample"));
        }
        let terms = self.terms_for(tol)?;
        let positions: Vec<usize> = (1..=terms)
            .map(|k| self.reorder.n(k))
            .collect::<Result<_>>()?;
        let c = self.coeffs::<f64>();
        let q = self.q as u64;
        // Each position is read once, so digits are drawn as needed and a
        // sample stops once its own remainder bound drops below `tol`.
        let cutoff = Scalar::to_f64(tol) / Scalar::to_f64(&self.g_bound).max(f64::MIN_POSITIVE);
        let parts = run_chunks(samples, seed, |rng, count| {
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                let mut sum = 0.0;
                let mut prod = 1.0;
                for &n in &positions {
                    let d = rng.gen_range(0..q) as usize;
                    let (p, beta) = c.col(n);
                    sum += beta[d] * prod;
                    prod *= p[d];
                    if f64::abs(prod) < cutoff {
                        break;
                    }
                }
                s += sum;
                s2 += sum * sum;
            }
            (s, s2)
        });
        let (s, s2) = parts
            .into_iter()
            .fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d));
        Ok(Estimate::from_moments(s, s2, samples))
    }

    /// g over a grid, exactly where possible; rows follow grid order.
    pub fn table(&self, grid: &Grid, tol: &Rational) -> Result<Vec<TableRow>> {
        let points = grid.points()?;
        let c = self.coeffs::<Rational>();
        let base = self.base();
        points
            .into_par_iter()
            .map(|x| {
                let d = DigitString::from_rational(&x, &base, DEFAULT_PROBE)?;
                let v = self.eval_with(&c, &d, tol)?;
                Ok(TableRow {
                    x,
                    g: v.value,
                    err_bound: v.err_bound,
                })
            })
            .collect()
    }

    /// g on the ZERO-tail and MAX-tail representations of `x`.
    pub fn endpoint_probe(&self, x: &Rational, tol: &Rational) -> Result<EndpointProbe> {
        let base = self.base();
        let zero = representation(x, &base, Representation::Zero, DEFAULT_PROBE)?;
        let max = representation(x, &base, Representation::Max, DEFAULT_PROBE)?;
        let c = self.coeffs::<Rational>();
        Ok(EndpointProbe {
            max: if max == zero {
                None
            } else {
                Some(self.eval_with(&c, &max, tol)?)
            },
            zero: self.eval_with(&c, &zero, tol)?,
        })
    }
}

/// Default evaluation tolerance, 10^-12.
pub fn default_tolerance() -> Rational {
    Rational::new(1.into(), 1_000_000_000_000i64.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeral::expand;
    use crate::rational::ratio;
    use crate::salem::{Reorder, RuleName, SalemSystem};
    use num_traits::Signed;

    fn salem(p: &[(i64, i64)]) -> SalemFunction {
        SalemSystem::tuple(p.iter().map(|&(a, b)| ratio(a, b)).collect())
            .validate()
            .unwrap()
    }

    fn tol() -> Rational {
        default_tolerance()
    }

    #[test]
    fn eval_examples() {
        let id = salem(&[(1, 2), (1, 2)]);
        let v: SalemValue<Rational> = id.eval_rational(&ratio(5, 8), &tol()).unwrap();
        assert!(v.exact);
        assert_eq!(v.value, ratio(5, 8));

        let g = salem(&[(1, 3), (2, 3)]);
        let v: SalemValue<Rational> = g.eval_rational(&ratio(1, 2), &tol()).unwrap();
        assert_eq!(v.value, ratio(1, 3));
        assert!(v.exact);

        for f in [g.clone(), salem(&[(7, 10), (-1, 5), (1, 2)])] {
            let zero: SalemValue<Rational> = f.eval_rational(&ratio(0, 1), &tol()).unwrap();
            let one: SalemValue<Rational> = f.eval_rational(&ratio(1, 1), &tol()).unwrap();
            assert_eq!((zero.value, one.value), (ratio(0, 1), ratio(1, 1)));
        }
    }

    #[test]
    fn periodic_argument_is_closed_exactly() {
        // 1/3 = 0.(01)_2: g = (β_0 + p_0 β_1) / (1 - p_0 p_1) = (1/9) / (7/9) = 1/7.
        let g = salem(&[(1, 3), (2, 3)]);
        let v: SalemValue<Rational> = g.eval_rational(&ratio(1, 3), &tol()).unwrap();
        assert!(v.exact);
        assert_eq!(v.value, ratio(1, 7));
        let f: SalemValue<f64> = g.eval_rational(&ratio(1, 3), &tol()).unwrap();
        assert!((f.value - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn truncated_series_bound_holds() {
        let g = salem(&[(1, 3), (2, 3)]);
        let x = expand(&ratio(1, 3), &g.base(), 80).unwrap();
        let x = DigitString::new(g.base(), x.prefix().to_vec(), Tail::Truncated).unwrap();
        let v: SalemValue<Rational> = g.eval(&x, &ratio(1, 1_000_000)).unwrap();
        assert!(!v.exact);
        assert!(v.terms >= 34);
        let err = (&v.value - ratio(1, 7)).abs();
        assert!(err <= v.err_bound);
        let short = DigitString::new(g.base(), vec![0, 1], Tail::Truncated).unwrap();
        assert!(matches!(
            g.eval::<f64>(&short, &tol()),
            Err(Error::InsufficientDepth { .. })
        ));
    }

    #[test]
    fn base_mismatch_is_rejected() {
        let g = salem(&[(1, 3), (2, 3)]);
        let x = DigitString::zero(QSequence::constant(3).unwrap());
        assert!(matches!(g.eval::<f64>(&x, &tol()), Err(Error::Domain(_))));
    }

    #[test]
    fn residual_examples() {
        let g = salem(&[(1, 3), (2, 3)]);
        let t = tol();
        for (x, k) in [(ratio(5, 8), 1), (ratio(1, 3), 3)] {
            let d = DigitString::from_rational(&x, &g.base(), 64).unwrap();
            let r: Residual<Rational> = g.residual(&d, k, &t).unwrap();
            assert!(r.value.abs() <= &t * ratio(2, 1), "{x} {k}");
        }
    }

    #[test]
    fn residual_detects_perturbation() {
        let g = salem(&[(1, 3), (2, 3)]);
        let t = tol();
        let eps = ratio(1, 1000);
        let x = DigitString::from_rational(&ratio(5, 8), &g.base(), 64).unwrap();
        let c = g.coeffs::<Rational>();
        let r = g
            .residual_of(&x, 1, |y| {
                let mut v = g.eval_with(&c, y, &t)?;
                v.value += &eps;
                Ok(v)
            })
            .unwrap();
        // α_1 = 1, so the residual is ε(1 - p_1) = ε/3.
        assert_eq!(r.value, &eps * ratio(1, 3));
    }

    #[test]
    fn integral_examples() {
        assert_eq!(salem(&[(1, 2), (1, 2)]).integral().unwrap(), ratio(1, 2));
        assert_eq!(salem(&[(1, 3), (2, 3)]).integral().unwrap(), ratio(1, 3));
        assert_eq!(
            salem(&[(7, 10), (-1, 5), (1, 2)]).integral().unwrap(),
            ratio(3, 5)
        );
    }

    #[test]
    fn integral_mc_is_reproducible() {
        let g = salem(&[(1, 3), (2, 3)]);
        let a = g.integral_mc(50_000, 3, &ratio(1, 1_000_000)).unwrap();
        let b = g.integral_mc(50_000, 3, &ratio(1, 1_000_000)).unwrap();
        assert_eq!(a, b);
        assert!(a.within(1.0 / 3.0, 4.0), "{a:?}");
        assert!(g.integral_mc(0, 3, &tol()).is_err());
    }

    #[test]
    fn table_examples() {
        let g = salem(&[(1, 3), (2, 3)]);
        let rows = g
            .table(
                &Grid::Points(vec![ratio(0, 1), ratio(1, 2), ratio(1, 1)]),
                &tol(),
            )
            .unwrap();
        let gs: Vec<Rational> = rows.iter().map(|r| r.g.clone()).collect();
        assert_eq!(gs, vec![ratio(0, 1), ratio(1, 3), ratio(1, 1)]);
        assert!(rows.iter().all(|r| r.err_bound == ratio(0, 1)));

        let id = salem(&[(1, 2), (1, 2)]);
        for row in id.table(&Grid::Uniform(32), &tol()).unwrap() {
            assert_eq!(row.g, row.x);
        }
        assert!(id.table(&Grid::Uniform(0), &tol()).is_err());
    }

    #[test]
    fn endpoint_probe_identity_order_is_continuous() {
        let g = salem(&[(1, 3), (2, 3)]);
        let p = g.endpoint_probe(&ratio(3, 8), &tol()).unwrap();
        assert_eq!(p.jump(), Some(ratio(0, 1)));
        let single = g.endpoint_probe(&ratio(1, 3), &tol()).unwrap();
        assert!(single.max.is_none());
    }

    #[test]
    fn reordered_reading_can_jump() {
        // Reading digit 2 before digit 1 makes 1/2 = [1]000... = [0]111... disagree.
        let g = SalemSystem::tuple(vec![ratio(1, 3), ratio(2, 3)])
            .with_reorder(
                Reorder::Rule {
                    name: RuleName::BlockReverse,
                    block: Some(2),
                },
                None,
            )
            .validate()
            .unwrap();
        let p = g.endpoint_probe(&ratio(1, 2), &tol()).unwrap();
        let jump = p.jump().unwrap();
        assert_ne!(jump, ratio(0, 1));
        // ZERO form reads 0,1,0,0,...: β_0 + p_0 β_1 = 1/9.
        assert_eq!(p.zero.value, ratio(1, 9));
        // MAX form reads 1,0,1,1,...: β_1 + p_1 β_0 + p_1 p_0 · 1 = 1/3 + 2/9.
        assert_eq!(p.max.unwrap().value, ratio(5, 9));
    }

    #[test]
    fn matrix_with_equal_columns_matches_tuple() {
        let tuple = salem(&[(1, 3), (2, 3)]);
        let col = vec![ratio(1, 3), ratio(2, 3)];
        let matrix = SalemSystem {
            q: 2,
            coefficients: crate::salem::Coefficients::Matrix(vec![col.clone(), col]),
            reorder: Reorder::Identity,
            horizon: None,
        }
        .validate()
        .unwrap();
        for x in [ratio(5, 8), ratio(1, 3), ratio(0, 1)] {
            let a: SalemValue<f64> = tuple.eval_rational(&x, &tol()).unwrap();
            let b: SalemValue<f64> = matrix.eval_rational(&x, &tol()).unwrap();
            assert!((a.value - b.value).abs() < 1e-11);
        }
        assert!(matches!(matrix.integral(), Err(Error::Unsupported(_))));
    }
}
