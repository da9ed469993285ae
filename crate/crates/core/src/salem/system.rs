use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, format};
use crate::{Error, Rational, Result};

/// Horizon used for rule-based reorders when none is declared.
pub const DEFAULT_RULE_HORIZON: usize = 1 << 16;

/// The digit-reading order `(n_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Reorder {
    /// `n_k = k`.
    #[default]
    Identity,
    /// Explicit `n_1, n_2, ...`; the list length bounds the horizon.
    List { values: Vec<usize> },
    /// A named bijective rule.
    Rule {
        name: RuleName,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        block: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleName {
    /// Reverses each consecutive block of `block` positions.
    BlockReverse,
}

/// Which of the admissibility conditions failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// Malformed dimensions.
    Shape,
    /// Every `p_{i,n}` lies in (-1, 1).
    Bounds,
    /// Every column sums to 1.
    Sum,
    /// Products of `|p|` along any digit path vanish.
    Vanishing,
    /// `0 < β_{i,n} < 1` for `i >= 1`.
    Beta,
    /// `(n_k)` is not injective and covering up to the horizon.
    Reorder,
}

impl Condition {
    pub fn label(self) -> &'static str {
        match self {
            Condition::Shape => "shape",
            Condition::Bounds => "1",
            Condition::Sum => "2",
            Condition::Vanishing => "3",
            Condition::Beta => "4",
            Condition::Reorder => "reorder",
        }
    }
}

/// First violated condition, with where it failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: Condition,
    /// Digit `i`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digit: Option<usize>,
    /// Column (digit position) `n`, 1-indexed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
    pub value: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition {} violated", self.condition.label())?;
        if let Some(i) = self.digit {
            write!(f, " at digit {i}")?;
        }
        if let Some(n) = self.position {
            write!(f, " in column {n}")?;
        }
        write!(f, " (value {})", self.value)
    }
}

fn violation(
    condition: Condition,
    digit: Option<usize>,
    position: Option<usize>,
    value: impl Into<String>,
) -> Error {
    Error::Validation(Violation {
        condition,
        digit,
        position,
        value: value.into(),
    })
}

/// Coefficients of a Salem system over q-ary digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coefficients {
    /// One tuple `(p_0, ..., p_{q-1})` used at every position.
    Tuple(Vec<Rational>),
    /// Column `n` holds `p_{·,n}`; columns repeat cyclically.
    Matrix(Vec<Vec<Rational>>),
}

/// Unvalidated system description, as read from JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SystemRepr", into = "SystemRepr")]
pub struct SalemSystem {
    pub q: usize,
    pub coefficients: Coefficients,
    pub reorder: Reorder,
    pub horizon: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemRepr {
    q: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    columns: Option<Vec<Vec<String>>>,
    #[serde(default)]
    reorder: Reorder,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    horizon: Option<usize>,
}

fn parse_all(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| rational::parse(s)).collect()
}

impl TryFrom<SystemRepr> for SalemSystem {
    type Error = Error;

    fn try_from(r: SystemRepr) -> Result<Self> {
        let coefficients = match (r.p, r.columns) {
            (Some(p), None) => Coefficients::Tuple(parse_all(&p)?),
            (None, Some(cols)) => {
                Coefficients::Matrix(cols.iter().map(|c| parse_all(c)).collect::<Result<_>>()?)
            }
            _ => {
                return Err(Error::Parse(
                    "system needs exactly one of \"p\" or \"columns\"".into(),
                ))
            }
        };
        Ok(SalemSystem {
            q: r.q,
            coefficients,
            reorder: r.reorder,
            horizon: r.horizon,
        })
    }
}

impl From<SalemSystem> for SystemRepr {
    fn from(s: SalemSystem) -> Self {
        let fmt_all = |v: &[Rational]| v.iter().map(format).collect::<Vec<_>>();
        let (p, columns) = match &s.coefficients {
            Coefficients::Tuple(p) => (Some(fmt_all(p)), None),
            Coefficients::Matrix(c) => (None, Some(c.iter().map(|c| fmt_all(c)).collect())),
        };
        SystemRepr {
            q: s.q,
            p,
            columns,
            reorder: s.reorder,
            horizon: s.horizon,
        }
    }
}

impl SalemSystem {
    pub fn tuple(p: Vec<Rational>) -> Self {
        SalemSystem {
            q: p.len(),
            coefficients: Coefficients::Tuple(p),
            reorder: Reorder::Identity,
            horizon: None,
        }
    }

    pub fn with_reorder(mut self, reorder: Reorder, horizon: Option<usize>) -> Self {
        self.reorder = reorder;
        self.horizon = horizon;
        self
    }

    /// Checks the admissibility conditions and derives the β values.
    pub fn validate(&self) -> Result<SalemFunction> {
        if self.q < 2 {
            return Err(violation(
                Condition::Shape,
                None,
                None,
                format!("q = {}", self.q),
            ));
        }
        let (raw, matrix) = match &self.coefficients {
            Coefficients::Tuple(p) => (vec![p.clone()], false),
            Coefficients::Matrix(c) => (c.clone(), true),
        };
        if raw.is_empty() {
            return Err(violation(Condition::Shape, None, None, "no columns"));
        }
        for (n, col) in raw.iter().enumerate() {
            if col.len() != self.q {
                return Err(violation(
                    Condition::Shape,
                    None,
                    Some(n + 1),
                    format!("{} coefficients for q = {}", col.len(), self.q),
                ));
            }
        }
        let one = Rational::one();
        for (n, col) in raw.iter().enumerate() {
            if let Some((i, p)) = col.iter().enumerate().find(|(_, p)| p.abs() >= one) {
                return Err(violation(
                    Condition::Bounds,
                    Some(i),
                    Some(n + 1),
                    format(p),
                ));
            }
        }
        for (n, col) in raw.iter().enumerate() {
            let s: Rational = col.iter().sum();
            if s != one {
                return Err(violation(Condition::Sum, None, Some(n + 1), format(&s)));
            }
        }
        // With finitely many (cyclic) columns, each max |p| < 1 makes every
        // path product decay at least geometrically.
        let mut rho = Rational::zero();
        for (n, col) in raw.iter().enumerate() {
            let m = col.iter().map(|p| p.abs()).max().unwrap();
            if m >= one {
                return Err(violation(
                    Condition::Vanishing,
                    None,
                    Some(n + 1),
                    format(&m),
                ));
            }
            rho = rho.max(m);
        }
        let mut columns = Vec::with_capacity(raw.len());
        for (n, p) in raw.into_iter().enumerate() {
            let mut beta = Vec::with_capacity(self.q);
            let mut acc = Rational::zero();
            for (i, pi) in p.iter().enumerate() {
                if i > 0 && (acc <= Rational::zero() || acc >= one) {
                    return Err(violation(
                        Condition::Beta,
                        Some(i),
                        Some(n + 1),
                        format(&acc),
                    ));
                }
                beta.push(acc.clone());
                acc += pi;
            }
            columns.push(Column { p, beta });
        }
        let reorder = ValidatedReorder::new(&self.reorder, self.horizon)?;
        let beta_max = columns
            .iter()
            .flat_map(|c| c.beta.iter())
            .max()
            .cloned()
            .unwrap_or_default();
        let g_bound = &beta_max / (&one - &rho);
        Ok(SalemFunction {
            q: self.q,
            columns,
            matrix,
            reorder,
            rho,
            g_bound,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Column {
    pub p: Vec<Rational>,
    pub beta: Vec<Rational>,
}

/// `(n_k)` after the injectivity/coverage check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ValidatedReorder {
    rule: Reorder,
    /// `None` means unbounded.
    horizon: Option<usize>,
}

impl ValidatedReorder {
    fn new(rule: &Reorder, declared: Option<usize>) -> Result<Self> {
        let horizon = match rule {
            Reorder::Identity => {
                return Ok(ValidatedReorder {
                    rule: rule.clone(),
                    horizon: declared,
                })
            }
            Reorder::List { values } => {
                let h = declared.unwrap_or(values.len());
                if h > values.len() {
                    return Err(violation(
                        Condition::Reorder,
                        None,
                        None,
                        format!("horizon {h} exceeds list length {}", values.len()),
                    ));
                }
                h
            }
            Reorder::Rule {
                name: RuleName::BlockReverse,
                block,
            } => {
                let b = block.unwrap_or(2);
                if b == 0 {
                    return Err(violation(Condition::Reorder, None, None, "block size 0"));
                }

                declared.unwrap_or(DEFAULT_RULE_HORIZON / b * b)
            }
        };
        let out = ValidatedReorder {
            rule: rule.clone(),
            horizon: Some(horizon),
        };
        let mut seen = HashSet::with_capacity(horizon);
        for k in 1..=horizon {
            let n = out.raw(k);
            if n == 0 || n > horizon || !seen.insert(n) {
                return Err(violation(
                    Condition::Reorder,
                    None,
                    Some(k),
                    format!("n_{k} = {n} breaks a permutation of 1..={horizon}"),
                ));
            }
        }
        Ok(out)
    }

    fn raw(&self, k: usize) -> usize {
        match &self.rule {
            Reorder::Identity => k,
            Reorder::List { values } => values[k - 1],
            Reorder::Rule {
                name: RuleName::BlockReverse,
                block,
            } => {
                let b = block.unwrap_or(2);
                let start = (k - 1) / b * b;
                start + b - (k - 1 - start)
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rule == Reorder::Identity
    }

    pub fn horizon(&self) -> Option<usize> {
        self.horizon
    }

    /// `n_k`, refusing past the horizon.
    pub fn n(&self, k: usize) -> Result<usize> {
        match self.horizon {
            Some(h) if k > h && !self.is_identity() => {
                Err(Error::depth("digit reorder (n_k) past its horizon", k, h))
            }
            _ => Ok(self.raw(k)),
        }
    }

    /// Smallest `K` with `{n_1, ..., n_K} ⊇ {1, ..., len}`.
    pub fn covering_prefix(&self, len: usize) -> Result<usize> {
        if self.is_identity() || len == 0 {
            return Ok(len);
        }
        let mut missing = len;
        let mut k = 0;
        while missing > 0 {
            k += 1;
            if self.n(k)? <= len {
                missing -= 1;
            }
        }
        Ok(k)
    }
}

/// A validated generalized Salem function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SalemFunction {
    pub(crate) q: usize,
    pub(crate) columns: Vec<Column>,
    pub(crate) matrix: bool,
    pub(crate) reorder: ValidatedReorder,
    /// Largest `|p_{i,n}|`.
    pub(crate) rho: Rational,
    /// Bound on `|g|`: `max β / (1 - rho)`.
    pub(crate) g_bound: Rational,
}

impl SalemFunction {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn is_matrix(&self) -> bool {
        self.matrix
    }

    /// `(β_{0,n}, ..., β_{q-1,n})`.
    pub fn betas(&self, n: usize) -> &[Rational] {
        &self.column(n).beta
    }

    pub fn coefficients(&self, n: usize) -> &[Rational] {
        &self.column(n).p
    }

    /// Number of distinct coefficient columns; they repeat cyclically.
    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    pub(crate) fn column(&self, n: usize) -> &Column {
        &self.columns[(n - 1) % self.columns.len()]
    }

    pub fn max_abs_p(&self) -> &Rational {
        &self.rho
    }

    pub fn value_bound(&self) -> &Rational {
        &self.g_bound
    }

    pub fn reorder_horizon(&self) -> Option<usize> {
        self.reorder.horizon()
    }

    /// `n_k`.
    pub fn position(&self, k: usize) -> Result<usize> {
        self.reorder.n(k)
    }

    /// Smallest `K` with `rho^K < tol`.
    pub fn terms_for(&self, tol: &Rational) -> Result<usize> {
        if !tol.is_positive() {
            return Err(Error::domain("tolerance must be positive"));
        }
        if *tol > Rational::one() {
            return Ok(0);
        }
        let (r, t) = (crate::Scalar::to_f64(&self.rho), crate::Scalar::to_f64(tol));
        let mut k = if r > 0.0 && t > 0.0 {
            ((t.ln() / r.ln()).ceil().max(0.0) as usize).saturating_sub(1)
        } else {
            0
        };
        let mut pow = num_traits::pow(self.rho.clone(), k);
        while pow >= *tol {
            pow *= &self.rho;
            k += 1;
        }
        while k > 0 && &pow / &self.rho < *tol {
            pow /= &self.rho;
            k -= 1;
        }
        Ok(k)
    }
}
