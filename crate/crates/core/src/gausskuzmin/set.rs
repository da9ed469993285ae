use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::numeral::QSequence;
use crate::shifts::{apply_program, Point, ShiftProgram};
use crate::{Error, Rational, Result};

/// Which side of the threshold the set keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `lhs(z) < rhs`.
    #[default]
    Less,
    /// `lhs(z) >= rhs`, the complement.
    GreaterOrEqual,
}

/// Right-hand side of the defining inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Threshold {
    Const(#[serde(with = "crate::rational")] Rational),
    /// A program applied to the same z.
    ProgramOnZ(ShiftProgram),
    /// A program applied to a fixed point x.
    ProgramOnX {
        program: ShiftProgram,
        #[serde(with = "crate::rational")]
        x: Rational,
    },
}

/// `{z in [0,1]: lhs(z) < rhs}`, digits read in base `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GkSetSpec {
    pub q: QSequence,
    pub lhs: ShiftProgram,
    pub rhs: Threshold,
    #[serde(default)]
    pub relation: Relation,
}

/// Lower and upper bounds on the Lebesgue measure of a set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MeasureBounds {
    #[serde(with = "crate::rational")]
    pub lower: Rational,
    #[serde(with = "crate::rational")]
    pub upper: Rational,
    pub depth: usize,
    /// Measure of the cylinders classified as fully inside or outside.
    #[serde(with = "crate::rational")]
    pub decided_mass: Rational,
}

impl MeasureBounds {
    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    /// `other` lies inside `self`.
    pub fn encloses(&self, other: &MeasureBounds) -> bool {
        self.lower <= other.lower && other.upper <= self.upper
    }
}

/// The right-hand side after resolving fixed points to numbers.
#[derive(Debug, Clone)]
pub(crate) enum Rhs {
    Const(Rational),
    Program(Vec<usize>),
}

/// A spec with both sides reduced to the digit positions they delete.
#[derive(Debug, Clone)]
pub(crate) struct Resolved {
    pub q: QSequence,
    pub lhs: Vec<usize>,
    pub rhs: Rhs,
    pub relation: Relation,
}

impl Resolved {
    /// Largest digit position either program reads.
    pub fn consumed(&self) -> usize {
        let l = self.lhs.iter().copied().max().unwrap_or(0);
        let r = match &self.rhs {
            Rhs::Program(d) => d.iter().copied().max().unwrap_or(0),
            Rhs::Const(_) => 0,
        };
        l.max(r)
    }

    pub fn required_depth(&self) -> usize {
        self.consumed() + 1
    }
}

fn unit_interval(x: &Rational, what: &str) -> Result<()> {
    if *x < Rational::zero() || *x > Rational::one() {
        return Err(Error::domain(format!("{what} {x} is outside [0, 1]")));
    }
    Ok(())
}

impl GkSetSpec {
    pub fn new(q: QSequence, lhs: ShiftProgram, rhs: Threshold) -> Self {
        GkSetSpec {
            q,
            lhs,
            rhs,
            relation: Relation::Less,
        }
    }

    /// `E_n(x) = {z: σⁿ(z) < x}`.
    pub fn sigma_power(q: QSequence, n: usize, x: Rational) -> Self {
        Self::new(q, ShiftProgram::sigma_power(n), Threshold::Const(x))
    }

    /// The same set with the relation flipped.
    pub fn complement(&self) -> Self {
        let mut c = self.clone();
        c.relation = match self.relation {
            Relation::Less => Relation::GreaterOrEqual,
            Relation::GreaterOrEqual => Relation::Less,
        };
        c
    }

    pub(crate) fn resolve(&self) -> Result<Resolved> {
        let lhs = self.lhs.deleted_positions()?;
        let rhs = match &self.rhs {
            Threshold::Const(c) => {
                unit_interval(c, "threshold")?;
                Rhs::Const(c.clone())
            }
            Threshold::ProgramOnZ(p) => Rhs::Program(p.deleted_positions()?),
            Threshold::ProgramOnX { program, x } => {
                unit_interval(x, "fixed point")?;
                let p = Point::new(x.clone(), self.q.clone())?;
                Rhs::Const(apply_program(program, &p)?.value)
            }
        };
        Ok(Resolved {
            q: self.q.clone(),
            lhs,
            rhs,
            relation: self.relation,
        })
    }

    /// Smallest depth accepted by [`crate::gausskuzmin::measure_bounds`].
    pub fn required_depth(&self) -> Result<usize> {
        Ok(self.resolve()?.required_depth())
    }
}
