use serde::{Deserialize, Serialize};

use super::bounds::measure_bounds;
use super::set::{GkSetSpec, MeasureBounds, Relation, Threshold};
use crate::numeral::QSequence;
use crate::shifts::{Atom, ShiftProgram};
use crate::{Error, Rational, Result};

/// An integer-valued function of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum IndexRule {
    /// `a k + b`.
    Affine {
        a: i64,
        b: i64,
    },
    /// `values[k-1]`.
    Table {
        values: Vec<u64>,
    },
    Const {
        value: u64,
    },
}

impl IndexRule {
    pub fn identity() -> Self {
        IndexRule::Affine { a: 1, b: 0 }
    }

    pub fn at(&self, k: u64) -> Result<usize> {
        match self {
            IndexRule::Affine { a, b } => {
                let v = a * k as i64 + b;
                usize::try_from(v)
                    .map_err(|_| Error::domain(format!("index rule gives {v} at k = {k}")))
            }
            IndexRule::Table { values } => k
                .checked_sub(1)
                .and_then(|i| values.get(i as usize))
                .map(|&v| v as usize)
                .ok_or_else(|| Error::domain(format!("index table has no entry for k = {k}"))),
            IndexRule::Const { value } => Ok(*value as usize),
        }
    }
}

/// A shift program depending on the scan parameter `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProgramFamily {
    /// `σ^{ψ(n)}`.
    SigmaPower { power: IndexRule },
    /// `σ_{ψ(L)} ∘ … ∘ σ_{ψ(1)}` with `L = length(n)`, or `L = n` when
    /// no length rule is given.
    GenRun {
        index: IndexRule,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        length: Option<IndexRule>,
    },
    /// The same program for every `n`.
    Fixed { program: ShiftProgram },
}

impl ProgramFamily {
    pub fn at(&self, n: u64) -> Result<ShiftProgram> {
        match self {
            ProgramFamily::SigmaPower { power } => Ok(ShiftProgram::sigma_power(power.at(n)?)),
            ProgramFamily::GenRun { index, length } => {
                let len = match length {
                    Some(rule) => rule.at(n)? as u64,
                    None => n,
                };
                let word = (1..=len)
                    .map(|k| match index.at(k)? {
                        0 => Err(Error::domain(format!("shift index 0 at k = {k}"))),
                        m => Ok(Atom::Gen(m)),
                    })
                    .collect::<Result<_>>()?;
                Ok(ShiftProgram::new(word))
            }
            ProgramFamily::Fixed { program } => Ok(program.clone()),
        }
    }
}

/// Right-hand side of a scanned family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FamilyThreshold {
    Const(#[serde(with = "crate::rational")] Rational),
    FamilyOnZ(ProgramFamily),
    FamilyOnX {
        program: ProgramFamily,
        #[serde(with = "crate::rational")]
        x: Rational,
    },
}

fn default_offset() -> usize {
    6
}

/// A family of sets indexed by `n = from..=to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ScanFamily {
    pub q: QSequence,
    pub lhs: ProgramFamily,
    pub rhs: FamilyThreshold,
    #[serde(default)]
    pub relation: Relation,
    pub from: u64,
    pub to: u64,
    /// Keep only `n ≡ 1 (mod c)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    /// Depth used is the largest digit position read plus this offset.
    #[serde(default = "default_offset")]
    pub depth_offset: usize,
}

/// One row of a scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub n: u64,
    pub bounds: Result<MeasureBounds>,
}

impl ScanFamily {
    pub fn at(&self, n: u64) -> Result<GkSetSpec> {
        let rhs = match &self.rhs {
            FamilyThreshold::Const(c) => Threshold::Const(c.clone()),
            FamilyThreshold::FamilyOnZ(f) => Threshold::ProgramOnZ(f.at(n)?),
            FamilyThreshold::FamilyOnX { program, x } => Threshold::ProgramOnX {
                program: program.at(n)?,
                x: x.clone(),
            },
        };
        Ok(GkSetSpec {
            q: self.q.clone(),
            lhs: self.lhs.at(n)?,
            rhs,
            relation: self.relation,
        })
    }

    /// Parameter values that pass the filter.
    pub fn parameters(&self) -> Result<Vec<u64>> {
        if self.from > self.to {
            return Err(Error::domain(format!(
                "empty range {}..={}",
                self.from, self.to
            )));
        }
        match self.modulus {
            Some(c) if c < 2 => Err(Error::domain("modulus must be > 1")),
            Some(c) => Ok((self.from..=self.to).filter(|n| n % c == 1).collect()),
            None => Ok((self.from..=self.to).collect()),
        }
    }

    fn row(&self, n: u64) -> Result<MeasureBounds> {
        if self.depth_offset == 0 {
            return Err(Error::domain("depth offset must be >= 1"));
        }
        let spec = self.at(n)?;
        let depth = spec.required_depth()? - 1 + self.depth_offset;
        measure_bounds(&spec, depth)
    }
}

/// Bounds for every parameter value of the family, in increasing `n`.
/// Failures are kept per row.
pub fn limit_scan(family: &ScanFamily) -> Result<Vec<ScanRow>> {
    Ok(family
        .parameters()?
        .into_iter()
        .map(|n| ScanRow {
            n,
            bounds: family.row(n),
        })
        .collect())
}
