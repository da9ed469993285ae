use serde::de::IgnoredAny;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// One factor of a shift composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    /// σ: delete the first digit.
    Sigma,
    /// σ_m: delete the m-th digit of the current string.
    Gen(usize),
}

impl Serialize for Atom {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(1))?;
        match self {
            Atom::Sigma => map.serialize_entry("sigma", &())?,
            Atom::Gen(m) => map.serialize_entry("gen", m)?,
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Atom {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        fn present<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<bool, D::Error> {
            IgnoredAny::deserialize(d).map(|_| true)
        }

        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct AtomRepr {
            #[serde(default, deserialize_with = "present")]
            sigma: bool,
            #[serde(default)]
            gen: Option<usize>,
        }

        let r = AtomRepr::deserialize(d)?;
        match (r.sigma, r.gen) {
            (true, None) => Ok(Atom::Sigma),
            (false, Some(0)) => Err(serde::de::Error::custom(
                "generalized shift index must be >= 1",
            )),
            (false, Some(m)) => Ok(Atom::Gen(m)),
            _ => Err(serde::de::Error::custom(
                r#"atom must be exactly one of {"sigma":null} or {"gen":m}"#,
            )),
        }
    }
}

/// Rule producing a run of generalized shifts `σ_{n_1}, σ_{n_2}, ...`
/// (listed in application order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Generator {
    /// `n_k = a k + b` for `k = 1..=count`.
    Affine { a: i64, b: i64, count: usize },
    /// Explicit index list `(n_k)`.
    Table { values: Vec<usize> },
    /// `σ_m` applied `k` times.
    ConstRepeat { m: usize, k: usize },
    /// `σ_m` applied `k` times, defined only for `k ≡ 1 (mod c)`.
    ModFilter { m: usize, c: usize, k: usize },
}

fn index_atom(n: i64) -> Result<Atom> {
    if n < 1 {
        return Err(Error::domain(format!("generated shift index {n} < 1")));
    }
    Ok(Atom::Gen(n as usize))
}

impl Generator {
    pub fn expand(&self) -> Result<Vec<Atom>> {
        match self {
            Generator::Affine { a, b, count } => {
                (1..=*count as i64).map(|k| index_atom(a * k + b)).collect()
            }
            Generator::Table { values } => values.iter().map(|&v| index_atom(v as i64)).collect(),
            Generator::ConstRepeat { m, k } => {
                let atom = index_atom(*m as i64)?;
                Ok(vec![atom; *k])
            }
            Generator::ModFilter { m, c, k } => {
                if *c < 2 {
                    return Err(Error::domain("mod-filter modulus must be > 1"));
                }
                if k % c != 1 {
                    return Err(Error::domain(format!(
                        "repetition count {k} is not 1 mod {c}"
                    )));
                }
                let atom = index_atom(*m as i64)?;
                Ok(vec![atom; *k])
            }
        }
    }
}

/// A finite composition of σ and σ_m, in application order: the first atom
/// is applied first, and every index refers to the string as it stands
/// after the preceding atoms.
///
/// When a generator is present its atoms run before `word`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftProgram {
    #[serde(default)]
    pub word: Vec<Atom>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Generator>,
}

impl ShiftProgram {
    pub fn new(word: Vec<Atom>) -> Self {
        ShiftProgram {
            word,
            generator: None,
        }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    /// σⁿ.
    pub fn sigma_power(n: usize) -> Self {
        Self::new(vec![Atom::Sigma; n])
    }

    pub fn from_generator(generator: Generator) -> Self {
        ShiftProgram {
            word: Vec::new(),
            generator: Some(generator),
        }
    }

    /// The program that deletes the digits sitting at the given positions of
    /// the original string, in the given order.
    pub fn deleting_original_positions(positions: &[usize]) -> Result<Self> {
        let mut word = Vec::with_capacity(positions.len());
        for (k, &n) in positions.iter().enumerate() {
            if n == 0 {
                return Err(Error::domain("digit positions are 1-indexed"));
            }
            if positions[..k].contains(&n) {
                return Err(Error::domain(format!("position {n} deleted twice")));
            }
            let before = positions[..k].iter().filter(|&&p| p < n).count();
            word.push(Atom::Gen(n - before));
        }
        Ok(Self::new(word))
    }

    /// Full atom list with the generator expanded.
    pub fn atoms(&self) -> Result<Vec<Atom>> {
        let mut atoms = match &self.generator {
            Some(g) => g.expand()?,
            None => Vec::new(),
        };
        if let Some(Atom::Gen(0)) = self.word.iter().find(|a| **a == Atom::Gen(0)) {
            return Err(Error::domain("generalized shift index must be >= 1"));
        }
        atoms.extend_from_slice(&self.word);
        Ok(atoms)
    }

    /// The same program with the generator written out.
    pub fn explicit(&self) -> Result<Self> {
        Ok(Self::new(self.atoms()?))
    }

    /// Original digit positions removed by the program, in deletion order.
    pub fn deleted_positions(&self) -> Result<Vec<usize>> {
        let atoms = self.atoms()?;
        let mut current: Vec<usize> = Vec::new();
        let mut next = 1;
        let mut deleted = Vec::with_capacity(atoms.len());
        for atom in atoms {
            let i = match atom {
                Atom::Sigma => 1,
                Atom::Gen(m) => m,
            };
            while current.len() < i {
                current.push(next);
                next += 1;
            }
            deleted.push(current.remove(i - 1));
        }
        Ok(deleted)
    }

    /// Largest original digit position the program reads.
    pub fn consumed_digits(&self) -> Result<usize> {
        Ok(self.deleted_positions()?.into_iter().max().unwrap_or(0))
    }

    /// Positions `1..=depth` that survive, in order. Fails when the program
    /// reaches past `depth`.
    pub fn kept_positions(&self, depth: usize) -> Result<Vec<usize>> {
        let deleted = self.deleted_positions()?;
        if let Some(&worst) = deleted.iter().max() {
            if worst > depth {
                return Err(Error::depth("shift program", worst, depth));
            }
        }
        Ok((1..=depth).filter(|p| !deleted.contains(p)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_json() {
        let p = ShiftProgram::new(vec![Atom::Gen(2), Atom::Sigma]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"word":[{"gen":2},{"sigma":null}]}"#);
        assert_eq!(serde_json::from_str::<ShiftProgram>(&s).unwrap(), p);
        assert!(serde_json::from_str::<Atom>(r#"{"gen":0}"#).is_err());
        assert!(serde_json::from_str::<Atom>(r#"{"gen":2,"sigma":null}"#).is_err());
        assert!(serde_json::from_str::<Atom>(r#"{}"#).is_err());
    }

    #[test]
    fn generator_json_and_expansion() {
        let p: ShiftProgram = serde_json::from_str(
            r#"{"word":[{"sigma":null}],"generator":{"kind":"const-repeat","m":2,"k":3}}"#,
        )
        .unwrap();
        assert_eq!(
            p.atoms().unwrap(),
            vec![Atom::Gen(2), Atom::Gen(2), Atom::Gen(2), Atom::Sigma]
        );
        let a = Generator::Affine {
            a: 2,
            b: -1,
            count: 3,
        };
        assert_eq!(
            a.expand().unwrap(),
            vec![Atom::Gen(1), Atom::Gen(3), Atom::Gen(5)]
        );
        assert!(Generator::Affine {
            a: 1,
            b: -1,
            count: 2
        }
        .expand()
        .is_err());
        let t = Generator::Table { values: vec![3, 1] };
        assert_eq!(t.expand().unwrap(), vec![Atom::Gen(3), Atom::Gen(1)]);
        let f = Generator::ModFilter { m: 3, c: 2, k: 3 };
        assert_eq!(f.expand().unwrap(), vec![Atom::Gen(3); 3]);
        assert!(Generator::ModFilter { m: 3, c: 2, k: 2 }.expand().is_err());
        assert!(Generator::ModFilter { m: 3, c: 1, k: 2 }.expand().is_err());
    }

    #[test]
    fn explicit_word_matches_generator() {
        let p = ShiftProgram::from_generator(Generator::Table { values: vec![2, 5] });
        assert_eq!(
            p.explicit().unwrap(),
            ShiftProgram::new(vec![Atom::Gen(2), Atom::Gen(5)])
        );
    }

    #[test]
    fn deleted_positions_follow_current_indexing() {
        let p = ShiftProgram::new(vec![Atom::Gen(2), Atom::Gen(5), Atom::Sigma]);
        assert_eq!(p.deleted_positions().unwrap(), vec![2, 6, 1]);
        assert_eq!(p.consumed_digits().unwrap(), 6);
        assert_eq!(p.kept_positions(8).unwrap(), vec![3, 4, 5, 7, 8]);
        assert!(p.kept_positions(5).is_err());
        assert_eq!(ShiftProgram::identity().consumed_digits().unwrap(), 0);
    }

    #[test]
    fn original_positions_roundtrip() {
        let positions = [3, 1, 4, 2, 7];
        let p = ShiftProgram::deleting_original_positions(&positions).unwrap();
        assert_eq!(p.deleted_positions().unwrap(), positions);
        assert!(ShiftProgram::deleting_original_positions(&[2, 2]).is_err());
        let identity = ShiftProgram::deleting_original_positions(&[1, 2, 3]).unwrap();
        assert_eq!(identity, ShiftProgram::new(vec![Atom::Gen(1); 3]));
    }
}
