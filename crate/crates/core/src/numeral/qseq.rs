use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// The base sequence `(q_k)` of a Cantor series, `q_k >= 2`.
///
/// Stored as an explicit head followed by a rule for the remaining terms.
/// Shifting and digit removal only ever touch the head, so every derived
/// sequence (`(q_{n+1}, q_{n+2}, ...)`, or `Q` with `q_m` removed) keeps
/// the same representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSequence {
    head: Vec<u64>,
    tail: QTail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum QTail {
    /// `values[(phase + j) % len]`.
    Cycle { values: Vec<u64>, phase: usize },
    /// `first + step * j`, `step > 0`.
    Arithmetic { first: u64, step: u64 },
}

impl QTail {
    fn at(&self, j: usize) -> u64 {
        match self {
            QTail::Cycle { values, phase } => values[(phase + j) % values.len()],
            QTail::Arithmetic { first, step } => step
                .checked_mul(j as u64)
                .and_then(|s| s.checked_add(*first))
                .expect("base sequence term overflows u64"),
        }
    }

    fn advance(&mut self, j: usize) {
        match self {
            QTail::Cycle { values, phase } => *phase = (*phase + j) % values.len(),
            QTail::Arithmetic { first, step } => {
                *first = step
                    .checked_mul(j as u64)
                    .and_then(|s| s.checked_add(*first))
                    .expect("base sequence term overflows u64")
            }
        }
    }
}

fn check_terms(values: &[u64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::domain("base sequence needs at least one value"));
    }
    if let Some(q) = values.iter().find(|&&q| q < 2) {
        return Err(Error::domain(format!("base sequence term {q} < 2")));
    }
    Ok(())
}

impl QSequence {
    /// `q_k = q` for all `k`: the q-ary system.
    pub fn constant(q: u64) -> Result<Self> {
        check_terms(&[q])?;
        Ok(QSequence {
            head: Vec::new(),
            tail: QTail::Cycle {
                values: vec![q],
                phase: 0,
            },
        })
    }

    pub fn periodic(values: Vec<u64>) -> Result<Self> {
        check_terms(&values)?;
        Ok(QSequence {
            head: Vec::new(),
            tail: QTail::Cycle { values, phase: 0 },
        })
    }

    /// `head` followed by `values` repeated forever.
    pub fn periodic_after(head: Vec<u64>, values: Vec<u64>) -> Result<Self> {
        check_terms(&values)?;
        if !head.is_empty() {
            check_terms(&head)?;
        }
        Ok(QSequence {
            head,
            tail: QTail::Cycle { values, phase: 0 },
        })
    }

    /// Explicit leading terms. The sequence continues arithmetically with the
    /// step between the last two terms, or constantly when that step is not
    /// positive (or only one term is given). `[2, 3]` is `(2, 3, 4, 5, ...)`.
    pub fn explicit(values: Vec<u64>) -> Result<Self> {
        check_terms(&values)?;
        let last = *values.last().unwrap();
        let step = match values.len() {
            1 => 0,
            n => last.saturating_sub(values[n - 2]),
        };
        let tail = if step == 0 {
            QTail::Cycle {
                values: vec![last],
                phase: 0,
            }
        } else {
            QTail::Arithmetic {
                first: last + step,
                step,
            }
        };
        Ok(QSequence { head: values, tail })
    }

    /// `q_k`, 1-indexed.
    pub fn q(&self, k: usize) -> u64 {
        assert!(k >= 1, "base sequence is 1-indexed");
        if k <= self.head.len() {
            self.head[k - 1]
        } else {
            self.tail.at(k - self.head.len() - 1)
        }
    }

    pub fn terms(&self, n: usize) -> Vec<u64> {
        (1..=n).map(|k| self.q(k)).collect()
    }

    /// The constant value if every term is equal.
    pub fn as_constant(&self) -> Option<u64> {
        match &self.tail {
            QTail::Cycle { values, .. } => {
                let q = values[0];
                (values.iter().all(|&v| v == q) && self.head.iter().all(|&v| v == q)).then_some(q)
            }
            QTail::Arithmetic { .. } => None,
        }
    }

    /// `q_1 q_2 ... q_m` (1 for `m = 0`).
    pub fn partial_product(&self, m: usize) -> BigUint {
        self.product(1, m)
    }

    /// `q_from ... q_to` inclusive; 1 when the range is empty.
    pub fn product(&self, from: usize, to: usize) -> BigUint {
        let mut acc = BigUint::one();
        for k in from..=to {
            acc *= self.q(k);
        }
        acc
    }

    /// `(q_{n+1}, q_{n+2}, ...)`.
    pub fn drop_front(&self, n: usize) -> QSequence {
        let mut out = self.clone();
        if n <= out.head.len() {
            out.head.drain(..n);
        } else {
            let extra = n - out.head.len();
            out.head.clear();
            out.tail.advance(extra);
        }
        out
    }

    /// `(q_1, ..., q_{m-1}, q_{m+1}, ...)`.
    pub fn remove(&self, m: usize) -> QSequence {
        assert!(m >= 1, "base sequence is 1-indexed");
        let mut out = self.clone();
        while out.head.len() < m {
            let next = out.tail.at(0);
            out.head.push(next);
            out.tail.advance(1);
        }
        out.head.remove(m - 1);
        out
    }

    /// Period of the terms from index `k` on, if the sequence is periodic
    /// from there.
    pub fn period_from(&self, k: usize) -> Option<usize> {
        match &self.tail {
            QTail::Cycle { values, .. } if k > self.head.len() => Some(values.len()),
            _ => None,
        }
    }

    /// Number of leading terms outside the periodic part (`None` when the
    /// sequence never becomes periodic).
    pub fn preperiod(&self) -> Option<usize> {
        match &self.tail {
            QTail::Cycle { .. } => Some(self.head.len()),
            QTail::Arithmetic { .. } => None,
        }
    }

    /// Phase of index `k` inside the periodic tail.
    pub(crate) fn phase_of(&self, k: usize) -> Option<usize> {
        match &self.tail {
            QTail::Cycle { values, phase } if k > self.head.len() => {
                Some((phase + k - self.head.len() - 1) % values.len())
            }
            _ => None,
        }
    }

    pub fn is_eventually_periodic(&self) -> bool {
        matches!(self.tail, QTail::Cycle { .. })
    }

    /// Smallest term with index `>= k`.
    pub fn min_from(&self, k: usize) -> u64 {
        let head_min = self.head.iter().skip(k.saturating_sub(1)).copied().min();
        let tail_min = match &self.tail {
            QTail::Cycle { values, .. } => *values.iter().min().unwrap(),
            QTail::Arithmetic { .. } => {
                let j = k.saturating_sub(self.head.len() + 1);
                self.tail.at(j)
            }
        };
        head_min.map_or(tail_min, |h| h.min(tail_min))
    }

    fn to_repr(&self) -> QSequenceRepr {
        match &self.tail {
            QTail::Cycle { values, phase } => {
                let mut rotated = values.clone();
                rotated.rotate_left(*phase);
                let constant = rotated.iter().all(|&v| v == rotated[0]);
                match (self.head.is_empty(), constant) {
                    (true, true) => QSequenceRepr {
                        kind: Kind::Constant,
                        head: Vec::new(),
                        values: vec![rotated[0]],
                    },
                    (false, true) => {
                        // The last two listed terms must encode a zero step.
                        let mut v = self.head.clone();
                        v.extend([rotated[0], rotated[0]]);
                        QSequenceRepr {
                            kind: Kind::Explicit,
                            head: Vec::new(),
                            values: v,
                        }
                    }
                    (_, false) => QSequenceRepr {
                        kind: Kind::Periodic,
                        head: self.head.clone(),
                        values: rotated,
                    },
                }
            }
            QTail::Arithmetic { first, step } => {
                let mut v = self.head.clone();
                v.extend([*first, first + step]);
                QSequenceRepr {
                    kind: Kind::Explicit,
                    head: Vec::new(),
                    values: v,
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Constant,
    Periodic,
    Explicit,
}

#[derive(Serialize, Deserialize)]
struct QSequenceRepr {
    kind: Kind,
    /// Leading terms before the cycle; periodic kind only.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    head: Vec<u64>,
    values: Vec<u64>,
}

impl Serialize for QSequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

/// A bare integer is read as a constant base.
#[derive(Deserialize)]
#[serde(untagged)]
enum QSequenceInput {
    Constant(u64),
    Full(QSequenceRepr),
}

impl<'de> Deserialize<'de> for QSequence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = match QSequenceInput::deserialize(d)? {
            QSequenceInput::Constant(q) => {
                return QSequence::constant(q).map_err(serde::de::Error::custom)
            }
            QSequenceInput::Full(r) => r,
        };
        if !r.head.is_empty() && r.kind != Kind::Periodic {
            return Err(serde::de::Error::custom(
                "only periodic base sequences take a head",
            ));
        }
        let q = match r.kind {
            Kind::Constant => match r.values.as_slice() {
                [q] => QSequence::constant(*q),
                _ => Err(Error::domain(
                    "constant base sequence takes exactly one value",
                )),
            },
            Kind::Periodic => QSequence::periodic_after(r.head, r.values),
            Kind::Explicit => QSequence::explicit(r.values),
        };
        q.map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_periodic_terms() {
        let q = QSequence::constant(3).unwrap();
        assert_eq!(q.terms(4), vec![3, 3, 3, 3]);
        assert_eq!(q.as_constant(), Some(3));
        let p = QSequence::periodic(vec![2, 3]).unwrap();
        assert_eq!(p.terms(5), vec![2, 3, 2, 3, 2]);
        assert_eq!(p.drop_front(1).terms(3), vec![3, 2, 3]);
        assert_eq!(p.as_constant(), None);
    }

    #[test]
    fn explicit_continuation() {
        let q = QSequence::explicit(vec![2, 3]).unwrap();
        assert_eq!(q.terms(6), vec![2, 3, 4, 5, 6, 7]);
        let c = QSequence::explicit(vec![5, 3]).unwrap();
        assert_eq!(c.terms(4), vec![5, 3, 3, 3]);
        let one = QSequence::explicit(vec![4]).unwrap();
        assert_eq!(one.terms(3), vec![4, 4, 4]);
    }

    #[test]
    fn rejects_small_terms() {
        assert!(QSequence::constant(1).is_err());
        assert!(QSequence::periodic(vec![2, 0]).is_err());
        assert!(QSequence::explicit(vec![]).is_err());
    }

    #[test]
    fn drop_and_remove() {
        let q = QSequence::explicit(vec![2, 3]).unwrap();
        assert_eq!(q.drop_front(3).terms(3), vec![5, 6, 7]);
        assert_eq!(q.remove(2).terms(4), vec![2, 4, 5, 6]);
        assert_eq!(q.remove(5).terms(5), vec![2, 3, 4, 5, 7]);
        let p = QSequence::periodic(vec![2, 3, 5]).unwrap();
        assert_eq!(p.remove(2).terms(5), vec![2, 5, 2, 3, 5]);
    }

    #[test]
    fn products() {
        let q = QSequence::explicit(vec![2, 3]).unwrap();
        assert_eq!(q.partial_product(0), BigUint::from(1u32));
        assert_eq!(q.partial_product(4), BigUint::from(120u32));
        assert_eq!(q.product(2, 3), BigUint::from(12u32));
    }

    #[test]
    fn json_forms() {
        let q: QSequence = serde_json::from_str(r#"{"kind":"constant","values":[2]}"#).unwrap();
        assert_eq!(q, QSequence::constant(2).unwrap());
        let e: QSequence = serde_json::from_str(r#"{"kind":"explicit","values":[2,3]}"#).unwrap();
        assert_eq!(e.terms(3), vec![2, 3, 4]);
        assert!(
            serde_json::from_str::<QSequence>(r#"{"kind":"constant","values":[2,3]}"#).is_err()
        );
        let bare: QSequence = serde_json::from_str("3").unwrap();
        assert_eq!(bare, QSequence::constant(3).unwrap());
        assert!(serde_json::from_str::<QSequence>("1").is_err());

        for q in [
            QSequence::periodic(vec![2, 3, 5]).unwrap().drop_front(1),
            QSequence::explicit(vec![2, 3]).unwrap().drop_front(4),
            QSequence::constant(3).unwrap().remove(2),
            QSequence::explicit(vec![7, 2]).unwrap(),
        ] {
            let s = serde_json::to_string(&q).unwrap();
            let back: QSequence = serde_json::from_str(&s).unwrap();
            assert_eq!(back.terms(12), q.terms(12), "{s}");
        }
        let mixed = QSequence::periodic(vec![2, 3, 5]).unwrap().remove(2);
        let s = serde_json::to_string(&mixed).unwrap();
        assert_eq!(s, r#"{"kind":"periodic","head":[2],"values":[5,2,3]}"#);
        let back: QSequence = serde_json::from_str(&s).unwrap();
        assert_eq!(back.terms(10), mixed.terms(10));
        assert!(serde_json::from_str::<QSequence>(
            r#"{"kind":"constant","head":[3],"values":[2]}"#
        )
        .is_err());
    }

    #[test]
    fn min_from_tracks_tail() {
        let q = QSequence::explicit(vec![9, 2, 3]).unwrap();
        assert_eq!(q.min_from(1), 2);
        assert_eq!(q.min_from(3), 3);
        assert_eq!(q.min_from(10), 10);
    }
}
