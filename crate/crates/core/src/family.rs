//! Ordered families of tournaments ("rounds") and their file format.
//!
//! A family file is a JSON object:
//!
//! ```json
//! { "n": 3, "k": 3, "rounds": ["101"] }
//! ```
//!
//! Each round is a string of `C(n,2)` characters `0`/`1` in lexicographic
//! pair order, `1` meaning lower vertex -> higher vertex. `k` is advisory and
//! may be omitted.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tournament::Tournament;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientationFamily {
    n: usize,
    rounds: Vec<Tournament>,
}

impl OrientationFamily {
    pub fn new(n: usize, rounds: Vec<Tournament>) -> Result<Self> {
        for (index, round) in rounds.iter().enumerate() {
            if round.n() != n {
                return Err(Error::InconsistentN {
                    index,
                    expected: n,
                    found: round.n(),
                });
            }
        }
        Ok(OrientationFamily { n, rounds })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rounds(&self) -> &[Tournament] {
        &self.rounds
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn push(&mut self, round: Tournament) -> Result<()> {
        if round.n() != self.n {
            return Err(Error::InconsistentN {
                index: self.rounds.len(),
                expected: self.n,
                found: round.n(),
            });
        }
        self.rounds.push(round);
        Ok(())
    }

    /// Restriction of every round to `subset`, relabelled by rank.
    pub fn induced(&self, subset: &[usize]) -> Result<Self> {
        let rounds = self
            .rounds
            .iter()
            .map(|t| t.induced(subset))
            .collect::<Result<Vec<_>>>()?;
        OrientationFamily::new(subset.len(), rounds)
    }

    pub fn to_document(&self, k: Option<usize>) -> FamilyDocument {
        FamilyDocument {
            n: self.n,
            k,
            rounds: self.rounds.iter().map(Tournament::to_bit_string).collect(),
        }
    }

    pub fn to_json(&self, k: Option<usize>) -> String {
        serde_json::to_string_pretty(&self.to_document(k)).expect("family serializes")
    }

    /// Parses a family file; also returns the advisory `k` if present.
    pub fn from_json(text: &str) -> Result<(Self, Option<usize>)> {
        let doc: FamilyDocument =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let k = doc.k;
        Ok((OrientationFamily::try_from(doc)?, k))
    }
}

/// Serialized form of an [`OrientationFamily`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDocument {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub rounds: Vec<String>,
}

impl TryFrom<FamilyDocument> for OrientationFamily {
    type Error = Error;

    fn try_from(doc: FamilyDocument) -> Result<Self> {
        let rounds = doc
            .rounds
            .iter()
            .map(|s| Tournament::from_bit_string(doc.n, s))
            .collect::<Result<Vec<_>>>()?;
        OrientationFamily::new(doc.n, rounds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_single_round() {
        let (f, k) = OrientationFamily::from_json(r#"{"n":3,"rounds":["111"]}"#).unwrap();
        assert_eq!(k, None);
        assert_eq!(f.len(), 1);
        let t = &f.rounds()[0];
        assert_eq!(t.direction(0, 1).unwrap(), (0, 1));
        assert_eq!(t.direction(0, 2).unwrap(), (0, 2));
        assert_eq!(t.direction(1, 2).unwrap(), (1, 2));
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(matches!(
            OrientationFamily::from_json(r#"{"n":4,"rounds":["111"]}"#),
            Err(Error::BitLength { .. })
        ));
        assert!(matches!(
            OrientationFamily::from_json(r#"{"n":3,"rounds":"111"}"#),
            Err(Error::Malformed(_))
        ));
        assert!(OrientationFamily::from_json("not json").is_err());
        assert!(OrientationFamily::from_json(r#"{"n":3,"rounds":[],"m":1}"#).is_err());
    }

    #[test]
    fn rejects_mixed_vertex_counts() {
        let err = OrientationFamily::new(3, vec![Tournament::transitive(3), Tournament::transitive(4)]);
        assert!(matches!(
            err,
            Err(Error::InconsistentN { index: 1, expected: 3, found: 4 })
        ));
    }

    fn arb_family() -> impl Strategy<Value = OrientationFamily> {
        (1usize..9, 0usize..5).prop_flat_map(|(n, r)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), n * (n - 1) / 2), r)
                .prop_map(move |rounds| {
                    let rounds = rounds
                        .into_iter()
                        .map(|bits| {
                            let mut it = bits.into_iter();
                            Tournament::from_fn(n, |_, _| it.next().unwrap())
                        })
                        .collect();
                    OrientationFamily::new(n, rounds).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn json_round_trip(f in arb_family(), k in proptest::option::of(3usize..6)) {
            let text = f.to_json(k);
            let (back, k2) = OrientationFamily::from_json(&text).unwrap();
            prop_assert_eq!(back, f);
            prop_assert_eq!(k2, k);
        }

        #[test]
        fn induce_commutes_with_serialization(
            f in arb_family(),
            mask in any::<u16>(),
        ) {
            let subset: Vec<usize> = (0..f.n()).filter(|v| mask >> v & 1 == 1).collect();
            prop_assume!(!subset.is_empty());
            let (parsed, _) = OrientationFamily::from_json(&f.to_json(None)).unwrap();
            prop_assert_eq!(
                f.induced(&subset).unwrap().to_json(None),
                parsed.induced(&subset).unwrap().to_json(None)
            );
        }
    }
}
