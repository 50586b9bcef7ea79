use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::OagElement;
use crate::error::{Error, Result};

/// Which concrete ordered abelian group an element lives in.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum OagDescriptor {
    /// `Z^rank`, lexicographic, first coordinate dominant.
    IntLex { rank: usize },
    /// `Z[1/base]` as a subgroup of the rationals.
    Localized { base: u64 },
    /// Integer Laurent polynomials in `t`, positive iff the leading
    /// coefficient is positive (`t` infinitely large).
    Laurent,
    /// `left x right`, lexicographic with `left` dominant.
    LexPair {
        left: Box<OagDescriptor>,
        right: Box<OagDescriptor>,
    },
}

impl OagDescriptor {
    pub fn int_lex(rank: usize) -> Self {
        OagDescriptor::IntLex { rank }
    }

    pub fn localized(base: u64) -> Self {
        OagDescriptor::Localized { base }
    }

    pub fn laurent() -> Self {
        OagDescriptor::Laurent
    }

    pub fn lex_pair(left: OagDescriptor, right: OagDescriptor) -> Self {
        OagDescriptor::LexPair {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            OagDescriptor::IntLex { rank } if *rank == 0 => {
                Err(Error::InvalidDescriptor("int_lex rank must be >= 1".into()))
            }
            OagDescriptor::Localized { base } if *base < 2 => Err(Error::InvalidDescriptor(
                "localized base must be >= 2".into(),
            )),
            OagDescriptor::LexPair { left, right } => {
                left.validate()?;
                right.validate()
            }
            _ => Ok(()),
        }
    }

    /// Parse and validate a JSON descriptor.
    pub fn from_json(s: &str) -> Result<Self> {
        let d: OagDescriptor = serde_json::from_str(s)?;
        d.validate()?;
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serializes")
    }

    pub fn ensure_same(&self, other: &OagDescriptor) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }

    /// A fixed positive element (used for points on rays and samples).
    pub fn positive_unit(&self) -> OagElement {
        match self {
            OagDescriptor::IntLex { rank } => {
                let mut v = vec![BigInt::from(0); *rank];
                v[rank - 1] = BigInt::from(1);
                OagElement::IntLex(v)
            }
            OagDescriptor::Localized { base } => OagElement::Localized {
                base: *base,
                value: BigRational::from_integer(1.into()),
            },
            OagDescriptor::Laurent => OagElement::laurent(&[(0, 1)]),
            OagDescriptor::LexPair { left, right } => {
                OagElement::pair(OagElement::zero(left), right.positive_unit())
            }
        }
    }

    /// Deterministic sample of elements, used to check homomorphism
    /// identities and order preservation.
    pub fn samples(&self) -> Vec<OagElement> {
        let mut out = vec![OagElement::zero(self)];
        match self {
            OagDescriptor::IntLex { rank } => {
                let n = *rank;
                for i in 0..n {
                    for s in [1i64, -1, 3] {
                        let mut v = vec![0i64; n];
                        v[i] = s;
                        out.push(OagElement::int_lex(&v));
                    }
                }
                let mixed: Vec<i64> = (0..n).map(|i| if i % 2 == 0 { 2 } else { -5 }).collect();
                out.push(OagElement::int_lex(&mixed));
                let mixed: Vec<i64> = (0..n).map(|i| 1 - i as i64 * 3).collect();
                out.push(OagElement::int_lex(&mixed));
            }
            OagDescriptor::Localized { base } => {
                let b = *base as i64;
                for (n, d) in [(1, 1), (-1, 1), (1, b), (-3, b * b), (7, 1), (5, b)] {
                    out.push(OagElement::localized(*base, n, d).expect("sample in group"));
                }
            }
            OagDescriptor::Laurent => {
                for terms in [
                    vec![(0, 1)],
                    vec![(1, 1)],
                    vec![(-1, 1)],
                    vec![(2, 2), (0, -1)],
                    vec![(1, -1), (-2, 3)],
                ] {
                    out.push(OagElement::laurent(&terms));
                }
            }
            OagDescriptor::LexPair { left, right } => {
                let zl = OagElement::zero(left);
                let zr = OagElement::zero(right);
                for l in left.samples().into_iter().skip(1).take(4) {
                    out.push(OagElement::pair(l, zr.clone()));
                }
                for r in right.samples().into_iter().skip(1).take(4) {
                    out.push(OagElement::pair(zl.clone(), r));
                }
                let l = left.samples().pop().expect("nonempty");
                let r = right.samples().pop().expect("nonempty");
                out.push(OagElement::pair(l, r));
            }
        }
        out
    }
}

impl fmt::Display for OagDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OagDescriptor::IntLex { rank } => write!(f, "Z^{rank}"),
            OagDescriptor::Localized { base } => write!(f, "Z[1/{base}]"),
            OagDescriptor::Laurent => write!(f, "Z[t,t^-1]"),
            OagDescriptor::LexPair { left, right } => write!(f, "({left} x {right})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_json_round_trip() {
        let d = OagDescriptor::lex_pair(OagDescriptor::int_lex(3), OagDescriptor::localized(2));
        let s = d.to_json();
        assert_eq!(
            s,
            r#"{"type":"lex_pair","left":{"type":"int_lex","rank":3},"right":{"type":"localized","base":2}}"#
        );
        assert_eq!(OagDescriptor::from_json(&s).unwrap(), d);
        assert_eq!(
            OagDescriptor::from_json(r#"{"type":"laurent"}"#).unwrap(),
            OagDescriptor::Laurent
        );
    }

    #[test]
    fn test_invalid_descriptors_rejected() {
        assert!(OagDescriptor::from_json(r#"{"type":"int_lex","rank":0}"#).is_err());
        assert!(OagDescriptor::from_json(r#"{"type":"localized","base":1}"#).is_err());
        assert!(OagDescriptor::from_json(r#"{"type":"mystery"}"#).is_err());
    }

    #[test]
    fn test_samples_belong_to_descriptor() {
        let ds = [
            OagDescriptor::int_lex(3),
            OagDescriptor::localized(6),
            OagDescriptor::laurent(),
            OagDescriptor::lex_pair(OagDescriptor::int_lex(1), OagDescriptor::laurent()),
        ];
        for d in ds {
            for s in d.samples() {
                assert_eq!(s.descriptor(), d);
            }
            assert!(d.positive_unit().is_positive());
        }
    }
}
