use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::OagDescriptor;
use crate::error::{Error, Result};

/// An element of one of the concrete ordered abelian groups.
///
/// Values are canonical on construction, so derived equality and hashing
/// are equality in the group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OagElement {
    IntLex(Vec<BigInt>),
    Localized {
        base: u64,
        value: BigRational,
    },
    /// Degree to coefficient, no zero coefficients stored.
    Laurent(BTreeMap<i64, BigInt>),
    LexPair(Box<(OagElement, OagElement)>),
}

/// True if the reduced rational `r` lies in `Z[1/base]`.
pub fn in_localized(base: u64, r: &BigRational) -> bool {
    supported_on(base, r.denom())
}

/// True if every prime factor of `n` divides `base`.
pub(crate) fn supported_on(base: u64, n: &BigInt) -> bool {
    let b = BigInt::from(base);
    let mut d = n.abs();
    loop {
        if d.is_one() {
            return true;
        }
        let g = d.gcd(&b);
        if g.is_one() {
            return false;
        }
        while (&d % &g).is_zero() {
            d /= &g;
        }
    }
}

fn mismatch(a: &OagElement, b: &OagElement) -> Error {
    Error::DescriptorMismatch {
        left: a.descriptor().to_string(),
        right: b.descriptor().to_string(),
    }
}

impl OagElement {
    pub fn zero(desc: &OagDescriptor) -> Self {
        match desc {
            OagDescriptor::IntLex { rank } => OagElement::IntLex(vec![BigInt::zero(); *rank]),
            OagDescriptor::Localized { base } => OagElement::Localized {
                base: *base,
                value: BigRational::zero(),
            },
            OagDescriptor::Laurent => OagElement::Laurent(BTreeMap::new()),
            OagDescriptor::LexPair { left, right } => {
                OagElement::pair(OagElement::zero(left), OagElement::zero(right))
            }
        }
    }

    pub fn int_lex(coords: &[i64]) -> Self {
        OagElement::IntLex(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `num/den` in `Z[1/base]`.
    pub fn localized(base: u64, num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::NotInGroup("zero denominator".into()));
        }
        Self::localized_value(base, BigRational::new(num.into(), den.into()))
    }

    pub fn localized_value(base: u64, value: BigRational) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidDescriptor(
                "localized base must be >= 2".into(),
            ));
        }
        if !in_localized(base, &value) {
            return Err(Error::NotInGroup(format!("{value} is not in Z[1/{base}]")));
        }
        Ok(OagElement::Localized { base, value })
    }

    /// Laurent polynomial from `(degree, coefficient)` terms; repeated
    /// degrees are summed.
    pub fn laurent(terms: &[(i64, i64)]) -> Self {
        let mut m: BTreeMap<i64, BigInt> = BTreeMap::new();
        for &(d, c) in terms {
            *m.entry(d).or_insert_with(BigInt::zero) += c;
        }
        m.retain(|_, c| !c.is_zero());
        OagElement::Laurent(m)
    }

    pub fn laurent_map(mut m: BTreeMap<i64, BigInt>) -> Self {
        m.retain(|_, c| !c.is_zero());
        OagElement::Laurent(m)
    }

    pub fn pair(left: OagElement, right: OagElement) -> Self {
        OagElement::LexPair(Box::new((left, right)))
    }

    pub fn descriptor(&self) -> OagDescriptor {
        match self {
            OagElement::IntLex(v) => OagDescriptor::IntLex { rank: v.len() },
            OagElement::Localized { base, .. } => OagDescriptor::Localized { base: *base },
            OagElement::Laurent(_) => OagDescriptor::Laurent,
            OagElement::LexPair(p) => OagDescriptor::lex_pair(p.0.descriptor(), p.1.descriptor()),
        }
    }

    /// Cheap structural check that two elements share a descriptor.
    pub fn same_group(&self, other: &OagElement) -> bool {
        match (self, other) {
            (OagElement::IntLex(a), OagElement::IntLex(b)) => a.len() == b.len(),
            (OagElement::Localized { base: a, .. }, OagElement::Localized { base: b, .. }) => {
                a == b
            }
            (OagElement::Laurent(_), OagElement::Laurent(_)) => true,
            (OagElement::LexPair(a), OagElement::LexPair(b)) => {
                a.0.same_group(&b.0) && a.1.same_group(&b.1)
            }
            _ => false,
        }
    }

    pub fn check_in(&self, desc: &OagDescriptor) -> Result<()> {
        let mine = self.descriptor();
        mine.ensure_same(desc)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            OagElement::IntLex(v) => v.iter().all(Zero::is_zero),
            OagElement::Localized { value, .. } => value.is_zero(),
            OagElement::Laurent(m) => m.is_empty(),
            OagElement::LexPair(p) => p.0.is_zero() && p.1.is_zero(),
        }
    }

    /// Sign relative to zero.
    pub fn signum(&self) -> Ordering {
        match self {
            OagElement::IntLex(v) => v
                .iter()
                .find(|c| !c.is_zero())
                .map_or(Ordering::Equal, |c| c.sign_ordering()),
            OagElement::Localized { value, .. } => value.cmp(&BigRational::zero()),
            OagElement::Laurent(m) => m
                .iter()
                .next_back()
                .map_or(Ordering::Equal, |(_, c)| c.sign_ordering()),
            OagElement::LexPair(p) => match p.0.signum() {
                Ordering::Equal => p.1.signum(),
                o => o,
            },
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn neg(&self) -> Self {
        match self {
            OagElement::IntLex(v) => OagElement::IntLex(v.iter().map(|c| -c).collect()),
            OagElement::Localized { base, value } => OagElement::Localized {
                base: *base,
                value: -value,
            },
            OagElement::Laurent(m) => {
                OagElement::Laurent(m.iter().map(|(d, c)| (*d, -c)).collect())
            }
            OagElement::LexPair(p) => OagElement::pair(p.0.neg(), p.1.neg()),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn try_add(&self, other: &OagElement) -> Result<Self> {
        match (self, other) {
            (OagElement::IntLex(a), OagElement::IntLex(b)) if a.len() == b.len() => Ok(
                OagElement::IntLex(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            ),
            (
                OagElement::Localized { base: a, value: x },
                OagElement::Localized { base: b, value: y },
            ) if a == b => Ok(OagElement::Localized {
                base: *a,
                value: x + y,
            }),
            (OagElement::Laurent(a), OagElement::Laurent(b)) => {
                let mut m = a.clone();
                for (d, c) in b {
                    let e = m.entry(*d).or_insert_with(BigInt::zero);
                    *e += c;
                    if e.is_zero() {
                        m.remove(d);
                    }
                }
                Ok(OagElement::Laurent(m))
            }
            (OagElement::LexPair(a), OagElement::LexPair(b)) => {
                Ok(OagElement::pair(a.0.try_add(&b.0)?, a.1.try_add(&b.1)?))
            }
            _ => Err(mismatch(self, other)),
        }
    }

    pub fn try_sub(&self, other: &OagElement) -> Result<Self> {
        self.try_add(&other.neg())
    }

    /// Total order; errors when the descriptors differ.
    pub fn try_cmp(&self, other: &OagElement) -> Result<Ordering> {
        match (self, other) {
            (OagElement::IntLex(a), OagElement::IntLex(b)) if a.len() == b.len() => Ok(a.cmp(b)),
            (
                OagElement::Localized { base: a, value: x },
                OagElement::Localized { base: b, value: y },
            ) if a == b => Ok(x.cmp(y)),
            (OagElement::Laurent(a), OagElement::Laurent(b)) => Ok(laurent_cmp(a, b)),
            (OagElement::LexPair(a), OagElement::LexPair(b)) => match a.0.try_cmp(&b.0)? {
                Ordering::Equal => a.1.try_cmp(&b.1),
                o => Ok(o),
            },
            _ => Err(mismatch(self, other)),
        }
    }

    pub fn try_lt(&self, other: &OagElement) -> Result<bool> {
        Ok(self.try_cmp(other)? == Ordering::Less)
    }

    pub fn try_le(&self, other: &OagElement) -> Result<bool> {
        Ok(self.try_cmp(other)? != Ordering::Greater)
    }

    pub fn try_max(&self, other: &OagElement) -> Result<Self> {
        Ok(if self.try_lt(other)? {
            other.clone()
        } else {
            self.clone()
        })
    }

    pub fn try_min(&self, other: &OagElement) -> Result<Self> {
        Ok(if self.try_lt(other)? {
            self.clone()
        } else {
            other.clone()
        })
    }

    /// `k * self` for an integer `k`.
    pub fn mul_int(&self, k: &BigInt) -> Self {
        match self {
            OagElement::IntLex(v) => OagElement::IntLex(v.iter().map(|c| c * k).collect()),
            OagElement::Localized { base, value } => OagElement::Localized {
                base: *base,
                value: value * BigRational::from_integer(k.clone()),
            },
            OagElement::Laurent(m) => {
                if k.is_zero() {
                    OagElement::Laurent(BTreeMap::new())
                } else {
                    OagElement::Laurent(m.iter().map(|(d, c)| (*d, c * k)).collect())
                }
            }
            OagElement::LexPair(p) => OagElement::pair(p.0.mul_int(k), p.1.mul_int(k)),
        }
    }

    pub fn double(&self) -> Self {
        self.mul_int(&BigInt::from(2))
    }

    /// `self / 2` when it lies in the group.
    pub fn halve(&self) -> Option<Self> {
        let two = BigInt::from(2);
        match self {
            OagElement::IntLex(v) => {
                if v.iter().all(|c| c.is_even()) {
                    Some(OagElement::IntLex(v.iter().map(|c| c / &two).collect()))
                } else {
                    None
                }
            }
            OagElement::Localized { base, value } => {
                let h = value / BigRational::from_integer(two);
                if in_localized(*base, &h) {
                    Some(OagElement::Localized {
                        base: *base,
                        value: h,
                    })
                } else {
                    None
                }
            }
            OagElement::Laurent(m) => {
                if m.values().all(|c| c.is_even()) {
                    Some(OagElement::Laurent(
                        m.iter().map(|(d, c)| (*d, c / &two)).collect(),
                    ))
                } else {
                    None
                }
            }
            OagElement::LexPair(p) => Some(OagElement::pair(p.0.halve()?, p.1.halve()?)),
        }
    }

    pub fn is_two_divisible(&self) -> bool {
        self.halve().is_some()
    }

    /// Divide by an integer if the quotient lies in the group.
    pub fn div_int(&self, k: &BigInt) -> Option<Self> {
        if k.is_zero() {
            return None;
        }
        match self {
            OagElement::IntLex(v) => {
                if v.iter().all(|c| (c % k).is_zero()) {
                    Some(OagElement::IntLex(v.iter().map(|c| c / k).collect()))
                } else {
                    None
                }
            }
            OagElement::Localized { base, value } => {
                let h = value / BigRational::from_integer(k.clone());
                in_localized(*base, &h).then_some(OagElement::Localized {
                    base: *base,
                    value: h,
                })
            }
            OagElement::Laurent(m) => {
                if m.values().all(|c| (c % k).is_zero()) {
                    Some(OagElement::Laurent(
                        m.iter().map(|(d, c)| (*d, c / k)).collect(),
                    ))
                } else {
                    None
                }
            }
            OagElement::LexPair(p) => Some(OagElement::pair(p.0.div_int(k)?, p.1.div_int(k)?)),
        }
    }

    pub fn left(&self) -> Option<&OagElement> {
        match self {
            OagElement::LexPair(p) => Some(&p.0),
            _ => None,
        }
    }

    pub fn right(&self) -> Option<&OagElement> {
        match self {
            OagElement::LexPair(p) => Some(&p.1),
            _ => None,
        }
    }
}

fn laurent_cmp(a: &BTreeMap<i64, BigInt>, b: &BTreeMap<i64, BigInt>) -> Ordering {
    let mut ia = a.iter().rev().peekable();
    let mut ib = b.iter().rev().peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (None, None) => return Ordering::Equal,
            (Some((_, c)), None) => return c.sign_ordering(),
            (None, Some((_, c))) => return c.sign_ordering().reverse(),
            (Some((da, ca)), Some((db, cb))) => match da.cmp(db) {
                Ordering::Greater => return ca.sign_ordering(),
                Ordering::Less => return cb.sign_ordering().reverse(),
                Ordering::Equal => {
                    if ca != cb {
                        return ca.cmp(cb);
                    }
                    ia.next();
                    ib.next();
                }
            },
        }
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

impl fmt::Display for OagElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OagElement::IntLex(v) => {
                write!(f, "(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            OagElement::Localized { value, .. } => write!(f, "{value}"),
            OagElement::Laurent(m) => {
                if m.is_empty() {
                    return write!(f, "0");
                }
                for (i, (d, c)) in m.iter().rev().enumerate() {
                    let neg = c.is_negative();
                    let mag = c.abs();
                    if i == 0 {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, " {} ", if neg { "-" } else { "+" })?;
                    }
                    let show_coeff = !mag.is_one() || *d == 0;
                    if show_coeff {
                        write!(f, "{mag}")?;
                    }
                    match *d {
                        0 => {}
                        1 => write!(f, "t")?,
                        d => write!(f, "t^{d}")?,
                    }
                }
                Ok(())
            }
            OagElement::LexPair(p) => write!(f, "<{}; {}>", p.0, p.1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loc(base: u64, n: i64, d: i64) -> OagElement {
        OagElement::localized(base, n, d).unwrap()
    }

    #[test]
    fn test_add_examples() {
        let a = OagElement::int_lex(&[1, 2]);
        let b = OagElement::int_lex(&[0, -2]);
        assert_eq!(a.try_add(&b).unwrap(), OagElement::int_lex(&[1, 0]));
        assert_eq!(loc(2, 1, 4).try_add(&loc(2, 1, 2)).unwrap(), loc(2, 3, 4));
        let p = OagElement::laurent(&[(2, 1), (0, 1)]);
        let q = OagElement::laurent(&[(2, -1)]);
        assert_eq!(p.try_add(&q).unwrap(), OagElement::laurent(&[(0, 1)]));
    }

    #[test]
    fn test_cmp_examples() {
        let a = OagElement::int_lex(&[1, -100]);
        let b = OagElement::int_lex(&[0, 100]);
        assert_eq!(a.try_cmp(&b).unwrap(), Ordering::Greater);
        let t = OagElement::laurent(&[(1, 1)]);
        let k = OagElement::laurent(&[(0, 1000)]);
        assert_eq!(t.try_cmp(&k).unwrap(), Ordering::Greater);
        assert_eq!(t.try_cmp(&t).unwrap(), Ordering::Equal);
    }

    #[test]
    fn test_laurent_order_matches_evaluation_at_large_values() {
        // For polynomials with small coefficients, evaluating at a large
        // rational agrees with the leading-coefficient order.
        let polys = [
            vec![(1, 1)],
            vec![(0, 1000)],
            vec![(1, 1), (0, -1000)],
            vec![(2, -1), (1, 50)],
            vec![(-1, 7)],
            vec![(-3, -2), (-4, 9)],
        ];
        let eval = |terms: &[(i64, i64)], x: &BigRational| {
            terms.iter().fold(BigRational::zero(), |acc, &(d, c)| {
                let pow = if d >= 0 {
                    x.pow(d as i32)
                } else {
                    x.pow(d as i32)
                };
                acc + pow * BigRational::from_integer(c.into())
            })
        };
        for p in &polys {
            for q in &polys {
                let lhs = OagElement::laurent(p)
                    .try_cmp(&OagElement::laurent(q))
                    .unwrap();
                for big in [100_000i64, 1_000_000, 123_456_789] {
                    let x = BigRational::from_integer(big.into());
                    assert_eq!(
                        eval(p, &x).cmp(&eval(q, &x)),
                        lhs,
                        "{p:?} vs {q:?} at {big}"
                    );
                }
            }
        }
    }

    #[test]
    fn test_mismatch_is_an_error() {
        let a = OagElement::int_lex(&[1]);
        let b = loc(2, 1, 1);
        assert!(matches!(
            a.try_add(&b),
            Err(Error::DescriptorMismatch { .. })
        ));
        assert!(a.try_cmp(&OagElement::int_lex(&[1, 2])).is_err());
    }

    #[test]
    fn test_localized_membership() {
        assert!(OagElement::localized(2, 3, 4).is_ok());
        assert!(OagElement::localized(2, 1, 3).is_err());
        assert!(OagElement::localized(6, 4, 3).is_ok());
        assert!(OagElement::localized(6, 1, 2).is_ok());
        assert!(OagElement::localized(6, 1, 5).is_err());
        assert!(OagElement::localized(3, 3, 2).is_err());
    }

    #[test]
    fn test_halve() {
        assert_eq!(
            OagElement::int_lex(&[2, -4]).halve(),
            Some(OagElement::int_lex(&[1, -2]))
        );
        assert_eq!(OagElement::int_lex(&[1, 0]).halve(), None);
        assert_eq!(loc(2, 1, 1).halve(), Some(loc(2, 1, 2)));
        assert_eq!(loc(3, 1, 1).halve(), None);
        assert_eq!(loc(3, 2, 3).halve(), Some(loc(3, 1, 3)));
    }

    #[test]
    fn test_display() {
        assert_eq!(OagElement::int_lex(&[1, -3]).to_string(), "(1,-3)");
        assert_eq!(loc(2, -3, 4).to_string(), "-3/4");
        assert_eq!(
            OagElement::laurent(&[(2, 1), (0, -1), (-1, 2)]).to_string(),
            "t^2 - 1 + 2t^-1"
        );
        assert_eq!(OagElement::laurent(&[]).to_string(), "0");
    }
}
