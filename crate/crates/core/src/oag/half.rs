use std::cmp::Ordering;
use std::fmt;

use super::{OagAutomorphism, OagDescriptor, OagElement};
use crate::error::Result;

/// An element of the 2-divisible extension ½Λ.
///
/// Stored as its double, which lies in Λ, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HalfElement {
    twice: OagElement,
}

impl HalfElement {
    pub fn zero(desc: &OagDescriptor) -> Self {
        HalfElement {
            twice: OagElement::zero(desc),
        }
    }

    /// Embed `x ∈ Λ`.
    pub fn from_element(x: &OagElement) -> Self {
        HalfElement { twice: x.double() }
    }

    /// `x / 2`.
    pub fn half_of(x: OagElement) -> Self {
        HalfElement { twice: x }
    }

    pub fn twice(&self) -> &OagElement {
        &self.twice
    }

    pub fn into_twice(self) -> OagElement {
        self.twice
    }

    /// Canonical numerator: the element itself when integral, else `2x`.
    pub fn numerator(&self) -> OagElement {
        self.twice.halve().unwrap_or_else(|| self.twice.clone())
    }

    /// Denominator flag: true when the value is not in Λ.
    pub fn is_halved(&self) -> bool {
        !self.twice.is_two_divisible()
    }

    pub fn is_integral(&self) -> bool {
        !self.is_halved()
    }

    /// The value as an element of Λ, if it is one.
    pub fn to_element(&self) -> Option<OagElement> {
        self.twice.halve()
    }

    pub fn descriptor(&self) -> OagDescriptor {
        self.twice.descriptor()
    }

    pub fn try_add(&self, other: &HalfElement) -> Result<Self> {
        Ok(HalfElement {
            twice: self.twice.try_add(&other.twice)?,
        })
    }

    pub fn try_sub(&self, other: &HalfElement) -> Result<Self> {
        Ok(HalfElement {
            twice: self.twice.try_sub(&other.twice)?,
        })
    }

    pub fn add_element(&self, x: &OagElement) -> Result<Self> {
        Ok(HalfElement {
            twice: self.twice.try_add(&x.double())?,
        })
    }

    pub fn neg(&self) -> Self {
        HalfElement {
            twice: self.twice.neg(),
        }
    }

    pub fn abs(&self) -> Self {
        HalfElement {
            twice: self.twice.abs(),
        }
    }

    pub fn try_cmp(&self, other: &HalfElement) -> Result<Ordering> {
        self.twice.try_cmp(&other.twice)
    }

    pub fn cmp_element(&self, x: &OagElement) -> Result<Ordering> {
        self.twice.try_cmp(&x.double())
    }

    pub fn signum(&self) -> Ordering {
        self.twice.signum()
    }

    pub fn is_zero(&self) -> bool {
        self.twice.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.twice.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.twice.is_negative()
    }

    /// Automorphisms extend uniquely to ½Λ.
    pub fn apply_aut(&self, alpha: &OagAutomorphism) -> Result<Self> {
        Ok(HalfElement {
            twice: alpha.apply(&self.twice)?,
        })
    }
}

impl fmt::Display for HalfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.twice.halve() {
            Some(x) => write!(f, "{x}"),
            None => write!(f, "{}/2", self.twice),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_canonical_flag() {
        let one = OagElement::int_lex(&[1, 0]);
        let h = HalfElement::half_of(one.clone());
        assert!(h.is_halved());
        assert_eq!(h.numerator(), one);
        let two = OagElement::int_lex(&[2, 0]);
        let h2 = HalfElement::half_of(two);
        assert!(!h2.is_halved());
        assert_eq!(h2.numerator(), one);
        assert_eq!(h2, HalfElement::from_element(&one));
    }

    #[test]
    fn test_half_in_two_divisible_group() {
        // Z[1/2] is 2-divisible, so every half value is integral.
        let x = OagElement::localized(2, 1, 1).unwrap();
        let h = HalfElement::half_of(x);
        assert!(h.is_integral());
        assert_eq!(
            h.to_element(),
            Some(OagElement::localized(2, 1, 2).unwrap())
        );
    }

    #[test]
    fn test_order_and_display() {
        let a = HalfElement::half_of(OagElement::int_lex(&[1]));
        let b = HalfElement::from_element(&OagElement::int_lex(&[1]));
        assert_eq!(a.try_cmp(&b).unwrap(), Ordering::Less);
        assert_eq!(a.to_string(), "(1)/2");
        assert_eq!(b.to_string(), "(1)");
    }
}
