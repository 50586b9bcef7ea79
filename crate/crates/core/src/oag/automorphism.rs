use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::element::{in_localized, supported_on};
use super::{OagDescriptor, OagElement};
use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// An order-preserving automorphism of Λ in triangular normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OagAutomorphism {
    /// Upper unitriangular integer matrix on `Z^n`. Row/column `k` refers
    /// to vector entry `n-1-k`, so the least significant coordinate comes
    /// first and off-diagonal entries feed dominant coordinates into
    /// subordinate ones: `[[1,1],[0,1]]` sends `(x,y)` to `(x, y+x)`.
    UnipotentInt(IntMatrix),
    /// Multiplication by a positive unit of `Z[1/base]`.
    PositiveScale { base: u64, factor: BigRational },
    /// Multiplication by `t^k` on Laurent polynomials.
    MonomialShift(i64),
    /// `(l, r) ↦ (left(l), right(r) + hom(l))` on a lexicographic pair.
    Triangular(Box<Triangular>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triangular {
    pub left: OagAutomorphism,
    pub right: OagAutomorphism,
    pub hom: LinearHom,
}

/// Homomorphism from the dominant to the subordinate factor of a pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LinearHom {
    Zero,
    /// `Z^m -> Z^n` in natural coordinates, `n` rows by `m` columns.
    IntMatrix(IntMatrix),
    /// `x ↦ factor * x` between rank-one groups (`Z` or `Z[1/a]`).
    Scalar(BigRational),
}

fn int_identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect()
}

fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![BigInt::zero(); cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// Reverse both index orders: triangular form <-> natural coordinates.
fn flip(m: &IntMatrix) -> IntMatrix {
    let n = m.len();
    (0..n)
        .map(|i| (0..n).map(|j| m[n - 1 - i][n - 1 - j].clone()).collect())
        .collect()
}

fn is_unipotent(m: &IntMatrix) -> bool {
    let n = m.len();
    m.iter().all(|row| row.len() == n)
        && (0..n).all(|i| m[i][i].is_one() && (0..i).all(|j| m[i][j].is_zero()))
}

/// Inverse of an upper unitriangular integer matrix.
fn unipotent_inverse(m: &IntMatrix) -> IntMatrix {
    let n = m.len();
    let mut inv = int_identity(n);
    // Solve m * inv = I column by column, bottom row up.
    for col in 0..n {
        for i in (0..n).rev() {
            let mut acc = BigInt::from((i == col) as i64);
            for k in i + 1..n {
                acc -= &m[i][k] * &inv[k][col];
            }
            inv[i][col] = acc;
        }
    }
    inv
}

fn rank_one_value(x: &OagElement) -> Option<BigRational> {
    match x {
        OagElement::IntLex(v) if v.len() == 1 => Some(BigRational::from_integer(v[0].clone())),
        OagElement::Localized { value, .. } => Some(value.clone()),
        _ => None,
    }
}

fn rank_one_element(desc: &OagDescriptor, value: BigRational) -> Result<OagElement> {
    match desc {
        OagDescriptor::IntLex { rank: 1 } => {
            if value.is_integer() {
                Ok(OagElement::IntLex(vec![value.to_integer()]))
            } else {
                Err(Error::NotInGroup(format!("{value} is not an integer")))
            }
        }
        OagDescriptor::Localized { base } => OagElement::localized_value(*base, value),
        _ => Err(Error::Unsupported(format!("{desc} is not rank one"))),
    }
}

impl LinearHom {
    fn canonical(self) -> Self {
        match self {
            LinearHom::IntMatrix(m) if m.iter().flatten().all(Zero::is_zero) => LinearHom::Zero,
            LinearHom::Scalar(q) if q.is_zero() => LinearHom::Zero,
            h => h,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, LinearHom::Zero)
    }

    /// Check the rule maps `from` into `to`.
    pub fn validate(&self, from: &OagDescriptor, to: &OagDescriptor) -> Result<()> {
        match self {
            LinearHom::Zero => Ok(()),
            LinearHom::IntMatrix(m) => match (from, to) {
                (OagDescriptor::IntLex { rank: cols }, OagDescriptor::IntLex { rank: rows })
                    if m.len() == *rows && m.iter().all(|r| r.len() == *cols) =>
                {
                    Ok(())
                }
                _ => Err(Error::InvalidAutomorphism(format!(
                    "integer matrix hom does not fit {from} -> {to}"
                ))),
            },
            LinearHom::Scalar(q) => {
                let target_ok = |v: &BigRational| match to {
                    OagDescriptor::IntLex { rank: 1 } => v.is_integer(),
                    OagDescriptor::Localized { base } => in_localized(*base, v),
                    _ => false,
                };
                let ok = match from {
                    OagDescriptor::IntLex { rank: 1 } => target_ok(q),
                    OagDescriptor::Localized { base: a } => match to {
                        // Every a-power denominator must survive in the target.
                        OagDescriptor::Localized { base: b } => {
                            supported_on(*b, &BigInt::from(*a)) && target_ok(q)
                        }
                        _ => false,
                    },
                    _ => false,
                };
                if ok {
                    Ok(())
                } else {
                    Err(Error::InvalidAutomorphism(format!(
                        "scalar hom {q} does not map {from} into {to}"
                    )))
                }
            }
        }
    }

    pub fn apply(&self, x: &OagElement, to: &OagDescriptor) -> Result<OagElement> {
        match self {
            LinearHom::Zero => Ok(OagElement::zero(to)),
            LinearHom::IntMatrix(m) => match x {
                OagElement::IntLex(v) if m.iter().all(|r| r.len() == v.len()) => {
                    Ok(OagElement::IntLex(
                        m.iter()
                            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
                            .collect(),
                    ))
                }
                _ => Err(Error::DescriptorMismatch {
                    left: "integer matrix hom".into(),
                    right: x.descriptor().to_string(),
                }),
            },
            LinearHom::Scalar(q) => {
                let v = rank_one_value(x).ok_or_else(|| Error::DescriptorMismatch {
                    left: "scalar hom".into(),
                    right: x.descriptor().to_string(),
                })?;
                rank_one_element(to, q * v)
            }
        }
    }

    fn add(&self, other: &LinearHom) -> Result<LinearHom> {
        Ok(match (self, other) {
            (LinearHom::Zero, h) | (h, LinearHom::Zero) => h.clone(),
            (LinearHom::IntMatrix(a), LinearHom::IntMatrix(b)) => LinearHom::IntMatrix(
                a.iter()
                    .zip(b)
                    .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
                    .collect(),
            )
            .canonical(),
            (LinearHom::Scalar(a), LinearHom::Scalar(b)) => LinearHom::Scalar(a + b).canonical(),
            _ => return Err(Error::Unsupported("sum of mixed hom rules".into())),
        })
    }

    fn neg(&self) -> LinearHom {
        match self {
            LinearHom::Zero => LinearHom::Zero,
            LinearHom::IntMatrix(m) => {
                LinearHom::IntMatrix(m.iter().map(|r| r.iter().map(|x| -x).collect()).collect())
            }
            LinearHom::Scalar(q) => LinearHom::Scalar(-q),
        }
    }

    /// `alpha ∘ self`, with `alpha` an automorphism of the target.
    fn after(&self, alpha: &OagAutomorphism) -> Result<LinearHom> {
        if self.is_zero() || alpha.is_identity() {
            return Ok(self.clone());
        }
        match (self, alpha) {
            (LinearHom::IntMatrix(k), OagAutomorphism::UnipotentInt(m)) => {
                Ok(LinearHom::IntMatrix(mat_mul(&flip(m), k)).canonical())
            }
            (LinearHom::Scalar(f), OagAutomorphism::PositiveScale { factor, .. }) => {
                Ok(LinearHom::Scalar(f * factor).canonical())
            }
            _ => Err(Error::Unsupported(
                "composition leaves the integer-linear hom family".into(),
            )),
        }
    }

    /// `self ∘ alpha`, with `alpha` an automorphism of the source.
    fn before(&self, alpha: &OagAutomorphism) -> Result<LinearHom> {
        if self.is_zero() || alpha.is_identity() {
            return Ok(self.clone());
        }
        match (self, alpha) {
            (LinearHom::IntMatrix(k), OagAutomorphism::UnipotentInt(m)) => {
                Ok(LinearHom::IntMatrix(mat_mul(k, &flip(m))).canonical())
            }
            (LinearHom::Scalar(f), OagAutomorphism::PositiveScale { factor, .. }) => {
                Ok(LinearHom::Scalar(f * factor).canonical())
            }
            _ => Err(Error::Unsupported(
                "composition leaves the integer-linear hom family".into(),
            )),
        }
    }
}

impl OagAutomorphism {
    pub fn identity(desc: &OagDescriptor) -> Self {
        match desc {
            OagDescriptor::IntLex { rank } => OagAutomorphism::UnipotentInt(int_identity(*rank)),
            OagDescriptor::Localized { base } => OagAutomorphism::PositiveScale {
                base: *base,
                factor: BigRational::one(),
            },
            OagDescriptor::Laurent => OagAutomorphism::MonomialShift(0),
            OagDescriptor::LexPair { left, right } => {
                OagAutomorphism::Triangular(Box::new(Triangular {
                    left: OagAutomorphism::identity(left),
                    right: OagAutomorphism::identity(right),
                    hom: LinearHom::Zero,
                }))
            }
        }
    }

    /// Unipotent automorphism from a matrix in the documented row order.
    pub fn unipotent(m: IntMatrix) -> Result<Self> {
        if m.is_empty() || !is_unipotent(&m) {
            return Err(Error::InvalidAutomorphism(
                "expected a square upper unitriangular integer matrix".into(),
            ));
        }
        Ok(OagAutomorphism::UnipotentInt(m))
    }

    pub fn unipotent_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::unipotent(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Unipotent automorphism given in natural coordinates
    /// (`y_i = Σ_j m[i][j] x_j`, lower unitriangular).
    pub fn unipotent_natural(m: IntMatrix) -> Result<Self> {
        Self::unipotent(flip(&m))
    }

    pub fn scale(base: u64, factor: BigRational) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidDescriptor(
                "localized base must be >= 2".into(),
            ));
        }
        if !factor.is_positive()
            || !supported_on(base, factor.numer())
            || !supported_on(base, factor.denom())
        {
            return Err(Error::InvalidAutomorphism(format!(
                "{factor} is not a positive unit of Z[1/{base}]"
            )));
        }
        Ok(OagAutomorphism::PositiveScale { base, factor })
    }

    pub fn scale_i64(base: u64, num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidAutomorphism("zero denominator".into()));
        }
        Self::scale(base, BigRational::new(num.into(), den.into()))
    }

    pub fn shift(k: i64) -> Self {
        OagAutomorphism::MonomialShift(k)
    }

    pub fn triangular(
        left: OagAutomorphism,
        right: OagAutomorphism,
        hom: LinearHom,
    ) -> Result<Self> {
        let hom = hom.canonical();
        hom.validate(&left.descriptor(), &right.descriptor())?;
        Ok(OagAutomorphism::Triangular(Box::new(Triangular {
            left,
            right,
            hom,
        })))
    }

    /// `(l, r) ↦ (left(l), right(r))`.
    pub fn diagonal(left: OagAutomorphism, right: OagAutomorphism) -> Self {
        OagAutomorphism::Triangular(Box::new(Triangular {
            left,
            right,
            hom: LinearHom::Zero,
        }))
    }

    pub fn descriptor(&self) -> OagDescriptor {
        match self {
            OagAutomorphism::UnipotentInt(m) => OagDescriptor::IntLex { rank: m.len() },
            OagAutomorphism::PositiveScale { base, .. } => OagDescriptor::Localized { base: *base },
            OagAutomorphism::MonomialShift(_) => OagDescriptor::Laurent,
            OagAutomorphism::Triangular(t) => {
                OagDescriptor::lex_pair(t.left.descriptor(), t.right.descriptor())
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            OagAutomorphism::UnipotentInt(m) => m.iter().enumerate().all(|(i, r)| {
                r.iter()
                    .enumerate()
                    .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
            }),
            OagAutomorphism::PositiveScale { factor, .. } => factor.is_one(),
            OagAutomorphism::MonomialShift(k) => *k == 0,
            OagAutomorphism::Triangular(t) => {
                t.hom.is_zero() && t.left.is_identity() && t.right.is_identity()
            }
        }
    }

    /// The matrix in natural coordinates (`UnipotentInt` only).
    pub fn natural_matrix(&self) -> Option<IntMatrix> {
        match self {
            OagAutomorphism::UnipotentInt(m) => Some(flip(m)),
            _ => None,
        }
    }

    pub fn apply(&self, x: &OagElement) -> Result<OagElement> {
        match (self, x) {
            (OagAutomorphism::UnipotentInt(m), OagElement::IntLex(v)) if m.len() == v.len() => {
                let n = v.len();
                // Row k of the stored matrix produces entry n-1-k from the
                // entries n-1-j, j >= k.
                let mut out = vec![BigInt::zero(); n];
                for k in 0..n {
                    let mut acc = BigInt::zero();
                    for j in k..n {
                        let e = &m[k][j];
                        if !e.is_zero() {
                            acc += e * &v[n - 1 - j];
                        }
                    }
                    out[n - 1 - k] = acc;
                }
                Ok(OagElement::IntLex(out))
            }
            (
                OagAutomorphism::PositiveScale { base, factor },
                OagElement::Localized { base: b, value },
            ) if base == b => Ok(OagElement::Localized {
                base: *base,
                value: value * factor,
            }),
            (OagAutomorphism::MonomialShift(k), OagElement::Laurent(m)) => Ok(OagElement::Laurent(
                m.iter().map(|(d, c)| (d + k, c.clone())).collect(),
            )),
            (OagAutomorphism::Triangular(t), OagElement::LexPair(p)) => {
                let l = t.left.apply(&p.0)?;
                let r = t.right.apply(&p.1)?;
                let r = if t.hom.is_zero() {
                    r
                } else {
                    r.try_add(&t.hom.apply(&p.0, &p.1.descriptor())?)?
                };
                Ok(OagElement::pair(l, r))
            }
            _ => Err(Error::DescriptorMismatch {
                left: self.descriptor().to_string(),
                right: x.descriptor().to_string(),
            }),
        }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &OagAutomorphism) -> Result<Self> {
        match (self, other) {
            (OagAutomorphism::UnipotentInt(a), OagAutomorphism::UnipotentInt(b))
                if a.len() == b.len() =>
            {
                Ok(OagAutomorphism::UnipotentInt(mat_mul(a, b)))
            }
            (
                OagAutomorphism::PositiveScale { base, factor: f },
                OagAutomorphism::PositiveScale { base: b, factor: g },
            ) if base == b => Ok(OagAutomorphism::PositiveScale {
                base: *base,
                factor: f * g,
            }),
            (OagAutomorphism::MonomialShift(a), OagAutomorphism::MonomialShift(b)) => {
                Ok(OagAutomorphism::MonomialShift(a + b))
            }
            (OagAutomorphism::Triangular(a), OagAutomorphism::Triangular(b)) => {
                let left = a.left.compose(&b.left)?;
                let right = a.right.compose(&b.right)?;
                let hom = b.hom.after(&a.right)?.add(&a.hom.before(&b.left)?)?;
                Ok(OagAutomorphism::Triangular(Box::new(Triangular {
                    left,
                    right,
                    hom,
                })))
            }
            _ => Err(Error::DescriptorMismatch {
                left: self.descriptor().to_string(),
                right: other.descriptor().to_string(),
            }),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(match self {
            OagAutomorphism::UnipotentInt(m) => OagAutomorphism::UnipotentInt(unipotent_inverse(m)),
            OagAutomorphism::PositiveScale { base, factor } => OagAutomorphism::PositiveScale {
                base: *base,
                factor: factor.recip(),
            },
            OagAutomorphism::MonomialShift(k) => OagAutomorphism::MonomialShift(-k),
            OagAutomorphism::Triangular(t) => {
                let left = t.left.inverse()?;
                let right = t.right.inverse()?;
                let hom = t.hom.before(&left)?.after(&right)?.neg();
                OagAutomorphism::Triangular(Box::new(Triangular { left, right, hom }))
            }
        })
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = OagAutomorphism::identity(&self.descriptor());
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base)?;
        }
        Ok(acc)
    }

    /// Convex hull of the image of `self - 1`.
    pub fn displacement_hull(&self) -> Hull {
        match self {
            OagAutomorphism::UnipotentInt(_) => {
                let nat = self.natural_matrix().expect("unipotent");
                let n = nat.len();
                let top = (0..n).find(|&i| (0..i).any(|j| !nat[i][j].is_zero()));
                match top {
                    None => Hull::Zero,
                    Some(i) => Hull::coord(i, n),
                }
            }
            OagAutomorphism::PositiveScale { factor, .. } => {
                if factor.is_one() {
                    Hull::Zero
                } else {
                    Hull::All
                }
            }
            OagAutomorphism::MonomialShift(k) => {
                if *k == 0 {
                    Hull::Zero
                } else {
                    Hull::All
                }
            }
            OagAutomorphism::Triangular(t) => {
                let hl = t.left.displacement_hull();
                if hl != Hull::Zero {
                    Hull::left(hl)
                } else {
                    let hr = t
                        .right
                        .displacement_hull()
                        .join(&t.hom.image_hull(&t.right.descriptor()));
                    Hull::right(hr)
                }
            }
        }
    }
}

impl LinearHom {
    fn image_hull(&self, to: &OagDescriptor) -> Hull {
        match self {
            LinearHom::Zero => Hull::Zero,
            LinearHom::IntMatrix(m) => {
                match (0..m.len()).find(|&i| m[i].iter().any(|x| !x.is_zero())) {
                    None => Hull::Zero,
                    Some(i) => match to {
                        OagDescriptor::IntLex { rank } => Hull::coord(i, *rank),
                        _ => Hull::All,
                    },
                }
            }
            LinearHom::Scalar(_) => Hull::All,
        }
    }
}

/// A convex subgroup of Λ (they are linearly ordered by inclusion).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Hull {
    Zero,
    All,
    /// In `Z^n`: elements whose first `i` coordinates vanish, `0 < i < n`.
    Coord(usize),
    /// In Laurent polynomials: degree at most `d`.
    Degree(i64),
    /// In a pair: left component in the (nonzero) hull, right arbitrary.
    Left(Box<Hull>),
    /// In a pair: left component zero, right component in the hull.
    Right(Box<Hull>),
}

impl Hull {
    fn coord(i: usize, n: usize) -> Hull {
        if i == 0 {
            Hull::All
        } else if i >= n {
            Hull::Zero
        } else {
            Hull::Coord(i)
        }
    }

    fn left(h: Hull) -> Hull {
        match h {
            Hull::All => Hull::All,
            Hull::Zero => Hull::Right(Box::new(Hull::All)),
            h => Hull::Left(Box::new(h)),
        }
    }

    fn right(h: Hull) -> Hull {
        match h {
            Hull::Zero => Hull::Zero,
            h => Hull::Right(Box::new(h)),
        }
    }

    /// The larger of two convex subgroups of the same group.
    pub fn join(&self, other: &Hull) -> Hull {
        match (self, other) {
            (Hull::Zero, h) | (h, Hull::Zero) => h.clone(),
            (Hull::All, _) | (_, Hull::All) => Hull::All,
            (Hull::Coord(a), Hull::Coord(b)) => Hull::Coord(*a.min(b)),
            (Hull::Degree(a), Hull::Degree(b)) => Hull::Degree(*a.max(b)),
            (Hull::Left(a), Hull::Left(b)) => Hull::Left(Box::new(a.join(b))),
            (Hull::Left(a), Hull::Right(_)) | (Hull::Right(_), Hull::Left(a)) => {
                Hull::Left(a.clone())
            }
            (Hull::Right(a), Hull::Right(b)) => Hull::Right(Box::new(a.join(b))),
            _ => Hull::All,
        }
    }

    pub fn contains(&self, x: &OagElement) -> bool {
        match (self, x) {
            (Hull::Zero, x) => x.is_zero(),
            (Hull::All, _) => true,
            (Hull::Coord(i), OagElement::IntLex(v)) => v.iter().take(*i).all(Zero::is_zero),
            (Hull::Degree(d), OagElement::Laurent(m)) => {
                m.keys().next_back().is_none_or(|top| top <= d)
            }
            (Hull::Left(h), OagElement::LexPair(p)) => h.contains(&p.0),
            (Hull::Right(h), OagElement::LexPair(p)) => p.0.is_zero() && h.contains(&p.1),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples_pairs(d: &OagDescriptor) -> Vec<(OagElement, OagElement)> {
        let s = d.samples();
        let mut out = vec![];
        for a in &s {
            for b in &s {
                out.push((a.clone(), b.clone()));
            }
        }
        out
    }

    fn all_kinds() -> Vec<OagAutomorphism> {
        let u = OagAutomorphism::unipotent_i64(&[&[1, 2, -1], &[0, 1, 3], &[0, 0, 1]]).unwrap();
        let s = OagAutomorphism::scale_i64(6, 3, 2).unwrap();
        let t = OagAutomorphism::shift(2);
        let tri = OagAutomorphism::triangular(
            OagAutomorphism::identity(&OagDescriptor::int_lex(1)),
            OagAutomorphism::scale_i64(2, 2, 1).unwrap(),
            LinearHom::Scalar(BigRational::new(3.into(), 1.into())),
        )
        .unwrap();
        let tri2 = OagAutomorphism::triangular(
            OagAutomorphism::unipotent_i64(&[&[1, 1], &[0, 1]]).unwrap(),
            OagAutomorphism::unipotent_i64(&[&[1, -2], &[0, 1]]).unwrap(),
            LinearHom::IntMatrix(vec![
                vec![BigInt::from(1), BigInt::from(0)],
                vec![BigInt::from(-4), BigInt::from(2)],
            ]),
        )
        .unwrap();
        vec![u, s, t, tri, tri2]
    }

    #[test]
    fn test_unipotent_convention() {
        let a = OagAutomorphism::unipotent_i64(&[&[1, 1], &[0, 1]]).unwrap();
        let x = OagElement::int_lex(&[2, 3]);
        assert_eq!(a.apply(&x).unwrap(), OagElement::int_lex(&[2, 5]));
    }

    #[test]
    fn test_unipotent_rejects_non_unitriangular() {
        assert!(OagAutomorphism::unipotent_i64(&[&[2, 0], &[0, 1]]).is_err());
        assert!(OagAutomorphism::unipotent_i64(&[&[1, 0], &[1, 1]]).is_err());
        assert!(OagAutomorphism::unipotent_i64(&[&[1, 0]]).is_err());
    }

    #[test]
    fn test_inverse_and_compose_examples() {
        let a = OagAutomorphism::unipotent_i64(&[&[1, 1], &[0, 1]]).unwrap();
        let inv = OagAutomorphism::unipotent_i64(&[&[1, -1], &[0, 1]]).unwrap();
        assert_eq!(a.inverse().unwrap(), inv);
        assert!(OagAutomorphism::shift(2)
            .compose(&OagAutomorphism::shift(-2))
            .unwrap()
            .is_identity());
        let b = OagAutomorphism::unipotent_i64(&[&[1, 4, 0], &[0, 1, -2], &[0, 0, 1]]).unwrap();
        let c = OagAutomorphism::unipotent_i64(&[&[1, 1, 5], &[0, 1, 1], &[0, 0, 1]]).unwrap();
        let bc = b.compose(&c).unwrap();
        assert!(matches!(&bc, OagAutomorphism::UnipotentInt(m) if is_unipotent(m)));
        assert_eq!(
            bc,
            OagAutomorphism::unipotent_i64(&[&[1, 5, 9], &[0, 1, -1], &[0, 0, 1]]).unwrap()
        );
    }

    #[test]
    fn test_shift_example() {
        let p = OagElement::laurent(&[(0, 1), (1, 1)]);
        assert_eq!(
            OagAutomorphism::shift(1).apply(&p).unwrap(),
            OagElement::laurent(&[(1, 1), (2, 1)])
        );
    }

    #[test]
    fn test_all_kinds_preserve_order_and_invert() {
        for a in all_kinds() {
            let d = a.descriptor();
            let inv = a.inverse().unwrap();
            for (x, y) in samples_pairs(&d) {
                let ax = a.apply(&x).unwrap();
                let ay = a.apply(&y).unwrap();
                assert_eq!(x.try_cmp(&y).unwrap(), ax.try_cmp(&ay).unwrap(), "{a:?}");
                assert_eq!(
                    a.apply(&x.try_add(&y).unwrap()).unwrap(),
                    ax.try_add(&ay).unwrap()
                );
                assert_eq!(inv.apply(&ax).unwrap(), x);
            }
            assert!(inv.compose(&a).unwrap().is_identity());
            assert!(a.compose(&inv).unwrap().is_identity());
        }
    }

    #[test]
    fn test_compose_matches_sequential_application() {
        let kinds = all_kinds();
        for a in &kinds {
            for b in &kinds {
                if a.descriptor() != b.descriptor() {
                    assert!(a.compose(b).is_err());
                    continue;
                }
                let ab = a.compose(b).unwrap();
                for x in a.descriptor().samples() {
                    assert_eq!(
                        ab.apply(&x).unwrap(),
                        a.apply(&b.apply(&x).unwrap()).unwrap()
                    );
                }
            }
            let sq = a.compose(a).unwrap();
            let cube = sq.compose(a).unwrap();
            assert_eq!(a.pow(3).unwrap(), cube);
            assert_eq!(a.pow(-3).unwrap(), cube.inverse().unwrap());
        }
    }

    #[test]
    fn test_scale_requires_unit() {
        assert!(OagAutomorphism::scale_i64(2, 1, 2).is_ok());
        assert!(OagAutomorphism::scale_i64(6, 1, 3).is_ok());
        assert!(OagAutomorphism::scale_i64(2, 1, 3).is_err());
        assert!(OagAutomorphism::scale_i64(2, -2, 1).is_err());
        assert!(OagAutomorphism::scale_i64(3, 2, 1).is_err());
    }

    #[test]
    fn test_displacement_hull() {
        // (x,y,z) ↦ (x,y,z+y): image of α-1 is the last coordinate.
        let a = OagAutomorphism::unipotent_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let h = a.displacement_hull();
        assert_eq!(h, Hull::Coord(2));
        assert!(h.contains(&OagElement::int_lex(&[0, 0, 7])));
        assert!(!h.contains(&OagElement::int_lex(&[0, 1, 0])));
        let s = OagAutomorphism::scale_i64(3, 1, 3).unwrap();
        assert_eq!(s.displacement_hull(), Hull::All);
        let bs = OagAutomorphism::diagonal(
            OagAutomorphism::identity(&OagDescriptor::int_lex(1)),
            OagAutomorphism::scale_i64(2, 2, 1).unwrap(),
        );
        let h = bs.displacement_hull();
        assert!(h.contains(&OagElement::pair(
            OagElement::int_lex(&[0]),
            OagElement::localized(2, 5, 4).unwrap()
        )));
        assert!(!h.contains(&OagElement::pair(
            OagElement::int_lex(&[1]),
            OagElement::localized(2, 0, 1).unwrap()
        )));
    }
}
