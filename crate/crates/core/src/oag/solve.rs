use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::automorphism::LinearHom;
use super::intlin::solve_integer_system;
use super::{OagAutomorphism, OagElement, Sign};
use crate::error::{Error, Result};

/// Solutions of `x = s·α(x) + λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionSet {
    /// No solution.
    Empty,
    Unique(OagElement),
    Family(Family),
}

/// A coset `particular + kernel`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub particular: OagElement,
    pub kernel: Kernel,
}

/// Solution set of the homogeneous equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Kernel {
    Trivial,
    /// Integer span of the listed elements (nonempty).
    Lattice(Vec<OagElement>),
    /// Every element of the group.
    Whole,
    /// Product of kernels on the two factors of a pair.
    Pair(Box<Kernel>, Box<Kernel>),
}

impl Kernel {
    fn is_trivial(&self) -> bool {
        match self {
            Kernel::Trivial => true,
            Kernel::Pair(a, b) => a.is_trivial() && b.is_trivial(),
            _ => false,
        }
    }

    /// A few nonzero kernel elements, for certificates.
    pub fn sample_generators(&self, desc: &super::OagDescriptor) -> Vec<OagElement> {
        match (self, desc) {
            (Kernel::Trivial, _) => vec![],
            (Kernel::Lattice(g), _) => g.clone(),
            (Kernel::Whole, d) => d
                .samples()
                .into_iter()
                .filter(|x| !x.is_zero())
                .take(3)
                .collect(),
            (Kernel::Pair(a, b), super::OagDescriptor::LexPair { left, right }) => {
                let zl = OagElement::zero(left);
                let zr = OagElement::zero(right);
                let mut out: Vec<OagElement> = a
                    .sample_generators(left)
                    .into_iter()
                    .map(|l| OagElement::pair(l, zr.clone()))
                    .collect();
                out.extend(
                    b.sample_generators(right)
                        .into_iter()
                        .map(|r| OagElement::pair(zl.clone(), r)),
                );
                out
            }
            _ => vec![],
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kernel::Trivial => write!(f, "0"),
            Kernel::Whole => write!(f, "all"),
            Kernel::Lattice(g) => {
                write!(f, "span{{")?;
                for (i, x) in g.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "}}")
            }
            Kernel::Pair(a, b) => write!(f, "<{a}; {b}>"),
        }
    }
}

impl fmt::Display for SolutionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionSet::Empty => write!(f, "none"),
            SolutionSet::Unique(x) => write!(f, "{{{x}}}"),
            SolutionSet::Family(fam) => write!(f, "{} + {}", fam.particular, fam.kernel),
        }
    }
}

impl SolutionSet {
    pub fn is_empty(&self) -> bool {
        matches!(self, SolutionSet::Empty)
    }

    /// Some solution, if any.
    pub fn representative(&self) -> Option<&OagElement> {
        match self {
            SolutionSet::Empty => None,
            SolutionSet::Unique(x) => Some(x),
            SolutionSet::Family(f) => Some(&f.particular),
        }
    }

    fn from_parts(particular: OagElement, kernel: Kernel) -> Self {
        if kernel.is_trivial() {
            SolutionSet::Unique(particular)
        } else {
            SolutionSet::Family(Family { particular, kernel })
        }
    }
}

/// True if `x = s·α(x) + λ`.
pub fn is_solution(
    alpha: &OagAutomorphism,
    s: Sign,
    lambda: &OagElement,
    x: &OagElement,
) -> Result<bool> {
    let ax = alpha.apply(x)?;
    let rhs = s.apply(&ax).try_add(lambda)?;
    Ok(&rhs == x)
}

/// Solve `x = s·α(x) + λ` exactly. Every reported solution (and every
/// listed lattice generator) is re-checked by substitution.
pub fn solve_displacement(
    alpha: &OagAutomorphism,
    s: Sign,
    lambda: &OagElement,
) -> Result<SolutionSet> {
    alpha.descriptor().ensure_same(&lambda.descriptor())?;
    let set = solve_unchecked(alpha, s, lambda)?;
    if let Some(x) = set.representative() {
        if !is_solution(alpha, s, lambda, x)? {
            return Err(Error::Internal(format!("solver returned non-solution {x}")));
        }
    }
    if let SolutionSet::Family(Family {
        particular,
        kernel: Kernel::Lattice(gens),
    }) = &set
    {
        for g in gens {
            let y = particular.try_add(g)?;
            if !is_solution(alpha, s, lambda, &y)? {
                return Err(Error::Internal(format!("bad kernel generator {g}")));
            }
        }
    }
    Ok(set)
}

fn solve_unchecked(alpha: &OagAutomorphism, s: Sign, lambda: &OagElement) -> Result<SolutionSet> {
    match (alpha, lambda) {
        (OagAutomorphism::UnipotentInt(_), OagElement::IntLex(b)) => {
            let nat = alpha.natural_matrix().expect("unipotent");
            Ok(solve_intlex(&nat, s, b))
        }
        (OagAutomorphism::PositiveScale { base, factor }, OagElement::Localized { value, .. }) => {
            let coef = BigRational::one() - s.apply_rational(factor);
            if coef.is_zero() {
                return Ok(if value.is_zero() {
                    SolutionSet::Family(Family {
                        particular: lambda.clone(),
                        kernel: Kernel::Whole,
                    })
                } else {
                    SolutionSet::Empty
                });
            }
            match OagElement::localized_value(*base, value / coef) {
                Ok(x) => Ok(SolutionSet::Unique(x)),
                Err(_) => Ok(SolutionSet::Empty),
            }
        }
        (OagAutomorphism::MonomialShift(k), OagElement::Laurent(m)) => {
            let mut den: BTreeMap<i64, BigInt> = BTreeMap::new();
            *den.entry(0).or_insert_with(BigInt::zero) += 1;
            let sk: BigInt = match s {
                Sign::Plus => (-1).into(),
                Sign::Minus => 1.into(),
            };
            *den.entry(*k).or_insert_with(BigInt::zero) += sk;
            den.retain(|_, c| !c.is_zero());
            if den.is_empty() {
                return Ok(if m.is_empty() {
                    SolutionSet::Family(Family {
                        particular: lambda.clone(),
                        kernel: Kernel::Whole,
                    })
                } else {
                    SolutionSet::Empty
                });
            }
            Ok(match laurent_exact_div(m, &den) {
                Some(q) => SolutionSet::Unique(OagElement::laurent_map(q)),
                None => SolutionSet::Empty,
            })
        }
        (OagAutomorphism::Triangular(t), OagElement::LexPair(p)) => {
            let left = solve_unchecked(&t.left, s, &p.0)?;
            let right_desc = p.1.descriptor();
            match left {
                SolutionSet::Empty => Ok(SolutionSet::Empty),
                SolutionSet::Unique(l) => {
                    let push = s.apply(&t.hom.apply(&l, &right_desc)?);
                    let rhs = push.try_add(&p.1)?;
                    Ok(match solve_unchecked(&t.right, s, &rhs)? {
                        SolutionSet::Empty => SolutionSet::Empty,
                        SolutionSet::Unique(r) => SolutionSet::Unique(OagElement::pair(l, r)),
                        SolutionSet::Family(f) => SolutionSet::from_parts(
                            OagElement::pair(l, f.particular),
                            Kernel::Pair(Box::new(Kernel::Trivial), Box::new(f.kernel)),
                        ),
                    })
                }
                SolutionSet::Family(fl) => {
                    if t.hom.is_zero() {
                        Ok(match solve_unchecked(&t.right, s, &p.1)? {
                            SolutionSet::Empty => SolutionSet::Empty,
                            SolutionSet::Unique(r) => SolutionSet::from_parts(
                                OagElement::pair(fl.particular, r),
                                Kernel::Pair(Box::new(fl.kernel), Box::new(Kernel::Trivial)),
                            ),
                            SolutionSet::Family(fr) => SolutionSet::from_parts(
                                OagElement::pair(fl.particular, fr.particular),
                                Kernel::Pair(Box::new(fl.kernel), Box::new(fr.kernel)),
                            ),
                        })
                    } else {
                        solve_flattened(alpha, s, lambda)
                    }
                }
            }
        }
        _ => Err(Error::DescriptorMismatch {
            left: alpha.descriptor().to_string(),
            right: lambda.descriptor().to_string(),
        }),
    }
}

/// `(I - sN) x = b` over the integers, `N` in natural coordinates.
fn solve_intlex(nat: &[Vec<BigInt>], s: Sign, b: &[BigInt]) -> SolutionSet {
    let n = b.len();
    let a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let id = BigInt::from((i == j) as i64);
                    match s {
                        Sign::Plus => id - &nat[i][j],
                        Sign::Minus => id + &nat[i][j],
                    }
                })
                .collect()
        })
        .collect();
    match solve_integer_system(&a, b, n) {
        None => SolutionSet::Empty,
        Some(sol) => {
            let particular = OagElement::IntLex(sol.particular);
            if sol.kernel.is_empty() {
                SolutionSet::Unique(particular)
            } else {
                SolutionSet::Family(Family {
                    particular,
                    kernel: Kernel::Lattice(
                        sol.kernel.into_iter().map(OagElement::IntLex).collect(),
                    ),
                })
            }
        }
    }
}

/// Pairs of integer lattices with an integer-matrix hom: solve as one
/// system on the concatenated coordinates.
fn solve_flattened(alpha: &OagAutomorphism, s: Sign, lambda: &OagElement) -> Result<SolutionSet> {
    let unsupported = || {
        Error::Unsupported(
            "triangular elimination with a non-zero hom over a solution family".into(),
        )
    };
    let OagAutomorphism::Triangular(t) = alpha else {
        return Err(unsupported());
    };
    let (Some(n1), Some(n2)) = (t.left.natural_matrix(), t.right.natural_matrix()) else {
        return Err(unsupported());
    };
    let k = match &t.hom {
        LinearHom::IntMatrix(k) => k.clone(),
        _ => return Err(unsupported()),
    };
    let (OagElement::IntLex(b1), OagElement::IntLex(b2)) = (
        lambda.left().ok_or_else(unsupported)?,
        lambda.right().ok_or_else(unsupported)?,
    ) else {
        return Err(unsupported());
    };
    let (m, n) = (n1.len(), n2.len());
    let mut big = vec![vec![BigInt::zero(); m + n]; m + n];
    for i in 0..m {
        for j in 0..m {
            big[i][j] = n1[i][j].clone();
        }
    }
    for i in 0..n {
        for j in 0..m {
            big[m + i][j] = k[i][j].clone();
        }
        for j in 0..n {
            big[m + i][m + j] = n2[i][j].clone();
        }
    }
    let b: Vec<BigInt> = b1.iter().chain(b2.iter()).cloned().collect();
    let split = |v: Vec<BigInt>| {
        let (l, r) = v.split_at(m);
        OagElement::pair(
            OagElement::IntLex(l.to_vec()),
            OagElement::IntLex(r.to_vec()),
        )
    };
    Ok(match solve_intlex(&big, s, &b) {
        SolutionSet::Empty => SolutionSet::Empty,
        SolutionSet::Unique(OagElement::IntLex(v)) => SolutionSet::Unique(split(v)),
        SolutionSet::Family(Family {
            particular: OagElement::IntLex(v),
            kernel: Kernel::Lattice(gens),
        }) => SolutionSet::Family(Family {
            particular: split(v),
            kernel: Kernel::Lattice(
                gens.into_iter()
                    .map(|g| match g {
                        OagElement::IntLex(v) => split(v),
                        other => other,
                    })
                    .collect(),
            ),
        }),
        _ => {
            return Err(Error::Internal(
                "unexpected flattened solution shape".into(),
            ))
        }
    })
}

/// Exact quotient `num / den` in the Laurent ring, if it exists. `den`
/// must have unit leading coefficient.
fn laurent_exact_div(
    num: &BTreeMap<i64, BigInt>,
    den: &BTreeMap<i64, BigInt>,
) -> Option<BTreeMap<i64, BigInt>> {
    let (&dtop, lead) = den.iter().next_back()?;
    let (&dlow, _) = den.iter().next()?;
    let Some((&nlow, _)) = num.iter().next() else {
        return Some(BTreeMap::new());
    };
    let floor = nlow - dlow;
    let mut rem = num.clone();
    let mut quot = BTreeMap::new();
    while let Some((&top, c)) = rem.iter().next_back() {
        let qd = top - dtop;
        if qd < floor {
            return None;
        }
        let (qc, r) = c.div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        for (d, dc) in den {
            let e = rem.entry(d + qd).or_insert_with(BigInt::zero);
            *e -= &qc * dc;
            if e.is_zero() {
                rem.remove(&(d + qd));
            }
        }
        quot.insert(qd, qc);
    }
    Some(quot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oag::OagDescriptor;

    #[test]
    fn test_identity_family() {
        let id = OagAutomorphism::identity(&OagDescriptor::int_lex(2));
        let set = solve_displacement(&id, Sign::Plus, &OagElement::int_lex(&[0, 0])).unwrap();
        match set {
            SolutionSet::Family(f) => match f.kernel {
                Kernel::Lattice(g) => assert_eq!(g.len(), 2),
                k => panic!("unexpected kernel {k}"),
            },
            other => panic!("expected family, got {other}"),
        }
    }

    #[test]
    fn test_nesting_map_fixed_points() {
        let two = OagElement::localized(2, 2, 1).unwrap();
        let a2 = OagAutomorphism::scale_i64(2, 1, 2).unwrap();
        assert_eq!(
            solve_displacement(&a2, Sign::Minus, &two).unwrap(),
            SolutionSet::Empty
        );
        let two6 = OagElement::localized(6, 2, 1).unwrap();
        let a6 = OagAutomorphism::scale_i64(6, 1, 2).unwrap();
        assert_eq!(
            solve_displacement(&a6, Sign::Minus, &two6).unwrap(),
            SolutionSet::Unique(OagElement::localized(6, 4, 3).unwrap())
        );
    }

    #[test]
    fn test_non_subtree_family() {
        // (x,y,z) ↦ (x,y,z+y+x)
        let a = OagAutomorphism::unipotent_i64(&[&[1, 1, 1], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let set = solve_displacement(&a, Sign::Plus, &OagElement::int_lex(&[0, 0, 0])).unwrap();
        for p in [[1, -1, 0], [2, -2, 5], [0, 0, 0], [-3, 3, 1]] {
            assert!(is_solution(
                &a,
                Sign::Plus,
                &OagElement::int_lex(&[0, 0, 0]),
                &OagElement::int_lex(&p)
            )
            .unwrap());
        }
        assert!(!is_solution(
            &a,
            Sign::Plus,
            &OagElement::int_lex(&[0, 0, 0]),
            &OagElement::int_lex(&[1, 0, 0])
        )
        .unwrap());
        match set {
            SolutionSet::Family(f) => match f.kernel {
                Kernel::Lattice(g) => {
                    assert_eq!(g.len(), 2);
                    for v in g {
                        let OagElement::IntLex(c) = v else { panic!() };
                        assert!((&c[0] + &c[1]).is_zero());
                    }
                }
                k => panic!("unexpected kernel {k}"),
            },
            other => panic!("expected family, got {other}"),
        }
    }

    #[test]
    fn test_laurent_solutions() {
        // x = t x + (1 - t)  =>  x = 1
        let lambda = OagElement::laurent(&[(0, 1), (1, -1)]);
        assert_eq!(
            solve_displacement(&OagAutomorphism::shift(1), Sign::Plus, &lambda).unwrap(),
            SolutionSet::Unique(OagElement::laurent(&[(0, 1)]))
        );
        // x = t x + 1 has no Laurent solution (1/(1-t) is a power series).
        let one = OagElement::laurent(&[(0, 1)]);
        assert!(
            solve_displacement(&OagAutomorphism::shift(1), Sign::Plus, &one)
                .unwrap()
                .is_empty()
        );
        // x = -x + 2t  =>  x = t
        let l2 = OagElement::laurent(&[(1, 2)]);
        assert_eq!(
            solve_displacement(&OagAutomorphism::shift(0), Sign::Minus, &l2).unwrap(),
            SolutionSet::Unique(OagElement::laurent(&[(1, 1)]))
        );
        // x = -t^-2 x + (t^3 + t)
        let l3 = OagElement::laurent(&[(3, 1), (1, 1)]);
        let set = solve_displacement(&OagAutomorphism::shift(-2), Sign::Minus, &l3).unwrap();
        assert_eq!(set, SolutionSet::Unique(OagElement::laurent(&[(3, 1)])));
    }

    #[test]
    fn test_pair_elimination() {
        // BS-style: (x,y) ↦ (x, 2y) + (0, 3): x free, y = -3.
        let d1 = OagDescriptor::int_lex(1);
        let a = OagAutomorphism::diagonal(
            OagAutomorphism::identity(&d1),
            OagAutomorphism::scale_i64(2, 2, 1).unwrap(),
        );
        let lambda = OagElement::pair(
            OagElement::int_lex(&[0]),
            OagElement::localized(2, 3, 1).unwrap(),
        );
        let set = solve_displacement(&a, Sign::Plus, &lambda).unwrap();
        let SolutionSet::Family(f) = set else {
            panic!("expected family")
        };
        assert_eq!(
            f.particular.right().unwrap(),
            &OagElement::localized(2, -3, 1).unwrap()
        );
        let lambda = OagElement::pair(
            OagElement::int_lex(&[1]),
            OagElement::localized(2, 3, 1).unwrap(),
        );
        assert!(solve_displacement(&a, Sign::Plus, &lambda)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn test_pair_with_int_hom_flattens() {
        let u1 = OagAutomorphism::identity(&OagDescriptor::int_lex(1));
        let a = OagAutomorphism::triangular(
            u1.clone(),
            u1,
            LinearHom::IntMatrix(vec![vec![BigInt::from(2)]]),
        )
        .unwrap();
        // (x, y) ↦ (x, y + 2x) + (0, 4): x = -2, y free.
        let lambda = OagElement::pair(OagElement::int_lex(&[0]), OagElement::int_lex(&[4]));
        let set = solve_displacement(&a, Sign::Plus, &lambda).unwrap();
        let SolutionSet::Family(f) = set else {
            panic!("expected family")
        };
        assert_eq!(f.particular.left().unwrap(), &OagElement::int_lex(&[-2]));
        let lambda = OagElement::pair(OagElement::int_lex(&[0]), OagElement::int_lex(&[3]));
        assert!(solve_displacement(&a, Sign::Plus, &lambda)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn test_descriptor_mismatch() {
        let a = OagAutomorphism::shift(1);
        assert!(solve_displacement(&a, Sign::Plus, &OagElement::int_lex(&[1])).is_err());
    }
}
