//! Affine automorphisms of linear and star trees: application,
//! composition, fixed points, classification, rigidity and the
//! displacement function b.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lyndon::{ancillary_a, ancillary_b, ancillary_c, LengthFunction};
use crate::oag::json::{
    aut_from_value, aut_to_value, element_from_value, element_to_value, half_to_value,
};
use crate::oag::{
    solve_displacement, HalfElement, OagAutomorphism, OagDescriptor, OagElement, Sign, SolutionSet,
};
use crate::trees::{TreePoint, TreeSpace};

/// `x ↦ s·α(x) + λ` on the linear tree Λ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearMap {
    pub sign: Sign,
    pub auto: OagAutomorphism,
    pub translation: OagElement,
}

/// `(x, i) ↦ (α(x), π(i))` on a star tree; `perm[i-1] = π(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StarMap {
    pub rays: usize,
    pub perm: Vec<usize>,
    pub scale: OagAutomorphism,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AffineMap {
    Linear(LinearMap),
    Star(StarMap),
}

impl LinearMap {
    pub fn new(sign: Sign, auto: OagAutomorphism, translation: OagElement) -> Result<Self> {
        auto.descriptor().ensure_same(&translation.descriptor())?;
        Ok(LinearMap {
            sign,
            auto,
            translation,
        })
    }

    pub fn descriptor(&self) -> OagDescriptor {
        self.translation.descriptor()
    }

    pub fn apply(&self, x: &OagElement) -> Result<OagElement> {
        self.sign
            .apply(&self.auto.apply(x)?)
            .try_add(&self.translation)
    }

    /// Extension to ½Λ (the barycentric subdivision).
    pub fn apply_half(&self, x: &HalfElement) -> Result<HalfElement> {
        self.sign
            .apply_half(&x.apply_aut(&self.auto)?)
            .add_element(&self.translation)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        let auto = self.auto.compose(&other.auto)?;
        let translation = self.apply(&other.translation)?;
        Ok(LinearMap {
            sign: self.sign.mul(other.sign),
            auto,
            translation,
        })
    }

    pub fn inverse(&self) -> Result<LinearMap> {
        let inv = self.auto.inverse()?;
        let t = self.sign.apply(&inv.apply(&self.translation)?).neg();
        Ok(LinearMap {
            sign: self.sign,
            auto: inv,
            translation: t,
        })
    }

    pub fn fixed_points(&self) -> Result<SolutionSet> {
        solve_displacement(&self.auto, self.sign, &self.translation)
    }

    /// Rigid iff no closed segment is mapped properly into itself by the
    /// map or its inverse.
    ///
    /// For `s = +` the displacement `D(x) = (α-1)x + λ` ranges over the
    /// coset `λ + H`, `H = (α-1)Λ`. A nesting segment exists iff that coset
    /// meets 0 and a nonzero value, or takes both signs, which happens iff
    /// `H ≠ 0` and `λ` lies in the convex hull of `H`. For `s = -` the map
    /// is rigid iff its square is: a segment nested by g is nested by g²
    /// unless g swaps its endpoints, and then the image of an inner
    /// subsegment nests too.
    pub fn is_rigid(&self) -> Result<bool> {
        match self.sign {
            Sign::Plus => {
                if self.auto.is_identity() {
                    return Ok(true);
                }
                Ok(!self.auto.displacement_hull().contains(&self.translation))
            }
            Sign::Minus => self.compose(self)?.is_rigid(),
        }
    }
}

impl StarMap {
    pub fn new(rays: usize, perm: Vec<usize>, scale: OagAutomorphism) -> Result<Self> {
        if perm.len() != rays {
            return Err(Error::InvalidMap(format!(
                "permutation of length {} on {rays} rays",
                perm.len()
            )));
        }
        let mut seen = vec![false; rays + 1];
        for &p in &perm {
            if p == 0 || p > rays || seen[p] {
                return Err(Error::InvalidMap(format!(
                    "{perm:?} is not a permutation of 1..={rays}"
                )));
            }
            seen[p] = true;
        }
        Ok(StarMap { rays, perm, scale })
    }

    pub fn image_ray(&self, ray: usize) -> usize {
        if ray == 0 {
            0
        } else {
            self.perm[ray - 1]
        }
    }
}

impl AffineMap {
    pub fn linear(sign: Sign, auto: OagAutomorphism, translation: OagElement) -> Result<Self> {
        Ok(AffineMap::Linear(LinearMap::new(sign, auto, translation)?))
    }

    /// `x ↦ x + λ`.
    pub fn translation(lambda: OagElement) -> Self {
        let d = lambda.descriptor();
        AffineMap::Linear(LinearMap {
            sign: Sign::Plus,
            auto: OagAutomorphism::identity(&d),
            translation: lambda,
        })
    }

    pub fn star(rays: usize, perm: Vec<usize>, scale: OagAutomorphism) -> Result<Self> {
        Ok(AffineMap::Star(StarMap::new(rays, perm, scale)?))
    }

    pub fn identity(space: &TreeSpace) -> Result<Self> {
        match space {
            TreeSpace::Linear(d) => Ok(AffineMap::translation(OagElement::zero(d))),
            TreeSpace::Star { descriptor, rays } => Ok(AffineMap::Star(StarMap {
                rays: *rays,
                perm: (1..=*rays).collect(),
                scale: OagAutomorphism::identity(descriptor),
            })),
            TreeSpace::Orbit(_) => Err(Error::Unsupported("maps of orbit spaces".into())),
        }
    }

    /// The dilation factor α with `d(gp, gq) = α(d(p, q))`.
    pub fn alpha(&self) -> &OagAutomorphism {
        match self {
            AffineMap::Linear(m) => &m.auto,
            AffineMap::Star(m) => &m.scale,
        }
    }

    pub fn descriptor(&self) -> OagDescriptor {
        self.alpha().descriptor()
    }

    pub fn as_linear(&self) -> Result<&LinearMap> {
        match self {
            AffineMap::Linear(m) => Ok(m),
            AffineMap::Star(_) => Err(Error::Unsupported(
                "operation needs a linear-tree map".into(),
            )),
        }
    }

    /// Check that the map acts on `space`.
    pub fn check_space(&self, space: &TreeSpace) -> Result<()> {
        match (self, space) {
            (AffineMap::Linear(m), TreeSpace::Linear(d)) => m.descriptor().ensure_same(d),
            (AffineMap::Star(m), TreeSpace::Star { descriptor, rays }) => {
                m.scale.descriptor().ensure_same(descriptor)?;
                if m.rays != *rays {
                    return Err(Error::SpaceMismatch(format!(
                        "map on {} rays, space has {rays}",
                        m.rays
                    )));
                }
                Ok(())
            }
            _ => Err(Error::SpaceMismatch(format!(
                "map does not act on a {} space",
                space.kind()
            ))),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            AffineMap::Linear(m) => {
                m.sign == Sign::Plus && m.auto.is_identity() && m.translation.is_zero()
            }
            AffineMap::Star(m) => {
                m.scale.is_identity() && m.perm.iter().enumerate().all(|(i, &p)| p == i + 1)
            }
        }
    }

    pub fn apply(&self, p: &TreePoint) -> Result<TreePoint> {
        match (self, p) {
            (AffineMap::Linear(m), TreePoint::Linear(x)) => Ok(TreePoint::Linear(m.apply(x)?)),
            (AffineMap::Star(m), TreePoint::Star { ray, r }) => {
                if *ray > m.rays {
                    return Err(Error::OutOfRange(format!("ray {ray}")));
                }
                let r2 = m.scale.apply(r)?;
                Ok(TreePoint::Star {
                    ray: m.image_ray(*ray),
                    r: r2,
                })
            }
            _ => Err(Error::SpaceMismatch(format!(
                "cannot apply this map to {p}"
            ))),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> Result<AffineMap> {
        match (self, other) {
            (AffineMap::Linear(a), AffineMap::Linear(b)) => Ok(AffineMap::Linear(a.compose(b)?)),
            (AffineMap::Star(a), AffineMap::Star(b)) if a.rays == b.rays => {
                Ok(AffineMap::Star(StarMap {
                    rays: a.rays,
                    perm: b.perm.iter().map(|&i| a.perm[i - 1]).collect(),
                    scale: a.scale.compose(&b.scale)?,
                }))
            }
            _ => Err(Error::SpaceMismatch(
                "composing maps of different spaces".into(),
            )),
        }
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        match self {
            AffineMap::Linear(m) => Ok(AffineMap::Linear(m.inverse()?)),
            AffineMap::Star(m) => {
                let mut perm = vec![0; m.rays];
                for (i, &p) in m.perm.iter().enumerate() {
                    perm[p - 1] = i + 1;
                }
                Ok(AffineMap::Star(StarMap {
                    rays: m.rays,
                    perm,
                    scale: m.scale.inverse()?,
                }))
            }
        }
    }

    pub fn pow(&self, k: i64) -> Result<AffineMap> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = match self {
            AffineMap::Linear(m) => AffineMap::translation(OagElement::zero(&m.descriptor())),
            AffineMap::Star(m) => AffineMap::Star(StarMap {
                rays: m.rays,
                perm: (1..=m.rays).collect(),
                scale: OagAutomorphism::identity(&m.scale.descriptor()),
            }),
        };
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base)?;
        }
        Ok(acc)
    }

    pub fn fixed_points(&self) -> Result<FixedSet> {
        match self {
            AffineMap::Linear(m) => Ok(FixedSet::Linear(m.fixed_points()?)),
            AffineMap::Star(m) => {
                let zero = OagElement::zero(&m.scale.descriptor());
                let mut invariant_rays = Vec::new();
                for ray in 1..=m.rays {
                    if m.image_ray(ray) == ray {
                        invariant_rays
                            .push((ray, solve_displacement(&m.scale, Sign::Plus, &zero)?));
                    }
                }
                Ok(FixedSet::Star { invariant_rays })
            }
        }
    }

    pub fn classify(&self) -> Result<Classification> {
        match self {
            AffineMap::Linear(m) => classify_linear(m),
            AffineMap::Star(m) => Ok(Classification::Elliptic {
                fixed: TreePoint::Star {
                    ray: 0,
                    r: OagElement::zero(&m.scale.descriptor()),
                },
            }),
        }
    }

    /// Classification of the restriction to the open ray `ray`, which
    /// must be invariant.
    pub fn classify_restricted_to_ray(&self, ray: usize) -> Result<Classification> {
        let AffineMap::Star(m) = self else {
            return Err(Error::Unsupported(
                "ray restriction needs a star-tree map".into(),
            ));
        };
        if ray == 0 || ray > m.rays {
            return Err(Error::OutOfRange(format!("ray {ray}")));
        }
        if m.image_ray(ray) != ray {
            return Err(Error::InvalidMap(format!("ray {ray} is not invariant")));
        }
        let d = m.scale.descriptor();
        let zero = OagElement::zero(&d);
        let kernel = solve_displacement(&m.scale, Sign::Plus, &zero)?;
        if let SolutionSet::Family(f) = &kernel {
            if let Some(k) = f
                .kernel
                .sample_generators(&d)
                .into_iter()
                .find(|k| !k.is_zero())
            {
                return Ok(Classification::Elliptic {
                    fixed: TreePoint::Star { ray, r: k.abs() },
                });
            }
        }
        // An order-preserving map of a linear tree without fixed points
        // puts every point between its images under g^-1 and g.
        let u = d.positive_unit();
        let gu = m.scale.apply(&u)?;
        Ok(Classification::Hyperbolic {
            witness: TreePoint::Star { ray, r: u.clone() },
            translation: gu.try_sub(&u)?.abs(),
        })
    }

    pub fn is_rigid(&self) -> Result<bool> {
        self.as_linear()?.is_rigid()
    }

    /// `b_x(g)` from the geometry: with `u = Y(g^-1 x, x, g x)`, `+d(u, gu)`
    /// if `u` lies between `g^-1 u` and `gu`, else `-d(u, gu)`.
    pub fn displacement_b(&self, space: &TreeSpace, x: &TreePoint) -> Result<HalfElement> {
        let inv = self.inverse()?;
        let u = space.median(&inv.apply(x)?, x, &self.apply(x)?)?;
        let gu = self.apply(&u)?;
        let d = space.distance(&u, &gu)?;
        let b = if space.between(&inv.apply(&u)?, &u, &gu)? {
            d
        } else {
            d.neg()
        };
        Ok(HalfElement::from_element(&b))
    }

    /// `a_x(g) = d(x, u)` with `u = Y(g^-1 x, x, g x)`.
    pub fn displacement_a(&self, space: &TreeSpace, x: &TreePoint) -> Result<OagElement> {
        let inv = self.inverse()?;
        let u = space.median(&inv.apply(x)?, x, &self.apply(x)?)?;
        space.distance(x, &u)
    }

    /// `b_x(g)` from the based length function `L(h) = d(x, hx)`.
    pub fn b_from_lengths(&self, space: &TreeSpace, x: &TreePoint) -> Result<HalfElement> {
        let ctx = PointLength { space, x };
        ancillary_b(&ctx, self)
    }

    /// `a_x(g)` from the based length function `L(h) = d(x, hx)`.
    pub fn a_from_lengths(&self, space: &TreeSpace, x: &TreePoint) -> Result<HalfElement> {
        let ctx = PointLength { space, x };
        ancillary_a(&ctx, self)
    }

    pub fn to_value(&self, space: &TreeSpace) -> Value {
        let mut v = self.body_to_value();
        v["space"] = space.to_value();
        v
    }

    /// The map without its space.
    pub fn body_to_value(&self) -> Value {
        match self {
            AffineMap::Linear(m) => json!({
                "sign": m.sign.as_i64(),
                "auto": aut_to_value(&m.auto),
                "translation": element_to_value(&m.translation),
            }),
            AffineMap::Star(m) => json!({
                "perm": m.perm,
                "scale": aut_to_value(&m.scale),
            }),
        }
    }

    /// Parse a map body against a known space.
    pub fn body_from_value(space: &TreeSpace, v: &Value) -> Result<AffineMap> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("map must be an object".into()))?;
        let d = space.descriptor();
        let field = |k: &str| {
            obj.get(k)
                .ok_or_else(|| Error::Parse(format!("map needs `{k}`")))
        };
        match space {
            TreeSpace::Linear(_) => {
                let sign = field("sign")?
                    .as_i64()
                    .and_then(Sign::from_i64)
                    .ok_or_else(|| Error::Parse("sign must be 1 or -1".into()))?;
                let auto = match obj.get("auto") {
                    Some(a) => aut_from_value(&d, a)?,
                    None => OagAutomorphism::identity(&d),
                };
                let t = element_from_value(&d, field("translation")?)?;
                AffineMap::linear(sign, auto, t)
            }
            TreeSpace::Star { rays, .. } => {
                let perm: Vec<usize> = serde_json::from_value(field("perm")?.clone())?;
                let scale = aut_from_value(&d, field("scale")?)?;
                AffineMap::star(*rays, perm, scale)
            }
            TreeSpace::Orbit(_) => Err(Error::Unsupported("maps of orbit spaces".into())),
        }
    }

    /// Parse `{"space":..., ...}`.
    pub fn from_value(v: &Value) -> Result<(TreeSpace, AffineMap)> {
        let space = TreeSpace::from_value(
            v.get("space")
                .ok_or_else(|| Error::Parse("map needs `space`".into()))?,
        )?;
        let m = AffineMap::body_from_value(&space, v)?;
        Ok((space, m))
    }

    pub fn from_json(s: &str) -> Result<(TreeSpace, AffineMap)> {
        AffineMap::from_value(&serde_json::from_str(s)?)
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineMap::Linear(m) => {
                let s = if m.sign == Sign::Minus { "-" } else { "" };
                write!(f, "x -> {s}α(x) + {}", m.translation)
            }
            AffineMap::Star(m) => write!(f, "(x, i) -> (α(x), π(i)), π = {:?}", m.perm),
        }
    }
}

/// Based length function of a single map acting on a space, with the
/// map's powers as the group.
struct PointLength<'a> {
    space: &'a TreeSpace,
    x: &'a TreePoint,
}

impl LengthFunction for PointLength<'_> {
    type Elem = AffineMap;

    fn descriptor(&self) -> OagDescriptor {
        self.space.descriptor()
    }

    fn identity(&self) -> AffineMap {
        AffineMap::identity(self.space).expect("linear or star space")
    }

    fn inverse(&self, g: &AffineMap) -> Result<AffineMap> {
        g.inverse()
    }

    fn multiply(&self, g: &AffineMap, h: &AffineMap) -> Result<AffineMap> {
        g.compose(h)
    }

    fn length(&self, g: &AffineMap) -> Result<OagElement> {
        self.space.distance(self.x, &g.apply(self.x)?)
    }

    fn alpha(&self, g: &AffineMap) -> Result<OagAutomorphism> {
        Ok(g.alpha().clone())
    }

    fn is_identity(&self, g: &AffineMap) -> Result<bool> {
        Ok(g.is_identity())
    }
}

/// Fixed-point set of an affine map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedSet {
    Linear(SolutionSet),
    /// The origin, plus on each invariant ray the positive solutions of
    /// `α(x) = x`.
    Star {
        invariant_rays: Vec<(usize, SolutionSet)>,
    },
}

impl FixedSet {
    pub fn is_empty(&self) -> bool {
        match self {
            FixedSet::Linear(s) => s.is_empty(),
            FixedSet::Star { .. } => false,
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            FixedSet::Linear(s) => solution_to_value(s),
            FixedSet::Star { invariant_rays } => json!({
                "origin": true,
                "invariant_rays": invariant_rays
                    .iter()
                    .map(|(r, s)| json!({"ray": r, "fixed": solution_to_value(s)}))
                    .collect::<Vec<_>>(),
            }),
        }
    }
}

pub fn solution_to_value(s: &SolutionSet) -> Value {
    match s {
        SolutionSet::Empty => json!({"kind": "empty"}),
        SolutionSet::Unique(x) => json!({"kind": "unique", "point": element_to_value(x)}),
        SolutionSet::Family(f) => json!({
            "kind": "family",
            "particular": element_to_value(&f.particular),
            "kernel": f.kernel.to_string(),
        }),
    }
}

/// The four mutually exclusive behaviours of an affine automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Elliptic {
        fixed: TreePoint,
    },
    /// Fixed point of the barycentric subdivision, not in Λ.
    Inversion {
        midpoint: HalfElement,
    },
    NestingReflection,
    Hyperbolic {
        witness: TreePoint,
        translation: OagElement,
    },
}

impl Classification {
    pub fn tag(&self) -> &'static str {
        match self {
            Classification::Elliptic { .. } => "elliptic",
            Classification::Inversion { .. } => "inversion",
            Classification::NestingReflection => "nesting_reflection",
            Classification::Hyperbolic { .. } => "hyperbolic",
        }
    }

    /// Re-check the witness data against the map.
    pub fn verify(&self, g: &AffineMap, space: &TreeSpace) -> Result<bool> {
        match self {
            Classification::Elliptic { fixed } => Ok(g.apply(fixed)? == *fixed),
            Classification::Inversion { midpoint } => {
                let m = g.as_linear()?;
                Ok(m.sign == Sign::Minus
                    && midpoint.is_halved()
                    && m.apply_half(midpoint)? == *midpoint)
            }
            Classification::NestingReflection => {
                let m = g.as_linear()?;
                Ok(m.sign == Sign::Minus
                    && m.fixed_points()?.is_empty()
                    && m.compose(m)?.fixed_points()?.is_empty())
            }
            Classification::Hyperbolic {
                witness,
                translation,
            } => {
                let gu = g.apply(witness)?;
                let ginv_u = g.inverse()?.apply(witness)?;
                Ok(gu != *witness
                    && space.between(&ginv_u, witness, &gu)?
                    && space.distance(witness, &gu)? == *translation)
            }
        }
    }

    pub fn to_value(&self, space: &TreeSpace) -> Value {
        match self {
            Classification::Elliptic { fixed } => {
                json!({"type": "elliptic", "fixed": space.point_to_value(fixed)})
            }
            Classification::Inversion { midpoint } => {
                json!({"type": "inversion", "midpoint": half_to_value(midpoint)})
            }
            Classification::NestingReflection => json!({"type": "nesting_reflection"}),
            Classification::Hyperbolic {
                witness,
                translation,
            } => json!({
                "type": "hyperbolic",
                "witness": space.point_to_value(witness),
                "translation": element_to_value(translation),
            }),
        }
    }
}

fn classify_linear(m: &LinearMap) -> Result<Classification> {
    if let Some(x) = m.fixed_points()?.representative() {
        return Ok(Classification::Elliptic {
            fixed: TreePoint::Linear(x.clone()),
        });
    }
    match m.sign {
        Sign::Plus => {
            // Without fixed points x lies strictly between g^-1 x and g x,
            // for every x; the origin serves as witness.
            let u = OagElement::zero(&m.descriptor());
            let gu = m.apply(&u)?;
            Ok(Classification::Hyperbolic {
                translation: gu.try_sub(&u)?.abs(),
                witness: TreePoint::Linear(u),
            })
        }
        Sign::Minus => {
            let sq = m.compose(m)?;
            match sq.fixed_points()?.representative() {
                Some(y) => {
                    let gy = m.apply(y)?;
                    Ok(Classification::Inversion {
                        midpoint: HalfElement::half_of(y.try_add(&gy)?),
                    })
                }
                None => Ok(Classification::NestingReflection),
            }
        }
    }
}

/// Points `p`, `q` fixed by `g` and `m` between them with `g m ≠ m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonConvexWitness {
    pub p: OagElement,
    pub q: OagElement,
    pub m: OagElement,
}

/// Search for a certificate that the fixed set of a linear map is not a
/// subtree: two fixed points and a non-fixed point between them.
pub fn non_convex_fixed_set(g: &LinearMap) -> Result<Option<NonConvexWitness>> {
    let SolutionSet::Family(f) = g.fixed_points()? else {
        return Ok(None);
    };
    let d = g.descriptor();
    let gens = f.kernel.sample_generators(&d);
    let mut fixed = vec![f.particular.clone()];
    for k in &gens {
        for c in [1i64, 2, -1, -2] {
            fixed.push(f.particular.try_add(&k.mul_int(&c.into()))?);
        }
    }
    let steps = d.samples();
    for p in &fixed {
        for q in &fixed {
            if p.try_cmp(q)?.is_ge() {
                continue;
            }
            for s in &steps {
                for m in [p.try_add(s)?, q.try_sub(s)?] {
                    let between = p.try_le(&m)? && m.try_le(q)?;
                    if between && g.apply(&m)? != m {
                        return Ok(Some(NonConvexWitness {
                            p: p.clone(),
                            q: q.clone(),
                            m,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Verdict of the radius criterion for fixed points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RadiusVerdict {
    /// `λ` solves `(1 - α_h)λ = b(h)` and lies in the span of the right
    /// radius, witnessed by `witness`; `h` is `g` or `g^-1`.
    Elliptic {
        lambda: OagElement,
        inverse: bool,
        witness: String,
    },
    /// No nonnegative solution of `(1 - α_h)λ = b(h)` exists for `h = g^{±1}`.
    NotElliptic,
    /// Solutions exist but none was placed in the radius by the witnesses.
    Unknown { candidates: usize, witnesses: usize },
}

impl RadiusVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            RadiusVerdict::Elliptic { .. } => "elliptic",
            RadiusVerdict::NotElliptic => "not_elliptic",
            RadiusVerdict::Unknown { .. } => "unknown",
        }
    }
}

/// Decide whether `g` has a fixed point from the based length function,
/// given `b(g) > 0` and a tree spanned by the orbit of the basepoint.
/// The right radius is approximated from below by
/// `L(γ) - a(h) - α_γ a(γ^-1 h γ)` over witnesses `γ` with `c(h, γ) > a(h)`.
pub fn elliptic_via_radius<L: LengthFunction>(
    lf: &L,
    g: &L::Elem,
    witnesses: &[(String, L::Elem)],
) -> Result<RadiusVerdict> {
    let b = ancillary_b(lf, g)?;
    if !b.is_positive() {
        return Err(Error::InvalidMap(format!(
            "radius criterion needs b(g) > 0, got {b}"
        )));
    }
    let mut candidates = 0;
    let mut open_family = false;
    for (inverse, h) in [(false, g.clone()), (true, lf.inverse(g)?)] {
        let bh = ancillary_b(lf, &h)?;
        if !bh.is_positive() {
            continue;
        }
        let bh = bh
            .to_element()
            .ok_or_else(|| Error::Internal(format!("b = {bh} is positive but not in Λ")))?;
        let alpha = lf.alpha(&h)?;
        let lambdas: Vec<OagElement> = match solve_displacement(&alpha, Sign::Plus, &bh)? {
            SolutionSet::Empty => vec![],
            SolutionSet::Unique(x) => vec![x],
            SolutionSet::Family(f) => {
                let mut v = vec![f.particular.clone()];
                for k in f.kernel.sample_generators(&lf.descriptor()) {
                    v.push(f.particular.try_add(&k)?);
                    v.push(f.particular.try_sub(&k)?);
                }
                // Infinitely many solutions: never conclude NotElliptic.
                open_family = true;
                v
            }
        };
        let lambdas: Vec<OagElement> = lambdas.into_iter().filter(|x| !x.is_negative()).collect();
        candidates += lambdas.len();
        if lambdas.is_empty() {
            continue;
        }
        let ah = ancillary_a(lf, &h)?;
        for (label, gamma) in witnesses {
            if ancillary_c(lf, &h, gamma)?.try_cmp(&ah)?.is_le() {
                continue;
            }
            let conj = lf.multiply(&lf.multiply(&lf.inverse(gamma)?, &h)?, gamma)?;
            let a_conj = ancillary_a(lf, &conj)?.apply_aut(&lf.alpha(gamma)?)?;
            let r = HalfElement::from_element(&lf.length(gamma)?)
                .try_sub(&ah)?
                .try_sub(&a_conj)?;
            for lam in &lambdas {
                if HalfElement::from_element(lam).try_cmp(&r)?.is_le() {
                    return Ok(RadiusVerdict::Elliptic {
                        lambda: lam.clone(),
                        inverse,
                        witness: label.clone(),
                    });
                }
            }
        }
    }
    if candidates == 0 && !open_family {
        Ok(RadiusVerdict::NotElliptic)
    } else {
        Ok(RadiusVerdict::Unknown {
            candidates,
            witnesses: witnesses.len(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3(x: i64, y: i64, z: i64) -> OagElement {
        OagElement::int_lex(&[x, y, z])
    }

    fn loc(base: u64, n: i64, d: i64) -> OagElement {
        OagElement::localized(base, n, d).unwrap()
    }

    fn nesting(base: u64) -> AffineMap {
        AffineMap::linear(
            Sign::Minus,
            OagAutomorphism::scale_i64(base, 1, 2).unwrap(),
            loc(base, 2, 1),
        )
        .unwrap()
    }

    fn third_plus_one(base: u64) -> AffineMap {
        AffineMap::linear(
            Sign::Plus,
            OagAutomorphism::scale_i64(base, 1, 3).unwrap(),
            loc(base, 1, 1),
        )
        .unwrap()
    }

    fn heis_tau() -> AffineMap {
        let a = OagAutomorphism::unipotent_natural(vec![
            vec![1.into(), 0.into(), 0.into()],
            vec![0.into(), 1.into(), 0.into()],
            vec![0.into(), 1.into(), 1.into()],
        ])
        .unwrap();
        AffineMap::linear(Sign::Plus, a, z3(1, 0, 0)).unwrap()
    }

    #[test]
    fn test_apply_examples() {
        let tau = heis_tau();
        let p = tau.apply(&TreePoint::Linear(z3(0, 0, 0))).unwrap();
        assert_eq!(p, TreePoint::Linear(z3(1, 0, 0)));
        let p = tau.apply(&TreePoint::Linear(z3(0, 1, 0))).unwrap();
        assert_eq!(p, TreePoint::Linear(z3(1, 1, 1)));
        let g = nesting(2);
        assert_eq!(
            g.apply(&TreePoint::Linear(loc(2, 0, 1))).unwrap(),
            TreePoint::Linear(loc(2, 2, 1))
        );
    }

    #[test]
    fn test_compose_inverse() {
        let maps = [heis_tau(), nesting(6), third_plus_one(3)];
        for g in &maps {
            let id = g.compose(&g.inverse().unwrap()).unwrap();
            assert!(id.is_identity(), "{g}");
            let d = g.descriptor();
            for x in d.samples() {
                let p = TreePoint::Linear(x);
                let gp = g.apply(&p).unwrap();
                assert_eq!(g.inverse().unwrap().apply(&gp).unwrap(), p);
                let g2 = g.compose(g).unwrap();
                assert_eq!(g2.apply(&p).unwrap(), g.apply(&gp).unwrap());
            }
        }
    }

    #[test]
    fn test_dilation_identity() {
        for g in [heis_tau(), nesting(6), third_plus_one(3)] {
            let d = g.descriptor();
            let space = TreeSpace::linear(d.clone());
            let pts: Vec<TreePoint> = d.samples().into_iter().map(TreePoint::Linear).collect();
            for p in &pts {
                for q in &pts {
                    let lhs = space
                        .distance(&g.apply(p).unwrap(), &g.apply(q).unwrap())
                        .unwrap();
                    let rhs = g.alpha().apply(&space.distance(p, q).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn test_classify_examples() {
        let c = nesting(2).classify().unwrap();
        assert_eq!(c, Classification::NestingReflection);
        let c = nesting(6).classify().unwrap();
        assert_eq!(
            c,
            Classification::Elliptic {
                fixed: TreePoint::Linear(loc(6, 4, 3))
            }
        );
        // x ↦ -x + (1,0) on Z^2.
        let g = AffineMap::linear(
            Sign::Minus,
            OagAutomorphism::identity(&OagDescriptor::int_lex(2)),
            OagElement::int_lex(&[1, 0]),
        )
        .unwrap();
        let c = g.classify().unwrap();
        assert_eq!(
            c,
            Classification::Inversion {
                midpoint: HalfElement::half_of(OagElement::int_lex(&[1, 0]))
            }
        );
        let space = TreeSpace::linear(OagDescriptor::int_lex(2));
        assert!(c.verify(&g, &space).unwrap());
        let h = third_plus_one(3);
        let c = h.classify().unwrap();
        assert_eq!(c.tag(), "hyperbolic");
        assert!(c
            .verify(&h, &TreeSpace::linear(OagDescriptor::localized(3)))
            .unwrap());
    }

    #[test]
    fn test_rigidity_examples() {
        assert!(heis_tau().is_rigid().unwrap());
        assert!(!third_plus_one(3).is_rigid().unwrap());
        assert!(!nesting(2).is_rigid().unwrap());
        assert!(AffineMap::translation(loc(2, 5, 4)).is_rigid().unwrap());
        let flip = AffineMap::linear(
            Sign::Minus,
            OagAutomorphism::identity(&OagDescriptor::int_lex(1)),
            OagElement::int_lex(&[3]),
        )
        .unwrap();
        assert!(flip.is_rigid().unwrap());
        // g[0,2] = [1,5/3] inside [0,2].
        let g = third_plus_one(3);
        assert_eq!(
            g.apply(&TreePoint::Linear(loc(3, 2, 1))).unwrap(),
            TreePoint::Linear(loc(3, 5, 3))
        );
    }

    #[test]
    fn test_non_subtree_fixed_set() {
        let a = OagAutomorphism::unipotent_natural(vec![
            vec![1.into(), 0.into(), 0.into()],
            vec![0.into(), 1.into(), 0.into()],
            vec![1.into(), 1.into(), 1.into()],
        ])
        .unwrap();
        let g = LinearMap::new(Sign::Plus, a, z3(0, 0, 0)).unwrap();
        let w = non_convex_fixed_set(&g).unwrap().expect("witness");
        assert!(g.apply(&w.p).unwrap() == w.p && g.apply(&w.q).unwrap() == w.q);
        assert!(g.apply(&w.m).unwrap() != w.m);
        let m = z3(1, 0, 0);
        assert!(z3(1, -1, 0).try_le(&m).unwrap() && m.try_le(&z3(2, -2, 0)).unwrap());
        assert_ne!(g.apply(&m).unwrap(), m);
    }

    #[test]
    fn test_b_examples() {
        let space = TreeSpace::linear(OagDescriptor::int_lex(1));
        let g = AffineMap::translation(OagElement::int_lex(&[5]));
        let x = TreePoint::Linear(OagElement::int_lex(&[0]));
        let five = HalfElement::from_element(&OagElement::int_lex(&[5]));
        assert_eq!(g.b_from_lengths(&space, &x).unwrap(), five);
        assert_eq!(g.displacement_b(&space, &x).unwrap(), five);
        let n = nesting(2);
        let s2 = TreeSpace::linear(OagDescriptor::localized(2));
        let x = TreePoint::Linear(loc(2, 0, 1));
        assert!(n.b_from_lengths(&s2, &x).unwrap().is_negative());
        assert_eq!(
            n.b_from_lengths(&s2, &x).unwrap(),
            n.displacement_b(&s2, &x).unwrap()
        );
        let e = nesting(6);
        let s6 = TreeSpace::linear(OagDescriptor::localized(6));
        let fx = TreePoint::Linear(loc(6, 4, 3));
        assert!(e.b_from_lengths(&s6, &fx).unwrap().is_zero());
    }

    #[test]
    fn test_b_agreement_on_samples() {
        for g in [
            heis_tau(),
            nesting(6),
            nesting(2),
            third_plus_one(3),
            third_plus_one(6),
        ] {
            let d = g.descriptor();
            let space = TreeSpace::linear(d.clone());
            for x in d.samples() {
                let p = TreePoint::Linear(x);
                assert_eq!(
                    g.b_from_lengths(&space, &p).unwrap(),
                    g.displacement_b(&space, &p).unwrap(),
                    "{g} at {p}"
                );
                let a = HalfElement::from_element(&g.displacement_a(&space, &p).unwrap());
                assert_eq!(g.a_from_lengths(&space, &p).unwrap(), a, "{g} at {p}");
            }
        }
    }

    #[test]
    fn test_star_map() {
        let d = OagDescriptor::localized(2);
        let space = TreeSpace::star(d.clone(), 3).unwrap();
        let g = AffineMap::star(
            3,
            vec![2, 1, 3],
            OagAutomorphism::scale_i64(2, 1, 2).unwrap(),
        )
        .unwrap();
        let o = space.origin().unwrap();
        assert_eq!(g.apply(&o).unwrap(), o);
        let p = space.star_point(3, loc(2, 4, 1)).unwrap();
        assert_eq!(
            g.apply(&p).unwrap(),
            space.star_point(3, loc(2, 2, 1)).unwrap()
        );
        assert_eq!(g.classify().unwrap().tag(), "elliptic");
        let r3 = g.classify_restricted_to_ray(3).unwrap();
        assert_eq!(r3.tag(), "hyperbolic");
        assert!(g.classify_restricted_to_ray(1).is_err());
        assert!(g.displacement_b(&space, &p).unwrap().is_positive());
        assert_eq!(
            g.displacement_b(&space, &p).unwrap(),
            g.b_from_lengths(&space, &p).unwrap()
        );
        let q = space.star_point(1, loc(2, 3, 1)).unwrap();
        assert!(g.displacement_b(&space, &q).unwrap().is_negative());
        assert_eq!(
            g.displacement_b(&space, &q).unwrap(),
            g.b_from_lengths(&space, &q).unwrap()
        );
        assert!(g.compose(&g.inverse().unwrap()).unwrap().is_identity());
        assert!(!g.fixed_points().unwrap().is_empty());
        assert!(AffineMap::star(3, vec![1, 1, 3], OagAutomorphism::identity(&d)).is_err());
    }

    #[test]
    fn test_map_json_round_trip() {
        let g = heis_tau();
        let space = TreeSpace::linear(OagDescriptor::int_lex(3));
        let (s2, g2) = AffineMap::from_value(&g.to_value(&space)).unwrap();
        assert_eq!((s2, g2), (space, g));
        let st = TreeSpace::star(OagDescriptor::localized(2), 3).unwrap();
        let h = AffineMap::star(
            3,
            vec![2, 1, 3],
            OagAutomorphism::scale_i64(2, 1, 2).unwrap(),
        )
        .unwrap();
        let (s3, h3) = AffineMap::from_value(&h.to_value(&st)).unwrap();
        assert_eq!((s3, h3), (st, h));
    }
}
