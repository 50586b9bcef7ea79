//! Λ-tree spaces: linear trees, star trees and finite orbit spaces, with
//! distance, betweenness, medians and Gromov products.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::intern::{BinMemo, Interner};
use crate::isosceles;
use crate::oag::json::{element_from_value, element_to_value};
use crate::oag::{HalfElement, OagDescriptor, OagElement};

/// A point of a tree space. On a star tree `ray == 0` exactly at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TreePoint {
    Linear(OagElement),
    Star { ray: usize, r: OagElement },
    Orbit(usize),
}

impl TreePoint {
    pub fn as_linear(&self) -> Option<&OagElement> {
        match self {
            TreePoint::Linear(x) => Some(x),
            _ => None,
        }
    }
}

impl fmt::Display for TreePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreePoint::Linear(x) => write!(f, "{x}"),
            TreePoint::Star { ray: 0, .. } => write!(f, "origin"),
            TreePoint::Star { ray, r } => write!(f, "(ray {ray}, {r})"),
            TreePoint::Orbit(i) => write!(f, "#{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeSpace {
    /// Λ itself.
    Linear(OagDescriptor),
    /// `rays` copies of the nonnegative half of Λ glued at 0.
    Star {
        descriptor: OagDescriptor,
        rays: usize,
    },
    Orbit(Arc<OrbitSpace>),
}

impl TreeSpace {
    pub fn linear(d: OagDescriptor) -> Self {
        TreeSpace::Linear(d)
    }

    pub fn star(descriptor: OagDescriptor, rays: usize) -> Result<Self> {
        if rays == 0 {
            return Err(Error::InvalidSpace(
                "a star tree needs at least one ray".into(),
            ));
        }
        descriptor.validate()?;
        Ok(TreeSpace::Star { descriptor, rays })
    }

    pub fn descriptor(&self) -> OagDescriptor {
        match self {
            TreeSpace::Linear(d) | TreeSpace::Star { descriptor: d, .. } => d.clone(),
            TreeSpace::Orbit(o) => o.descriptor.clone(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            TreeSpace::Linear(_) => "linear",
            TreeSpace::Star { .. } => "star",
            TreeSpace::Orbit(_) => "orbit",
        }
    }

    /// The origin of a star tree, or 0 of a linear tree.
    pub fn origin(&self) -> Result<TreePoint> {
        match self {
            TreeSpace::Linear(d) => Ok(TreePoint::Linear(OagElement::zero(d))),
            TreeSpace::Star { descriptor, .. } => Ok(TreePoint::Star {
                ray: 0,
                r: OagElement::zero(descriptor),
            }),
            TreeSpace::Orbit(_) => Err(Error::Unsupported("orbit spaces have no origin".into())),
        }
    }

    /// Point at distance `r >= 0` from the origin along `ray` (1-based).
    pub fn star_point(&self, ray: usize, r: OagElement) -> Result<TreePoint> {
        let TreeSpace::Star { descriptor, rays } = self else {
            return Err(Error::SpaceMismatch(
                "star_point on a non-star space".into(),
            ));
        };
        r.check_in(descriptor)?;
        if r.is_negative() {
            return Err(Error::InvalidSpace(format!("negative ray coordinate {r}")));
        }
        if r.is_zero() {
            return Ok(TreePoint::Star { ray: 0, r });
        }
        if ray == 0 || ray > *rays {
            return Err(Error::OutOfRange(format!("ray {ray} not in 1..={rays}")));
        }
        Ok(TreePoint::Star { ray, r })
    }

    pub fn check_point(&self, p: &TreePoint) -> Result<()> {
        match (self, p) {
            (TreeSpace::Linear(d), TreePoint::Linear(x)) => x.check_in(d),
            (TreeSpace::Star { .. }, TreePoint::Star { ray, r }) => {
                let q = self.star_point((*ray).max(1), r.clone())?;
                if q != *p {
                    return Err(Error::InvalidSpace(format!("non-canonical star point {p}")));
                }
                Ok(())
            }
            (TreeSpace::Orbit(o), TreePoint::Orbit(i)) if *i < o.len() => Ok(()),
            (TreeSpace::Orbit(o), TreePoint::Orbit(i)) => Err(Error::OutOfRange(format!(
                "point #{i} of {} labels",
                o.len()
            ))),
            _ => Err(Error::SpaceMismatch(format!(
                "point {p} is not in a {} space",
                self.kind()
            ))),
        }
    }

    pub fn distance(&self, p: &TreePoint, q: &TreePoint) -> Result<OagElement> {
        match (self, p, q) {
            (TreeSpace::Linear(_), TreePoint::Linear(x), TreePoint::Linear(y)) => {
                Ok(x.try_sub(y)?.abs())
            }
            (
                TreeSpace::Star { .. },
                TreePoint::Star { ray: a, r: x },
                TreePoint::Star { ray: b, r: y },
            ) => {
                if a == b || *a == 0 || *b == 0 {
                    Ok(x.try_sub(y)?.abs())
                } else {
                    x.try_add(y)
                }
            }
            (TreeSpace::Orbit(o), TreePoint::Orbit(i), TreePoint::Orbit(j)) => {
                self.check_point(p)?;
                self.check_point(q)?;
                Ok(o.distance(*i, *j).clone())
            }
            _ => Err(Error::SpaceMismatch(format!(
                "points {p}, {q} in a {} space",
                self.kind()
            ))),
        }
    }

    /// Is `q` on the segment `[p, r]`?
    pub fn between(&self, p: &TreePoint, q: &TreePoint, r: &TreePoint) -> Result<bool> {
        let pq = self.distance(p, q)?;
        let qr = self.distance(q, r)?;
        Ok(pq.try_add(&qr)? == self.distance(p, r)?)
    }

    pub fn gromov_product(
        &self,
        p: &TreePoint,
        q: &TreePoint,
        v: &TreePoint,
    ) -> Result<HalfElement> {
        let twice = self
            .distance(p, v)?
            .try_add(&self.distance(q, v)?)?
            .try_sub(&self.distance(p, q)?)?;
        Ok(HalfElement::half_of(twice))
    }

    /// The point of `[p, q]` at distance `t` from `p`.
    fn point_on_segment(&self, p: &TreePoint, q: &TreePoint, t: &OagElement) -> Result<TreePoint> {
        match (p, q) {
            (TreePoint::Linear(x), TreePoint::Linear(y)) => {
                if x.try_le(y)? {
                    Ok(TreePoint::Linear(x.try_add(t)?))
                } else {
                    Ok(TreePoint::Linear(x.try_sub(t)?))
                }
            }
            (TreePoint::Star { ray: a, r: x }, TreePoint::Star { ray: b, r: y }) => {
                if a == b || *a == 0 || *b == 0 {
                    let ray = if *a == 0 { *b } else { *a };
                    let r = if x.try_le(y)? {
                        x.try_add(t)?
                    } else {
                        x.try_sub(t)?
                    };
                    self.star_point(ray.max(1), r)
                } else if t.try_le(x)? {
                    self.star_point(*a, x.try_sub(t)?)
                } else {
                    self.star_point(*b, t.try_sub(x)?)
                }
            }
            _ => Err(Error::Unsupported(
                "segments are only realized on linear and star trees".into(),
            )),
        }
    }

    /// The common point of `[p,q]`, `[p,r]` and `[q,r]`.
    pub fn median(&self, p: &TreePoint, q: &TreePoint, r: &TreePoint) -> Result<TreePoint> {
        if let TreeSpace::Orbit(_) = self {
            return Err(Error::Unsupported("orbit spaces carry no median".into()));
        }
        for x in [p, q, r] {
            self.check_point(x)?;
        }
        let t = self
            .gromov_product(q, r, p)?
            .to_element()
            .ok_or_else(|| Error::Internal("Gromov product outside Λ on a tree space".into()))?;
        self.point_on_segment(p, q, &t)
    }

    pub fn point_to_value(&self, p: &TreePoint) -> Value {
        match p {
            TreePoint::Linear(x) => element_to_value(x),
            TreePoint::Star { ray, r } => json!({ "ray": ray, "r": element_to_value(r) }),
            TreePoint::Orbit(i) => json!(i),
        }
    }

    pub fn point_from_value(&self, v: &Value) -> Result<TreePoint> {
        match self {
            TreeSpace::Linear(d) => Ok(TreePoint::Linear(element_from_value(d, v)?)),
            TreeSpace::Star { descriptor, .. } => {
                let obj = v
                    .as_object()
                    .ok_or_else(|| Error::Parse("star point must be an object".into()))?;
                let ray = obj
                    .get("ray")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse("star point needs an integer `ray`".into()))?;
                let r = element_from_value(
                    descriptor,
                    obj.get("r")
                        .ok_or_else(|| Error::Parse("star point needs `r`".into()))?,
                )?;
                let ray =
                    usize::try_from(ray).map_err(|_| Error::OutOfRange(format!("ray {ray}")))?;
                if ray == 0 && !r.is_zero() {
                    return Err(Error::OutOfRange("ray 0 is reserved for the origin".into()));
                }
                self.star_point(ray.max(1), r)
            }
            TreeSpace::Orbit(o) => {
                let i = match v {
                    Value::String(label) => o
                        .index_of(label)
                        .ok_or_else(|| Error::UnknownSymbol(label.clone()))?,
                    _ => v.as_u64().ok_or_else(|| {
                        Error::Parse("orbit point must be a label or index".into())
                    })? as usize,
                };
                let p = TreePoint::Orbit(i);
                self.check_point(&p)?;
                Ok(p)
            }
        }
    }

    /// `{"type":"linear","descriptor":..}` or `{"type":"star","descriptor":..,"rays":k}`.
    pub fn to_value(&self) -> Value {
        match self {
            TreeSpace::Linear(d) => json!({ "type": "linear", "descriptor": d }),
            TreeSpace::Star { descriptor, rays } => {
                json!({ "type": "star", "descriptor": descriptor, "rays": rays })
            }
            TreeSpace::Orbit(o) => o.to_value(),
        }
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("space must be an object".into()))?;
        let ty = obj.get("type").and_then(Value::as_str).unwrap_or("linear");
        let desc = || -> Result<OagDescriptor> {
            let d: OagDescriptor = serde_json::from_value(
                obj.get("descriptor")
                    .cloned()
                    .ok_or_else(|| Error::Parse("space needs a descriptor".into()))?,
            )?;
            d.validate()?;
            Ok(d)
        };
        match ty {
            "linear" => Ok(TreeSpace::Linear(desc()?)),
            "star" => {
                let rays = obj
                    .get("rays")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse("star space needs `rays`".into()))?;
                if rays > 1 << 16 {
                    return Err(Error::InvalidSpace(format!("{rays} rays")));
                }
                TreeSpace::star(desc()?, rays as usize)
            }
            "orbit" => Ok(TreeSpace::Orbit(Arc::new(OrbitSpace::from_value(v)?))),
            other => Err(Error::Parse(format!("unknown space type `{other}`"))),
        }
    }
}

/// A finite Λ-metric space given by labels and an interned distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSpace {
    descriptor: OagDescriptor,
    labels: Vec<String>,
    values: Vec<OagElement>,
    ids: Vec<u32>,
}

impl OrbitSpace {
    /// Build from a full matrix, checking symmetry, zero diagonal,
    /// nonnegativity and the triangle inequality.
    pub fn from_matrix(
        descriptor: OagDescriptor,
        labels: Vec<String>,
        matrix: Vec<Vec<OagElement>>,
    ) -> Result<Self> {
        let n = labels.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSpace(format!("matrix is not {n}x{n}")));
        }
        let mut interner = Interner::new();
        let mut ids = Vec::with_capacity(n * n);
        for row in matrix {
            for x in row {
                x.check_in(&descriptor)?;
                ids.push(interner.intern(x));
            }
        }
        let space = OrbitSpace::from_interned(descriptor, labels, interner, ids)?;
        space.check_triangles()?;
        Ok(space)
    }

    /// Build from interned ids (row-major), checking symmetry, zero
    /// diagonal and nonnegativity only.
    pub fn from_interned(
        descriptor: OagDescriptor,
        labels: Vec<String>,
        interner: Interner,
        ids: Vec<u32>,
    ) -> Result<Self> {
        let n = labels.len();
        if ids.len() != n * n {
            return Err(Error::InvalidSpace(
                "matrix size does not match labels".into(),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::InvalidSpace(format!("duplicate label `{l}`")));
            }
        }
        let values: Vec<OagElement> = (0..interner.len() as u32)
            .map(|i| interner.get(i).clone())
            .collect();
        let s = OrbitSpace {
            descriptor,
            labels,
            values,
            ids,
        };
        for i in 0..n {
            if !s.distance(i, i).is_zero() {
                return Err(Error::InvalidSpace(format!(
                    "nonzero diagonal at `{}`",
                    s.labels[i]
                )));
            }
            for j in 0..n {
                if s.ids[i * n + j] != s.ids[j * n + i] {
                    return Err(Error::InvalidSpace(format!(
                        "asymmetric at (`{}`, `{}`)",
                        s.labels[i], s.labels[j]
                    )));
                }
                if s.distance(i, j).is_negative() {
                    return Err(Error::InvalidSpace(format!(
                        "negative distance at (`{}`, `{}`)",
                        s.labels[i], s.labels[j]
                    )));
                }
            }
        }
        Ok(s)
    }

    fn check_triangles(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.distance(i, k);
                    let rhs = self.distance(i, j).try_add(self.distance(j, k))?;
                    if lhs.try_cmp(&rhs)?.is_gt() {
                        return Err(Error::InvalidSpace(format!(
                            "triangle inequality fails at (`{}`, `{}`, `{}`)",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn descriptor(&self) -> &OagDescriptor {
        &self.descriptor
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn distance(&self, i: usize, j: usize) -> &OagElement {
        &self.values[self.ids[i * self.len() + j] as usize]
    }

    pub fn distance_id(&self, i: usize, j: usize) -> u32 {
        self.ids[i * self.len() + j]
    }

    /// Row-major ids into [`OrbitSpace::values`].
    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn values(&self) -> &[OagElement] {
        &self.values
    }

    pub fn to_value(&self) -> Value {
        let n = self.len();
        let matrix: Vec<Value> = (0..n)
            .map(|i| {
                Value::Array(
                    (0..n)
                        .map(|j| element_to_value(self.distance(i, j)))
                        .collect(),
                )
            })
            .collect();
        json!({
            "type": "orbit",
            "descriptor": self.descriptor,
            "labels": self.labels,
            "matrix": matrix,
        })
    }

    pub fn to_json(&self) -> String {
        self.to_value().to_string()
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("orbit space must be an object".into()))?;
        if let Some(t) = obj.get("type") {
            if t != "orbit" {
                return Err(Error::Parse(format!("expected orbit space, got type {t}")));
            }
        }
        let descriptor: OagDescriptor = serde_json::from_value(
            obj.get("descriptor")
                .cloned()
                .ok_or_else(|| Error::Parse("orbit space needs a descriptor".into()))?,
        )?;
        descriptor.validate()?;
        let labels: Vec<String> = serde_json::from_value(
            obj.get("labels")
                .cloned()
                .ok_or_else(|| Error::Parse("orbit space needs labels".into()))?,
        )?;
        let rows = obj
            .get("matrix")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("orbit space needs a matrix".into()))?;
        let mut matrix = Vec::with_capacity(rows.len());
        for r in rows {
            let r = r
                .as_array()
                .ok_or_else(|| Error::Parse("matrix rows must be arrays".into()))?;
            matrix.push(
                r.iter()
                    .map(|x| element_from_value(&descriptor, x))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        OrbitSpace::from_matrix(descriptor, labels, matrix)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        OrbitSpace::from_value(&serde_json::from_str(s)?)
    }
}

/// Outcome of a 0-hyperbolicity check.
#[derive(Debug, Clone, Serialize)]
pub struct CertReport {
    pub points: usize,
    pub base: String,
    pub passed: bool,
    pub method: &'static str,
    /// Pairs whose Gromov product is not in Λ.
    pub nonintegral_pairs: Vec<(String, String)>,
    pub nonintegral_count: usize,
    /// Triples `(x, y, z)` with `(x·y) < min((x·z), (y·z))`.
    pub violating_triples: Vec<(String, String, String)>,
    pub violation_count: usize,
}

/// Witness lists in reports are capped at this many entries.
pub const WITNESS_CAP: usize = 200;

/// Check 0-hyperbolicity of `points` with respect to `points[base]`.
pub fn certify_zero_hyperbolic(
    space: &TreeSpace,
    points: &[TreePoint],
    base: usize,
) -> Result<CertReport> {
    let n = points.len();
    if n < 3 {
        return Err(Error::InvalidSpace(
            "0-hyperbolicity needs at least 3 points".into(),
        ));
    }
    if base >= n {
        return Err(Error::OutOfRange(format!("base index {base}")));
    }
    let mut interner = Interner::new();
    let mut ids = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            ids[i * n + j] = interner.intern(space.distance(&points[i], &points[j])?);
        }
    }
    let labels: Vec<String> = points.iter().map(|p| p.to_string()).collect();
    certify_distance_table(&labels, &mut interner, &ids, base).map(|r| r.0)
}

/// Check an orbit space with respect to the point `base`.
pub fn certify_orbit_space(space: &OrbitSpace, base: usize) -> Result<CertReport> {
    if base >= space.len() {
        return Err(Error::OutOfRange(format!("base index {base}")));
    }
    if space.len() < 3 {
        return Err(Error::InvalidSpace(
            "0-hyperbolicity needs at least 3 points".into(),
        ));
    }
    let mut interner = Interner::new();
    for v in space.values() {
        interner.intern(v.clone());
    }
    certify_distance_table(space.labels(), &mut interner, &space.ids, base).map(|r| r.0)
}

/// Also returns the table of twice the Gromov products, as ids into
/// `interner`.
pub(crate) fn certify_distance_table(
    labels: &[String],
    interner: &mut Interner,
    ids: &[u32],
    base: usize,
) -> Result<(CertReport, Vec<u32>)> {
    let n = labels.len();
    // Twice the Gromov product, interned.
    let mut sum_memo = BinMemo::default();
    let mut diff_memo = BinMemo::default();
    let mut gp = vec![0u32; n * n];
    for i in 0..n {
        let di = ids[i * n + base];
        for j in i..n {
            let dj = ids[j * n + base];
            let key = (di.min(dj), di.max(dj));
            let s = match sum_memo.get(&key) {
                Some(&s) => s,
                None => {
                    let v = interner.get(key.0).try_add(interner.get(key.1))?;
                    let s = interner.intern(v);
                    sum_memo.insert(key, s);
                    s
                }
            };
            let dij = ids[i * n + j];
            let g = match diff_memo.get(&(s, dij)) {
                Some(&g) => g,
                None => {
                    let v = interner.get(s).try_sub(interner.get(dij))?;
                    let g = interner.intern(v);
                    diff_memo.insert((s, dij), g);
                    g
                }
            };
            gp[i * n + j] = g;
            gp[j * n + i] = g;
        }
    }
    let rank = interner.ranks()?;
    let mut nonintegral_pairs = Vec::new();
    let mut nonintegral_count = 0;
    let mut two_div: Vec<Option<bool>> = vec![None; interner.len()];
    for i in 0..n {
        for j in i..n {
            let g = gp[i * n + j] as usize;
            let ok = *two_div[g].get_or_insert_with(|| interner.get(g as u32).is_two_divisible());
            if !ok {
                nonintegral_count += 1;
                if nonintegral_pairs.len() < WITNESS_CAP {
                    nonintegral_pairs.push((labels[i].clone(), labels[j].clone()));
                }
            }
        }
    }
    let w = |a: usize, b: usize| rank[gp[a * n + b] as usize];
    let out = isosceles::check(n, &w, true, WITNESS_CAP);
    let report = CertReport {
        points: n,
        base: labels[base].clone(),
        passed: out.violations == 0 && nonintegral_count == 0,
        method: out.method.as_str(),
        nonintegral_pairs,
        nonintegral_count,
        violating_triples: out
            .witnesses
            .iter()
            .map(|&(a, b, c)| (labels[a].clone(), labels[b].clone(), labels[c].clone()))
            .collect(),
        violation_count: out.violations,
    };
    Ok((report, gp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> TreePoint {
        TreePoint::Linear(OagElement::int_lex(&[n]))
    }

    fn z2(a: i64, b: i64) -> TreePoint {
        TreePoint::Linear(OagElement::int_lex(&[a, b]))
    }

    fn star() -> TreeSpace {
        TreeSpace::star(OagDescriptor::localized(2), 3).unwrap()
    }

    fn sp(s: &TreeSpace, ray: usize, n: i64, d: i64) -> TreePoint {
        s.star_point(ray, OagElement::localized(2, n, d).unwrap())
            .unwrap()
    }

    #[test]
    fn test_distances() {
        let l2 = TreeSpace::linear(OagDescriptor::int_lex(2));
        assert_eq!(
            l2.distance(&z2(0, 0), &z2(1, -3)).unwrap(),
            OagElement::int_lex(&[1, -3])
        );
        let s = star();
        assert_eq!(
            s.distance(&sp(&s, 1, 2, 1), &sp(&s, 3, 5, 1)).unwrap(),
            OagElement::localized(2, 7, 1).unwrap()
        );
        assert!(l2.distance(&z2(4, 4), &z2(4, 4)).unwrap().is_zero());
        assert!(l2.distance(&z(1), &z2(0, 0)).is_err());
    }

    #[test]
    fn test_between() {
        let l1 = TreeSpace::linear(OagDescriptor::int_lex(1));
        assert!(l1.between(&z(0), &z(1), &z(3)).unwrap());
        assert!(!l1.between(&z(0), &z(4), &z(3)).unwrap());
        let l2 = TreeSpace::linear(OagDescriptor::int_lex(2));
        assert!(l2.between(&z2(0, 0), &z2(0, 5), &z2(1, 0)).unwrap());
        let s = star();
        assert!(s
            .between(&sp(&s, 1, 1, 1), &s.origin().unwrap(), &sp(&s, 2, 1, 1))
            .unwrap());
    }

    #[test]
    fn test_median() {
        let l1 = TreeSpace::linear(OagDescriptor::int_lex(1));
        assert_eq!(l1.median(&z(0), &z(5), &z(3)).unwrap(), z(3));
        assert_eq!(l1.median(&z(7), &z(7), &z(3)).unwrap(), z(7));
        let s = star();
        let m = s
            .median(&sp(&s, 1, 2, 1), &sp(&s, 2, 3, 1), &sp(&s, 3, 1, 1))
            .unwrap();
        assert_eq!(m, s.origin().unwrap());
        let m = s
            .median(&sp(&s, 1, 2, 1), &sp(&s, 1, 5, 1), &sp(&s, 2, 1, 1))
            .unwrap();
        assert_eq!(m, sp(&s, 1, 2, 1));
        let m = s
            .median(&sp(&s, 1, 3, 1), &sp(&s, 1, 5, 1), &sp(&s, 1, 9, 2))
            .unwrap();
        assert_eq!(m, sp(&s, 1, 9, 2));
    }

    #[test]
    fn test_median_symmetric_on_star_samples() {
        let s = star();
        let mut pts = vec![s.origin().unwrap()];
        for ray in 1..=3 {
            for (n, d) in [(1, 2), (1, 1), (3, 1)] {
                pts.push(sp(&s, ray, n, d));
            }
        }
        for p in &pts {
            for q in &pts {
                for r in &pts {
                    let m = s.median(p, q, r).unwrap();
                    assert_eq!(m, s.median(q, r, p).unwrap());
                    assert_eq!(m, s.median(r, q, p).unwrap());
                    assert!(s.between(p, &m, q).unwrap());
                    assert!(s.between(p, &m, r).unwrap());
                    assert!(s.between(q, &m, r).unwrap());
                    let gp = s.gromov_product(p, q, r).unwrap();
                    let dm = s.distance(r, &s.median(p, q, r).unwrap()).unwrap();
                    assert_eq!(gp, HalfElement::from_element(&dm));
                }
            }
        }
        let report = certify_zero_hyperbolic(&s, &pts, 0).unwrap();
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn test_gromov_products() {
        let l1 = TreeSpace::linear(OagDescriptor::int_lex(1));
        let g = l1.gromov_product(&z(3), &z(5), &z(0)).unwrap();
        assert_eq!(g, HalfElement::from_element(&OagElement::int_lex(&[3])));
        let s = star();
        let g = s
            .gromov_product(&sp(&s, 1, 2, 1), &sp(&s, 2, 3, 1), &s.origin().unwrap())
            .unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn test_orbit_space_certify_and_corruption() {
        let l1 = TreeSpace::linear(OagDescriptor::int_lex(1));
        let pts: Vec<TreePoint> = [0, 1, 2, 3].iter().map(|&n| z(n)).collect();
        let labels: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
        let matrix: Vec<Vec<OagElement>> = pts
            .iter()
            .map(|p| pts.iter().map(|q| l1.distance(p, q).unwrap()).collect())
            .collect();
        let good =
            OrbitSpace::from_matrix(OagDescriptor::int_lex(1), labels.clone(), matrix.clone())
                .unwrap();
        assert!(certify_orbit_space(&good, 0).unwrap().passed);
        // d(0,3) from 3 to 1 turns the path into a 4-cycle: still a metric.
        let mut bad = matrix;
        bad[0][3] = OagElement::int_lex(&[1]);
        bad[3][0] = OagElement::int_lex(&[1]);
        let bad = OrbitSpace::from_matrix(OagDescriptor::int_lex(1), labels, bad).unwrap();
        let rep = certify_orbit_space(&bad, 0).unwrap();
        assert!(!rep.passed);
        assert!(!rep.violating_triples.is_empty());
        let round = OrbitSpace::from_json(&good.to_json()).unwrap();
        assert_eq!(round, good);
    }

    #[test]
    fn test_orbit_space_rejects_bad_matrices() {
        let d = OagDescriptor::int_lex(1);
        let e = |n| OagElement::int_lex(&[n]);
        let labels = vec!["a".to_string(), "b".to_string()];
        assert!(OrbitSpace::from_matrix(
            d.clone(),
            labels.clone(),
            vec![vec![e(0), e(1)], vec![e(2), e(0)]]
        )
        .is_err());
        assert!(OrbitSpace::from_matrix(
            d.clone(),
            labels.clone(),
            vec![vec![e(1), e(1)], vec![e(1), e(0)]]
        )
        .is_err());
        assert!(OrbitSpace::from_matrix(
            d.clone(),
            labels,
            vec![vec![e(0), e(-1)], vec![e(-1), e(0)]]
        )
        .is_err());
        let l3 = vec!["a".into(), "b".into(), "c".into()];
        let m = vec![
            vec![e(0), e(1), e(5)],
            vec![e(1), e(0), e(1)],
            vec![e(5), e(1), e(0)],
        ];
        assert!(OrbitSpace::from_matrix(d, l3, m).is_err());
    }

    #[test]
    fn test_space_json() {
        let s = star();
        let v = s.to_value();
        assert_eq!(TreeSpace::from_value(&v).unwrap(), s);
        let p = sp(&s, 2, 3, 4);
        assert_eq!(s.point_from_value(&s.point_to_value(&p)).unwrap(), p);
        let o = s.origin().unwrap();
        assert_eq!(s.point_from_value(&s.point_to_value(&o)).unwrap(), o);
    }
}
