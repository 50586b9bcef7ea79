//! Based and affine Lyndon length functions: ancillary functions, axiom
//! and property verification over word balls, the orbit pseudometric and
//! base change.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;
use serde_json::{json, Value};

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::intern::{BinMemo, Interner};
use crate::isosceles;
use crate::oag::json::{element_from_value, element_to_value};
use crate::oag::{HalfElement, OagAutomorphism, OagDescriptor, OagElement};
use crate::trees::{
    certify_distance_table, CertReport, OrbitSpace, TreePoint, TreeSpace, WITNESS_CAP,
};
use crate::words::{enumerate_ball, Alphabet, Word};

/// Where a length function comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    FromAction,
    FreeProduct,
    BaseChanged,
    UserTable,
}

/// A group `G` with a dilation homomorphism `α: G → Aut⁺(Λ)` and a
/// function `L: G → Λ`.
pub trait LengthFunction: Sync {
    type Elem: Clone + Send + Sync;

    fn descriptor(&self) -> OagDescriptor;
    fn identity(&self) -> Self::Elem;
    fn inverse(&self, g: &Self::Elem) -> Result<Self::Elem>;
    fn multiply(&self, g: &Self::Elem, h: &Self::Elem) -> Result<Self::Elem>;
    fn length(&self, g: &Self::Elem) -> Result<OagElement>;
    fn alpha(&self, g: &Self::Elem) -> Result<OagAutomorphism>;
    fn is_identity(&self, g: &Self::Elem) -> Result<bool>;

    fn provenance(&self) -> Provenance {
        Provenance::UserTable
    }
}

/// A length function on a group given by generators.
pub trait WordLength: LengthFunction {
    fn alphabet(&self) -> &Alphabet;
    fn element(&self, w: &Word) -> Result<Self::Elem>;

    fn length_of(&self, w: &Word) -> Result<OagElement> {
        self.length(&self.element(w)?)
    }

    fn alpha_of(&self, w: &Word) -> Result<OagAutomorphism> {
        self.alpha(&self.element(w)?)
    }

    /// Evidence that the element has no fixed point, when the length
    /// function comes with an action.
    fn fixed_point_free(&self, _w: &Word) -> Result<Option<bool>> {
        Ok(None)
    }
}

/// Object-safe view of a [`WordLength`], used for free-product factors.
pub trait FactorLength: Send + Sync {
    fn alphabet(&self) -> &Alphabet;
    fn descriptor(&self) -> OagDescriptor;
    fn word_length(&self, w: &Word) -> Result<OagElement>;
    fn word_alpha(&self, w: &Word) -> Result<OagAutomorphism>;
    fn word_is_identity(&self, w: &Word) -> Result<bool>;
    fn word_fixed_point_free(&self, w: &Word) -> Result<Option<bool>>;
}

impl<L: WordLength + Send> FactorLength for L {
    fn alphabet(&self) -> &Alphabet {
        WordLength::alphabet(self)
    }

    fn descriptor(&self) -> OagDescriptor {
        LengthFunction::descriptor(self)
    }

    fn word_length(&self, w: &Word) -> Result<OagElement> {
        self.length_of(w)
    }

    fn word_alpha(&self, w: &Word) -> Result<OagAutomorphism> {
        self.alpha_of(w)
    }

    fn word_is_identity(&self, w: &Word) -> Result<bool> {
        self.is_identity(&self.element(w)?)
    }

    fn word_fixed_point_free(&self, w: &Word) -> Result<Option<bool>> {
        self.fixed_point_free(w)
    }
}

// Ancillary functions, exact in ½Λ.

/// `a(g) = ½(L(g) + L(g⁻¹) − α_{g⁻¹} L(g²))`.
pub fn ancillary_a<L: LengthFunction + ?Sized>(lf: &L, g: &L::Elem) -> Result<HalfElement> {
    let gi = lf.inverse(g)?;
    let g2 = lf.multiply(g, g)?;
    let t = lf.alpha(&gi)?.apply(&lf.length(&g2)?)?;
    let twice = lf.length(g)?.try_add(&lf.length(&gi)?)?.try_sub(&t)?;
    Ok(HalfElement::half_of(twice))
}

/// `b(g) = ½((α_{g⁻¹} + 1) L(g²) − (α_{g²} + 1) L(g⁻¹))`.
pub fn ancillary_b<L: LengthFunction + ?Sized>(lf: &L, g: &L::Elem) -> Result<HalfElement> {
    let gi = lf.inverse(g)?;
    let g2 = lf.multiply(g, g)?;
    let l2 = lf.length(&g2)?;
    let li = lf.length(&gi)?;
    let p = lf.alpha(&gi)?.apply(&l2)?.try_add(&l2)?;
    let q = lf.alpha(&g2)?.apply(&li)?.try_add(&li)?;
    Ok(HalfElement::half_of(p.try_sub(&q)?))
}

/// `c(g, h) = ½(L(g) + L(h) − α_g L(g⁻¹h))`.
pub fn ancillary_c<L: LengthFunction + ?Sized>(
    lf: &L,
    g: &L::Elem,
    h: &L::Elem,
) -> Result<HalfElement> {
    let q = lf.multiply(&lf.inverse(g)?, h)?;
    let d = lf.alpha(g)?.apply(&lf.length(&q)?)?;
    Ok(HalfElement::half_of(
        lf.length(g)?.try_add(&lf.length(h)?)?.try_sub(&d)?,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AncillaryReport {
    pub a: HalfElement,
    pub b: HalfElement,
    pub c: HalfElement,
    /// Axiom (L1) for the pair.
    pub c_in_lambda: bool,
}

pub fn ancillary<L: LengthFunction + ?Sized>(
    lf: &L,
    g: &L::Elem,
    h: &L::Elem,
) -> Result<AncillaryReport> {
    let c = ancillary_c(lf, g, h)?;
    Ok(AncillaryReport {
        a: ancillary_a(lf, g)?,
        b: ancillary_b(lf, g)?,
        c_in_lambda: c.is_integral(),
        c,
    })
}

// Action contexts.

/// Generators acting by affine maps on a tree, with a basepoint.
#[derive(Debug, Clone)]
pub struct ActionContext {
    pub name: String,
    pub alphabet: Alphabet,
    pub space: TreeSpace,
    pub basepoint: TreePoint,
    generators: Vec<AffineMap>,
    inverses: Vec<AffineMap>,
    alpha: Vec<OagAutomorphism>,
}

impl ActionContext {
    /// `alpha`, when given, must match each generator's dilation factor.
    pub fn new(
        name: &str,
        alphabet: Alphabet,
        space: TreeSpace,
        basepoint: TreePoint,
        generators: Vec<AffineMap>,
        alpha: Option<Vec<OagAutomorphism>>,
    ) -> Result<Self> {
        if generators.len() != alphabet.len() {
            return Err(Error::InvalidMap(format!(
                "{} generators for {} symbols",
                generators.len(),
                alphabet.len()
            )));
        }
        space.check_point(&basepoint)?;
        for g in &generators {
            g.check_space(&space)?;
        }
        let own: Vec<OagAutomorphism> = generators.iter().map(|g| g.alpha().clone()).collect();
        if let Some(a) = alpha {
            if a.len() != own.len() {
                return Err(Error::InvalidMap(
                    "alpha table length differs from generators".into(),
                ));
            }
            for (i, (x, y)) in a.iter().zip(&own).enumerate() {
                if x != y {
                    return Err(Error::InvalidMap(format!(
                        "alpha of `{}` differs from its dilation factor",
                        alphabet.name(i as u16)
                    )));
                }
            }
        }
        let inverses = generators
            .iter()
            .map(|g| g.inverse())
            .collect::<Result<Vec<_>>>()?;
        Ok(ActionContext {
            name: name.to_string(),
            alphabet,
            space,
            basepoint,
            generators,
            inverses,
            alpha: own,
        })
    }

    pub fn generators(&self) -> &[AffineMap] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Result<&AffineMap> {
        let i = self
            .alphabet
            .lookup(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        Ok(&self.generators[i as usize])
    }

    pub fn alpha_table(&self) -> &[OagAutomorphism] {
        &self.alpha
    }

    /// The map of a word; `realize(uv) = realize(u) ∘ realize(v)`.
    pub fn realize(&self, w: &Word) -> Result<AffineMap> {
        let mut acc = AffineMap::identity(&self.space)?;
        for l in w.letters() {
            let m = if l.inverse {
                &self.inverses[l.gen as usize]
            } else {
                &self.generators[l.gen as usize]
            };
            acc = acc.compose(m)?;
        }
        Ok(acc)
    }

    pub fn parse(&self, s: &str) -> Result<Word> {
        self.alphabet.parse(s)
    }

    /// Action-spec JSON.
    pub fn to_value(&self) -> Value {
        json!({
            "name": self.name,
            "space": self.space.to_value(),
            "basepoint": self.space.point_to_value(&self.basepoint),
            "generators": self
                .alphabet
                .names()
                .iter()
                .zip(&self.generators)
                .map(|(s, g)| json!({"symbol": s, "map": g.body_to_value()}))
                .collect::<Vec<_>>(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("serializable")
    }
}

impl LengthFunction for ActionContext {
    type Elem = AffineMap;

    fn descriptor(&self) -> OagDescriptor {
        self.space.descriptor()
    }

    fn identity(&self) -> AffineMap {
        AffineMap::identity(&self.space).expect("linear or star space")
    }

    fn inverse(&self, g: &AffineMap) -> Result<AffineMap> {
        g.inverse()
    }

    fn multiply(&self, g: &AffineMap, h: &AffineMap) -> Result<AffineMap> {
        g.compose(h)
    }

    fn length(&self, g: &AffineMap) -> Result<OagElement> {
        self.space
            .distance(&self.basepoint, &g.apply(&self.basepoint)?)
    }

    fn alpha(&self, g: &AffineMap) -> Result<OagAutomorphism> {
        Ok(g.alpha().clone())
    }

    fn is_identity(&self, g: &AffineMap) -> Result<bool> {
        Ok(g.is_identity())
    }

    fn provenance(&self) -> Provenance {
        Provenance::FromAction
    }
}

impl WordLength for ActionContext {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn element(&self, w: &Word) -> Result<AffineMap> {
        self.realize(w)
    }

    fn fixed_point_free(&self, w: &Word) -> Result<Option<bool>> {
        Ok(Some(self.realize(w)?.fixed_points()?.is_empty()))
    }
}

/// A parsed action spec: the context plus optional length overrides.
#[derive(Debug, Clone)]
pub struct ActionSpec {
    pub context: ActionContext,
    pub overrides: Vec<(Word, OagElement)>,
}

impl ActionSpec {
    /// `{space, basepoint, generators: [{symbol, map}], alpha?, length_overrides?}`.
    pub fn from_value(v: &Value) -> Result<ActionSpec> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("action spec must be an object".into()))?;
        let space = TreeSpace::from_value(
            obj.get("space")
                .ok_or_else(|| Error::Parse("action spec needs `space`".into()))?,
        )?;
        if let TreeSpace::Orbit(_) = space {
            return Err(Error::Unsupported("actions on orbit spaces".into()));
        }
        let basepoint = match obj.get("basepoint") {
            Some(b) => space.point_from_value(b)?,
            None => space.origin()?,
        };
        let gens = obj
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("action spec needs a `generators` array".into()))?;
        let mut names = Vec::new();
        let mut maps = Vec::new();
        for g in gens {
            let sym = g
                .get("symbol")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("generator needs a `symbol`".into()))?;
            let m = g
                .get("map")
                .ok_or_else(|| Error::Parse(format!("generator `{sym}` needs a `map`")))?;
            names.push(sym.to_string());
            maps.push(AffineMap::body_from_value(&space, m)?);
        }
        let alphabet = Alphabet::new(&names)?;
        let d = space.descriptor();
        let alpha = match obj.get("alpha") {
            None => None,
            Some(a) => {
                let a = a.as_object().ok_or_else(|| {
                    Error::Parse("`alpha` must map symbols to automorphisms".into())
                })?;
                let mut table = maps.iter().map(|m| m.alpha().clone()).collect::<Vec<_>>();
                for (sym, aut) in a {
                    let i = alphabet
                        .lookup(sym)
                        .ok_or_else(|| Error::UnknownSymbol(sym.clone()))?;
                    table[i as usize] = crate::oag::json::aut_from_value(&d, aut)?;
                }
                Some(table)
            }
        };
        let name = obj.get("name").and_then(Value::as_str).unwrap_or("spec");
        let context = ActionContext::new(name, alphabet, space, basepoint, maps, alpha)?;
        let mut overrides = Vec::new();
        if let Some(o) = obj.get("length_overrides") {
            let o = o.as_object().ok_or_else(|| {
                Error::Parse("`length_overrides` must map words to elements".into())
            })?;
            for (w, x) in o {
                overrides.push((context.parse(w)?, element_from_value(&d, x)?));
            }
        }
        Ok(ActionSpec { context, overrides })
    }

    pub fn from_json(s: &str) -> Result<ActionSpec> {
        ActionSpec::from_value(&serde_json::from_str(s)?)
    }

    pub fn to_value(&self) -> Value {
        let mut v = self.context.to_value();
        if !self.overrides.is_empty() {
            let mut m = serde_json::Map::new();
            for (w, x) in &self.overrides {
                m.insert(
                    w.display(&self.context.alphabet).to_string(),
                    element_to_value(x),
                );
            }
            v["length_overrides"] = Value::Object(m);
        }
        v
    }
}

/// A word-based length function with some values replaced.
#[derive(Debug, Clone)]
pub struct PerturbedLength<L> {
    pub inner: L,
    overrides: HashMap<Word, OagElement>,
}

impl<L: WordLength> PerturbedLength<L> {
    pub fn new(inner: L, overrides: Vec<(Word, OagElement)>) -> Result<Self> {
        let d = inner.descriptor();
        for (_, x) in &overrides {
            x.check_in(&d)?;
        }
        Ok(PerturbedLength {
            inner,
            overrides: overrides.into_iter().collect(),
        })
    }
}

impl<L: WordLength> LengthFunction for PerturbedLength<L> {
    type Elem = Word;

    fn descriptor(&self) -> OagDescriptor {
        self.inner.descriptor()
    }

    fn identity(&self) -> Word {
        Word::empty()
    }

    fn inverse(&self, g: &Word) -> Result<Word> {
        Ok(g.inverse())
    }

    fn multiply(&self, g: &Word, h: &Word) -> Result<Word> {
        Ok(g.concat(h))
    }

    fn length(&self, g: &Word) -> Result<OagElement> {
        match self.overrides.get(g) {
            Some(x) => Ok(x.clone()),
            None => self.inner.length_of(g),
        }
    }

    fn alpha(&self, g: &Word) -> Result<OagAutomorphism> {
        self.inner.alpha_of(g)
    }

    fn is_identity(&self, g: &Word) -> Result<bool> {
        self.inner.is_identity(&self.inner.element(g)?)
    }
}

impl<L: WordLength> WordLength for PerturbedLength<L> {
    fn alphabet(&self) -> &Alphabet {
        self.inner.alphabet()
    }

    fn element(&self, w: &Word) -> Result<Word> {
        Ok(w.clone())
    }

    fn fixed_point_free(&self, w: &Word) -> Result<Option<bool>> {
        if let Some(x) = self.overrides.get(w) {
            if x.is_zero() {
                return Ok(Some(false));
            }
        }
        self.inner.fixed_point_free(w)
    }
}

// Base change.

/// Order-preserving injective homomorphisms `Λ₁ → Λ₂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderHom {
    /// `λ ↦ kλ`, `k > 0`.
    Scale(i64),
    /// `λ ↦ (λ, 0)` into `Λ₁ × right`.
    IntoLeft { right: OagDescriptor },
    /// `λ ↦ (0, λ)` into `left × Λ₁`.
    IntoRight { left: OagDescriptor },
    /// `Z^from → Z^to`, coordinates placed starting at `offset`.
    IntLexEmbed {
        from: usize,
        to: usize,
        offset: usize,
    },
}

impl OrderHom {
    pub fn target(&self, src: &OagDescriptor) -> Result<OagDescriptor> {
        match self {
            OrderHom::Scale(k) if *k > 0 => Ok(src.clone()),
            OrderHom::Scale(k) => Err(Error::InvalidMap(format!(
                "scale {k} is not order-preserving"
            ))),
            OrderHom::IntoLeft { right } => Ok(OagDescriptor::lex_pair(src.clone(), right.clone())),
            OrderHom::IntoRight { left } => Ok(OagDescriptor::lex_pair(left.clone(), src.clone())),
            OrderHom::IntLexEmbed { from, to, offset } => {
                if *src != OagDescriptor::int_lex(*from) || offset + from > *to || *from == 0 {
                    return Err(Error::InvalidMap(format!(
                        "cannot embed {src} into Z^{to} at {offset}"
                    )));
                }
                Ok(OagDescriptor::int_lex(*to))
            }
        }
    }

    pub fn apply(&self, x: &OagElement) -> Result<OagElement> {
        match self {
            OrderHom::Scale(k) => Ok(x.mul_int(&(*k).into())),
            OrderHom::IntoLeft { right } => {
                Ok(OagElement::pair(x.clone(), OagElement::zero(right)))
            }
            OrderHom::IntoRight { left } => Ok(OagElement::pair(OagElement::zero(left), x.clone())),
            OrderHom::IntLexEmbed { from, to, offset } => match x {
                OagElement::IntLex(v) if v.len() == *from => {
                    let mut out = vec![num_bigint::BigInt::from(0); *to];
                    for (i, c) in v.iter().enumerate() {
                        out[offset + i] = c.clone();
                    }
                    Ok(OagElement::IntLex(out))
                }
                _ => Err(Error::DescriptorMismatch {
                    left: x.descriptor().to_string(),
                    right: format!("Z^{from}"),
                }),
            },
        }
    }

    pub fn apply_half(&self, x: &HalfElement) -> Result<HalfElement> {
        Ok(HalfElement::half_of(self.apply(x.twice())?))
    }

    /// The automorphism of the target that agrees with `α` on the image
    /// and is the identity on the complement.
    pub fn extend_alpha(&self, a: &OagAutomorphism) -> Result<OagAutomorphism> {
        match self {
            OrderHom::Scale(_) => Ok(a.clone()),
            OrderHom::IntoLeft { right } => Ok(OagAutomorphism::diagonal(
                a.clone(),
                OagAutomorphism::identity(right),
            )),
            OrderHom::IntoRight { left } => Ok(OagAutomorphism::diagonal(
                OagAutomorphism::identity(left),
                a.clone(),
            )),
            OrderHom::IntLexEmbed { from, to, offset } => {
                let nat = a.natural_matrix().ok_or_else(|| {
                    Error::InvalidAutomorphism("expected a unipotent automorphism".into())
                })?;
                if nat.len() != *from {
                    return Err(Error::InvalidAutomorphism("rank mismatch".into()));
                }
                let mut m = vec![vec![num_bigint::BigInt::from(0); *to]; *to];
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] = 1.into();
                }
                for i in 0..*from {
                    for j in 0..*from {
                        m[offset + i][offset + j] = nat[i][j].clone();
                    }
                }
                OagAutomorphism::unipotent_natural(m)
            }
        }
    }
}

/// `L₂ = h ∘ L₁` with dilations `ᾱ` given per generator.
#[derive(Debug, Clone)]
pub struct BaseChanged<L> {
    pub inner: L,
    pub hom: OrderHom,
    target: OagDescriptor,
    alpha_bar: Vec<OagAutomorphism>,
    alpha_bar_inv: Vec<OagAutomorphism>,
}

impl<L: WordLength> BaseChanged<L> {
    /// Checks `h ∘ α_g = ᾱ_g ∘ h` for every generator on sample elements.
    pub fn new(inner: L, hom: OrderHom, alpha_bar: Vec<OagAutomorphism>) -> Result<Self> {
        let src = inner.descriptor();
        let target = hom.target(&src)?;
        let al = inner.alphabet();
        if alpha_bar.len() != al.len() {
            return Err(Error::InvalidMap("one ᾱ per generator is required".into()));
        }
        for (i, ab) in alpha_bar.iter().enumerate() {
            ab.descriptor().ensure_same(&target)?;
            let name = al.name(i as u16).to_string();
            let a = inner.alpha_of(&al.gen(&name)?)?;
            for x in src.samples() {
                let lhs = hom.apply(&a.apply(&x)?)?;
                let rhs = ab.apply(&hom.apply(&x)?)?;
                if lhs != rhs {
                    return Err(Error::BaseChangeIncompatible {
                        generator: name,
                        lambda: x.to_string(),
                    });
                }
            }
        }
        let alpha_bar_inv = alpha_bar
            .iter()
            .map(|a| a.inverse())
            .collect::<Result<_>>()?;
        Ok(BaseChanged {
            inner,
            hom,
            target,
            alpha_bar,
            alpha_bar_inv,
        })
    }

    /// Base change with `ᾱ` extended automatically from `α`.
    pub fn extended(inner: L, hom: OrderHom) -> Result<Self> {
        let al = inner.alphabet().clone();
        let mut ab = Vec::new();
        for name in al.names() {
            ab.push(hom.extend_alpha(&inner.alpha_of(&al.gen(name)?)?)?);
        }
        BaseChanged::new(inner, hom, ab)
    }

    fn alpha_bar_word(&self, w: &Word) -> Result<OagAutomorphism> {
        let mut acc = OagAutomorphism::identity(&self.target);
        for l in w.letters() {
            let a = if l.inverse {
                &self.alpha_bar_inv[l.gen as usize]
            } else {
                &self.alpha_bar[l.gen as usize]
            };
            acc = acc.compose(a)?;
        }
        Ok(acc)
    }
}

impl<L: WordLength> LengthFunction for BaseChanged<L> {
    type Elem = (L::Elem, OagAutomorphism);

    fn descriptor(&self) -> OagDescriptor {
        self.target.clone()
    }

    fn identity(&self) -> Self::Elem {
        (
            self.inner.identity(),
            OagAutomorphism::identity(&self.target),
        )
    }

    fn inverse(&self, g: &Self::Elem) -> Result<Self::Elem> {
        Ok((self.inner.inverse(&g.0)?, g.1.inverse()?))
    }

    fn multiply(&self, g: &Self::Elem, h: &Self::Elem) -> Result<Self::Elem> {
        Ok((self.inner.multiply(&g.0, &h.0)?, g.1.compose(&h.1)?))
    }

    fn length(&self, g: &Self::Elem) -> Result<OagElement> {
        self.hom.apply(&self.inner.length(&g.0)?)
    }

    fn alpha(&self, g: &Self::Elem) -> Result<OagAutomorphism> {
        Ok(g.1.clone())
    }

    fn is_identity(&self, g: &Self::Elem) -> Result<bool> {
        self.inner.is_identity(&g.0)
    }

    fn provenance(&self) -> Provenance {
        Provenance::BaseChanged
    }
}

impl<L: WordLength> WordLength for BaseChanged<L> {
    fn alphabet(&self) -> &Alphabet {
        self.inner.alphabet()
    }

    fn element(&self, w: &Word) -> Result<Self::Elem> {
        Ok((self.inner.element(w)?, self.alpha_bar_word(w)?))
    }

    fn fixed_point_free(&self, w: &Word) -> Result<Option<bool>> {
        self.inner.fixed_point_free(w)
    }
}

// Balls and tables.

/// A finite list of group elements closed under inverses, containing the
/// identity, each with a decomposition into earlier "letters".
#[derive(Debug, Clone)]
pub struct Ball<E> {
    pub elems: Vec<E>,
    pub labels: Vec<String>,
    pub inverse: Vec<usize>,
    pub identity: usize,
    /// Decomposition into letters or syllables (indices into `elems`).
    pub parts: Vec<Vec<usize>>,
}

impl<E> Ball<E> {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
}

/// The reduced-word ball of a word length function, with the words.
pub fn word_ball<L: WordLength>(lf: &L, radius: usize) -> Result<(Ball<L::Elem>, Vec<Word>)> {
    let al = lf.alphabet();
    let words = enumerate_ball(al, radius);
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut elems: Vec<L::Elem> = Vec::with_capacity(words.len());
    for w in &words {
        let e = match w.letters().split_last() {
            None => lf.identity(),
            Some((&last, [])) => lf.element(&Word::letter(last))?,
            Some((&last, rest)) => {
                let prefix = index[&Word::reduce(rest.iter().copied())];
                let l = index[&Word::letter(last)];
                lf.multiply(&elems[prefix], &elems[l])?
            }
        };
        elems.push(e);
    }
    let inverse = words.iter().map(|w| index[&w.inverse()]).collect();
    let parts = words
        .iter()
        .map(|w| {
            w.letters()
                .iter()
                .map(|&l| index[&Word::letter(l)])
                .collect()
        })
        .collect();
    let labels = words.iter().map(|w| w.display(al).to_string()).collect();
    Ok((
        Ball {
            elems,
            labels,
            inverse,
            identity: 0,
            parts,
        },
        words,
    ))
}

/// Exact pair table over a ball: lengths, `δ(g,h) = α_g L(g⁻¹h)` and
/// `2c(g,h)`, all interned.
pub struct BallTable {
    pub n: usize,
    pub interner: Interner,
    rank: Vec<u32>,
    len: Vec<u32>,
    len2: Vec<u32>,
    /// `α_g(L(g⁻¹))`, for (L3).
    l3: Vec<u32>,
    quot: Vec<u32>,
    delta: Vec<u32>,
    twoc: Vec<u32>,
    /// `L(g) + α_g L(h)`.
    tri: Vec<u32>,
    zero: u32,
    inverse: Vec<usize>,
    identity: usize,
}

/// Rows processed per parallel batch.
const ROW_BATCH: usize = 64;

impl BallTable {
    pub fn build<L: LengthFunction>(lf: &L, ball: &Ball<L::Elem>) -> Result<Self> {
        let n = ball.len();
        let mut interner = Interner::new();
        let zero = interner.intern(OagElement::zero(&lf.descriptor()));
        let inv_elems: Vec<L::Elem> = ball
            .elems
            .par_iter()
            .map(|g| lf.inverse(g))
            .collect::<Result<_>>()?;
        let lens: Vec<OagElement> = ball
            .elems
            .par_iter()
            .map(|g| lf.length(g))
            .collect::<Result<_>>()?;
        let alphas: Vec<OagAutomorphism> = ball
            .elems
            .par_iter()
            .map(|g| lf.alpha(g))
            .collect::<Result<_>>()?;
        let mut aut_ids: FxHashMap<OagAutomorphism, u32> = FxHashMap::default();
        let mut auts: Vec<OagAutomorphism> = Vec::new();
        let aid: Vec<u32> = alphas
            .iter()
            .map(|a| {
                *aut_ids.entry(a.clone()).or_insert_with(|| {
                    auts.push(a.clone());
                    (auts.len() - 1) as u32
                })
            })
            .collect();
        let len: Vec<u32> = lens.into_iter().map(|x| interner.intern(x)).collect();
        let mut dbl = FxHashMap::default();
        let mut len2 = Vec::with_capacity(n);
        for &l in &len {
            let id = match dbl.get(&l) {
                Some(&d) => d,
                None => {
                    let d = interner.intern(interner.get(l).double());
                    dbl.insert(l, d);
                    d
                }
            };
            len2.push(id);
        }
        let mut act = BinMemo::default();
        let mut apply = |interner: &mut Interner, a: u32, x: u32| -> Result<u32> {
            if let Some(&r) = act.get(&(a, x)) {
                return Ok(r);
            }
            let v = auts[a as usize].apply(interner.get(x))?;
            let r = interner.intern(v);
            act.insert((a, x), r);
            Ok(r)
        };
        let mut sums = BinMemo::default();
        let mut add = |interner: &mut Interner, x: u32, y: u32| -> Result<u32> {
            let key = (x.min(y), x.max(y));
            if let Some(&r) = sums.get(&key) {
                return Ok(r);
            }
            let v = interner.get(key.0).try_add(interner.get(key.1))?;
            let r = interner.intern(v);
            sums.insert(key, r);
            Ok(r)
        };
        let mut diffs = BinMemo::default();
        let mut sub = |interner: &mut Interner, x: u32, y: u32| -> Result<u32> {
            if let Some(&r) = diffs.get(&(x, y)) {
                return Ok(r);
            }
            let v = interner.get(x).try_sub(interner.get(y))?;
            let r = interner.intern(v);
            diffs.insert((x, y), r);
            Ok(r)
        };
        let mut l3 = Vec::with_capacity(n);
        for i in 0..n {
            l3.push(apply(&mut interner, aid[i], len[ball.inverse[i]])?);
        }
        let mut quot = vec![0u32; n * n];
        let mut delta = vec![0u32; n * n];
        let mut twoc = vec![0u32; n * n];
        let mut tri = vec![0u32; n * n];
        for start in (0..n).step_by(ROW_BATCH) {
            let end = (start + ROW_BATCH).min(n);
            let rows: Vec<Vec<OagElement>> = (start..end)
                .into_par_iter()
                .map(|i| {
                    ball.elems
                        .iter()
                        .map(|h| lf.length(&lf.multiply(&inv_elems[i], h)?))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            for (r, row) in rows.into_iter().enumerate() {
                let i = start + r;
                for (j, t) in row.into_iter().enumerate() {
                    let k = i * n + j;
                    let q = interner.intern(t);
                    quot[k] = q;
                    let d = apply(&mut interner, aid[i], q)?;
                    delta[k] = d;
                    let s = add(&mut interner, len[i], len[j])?;
                    twoc[k] = sub(&mut interner, s, d)?;
                    let ah = apply(&mut interner, aid[i], len[j])?;
                    tri[k] = add(&mut interner, len[i], ah)?;
                }
            }
        }
        let rank = interner.ranks()?;
        Ok(BallTable {
            n,
            interner,
            rank,
            len,
            len2,
            l3,
            quot,
            delta,
            twoc,
            tri,
            zero,
            inverse: ball.inverse.clone(),
            identity: ball.identity,
        })
    }

    fn r(&self, id: u32) -> u32 {
        self.rank[id as usize]
    }

    pub fn length(&self, i: usize) -> &OagElement {
        self.interner.get(self.len[i])
    }

    pub fn delta(&self, i: usize, j: usize) -> &OagElement {
        self.interner.get(self.delta[i * self.n + j])
    }

    pub fn delta_id(&self, i: usize, j: usize) -> u32 {
        self.delta[i * self.n + j]
    }

    /// `c(g_i, g_j)`.
    pub fn c(&self, i: usize, j: usize) -> HalfElement {
        HalfElement::half_of(self.interner.get(self.twoc[i * self.n + j]).clone())
    }

    pub fn twoc_id(&self, i: usize, j: usize) -> u32 {
        self.twoc[i * self.n + j]
    }

    fn c_symmetric(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (i + 1..n).all(|j| self.twoc[i * n + j] == self.twoc[j * n + i]))
    }

    /// Axioms (L1)–(L4).
    pub fn axiom_report(&self, labels: &[String]) -> Vec<Check> {
        let n = self.n;
        let mut out = Vec::new();

        let mut l1 = Check::new("L1", "c(g,h) lies in Λ");
        let mut div: FxHashMap<u32, bool> = FxHashMap::default();
        for i in 0..n {
            for j in 0..n {
                let id = self.twoc[i * n + j];
                let ok = *div
                    .entry(id)
                    .or_insert_with(|| self.interner.get(id).is_two_divisible());
                l1.record(ok, || {
                    Witness::new(&[&labels[i], &labels[j]], format!("c = {}", self.c(i, j)))
                });
            }
        }
        out.push(l1);

        let mut l2 = Check::new("L2", "L(1) = 0");
        let id = self.identity;
        l2.record(self.len[id] == self.zero, || {
            Witness::new(&[&labels[id]], format!("L(1) = {}", self.length(id)))
        });
        out.push(l2);

        let mut l3 = Check::new("L3", "L(g) = α_g L(g⁻¹)");
        for i in 0..n {
            l3.record(self.len[i] == self.l3[i], || {
                Witness::new(
                    &[&labels[i]],
                    format!(
                        "L(g) = {}, α_g L(g⁻¹) = {}",
                        self.length(i),
                        self.interner.get(self.l3[i])
                    ),
                )
            });
        }
        out.push(l3);

        let mut l4 = Check::new("L4", "(c(g,h), c(g,k), c(h,k)) is an isosceles triple");
        let w = |a: usize, b: usize| self.r(self.twoc[a * n + b]);
        if n <= isosceles::EXHAUSTIVE_LIMIT {
            // The axiom as stated: c(g,h) < c(g,k) implies c(g,h) = c(h,k).
            for g in 0..n {
                for h in 0..n {
                    let gh = w(g, h);
                    for k in 0..n {
                        let ok = !(gh < w(g, k) && gh != w(h, k));
                        l4.record(ok, || {
                            Witness::new(
                                &[&labels[g], &labels[h], &labels[k]],
                                format!(
                                    "c(g,h) = {}, c(g,k) = {}, c(h,k) = {}",
                                    self.c(g, h),
                                    self.c(g, k),
                                    self.c(h, k)
                                ),
                            )
                        });
                    }
                }
            }
            l4.method = Some("exhaustive");
        } else if self.c_symmetric() {
            let o = isosceles::spanning_tree(n, &w, WITNESS_CAP);
            l4.checked = (n * n) as u64;
            l4.violations = o.violations as u64;
            for (a, b, c) in o.witnesses {
                l4.witnesses.push(Witness::new(
                    &[&labels[a], &labels[b], &labels[c]],
                    format!(
                        "c(g,h) = {}, c(g,k) = {}, c(h,k) = {}",
                        self.c(a, b),
                        self.c(a, c),
                        self.c(b, c)
                    ),
                ));
            }
            l4.method = Some("spanning-tree");
        } else {
            l4.violations = 1;
            l4.method = Some("skipped");
            l4.witnesses
                .push(Witness::new(&[], "c is not symmetric; see item 8".into()));
        }
        l4.finish();
        out.push(l4);
        out
    }

    /// Items 1, 2 and 4–8 of the length-property lemma (item 3 needs
    /// products of more than two elements; see [`verify_length_props`]).
    pub fn prop_report(&self, labels: &[String]) -> Vec<Check> {
        let n = self.n;
        let mut out = Vec::new();
        let z = self.r(self.zero);

        let mut p1 = Check::new("item 1", "L(g) ≥ 0");
        for i in 0..n {
            p1.record(self.r(self.len[i]) >= z, || {
                Witness::new(&[&labels[i]], format!("L = {}", self.length(i)))
            });
        }
        out.push(p1);

        let mut p2 = Check::new("item 2", "L(gh) ≤ L(g) + α_g L(h)");
        for i in 0..n {
            let gi = self.inverse[i];
            for j in 0..n {
                let lhs = self.quot[gi * n + j];
                let rhs = self.tri[i * n + j];
                p2.record(self.r(lhs) <= self.r(rhs), || {
                    Witness::new(
                        &[&labels[i], &labels[j]],
                        format!(
                            "L(gh) = {}, L(g) + α_g L(h) = {}",
                            self.interner.get(lhs),
                            self.interner.get(rhs)
                        ),
                    )
                });
            }
        }
        out.push(p2);

        let mut p4 = Check::new("item 4", "c(g,h) ≥ 0");
        for i in 0..n {
            for j in 0..n {
                p4.record(self.r(self.twoc[i * n + j]) >= z, || {
                    Witness::new(&[&labels[i], &labels[j]], format!("c = {}", self.c(i, j)))
                });
            }
        }
        out.push(p4);

        let mut p5 = Check::new("item 5", "c(g,g) = L(g)");
        for i in 0..n {
            p5.record(self.twoc[i * n + i] == self.len2[i], || {
                Witness::new(
                    &[&labels[i]],
                    format!("c(g,g) = {}, L(g) = {}", self.c(i, i), self.length(i)),
                )
            });
        }
        out.push(p5);

        let mut p6 = Check::new("item 6", "c(g,1) = 0");
        let e = self.identity;
        for i in 0..n {
            p6.record(self.twoc[i * n + e] == self.zero, || {
                Witness::new(&[&labels[i]], format!("c(g,1) = {}", self.c(i, e)))
            });
        }
        out.push(p6);

        let mut p7 = Check::new("item 7", "α_g L(g⁻¹h) = α_h L(h⁻¹g)");
        for i in 0..n {
            for j in 0..n {
                p7.record(self.delta[i * n + j] == self.delta[j * n + i], || {
                    Witness::new(
                        &[&labels[i], &labels[j]],
                        format!("{} vs {}", self.delta(i, j), self.delta(j, i)),
                    )
                });
            }
        }
        out.push(p7);

        let mut p8 = Check::new("item 8", "c(g,h) = c(h,g) ≤ min(L(g), L(h))");
        for i in 0..n {
            for j in 0..n {
                let c = self.twoc[i * n + j];
                let ok = c == self.twoc[j * n + i]
                    && self.r(c) <= self.r(self.len2[i])
                    && self.r(c) <= self.r(self.len2[j]);
                p8.record(ok, || {
                    Witness::new(
                        &[&labels[i], &labels[j]],
                        format!("c(g,h) = {}, c(h,g) = {}", self.c(i, j), self.c(j, i)),
                    )
                });
            }
        }
        out.push(p8);
        out
    }
}

/// One verified statement, with counts and capped witnesses.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub axiom: String,
    pub statement: String,
    pub status: &'static str,
    pub checked: u64,
    pub violations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<&'static str>,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Witness {
    pub elements: Vec<String>,
    pub detail: String,
}

impl Witness {
    pub fn new(elements: &[&String], detail: String) -> Self {
        Witness {
            elements: elements.iter().map(|s| (*s).clone()).collect(),
            detail,
        }
    }
}

impl Check {
    pub fn new(axiom: &str, statement: &str) -> Self {
        Check {
            axiom: axiom.to_string(),
            statement: statement.to_string(),
            status: "pass",
            checked: 0,
            violations: 0,
            method: None,
            witnesses: Vec::new(),
        }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            self.status = "fail";
            if self.witnesses.len() < WITNESS_CAP {
                self.witnesses.push(witness());
            }
        }
    }

    fn finish(&mut self) {
        self.status = if self.violations == 0 { "pass" } else { "fail" };
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Report of a verification suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub context: String,
    pub provenance: Provenance,
    pub ball_size: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(
        suite: &'static str,
        context: &str,
        provenance: Provenance,
        ball_size: usize,
        checks: Vec<Check>,
    ) -> Self {
        SuiteReport {
            suite,
            context: context.to_string(),
            provenance,
            ball_size,
            passed: checks.iter().all(Check::passed),
            checks,
        }
    }
}

pub type AxiomReport = SuiteReport;
pub type PropReport = SuiteReport;

/// Settings for sampled checks.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random triples for the n-fold inequality.
    pub triple_samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            triple_samples: 2000,
        }
    }
}

pub fn verify_axioms<L: LengthFunction>(
    lf: &L,
    name: &str,
    ball: &Ball<L::Elem>,
) -> Result<AxiomReport> {
    let table = BallTable::build(lf, ball)?;
    Ok(axiom_suite(lf, name, ball, &table))
}

pub fn axiom_suite<L: LengthFunction>(
    lf: &L,
    name: &str,
    ball: &Ball<L::Elem>,
    table: &BallTable,
) -> AxiomReport {
    SuiteReport::new(
        "axioms",
        name,
        lf.provenance(),
        ball.len(),
        table.axiom_report(&ball.labels),
    )
}

pub fn verify_length_props<L: LengthFunction>(
    lf: &L,
    name: &str,
    ball: &Ball<L::Elem>,
    cfg: SuiteConfig,
) -> Result<PropReport> {
    let table = BallTable::build(lf, ball)?;
    prop_suite(lf, name, ball, &table, cfg)
}

pub fn prop_suite<L: LengthFunction>(
    lf: &L,
    name: &str,
    ball: &Ball<L::Elem>,
    table: &BallTable,
    cfg: SuiteConfig,
) -> Result<PropReport> {
    let mut checks = table.prop_report(&ball.labels);
    checks.insert(2, n_fold_check(lf, ball, cfg)?);
    Ok(SuiteReport::new(
        "length-properties",
        name,
        lf.provenance(),
        ball.len(),
        checks,
    ))
}

/// `L(g_1⋯g_n) ≤ Σ α_{ḡ_{k-1}} L(g_k)`, on every ball element's
/// decomposition and on sampled triples.
fn n_fold_check<L: LengthFunction>(
    lf: &L,
    ball: &Ball<L::Elem>,
    cfg: SuiteConfig,
) -> Result<Check> {
    let mut chk = Check::new("item 3", "L(g_1⋯g_n) ≤ Σ α_{ḡ_{k-1}} L(g_k)");
    let n = ball.len();
    let mut tuples: Vec<Vec<usize>> = ball
        .parts
        .iter()
        .filter(|p| p.len() >= 2)
        .cloned()
        .collect();
    if n > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.triple_samples {
            tuples.push((0..3).map(|_| rng.random_range(0..n)).collect());
        }
    }
    let results: Vec<(bool, String, Vec<usize>)> = tuples
        .into_par_iter()
        .map(|t| -> Result<_> {
            let mut acc = lf.identity();
            let mut sum = OagElement::zero(&lf.descriptor());
            for &k in &t {
                let term = lf.alpha(&acc)?.apply(&lf.length(&ball.elems[k])?)?;
                sum = sum.try_add(&term)?;
                acc = lf.multiply(&acc, &ball.elems[k])?;
            }
            let l = lf.length(&acc)?;
            Ok((l.try_le(&sum)?, format!("L = {l}, bound = {sum}"), t))
        })
        .collect::<Result<_>>()?;
    for (ok, detail, t) in results {
        chk.record(ok, || Witness {
            elements: t.iter().map(|&k| ball.labels[k].clone()).collect(),
            detail,
        });
    }
    Ok(chk)
}

/// The quotient of a ball by `δ = 0`, as an orbit space.
#[derive(Debug, Clone)]
pub struct OrbitPseudometric {
    pub space: Arc<OrbitSpace>,
    /// Class index of every ball element.
    pub class_of: Vec<usize>,
    pub identity_class: usize,
}

/// Build the orbit space of `δ(g,h) = α_g L(g⁻¹h)` on a ball.
pub fn orbit_pseudometric<L: LengthFunction>(
    lf: &L,
    ball: &Ball<L::Elem>,
) -> Result<OrbitPseudometric> {
    let table = BallTable::build(lf, ball)?;
    orbit_from_table(lf, ball, &table)
}

pub fn orbit_from_table<L: LengthFunction>(
    lf: &L,
    ball: &Ball<L::Elem>,
    table: &BallTable,
) -> Result<OrbitPseudometric> {
    let n = ball.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if table.delta[i * n + j] == table.zero {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut class_of = vec![0; n];
    let mut reps = Vec::new();
    let mut rep_class: FxHashMap<usize, usize> = FxHashMap::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        let c = *rep_class.entry(r).or_insert_with(|| {
            reps.push(r);
            reps.len() - 1
        });
        class_of[i] = c;
    }
    let m = reps.len();
    let mut ids = Vec::with_capacity(m * m);
    for &a in &reps {
        for &b in &reps {
            ids.push(table.delta[a * n + b]);
        }
    }
    let labels = reps.iter().map(|&r| ball.labels[r].clone()).collect();
    let space = OrbitSpace::from_interned(lf.descriptor(), labels, table.interner.clone(), ids)?;
    Ok(OrbitPseudometric {
        space: Arc::new(space),
        identity_class: class_of[ball.identity],
        class_of,
    })
}

/// 0-hyperbolicity of the orbit space at `⟨1⟩` and the identity
/// `(ḡ·h̄)₁ = c(g,h)` on all ball pairs.
#[derive(Debug, Clone, Serialize)]
pub struct DualityReport {
    pub classes: usize,
    pub certificate: CertReport,
    pub gromov_equals_c: Check,
    pub passed: bool,
}

pub fn verify_duality<L: LengthFunction>(
    lf: &L,
    ball: &Ball<L::Elem>,
    table: &BallTable,
) -> Result<DualityReport> {
    let op = orbit_from_table(lf, ball, table)?;
    let space = &op.space;
    // The orbit space shares the table's value ids.
    let mut interner = table.interner.clone();
    let (cert, gp) = certify_distance_table(
        space.labels(),
        &mut interner,
        space.ids(),
        op.identity_class,
    )?;
    let m = space.len();
    let n = ball.len();
    let mut chk = Check::new("duality", "(ḡ·h̄)₁ = c(g,h)");
    for i in 0..n {
        for j in 0..n {
            let g = gp[op.class_of[i] * m + op.class_of[j]];
            chk.record(g == table.twoc[i * n + j], || {
                Witness::new(
                    &[&ball.labels[i], &ball.labels[j]],
                    format!(
                        "2(g·h) = {}, 2c = {}",
                        interner.get(g),
                        table.interner.get(table.twoc[i * n + j])
                    ),
                )
            });
        }
    }
    Ok(DualityReport {
        classes: m,
        passed: cert.passed && chk.passed(),
        certificate: cert,
        gromov_equals_c: chk,
    })
}

/// Check `ℓ(γ n γ⁻¹) = α_γ ℓ(n)` where `ℓ` is the b-function of the
/// normal subgroup's elements.
pub fn check_extension_condition<L: LengthFunction>(
    lf: &L,
    normal: &[(String, L::Elem)],
    conjugators: &[(String, L::Elem)],
    alpha: &dyn Fn(&L::Elem) -> Result<OagAutomorphism>,
) -> Result<Check> {
    let mut chk = Check::new("extension", "ℓ(γgγ⁻¹) = α_γ ℓ(g)");
    for (gl, g) in normal {
        let ell = ancillary_b(lf, g)?;
        for (cl, c) in conjugators {
            let conj = lf.multiply(&lf.multiply(c, g)?, &lf.inverse(c)?)?;
            let lhs = ancillary_b(lf, &conj)?;
            let rhs = ell.apply_aut(&alpha(c)?)?;
            chk.record(lhs == rhs, || {
                Witness::new(&[cl, gl], format!("ℓ(γgγ⁻¹) = {lhs}, α_γ ℓ(g) = {rhs}"))
            });
        }
    }
    Ok(chk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oag::Sign;

    fn translation_z() -> ActionContext {
        let d = OagDescriptor::int_lex(1);
        ActionContext::new(
            "translation_z",
            Alphabet::new(&["a"]).unwrap(),
            TreeSpace::linear(d.clone()),
            TreePoint::Linear(OagElement::zero(&d)),
            vec![AffineMap::translation(OagElement::int_lex(&[1]))],
            None,
        )
        .unwrap()
    }

    fn z(n: i64) -> OagElement {
        OagElement::int_lex(&[n])
    }

    #[test]
    fn test_ancillary_translation() {
        let ctx = translation_z();
        let g = ctx.realize(&ctx.parse("a^3").unwrap()).unwrap();
        let h = ctx.realize(&ctx.parse("a^5").unwrap()).unwrap();
        let rep = ancillary(&ctx, &g, &h).unwrap();
        assert_eq!(rep.c, HalfElement::from_element(&z(3)));
        assert!(rep.c_in_lambda);
        assert_eq!(rep.b, HalfElement::from_element(&z(3)));
        assert!(rep.a.is_zero());
        let e = ctx.identity();
        assert!(ancillary_c(&ctx, &g, &e).unwrap().is_zero());
        assert_eq!(
            ancillary_c(&ctx, &g, &g).unwrap(),
            HalfElement::from_element(&z(3))
        );
    }

    #[test]
    fn test_axioms_pass_on_translation_ball() {
        let ctx = translation_z();
        let (ball, _) = word_ball(&ctx, 4).unwrap();
        let rep = verify_axioms(&ctx, "translation_z", &ball).unwrap();
        assert!(rep.passed, "{rep:?}");
        let props =
            verify_length_props(&ctx, "translation_z", &ball, SuiteConfig::default()).unwrap();
        assert!(props.passed, "{props:?}");
    }

    #[test]
    fn test_trivial_group_passes_vacuously() {
        let ctx = translation_z();
        let (ball, _) = word_ball(&ctx, 0).unwrap();
        assert_eq!(ball.len(), 1);
        assert!(verify_axioms(&ctx, "trivial", &ball).unwrap().passed);
        let op = orbit_pseudometric(&ctx, &ball).unwrap();
        assert_eq!(op.space.len(), 1);
        assert!(op.space.distance(0, 0).is_zero());
    }

    #[test]
    fn test_perturbed_table_fails_with_witness() {
        let ctx = translation_z();
        let w = ctx.parse("a^2").unwrap();
        let bad = PerturbedLength::new(ctx, vec![(w, z(5))]).unwrap();
        let (ball, _) = word_ball(&bad, 3).unwrap();
        let rep = verify_axioms(&bad, "bumped", &ball).unwrap();
        assert!(!rep.passed);
        let l3 = rep.checks.iter().find(|c| c.axiom == "L3").unwrap();
        assert!(l3.witnesses.iter().any(|w| w.elements == ["a^2"]));
        let l4 = rep.checks.iter().find(|c| c.axiom == "L4").unwrap();
        assert!(!l4.passed());
        assert_eq!(l4.witnesses[0].elements.len(), 3);
    }

    #[test]
    fn test_orbit_pseudometric_translation() {
        let ctx = translation_z();
        let words: Vec<Word> = ["1", "a", "a^2", "a^-1"]
            .iter()
            .map(|s| ctx.parse(s).unwrap())
            .collect();
        let elems: Vec<AffineMap> = words.iter().map(|w| ctx.realize(w).unwrap()).collect();
        let ball = Ball {
            labels: words
                .iter()
                .map(|w| w.display(&ctx.alphabet).to_string())
                .collect(),
            elems,
            inverse: vec![0, 3, 2, 1],
            identity: 0,
            parts: vec![vec![]; 4],
        };
        let op = orbit_pseudometric(&ctx, &ball).unwrap();
        let exps = [0i64, 1, 2, -1];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(*op.space.distance(i, j), z((exps[i] - exps[j]).abs()));
            }
        }
    }

    #[test]
    fn test_base_change_examples() {
        let ctx = translation_z();
        let embed = OrderHom::IntLexEmbed {
            from: 1,
            to: 2,
            offset: 1,
        };
        let bc = BaseChanged::new(
            ctx.clone(),
            embed,
            vec![OagAutomorphism::identity(&OagDescriptor::int_lex(2))],
        )
        .unwrap();
        for n in -4i64..=4 {
            let w = ctx.parse(&format!("a^{n}")).unwrap();
            assert_eq!(
                bc.length_of(&w).unwrap(),
                OagElement::int_lex(&[0, n.abs()])
            );
        }
        let dbl = BaseChanged::extended(ctx.clone(), OrderHom::Scale(2)).unwrap();
        let w = ctx.parse("a^3").unwrap();
        assert_eq!(dbl.length_of(&w).unwrap(), z(6));
        // Incompatible: h is the identity but ᾱ doubles.
        let d2 = OagDescriptor::localized(2);
        let doubling = ActionContext::new(
            "doubling",
            Alphabet::new(&["s"]).unwrap(),
            TreeSpace::linear(d2.clone()),
            TreePoint::Linear(OagElement::zero(&d2)),
            vec![AffineMap::linear(
                Sign::Plus,
                OagAutomorphism::scale_i64(2, 2, 1).unwrap(),
                OagElement::zero(&d2),
            )
            .unwrap()],
            None,
        )
        .unwrap();
        let err = BaseChanged::new(
            doubling,
            OrderHom::Scale(1),
            vec![OagAutomorphism::identity(&d2)],
        )
        .unwrap_err();
        assert!(matches!(err, Error::BaseChangeIncompatible { .. }));
    }

    #[test]
    fn test_action_spec_round_trip() {
        let ctx = translation_z();
        let spec = ActionSpec {
            context: ctx.clone(),
            overrides: vec![(ctx.parse("a").unwrap(), z(2))],
        };
        let back = ActionSpec::from_value(&spec.to_value()).unwrap();
        assert_eq!(back.overrides, spec.overrides);
        assert_eq!(back.context.generators(), ctx.generators());
    }
}
