//! Free products of length functions over a common Λ, freeness
//! certification on balls, and regular pairs.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lyndon::{ancillary_b, Ball, FactorLength, LengthFunction, Provenance};
use crate::oag::{HalfElement, OagAutomorphism, OagDescriptor, OagElement};
use crate::words::{cyclic_reduce_with, enumerate_ball, Alphabet, FpWord, Letter, Syllable, Word};

#[derive(Debug, Clone)]
struct SyllableData {
    length: OagElement,
    alpha: OagAutomorphism,
    trivial: bool,
}

/// Factor length functions over one Λ, combined on the free product.
pub struct FreeProductContext {
    pub name: String,
    factors: Vec<Arc<dyn FactorLength>>,
    alphabets: Vec<Alphabet>,
    descriptor: OagDescriptor,
    cache: RwLock<FxHashMap<(usize, Word), SyllableData>>,
}

impl std::fmt::Debug for FreeProductContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FreeProductContext")
            .field("name", &self.name)
            .field("alphabets", &self.alphabets)
            .field("descriptor", &self.descriptor)
            .finish()
    }
}

impl FreeProductContext {
    pub fn new(name: &str, factors: Vec<Arc<dyn FactorLength>>) -> Result<Self> {
        let first = factors
            .first()
            .ok_or_else(|| Error::InvalidMap("a free product needs at least one factor".into()))?;
        let descriptor = first.descriptor();
        let mut seen = HashMap::new();
        for (i, f) in factors.iter().enumerate() {
            f.descriptor().ensure_same(&descriptor)?;
            for n in f.alphabet().names() {
                if let Some(j) = seen.insert(n.clone(), i) {
                    return Err(Error::Parse(format!(
                        "symbol `{n}` appears in factors {} and {}",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        let alphabets = factors.iter().map(|f| f.alphabet().clone()).collect();
        Ok(FreeProductContext {
            name: name.to_string(),
            factors,
            alphabets,
            descriptor,
            cache: RwLock::new(FxHashMap::default()),
        })
    }

    pub fn factors(&self) -> &[Arc<dyn FactorLength>] {
        &self.factors
    }

    pub fn alphabets(&self) -> &[Alphabet] {
        &self.alphabets
    }

    fn data(&self, factor: usize, w: &Word) -> Result<SyllableData> {
        let key = (factor, w.clone());
        if let Some(d) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(d.clone());
        }
        let f = &self.factors[factor];
        let d = SyllableData {
            length: f.word_length(w)?,
            alpha: f.word_alpha(w)?,
            trivial: w.is_empty() || f.word_is_identity(w)?,
        };
        self.cache
            .write()
            .expect("cache lock")
            .insert(key, d.clone());
        Ok(d)
    }

    fn trivial(&self, factor: usize, w: &Word) -> bool {
        // Evaluation errors are surfaced when the syllable is measured.
        self.data(factor, w).map(|d| d.trivial).unwrap_or(false)
    }

    /// Merge syllables and drop those that are trivial in their factor.
    pub fn normalize(&self, w: &FpWord) -> FpWord {
        FpWord::normalize_with(w.syllables().to_vec(), |f, x| self.trivial(f, x))
    }

    pub fn parse(&self, s: &str) -> Result<FpWord> {
        Ok(self.normalize(&FpWord::parse(&self.alphabets, s)?))
    }

    pub fn display(&self, w: &FpWord) -> String {
        w.display(&self.alphabets).to_string()
    }

    pub fn syllable_length(&self, s: &Syllable) -> Result<OagElement> {
        Ok(self.data(s.factor, &s.word)?.length)
    }

    pub fn syllable_alpha(&self, s: &Syllable) -> Result<OagAutomorphism> {
        Ok(self.data(s.factor, &s.word)?.alpha)
    }

    pub fn fp_alpha(&self, w: &FpWord) -> Result<OagAutomorphism> {
        let mut acc = OagAutomorphism::identity(&self.descriptor);
        for s in w.syllables() {
            acc = acc.compose(&self.syllable_alpha(s)?)?;
        }
        Ok(acc)
    }

    fn same_element(&self, a: &Syllable, b: &Syllable) -> Result<bool> {
        if a.factor != b.factor {
            return Ok(false);
        }
        if a.word == b.word {
            return Ok(true);
        }
        Ok(self
            .data(a.factor, &a.word.inverse().concat(&b.word))?
            .trivial)
    }

    /// `c(u, v) = ½(L(u) + L(v) − α_u L(u⁻¹v))` inside one factor.
    fn factor_c(&self, factor: usize, u: &Word, v: &Word) -> Result<HalfElement> {
        let du = self.data(factor, u)?;
        let dv = self.data(factor, v)?;
        let q = self.data(factor, &u.inverse().concat(v))?;
        let t = du.alpha.apply(&q.length)?;
        Ok(HalfElement::half_of(
            du.length.try_add(&dv.length)?.try_sub(&t)?,
        ))
    }
}

/// `L(g) = Σ_k α_{ḡ_{k-1}} L(g_k)` over the syllables of a normalized word.
pub fn fp_length(ctx: &FreeProductContext, w: &FpWord) -> Result<OagElement> {
    let mut acc = OagAutomorphism::identity(&ctx.descriptor);
    let mut sum = OagElement::zero(&ctx.descriptor);
    for s in w.syllables() {
        let d = ctx.data(s.factor, &s.word)?;
        sum = sum.try_add(&acc.apply(&d.length)?)?;
        acc = acc.compose(&d.alpha)?;
    }
    Ok(sum)
}

/// `c(g,h) = L(ḡ_p) + α_{ḡ_p} c(g_{p+1}, h_{p+1})` where `p` is the
/// length of the longest common syllable prefix.
pub fn fp_ancillary_c(ctx: &FreeProductContext, g: &FpWord, h: &FpWord) -> Result<HalfElement> {
    let (gs, hs) = (g.syllables(), h.syllables());
    let mut p = 0;
    while p < gs.len() && p < hs.len() && ctx.same_element(&gs[p], &hs[p])? {
        p += 1;
    }
    let prefix = g.prefix(p);
    let base = HalfElement::from_element(&fp_length(ctx, &prefix)?);
    let tail = match (gs.get(p), hs.get(p)) {
        (Some(x), Some(y)) if x.factor == y.factor => ctx.factor_c(x.factor, &x.word, &y.word)?,
        _ => return Ok(base),
    };
    base.try_add(&tail.apply_aut(&ctx.fp_alpha(&prefix)?)?)
}

impl LengthFunction for FreeProductContext {
    type Elem = FpWord;

    fn descriptor(&self) -> OagDescriptor {
        self.descriptor.clone()
    }

    fn identity(&self) -> FpWord {
        FpWord::empty()
    }

    fn inverse(&self, g: &FpWord) -> Result<FpWord> {
        Ok(g.inverse())
    }

    fn multiply(&self, g: &FpWord, h: &FpWord) -> Result<FpWord> {
        Ok(g.concat_with(h, |f, x| self.trivial(f, x)))
    }

    fn length(&self, g: &FpWord) -> Result<OagElement> {
        fp_length(self, g)
    }

    fn alpha(&self, g: &FpWord) -> Result<OagAutomorphism> {
        self.fp_alpha(g)
    }

    fn is_identity(&self, g: &FpWord) -> Result<bool> {
        Ok(self.normalize(g).is_empty())
    }

    fn provenance(&self) -> Provenance {
        Provenance::FreeProduct
    }
}

/// Reduced words in all factor generators of length at most `radius`,
/// normalized; distinct entries may still be equal as elements when a
/// factor has relations.
pub fn fp_letter_ball(ctx: &FreeProductContext, radius: usize) -> Result<Vec<FpWord>> {
    let mut names = Vec::new();
    let mut origin = Vec::new();
    for (f, a) in ctx.alphabets.iter().enumerate() {
        for (i, n) in a.names().iter().enumerate() {
            names.push(n.clone());
            origin.push((f, i as u16));
        }
    }
    let all = Alphabet::new(&names)?;
    let words = enumerate_ball(&all, radius);
    Ok(words
        .iter()
        .map(|w| {
            let syl = w
                .letters()
                .iter()
                .map(|l| {
                    let (f, g) = origin[l.gen as usize];
                    Syllable {
                        factor: f,
                        word: Word::letter(Letter::new(g, l.inverse)),
                    }
                })
                .collect();
            ctx.normalize(&FpWord::normalize(syl))
        })
        .collect())
}

/// Ball of alternating words with at most `syllables` syllables, each
/// syllable a nonidentity element of its factor's ball of radius
/// `factor_radius` (one word per element).
pub fn fp_syllable_ball(
    ctx: &FreeProductContext,
    syllables: usize,
    factor_radius: usize,
) -> Result<Ball<FpWord>> {
    // Canonical syllable words per factor, deduplicated as elements.
    let mut reps: Vec<Vec<Word>> = Vec::new();
    let mut inv_of: Vec<Vec<usize>> = Vec::new();
    for (f, a) in ctx.alphabets.iter().enumerate() {
        let mut kept: Vec<Word> = Vec::new();
        for w in enumerate_ball(a, factor_radius) {
            if ctx.data(f, &w)?.trivial {
                continue;
            }
            let mut dup = false;
            for k in &kept {
                if ctx.data(f, &k.inverse().concat(&w))?.trivial {
                    dup = true;
                    break;
                }
            }
            if !dup {
                kept.push(w);
            }
        }
        let mut inv = Vec::with_capacity(kept.len());
        for w in &kept {
            let wi = w.inverse();
            let mut found = None;
            for (j, k) in kept.iter().enumerate() {
                if ctx.data(f, &k.inverse().concat(&wi))?.trivial {
                    found = Some(j);
                    break;
                }
            }
            inv.push(
                found.ok_or_else(|| {
                    Error::Internal("factor ball not closed under inverses".into())
                })?,
            );
        }
        reps.push(kept);
        inv_of.push(inv);
    }
    // Words as sequences of (factor, rep index), by syllable count.
    let mut keys: Vec<Vec<(usize, usize)>> = vec![vec![]];
    let mut layer: Vec<Vec<(usize, usize)>> = vec![vec![]];
    for _ in 0..syllables {
        let mut next = Vec::new();
        for k in &layer {
            for (f, rs) in reps.iter().enumerate() {
                if k.last().map(|l| l.0) == Some(f) {
                    continue;
                }
                for r in 0..rs.len() {
                    let mut n = k.clone();
                    n.push((f, r));
                    next.push(n);
                }
            }
        }
        keys.extend(next.iter().cloned());
        layer = next;
    }
    let index: FxHashMap<&Vec<(usize, usize)>, usize> =
        keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let elems: Vec<FpWord> = keys
        .iter()
        .map(|k| {
            FpWord::normalize(
                k.iter()
                    .map(|&(f, r)| Syllable {
                        factor: f,
                        word: reps[f][r].clone(),
                    })
                    .collect(),
            )
        })
        .collect();
    let inverse = keys
        .iter()
        .map(|k| {
            let ik: Vec<(usize, usize)> = k.iter().rev().map(|&(f, r)| (f, inv_of[f][r])).collect();
            index[&ik]
        })
        .collect();
    let parts = keys
        .iter()
        .map(|k| {
            if k.len() < 2 {
                return vec![];
            }
            k.iter().map(|p| index[&vec![*p]]).collect()
        })
        .collect();
    let labels = elems.iter().map(|w| ctx.display(w)).collect();
    Ok(Ball {
        elems,
        labels,
        inverse,
        identity: 0,
        parts,
    })
}

/// Verdict for one ball word.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct WordVerdict {
    pub word: String,
    pub syllables: usize,
    /// Syllables after cyclic reduction.
    pub reduced_syllables: usize,
    pub free: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<FreenessFailure>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct FreenessFailure {
    /// 1-based syllable of the cyclically reduced word, when one is at fault.
    pub syllable: Option<usize>,
    pub reason: String,
}

/// Bounded freeness evidence: "free up to radius r".
#[derive(Debug, Clone, Serialize)]
pub struct FreenessReport {
    pub context: String,
    pub radius: usize,
    pub words: usize,
    pub skipped: usize,
    pub single_syllable: usize,
    pub multi_syllable: usize,
    pub free: bool,
    pub failures: Vec<WordVerdict>,
    pub verdicts: Vec<WordVerdict>,
}

impl FreenessReport {
    pub fn summary(&self) -> String {
        format!("free: {} (radius {})", self.free, self.radius)
    }
}

/// Check every nonidentity word of letter length at most `radius`.
pub fn certify_free(ctx: &FreeProductContext, radius: usize) -> Result<FreenessReport> {
    let words = fp_letter_ball(ctx, radius)?;
    let total = words.len();
    let results: Vec<Option<WordVerdict>> = words
        .par_iter()
        .map(|w| word_verdict(ctx, w))
        .collect::<Result<_>>()?;
    let mut verdicts = Vec::new();
    let mut skipped = 0;
    for r in results {
        match r {
            None => skipped += 1,
            Some(v) => verdicts.push(v),
        }
    }
    let failures: Vec<WordVerdict> = verdicts.iter().filter(|v| !v.free).cloned().collect();
    Ok(FreenessReport {
        context: ctx.name.clone(),
        radius,
        words: total,
        skipped,
        single_syllable: verdicts.iter().filter(|v| v.reduced_syllables == 1).count(),
        multi_syllable: verdicts.iter().filter(|v| v.reduced_syllables > 1).count(),
        free: failures.is_empty(),
        failures,
        verdicts,
    })
}

fn word_verdict(ctx: &FreeProductContext, w: &FpWord) -> Result<Option<WordVerdict>> {
    if w.is_empty() {
        return Ok(None);
    }
    let cr = cyclic_reduce_with(w, |f, x| ctx.trivial(f, x));
    let g = &cr.reduced;
    let mut v = WordVerdict {
        word: ctx.display(w),
        syllables: w.len(),
        reduced_syllables: g.len(),
        free: true,
        b: None,
        failure: None,
    };
    let fail = |v: &mut WordVerdict, syllable: Option<usize>, reason: String| {
        v.free = false;
        v.failure = Some(FreenessFailure { syllable, reason });
    };
    if g.len() == 1 {
        let s = &g.syllables()[0];
        match ctx.factors[s.factor].word_fixed_point_free(&s.word)? {
            Some(true) => {}
            Some(false) => fail(&mut v, Some(1), "factor element has a fixed point".into()),
            None => fail(
                &mut v,
                Some(1),
                "factor provides no freeness evidence".into(),
            ),
        }
        return Ok(Some(v));
    }
    for (i, s) in g.syllables().iter().enumerate() {
        if ctx.syllable_length(s)?.is_zero() {
            fail(&mut v, Some(i + 1), format!("L of syllable {} is 0", i + 1));
            return Ok(Some(v));
        }
    }
    let l = fp_length(ctx, g)?;
    let g2 = ctx.multiply(g, g)?;
    let expect = l.try_add(&ctx.fp_alpha(g)?.apply(&l)?)?;
    if fp_length(ctx, &g2)? != expect {
        fail(&mut v, None, "L(g²) ≠ L(g) + α_g L(g)".into());
        return Ok(Some(v));
    }
    let b_red = ancillary_b(ctx, g)?;
    if b_red != HalfElement::from_element(&l) {
        fail(
            &mut v,
            None,
            format!("b = {b_red} differs from L = {l} on the reduced word"),
        );
        return Ok(Some(v));
    }
    let b = ancillary_b(ctx, w)?;
    v.b = Some(b.to_string());
    if !b.is_positive() {
        fail(&mut v, None, format!("b = {b} is not positive"));
    }
    Ok(Some(v))
}

/// `u` with `L(u) = c(g,h)`, `g = ug'`, `h = uh'`, `L(g) = L(u) + α_u L(g')`
/// and `L(h) = L(u) + α_u L(h')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regularity<E> {
    Witness { u: usize, g1: E, h1: E },
    NotFound,
}

/// Search the candidates for a regularity witness of `(g, h)`.
/// `NotFound` only means none exists among the candidates.
pub fn is_regular_pair<L: LengthFunction>(
    lf: &L,
    g: &L::Elem,
    h: &L::Elem,
    candidates: &Ball<L::Elem>,
) -> Result<Regularity<L::Elem>> {
    let c = crate::lyndon::ancillary_c(lf, g, h)?;
    let Some(c) = c.to_element() else {
        return Ok(Regularity::NotFound);
    };
    let (lg, lh) = (lf.length(g)?, lf.length(h)?);
    for (i, u) in candidates.elems.iter().enumerate() {
        let lu = lf.length(u)?;
        if lu != c {
            continue;
        }
        let ui = lf.inverse(u)?;
        let g1 = lf.multiply(&ui, g)?;
        let h1 = lf.multiply(&ui, h)?;
        let au = lf.alpha(u)?;
        if lg == lu.try_add(&au.apply(&lf.length(&g1)?)?)?
            && lh == lu.try_add(&au.apply(&lf.length(&h1)?)?)?
        {
            // Re-verify the factorizations.
            let back_g = lf.multiply(u, &g1)?;
            let back_h = lf.multiply(u, &h1)?;
            let ok = lf.is_identity(&lf.multiply(&lf.inverse(g)?, &back_g)?)?
                && lf.is_identity(&lf.multiply(&lf.inverse(h)?, &back_h)?)?;
            if ok {
                return Ok(Regularity::Witness { u: i, g1, h1 });
            }
        }
    }
    Ok(Regularity::NotFound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::AffineMap;
    use crate::lyndon::{ancillary_c, verify_axioms, word_ball, ActionContext, PerturbedLength};
    use crate::trees::{TreePoint, TreeSpace};

    fn translation(name: &str) -> ActionContext {
        let d = OagDescriptor::int_lex(1);
        ActionContext::new(
            name,
            Alphabet::new(&[name]).unwrap(),
            TreeSpace::linear(d.clone()),
            TreePoint::Linear(OagElement::zero(&d)),
            vec![AffineMap::translation(OagElement::int_lex(&[1]))],
            None,
        )
        .unwrap()
    }

    fn z_star_z() -> FreeProductContext {
        FreeProductContext::new(
            "z*z",
            vec![Arc::new(translation("a")), Arc::new(translation("b"))],
        )
        .unwrap()
    }

    fn z(n: i64) -> OagElement {
        OagElement::int_lex(&[n])
    }

    #[test]
    fn test_fp_length_examples() {
        let ctx = z_star_z();
        assert_eq!(
            fp_length(&ctx, &ctx.parse("1:a | 2:b").unwrap()).unwrap(),
            z(2)
        );
        assert_eq!(fp_length(&ctx, &ctx.parse("1:a^3").unwrap()).unwrap(), z(3));
        assert_eq!(fp_length(&ctx, &FpWord::empty()).unwrap(), z(0));
    }

    #[test]
    fn test_fp_c_paths_agree() {
        let ctx = z_star_z();
        let g = ctx.parse("1:a | 2:b").unwrap();
        let h = ctx.parse("1:a | 2:b^-1").unwrap();
        let fast = fp_ancillary_c(&ctx, &g, &h).unwrap();
        assert_eq!(fast, ancillary_c(&ctx, &g, &h).unwrap());
        assert_eq!(fast, HalfElement::from_element(&z(1)));
        let k = ctx.parse("2:b").unwrap();
        assert!(fp_ancillary_c(&ctx, &g, &k).unwrap().is_zero());
        assert_eq!(
            fp_ancillary_c(&ctx, &g, &g).unwrap(),
            HalfElement::from_element(&z(2))
        );
        let ball = fp_syllable_ball(&ctx, 3, 2).unwrap();
        assert_eq!(ball.len(), 169);
        for x in ball.elems.iter().step_by(7) {
            for y in ball.elems.iter().step_by(5) {
                assert_eq!(
                    fp_ancillary_c(&ctx, x, y).unwrap(),
                    ancillary_c(&ctx, x, y).unwrap()
                );
            }
        }
    }

    #[test]
    fn test_fp_axioms_small() {
        let ctx = z_star_z();
        let ball = fp_syllable_ball(&ctx, 2, 2).unwrap();
        let rep = verify_axioms(&ctx, "z*z", &ball).unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn test_certify_free() {
        let ctx = z_star_z();
        let rep = certify_free(&ctx, 4).unwrap();
        assert!(rep.free, "{:?}", rep.failures);
        assert_eq!(rep.skipped, 1);
        assert_eq!(rep.summary(), "free: true (radius 4)");

        let a = translation("a");
        let w = a.parse("a").unwrap();
        let bad = PerturbedLength::new(a, vec![(w, z(0))]).unwrap();
        let ctx = FreeProductContext::new("bad", vec![Arc::new(bad), Arc::new(translation("b"))])
            .unwrap();
        let rep = certify_free(&ctx, 2).unwrap();
        assert!(!rep.free);
        let f = rep.failures.iter().find(|v| v.word == "1:a").unwrap();
        assert_eq!(f.failure.as_ref().unwrap().syllable, Some(1));
        assert!(rep.failures.iter().any(|v| v.word == "1:a | 2:b"));
    }

    #[test]
    fn test_single_factor_reduces_to_factor() {
        let ctx = FreeProductContext::new("z", vec![Arc::new(translation("a"))]).unwrap();
        let rep = certify_free(&ctx, 3).unwrap();
        assert!(rep.free);
        assert_eq!(rep.multi_syllable, 0);
    }

    #[test]
    fn test_regular_pairs() {
        let t = translation("a");
        let (ball, words) = word_ball(&t, 6).unwrap();
        let find = |s: &str| {
            words
                .iter()
                .position(|w| *w == t.parse(s).unwrap())
                .unwrap()
        };
        let (g, h) = (&ball.elems[find("a^3")], &ball.elems[find("a^5")]);
        match is_regular_pair(&t, g, h, &ball).unwrap() {
            Regularity::Witness { u, .. } => assert_eq!(ball.labels[u], "a^3"),
            Regularity::NotFound => panic!("expected a witness"),
        }
        match is_regular_pair(&t, g, g, &ball).unwrap() {
            Regularity::Witness { u, g1, h1 } => {
                assert_eq!(ball.labels[u], "a^3");
                assert!(g1.is_identity() && h1.is_identity());
            }
            Regularity::NotFound => panic!("expected a witness"),
        }
        let (small, _) = word_ball(&t, 2).unwrap();
        assert_eq!(
            is_regular_pair(&t, g, h, &small).unwrap(),
            Regularity::NotFound
        );
    }
}
