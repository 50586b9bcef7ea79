//! Canonical actions and counterexamples, each a one-call builder, with a
//! name registry for the CLI.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::affine::AffineMap;
use crate::combinators::FreeProductContext;
use crate::error::{Error, Result};
use crate::lyndon::{
    ActionContext, BaseChanged, Check, LengthFunction, OrderHom, Provenance, Witness, WordLength,
};
use crate::oag::{LinearHom, OagAutomorphism, OagDescriptor, OagElement, Sign};
use crate::trees::{TreePoint, TreeSpace};
use crate::words::{Alphabet, Word};

fn z3(x: i64, y: i64, z: i64) -> OagElement {
    OagElement::int_lex(&[x, y, z])
}

fn nat3(rows: [[i64; 3]; 3]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| x.into()).collect())
        .collect()
}

fn context(
    name: &str,
    symbols: &[&str],
    space: TreeSpace,
    generators: Vec<AffineMap>,
) -> Result<ActionContext> {
    let origin = space.origin()?;
    let ctx = ActionContext::new(
        name,
        Alphabet::new(symbols)?,
        space,
        origin,
        generators,
        None,
    )?;
    let chk = check_relations(&ctx, &relations(&ctx))?;
    if !chk.passed() {
        return Err(Error::Internal(format!(
            "{name}: relation check failed: {:?}",
            chk.witnesses
        )));
    }
    Ok(ctx)
}

/// Every relation realizes the identity map.
pub fn check_relations(ctx: &ActionContext, relations: &[(String, Word)]) -> Result<Check> {
    let mut chk = Check::new("relations", "realize(r) = id");
    for (label, w) in relations {
        let m = ctx.realize(w)?;
        chk.record(m.is_identity(), || {
            Witness::new(&[label], format!("realizes {m}"))
        });
    }
    Ok(chk)
}

/// The documented relations of a built context, by name.
pub fn relations(ctx: &ActionContext) -> Vec<(String, Word)> {
    let parse = |r: &str| {
        ctx.parse(r)
            .expect("relation words use the context's symbols")
    };
    let plain = |rs: Vec<String>| rs.into_iter().map(|r| (r.clone(), parse(&r))).collect();
    match ctx.name.as_str() {
        "heisenberg" => {
            let (s, t) = (parse("s"), parse("t"));
            let c = Word::commutator(&s, &t);
            vec![
                ("[s,[s,t]]".into(), Word::commutator(&s, &c)),
                ("[t,[s,t]]".into(), Word::commutator(&t, &c)),
            ]
        }
        "wreath_laurent" => plain(wreath_relations(2)),
        "doubling" => plain(vec!["s t s^-1 t^-2".into()]),
        n => match n.strip_prefix("bs(").and_then(parse_bs_name) {
            Some((a, 1)) => plain(vec![format!("s t s^-1 t^-{a}")]),
            Some((1, a)) => plain(vec![format!("s^-1 t s t^-{a}")]),
            _ => vec![],
        },
    }
}

fn parse_bs_name(s: &str) -> Option<(i64, i64)> {
    let s = s.strip_suffix(')')?;
    match s.split_once('/') {
        Some((n, d)) => Some((n.parse().ok()?, d.parse().ok()?)),
        None => Some((s.parse().ok()?, 1)),
    }
}

/// `[σ^-k τ σ^k, σ^-k' τ σ^k']` for `0 <= k < k' <= range`.
fn wreath_relations(range: i64) -> Vec<String> {
    let conj = |k: i64, e: i64| format!("s^{} t^{e} s^{}", -k, k);
    let mut out = Vec::new();
    for k in 0..=range {
        for k2 in (k + 1)..=range {
            out.push(format!(
                "{} {} {} {}",
                conj(k, 1),
                conj(k2, 1),
                conj(k, -1),
                conj(k2, -1)
            ));
        }
    }
    out
}

/// Heisenberg group on Z³: `σ(x,y,z) = (x, y+1, z)`, `τ(x,y,z) = (x+1, y, z+y)`.
pub fn heisenberg() -> Result<ActionContext> {
    let d = OagDescriptor::int_lex(3);
    let sigma = AffineMap::translation(z3(0, 1, 0));
    let a_tau = OagAutomorphism::unipotent_natural(nat3([[1, 0, 0], [0, 1, 0], [0, 1, 1]]))?;
    let tau = AffineMap::linear(Sign::Plus, a_tau, z3(1, 0, 0))?;
    context(
        "heisenberg",
        &["s", "t"],
        TreeSpace::linear(d),
        vec![sigma, tau],
    )
}

/// `[σˡ, τᵏ]` is the translation by `(0, 0, -kl)` and equals `[σ,τ]^{kl}`,
/// for `k, l` in `-range..=range`.
pub fn heisenberg_commutator_law(ctx: &ActionContext, range: i64) -> Result<Check> {
    let s = ctx.parse("s")?;
    let t = ctx.parse("t")?;
    let base = ctx.realize(&Word::commutator(&s, &t))?;
    let mut chk = Check::new("commutator", "[σˡ,τᵏ] = (x, y, z - kl) = [σ,τ]^{kl}");
    for k in -range..=range {
        for l in -range..=range {
            let w = Word::commutator(&s.pow(l), &t.pow(k));
            let m = ctx.realize(&w)?;
            let expect = AffineMap::translation(z3(0, 0, -k * l));
            let ok = m == expect && m == base.pow(k * l)?;
            let label = format!("k={k} l={l}");
            chk.record(ok, || Witness::new(&[&label], format!("realizes {m}")));
        }
    }
    Ok(chk)
}

/// `BS(1, num/den)`-type action on `Z × Z[1/(num·den)]`:
/// `σ(x,y) = (x+1, (num/den) y)`, `τ(x,y) = (x, y+1)`.
pub fn bs_rational(num: i64, den: i64) -> Result<ActionContext> {
    if num <= 0 || den <= 0 || num == den {
        return Err(Error::InvalidMap(format!(
            "need a positive ratio other than 1, got {num}/{den}"
        )));
    }
    let g = num_integer::gcd(num, den);
    let (num, den) = (num / g, den / g);
    let base = (num * den) as u64;
    let right = OagDescriptor::localized(base);
    let d = OagDescriptor::lex_pair(OagDescriptor::int_lex(1), right.clone());
    let a_sigma = OagAutomorphism::triangular(
        OagAutomorphism::identity(&OagDescriptor::int_lex(1)),
        OagAutomorphism::scale_i64(base, num, den)?,
        LinearHom::Zero,
    )?;
    let sigma = AffineMap::linear(
        Sign::Plus,
        a_sigma,
        OagElement::pair(OagElement::int_lex(&[1]), OagElement::zero(&right)),
    )?;
    let tau = AffineMap::translation(OagElement::pair(
        OagElement::int_lex(&[0]),
        OagElement::localized(base, 1, 1)?,
    ));
    let name = if den == 1 {
        format!("bs({num})")
    } else {
        format!("bs({num}/{den})")
    };
    context(&name, &["s", "t"], TreeSpace::linear(d), vec![sigma, tau])
}

/// Soluble Baumslag–Solitar action with `σ` dilating by `a ≥ 2`.
pub fn bs(a: i64) -> Result<ActionContext> {
    if a < 2 {
        return Err(Error::InvalidMap(format!("bs needs a >= 2, got {a}")));
    }
    bs_rational(a, 1)
}

/// As [`bs`] with `σ` dilating by `1/a` (τ replaced by its inverse role).
pub fn bs_inverse(a: i64) -> Result<ActionContext> {
    if a < 2 {
        return Err(Error::InvalidMap(format!(
            "bs_inverse needs a >= 2, got {a}"
        )));
    }
    bs_rational(1, a)
}

/// `w_p = τ^{l₀} (σ τ^{l₁} σ⁻¹) ⋯ (σⁿ τ^{lₙ} σ⁻ⁿ)` for `p = Σ l_k x^k`.
pub fn polynomial_word(ctx: &ActionContext, coeffs: &[i64]) -> Result<Word> {
    let s = ctx.parse("s")?;
    let t = ctx.parse("t")?;
    let mut w = Word::empty();
    for (k, &l) in coeffs.iter().enumerate() {
        let sk = s.pow(k as i64);
        w = w.concat(&sk.concat(&t.pow(l)).concat(&sk.inverse()));
    }
    Ok(w)
}

/// Whether `w_p` realizes the identity; on the rational family this holds
/// exactly when `p(a) = 0`.
pub fn check_polynomial_relation(ctx: &ActionContext, coeffs: &[i64]) -> Result<bool> {
    Ok(ctx.realize(&polynomial_word(ctx, coeffs)?)?.is_identity())
}

/// `C∞ ≀ C∞` acting on `Z × Z[t, t⁻¹]`: `σ(x,y) = (x+1, t y)`, `τ(x,y) = (x, y+1)`.
pub fn wreath_laurent() -> Result<ActionContext> {
    let lau = OagDescriptor::laurent();
    let d = OagDescriptor::lex_pair(OagDescriptor::int_lex(1), lau.clone());
    let a_sigma = OagAutomorphism::triangular(
        OagAutomorphism::identity(&OagDescriptor::int_lex(1)),
        OagAutomorphism::shift(1),
        LinearHom::Zero,
    )?;
    let sigma = AffineMap::linear(
        Sign::Plus,
        a_sigma,
        OagElement::pair(OagElement::int_lex(&[1]), OagElement::zero(&lau)),
    )?;
    let tau = AffineMap::translation(OagElement::pair(
        OagElement::int_lex(&[0]),
        OagElement::laurent(&[(0, 1)]),
    ));
    context(
        "wreath_laurent",
        &["s", "t"],
        TreeSpace::linear(d),
        vec![sigma, tau],
    )
}

/// `ℤ` acting on itself by `x ↦ x + 1`.
pub fn translation_z() -> Result<ActionContext> {
    let d = OagDescriptor::int_lex(1);
    context(
        "translation_z",
        &["a"],
        TreeSpace::linear(d),
        vec![AffineMap::translation(OagElement::int_lex(&[1]))],
    )
}

/// `⟨t: x ↦ x+1, s: x ↦ 2x⟩` on `Z[1/2]`.
pub fn doubling() -> Result<ActionContext> {
    let d = OagDescriptor::localized(2);
    let t = AffineMap::translation(OagElement::localized(2, 1, 1)?);
    let s = AffineMap::linear(
        Sign::Plus,
        OagAutomorphism::scale_i64(2, 2, 1)?,
        OagElement::zero(&d),
    )?;
    context("doubling", &["t", "s"], TreeSpace::linear(d), vec![t, s])
}

/// `⟨g: x ↦ x/3 + 1, t: x ↦ x + 1⟩` on `Z[1/base]`, `3 | base`.
pub fn third_plus_one_context(base: u64) -> Result<ActionContext> {
    let d = OagDescriptor::localized(base);
    let g = third_plus_one(&d)?;
    let t = AffineMap::translation(OagElement::localized(base, 1, 1)?);
    context(
        &format!("third_plus_one({base})"),
        &["g", "t"],
        TreeSpace::linear(d),
        vec![g, t],
    )
}

fn localized_base(d: &OagDescriptor) -> Result<u64> {
    match d {
        OagDescriptor::Localized { base } => Ok(*base),
        _ => Err(Error::DescriptorMismatch {
            left: d.to_string(),
            right: "Z[1/n]".into(),
        }),
    }
}

/// `x ↦ x/3 + 1`.
pub fn third_plus_one(d: &OagDescriptor) -> Result<AffineMap> {
    let base = localized_base(d)?;
    AffineMap::linear(
        Sign::Plus,
        OagAutomorphism::scale_i64(base, 1, 3)?,
        OagElement::localized(base, 1, 1)?,
    )
}

/// `x ↦ 2 - x/2`, over `Z[1/base]` with `2 | base`.
pub fn nesting_map(d: &OagDescriptor) -> Result<AffineMap> {
    let base = localized_base(d)?;
    AffineMap::linear(
        Sign::Minus,
        OagAutomorphism::scale_i64(base, 1, 2)?,
        OagElement::localized(base, 2, 1)?,
    )
}

/// `(x,y,z) ↦ (x, y, z + y + x)` on Z³: its fixed set `x + y = 0` is not
/// a subtree.
pub fn non_subtree() -> Result<AffineMap> {
    let a = OagAutomorphism::unipotent_natural(nat3([[1, 0, 0], [0, 1, 0], [1, 1, 1]]))?;
    AffineMap::linear(Sign::Plus, a, OagElement::zero(&OagDescriptor::int_lex(3)))
}

/// Three rays glued at the origin; `g` swaps rays 1 and 2, keeps ray 3 and
/// scales distances by `a = num/den` with `0 < a < 1`. Coordinates lie in
/// `Z[1/(num·den)]` so that both `a` and `a⁻¹` act.
pub fn mixed_star(num: i64, den: i64) -> Result<(TreeSpace, AffineMap)> {
    if num <= 0 || den <= num {
        return Err(Error::InvalidMap(format!(
            "need 0 < a < 1, got {num}/{den}"
        )));
    }
    let g = num_integer::gcd(num, den);
    let (num, den) = (num / g, den / g);
    let base = if num == 1 {
        den as u64
    } else {
        (num * den) as u64
    };
    let d = OagDescriptor::localized(base);
    let space = TreeSpace::star(d, 3)?;
    let map = AffineMap::star(
        3,
        vec![2, 1, 3],
        OagAutomorphism::scale_i64(base, num, den)?,
    )?;
    Ok((space, map))
}

// The free group with a shift.

/// Element `w · τ^e` of `⟨F(a_k : k ∈ Z), τ | τ⁻¹ a_k τ = a_{k-1}⟩`, with `w`
/// freely reduced, letters `(k, inverse)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ShiftElem {
    pub letters: Vec<(i64, bool)>,
    pub e: i64,
}

/// The Cayley graph of `F(a_k)` with `a_k`-edges of length `2^k`, and
/// `τ` shifting indices up by one; basepoint the identity vertex.
#[derive(Debug, Clone)]
pub struct FreeShiftLength {
    pub n_range: i64,
    alphabet: Alphabet,
}

impl FreeShiftLength {
    pub fn new(n_range: i64) -> Result<Self> {
        if !(0..=30).contains(&n_range) {
            return Err(Error::OutOfRange(format!("n_range {n_range} (0..=30)")));
        }
        let mut names: Vec<String> = (-n_range..=n_range).map(|k| format!("a{k}")).collect();
        names.push("t".into());
        Ok(FreeShiftLength {
            n_range,
            alphabet: Alphabet::new(&names)?,
        })
    }

    fn reduce_into(out: &mut Vec<(i64, bool)>, l: (i64, bool)) {
        match out.last() {
            Some(&(k, inv)) if k == l.0 && inv != l.1 => {
                out.pop();
            }
            _ => out.push(l),
        }
    }

    /// The generator `a_k`; `|k|` must not exceed `n_range`.
    pub fn a(&self, k: i64) -> Result<ShiftElem> {
        if k.abs() > self.n_range {
            return Err(Error::OutOfRange(format!(
                "a{k} lies outside |k| <= {}",
                self.n_range
            )));
        }
        Ok(ShiftElem {
            letters: vec![(k, false)],
            e: 0,
        })
    }

    pub fn tau(&self) -> ShiftElem {
        ShiftElem {
            letters: vec![],
            e: 1,
        }
    }

    /// `τ^e a_k τ^-e = a_{k+e}`, rejected when the index leaves the range.
    pub fn conjugate_generator(&self, k: i64, e: i64) -> Result<ShiftElem> {
        self.a(k)?;
        self.a(k + e)
    }
}

impl LengthFunction for FreeShiftLength {
    type Elem = ShiftElem;

    fn descriptor(&self) -> OagDescriptor {
        OagDescriptor::localized(2)
    }

    fn identity(&self) -> ShiftElem {
        ShiftElem::default()
    }

    fn inverse(&self, g: &ShiftElem) -> Result<ShiftElem> {
        Ok(ShiftElem {
            letters: g
                .letters
                .iter()
                .rev()
                .map(|&(k, inv)| (k - g.e, !inv))
                .collect(),
            e: -g.e,
        })
    }

    fn multiply(&self, g: &ShiftElem, h: &ShiftElem) -> Result<ShiftElem> {
        let mut letters = g.letters.clone();
        for &(k, inv) in &h.letters {
            Self::reduce_into(&mut letters, (k + g.e, inv));
        }
        Ok(ShiftElem {
            letters,
            e: g.e + h.e,
        })
    }

    fn length(&self, g: &ShiftElem) -> Result<OagElement> {
        let lo = g.letters.iter().map(|l| l.0).min().unwrap_or(0).min(0);
        let mut num = BigInt::from(0);
        for &(k, _) in &g.letters {
            num += BigInt::from(1) << ((k - lo) as usize);
        }
        OagElement::localized_value(
            2,
            BigRational::new(num, BigInt::from(1) << ((-lo) as usize)),
        )
    }

    fn alpha(&self, g: &ShiftElem) -> Result<OagAutomorphism> {
        let f = if g.e >= 0 {
            BigRational::from_integer(BigInt::from(1) << (g.e as usize))
        } else {
            BigRational::new(1.into(), BigInt::from(1) << ((-g.e) as usize))
        };
        OagAutomorphism::scale(2, f)
    }

    fn is_identity(&self, g: &ShiftElem) -> Result<bool> {
        Ok(g.letters.is_empty() && g.e == 0)
    }

    fn provenance(&self) -> Provenance {
        Provenance::UserTable
    }
}

impl WordLength for FreeShiftLength {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn element(&self, w: &Word) -> Result<ShiftElem> {
        let t = self.alphabet.len() as u16 - 1;
        let mut acc = ShiftElem::default();
        for l in w.letters() {
            let g = if l.gen == t {
                self.tau()
            } else {
                self.a(l.gen as i64 - self.n_range)?
            };
            let g = if l.inverse { self.inverse(&g)? } else { g };
            acc = self.multiply(&acc, &g)?;
        }
        Ok(acc)
    }

    fn fixed_point_free(&self, w: &Word) -> Result<Option<bool>> {
        let g = self.element(w)?;
        // τ-free elements act freely on the Cayley graph; τ fixes the basepoint.
        if g.e == 0 {
            Ok(Some(!g.letters.is_empty()))
        } else if g.letters.is_empty() {
            Ok(Some(false))
        } else {
            Ok(None)
        }
    }
}

/// `τ⁻¹ a_k τ = a_{k-1}` for every in-range pair.
pub fn free_shift_relations(fs: &FreeShiftLength) -> Result<Check> {
    let mut chk = Check::new("relations", "τ⁻¹ a_k τ = a_{k-1}");
    for k in (-fs.n_range + 1)..=fs.n_range {
        let w = fs.alphabet.parse(&format!("t^-1 a{k} t a{}^-1", k - 1))?;
        let g = fs.element(&w)?;
        let label = format!("k={k}");
        chk.record(fs.is_identity(&g)?, || {
            Witness::new(&[&label], format!("{g:?}"))
        });
    }
    Ok(chk)
}

pub fn free_shift(n_range: i64) -> Result<FreeShiftLength> {
    let fs = FreeShiftLength::new(n_range)?;
    let chk = free_shift_relations(&fs)?;
    if !chk.passed() {
        return Err(Error::Internal("free_shift relation check failed".into()));
    }
    Ok(fs)
}

// Free products.

/// `Z ∗ Z`, both factors translating Z by 1.
pub fn z_star_z() -> Result<FreeProductContext> {
    let a = translation_named("a")?;
    let b = translation_named("b")?;
    FreeProductContext::new("z_star_z", vec![Arc::new(a), Arc::new(b)])
}

fn translation_named(sym: &str) -> Result<ActionContext> {
    let d = OagDescriptor::int_lex(1);
    let space = TreeSpace::linear(d.clone());
    ActionContext::new(
        &format!("translation_{sym}"),
        Alphabet::new(&[sym])?,
        space,
        TreePoint::Linear(OagElement::zero(&d)),
        vec![AffineMap::translation(OagElement::int_lex(&[1]))],
        None,
    )
}

/// Heisenberg ∗ Z over `Z³ × Z`: the Heisenberg lengths go into the
/// dominant factor, the Z factor into the other.
pub fn heisenberg_star_z() -> Result<FreeProductContext> {
    let h = BaseChanged::extended(
        heisenberg()?,
        OrderHom::IntoLeft {
            right: OagDescriptor::int_lex(1),
        },
    )?;
    let z = BaseChanged::extended(
        translation_named("a")?,
        OrderHom::IntoRight {
            left: OagDescriptor::int_lex(3),
        },
    )?;
    FreeProductContext::new("heisenberg_star_z", vec![Arc::new(h), Arc::new(z)])
}

// Registry.

#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

#[derive(Debug, Clone, Copy)]
pub struct ExampleSpec {
    pub name: &'static str,
    pub kind: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
}

const A_INT: ParamSpec = ParamSpec {
    name: "a",
    default: "2",
    help: "integer dilation a >= 2",
};

pub const EXAMPLES: &[ExampleSpec] = &[
    ExampleSpec {
        name: "heisenberg",
        kind: "action",
        summary: "Heisenberg group acting freely and rigidly on Z^3",
        params: &[],
    },
    ExampleSpec {
        name: "bs",
        kind: "action",
        summary: "BS(1,a) acting on Z x Z[1/a], s(x,y) = (x+1, a y)",
        params: &[A_INT],
    },
    ExampleSpec {
        name: "bs_inverse",
        kind: "action",
        summary: "BS(1,a) with s dilating by 1/a",
        params: &[A_INT],
    },
    ExampleSpec {
        name: "wreath_laurent",
        kind: "action",
        summary: "C_inf wr C_inf acting on Z x Z[t,1/t]",
        params: &[],
    },
    ExampleSpec {
        name: "translation_z",
        kind: "action",
        summary: "Z acting on itself by x -> x + 1",
        params: &[],
    },
    ExampleSpec {
        name: "doubling",
        kind: "action",
        summary: "<t: x -> x+1, s: x -> 2x> on Z[1/2]",
        params: &[],
    },
    ExampleSpec {
        name: "third_plus_one",
        kind: "action",
        summary: "<g: x -> x/3 + 1, t: x -> x + 1> on Z[1/base]",
        params: &[ParamSpec {
            name: "base",
            default: "6",
            help: "localization base, a multiple of 3",
        }],
    },
    ExampleSpec {
        name: "free_shift",
        kind: "length-function",
        summary: "free group on a_k with shift t; a_k-edges of length 2^k",
        params: &[ParamSpec {
            name: "n",
            default: "3",
            help: "generators a_k with |k| <= n",
        }],
    },
    ExampleSpec {
        name: "mixed_star",
        kind: "map",
        summary: "three-ray star, rays 1 and 2 swapped, scaled by a",
        params: &[ParamSpec {
            name: "a",
            default: "1/2",
            help: "rational 0 < a < 1",
        }],
    },
    ExampleSpec {
        name: "nesting_map",
        kind: "map",
        summary: "x -> 2 - x/2 on Z[1/base]",
        params: &[ParamSpec {
            name: "base",
            default: "2",
            help: "localization base, even",
        }],
    },
    ExampleSpec {
        name: "non_subtree",
        kind: "map",
        summary: "(x,y,z) -> (x, y, z + y + x) on Z^3",
        params: &[],
    },
    ExampleSpec {
        name: "z_star_z",
        kind: "free-product",
        summary: "Z * Z, both factors translating Z",
        params: &[],
    },
    ExampleSpec {
        name: "heisenberg_star_z",
        kind: "free-product",
        summary: "Heisenberg * Z over Z^3 x Z",
        params: &[],
    },
];

/// A built example.
#[derive(Debug)]
pub enum Built {
    Action(ActionContext),
    FreeShift(FreeShiftLength),
    Map { space: TreeSpace, map: AffineMap },
    FreeProduct(FreeProductContext),
}

impl Built {
    pub fn to_value(&self) -> Value {
        match self {
            Built::Action(c) => c.to_value(),
            Built::FreeShift(f) => json!({
                "name": "free_shift",
                "kind": "length-function",
                "n": f.n_range,
                "generators": WordLength::alphabet(f).names(),
                "descriptor": f.descriptor(),
            }),
            Built::Map { space, map } => map.to_value(space),
            Built::FreeProduct(fp) => json!({
                "name": fp.name,
                "kind": "free-product",
                "descriptor": fp.descriptor(),
                "factors": fp.alphabets().iter().map(|a| a.names()).collect::<Vec<_>>(),
            }),
        }
    }
}

pub fn lookup(name: &str) -> Option<&'static ExampleSpec> {
    EXAMPLES.iter().find(|e| e.name == name)
}

fn param<'a>(
    spec: &ExampleSpec,
    params: &'a BTreeMap<String, String>,
    name: &str,
) -> Result<&'a str> {
    let p = spec
        .params
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::Internal(format!("no parameter {name}")))?;
    Ok(params.get(name).map(String::as_str).unwrap_or(p.default))
}

fn int_param(spec: &ExampleSpec, params: &BTreeMap<String, String>, name: &str) -> Result<i64> {
    let s = param(spec, params, name)?;
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("parameter {name} = `{s}` is not an integer")))
}

/// Build a registered example. Unknown parameters are rejected.
pub fn build(name: &str, params: &BTreeMap<String, String>) -> Result<Built> {
    let spec = lookup(name).ok_or_else(|| Error::Parse(format!("unknown example `{name}`")))?;
    for k in params.keys() {
        if !spec.params.iter().any(|p| p.name == k) {
            return Err(Error::Parse(format!(
                "example `{name}` has no parameter `{k}`"
            )));
        }
    }
    Ok(match name {
        "heisenberg" => Built::Action(heisenberg()?),
        "bs" => Built::Action(bs(int_param(spec, params, "a")?)?),
        "bs_inverse" => Built::Action(bs_inverse(int_param(spec, params, "a")?)?),
        "wreath_laurent" => Built::Action(wreath_laurent()?),
        "translation_z" => Built::Action(translation_z()?),
        "doubling" => Built::Action(doubling()?),
        "third_plus_one" => {
            let b = int_param(spec, params, "base")?;
            if b < 2 {
                return Err(Error::Parse(format!("base {b} must be >= 2")));
            }
            Built::Action(third_plus_one_context(b as u64)?)
        }
        "free_shift" => Built::FreeShift(free_shift(int_param(spec, params, "n")?)?),
        "mixed_star" => {
            let a = crate::oag::json::parse_rational_str(param(spec, params, "a")?)?;
            let num: i64 = a
                .numer()
                .try_into()
                .map_err(|_| Error::OutOfRange("a".into()))?;
            let den: i64 = a
                .denom()
                .try_into()
                .map_err(|_| Error::OutOfRange("a".into()))?;
            let (space, map) = mixed_star(num, den)?;
            Built::Map { space, map }
        }
        "nesting_map" => {
            let b = int_param(spec, params, "base")?;
            if b < 2 {
                return Err(Error::Parse(format!("base {b} must be >= 2")));
            }
            let d = OagDescriptor::localized(b as u64);
            Built::Map {
                space: TreeSpace::linear(d.clone()),
                map: nesting_map(&d)?,
            }
        }
        "non_subtree" => Built::Map {
            space: TreeSpace::linear(OagDescriptor::int_lex(3)),
            map: non_subtree()?,
        },
        "z_star_z" => Built::FreeProduct(z_star_z()?),
        "heisenberg_star_z" => Built::FreeProduct(heisenberg_star_z()?),
        _ => unreachable!("registry and builder disagree"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{Classification, FixedSet};

    fn lin(x: OagElement) -> TreePoint {
        TreePoint::Linear(x)
    }

    #[test]
    fn test_heisenberg_examples() {
        let h = heisenberg().unwrap();
        let s = h.generator("s").unwrap();
        let t = h.generator("t").unwrap();
        assert_eq!(s.apply(&lin(z3(0, 0, 0))).unwrap(), lin(z3(0, 1, 0)));
        assert_eq!(t.apply(&lin(z3(0, 1, 0))).unwrap(), lin(z3(1, 1, 1)));
        let c = h.realize(&h.parse("s t s^-1 t^-1").unwrap()).unwrap();
        assert_eq!(c, AffineMap::translation(z3(0, 0, -1)));
        assert!(heisenberg_commutator_law(&h, 3).unwrap().passed());
        assert_eq!(relations(&h).len(), 2);
        assert!(check_relations(&h, &relations(&h)).unwrap().passed());
    }

    #[test]
    fn test_bs_examples() {
        let b = bs(2).unwrap();
        let sts = b.realize(&b.parse("s t s^-1").unwrap()).unwrap();
        assert_eq!(sts, b.realize(&b.parse("t^2").unwrap()).unwrap());
        let l = b.length_of(&b.parse("t").unwrap()).unwrap();
        assert_eq!(
            l,
            OagElement::pair(
                OagElement::int_lex(&[0]),
                OagElement::localized(2, 1, 1).unwrap()
            )
        );
        assert!(check_relations(&b, &relations(&b)).unwrap().passed());
        let bi = bs_inverse(3).unwrap();
        assert!(check_relations(&bi, &relations(&bi)).unwrap().passed());
        // w_p for p(x) = x - 2 vanishes at a = 2 only.
        assert!(check_polynomial_relation(&b, &[-2, 1]).unwrap());
        assert!(!check_polynomial_relation(&b, &[-3, 1]).unwrap());
        let half = bs_rational(1, 2).unwrap();
        assert!(check_polynomial_relation(&half, &[1, -2]).unwrap());
        assert!(check_polynomial_relation(&half, &[-1, 2, 1, -2]).unwrap());
    }

    #[test]
    fn test_wreath_examples() {
        let w = wreath_laurent().unwrap();
        let m = w.realize(&w.parse("s^-1 t s").unwrap()).unwrap();
        let expect = AffineMap::translation(OagElement::pair(
            OagElement::int_lex(&[0]),
            OagElement::laurent(&[(-1, 1)]),
        ));
        assert_eq!(m, expect);
        // Only the zero polynomial gives the identity.
        assert!(!check_polynomial_relation(&w, &[-2, 1]).unwrap());
        assert!(check_polynomial_relation(&w, &[0, 0, 0]).unwrap());
    }

    #[test]
    fn test_free_shift_examples() {
        let fs = free_shift(3).unwrap();
        let len = |s: &str| fs.length_of(&fs.alphabet.parse(s).unwrap()).unwrap();
        assert_eq!(len("a0"), OagElement::localized(2, 1, 1).unwrap());
        assert_eq!(len("a1"), OagElement::localized(2, 2, 1).unwrap());
        assert_eq!(len("a-2"), OagElement::localized(2, 1, 4).unwrap());
        assert!(len("1").is_zero());
        let conj = fs
            .element(&fs.alphabet.parse("t a0 t^-1").unwrap())
            .unwrap();
        assert_eq!(conj, fs.a(1).unwrap());
        assert!(fs.conjugate_generator(3, 1).is_err());
        assert_eq!(fs.conjugate_generator(2, 1).unwrap(), fs.a(3).unwrap());
    }

    #[test]
    fn test_mixed_star_examples() {
        let (space, g) = mixed_star(1, 2).unwrap();
        let o = space.origin().unwrap();
        assert_eq!(g.apply(&o).unwrap(), o);
        let p = space
            .star_point(3, OagElement::localized(2, 4, 1).unwrap())
            .unwrap();
        assert_eq!(
            g.apply(&p).unwrap(),
            space
                .star_point(3, OagElement::localized(2, 2, 1).unwrap())
                .unwrap()
        );
        assert!(g.displacement_b(&space, &p).unwrap().is_positive());
        for ray in [1, 2] {
            let q = space
                .star_point(ray, OagElement::localized(2, 3, 4).unwrap())
                .unwrap();
            assert!(g.displacement_b(&space, &q).unwrap().is_negative());
        }
        assert!(g.displacement_b(&space, &o).unwrap().is_zero());
        assert!(matches!(
            g.classify().unwrap(),
            Classification::Elliptic { .. }
        ));
        assert_eq!(g.classify_restricted_to_ray(3).unwrap().tag(), "hyperbolic");
    }

    #[test]
    fn test_nesting_map() {
        let c = nesting_map(&OagDescriptor::localized(2))
            .unwrap()
            .classify()
            .unwrap();
        assert_eq!(c, Classification::NestingReflection);
        let d6 = OagDescriptor::localized(6);
        let g = nesting_map(&d6).unwrap();
        let four_thirds = OagElement::localized(6, 4, 3).unwrap();
        assert_eq!(
            g.classify().unwrap(),
            Classification::Elliptic {
                fixed: lin(four_thirds.clone())
            }
        );
        let g2 = g.compose(&g).unwrap();
        assert_eq!(
            g2.classify().unwrap(),
            Classification::Elliptic {
                fixed: lin(four_thirds)
            }
        );
    }

    #[test]
    fn test_non_subtree() {
        let g = non_subtree().unwrap();
        match g.fixed_points().unwrap() {
            FixedSet::Linear(s) => assert!(matches!(s, crate::oag::SolutionSet::Family(_))),
            other => panic!("{other:?}"),
        }
        let w = crate::affine::non_convex_fixed_set(g.as_linear().unwrap())
            .unwrap()
            .unwrap();
        let lg = g.as_linear().unwrap();
        assert_eq!(lg.apply(&w.p).unwrap(), w.p);
        assert_eq!(lg.apply(&w.q).unwrap(), w.q);
        assert_ne!(lg.apply(&w.m).unwrap(), w.m);
        assert!(w.p.try_le(&w.m).unwrap() && w.m.try_le(&w.q).unwrap());
    }

    #[test]
    fn test_registry_builds_everything() {
        let empty = BTreeMap::new();
        for e in EXAMPLES {
            let b = build(e.name, &empty).unwrap_or_else(|err| panic!("{}: {err}", e.name));
            assert!(b.to_value().is_object());
        }
        let mut p = BTreeMap::new();
        p.insert("zzz".to_string(), "1".to_string());
        assert!(build("heisenberg", &p).is_err());
        assert!(build("nope", &empty).is_err());
        let mut p = BTreeMap::new();
        p.insert("a".to_string(), "1".to_string());
        assert!(build("bs", &p).is_err());
    }
}
