//! Round-trip properties shared by the fuzz targets and the seed replay test.
//! Each function takes arbitrary text; parse errors are fine, panics and
//! round-trip mismatches are not.

use affine_trees::affine::AffineMap;
use affine_trees::lyndon::ActionSpec;
use affine_trees::oag::json::{aut_from_json, aut_to_json, element_from_json, element_to_json};
use affine_trees::oag::OagDescriptor;
use affine_trees::trees::OrbitSpace;
use affine_trees::words::{Alphabet, FpWord, Word};

fn alphabet() -> Alphabet {
    Alphabet::new(&["s", "t", "a1", "a-1"]).expect("valid names")
}

pub fn word(s: &str) {
    let a = alphabet();
    let Ok(w) = Word::parse(&a, s) else { return };
    let shown = w.display(&a).to_string();
    let back = Word::parse(&a, &shown).expect("displayed word parses");
    assert_eq!(w, back, "{shown}");
    assert_eq!(w.inverse().inverse(), w);
    assert!(w.concat(&w.inverse()).is_empty());
}

pub fn fp_word(s: &str) {
    let abs = [
        Alphabet::new(&["a"]).expect("valid"),
        Alphabet::new(&["s", "t"]).expect("valid"),
    ];
    let Ok(w) = FpWord::parse(&abs, s) else {
        return;
    };
    let shown = w.display(&abs).to_string();
    let back = FpWord::parse(&abs, &shown).expect("displayed word parses");
    assert_eq!(w, back, "{shown}");
}

pub fn descriptor(s: &str) {
    let Ok(d) = OagDescriptor::from_json(s) else {
        return;
    };
    let j = d.to_json();
    assert_eq!(OagDescriptor::from_json(&j).expect("reparse"), d);
}

pub fn element(s: &str) {
    let Ok(x) = element_from_json(s) else { return };
    let j = element_to_json(&x);
    let y = element_from_json(&j).expect("reparse");
    assert_eq!(x, y);
    assert!(x.try_sub(&y).expect("same group").is_zero());
    assert_eq!(x.neg().neg(), x);
}

pub fn automorphism(s: &str) {
    let Ok(a) = aut_from_json(s) else { return };
    let j = aut_to_json(&a);
    assert_eq!(aut_to_json(&aut_from_json(&j).expect("reparse")), j);
}

pub fn affine_map(s: &str) {
    let Ok((space, g)) = AffineMap::from_json(s) else {
        return;
    };
    let j = g.to_value(&space).to_string();
    let (_, h) = AffineMap::from_json(&j).expect("reparse");
    assert_eq!(h.to_value(&space).to_string(), j);
    if let Ok(inv) = g.inverse() {
        assert!(g.compose(&inv).expect("same space").is_identity());
    }
    if let Ok(c) = g.classify() {
        assert!(c.verify(&g, &space).expect("verifiable"), "{g}");
    }
}

pub fn orbit_space(s: &str) {
    let Ok(o) = OrbitSpace::from_json(s) else {
        return;
    };
    let j = o.to_json();
    assert_eq!(OrbitSpace::from_json(&j).expect("reparse").to_json(), j);
}

pub fn action_spec(s: &str) {
    let Ok(spec) = ActionSpec::from_json(s) else {
        return;
    };
    let v = spec.to_value();
    let again = ActionSpec::from_value(&v).expect("reparse");
    assert_eq!(again.to_value(), v);
}
