//! Words over a finite alphabet, free reduction, ball enumeration and
//! free-product words.
//!
//! Text forms: `s t^-1 s^2` for words, `1:a b | 2:c` for free-product
//! words (factor indices are 1-based in text, 0-based in memory).

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered list of generator names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, u16>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        Self::try_from(names)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, gen: u16) -> &str {
        &self.names[gen as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<u16> {
        self.index.get(name).copied()
    }

    /// The word consisting of a single generator.
    pub fn gen(&self, name: &str) -> Result<Word> {
        let g = self
            .lookup(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        Ok(Word::letter(Letter::new(g, false)))
    }

    /// All letters in enumeration order: `a, a^-1, b, b^-1, ...`.
    pub fn letters(&self) -> Vec<Letter> {
        (0..self.names.len() as u16)
            .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
            .collect()
    }

    pub fn parse(&self, s: &str) -> Result<Word> {
        Word::parse(self, s)
    }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s != "1"
        && !s
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '^' | '|' | ':'))
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = Error;

    fn try_from(names: Vec<String>) -> Result<Self> {
        if names.len() > u16::MAX as usize {
            return Err(Error::Parse("alphabet too large".into()));
        }
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if !valid_name(n) {
                return Err(Error::Parse(format!("invalid generator name `{n}`")));
            }
            if index.insert(n.clone(), i as u16).is_some() {
                return Err(Error::Parse(format!("duplicate generator `{n}`")));
            }
        }
        Ok(Alphabet { names, index })
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.names
    }
}

/// A generator or its inverse. Orders as `a < a^-1 < b < b^-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u16,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: u16, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// Freely reduce an arbitrary letter sequence.
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        // Cancel at the seam only; both halves are already reduced.
        let mut k = 0;
        while k < self.0.len()
            && k < other.0.len()
            && self.0[self.0.len() - 1 - k] == other.0[k].inv()
        {
            k += 1;
        }
        let mut v = Vec::with_capacity(self.0.len() + other.0.len() - 2 * k);
        v.extend_from_slice(&self.0[..self.0.len() - k]);
        v.extend_from_slice(&other.0[k..]);
        Word(v)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Word::empty();
        for _ in 0..k.unsigned_abs() {
            acc = acc.concat(&base);
        }
        acc
    }

    /// `[g,h] = g h g^-1 h^-1`.
    pub fn commutator(g: &Word, h: &Word) -> Word {
        g.concat(h).concat(&g.inverse()).concat(&h.inverse())
    }

    pub fn exponent_sum(&self, gen: u16) -> i64 {
        self.0
            .iter()
            .filter(|l| l.gen == gen)
            .map(|l| l.exponent())
            .sum()
    }

    /// Parse `s t^-1 s^2`. `1` and the empty string denote the identity.
    pub fn parse(alphabet: &Alphabet, s: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?;
                    (n, e)
                }
                None => (tok, 1),
            };
            if exp.unsigned_abs() > 1 << 16 {
                return Err(Error::Parse(format!("exponent too large in `{tok}`")));
            }
            let g = alphabet
                .lookup(name)
                .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
            let l = Letter::new(g, exp < 0);
            letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
        }
        Ok(Word::reduce(letters))
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> WordDisplay<'a> {
        WordDisplay {
            word: self,
            alphabet,
        }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    alphabet: &'a Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ls = self.word.letters();
        if ls.is_empty() {
            return write!(f, "1");
        }
        // Runs of equal letters print as powers.
        let mut i = 0;
        let mut first = true;
        while i < ls.len() {
            let mut j = i;
            while j < ls.len() && ls[j] == ls[i] {
                j += 1;
            }
            let e = (j - i) as i64 * ls[i].exponent();
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}", self.alphabet.name(ls[i].gen))?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
            i = j;
        }
        Ok(())
    }
}

/// Number of reduced words of length at most `r` over `k` generators.
pub fn ball_size(k: usize, r: usize) -> usize {
    if k == 0 {
        return 1;
    }
    let mut total = 1;
    let mut layer = 2 * k;
    for _ in 0..r {
        total += layer;
        layer *= 2 * k - 1;
    }
    total
}

/// Reduced words of length at most `radius`, in length-lexicographic order.
pub fn enumerate_ball(alphabet: &Alphabet, radius: usize) -> Vec<Word> {
    let letters = alphabet.letters();
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.0.last() == Some(&l.inv()) {
                    continue;
                }
                let mut v = w.0.clone();
                v.push(l);
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// A syllable of a free-product word: a nonempty word in one factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub factor: usize,
    pub word: Word,
}

/// A word in a free product: alternating nonempty syllables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FpWord(Vec<Syllable>);

impl FpWord {
    pub fn empty() -> Self {
        FpWord(Vec::new())
    }

    pub fn syllable(factor: usize, word: Word) -> Self {
        FpWord::normalize(vec![Syllable { factor, word }])
    }

    /// Merge adjacent syllables of the same factor and drop empty ones.
    pub fn normalize(syllables: Vec<Syllable>) -> Self {
        Self::normalize_with(syllables, |_, w| w.is_empty())
    }

    /// As [`FpWord::normalize`], with a caller-supplied test for
    /// syllables that represent the identity of their factor.
    pub fn normalize_with(
        syllables: Vec<Syllable>,
        trivial: impl Fn(usize, &Word) -> bool,
    ) -> Self {
        let mut out: Vec<Syllable> = Vec::new();
        for s in syllables {
            if trivial(s.factor, &s.word) {
                continue;
            }
            let mut cur = s;
            loop {
                match out.last() {
                    Some(last) if last.factor == cur.factor => {
                        let last = out.pop().expect("nonempty");
                        let merged = last.word.concat(&cur.word);
                        if trivial(cur.factor, &merged) {
                            break;
                        }
                        cur = Syllable {
                            factor: cur.factor,
                            word: merged,
                        };
                    }
                    _ => {
                        out.push(cur);
                        break;
                    }
                }
            }
        }
        FpWord(out)
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    /// Number of syllables.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &FpWord) -> FpWord {
        self.concat_with(other, |_, w| w.is_empty())
    }

    pub fn concat_with(&self, other: &FpWord, trivial: impl Fn(usize, &Word) -> bool) -> FpWord {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        FpWord::normalize_with(v, trivial)
    }

    pub fn inverse(&self) -> FpWord {
        FpWord(
            self.0
                .iter()
                .rev()
                .map(|s| Syllable {
                    factor: s.factor,
                    word: s.word.inverse(),
                })
                .collect(),
        )
    }

    /// The prefix `g_1 ... g_k` of the first `k` syllables.
    pub fn prefix(&self, k: usize) -> FpWord {
        FpWord(self.0[..k.min(self.0.len())].to_vec())
    }

    /// Parse `1:a b | 2:c` against one alphabet per factor.
    pub fn parse(alphabets: &[Alphabet], s: &str) -> Result<FpWord> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(FpWord::empty());
        }
        let mut syl = Vec::new();
        for part in s.split('|') {
            let (f, w) = part.split_once(':').ok_or_else(|| {
                Error::Parse(format!("syllable `{}` lacks `factor:`", part.trim()))
            })?;
            let f: usize = f
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad factor index `{}`", f.trim())))?;
            if f == 0 || f > alphabets.len() {
                return Err(Error::Parse(format!("factor index {f} out of range")));
            }
            syl.push(Syllable {
                factor: f - 1,
                word: Word::parse(&alphabets[f - 1], w)?,
            });
        }
        Ok(FpWord::normalize(syl))
    }

    pub fn display<'a>(&'a self, alphabets: &'a [Alphabet]) -> FpWordDisplay<'a> {
        FpWordDisplay {
            word: self,
            alphabets,
        }
    }
}

pub struct FpWordDisplay<'a> {
    word: &'a FpWord,
    alphabets: &'a [Alphabet],
}

impl fmt::Display for FpWordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        for (i, s) in self.word.0.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(
                f,
                "{}:{}",
                s.factor + 1,
                s.word.display(&self.alphabets[s.factor])
            )?;
        }
        Ok(())
    }
}

/// Result of cyclic reduction: `w = conjugator · reduced · conjugator^-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicReduction {
    pub reduced: FpWord,
    pub conjugator: FpWord,
}

pub fn cyclic_reduce(w: &FpWord) -> CyclicReduction {
    cyclic_reduce_with(w, |_, x| x.is_empty())
}

/// Conjugate until the first and last syllables lie in different factors
/// (or at most one syllable remains).
pub fn cyclic_reduce_with(w: &FpWord, trivial: impl Fn(usize, &Word) -> bool) -> CyclicReduction {
    let mut cur = w.0.clone();
    let mut conj: Vec<Syllable> = Vec::new();
    while cur.len() >= 2 && cur[0].factor == cur[cur.len() - 1].factor {
        let first = cur.remove(0);
        let last = cur.pop().expect("len >= 1");
        // w = first · mid · last = first · (mid · last·first) · first^-1
        let merged = last.word.concat(&first.word);
        if !trivial(first.factor, &merged) {
            cur.push(Syllable {
                factor: first.factor,
                word: merged,
            });
        }
        conj.push(first);
    }
    CyclicReduction {
        reduced: FpWord(cur),
        conjugator: FpWord(conj),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(&["a", "b"]).unwrap()
    }

    #[test]
    fn test_reduce_examples() {
        let al = ab();
        let w = al.parse("a b a^-1 a b^-1").unwrap();
        assert_eq!(w, al.parse("a").unwrap());
        assert_eq!(
            al.parse("a b").unwrap().inverse(),
            al.parse("b^-1 a^-1").unwrap()
        );
        assert_eq!(Word::reduce([]), Word::empty());
    }

    #[test]
    fn test_parse_and_display() {
        let al = Alphabet::new(&["s", "t", "a-1"]).unwrap();
        let w = al.parse("s t^-1 s^2 a-1^-2").unwrap();
        assert_eq!(w.len(), 6);
        assert_eq!(w.display(&al).to_string(), "s t^-1 s^2 a-1^-2");
        assert_eq!(al.parse("1").unwrap(), Word::empty());
        assert_eq!(Word::empty().display(&al).to_string(), "1");
        assert!(al.parse("x").is_err());
        assert!(al.parse("s^q").is_err());
        assert!(Alphabet::new(&["a", "a"]).is_err());
        assert!(Alphabet::new(&["a^"]).is_err());
    }

    #[test]
    fn test_ball_counts() {
        let a = Alphabet::new(&["a"]).unwrap();
        let ball = enumerate_ball(&a, 2);
        let shown: Vec<String> = ball.iter().map(|w| w.display(&a).to_string()).collect();
        assert_eq!(shown, ["1", "a", "a^-1", "a^2", "a^-2"]);
        assert_eq!(enumerate_ball(&ab(), 1).len(), 5);
        assert_eq!(enumerate_ball(&ab(), 2).len(), 17);
        for k in 1..4 {
            let names: Vec<String> = (0..k).map(|i| format!("g{i}")).collect();
            let al = Alphabet::new(&names).unwrap();
            for r in 0..4 {
                let ball = enumerate_ball(&al, r);
                assert_eq!(ball.len(), ball_size(k, r));
                let mut sorted = ball.clone();
                sorted.dedup();
                assert_eq!(sorted.len(), ball.len());
            }
        }
    }

    #[test]
    fn test_concat_inverse_cancels() {
        let al = ab();
        for w in enumerate_ball(&al, 3) {
            assert!(w.concat(&w.inverse()).is_empty());
            assert_eq!(Word::reduce(w.letters().iter().copied()), w);
        }
    }

    #[test]
    fn test_fp_parse_normalizes() {
        let als = [ab(), Alphabet::new(&["c"]).unwrap()];
        let w = FpWord::parse(&als, "1:a b | 2:c | 2:c^-1 | 1:b^-1").unwrap();
        assert_eq!(w, FpWord::parse(&als, "1:a").unwrap());
        let w = FpWord::parse(&als, "1:a | 2:c | 1:b").unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.display(&als).to_string(), "1:a | 2:c | 1:b");
        assert!(FpWord::parse(&als, "3:a").is_err());
        assert!(FpWord::parse(&als, "a").is_err());
        assert_eq!(FpWord::parse(&als, "1").unwrap(), FpWord::empty());
    }

    #[test]
    fn test_cyclic_reduce() {
        let als = [
            Alphabet::new(&["a"]).unwrap(),
            Alphabet::new(&["b"]).unwrap(),
        ];
        let w = FpWord::parse(&als, "1:a | 2:b | 1:a^-1").unwrap();
        let r = cyclic_reduce(&w);
        assert_eq!(r.reduced, FpWord::parse(&als, "2:b").unwrap());
        assert_eq!(r.conjugator, FpWord::parse(&als, "1:a").unwrap());
        let w = FpWord::parse(&als, "1:a | 2:b").unwrap();
        assert_eq!(cyclic_reduce(&w).reduced, w);
        assert!(cyclic_reduce(&w).conjugator.is_empty());
        // Partial merge: a^2 b a^-1 ~ a b.
        let w = FpWord::parse(&als, "1:a^2 | 2:b | 1:a^-1").unwrap();
        let r = cyclic_reduce(&w);
        let back = r
            .conjugator
            .concat(&r.reduced)
            .concat(&r.conjugator.inverse());
        assert_eq!(back, w);
        assert_eq!(r.reduced.len(), 2);
    }
}
