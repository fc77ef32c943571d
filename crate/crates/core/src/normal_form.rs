//! Unique geodesic spellings of horocyclic elements.
//!
//! A positive lattice point is spelled from signed base-3 digits: every digit
//! is -1, 0 or 1, except that a coordinate whose expansion reaches the
//! globally highest place may lead with a 2 there. The spelling climbs with
//! `t^N`, writes the top-level letters, and descends one `T` per level,
//! writing each level's letters on the way down.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::group::{GroupElement, Token, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalFormError {
    #[error("the zero vector has no digit expansion")]
    ZeroVector,
    #[error("entry {index} is negative")]
    NegativeEntry { index: usize },
    #[error("level enumeration for m = {m}, n = {n} is beyond desk scale")]
    TooLarge { m: usize, n: usize },
}

/// Per-coordinate signed digits of a positive lattice point.
///
/// `digits[i][l]` is the digit of coordinate `i` at place value `3^l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitExpansion {
    top: usize,
    digits: Vec<Vec<i8>>,
}

impl DigitExpansion {
    /// The top level `N`.
    pub fn top(&self) -> usize {
        self.top
    }

    pub fn digits(&self) -> &[Vec<i8>] {
        &self.digits
    }

    pub fn letter_count(&self) -> usize {
        self.digits
            .iter()
            .flatten()
            .map(|d| d.unsigned_abs() as usize)
            .sum()
    }

    /// `2N` for the `t`/`T` letters plus one letter per unit of digit.
    pub fn word_length(&self) -> usize {
        2 * self.top + self.letter_count()
    }

    pub fn value(&self, i: usize) -> BigInt {
        self.digits[i]
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &d| acc * 3 + d)
    }
}

/// Balanced-ternary digits, least significant first. Empty for zero.
fn balanced_ternary(e: &BigInt) -> Vec<i8> {
    let mut out = Vec::new();
    let mut e = e.clone();
    let three = BigInt::from(3);
    while !e.is_zero() {
        let r = e.mod_floor(&three).to_u8().unwrap();
        match r {
            0 => out.push(0),
            1 => {
                out.push(1);
                e -= 1;
            }
            _ => {
                out.push(-1);
                e += 1;
            }
        }
        e /= &three;
    }
    out
}

/// The expansion leading with a 2 one place below the balanced-ternary top,
/// when the remainder fits in balanced digits below it.
fn two_led(e: &BigInt, bt_top: usize) -> Option<Vec<i8>> {
    if bt_top == 0 {
        return None;
    }
    let k = bt_top - 1;
    let place = BigInt::from(3).pow(k as u32);
    let rem: BigInt = e - &place * 2;
    let bound = (&place - 1) / 2;
    if rem.abs() > bound {
        return None;
    }
    let mut digits = balanced_ternary(&rem);
    digits.resize(k, 0);
    digits.push(2);
    Some(digits)
}

type DigitOptions = (Vec<i8>, Option<Vec<i8>>);

/// Digit expansion of a nonnegative, nonzero lattice vector.
pub fn digit_expansion(v: &[BigInt]) -> Result<DigitExpansion, NormalFormError> {
    if let Some(index) = v.iter().position(Signed::is_negative) {
        return Err(NormalFormError::NegativeEntry { index });
    }
    if v.iter().all(Zero::is_zero) {
        return Err(NormalFormError::ZeroVector);
    }
    // Per coordinate: its balanced digits and, when available, a 2-led form.
    let options: Vec<Option<DigitOptions>> = v
        .iter()
        .map(|e| {
            if e.is_zero() {
                return None;
            }
            let bt = balanced_ternary(e);
            let led = two_led(e, bt.len() - 1);
            Some((bt, led))
        })
        .collect();
    let top = options
        .iter()
        .flatten()
        .map(|(bt, led)| match led {
            Some(l) => l.len() - 1,
            None => bt.len() - 1,
        })
        .max()
        .unwrap();
    let digits = options
        .into_iter()
        .map(|opt| match opt {
            None => vec![0; top + 1],
            Some((mut bt, led)) => {
                if bt.len() - 1 <= top {
                    bt.resize(top + 1, 0);
                    bt
                } else {
                    led.expect("a coordinate above the top level has a 2-led expansion")
                }
            }
        })
        .collect();
    Ok(DigitExpansion { top, digits })
}

/// Canonical geodesic spelling of `a^v`, for any integer vector.
pub fn spell(v: &[BigInt]) -> Word {
    let m = v.len();
    let abs: Vec<BigInt> = v.iter().map(Signed::abs).collect();
    let Ok(exp) = digit_expansion(&abs) else {
        return Word::empty(m);
    };
    let mut tokens = vec![Token::T; exp.top];
    for level in (0..=exp.top).rev() {
        for (i, row) in exp.digits.iter().enumerate() {
            let d = row[level];
            let positive = (d > 0) != v[i].is_negative();
            let tok = if positive { Token::Gen(i) } else { Token::InvGen(i) };
            tokens.extend(std::iter::repeat_n(tok, d.unsigned_abs() as usize));
        }
        if level > 0 {
            tokens.push(Token::TInv);
        }
    }
    Word::new(m, tokens).expect("indices in range")
}

/// Word length of `a^v` in the standard generators.
pub fn word_length(v: &[BigInt]) -> usize {
    let abs: Vec<BigInt> = v.iter().map(Signed::abs).collect();
    digit_expansion(&abs).map_or(0, |e| e.word_length())
}

/// `word_length` on machine integers, for exhaustive scans.
pub fn word_length_i64(v: &[i64]) -> usize {
    // (balanced-ternary top index, its digit weight, 2-led weight if any)
    fn shape(e: u64) -> (usize, usize, Option<usize>) {
        let (top, weight) = bt_shape(e as i128);
        if top == 0 {
            return (0, weight, None);
        }
        let place = 3i128.pow(top as u32 - 1);
        let rem = e as i128 - 2 * place;
        let led = (rem.abs() <= (place - 1) / 2).then(|| 2 + bt_shape(rem).1);
        (top, weight, led)
    }
    fn bt_shape(mut e: i128) -> (usize, usize) {
        let (mut len, mut weight) = (0, 0);
        while e != 0 {
            match e.rem_euclid(3) {
                0 => {}
                1 => {
                    weight += 1;
                    e -= 1;
                }
                _ => {
                    weight += 1;
                    e += 1;
                }
            }
            e /= 3;
            len += 1;
        }
        (len.max(1) - 1, weight)
    }
    let shapes: Vec<_> = v
        .iter()
        .filter(|&&c| c != 0)
        .map(|c| shape(c.unsigned_abs()))
        .collect();
    let Some(top) = shapes
        .iter()
        .map(|&(h, _, led)| if led.is_some() { h - 1 } else { h })
        .max()
    else {
        return 0;
    };
    let letters: usize = shapes
        .iter()
        .map(|&(h, weight, led)| if h <= top { weight } else { led.unwrap() })
        .sum();
    2 * top + letters
}

fn unit_word(set: &[usize]) -> Vec<Token> {
    set.iter().map(|&i| Token::Gen(i)).collect()
}

/// All of `{a_i, ε, A_i}` products over `set`, in index order.
fn suffix_words(set: &[usize]) -> Vec<Vec<Token>> {
    let mut out = vec![Vec::new()];
    for &i in set {
        let mut next = Vec::with_capacity(out.len() * 3);
        for w in &out {
            for choice in [None, Some(Token::Gen(i)), Some(Token::InvGen(i))] {
                let mut w2 = w.clone();
                w2.extend(choice);
                next.push(w2);
            }
        }
        out = next;
    }
    out
}

/// The all-squares word followed by every `t U T w` except the one with
/// `w = U^-1`.
fn cap_words(set: &[usize]) -> Vec<Vec<Token>> {
    let mut out = vec![set.iter().flat_map(|&i| [Token::Gen(i); 2]).collect()];
    let inverse_unit: Vec<Token> = set.iter().map(|&i| Token::InvGen(i)).collect();
    for w in suffix_words(set) {
        if w == inverse_unit {
            continue;
        }
        let mut word = vec![Token::T];
        word.extend(set.iter().map(|&i| Token::Gen(i)));
        word.push(Token::TInv);
        word.extend(w);
        out.push(word);
    }
    out
}

/// The explicit word families on all `m` generators: the unit word `U_m`,
/// the top-dimensional caps `V_m` and the suffix alphabet `W_m`.
#[derive(Clone, Debug)]
pub struct WordFamilies {
    pub m: usize,
    pub unit: Vec<Word>,
    pub caps: Vec<Word>,
    pub suffixes: Vec<Word>,
}

impl WordFamilies {
    pub fn new(m: usize) -> Self {
        let all: Vec<usize> = (0..m).collect();
        let wrap = |ws: Vec<Vec<Token>>| -> Vec<Word> {
            ws.into_iter()
                .map(|t| Word::new(m, t).expect("indices in range"))
                .collect()
        };
        Self {
            m,
            unit: wrap(vec![unit_word(&all)]),
            caps: wrap(cap_words(&all)),
            suffixes: wrap(suffix_words(&all)),
        }
    }
}

/// Ordered sequences of nonempty disjoint blocks covering `0..m`; each block
/// is sorted.
fn ordered_set_partitions(m: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(remaining: &[usize], acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if remaining.is_empty() {
            out.push(acc.clone());
            return;
        }
        let k = remaining.len();
        for mask in 1u32..(1 << k) {
            let block: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| remaining[b]).collect();
            let rest: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 0).map(|b| remaining[b]).collect();
            acc.push(block);
            rec(&rest, acc, out);
            acc.pop();
        }
    }
    let all: Vec<usize> = (0..m).collect();
    let mut out = Vec::new();
    rec(&all, &mut Vec::new(), &mut out);
    out
}

/// Splits `n` over `q` blocks. Interior blocks take at least one level, so a
/// unit word never directly follows another one and each word arises from a
/// single block sequence.
fn level_splits(n: usize, q: usize) -> Vec<Vec<usize>> {
    if q == 1 {
        return vec![vec![n]];
    }
    let interior = q - 2;
    let mut out = Vec::new();
    fn rec(n: usize, slots: &[usize], acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == slots.len() {
            if n == 0 {
                out.push(acc.clone());
            }
            return;
        }
        let min = slots[acc.len()];
        if acc.len() + 1 == slots.len() {
            if n >= min {
                acc.push(n);
                out.push(acc.clone());
                acc.pop();
            }
            return;
        }
        for j in min..=n {
            acc.push(j);
            rec(n - j, slots, acc, out);
            acc.pop();
        }
    }
    let mut slots = vec![0];
    slots.extend(std::iter::repeat_n(1, interior));
    slots.push(0);
    rec(n, &slots, &mut Vec::new(), &mut out);
    out
}

struct Shape {
    caps: Vec<Vec<Token>>,
    // Per block after the first: its unit word.
    units: Vec<Vec<Token>>,
    // Per block: the suffix alphabet over the blocks so far, and repeat count.
    suffixes: Vec<(Vec<Vec<Token>>, usize)>,
}

impl Shape {
    fn radices(&self) -> Vec<usize> {
        let mut r = vec![self.caps.len()];
        for (alphabet, reps) in &self.suffixes {
            r.extend(std::iter::repeat_n(alphabet.len(), *reps));
        }
        r
    }
}

/// Lazy enumeration of the words of one level of the geodesic language.
pub struct LevelWords {
    m: usize,
    n: usize,
    shapes: Vec<Shape>,
    shape: usize,
    counter: Vec<usize>,
    radices: Vec<usize>,
    done: bool,
}

impl LevelWords {
    fn new(m: usize, n: usize) -> Self {
        let mut shapes = Vec::new();
        for blocks in ordered_set_partitions(m) {
            for js in level_splits(n, blocks.len()) {
                let mut seen: Vec<usize> = Vec::new();
                let mut suffixes = Vec::new();
                let mut units = Vec::new();
                for (k, block) in blocks.iter().enumerate() {
                    if k > 0 {
                        units.push(unit_word(block));
                    }
                    seen.extend(block);
                    seen.sort_unstable();
                    suffixes.push((suffix_words(&seen), js[k]));
                }
                shapes.push(Shape {
                    caps: cap_words(&blocks[0]),
                    units,
                    suffixes,
                });
            }
        }
        let mut it = Self {
            m,
            n,
            shapes,
            shape: 0,
            counter: Vec::new(),
            radices: Vec::new(),
            done: false,
        };
        it.enter_shape();
        it
    }

    fn enter_shape(&mut self) {
        match self.shapes.get(self.shape) {
            Some(s) => {
                self.radices = s.radices();
                self.counter = vec![0; self.radices.len()];
            }
            None => self.done = true,
        }
    }

    fn current(&self) -> Word {
        let s = &self.shapes[self.shape];
        let mut tokens = vec![Token::T; self.n];
        tokens.extend(&s.caps[self.counter[0]]);
        let mut slot = 1;
        for (k, (alphabet, reps)) in s.suffixes.iter().enumerate() {
            if k > 0 {
                tokens.extend(&s.units[k - 1]);
            }
            for _ in 0..*reps {
                tokens.push(Token::TInv);
                tokens.extend(&alphabet[self.counter[slot]]);
                slot += 1;
            }
        }
        Word::new(self.m, tokens).expect("indices in range")
    }

    fn advance(&mut self) {
        for (c, r) in self.counter.iter_mut().zip(&self.radices).rev() {
            *c += 1;
            if *c < *r {
                return;
            }
            *c = 0;
        }
        self.shape += 1;
        self.enter_shape();
    }
}

impl Iterator for LevelWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let w = self.current();
        self.advance();
        Some(w)
    }
}

/// Every word of the level-`n` piece of the geodesic language, each once.
pub fn enumerate_level(m: usize, n: usize) -> LevelWords {
    LevelWords::new(m, n)
}

/// The unit word followed by all levels `0..=max_level`.
pub fn enumerate_language(m: usize, max_level: usize) -> impl Iterator<Item = Word> {
    let unit = Word::new(m, unit_word(&(0..m).collect::<Vec<_>>())).unwrap();
    std::iter::once(unit).chain((0..=max_level).flat_map(move |n| enumerate_level(m, n)))
}

/// Upper end of the values reached through level `n`: `(3^(n+2) - 1) / 2`.
pub fn level_upper(n: usize) -> BigInt {
    (BigInt::from(3).pow(n as u32 + 2) - 1) / 2
}

/// First value that needs level `n`: `(3^(n+1) + 1) / 2`.
pub fn level_lower(n: usize) -> BigInt {
    (BigInt::from(3).pow(n as u32 + 1) + 1) / 2
}

const DESK_SCALE_WORDS: u64 = 2_000_000;

fn check_scale(m: usize, n: usize) -> Result<(), NormalFormError> {
    let count = level_upper(n).pow(m as u32);
    if count > BigInt::from(DESK_SCALE_WORDS) {
        return Err(NormalFormError::TooLarge { m, n });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub word: String,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct LevelReport {
    pub m: usize,
    pub n: usize,
    pub words: usize,
    pub min_value: Option<BigInt>,
    pub max_value: Option<BigInt>,
    pub violations: Vec<Violation>,
}

impl LevelReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that each word of level `n` evaluates to a distinct positive
/// lattice point inside `[1, upper]^m` but outside `[1, lower)^m`, and
/// climbs to height `n` or `n + 1`.
pub fn check_level_ranges(m: usize, n: usize) -> Result<LevelReport, NormalFormError> {
    check_scale(m, n)?;
    let (lo, hi) = (level_lower(n), level_upper(n));
    let mut seen = HashSet::new();
    let mut report = LevelReport {
        m,
        n,
        words: 0,
        min_value: None,
        max_value: None,
        violations: Vec::new(),
    };
    for word in enumerate_level(m, n) {
        report.words += 1;
        let fail = |reason: String| Violation {
            word: word.to_string(),
            reason,
        };
        let g = word.eval();
        let Some(v) = g.lattice_vector() else {
            report.violations.push(fail(format!("evaluates off the lattice: {g}")));
            continue;
        };
        let in_box = v.iter().all(|c| c >= &BigInt::one() && c <= &hi);
        let below = v.iter().all(|c| c < &lo);
        if !in_box || below {
            report.violations.push(fail(format!("value {g} outside the level box")));
        }
        let h = word.max_height();
        if h != n as i64 && h != n as i64 + 1 {
            report.violations.push(fail(format!("max height {h}")));
        }
        for c in &v {
            if report.min_value.as_ref().is_none_or(|x| c < x) {
                report.min_value = Some(c.clone());
            }
            if report.max_value.as_ref().is_none_or(|x| c > x) {
                report.max_value = Some(c.clone());
            }
        }
        if !seen.insert(v) {
            report.violations.push(fail(format!("value {g} spelled twice")));
        }
    }
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct TilingReport {
    pub m: usize,
    pub max_level: usize,
    pub words: usize,
    pub box_size: BigInt,
    pub violations: Vec<Violation>,
}

impl TilingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that the unit word and levels `0..=max_level` spell every point of
/// `[1, upper(max_level)]^m` exactly once, each with a geodesic of the
/// canonical length.
pub fn check_tiling(m: usize, max_level: usize) -> Result<TilingReport, NormalFormError> {
    check_scale(m, max_level)?;
    let hi = level_upper(max_level);
    let box_size = hi.pow(m as u32);
    let mut seen = HashSet::new();
    let mut report = TilingReport {
        m,
        max_level,
        words: 0,
        box_size: box_size.clone(),
        violations: Vec::new(),
    };
    for word in enumerate_language(m, max_level) {
        report.words += 1;
        let g = word.eval();
        let ok = g.in_positive_orthant()
            && g.lattice_vector().unwrap().iter().all(|c| c <= &hi);
        if !ok {
            report.violations.push(Violation {
                word: word.to_string(),
                reason: format!("value {g} outside the box"),
            });
            continue;
        }
        let v = g.lattice_vector().unwrap();
        if word_length(&v) != word.len() {
            report.violations.push(Violation {
                word: word.to_string(),
                reason: format!("length {} but canonical length {}", word.len(), word_length(&v)),
            });
        }
        if !seen.insert(v) {
            report.violations.push(Violation {
                word: word.to_string(),
                reason: format!("value {g} spelled twice"),
            });
        }
    }
    if BigInt::from(seen.len()) != box_size {
        report.violations.push(Violation {
            word: String::new(),
            reason: format!("covered {} of {} box points", seen.len(), box_size),
        });
    }
    Ok(report)
}

/// Checks `eval(spell(v)) = a^v` and `|spell(v)| = word_length(v)`.
pub fn check_spelling(v: &[BigInt]) -> Option<Violation> {
    let w = spell(v);
    let expected = GroupElement::lattice(v);
    if w.eval() != expected {
        return Some(Violation {
            word: w.to_string(),
            reason: format!("evaluates to {} instead of {expected}", w.eval()),
        });
    }
    if w.len() != word_length(v) {
        return Some(Violation {
            word: w.to_string(),
            reason: format!("has {} letters, word_length says {}", w.len(), word_length(v)),
        });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn spelled(v: &[i64]) -> String {
        spell(&big(v)).to_string()
    }

    #[test]
    fn expansion_examples() {
        let e = digit_expansion(&big(&[5])).unwrap();
        assert_eq!((e.top(), e.digits()), (1, &[vec![-1, 2]][..]));

        let e = digit_expansion(&big(&[10, 16])).unwrap();
        assert_eq!(e.top(), 2);
        assert_eq!(e.digits(), &[vec![1, 0, 1], vec![1, -1, 2]]);

        // 2 = 3 - 1 leads with 1 once another coordinate sets the top.
        let e = digit_expansion(&big(&[2, 16])).unwrap();
        assert_eq!(e.digits(), &[vec![-1, 1, 0], vec![1, -1, 2]]);
    }

    #[test]
    fn expansion_errors() {
        assert_eq!(digit_expansion(&big(&[0, 0])), Err(NormalFormError::ZeroVector));
        assert_eq!(
            digit_expansion(&big(&[1, -1])),
            Err(NormalFormError::NegativeEntry { index: 1 })
        );
    }

    #[test]
    fn one_dimensional_table() {
        let table = [
            (1, "a", 1),
            (2, "aa", 2),
            (3, "taT", 3),
            (4, "taTa", 4),
            (5, "taaTA", 5),
            (6, "taaT", 4),
            (7, "taaTa", 5),
            (8, "ttaTTA", 6),
            (9, "ttaTT", 5),
            (10, "ttaTTa", 6),
            (11, "ttaTaTA", 7),
            (12, "ttaTaT", 6),
            (13, "ttaTaTa", 7),
        ];
        for (v, word, len) in table {
            assert_eq!(spelled(&[v]), word, "a^{v}");
            assert_eq!(word_length_i64(&[v]), len, "a^{v}");
        }
    }

    #[test]
    fn spell_examples() {
        assert_eq!(spelled(&[1, 1, 1]), "abc");
        assert_eq!(spelled(&[10, 16]), "ttabbTBTab");
        assert_eq!(spell(&big(&[10, 16])).len(), 10);
        assert_eq!(spelled(&[0]), "ε");
        assert_eq!(spelled(&[-5]), "tAATa");
        assert_eq!(spelled(&[0, -2]), "BB");
    }

    #[test]
    fn word_length_examples() {
        assert_eq!(word_length_i64(&[6]), 4);
        assert_eq!(word_length_i64(&[8]), 6);
        assert_eq!(word_length_i64(&[11]), 7);
        assert_eq!(word_length_i64(&[10, 16]), 10);
        assert_eq!(word_length_i64(&[0, 0, 0]), 0);
    }

    #[test]
    fn families_have_expected_sizes() {
        for m in 1..=4 {
            let f = WordFamilies::new(m);
            assert_eq!(f.suffixes.len(), 3usize.pow(m as u32));
            assert_eq!(f.caps.len(), 3usize.pow(m as u32));
            assert_eq!(f.unit.len(), 1);
        }
        let v1: Vec<String> = WordFamilies::new(1).caps.iter().map(|w| w.to_string()).collect();
        assert_eq!(v1, ["aa", "taT", "taTa"]);
    }

    #[test]
    fn level_zero_words() {
        let l: HashSet<String> = enumerate_level(1, 0).map(|w| w.to_string()).collect();
        assert_eq!(l, ["aa", "taT", "taTa"].iter().map(|s| s.to_string()).collect());

        let l2: HashSet<String> = enumerate_level(2, 0).map(|w| w.to_string()).collect();
        let v_ab = ["aabb", "tabT", "tabTA", "tabTB", "tabTa", "tabTb", "tabTab", "tabTAb", "tabTaB"];
        for w in v_ab {
            assert!(l2.contains(w), "{w}");
        }
        assert_eq!(l2.len(), 15);
    }

    #[test]
    fn level_one_words_for_m1() {
        let mut values: Vec<i64> = enumerate_level(1, 1)
            .map(|w| w.eval().lattice_vector().unwrap()[0].to_i64().unwrap())
            .collect();
        values.sort_unstable();
        assert_eq!(values, (5..=13).collect::<Vec<_>>());
    }

    #[test]
    fn level_range_reports() {
        for (m, n) in [(1, 0), (1, 1), (1, 3), (2, 0), (2, 1), (2, 2), (3, 0), (3, 1)] {
            let r = check_level_ranges(m, n).unwrap();
            assert!(r.passed(), "m={m} n={n}: {:?}", r.violations.first());
        }
        let r = check_level_ranges(1, 1).unwrap();
        assert_eq!((r.min_value, r.max_value), (Some(BigInt::from(5)), Some(BigInt::from(13))));
        let r = check_level_ranges(1, 0).unwrap();
        assert_eq!((r.words, r.min_value, r.max_value), (3, Some(BigInt::from(2)), Some(BigInt::from(4))));
        assert!(matches!(check_level_ranges(4, 4), Err(NormalFormError::TooLarge { .. })));
    }

    #[test]
    fn tiling_small_cases() {
        for (m, n) in [(1, 4), (2, 2), (3, 1)] {
            let r = check_tiling(m, n).unwrap();
            assert!(r.passed(), "m={m} n={n}: {:?}", r.violations.first());
        }
    }

    #[test]
    fn length_symmetry() {
        let v = [4i64, 13, 7];
        let base = word_length_i64(&v);
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for p in perms {
            for signs in 0..8 {
                let w: Vec<i64> = (0..3)
                    .map(|i| if signs >> i & 1 == 1 { -v[p[i]] } else { v[p[i]] })
                    .collect();
                assert_eq!(word_length_i64(&w), base);
            }
        }
    }

    proptest! {
        #[test]
        fn spelling_roundtrips(v in prop::collection::vec(-400i64..=400, 1..=4)) {
            prop_assert_eq!(check_spelling(&big(&v)), None);
        }

        #[test]
        fn machine_length_matches(v in prop::collection::vec(-100_000i64..=100_000, 1..=4)) {
            prop_assert_eq!(word_length_i64(&v), word_length(&big(&v)));
        }

        #[test]
        fn expansion_invariants(v in prop::collection::vec(0i64..=3000, 1..=4)) {
            prop_assume!(v.iter().any(|&c| c > 0));
            let e = digit_expansion(&big(&v)).unwrap();
            let n = e.top();
            prop_assert!(e.digits().iter().any(|row| row[n] != 0));
            for (i, row) in e.digits().iter().enumerate() {
                prop_assert_eq!(row.len(), n + 1);
                prop_assert!(row[..n].iter().all(|d| (-1..=1).contains(d)));
                prop_assert!((0..=2).contains(&row[n]));
                prop_assert_eq!(e.value(i), BigInt::from(v[i]));
            }
        }
    }
}
