//! Elements of `G_m = Z^m *_{g -> g^3}` and words over its standard
//! generators.
//!
//! Every element has a unique normal form `a^v t^k` with `v` a vector of
//! triadic rationals (elements of `Z[1/3]`) and `k` an integer. The relation
//! `t g T = g^3` gives the multiplication law
//! `(u, s) * (v, r) = (u + 3^s v, s + r)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("generator index {index} out of range for m = {m}")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

fn pow3(e: u32) -> BigInt {
    BigInt::from(3u32).pow(e)
}

/// `numerator / 3^denom_exp`, kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct TriadicRational {
    #[serde(rename = "num", with = "crate::series::decimal::single")]
    numerator: BigInt,
    #[serde(rename = "exp3")]
    denom_exp: u32,
}

impl TriadicRational {
    pub fn new(numerator: BigInt, denom_exp: u32) -> Self {
        let mut r = Self {
            numerator,
            denom_exp,
        };
        r.reduce();
        r
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self {
            numerator: n.into(),
            denom_exp: 0,
        }
    }

    fn reduce(&mut self) {
        if self.numerator.is_zero() {
            self.denom_exp = 0;
            return;
        }
        let three = BigInt::from(3);
        while self.denom_exp > 0 {
            let (q, r) = self.numerator.div_rem(&three);
            if !r.is_zero() {
                break;
            }
            self.numerator = q;
            self.denom_exp -= 1;
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.denom_exp == 0
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        self.is_integer().then_some(&self.numerator)
    }

    pub fn add(&self, other: &Self) -> Self {
        let e = self.denom_exp.max(other.denom_exp);
        let a = &self.numerator * pow3(e - self.denom_exp);
        let b = &other.numerator * pow3(e - other.denom_exp);
        Self::new(a + b, e)
    }

    pub fn neg(&self) -> Self {
        Self {
            numerator: -&self.numerator,
            denom_exp: self.denom_exp,
        }
    }

    /// Multiplies by `3^k` for any integer `k`.
    pub fn mul_pow3(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        if k >= 0 {
            let k = k as u32;
            if k <= self.denom_exp {
                Self::new(self.numerator.clone(), self.denom_exp - k)
            } else {
                Self::new(&self.numerator * pow3(k - self.denom_exp), 0)
            }
        } else {
            Self::new(self.numerator.clone(), self.denom_exp + (-k) as u32)
        }
    }

    /// Representative of the class modulo 1 in `[0, 1)`.
    pub fn frac(&self) -> Self {
        let modulus = pow3(self.denom_exp);
        Self::new(self.numerator.mod_floor(&modulus), self.denom_exp)
    }
}

impl fmt::Display for TriadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom_exp == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, pow3(self.denom_exp))
        }
    }
}

/// A group element `a^coords t^tee` in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    coords: Vec<TriadicRational>,
    tee: i64,
}

impl GroupElement {
    pub fn identity(m: usize) -> Self {
        Self {
            coords: vec![TriadicRational::default(); m],
            tee: 0,
        }
    }

    pub fn new(coords: Vec<TriadicRational>, tee: i64) -> Self {
        Self { coords, tee }
    }

    /// The horocyclic element `a^v`.
    pub fn lattice(v: &[BigInt]) -> Self {
        Self {
            coords: v.iter().cloned().map(TriadicRational::integer).collect(),
            tee: 0,
        }
    }

    pub fn from_i64s(v: &[i64]) -> Self {
        Self::lattice(&v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>())
    }

    pub fn generator(m: usize, token: Token) -> Self {
        let mut g = Self::identity(m);
        match token {
            Token::Gen(i) => g.coords[i] = TriadicRational::integer(1),
            Token::InvGen(i) => g.coords[i] = TriadicRational::integer(-1),
            Token::T => g.tee = 1,
            Token::TInv => g.tee = -1,
        }
        g
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[TriadicRational] {
        &self.coords
    }

    pub fn tee(&self) -> i64 {
        self.tee
    }

    pub fn is_identity(&self) -> bool {
        self.tee == 0 && self.coords.iter().all(TriadicRational::is_zero)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, GroupError> {
        if self.dim() != other.dim() {
            return Err(GroupError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(u, v)| u.add(&v.mul_pow3(self.tee)))
            .collect();
        Ok(Self {
            coords,
            tee: self.tee + other.tee,
        })
    }

    /// Right multiplication by a single generator, the BFS inner step.
    pub fn step(&self, token: Token) -> Self {
        let mut out = self.clone();
        match token {
            Token::Gen(i) => out.coords[i] = out.coords[i].add(&unit_at(self.tee)),
            Token::InvGen(i) => out.coords[i] = out.coords[i].add(&unit_at(self.tee).neg()),
            Token::T => out.tee += 1,
            Token::TInv => out.tee -= 1,
        }
        out
    }

    /// `(u, s)^-1 = (-3^-s u, -s)`.
    pub fn inverse(&self) -> Self {
        Self {
            coords: self
                .coords
                .iter()
                .map(|u| u.mul_pow3(-self.tee).neg())
                .collect(),
            tee: -self.tee,
        }
    }

    /// In the horocyclic subgroup `Z^m`: no net `t` and integral coordinates.
    pub fn is_horocyclic(&self) -> bool {
        self.tee == 0 && self.coords.iter().all(TriadicRational::is_integer)
    }

    /// Horocyclic with every coordinate strictly positive.
    pub fn in_positive_orthant(&self) -> bool {
        self.is_horocyclic() && self.coords.iter().all(|c| c.numerator().is_positive())
    }

    /// Integer coordinates of a horocyclic element.
    pub fn lattice_vector(&self) -> Option<Vec<BigInt>> {
        self.is_horocyclic()
            .then(|| self.coords.iter().map(|c| c.numerator().clone()).collect())
    }

    /// Key identifying the left coset `g Z^m`: the height together with the
    /// coordinates rescaled by `3^-tee` and reduced modulo 1.
    pub fn coset_key(&self) -> (i64, Vec<TriadicRational>) {
        (
            self.tee,
            self.coords
                .iter()
                .map(|u| u.mul_pow3(-self.tee).frac())
                .collect(),
        )
    }
}

fn unit_at(tee: i64) -> TriadicRational {
    TriadicRational::integer(1).mul_pow3(tee)
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("e");
        }
        let m = self.dim();
        let mut parts = Vec::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = letter_name(i, m, false);
            if c.is_integer() && c.numerator().is_one() {
                parts.push(name);
            } else if c.is_integer() {
                parts.push(format!("{name}^{c}"));
            } else {
                parts.push(format!("{name}^({c})"));
            }
        }
        match self.tee {
            0 => {}
            1 => parts.push("t".into()),
            k => parts.push(format!("t^{k}")),
        }
        f.write_str(&parts.join(" "))
    }
}

/// One letter of a spelling; generator indices are 0-based internally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Gen(usize),
    InvGen(usize),
    T,
    TInv,
}

impl Token {
    pub fn inverse(self) -> Self {
        match self {
            Token::Gen(i) => Token::InvGen(i),
            Token::InvGen(i) => Token::Gen(i),
            Token::T => Token::TInv,
            Token::TInv => Token::T,
        }
    }

    /// Generators in the fixed expansion order `a_1, A_1, ..., a_m, A_m, t, T`.
    pub fn all(m: usize) -> Vec<Token> {
        let mut out: Vec<Token> = (0..m)
            .flat_map(|i| [Token::Gen(i), Token::InvGen(i)])
            .collect();
        out.extend([Token::T, Token::TInv]);
        out
    }

    fn height_delta(self) -> i64 {
        match self {
            Token::T => 1,
            Token::TInv => -1,
            _ => 0,
        }
    }
}

fn letter_name(i: usize, m: usize, inverse: bool) -> String {
    if m <= 3 {
        let c = b"abc"[i] as char;
        if inverse {
            c.to_ascii_uppercase().to_string()
        } else {
            c.to_string()
        }
    } else if inverse {
        format!("A{}", i + 1)
    } else {
        format!("a{}", i + 1)
    }
}

/// A spelling over `{a_i, A_i, t, T}` for a fixed dimension `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    m: usize,
    tokens: Vec<Token>,
}

impl Word {
    pub fn empty(m: usize) -> Self {
        Self {
            m,
            tokens: Vec::new(),
        }
    }

    pub fn new(m: usize, tokens: Vec<Token>) -> Result<Self, GroupError> {
        for t in &tokens {
            if let Token::Gen(i) | Token::InvGen(i) = *t {
                if i >= m {
                    return Err(GroupError::IndexOutOfRange { index: i + 1, m });
                }
            }
        }
        Ok(Self { m, tokens })
    }

    /// Parses the external token syntax: `t`, `T`, `a<i>`, `A<i>` (1-based),
    /// aliases `a b c` / `A B C` when `m <= 3`, and an optional `^k` after
    /// any letter. Whitespace and `ε`/`e` for the empty word are accepted.
    pub fn parse(m: usize, text: &str) -> Result<Self, GroupError> {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut tokens = Vec::new();
        let mut k = 0;
        let err = |pos: usize, msg: &str| GroupError::Parse {
            pos,
            msg: msg.to_string(),
        };
        let trimmed = text.trim();
        if trimmed == "ε" || trimmed == "e" {
            return Ok(Self::empty(m));
        }
        while k < chars.len() {
            let (pos, c) = chars[k];
            k += 1;
            if c.is_whitespace() {
                continue;
            }
            let token = match c {
                't' => Token::T,
                'T' => Token::TInv,
                'a'..='z' | 'A'..='Z' => {
                    let inverse = c.is_ascii_uppercase();
                    let lower = c.to_ascii_lowercase();
                    let start = k;
                    while k < chars.len() && chars[k].1.is_ascii_digit() {
                        k += 1;
                    }
                    let index = if k > start {
                        if lower != 'a' {
                            return Err(err(pos, "indexed generators use the letter a"));
                        }
                        let digits: String = chars[start..k].iter().map(|&(_, d)| d).collect();
                        let i: usize = digits.parse().map_err(|_| err(pos, "bad index"))?;
                        if i == 0 {
                            return Err(err(pos, "generator indices are 1-based"));
                        }
                        i - 1
                    } else {
                        if m > 3 {
                            return Err(err(pos, "letter aliases need m <= 3; use a<i>"));
                        }
                        match lower {
                            'a' => 0,
                            'b' => 1,
                            'c' => 2,
                            _ => return Err(err(pos, "unknown letter")),
                        }
                    };
                    if index >= m {
                        return Err(err(pos, &format!("generator index {} exceeds m = {m}", index + 1)));
                    }
                    if inverse {
                        Token::InvGen(index)
                    } else {
                        Token::Gen(index)
                    }
                }
                _ => return Err(err(pos, &format!("unexpected character {c:?}"))),
            };
            let mut count: i64 = 1;
            if k < chars.len() && chars[k].1 == '^' {
                let caret = chars[k].0;
                k += 1;
                let neg = k < chars.len() && chars[k].1 == '-';
                if neg {
                    k += 1;
                }
                let start = k;
                while k < chars.len() && chars[k].1.is_ascii_digit() {
                    k += 1;
                }
                if k == start {
                    return Err(err(caret, "expected an exponent after ^"));
                }
                let digits: String = chars[start..k].iter().map(|&(_, d)| d).collect();
                count = digits.parse().map_err(|_| err(caret, "exponent too large"))?;
                if neg {
                    count = -count;
                }
            }
            let tok = if count < 0 { token.inverse() } else { token };
            tokens.extend(std::iter::repeat_n(tok, count.unsigned_abs() as usize));
        }
        Ok(Self { m, tokens })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn push(&mut self, t: Token) {
        self.tokens.push(t);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.tokens.extend_from_slice(&other.tokens);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.extend_from(other);
        w
    }

    /// Left-to-right product of the letters.
    pub fn eval(&self) -> GroupElement {
        self.tokens
            .iter()
            .fold(GroupElement::identity(self.m), |g, &t| g.step(t))
    }

    /// Signed count of `t` letters.
    pub fn tau(&self) -> i64 {
        self.tokens.iter().map(|t| t.height_delta()).sum()
    }

    /// Maximum of `tau` over all prefixes, the empty prefix included.
    pub fn max_height(&self) -> i64 {
        let mut h = 0;
        let mut best = 0;
        for t in &self.tokens {
            h += t.height_delta();
            best = best.max(h);
        }
        best
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tokens.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<String> = self
            .tokens
            .iter()
            .map(|t| match *t {
                Token::T => "t".to_string(),
                Token::TInv => "T".to_string(),
                Token::Gen(i) => letter_name(i, self.m, false),
                Token::InvGen(i) => letter_name(i, self.m, true),
            })
            .collect();
        let sep = if self.m <= 3 { "" } else { " " };
        f.write_str(&parts.join(sep))
    }
}

impl Word {
    /// Rendering with runs collapsed to powers, e.g. `t^2ab^2TBTab`.
    pub fn to_compact(&self) -> String {
        if self.tokens.is_empty() {
            return "ε".into();
        }
        let name = |t: Token| match t {
            Token::T => "t".to_string(),
            Token::TInv => "T".to_string(),
            Token::Gen(i) => letter_name(i, self.m, false),
            Token::InvGen(i) => letter_name(i, self.m, true),
        };
        let mut parts = Vec::new();
        for run in self.tokens.chunk_by(|a, b| a == b) {
            match run.len() {
                1 => parts.push(name(run[0])),
                k => parts.push(format!("{}^{k}", name(run[0]))),
            }
        }
        let sep = if self.m <= 3 { "" } else { " " };
        parts.join(sep)
    }
}

/// Parses a comma-separated integer vector such as `10,16`.
pub fn parse_vector(text: &str) -> Result<Vec<BigInt>, GroupError> {
    let mut out = Vec::new();
    let mut pos = 0;
    for part in text.split(',') {
        let trimmed = part.trim();
        let v = BigInt::from_str(trimmed).map_err(|_| GroupError::Parse {
            pos,
            msg: format!("not an integer: {trimmed:?}"),
        })?;
        out.push(v);
        pos += part.len() + 1;
    }
    Ok(out)
}
