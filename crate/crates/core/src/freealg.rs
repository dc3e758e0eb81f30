//! Words and real polynomials in symmetric non-commuting letters.
//!
//! Letters come in three classes: `x` (the variables), `h` (a direction) and `k` (a second
//! direction, only produced by mixed Hessians). Every letter is symmetric, so the involution
//! reverses words. Words are ordered graded-lexicographically with
//! `x1 < … < xg < h1 < … < hg < k1 < … < kg`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{NcError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LetterClass {
    X,
    H,
    K,
}

impl LetterClass {
    pub fn symbol(self) -> char {
        match self {
            LetterClass::X => 'x',
            LetterClass::H => 'h',
            LetterClass::K => 'k',
        }
    }
}

/// A symmetric letter. `index` is zero-based; it prints one-based (`x1` has index 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub class: LetterClass,
    pub index: usize,
}

impl Letter {
    pub fn x(index: usize) -> Self {
        Letter {
            class: LetterClass::X,
            index,
        }
    }

    pub fn h(index: usize) -> Self {
        Letter {
            class: LetterClass::H,
            index,
        }
    }

    pub fn k(index: usize) -> Self {
        Letter {
            class: LetterClass::K,
            index,
        }
    }

    pub fn with_class(self, class: LetterClass) -> Self {
        Letter { class, ..self }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.class.symbol(), self.index + 1)
    }
}

/// A finite sequence of letters; the empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        Word(letters.into_iter().collect())
    }

    /// Word in x-letters given by zero-based indices.
    pub fn x_word(indices: &[usize]) -> Self {
        Word(indices.iter().map(|&i| Letter::x(i)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn transpose(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn count_class(&self, class: LetterClass) -> usize {
        self.0.iter().filter(|l| l.class == class).count()
    }

    /// All x-words of length `len` over `g` letters, in lexicographic order.
    pub fn all_x_words(g: usize, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * g);
            for w in &out {
                for j in 0..g {
                    let mut v = w.0.clone();
                    v.push(Letter::x(j));
                    next.push(Word(v));
                }
            }
            out = next;
        }
        out
    }

    /// All x-words of length at most `max_len`, graded-lex.
    pub fn x_words_up_to(g: usize, max_len: usize) -> Vec<Word> {
        (0..=max_len).flat_map(|l| Word::all_x_words(g, l)).collect()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{l}^{run}")?;
            } else {
                write!(f, "{l}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Real polynomial in symmetric non-commuting letters with `g` indices per class.
///
/// No zero coefficients are stored. Two polynomials are equal when they have the same `g`
/// and identical coefficient maps.
#[derive(Clone, Debug, PartialEq)]
pub struct NcPoly {
    g: usize,
    terms: BTreeMap<Word, f64>,
}

/// Degree bookkeeping of a polynomial; `None` for the zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub degree: Option<usize>,
    pub x_degree: Option<usize>,
    pub h_degree: Option<usize>,
    pub k_degree: Option<usize>,
    /// `Some(m)` when every term has exactly `m` h-letters.
    pub h_homogeneous: Option<usize>,
    pub symmetric: bool,
}

impl NcPoly {
    pub fn zero(g: usize) -> Self {
        NcPoly {
            g,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(g: usize, c: f64) -> Self {
        NcPoly::monomial(g, Word::empty(), c)
    }

    pub fn one(g: usize) -> Self {
        NcPoly::constant(g, 1.0)
    }

    pub fn monomial(g: usize, word: Word, c: f64) -> Self {
        let mut p = NcPoly::zero(g);
        p.add_term(word, c);
        p
    }

    pub fn letter(g: usize, letter: Letter) -> Self {
        NcPoly::monomial(g, Word(vec![letter]), 1.0)
    }

    /// The variable `x_{j+1}`.
    pub fn x(g: usize, j: usize) -> Self {
        NcPoly::letter(g, Letter::x(j))
    }

    pub fn h(g: usize, j: usize) -> Self {
        NcPoly::letter(g, Letter::h(j))
    }

    pub fn from_terms(g: usize, terms: impl IntoIterator<Item = (Word, f64)>) -> Self {
        let mut p = NcPoly::zero(g);
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn g(&self) -> usize {
        self.g
    }

    /// Accumulates `c·w`, dropping the term if it cancels.
    pub fn add_term(&mut self, word: Word, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(existing) => {
                *existing += c;
                if *existing == 0.0 {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, f64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn coeff(&self, w: &Word) -> f64 {
        self.terms.get(w).copied().unwrap_or(0.0)
    }

    pub fn constant_term(&self) -> f64 {
        self.coeff(&Word::empty())
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn class_degree(&self, class: LetterClass) -> Option<usize> {
        self.terms.keys().map(|w| w.count_class(class)).max()
    }

    pub fn x_degree(&self) -> Option<usize> {
        self.class_degree(LetterClass::X)
    }

    pub fn h_degree(&self) -> Option<usize> {
        self.class_degree(LetterClass::H)
    }

    /// `Some(m)` when every term has exactly `m` h-letters (and the polynomial is nonzero).
    pub fn h_homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|w| w.count_class(LetterClass::H));
        let first = it.next()?;
        it.all(|m| m == first).then_some(first)
    }

    pub fn uses_class(&self, class: LetterClass) -> bool {
        self.terms
            .keys()
            .any(|w| w.0.iter().any(|l| l.class == class))
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        DegreeProfile {
            degree: self.degree(),
            x_degree: self.x_degree(),
            h_degree: self.h_degree(),
            k_degree: self.class_degree(LetterClass::K),
            h_homogeneous: self.h_homogeneous_degree(),
            symmetric: self.is_symmetric(),
        }
    }

    pub fn transpose(&self) -> NcPoly {
        NcPoly::from_terms(self.g, self.terms.iter().map(|(w, &c)| (w.transpose(), c)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms
            .iter()
            .all(|(w, &c)| self.terms.get(&w.transpose()) == Some(&c))
    }

    /// Largest coefficient magnitude, 0 for the zero polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn check_g(&self, other: &NcPoly) -> Result<()> {
        if self.g == other.g {
            Ok(())
        } else {
            Err(NcError::MismatchedG(self.g, other.g))
        }
    }

    pub fn try_add(&self, other: &NcPoly) -> Result<NcPoly> {
        self.check_g(other)?;
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &NcPoly) -> Result<NcPoly> {
        self.check_g(other)?;
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &NcPoly) -> Result<NcPoly> {
        self.check_g(other)?;
        let mut out = NcPoly::zero(self.g);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term(a.concat(b), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> NcPoly {
        NcPoly::from_terms(self.g, self.terms.iter().map(|(w, &c)| (w.clone(), c * s)))
    }

    pub fn pow(&self, e: u32) -> NcPoly {
        let mut out = NcPoly::one(self.g);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Replaces every letter through `f`; used to rename letter classes.
    pub fn map_letters(&self, f: impl Fn(Letter) -> Letter) -> NcPoly {
        NcPoly::from_terms(
            self.g,
            self.terms
                .iter()
                .map(|(w, &c)| (Word(w.0.iter().map(|&l| f(l)).collect()), c)),
        )
    }

    /// Coefficient-wise comparison up to `tol` in absolute value.
    pub fn approx_eq(&self, other: &NcPoly, tol: f64) -> bool {
        self.g == other.g && self.try_sub(other).map(|d| d.max_abs_coeff() <= tol).unwrap_or(false)
    }
}

impl Add for &NcPoly {
    type Output = NcPoly;
    /// Panics when the variable counts differ; use [`NcPoly::try_add`] to handle that case.
    fn add(self, rhs: &NcPoly) -> NcPoly {
        self.try_add(rhs).expect("adding polynomials with different g")
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        self.try_sub(rhs).expect("subtracting polynomials with different g")
    }
}

impl Mul for &NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        self.try_mul(rhs).expect("multiplying polynomials with different g")
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        self.scale(-1.0)
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, &c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else if c < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1.0 {
                write!(f, "{w}")?;
            } else {
                write!(f, "{mag}*{w}")?;
            }
        }
        Ok(())
    }
}

/// Which letter classes the parser accepts besides `x`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    pub allow_h: bool,
    pub allow_k: bool,
}

impl ParseOptions {
    pub const X_ONLY: ParseOptions = ParseOptions {
        allow_h: false,
        allow_k: false,
    };
    pub const WITH_H: ParseOptions = ParseOptions {
        allow_h: true,
        allow_k: false,
    };
    pub const ALL: ParseOptions = ParseOptions {
        allow_h: true,
        allow_k: true,
    };
}

impl NcPoly {
    /// Parses an expression in the letters `x1..xg` only.
    pub fn parse(text: &str, g: usize) -> Result<NcPoly> {
        Self::parse_with(text, g, ParseOptions::X_ONLY)
    }

    /// Parses with the grammar
    ///
    /// ```text
    /// expr   := term (("+" | "-") term)*
    /// term   := factor ("*" factor)*
    /// factor := "-" factor | "+" factor | atom postfix*
    /// atom   := number | var | "(" expr ")"
    /// postfix:= "^" uint | "'"
    /// var    := ("x" | "h" | "k") uint
    /// ```
    ///
    /// A bare `x` (or `h`, `k`) means index 1 and is accepted only when `g == 1`.
    pub fn parse_with(text: &str, g: usize, opts: ParseOptions) -> Result<NcPoly> {
        let tokens = lex(text)?;
        let mut parser = Parser {
            tokens,
            pos: 0,
            g,
            opts,
            end: text.len(),
        };
        let p = parser.expr()?;
        if let Some(t) = parser.peek() {
            return Err(NcError::Parse {
                pos: t.pos,
                msg: format!("unexpected {:?}", t.kind),
            });
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum TokKind {
    Num(f64),
    Var(LetterClass, Option<usize>),
    Plus,
    Minus,
    Star,
    Caret,
    Prime,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Tok {
    kind: TokKind,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push(Tok { kind: TokKind::Plus, pos: start }),
            '-' => out.push(Tok { kind: TokKind::Minus, pos: start }),
            '*' => out.push(Tok { kind: TokKind::Star, pos: start }),
            '^' => out.push(Tok { kind: TokKind::Caret, pos: start }),
            '\'' => out.push(Tok { kind: TokKind::Prime, pos: start }),
            '(' => out.push(Tok { kind: TokKind::LParen, pos: start }),
            ')' => out.push(Tok { kind: TokKind::RParen, pos: start }),
            'x' | 'h' | 'k' => {
                let class = match c {
                    'x' => LetterClass::X,
                    'h' => LetterClass::H,
                    _ => LetterClass::K,
                };
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let index = if j > i + 1 {
                    Some(text[i + 1..j].parse::<usize>().map_err(|e| NcError::Parse {
                        pos: start,
                        msg: e.to_string(),
                    })?)
                } else {
                    None
                };
                out.push(Tok {
                    kind: TokKind::Var(class, index),
                    pos: start,
                });
                i = j;
                continue;
            }
            d if d.is_ascii_digit() || d == '.' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_digit() || bytes[j] == b'.') {
                    j += 1;
                }
                if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        while k < bytes.len() && bytes[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    }
                }
                let value = text[i..j].parse::<f64>().map_err(|_| NcError::Parse {
                    pos: start,
                    msg: format!("malformed number '{}'", &text[i..j]),
                })?;
                out.push(Tok {
                    kind: TokKind::Num(value),
                    pos: start,
                });
                i = j;
                continue;
            }
            other => {
                return Err(NcError::Parse {
                    pos: start,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
    g: usize,
    opts: ParseOptions,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> usize {
        self.peek().map(|t| t.pos).unwrap_or(self.end)
    }

    fn eat(&mut self, kind: &TokKind) -> bool {
        if self.peek().map(|t| &t.kind) == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<NcPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&TokKind::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&TokKind::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<NcPoly> {
        let mut acc = self.factor()?;
        while self.eat(&TokKind::Star) {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<NcPoly> {
        if self.eat(&TokKind::Minus) {
            return Ok(-&self.factor()?);
        }
        if self.eat(&TokKind::Plus) {
            return self.factor();
        }
        let mut base = self.atom()?;
        loop {
            if self.eat(&TokKind::Caret) {
                let pos = self.here();
                match self.peek().map(|t| t.kind.clone()) {
                    Some(TokKind::Num(v)) if v >= 0.0 && v.fract() == 0.0 && v <= 64.0 => {
                        self.pos += 1;
                        base = base.pow(v as u32);
                    }
                    _ => {
                        return Err(NcError::Parse {
                            pos,
                            msg: "expected a nonnegative integer exponent".into(),
                        })
                    }
                }
            } else if self.eat(&TokKind::Prime) {
                base = base.transpose();
            } else {
                return Ok(base);
            }
        }
    }

    fn atom(&mut self) -> Result<NcPoly> {
        let pos = self.here();
        let Some(tok) = self.peek().cloned() else {
            return Err(NcError::Parse {
                pos,
                msg: "unexpected end of input".into(),
            });
        };
        self.pos += 1;
        match tok.kind {
            TokKind::Num(v) => Ok(NcPoly::constant(self.g, v)),
            TokKind::Var(class, index) => {
                match class {
                    LetterClass::H if !self.opts.allow_h => return Err(NcError::ClassNotAllowed('h')),
                    LetterClass::K if !self.opts.allow_k => return Err(NcError::ClassNotAllowed('k')),
                    _ => {}
                }
                let index = match index {
                    Some(i) => i,
                    None if self.g == 1 => 1,
                    None => {
                        return Err(NcError::Parse {
                            pos,
                            msg: "variable needs an index when g > 1".into(),
                        })
                    }
                };
                if index == 0 || index > self.g {
                    return Err(NcError::IndexOutOfRange { index, g: self.g });
                }
                Ok(NcPoly::letter(
                    self.g,
                    Letter {
                        class,
                        index: index - 1,
                    },
                ))
            }
            TokKind::LParen => {
                let inner = self.expr()?;
                if !self.eat(&TokKind::RParen) {
                    return Err(NcError::Parse {
                        pos: self.here(),
                        msg: "expected ')'".into(),
                    });
                }
                Ok(inner)
            }
            other => Err(NcError::Parse {
                pos,
                msg: format!("unexpected {other:?}"),
            }),
        }
    }
}
