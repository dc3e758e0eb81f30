//! Directional derivatives of nc polynomials.
//!
//! The derivative of `p` in direction `h` is the coefficient of `t` in `p(x + t h)`: every
//! occurrence of an x-letter is replaced, one at a time, by the h-letter with the same index.
//! Letters of other classes already present are constants.

use crate::error::{NcError, Result};
use crate::freealg::{Letter, LetterClass, NcPoly, Word};

/// One derivative step: sum over x-positions of the word with that letter moved to `to`.
fn derive_into(p: &NcPoly, to: LetterClass) -> NcPoly {
    let mut out = NcPoly::zero(p.g());
    for (w, c) in p.terms() {
        for (pos, l) in w.letters().iter().enumerate() {
            if l.class == LetterClass::X {
                let mut letters = w.letters().to_vec();
                letters[pos] = l.with_class(to);
                out.add_term(Word(letters), c);
            }
        }
    }
    out
}

/// `p^{(k)}(x)[h]`, obtained by differentiating `order` times in the direction `h`.
pub fn directional_derivative(p: &NcPoly, order: usize) -> Result<NcPoly> {
    if order == 0 {
        return Err(NcError::BadOrder);
    }
    let mut q = p.clone();
    for _ in 0..order {
        if q.is_zero() {
            break;
        }
        q = derive_into(&q, LetterClass::H);
    }
    Ok(q)
}

/// First derivative `p'(x)[h]`.
pub fn derivative(p: &NcPoly) -> NcPoly {
    derive_into(p, LetterClass::H)
}

/// The Hessian `p''(x)[h]`, homogeneous of degree two in `h`.
pub fn hessian(p: &NcPoly) -> NcPoly {
    derive_into(&derive_into(p, LetterClass::H), LetterClass::H)
}

/// `p''(x)[h][k]`: the derivative of `p'(x)[h]` in the direction `k`.
pub fn mixed_hessian(p: &NcPoly) -> NcPoly {
    derive_into(&derive_into(p, LetterClass::H), LetterClass::K)
}

/// Symmetric bilinear form `f(x)[h][k]` with `f(x)[h][h] = f(x)[h]` for an `f` homogeneous of
/// degree two in `h`. A monomial `a h_i m h_j b` becomes `½ a k_i m h_j b + ½ a h_i m k_j b`.
pub fn polarize(f: &NcPoly) -> Result<NcPoly> {
    if f.is_zero() {
        return Ok(f.clone());
    }
    if f.h_homogeneous_degree() != Some(2) || f.uses_class(LetterClass::K) {
        return Err(NcError::NotHQuadratic);
    }
    let mut out = NcPoly::zero(f.g());
    for (w, c) in f.terms() {
        for (pos, l) in w.letters().iter().enumerate() {
            if l.class == LetterClass::H {
                let mut letters = w.letters().to_vec();
                letters[pos] = l.with_class(LetterClass::K);
                out.add_term(Word(letters), 0.5 * c);
            }
        }
    }
    Ok(out)
}

/// Replaces every `k`-letter by the `h`-letter with the same index.
pub fn identify_k_with_h(f: &NcPoly) -> NcPoly {
    f.map_letters(|l| match l.class {
        LetterClass::K => Letter::h(l.index),
        _ => l,
    })
}
