mod common;

use nalgebra::DMatrix;
use nccurv::calculus::{derivative, directional_derivative, hessian, identify_k_with_h, mixed_hessian, polarize};
use nccurv::mateval::{eval, Assignment};
use nccurv::random::{goe, stream_rng};
use nccurv::{Letter, LetterClass, NcPoly, ParseOptions, Word};
use proptest::prelude::*;

fn letter_strategy(g: usize, classes: usize) -> impl Strategy<Value = Letter> {
    (0..classes, 0..g).prop_map(|(c, i)| match c {
        0 => Letter::x(i),
        1 => Letter::h(i),
        _ => Letter::k(i),
    })
}

fn poly_strategy(g: usize, classes: usize, max_len: usize) -> impl Strategy<Value = NcPoly> {
    prop::collection::vec(
        (prop::collection::vec(letter_strategy(g, classes), 0..=max_len), -50i32..=50, 0u32..3),
        0..6,
    )
    .prop_map(move |terms| {
        NcPoly::from_terms(
            g,
            terms
                .into_iter()
                .map(|(w, c, e)| (Word(w), c as f64 / 2f64.powi(e as i32))),
        )
    })
}

fn x_poly(g: usize, max_len: usize) -> impl Strategy<Value = NcPoly> {
    poly_strategy(g, 1, max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn print_parse_round_trip(p in poly_strategy(3, 3, 5)) {
        let text = p.to_string();
        let back = NcPoly::parse_with(&text, 3, ParseOptions::ALL).unwrap();
        prop_assert_eq!(back, p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn round_trip_with_arbitrary_coefficients(c in -1e6f64..1e6, e in 0u32..6) {
        let p = NcPoly::from_terms(2, [(Word::x_word(&[0, 1, 1]), c), (Word::x_word(&[1]), c * 1e-7)])
            .pow(e);
        prop_assert_eq!(NcPoly::parse(&p.to_string(), 2).unwrap(), p);
    }

    #[test]
    fn transpose_laws(p in poly_strategy(2, 3, 4), q in poly_strategy(2, 3, 4)) {
        prop_assert_eq!((&p * &q).transpose(), &q.transpose() * &p.transpose());
        prop_assert_eq!((&p + &q).transpose(), &p.transpose() + &q.transpose());
        prop_assert_eq!(p.transpose().transpose(), p.clone());
        prop_assert!((&p + &p.transpose()).is_symmetric());
    }

    #[test]
    fn ring_laws(p in x_poly(2, 3), q in x_poly(2, 3), r in x_poly(2, 3)) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn product_rule(p in x_poly(3, 3), q in x_poly(3, 3)) {
        let lhs = derivative(&(&p * &q));
        let rhs = &(&derivative(&p) * &q) + &(&p * &derivative(&q));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_of_transpose(p in x_poly(2, 4)) {
        prop_assert_eq!(derivative(&p.transpose()), derivative(&p).transpose());
    }

    #[test]
    fn polarization_recovers_quadratic(p in x_poly(2, 5)) {
        let f = hessian(&p);
        let b = polarize(&f).unwrap();
        prop_assert_eq!(identify_k_with_h(&b), f);
        prop_assert_eq!(b, mixed_hessian(&p));
    }

    #[test]
    fn degree_drops_by_order(p in x_poly(2, 5), k in 1usize..7) {
        let dk = directional_derivative(&p, k).unwrap();
        match p.degree() {
            Some(d) if d >= k => {
                prop_assert!(dk.degree().unwrap_or(0) <= d);
                prop_assert!(dk.terms().all(|(w, _)| w.count_class(LetterClass::H) == k));
            }
            _ => prop_assert!(dk.is_zero()),
        }
    }
}

fn sym(n: usize, seed: u64, i: u64) -> DMatrix<f64> {
    goe(n, &mut stream_rng(seed, i))
}

/// `p(X + tH) = Σ_k t^k/k! p^{(k)}(X)[H]`, compared against direct evaluation.
#[test]
fn derivatives_match_taylor_expansion() {
    for seed in 0..200u64 {
        let mut rng = stream_rng(seed, 99);
        let g = 1 + (seed % 3) as usize;
        let d = 1 + (seed % 5) as usize;
        let n = 1 + (seed % 4) as usize;
        let p = nccurv::random::poly(g, d, &mut rng);
        let x: Vec<_> = (0..g).map(|j| sym(n, seed, 10 + j as u64)).collect();
        let h: Vec<_> = (0..g).map(|j| sym(n, seed, 20 + j as u64)).collect();
        for &t in &[0.37, -1.3] {
            let shifted: Vec<_> = x.iter().zip(&h).map(|(a, b)| a + b * t).collect();
            let direct = eval(&p, &Assignment::x(&shifted)).unwrap();
            let mut series = eval(&p, &Assignment::x(&x)).unwrap();
            let mut fact = 1.0;
            for k in 1..=d {
                fact *= k as f64;
                let dk = directional_derivative(&p, k).unwrap();
                series += eval(&dk, &Assignment::xh(&x, &h)).unwrap() * (t.powi(k as i32) / fact);
            }
            let scale = 1.0 + direct.amax();
            assert!((direct - series).amax() < 1e-10 * scale, "seed {seed}");
        }
    }
}

#[test]
fn evaluation_is_a_homomorphism() {
    for seed in 0..200u64 {
        let mut rng = stream_rng(seed, 7);
        let g = 1 + (seed % 3) as usize;
        let p = nccurv::random::poly(g, 3, &mut rng);
        let q = nccurv::random::poly(g, 3, &mut rng);
        let x: Vec<_> = (0..g).map(|j| sym(3, seed, 30 + j as u64)).collect();
        let a = Assignment::x(&x);
        let (ep, eq) = (eval(&p, &a).unwrap(), eval(&q, &a).unwrap());
        assert!((eval(&(&p * &q), &a).unwrap() - &ep * &eq).amax() < 1e-9);
        assert!((eval(&(&p + &q), &a).unwrap() - (&ep + &eq)).amax() < 1e-12);
        assert!((eval(&p.transpose(), &a).unwrap() - ep.transpose()).amax() < 1e-12);
    }
}
