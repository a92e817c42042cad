#![allow(dead_code)]

use ncgb::buchberger::{buchberger, GroebnerBasis, Limits, Status};
use ncgb::coeff::RingSpec;
use ncgb::ordering::AdmissibleOrder;
use ncgb::par::Exec;
use ncgb::poly::{NcPoly, PolyRing};
use ncgb::words::{Alphabet, Word};
use rand::Rng;

pub fn ring(r: RingSpec, names: &[&str]) -> PolyRing {
    let a = Alphabet::new(names.iter().copied()).unwrap();
    PolyRing::new(r, AdmissibleOrder::graded_lex_natural(a.len()), a)
}

pub fn ring_with_order(r: RingSpec, names: &[&str], chain: &[&str]) -> PolyRing {
    let a = Alphabet::new(names.iter().copied()).unwrap();
    let prec = chain.iter().map(|n| a.index_of(n).unwrap()).collect();
    PolyRing::new(r, AdmissibleOrder::graded_lex(prec).unwrap(), a)
}

pub fn w(pr: &PolyRing, s: &str) -> Word {
    pr.alphabet.word(s).unwrap()
}

pub fn p(pr: &PolyRing, terms: &[(i64, &str)]) -> NcPoly {
    pr.from_terms(terms.iter().map(|(c, s)| (pr.ring.from_int(*c), w(pr, s))))
}

pub fn frac(pr: &PolyRing, terms: &[(i64, i64, &str)]) -> NcPoly {
    pr.from_terms(
        terms
            .iter()
            .map(|(n, d, s)| (pr.ring.from_ratio((*n).into(), (*d).into()).unwrap(), w(pr, s))),
    )
}

pub fn random_word<R: Rng>(rng: &mut R, letters: usize, min: usize, max: usize) -> Word {
    let len = rng.gen_range(min..=max);
    Word::from((0..len).map(|_| rng.gen_range(0..letters) as u16).collect::<Vec<_>>())
}

pub fn random_poly<R: Rng>(rng: &mut R, pr: &PolyRing, max_terms: usize, max_len: usize, coeff: i64) -> NcPoly {
    let n = rng.gen_range(1..=max_terms);
    pr.from_terms((0..n).map(|_| {
        let c = rng.gen_range(-coeff..=coeff);
        (pr.ring.from_int(c), random_word(rng, pr.alphabet.len(), 0, max_len))
    }))
}

/// `Σ c·u·g·v` with random generators and cofactors, keeping every word at
/// most `max_len` long.
pub fn random_member<R: Rng>(rng: &mut R, pr: &PolyRing, gens: &[NcPoly], pieces: usize, max_len: usize) -> NcPoly {
    let mut acc = pr.zero();
    for _ in 0..pieces {
        let g = &gens[rng.gen_range(0..gens.len())];
        let room = max_len.saturating_sub(g.max_word_len());
        let u = random_word(rng, pr.alphabet.len(), 0, room);
        let v = random_word(rng, pr.alphabet.len(), 0, room - u.len());
        let c = pr.ring.from_int(rng.gen_range(-20i64..=20));
        acc = pr.add(&acc, &pr.scaled_sandwich(&c, &u, g, &v));
    }
    acc
}

/// A random ideal over `pr` whose completion finishes and verifies.
pub fn random_verified_basis<R: Rng>(rng: &mut R, pr: &PolyRing) -> (Vec<NcPoly>, GroebnerBasis) {
    let lim = Limits {
        max_word_length: 7,
        max_basis_size: 12,
        max_iterations: 400,
    };
    loop {
        let k = rng.gen_range(1..=2);
        let gens: Vec<NcPoly> = (0..k)
            .map(|_| random_poly(rng, pr, 3, 3, 12))
            .filter(|g| !g.is_zero())
            .collect();
        if gens.is_empty() {
            continue;
        }
        let g = buchberger(pr, &gens, lim, Exec::Sequential).unwrap();
        if g.status == Status::Complete && g.verified && !g.elements.is_empty() && g.elements.len() <= 4 {
            return (gens, g);
        }
    }
}
