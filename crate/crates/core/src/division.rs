//! Division with remainder by an ordered list of polynomials, normal forms
//! against a verified basis, and ideal membership.

use serde::Serialize;
use thiserror::Error;

use crate::buchberger::GroebnerBasis;
use crate::coeff::{Coeff, CoeffError};
use crate::poly::{NcPoly, PolyRing, Term};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisionError {
    #[error("divisor {0} is the zero polynomial")]
    ZeroDivisor(usize),
    #[error("leading coefficients {lc_divisor} (divisor {divisor}) and {lc_target} are incomparable")]
    Incomparable {
        divisor: usize,
        lc_divisor: Coeff,
        lc_target: Coeff,
    },
    #[error("basis is not verified; normal forms are only defined against a closed basis")]
    Unverified,
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// How to treat a divisor whose leading word divides but whose leading
/// coefficient neither divides nor is divisible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivisionMode {
    /// Skip the divisor.
    Plain,
    /// Stop and report the pair so the caller can split the ring.
    Branching,
}

/// One summand `coeff·u·f_divisor·v` of the quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientTerm {
    pub divisor: usize,
    pub u: Word,
    pub v: Word,
    pub coeff: Coeff,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepAction {
    Reduce(QuotientTerm),
    ToRemainder,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub lead: Term,
    pub action: StepAction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionResult {
    pub quotients: Vec<QuotientTerm>,
    pub remainder: NcPoly,
    pub steps: Vec<Step>,
}

impl DivisionResult {
    /// `Σ c·u·f_i·v + r`.
    pub fn reconstruct(&self, pr: &PolyRing, divisors: &[NcPoly]) -> NcPoly {
        self.quotients.iter().fold(self.remainder.clone(), |acc, q| {
            pr.add(&acc, &pr.scaled_sandwich(&q.coeff, &q.u, &divisors[q.divisor], &q.v))
        })
    }
}

/// Step trace in printable form.
#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    pub lead: String,
    pub divisor: Option<usize>,
    pub u: Option<String>,
    pub v: Option<String>,
    pub coeff: Option<String>,
}

impl Step {
    pub fn record(&self, pr: &PolyRing) -> StepRecord {
        let lead = pr.format_term(&self.lead);
        match &self.action {
            StepAction::Reduce(q) => StepRecord {
                lead,
                divisor: Some(q.divisor),
                u: Some(pr.alphabet.format_word(&q.u)),
                v: Some(pr.alphabet.format_word(&q.v)),
                coeff: Some(pr.ring.display(&q.coeff)),
            },
            StepAction::ToRemainder => StepRecord {
                lead,
                divisor: None,
                u: None,
                v: None,
                coeff: None,
            },
        }
    }
}

/// Tries each divisor in list order against the leading term of `h`.
/// Returns the first applicable reduction, `None` if no divisor applies.
pub(crate) fn find_reducer(
    pr: &PolyRing,
    lt: &Term,
    divisors: &[NcPoly],
    mode: DivisionMode,
) -> Result<Option<QuotientTerm>, DivisionError> {
    for (i, g) in divisors.iter().enumerate() {
        let Some(gt) = g.lt() else {
            return Err(DivisionError::ZeroDivisor(i));
        };
        if gt.word.len() > lt.word.len() {
            continue;
        }
        let Some(pos) = lt.word.find(&gt.word) else {
            continue;
        };
        match pr.ring.divides(&gt.coeff, &lt.coeff)? {
            Some(c) => {
                return Ok(Some(QuotientTerm {
                    divisor: i,
                    u: lt.word.prefix(pos),
                    v: lt.word.suffix_from(pos + gt.word.len()),
                    coeff: c,
                }))
            }
            None => {
                if mode == DivisionMode::Branching && pr.ring.divides(&lt.coeff, &gt.coeff)?.is_none() {
                    return Err(DivisionError::Incomparable {
                        divisor: i,
                        lc_divisor: gt.coeff.clone(),
                        lc_target: lt.coeff.clone(),
                    });
                }
            }
        }
    }
    Ok(None)
}

fn run(
    pr: &PolyRing,
    f: &NcPoly,
    divisors: &[NcPoly],
    mode: DivisionMode,
    trace: bool,
) -> Result<DivisionResult, DivisionError> {
    if let Some(i) = divisors.iter().position(NcPoly::is_zero) {
        return Err(DivisionError::ZeroDivisor(i));
    }
    let mut h = f.clone();
    let mut rem: Vec<Term> = Vec::new();
    let mut quotients = Vec::new();
    let mut steps = Vec::new();
    while let Some(lt) = h.lt().cloned() {
        match find_reducer(pr, &lt, divisors, mode)? {
            Some(q) => {
                h = pr.sub_scaled_sandwich(&h, &q.coeff, &q.u, &divisors[q.divisor], &q.v);
                if trace {
                    steps.push(Step {
                        lead: lt,
                        action: StepAction::Reduce(q.clone()),
                    });
                }
                quotients.push(q);
            }
            None => {
                h = pr.drop_leading(h);
                if trace {
                    steps.push(Step {
                        lead: lt.clone(),
                        action: StepAction::ToRemainder,
                    });
                }
                rem.push(lt);
            }
        }
    }
    Ok(DivisionResult {
        quotients,
        remainder: NcPoly::from_sorted(rem),
        steps,
    })
}

/// Divides `f` by `divisors` in list order, leftmost occurrence first.
pub fn divide(pr: &PolyRing, f: &NcPoly, divisors: &[NcPoly]) -> Result<DivisionResult, DivisionError> {
    run(pr, f, divisors, DivisionMode::Plain, false)
}

pub fn divide_with(
    pr: &PolyRing,
    f: &NcPoly,
    divisors: &[NcPoly],
    mode: DivisionMode,
    trace: bool,
) -> Result<DivisionResult, DivisionError> {
    run(pr, f, divisors, mode, trace)
}

/// Remainder only, without quotient bookkeeping.
pub fn remainder(pr: &PolyRing, f: &NcPoly, divisors: &[NcPoly], mode: DivisionMode) -> Result<NcPoly, DivisionError> {
    if let Some(i) = divisors.iter().position(NcPoly::is_zero) {
        return Err(DivisionError::ZeroDivisor(i));
    }
    let mut h = f.clone();
    let mut rem: Vec<Term> = Vec::new();
    while let Some(lt) = h.lt() {
        match find_reducer(pr, lt, divisors, mode)? {
            Some(q) => h = pr.sub_scaled_sandwich(&h, &q.coeff, &q.u, &divisors[q.divisor], &q.v),
            None => {
                rem.push(lt.clone());
                h = pr.drop_leading(h);
            }
        }
    }
    Ok(NcPoly::from_sorted(rem))
}

/// Remainder of `f` by the basis elements whose leading word is at most
/// `LM(f)`. Requires a verified basis.
pub fn normal_form(pr: &PolyRing, f: &NcPoly, g: &GroebnerBasis) -> Result<NcPoly, DivisionError> {
    if !g.verified {
        return Err(DivisionError::Unverified);
    }
    normal_form_unchecked(pr, f, &g.elements)
}

pub(crate) fn normal_form_unchecked(pr: &PolyRing, f: &NcPoly, g: &[NcPoly]) -> Result<NcPoly, DivisionError> {
    let Some(lm) = f.lm() else {
        return Ok(f.clone());
    };
    let restricted: Vec<NcPoly> = g
        .iter()
        .filter(|e| e.lm().is_some_and(|m| pr.order.compare(m, lm).is_le()))
        .cloned()
        .collect();
    remainder(pr, f, &restricted, DivisionMode::Plain)
}

pub fn is_member(pr: &PolyRing, f: &NcPoly, g: &GroebnerBasis) -> Result<bool, DivisionError> {
    Ok(normal_form(pr, f, g)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::RingSpec;
    use crate::ordering::AdmissibleOrder;
    use crate::words::Alphabet;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn ring(r: RingSpec, names: &[&str]) -> PolyRing {
        let a = Alphabet::new(names.iter().copied()).unwrap();
        PolyRing::new(r, AdmissibleOrder::graded_lex_natural(a.len()), a)
    }

    fn p(pr: &PolyRing, terms: &[(i64, &str)]) -> NcPoly {
        pr.from_terms(
            terms
                .iter()
                .map(|(c, s)| (pr.ring.from_int(*c), pr.alphabet.word(s).unwrap())),
        )
    }

    fn q(pr: &PolyRing, divisor: usize, u: &str, v: &str, c: i64) -> QuotientTerm {
        QuotientTerm {
            divisor,
            u: pr.alphabet.word(u).unwrap(),
            v: pr.alphabet.word(v).unwrap(),
            coeff: pr.ring.from_int(c),
        }
    }

    #[test]
    fn z16_example() {
        let pr = ring(RingSpec::modular(16).unwrap(), &["x", "y"]);
        let f = p(&pr, &[(4, "xyxy"), (-2, "xy")]);
        let f1 = p(&pr, &[(3, "yxy"), (1, "xx")]);
        let f2 = p(&pr, &[(2, "yx"), (-6, "y")]);
        let r = divide(&pr, &f, &[f1.clone(), f2.clone()]).unwrap();
        assert_eq!(r.quotients, vec![q(&pr, 0, "x", "", 12)]);
        assert_eq!(pr.format(&r.remainder), "4*x^3 - 2*x*y");
        assert_eq!(r.reconstruct(&pr, &[f1.clone(), f2.clone()]), f);

        let r = divide(&pr, &f, &[f2.clone(), f1.clone()]).unwrap();
        assert_eq!(r.quotients, vec![q(&pr, 0, "x", "y", 2)]);
        assert_eq!(pr.format(&r.remainder), "-4*x*y^2 - 2*x*y");
        assert_eq!(r.remainder, p(&pr, &[(12, "xyy"), (-2, "xy")]));
        assert_eq!(r.reconstruct(&pr, &[f2, f1]), f);
    }

    #[test]
    fn integer_example() {
        let pr = ring(RingSpec::integers(), &["x", "y", "z"]);
        let f = p(&pr, &[(30, "zxxyx")]);
        let f1 = p(&pr, &[(5, "xy"), (-1, "x")]);
        let f2 = p(&pr, &[(3, "xx"), (-1, "xz")]);
        let r = divide(&pr, &f, &[f2.clone(), f1.clone()]).unwrap();
        assert_eq!(r.quotients, vec![q(&pr, 0, "z", "yx", 10)]);
        assert_eq!(r.remainder, p(&pr, &[(10, "zxzyx")]));

        let r = divide(&pr, &f, &[f1.clone(), f2.clone()]).unwrap();
        assert_eq!(r.quotients, vec![q(&pr, 0, "zx", "x", 6), q(&pr, 1, "z", "x", 2)]);
        assert_eq!(r.remainder, p(&pr, &[(2, "zxzx")]));
        assert_eq!(r.reconstruct(&pr, &[f1, f2]), f);
    }

    #[test]
    fn self_division_and_errors() {
        let pr = ring(RingSpec::integers(), &["x", "y"]);
        let f = p(&pr, &[(6, "xy"), (-4, "y")]);
        assert!(divide(&pr, &f, std::slice::from_ref(&f)).unwrap().remainder.is_zero());
        assert_eq!(divide(&pr, &f, &[pr.zero()]), Err(DivisionError::ZeroDivisor(0)));
        let g = p(&pr, &[(4, "x")]);
        let r = divide_with(&pr, &f, std::slice::from_ref(&g), DivisionMode::Plain, true).unwrap();
        assert_eq!(r.remainder, f);
        assert_eq!(r.steps.len(), 2);
        match divide_with(&pr, &f, &[g], DivisionMode::Branching, false) {
            Err(DivisionError::Incomparable {
                lc_divisor, lc_target, ..
            }) => {
                assert_eq!((lc_divisor, lc_target), (Coeff::from(4), Coeff::from(6)))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn trace_is_strictly_decreasing() {
        let pr = ring(RingSpec::modular(16).unwrap(), &["x", "y"]);
        let f = p(&pr, &[(4, "xyxy"), (-2, "xy"), (1, "yyy")]);
        let fs = [p(&pr, &[(2, "yx"), (-6, "y")]), p(&pr, &[(3, "yxy"), (1, "xx")])];
        let r = divide_with(&pr, &f, &fs, DivisionMode::Plain, true).unwrap();
        for w in r.steps.windows(2) {
            assert!(pr.order.compare(&w[0].lead.word, &w[1].lead.word).is_gt());
        }
    }

    fn rings() -> Vec<PolyRing> {
        vec![
            ring(RingSpec::integers(), &["x", "y", "z"]),
            ring(RingSpec::modular(16).unwrap(), &["x", "y", "z"]),
            ring(RingSpec::modular(24).unwrap(), &["x", "y", "z"]),
            ring(RingSpec::localized(vec![BigInt::from(2)]).unwrap(), &["x", "y", "z"]),
        ]
    }

    fn raw_poly(max_terms: usize) -> impl Strategy<Value = Vec<(i64, Vec<u16>)>> {
        prop::collection::vec((-30i64..30, prop::collection::vec(0u16..3, 0..6)), 0..max_terms)
    }

    fn build(pr: &PolyRing, raw: &[(i64, Vec<u16>)]) -> NcPoly {
        pr.from_terms(raw.iter().map(|(c, l)| (pr.ring.from_int(*c), Word::from(l.clone()))))
    }

    proptest! {
        #[test]
        fn reconstruction_and_irreducibility(ri in 0usize..4, f in raw_poly(7),
                                             fs in prop::collection::vec(raw_poly(4), 1..4)) {
            let pr = &rings()[ri];
            let f = build(pr, &f);
            let fs: Vec<NcPoly> = fs.iter().map(|r| build(pr, r)).filter(|g| !g.is_zero()).collect();
            prop_assume!(!fs.is_empty());
            let r = divide(pr, &f, &fs).unwrap();
            prop_assert_eq!(r.reconstruct(pr, &fs), f.clone());
            for t in r.remainder.terms() {
                prop_assert!(find_reducer(pr, t, &fs, DivisionMode::Plain).unwrap().is_none());
            }
            let lm = f.lm();
            for qt in &r.quotients {
                let w = fs[qt.divisor].lm().unwrap().sandwich(&qt.u, &qt.v);
                prop_assert!(pr.order.compare(lm.unwrap(), &w).is_ge());
            }
            prop_assert_eq!(remainder(pr, &f, &fs, DivisionMode::Plain).unwrap(), r.remainder);
        }
    }
}
