//! Dynamical bases: CRT decomposition over `Z/n` and gcd branching over
//! localizations of Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::buchberger::{self, overlap_relation, BuchbergerError, Completion, GroebnerBasis, Limits, Split, Status};
use crate::coeff::{crt_factor, crt_lift, gcd_split, Coeff, CoeffError, PrimePower, RingSpec};
use crate::division::{self, DivisionError};
use crate::par::Exec;
use crate::poly::{NcPoly, PolyError, PolyRing};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicalError {
    #[error("CRT decomposition needs a ring Z/n, got {0}")]
    NotModular(String),
    #[error("branching needs Z or a localization of Z, got {0}")]
    NotIntegral(String),
    #[error("no leaves or components given")]
    Empty,
    #[error("{0} does not divide {1}")]
    NotDivisible(String, String),
    #[error("split of {0} and {1} produced a unit factor")]
    DegenerateSplit(BigInt, BigInt),
    #[error(transparent)]
    Buchberger(#[from] BuchbergerError),
    #[error(transparent)]
    Division(#[from] DivisionError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Membership verdict; `at_bound` is set when some local basis was
/// truncated, so a negative answer is only valid up to the limits used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub member: bool,
    pub at_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtComponent {
    pub factor: PrimePower,
    pub ring: PolyRing,
    /// The generators reduced modulo the prime power.
    pub projected: Vec<NcPoly>,
    pub basis: GroebnerBasis,
}

/// Projections of `inputs` into each `Z/p^a` with `p^a ‖ n`.
pub fn crt_project(
    pr: &PolyRing,
    inputs: &[NcPoly],
) -> Result<Vec<(PrimePower, PolyRing, Vec<NcPoly>)>, DynamicalError> {
    let n = pr
        .ring
        .modulus()
        .ok_or_else(|| DynamicalError::NotModular(pr.ring.to_string()))?;
    crt_factor(n)?
        .into_iter()
        .map(|pp| {
            let local = pr.with_ring(RingSpec::modular(pp.value.clone())?);
            let proj = inputs
                .iter()
                .map(|f| local.project(f, &pr.ring))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((pp, local, proj))
        })
        .collect()
}

/// Completes each CRT component independently.
pub fn crt_basis(
    pr: &PolyRing,
    inputs: &[NcPoly],
    lim: Limits,
    exec: Exec,
) -> Result<Vec<CrtComponent>, DynamicalError> {
    let parts = crt_project(pr, inputs)?;
    let bases = exec.map(&parts, |(_, local, proj)| {
        buchberger::buchberger(local, proj, lim, exec)
    });
    parts
        .into_iter()
        .zip(bases)
        .map(|((factor, ring, projected), b)| {
            Ok(CrtComponent {
                factor,
                ring,
                projected,
                basis: b?,
            })
        })
        .collect()
}

fn local_normal_form(pr: &PolyRing, f: &NcPoly, g: &GroebnerBasis) -> Result<NcPoly, DivisionError> {
    if g.verified {
        division::normal_form(pr, f, g)
    } else {
        division::normal_form_unchecked(pr, f, &g.elements)
    }
}

/// `f ∈ I` iff every projection of `f` reduces to zero in its component.
pub fn crt_member(pr: &PolyRing, f: &NcPoly, comps: &[CrtComponent]) -> Result<Verdict, DynamicalError> {
    if comps.is_empty() {
        return Err(DynamicalError::Empty);
    }
    let at_bound = comps.iter().any(|c| !c.basis.verified);
    for c in comps {
        let local = c.ring.project(f, &pr.ring)?;
        if !local_normal_form(&c.ring, &local, &c.basis)?.is_zero() {
            return Ok(Verdict {
                member: false,
                at_bound,
            });
        }
    }
    Ok(Verdict { member: true, at_bound })
}

/// Per-component normal forms of `f`, in component order.
pub fn crt_normal_forms(pr: &PolyRing, f: &NcPoly, comps: &[CrtComponent]) -> Result<Vec<NcPoly>, DynamicalError> {
    comps
        .iter()
        .map(|c| {
            let local = c.ring.project(f, &pr.ring)?;
            Ok(local_normal_form(&c.ring, &local, &c.basis)?)
        })
        .collect()
}

/// Glues one polynomial per component back into `Z/n` word by word.
pub fn crt_lift_poly(pr: &PolyRing, comps: &[CrtComponent], parts: &[NcPoly]) -> Result<NcPoly, DynamicalError> {
    let mut words: Vec<Word> = parts
        .iter()
        .flat_map(|p| p.terms().iter().map(|t| t.word.clone()))
        .collect();
    words.sort();
    words.dedup();
    let mut terms = Vec::with_capacity(words.len());
    for w in words {
        let residues: Vec<(BigInt, BigInt)> = comps
            .iter()
            .zip(parts)
            .map(|(c, p)| {
                let v = p.coeff_of(&w).map_or_else(BigInt::zero, |c| c.numer().clone());
                (v, c.factor.value.clone())
            })
            .collect();
        terms.push((pr.ring.from_int(crt_lift(&residues)?), w));
    }
    Ok(pr.from_terms(terms))
}

/// One split decision: `a` and `b` were incomparable; the leaf inverted
/// `inverted`, which is `a'` or `b'` from `gcd_split(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchChoice {
    pub a: String,
    pub b: String,
    pub inverted: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchLeaf {
    /// Generators of the multiplicative set; empty means Z itself.
    pub generators: Vec<BigInt>,
    pub ring: PolyRing,
    pub basis: GroebnerBasis,
    pub path: Vec<BranchChoice>,
}

fn integral(pr: &PolyRing) -> Result<(), DynamicalError> {
    if pr.ring.is_integral() {
        Ok(())
    } else {
        Err(DynamicalError::NotIntegral(pr.ring.to_string()))
    }
}

/// The coprime factors to invert when `a` and `b` are incomparable:
/// `(a', b')` from the non-unit parts of `a` and `b`.
fn split_factors(r: &RingSpec, s: &Split) -> Result<(BigInt, BigInt), DynamicalError> {
    let (a0, b0) = (r.non_unit_part(&s.a), r.non_unit_part(&s.b));
    let (_, a1, b1) = gcd_split(&a0, &b0)?;
    if a1.is_one() || b1.is_one() {
        return Err(DynamicalError::DegenerateSplit(a0, b0));
    }
    Ok((a1, b1))
}

fn grow(
    mut state: Completion,
    path: Vec<BranchChoice>,
    lim: Limits,
    exec: Exec,
) -> Result<Vec<BranchLeaf>, DynamicalError> {
    let status = match state.run(exec) {
        Ok(s) => s,
        Err(split) => {
            if path.len() >= lim.max_iterations {
                state.abandon();
                Status::Truncated
            } else {
                let ring = state.pr.ring.clone();
                let (a1, b1) = split_factors(&ring, &split)?;
                let mk = |inv: &BigInt| -> Result<(Completion, Vec<BranchChoice>), DynamicalError> {
                    let mut child = state.clone();
                    child.rebase(ring.invert(inv)?);
                    let mut p = path.clone();
                    p.push(BranchChoice {
                        a: split.a.to_string(),
                        b: split.b.to_string(),
                        inverted: inv.to_string(),
                    });
                    Ok((child, p))
                };
                let (ca, pa) = mk(&a1)?;
                let (cb, pb) = mk(&b1)?;
                let (la, lb) = exec.join(|| grow(ca, pa, lim, exec), || grow(cb, pb, lim, exec));
                let mut out = la?;
                out.extend(lb?);
                return Ok(out);
            }
        }
    };
    Ok(vec![BranchLeaf {
        generators: state.pr.ring.generators().to_vec(),
        ring: state.pr.clone(),
        basis: state.finish(status),
        path,
    }])
}

/// Runs completion over Z (or a localization), forking the ring at every
/// pair of incomparable leading coefficients. Leaves come in path order,
/// the `a'` branch before the `b'` branch.
pub fn dynamical_basis(
    pr: &PolyRing,
    inputs: &[NcPoly],
    lim: Limits,
    exec: Exec,
) -> Result<Vec<BranchLeaf>, DynamicalError> {
    lim.validate()?;
    integral(pr)?;
    let state = Completion::new(pr.clone(), inputs, lim, true);
    grow(state, Vec::new(), lim, exec)
}

/// Overlap relation with branching: one `(ring, relation)` per leaf needed
/// to make the leading coefficients comparable.
pub fn branch_overlap(
    pr: &PolyRing,
    f: &NcPoly,
    g: &NcPoly,
    p: &Word,
    q: &Word,
) -> Result<Vec<(RingSpec, NcPoly)>, DynamicalError> {
    integral(pr)?;
    match overlap_relation(pr, f, g, p, q) {
        Ok(o) => Ok(vec![(pr.ring.clone(), o)]),
        Err(BuchbergerError::Incomparable(a, b)) => {
            let (a1, b1) = split_factors(&pr.ring, &Split { a, b })?;
            let mut out = Vec::new();
            for inv in [a1, b1] {
                let child = pr.with_ring(pr.ring.invert(&inv)?);
                out.extend(branch_overlap(&child, f, g, p, q)?);
            }
            Ok(out)
        }
        Err(e) => Err(e.into()),
    }
}

/// Outcome of one division step of `f` by `g` in a leaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BranchStep {
    /// `LT(g)` divides `LT(f)`: `result = f − quotient·u·g·v`.
    Reduced {
        ring: RingSpec,
        quotient: Coeff,
        result: NcPoly,
    },
    /// `LT(g)` does not divide `LT(f)`; the term is final for this divisor.
    Final { ring: RingSpec },
}

/// One division step of `f` by `g` (`LM(g) | LM(f)`), splitting when the
/// leading coefficients are incomparable. With `gcd_split(a, b) = (d, a', b')`
/// for `LC(f) = a`, `LC(g) = b`: inverting `b'` makes `b | a` and the step
/// reduces with quotient `a'/b'`; inverting `a'` leaves the term final.
pub fn branch_divide(pr: &PolyRing, f: &NcPoly, g: &NcPoly) -> Result<Vec<BranchStep>, DynamicalError> {
    integral(pr)?;
    let (mf, cf, _) = pr.leading(f)?;
    let (mg, cg, _) = pr.leading(g)?;
    let pos = mf
        .find(mg)
        .ok_or_else(|| DynamicalError::NotDivisible(pr.alphabet.format_word(mg), pr.alphabet.format_word(mf)))?;
    let (u, v) = (mf.prefix(pos), mf.suffix_from(pos + mg.len()));
    if let Some(c) = pr.ring.divides(cg, cf)? {
        let result = pr.sub_scaled_sandwich(f, &c, &u, g, &v);
        return Ok(vec![BranchStep::Reduced {
            ring: pr.ring.clone(),
            quotient: c,
            result,
        }]);
    }
    if pr.ring.divides(cf, cg)?.is_some() {
        return Ok(vec![BranchStep::Final { ring: pr.ring.clone() }]);
    }
    let (a1, b1) = split_factors(
        &pr.ring,
        &Split {
            a: cf.clone(),
            b: cg.clone(),
        },
    )?;
    let mut out = Vec::new();
    for inv in [a1, b1] {
        let child = pr.with_ring(pr.ring.invert(&inv)?);
        out.extend(branch_divide(&child, f, g)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comaximality {
    pub comaximal: bool,
    /// Product of each leaf's generators.
    pub products: Vec<String>,
    /// `v_i` with `Σ v_i·products_i = 1` when comaximal.
    pub bezout: Option<Vec<String>>,
}

/// Checks that the per-leaf generator products have gcd 1.
pub fn comaximal_check(generator_sets: &[Vec<BigInt>]) -> Comaximality {
    let products: Vec<BigInt> = generator_sets
        .iter()
        .map(|g| g.iter().fold(BigInt::one(), |acc, x| acc * x))
        .collect();
    // Running extended gcd: g = Σ coeffs[i]·products[i].
    let mut g = BigInt::zero();
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(products.len());
    for p in &products {
        let e = g.extended_gcd(p);
        for c in coeffs.iter_mut() {
            *c *= &e.x;
        }
        coeffs.push(e.y);
        g = e.gcd;
    }
    let comaximal = g.is_one();
    Comaximality {
        comaximal,
        products: products.iter().map(|p| p.to_string()).collect(),
        bezout: comaximal.then(|| coeffs.iter().map(|c| c.to_string()).collect()),
    }
}

pub fn leaves_comaximal(leaves: &[BranchLeaf]) -> Comaximality {
    let sets: Vec<Vec<BigInt>> = leaves.iter().map(|l| l.generators.clone()).collect();
    comaximal_check(&sets)
}

/// `f ∈ I` iff the image of `f` reduces to zero in every leaf.
pub fn dynamical_member(pr: &PolyRing, f: &NcPoly, leaves: &[BranchLeaf]) -> Result<Verdict, DynamicalError> {
    if leaves.is_empty() {
        return Err(DynamicalError::Empty);
    }
    let at_bound = leaves.iter().any(|l| !l.basis.verified);
    for l in leaves {
        let local = l.ring.project(f, &pr.ring)?;
        if !local_normal_form(&l.ring, &local, &l.basis)?.is_zero() {
            return Ok(Verdict {
                member: false,
                at_bound,
            });
        }
    }
    Ok(Verdict { member: true, at_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::buchberger::closure_failures;
    use crate::ordering::AdmissibleOrder;
    use crate::words::Alphabet;

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

    fn frac(pr: &PolyRing, terms: &[(i64, i64, &str)]) -> NcPoly {
        pr.from_terms(terms.iter().map(|(n, d, s)| {
            (
                pr.ring.from_ratio(BigInt::from(*n), BigInt::from(*d)).unwrap(),
                pr.alphabet.word(s).unwrap(),
            )
        }))
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn crt_projection_24() {
        let pr = ring(RingSpec::modular(24).unwrap(), &["x", "y"]);
        let f1 = p(&pr, &[(14, "xyyx"), (-16, "yxx")]);
        let f2 = p(&pr, &[(22, "xxyy"), (-36, "yx")]);
        let parts = crt_project(&pr, &[f1, f2]).unwrap();
        assert_eq!(parts.len(), 2);
        let (pp3, r3, i1) = &parts[0];
        assert_eq!(pp3.value, big(3));
        assert_eq!(i1, &vec![p(r3, &[(2, "xyyx"), (-1, "yxx")]), p(r3, &[(1, "xxyy")])]);
        let (pp8, r8, i2) = &parts[1];
        assert_eq!(pp8.value, big(8));
        assert_eq!(i2, &vec![p(r8, &[(6, "xyyx")]), p(r8, &[(6, "xxyy"), (4, "yx")])]);
    }

    #[test]
    fn crt_basis_24() {
        let pr = ring(RingSpec::modular(24).unwrap(), &["x", "y"]);
        let f1 = p(&pr, &[(14, "xyyx"), (-16, "yxx")]);
        let f2 = p(&pr, &[(22, "xxyy"), (-36, "yx")]);
        let comps = crt_basis(&pr, &[f1.clone(), f2.clone()], Limits::default(), Exec::Sequential).unwrap();
        for c in &comps {
            assert_eq!(c.basis.status, Status::Complete);
            assert!(closure_failures(&c.ring, &c.basis.elements, Exec::Sequential)
                .unwrap()
                .is_empty());
        }
        assert!(crt_member(&pr, &f1, &comps).unwrap().member);
        assert!(crt_member(&pr, &f2, &comps).unwrap().member);
        let one = p(&pr, &[(1, "")]);
        assert!(!crt_member(&pr, &one, &comps).unwrap().member);
        let x = pr.alphabet.word("x").unwrap();
        let y = pr.alphabet.word("y").unwrap();
        let combo = pr.add(
            &pr.sandwich(&x, &f1, &y),
            &pr.scale(&pr.ring.from_int(5), &pr.sandwich(&y, &f2, &x)),
        );
        assert!(crt_member(&pr, &combo, &comps).unwrap().member);
    }

    #[test]
    fn crt_prime_is_single_component() {
        let pr = ring(RingSpec::modular(7).unwrap(), &["x", "y"]);
        let f = p(&pr, &[(3, "xy"), (1, "y")]);
        let comps = crt_basis(&pr, std::slice::from_ref(&f), Limits::default(), Exec::Sequential).unwrap();
        assert_eq!(comps.len(), 1);
        let plain = buchberger::buchberger(&pr, &[f], Limits::default(), Exec::Sequential).unwrap();
        assert_eq!(comps[0].basis.elements, plain.elements);
    }

    #[test]
    fn crt_lift_roundtrip() {
        let pr = ring(RingSpec::modular(24).unwrap(), &["x", "y"]);
        let f1 = p(&pr, &[(14, "xyyx"), (-16, "yxx")]);
        let comps = crt_basis(&pr, &[f1], Limits::default(), Exec::Sequential).unwrap();
        let g = p(&pr, &[(5, "xyxy"), (7, "yy"), (1, "x")]);
        let nfs = crt_normal_forms(&pr, &g, &comps).unwrap();
        let lifted = crt_lift_poly(&pr, &comps, &nfs).unwrap();
        for (c, nf) in comps.iter().zip(&nfs) {
            assert_eq!(&c.ring.project(&lifted, &pr.ring).unwrap(), nf);
        }
    }

    #[test]
    fn overlap_branches() {
        let pr = ring(RingSpec::integers(), &["x", "y", "z", "w"]);
        let f1 = p(&pr, &[(6, "yzwx"), (-2, "yx")]);
        let f2 = p(&pr, &[(4, "xy"), (-5, "zw")]);
        let w = |s| pr.alphabet.word(s).unwrap();
        let out = branch_overlap(&pr, &f1, &f2, &w("y"), &w("yzw")).unwrap();
        assert_eq!(out.len(), 2);
        let (r3, o3) = &out[0];
        let (r2, o2) = &out[1];
        assert_eq!(r3.generators(), &[big(3)]);
        assert_eq!(r2.generators(), &[big(2)]);
        let pr3 = pr.with_ring(r3.clone());
        let pr2 = pr.with_ring(r2.clone());
        assert_eq!(o3, &frac(&pr3, &[(5, 1, "yzwzw"), (-4, 3, "yxy")]));
        assert_eq!(o2, &frac(&pr2, &[(15, 2, "yzwzw"), (-2, 1, "yxy")]));
        assert_eq!(pr2.format(o2), "15/2*y*z*w*z*w - 2*y*x*y");

        let g = p(&pr, &[(2, "xy")]);
        let h = p(&pr, &[(4, "yx")]);
        assert_eq!(branch_overlap(&pr, &g, &h, &w("x"), &w("x")).unwrap().len(), 1);
    }

    #[test]
    fn divide_branches() {
        let pr = ring(RingSpec::integers(), &["x", "y"]);
        let f = p(&pr, &[(6, "xyx"), (1, "y")]);
        let g = p(&pr, &[(4, "yx"), (1, "x")]);
        let steps = branch_divide(&pr, &f, &g).unwrap();
        assert_eq!(steps.len(), 2);
        assert!(matches!(&steps[0], BranchStep::Final { ring } if ring.generators() == [big(3)]));
        match &steps[1] {
            BranchStep::Reduced { ring, quotient, result } => {
                assert_eq!(ring.generators(), &[big(2)]);
                assert_eq!(quotient, &ring.from_ratio(big(3), big(2)).unwrap());
                let pr2 = pr.with_ring(ring.clone());
                assert_eq!(result, &frac(&pr2, &[(-3, 2, "xx"), (1, 1, "y")]));
            }
            other => panic!("{other:?}"),
        }
        let g2 = p(&pr, &[(3, "yx")]);
        assert!(matches!(
            &branch_divide(&pr, &f, &g2).unwrap()[0],
            BranchStep::Reduced { .. }
        ));
    }

    #[test]
    fn comaximality() {
        let c = comaximal_check(&[vec![big(2)], vec![big(3)]]);
        assert!(c.comaximal);
        let b: Vec<BigInt> = c.bezout.unwrap().iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(&b[0] * big(2) + &b[1] * big(3), big(1));
        assert!(comaximal_check(&[vec![]]).comaximal);
        assert!(!comaximal_check(&[vec![big(2)], vec![big(2)]]).comaximal);
    }

    #[test]
    fn dynamical_example() {
        let pr = ring(RingSpec::integers(), &["x", "y"]);
        let f1 = p(&pr, &[(6, "xyx"), (-8, "xy")]);
        let f2 = p(&pr, &[(4, "xy"), (-3, "yx")]);
        for exec in [Exec::Sequential, Exec::Parallel] {
            let leaves = dynamical_basis(&pr, &[f1.clone(), f2.clone()], Limits::default(), exec).unwrap();
            let gens: Vec<Vec<BigInt>> = leaves.iter().map(|l| l.generators.clone()).collect();
            assert_eq!(gens, vec![vec![big(3)], vec![big(2)]]);
            assert!(leaves_comaximal(&leaves).comaximal);
            for l in &leaves {
                // Each leaf keeps a disjoint family with non-unit leading coefficients open.
                assert_eq!(l.basis.status, Status::Truncated);
                assert!(l.basis.stats.open_disjoint > 0);
                assert!(closure_failures(&l.ring, &l.basis.elements, Exec::Sequential)
                    .unwrap()
                    .is_empty());
                let lcs: Vec<_> = l.basis.elements.iter().map(|e| e.lc().unwrap().clone()).collect();
                for a in &lcs {
                    for b in &lcs {
                        assert!(l.ring.ring.is_comparable(a, b).unwrap());
                    }
                }
            }
            let v = dynamical_member(&pr, &f1, &leaves).unwrap();
            assert!(v.member && v.at_bound);
            assert!(!dynamical_member(&pr, &p(&pr, &[(1, "")]), &leaves).unwrap().member);
        }
    }

    #[test]
    fn comparable_inputs_single_leaf() {
        let pr = ring(RingSpec::integers(), &["x", "y"]);
        let leaves = dynamical_basis(
            &pr,
            &[p(&pr, &[(2, "xy"), (1, "x")]), p(&pr, &[(4, "yx")])],
            Limits::default(),
            Exec::Sequential,
        )
        .unwrap();
        assert_eq!(leaves.len(), 1);
        assert!(leaves[0].generators.is_empty());
    }

    #[test]
    fn wrong_rings_rejected() {
        let pr = ring(RingSpec::modular(6).unwrap(), &["x"]);
        assert!(matches!(
            dynamical_basis(&pr, &[], Limits::default(), Exec::Sequential),
            Err(DynamicalError::NotIntegral(_))
        ));
        let pz = ring(RingSpec::integers(), &["x"]);
        assert!(matches!(crt_project(&pz, &[]), Err(DynamicalError::NotModular(_))));
    }
}
