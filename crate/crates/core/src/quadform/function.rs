//! Partial decider over `K0(t)` with `K0 = Q` or `Q_p`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::Result;
use crate::fields::{Element, Field, Poly, RatFunc, ValuationRef};
use crate::trace::{NodeKind, ProofTrace, TriState, Witness};

use super::{padic, rational};

/// Hard cap on candidate vectors tried by the bounded search.
pub const MAX_CANDIDATES: usize = 200_000;

/// A coefficient written as `k * P * s^2`: `k` an integer, `P` primitive
/// square-free, `s` a rational function.
struct Reduced {
    k: BigRational,
    prim: Poly,
    root: RatFunc,
}

fn reduce(field: &Field, c: &RatFunc) -> Result<Reduced> {
    let (r, s) = field.reduce_squares(&Element::Func(c.clone()))?;
    let (Element::Func(r), Element::Func(root)) = (r, s) else {
        unreachable!("function field")
    };
    let (k, prim) = r.num().content_primitive();
    Ok(Reduced { k, prim, root })
}

fn func_coeffs(coeffs: &[Element]) -> Vec<RatFunc> {
    coeffs
        .iter()
        .map(|c| match c {
            Element::Func(f) => f.clone(),
            _ => panic!("element from a different field"),
        })
        .collect()
}

pub fn isotropy(field: &Field, coeffs: &[Element], height: u64) -> Result<TriState<Witness>> {
    let Field::Function { p, var } = field else {
        panic!("not a function field")
    };
    let cs = func_coeffs(coeffs);
    let red: Vec<Reduced> = cs.iter().map(|c| reduce(field, c)).collect::<Result<_>>()?;
    if let Some(w) = group_lift(field, *p, &red)? {
        return Ok(TriState::yes(w));
    }
    let k0 = field.function_base().expect("function field");
    for place in [
        ValuationRef::TAdic(var.clone()),
        ValuationRef::DegreeValuation(var.clone()),
    ] {
        if let Some(trace) = residue_obstruction(field, &k0, coeffs, &place)? {
            return Ok(TriState::no(trace));
        }
    }
    let (found, h) = bounded_search(&red, height);
    if let Some(x) = found {
        let v: Vec<String> = x
            .iter()
            .zip(&red)
            .map(|(xi, r)| {
                field.fmt_value(&crate::fields::Value::Func(
                    RatFunc::from_poly(xi.clone()).div(&r.root),
                ))
            })
            .collect();
        return Ok(TriState::yes(Witness::Exact { vector: v }));
    }
    Ok(TriState::unknown(format!(
        "no residue obstruction found at {var}-adic or degree places; no witness within height {h}"
    )))
}

/// Coefficients sharing the same square-free polynomial part form a constant
/// form `P * <k_j>`; a zero of `<k_j>` over `K0` is a zero of the whole form.
fn group_lift(field: &Field, p: Option<u64>, red: &[Reduced]) -> Result<Option<Witness>> {
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (j, r) in red.iter().enumerate() {
        groups.entry(r.prim.fmt_in("t")).or_default().push(j);
    }
    let n = red.len();
    for idx in groups.values().filter(|g| g.len() >= 2) {
        let ks: Vec<BigRational> = idx.iter().map(|&j| red[j].k.clone()).collect();
        if rational::is_isotropic(&ks)? {
            if let Some(y) = rational::find_zero(&ks)? {
                let mut v = vec!["0".to_string(); n];
                for (k, &j) in idx.iter().enumerate() {
                    let x = RatFunc::constant(y[k].clone()).div(&red[j].root);
                    v[j] = field.fmt_value(&crate::fields::Value::Func(x));
                }
                return Ok(Some(Witness::Exact { vector: v }));
            }
        }
        if let Some(p) = p {
            if let TriState::Yes { witness } = padic::isotropy(p, &ks) {
                return Ok(Some(Witness::Lifted {
                    indices: idx.clone(),
                    base_coeffs: ks.iter().map(|k| k.to_string()).collect(),
                    scalings: idx
                        .iter()
                        .map(|&j| field.fmt_element(&Element::Func(red[j].root.clone())))
                        .collect(),
                    base: Box::new(witness),
                }));
            }
        }
    }
    Ok(None)
}

/// Anisotropy over `K0` of a form with rational coefficients, as a trace.
fn k0_anisotropy(k0: &Field, coeffs: &[BigRational]) -> Result<Option<ProofTrace>> {
    if coeffs.is_empty() {
        return Ok(Some(
            ProofTrace::new(NodeKind::Trivial, "the zero form is anisotropic")
                .with_field(k0.spec()),
        ));
    }
    match k0 {
        Field::Rationals => rational::local_obstruction(coeffs),
        Field::PAdic(p) => Ok(padic::isotropy(*p, coeffs).trace().cloned()),
        _ => unreachable!("function field bases are Q and Q_p"),
    }
}

/// Springer split at `place`; `Some` when both residue forms are anisotropic
/// over `K0`, which makes the form anisotropic over the completion.
pub fn residue_obstruction(
    field: &Field,
    k0: &Field,
    coeffs: &[Element],
    place: &ValuationRef,
) -> Result<Option<ProofTrace>> {
    let (even, odd) = residue_forms(field, coeffs, place)?;
    let Some(te) = k0_anisotropy(k0, &even)? else {
        return Ok(None);
    };
    let Some(to) = k0_anisotropy(k0, &odd)? else {
        return Ok(None);
    };
    Ok(Some(
        ProofTrace::new(
            NodeKind::ResidueSplit,
            "both residue forms are anisotropic (Springer)",
        )
        .with_field(field.spec())
        .with_form(coeffs.iter().map(|c| field.fmt_element(c)).collect())
        .with_place(field.fmt_place(place))
        .with_child(te)
        .with_child(to),
    ))
}

/// Even- and odd-valuation residue forms at `place`.
pub fn residue_forms(
    field: &Field,
    coeffs: &[Element],
    place: &ValuationRef,
) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    let (mut even, mut odd) = (Vec::new(), Vec::new());
    for c in coeffs {
        let (e, u) = field.split_at(c, place)?;
        let (_, r) = field.residue(&u, place)?;
        let Element::Rat(r) = r else {
            unreachable!("residues of K0(t) are rational")
        };
        if e.rem_euclid(2) == 0 {
            even.push(r);
        } else {
            odd.push(r);
        }
    }
    Ok((even, odd))
}

// ------------------------------------------------------------ bounded search

fn int_poly(p: &Poly) -> Option<Vec<i128>> {
    p.coeffs()
        .iter()
        .map(|c| {
            if c.is_integer() {
                c.to_integer().to_i128()
            } else {
                None
            }
        })
        .collect()
}

fn mul_i(a: &[i128], b: &[i128]) -> Option<Vec<i128>> {
    if a.is_empty() || b.is_empty() {
        return Some(vec![]);
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].checked_add(x.checked_mul(*y)?)?;
        }
    }
    Some(out)
}

fn add_into(acc: &mut Vec<i128>, b: &[i128]) -> Option<()> {
    if acc.len() < b.len() {
        acc.resize(b.len(), 0);
    }
    for (i, y) in b.iter().enumerate() {
        acc[i] = acc[i].checked_add(*y)?;
    }
    Some(())
}

/// Entries of the form `a + b t` with `|a|, |b| <= h`, nonzero.
fn entries(h: i64) -> Vec<[i64; 2]> {
    let mut out = Vec::new();
    for b in -h..=h {
        for a in -h..=h {
            if a != 0 || b != 0 {
                out.push([a, b]);
            }
        }
    }
    out
}

/// Searches zeros of 3-dimensional subforms with entries `a + b t`,
/// `|a|, |b| <= h`, for increasing `h`. Two-dimensional subforms need no
/// search: they are isotropic only when their reduced coefficients are
/// opposite, which the group lift already handles. Returns the zero (as
/// polynomials of the reduced form) and the height fully covered.
fn bounded_search(red: &[Reduced], height: u64) -> (Option<Vec<Poly>>, i64) {
    let n = red.len();
    if n < 3 {
        return (None, height as i64);
    }
    let cs: Option<Vec<Vec<i128>>> = red
        .iter()
        .map(|r| {
            let k = r.k.to_integer().to_i128()?;
            int_poly(&r.prim).map(|p| p.into_iter().map(|c| c * k).collect())
        })
        .collect();
    let Some(cs) = cs else { return (None, 0) };
    let triples = n * (n - 1) * (n - 2) / 6;
    let mut budget = MAX_CANDIDATES;
    let mut covered = 0;
    for h in 1..=(height as i64) {
        let es = entries(h);
        let cost = triples * es.len().pow(3);
        if cost > budget {
            break;
        }
        budget -= cost;
        let terms: Vec<Vec<Option<Vec<i128>>>> = cs
            .iter()
            .map(|c| {
                es.iter()
                    .map(|e| {
                        mul_i(
                            c,
                            &mul_i(&[e[0] as i128, e[1] as i128], &[e[0] as i128, e[1] as i128])?,
                        )
                    })
                    .collect()
            })
            .collect();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for (ia, ta) in terms[i].iter().enumerate() {
                        let Some(ta) = ta else { continue };
                        for (ib, tb) in terms[j].iter().enumerate() {
                            let Some(tb) = tb else { continue };
                            let mut ab = ta.clone();
                            if add_into(&mut ab, tb).is_none() {
                                continue;
                            }
                            for (ic, tc) in terms[k].iter().enumerate() {
                                let Some(tc) = tc else { continue };
                                let mut acc = ab.clone();
                                if add_into(&mut acc, tc).is_some() && acc.iter().all(|v| *v == 0) {
                                    let mut x = vec![Poly::zero(); n];
                                    x[i] = lin(&es[ia]);
                                    x[j] = lin(&es[ib]);
                                    x[k] = lin(&es[ic]);
                                    return (Some(x), h);
                                }
                            }
                        }
                    }
                }
            }
        }
        covered = h;
    }
    (None, covered)
}

fn lin(e: &[i64; 2]) -> Poly {
    Poly::from_coeffs(vec![
        BigRational::from_integer(BigInt::from(e[0])),
        BigRational::from_integer(BigInt::from(e[1])),
    ])
}
