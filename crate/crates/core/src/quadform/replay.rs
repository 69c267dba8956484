//! Witness checking by direct substitution, independent of the deciders.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fields::{Element, Field, RatFunc, Value};
use crate::trace::Witness;

use super::padic::hensel_index;

fn rat_of(e: &Element) -> Result<BigRational> {
    match e {
        Element::Rat(r) => Ok(r.clone()),
        _ => Err(Error::Invalid("expected a rational coefficient".into())),
    }
}

fn parse_rats(v: &[String]) -> Result<Vec<BigRational>> {
    v.iter()
        .map(|s| {
            Field::Rationals.parse_value(s).map(|x| match x {
                Value::Rat(r) => r,
                _ => unreachable!(),
            })
        })
        .collect()
}

/// Nonzero entries of the vector a witness describes, by position.
fn support(field: &Field, n: usize, w: &Witness) -> Result<Vec<bool>> {
    Ok(match w {
        Witness::Exact { vector } => vector
            .iter()
            .map(|s| field.parse_value(s).map(|v| !field.v_is_zero(&v)))
            .collect::<Result<_>>()?,
        Witness::Hensel { vector, .. } => {
            parse_rats(vector)?.iter().map(|r| !r.is_zero()).collect()
        }
        Witness::Lifted { indices, base, .. } => {
            let inner = support(&Field::Rationals, indices.len(), base)?;
            let mut out = vec![false; n];
            for (k, &j) in indices.iter().enumerate() {
                if j < n {
                    out[j] = inner[k];
                }
            }
            out
        }
    })
}

/// Checks that `w` proves `<coeffs>` isotropic over `field`.
pub fn check_isotropy_witness(field: &Field, coeffs: &[Element], w: &Witness) -> Result<bool> {
    match w {
        Witness::Exact { vector } => {
            if vector.len() != coeffs.len() {
                return Ok(false);
            }
            let x: Vec<Value> = vector
                .iter()
                .map(|s| field.parse_value(s))
                .collect::<Result<_>>()?;
            Ok(!x.iter().all(|v| field.v_is_zero(v))
                && field.v_is_zero(&field.eval_diagonal(coeffs, &x)))
        }
        Witness::Hensel { prime, vector } => {
            let p = match field {
                Field::PAdic(p) => *p,
                _ => return Ok(false),
            };
            if *prime != p || vector.len() != coeffs.len() {
                return Ok(false);
            }
            let c: Vec<BigRational> = coeffs.iter().map(rat_of).collect::<Result<_>>()?;
            Ok(hensel_index(p, &c, &parse_rats(vector)?).is_some())
        }
        Witness::Lifted {
            indices,
            base_coeffs,
            scalings,
            base,
        } => {
            let Field::Function { p, .. } = field else {
                return Ok(false);
            };
            let n = indices.len();
            if n < 2 || base_coeffs.len() != n || scalings.len() != n {
                return Ok(false);
            }
            let mut seen = indices.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != n || seen.iter().any(|&j| j >= coeffs.len()) {
                return Ok(false);
            }
            let ks = parse_rats(base_coeffs)?;
            if ks.iter().any(Zero::is_zero) {
                return Ok(false);
            }
            // every c_j / (k_j s_j^2) must be the same P
            let mut common: Option<RatFunc> = None;
            for (k, &j) in indices.iter().enumerate() {
                let s = field.parse_nonzero(&scalings[k])?;
                let Element::Func(c) = &coeffs[j] else {
                    return Ok(false);
                };
                let Element::Func(s) = s else {
                    return Ok(false);
                };
                let q = c.div(&s.mul(&s)).div(&RatFunc::constant(ks[k].clone()));
                match &common {
                    None => common = Some(q),
                    Some(c0) if *c0 == q => {}
                    Some(_) => return Ok(false),
                }
            }
            let inner = match p {
                Some(p) => Field::PAdic(*p),
                None => Field::Rationals,
            };
            let kc: Vec<Element> = ks.into_iter().map(Element::Rat).collect();
            check_isotropy_witness(&inner, &kc, base)
        }
    }
}

/// Checks that `w` is a zero of `<coeffs> + <-x>` with nonzero last
/// coordinate, i.e. a proof that `x` is represented.
pub fn check_representation_witness(
    field: &Field,
    coeffs: &[Element],
    x: &Element,
    w: &Witness,
) -> Result<bool> {
    let mut ext = coeffs.to_vec();
    ext.push(field.neg(x));
    if !check_isotropy_witness(field, &ext, w)? {
        return Ok(false);
    }
    Ok(support(field, ext.len(), w)?
        .last()
        .copied()
        .unwrap_or(false))
}
