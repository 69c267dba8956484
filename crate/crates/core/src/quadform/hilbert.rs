//! Hilbert symbols and local invariants of rational diagonal forms.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{arith, Field, SquareClass, ValuationRef};

/// The product `numerator * denominator`, an integer in the square class of `q`.
fn class_int(q: &BigRational) -> BigInt {
    q.numer() * q.denom()
}

fn eps(u: &BigInt) -> u32 {
    // (u - 1) / 2 mod 2 for odd u
    (u.mod_floor(&BigInt::from(4)).to_u32().unwrap_or(0) / 2) & 1
}

fn omega(u: &BigInt) -> u32 {
    // (u^2 - 1) / 8 mod 2 for odd u
    let r = u.mod_floor(&BigInt::from(8)).to_u32().unwrap_or(0);
    u32::from(r == 3 || r == 5)
}

fn split_p(n: &BigInt, p: u64) -> (i64, BigInt) {
    let bp = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    while (&m % &bp).is_zero() {
        m /= &bp;
        v += 1;
    }
    (v, m)
}

/// Hilbert symbol `(a, b)_v` for nonzero rationals at a prime or the real place.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: &ValuationRef) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Domain("Hilbert symbol of zero".into()));
    }
    match place {
        ValuationRef::RealPlace => Ok(if a.is_negative() && b.is_negative() {
            -1
        } else {
            1
        }),
        ValuationRef::PAdicPlace(p) => {
            if !arith::is_prime_u64(*p) {
                return Err(Error::Invalid(format!("{p} is not a prime")));
            }
            Ok(hilbert_int(&class_int(a), &class_int(b), *p))
        }
        _ => Err(Error::Unsupported(
            "Hilbert symbols are computed only at places of Q".into(),
        )),
    }
}

fn hilbert_int(a: &BigInt, b: &BigInt, p: u64) -> i8 {
    let (alpha, u) = split_p(a, p);
    let (beta, v) = split_p(b, p);
    if p == 2 {
        let e = eps(&u) * eps(&v)
            + (alpha.rem_euclid(2) as u32) * omega(&v)
            + (beta.rem_euclid(2) as u32) * omega(&u);
        return if e.is_multiple_of(2) { 1 } else { -1 };
    }
    let mut s: i8 = 1;
    if (alpha * beta).rem_euclid(2) == 1 && p % 4 == 3 {
        s = -s;
    }
    let leg = |x: &BigInt| {
        let r = x.mod_floor(&BigInt::from(p)).to_u64().unwrap_or(0);
        arith::legendre(r, p)
    };
    if beta.rem_euclid(2) == 1 {
        s *= leg(&u);
    }
    if alpha.rem_euclid(2) == 1 {
        s *= leg(&v);
    }
    s
}

/// Whether a nonzero rational is a square in the completion at `place`.
pub fn is_local_square(x: &BigRational, place: &ValuationRef) -> bool {
    match place {
        ValuationRef::RealPlace => x.is_positive(),
        ValuationRef::PAdicPlace(p) => {
            let n = class_int(x);
            let (v, u) = split_p(&n, *p);
            if v % 2 != 0 {
                return false;
            }
            if *p == 2 {
                u.mod_floor(&BigInt::from(8)).is_one()
            } else {
                arith::legendre(u.mod_floor(&BigInt::from(*p)).to_u64().unwrap_or(0), *p) == 1
            }
        }
        _ => false,
    }
}

pub fn discriminant(coeffs: &[BigRational]) -> BigRational {
    coeffs.iter().fold(BigRational::one(), |acc, c| acc * c)
}

/// Hasse invariant `prod_{i<j} (a_i, a_j)_v`.
pub fn hasse_invariant(coeffs: &[BigRational], place: &ValuationRef) -> Result<i8> {
    let mut e = 1;
    for i in 0..coeffs.len() {
        for j in i + 1..coeffs.len() {
            e *= hilbert_symbol(&coeffs[i], &coeffs[j], place)?;
        }
    }
    Ok(e)
}

/// Why a form is (an)isotropic at one place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalVerdict {
    pub isotropic: bool,
    pub reason: String,
}

/// Isotropy of a diagonal rational form over the completion at `place`.
pub fn local_isotropy(coeffs: &[BigRational], place: &ValuationRef) -> Result<LocalVerdict> {
    let n = coeffs.len();
    if let ValuationRef::RealPlace = place {
        let pos = coeffs.iter().any(|c| c.is_positive());
        let neg = coeffs.iter().any(|c| c.is_negative());
        let iso = n >= 2 && pos && neg;
        let reason = if iso {
            "indefinite".into()
        } else {
            "definite".to_string()
        };
        return Ok(LocalVerdict {
            isotropic: iso,
            reason,
        });
    }
    let d = discriminant(coeffs);
    let verdict = match n {
        0 | 1 => LocalVerdict {
            isotropic: false,
            reason: format!("dimension {n}"),
        },
        2 => {
            let iso = is_local_square(&-&d, place);
            LocalVerdict {
                isotropic: iso,
                reason: format!(
                    "-d = {} is{} a local square",
                    -&d,
                    if iso { "" } else { " not" }
                ),
            }
        }
        3 => {
            let eps = hasse_invariant(coeffs, place)?;
            let need = hilbert_symbol(&-BigRational::one(), &-&d, place)?;
            LocalVerdict {
                isotropic: eps == need,
                reason: format!("hasse = {eps}, (-1, -d) = {need}"),
            }
        }
        4 => {
            let sq = is_local_square(&d, place);
            let eps = hasse_invariant(coeffs, place)?;
            let m11 = hilbert_symbol(&-BigRational::one(), &-BigRational::one(), place)?;
            LocalVerdict {
                isotropic: !sq || eps == m11,
                reason: format!(
                    "d is{} a local square, hasse = {eps}, (-1, -1) = {m11}",
                    if sq { "" } else { " not" }
                ),
            }
        }
        _ => LocalVerdict {
            isotropic: true,
            reason: format!("dimension {n} >= 5"),
        },
    };
    Ok(verdict)
}

/// The real place followed by the primes dividing `2 * prod(numerators * denominators)`.
pub fn relevant_places(coeffs: &[BigRational]) -> Result<Vec<ValuationRef>> {
    let mut primes = BTreeSet::new();
    primes.insert(2u64);
    for c in coeffs {
        for p in arith::prime_divisors(&class_int(c))? {
            primes.insert(p);
        }
    }
    let mut out = vec![ValuationRef::RealPlace];
    out.extend(primes.into_iter().map(ValuationRef::PAdicPlace));
    Ok(out)
}

/// Complete isometry invariants of a rational form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalInvariants {
    pub dim: usize,
    pub disc: SquareClass,
    /// Hasse invariants keyed by place name ("real", "p=2", ...).
    pub hasse: BTreeMap<String, i8>,
    /// `(positive, negative)` counts.
    pub signature: (usize, usize),
}

pub fn local_invariants(coeffs: &[BigRational]) -> Result<LocalInvariants> {
    local_invariants_at(coeffs, &relevant_places(coeffs)?)
}

pub fn local_invariants_at(
    coeffs: &[BigRational],
    places: &[ValuationRef],
) -> Result<LocalInvariants> {
    let field = Field::Rationals;
    let d = discriminant(coeffs);
    let disc = field.square_class(&crate::fields::Element::Rat(d))?;
    let mut hasse = BTreeMap::new();
    for v in places {
        hasse.insert(field.fmt_place(v), hasse_invariant(coeffs, v)?);
    }
    let pos = coeffs.iter().filter(|c| c.is_positive()).count();
    Ok(LocalInvariants {
        dim: coeffs.len(),
        disc,
        hasse,
        signature: (pos, coeffs.len() - pos),
    })
}

/// Isometry over Q via the complete invariant set at the union of relevant places.
pub fn isometric(f: &[BigRational], g: &[BigRational]) -> Result<bool> {
    let mut all: Vec<BigRational> = f.to_vec();
    all.extend_from_slice(g);
    let places = relevant_places(&all)?;
    Ok(local_invariants_at(f, &places)? == local_invariants_at(g, &places)?)
}
