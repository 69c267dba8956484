//! Iterated Laurent series fields `k((x1))...((xn))` over k = F_q or Q.
//!
//! Field elements are kept as their leading monomial `u * x1^e1 * ... * xn^en`
//! (leading with respect to the outermost variable first). Every element is
//! such a monomial times a 1-unit, and 1-units are squares in residue
//! characteristic != 2, so this is exact at square-class level and exact for
//! products. Witness vectors use full Laurent polynomials instead.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

use super::arith;
use super::finite::FiniteField;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerBase {
    Finite(Arc<FiniteField>),
    Rationals,
}

/// A coefficient in the base field of a tower.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Fq(u64),
    Rat(BigRational),
}

impl TowerBase {
    pub fn zero(&self) -> Scalar {
        match self {
            TowerBase::Finite(_) => Scalar::Fq(0),
            TowerBase::Rationals => Scalar::Rat(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        match self {
            TowerBase::Finite(f) => Scalar::Fq(f.from_int(n)),
            TowerBase::Rationals => Scalar::Rat(arith::rat(n)),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            TowerBase::Finite(f) => {
                let p = BigInt::from(f.p());
                let r = ((n % &p) + &p) % &p;
                Scalar::Fq(r.try_into().unwrap_or(0))
            }
            TowerBase::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fq(x) => *x == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (TowerBase::Finite(f), Scalar::Fq(x), Scalar::Fq(y)) => Scalar::Fq(f.add(*x, *y)),
            (TowerBase::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            _ => unreachable!("scalar from a different base"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (TowerBase::Finite(f), Scalar::Fq(x), Scalar::Fq(y)) => Scalar::Fq(f.mul(*x, *y)),
            (TowerBase::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            _ => unreachable!("scalar from a different base"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (TowerBase::Finite(f), Scalar::Fq(x)) => Scalar::Fq(f.neg(*x)),
            (TowerBase::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            _ => unreachable!("scalar from a different base"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match (self, a) {
            (TowerBase::Finite(f), Scalar::Fq(x)) => f.inv(*x).map(Scalar::Fq),
            (TowerBase::Rationals, Scalar::Rat(x)) => {
                (!x.is_zero()).then(|| Scalar::Rat(x.recip()))
            }
            _ => unreachable!("scalar from a different base"),
        }
    }

    /// Splits a unit as `rep * root^2` with `rep` the canonical class
    /// representative (1 or the fixed non-square over F_q; a square-free
    /// integer over Q).
    pub fn square_split(&self, a: &Scalar) -> Result<(Scalar, Scalar)> {
        match (self, a) {
            (TowerBase::Finite(f), Scalar::Fq(x)) => {
                if *x == 0 {
                    return Err(Error::Domain("zero has no square class".into()));
                }
                let rep = if f.is_square(*x) { 1 } else { f.nonsquare() };
                let root = f
                    .sqrt(f.div(*x, rep).expect("rep is a unit"))
                    .expect("quotient is a square");
                Ok((Scalar::Fq(rep), Scalar::Fq(root)))
            }
            (TowerBase::Rationals, Scalar::Rat(x)) => {
                let (s, r) = arith::squarefree_rat(x)?;
                Ok((Scalar::Rat(BigRational::from_integer(s)), Scalar::Rat(r)))
            }
            _ => unreachable!("scalar from a different base"),
        }
    }

    pub fn fmt(&self, a: &Scalar) -> String {
        match (self, a) {
            (TowerBase::Finite(f), Scalar::Fq(x)) => f.fmt_elem(*x),
            (_, Scalar::Rat(x)) => x.to_string(),
            _ => unreachable!("scalar from a different base"),
        }
    }

    pub fn is_negative_literal(&self, a: &Scalar) -> bool {
        self.fmt(a).starts_with('-')
    }
}

/// Nonzero monomial `unit * prod x_i^exps[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TowerElem {
    pub unit: Scalar,
    pub exps: Vec<i64>,
}

impl TowerElem {
    pub fn mul(&self, o: &TowerElem, base: &TowerBase) -> TowerElem {
        TowerElem {
            unit: base.mul(&self.unit, &o.unit),
            exps: self.exps.iter().zip(&o.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn inv(&self, base: &TowerBase) -> TowerElem {
        TowerElem {
            unit: base.inv(&self.unit).expect("tower elements are nonzero"),
            exps: self.exps.iter().map(|e| -e).collect(),
        }
    }

    pub fn neg(&self, base: &TowerBase) -> TowerElem {
        TowerElem {
            unit: base.neg(&self.unit),
            exps: self.exps.clone(),
        }
    }
}

/// Ordering of exponent vectors by "leading-ness": the outermost variable
/// (last) is compared first, smaller exponent leads.
pub fn leading_cmp(a: &[i64], b: &[i64]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

/// Sparse Laurent polynomial over the tower base.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<i64>, Scalar>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(m: &TowerElem) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m.exps.clone(), m.unit.clone());
        LaurentPoly {
            nvars: m.exps.len(),
            terms,
        }
    }

    pub fn scalar(c: Scalar, nvars: usize, base: &TowerBase) -> Self {
        let mut p = LaurentPoly::zero(nvars);
        if !base.is_zero(&c) {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &LaurentPoly, base: &TowerBase) -> LaurentPoly {
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            let sum = match terms.get(e) {
                Some(d) => base.add(c, d),
                None => c.clone(),
            };
            if base.is_zero(&sum) {
                terms.remove(e);
            } else {
                terms.insert(e.clone(), sum);
            }
        }
        LaurentPoly {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn neg(&self, base: &TowerBase) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), base.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, o: &LaurentPoly, base: &TowerBase) -> LaurentPoly {
        self.add(&o.neg(base), base)
    }

    pub fn mul(&self, o: &LaurentPoly, base: &TowerBase) -> LaurentPoly {
        let mut acc = LaurentPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            let mut part = LaurentPoly::zero(self.nvars);
            for (e2, c2) in &o.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                part.terms.insert(e, base.mul(c1, c2));
            }
            acc = acc.add(&part, base);
        }
        acc
    }

    pub fn as_monomial(&self) -> Option<TowerElem> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some(TowerElem {
            unit: c.clone(),
            exps: e.clone(),
        })
    }

    /// Leading term with respect to `leading_cmp`.
    pub fn leading(&self) -> Option<TowerElem> {
        self.terms
            .iter()
            .min_by(|a, b| leading_cmp(a.0, b.0))
            .map(|(e, c)| TowerElem {
                unit: c.clone(),
                exps: e.clone(),
            })
    }

    /// Division by a nonzero monomial.
    pub fn div_monomial(&self, m: &TowerElem, base: &TowerBase) -> LaurentPoly {
        self.mul(&LaurentPoly::monomial(&m.inv(base)), base)
    }

    pub fn fmt(&self, vars: &[String], base: &TowerBase) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut keys: Vec<&Vec<i64>> = self.terms.keys().collect();
        keys.sort_by(|a, b| leading_cmp(a, b));
        let mut out = String::new();
        for e in keys {
            let c = &self.terms[e];
            let mono = fmt_monomial(
                &TowerElem {
                    unit: c.clone(),
                    exps: e.clone(),
                },
                vars,
                base,
            );
            if out.is_empty() {
                out = mono;
            } else if let Some(rest) = mono.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&mono);
            }
        }
        out
    }
}

pub fn fmt_monomial(m: &TowerElem, vars: &[String], base: &TowerBase) -> String {
    let mut parts = Vec::new();
    let unit = base.fmt(&m.unit);
    for (v, &e) in vars.iter().zip(&m.exps) {
        match e {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    if parts.is_empty() {
        return unit;
    }
    let body = parts.join("*");
    match unit.as_str() {
        "1" => body,
        "-1" => format!("-{body}"),
        _ => format!("{unit}*{body}"),
    }
}

/// `|unit|` for rational towers; used when choosing search representatives.
pub fn rat_unit_height(s: &Scalar) -> BigInt {
    match s {
        Scalar::Rat(r) => r.numer().abs().max(r.denom().clone()),
        Scalar::Fq(x) => BigInt::from(*x),
    }
}

pub fn is_one(s: &Scalar) -> bool {
    match s {
        Scalar::Fq(x) => *x == 1,
        Scalar::Rat(r) => r.is_one(),
    }
}
