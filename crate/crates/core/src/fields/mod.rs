//! Supported base fields, their elements, square classes, valuations and
//! residue maps.
//!
//! p-adic fields are never completed: their elements are rationals (or
//! rational functions) read inside the completion, and every decision about
//! them goes through valuations and residues.

pub mod arith;
pub mod finite;
pub mod parse;
pub mod poly;
pub mod tower;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use finite::FiniteField;
pub use poly::{Poly, RatFunc};
pub use tower::{LaurentPoly, Scalar, TowerBase, TowerElem};

pub use crate::quadform::is_sum_of_two_squares;

/// Maximal number of Laurent variables in a tower.
pub const MAX_TOWER_DEPTH: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldDescriptor {
    Rationals,
    PAdic {
        p: u64,
    },
    FiniteField {
        q: u64,
    },
    FunctionField {
        base: Box<FieldDescriptor>,
        var: String,
    },
    LaurentTower {
        base: Box<FieldDescriptor>,
        vars: Vec<String>,
    },
}

/// A validated field backend.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Field {
    Rationals,
    PAdic(u64),
    /// `K0(var)` with `K0 = Q` (`p = None`) or `Q_p`.
    Function {
        p: Option<u64>,
        var: String,
    },
    /// `k((vars[0]))...((vars[n-1]))`; with no variables this is `k` itself.
    Tower {
        base: TowerBase,
        vars: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Rat(BigRational),
    Func(RatFunc),
    Mono(TowerElem),
}

/// Exact vector entry: witnesses over towers need whole Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Rat(BigRational),
    Func(RatFunc),
    Laurent(LaurentPoly),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ValuationRef {
    PAdicPlace(u64),
    RealPlace,
    TAdic(String),
    DegreeValuation(String),
    TowerVar(usize),
}

/// Canonical representative of an element of `K*/K*^2`.
#[derive(Clone, Debug)]
pub struct SquareClass {
    pub rep: Element,
    pub label: String,
    order: Vec<i64>,
}

impl PartialEq for SquareClass {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label
    }
}

impl Eq for SquareClass {}

impl Hash for SquareClass {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.label.hash(state);
    }
}

impl PartialOrd for SquareClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SquareClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.label.cmp(&other.label))
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl Serialize for SquareClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label)
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::Invalid(
            "p = 2 is not supported (characteristic 2 residue field)".into(),
        ));
    }
    if !arith::is_prime_u64(p) {
        return Err(Error::Invalid(format!("p = {p} is not a prime")));
    }
    Ok(())
}

fn check_var(v: &str) -> Result<()> {
    let ok = v.chars().next().is_some_and(|c| c.is_alphabetic())
        && v.chars().all(|c| c.is_alphanumeric() || c == '_')
        && v != "g";
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid(format!("bad variable name `{v}`")))
    }
}

impl Field {
    pub fn rationals() -> Field {
        Field::Rationals
    }

    pub fn padic(p: u64) -> Result<Field> {
        check_odd_prime(p)?;
        Ok(Field::PAdic(p))
    }

    pub fn finite(q: u64) -> Result<Field> {
        Ok(Field::Tower {
            base: TowerBase::Finite(Arc::new(FiniteField::new(q)?)),
            vars: vec![],
        })
    }

    pub fn function(p: Option<u64>, var: &str) -> Result<Field> {
        if let Some(p) = p {
            check_odd_prime(p)?;
        }
        check_var(var)?;
        Ok(Field::Function {
            p,
            var: var.to_string(),
        })
    }

    pub fn finite_tower(q: u64, vars: &[&str]) -> Result<Field> {
        Self::tower(
            TowerBase::Finite(Arc::new(FiniteField::new(q)?)),
            vars.iter().map(|s| s.to_string()).collect(),
        )
    }

    pub fn rational_tower(vars: &[&str]) -> Result<Field> {
        Self::tower(
            TowerBase::Rationals,
            vars.iter().map(|s| s.to_string()).collect(),
        )
    }

    fn tower(base: TowerBase, vars: Vec<String>) -> Result<Field> {
        if vars.is_empty() || vars.len() > MAX_TOWER_DEPTH {
            return Err(Error::Invalid(format!(
                "tower depth must be 1..={MAX_TOWER_DEPTH}"
            )));
        }
        for (i, v) in vars.iter().enumerate() {
            check_var(v)?;
            if vars[..i].contains(v) {
                return Err(Error::Invalid(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Field::Tower { base, vars })
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Field> {
        match d {
            FieldDescriptor::Rationals => Ok(Field::Rationals),
            FieldDescriptor::PAdic { p } => Field::padic(*p),
            FieldDescriptor::FiniteField { q } => Field::finite(*q),
            FieldDescriptor::FunctionField { base, var } => match base.as_ref() {
                FieldDescriptor::Rationals => Field::function(None, var),
                FieldDescriptor::PAdic { p } => Field::function(Some(*p), var),
                _ => Err(Error::Invalid(
                    "function field base must be Q or Q_p".into(),
                )),
            },
            FieldDescriptor::LaurentTower { base, vars } => {
                let base = match base.as_ref() {
                    FieldDescriptor::Rationals => TowerBase::Rationals,
                    FieldDescriptor::FiniteField { q } => {
                        TowerBase::Finite(Arc::new(FiniteField::new(*q)?))
                    }
                    _ => return Err(Error::Invalid("tower base must be F_q or Q".into())),
                };
                Field::tower(base, vars.clone())
            }
        }
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            Field::Rationals => FieldDescriptor::Rationals,
            Field::PAdic(p) => FieldDescriptor::PAdic { p: *p },
            Field::Function { p, var } => FieldDescriptor::FunctionField {
                base: Box::new(match p {
                    None => FieldDescriptor::Rationals,
                    Some(p) => FieldDescriptor::PAdic { p: *p },
                }),
                var: var.clone(),
            },
            Field::Tower { base, vars } => {
                let b = match base {
                    TowerBase::Finite(f) => FieldDescriptor::FiniteField { q: f.order() },
                    TowerBase::Rationals => FieldDescriptor::Rationals,
                };
                if vars.is_empty() {
                    b
                } else {
                    FieldDescriptor::LaurentTower {
                        base: Box::new(b),
                        vars: vars.clone(),
                    }
                }
            }
        }
    }

    /// Parses a field spec string such as `Q`, `Q(t)`, `Qp(t):p=3`, `Fq:q=3`,
    /// `Fq-tower:q=3,vars=s,t`, `Qp:p=5` or `Q-tower:vars=s,t`.
    pub fn parse_spec(spec: &str) -> Result<Field> {
        let spec = spec.trim();
        let (head, params) = match spec.split_once(':') {
            Some((h, p)) => (h.trim(), p.trim()),
            None => (spec, ""),
        };
        let mut p_param = None;
        let mut q_param = None;
        let mut vars: Vec<String> = Vec::new();
        let mut in_vars = false;
        for item in params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if let Some((k, v)) = item.split_once('=') {
                in_vars = false;
                let (k, v) = (k.trim(), v.trim());
                match k {
                    "p" => p_param = Some(parse_u64(v)?),
                    "q" => q_param = Some(parse_u64(v)?),
                    "vars" => {
                        in_vars = true;
                        vars.push(v.to_string());
                    }
                    _ => return Err(Error::Invalid(format!("unknown field parameter `{k}`"))),
                }
            } else if in_vars {
                vars.push(item.to_string());
            } else {
                return Err(Error::Invalid(format!(
                    "malformed field parameter `{item}`"
                )));
            }
        }
        let need = |o: Option<u64>, name: &str| {
            o.ok_or_else(|| Error::Invalid(format!("field spec `{spec}` needs `{name}=`")))
        };
        match head {
            "Q" => Ok(Field::Rationals),
            "Qp" => Field::padic(need(p_param, "p")?),
            "Fq" => Field::finite(need(q_param, "q")?),
            "Fq-tower" => {
                let q = need(q_param, "q")?;
                Field::tower(TowerBase::Finite(Arc::new(FiniteField::new(q)?)), vars)
            }
            "Q-tower" => Field::tower(TowerBase::Rationals, vars),
            _ => {
                if let Some(var) = head.strip_prefix("Q(").and_then(|r| r.strip_suffix(')')) {
                    Field::function(None, var.trim())
                } else if let Some(var) = head.strip_prefix("Qp(").and_then(|r| r.strip_suffix(')'))
                {
                    Field::function(Some(need(p_param, "p")?), var.trim())
                } else {
                    Err(Error::Invalid(format!("unknown field spec `{spec}`")))
                }
            }
        }
    }

    pub fn spec(&self) -> String {
        match self {
            Field::Rationals => "Q".into(),
            Field::PAdic(p) => format!("Qp:p={p}"),
            Field::Function { p: None, var } => format!("Q({var})"),
            Field::Function { p: Some(p), var } => format!("Qp({var}):p={p}"),
            Field::Tower {
                base: TowerBase::Finite(f),
                vars,
            } if vars.is_empty() => format!("Fq:q={}", f.order()),
            Field::Tower {
                base: TowerBase::Finite(f),
                vars,
            } => {
                format!("Fq-tower:q={},vars={}", f.order(), vars.join(","))
            }
            Field::Tower {
                base: TowerBase::Rationals,
                vars,
            } if vars.is_empty() => "Q".into(),
            Field::Tower {
                base: TowerBase::Rationals,
                vars,
            } => format!("Q-tower:vars={}", vars.join(",")),
        }
    }

    /// Odd residue characteristic or `None` for characteristic-0 residue fields.
    pub fn finite_base(&self) -> Option<&FiniteField> {
        match self {
            Field::Tower {
                base: TowerBase::Finite(f),
                ..
            } => Some(f),
            _ => None,
        }
    }

    pub fn has_finite_square_classes(&self) -> bool {
        matches!(self, Field::PAdic(_)) || self.finite_base().is_some()
    }

    pub fn tower_parts(&self) -> Option<(&TowerBase, &[String])> {
        match self {
            Field::Tower { base, vars } => Some((base, vars)),
            _ => None,
        }
    }

    /// Coefficient field of a function field.
    pub fn function_base(&self) -> Option<Field> {
        match self {
            Field::Function { p: None, .. } => Some(Field::Rationals),
            Field::Function { p: Some(p), .. } => Some(Field::PAdic(*p)),
            _ => None,
        }
    }

    /// `k((x1))...((x_{n-1}))` obtained by dropping the outermost variable.
    pub fn tower_residue_field(&self) -> Option<Field> {
        match self {
            Field::Tower { base, vars } if !vars.is_empty() => Some(Field::Tower {
                base: base.clone(),
                vars: vars[..vars.len() - 1].to_vec(),
            }),
            _ => None,
        }
    }

    fn nvars(&self) -> usize {
        self.tower_parts().map(|(_, v)| v.len()).unwrap_or(0)
    }

    // ---------------------------------------------------------------- elements

    pub fn int(&self, n: i64) -> Element {
        self.bigint(&BigInt::from(n))
    }

    pub fn bigint(&self, n: &BigInt) -> Element {
        match self {
            Field::Rationals | Field::PAdic(_) => {
                Element::Rat(BigRational::from_integer(n.clone()))
            }
            Field::Function { .. } => {
                Element::Func(RatFunc::constant(BigRational::from_integer(n.clone())))
            }
            Field::Tower { base, vars } => Element::Mono(TowerElem {
                unit: base.from_bigint(n),
                exps: vec![0; vars.len()],
            }),
        }
    }

    pub fn rational(&self, r: &BigRational) -> Result<Element> {
        let num = self.bigint(r.numer());
        let den = self.bigint(r.denom());
        self.div(&num, &den)
    }

    pub fn one(&self) -> Element {
        self.int(1)
    }

    pub fn is_zero(&self, x: &Element) -> bool {
        match (self, x) {
            (_, Element::Rat(r)) => r.is_zero(),
            (_, Element::Func(f)) => f.is_zero(),
            (Field::Tower { base, .. }, Element::Mono(m)) => base.is_zero(&m.unit),
            _ => false,
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (_, Element::Rat(x), Element::Rat(y)) => Element::Rat(x * y),
            (_, Element::Func(x), Element::Func(y)) => Element::Func(x.mul(y)),
            (Field::Tower { base, .. }, Element::Mono(x), Element::Mono(y)) => {
                Element::Mono(x.mul(y, base))
            }
            _ => panic!("element from a different field"),
        }
    }

    pub fn neg(&self, a: &Element) -> Element {
        match (self, a) {
            (_, Element::Rat(x)) => Element::Rat(-x),
            (_, Element::Func(x)) => Element::Func(x.neg()),
            (Field::Tower { base, .. }, Element::Mono(x)) => Element::Mono(x.neg(base)),
            _ => panic!("element from a different field"),
        }
    }

    pub fn inv(&self, a: &Element) -> Result<Element> {
        if self.is_zero(a) {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(match (self, a) {
            (_, Element::Rat(x)) => Element::Rat(x.recip()),
            (_, Element::Func(x)) => Element::Func(x.inv()),
            (Field::Tower { base, .. }, Element::Mono(x)) => Element::Mono(x.inv(base)),
            _ => panic!("element from a different field"),
        })
    }

    pub fn div(&self, a: &Element, b: &Element) -> Result<Element> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn product(&self, xs: &[Element]) -> Element {
        xs.iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    pub fn square(&self, a: &Element) -> Element {
        self.mul(a, a)
    }

    /// Power with an integer exponent (nonzero base for negative exponents).
    pub fn pow(&self, a: &Element, e: i64) -> Result<Element> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut acc = self.one();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Ok(acc)
    }

    /// The rational behind an element of Q, Q_p or a constant of Q(t).
    pub fn as_rational(&self, x: &Element) -> Option<BigRational> {
        match x {
            Element::Rat(r) => Some(r.clone()),
            Element::Func(f) => f.as_constant(),
            Element::Mono(TowerElem {
                unit: Scalar::Rat(r),
                exps,
            }) if exps.iter().all(|e| *e == 0) => Some(r.clone()),
            _ => None,
        }
    }

    pub fn fmt_element(&self, x: &Element) -> String {
        match (self, x) {
            (_, Element::Rat(r)) => r.to_string(),
            (Field::Function { var, .. }, Element::Func(f)) => f.fmt_in(var),
            (Field::Tower { base, vars }, Element::Mono(m)) => {
                if base.is_zero(&m.unit) {
                    "0".into()
                } else {
                    tower::fmt_monomial(m, vars, base)
                }
            }
            _ => format!("{x:?}"),
        }
    }

    /// Parses an element literal. Over towers, sums collapse to their leading
    /// monomial, which determines the element up to a square 1-unit.
    pub fn parse_element(&self, src: &str) -> Result<Element> {
        match self {
            Field::Rationals | Field::PAdic(_) => Ok(Element::Rat(parse::eval(src, &RatAlg)?)),
            Field::Function { var, .. } => Ok(Element::Func(parse::eval(src, &FuncAlg { var })?)),
            Field::Tower { base, vars } => {
                let (num, den) = parse::eval(src, &TowerAlg { base, vars })?;
                let n = vars.len();
                let zero = TowerElem {
                    unit: base.zero(),
                    exps: vec![0; n],
                };
                let Some(ln) = num.leading() else {
                    return Ok(Element::Mono(zero));
                };
                let ld = den.leading().expect("denominator checked nonzero");
                Ok(Element::Mono(ln.mul(&ld.inv(base), base)))
            }
        }
    }

    /// Parses a nonzero element literal.
    pub fn parse_nonzero(&self, src: &str) -> Result<Element> {
        let x = self.parse_element(src)?;
        if self.is_zero(&x) {
            return Err(Error::Domain(format!("`{src}` is zero")));
        }
        Ok(x)
    }

    // ------------------------------------------------------------------ values

    pub fn value_of(&self, x: &Element) -> Value {
        match (self, x) {
            (_, Element::Rat(r)) => Value::Rat(r.clone()),
            (_, Element::Func(f)) => Value::Func(f.clone()),
            (Field::Tower { base, vars }, Element::Mono(m)) => {
                if base.is_zero(&m.unit) {
                    Value::Laurent(LaurentPoly::zero(vars.len()))
                } else {
                    Value::Laurent(LaurentPoly::monomial(m))
                }
            }
            _ => panic!("element from a different field"),
        }
    }

    pub fn v_zero(&self) -> Value {
        match self {
            Field::Rationals | Field::PAdic(_) => Value::Rat(BigRational::zero()),
            Field::Function { .. } => Value::Func(RatFunc::zero()),
            Field::Tower { vars, .. } => Value::Laurent(LaurentPoly::zero(vars.len())),
        }
    }

    pub fn v_int(&self, n: i64) -> Value {
        self.value_of(&self.int(n))
    }

    pub fn v_is_zero(&self, v: &Value) -> bool {
        match v {
            Value::Rat(r) => r.is_zero(),
            Value::Func(f) => f.is_zero(),
            Value::Laurent(l) => l.is_zero(),
        }
    }

    pub fn v_add(&self, a: &Value, b: &Value) -> Value {
        match (self, a, b) {
            (_, Value::Rat(x), Value::Rat(y)) => Value::Rat(x + y),
            (_, Value::Func(x), Value::Func(y)) => Value::Func(x.add(y)),
            (Field::Tower { base, .. }, Value::Laurent(x), Value::Laurent(y)) => {
                Value::Laurent(x.add(y, base))
            }
            _ => panic!("value from a different field"),
        }
    }

    pub fn v_neg(&self, a: &Value) -> Value {
        match (self, a) {
            (_, Value::Rat(x)) => Value::Rat(-x),
            (_, Value::Func(x)) => Value::Func(x.neg()),
            (Field::Tower { base, .. }, Value::Laurent(x)) => Value::Laurent(x.neg(base)),
            _ => panic!("value from a different field"),
        }
    }

    pub fn v_sub(&self, a: &Value, b: &Value) -> Value {
        self.v_add(a, &self.v_neg(b))
    }

    pub fn v_mul(&self, a: &Value, b: &Value) -> Value {
        match (self, a, b) {
            (_, Value::Rat(x), Value::Rat(y)) => Value::Rat(x * y),
            (_, Value::Func(x), Value::Func(y)) => Value::Func(x.mul(y)),
            (Field::Tower { base, .. }, Value::Laurent(x), Value::Laurent(y)) => {
                Value::Laurent(x.mul(y, base))
            }
            _ => panic!("value from a different field"),
        }
    }

    /// Division by a nonzero element (monomial over towers).
    pub fn v_div_elem(&self, a: &Value, d: &Element) -> Result<Value> {
        let inv = self.inv(d)?;
        Ok(self.v_mul(a, &self.value_of(&inv)))
    }

    /// `sum_i c_i x_i^2`.
    pub fn eval_diagonal(&self, coeffs: &[Element], x: &[Value]) -> Value {
        coeffs.iter().zip(x).fold(self.v_zero(), |acc, (c, xi)| {
            let term = self.v_mul(&self.value_of(c), &self.v_mul(xi, xi));
            self.v_add(&acc, &term)
        })
    }

    /// Element equal to a nonzero value (leading term over towers).
    pub fn element_of_value(&self, v: &Value) -> Result<Element> {
        if self.v_is_zero(v) {
            return Err(Error::Domain("zero value".into()));
        }
        Ok(match v {
            Value::Rat(r) => Element::Rat(r.clone()),
            Value::Func(f) => Element::Func(f.clone()),
            Value::Laurent(l) => Element::Mono(l.leading().expect("nonzero")),
        })
    }

    pub fn fmt_value(&self, v: &Value) -> String {
        match (self, v) {
            (_, Value::Rat(r)) => r.to_string(),
            (Field::Function { var, .. }, Value::Func(f)) => f.fmt_in(var),
            (Field::Tower { base, vars }, Value::Laurent(l)) => l.fmt(vars, base),
            _ => format!("{v:?}"),
        }
    }

    /// Parses an exact vector entry. Over towers the literal must be a
    /// Laurent polynomial (denominators are monomials).
    pub fn parse_value(&self, src: &str) -> Result<Value> {
        match self {
            Field::Rationals | Field::PAdic(_) => Ok(Value::Rat(parse::eval(src, &RatAlg)?)),
            Field::Function { var, .. } => Ok(Value::Func(parse::eval(src, &FuncAlg { var })?)),
            Field::Tower { base, vars } => {
                let (num, den) = parse::eval(src, &TowerAlg { base, vars })?;
                let m = den.as_monomial().ok_or_else(|| {
                    Error::parse(0, src, "tower vector entries must be Laurent polynomials")
                })?;
                Ok(Value::Laurent(num.div_monomial(&m, base)))
            }
        }
    }

    // ----------------------------------------------------------- square classes

    /// Writes `x = r * s^2` removing exact squares only. Over Q, Q(t) and the
    /// towers `r` is the canonical class representative; over Q_p and Q_p(t)
    /// it may still differ from it by a p-adic square.
    pub fn reduce_squares(&self, x: &Element) -> Result<(Element, Element)> {
        if self.is_zero(x) {
            return Err(Error::Domain("zero has no square class".into()));
        }
        match (self, x) {
            (_, Element::Rat(q)) => {
                let (s, r) = arith::squarefree_rat(q)?;
                Ok((Element::Rat(BigRational::from_integer(s)), Element::Rat(r)))
            }
            (_, Element::Func(f)) => {
                let (s, prim, root) = func_square_split(f)?;
                let rep = RatFunc::from_poly(prim.scale(&BigRational::from_integer(s)));
                Ok((Element::Func(rep), Element::Func(root)))
            }
            (Field::Tower { base, .. }, Element::Mono(m)) => {
                let (urep, uroot) = base.square_split(&m.unit)?;
                let rep = TowerElem {
                    unit: urep,
                    exps: m.exps.iter().map(|e| e.rem_euclid(2)).collect(),
                };
                let root = TowerElem {
                    unit: uroot,
                    exps: m.exps.iter().map(|e| e.div_euclid(2)).collect(),
                };
                Ok((Element::Mono(rep), Element::Mono(root)))
            }
            _ => panic!("element from a different field"),
        }
    }

    pub fn square_class(&self, x: &Element) -> Result<SquareClass> {
        let (r, _) = self.reduce_squares(x)?;
        let rep = match (self, &r) {
            (Field::PAdic(p), Element::Rat(q)) => {
                Element::Rat(BigRational::from_integer(padic_class_int(q, *p)))
            }
            (Field::Function { p: Some(p), .. }, Element::Func(f)) => {
                let (c, prim) = f.num().content_primitive();
                let s = padic_class_int(&c, *p);
                Element::Func(RatFunc::from_poly(
                    prim.scale(&BigRational::from_integer(s)),
                ))
            }
            _ => r,
        };
        Ok(self.make_class(rep))
    }

    fn make_class(&self, rep: Element) -> SquareClass {
        let label = self.fmt_element(&rep);
        let order = match &rep {
            Element::Rat(q) => {
                let n = q.numer().abs();
                vec![
                    i64::try_from(&n).unwrap_or(i64::MAX),
                    q.is_negative() as i64,
                ]
            }
            Element::Func(f) => vec![f.num().degree(), label.len() as i64],
            Element::Mono(m) => {
                let mut o: Vec<i64> = m.exps.iter().rev().cloned().collect();
                o.push(match &m.unit {
                    Scalar::Fq(u) => (*u != 1) as i64,
                    Scalar::Rat(q) => {
                        let h = i64::try_from(q.numer().abs()).unwrap_or(i64::MAX / 2);
                        h * 2 + q.is_negative() as i64
                    }
                });
                o
            }
        };
        SquareClass { rep, label, order }
    }

    pub fn is_square(&self, x: &Element) -> Result<bool> {
        Ok(self.square_class(x)?.rep == self.one())
    }

    pub fn class_mul(&self, a: &SquareClass, b: &SquareClass) -> SquareClass {
        self.square_class(&self.mul(&a.rep, &b.rep))
            .expect("classes are nonzero")
    }

    pub fn one_class(&self) -> SquareClass {
        self.make_class(self.one())
    }

    /// All square classes of a field with finite `K*/K*^2`.
    pub fn enumerate_square_classes(&self) -> Result<Vec<SquareClass>> {
        let mut out = match self {
            Field::Tower {
                base: TowerBase::Finite(f),
                vars,
            } => {
                let n = vars.len();
                let mut out = Vec::with_capacity(1 << (n + 1));
                for mask in 0u32..(1 << (n + 1)) {
                    let unit = if mask & 1 == 1 { f.nonsquare() } else { 1 };
                    let exps = (0..n).map(|i| ((mask >> (i + 1)) & 1) as i64).collect();
                    out.push(self.make_class(Element::Mono(TowerElem {
                        unit: Scalar::Fq(unit),
                        exps,
                    })));
                }
                out
            }
            Field::PAdic(p) => {
                let u = arith::smallest_nonresidue(*p) as i64;
                [1, u, *p as i64, u * *p as i64]
                    .iter()
                    .map(|&r| self.make_class(self.int(r)))
                    .collect()
            }
            _ => {
                return Err(Error::Unsupported(format!(
                    "{} has infinitely many square classes",
                    self.spec()
                )))
            }
        };
        out.sort();
        Ok(out)
    }

    /// Generators of the square-class group for the finite cases.
    pub fn square_class_generators(&self) -> Result<Vec<SquareClass>> {
        match self {
            Field::Tower {
                base: TowerBase::Finite(f),
                vars,
            } => {
                let n = vars.len();
                let mut gens = vec![self.make_class(Element::Mono(TowerElem {
                    unit: Scalar::Fq(f.nonsquare()),
                    exps: vec![0; n],
                }))];
                for i in 0..n {
                    let mut exps = vec![0; n];
                    exps[i] = 1;
                    gens.push(self.make_class(Element::Mono(TowerElem {
                        unit: Scalar::Fq(1),
                        exps,
                    })));
                }
                Ok(gens)
            }
            Field::PAdic(p) => {
                let u = arith::smallest_nonresidue(*p) as i64;
                Ok(vec![
                    self.make_class(self.int(u)),
                    self.make_class(self.int(*p as i64)),
                ])
            }
            _ => Err(Error::Unsupported(format!(
                "{} has infinitely many square classes",
                self.spec()
            ))),
        }
    }

    // -------------------------------------------------------------- valuations

    pub fn parse_place(&self, s: &str) -> Result<ValuationRef> {
        let s = s.trim();
        if matches!(s, "real" | "R" | "inf-real") {
            return Ok(ValuationRef::RealPlace);
        }
        let num = s.strip_prefix("p=").unwrap_or(s);
        if let Ok(p) = num.parse::<u64>() {
            return Ok(ValuationRef::PAdicPlace(p));
        }
        match self {
            Field::Function { var, .. } => {
                if s == var || s == format!("{var}-adic") {
                    Ok(ValuationRef::TAdic(var.clone()))
                } else if matches!(s, "deg" | "inf" | "infinity") || s == format!("1/{var}") {
                    Ok(ValuationRef::DegreeValuation(var.clone()))
                } else {
                    Err(Error::Invalid(format!(
                        "unknown place `{s}` for {}",
                        self.spec()
                    )))
                }
            }
            Field::Tower { vars, .. } => vars
                .iter()
                .position(|v| v == s || s.strip_suffix("-adic") == Some(v.as_str()))
                .map(ValuationRef::TowerVar)
                .ok_or_else(|| Error::Invalid(format!("unknown place `{s}` for {}", self.spec()))),
            _ => Err(Error::Invalid(format!(
                "unknown place `{s}` for {}",
                self.spec()
            ))),
        }
    }

    pub fn fmt_place(&self, v: &ValuationRef) -> String {
        match v {
            ValuationRef::PAdicPlace(p) => format!("p={p}"),
            ValuationRef::RealPlace => "real".into(),
            ValuationRef::TAdic(var) => format!("{var}-adic"),
            ValuationRef::DegreeValuation(var) => format!("1/{var}"),
            ValuationRef::TowerVar(i) => match self.tower_parts() {
                Some((_, vars)) if *i < vars.len() => format!("{}-adic", vars[*i]),
                _ => format!("var#{i}"),
            },
        }
    }

    fn check_place(&self, v: &ValuationRef) -> Result<()> {
        let ok = match (self, v) {
            (Field::Rationals, ValuationRef::PAdicPlace(p)) => arith::is_prime_u64(*p),
            (Field::PAdic(p), ValuationRef::PAdicPlace(q)) => p == q,
            (
                Field::Function { var, .. },
                ValuationRef::TAdic(w) | ValuationRef::DegreeValuation(w),
            ) => var == w,
            (Field::Tower { vars, .. }, ValuationRef::TowerVar(i)) => *i < vars.len(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "place {} does not apply to {}",
                self.fmt_place(v),
                self.spec()
            )))
        }
    }

    pub fn valuation(&self, x: &Element, v: &ValuationRef) -> Result<i64> {
        self.check_place(v)?;
        if self.is_zero(x) {
            return Err(Error::Domain("valuation of zero".into()));
        }
        Ok(match (x, v) {
            (Element::Rat(q), ValuationRef::PAdicPlace(p)) => arith::val_rat(q, *p),
            (Element::Func(f), ValuationRef::TAdic(_)) => f.t_valuation(),
            (Element::Func(f), ValuationRef::DegreeValuation(_)) => f.degree_valuation(),
            (Element::Mono(m), ValuationRef::TowerVar(i)) => m.exps[*i],
            _ => {
                return Err(Error::Domain(
                    "element does not belong to this field".into(),
                ))
            }
        })
    }

    /// Sign at the real place (Q only).
    pub fn real_sign(&self, x: &Element) -> Result<i8> {
        match (self, x) {
            (Field::Rationals, Element::Rat(q)) if !q.is_zero() => {
                Ok(if q.is_negative() { -1 } else { 1 })
            }
            _ => Err(Error::Domain(format!("no real place on {}", self.spec()))),
        }
    }

    /// A uniformizer for `v`.
    pub fn uniformizer(&self, v: &ValuationRef) -> Result<Element> {
        self.check_place(v)?;
        Ok(match (self, v) {
            (_, ValuationRef::PAdicPlace(p)) => self.int(*p as i64),
            (_, ValuationRef::TAdic(_)) => Element::Func(RatFunc::var()),
            (_, ValuationRef::DegreeValuation(_)) => Element::Func(RatFunc::var().inv()),
            (Field::Tower { base, vars }, ValuationRef::TowerVar(i)) => {
                let mut exps = vec![0; vars.len()];
                exps[*i] = 1;
                Element::Mono(TowerElem {
                    unit: base.one(),
                    exps,
                })
            }
            _ => unreachable!("checked"),
        })
    }

    pub fn residue_field(&self, v: &ValuationRef) -> Result<Field> {
        self.check_place(v)?;
        Ok(match (self, v) {
            (Field::Rationals | Field::PAdic(_), ValuationRef::PAdicPlace(p)) => Field::finite(*p)?,
            (Field::Function { .. }, _) => self.function_base().expect("function field"),
            (Field::Tower { base, vars }, ValuationRef::TowerVar(i)) => {
                let mut rest = vars.clone();
                rest.remove(*i);
                Field::Tower {
                    base: base.clone(),
                    vars: rest,
                }
            }
            _ => unreachable!("checked"),
        })
    }

    /// Residue of a valuation-0 element.
    pub fn residue(&self, x: &Element, v: &ValuationRef) -> Result<(Field, Element)> {
        let val = self.valuation(x, v)?;
        if val != 0 {
            return Err(Error::Domain(format!(
                "residue needs valuation 0 at {}, got {val}",
                self.fmt_place(v)
            )));
        }
        let rf = self.residue_field(v)?;
        let r = match (x, v) {
            (Element::Rat(q), ValuationRef::PAdicPlace(p)) => {
                let m = arith::rat_mod(q, *p).expect("unit");
                Element::Mono(TowerElem {
                    unit: Scalar::Fq(m),
                    exps: vec![],
                })
            }
            (Element::Func(f), ValuationRef::TAdic(_)) => {
                Element::Rat(f.num().coeff(0) / f.den().coeff(0))
            }
            (Element::Func(f), ValuationRef::DegreeValuation(_)) => {
                Element::Rat(f.num().lc() / f.den().lc())
            }
            (Element::Mono(m), ValuationRef::TowerVar(i)) => {
                let mut exps = m.exps.clone();
                exps.remove(*i);
                Element::Mono(TowerElem {
                    unit: m.unit.clone(),
                    exps,
                })
            }
            _ => unreachable!("checked"),
        };
        Ok((rf, r))
    }

    /// Splits `x = pi^e * unit` at `v`, returning `(e, unit)`.
    pub fn split_at(&self, x: &Element, v: &ValuationRef) -> Result<(i64, Element)> {
        let e = self.valuation(x, v)?;
        let pi = self.uniformizer(v)?;
        Ok((e, self.mul(x, &self.pow(&pi, -e)?)))
    }

    /// Embeds an element of the residue field back as a unit (constant lift).
    pub fn lift_residue(&self, v: &ValuationRef, r: &Element) -> Result<Element> {
        self.check_place(v)?;
        Ok(match (self, v, r) {
            (Field::Function { .. }, _, Element::Rat(q)) => {
                Element::Func(RatFunc::constant(q.clone()))
            }
            (Field::Tower { .. }, ValuationRef::TowerVar(i), Element::Mono(m)) => {
                let mut exps = m.exps.clone();
                exps.insert(*i, 0);
                Element::Mono(TowerElem {
                    unit: m.unit.clone(),
                    exps,
                })
            }
            (Field::Rationals | Field::PAdic(_), ValuationRef::PAdicPlace(p), Element::Mono(m)) => {
                let Scalar::Fq(u) = m.unit else {
                    unreachable!()
                };
                let f = FiniteField::new(*p)?;
                self.int(f.fmt_elem(u).parse::<i64>().unwrap_or(u as i64))
            }
            _ => {
                return Err(Error::Domain(
                    "residue element does not match the place".into(),
                ))
            }
        })
    }

    pub fn elements_equal(&self, a: &Element, b: &Element) -> bool {
        a == b
    }

    pub fn nvars_of(&self) -> usize {
        self.nvars()
    }
}

fn parse_u64(s: &str) -> Result<u64> {
    s.parse()
        .map_err(|_| Error::Invalid(format!("expected a positive integer, got `{s}`")))
}

/// Class of a nonzero rational in `Q_p*/Q_p*^2` as one of `1, u, p, u*p`.
pub fn padic_class_int(q: &BigRational, p: u64) -> BigInt {
    let v = arith::val_rat(q, p);
    let unit = arith::unit_part(q, p);
    let mut rep = if arith::legendre_rat(&unit, p) == 1 {
        BigInt::one()
    } else {
        BigInt::from(arith::smallest_nonresidue(p))
    };
    if v.rem_euclid(2) == 1 {
        rep *= BigInt::from(p);
    }
    rep
}

/// `f = s * prim * root^2` with `s` a square-free integer and `prim` a
/// square-free primitive integer polynomial with positive leading coefficient.
fn func_square_split(f: &RatFunc) -> Result<(BigInt, Poly, RatFunc)> {
    let nd = f.num().mul(f.den());
    let (lc, kernel, root) = nd.square_decompose();
    let (c, prim) = kernel.content_primitive();
    let (s, r) = arith::squarefree_rat(&(lc * c))?;
    let sqrt_part = RatFunc::new(root.scale(&r), f.den().clone());
    Ok((s, prim, sqrt_part))
}

// ------------------------------------------------------------- literal algebras

struct RatAlg;

impl parse::LitAlgebra for RatAlg {
    type V = BigRational;
    fn int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn ident(&self, name: &str, pos: usize) -> Result<BigRational> {
        Err(Error::parse(pos, name, "this field has no variables"))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn div(&self, a: &BigRational, b: &BigRational, pos: usize) -> Result<BigRational> {
        if b.is_zero() {
            return Err(Error::parse(pos, "/", "division by zero"));
        }
        Ok(a / b)
    }
    fn pow(&self, a: &BigRational, e: i64, pos: usize) -> Result<BigRational> {
        if a.is_zero() && e < 0 {
            return Err(Error::parse(pos, "^", "negative power of zero"));
        }
        let mut r = BigRational::one();
        for _ in 0..e.unsigned_abs() {
            r *= a;
        }
        Ok(if e < 0 { r.recip() } else { r })
    }
}

struct FuncAlg<'a> {
    var: &'a str,
}

impl parse::LitAlgebra for FuncAlg<'_> {
    type V = RatFunc;
    fn int(&self, n: &BigInt) -> RatFunc {
        RatFunc::constant(BigRational::from_integer(n.clone()))
    }
    fn ident(&self, name: &str, pos: usize) -> Result<RatFunc> {
        if name == self.var {
            Ok(RatFunc::var())
        } else {
            Err(Error::parse(
                pos,
                name,
                format!("unknown variable (field variable is `{}`)", self.var),
            ))
        }
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.add(b)
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        a.neg()
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.mul(b)
    }
    fn div(&self, a: &RatFunc, b: &RatFunc, pos: usize) -> Result<RatFunc> {
        if b.is_zero() {
            return Err(Error::parse(pos, "/", "division by zero"));
        }
        Ok(a.div(b))
    }
    fn pow(&self, a: &RatFunc, e: i64, pos: usize) -> Result<RatFunc> {
        if a.is_zero() && e < 0 {
            return Err(Error::parse(pos, "^", "negative power of zero"));
        }
        Ok(a.pow(e))
    }
}

struct TowerAlg<'a> {
    base: &'a TowerBase,
    vars: &'a [String],
}

type Frac = (LaurentPoly, LaurentPoly);

impl TowerAlg<'_> {
    fn norm(&self, (n, d): Frac) -> Frac {
        match d.as_monomial() {
            Some(m) => (
                n.div_monomial(&m, self.base),
                LaurentPoly::scalar(self.base.one(), self.vars.len(), self.base),
            ),
            None => (n, d),
        }
    }
}

impl parse::LitAlgebra for TowerAlg<'_> {
    type V = Frac;
    fn int(&self, n: &BigInt) -> Frac {
        let k = self.vars.len();
        (
            LaurentPoly::scalar(self.base.from_bigint(n), k, self.base),
            LaurentPoly::scalar(self.base.one(), k, self.base),
        )
    }
    fn ident(&self, name: &str, pos: usize) -> Result<Frac> {
        let k = self.vars.len();
        let one = LaurentPoly::scalar(self.base.one(), k, self.base);
        if let Some(i) = self.vars.iter().position(|v| v == name) {
            let mut exps = vec![0; k];
            exps[i] = 1;
            return Ok((
                LaurentPoly::monomial(&TowerElem {
                    unit: self.base.one(),
                    exps,
                }),
                one,
            ));
        }
        if name == "g" {
            if let TowerBase::Finite(f) = self.base {
                return Ok((
                    LaurentPoly::scalar(Scalar::Fq(f.generator()), k, self.base),
                    one,
                ));
            }
        }
        Err(Error::parse(pos, name, "unknown identifier"))
    }
    fn add(&self, a: &Frac, b: &Frac) -> Frac {
        let n =
            a.0.mul(&b.1, self.base)
                .add(&b.0.mul(&a.1, self.base), self.base);
        self.norm((n, a.1.mul(&b.1, self.base)))
    }
    fn neg(&self, a: &Frac) -> Frac {
        (a.0.neg(self.base), a.1.clone())
    }
    fn mul(&self, a: &Frac, b: &Frac) -> Frac {
        self.norm((a.0.mul(&b.0, self.base), a.1.mul(&b.1, self.base)))
    }
    fn div(&self, a: &Frac, b: &Frac, pos: usize) -> Result<Frac> {
        if b.0.is_zero() {
            return Err(Error::parse(pos, "/", "division by zero"));
        }
        Ok(self.norm((a.0.mul(&b.1, self.base), a.1.mul(&b.0, self.base))))
    }
    fn pow(&self, a: &Frac, e: i64, pos: usize) -> Result<Frac> {
        if a.0.is_zero() && e < 0 {
            return Err(Error::parse(pos, "^", "negative power of zero"));
        }
        let b = if e < 0 {
            (a.1.clone(), a.0.clone())
        } else {
            a.clone()
        };
        let mut acc = self.int(&BigInt::one());
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &b);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests;
