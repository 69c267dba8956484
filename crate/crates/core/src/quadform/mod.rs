//! Diagonal quadratic forms, Pfister forms and per-backend deciders.

pub mod function;
pub mod hilbert;
pub mod padic;
pub mod rational;
pub mod replay;
pub mod tower;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{arith, Element, Field, TowerElem, Value};
use crate::trace::{NodeKind, ProofTrace, TriState, Witness};

pub use hilbert::{hilbert_symbol, isometric, local_invariants, LocalInvariants};
pub use replay::{check_isotropy_witness, check_representation_witness};

/// Default height for bounded witness searches over function fields.
pub const DEFAULT_HEIGHT: u64 = 1000;

/// A regular diagonal form `<c_1, ..., c_n>`. Coefficients keep their input
/// order; equality compares the sorted square classes of the entries.
#[derive(Clone, Debug)]
pub struct QuadraticForm {
    field: Field,
    coeffs: Vec<Element>,
}

impl QuadraticForm {
    pub fn new(field: &Field, coeffs: Vec<Element>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invalid(
                "a quadratic form needs at least one coefficient".into(),
            ));
        }
        if let Some(i) = coeffs.iter().position(|c| field.is_zero(c)) {
            return Err(Error::Domain(format!(
                "coefficient {} is zero (forms must be regular)",
                i + 1
            )));
        }
        Ok(QuadraticForm {
            field: field.clone(),
            coeffs,
        })
    }

    pub fn parse(field: &Field, lits: &[&str]) -> Result<Self> {
        let coeffs = lits
            .iter()
            .map(|s| field.parse_element(s))
            .collect::<Result<_>>()?;
        Self::new(field, coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Element] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn literals(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .map(|c| self.field.fmt_element(c))
            .collect()
    }

    /// Sorted square-class labels of the entries.
    pub fn presentation_key(&self) -> Vec<String> {
        let mut classes: Vec<_> = self
            .coeffs
            .iter()
            .map(|c| {
                self.field
                    .square_class(c)
                    .map(|k| k.label)
                    .unwrap_or_else(|_| self.field.fmt_element(c))
            })
            .collect();
        classes.sort();
        classes
    }

    pub fn orthogonal_sum(&self, other: &QuadraticForm) -> QuadraticForm {
        let mut coeffs = self.coeffs.clone();
        coeffs.extend(other.coeffs.iter().cloned());
        QuadraticForm {
            field: self.field.clone(),
            coeffs,
        }
    }

    /// `x * q`.
    pub fn scaled(&self, x: &Element) -> Result<QuadraticForm> {
        Self::new(
            &self.field,
            self.coeffs.iter().map(|c| self.field.mul(c, x)).collect(),
        )
    }

    /// `q + <x>`.
    pub fn with(&self, x: &Element) -> Result<QuadraticForm> {
        let mut coeffs = self.coeffs.clone();
        coeffs.push(x.clone());
        Self::new(&self.field, coeffs)
    }

    pub fn rational_coeffs(&self) -> Option<Vec<BigRational>> {
        self.coeffs
            .iter()
            .map(|c| match c {
                Element::Rat(r) => Some(r.clone()),
                _ => None,
            })
            .collect()
    }

    fn tower_coeffs(&self) -> Vec<TowerElem> {
        self.coeffs
            .iter()
            .map(|c| match c {
                Element::Mono(m) => m.clone(),
                _ => panic!("element from a different field"),
            })
            .collect()
    }
}

impl PartialEq for QuadraticForm {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.presentation_key() == other.presentation_key()
    }
}

impl Eq for QuadraticForm {}

impl Hash for QuadraticForm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.spec().hash(state);
        self.presentation_key().hash(state);
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.literals().join(", "))
    }
}

impl Serialize for QuadraticForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuadraticForm", 2)?;
        st.serialize_field("field", &self.field.spec())?;
        st.serialize_field("coeffs", &self.literals())?;
        st.end()
    }
}

/// `<<a_1, ..., a_n>>` with `1 <= n <= 3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfisterForm {
    field: Field,
    slots: Vec<Element>,
}

impl PfisterForm {
    pub fn new(field: &Field, slots: Vec<Element>) -> Result<Self> {
        if slots.is_empty() || slots.len() > 3 {
            return Err(Error::Invalid(format!(
                "Pfister forms have 1 to 3 slots, got {}",
                slots.len()
            )));
        }
        if slots.iter().any(|s| field.is_zero(s)) {
            return Err(Error::Domain("Pfister slots must be nonzero".into()));
        }
        Ok(PfisterForm {
            field: field.clone(),
            slots,
        })
    }

    pub fn parse(field: &Field, lits: &[&str]) -> Result<Self> {
        let slots = lits
            .iter()
            .map(|s| field.parse_element(s))
            .collect::<Result<_>>()?;
        Self::new(field, slots)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn slots(&self) -> &[Element] {
        &self.slots
    }

    pub fn literals(&self) -> Vec<String> {
        self.slots
            .iter()
            .map(|c| self.field.fmt_element(c))
            .collect()
    }

    pub fn expand(&self) -> QuadraticForm {
        pfister_expand(self)
    }
}

impl fmt::Display for PfisterForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<<{}>>", self.literals().join(", "))
    }
}

impl Serialize for PfisterForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PfisterForm", 2)?;
        st.serialize_field("field", &self.field.spec())?;
        st.serialize_field("slots", &self.literals())?;
        st.end()
    }
}

/// `<<a_1, ..., a_n>> = <1, -a_1> (x) ... (x) <1, -a_n>`, ordered so that
/// `<<a, b>> = <1, -a, -b, ab>`.
pub fn pfister_expand(p: &PfisterForm) -> QuadraticForm {
    let f = &p.field;
    let mut cur = vec![f.one()];
    for a in &p.slots {
        let na = f.neg(a);
        let scaled: Vec<Element> = cur.iter().map(|c| f.mul(c, &na)).collect();
        cur.extend(scaled);
    }
    QuadraticForm {
        field: f.clone(),
        coeffs: cur,
    }
}

/// Pfister slot rewrites; positions are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SlotRule {
    /// `(.., x, y, ..) -> (.., y, x, ..)` at positions `i, i+1`.
    Swap(usize),
    /// `(.., x, y, ..) -> (.., x, -xy, ..)` at positions `i, i+1`.
    MixAdjacent(usize),
}

impl fmt::Display for SlotRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlotRule::Swap(i) => write!(f, "Swap({},{})", i, i + 1),
            SlotRule::MixAdjacent(i) => write!(f, "MixAdjacent({i})"),
        }
    }
}

impl FromStr for SlotRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Invalid(format!("bad slot rule `{s}`"));
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let args: Vec<usize> = rest
            .strip_suffix(')')
            .ok_or_else(bad)?
            .split(',')
            .map(|a| a.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (name.trim(), args.as_slice()) {
            ("Swap", [i]) => Ok(SlotRule::Swap(*i)),
            ("Swap", [i, j]) if *j == i + 1 => Ok(SlotRule::Swap(*i)),
            ("MixAdjacent", [i]) => Ok(SlotRule::MixAdjacent(*i)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for SlotRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SlotRule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One slot rewrite. The result is isometric to the input by
/// `<<x, y>> = <<y, x>>` and `<<x, y>> = <<x, -xy>>`.
pub fn pfister_slot_transform(p: &PfisterForm, rule: SlotRule) -> Result<PfisterForm> {
    let n = p.slots.len();
    let i = match rule {
        SlotRule::Swap(i) | SlotRule::MixAdjacent(i) => i,
    };
    if i == 0 || i >= n {
        return Err(Error::Invalid(format!(
            "{rule} is out of range for {n} slots"
        )));
    }
    let mut slots = p.slots.clone();
    match rule {
        SlotRule::Swap(_) => slots.swap(i - 1, i),
        SlotRule::MixAdjacent(_) => {
            let f = &p.field;
            slots[i] = f.neg(&f.mul(&slots[i - 1], &slots[i]));
        }
    }
    Ok(PfisterForm {
        field: p.field.clone(),
        slots,
    })
}

/// Applies `rules` in order and records each step.
pub fn apply_slot_rules(p: &PfisterForm, rules: &[SlotRule]) -> Result<(PfisterForm, ProofTrace)> {
    let mut cur = p.clone();
    let mut root = ProofTrace::new(
        NodeKind::Conjunction,
        format!("{p} is isometric to the result of the chain"),
    )
    .with_field(p.field.spec());
    for &r in rules {
        let next = pfister_slot_transform(&cur, r)?;
        let why = match r {
            SlotRule::Swap(_) => "<<x, y>> = <<y, x>>",
            SlotRule::MixAdjacent(_) => "<<x, y>> = <<x, -xy>>",
        };
        root = root.with_child(
            ProofTrace::new(NodeKind::SlotRule, format!("{cur} = {next}"))
                .with_data("rule", r.to_string())
                .with_data("relation", why)
                .with_data("from", cur.literals())
                .with_data("to", next.literals()),
        );
        cur = next;
    }
    root.claim = format!("{p} is isometric to {cur}");
    Ok((cur, root))
}

/// Replays a slot-rule chain recorded by [`apply_slot_rules`].
pub fn check_slot_chain(p: &PfisterForm, trace: &ProofTrace) -> Result<Option<PfisterForm>> {
    let mut cur = p.clone();
    for c in &trace.children {
        if c.kind != NodeKind::SlotRule {
            return Ok(None);
        }
        let Some(rule) = c.data.get("rule").and_then(|v| v.as_str()) else {
            return Ok(None);
        };
        let next = pfister_slot_transform(&cur, rule.parse()?)?;
        let to: Option<Vec<String>> =
            serde_json::from_value(c.data.get("to").cloned().unwrap_or_default()).ok();
        if to.as_ref() != Some(&next.literals()) {
            return Ok(None);
        }
        cur = next;
    }
    Ok(Some(cur))
}

// ----------------------------------------------------------------- deciders

pub fn isotropy(q: &QuadraticForm) -> Result<TriState<Witness>> {
    isotropy_with(q, DEFAULT_HEIGHT)
}

/// Isotropy decision: total over Q, Q_p, F_q and Laurent towers; tri-state
/// over function fields, where `height` bounds the witness search.
pub fn isotropy_with(q: &QuadraticForm, height: u64) -> Result<TriState<Witness>> {
    let field = &q.field;
    match field {
        Field::Rationals => rational::isotropy(&q.rational_coeffs().expect("rational form")),
        Field::PAdic(p) => Ok(padic::isotropy(
            *p,
            &q.rational_coeffs().expect("rational form"),
        )),
        Field::Tower { base, vars } => {
            let r = tower::isotropy(base, vars, &q.tower_coeffs())?;
            Ok(r.map(|v| Witness::Exact {
                vector: v
                    .into_iter()
                    .map(|m| field.fmt_value(&field.value_of(&Element::Mono(m))))
                    .collect(),
            }))
        }
        Field::Function { .. } => function::isotropy(field, &q.coeffs, height),
    }
}

pub fn represents(q: &QuadraticForm, x: &Element) -> Result<TriState<Witness>> {
    represents_with(q, x, DEFAULT_HEIGHT)
}

/// `x` in `D(q)`, decided through `q + <-x>`. A witness is a zero of
/// `q + <-x>` with nonzero last coordinate.
pub fn represents_with(q: &QuadraticForm, x: &Element, height: u64) -> Result<TriState<Witness>> {
    let field = &q.field;
    if field.is_zero(x) {
        return Err(Error::Domain("represents: target must be nonzero".into()));
    }
    if let Some(w) = diagonal_representation(q, x)? {
        return Ok(TriState::yes(w));
    }
    let ext = q.with(&field.neg(x))?;
    let first = isotropy_with(&ext, height)?;
    if let TriState::Yes { witness } = &first {
        if check_representation_witness(field, &ext.coeffs[..q.dim()], x, witness)? {
            return Ok(first);
        }
    }
    if let TriState::No { trace } = first {
        return Ok(TriState::no(
            ProofTrace::new(
                NodeKind::Conjunction,
                format!("{} is not represented by {q}", field.fmt_element(x)),
            )
            .with_field(field.spec())
            .with_child(trace),
        ));
    }
    // isotropic regular forms are universal
    match isotropy_with(q, height)? {
        TriState::Yes { witness } => match universal(q, x, &witness)? {
            Some(w) => Ok(TriState::yes(w)),
            None => Ok(TriState::unknown(format!(
                "{q} is isotropic but no representation vector for {} was built from its witness",
                field.fmt_element(x)
            ))),
        },
        TriState::No { .. } => Ok(match first {
            TriState::Unknown { reason } => TriState::unknown(reason),
            _ => TriState::unknown("zero of q + <-x> has vanishing last coordinate"),
        }),
        TriState::Unknown { reason } => Ok(TriState::unknown(reason)),
    }
}

/// `x = c_i s^2` exactly for some diagonal entry: the vector `s e_i + e_last`.
pub fn diagonal_representation(q: &QuadraticForm, x: &Element) -> Result<Option<Witness>> {
    let field = &q.field;
    for (i, c) in q.coeffs.iter().enumerate() {
        let (r, s) = field.reduce_squares(&field.div(x, c)?)?;
        if r != field.one() {
            continue;
        }
        let mut v = vec![field.v_zero(); q.dim() + 1];
        v[i] = field.value_of(&s);
        v[q.dim()] = field.v_int(1);
        let w = Witness::Exact {
            vector: v.iter().map(|e| field.fmt_value(e)).collect(),
        };
        if check_representation_witness(field, &q.coeffs, x, &w)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Exact division of values; over towers the divisor must be a monomial.
pub fn v_div(field: &Field, a: &Value, b: &Value) -> Option<Value> {
    match (a, b) {
        (Value::Laurent(_), Value::Laurent(lb)) => {
            let m = lb.as_monomial()?;
            field.v_div_elem(a, &Element::Mono(m)).ok()
        }
        _ => {
            let d = field.element_of_value(b).ok()?;
            field.v_div_elem(a, &d).ok()
        }
    }
}

/// From a zero `v` of `q` with `v_j != 0`: `u = alpha v + e_j` with
/// `alpha = (x - c_j) / (2 c_j v_j)` satisfies `q(u) = x`.
fn universal(q: &QuadraticForm, x: &Element, w: &Witness) -> Result<Option<Witness>> {
    let field = &q.field;
    let ext_coeffs: Vec<Element> = {
        let mut c = q.coeffs.clone();
        c.push(field.neg(x));
        c
    };
    match w {
        Witness::Exact { vector } => {
            let v: Vec<Value> = vector
                .iter()
                .map(|s| field.parse_value(s))
                .collect::<Result<_>>()?;
            let Some(j) = v.iter().position(|e| !field.v_is_zero(e)) else {
                return Ok(None);
            };
            let cj = field.value_of(&q.coeffs[j]);
            let num = field.v_sub(&field.value_of(x), &cj);
            let den = field.v_mul(&field.v_mul(&field.v_int(2), &cj), &v[j]);
            let Some(alpha) = v_div(field, &num, &den) else {
                return Ok(None);
            };
            let mut u: Vec<Value> = v.iter().map(|e| field.v_mul(&alpha, e)).collect();
            u[j] = field.v_add(&u[j], &field.v_int(1));
            u.push(field.v_int(1));
            let cand = Witness::Exact {
                vector: u.iter().map(|e| field.fmt_value(e)).collect(),
            };
            Ok(check_isotropy_witness(field, &ext_coeffs, &cand)?.then_some(cand))
        }
        Witness::Hensel { prime, vector } => {
            let p = *prime;
            let c = q.rational_coeffs().expect("p-adic forms are rational");
            let Element::Rat(xr) = x else { return Ok(None) };
            let v0: Vec<BigRational> = vector
                .iter()
                .map(|s| s.parse().map_err(|_| Error::Invalid(s.clone())))
                .collect::<Result<_>>()?;
            let two = BigRational::from_integer(BigInt::from(2));
            for target in [16i64, 48, 128, 384] {
                let Some(v) = padic::newton_refine(p, &c, &v0, target) else {
                    return Ok(None);
                };
                let Some(j) = v.iter().position(|e| !num_traits::Zero::is_zero(e)) else {
                    return Ok(None);
                };
                let alpha = (xr - &c[j]) / (&two * &c[j] * &v[j]);
                let mut u: Vec<BigRational> = v.iter().map(|e| &alpha * e).collect();
                u[j] += BigRational::from_integer(BigInt::from(1));
                u.push(BigRational::from_integer(BigInt::from(1)));
                let cand = Witness::Hensel {
                    prime: p,
                    vector: u.iter().map(|e| e.to_string()).collect(),
                };
                if check_isotropy_witness(field, &ext_coeffs, &cand)? {
                    return Ok(Some(cand));
                }
            }
            Ok(None)
        }
        Witness::Lifted { .. } => Ok(None),
    }
}

/// `a` as a sum of two squares. Exact witnesses are returned as `[x, y]`
/// with `x^2 + y^2 = a`; over Q_p and Q_p(t) the witness is a representation
/// witness for `<1, 1>`.
pub fn is_sum_of_two_squares(field: &Field, a: &Element) -> Result<TriState<Witness>> {
    if field.is_zero(a) {
        return Err(Error::Domain("is_sum_of_two_squares: zero input".into()));
    }
    if let (Field::Rationals, Element::Rat(r)) = (field, a) {
        let n = r.numer() * r.denom();
        if let Some((x, y)) = arith::two_squares_int(&n)? {
            let d = BigRational::from_integer(r.denom().clone());
            let (x, y) = (
                BigRational::from_integer(x) / &d,
                BigRational::from_integer(y) / &d,
            );
            return Ok(TriState::yes(Witness::Exact {
                vector: vec![x.to_string(), y.to_string()],
            }));
        }
    }
    let q = QuadraticForm::new(field, vec![field.one(), field.one()])?;
    let r = represents(&q, a)?;
    Ok(match r {
        TriState::Yes {
            witness: Witness::Exact { vector },
        } => {
            let v: Vec<Value> = vector
                .iter()
                .map(|s| field.parse_value(s))
                .collect::<Result<_>>()?;
            match (v_div(field, &v[0], &v[2]), v_div(field, &v[1], &v[2])) {
                (Some(x), Some(y)) => TriState::yes(Witness::Exact {
                    vector: vec![field.fmt_value(&x), field.fmt_value(&y)],
                }),
                _ => TriState::yes(Witness::Exact { vector }),
            }
        }
        other => other,
    })
}

/// Replays a witness returned by [`is_sum_of_two_squares`].
pub fn check_two_squares_witness(field: &Field, a: &Element, w: &Witness) -> Result<bool> {
    match w {
        Witness::Exact { vector } if vector.len() == 2 => {
            let x = field.parse_value(&vector[0])?;
            let y = field.parse_value(&vector[1])?;
            let s = field.v_add(&field.v_mul(&x, &x), &field.v_mul(&y, &y));
            Ok(field.v_is_zero(&field.v_sub(&s, &field.value_of(a))))
        }
        _ => check_representation_witness(field, &[field.one(), field.one()], a, w),
    }
}
