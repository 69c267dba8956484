//! Quaternion symbols `(a, b)_K` and quadratic extensions `K(sqrt d)`.
//!
//! Brauer classes are never represented abstractly: products are only taken
//! between symbols sharing a slot, after recorded symmetry steps.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{Element, Field};
use crate::quadform::{self, PfisterForm, QuadraticForm, DEFAULT_HEIGHT};
use crate::trace::{NodeKind, ProofTrace, TriState, Witness};

#[derive(Clone, Debug)]
pub struct QuaternionAlgebra {
    field: Field,
    a: Element,
    b: Element,
}

impl QuaternionAlgebra {
    pub fn new(field: &Field, a: Element, b: Element) -> Result<Self> {
        if field.is_zero(&a) || field.is_zero(&b) {
            return Err(Error::Domain("quaternion slots must be nonzero".into()));
        }
        Ok(QuaternionAlgebra {
            field: field.clone(),
            a,
            b,
        })
    }

    pub fn parse(field: &Field, a: &str, b: &str) -> Result<Self> {
        Self::new(field, field.parse_element(a)?, field.parse_element(b)?)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn a(&self) -> &Element {
        &self.a
    }

    pub fn b(&self) -> &Element {
        &self.b
    }

    /// `(b, a)`, the same algebra.
    pub fn swapped(&self) -> QuaternionAlgebra {
        QuaternionAlgebra {
            field: self.field.clone(),
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    pub fn norm_form(&self) -> PfisterForm {
        PfisterForm::new(&self.field, vec![self.a.clone(), self.b.clone()])
            .expect("slots are nonzero")
    }

    /// `<a, b, -ab>`: the norm form restricted to pure quaternions, negated.
    pub fn pure_form(&self) -> QuadraticForm {
        let f = &self.field;
        QuadraticForm::new(
            f,
            vec![
                self.a.clone(),
                self.b.clone(),
                f.neg(&f.mul(&self.a, &self.b)),
            ],
        )
        .expect("slots are nonzero")
    }
}

impl std::fmt::Display for QuaternionAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}, {})",
            self.field.fmt_element(&self.a),
            self.field.fmt_element(&self.b)
        )
    }
}

impl Serialize for QuaternionAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuaternionAlgebra", 3)?;
        st.serialize_field("a", &self.field.fmt_element(&self.a))?;
        st.serialize_field("b", &self.field.fmt_element(&self.b))?;
        st.serialize_field("field", &self.field.spec())?;
        st.end()
    }
}

/// `K(sqrt d)` for a non-square `d`.
#[derive(Clone, Debug)]
pub struct QuadraticExtension {
    base: Field,
    d: Element,
}

impl QuadraticExtension {
    pub fn new(base: &Field, d: Element) -> Result<Self> {
        if base.is_zero(&d) || base.is_square(&d)? {
            return Err(Error::Domain(format!(
                "{} is a square; K(sqrt d) is not a field",
                base.fmt_element(&d)
            )));
        }
        Ok(QuadraticExtension {
            base: base.clone(),
            d,
        })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn d(&self) -> &Element {
        &self.d
    }

    /// `<1, -d>`, whose values are the norms `y^2 - d z^2`.
    pub fn norm_form(&self) -> QuadraticForm {
        QuadraticForm::new(&self.base, vec![self.base.one(), self.base.neg(&self.d)])
            .expect("d is nonzero")
    }
}

impl Serialize for QuadraticExtension {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuadraticExtension", 2)?;
        st.serialize_field("d", &self.base.fmt_element(&self.d))?;
        st.serialize_field("base", &self.base.spec())?;
        st.end()
    }
}

/// Split iff the norm form is isotropic; the witness is an isotropic vector
/// of `<1, -a, -b, ab>`.
pub fn is_split(q: &QuaternionAlgebra) -> Result<TriState<Witness>> {
    is_split_with(q, DEFAULT_HEIGHT)
}

pub fn is_split_with(q: &QuaternionAlgebra, height: u64) -> Result<TriState<Witness>> {
    quadform::isotropy_with(&q.norm_form().expand(), height)
}

/// `x` in `Nrd(Q*)`, the value set of `<<a, b>>`. Witnesses are
/// representation witnesses for `<1, -a, -b, ab>`.
pub fn nrd_membership(q: &QuaternionAlgebra, x: &Element) -> Result<TriState<Witness>> {
    nrd_membership_with(q, x, DEFAULT_HEIGHT)
}

pub fn nrd_membership_with(
    q: &QuaternionAlgebra,
    x: &Element,
    height: u64,
) -> Result<TriState<Witness>> {
    quadform::represents_with(&q.norm_form().expand(), x, height)
}

/// `x` in `N(L*)`: representation witnesses for `<1, -d>`, i.e. `(y, z, w)`
/// with `y^2 - d z^2 = x w^2`, `w != 0`.
pub fn norm_group_membership(l: &QuadraticExtension, x: &Element) -> Result<TriState<Witness>> {
    norm_group_membership_with(l, x, DEFAULT_HEIGHT)
}

pub fn norm_group_membership_with(
    l: &QuadraticExtension,
    x: &Element,
    height: u64,
) -> Result<TriState<Witness>> {
    quadform::represents_with(&l.norm_form(), x, height)
}

/// `(prod x_i, b)` with the product reduced mod squares: the Brauer sum of the
/// `(x_i, b)`.
pub fn same_slot_product(
    field: &Field,
    factors: &[Element],
    b: &Element,
) -> Result<QuaternionAlgebra> {
    let prod = field.product(factors);
    let (r, _) = field.reduce_squares(&prod)?;
    QuaternionAlgebra::new(field, r, b.clone())
}

/// Brauer product of symbols that share a slot up to square classes. Symbols
/// whose common slot sits in first position are swapped first; each swap is
/// recorded in the trace.
pub fn same_slot_product_of(
    algebras: &[QuaternionAlgebra],
) -> Result<(QuaternionAlgebra, ProofTrace)> {
    let first = algebras
        .first()
        .ok_or_else(|| Error::Invalid("empty product".into()))?;
    let field = first.field.clone();
    let class = |x: &Element| field.square_class(x);
    for common in [first.b.clone(), first.a.clone()] {
        let cc = class(&common)?;
        let mut aligned = Vec::new();
        let mut trace =
            ProofTrace::new(NodeKind::Conjunction, "common-slot product").with_field(field.spec());
        for q in algebras {
            if class(&q.b)? == cc {
                aligned.push(q.clone());
            } else if class(&q.a)? == cc {
                trace = trace.with_child(
                    ProofTrace::new(NodeKind::SlotRule, format!("{q} = {}", q.swapped()))
                        .with_data("rule", "Swap(1,2)")
                        .with_data("relation", "(x, y) = (y, x)"),
                );
                aligned.push(q.swapped());
            } else {
                aligned.clear();
                break;
            }
        }
        if aligned.len() == algebras.len() {
            let xs: Vec<Element> = aligned.iter().map(|q| q.a.clone()).collect();
            let out = same_slot_product(&field, &xs, &common)?;
            trace.claim = format!(
                "{} ~ {out}",
                algebras
                    .iter()
                    .map(|q| q.to_string())
                    .collect::<Vec<_>>()
                    .join(" * ")
            );
            return Ok((out, trace));
        }
    }
    Err(Error::Domain("the symbols share no common slot".into()))
}

/// How `K(sqrt d)` splits `Q`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "route", rename_all = "kebab-case")]
pub enum SplittingWitness {
    /// `Q` is already split: isotropic vector of the norm form.
    AlreadySplit { witness: Witness },
    /// `d` is the square of a pure quaternion: representation witness of `d`
    /// by `<a, b, -ab>`, so `K(sqrt d)` embeds in `Q`.
    Embeds { witness: Witness },
}

/// `Q` splits over `K(sqrt d)` iff `Q` is split or `<a, b, -ab>` represents `d`.
pub fn splits_over_quadratic(
    q: &QuaternionAlgebra,
    d: &Element,
) -> Result<TriState<SplittingWitness>> {
    splits_over_quadratic_with(q, d, DEFAULT_HEIGHT)
}

pub fn splits_over_quadratic_with(
    q: &QuaternionAlgebra,
    d: &Element,
    height: u64,
) -> Result<TriState<SplittingWitness>> {
    let rep = quadform::represents_with(&q.pure_form(), d, height)?;
    if let TriState::Yes { witness } = rep {
        return Ok(TriState::yes(SplittingWitness::Embeds { witness }));
    }
    match is_split_with(q, height)? {
        TriState::Yes { witness } => Ok(TriState::yes(SplittingWitness::AlreadySplit { witness })),
        TriState::No { trace: split_trace } => Ok(match rep {
            TriState::No { trace } => TriState::no(
                ProofTrace::new(
                    NodeKind::Conjunction,
                    format!(
                        "{q} is a division algebra not split by K(sqrt {})",
                        q.field.fmt_element(d)
                    ),
                )
                .with_field(q.field.spec())
                .with_child(split_trace)
                .with_child(trace),
            ),
            TriState::Unknown { reason } => TriState::unknown(reason),
            TriState::Yes { .. } => unreachable!("handled above"),
        }),
        TriState::Unknown { reason } => Ok(TriState::unknown(reason)),
    }
}

/// Replays a [`SplittingWitness`].
pub fn check_splitting_witness(
    q: &QuaternionAlgebra,
    d: &Element,
    w: &SplittingWitness,
) -> Result<bool> {
    match w {
        SplittingWitness::AlreadySplit { witness } => {
            quadform::check_isotropy_witness(&q.field, q.norm_form().expand().coeffs(), witness)
        }
        SplittingWitness::Embeds { witness } => {
            quadform::check_representation_witness(&q.field, q.pure_form().coeffs(), d, witness)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quat(spec: &str, a: &str, b: &str) -> QuaternionAlgebra {
        QuaternionAlgebra::parse(&Field::parse_spec(spec).unwrap(), a, b).unwrap()
    }

    #[test]
    fn norm_forms() {
        assert_eq!(
            quat("Q", "1", "7").norm_form().expand().literals(),
            ["1", "-1", "-7", "7"]
        );
        assert_eq!(
            quat("Q", "-1", "-1").norm_form().expand().literals(),
            ["1", "1", "1", "1"]
        );
    }

    #[test]
    fn splitting() {
        assert!(is_split(&quat("Q", "1", "7")).unwrap().is_yes());
        assert!(is_split(&quat("Q", "-1", "-1")).unwrap().is_no());
        assert!(is_split(&quat("Q", "5", "2")).unwrap().is_no());
    }

    #[test]
    fn reduced_norms() {
        let q = quat("Q(t)", "5", "2");
        let f = q.field().clone();
        let mb = f.int(-2);
        let r = nrd_membership(&q, &mb).unwrap();
        let Some(Witness::Exact { vector }) = r.witness() else {
            panic!("{r:?}")
        };
        assert_eq!(vector, &["0", "0", "1", "0", "1"]);
        assert!(nrd_membership(&q, &f.parse_element("t").unwrap())
            .unwrap()
            .is_no());
        let q = quat("Qp(t):p=3", "-1", "t");
        let t = q.field().parse_element("t").unwrap();
        let r = nrd_membership(&q, &t).unwrap();
        assert!(quadform::check_representation_witness(
            q.field(),
            q.norm_form().expand().coeffs(),
            &t,
            r.witness().unwrap()
        )
        .unwrap());
    }

    #[test]
    fn norm_groups() {
        let f = Field::rationals();
        let l = QuadraticExtension::new(&f, f.int(-1)).unwrap();
        assert!(norm_group_membership(&l, &f.int(3)).unwrap().is_no());
        let r = norm_group_membership(&l, &f.int(1)).unwrap();
        assert!(r.is_yes());
        let l = QuadraticExtension::new(&f, f.int(7)).unwrap();
        let r = norm_group_membership(&l, &f.int(-7)).unwrap();
        assert_eq!(
            r.witness(),
            Some(&Witness::Exact {
                vector: vec!["0".into(), "1".into(), "1".into()]
            })
        );
        assert!(QuadraticExtension::new(&f, f.int(9)).is_err());
    }

    #[test]
    fn products() {
        let f = Field::parse_spec("Q(t)").unwrap();
        let (a, b, c) = (f.int(5), f.int(2), f.parse_element("t").unwrap());
        let mac = f.neg(&f.mul(&a, &c));
        let q = same_slot_product(&f, &[a.clone(), mac], &b).unwrap();
        assert_eq!(q.to_string(), "(-t, 2)");
        let q = same_slot_product(&f, &[a.clone(), a.clone()], &b).unwrap();
        assert!(is_split(&q).unwrap().is_yes());
        let u = f.int(2);
        let (q1, q2) = (
            QuaternionAlgebra::new(&f, u.clone(), f.int(3)).unwrap(),
            QuaternionAlgebra::new(&f, u.clone(), c.clone()).unwrap(),
        );
        let (prod, trace) = same_slot_product_of(&[q1, q2]).unwrap();
        assert_eq!(prod.to_string(), "(3*t, 2)");
        assert_eq!(trace.children.len(), 2);
    }

    #[test]
    fn quadratic_splitting() {
        let q = quat("Q(t)", "5", "2");
        let f = q.field().clone();
        let r = splits_over_quadratic(&q, &f.int(2)).unwrap();
        assert!(check_splitting_witness(&q, &f.int(2), r.witness().unwrap()).unwrap());
        let mt = f.parse_element("-t").unwrap();
        assert!(splits_over_quadratic(&q, &mt).unwrap().is_no());
        let qq = quat("Q(t)", "-t", "2");
        assert!(splits_over_quadratic(&qq, &mt).unwrap().is_yes());
    }
}
