//! Degree-6 algebras with orthogonal involution of the shape
//! `(Q1, can) (x) (Q2, can) [+] (Q, gamma)`, held by their building data.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{Element, Field, SquareClass};
use crate::quaternion::{self, QuadraticExtension, QuaternionAlgebra, SplittingWitness};
use crate::trace::{NodeKind, ProofTrace, TriState};

/// `Q1 = (a, b)`, `Q2 = (-ac, b)`, `Q = (-c, b)`, `L = K(sqrt -c)`, and
/// `disc(sigma) = disc(gamma) = -c`.
#[derive(Clone, Debug)]
pub struct InvolutionAlgebra6 {
    pub field: Field,
    pub a: Element,
    pub b: Element,
    pub c: Element,
    pub q1: QuaternionAlgebra,
    pub q2: QuaternionAlgebra,
    pub q: QuaternionAlgebra,
    pub l: QuadraticExtension,
    pub disc_sigma: SquareClass,
    /// Verification of the building invariants.
    pub trace: ProofTrace,
}

pub fn build_involution_algebra(
    a: &Element,
    b: &Element,
    c: &Element,
    field: &Field,
) -> Result<InvolutionAlgebra6> {
    let f = field;
    if [a, b, c].iter().any(|x| f.is_zero(x)) {
        return Err(Error::Domain("a, b, c must be nonzero".into()));
    }
    let mc = f.neg(c);
    if f.is_square(&mc)? {
        return Err(Error::Domain(format!(
            "trivial discriminant: -c = {} is a square",
            f.fmt_element(&mc)
        )));
    }
    let mac = f.neg(&f.mul(a, c));
    let q1 = QuaternionAlgebra::new(f, a.clone(), b.clone())?;
    let q2 = QuaternionAlgebra::new(f, mac.clone(), b.clone())?;
    let q = QuaternionAlgebra::new(f, mc.clone(), b.clone())?;
    let l = QuadraticExtension::new(f, mc.clone())?;
    let disc_sigma = f.square_class(&mc)?;

    // Q1 (x) Q2 ~ (a * -ac, b) = (-c, b) up to squares
    let prod = quaternion::same_slot_product(f, &[a.clone(), mac], b)?;
    if f.square_class(prod.a())? != disc_sigma {
        return Err(Error::Internal(
            "Q1 (x) Q2 is not Brauer equivalent to Q".into(),
        ));
    }
    let split = match quaternion::splits_over_quadratic(&q, &mc)? {
        TriState::Yes { witness } if quaternion::check_splitting_witness(&q, &mc, &witness)? => {
            witness
        }
        other => {
            return Err(Error::Internal(format!(
                "Q is not split by L: {}",
                other.label("split", "non-split")
            )))
        }
    };
    let split_data = serde_json::to_value(&split).expect("witness serializes");
    let trace = ProofTrace::new(
        NodeKind::Conjunction,
        format!("(A, sigma) built from Q1 = {q1}, Q2 = {q2}, Q = {q}"),
    )
    .with_field(f.spec())
    .with_data("disc_sigma", disc_sigma.label.clone())
    .with_data("disc_tau", f.one_class().label)
    .with_child(
        ProofTrace::new(NodeKind::Trivial, format!("Q1 (x) Q2 ~ {prod} = Q"))
            .with_data("relation", "(a, b) (x) (-ac, b) ~ (-a^2 c, b) ~ (-c, b)"),
    )
    .with_child(
        ProofTrace::new(
            NodeKind::ExplicitVector,
            format!("Q is split by L = K(sqrt {})", f.fmt_element(&mc)),
        )
        .with_data("witness", split_data),
    );
    Ok(InvolutionAlgebra6 {
        field: f.clone(),
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        q1,
        q2,
        q,
        l,
        disc_sigma,
        trace,
    })
}

impl InvolutionAlgebra6 {
    pub fn parse(field: &Field, a: &str, b: &str, c: &str) -> Result<Self> {
        build_involution_algebra(
            &field.parse_nonzero(a)?,
            &field.parse_nonzero(b)?,
            &field.parse_nonzero(c)?,
            field,
        )
    }

    /// `Q_k` for `k` in `{1, 2}`.
    pub fn q_k(&self, k: u8) -> Result<&QuaternionAlgebra> {
        match k {
            1 => Ok(&self.q1),
            2 => Ok(&self.q2),
            _ => Err(Error::Invalid(format!("k must be 1 or 2, got {k}"))),
        }
    }

    pub fn minus_c(&self) -> Element {
        self.field.neg(&self.c)
    }
}

pub fn discriminant(a: &InvolutionAlgebra6) -> SquareClass {
    a.disc_sigma.clone()
}

/// Brauer class of the Clifford algebra, `(Q1)_L`.
#[derive(Clone, Debug, Serialize)]
pub struct CliffordClass {
    pub algebra: QuaternionAlgebra,
    pub over: QuadraticExtension,
    pub trace: ProofTrace,
}

/// `C ~ (Q1)_L ~ (Q2)_L`: holds because `Q1 (x) Q2 ~ Q` and `L` splits `Q`.
pub fn clifford_class(a: &InvolutionAlgebra6) -> Result<CliffordClass> {
    let f = &a.field;
    let mc = a.minus_c();
    let (prod, product_trace) = quaternion::same_slot_product_of(&[a.q1.clone(), a.q2.clone()])?;
    if f.square_class(prod.a())? != f.square_class(a.q.a())?
        || f.square_class(prod.b())? != f.square_class(a.q.b())?
    {
        return Err(Error::Internal(
            "Q1 (x) Q2 is not Brauer equivalent to Q".into(),
        ));
    }
    let split = quaternion::splits_over_quadratic(&a.q, &mc)?;
    let Some(w) = split.witness() else {
        return Err(Error::Internal("L does not split Q".into()));
    };
    let trace = ProofTrace::new(
        NodeKind::Conjunction,
        format!("C ~ {}_L ~ {}_L", a.q1, a.q2),
    )
    .with_field(f.spec())
    .with_child(product_trace)
    .with_child(
        ProofTrace::new(NodeKind::ExplicitVector, format!("{} is split by L", a.q)).with_data(
            "witness",
            serde_json::to_value(w).expect("witness serializes"),
        ),
    );
    Ok(CliffordClass {
        algebra: a.q1.clone(),
        over: a.l.clone(),
        trace,
    })
}

/// `Yes` iff `(Q1)_L` is a division algebra: `Q1` non-split and not split by
/// `K(sqrt -c)`.
pub fn clifford_is_division(a: &InvolutionAlgebra6) -> Result<TriState<ProofTrace>> {
    clifford_is_division_with(a, crate::quadform::DEFAULT_HEIGHT)
}

pub fn clifford_is_division_with(
    a: &InvolutionAlgebra6,
    height: u64,
) -> Result<TriState<ProofTrace>> {
    let mc = a.minus_c();
    Ok(
        match quaternion::splits_over_quadratic_with(&a.q1, &mc, height)? {
            TriState::No { trace } => TriState::yes(trace),
            TriState::Yes { witness } => {
                let claim = match &witness {
                    SplittingWitness::AlreadySplit { .. } => format!("{} is split", a.q1),
                    SplittingWitness::Embeds { .. } => format!("{} is split by L", a.q1),
                };
                TriState::no(
                    ProofTrace::new(NodeKind::ExplicitVector, claim)
                        .with_field(a.field.spec())
                        .with_data(
                            "witness",
                            serde_json::to_value(&witness).expect("witness serializes"),
                        ),
                )
            }
            TriState::Unknown { reason } => TriState::unknown(reason),
        },
    )
}

impl Serialize for InvolutionAlgebra6 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let f = &self.field;
        let mut st = s.serialize_struct("InvolutionAlgebra6", 9)?;
        st.serialize_field("a", &f.fmt_element(&self.a))?;
        st.serialize_field("b", &f.fmt_element(&self.b))?;
        st.serialize_field("c", &f.fmt_element(&self.c))?;
        st.serialize_field("field", &f.spec())?;
        st.serialize_field("Q1", &self.q1)?;
        st.serialize_field("Q2", &self.q2)?;
        st.serialize_field("Q", &self.q)?;
        st.serialize_field("L", &self.l)?;
        st.serialize_field("disc_sigma", &self.disc_sigma)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(spec: &str, a: &str, b: &str, c: &str) -> Result<InvolutionAlgebra6> {
        InvolutionAlgebra6::parse(&Field::parse_spec(spec).unwrap(), a, b, c)
    }

    #[test]
    fn rational_function_build() {
        let a = build("Q(t)", "5", "2", "t").unwrap();
        assert_eq!(a.q1.to_string(), "(5, 2)");
        assert_eq!(a.q2.to_string(), "(-5*t, 2)");
        assert_eq!(a.q.to_string(), "(-t, 2)");
        assert_eq!(a.l.d(), &a.field.parse_element("-t").unwrap());
        assert_eq!(discriminant(&a).label, "-t");
        assert_eq!(a.trace.data["disc_tau"], "1");
        assert!(clifford_is_division(&a).unwrap().is_yes());
        let cl = clifford_class(&a).unwrap();
        assert_eq!(cl.algebra.to_string(), "(5, 2)");
    }

    #[test]
    fn tower_build() {
        let a = build("Fq-tower:q=3,vars=s,t", "-1", "s", "t").unwrap();
        assert_eq!(a.q1.to_string(), "(-1, s)");
        assert_eq!(a.q2.to_string(), "(t, s)");
        assert_eq!(a.q.to_string(), "(-t, s)");
        assert!(clifford_is_division(&a).unwrap().is_yes());
        assert!(clifford_class(&a).is_ok());
    }

    #[test]
    fn trivial_discriminant() {
        let e = build("Q", "2", "3", "-1").unwrap_err();
        assert!(e.to_string().contains("trivial discriminant"), "{e}");
    }

    #[test]
    fn split_q1_is_not_division() {
        let a = build("Q(t)", "1", "2", "t").unwrap();
        assert!(clifford_is_division(&a).unwrap().is_no());
    }

    #[test]
    fn serialization_keys() {
        let a = build("Q(t)", "5", "2", "t").unwrap();
        let v = serde_json::to_value(&a).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        for k in ["a", "b", "c", "field", "Q1", "Q2", "Q", "L", "disc_sigma"] {
            assert!(keys.contains(&k), "{k}");
        }
        assert_eq!(v["disc_sigma"], "-t");
    }
}
