//! Certification of non-trivial classes in `G+(A, s) / H(A, s)` for the
//! algebras built from `(a, b, c)`.
//!
//! With `Q1 = (a, b)`, `Q2 = (-ac, b)`, `Q = (-c, b)` and `L = K(sqrt -c)`:
//!
//! * `G+(A, s) = N*_{L/K} ∩ (Nrd*_{Q1} · Nrd*_{Q2})`
//! * `H(A, s) = N*_{L/K} ∩ Nrd*_{Qk}` for `k = 1, 2`
//!
//! and `PSim+(A, s)(K)/R` is isomorphic to the quotient. If `-1` is a value
//! of `<<a, b>>` and `<<a, b, c>>` is anisotropic, then `c` lies in `G+`
//! but in neither `Nrd*_{Qk}`.

mod enumerate;
mod example;
mod search;
mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Element, Field, ValuationRef};
use crate::involution::{build_involution_algebra, InvolutionAlgebra6};
use crate::quadform::{self, PfisterForm, QuadraticForm, DEFAULT_HEIGHT};
use crate::quaternion::{self, QuaternionAlgebra};
use crate::trace::{NodeKind, ProofTrace, TriState, Witness};

pub use enumerate::{
    enumerate_quotient, enumerate_quotient_with, MembershipRow, QuotientReport, SquareClassSubgroup,
};
pub use example::{reproduce_example_qpt, reproduce_example_qpt_with, ExampleReport};
pub use search::{search, search_candidates, SearchRecord, SearchReport};
pub use verify::{
    audit_certificate, audit_quotient, replay_anisotropy, verify_certificate, Check, VerifyReport,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Heights used by the bounded searches of the function-field deciders.
#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    pub height: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            height: DEFAULT_HEIGHT,
        }
    }
}

/// Anisotropy claim: `Yes` carries the proof tree, `No` an explicit-vector
/// node holding an isotropic vector.
pub type Anisotropy = TriState<ProofTrace>;

fn anisotropy(q: &QuadraticForm, height: u64) -> Result<Anisotropy> {
    Ok(match quadform::isotropy_with(q, height)? {
        TriState::No { trace } => TriState::yes(trace),
        TriState::Yes { witness } => {
            TriState::no(vector_node(format!("{q} is isotropic"), q, &witness))
        }
        TriState::Unknown { reason } => TriState::unknown(reason),
    })
}

fn vector_node(claim: String, q: &QuadraticForm, w: &Witness) -> ProofTrace {
    ProofTrace::new(NodeKind::ExplicitVector, claim)
        .with_field(q.field().spec())
        .with_form(q.literals())
        .with_data(
            "witness",
            serde_json::to_value(w).expect("witness serializes"),
        )
}

// ---------------------------------------------------------------- hypotheses

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    /// `-1` in `D<<a, b>>`.
    pub minus1_in_d: TriState<Witness>,
    /// The witness above writes `a` as a sum of two squares, which forces
    /// `-1` in `D<<a, b>>`; otherwise it is a representation witness.
    pub sum_of_two_squares: bool,
    /// `<<a, b, c>>` anisotropic.
    pub pfister_anisotropic: Anisotropy,
    /// `-1` in `D<<a, b>>`, so `<<a, b>>` is a torsion form.
    pub torsion_note: bool,
}

impl HypothesisReport {
    pub fn favorable(&self) -> bool {
        self.minus1_in_d.is_yes() && self.pfister_anisotropic.is_yes()
    }

    /// Which hypothesis fails decisively, if any.
    pub fn failure(&self) -> Option<HypothesisFailure> {
        if self.minus1_in_d.is_no() {
            Some(HypothesisFailure::MinusOneNotInD)
        } else if self.pfister_anisotropic.is_no() {
            Some(HypothesisFailure::PfisterIsotropic)
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HypothesisFailure {
    /// (i) `-1` is not a value of `<<a, b>>`.
    MinusOneNotInD,
    /// (ii) `<<a, b, c>>` is isotropic.
    PfisterIsotropic,
}

impl std::fmt::Display for HypothesisFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HypothesisFailure::MinusOneNotInD => "(i) -1 is not in D<<a,b>>",
            HypothesisFailure::PfisterIsotropic => "(ii) <<a,b,c>> is isotropic",
        })
    }
}

fn pfister(field: &Field, slots: &[&Element]) -> Result<PfisterForm> {
    PfisterForm::new(field, slots.iter().map(|&e| e.clone()).collect())
}

pub fn check_hypotheses(
    a: &Element,
    b: &Element,
    c: &Element,
    field: &Field,
) -> Result<HypothesisReport> {
    check_hypotheses_with(a, b, c, field, CertifyOptions::default())
}

pub fn check_hypotheses_with(
    a: &Element,
    b: &Element,
    c: &Element,
    field: &Field,
    opts: CertifyOptions,
) -> Result<HypothesisReport> {
    let (minus1_in_d, sum_of_two_squares) = match quadform::is_sum_of_two_squares(field, a)? {
        TriState::Yes { witness } => (TriState::yes(witness), true),
        _ => {
            let ab = pfister(field, &[a, b])?.expand();
            (
                quadform::represents_with(&ab, &field.int(-1), opts.height)?,
                false,
            )
        }
    };
    let pfister_anisotropic = anisotropy(&pfister(field, &[a, b, c])?.expand(), opts.height)?;
    let torsion_note = minus1_in_d.is_yes();
    Ok(HypothesisReport {
        minus1_in_d,
        sum_of_two_squares,
        pfister_anisotropic,
        torsion_note,
    })
}

// --------------------------------------------------------------- memberships

/// `x = n1 * n2 * s^2` with `n1` in `Nrd*_{Q1}` and `n2` in `Nrd*_{Q2}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Factorization {
    pub n1: String,
    pub n2: String,
    pub s: String,
    pub w1: Witness,
    pub w2: Witness,
}

/// `x` in `Nrd*_{Q1} · Nrd*_{Q2}`: a zero of
/// `<<a, b>> + (-x) <<-ac, b>>` (8 entries) and, when found, a factorization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductEvidence {
    pub form: Vec<String>,
    pub witness: Witness,
    pub factorization: Option<Factorization>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GPlusEvidence {
    pub norm: Witness,
    pub product: ProductEvidence,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HEvidence {
    pub norm: Witness,
    pub nrd: Witness,
}

/// The form whose isotropy decides `x` in `Nrd*_{Q1} · Nrd*_{Q2}`: two
/// Pfister value sets are groups, so `x = n1 n2` iff `D(n1-form)` meets
/// `x D(n2-form)`.
pub fn product_form(a: &InvolutionAlgebra6, x: &Element) -> Result<QuadraticForm> {
    let f = &a.field;
    let n1 = a.q1.norm_form().expand();
    let n2 = a.q2.norm_form().expand();
    Ok(n1.orthogonal_sum(&n2.scaled(&f.neg(x))?))
}

pub fn norm_membership(
    a: &InvolutionAlgebra6,
    x: &Element,
    opts: CertifyOptions,
) -> Result<TriState<Witness>> {
    quaternion::norm_group_membership_with(&a.l, x, opts.height)
}

pub fn nrd_k_membership(
    a: &InvolutionAlgebra6,
    x: &Element,
    k: u8,
    opts: CertifyOptions,
) -> Result<TriState<Witness>> {
    quaternion::nrd_membership_with(a.q_k(k)?, x, opts.height)
}

pub fn product_membership(
    a: &InvolutionAlgebra6,
    x: &Element,
    opts: CertifyOptions,
) -> Result<TriState<ProductEvidence>> {
    let form = product_form(a, x)?;
    Ok(match quadform::isotropy_with(&form, opts.height)? {
        TriState::Yes { witness } => {
            let factorization = find_factorization(a, x, opts)?;
            TriState::yes(ProductEvidence {
                form: form.literals(),
                witness,
                factorization,
            })
        }
        TriState::No { trace } => TriState::no(
            ProofTrace::new(
                NodeKind::Conjunction,
                format!("{} is not in Nrd*(Q1) Nrd*(Q2)", a.field.fmt_element(x)),
            )
            .with_field(a.field.spec())
            .with_child(trace),
        ),
        TriState::Unknown { reason } => TriState::unknown(reason),
    })
}

/// Tries `x = n1 * (x / n1)` with `n1` fixed.
pub fn factorization_with(
    a: &InvolutionAlgebra6,
    x: &Element,
    n1: &Element,
    opts: CertifyOptions,
) -> Result<Option<Factorization>> {
    let f = &a.field;
    let TriState::Yes { witness: w1 } = quaternion::nrd_membership_with(&a.q1, n1, opts.height)?
    else {
        return Ok(None);
    };
    let (n2, s) = f.reduce_squares(&f.div(x, n1)?)?;
    let TriState::Yes { witness: w2 } = quaternion::nrd_membership_with(&a.q2, &n2, opts.height)?
    else {
        return Ok(None);
    };
    Ok(Some(Factorization {
        n1: f.fmt_element(n1),
        n2: f.fmt_element(&n2),
        s: f.fmt_element(&s),
        w1,
        w2,
    }))
}

/// Explicit factorization with `n1` among `a, -a, 1, -1, -b, b, ab, -ab`.
/// The searches use a small height; failure leaves the verdict unchanged.
fn find_factorization(
    a: &InvolutionAlgebra6,
    x: &Element,
    opts: CertifyOptions,
) -> Result<Option<Factorization>> {
    let f = &a.field;
    let ab = f.mul(&a.a, &a.b);
    let cands = [
        a.a.clone(),
        f.neg(&a.a),
        f.one(),
        f.int(-1),
        f.neg(&a.b),
        a.b.clone(),
        ab.clone(),
        f.neg(&ab),
    ];
    let small = CertifyOptions {
        height: opts.height.min(8),
    };
    for n1 in &cands {
        if let Some(fz) = factorization_with(a, x, n1, small)? {
            return Ok(Some(fz));
        }
    }
    Ok(None)
}

fn both<A, B, W>(
    l: TriState<A>,
    r: impl FnOnce() -> Result<TriState<B>>,
    claim: String,
    field: &Field,
    join: impl FnOnce(A, B) -> W,
) -> Result<TriState<W>> {
    Ok(match l {
        TriState::No { trace } => TriState::no(
            ProofTrace::new(NodeKind::Conjunction, claim)
                .with_field(field.spec())
                .with_child(trace),
        ),
        TriState::Unknown { reason } => match r()? {
            TriState::No { trace } => TriState::no(
                ProofTrace::new(NodeKind::Conjunction, claim)
                    .with_field(field.spec())
                    .with_child(trace),
            ),
            _ => TriState::unknown(reason),
        },
        TriState::Yes { witness: wl } => match r()? {
            TriState::Yes { witness: wr } => TriState::yes(join(wl, wr)),
            TriState::No { trace } => TriState::no(
                ProofTrace::new(NodeKind::Conjunction, claim)
                    .with_field(field.spec())
                    .with_child(trace),
            ),
            TriState::Unknown { reason } => TriState::unknown(reason),
        },
    })
}

/// `x` in `G+(A, s) = N*_{L/K} ∩ (Nrd*_{Q1} · Nrd*_{Q2})`.
pub fn gplus_membership(a: &InvolutionAlgebra6, x: &Element) -> Result<TriState<GPlusEvidence>> {
    gplus_membership_with(a, x, CertifyOptions::default())
}

pub fn gplus_membership_with(
    a: &InvolutionAlgebra6,
    x: &Element,
    opts: CertifyOptions,
) -> Result<TriState<GPlusEvidence>> {
    let claim = format!("{} is not in G+(A,s)", a.field.fmt_element(x));
    both(
        norm_membership(a, x, opts)?,
        || product_membership(a, x, opts),
        claim,
        &a.field,
        |norm, product| GPlusEvidence { norm, product },
    )
}

/// `x` in `H(A, s) = N*_{L/K} ∩ Nrd*_{Qk}`.
pub fn h_membership(a: &InvolutionAlgebra6, x: &Element, k: u8) -> Result<TriState<HEvidence>> {
    h_membership_with(a, x, k, CertifyOptions::default())
}

pub fn h_membership_with(
    a: &InvolutionAlgebra6,
    x: &Element,
    k: u8,
    opts: CertifyOptions,
) -> Result<TriState<HEvidence>> {
    let claim = format!("{} is not in H(A,s) (k = {k})", a.field.fmt_element(x));
    let q = a.q_k(k)?.clone();
    both(
        norm_membership(a, x, opts)?,
        || quaternion::nrd_membership_with(&q, x, opts.height),
        claim,
        &a.field,
        |norm, nrd| HEvidence { norm, nrd },
    )
}

// --------------------------------------------------------------- certificates

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Conclusion {
    CertifiedNontrivial,
    HypothesisFailed,
    Inconclusive,
}

impl std::fmt::Display for Conclusion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Conclusion::CertifiedNontrivial => "CertifiedNontrivial",
            Conclusion::HypothesisFailed => "HypothesisFailed",
            Conclusion::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    Triple,
    Corollary,
    Example,
}

/// The four facts about `x` that make its class non-trivial in `G+/H`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Memberships {
    #[serde(rename = "in_N")]
    pub in_n: TriState<Witness>,
    #[serde(rename = "in_NrdProduct")]
    pub in_nrd_product: TriState<ProductEvidence>,
    #[serde(rename = "not_in_Nrd1")]
    pub not_in_nrd1: TriState<Witness>,
    #[serde(rename = "not_in_Nrd2")]
    pub not_in_nrd2: TriState<Witness>,
}

impl Memberships {
    pub fn compute(a: &InvolutionAlgebra6, x: &Element, opts: CertifyOptions) -> Result<Self> {
        Ok(Memberships {
            in_n: norm_membership(a, x, opts)?,
            in_nrd_product: product_membership(a, x, opts)?,
            not_in_nrd1: nrd_k_membership(a, x, 1, opts)?,
            not_in_nrd2: nrd_k_membership(a, x, 2, opts)?,
        })
    }

    /// `(name, verdict, verdict needed for certification)` rows for reports.
    pub fn rows(&self) -> Vec<(&'static str, &'static str, &'static str)> {
        vec![
            (
                "x in N*(L/K)",
                self.in_n.label("Member", "NonMember"),
                "Member",
            ),
            (
                "x in Nrd*(Q1) Nrd*(Q2)",
                self.in_nrd_product.label("Member", "NonMember"),
                "Member",
            ),
            (
                "x in Nrd*(Q1)",
                self.not_in_nrd1.label("Member", "NonMember"),
                "NonMember",
            ),
            (
                "x in Nrd*(Q2)",
                self.not_in_nrd2.label("Member", "NonMember"),
                "NonMember",
            ),
        ]
    }

    fn all_unknown_free(&self) -> bool {
        !(self.in_n.is_unknown()
            || self.in_nrd_product.is_unknown()
            || self.not_in_nrd1.is_unknown()
            || self.not_in_nrd2.is_unknown())
    }

    fn certifies(&self) -> bool {
        self.in_n.is_yes()
            && self.in_nrd_product.is_yes()
            && self.not_in_nrd1.is_no()
            && self.not_in_nrd2.is_no()
    }
}

/// Conclusion from the hypothesis report and the memberships of `x`:
/// certified only when every component is decisively favorable.
pub fn conclude(h: &HypothesisReport, m: Option<&Memberships>) -> Conclusion {
    if h.failure().is_some() {
        return Conclusion::HypothesisFailed;
    }
    match m {
        Some(m) if h.favorable() && m.all_unknown_free() && m.certifies() => {
            Conclusion::CertifiedNontrivial
        }
        _ => Conclusion::Inconclusive,
    }
}

/// Statements the conclusion rests on.
pub fn citations() -> Vec<String> {
    vec![
        "G+(A,s) = N*(L/K) ∩ (Nrd*(Q1) Nrd*(Q2)) and H(A,s) = N*(L/K) ∩ Nrd*(Qk) for k = 1, 2"
            .into(),
        "PSim+(A,s)(K)/R ≅ G+(A,s)/H(A,s)".into(),
        "-1 in D<<a,b>> and <<a,b,c>> anisotropic give c in G+(A,s) \\ (Nrd*(Q1) ∪ Nrd*(Q2))"
            .into(),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub kind: CertificateKind,
    pub field: String,
    /// `a, b, c` (or `a, b, t, v` for the valuation criterion).
    pub inputs: BTreeMap<String, String>,
    pub hypotheses: HypothesisReport,
    pub algebra: Option<serde_json::Value>,
    /// The element whose class is certified, and its square class.
    pub x: String,
    pub witness: String,
    pub memberships: Option<Memberships>,
    pub conclusion: Conclusion,
    pub reason: Option<String>,
    pub citations: Vec<String>,
    pub corollary: Option<CorollaryReport>,
    pub example: Option<ExampleReport>,
    pub trace: ProofTrace,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Invalid(format!("certificate: {e}")))
    }

    pub fn field(&self) -> Result<Field> {
        Field::parse_spec(&self.field)
    }
}

fn membership_node<W: Serialize>(name: &str, m: &TriState<W>) -> ProofTrace {
    match m {
        TriState::Yes { witness } => {
            ProofTrace::new(NodeKind::ExplicitVector, format!("{name}: member")).with_data(
                "witness",
                serde_json::to_value(witness).expect("witness serializes"),
            )
        }
        TriState::No { trace } => {
            ProofTrace::new(NodeKind::Conjunction, format!("{name}: non-member"))
                .with_child(trace.clone())
        }
        TriState::Unknown { reason } => {
            ProofTrace::new(NodeKind::Trivial, format!("{name}: unknown"))
                .with_data("reason", reason.clone())
        }
    }
}

fn hypothesis_node(h: &HypothesisReport) -> ProofTrace {
    let aniso = match &h.pfister_anisotropic {
        TriState::Yes { witness } => {
            ProofTrace::new(NodeKind::Conjunction, "<<a,b,c>> is anisotropic")
                .with_child(witness.clone())
        }
        TriState::No { trace } => trace.clone(),
        TriState::Unknown { reason } => {
            ProofTrace::new(NodeKind::Trivial, "<<a,b,c>> anisotropy unknown")
                .with_data("reason", reason.clone())
        }
    };
    let minus1_name = if h.sum_of_two_squares {
        "a is a sum of two squares, so -1 in D<<a,b>>"
    } else {
        "-1 in D<<a,b>>"
    };
    ProofTrace::new(NodeKind::Conjunction, "hypotheses")
        .with_child(membership_node(minus1_name, &h.minus1_in_d))
        .with_child(aniso)
}

fn inputs(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

pub fn certify_witness(
    a: &Element,
    b: &Element,
    c: &Element,
    field: &Field,
) -> Result<Certificate> {
    certify_witness_with(a, b, c, field, CertifyOptions::default())
}

/// Hypotheses, the algebra, then the four memberships of `x = c`.
pub fn certify_witness_with(
    a: &Element,
    b: &Element,
    c: &Element,
    field: &Field,
    opts: CertifyOptions,
) -> Result<Certificate> {
    let f = field;
    if [a, b, c].iter().any(|x| f.is_zero(x)) {
        return Err(Error::Domain("a, b, c must be nonzero".into()));
    }
    let hypotheses = check_hypotheses_with(a, b, c, f, opts)?;
    let mut cert = Certificate {
        schema_version: SCHEMA_VERSION,
        kind: CertificateKind::Triple,
        field: f.spec(),
        inputs: inputs(&[
            ("a", f.fmt_element(a)),
            ("b", f.fmt_element(b)),
            ("c", f.fmt_element(c)),
        ]),
        hypotheses: hypotheses.clone(),
        algebra: None,
        x: f.fmt_element(c),
        witness: f.fmt_element(&f.reduce_squares(c)?.0),
        memberships: None,
        conclusion: Conclusion::Inconclusive,
        reason: None,
        citations: Vec::new(),
        corollary: None,
        example: None,
        trace: ProofTrace::new(NodeKind::Conjunction, "certificate").with_field(f.spec()),
    };
    let mut root = ProofTrace::new(
        NodeKind::Conjunction,
        format!("class of {} in G+(A,s)/H(A,s)", f.fmt_element(c)),
    )
    .with_field(f.spec())
    .with_child(hypothesis_node(&hypotheses));
    if let Some(fail) = hypotheses.failure() {
        cert.conclusion = Conclusion::HypothesisFailed;
        cert.reason = Some(fail.to_string());
        cert.trace = root;
        return Ok(cert);
    }
    let algebra = match build_involution_algebra(a, b, c, f) {
        Ok(alg) => alg,
        Err(e) => {
            cert.conclusion = Conclusion::HypothesisFailed;
            cert.reason = Some(e.to_string());
            cert.trace = root;
            return Ok(cert);
        }
    };
    let m = Memberships::compute(&algebra, c, opts)?;
    root = root.with_child(algebra.trace.clone()).with_child(
        ProofTrace::new(NodeKind::Conjunction, "memberships of x")
            .with_child(membership_node("x in N*(L/K)", &m.in_n))
            .with_child(membership_node("x in Nrd*(Q1) Nrd*(Q2)", &m.in_nrd_product))
            .with_child(membership_node("x in Nrd*(Q1)", &m.not_in_nrd1))
            .with_child(membership_node("x in Nrd*(Q2)", &m.not_in_nrd2)),
    );
    cert.conclusion = conclude(&hypotheses, Some(&m));
    cert.reason = match cert.conclusion {
        Conclusion::CertifiedNontrivial => None,
        _ => Some(inconclusive_reason(&hypotheses, &m)),
    };
    if cert.conclusion == Conclusion::CertifiedNontrivial {
        cert.citations = citations();
    }
    cert.algebra = Some(serde_json::to_value(&algebra).expect("algebra serializes"));
    cert.memberships = Some(m);
    cert.trace = root;
    Ok(cert)
}

fn inconclusive_reason(h: &HypothesisReport, m: &Memberships) -> String {
    let mut parts = Vec::new();
    if let TriState::Unknown { reason } = &h.minus1_in_d {
        parts.push(format!("-1 in D<<a,b>>: {reason}"));
    }
    if let TriState::Unknown { reason } = &h.pfister_anisotropic {
        parts.push(format!("anisotropy of <<a,b,c>>: {reason}"));
    }
    for (name, verdict, needed) in m.rows() {
        if verdict != needed {
            parts.push(format!("{name}: {verdict}"));
        }
    }
    if parts.is_empty() {
        "undecided".into()
    } else {
        parts.join("; ")
    }
}

// ------------------------------------------------------------ valuation route

/// One condition of the valuation criterion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub holds: Option<bool>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub place: String,
    pub conditions: Vec<Condition>,
    /// `t` in `N* ∩ (Nrd1* Nrd2*)` minus `Nrd1* ∪ Nrd2*`.
    pub statement: String,
}

impl CorollaryReport {
    pub fn all_hold(&self) -> bool {
        self.conditions.iter().all(|c| c.holds == Some(true))
    }
}

fn residue_char_is_not_two(field: &Field, v: &ValuationRef) -> bool {
    match (field, v) {
        (_, ValuationRef::PAdicPlace(p)) => *p != 2,
        (Field::Tower { .. }, _) => field.finite_base().is_none_or(|f| f.p() != 2),
        (Field::Function { .. }, _) => true,
        _ => false,
    }
}

/// Valuation criterion: `v(2) = v(a) = v(b) = 0`, `v(t)` odd, the residue
/// algebra `(a, b)` non-split and `a` a sum of two squares; then `t` is
/// certified through [`certify_witness`].
pub fn corollary_certify(
    a: &Element,
    b: &Element,
    t: &Element,
    v: &ValuationRef,
    field: &Field,
) -> Result<Certificate> {
    corollary_certify_with(a, b, t, v, field, CertifyOptions::default())
}

pub fn corollary_certify_with(
    a: &Element,
    b: &Element,
    t: &Element,
    v: &ValuationRef,
    field: &Field,
    opts: CertifyOptions,
) -> Result<Certificate> {
    let f = field;
    let place = f.fmt_place(v);
    let va = f.valuation(a, v)?;
    let vb = f.valuation(b, v)?;
    let vt = f.valuation(t, v)?;
    let mut conditions = vec![
        Condition {
            name: "v(2) = 0".into(),
            holds: Some(residue_char_is_not_two(f, v)),
            detail: format!("residue characteristic at {place}"),
        },
        Condition {
            name: "v(a) = 0".into(),
            holds: Some(va == 0),
            detail: format!("v(a) = {va}"),
        },
        Condition {
            name: "v(b) = 0".into(),
            holds: Some(vb == 0),
            detail: format!("v(b) = {vb}"),
        },
        Condition {
            name: "v(t) not in 2vK".into(),
            holds: Some(vt.rem_euclid(2) == 1),
            detail: format!("v(t) = {vt}"),
        },
    ];
    let residue = if va == 0 && vb == 0 {
        let (rf, ra) = f.residue(a, v)?;
        let (_, rb) = f.residue(b, v)?;
        let q = QuaternionAlgebra::new(&rf, ra, rb)?;
        let split = quaternion::is_split_with(&q, opts.height)?;
        Condition {
            name: "residue algebra (a, b) non-split".into(),
            holds: match &split {
                TriState::Yes { .. } => Some(false),
                TriState::No { .. } => Some(true),
                TriState::Unknown { .. } => None,
            },
            detail: format!("{q} over {}", rf.spec()),
        }
    } else {
        Condition {
            name: "residue algebra (a, b) non-split".into(),
            holds: Some(false),
            detail: "a or b is not a unit".into(),
        }
    };
    conditions.push(residue);
    let two = quadform::is_sum_of_two_squares(f, a)?;
    conditions.push(Condition {
        name: "a is a sum of two squares".into(),
        holds: match &two {
            TriState::Yes { .. } => Some(true),
            TriState::No { .. } => Some(false),
            TriState::Unknown { .. } => None,
        },
        detail: match &two {
            TriState::Yes { witness } => {
                serde_json::to_string(witness).expect("witness serializes")
            }
            TriState::No { .. } => "not a sum of two squares".into(),
            TriState::Unknown { reason } => reason.clone(),
        },
    });
    let report = CorollaryReport {
        place: place.clone(),
        conditions,
        statement: format!(
            "{} in N*(L/K) ∩ (Nrd*(Q1) Nrd*(Q2)) \\ (Nrd*(Q1) ∪ Nrd*(Q2))",
            f.fmt_element(t)
        ),
    };
    let base_inputs = inputs(&[
        ("a", f.fmt_element(a)),
        ("b", f.fmt_element(b)),
        ("t", f.fmt_element(t)),
        ("v", place),
    ]);
    if !report.all_hold() {
        let failed: Vec<String> = report
            .conditions
            .iter()
            .filter(|c| c.holds != Some(true))
            .map(|c| format!("fails \"{}\" ({})", c.name, c.detail))
            .collect();
        let undecided = report.conditions.iter().all(|c| c.holds != Some(false));
        let hypotheses = check_hypotheses_with(a, b, t, f, opts)?;
        return Ok(Certificate {
            schema_version: SCHEMA_VERSION,
            kind: CertificateKind::Corollary,
            field: f.spec(),
            inputs: base_inputs,
            hypotheses,
            algebra: None,
            x: f.fmt_element(t),
            witness: f.fmt_element(&f.reduce_squares(t)?.0),
            memberships: None,
            conclusion: if undecided {
                Conclusion::Inconclusive
            } else {
                Conclusion::HypothesisFailed
            },
            reason: Some(failed.join("; ")),
            citations: Vec::new(),
            corollary: Some(report),
            example: None,
            trace: ProofTrace::new(NodeKind::Conjunction, "valuation criterion")
                .with_field(f.spec()),
        });
    }
    let mut cert = certify_witness_with(a, b, t, f, opts)?;
    cert.kind = CertificateKind::Corollary;
    cert.inputs = base_inputs;
    cert.corollary = Some(report);
    Ok(cert)
}

#[cfg(test)]
mod tests;
