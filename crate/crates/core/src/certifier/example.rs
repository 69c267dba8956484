//! The family over `Q_p(t)`: `u` a non-residue mod `p`, the form
//! `<<p, u, t>>` and the class of `-pt`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{arith, Field};
use crate::quadform::{self, apply_slot_rules, PfisterForm, SlotRule};
use crate::trace::{NodeKind, ProofTrace, TriState, Witness};

use super::{
    anisotropy, certify_witness_with, factorization_with, Anisotropy, Certificate, CertificateKind,
    CertifyOptions, Conclusion, Factorization,
};
use crate::involution::build_involution_algebra;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleReport {
    pub p: u64,
    /// Smallest positive non-residue mod `p`.
    pub u: i64,
    pub u_sum_of_two_squares: TriState<Witness>,
    /// `<<p, u, t>>` and its anisotropy.
    pub pfister: Vec<String>,
    pub pfister_anisotropic: Anisotropy,
    /// Slot chain `<<p,u,t>> -> <<u,p,t>> -> <<u,p,-pt>> -> <<p,u,-pt>>`.
    pub slot_chain: ProofTrace,
    pub normal_form: Vec<String>,
    /// `-pt = N(sqrt(pt))`: representation witness for `<1, -pt>`.
    pub norm_witness: Option<Witness>,
    /// `-pt = (-p) * t` with `-p` in `Nrd*(Q1)` and `t` in `Nrd*(Q2)`.
    pub factorization: Option<Factorization>,
    /// The algebras in the order `(u, p)`, `(u, t)`, `(u, pt)` and `L`.
    pub presentation: Vec<String>,
}

impl ExampleReport {
    fn holds(&self) -> bool {
        self.u_sum_of_two_squares.is_yes()
            && self.pfister_anisotropic.is_yes()
            && self.norm_witness.is_some()
            && self
                .factorization
                .as_ref()
                .is_some_and(|f| f.n1 == format!("-{}", self.p) && f.n2 == "t")
    }
}

pub fn reproduce_example_qpt(p: u64) -> Result<Certificate> {
    reproduce_example_qpt_with(p, CertifyOptions::default())
}

pub fn reproduce_example_qpt_with(p: u64, opts: CertifyOptions) -> Result<Certificate> {
    if p == 2 {
        return Err(Error::Invalid("p must be an odd prime".into()));
    }
    let f = Field::function(Some(p), "t")?;
    let u = arith::smallest_nonresidue(p) as i64;
    let (pe, ue, t) = (f.int(p as i64), f.int(u), f.parse_element("t")?);
    let base = PfisterForm::new(&f, vec![pe.clone(), ue.clone(), t.clone()])?;
    let pfister_anisotropic = anisotropy(&base.expand(), opts.height)?;
    let (normal, slot_chain) = apply_slot_rules(
        &base,
        &[
            SlotRule::Swap(1),
            SlotRule::MixAdjacent(2),
            SlotRule::Swap(1),
        ],
    )?;
    let c = normal.slots()[2].clone();
    let u_sum_of_two_squares = quadform::is_sum_of_two_squares(&f, &ue)?;

    let mut cert = certify_witness_with(&pe, &ue, &c, &f, opts)?;
    let (norm_witness, factorization) = match build_involution_algebra(&pe, &ue, &c, &f) {
        Ok(alg) => {
            let nw = match super::norm_membership(&alg, &c, opts)? {
                TriState::Yes { witness } => Some(witness),
                _ => None,
            };
            (nw, factorization_with(&alg, &c, &f.int(-(p as i64)), opts)?)
        }
        Err(_) => (None, None),
    };
    let report = ExampleReport {
        p,
        u,
        u_sum_of_two_squares,
        pfister: base.literals(),
        pfister_anisotropic,
        slot_chain: slot_chain.clone(),
        normal_form: normal.literals(),
        norm_witness,
        factorization,
        presentation: vec![
            format!("Q1 = ({u}, {p})"),
            format!("Q2 = ({u}, t)"),
            format!("Q = ({u}, {p}*t)"),
            format!("L = K(sqrt({p}*t))"),
        ],
    };
    if cert.conclusion == Conclusion::CertifiedNontrivial && !report.holds() {
        cert.conclusion = Conclusion::Inconclusive;
        cert.reason = Some("family-specific data did not check".into());
    }
    cert.kind = CertificateKind::Example;
    cert.inputs.insert("p".into(), p.to_string());
    cert.inputs.insert("u".into(), u.to_string());
    cert.trace = cert.trace.with_child(
        ProofTrace::new(
            NodeKind::Conjunction,
            format!("<<{p},{u},t>> = <<{p},{u},-{p}*t>>"),
        )
        .with_field(f.spec())
        .with_child(slot_chain),
    );
    cert.example = Some(report);
    Ok(cert)
}
