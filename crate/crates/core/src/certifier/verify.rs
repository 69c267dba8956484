//! Certificate replay. Witnesses are checked by substitution; anisotropy
//! trees are re-derived node by node (residue forms recomputed from the
//! field, leaves re-checked by enumeration) without calling the deciders.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Element, Field, FiniteField, Scalar, ValuationRef};
use crate::involution::build_involution_algebra;
use crate::oracle;
use crate::quadform::{
    check_isotropy_witness, check_representation_witness, check_slot_chain,
    check_two_squares_witness, PfisterForm,
};
use crate::trace::{NodeKind, ProofTrace, TriState, Witness};

use super::{
    conclude, Certificate, CertificateKind, Conclusion, Factorization, ProductEvidence,
    QuotientReport,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub audit: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    fn new(audit: bool) -> Self {
        VerifyReport {
            ok: true,
            audit,
            checks: Vec::new(),
        }
    }

    fn push(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.ok &= ok;
        self.checks.push(Check {
            name: name.into(),
            ok,
            detail: detail.into(),
        });
    }

    fn push_result(&mut self, name: &str, r: Result<bool>) {
        match r {
            Ok(ok) => self.push(name, ok, if ok { "replayed" } else { "replay failed" }),
            Err(e) => self.push(name, false, e.to_string()),
        }
    }
}

// ----------------------------------------------------------- anisotropy trees

fn sorted_literals(field: &Field, xs: &[Element]) -> Vec<String> {
    let mut v: Vec<String> = xs.iter().map(|x| field.fmt_element(x)).collect();
    v.sort();
    v
}

fn parse_form(field: &Field, lits: &[String]) -> Result<Vec<Element>> {
    lits.iter().map(|s| field.parse_nonzero(s)).collect()
}

fn rationals(field: &Field, xs: &[Element]) -> Option<Vec<BigRational>> {
    xs.iter().map(|x| field.as_rational(x)).collect()
}

fn fq_units(xs: &[Element]) -> Option<Vec<u64>> {
    xs.iter()
        .map(|x| match x {
            Element::Mono(m) if m.exps.is_empty() => match m.unit {
                Scalar::Fq(u) => Some(u),
                _ => None,
            },
            _ => None,
        })
        .collect()
}

fn local_leaf(p: u64, c: &[BigRational], audit: bool) -> bool {
    let n = c.len();
    if p == 2 {
        return n <= 4 && (3..=6).any(|k| oracle::no_primitive_zero_mod(2, c, k));
    }
    let springer = oracle::springer_anisotropic_odd(p, c);
    let feasible = (p as f64).powi(2 * (n as i32 - 1)) <= (1u64 << 22) as f64;
    if audit && feasible {
        springer && oracle::no_primitive_zero_mod(p, c, 2)
    } else {
        springer
    }
}

fn tower_place(field: &Field, place: &str) -> Result<ValuationRef> {
    match field {
        Field::Tower { .. } => field.parse_place(place.strip_suffix("-adic").unwrap_or(place)),
        _ => field.parse_place(place),
    }
}

/// Checks that `t` proves `<form>` anisotropic over `field`.
pub fn replay_anisotropy(
    field: &Field,
    form: &[Element],
    t: &ProofTrace,
    audit: bool,
) -> Result<bool> {
    if t.kind == NodeKind::Conjunction && t.form.is_empty() && t.children.len() == 1 {
        return replay_anisotropy(field, form, &t.children[0], audit);
    }
    if t.field.as_deref() != Some(field.spec().as_str()) {
        return Ok(false);
    }
    let claimed = parse_form(field, &t.form)?;
    if sorted_literals(field, &claimed) != sorted_literals(field, form) {
        return Ok(false);
    }
    match t.kind {
        NodeKind::Trivial => Ok(form.len() <= 1),
        NodeKind::Definiteness => Ok(rationals(field, form).is_some_and(|c| oracle::same_sign(&c))),
        NodeKind::LocalSymbol => {
            let Some(c) = rationals(field, form) else {
                return Ok(false);
            };
            let Some(ValuationRef::PAdicPlace(p)) = t
                .place
                .as_deref()
                .map(|s| field.parse_place(s))
                .transpose()?
            else {
                return Ok(false);
            };
            Ok(matches!(field, Field::Rationals) && local_leaf(p, &c, audit))
        }
        NodeKind::FiniteField => {
            let (Some(ff), Some(units)) = (field.finite_base(), fq_units(form)) else {
                return Ok(false);
            };
            if field.nvars_of() != 0 || form.len() > 2 {
                return Ok(false);
            }
            Ok(oracle::ff_exhaustive(ff, &units)?.zero.is_none())
        }
        NodeKind::ResidueSplit => {
            let Some(place) = t.place.as_deref() else {
                return Ok(false);
            };
            let v = tower_place(field, place)?;
            let odd_residue_char = match &v {
                ValuationRef::PAdicPlace(p) => *p != 2,
                _ => field.finite_base().is_none_or(|f: &FiniteField| f.p() != 2),
            };
            if !odd_residue_char || t.children.len() != 2 {
                return Ok(false);
            }
            let rf = field.residue_field(&v)?;
            let (mut even, mut odd) = (Vec::new(), Vec::new());
            for c in form {
                let (e, u) = field.split_at(c, &v)?;
                let (_, r) = field.residue(&u, &v)?;
                if e.rem_euclid(2) == 0 {
                    even.push(r);
                } else {
                    odd.push(r);
                }
            }
            Ok(replay_anisotropy(&rf, &even, &t.children[0], audit)?
                && replay_anisotropy(&rf, &odd, &t.children[1], audit)?)
        }
        _ => Ok(false),
    }
}

// ------------------------------------------------------------ verdict replay

fn with_neg(field: &Field, q: &[Element], x: &Element) -> Vec<Element> {
    let mut v = q.to_vec();
    v.push(field.neg(x));
    v
}

/// Replays a representation verdict for `x` by `q`.
fn replay_rep(
    field: &Field,
    q: &[Element],
    x: &Element,
    t: &TriState<Witness>,
    audit: bool,
) -> Result<bool> {
    match t {
        TriState::Yes { witness } => check_representation_witness(field, q, x, witness),
        TriState::No { trace } => replay_anisotropy(field, &with_neg(field, q, x), trace, audit),
        TriState::Unknown { .. } => Ok(true),
    }
}

fn explicit_vector(field: &Field, form: &[Element], t: &ProofTrace) -> Result<bool> {
    let Some(w) = t.data.get("witness") else {
        return Ok(false);
    };
    let w: Witness =
        serde_json::from_value(w.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
    check_isotropy_witness(field, form, &w)
}

fn replay_factorization(
    field: &Field,
    n1form: &[Element],
    n2form: &[Element],
    x: &Element,
    fz: &Factorization,
) -> Result<bool> {
    let n1 = field.parse_nonzero(&fz.n1)?;
    let n2 = field.parse_nonzero(&fz.n2)?;
    let s = field.parse_nonzero(&fz.s)?;
    let prod = field.mul(&field.mul(&n1, &n2), &field.square(&s));
    Ok(prod == *x
        && check_representation_witness(field, n1form, &n1, &fz.w1)?
        && check_representation_witness(field, n2form, &n2, &fz.w2)?)
}

struct Inputs {
    field: Field,
    a: Element,
    b: Element,
    c: Element,
}

fn inputs(cert: &Certificate) -> Result<Inputs> {
    let field = cert.field()?;
    let get = |k: &str| {
        cert.inputs
            .get(k)
            .ok_or_else(|| Error::Invalid(format!("certificate input `{k}` missing")))
            .and_then(|s| field.parse_nonzero(s))
    };
    let c = match cert.kind {
        CertificateKind::Corollary => get("t")?,
        _ => get("c")?,
    };
    Ok(Inputs {
        a: get("a")?,
        b: get("b")?,
        c,
        field: field.clone(),
    })
}

/// Oracle cross-check over `F_q` towers: `iso` is the oracle's isotropy
/// verdict for `form`, compared with the claim.
fn tower_cross(
    r: &mut VerifyReport,
    name: &str,
    field: &Field,
    form: &[Element],
    claim_isotropic: Option<bool>,
) {
    let Some(claim) = claim_isotropic else { return };
    match oracle::tower_isotropic(field, form) {
        Ok(iso) => r.push(
            format!("audit: {name}"),
            iso == claim,
            format!("oracle isotropic = {iso}"),
        ),
        Err(e) => r.push(format!("audit: {name}"), false, e.to_string()),
    }
}

fn claim<W>(t: &TriState<W>) -> Option<bool> {
    match t {
        TriState::Yes { .. } => Some(true),
        TriState::No { .. } => Some(false),
        TriState::Unknown { .. } => None,
    }
}

pub fn verify_certificate(cert: &Certificate) -> Result<VerifyReport> {
    check_certificate(cert, false)
}

/// [`verify_certificate`] plus enumeration-based re-derivation: modular
/// searches at the local leaves and, over `F_q` towers, every verdict.
pub fn audit_certificate(cert: &Certificate) -> Result<VerifyReport> {
    check_certificate(cert, true)
}

fn check_certificate(cert: &Certificate, audit: bool) -> Result<VerifyReport> {
    let mut r = VerifyReport::new(audit);
    r.push(
        "schema version",
        cert.schema_version == super::SCHEMA_VERSION,
        cert.schema_version.to_string(),
    );
    let Inputs { field: f, a, b, c } = inputs(cert)?;
    let tower = matches!(
        f.tower_parts(),
        Some((crate::fields::TowerBase::Finite(_), _))
    );
    let x = f.parse_nonzero(&cert.x)?;
    r.push("x = c", x == c, cert.x.clone());

    let ab = PfisterForm::new(&f, vec![a.clone(), b.clone()])?.expand();
    let abc = PfisterForm::new(&f, vec![a.clone(), b.clone(), c.clone()])?.expand();
    let h = &cert.hypotheses;
    let minus1 = f.int(-1);
    let m1 = match &h.minus1_in_d {
        TriState::Yes { witness } if h.sum_of_two_squares => {
            check_two_squares_witness(&f, &a, witness)
        }
        other => replay_rep(&f, ab.coeffs(), &minus1, other, audit),
    };
    r.push_result("-1 in D<<a,b>>", m1);
    let aniso = match &h.pfister_anisotropic {
        TriState::Yes { witness } => replay_anisotropy(&f, abc.coeffs(), witness, audit),
        TriState::No { trace } => explicit_vector(&f, abc.coeffs(), trace),
        TriState::Unknown { .. } => Ok(true),
    };
    r.push_result("<<a,b,c>> anisotropic", aniso);
    if audit && tower {
        tower_cross(
            &mut r,
            "-1 in D<<a,b>>",
            &f,
            &with_neg(&f, ab.coeffs(), &minus1),
            claim(&h.minus1_in_d),
        );
        tower_cross(
            &mut r,
            "<<a,b,c>> anisotropic",
            &f,
            abc.coeffs(),
            claim(&h.pfister_anisotropic).map(|y| !y),
        );
    }

    if let Some(alg_json) = &cert.algebra {
        match build_involution_algebra(&a, &b, &c, &f) {
            Ok(alg) => {
                let same = serde_json::to_value(&alg).map_err(|e| Error::Invalid(e.to_string()))?
                    == *alg_json;
                r.push("algebra datum", same, "rebuilt from inputs");
            }
            Err(e) => r.push("algebra datum", false, e.to_string()),
        }
    }

    if let Some(m) = &cert.memberships {
        let nform = vec![f.one(), c.clone()];
        let q1 = PfisterForm::new(&f, vec![a.clone(), b.clone()])?.expand();
        let mac = f.neg(&f.mul(&a, &c));
        let q2 = PfisterForm::new(&f, vec![mac, b.clone()])?.expand();
        let pform = q1.orthogonal_sum(&q2.scaled(&f.neg(&x))?);
        r.push_result("x in N*(L/K)", replay_rep(&f, &nform, &x, &m.in_n, audit));
        let prod = match &m.in_nrd_product {
            TriState::Yes {
                witness:
                    ProductEvidence {
                        form,
                        witness,
                        factorization,
                    },
            } => (|| {
                let lits = parse_form(&f, form)?;
                if sorted_literals(&f, &lits) != sorted_literals(&f, pform.coeffs()) {
                    return Ok(false);
                }
                if !check_isotropy_witness(&f, pform.coeffs(), witness)? {
                    return Ok(false);
                }
                match factorization {
                    Some(fz) => replay_factorization(&f, q1.coeffs(), q2.coeffs(), &x, fz),
                    None => Ok(true),
                }
            })(),
            TriState::No { trace } => replay_anisotropy(&f, pform.coeffs(), trace, audit),
            TriState::Unknown { .. } => Ok(true),
        };
        r.push_result("x in Nrd*(Q1) Nrd*(Q2)", prod);
        r.push_result(
            "x in Nrd*(Q1)",
            replay_rep(&f, q1.coeffs(), &x, &m.not_in_nrd1, audit),
        );
        r.push_result(
            "x in Nrd*(Q2)",
            replay_rep(&f, q2.coeffs(), &x, &m.not_in_nrd2, audit),
        );
        if audit && tower {
            tower_cross(
                &mut r,
                "x in N*(L/K)",
                &f,
                &with_neg(&f, &nform, &x),
                claim(&m.in_n),
            );
            tower_cross(
                &mut r,
                "x in Nrd*(Q1) Nrd*(Q2)",
                &f,
                pform.coeffs(),
                claim(&m.in_nrd_product),
            );
            tower_cross(
                &mut r,
                "x in Nrd*(Q1)",
                &f,
                &with_neg(&f, q1.coeffs(), &x),
                claim(&m.not_in_nrd1),
            );
            tower_cross(
                &mut r,
                "x in Nrd*(Q2)",
                &f,
                &with_neg(&f, q2.coeffs(), &x),
                claim(&m.not_in_nrd2),
            );
        }
    }

    let expected = conclude(&cert.hypotheses, cert.memberships.as_ref());
    let consistent = match (cert.conclusion, expected) {
        // family-specific and valuation checks may only downgrade
        (Conclusion::Inconclusive, Conclusion::CertifiedNontrivial) => {
            cert.kind != CertificateKind::Triple
        }
        (got, want) => got == want,
    };
    r.push(
        "conclusion",
        consistent,
        format!("stated {}, recomputed {expected}", cert.conclusion),
    );
    if cert.conclusion == Conclusion::CertifiedNontrivial && cert.memberships.is_none() {
        r.push(
            "memberships present",
            false,
            "certified without memberships",
        );
    }

    if let Some(ex) = &cert.example {
        check_example(&mut r, &f, ex, &x, audit)?;
    }
    if let Some(co) = &cert.corollary {
        let v = tower_place(&f, &co.place)?;
        let t = &c;
        let ok = f.valuation(&a, &v)? == 0
            && f.valuation(&b, &v)? == 0
            && f.valuation(t, &v)?.rem_euclid(2) == 1;
        let needs = cert.conclusion != Conclusion::CertifiedNontrivial || co.all_hold();
        r.push(
            "valuation conditions",
            !co.all_hold() || ok,
            co.place.clone(),
        );
        r.push(
            "valuation report",
            needs,
            "certified only when every condition holds",
        );
    }
    Ok(r)
}

fn check_example(
    r: &mut VerifyReport,
    f: &Field,
    ex: &super::ExampleReport,
    x: &Element,
    audit: bool,
) -> Result<()> {
    let p = ex.p;
    let residues: Vec<u64> = (1..p).map(|y| y * y % p).collect();
    let u = ex.u as u64;
    let smallest = (1..p).find(|v| !residues.contains(v));
    r.push(
        "u is the smallest non-residue",
        smallest == Some(u),
        format!("u = {u}, p = {p}"),
    );
    let base = PfisterForm::parse(f, &[&p.to_string(), &ex.u.to_string(), "t"])?;
    r.push(
        "<<p,u,t>> literals",
        base.literals() == ex.pfister,
        ex.pfister.join(", "),
    );
    let aniso = match &ex.pfister_anisotropic {
        TriState::Yes { witness } => replay_anisotropy(f, base.expand().coeffs(), witness, audit),
        _ => Ok(false),
    };
    r.push_result("<<p,u,t>> anisotropic", aniso);
    let end = check_slot_chain(&base, &ex.slot_chain)?;
    let target = PfisterForm::parse(f, &[&ex.u.to_string(), &p.to_string(), &format!("-{p}*t")])?;
    let passes = ex.slot_chain.children.iter().any(|c| {
        c.data
            .get("to")
            .and_then(|v| v.as_array())
            .is_some_and(|a| {
                a.iter()
                    .filter_map(|s| s.as_str())
                    .map(String::from)
                    .collect::<Vec<_>>()
                    == target.literals()
            })
    });
    r.push(
        "slot chain to <<u,p,-pt>>",
        passes && end.as_ref().is_some_and(|e| e.literals() == ex.normal_form),
        ex.normal_form.join(", "),
    );
    let u_e = f.int(ex.u);
    let two = match &ex.u_sum_of_two_squares {
        TriState::Yes { witness } => check_two_squares_witness(f, &u_e, witness),
        _ => Ok(false),
    };
    r.push_result("u is a sum of two squares", two);
    let nform = vec![f.one(), x.clone()];
    let nw = match &ex.norm_witness {
        Some(w) => check_representation_witness(f, &nform, x, w),
        None => Ok(false),
    };
    r.push_result("-pt = N(sqrt(pt))", nw);
    let q1 = PfisterForm::parse(f, &[&p.to_string(), &ex.u.to_string()])?.expand();
    let mac = f.neg(&f.mul(&f.int(p as i64), x));
    let q2 = PfisterForm::new(f, vec![mac, u_e])?.expand();
    let fz = match &ex.factorization {
        Some(fz) if fz.n1 == format!("-{p}") && fz.n2 == "t" => {
            replay_factorization(f, q1.coeffs(), q2.coeffs(), x, fz)
        }
        _ => Ok(false),
    };
    r.push_result("-pt = (-p) * t", fz);
    Ok(())
}

/// Re-derives every row of an enumeration with the tower oracle and checks
/// the group-theoretic conclusions again from the oracle's sets.
pub fn audit_quotient(rep: &QuotientReport) -> Result<VerifyReport> {
    let mut r = VerifyReport::new(true);
    let f = Field::parse_spec(&rep.field)?;
    let get = |k: &str| {
        rep.inputs
            .get(k)
            .ok_or_else(|| Error::Invalid(format!("input `{k}` missing")))
            .and_then(|s| f.parse_nonzero(s))
    };
    let (a, b, c) = (get("a")?, get("b")?, get("c")?);
    let q1 = PfisterForm::new(&f, vec![a.clone(), b.clone()])?.expand();
    let q2 = PfisterForm::new(&f, vec![f.neg(&f.mul(&a, &c)), b.clone()])?.expand();
    let nform = vec![f.one(), c.clone()];
    let classes = f.enumerate_square_classes()?;
    r.push(
        "class count",
        classes.len() == rep.class_count && rep.rows.len() == classes.len(),
        rep.class_count.to_string(),
    );
    let mut sets: [Vec<String>; 4] = Default::default();
    for (cls, row) in classes.iter().zip(&rep.rows) {
        r.push(
            format!("row {}", row.class),
            cls.label == row.class,
            "class order",
        );
        let x = f.parse_nonzero(&row.class)?;
        let pform = q1.orthogonal_sum(&q2.scaled(&f.neg(&x))?);
        let facts = [
            ("N", Some(&nform[..]), with_neg(&f, &nform, &x), &row.in_n),
            (
                "Nrd1",
                Some(q1.coeffs()),
                with_neg(&f, q1.coeffs(), &x),
                &row.in_nrd1,
            ),
            (
                "Nrd2",
                Some(q2.coeffs()),
                with_neg(&f, q2.coeffs(), &x),
                &row.in_nrd2,
            ),
            ("NrdProduct", None, pform.coeffs().to_vec(), &row.in_product),
        ];
        for (k, (name, base, form, verdict)) in facts.into_iter().enumerate() {
            let iso = oracle::tower_isotropic(&f, &form)?;
            if iso {
                sets[k].push(row.class.clone());
            }
            let replay = match (verdict, base) {
                (TriState::Unknown { .. }, _) => false,
                (_, Some(q)) => replay_rep(&f, q, &x, verdict, true)?,
                (TriState::Yes { witness }, None) => check_isotropy_witness(&f, &form, witness)?,
                (TriState::No { trace }, None) => replay_anisotropy(&f, &form, trace, true)?,
            };
            r.push(
                format!("{} in {name}", row.class),
                claim(verdict) == Some(iso) && replay,
                format!("oracle isotropic = {iso}"),
            );
        }
    }
    let [n, n1, n2, np] = sets;
    let meet = |u: &[String], v: &[String]| -> Vec<String> {
        u.iter().filter(|x| v.contains(x)).cloned().collect()
    };
    let (g, h1, h2) = (meet(&n, &np), meet(&n, &n1), meet(&n, &n2));
    r.push("G+ matches", g == rep.gplus.elements, g.join(", "));
    r.push("H matches", h1 == rep.h.elements, h1.join(", "));
    r.push("N ∩ Nrd1 = N ∩ Nrd2", h1 == h2 && rep.k_independent, "");
    r.push(
        "H ⊆ G+",
        h1.iter().all(|x| g.contains(x)) && rep.h_subset_gplus,
        "",
    );
    let order = if h1.is_empty() { 0 } else { g.len() / h1.len() };
    r.push(
        "quotient order",
        order == rep.quotient_order && order.is_power_of_two(),
        order.to_string(),
    );
    Ok(r)
}
