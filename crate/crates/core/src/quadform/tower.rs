//! Springer recursion over iterated Laurent fields.
//!
//! A witness found for a residue form lifts exactly: if `sum r_j y_j^2 = 0`
//! then `x_j = y_j * pi^(-floor(e_j / 2))` kills `sum c_j x_j^2` because every
//! term of a parity group carries the same power of `pi`.

use num_rational::BigRational;

use crate::error::Result;
use crate::fields::{Field, Scalar, TowerBase, TowerElem};
use crate::trace::{NodeKind, ProofTrace, TriState};

use super::{padic, rational};

/// Splits at the outermost variable: indices and residues of the even- and
/// odd-valuation coefficients.
pub fn residue_forms(
    coeffs: &[TowerElem],
) -> (Vec<usize>, Vec<TowerElem>, Vec<usize>, Vec<TowerElem>) {
    let k = coeffs[0].exps.len() - 1;
    let (mut ei, mut ev, mut oi, mut ov) = (vec![], vec![], vec![], vec![]);
    for (j, c) in coeffs.iter().enumerate() {
        let mut exps = c.exps.clone();
        let e = exps.remove(k);
        let r = TowerElem {
            unit: c.unit.clone(),
            exps,
        };
        if e.rem_euclid(2) == 0 {
            ei.push(j);
            ev.push(r);
        } else {
            oi.push(j);
            ov.push(r);
        }
    }
    (ei, ev, oi, ov)
}

fn sub_field(base: &TowerBase, vars: &[String]) -> Field {
    Field::Tower {
        base: base.clone(),
        vars: vars.to_vec(),
    }
}

fn fmt_form(base: &TowerBase, vars: &[String], coeffs: &[TowerElem]) -> Vec<String> {
    let f = sub_field(base, vars);
    coeffs
        .iter()
        .map(|c| f.fmt_element(&crate::fields::Element::Mono(c.clone())))
        .collect()
}

/// Zero of `<coeffs>` over `base((vars[0]))...((vars[n-1]))` given as
/// monomials (zero unit for zero entries), or an anisotropy trace.
pub fn isotropy(
    base: &TowerBase,
    vars: &[String],
    coeffs: &[TowerElem],
) -> Result<TriState<Vec<TowerElem>>> {
    if coeffs.is_empty() {
        return Ok(TriState::no(
            ProofTrace::new(NodeKind::Trivial, "the zero form is anisotropic")
                .with_field(sub_field(base, vars).spec()),
        ));
    }
    if vars.is_empty() {
        return base_isotropy(base, coeffs);
    }
    let n = vars.len();
    let (ei, ev, oi, ov) = residue_forms(coeffs);
    let inner = &vars[..n - 1];
    let mut children = Vec::new();
    for (idx, res) in [(ei, ev), (oi, ov)] {
        match isotropy(base, inner, &res)? {
            TriState::Yes { witness: y } => {
                let mut out: Vec<TowerElem> = coeffs
                    .iter()
                    .map(|_| TowerElem {
                        unit: base.zero(),
                        exps: vec![0; n],
                    })
                    .collect();
                for (k, &j) in idx.iter().enumerate() {
                    let mut exps = y[k].exps.clone();
                    exps.push(-coeffs[j].exps[n - 1].div_euclid(2));
                    out[j] = TowerElem {
                        unit: y[k].unit.clone(),
                        exps,
                    };
                }
                return Ok(TriState::yes(out));
            }
            TriState::No { trace } => children.push(trace),
            TriState::Unknown { reason } => return Ok(TriState::unknown(reason)),
        }
    }
    let node = ProofTrace::new(
        NodeKind::ResidueSplit,
        "both residue forms are anisotropic (Springer)",
    )
    .with_field(sub_field(base, vars).spec())
    .with_form(fmt_form(base, vars, coeffs))
    .with_place(format!("{}-adic", vars[n - 1]));
    Ok(TriState::no(
        children.into_iter().fold(node, |t, c| t.with_child(c)),
    ))
}

fn base_isotropy(base: &TowerBase, coeffs: &[TowerElem]) -> Result<TriState<Vec<TowerElem>>> {
    let mono = |u: Scalar| TowerElem {
        unit: u,
        exps: vec![],
    };
    match base {
        TowerBase::Finite(f) => {
            let units: Vec<u64> = coeffs
                .iter()
                .map(|c| match c.unit {
                    Scalar::Fq(x) => x,
                    _ => unreachable!("finite base"),
                })
                .collect();
            Ok(match padic::ff_zero(f, &units) {
                Some(y) => TriState::yes(y.into_iter().map(|x| mono(Scalar::Fq(x))).collect()),
                None => TriState::no(padic::ff_anisotropy_trace(f, &units)),
            })
        }
        TowerBase::Rationals => {
            let q: Vec<BigRational> = coeffs
                .iter()
                .map(|c| match &c.unit {
                    Scalar::Rat(r) => r.clone(),
                    _ => unreachable!("rational base"),
                })
                .collect();
            if let Some(trace) = rational::local_obstruction(&q)? {
                return Ok(TriState::no(trace));
            }
            Ok(match rational::find_zero(&q)? {
                Some(y) => TriState::yes(y.into_iter().map(|x| mono(Scalar::Rat(x))).collect()),
                None => TriState::unknown(
                    "residue form over Q is isotropic but no rational zero was constructed",
                ),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Element;

    fn mono(f: &Field, s: &str) -> TowerElem {
        match f.parse_nonzero(s).unwrap() {
            Element::Mono(m) => m,
            _ => unreachable!(),
        }
    }

    #[test]
    fn pfister_over_f3_tower() {
        let f = Field::parse_spec("Fq-tower:q=3,vars=s,t").unwrap();
        let (base, vars) = f.tower_parts().unwrap();
        // <<-1, s, t>> = <1, 1, -s, -s, -t, -t, s*t, s*t>
        let c: Vec<TowerElem> = ["1", "1", "-s", "-s", "-t", "-t", "s*t", "s*t"]
            .iter()
            .map(|s| mono(&f, s))
            .collect();
        let r = isotropy(base, vars, &c).unwrap();
        let t = r.trace().expect("anisotropic");
        assert_eq!(t.kind, NodeKind::ResidueSplit);
        assert_eq!(t.size(), 7);
    }

    #[test]
    fn witness_is_exact() {
        let f = Field::parse_spec("Fq-tower:q=5,vars=s,t").unwrap();
        let (base, vars) = f.tower_parts().unwrap();
        let c: Vec<TowerElem> = ["t", "s*t^3", "-t", "s^-1"]
            .iter()
            .map(|s| mono(&f, s))
            .collect();
        let TriState::Yes { witness } = isotropy(base, vars, &c).unwrap() else {
            panic!()
        };
        let coeffs: Vec<Element> = c.into_iter().map(Element::Mono).collect();
        let x: Vec<_> = witness
            .into_iter()
            .map(|m| f.value_of(&Element::Mono(m)))
            .collect();
        assert!(f.v_is_zero(&f.eval_diagonal(&coeffs, &x)));
        assert!(!x.iter().all(|v| f.v_is_zero(v)));
    }
}
