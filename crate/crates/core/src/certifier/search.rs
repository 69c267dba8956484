//! Bounded search for triples `(a, b, c)` with a certified class.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{arith, Element, Field};

use super::{certify_witness_with, CertifyOptions, Conclusion, SCHEMA_VERSION};

/// One line of the JSONL stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub schema_version: u32,
    pub field: String,
    pub a: String,
    pub b: String,
    pub c: String,
    pub conclusion: Option<Conclusion>,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub schema_version: u32,
    pub field: String,
    pub bound: u64,
    pub candidates: usize,
    pub certified: usize,
    /// Failures of `-1 in D<<a,b>>`.
    pub failed_minus_one: usize,
    /// Failures of anisotropy of `<<a,b,c>>`.
    pub failed_anisotropy: usize,
    /// Triples rejected when building the algebra (for example `-c` a square).
    pub build_errors: usize,
    pub inconclusive: usize,
    pub records: Vec<SearchRecord>,
}

fn squarefree_ints(bound: u64) -> Vec<i64> {
    let mut out = Vec::new();
    for n in 1..=bound as i64 {
        if arith::factor_u64(n as u64).iter().all(|&(_, e)| e == 1) {
            out.push(n);
            out.push(-n);
        }
    }
    out
}

/// Candidate triples, in a fixed order.
///
/// * fields with finitely many square classes: all classes for `a, b, c`;
/// * `Q`: squarefree integers with `|n| <= bound`;
/// * function fields and `Q`-towers: `a, b` squarefree integers and
///   `c = m * x` with `x` the last variable.
pub fn search_candidates(field: &Field, bound: u64) -> Result<Vec<(Element, Element, Element)>> {
    let cube = |xs: &[Element], cs: &[Element]| {
        let mut out = Vec::new();
        for a in xs {
            for b in xs {
                for c in cs {
                    out.push((a.clone(), b.clone(), c.clone()));
                }
            }
        }
        out
    };
    if field.has_finite_square_classes() {
        let reps: Vec<Element> = field
            .enumerate_square_classes()?
            .into_iter()
            .map(|c| c.rep)
            .collect();
        return Ok(cube(&reps, &reps));
    }
    let ints: Vec<Element> = squarefree_ints(bound)
        .into_iter()
        .map(|n| field.int(n))
        .collect();
    let var = match field {
        Field::Rationals => return Ok(cube(&ints, &ints)),
        Field::Function { var, .. } => var.clone(),
        Field::Tower { vars, .. } if !vars.is_empty() => vars[vars.len() - 1].clone(),
        _ => return Err(Error::Unsupported(format!("search over {}", field.spec()))),
    };
    let x = field.parse_element(&var)?;
    let cs: Vec<Element> = ints.iter().map(|m| field.mul(m, &x)).collect();
    Ok(cube(&ints, &cs))
}

/// Certifies every candidate, in parallel on `jobs` threads (all cores when
/// `None`). Records keep candidate order.
pub fn search(
    field: &Field,
    bound: u64,
    jobs: Option<usize>,
    opts: CertifyOptions,
) -> Result<SearchReport> {
    let cands = search_candidates(field, bound)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = pool.build().map_err(|e| Error::Internal(e.to_string()))?;
    let f = field;
    let records: Vec<SearchRecord> = pool.install(|| {
        cands
            .par_iter()
            .map(|(a, b, c)| {
                let (conclusion, reason) = match certify_witness_with(a, b, c, f, opts) {
                    Ok(cert) => (Some(cert.conclusion), cert.reason),
                    Err(e) => (None, Some(e.to_string())),
                };
                SearchRecord {
                    schema_version: SCHEMA_VERSION,
                    field: f.spec(),
                    a: f.fmt_element(a),
                    b: f.fmt_element(b),
                    c: f.fmt_element(c),
                    conclusion,
                    reason,
                }
            })
            .collect()
    });
    let count = |pred: &dyn Fn(&SearchRecord) -> bool| records.iter().filter(|r| pred(r)).count();
    let reason_starts =
        |r: &SearchRecord, p: &str| r.reason.as_deref().is_some_and(|s| s.starts_with(p));
    let hf = |r: &SearchRecord| r.conclusion == Some(Conclusion::HypothesisFailed);
    Ok(SearchReport {
        schema_version: SCHEMA_VERSION,
        field: f.spec(),
        bound,
        candidates: records.len(),
        certified: count(&|r| r.conclusion == Some(Conclusion::CertifiedNontrivial)),
        failed_minus_one: count(&|r| hf(r) && reason_starts(r, "(i)")),
        failed_anisotropy: count(&|r| hf(r) && reason_starts(r, "(ii)")),
        build_errors: count(&|r| r.conclusion.is_none() || (hf(r) && !reason_starts(r, "(i"))),
        inconclusive: count(&|r| r.conclusion == Some(Conclusion::Inconclusive)),
        records,
    })
}
