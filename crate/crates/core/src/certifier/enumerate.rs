//! Exhaustive `G+/H` over fields with finitely many square classes.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Field, SquareClass};
use crate::involution::InvolutionAlgebra6;
use crate::trace::{TriState, Witness};

use super::{norm_membership, nrd_k_membership, product_form, CertifyOptions, SCHEMA_VERSION};

/// A subgroup of `K*/K*^2` given by its elements (labels, in class order).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareClassSubgroup {
    pub elements: Vec<String>,
    pub generators: Vec<String>,
}

impl SquareClassSubgroup {
    /// Checks `1` is present and the set is closed under multiplication, then
    /// extracts a generating set greedily.
    pub fn from_classes(field: &Field, classes: &[SquareClass]) -> Result<Self> {
        let mut sorted = classes.to_vec();
        sorted.sort();
        sorted.dedup();
        let one = field.one_class();
        if !sorted.contains(&one) {
            return Err(Error::Internal("subset of square classes misses 1".into()));
        }
        for x in &sorted {
            for y in &sorted {
                if !sorted.contains(&field.class_mul(x, y)) {
                    return Err(Error::Internal(format!("{x} * {y} leaves the subset")));
                }
            }
        }
        let mut span = vec![one];
        let mut generators = Vec::new();
        for x in &sorted {
            if span.contains(x) {
                continue;
            }
            generators.push(x.label.clone());
            let more: Vec<SquareClass> = span.iter().map(|s| field.class_mul(s, x)).collect();
            span.extend(more);
        }
        Ok(SquareClassSubgroup {
            elements: sorted.iter().map(|c| c.label.clone()).collect(),
            generators,
        })
    }

    pub fn contains(&self, label: &str) -> bool {
        self.elements.iter().any(|e| e == label)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_subset_of(&self, other: &SquareClassSubgroup) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }
}

/// Decisions for one square class `x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipRow {
    pub class: String,
    #[serde(rename = "in_N")]
    pub in_n: TriState<Witness>,
    #[serde(rename = "in_Nrd1")]
    pub in_nrd1: TriState<Witness>,
    #[serde(rename = "in_Nrd2")]
    pub in_nrd2: TriState<Witness>,
    #[serde(rename = "in_NrdProduct")]
    pub in_product: TriState<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub schema_version: u32,
    pub field: String,
    pub inputs: BTreeMap<String, String>,
    pub class_count: usize,
    pub rows: Vec<MembershipRow>,
    #[serde(rename = "N")]
    pub norm_group: SquareClassSubgroup,
    #[serde(rename = "Nrd1")]
    pub nrd1: SquareClassSubgroup,
    #[serde(rename = "Nrd2")]
    pub nrd2: SquareClassSubgroup,
    #[serde(rename = "NrdProduct")]
    pub nrd_product: SquareClassSubgroup,
    #[serde(rename = "G_plus")]
    pub gplus: SquareClassSubgroup,
    #[serde(rename = "H")]
    pub h: SquareClassSubgroup,
    /// `N ∩ Nrd1 = N ∩ Nrd2`.
    pub k_independent: bool,
    pub h_subset_gplus: bool,
    pub quotient_order: usize,
    pub coset_reps: Vec<String>,
    /// Class of `c` and whether it lies in `G+ \ H`.
    pub c_class: String,
    pub c_in_gplus_minus_h: bool,
}

fn decided(t: &TriState<Witness>, what: &str, x: &SquareClass) -> Result<bool> {
    match t {
        TriState::Yes { .. } => Ok(true),
        TriState::No { .. } => Ok(false),
        TriState::Unknown { reason } => Err(Error::Internal(format!(
            "{what} undecided for {x}: {reason}"
        ))),
    }
}

fn row(a: &InvolutionAlgebra6, x: &SquareClass, opts: CertifyOptions) -> Result<MembershipRow> {
    let prod = crate::quadform::isotropy_with(&product_form(a, &x.rep)?, opts.height)?;
    Ok(MembershipRow {
        class: x.label.clone(),
        in_n: norm_membership(a, &x.rep, opts)?,
        in_nrd1: nrd_k_membership(a, &x.rep, 1, opts)?,
        in_nrd2: nrd_k_membership(a, &x.rep, 2, opts)?,
        in_product: prod,
    })
}

/// Computes `N*`, `Nrd1*`, `Nrd2*` and `Nrd1* Nrd2*` class by class, then
/// `G+ = N ∩ (Nrd1 Nrd2)` and `H = N ∩ Nrd1`, checking `N ∩ Nrd1 = N ∩ Nrd2`
/// and `H ⊆ G+`. Classes are processed in parallel; results keep class order.
pub fn enumerate_quotient(a: &InvolutionAlgebra6) -> Result<QuotientReport> {
    enumerate_quotient_with(a, CertifyOptions::default())
}

pub fn enumerate_quotient_with(
    a: &InvolutionAlgebra6,
    opts: CertifyOptions,
) -> Result<QuotientReport> {
    let f = &a.field;
    let classes = f.enumerate_square_classes()?;
    let rows: Vec<MembershipRow> = classes
        .par_iter()
        .map(|x| row(a, x, opts))
        .collect::<Result<_>>()?;
    let mut sets: [Vec<SquareClass>; 4] = Default::default();
    for (x, r) in classes.iter().zip(&rows) {
        let flags = [
            decided(&r.in_n, "N*", x)?,
            decided(&r.in_nrd1, "Nrd1*", x)?,
            decided(&r.in_nrd2, "Nrd2*", x)?,
            decided(&r.in_product, "Nrd1* Nrd2*", x)?,
        ];
        for (s, fl) in sets.iter_mut().zip(flags) {
            if fl {
                s.push(x.clone());
            }
        }
    }
    let [n, n1, n2, np] = sets;
    let meet = |u: &[SquareClass], v: &[SquareClass]| -> Vec<SquareClass> {
        u.iter().filter(|x| v.contains(x)).cloned().collect()
    };
    let gplus = meet(&n, &np);
    let h1 = meet(&n, &n1);
    let h2 = meet(&n, &n2);
    let k_independent = h1 == h2;
    let h_subset_gplus = h1.iter().all(|x| gplus.contains(x));
    let sub = |s: &[SquareClass]| SquareClassSubgroup::from_classes(f, s);
    let (g_sub, h_sub) = (sub(&gplus)?, sub(&h1)?);
    if g_sub.order() % h_sub.order() != 0 {
        return Err(Error::Internal("|H| does not divide |G+|".into()));
    }
    let mut coset_reps = Vec::new();
    let mut covered: Vec<SquareClass> = Vec::new();
    let mut sorted_g = gplus.clone();
    sorted_g.sort();
    for g in &sorted_g {
        if covered.contains(g) {
            continue;
        }
        coset_reps.push(g.label.clone());
        covered.extend(h1.iter().map(|h| f.class_mul(g, h)));
    }
    let c_class = f.square_class(&a.c)?;
    let inputs = [("a", &a.a), ("b", &a.b), ("c", &a.c)]
        .iter()
        .map(|(k, v)| (k.to_string(), f.fmt_element(v)))
        .collect();
    Ok(QuotientReport {
        schema_version: SCHEMA_VERSION,
        field: f.spec(),
        inputs,
        class_count: classes.len(),
        rows,
        norm_group: sub(&n)?,
        nrd1: sub(&n1)?,
        nrd2: sub(&n2)?,
        nrd_product: sub(&np)?,
        quotient_order: g_sub.order() / h_sub.order(),
        gplus: g_sub,
        h: h_sub,
        k_independent,
        h_subset_gplus,
        coset_reps,
        c_in_gplus_minus_h: gplus.contains(&c_class) && !h1.contains(&c_class),
        c_class: c_class.label,
    })
}
