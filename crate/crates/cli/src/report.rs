//! Plain-text reports.

use std::fmt::Write;

use pfister_core::certifier::{Certificate, QuotientReport, SearchReport, VerifyReport};
use pfister_core::{ProofTrace, TriState, Witness};

fn witness(w: &Witness) -> String {
    match w {
        Witness::Exact { vector } => format!("exact vector ({})", vector.join(", ")),
        Witness::Hensel { prime, vector } => {
            format!("vector ({}) lifting at p={prime}", vector.join(", "))
        }
        Witness::Lifted { indices, .. } => format!("lifted from entries {indices:?}"),
    }
}

fn verdict<W>(t: &TriState<W>, yes: &str, no: &str) -> String {
    match t {
        TriState::Yes { .. } => yes.into(),
        TriState::No { .. } => no.into(),
        TriState::Unknown { reason } => format!("unknown ({reason})"),
    }
}

fn tree(out: &mut String, t: &ProofTrace, depth: usize) {
    let place = t
        .place
        .as_deref()
        .map(|p| format!(" @ {p}"))
        .unwrap_or_default();
    let _ = writeln!(
        out,
        "{}- [{:?}{place}] {}",
        "  ".repeat(depth + 1),
        t.kind,
        t.claim
    );
    for c in &t.children {
        tree(out, c, depth + 1);
    }
}

pub fn tri(claim: &str, t: &TriState<Witness>) -> String {
    let mut s = format!("{claim}? ");
    match t {
        TriState::Yes { witness: w } => {
            let _ = writeln!(s, "yes: {}", witness(w));
        }
        TriState::No { trace } => {
            let _ = writeln!(s, "no");
            tree(&mut s, trace, 0);
        }
        TriState::Unknown { reason } => {
            let _ = writeln!(s, "unknown: {reason}");
        }
    }
    s
}

pub fn certificate(c: &Certificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "field      {}", c.field);
    let inputs: Vec<String> = c.inputs.iter().map(|(k, v)| format!("{k} = {v}")).collect();
    let _ = writeln!(s, "inputs     {}", inputs.join(", "));
    let _ = writeln!(s, "\nhypotheses");
    let h = &c.hypotheses;
    let m1 = if h.sum_of_two_squares {
        "yes (a is a sum of two squares)"
    } else {
        "yes"
    };
    let _ = writeln!(
        s,
        "  {:<28} {}",
        "-1 in D<<a,b>>",
        verdict(&h.minus1_in_d, m1, "no")
    );
    let _ = writeln!(
        s,
        "  {:<28} {}",
        "<<a,b,c>> anisotropic",
        verdict(&h.pfister_anisotropic, "yes", "no")
    );
    if let Some(co) = &c.corollary {
        let _ = writeln!(s, "\nvaluation conditions at {}", co.place);
        for cond in &co.conditions {
            let v = match cond.holds {
                Some(true) => "holds",
                Some(false) => "fails",
                None => "unknown",
            };
            let _ = writeln!(s, "  {:<36} {:<8} {}", cond.name, v, cond.detail);
        }
    }
    if let Some(ex) = &c.example {
        let _ = writeln!(s, "\nfamily over Q_{}(t), u = {}", ex.p, ex.u);
        let _ = writeln!(
            s,
            "  <<{}>> anisotropic: {}",
            ex.pfister.join(","),
            verdict(&ex.pfister_anisotropic, "yes", "no")
        );
        for step in &ex.slot_chain.children {
            let _ = writeln!(s, "  {}", step.claim);
        }
        if let Some(fz) = &ex.factorization {
            let _ = writeln!(s, "  {} = ({}) * ({}) * ({})^2", c.x, fz.n1, fz.n2, fz.s);
        }
        for line in &ex.presentation {
            let _ = writeln!(s, "  {line}");
        }
    }
    if let Some(m) = &c.memberships {
        let _ = writeln!(s, "\nmemberships of x = {} (class {})", c.x, c.witness);
        let _ = writeln!(s, "  {:<28} {:<10} needed", "statement", "verdict");
        for (name, v, need) in m.rows() {
            let mark = if v == need { "" } else { "  <-" };
            let _ = writeln!(s, "  {name:<28} {v:<10} {need}{mark}");
        }
    }
    let _ = writeln!(s, "\nconclusion {}", c.conclusion);
    if let Some(r) = &c.reason {
        let _ = writeln!(s, "reason     {r}");
    }
    if !c.citations.is_empty() {
        let _ = writeln!(s, "rests on");
        for cit in &c.citations {
            let _ = writeln!(s, "  * {cit}");
        }
    }
    s
}

pub fn quotient(r: &QuotientReport) -> String {
    let mut s = String::new();
    let inputs: Vec<String> = r.inputs.iter().map(|(k, v)| format!("{k} = {v}")).collect();
    let _ = writeln!(
        s,
        "field {} ({} square classes), {}",
        r.field,
        r.class_count,
        inputs.join(", ")
    );
    let _ = writeln!(
        s,
        "  {:<12} {:>4} {:>6} {:>6} {:>11}",
        "class", "N", "Nrd1", "Nrd2", "Nrd1*Nrd2"
    );
    let mark = |t: &TriState<Witness>| match t {
        TriState::Yes { .. } => "x",
        TriState::No { .. } => ".",
        TriState::Unknown { .. } => "?",
    };
    for row in &r.rows {
        let _ = writeln!(
            s,
            "  {:<12} {:>4} {:>6} {:>6} {:>11}",
            row.class,
            mark(&row.in_n),
            mark(&row.in_nrd1),
            mark(&row.in_nrd2),
            mark(&row.in_product)
        );
    }
    let _ = writeln!(s, "G+ = {{{}}}", r.gplus.elements.join(", "));
    let _ = writeln!(s, "H  = {{{}}}", r.h.elements.join(", "));
    let _ = writeln!(s, "N ∩ Nrd1 = N ∩ Nrd2: {}", r.k_independent);
    let _ = writeln!(s, "H ⊆ G+: {}", r.h_subset_gplus);
    let _ = writeln!(
        s,
        "|G+/H| = {} (coset representatives {})",
        r.quotient_order,
        r.coset_reps.join(", ")
    );
    let _ = writeln!(
        s,
        "class of c = {}: in G+ \\ H: {}",
        r.c_class, r.c_in_gplus_minus_h
    );
    s
}

pub fn verification(r: &VerifyReport) -> String {
    let mut s = String::new();
    let title = if r.audit { "audit" } else { "verification" };
    for c in &r.checks {
        let _ = writeln!(
            s,
            "  [{}] {} {}",
            if c.ok { "ok" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    let _ = writeln!(s, "{title}: {}", if r.ok { "passed" } else { "FAILED" });
    s
}

pub fn search(r: &SearchReport) -> String {
    format!(
        "searched {} triples over {} (bound {}): {} certified, {} fail (i), {} fail (ii), {} rejected, {} inconclusive\n",
        r.candidates,
        r.field,
        r.bound,
        r.certified,
        r.failed_minus_one,
        r.failed_anisotropy,
        r.build_errors,
        r.inconclusive
    )
}
