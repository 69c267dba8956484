use super::*;

fn el(f: &Field, s: &str) -> Element {
    f.parse_element(s).unwrap()
}

fn certify(spec: &str, a: &str, b: &str, c: &str) -> Certificate {
    let f = Field::parse_spec(spec).unwrap();
    certify_witness(&el(&f, a), &el(&f, b), &el(&f, c), &f).unwrap()
}

fn assert_verifies(cert: &Certificate) {
    let back = Certificate::from_json(&cert.to_json()).unwrap();
    assert_eq!(&back, cert);
    for r in [
        verify_certificate(&back).unwrap(),
        audit_certificate(&back).unwrap(),
    ] {
        let bad: Vec<_> = r.checks.iter().filter(|c| !c.ok).collect();
        assert!(r.ok, "{bad:?}");
    }
}

#[test]
fn rational_function_triple_is_certified() {
    let cert = certify("Q(t)", "5", "2", "t");
    assert_eq!(
        cert.conclusion,
        Conclusion::CertifiedNontrivial,
        "{:?}",
        cert.reason
    );
    assert!(cert.hypotheses.sum_of_two_squares);
    let m = cert.memberships.as_ref().unwrap();
    assert!(m.in_n.is_yes() && m.in_nrd_product.is_yes());
    assert!(m.not_in_nrd1.is_no() && m.not_in_nrd2.is_no());
    assert_eq!(cert.citations.len(), 3);
    assert_verifies(&cert);
}

#[test]
fn tower_triple_is_certified() {
    let cert = certify("Fq-tower:q=3,vars=s,t", "-1", "s", "t");
    assert_eq!(
        cert.conclusion,
        Conclusion::CertifiedNontrivial,
        "{:?}",
        cert.reason
    );
    assert_verifies(&cert);
}

#[test]
fn rational_triples_fail_hypotheses() {
    let cert = certify("Q", "-1", "-1", "-1");
    assert_eq!(cert.conclusion, Conclusion::HypothesisFailed);
    assert_eq!(cert.reason.as_deref(), Some("(i) -1 is not in D<<a,b>>"));
    assert!(cert.memberships.is_none());
    assert_verifies(&cert);

    let cert = certify("Q", "1", "3", "5");
    assert_eq!(cert.conclusion, Conclusion::HypothesisFailed);
    assert_eq!(cert.reason.as_deref(), Some("(ii) <<a,b,c>> is isotropic"));
    assert_verifies(&cert);
}

#[test]
fn split_discriminant_is_reported() {
    // -c a square: the algebra cannot be built
    let cert = certify("Fq-tower:q=3,vars=s,t", "-1", "s", "-1");
    assert_ne!(cert.conclusion, Conclusion::CertifiedNontrivial);
}

#[test]
fn conclude_needs_every_component() {
    let cert = certify("Q(t)", "5", "2", "t");
    let h = cert.hypotheses.clone();
    let m = cert.memberships.clone().unwrap();
    assert_eq!(conclude(&h, Some(&m)), Conclusion::CertifiedNontrivial);
    assert_eq!(conclude(&h, None), Conclusion::Inconclusive);

    let mut bad = m.clone();
    bad.not_in_nrd1 = TriState::unknown("budget");
    assert_eq!(conclude(&h, Some(&bad)), Conclusion::Inconclusive);
    let mut bad = m.clone();
    bad.in_n = TriState::unknown("budget");
    assert_eq!(conclude(&h, Some(&bad)), Conclusion::Inconclusive);
    let mut bad = m.clone();
    bad.not_in_nrd2 = bad.in_n.clone();
    assert_eq!(conclude(&h, Some(&bad)), Conclusion::Inconclusive);

    let mut hb = h.clone();
    hb.pfister_anisotropic = TriState::unknown("budget");
    assert_eq!(conclude(&hb, Some(&m)), Conclusion::Inconclusive);
    let mut hb = h.clone();
    hb.minus1_in_d = TriState::no(ProofTrace::new(NodeKind::Trivial, "injected"));
    assert_eq!(conclude(&hb, Some(&m)), Conclusion::HypothesisFailed);
}

#[test]
fn tampered_certificates_are_rejected() {
    let cert = certify("Q(t)", "5", "2", "t");

    let mut t = cert.clone();
    t.conclusion = Conclusion::HypothesisFailed;
    assert!(!verify_certificate(&t).unwrap().ok);

    let mut t = cert.clone();
    let m = t.memberships.as_mut().unwrap();
    if let TriState::Yes {
        witness: Witness::Exact { vector },
    } = &mut m.in_n
    {
        vector[0] = "7".into();
    }
    assert!(!verify_certificate(&t).unwrap().ok);

    let mut t = cert.clone();
    t.inputs.insert("b".into(), "3".into());
    assert!(!verify_certificate(&t).unwrap().ok);

    let mut t = cert.clone();
    if let TriState::No { trace } = &mut t.memberships.as_mut().unwrap().not_in_nrd1 {
        trace.children.clear();
    }
    assert!(!verify_certificate(&t).unwrap().ok);
}

#[test]
fn corollary_cases() {
    let f = Field::parse_spec("Q(t)").unwrap();
    let v = f.parse_place("t-adic").unwrap();
    let ok = corollary_certify(&el(&f, "5"), &el(&f, "2"), &el(&f, "t"), &v, &f).unwrap();
    assert_eq!(ok.conclusion, Conclusion::CertifiedNontrivial);
    assert!(ok.corollary.as_ref().unwrap().all_hold());
    assert_verifies(&ok);

    let even = corollary_certify(&el(&f, "2"), &el(&f, "3"), &el(&f, "t^2"), &v, &f).unwrap();
    assert_eq!(even.conclusion, Conclusion::HypothesisFailed);
    assert!(even
        .reason
        .as_deref()
        .unwrap()
        .contains("fails \"v(t) not in 2vK\""));

    // (3, 5) is split over Q and 3 is not a sum of two squares
    let split = corollary_certify(&el(&f, "3"), &el(&f, "5"), &el(&f, "t"), &v, &f).unwrap();
    assert_eq!(split.conclusion, Conclusion::HypothesisFailed);
    let reason = split.reason.unwrap();
    assert!(reason.contains("a is a sum of two squares"), "{reason}");
}

#[test]
fn tower_quotient() {
    let f = Field::parse_spec("Fq-tower:q=3,vars=s,t").unwrap();
    let alg =
        crate::involution::build_involution_algebra(&el(&f, "-1"), &el(&f, "s"), &el(&f, "t"), &f)
            .unwrap();
    let rep = enumerate_quotient(&alg).unwrap();
    assert_eq!(rep.class_count, 8);
    assert!(rep.k_independent && rep.h_subset_gplus);
    assert!(rep.c_in_gplus_minus_h);
    assert!(rep.quotient_order >= 2 && rep.quotient_order.is_power_of_two());
    assert_eq!(enumerate_quotient(&alg).unwrap(), rep);
    let audit = audit_quotient(&rep).unwrap();
    assert!(
        audit.ok,
        "{:?}",
        audit.checks.iter().filter(|c| !c.ok).collect::<Vec<_>>()
    );
}

#[test]
fn quotient_audit_catches_edits() {
    let f = Field::parse_spec("Fq-tower:q=3,vars=s,t").unwrap();
    let alg =
        crate::involution::build_involution_algebra(&el(&f, "-1"), &el(&f, "s"), &el(&f, "t"), &f)
            .unwrap();
    let mut rep = enumerate_quotient(&alg).unwrap();
    rep.quotient_order *= 2;
    assert!(!audit_quotient(&rep).unwrap().ok);
}

#[test]
fn example_family() {
    for p in [3u64, 5, 7] {
        let cert = reproduce_example_qpt(p).unwrap();
        assert_eq!(
            cert.conclusion,
            Conclusion::CertifiedNontrivial,
            "p = {p}: {:?}",
            cert.reason
        );
        assert_eq!(cert.witness, format!("-{p}*t"));
        let ex = cert.example.as_ref().unwrap();
        assert!(ex.pfister_anisotropic.is_yes());
        assert_eq!(ex.normal_form[2], format!("-{p}*t"));
        let fz = ex.factorization.as_ref().unwrap();
        assert_eq!(
            (fz.n1.as_str(), fz.n2.as_str()),
            (format!("-{p}").as_str(), "t")
        );
        assert_verifies(&cert);
    }
    assert!(reproduce_example_qpt(2).is_err());
}

#[test]
fn tower_search_finds_known_triple() {
    let f = Field::parse_spec("Fq-tower:q=3,vars=s,t").unwrap();
    let rep = search(&f, 1, Some(2), CertifyOptions::default()).unwrap();
    assert_eq!(rep.candidates, 512);
    assert!(rep
        .records
        .iter()
        .any(
            |r| (r.a.as_str(), r.b.as_str(), r.c.as_str()) == ("-1", "s", "t")
                && r.conclusion == Some(Conclusion::CertifiedNontrivial)
        ));
    let again = search(&f, 1, Some(1), CertifyOptions::default()).unwrap();
    assert_eq!(again, rep);
}

#[test]
fn rational_search_is_empty() {
    let rep = search(&Field::rationals(), 6, None, CertifyOptions::default()).unwrap();
    assert_eq!(rep.certified, 0);
    assert_eq!(rep.failed_minus_one + rep.failed_anisotropy, rep.candidates);
}
