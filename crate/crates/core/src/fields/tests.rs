use super::*;

fn q() -> Field {
    Field::Rationals
}

#[test]
fn spec_strings_round_trip() {
    for s in [
        "Q",
        "Q(t)",
        "Qp(t):p=3",
        "Fq:q=3",
        "Fq-tower:q=3,vars=s,t",
        "Qp:p=5",
        "Q-tower:vars=s,t",
        "Fq:q=9",
    ] {
        let f = Field::parse_spec(s).unwrap();
        assert_eq!(f.spec(), s);
        assert_eq!(Field::from_descriptor(&f.descriptor()).unwrap(), f);
    }
    assert!(Field::parse_spec("Fq:q=4").is_err());
    assert!(Field::parse_spec("Qp(t):p=2").is_err());
    assert!(Field::parse_spec("Fq-tower:q=3,vars=a,b,c,d").is_err());
    assert!(Field::parse_spec("R").is_err());
}

#[test]
fn square_class_examples() {
    let f = q();
    let c = f.square_class(&f.int(18)).unwrap();
    assert_eq!(c.label, "2");
    let ft = Field::parse_spec("Q(t)").unwrap();
    let x = ft.parse_element("t*(t+1)^2").unwrap();
    assert_eq!(ft.square_class(&x).unwrap().label, "t");
    let tower = Field::parse_spec("Fq-tower:q=3,vars=s,t").unwrap();
    let x = tower.parse_element("s^3*t^2").unwrap();
    assert_eq!(tower.square_class(&x).unwrap().label, "s");
    assert!(f.square_class(&f.int(0)).is_err());
}

#[test]
fn padic_classes() {
    let f = Field::padic(3).unwrap();
    assert_eq!(f.square_class(&f.int(-3)).unwrap().label, "6");
    assert_eq!(f.square_class(&f.int(7)).unwrap().label, "1");
    assert_eq!(f.square_class(&f.int(5)).unwrap().label, "2");
    let ft = Field::parse_spec("Qp(t):p=3").unwrap();
    let x = ft.parse_element("-3*t").unwrap();
    assert_eq!(ft.square_class(&x).unwrap().label, "6*t");
}

#[test]
fn valuation_examples() {
    let f = q();
    assert_eq!(
        f.valuation(&f.int(50), &ValuationRef::PAdicPlace(5))
            .unwrap(),
        2
    );
    let ft = Field::parse_spec("Q(t)").unwrap();
    let x = ft.parse_element("t^3/(1+t)").unwrap();
    assert_eq!(
        ft.valuation(&x, &ValuationRef::TAdic("t".into())).unwrap(),
        3
    );
    assert_eq!(
        ft.valuation(&x, &ValuationRef::DegreeValuation("t".into()))
            .unwrap(),
        -2
    );
    let tower = Field::parse_spec("Fq-tower:q=3,vars=s,t").unwrap();
    let y = tower.parse_element("s*t^2").unwrap();
    assert_eq!(
        tower
            .valuation(&y, &tower.parse_place("s").unwrap())
            .unwrap(),
        1
    );
    assert!(f
        .valuation(&f.int(3), &ValuationRef::TAdic("t".into()))
        .is_err());
}

#[test]
fn residue_examples() {
    let ft = Field::parse_spec("Q(t)").unwrap();
    let tv = ValuationRef::TAdic("t".into());
    let (rf, r) = ft
        .residue(&ft.parse_element("5 + 2*t").unwrap(), &tv)
        .unwrap();
    assert_eq!(rf, Field::Rationals);
    assert_eq!(rf.fmt_element(&r), "5");
    assert!(ft.residue(&ft.parse_element("t").unwrap(), &tv).is_err());

    let tower = Field::parse_spec("Fq-tower:q=3,vars=s,t").unwrap();
    let sv = tower.parse_place("s").unwrap();
    let (rf, r) = tower
        .residue(&tower.parse_element("-1 + s*t").unwrap(), &sv)
        .unwrap();
    assert_eq!(rf.spec(), "Fq-tower:q=3,vars=t");
    assert_eq!(rf.fmt_element(&r), "-1");
}

#[test]
fn enumerations() {
    let f3 = Field::finite(3).unwrap();
    let labels: Vec<String> = f3
        .enumerate_square_classes()
        .unwrap()
        .iter()
        .map(|c| c.label.clone())
        .collect();
    assert_eq!(labels, vec!["1", "-1"]);
    let f5s = Field::parse_spec("Fq-tower:q=5,vars=s").unwrap();
    let labels: Vec<String> = f5s
        .enumerate_square_classes()
        .unwrap()
        .iter()
        .map(|c| c.label.clone())
        .collect();
    assert_eq!(labels, vec!["1", "2", "s", "2*s"]);
    let t3 = Field::parse_spec("Fq-tower:q=3,vars=s,t").unwrap();
    assert_eq!(t3.enumerate_square_classes().unwrap().len(), 8);
    assert!(q().enumerate_square_classes().is_err());
    let f9 = Field::finite(9).unwrap();
    let labels: Vec<String> = f9
        .enumerate_square_classes()
        .unwrap()
        .iter()
        .map(|c| c.label.clone())
        .collect();
    assert_eq!(labels, vec!["1", "g"]);
}

#[test]
fn tower_literals_collapse_to_leading_term() {
    let t = Field::parse_spec("Fq-tower:q=3,vars=s,t").unwrap();
    let x = t.parse_element("1 + t").unwrap();
    assert_eq!(t.fmt_element(&x), "1");
    let x = t.parse_element("s^2 + s*t").unwrap();
    assert_eq!(t.fmt_element(&x), "s^2");
    let x = t.parse_element("1/(s + t)").unwrap();
    assert_eq!(t.fmt_element(&x), "s^-1");
    let v = t.parse_value("1 + s*t^-1").unwrap();
    assert_eq!(t.fmt_value(&v), "s*t^-1 + 1");
    assert!(t.parse_value("1/(1+s)").is_err());
    assert!(matches!(
        t.parse_element("2*u"),
        Err(Error::Parse { pos: 2, .. })
    ));
}

#[test]
fn reduce_squares_is_exact() {
    let ft = Field::parse_spec("Qp(t):p=3").unwrap();
    let x = ft.parse_element("-27*t^3*(t+2)^2/4").unwrap();
    let (r, s) = ft.reduce_squares(&x).unwrap();
    assert_eq!(ft.mul(&r, &ft.square(&s)), x);
    assert_eq!(ft.fmt_element(&r), "-3*t");
}
