//! Fixtures shared by the benchmarks.

use pfister_core::involution::{build_involution_algebra, InvolutionAlgebra6};
use pfister_core::quadform::QuadraticForm;
use pfister_core::{Element, Field};

pub fn field(spec: &str) -> Field {
    Field::parse_spec(spec).expect("valid field spec")
}

pub fn form(spec: &str, lits: &[&str]) -> QuadraticForm {
    QuadraticForm::parse(&field(spec), lits).expect("valid form")
}

pub fn triple(f: &Field, a: &str, b: &str, c: &str) -> (Element, Element, Element) {
    let el = |s: &str| f.parse_nonzero(s).expect("valid element");
    (el(a), el(b), el(c))
}

/// The algebra for `(-1, s, t)` over `F_3((s))((t))`.
pub fn tower_algebra() -> InvolutionAlgebra6 {
    let f = field("Fq-tower:q=3,vars=s,t");
    let (a, b, c) = triple(&f, "-1", "s", "t");
    build_involution_algebra(&a, &b, &c, &f).expect("non-trivial discriminant")
}
