//! Finite fields and Q_p (odd p): Springer residue split, Hensel witnesses.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::fields::{arith, FiniteField};
use crate::trace::{NodeKind, ProofTrace, TriState, Witness};

/// A nonzero zero of a diagonal form over F_q, or `None` if anisotropic.
pub fn ff_zero(f: &FiniteField, coeffs: &[u64]) -> Option<Vec<u64>> {
    let n = coeffs.len();
    let mut out = vec![0; n];
    if let Some(i) = coeffs.iter().position(|&c| c == 0) {
        out[i] = 1;
        return Some(out);
    }
    match n {
        0 | 1 => None,
        _ => {
            // try pairs: c_i x^2 + c_j = 0
            for i in 0..n {
                for j in i + 1..n {
                    let r = f.div(f.neg(coeffs[j]), coeffs[i]).expect("unit");
                    if let Some(x) = f.sqrt(r) {
                        out[i] = x;
                        out[j] = 1;
                        return Some(out);
                    }
                }
            }
            if n < 3 {
                return None;
            }
            // c0 x^2 + c1 y^2 + c2 = 0: scan x
            for x in 0..f.order() {
                let lhs = f.add(f.mul(coeffs[0], f.mul(x, x)), coeffs[2]);
                let r = f.div(f.neg(lhs), coeffs[1]).expect("unit");
                if let Some(y) = f.sqrt(r) {
                    out[0] = x;
                    out[1] = y;
                    out[2] = 1;
                    return Some(out);
                }
            }
            unreachable!("ternary forms over finite fields are isotropic")
        }
    }
}

pub fn ff_fmt_form(f: &FiniteField, coeffs: &[u64]) -> Vec<String> {
    coeffs.iter().map(|&c| f.fmt_elem(c)).collect()
}

/// Anisotropy node for a form over F_q (dimension at most 2).
pub fn ff_anisotropy_trace(f: &FiniteField, coeffs: &[u64]) -> ProofTrace {
    let claim = match coeffs.len() {
        0 => "the zero form is anisotropic".to_string(),
        1 => "one-dimensional forms are anisotropic".to_string(),
        _ => "-c1*c2 is a non-square".to_string(),
    };
    ProofTrace::new(NodeKind::FiniteField, claim)
        .with_field(spec_fq(f))
        .with_form(ff_fmt_form(f, coeffs))
}

pub fn spec_fq(f: &FiniteField) -> String {
    format!("Fq:q={}", f.order())
}

/// Symmetric integer lift of an element of F_p.
pub fn lift_fp(p: u64, x: u64) -> BigInt {
    if x > p / 2 {
        BigInt::from(x) - BigInt::from(p)
    } else {
        BigInt::from(x)
    }
}

/// Splits rational coefficients at p into (valuation, residue of unit part).
fn split(p: u64, coeffs: &[BigRational]) -> Vec<(i64, u64)> {
    coeffs
        .iter()
        .map(|c| {
            let v = arith::val_rat(c, p);
            let u = arith::unit_part(c, p);
            (v, arith::rat_mod(&u, p).expect("p-adic unit"))
        })
        .collect()
}

/// Springer decision over Q_p for rational coefficients.
pub fn isotropy(p: u64, coeffs: &[BigRational]) -> TriState<Witness> {
    let f = FiniteField::new(p).expect("odd prime");
    let parts = split(p, coeffs);
    let groups: [Vec<usize>; 2] = [
        (0..coeffs.len())
            .filter(|&i| parts[i].0.rem_euclid(2) == 0)
            .collect(),
        (0..coeffs.len())
            .filter(|&i| parts[i].0.rem_euclid(2) == 1)
            .collect(),
    ];
    let mut children = Vec::new();
    for g in &groups {
        let res: Vec<u64> = g.iter().map(|&i| parts[i].1).collect();
        match ff_zero(&f, &res) {
            Some(y) => {
                let mut x = vec![BigRational::zero(); coeffs.len()];
                for (k, &i) in g.iter().enumerate() {
                    let e = parts[i].0.div_euclid(2);
                    let pe = pow_p(p, -e);
                    x[i] = BigRational::from_integer(lift_fp(p, y[k])) * pe;
                }
                let x = super::rational::primitive(&x);
                return TriState::yes(Witness::Hensel {
                    prime: p,
                    vector: x.iter().map(|v| v.to_string()).collect(),
                });
            }
            None => children.push(ff_anisotropy_trace(&f, &res)),
        }
    }
    let trace = ProofTrace::new(
        NodeKind::ResidueSplit,
        "both residue forms are anisotropic (Springer)",
    )
    .with_field(format!("Qp:p={p}"))
    .with_form(coeffs.iter().map(|c| c.to_string()).collect())
    .with_place(format!("p={p}"));
    let trace = children.into_iter().fold(trace, |t, c| t.with_child(c));
    TriState::no(trace)
}

pub fn is_isotropic(p: u64, coeffs: &[BigRational]) -> bool {
    isotropy(p, coeffs).is_yes()
}

pub fn pow_p(p: u64, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(p));
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

fn val(x: &BigRational, p: u64) -> Option<i64> {
    (!x.is_zero()).then(|| arith::val_rat(x, p))
}

pub fn eval(coeffs: &[BigRational], x: &[BigRational]) -> BigRational {
    coeffs.iter().zip(x).map(|(c, v)| c * v * v).sum()
}

/// Index certifying an exact p-adic zero near `x` by Hensel's lemma:
/// `x_i != 0` and `v(q(x)) - v(c_i) - 2 v(x_i) >= 1` (or `q(x) = 0`).
pub fn hensel_index(p: u64, coeffs: &[BigRational], x: &[BigRational]) -> Option<usize> {
    if coeffs.len() != x.len() || x.iter().all(|v| v.is_zero()) {
        return None;
    }
    let q = eval(coeffs, x);
    let Some(vq) = val(&q, p) else {
        return x.iter().position(|v| !v.is_zero());
    };
    (0..x.len()).find(|&i| match (val(&x[i], p), val(&coeffs[i], p)) {
        (Some(vx), Some(vc)) => vq - vc - 2 * vx >= 1,
        _ => false,
    })
}

/// Newton refinement of coordinate `i` until `v(q(x))` exceeds `target`.
pub fn newton_refine(
    p: u64,
    coeffs: &[BigRational],
    x: &[BigRational],
    target: i64,
) -> Option<Vec<BigRational>> {
    let i = hensel_index(p, coeffs, x)?;
    let mut x = x.to_vec();
    for _ in 0..64 {
        let q = eval(coeffs, &x);
        match val(&q, p) {
            None => return Some(x),
            Some(v) if v > target => return Some(x),
            _ => {}
        }
        let deriv = BigRational::from_integer(BigInt::from(2)) * &coeffs[i] * &x[i];
        let step = &q / &deriv;
        x[i] = truncate(&(&x[i] - step), p, target + 4);
    }
    None
}

/// Keeps a rational's p-adic expansion modest: replaces `x` by an integer
/// multiple of a power of p agreeing with it to precision `p^prec`.
fn truncate(x: &BigRational, p: u64, prec: i64) -> BigRational {
    if x.is_zero() {
        return x.clone();
    }
    let v = arith::val_rat(x, p);
    let u = arith::unit_part(x, p);
    let k = (prec - v).max(1) as u32;
    let m = num_traits::pow(BigInt::from(p), k as usize);
    let num = u.numer() % &m;
    let den = u.denom() % &m;
    // integer congruent to num/den mod p^k
    let inv = mod_inverse(&den, &m);
    let r = ((num * inv) % &m + &m) % &m;
    BigRational::from_integer(lift_sym(&r, &m)) * pow_p(p, v)
}

fn lift_sym(r: &BigInt, m: &BigInt) -> BigInt {
    if r * 2 > *m {
        r - m
    } else {
        r.clone()
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let (mut old_r, mut r) = (((a % m) + m) % m, m.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    while !r.is_zero() {
        let q = &old_r / &r;
        let nr = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, nr);
        let ns = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, ns);
    }
    ((old_s % m) + m) % m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        arith::rat(n)
    }

    #[test]
    fn finite_field_rules() {
        let f3 = FiniteField::new(3).unwrap();
        assert!(ff_zero(&f3, &[1, 1]).is_none());
        let f5 = FiniteField::new(5).unwrap();
        let z = ff_zero(&f5, &[1, 1]).unwrap();
        assert_eq!(f5.add(f5.mul(z[0], z[0]), f5.mul(z[1], z[1])), 0);
        for a in 1..3 {
            for b in 1..3 {
                for c in 1..3 {
                    assert!(ff_zero(&f3, &[a, b, c]).is_some());
                }
            }
        }
    }

    #[test]
    fn padic_decisions() {
        // <1, -3, -2, 6> is the norm form of the non-split (3, 2) over Q_3
        assert!(isotropy(3, &[r(1), r(-3), r(-2), r(6)]).is_no());
        assert!(isotropy(3, &[r(1), r(1), r(1)]).is_yes());
        assert!(isotropy(5, &[r(1), r(1)]).is_yes());
        assert!(isotropy(3, &[r(1), r(1)]).is_no());
        for c in [
            vec![r(1), r(1), r(1)],
            vec![r(1), r(-3), r(-2), r(6), r(-1)],
            vec![r(3), r(5), r(-2)],
        ] {
            if let TriState::Yes {
                witness: Witness::Hensel { prime, vector },
            } = isotropy(3, &c)
            {
                let x: Vec<BigRational> = vector.iter().map(|s| s.parse().unwrap()).collect();
                assert!(hensel_index(prime, &c, &x).is_some());
            } else {
                panic!("{c:?}");
            }
        }
    }

    #[test]
    fn newton_converges() {
        let c = [r(1), r(1), r(1)];
        let x = [r(1), r(1), r(1)];
        let y = newton_refine(3, &c, &x, 30).unwrap();
        assert!(arith::val_rat(&eval(&c, &y), 3) > 30);
    }
}
