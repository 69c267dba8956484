//! Isotropy over Q: Hasse-Minkowski for the verdict, Legendre descent and
//! splitting for the witness.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::fields::{arith, ValuationRef};
use crate::trace::{NodeKind, ProofTrace, TriState, Witness};

use super::hilbert::{local_isotropy, relevant_places};

/// Bound on the auxiliary value `t` searched when splitting forms of
/// dimension 4 and 5.
pub const SPLIT_SEARCH_BOUND: i64 = 5000;

fn fmt_rat_list(xs: &[BigRational]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

/// Anisotropy proof at the first place where the form is locally anisotropic,
/// or `None` if it is isotropic everywhere.
pub fn local_obstruction(coeffs: &[BigRational]) -> Result<Option<ProofTrace>> {
    if coeffs.len() <= 1 {
        return Ok(Some(
            ProofTrace::new(
                NodeKind::Trivial,
                format!("forms of dimension {} are anisotropic", coeffs.len()),
            )
            .with_field("Q")
            .with_form(fmt_rat_list(coeffs)),
        ));
    }
    for place in relevant_places(coeffs)? {
        let v = local_isotropy(coeffs, &place)?;
        if v.isotropic {
            continue;
        }
        let node = match place {
            ValuationRef::RealPlace => {
                ProofTrace::new(NodeKind::Definiteness, "definite, hence anisotropic over R")
                    .with_place("real")
            }
            ValuationRef::PAdicPlace(p) => ProofTrace::new(
                NodeKind::LocalSymbol,
                format!("anisotropic over Q_{p} by the Hilbert-symbol criterion"),
            )
            .with_place(format!("p={p}"))
            .with_data("criterion", v.reason),
            _ => unreachable!("places of Q"),
        };
        return Ok(Some(node.with_field("Q").with_form(fmt_rat_list(coeffs))));
    }
    Ok(None)
}

pub fn is_isotropic(coeffs: &[BigRational]) -> Result<bool> {
    Ok(local_obstruction(coeffs)?.is_none())
}

/// Total decision over Q. `Unknown` only when every place is isotropic but
/// the witness construction exhausts its search bound.
pub fn isotropy(coeffs: &[BigRational]) -> Result<TriState<Witness>> {
    if let Some(trace) = local_obstruction(coeffs)? {
        return Ok(TriState::no(trace));
    }
    match find_zero(coeffs)? {
        Some(v) => Ok(TriState::yes(Witness::Exact { vector: fmt_rat_list(&v) })),
        None => Ok(TriState::unknown(format!(
            "isotropic at every place (Hasse-Minkowski) but no splitting value |t| <= {SPLIT_SEARCH_BOUND} found"
        ))),
    }
}

/// A nonzero rational zero of an everywhere locally isotropic form.
pub fn find_zero(coeffs: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
    let mut s = Vec::with_capacity(coeffs.len());
    let mut r = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        let (si, ri) = arith::squarefree_rat(c)?;
        s.push(si);
        r.push(ri);
    }
    let Some(y) = solve_squarefree(&s)? else {
        return Ok(None);
    };
    let x: Vec<BigRational> = y.iter().zip(&r).map(|(yi, ri)| yi / ri).collect();
    Ok(Some(primitive(&x)))
}

/// Scales a rational vector to coprime integers.
pub fn primitive(x: &[BigRational]) -> Vec<BigRational> {
    let l = x.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = x
        .iter()
        .map(|q| (q * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    if g.is_zero() {
        return x.to_vec();
    }
    ints.iter()
        .map(|n| BigRational::from_integer(n / &g))
        .collect()
}

fn rq(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

fn form_isotropic_int(s: &[BigInt]) -> Result<bool> {
    let c: Vec<BigRational> = s.iter().map(rq).collect();
    is_isotropic(&c)
}

fn embed(n: usize, idx: &[usize], sub: &[BigRational]) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    for (k, &i) in idx.iter().enumerate() {
        v[i] = sub[k].clone();
    }
    v
}

/// Zero of `sum s_i x_i^2` for square-free integers `s_i`, assuming the form
/// is isotropic over Q.
fn solve_squarefree(s: &[BigInt]) -> Result<Option<Vec<BigRational>>> {
    let n = s.len();
    // hyperbolic pairs first
    for i in 0..n {
        for j in i + 1..n {
            if s[i] == -&s[j] {
                return Ok(Some(embed(
                    n,
                    &[i, j],
                    &[BigRational::one(), BigRational::one()],
                )));
            }
        }
    }
    if n < 3 {
        return Ok(None);
    }
    // small isotropic subforms, smallest dimension first
    for k in 3..=n.min(4) {
        for idx in combinations(n, k) {
            let sub: Vec<BigInt> = idx.iter().map(|&i| s[i].clone()).collect();
            if form_isotropic_int(&sub)? {
                let z = match k {
                    3 => ternary(&sub)?,
                    _ => quaternary(&sub)?,
                };
                if let Some(z) = z {
                    return Ok(Some(embed(n, &idx, &z)));
                }
            }
        }
    }
    if n == 4 {
        return Ok(None);
    }
    // n >= 5: an indefinite 5-dimensional subform is isotropic
    for idx in combinations(n, 5) {
        let sub: Vec<BigInt> = idx.iter().map(|&i| s[i].clone()).collect();
        if sub.iter().any(|x| x.is_positive()) && sub.iter().any(|x| x.is_negative()) {
            if let Some(z) = quinary(&sub)? {
                return Ok(Some(embed(n, &idx, &z)));
            }
        }
    }
    Ok(None)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Zero of `s1 x^2 + s2 y^2 + s3 z^2` (isotropic ternary).
fn ternary(s: &[BigInt]) -> Result<Option<Vec<BigRational>>> {
    // s1 x^2 = -s2 y^2 - s3 z^2  =>  (s1 x)^2 = A y^2 + B z^2
    let a = -(&s[0] * &s[1]);
    let b = -(&s[0] * &s[2]);
    let Some((y, z, w)) = legendre(&a, &b)? else {
        return Ok(None);
    };
    Ok(Some(vec![w / rq(&s[0]), y, z]))
}

/// Solves `z^2 = a x^2 + b y^2` nontrivially over Q (a, b nonzero integers).
pub fn legendre(a: &BigInt, b: &BigInt) -> Result<Option<(BigRational, BigRational, BigRational)>> {
    legendre_rec(a, b, 0)
}

fn legendre_rec(
    a: &BigInt,
    b: &BigInt,
    depth: u32,
) -> Result<Option<(BigRational, BigRational, BigRational)>> {
    if depth > 400 {
        return Ok(None);
    }
    let (a0, ra) = arith::squarefree_int(a)?;
    let (b0, rb) = arith::squarefree_int(b)?;
    let undo = |(x, y, z): (BigRational, BigRational, BigRational)| (x / rq(&ra), y / rq(&rb), z);
    let one = BigRational::one();
    let zero = BigRational::zero();
    if a0.is_one() {
        return Ok(Some(undo((one.clone(), zero, one))));
    }
    if b0.is_one() {
        return Ok(Some(undo((zero, one.clone(), one))));
    }
    if (&a0 + &b0).is_positive() && arith::is_square_int(&(&a0 + &b0)) {
        return Ok(Some(undo((one.clone(), one, rq(&(&a0 + &b0).sqrt())))));
    }
    if a0.abs() > b0.abs() {
        return Ok(legendre_rec(&b0, &a0, depth + 1)?.map(|(x, y, z)| undo((y, x, z))));
    }
    // now |a0| <= |b0|, |b0| >= 2
    if b0.abs() < BigInt::from(2) {
        return Ok(None);
    }
    let m = b0.abs();
    let Some(mut r) = arith::sqrt_mod_squarefree(&a0, &m)? else {
        return Ok(None);
    };
    if &r * 2 > m {
        r -= &m;
    }
    let num = &r * &r - &a0;
    if num.is_zero() {
        // a0 = r^2 is a square, impossible for square-free a0 != 1
        return Ok(None);
    }
    let t = &num / &b0;
    let (t0, tm) = arith::squarefree_int(&t)?;
    let Some((x1, y1, z1)) = legendre_rec(&a0, &t0, depth + 1)? else {
        return Ok(None);
    };
    // z1^2 - a0 x1^2 = t0 y1^2 and r^2 - a0 = b0 t0 tm^2
    let rr = rq(&r);
    let aa = rq(&a0);
    let z = &z1 * &rr + &aa * &x1;
    let x = &z1 + &x1 * &rr;
    let y = rq(&t0) * rq(&tm) * &y1;
    if y.is_zero() {
        return Ok(None);
    }
    Ok(Some(undo((x, y, z))))
}

/// Zero of an isotropic 4-dimensional form `<s1, s2, s3, s4>` via a value `t`
/// represented by both `<s1, s2>` and `<-s3, -s4>`.
fn quaternary(s: &[BigInt]) -> Result<Option<Vec<BigRational>>> {
    let left = [s[0].clone(), s[1].clone()];
    let right = [s[2].clone(), s[3].clone()];
    let Some((_, u, w)) = split_value(&left, &right)? else {
        return Ok(None);
    };
    // u: zero of <s1, s2, -t> with u[2] != 0; w: zero of <s3, s4, t> with w[2] != 0
    Ok(Some(vec![
        &u[0] / &u[2],
        &u[1] / &u[2],
        &w[0] / &w[2],
        &w[1] / &w[2],
    ]))
}

/// A splitting value with a zero of each half.
type SplitValue = (BigInt, Vec<BigRational>, Vec<BigRational>);

/// Finds square-free `t` with `<l1, l2, -t>` and `<rest..., t>` isotropic and
/// returns zeros of both with nonzero `t`-coordinate.
fn split_value(left: &[BigInt; 2], rest: &[BigInt]) -> Result<Option<SplitValue>> {
    let candidates = (1..=SPLIT_SEARCH_BOUND).flat_map(|k| [BigInt::from(k), BigInt::from(-k)]);
    for t in candidates {
        if !arith::squarefree_int(&t)?.1.is_one() {
            continue;
        }
        let l = [left[0].clone(), left[1].clone(), -&t];
        if !form_isotropic_int(&l)? {
            continue;
        }
        let mut r: Vec<BigInt> = rest.to_vec();
        r.push(t.clone());
        if !form_isotropic_int(&r)? {
            continue;
        }
        let Some(u) = ternary(&l)? else { continue };
        if u[2].is_zero() {
            continue;
        }
        let w = match r.len() {
            3 => ternary(&r)?,
            4 => quaternary(&r)?,
            _ => None,
        };
        let Some(w) = w else { continue };
        if w.last().is_none_or(|x| x.is_zero()) {
            continue;
        }
        return Ok(Some((t, u, w)));
    }
    Ok(None)
}

/// Zero of an indefinite 5-dimensional form.
fn quinary(s: &[BigInt]) -> Result<Option<Vec<BigRational>>> {
    // choose the first pair so the remaining triple plus t can be indefinite
    for (i, j) in [
        (0, 1),
        (0, 2),
        (0, 3),
        (0, 4),
        (1, 2),
        (1, 3),
        (1, 4),
        (2, 3),
        (2, 4),
        (3, 4),
    ] {
        let left = [s[i].clone(), s[j].clone()];
        let idx_rest: Vec<usize> = (0..5).filter(|&k| k != i && k != j).collect();
        let rest: Vec<BigInt> = idx_rest.iter().map(|&k| s[k].clone()).collect();
        let Some((_, u, w)) = split_value(&left, &rest)? else {
            continue;
        };
        let mut out = vec![BigRational::zero(); 5];
        out[i] = &u[0] / &u[2];
        out[j] = &u[1] / &u[2];
        let wl = w.last().expect("nonempty").clone();
        for (k, &pos) in idx_rest.iter().enumerate() {
            out[pos] = &w[k] / &wl;
        }
        return Ok(Some(out));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        arith::rat(n)
    }

    fn eval(c: &[BigRational], x: &[BigRational]) -> BigRational {
        c.iter().zip(x).map(|(a, b)| a * b * b).sum()
    }

    #[test]
    fn legendre_descent_solves() {
        for (a, b) in [
            (2i64, 7i64),
            (-1, 5),
            (3, 13),
            (5, 11),
            (-7, 11),
            (6, 10),
            (13, 17),
            (-2, 3),
        ] {
            let (a, b) = (BigInt::from(a), BigInt::from(b));
            let sol = legendre(&a, &b).unwrap();
            if let Some((x, y, z)) = sol {
                assert_eq!(&z * &z, rq(&a) * &x * &x + rq(&b) * &y * &y);
                assert!(!(x.is_zero() && y.is_zero() && z.is_zero()));
            }
        }
        assert!(legendre(&BigInt::from(3), &BigInt::from(13))
            .unwrap()
            .is_some());
    }

    #[test]
    fn witnesses_replay() {
        let forms: Vec<Vec<i64>> = vec![
            vec![1, 1, -2],
            vec![3, 5, -2],
            vec![1, 1, 1, -6],
            vec![2, 3, 5, -30],
            vec![1, 1, 1, 1, -7],
            vec![1, 2, 3, -5, -11],
            vec![7, 11, -13, 17, -19, 23],
        ];
        for f in forms {
            let c: Vec<BigRational> = f.iter().map(|&x| r(x)).collect();
            match isotropy(&c).unwrap() {
                TriState::Yes {
                    witness: Witness::Exact { vector },
                } => {
                    let x: Vec<BigRational> = vector.iter().map(|s| s.parse().unwrap()).collect();
                    assert!(eval(&c, &x).is_zero(), "{f:?}");
                    assert!(x.iter().any(|v| !v.is_zero()));
                }
                other => panic!("{f:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn anisotropic_examples() {
        assert!(isotropy(&[r(1), r(1), r(1)]).unwrap().is_no());
        assert!(isotropy(&[r(1), r(-5), r(-2), r(10)]).unwrap().is_no());
        assert!(isotropy(&[r(1), r(1), r(1), r(1)]).unwrap().is_no());
        assert!(isotropy(&[r(1), r(1), r(-3)]).unwrap().is_no());
    }
}
