//! Brute-force reference computations. Nothing here is called by the
//! deciders; tests, the certificate verifier and `--audit` use these to
//! re-derive facts by enumeration.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fields::{Element, Field, FiniteField, Scalar, TowerBase, Value};
use crate::quadform::QuadraticForm;

#[derive(Clone, Debug)]
pub struct SearchBudget {
    /// Bound on the absolute value of free integer coordinates.
    pub height: u64,
    /// Modular searches work mod `p^precision` (at least 5 when `p = 2`).
    pub precision: u32,
    pub time_cap: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            height: 1000,
            precision: 3,
            time_cap: Some(Duration::from_secs(20)),
        }
    }
}

impl SearchBudget {
    pub fn with_height(height: u64) -> Self {
        SearchBudget {
            height,
            ..Default::default()
        }
    }

    fn deadline(&self) -> Option<Instant> {
        self.time_cap.map(|d| Instant::now() + d)
    }
}

fn expired(deadline: Option<Instant>) -> bool {
    deadline.is_some_and(|d| Instant::now() > d)
}

// ------------------------------------------------------------- rational zeros

/// Clears denominators; `None` if some coefficient does not fit in `i128`.
fn integer_coeffs(coeffs: &[BigRational]) -> Option<Vec<i128>> {
    let l = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    coeffs
        .iter()
        .map(|c| (c.numer() * (&l / c.denom())).to_i128())
        .collect()
}

/// Calls `f` on every vector of `[-h, h]^m` of max-norm exactly `r`, in
/// lexicographic order. Returns early when `f` returns `true`.
fn shell(m: usize, r: i64, f: &mut impl FnMut(&[i64]) -> bool) -> bool {
    if m == 0 {
        return r == 0 && f(&[]);
    }
    if r == 0 {
        return f(&vec![0; m]);
    }
    let mut x = vec![-r; m];
    loop {
        if x.iter().any(|v| v.abs() == r) && f(&x) {
            return true;
        }
        let mut i = m;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if x[i] < r {
                x[i] += 1;
                for v in x.iter_mut().skip(i + 1) {
                    *v = -r;
                }
                break;
            }
        }
    }
}

/// Integer zero of `<coeffs>`: the first `n - 1` coordinates run over shells
/// of increasing max-norm up to `height`, the last one is solved for.
pub fn brute_isotropy_rational(
    coeffs: &[BigRational],
    budget: &SearchBudget,
) -> Option<Vec<BigInt>> {
    let n = coeffs.len();
    if n < 2 {
        return None;
    }
    let c = integer_coeffs(coeffs)?;
    let deadline = budget.deadline();
    let cn = c[n - 1];
    let mut found = None;
    let mut steps = 0u64;
    for r in 0..=budget.height as i64 {
        let hit = shell(n - 1, r, &mut |x: &[i64]| {
            steps += 1;
            if steps.is_multiple_of(4096) && expired(deadline) {
                return true;
            }
            let mut s: i128 = 0;
            for (ci, xi) in c.iter().zip(x) {
                match ci
                    .checked_mul(*xi as i128 * *xi as i128)
                    .and_then(|t| s.checked_add(t))
                {
                    Some(v) => s = v,
                    None => return false,
                }
            }
            if -s % cn != 0 {
                return false;
            }
            let m = -s / cn;
            if m < 0 || (m == 0 && r == 0) {
                return false;
            }
            let z = m.sqrt();
            if z * z != m {
                return false;
            }
            let mut v: Vec<BigInt> = x.iter().map(|&t| BigInt::from(t)).collect();
            v.push(BigInt::from(z));
            found = Some(v);
            true
        });
        if hit {
            break;
        }
    }
    found
}

/// Searches for a zero of `q` within the budget. Over `Q` the search is as in
/// [`brute_isotropy_rational`]; over `Q(t)` and `Q_p(t)` entries run over
/// `a + b t` with `|a|, |b| <= height`. Returned vectors evaluate to zero
/// exactly (checked before returning).
pub fn brute_isotropy(q: &QuadraticForm, budget: &SearchBudget) -> Result<Option<Vec<String>>> {
    let f = q.field();
    match f {
        Field::Rationals => {
            let c: Vec<BigRational> = q
                .coeffs()
                .iter()
                .map(|e| f.as_rational(e).expect("rational"))
                .collect();
            Ok(brute_isotropy_rational(&c, budget)
                .map(|v| v.iter().map(|x| x.to_string()).collect()))
        }
        Field::Function { p: None, var, .. } => Ok(brute_polynomial(f, var, q.coeffs(), budget)),
        _ => Err(Error::Unsupported(format!(
            "brute isotropy over {}",
            f.spec()
        ))),
    }
}

fn brute_polynomial(
    f: &Field,
    var: &str,
    coeffs: &[Element],
    budget: &SearchBudget,
) -> Option<Vec<String>> {
    let n = coeffs.len();
    let h = budget.height as i64;
    let deadline = budget.deadline();
    let entries: Vec<String> = {
        let mut out = vec!["0".to_string()];
        for r in 1..=h {
            for a in -r..=r {
                for b in -r..=r {
                    if a.abs().max(b.abs()) == r {
                        out.push(format!("{a} + {b}*{var}"));
                    }
                }
            }
        }
        out
    };
    let vals: Vec<Value> = entries
        .iter()
        .map(|s| f.parse_value(s).expect("polynomial literal"))
        .collect();
    let mut idx = vec![0usize; n];
    let mut steps = 0u64;
    loop {
        steps += 1;
        if steps.is_multiple_of(1024) && expired(deadline) {
            return None;
        }
        if idx.iter().any(|&i| i != 0) {
            let x: Vec<Value> = idx.iter().map(|&i| vals[i].clone()).collect();
            if f.v_is_zero(&f.eval_diagonal(coeffs, &x)) {
                return Some(idx.iter().map(|&i| f.fmt_value(&vals[i])).collect());
            }
        }
        let mut k = n;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            if idx[k] + 1 < vals.len() {
                idx[k] += 1;
                idx[k + 1..].iter_mut().for_each(|i| *i = 0);
                break;
            }
        }
    }
}

// ------------------------------------------------------------ p-adic searches

fn val_big(n: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

fn inv_mod_i128(a: i128, m: i128) -> Option<i128> {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m))
}

/// `c = p^v u` with `v` reduced mod 2: returns `(v mod 2, u mod p^k)`.
fn normalize_at(c: &BigRational, p: u64, k: u32) -> (u32, u64) {
    let (vn, vd) = (val_big(c.numer(), p), val_big(c.denom(), p));
    let pb = BigInt::from(p);
    let num = c.numer() / pb.pow(vn);
    let den = c.denom() / pb.pow(vd);
    let m = (p as i128).pow(k);
    let nm = (num % BigInt::from(m)).to_i128().expect("reduced");
    let dm = (den % BigInt::from(m)).to_i128().expect("reduced");
    let u = (nm.rem_euclid(m) * inv_mod_i128(dm, m).expect("p-adic unit")).rem_euclid(m);
    (((vn as i64 - vd as i64).rem_euclid(2)) as u32, u as u64)
}

fn vmod(x: u64, p: u64, k: u32) -> u32 {
    if x == 0 {
        return k;
    }
    let mut x = x;
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// Hilbert symbol `(a, b)_p` by search: `+1` iff `z^2 = a x^2 + b y^2` has a
/// primitive solution mod `p^k` that Hensel's lemma lifts.
pub fn brute_symbol(a: &BigRational, b: &BigRational, p: u64, budget: &SearchBudget) -> i8 {
    let k = if p == 2 {
        budget.precision.max(5)
    } else {
        budget.precision.max(3)
    };
    let m = p.pow(k);
    let coeff = |c: &BigRational| {
        let (v, u) = normalize_at(c, p, k);
        (u as u128 * p.pow(v) as u128 % m as u128) as u64
    };
    let (ca, cb) = (coeff(a), coeff(b));
    let cm = m - 1;
    let mut roots: Vec<Vec<u64>> = vec![Vec::new(); m as usize];
    for z in 0..m {
        roots[((z as u128 * z as u128) % m as u128) as usize].push(z);
    }
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % m as u128) as u64;
    // Hensel: some coordinate with v(2 c_i x_i) = e and 2e + 1 <= k
    let ok = |c: u64, x: u64| {
        let e = vmod(mulm(mulm(2, c), x), p, k);
        2 * e < k
    };
    for x in 0..m {
        for y in 0..m {
            let rhs = (mulm(ca, mulm(x, x)) + mulm(cb, mulm(y, y))) % m;
            for &z in &roots[rhs as usize] {
                if x % p == 0 && y % p == 0 && z % p == 0 {
                    continue;
                }
                if ok(ca, x) || ok(cb, y) || ok(cm, z) {
                    return 1;
                }
            }
        }
    }
    -1
}

/// `true` when `<coeffs>` has no primitive zero mod `p^k`, which proves it
/// anisotropic over `Q_p`. Coefficients are first reduced mod squares.
pub fn no_primitive_zero_mod(p: u64, coeffs: &[BigRational], k: u32) -> bool {
    let n = coeffs.len();
    if n == 0 {
        return true;
    }
    let m = p.pow(k);
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % m as u128) as u64;
    let c: Vec<u64> = coeffs
        .iter()
        .map(|c| {
            let (v, u) = normalize_at(c, p, k);
            mulm(u, p.pow(v))
        })
        .collect();
    let last = c[n - 1];
    let (mut any, mut unit) = (vec![false; m as usize], vec![false; m as usize]);
    for z in 0..m {
        let v = mulm(last, mulm(z, z)) as usize;
        any[v] = true;
        if z % p != 0 {
            unit[v] = true;
        }
    }
    let mut x = vec![0u64; n - 1];
    loop {
        let s = x
            .iter()
            .zip(&c)
            .fold(0u64, |s, (xi, ci)| (s + mulm(*ci, mulm(*xi, *xi))) % m);
        let need = ((m - s) % m) as usize;
        let primitive = x.iter().any(|v| v % p != 0);
        if (primitive && any[need]) || (!primitive && unit[need]) {
            return false;
        }
        let mut i = n - 1;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            x[i] += 1;
            if x[i] < m {
                break;
            }
            x[i] = 0;
        }
    }
}

/// Anisotropy over `Q_p`, `p` odd, by splitting into residue forms and
/// enumerating them over `F_p`.
pub fn springer_anisotropic_odd(p: u64, coeffs: &[BigRational]) -> bool {
    let mut parts: [Vec<u64>; 2] = [Vec::new(), Vec::new()];
    for c in coeffs {
        let (v, u) = normalize_at(c, p, 1);
        parts[v as usize].push(u);
    }
    let f = FiniteField::new(p).expect("odd prime");
    parts.iter().all(|r| {
        ff_exhaustive(&f, r)
            .map(|t| t.zero.is_none())
            .unwrap_or(false)
    })
}

// ------------------------------------------------------------ finite fields

/// Ground truth for a diagonal form over `F_q`.
#[derive(Clone, Debug, PartialEq)]
pub struct FfTable {
    pub q: u64,
    /// First nonzero zero in lexicographic order of the internal encoding.
    pub zero: Option<Vec<u64>>,
    /// All values taken at nonzero vectors.
    pub values: BTreeSet<u64>,
}

/// Enumerates every vector of `F_q^n`; refuses above `2^22` vectors.
pub fn ff_exhaustive(f: &FiniteField, coeffs: &[u64]) -> Result<FfTable> {
    let q = f.order();
    let n = coeffs.len();
    let total = (q as f64).powi(n as i32);
    if total > (1u64 << 22) as f64 {
        return Err(Error::Unsupported(format!(
            "{q}^{n} vectors is beyond exhaustive range"
        )));
    }
    let mut zero = None;
    let mut values = BTreeSet::new();
    let mut x = vec![0u64; n];
    loop {
        if x.iter().any(|&v| v != 0) {
            let val = x
                .iter()
                .zip(coeffs)
                .fold(0, |s, (xi, ci)| f.add(s, f.mul(*ci, f.mul(*xi, *xi))));
            values.insert(val);
            if val == 0 && zero.is_none() {
                zero = Some(x.clone());
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(FfTable { q, zero, values });
            }
            i -= 1;
            x[i] += 1;
            if x[i] < q {
                break;
            }
            x[i] = 0;
        }
    }
}

/// Isotropy over `F_q` by enumeration; for `n > 3` a zero among the first
/// three coordinates is searched first.
fn ff_isotropic(f: &FiniteField, coeffs: &[u64]) -> Result<bool> {
    if coeffs.len() > 3 && ff_exhaustive(f, &coeffs[..3])?.zero.is_some() {
        return Ok(true);
    }
    Ok(ff_exhaustive(f, coeffs)?.zero.is_some())
}

// ------------------------------------------------------------ towers

/// Isotropy over `F_q((x_1))...((x_n))` of a form whose entries are
/// monomials: recursive residue splitting down to `F_q`, then enumeration.
pub fn tower_isotropic(field: &Field, coeffs: &[Element]) -> Result<bool> {
    let Some((TowerBase::Finite(ff), vars)) = field.tower_parts() else {
        return Err(Error::Unsupported(format!(
            "tower oracle needs an F_q tower, got {}",
            field.spec()
        )));
    };
    let mut items = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        let Element::Mono(m) = c else {
            return Err(Error::Invalid("tower element expected".into()));
        };
        let Scalar::Fq(u) = m.unit else {
            return Err(Error::Invalid("finite unit expected".into()));
        };
        items.push((u, m.exps.clone()));
    }
    tower_rec(ff, vars.len(), &items)
}

fn tower_rec(f: &FiniteField, depth: usize, items: &[(u64, Vec<i64>)]) -> Result<bool> {
    if depth == 0 {
        let units: Vec<u64> = items.iter().map(|(u, _)| *u).collect();
        return ff_isotropic(f, &units);
    }
    for parity in 0..2 {
        let sub: Vec<(u64, Vec<i64>)> = items
            .iter()
            .filter(|(_, e)| e[depth - 1].rem_euclid(2) == parity)
            .map(|(u, e)| (*u, e[..depth - 1].to_vec()))
            .collect();
        if !sub.is_empty() && tower_rec(f, depth - 1, &sub)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `x` is a value of `<coeffs>` over an `F_q` tower iff `<coeffs, -x>` is
/// isotropic.
pub fn tower_represents(field: &Field, coeffs: &[Element], x: &Element) -> Result<bool> {
    let mut ext = coeffs.to_vec();
    ext.push(field.neg(x));
    tower_isotropic(field, &ext)
}

/// First `(a/d, b/d)` with `(a/d)^2 + (b/d)^2 = n` and `0 <= a <= b <= height`,
/// `1 <= d <= height`.
pub fn brute_two_squares(n: &BigRational, height: i64) -> Option<(BigRational, BigRational)> {
    for d in 1..=height {
        for a in 0..=height {
            for b in a..=height {
                let s = BigRational::new(BigInt::from(a * a + b * b), BigInt::from(d * d));
                if &s == n {
                    return Some((
                        BigRational::new(a.into(), d.into()),
                        BigRational::new(b.into(), d.into()),
                    ));
                }
            }
        }
    }
    None
}

/// Sum of two integer squares by the factorization criterion: no prime
/// `p = 3 mod 4` divides `n` to an odd power.
pub fn two_squares_by_factoring(n: u64) -> bool {
    if n == 0 {
        return true;
    }
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if p % 4 == 3 && e % 2 == 1 {
            return false;
        }
        p += 1;
    }
    !(m > 1 && m % 4 == 3)
}

/// All coefficients share one sign, i.e. the form is definite over R.
pub fn same_sign(coeffs: &[BigRational]) -> bool {
    coeffs.iter().all(|c| c.is_positive()) || coeffs.iter().all(|c| c.is_negative())
}
