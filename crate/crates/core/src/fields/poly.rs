//! Dense univariate polynomials over Q and the rational function field Q(t).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::arith;

/// Coefficients stored from the constant term upward, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `t`.
    pub fn var() -> Self {
        Self::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| arith::rat(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial reports -1.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lc(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Lowest index with a nonzero coefficient (the t-adic valuation).
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut rem = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let lc = d.lc();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &c * b;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.lc();
        self.scale(&(BigRational::one() / lc))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * arith::rat(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Splits a nonzero polynomial as `content * primitive` where the primitive
    /// part has coprime integer coefficients and positive leading coefficient.
    pub fn content_primitive(&self) -> (BigRational, Poly) {
        assert!(!self.is_zero());
        let den_lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den_lcm.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        let prim = Poly::from_coeffs(
            ints.iter()
                .map(|c| BigRational::from_integer(c / &g))
                .collect(),
        );
        (BigRational::new(g, den_lcm), prim)
    }

    /// Yun's square-free factorization of a monic polynomial:
    /// `self = prod_i factors[i]^(i+1)` with each factor monic and square-free.
    pub fn squarefree_factors(&self) -> Vec<Poly> {
        let f = self.monic();
        if f.degree() <= 0 {
            return Vec::new();
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.divrem(&a0).0;
        let mut c = df.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        loop {
            let a = b.gcd(&d);
            out.push(a.clone());
            b = b.divrem(&a).0;
            if b.degree() <= 0 {
                break;
            }
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
        }
        while out.last().is_some_and(|p| p.degree() <= 0) {
            out.pop();
        }
        out
    }

    /// Writes `self = lc * kernel * root^2` with `kernel` monic square-free and
    /// `root` monic.
    pub fn square_decompose(&self) -> (BigRational, Poly, Poly) {
        let lc = self.lc();
        let mut kernel = Poly::one();
        let mut root = Poly::one();
        for (i, f) in self.squarefree_factors().iter().enumerate() {
            let mult = (i + 1) as u32;
            if mult % 2 == 1 {
                kernel = kernel.mul(f);
            }
            root = root.mul(&f.pow(mult / 2));
        }
        (lc, kernel, root)
    }

    pub fn fmt_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a}*{mono}"));
            }
        }
        out
    }
}

/// Rational function in normalized form: numerator and denominator are
/// integer polynomials, coprime in Q[t], with coprime contents, and the
/// denominator has positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let num = num.divrem(&g).0;
        let den = den.divrem(&g).0;
        let (cn, pn) = num.content_primitive();
        let (cd, pd) = den.content_primitive();
        let r = cn / cd;
        RatFunc {
            num: pn.scale(&BigRational::from_integer(r.numer().clone())),
            den: pd.scale(&BigRational::from_integer(r.denom().clone())),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::new(p, Poly::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn var() -> Self {
        Self::from_poly(Poly::var())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        (self.num.is_constant() && self.den.is_constant())
            .then(|| self.num.coeff(0) / self.den.coeff(0))
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> RatFunc {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> RatFunc {
        self.mul(&o.inv())
    }

    pub fn pow(&self, e: i64) -> RatFunc {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = RatFunc::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// t-adic valuation.
    pub fn t_valuation(&self) -> i64 {
        self.num.low_degree().unwrap_or(0) as i64 - self.den.low_degree().unwrap_or(0) as i64
    }

    /// Valuation at infinity: `deg(den) - deg(num)`.
    pub fn degree_valuation(&self) -> i64 {
        self.den.degree() - self.num.degree()
    }

    pub fn fmt_in(&self, var: &str) -> String {
        if self.den.is_one_poly() {
            return self.num.fmt_in(var);
        }
        let num = self.num.fmt_in(var);
        let num = if self.num.is_constant()
            || self.num.coeffs.iter().filter(|c| !c.is_zero()).count() == 1
        {
            num
        } else {
            format!("({num})")
        };
        format!("{num}/({})", self.den.fmt_in(var))
    }
}

impl Poly {
    fn is_one_poly(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_in("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn yun_decomposition() {
        // t * (t + 1)^2 * (t - 2)^3
        let t = Poly::var();
        let f = t
            .mul(&Poly::from_ints(&[1, 1]).pow(2))
            .mul(&Poly::from_ints(&[-2, 1]).pow(3))
            .scale(&arith::rat(5));
        let (lc, kernel, root) = f.square_decompose();
        assert_eq!(lc, arith::rat(5));
        assert_eq!(kernel, t.mul(&Poly::from_ints(&[-2, 1])));
        assert_eq!(
            root,
            Poly::from_ints(&[1, 1]).mul(&Poly::from_ints(&[-2, 1]))
        );
    }

    #[test]
    fn ratfunc_normalizes() {
        let a = RatFunc::new(Poly::from_ints(&[2, 2]), Poly::from_ints(&[4, 0, -4]));
        // (2 + 2t) / (4 - 4t^2) = 1 / (2 - 2t) = -1 / (2t - 2)
        assert_eq!(a.num(), &Poly::from_ints(&[-1]));
        assert_eq!(a.den(), &Poly::from_ints(&[-2, 2]));
        let b = RatFunc::new(Poly::from_ints(&[1, -1]), Poly::from_ints(&[2]));
        assert_eq!(
            a.mul(&b),
            RatFunc::constant(BigRational::new(1.into(), 4.into()))
        );
    }

    #[test]
    fn valuations() {
        let f = RatFunc::new(Poly::var().pow(3), Poly::from_ints(&[1, 1]));
        assert_eq!(f.t_valuation(), 3);
        assert_eq!(f.degree_valuation(), -2);
    }
}
