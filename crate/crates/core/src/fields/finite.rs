//! Finite fields F_q of odd order, q = p^k.
//!
//! Elements are encoded as integers `0..q` whose base-p digits are the
//! coefficients of a polynomial in a fixed primitive element `g`. For k = 1
//! this is ordinary arithmetic mod p.

use crate::error::{Error, Result};

use super::arith;

/// Upper bound on extension-field orders (prime fields may be larger).
pub const MAX_EXTENSION_ORDER: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    k: u32,
    q: u64,
    /// Monic defining polynomial, low to high, length k + 1 (unused for k = 1).
    modulus: Vec<u64>,
    nonsquare: u64,
}

impl FiniteField {
    pub fn new(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::Invalid(format!("q = {q} is not a prime power")))?;
        if p == 2 {
            return Err(Error::Invalid("characteristic 2 is not supported".into()));
        }
        if k > 1 && q > MAX_EXTENSION_ORDER {
            return Err(Error::Unsupported(format!(
                "extension field of order {q} exceeds {MAX_EXTENSION_ORDER}"
            )));
        }
        let mut field = FiniteField {
            p,
            k,
            q,
            modulus: vec![0, 1],
            nonsquare: 0,
        };
        if k > 1 {
            field.modulus = field.find_primitive_modulus();
        }
        field.nonsquare = (1..q)
            .find(|&x| !field.is_square(x))
            .expect("odd-order fields have non-squares");
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// The canonical non-square: least element in encoding order.
    pub fn nonsquare(&self) -> u64 {
        self.nonsquare
    }

    /// The generator `g` of the multiplicative group (p itself for k = 1
    /// is meaningless; callers use it only when k > 1).
    pub fn generator(&self) -> u64 {
        if self.k == 1 {
            self.primitive_root_prime()
        } else {
            self.p
        }
    }

    fn primitive_root_prime(&self) -> u64 {
        let factors = arith::factor_u64(self.q - 1);
        (2..self.q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&(l, _)| self.pow(g, (self.q - 1) / l) != 1)
            })
            .unwrap_or(1)
    }

    fn digits(&self, x: u64) -> Vec<u64> {
        let mut d = Vec::with_capacity(self.k as usize);
        let mut x = x;
        for _ in 0..self.k {
            d.push(x % self.p);
            x /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[u64]) -> u64 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let d: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.undigits(&d)
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.k == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let d: Vec<u64> = self
            .digits(a)
            .iter()
            .map(|x| (self.p - x) % self.p)
            .collect();
        self.undigits(&d)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            return ((a as u128 * b as u128) % self.p as u128) as u64;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % self.p;
            }
        }
        for i in (k..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..k {
                let sub = (c * self.modulus[j]) % self.p;
                prod[i - k + j] = (prod[i - k + j] + self.p - sub) % self.p;
            }
            prod[i] = 0;
        }
        self.undigits(&prod[..k])
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        (a != 0).then(|| self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: u64, b: u64) -> Option<u64> {
        Some(self.mul(a, self.inv(b)?))
    }

    pub fn is_square(&self, a: u64) -> bool {
        a == 0 || self.pow(a, (self.q - 1) / 2) == 1
    }

    /// Square root by Tonelli-Shanks in the multiplicative group.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return Some(0);
        }
        if !self.is_square(a) {
            return None;
        }
        let mut q = self.q - 1;
        let mut s = 0;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let mut m = s;
        let mut c = self.pow(self.nonsquare, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let b = self.pow(c, 1 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r.min(self.neg(r)))
    }

    pub fn minus_one_is_square(&self) -> bool {
        self.q % 4 == 1
    }

    /// Nonzero elements in encoding order.
    pub fn units(&self) -> impl Iterator<Item = u64> {
        1..self.q
    }

    /// Discrete logarithm base `g` (only used for display of k > 1 elements).
    pub fn log(&self, a: u64) -> Option<u64> {
        let g = self.generator();
        let mut x = 1;
        for i in 0..self.q - 1 {
            if x == a {
                return Some(i);
            }
            x = self.mul(x, g);
        }
        None
    }

    pub fn in_prime_field(&self, a: u64) -> bool {
        a < self.p
    }

    /// Literal form: symmetric integers for prime-field elements, `g^i` otherwise.
    pub fn fmt_elem(&self, a: u64) -> String {
        if self.in_prime_field(a) {
            let half = (self.p - 1) / 2;
            if a > half {
                format!("-{}", self.p - a)
            } else {
                a.to_string()
            }
        } else {
            match self.log(a) {
                Some(1) => "g".into(),
                Some(i) => format!("g^{i}"),
                None => "0".into(),
            }
        }
    }

    fn find_primitive_modulus(&self) -> Vec<u64> {
        let k = self.k as usize;
        let factors = arith::factor_u64(self.q - 1);
        let count = self.p.pow(self.k);
        for low in 0..count {
            let mut modulus: Vec<u64> = {
                let mut d = Vec::with_capacity(k + 1);
                let mut x = low;
                for _ in 0..k {
                    d.push(x % self.p);
                    x /= self.p;
                }
                d
            };
            if modulus[0] == 0 {
                continue;
            }
            modulus.push(1);
            let trial = FiniteField {
                p: self.p,
                k: self.k,
                q: self.q,
                modulus: modulus.clone(),
                nonsquare: 0,
            };
            let g = self.p; // the class of x
            if trial.pow(g, self.q - 1) == 1
                && factors
                    .iter()
                    .all(|&(l, _)| trial.pow(g, (self.q - 1) / l) != 1)
            {
                return modulus;
            }
        }
        unreachable!("every finite field has a primitive polynomial")
    }
}

/// Decomposes `q = p^k` with p prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = arith::factor_u64(q);
    (f.len() == 1).then(|| f[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_is_a_field() {
        let f = FiniteField::new(9).unwrap();
        for a in 1..9 {
            let inv = f.inv(a).unwrap();
            assert_eq!(f.mul(a, inv), 1);
        }
        assert!(f.minus_one_is_square());
        let squares: Vec<u64> = (1..9).filter(|&a| f.is_square(a)).collect();
        assert_eq!(squares.len(), 4);
        for a in squares {
            let r = f.sqrt(a).unwrap();
            assert_eq!(f.mul(r, r), a);
        }
        // every element of F_3 is a square in F_9
        assert!((1..3).all(|a| f.is_square(a)));
    }

    #[test]
    fn prime_field_basics() {
        let f = FiniteField::new(7).unwrap();
        assert_eq!(f.nonsquare(), 3);
        assert_eq!(f.fmt_elem(6), "-1");
        assert!(!f.minus_one_is_square());
        assert!(FiniteField::new(15).is_err());
        assert!(FiniteField::new(8).is_err());
    }
}
