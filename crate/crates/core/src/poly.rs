//! Dense integer polynomials.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::apfloat::{ApComplex, ApFloat};
use crate::arith::{factorize, mod_inv, primes_below};
use crate::error::{Error, Result};

/// `c_0 + c_1 X + ... + c_n X^n` with `c_n != 0` (the zero polynomial has no coefficients).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// From ascending coefficients; trailing zeros are dropped.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `prod (X - r)`.
    pub fn from_roots(roots: &[i64]) -> Self {
        roots.iter().fold(Self::from_i64(&[1]), |acc, &r| {
            acc.mul(&Self::from_i64(&[-r, 1]))
        })
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn derivative(&self) -> IntPoly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_mod(&self, x: u64, p: u64) -> u64 {
        let x = u128::from(x % p);
        let p128 = u128::from(p);
        self.reduce_mod(p)
            .iter()
            .rev()
            .fold(0u128, |acc, &c| (acc * x + u128::from(c)) % p128) as u64
    }

    pub fn eval_complex(&self, x: &ApComplex) -> ApComplex {
        let w = x.prec();
        self.coeffs.iter().rev().fold(ApComplex::zero(w), |acc, c| {
            &(&acc * x) + &ApComplex::from_real(ApFloat::from_int(c.clone(), w))
        })
    }

    /// Coefficients reduced into `[0, p)`, ascending; may have trailing zeros.
    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let m = BigInt::from(p);
        self.coeffs
            .iter()
            .map(|c| c.mod_floor(&m).to_u64().unwrap_or(0))
            .collect()
    }

    /// Largest absolute value of a coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_default()
    }

    /// The resultant `Res(self, other)` as the determinant of the Sylvester matrix.
    pub fn resultant(&self, other: &IntPoly) -> Result<BigInt> {
        let (m, n) = match (self.degree(), other.degree()) {
            (Some(m), Some(n)) => (m, n),
            _ => return Err(Error::DegenerateInput("resultant of the zero polynomial")),
        };
        if m + n == 0 {
            return Ok(BigInt::one());
        }
        let size = m + n;
        let mut rows = Vec::with_capacity(size);
        // rows hold descending coefficients shifted right
        for i in 0..n {
            let mut row = vec![BigInt::zero(); size];
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![BigInt::zero(); size];
            for (j, c) in other.coeffs.iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        Ok(bareiss_det(rows))
    }

    /// `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> Result<BigInt> {
        let n = self.degree().ok_or(Error::DegenerateInput(
            "discriminant of the zero polynomial",
        ))?;
        if n == 0 {
            return Err(Error::DegenerateInput("discriminant of a constant"));
        }
        if n == 1 {
            return Ok(BigInt::one());
        }
        let res = self.resultant(&self.derivative())?;
        let d = res / self.leading().unwrap();
        Ok(if (n * (n - 1) / 2) % 2 == 1 { -d } else { d })
    }

    /// Whether the reduction mod the prime `p` has a root, via `gcd(X^p - X, f)`.
    pub fn has_root_mod(&self, p: u64) -> bool {
        let f = fp::trim(self.reduce_mod(p));
        match f.len() {
            0 => return true,
            1 => return false,
            _ => {}
        }
        let h = fp::pow_mod(&[0, 1], p, &f, p);
        let g = fp::gcd(&f, &fp::sub(&h, &[0, 1], p), p);
        g.len() > 1
    }

    /// Irreducibility over `F_q` (Rabin's test); `None` when `q` divides the leading coefficient.
    pub fn is_irreducible_mod(&self, q: u64) -> Option<bool> {
        let n = self.degree()?;
        let mut f = self.reduce_mod(q);
        if f[n] == 0 {
            return None;
        }
        if n == 0 {
            return Some(false);
        }
        let inv = mod_inv(f[n] as i64, q as i64)? as u64;
        for c in f.iter_mut() {
            *c = mulm(*c, inv, q);
        }
        let x = vec![0, 1];
        let frob = |g: &[u64], k: usize| -> Vec<u64> {
            let mut h = g.to_vec();
            for _ in 0..k {
                h = fp::pow_mod(&h, q, &f, q);
            }
            h
        };
        for (p, _) in factorize(n as u64) {
            let h = frob(&x, n / p as usize);
            let diff = fp::sub(&h, &x, q);
            if fp::gcd(&f, &diff, q).len() != 1 {
                return Some(false);
            }
        }
        let h = frob(&x, n);
        Some(fp::trim(fp::sub(&h, &x, q)).is_empty())
    }
}

fn mulm(a: u64, b: u64, q: u64) -> u64 {
    crate::arith::mul_mod(a, b, q)
}

/// Polynomials over `F_q` as ascending coefficient vectors without trailing zeros.
mod fp {
    use super::mulm;
    use crate::arith::{self, mod_inv};
    use alloc::vec;
    use alloc::vec::Vec;

    pub fn trim(mut v: Vec<u64>) -> Vec<u64> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn sub(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        trim((0..n).map(|i| (get(a, i) + q - get(b, i)) % q).collect())
    }

    pub fn rem(a: &[u64], m: &[u64], q: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let m = trim(m.to_vec());
        let dm = m.len() - 1;
        let inv = mod_inv(m[dm] as i64, q as i64).unwrap() as u64;
        while r.len() > dm {
            let k = r.len() - 1 - dm;
            let c = mulm(*r.last().unwrap(), inv, q);
            for (i, &mi) in m.iter().enumerate() {
                r[k + i] = (r[k + i] + q - mulm(c, mi, q)) % q;
            }
            r = trim(r);
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], q: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mulm(x, y, q)) % q;
            }
        }
        rem(&out, m, q)
    }

    pub fn pow_mod(base: &[u64], mut e: u64, m: &[u64], q: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, q);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, m, q);
            }
            b = mul_mod(&b, &b, m, q);
            e >>= 1;
        }
        rem(&acc, m, q)
    }

    /// Monic gcd.
    pub fn gcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, q);
            a = b;
            b = r;
        }
        if let Some(&lc) = a.last() {
            let inv = pow_mod_scalar(lc, q);
            a.iter_mut().for_each(|c| *c = mulm(*c, inv, q));
        }
        a
    }

    fn pow_mod_scalar(a: u64, q: u64) -> u64 {
        arith::pow_mod(a, q - 2, q)
    }
}

/// Fraction-free Gaussian elimination.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// `sign * prod p^e * cofactor`, with all `p` below the trial-division bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i32,
    pub primes: Vec<(u64, u32)>,
    /// Unfactored part, 1 when the factorization is complete.
    pub cofactor: BigInt,
}

pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Trial division by primes below [`TRIAL_DIVISION_BOUND`].
pub fn factor_trial(n: &BigInt) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::DegenerateInput("factorization of zero"));
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut rest = n.abs();
    let mut primes = Vec::new();
    for p in primes_below(TRIAL_DIVISION_BOUND) {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            primes.push((p, e));
        }
    }
    if rest > BigInt::one() {
        if let Some(p) = rest.to_u64().filter(|&p| p < TRIAL_DIVISION_BOUND.pow(2)) {
            primes.push((p, 1));
            rest = BigInt::one();
        }
    }
    Ok(Factorization {
        sign,
        primes,
        cofactor: rest,
    })
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            f.write_str("-")?;
        }
        let mut parts: Vec<String> = self
            .primes
            .iter()
            .map(|&(p, e)| {
                if e == 1 {
                    alloc::format!("{p}")
                } else {
                    alloc::format!("{p}^{e}")
                }
            })
            .collect();
        if !self.cofactor.is_one() || parts.is_empty() {
            parts.push(alloc::format!("{}", self.cofactor));
        }
        f.write_str(&parts.join(" * "))
    }
}

impl fmt::Display for IntPoly {
    /// Descending powers, e.g. `X^6 + 10*X^5 - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => String::from("X"),
                _ => alloc::format!("X^{i}"),
            };
            if i == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn sextic() -> IntPoly {
        IntPoly::from_i64(&[-1, 38, 122, 108, 46, 10, 1])
    }

    #[test]
    fn display_format() {
        assert_eq!(
            sextic().to_string(),
            "X^6 + 10*X^5 + 46*X^4 + 108*X^3 + 122*X^2 + 38*X - 1"
        );
        assert_eq!(IntPoly::from_i64(&[0, -1, 0, 1]).to_string(), "X^3 - X");
        assert_eq!(IntPoly::from_i64(&[3, 0, -2]).to_string(), "-2*X^2 + 3");
        assert_eq!(IntPoly::default().to_string(), "0");
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(
            IntPoly::from_i64(&[1, 0, 1]).discriminant().unwrap(),
            BigInt::from(-4)
        );
        let d = sextic().discriminant().unwrap();
        let expected = BigInt::from(2).pow(10) * BigInt::from(3).pow(6) * BigInt::from(13).pow(5);
        assert_eq!(d, expected);
        assert!(IntPoly::default().discriminant().is_err());
        assert!(IntPoly::from_i64(&[5]).discriminant().is_err());
    }

    #[test]
    fn discriminant_matches_root_product() {
        // disc = prod_{i<j} (r_i - r_j)^2 for monic polynomials with integer roots
        for roots in [
            vec![1, 2, 3],
            vec![-4, 0, 7, 9],
            vec![2, 2, 5],
            vec![0, 1, -1, 3, 6],
        ] {
            let p = IntPoly::from_roots(&roots);
            let mut expected = BigInt::one();
            for i in 0..roots.len() {
                for j in i + 1..roots.len() {
                    expected *= BigInt::from((roots[i] - roots[j]).pow(2));
                }
            }
            assert_eq!(p.discriminant().unwrap(), expected, "{roots:?}");
        }
        // b^2 - 4ac and the cubic formula -4p^3 - 27q^2
        assert_eq!(
            IntPoly::from_i64(&[5, 3, 2]).discriminant().unwrap(),
            BigInt::from(9 - 40)
        );
        assert_eq!(
            IntPoly::from_i64(&[2, -3, 0, 1]).discriminant().unwrap(),
            BigInt::from(108 - 108)
        );
        assert_eq!(
            IntPoly::from_i64(&[1, 1, 0, 1]).discriminant().unwrap(),
            BigInt::from(-4 - 27)
        );
    }

    #[test]
    fn trial_factorization() {
        let f = factor_trial(&BigInt::from(-360)).unwrap();
        assert_eq!(f.sign, -1);
        assert_eq!(f.primes, vec![(2, 3), (3, 2), (5, 1)]);
        assert!(f.cofactor.is_one());
        let big =
            BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64) * BigInt::from(1_000_037u64);
        let f = factor_trial(&(&big * BigInt::from(12))).unwrap();
        assert_eq!(f.primes, vec![(2, 2), (3, 1)]);
        assert_eq!(f.cofactor, big);
        assert_eq!(factor_trial(&BigInt::from(-4)).unwrap().to_string(), "-2^2");
    }

    #[test]
    fn irreducibility_examples() {
        let x2p1 = IntPoly::from_i64(&[1, 0, 1]);
        assert_eq!(x2p1.is_irreducible_mod(3), Some(true));
        assert_eq!(x2p1.is_irreducible_mod(5), Some(false));
        let red = IntPoly::from_roots(&[1, 2]);
        for q in [3, 5, 7, 11] {
            assert_eq!(red.is_irreducible_mod(q), Some(false));
        }
        assert_eq!(
            IntPoly::from_i64(&[1, 1, 1, 0, 0, 1]).is_irreducible_mod(2),
            Some(false)
        );
        assert_eq!(
            IntPoly::from_i64(&[1, 0, 1, 0, 0, 1]).is_irreducible_mod(2),
            Some(true)
        );
        assert_eq!(IntPoly::from_i64(&[1, 3]).is_irreducible_mod(3), None);
    }

    #[test]
    fn root_existence() {
        let x2p1 = IntPoly::from_i64(&[1, 0, 1]);
        assert!(x2p1.has_root_mod(13) && !x2p1.has_root_mod(7));
        for p in primes_below(200).into_iter().skip(1) {
            let f = sextic();
            let scan = (0..p).any(|x| f.eval_mod(x, p) == 0);
            assert_eq!(f.has_root_mod(p), scan, "p={p}");
        }
    }

    fn brute_irreducible(f: &[u64], q: u64) -> bool {
        // no monic factor of degree 1..=n/2, by enumeration
        let f = fp::trim(f.to_vec());
        let n = f.len() - 1;
        for d in 1..=n / 2 {
            let count = q.pow(d as u32);
            for code in 0..count {
                let mut g = Vec::with_capacity(d + 1);
                let mut c = code;
                for _ in 0..d {
                    g.push(c % q);
                    c /= q;
                }
                g.push(1);
                if fp::rem(&f, &g, q).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    proptest! {
        #[test]
        fn rabin_matches_enumeration(coeffs in proptest::collection::vec(0u64..5, 2..6), qi in 0usize..3) {
            let q = [2u64, 3, 5][qi];
            let mut c: Vec<i64> = coeffs.iter().map(|&x| (x % q) as i64).collect();
            c.push(1);
            let p = IntPoly::from_i64(&c);
            let r = p.is_irreducible_mod(q).unwrap();
            prop_assert_eq!(r, brute_irreducible(&p.reduce_mod(q), q));
        }
    }
}
