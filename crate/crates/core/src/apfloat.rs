//! Binary arbitrary-precision reals and complex numbers.
//!
//! An [`ApFloat`] is `mant * 2^exp` with the mantissa rounded to at most
//! `prec` bits (round half up). Binary operations work at the larger of the
//! two operand precisions. There is no NaN or infinity: division by zero and
//! square roots of negative reals panic, so no non-finite value can escape.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Floor of log2(10) scaled by 2^16, used to size decimal conversions.
const LOG2_10_Q16: i64 = 217_706;

#[derive(Clone, Debug)]
pub struct ApFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

impl ApFloat {
    fn raw(mut mant: BigInt, mut exp: i64, prec: u32) -> Self {
        if mant.is_zero() {
            return ApFloat { mant, exp: 0, prec };
        }
        let bits = mant.bits();
        if bits > u64::from(prec) {
            let sh = bits - u64::from(prec);
            let half = BigInt::one() << (sh - 1);
            mant = (mant + half) >> sh;
            exp += sh as i64;
        }
        ApFloat { mant, exp, prec }
    }

    pub fn zero(prec: u32) -> Self {
        ApFloat {
            mant: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn one(prec: u32) -> Self {
        ApFloat {
            mant: BigInt::one(),
            exp: 0,
            prec,
        }
    }

    pub fn from_int<T: Into<BigInt>>(v: T, prec: u32) -> Self {
        Self::raw(v.into(), 0, prec)
    }

    /// `mant * 2^exp`, rounded to `prec` bits.
    pub fn from_parts(mant: BigInt, exp: i64, prec: u32) -> Self {
        Self::raw(mant, exp, prec)
    }

    pub fn from_ratio(r: &BigRational, prec: u32) -> Self {
        let num = Self::raw(r.numer().clone(), 0, prec + 8);
        let den = Self::raw(r.denom().clone(), 0, prec + 8);
        (&num / &den).with_prec(prec)
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        assert!(x.is_finite(), "non-finite f64");
        if x == 0.0 {
            return Self::zero(prec);
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1i64 };
        let exponent = ((bits >> 52) & 0x7ff) as i64;
        let fraction = bits & 0x000f_ffff_ffff_ffff;
        let (m, e) = if exponent == 0 {
            (fraction, -1074)
        } else {
            (fraction | 0x0010_0000_0000_0000, exponent - 1075)
        };
        Self::raw(BigInt::from(sign) * BigInt::from(m), e, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::raw(self.mant.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        ApFloat {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Multiplication by `2^k`; exact.
    pub fn mul_pow2(&self, k: i64) -> Self {
        ApFloat {
            mant: self.mant.clone(),
            exp: self.exp + k,
            prec: self.prec,
        }
    }

    /// The integer `m` with `2^(m-1) <= |self| < 2^m`, `None` for zero.
    pub fn magnitude(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64)
        }
    }

    /// Nearest `f64` (truncated mantissa); saturates to 0 / ±inf outside the f64 range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let (m, e) = if bits > 62 {
            (&self.mant >> ((bits - 62) as u64), self.exp + bits - 62)
        } else {
            (self.mant.clone(), self.exp)
        };
        let m = m.to_i64().unwrap_or(0) as f64;
        if e > 2100 {
            return if m > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
        }
        if e < -2200 {
            return 0.0;
        }
        let half = (e / 2) as i32;
        let rest = (e - e / 2) as i32;
        m * pow2_f64(half) * pow2_f64(rest)
    }

    /// Round to the nearest integer (ties up).
    pub fn round(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << (self.exp as u64)
        } else {
            let sh = (-self.exp) as u64;
            let half = BigInt::one() << (sh - 1);
            (&self.mant + half) >> sh
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << (self.exp as u64)
        } else {
            &self.mant >> ((-self.exp) as u64)
        }
    }

    pub fn recip(&self) -> Self {
        &ApFloat::one(self.prec) / self
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn powi(&self, n: i64) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut base = self.clone();
        let mut acc = ApFloat::one(self.prec);
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Square root of a non-negative value.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "square root of a negative real");
        if self.is_zero() {
            return self.clone();
        }
        let want = 2 * i64::from(self.prec) + 4;
        let bits = self.mant.bits() as i64;
        let mut sh = (want - bits).max(0);
        if (self.exp - sh).rem_euclid(2) != 0 {
            sh += 1;
        }
        let scaled = (&self.mant << (sh as u64)).sqrt();
        Self::raw(scaled, (self.exp - sh) / 2, self.prec)
    }

    /// `e^self`.
    pub fn exp(&self) -> Self {
        let prec = self.prec;
        let Some(top) = self.magnitude() else {
            return ApFloat::one(prec);
        };
        let halvings = (top + 10).max(0) as u32;
        let w = prec + halvings + 24;
        let y = self.with_prec(w).mul_pow2(-i64::from(halvings));
        let mut sum = ApFloat::one(w);
        let mut term = ApFloat::one(w);
        let mut k = 1i64;
        loop {
            term = &(&term * &y) / &ApFloat::from_int(k, w);
            match term.magnitude() {
                Some(m) if m >= -(i64::from(w) + 4) => sum = &sum + &term,
                _ => break,
            }
            k += 1;
        }
        for _ in 0..halvings {
            sum = sum.square();
        }
        sum.with_prec(prec)
    }

    /// `(cos self, sin self)`.
    pub fn cos_sin(&self) -> (Self, Self) {
        let prec = self.prec;
        if self.is_zero() {
            return (ApFloat::one(prec), ApFloat::zero(prec));
        }
        let top = self.magnitude().unwrap_or(0).max(0) as u32;
        let wr = prec + top + 24;
        let two_pi = pi(wr).mul_pow2(1);
        let x = self.with_prec(wr);
        let turns = (&x / &two_pi).round();
        let r = &x - &(&two_pi * &ApFloat::from_int(turns, wr));
        let halvings = 12u32;
        let w = prec + halvings + 24;
        let y = r.with_prec(w).mul_pow2(-i64::from(halvings));
        let mut c = ApFloat::one(w);
        let mut s = ApFloat::zero(w);
        let mut term = ApFloat::one(w);
        let mut k = 1i64;
        loop {
            term = &(&term * &y) / &ApFloat::from_int(k, w);
            match term.magnitude() {
                Some(m) if m >= -(i64::from(w) + 4) => {}
                _ => break,
            }
            match k % 4 {
                1 => s = &s + &term,
                2 => c = &c - &term,
                3 => s = &s - &term,
                _ => c = &c + &term,
            }
            k += 1;
        }
        for _ in 0..halvings {
            let c2 = &c.square() - &s.square();
            s = (&c * &s).mul_pow2(1);
            c = c2;
        }
        (c.with_prec(prec), s.with_prec(prec))
    }

    fn cmp_value(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (ta, tb) = (self.magnitude().unwrap(), other.magnitude().unwrap());
        if ta != tb {
            let by_mag = ta.cmp(&tb);
            return if sa > 0 { by_mag } else { by_mag.reverse() };
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << ((self.exp - e) as u64);
        let b = &other.mant << ((other.exp - e) as u64);
        a.cmp(&b)
    }

    /// Decimal rendering with `digits` significant digits, positional notation.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return String::from("0");
        }
        let top = self.magnitude().unwrap();
        // floor(log10 |x|) estimate, corrected below
        let mut k = digits as i64 - 1 - (((top - 1) << 16) / LOG2_10_Q16);
        let mut m = scaled_decimal(&self.abs(), k);
        for _ in 0..8 {
            let len = m.to_str_radix(10).len() as i64;
            if len == digits as i64 {
                break;
            }
            k += digits as i64 - len;
            m = scaled_decimal(&self.abs(), k);
        }
        if m.to_str_radix(10).len() > digits {
            k -= 1;
            m = scaled_decimal(&self.abs(), k);
        }
        let s = m.to_str_radix(10);
        let mut out = String::new();
        if self.is_negative() {
            out.push('-');
        }
        let len = s.len() as i64;
        if k <= 0 {
            out.push_str(&s);
            for _ in 0..(-k) {
                out.push('0');
            }
        } else if k >= len {
            out.push_str("0.");
            for _ in 0..(k - len) {
                out.push('0');
            }
            out.push_str(&s);
        } else {
            let split = (len - k) as usize;
            out.push_str(&s[..split]);
            out.push('.');
            out.push_str(&s[split..]);
        }
        out
    }
}

/// round(|x| * 10^k) for a non-negative x.
fn scaled_decimal(x: &ApFloat, k: i64) -> BigInt {
    let p = x.prec + 16 + (k.unsigned_abs() as u32).saturating_mul(4);
    let ten = ApFloat::from_int(BigInt::from(10u32).pow(k.unsigned_abs() as u32), p);
    let v = if k >= 0 {
        &x.with_prec(p) * &ten
    } else {
        &x.with_prec(p) / &ten
    };
    v.round()
}

fn pow2_f64(e: i32) -> f64 {
    if e >= 0 {
        let mut v = 1.0f64;
        for _ in 0..e.min(1100) {
            v *= 2.0;
        }
        v
    } else {
        let mut v = 1.0f64;
        for _ in 0..(-e).min(1100) {
            v *= 0.5;
        }
        v
    }
}

/// Pi to `prec` bits (Machin's formula in fixed point).
pub fn pi(prec: u32) -> ApFloat {
    let w = prec + 32;
    let one = BigInt::one() << w;
    let atan_inv = |k: u64| -> BigInt {
        let k2 = BigInt::from(k * k);
        let mut term = &one / BigInt::from(k);
        let mut sum = term.clone();
        let mut n = 1u64;
        loop {
            term /= &k2;
            if term.is_zero() {
                break;
            }
            let t = &term / BigInt::from(2 * n + 1);
            if n % 2 == 1 {
                sum -= t;
            } else {
                sum += t;
            }
            n += 1;
        }
        sum
    };
    let v = atan_inv(5) * 16 - atan_inv(239) * 4;
    ApFloat::raw(v, -i64::from(w), prec)
}

impl PartialEq for ApFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl PartialOrd for ApFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

fn add_impl(a: &ApFloat, b: &ApFloat) -> ApFloat {
    let prec = a.prec.max(b.prec);
    if a.is_zero() {
        return b.with_prec(prec);
    }
    if b.is_zero() {
        return a.with_prec(prec);
    }
    let (ta, tb) = (a.magnitude().unwrap(), b.magnitude().unwrap());
    let slack = i64::from(prec) + 2;
    if ta > tb + slack {
        return a.with_prec(prec);
    }
    if tb > ta + slack {
        return b.with_prec(prec);
    }
    let e = a.exp.min(b.exp);
    let ma = &a.mant << ((a.exp - e) as u64);
    let mb = &b.mant << ((b.exp - e) as u64);
    ApFloat::raw(ma + mb, e, prec)
}

impl<'a> Add<&'a ApFloat> for &'a ApFloat {
    type Output = ApFloat;
    fn add(self, rhs: &ApFloat) -> ApFloat {
        add_impl(self, rhs)
    }
}

impl<'a> Sub<&'a ApFloat> for &'a ApFloat {
    type Output = ApFloat;
    fn sub(self, rhs: &ApFloat) -> ApFloat {
        add_impl(self, &-rhs)
    }
}

impl<'a> Mul<&'a ApFloat> for &'a ApFloat {
    type Output = ApFloat;
    fn mul(self, rhs: &ApFloat) -> ApFloat {
        ApFloat::raw(
            &self.mant * &rhs.mant,
            self.exp + rhs.exp,
            self.prec.max(rhs.prec),
        )
    }
}

impl<'a> Div<&'a ApFloat> for &'a ApFloat {
    type Output = ApFloat;
    fn div(self, rhs: &ApFloat) -> ApFloat {
        assert!(!rhs.is_zero(), "division by zero");
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() {
            return ApFloat::zero(prec);
        }
        let sh = (i64::from(prec) + 2 + rhs.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let q = (&self.mant << (sh as u64)) / &rhs.mant;
        ApFloat::raw(q, self.exp - sh - rhs.exp, prec)
    }
}

impl Neg for &ApFloat {
    type Output = ApFloat;
    fn neg(self) -> ApFloat {
        ApFloat {
            mant: -&self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl Neg for ApFloat {
    type Output = ApFloat;
    fn neg(self) -> ApFloat {
        ApFloat {
            mant: -self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl fmt::Display for ApFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or(((self.prec as usize) * 3 / 10).max(1));
        f.write_str(&self.to_decimal(digits))
    }
}

/// A complex number with [`ApFloat`] parts.
#[derive(Clone, Debug, PartialEq)]
pub struct ApComplex {
    pub re: ApFloat,
    pub im: ApFloat,
}

impl ApComplex {
    pub fn new(re: ApFloat, im: ApFloat) -> Self {
        ApComplex { re, im }
    }

    pub fn from_real(re: ApFloat) -> Self {
        let prec = re.prec;
        ApComplex {
            re,
            im: ApFloat::zero(prec),
        }
    }

    pub fn zero(prec: u32) -> Self {
        ApComplex {
            re: ApFloat::zero(prec),
            im: ApFloat::zero(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        ApComplex::from_real(ApFloat::one(prec))
    }

    pub fn i(prec: u32) -> Self {
        ApComplex {
            re: ApFloat::zero(prec),
            im: ApFloat::one(prec),
        }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        ApComplex {
            re: ApFloat::from_f64(re, prec),
            im: ApFloat::from_f64(im, prec),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec.max(self.im.prec)
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        ApComplex {
            re: self.re.with_prec(prec),
            im: self.im.with_prec(prec),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ApComplex {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn norm_sqr(&self) -> ApFloat {
        &self.re.square() + &self.im.square()
    }

    pub fn abs(&self) -> ApFloat {
        self.norm_sqr().sqrt()
    }

    /// The larger of the component magnitudes (see [`ApFloat::magnitude`]).
    pub fn magnitude(&self) -> Option<i64> {
        match (self.re.magnitude(), self.im.magnitude()) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn scale(&self, k: &ApFloat) -> Self {
        ApComplex {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        ApComplex {
            re: self.re.mul_pow2(k),
            im: self.im.mul_pow2(k),
        }
    }

    pub fn mul_i(&self) -> Self {
        ApComplex {
            re: -&self.im,
            im: self.re.clone(),
        }
    }

    pub fn square(&self) -> Self {
        let re = &self.re.square() - &self.im.square();
        let im = (&self.re * &self.im).mul_pow2(1);
        ApComplex { re, im }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        ApComplex {
            re: &self.re / &n,
            im: -(&self.im / &n),
        }
    }

    pub fn powi(&self, n: i64) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut base = self.clone();
        let mut acc = ApComplex::one(self.prec());
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Principal square root (branch cut on the negative real axis, `sqrt(-a) = i*sqrt(a)`).
    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let r = self.abs();
        if !self.re.is_negative() {
            let u = (&r + &self.re).mul_pow2(-1).sqrt();
            let v = &self.im / &u.mul_pow2(1);
            ApComplex { re: u, im: v }
        } else {
            let mut v = (&r - &self.re).mul_pow2(-1).sqrt();
            if self.im.is_negative() {
                v = -v;
            }
            let u = &self.im / &v.mul_pow2(1);
            ApComplex { re: u, im: v }
        }
    }

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        let (c, s) = self.im.cos_sin();
        ApComplex {
            re: &m * &c,
            im: &m * &s,
        }
    }

    /// `e^{i theta}` for real theta.
    pub fn cis(theta: &ApFloat) -> Self {
        let (c, s) = theta.cos_sin();
        ApComplex { re: c, im: s }
    }

    /// `e^{pi i r}` for rational `r`, reduced exactly modulo 2 first.
    pub fn cis_pi_rational(r: &BigRational, prec: u32) -> Self {
        let two = BigRational::from_integer(BigInt::from(2));
        let mut t = r - (r / &two).floor() * &two;
        if t > BigRational::one() {
            t -= &two;
        }
        if t.is_zero() {
            return ApComplex::one(prec);
        }
        let w = prec + 8;
        let theta = &pi(w) * &ApFloat::from_ratio(&t, w);
        ApComplex::cis(&theta).with_prec(prec)
    }

    /// Decimal rendering `a + b*i` with `digits` significant digits per part.
    pub fn to_decimal(&self, digits: usize) -> String {
        let mut s = self.re.to_decimal(digits);
        if self.im.is_negative() {
            s.push_str(" - ");
            s.push_str(&self.im.abs().to_decimal(digits));
        } else {
            s.push_str(" + ");
            s.push_str(&self.im.to_decimal(digits));
        }
        s.push_str("*i");
        s
    }
}

impl<'a> Add<&'a ApComplex> for &'a ApComplex {
    type Output = ApComplex;
    fn add(self, rhs: &ApComplex) -> ApComplex {
        ApComplex {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a ApComplex> for &'a ApComplex {
    type Output = ApComplex;
    fn sub(self, rhs: &ApComplex) -> ApComplex {
        ApComplex {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a ApComplex> for &'a ApComplex {
    type Output = ApComplex;
    fn mul(self, rhs: &ApComplex) -> ApComplex {
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        ApComplex { re, im }
    }
}

impl<'a> Div<&'a ApComplex> for &'a ApComplex {
    type Output = ApComplex;
    fn div(self, rhs: &ApComplex) -> ApComplex {
        let n = rhs.norm_sqr();
        let re = &(&self.re * &rhs.re) + &(&self.im * &rhs.im);
        let im = &(&self.im * &rhs.re) - &(&self.re * &rhs.im);
        ApComplex {
            re: &re / &n,
            im: &im / &n,
        }
    }
}

impl Neg for &ApComplex {
    type Output = ApComplex;
    fn neg(self) -> ApComplex {
        ApComplex {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Neg for ApComplex {
    type Output = ApComplex;
    fn neg(self) -> ApComplex {
        -&self
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &$ty) -> $ty { (&self).$m(rhs) }
        }
    )*};
}

forward_owned!(ApFloat, Add add, Sub sub, Mul mul, Div div);
forward_owned!(ApComplex, Add add, Sub sub, Mul mul, Div div);

/// Product of complex numbers, balanced to keep operand sizes even.
pub fn product(values: &[ApComplex], prec: u32) -> ApComplex {
    let mut layer: Vec<ApComplex> = values.to_vec();
    if layer.is_empty() {
        return ApComplex::one(prec);
    }
    while layer.len() > 1 {
        let mut next = Vec::with_capacity(layer.len().div_ceil(2));
        for pair in layer.chunks(2) {
            next.push(if pair.len() == 2 {
                &pair[0] * &pair[1]
            } else {
                pair[0].clone()
            });
        }
        layer = next;
    }
    layer.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &ApFloat, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn pi_digits() {
        let p = pi(200);
        assert_eq!(
            &p.to_decimal(40),
            "3.141592653589793238462643383279502884197"
        );
    }

    #[test]
    fn rounding_of_negative_mantissa() {
        let x = ApFloat::from_parts(BigInt::from(-7), 0, 2);
        // -7 is -3.5 * 2: the tie rounds up to -3 * 2
        assert_eq!(x.round(), BigInt::from(-6));
        assert_eq!(ApFloat::from_f64(-2.5, 64).round(), BigInt::from(-2));
        assert_eq!(ApFloat::from_f64(-2.5, 64).floor(), BigInt::from(-3));
    }

    #[test]
    fn exp_and_trig_against_f64() {
        let p = 128;
        for &x in &[0.5f64, -3.25, 10.0, -40.0, 1e-9] {
            assert!(
                close(&ApFloat::from_f64(x, p).exp(), x.exp(), 1e-14),
                "exp {x}"
            );
            let (c, s) = ApFloat::from_f64(x, p).cos_sin();
            assert!((c.to_f64() - x.cos()).abs() < 1e-14, "cos {x}");
            assert!((s.to_f64() - x.sin()).abs() < 1e-14, "sin {x}");
        }
    }

    #[test]
    fn exp_of_one_matches_e() {
        let e = ApFloat::one(256).exp();
        assert_eq!(
            &e.to_decimal(50),
            "2.7182818284590452353602874713526624977572470937000"
        );
    }

    #[test]
    fn sqrt_two() {
        let r = ApFloat::from_int(2, 256).sqrt();
        assert_eq!(
            &r.to_decimal(40),
            "1.414213562373095048801688724209698078570"
        );
        let err = &(&r * &r) - &ApFloat::from_int(2, 256);
        assert!(err.magnitude().unwrap() < -250);
    }

    #[test]
    fn principal_complex_sqrt() {
        let p = 128;
        let z = ApComplex::from_f64(-4.0, 0.0, p).sqrt();
        assert!(close(&z.re, 0.0, 1e-30) && close(&z.im, 2.0, 1e-30));
        let z = ApComplex::from_f64(-4.0, -1e-30, p).sqrt();
        assert!(z.im.is_negative());
        let w = ApComplex::from_f64(3.0, -4.0, p);
        let r = w.sqrt();
        assert!(close(&r.re, 2.0, 1e-30) && close(&r.im, -1.0, 1e-30));
    }

    #[test]
    fn cis_pi_rational_reduces_exactly() {
        let r = BigRational::new(BigInt::from(25), BigInt::from(12));
        let z = ApComplex::cis_pi_rational(&r, 128);
        let expect = core::f64::consts::PI / 12.0;
        assert!((z.re.to_f64() - expect.cos()).abs() < 1e-15);
        assert!((z.im.to_f64() - expect.sin()).abs() < 1e-15);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(ApFloat::from_int(287496, 64).to_decimal(8), "287496.00");
        assert_eq!(ApFloat::from_f64(-0.0625, 64).to_decimal(3), "-0.0625");
        assert_eq!(ApFloat::from_int(1234567, 64).to_decimal(3), "1230000");
    }

    #[test]
    fn ordering() {
        let a = ApFloat::from_f64(1.5, 64);
        let b = ApFloat::from_f64(-2.0, 64);
        assert!(b < a);
        assert!(ApFloat::from_f64(1e-300, 64) > ApFloat::zero(64));
        assert!(ApFloat::from_f64(-3.0, 64) < ApFloat::from_f64(-2.0, 64));
    }
}
