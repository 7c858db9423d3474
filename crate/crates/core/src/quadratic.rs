//! Imaginary quadratic fields, their orders, and exact CM points.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::apfloat::{ApComplex, ApFloat};
use crate::arith::{factorize, is_prime, is_squarefree};
use crate::error::{Error, Result};
use crate::galois::Mat2;

/// An imaginary quadratic field, identified by its fundamental discriminant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadField {
    disc: i64,
    tau: SurdPoint,
    unit_count: u32,
}

impl QuadField {
    /// Validates `d` as a negative fundamental discriminant.
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 {
            return Err(Error::InvalidDiscriminant {
                d,
                reason: "must be negative",
            });
        }
        let m = d.rem_euclid(4);
        let abs = d.unsigned_abs();
        let tau = match m {
            1 => {
                if !is_squarefree(abs) {
                    return Err(Error::InvalidDiscriminant {
                        d,
                        reason: "not squarefree",
                    });
                }
                SurdPoint::from_parts(ratio(-1, 2), ratio(1, 2), abs)
            }
            0 => {
                let q = d / 4;
                if !matches!(q.rem_euclid(4), 2 | 3) {
                    return Err(Error::InvalidDiscriminant {
                        d,
                        reason: "d/4 must be 2 or 3 mod 4",
                    });
                }
                if !is_squarefree(q.unsigned_abs()) {
                    return Err(Error::InvalidDiscriminant {
                        d,
                        reason: "d/4 not squarefree",
                    });
                }
                SurdPoint::from_parts(BigRational::zero(), ratio(1, 2), abs)
            }
            _ => {
                return Err(Error::InvalidDiscriminant {
                    d,
                    reason: "must be 0 or 1 mod 4",
                })
            }
        };
        let unit_count = match d {
            -4 => 4,
            -3 => 6,
            _ => 2,
        };
        Ok(QuadField {
            disc: d,
            tau,
            unit_count,
        })
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// The generator `tau_K` of the ring of integers.
    pub fn tau(&self) -> &SurdPoint {
        &self.tau
    }

    /// `|O_K^x|`.
    pub fn unit_count(&self) -> u32 {
        self.unit_count
    }

    /// `(b, c)` with `X^2 + bX + c` the minimal polynomial of `tau_K`.
    pub fn tau_min_poly(&self) -> (i64, i64) {
        if self.disc.rem_euclid(4) == 1 {
            (1, (1 - self.disc) / 4)
        } else {
            (0, -self.disc / 4)
        }
    }

    pub fn class(&self) -> FieldClass {
        FieldClass::of(self.disc)
    }
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    QuadField::new(d).is_ok()
}

/// The order of conductor `N` in a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderSpec {
    field: QuadField,
    conductor: u64,
    factorization: Vec<(u64, u32)>,
}

impl OrderSpec {
    pub fn new(field: QuadField, conductor: u64) -> Result<Self> {
        if conductor < 2 {
            return Err(Error::InvalidConductor(conductor as i64));
        }
        let factorization = factorize(conductor);
        Ok(OrderSpec {
            field,
            conductor,
            factorization,
        })
    }

    pub fn from_disc(d: i64, conductor: u64) -> Result<Self> {
        Self::new(QuadField::new(d)?, conductor)
    }

    /// The order `Z[sqrt(-n)]`, i.e. conductor `f` with `-4n = f^2 d_K`.
    pub fn for_norm_form(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConductor(0));
        }
        let big = 4 * n as i64;
        let mut f = crate::arith::isqrt(4 * n) as i64;
        while f >= 1 {
            if big % (f * f) == 0 && is_fundamental_discriminant(-big / (f * f)) {
                return Self::from_disc(-big / (f * f), f as u64);
            }
            f -= 1;
        }
        Err(Error::InvalidConductor(n as i64))
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn factorization(&self) -> &[(u64, u32)] {
        &self.factorization
    }

    /// Discriminant `N^2 d_K` of the order.
    pub fn disc(&self) -> i64 {
        (self.conductor * self.conductor) as i64 * self.field.disc
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Kronecker symbol `(a / n)`, extended multiplicatively to any nonzero `n`.
///
/// Only prime `n` is relied upon elsewhere; at `n = 2` it is 0 for even `a`,
/// 1 for `a = ±1 mod 8` and -1 for `a = ±3 mod 8`.
pub fn kronecker_symbol(a: i64, n: i64) -> i32 {
    if n == 0 {
        return i32::from(a.unsigned_abs() == 1);
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    // Jacobi symbol (a / n), n odd positive
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        core::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// `|G|` for `G = (O_K / p^r)^x / (image of O_K^x)(image of Z^x)`.
pub fn group_order_g(field: &QuadField, p: u64, r: u32) -> u64 {
    debug_assert!(is_prime(p) && r >= 1);
    let chi = kronecker_symbol(field.disc, p as i64) as i64;
    let num = 2 * p.pow(r - 1) as i64 * (p as i64 - chi);
    (num / i64::from(field.unit_count)) as u64
}

/// `|G|` by enumerating `O_K / p^r` as `x + y tau_K`.
pub fn group_order_by_enumeration(field: &QuadField, p: u64, r: u32) -> u64 {
    let m = p.pow(r) as i64;
    let (b, c) = field.tau_min_poly();
    let mul = |(x1, y1): (i64, i64), (x2, y2): (i64, i64)| {
        // tau^2 = -b tau - c
        let yy = y1 * y2;
        (
            (x1 * x2 - c * yy).rem_euclid(m),
            (x1 * y2 + x2 * y1 - b * yy).rem_euclid(m),
        )
    };
    let norm = |(x, y): (i64, i64)| x * x - b * x * y + c * y * y;
    let units_count = (0..m)
        .flat_map(|x| (0..m).map(move |y| (x, y)))
        .filter(|&e| crate::arith::gcd(norm(e), m) == 1)
        .count() as u64;
    let global: Vec<(i64, i64)> = match field.disc() {
        -4 => alloc::vec![(1, 0), (0, 1)],
        -3 => alloc::vec![(1, 0), (0, 1), (-1, -1)],
        _ => alloc::vec![(1, 0)],
    };
    let mut sub = alloc::collections::BTreeSet::new();
    for t in (1..m).filter(|&t| crate::arith::gcd(t, m) == 1) {
        for &u in &global {
            let v = mul((t, 0), (u.0.rem_euclid(m), u.1.rem_euclid(m)));
            sub.insert(v);
            sub.insert(((-v.0).rem_euclid(m), (-v.1).rem_euclid(m)));
        }
    }
    if m == 2 {
        sub.insert((1, 0));
    }
    units_count / sub.len() as u64
}

/// Per-prime outcome of the generation hypothesis on `|G|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub holds: bool,
    /// `(p, r, |G|)` for each prime power `p^r || N`.
    pub per_prime: Vec<(u64, u32, u64)>,
}

/// True iff `|G| > 2` for every prime power exactly dividing the conductor.
pub fn hypothesis_holds(order: &OrderSpec) -> HypothesisReport {
    let per_prime: Vec<_> = order
        .factorization
        .iter()
        .map(|&(p, r)| (p, r, group_order_g(&order.field, p, r)))
        .collect();
    let holds = per_prime.iter().all(|&(_, _, g)| g > 2);
    HypothesisReport { holds, per_prime }
}

/// The six field classes distinguished by the `|G| <= 2` classification.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldClass {
    Gaussian,
    Eisenstein,
    OneMod24,
    NineOrSeventeenMod24,
    ThirteenMod24,
    Otherwise,
}

impl FieldClass {
    pub const ALL: [FieldClass; 6] = [
        FieldClass::Gaussian,
        FieldClass::Eisenstein,
        FieldClass::OneMod24,
        FieldClass::NineOrSeventeenMod24,
        FieldClass::ThirteenMod24,
        FieldClass::Otherwise,
    ];

    pub fn of(d: i64) -> FieldClass {
        match d {
            -4 => FieldClass::Gaussian,
            -3 => FieldClass::Eisenstein,
            _ => match d.rem_euclid(24) {
                1 => FieldClass::OneMod24,
                9 | 17 => FieldClass::NineOrSeventeenMod24,
                13 => FieldClass::ThirteenMod24,
                _ => FieldClass::Otherwise,
            },
        }
    }

    /// The prime powers `(p, r)` with `|G| <= 2` as tabulated for this class.
    pub fn tabulated(self) -> &'static [(u64, u32)] {
        match self {
            FieldClass::Gaussian => &[(2, 1), (2, 2), (3, 1), (5, 1)],
            FieldClass::Eisenstein => &[(2, 1), (2, 2), (3, 1), (5, 1), (7, 1)],
            FieldClass::OneMod24 => &[(2, 1), (2, 2), (3, 1)],
            FieldClass::NineOrSeventeenMod24 => &[(2, 1), (2, 2)],
            FieldClass::ThirteenMod24 => &[(2, 1), (3, 1)],
            FieldClass::Otherwise => &[(2, 1)],
        }
    }

    /// Table heading.
    pub fn label(self) -> &'static str {
        match self {
            FieldClass::Gaussian => "Q(sqrt(-1))",
            FieldClass::Eisenstein => "Q(sqrt(-3))",
            FieldClass::OneMod24 => "d_K = 1 mod 24",
            FieldClass::NineOrSeventeenMod24 => "d_K = 9,17 mod 24",
            FieldClass::ThirteenMod24 => "d_K = 13 mod 24",
            FieldClass::Otherwise => "otherwise",
        }
    }
}

impl fmt::Display for FieldClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub const TABLE1_DISC_BOUND: i64 = 200;
pub const TABLE1_PRIME_POWER_BOUND: u64 = 50;

/// Prime powers `p^r <= bound` with `|G| <= 2`, as `(p, r)` sorted by `(p, r)`.
pub fn small_group_prime_powers(field: &QuadField, bound: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in (2..=bound).filter(|&p| is_prime(p)) {
        let mut r = 1;
        let mut pr = p;
        while pr <= bound {
            if group_order_g(field, p, r) <= 2 {
                out.push((p, r));
            }
            r += 1;
            pr *= p;
        }
    }
    out
}

/// One column of the `|G| <= 2` classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table1Column {
    pub class: FieldClass,
    /// Union over the scanned discriminants of the `(p, r)` with `|G| <= 2`.
    pub entries: Vec<(u64, u32)>,
    /// Whether every scanned discriminant of the class gave the same set.
    pub uniform: bool,
    /// Scanned discriminants, with their individual sets where they differ from `entries`.
    pub discriminants: Vec<i64>,
    pub deviations: Vec<(i64, Vec<(u64, u32)>)>,
}

impl Table1Column {
    /// Uniform and equal to [`FieldClass::tabulated`].
    pub fn matches_tabulated(&self) -> bool {
        self.uniform && self.entries == self.class.tabulated()
    }
}

/// Scans all fundamental `d_K` with `|d_K| <= 200` and prime powers up to 50.
pub fn reproduce_table1() -> Vec<Table1Column> {
    let fields: Vec<QuadField> = (1..=TABLE1_DISC_BOUND)
        .filter_map(|a| QuadField::new(-a).ok())
        .collect();
    FieldClass::ALL
        .iter()
        .map(|&class| {
            let members: Vec<&QuadField> = fields.iter().filter(|f| f.class() == class).collect();
            let sets: Vec<(i64, Vec<(u64, u32)>)> = members
                .iter()
                .map(|f| {
                    (
                        f.disc,
                        small_group_prime_powers(f, TABLE1_PRIME_POWER_BOUND),
                    )
                })
                .collect();
            let mut entries: Vec<(u64, u32)> = sets.iter().flat_map(|(_, s)| s.clone()).collect();
            entries.sort_unstable();
            entries.dedup();
            let deviations: Vec<_> = sets
                .iter()
                .filter(|(_, s)| *s != entries)
                .cloned()
                .collect();
            Table1Column {
                class,
                uniform: deviations.is_empty(),
                discriminants: sets.iter().map(|(d, _)| *d).collect(),
                entries,
                deviations,
            }
        })
        .collect()
}

/// An exact point `re + im * sqrt(radicand) * i` of the upper half-plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurdPoint {
    re: BigRational,
    im: BigRational,
    radicand: u64,
}

impl SurdPoint {
    pub fn new(re: BigRational, im: BigRational, radicand: u64) -> Result<Self> {
        if !im.is_positive() || radicand == 0 {
            return Err(Error::NotInUpperHalfPlane);
        }
        Ok(SurdPoint { re, im, radicand })
    }

    fn from_parts(re: BigRational, im: BigRational, radicand: u64) -> Self {
        SurdPoint { re, im, radicand }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    /// Coefficient of `sqrt(radicand) * i`.
    pub fn im_coeff(&self) -> &BigRational {
        &self.im
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    /// `|z|^2`, exactly.
    pub fn abs_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im * BigRational::from_integer(self.radicand.into())
    }

    pub fn to_complex(&self, prec: u32) -> ApComplex {
        let w = prec + 8;
        let root = ApFloat::from_int(self.radicand, w).sqrt();
        let im = &ApFloat::from_ratio(&self.im, w) * &root;
        ApComplex::new(ApFloat::from_ratio(&self.re, prec), im.with_prec(prec))
    }

    pub fn translate(&self, k: i64) -> SurdPoint {
        SurdPoint {
            re: &self.re + BigRational::from_integer(k.into()),
            im: self.im.clone(),
            radicand: self.radicand,
        }
    }

    /// `k * z` for a positive integer `k`.
    pub fn scale(&self, k: u64) -> SurdPoint {
        let k = BigRational::from_integer(k.into());
        SurdPoint {
            re: &self.re * &k,
            im: &self.im * &k,
            radicand: self.radicand,
        }
    }

    /// Mobius action `(a z + b) / (c z + d)` of an integer matrix with positive determinant.
    pub fn act(&self, m: &Mat2) -> Result<SurdPoint> {
        let det = m.det();
        if det <= 0 {
            return Err(Error::NotInUpperHalfPlane);
        }
        let int = |v: i64| BigRational::from_integer(v.into());
        let (a, b, c, d) = (int(m.a), int(m.b), int(m.c), int(m.d));
        let abs_sq = self.abs_sq();
        let cx_d = &c * &self.re + &d;
        let denom = &cx_d * &cx_d
            + &c * &c * &self.im * &self.im * BigRational::from_integer(self.radicand.into());
        let re = (&a * &c * &abs_sq + (&a * &d + &b * &c) * &self.re + &b * &d) / &denom;
        let im = int(det) * &self.im / &denom;
        Ok(SurdPoint {
            re,
            im,
            radicand: self.radicand,
        })
    }

    /// `c z + d` as an exact pair `(real part, coefficient of sqrt(radicand) i)`.
    pub fn automorphy_factor(&self, c: i64, d: i64) -> (BigRational, BigRational) {
        let c = BigRational::from_integer(c.into());
        (
            &c * &self.re + BigRational::from_integer(d.into()),
            &c * &self.im,
        )
    }

    /// Moves the point into `|Re z| <= 1/2, |z| >= 1`; returns it with the
    /// `gamma` in SL2(Z) satisfying `gamma * self = reduced`.
    pub fn reduce(&self) -> Result<(SurdPoint, Mat2)> {
        let mut z = self.clone();
        let mut gamma = Mat2::identity();
        let half = ratio(1, 2);
        loop {
            let k = (&z.re + &half).floor().to_integer();
            if !k.is_zero() {
                let k: i64 = i64::try_from(&k).map_err(|_| Error::Overflow)?;
                z = z.translate(-k);
                gamma = Mat2::new(1, -k, 0, 1).checked_mul(&gamma)?;
            }
            if z.abs_sq() < BigRational::one() {
                let s = Mat2::new(0, -1, 1, 0);
                z = z.act(&s)?;
                gamma = s.checked_mul(&gamma)?;
            } else {
                return Ok((z, gamma));
            }
        }
    }

    pub fn in_fundamental_domain(&self) -> bool {
        let half = ratio(1, 2);
        self.re.abs() <= half && self.abs_sq() >= BigRational::one()
    }
}

impl fmt::Display for SurdPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt(-{})", self.re, self.im, self.radicand)
    }
}
