//! Dedekind eta, the discriminant function, `j`, Siegel functions and eta quotients.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::apfloat::{pi, ApComplex, ApFloat};
use crate::arith::{factorize, gcd};
use crate::error::{Error, Result};
use crate::galois::Mat2;
use crate::quadratic::SurdPoint;

/// Working precision: results are accurate to about `2^-(bits - guard_bits)` relative error.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PrecisionCtx {
    bits: u32,
    guard_bits: u32,
}

impl PrecisionCtx {
    pub const DEFAULT_GUARD: u32 = 32;

    pub fn new(bits: u32, guard_bits: u32) -> Result<Self> {
        if bits < 64 || guard_bits < 32 {
            return Err(Error::InvalidPrecision { bits, guard_bits });
        }
        Ok(PrecisionCtx { bits, guard_bits })
    }

    /// `bits` (clamped to at least 64) with the default guard.
    pub fn with_bits(bits: u32) -> Self {
        PrecisionCtx {
            bits: bits.max(64),
            guard_bits: Self::DEFAULT_GUARD,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard_bits
    }

    /// Precision of internal intermediate values.
    pub fn working(&self) -> u32 {
        self.bits + self.guard_bits
    }

    pub fn doubled(&self) -> Self {
        PrecisionCtx {
            bits: self.bits * 2,
            guard_bits: self.guard_bits,
        }
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The Dedekind sum `s(d, c)` for `c >= 1`, `gcd(d, c) = 1`, by reciprocity.
pub fn dedekind_sum(d: i64, c: i64) -> Result<BigRational> {
    if c < 1 || gcd(d, c) != 1 {
        return Err(Error::NotCoprime { a: d, b: c });
    }
    let mut acc = BigRational::zero();
    let mut sign = 1i64;
    let (mut a, mut b) = (d.rem_euclid(c), c);
    // s(a, b) + s(b, a) = -1/4 + (a/b + b/a + 1/(ab)) / 12
    while a != 0 {
        let term = rat(-1, 4) + (rat(a, b) + rat(b, a) + rat(1, a * b)) / rat(12, 1);
        if sign > 0 {
            acc += term;
        } else {
            acc -= term;
        }
        sign = -sign;
        (a, b) = (b.rem_euclid(a), a);
    }
    Ok(acc)
}

/// `s(d, c)` by the defining sawtooth sum; quadratic in `c`.
pub fn dedekind_sum_direct(d: i64, c: i64) -> Result<BigRational> {
    if c < 1 || gcd(d, c) != 1 {
        return Err(Error::NotCoprime { a: d, b: c });
    }
    let saw = |x: BigRational| -> BigRational {
        if x.is_integer() {
            BigRational::zero()
        } else {
            &x - x.floor() - rat(1, 2)
        }
    };
    Ok((1..c).map(|k| saw(rat(k, c)) * saw(rat(k * d, c))).sum())
}

/// A point of the upper half-plane that can be moved into the standard fundamental domain.
pub trait EvalPoint: Clone {
    /// `(z', gamma, c z + d)` with `gamma * z = z'` in the fundamental domain.
    fn reduce_fd(&self, prec: u32) -> Result<(ApComplex, Mat2, ApComplex)>;
    fn to_complex(&self, prec: u32) -> ApComplex;
    /// `k * z` for a positive integer `k`.
    fn scaled(&self, k: u64) -> Self;
}

impl EvalPoint for SurdPoint {
    fn reduce_fd(&self, prec: u32) -> Result<(ApComplex, Mat2, ApComplex)> {
        let (z, g) = self.reduce()?;
        let (re, im) = self.automorphy_factor(g.c, g.d);
        let f = surd_to_complex(&re, &im, self.radicand(), prec);
        Ok((z.to_complex(prec), g, f))
    }

    fn to_complex(&self, prec: u32) -> ApComplex {
        SurdPoint::to_complex(self, prec)
    }

    fn scaled(&self, k: u64) -> Self {
        self.scale(k)
    }
}

fn surd_to_complex(re: &BigRational, im: &BigRational, radicand: u64, prec: u32) -> ApComplex {
    let w = prec + 8;
    let root = ApFloat::from_int(radicand, w).sqrt();
    ApComplex::new(
        ApFloat::from_ratio(re, prec),
        (&ApFloat::from_ratio(im, w) * &root).with_prec(prec),
    )
}

impl EvalPoint for ApComplex {
    fn reduce_fd(&self, prec: u32) -> Result<(ApComplex, Mat2, ApComplex)> {
        if self.im.signum() <= 0 {
            return Err(Error::NotInUpperHalfPlane);
        }
        let mut z = self.with_prec(prec);
        let mut g = Mat2::identity();
        let one = ApFloat::one(prec);
        for _ in 0..10_000 {
            let k = z.re.round();
            if !k.is_zero() {
                let k = k.to_i64().ok_or(Error::Overflow)?;
                z = ApComplex::new(&z.re - &ApFloat::from_int(k, prec), z.im.clone());
                g = Mat2::new(1, -k, 0, 1).checked_mul(&g)?;
            }
            if z.norm_sqr() < one {
                z = -z.recip();
                g = Mat2::new(0, -1, 1, 0).checked_mul(&g)?;
            } else {
                break;
            }
        }
        let z0 = self.with_prec(prec);
        let f = &z0.scale(&ApFloat::from_int(g.c, prec))
            + &ApComplex::from_real(ApFloat::from_int(g.d, prec));
        Ok((z, g, f))
    }

    fn to_complex(&self, prec: u32) -> ApComplex {
        self.with_prec(prec)
    }

    fn scaled(&self, k: u64) -> Self {
        self.scale(&ApFloat::from_int(k, self.prec()))
    }
}

/// `exp(2 pi i x z)` for rational `x`.
fn q_power(z: &ApComplex, x: &BigRational, prec: u32) -> ApComplex {
    let w = prec + 16;
    let two_pi = pi(w).mul_pow2(1);
    let xf = ApFloat::from_ratio(x, w);
    let arg = z.with_prec(w).scale(&(&two_pi * &xf)).mul_i();
    arg.exp().with_prec(prec)
}

/// Upper bound for `log2 |q|` at `z`.
fn log2_abs_q(z: &ApComplex) -> f64 {
    -2.0 * core::f64::consts::PI * z.im.to_f64() / core::f64::consts::LN_2
}

/// `q^(1/24) * sum_n (-1)^n q^(n(3n-1)/2)` without any reduction of `z`.
pub fn eta_unreduced(z: &ApComplex, ctx: &PrecisionCtx) -> Result<ApComplex> {
    if z.im.signum() <= 0 {
        return Err(Error::NotInUpperHalfPlane);
    }
    let w = ctx.working() + 8;
    let lq = log2_abs_q(z);
    let target = -f64::from(w) - 8.0;
    let q = q_power(z, &BigRational::one(), w);
    let q3 = &q.square() * &q;
    let mut sum = ApComplex::one(w);
    // lo = q^{n(3n-1)/2}, qn = q^n, step = q^{3n-2}
    let mut lo = ApComplex::one(w);
    let mut qn = ApComplex::one(w);
    let mut step = q.clone();
    let mut n = 1u64;
    loop {
        let exp_lo = n * (3 * n - 1) / 2;
        if (exp_lo as f64) * lq < target {
            break;
        }
        lo = &lo * &step;
        qn = &qn * &q;
        let pair = &lo + &(&lo * &qn);
        sum = if n % 2 == 1 {
            &sum - &pair
        } else {
            &sum + &pair
        };
        step = &step * &q3;
        n += 1;
        if n > 1_000_000 {
            return Err(Error::NoConvergence {
                bits: w,
                residual_log2: lq,
            });
        }
    }
    let pre = q_power(z, &rat(1, 24), w);
    Ok((&pre * &sum).with_prec(ctx.working()))
}

/// `eps(gamma) * sqrt(c z + d)` with `eta(gamma z) = eps(gamma) sqrt(c z + d) eta(z)`.
pub fn eta_multiplier(g: &Mat2, factor: &ApComplex, prec: u32) -> Result<ApComplex> {
    let (g, factor) = if g.c < 0 || (g.c == 0 && g.d < 0) {
        (g.neg(), -factor)
    } else {
        (*g, factor.clone())
    };
    if g.c == 0 {
        return Ok(ApComplex::cis_pi_rational(&rat(g.b, 12), prec));
    }
    let phase = rat(g.a + g.d, 12 * g.c) - dedekind_sum(g.d, g.c)? - rat(1, 4);
    Ok(&ApComplex::cis_pi_rational(&phase, prec) * &factor.sqrt())
}

/// Dedekind eta with reduction to the fundamental domain.
pub fn eta<P: EvalPoint>(point: &P, ctx: &PrecisionCtx) -> Result<ApComplex> {
    let w = ctx.working() + 8;
    let (z, g, factor) = point.reduce_fd(w)?;
    let e = eta_unreduced(&z, &PrecisionCtx::with_bits(w))?;
    let m = eta_multiplier(&g, &factor, w)?;
    Ok((&e / &m).with_prec(ctx.working()))
}

/// `Delta = (2 pi)^12 eta^24`.
pub fn delta<P: EvalPoint>(point: &P, ctx: &PrecisionCtx) -> Result<ApComplex> {
    let w = ctx.working() + 8;
    let e = eta(point, &PrecisionCtx::with_bits(w))?;
    let c = pi(w).mul_pow2(1).powi(12);
    Ok(e.powi(24).scale(&c).with_prec(ctx.working()))
}

/// `j = (2^8 (eta(2z)/eta(z))^16 + (eta(z)/eta(2z))^8)^3`.
pub fn j_invariant<P: EvalPoint>(point: &P, ctx: &PrecisionCtx) -> Result<ApComplex> {
    let w = ctx.working() + 16;
    let (z, _, _) = point.reduce_fd(w)?;
    let sub = PrecisionCtx::with_bits(w);
    let e1 = eta(&z, &sub)?;
    let e2 = eta(&z.scaled(2), &sub)?;
    let x = (&e2 / &e1).powi(8);
    let s = &x.square().mul_pow2(8) + &x.recip();
    Ok((&s.square() * &s).with_prec(ctx.working()))
}

/// `prefactor * prod_d eta(d z)^(m_d)`, with `prefactor = base^(exp_num / common_denom)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    pub level: u64,
    pub exponents: BTreeMap<u64, i64>,
    pub prefactor_base: u64,
    pub prefactor_exp_num: i64,
    pub common_denom: i64,
}

impl EtaQuotientSpec {
    /// A quotient with prefactor 1.
    pub fn from_exponents(level: u64, exponents: &[(u64, i64)]) -> Self {
        let exponents = exponents.iter().copied().filter(|&(_, m)| m != 0).collect();
        EtaQuotientSpec {
            level,
            exponents,
            prefactor_base: 1,
            prefactor_exp_num: 0,
            common_denom: 1,
        }
    }

    /// The prefactor as an exact integer.
    pub fn prefactor(&self) -> Result<BigInt> {
        let (q, r) = self.prefactor_exp_num.div_rem(&self.common_denom);
        if r != 0 && self.prefactor_base != 1 {
            return Err(Error::DegenerateInput("non-integral prefactor exponent"));
        }
        if q < 0 {
            return Err(Error::DegenerateInput("negative prefactor exponent"));
        }
        Ok(num_traits::pow(
            BigInt::from(self.prefactor_base),
            q as usize,
        ))
    }
}

/// The level-N eta quotient `nu^(12 mu / g) prod_S eta(N/P_S z)^(24 (-1)^|S| mu / g)`
/// with `g = gcd(24, P_N)`.
pub fn build_eta_quotient(n: u64) -> Result<EtaQuotientSpec> {
    if n < 2 {
        return Err(Error::InvalidConductor(n as i64));
    }
    let fac = factorize(n);
    let primes: Vec<u64> = fac.iter().map(|&(p, _)| p).collect();
    let prime_power = primes.len() == 1;
    let mu: i64 = if prime_power && primes[0] % 8 == 1 {
        2
    } else {
        1
    };
    let nu = if prime_power { primes[0] } else { 1 };
    let p_n: u64 = primes.iter().map(|p| p - 1).product();
    let g = gcd(24, p_n as i64);
    let mut exponents: BTreeMap<u64, i64> = BTreeMap::new();
    for mask in 0u32..(1 << primes.len()) {
        let p_s: u64 = (0..primes.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| primes[i])
            .product();
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        *exponents.entry(n / p_s).or_default() += 24 * sign * mu / g;
    }
    exponents.retain(|_, m| *m != 0);
    Ok(EtaQuotientSpec {
        level: n,
        exponents,
        prefactor_base: nu,
        prefactor_exp_num: 12 * mu,
        common_denom: g,
    })
}

/// Outcome of the three modularity conditions on an eta quotient.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct OnoReport {
    /// `sum m_d = 0`.
    pub weight_zero: bool,
    /// `sum d m_d = 0 mod 24`.
    pub order_at_infinity: bool,
    /// `sum (N/d) m_d = 0 mod 24`.
    pub order_at_zero: bool,
    /// `prod d^(m_d)` is a rational square.
    pub square_character: bool,
}

impl OnoReport {
    pub fn passes(&self) -> bool {
        self.weight_zero && self.order_at_infinity && self.order_at_zero && self.square_character
    }
}

pub fn check_ono_conditions(spec: &EtaQuotientSpec) -> OnoReport {
    let n = spec.level as i128;
    let ms = || spec.exponents.iter().map(|(&d, &m)| (d as i128, m as i128));
    let mut prime_exps: BTreeMap<u64, i64> = BTreeMap::new();
    for (&d, &m) in &spec.exponents {
        for (p, e) in factorize(d) {
            *prime_exps.entry(p).or_default() += i64::from(e) * m;
        }
    }
    OnoReport {
        weight_zero: ms().map(|(_, m)| m).sum::<i128>() == 0,
        order_at_infinity: ms().map(|(d, m)| d * m).sum::<i128>() % 24 == 0,
        order_at_zero: ms().all(|(d, _)| n % d == 0)
            && ms().map(|(d, m)| (n / d) * m).sum::<i128>() % 24 == 0,
        square_character: prime_exps.values().all(|e| e % 2 == 0),
    }
}

pub fn eval_eta_quotient<P: EvalPoint>(
    spec: &EtaQuotientSpec,
    point: &P,
    ctx: &PrecisionCtx,
) -> Result<ApComplex> {
    let w = ctx.working() + 16;
    let sub = PrecisionCtx::with_bits(w);
    let mut factors = Vec::with_capacity(spec.exponents.len() + 1);
    factors.push(ApComplex::from_real(ApFloat::from_int(
        spec.prefactor()?,
        w,
    )));
    for (&d, &m) in &spec.exponents {
        factors.push(eta(&point.scaled(d), &sub)?.powi(m));
    }
    Ok(crate::apfloat::product(&factors, w).with_prec(ctx.working()))
}

/// An index `[r1, r2]` of a Siegel function, not in `Z^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SiegelIndex {
    r1: BigRational,
    r2: BigRational,
}

impl SiegelIndex {
    pub fn new(r1: BigRational, r2: BigRational) -> Result<Self> {
        if r1.is_integer() && r2.is_integer() {
            return Err(Error::IntegralSiegelIndex);
        }
        Ok(SiegelIndex { r1, r2 })
    }

    /// `[a/n, b/n]`.
    pub fn from_fractions(a: i64, b: i64, n: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConductor(0));
        }
        Self::new(rat(a, n), rat(b, n))
    }

    pub fn r1(&self) -> &BigRational {
        &self.r1
    }

    pub fn r2(&self) -> &BigRational {
        &self.r2
    }

    /// Least common denominator of the two entries.
    pub fn denominator(&self) -> BigInt {
        self.r1.denom().lcm(self.r2.denom())
    }

    /// The row vector `[r1, r2] * m`.
    pub fn act(&self, m: &Mat2) -> Result<Self> {
        let i = |v: i64| BigRational::from_integer(v.into());
        Self::new(
            &self.r1 * i(m.a) + &self.r2 * i(m.c),
            &self.r1 * i(m.b) + &self.r2 * i(m.d),
        )
    }

    pub fn neg(&self) -> Self {
        SiegelIndex {
            r1: -&self.r1,
            r2: -&self.r2,
        }
    }

    /// Both entries moved into `[0, 1)`.
    pub fn normalized(&self) -> Self {
        SiegelIndex {
            r1: &self.r1 - self.r1.floor(),
            r2: &self.r2 - self.r2.floor(),
        }
    }
}

/// The Siegel function
/// `-q^(B/2) e^(pi i r2 (r1 - 1)) (1 - q^r1 e^(2 pi i r2)) prod_n (1 - q^(n + r1) e^(2 pi i r2)) (1 - q^(n - r1) e^(-2 pi i r2))`
/// with `B = r1^2 - r1 + 1/6`.
pub fn siegel<P: EvalPoint>(
    index: &SiegelIndex,
    point: &P,
    ctx: &PrecisionCtx,
) -> Result<ApComplex> {
    let w = ctx.working() + 16;
    let z = point.to_complex(w);
    if z.im.signum() <= 0 {
        return Err(Error::NotInUpperHalfPlane);
    }
    let (r1, r2) = (&index.r1, &index.r2);
    let lq = log2_abs_q(&z);
    let r1f = r1.to_f64().unwrap_or(0.0);
    let target = -f64::from(w) - 10.0;

    let b2 = r1 * r1 - r1 + rat(1, 6);
    let lead = q_power(&z, &(b2 / rat(2, 1)), w);
    let phase = ApComplex::cis_pi_rational(&(r2 * (r1 - BigRational::one())), w);

    // u = q^r1 e^(2 pi i r2)
    let two_pi = pi(w).mul_pow2(1);
    let arg =
        &z.scale(&ApFloat::from_ratio(r1, w)) + &ApComplex::from_real(ApFloat::from_ratio(r2, w));
    let u = arg.scale(&two_pi).mul_i().exp();
    let u_inv = u.recip();
    let q = q_power(&z, &BigRational::one(), w);
    let one = ApComplex::one(w);

    let mut factors = Vec::new();
    factors.push(&one - &u);
    let mut qn = q.clone();
    let mut n = 1u64;
    loop {
        let worst = (n as f64 - r1f.abs()) * lq;
        if n as f64 > r1f.abs() + 1.0 && worst < target {
            break;
        }
        factors.push(&one - &(&qn * &u));
        factors.push(&one - &(&qn * &u_inv));
        qn = &qn * &q;
        n += 1;
        if n > 1_000_000 {
            return Err(Error::NoConvergence {
                bits: w,
                residual_log2: lq,
            });
        }
    }
    let prod = crate::apfloat::product(&factors, w);
    Ok((-(&(&lead * &phase) * &prod)).with_prec(ctx.working()))
}

/// Exponent of the leading `q`-power of `g_[r1, r2]`.
pub fn siegel_leading_exponent(index: &SiegelIndex) -> BigRational {
    (&index.r1 * &index.r1 - &index.r1 + rat(1, 6)) / rat(2, 1)
}
