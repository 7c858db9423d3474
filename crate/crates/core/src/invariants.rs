//! Ring class invariants, their conjugates and exact minimal polynomials.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::apfloat::{product, ApComplex, ApFloat};
use crate::arith::{gcd, isqrt};
use crate::error::{Error, Result};
use crate::galois::{
    class_number_order, conjugate_data_ordered, equivalent_form_prime_to, form_to_datum,
    reduced_forms, t_group, w_group, GaloisDatum, Mat2ModN, RepOrder,
};
use crate::modular::{
    build_eta_quotient, delta, eta, eval_eta_quotient, j_invariant, siegel, EtaQuotientSpec,
    PrecisionCtx, SiegelIndex,
};
use crate::poly::IntPoly;
use crate::quadratic::OrderSpec;

/// Largest allowed distance of a recognized coefficient to its integer, as a power of two.
pub const RECOGNITION_THRESHOLD_LOG2: f64 = -64.0;
pub const MAX_DOUBLINGS: u32 = 6;

/// `128 + 16 deg + 4 N sqrt|d_K|` bits.
pub fn initial_precision(order: &OrderSpec) -> u32 {
    let deg = class_number_order(order.field(), order.conductor()) as u64;
    let n = order.conductor();
    // ceil(4 N sqrt|d_K|) = ceil(sqrt(16 N^2 |d_K|))
    let sq = 16 * n * n * order.field().disc().unsigned_abs();
    let r = isqrt(sq);
    let term = if r * r == sq { r } else { r + 1 };
    (128 + 16 * deg + term) as u32
}

/// How an integer polynomial was recognized from its floating-point expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct RecognitionReport {
    pub precision_used: u32,
    /// log2 of the largest coefficient rounding residual at `precision_used`.
    pub max_rounding_residual_log2: f64,
    pub degree: usize,
    /// Precisions tried, in order.
    pub attempts: Vec<u32>,
}

/// The eta quotient of level N.
pub fn invariant_spec(order: &OrderSpec) -> Result<EtaQuotientSpec> {
    build_eta_quotient(order.conductor())
}

/// The eta quotient evaluated at `tau_K`.
pub fn ring_class_invariant(order: &OrderSpec, ctx: &PrecisionCtx) -> Result<ApComplex> {
    eval_eta_quotient(&invariant_spec(order)?, order.field().tau(), ctx)
}

/// Evaluates `spec` at each conjugate point `lift * tau_Q`.
pub fn conjugates_of(
    spec: &EtaQuotientSpec,
    order: &OrderSpec,
    ctx: &PrecisionCtx,
    rep_order: RepOrder,
) -> Result<Vec<ApComplex>> {
    conjugate_data_ordered(order.field(), order.conductor(), rep_order)?
        .iter()
        .map(|d| eval_eta_quotient(spec, &d.point()?, ctx))
        .collect()
}

pub fn conjugates(order: &OrderSpec, ctx: &PrecisionCtx) -> Result<Vec<ApComplex>> {
    conjugates_of(&invariant_spec(order)?, order, ctx, RepOrder::Smallest)
}

/// Ascending coefficients of `prod (X - r)`.
pub fn expand_roots(roots: &[ApComplex], prec: u32) -> Vec<ApComplex> {
    let mut coeffs = vec![ApComplex::one(prec)];
    for r in roots {
        let mut next = vec![ApComplex::zero(prec); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(c * r);
        }
        coeffs = next;
    }
    coeffs
}

/// Nearest integers and the log2 of the largest residual (real distance or imaginary part).
fn round_coeffs(coeffs: &[ApComplex]) -> (Vec<BigInt>, f64) {
    let mut worst = f64::NEG_INFINITY;
    let ints = coeffs
        .iter()
        .map(|c| {
            let n = c.re.round();
            let prec = c.re.prec();
            let dist = (&c.re - &ApFloat::from_int(n.clone(), prec)).abs();
            for r in [dist, c.im.abs()] {
                if let Some(m) = r.magnitude() {
                    worst = worst.max(m as f64);
                }
            }
            n
        })
        .collect();
    (ints, worst)
}

/// Recognizes `prod (X - r_i)` as an integer polynomial, where `eval(ctx)` yields the roots.
///
/// The precision is doubled until every coefficient lies within `2^-64` of an integer
/// and a second evaluation at twice the precision reproduces the same integers.
pub fn recognize<F>(ctx0: &PrecisionCtx, mut eval: F) -> Result<(IntPoly, RecognitionReport)>
where
    F: FnMut(&PrecisionCtx) -> Result<Vec<ApComplex>>,
{
    let mut ctx = *ctx0;
    let mut attempts = Vec::new();
    let mut last: Option<(Vec<BigInt>, f64)> = None;
    for _ in 0..=MAX_DOUBLINGS {
        attempts.push(ctx.bits());
        let roots = eval(&ctx)?;
        let (ints, resid) = round_coeffs(&expand_roots(&roots, ctx.working()));
        if let Some((prev, prev_resid)) = &last {
            if *prev == ints && *prev_resid < RECOGNITION_THRESHOLD_LOG2 {
                let degree = roots.len();
                let report = RecognitionReport {
                    precision_used: ctx.bits(),
                    max_rounding_residual_log2: resid,
                    degree,
                    attempts,
                };
                return Ok((IntPoly::new(ints), report));
            }
        }
        last = Some((ints, resid));
        ctx = ctx.doubled();
    }
    let residual_log2 = last.map_or(f64::INFINITY, |(_, r)| r);
    Err(Error::NoConvergence {
        bits: ctx.bits() / 2,
        residual_log2,
    })
}

fn default_ctx(order: &OrderSpec, ctx0: Option<&PrecisionCtx>) -> PrecisionCtx {
    ctx0.copied()
        .unwrap_or_else(|| PrecisionCtx::with_bits(initial_precision(order)))
}

/// Minimal polynomial of the ring class invariant, starting at `ctx0` or the default heuristic.
pub fn min_poly(
    order: &OrderSpec,
    ctx0: Option<&PrecisionCtx>,
) -> Result<(IntPoly, RecognitionReport)> {
    min_poly_of(&invariant_spec(order)?, order, ctx0)
}

/// Minimal polynomial of an arbitrary eta quotient over the conjugates of the order.
pub fn min_poly_of(
    spec: &EtaQuotientSpec,
    order: &OrderSpec,
    ctx0: Option<&PrecisionCtx>,
) -> Result<(IntPoly, RecognitionReport)> {
    let ctx = default_ctx(order, ctx0);
    let data = conjugate_data_ordered(order.field(), order.conductor(), RepOrder::Smallest)?;
    let points = data
        .iter()
        .map(GaloisDatum::point)
        .collect::<Result<Vec<_>>>()?;
    recognize(&ctx, |c| {
        points
            .iter()
            .map(|p| eval_eta_quotient(spec, p, c))
            .collect()
    })
}

/// The polynomial `prod (X - j(lift * tau_Q))` over the same conjugate data.
///
/// `j` is invariant under `SL_2(Z)`, so each conjugate equals `j(tau_Q)` and the result is
/// the Hilbert class polynomial of `d_K` raised to the index `[H_O : H_K]`.
pub fn min_poly_j(order: &OrderSpec, ctx0: Option<&PrecisionCtx>) -> Result<IntPoly> {
    let ctx = default_ctx(order, ctx0);
    let data = conjugate_data_ordered(order.field(), order.conductor(), RepOrder::Smallest)?;
    let points = data
        .iter()
        .map(GaloisDatum::point)
        .collect::<Result<Vec<_>>>()?;
    recognize(&ctx, |c| points.iter().map(|p| j_invariant(p, c)).collect()).map(|(p, _)| p)
}

/// Degree check and a search for an irreducibility certificate modulo small primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibilityReport {
    pub degree: usize,
    pub expected_degree: usize,
    /// The first prime `q` modulo which the polynomial is irreducible, if any.
    pub certificate: Option<u64>,
    /// Primes tried, none dividing the discriminant.
    pub tried: Vec<u64>,
}

impl IrreducibilityReport {
    pub fn degree_ok(&self) -> bool {
        self.degree == self.expected_degree
    }
}

pub fn verify_degree_and_irreducibility(
    p: &IntPoly,
    order: &OrderSpec,
) -> Result<IrreducibilityReport> {
    let degree = p
        .degree()
        .ok_or(Error::DegenerateInput("zero polynomial"))?;
    let expected_degree = class_number_order(order.field(), order.conductor());
    let disc = if degree >= 1 {
        p.discriminant()?
    } else {
        BigInt::from(0)
    };
    let mut tried = Vec::new();
    let mut certificate = None;
    let mut q = 1u64;
    // a zero discriminant leaves no admissible prime
    while tried.len() < 10 && degree >= 1 && disc != BigInt::from(0) {
        q += 1;
        if !crate::arith::is_prime(q) || (&disc % BigInt::from(q)) == BigInt::from(0) {
            continue;
        }
        tried.push(q);
        if p.is_irreducible_mod(q) == Some(true) {
            certificate = Some(q);
            break;
        }
    }
    Ok(IrreducibilityReport {
        degree,
        expected_degree,
        certificate,
        tried,
    })
}

/// `g_[0, 1/N](tau_K)^(12N)`, the Siegel-Ramachandra invariant of conductor `N O_K`
/// at the principal class.
pub fn siegel_ramachandra_principal(order: &OrderSpec, ctx: &PrecisionCtx) -> Result<ApComplex> {
    let n = order.conductor() as i64;
    let w = ctx.working() + 32;
    let g = siegel(
        &principal_index(n)?,
        order.field().tau(),
        &PrecisionCtx::with_bits(w),
    )?;
    Ok(g.powi(12 * n).with_prec(ctx.working()))
}

/// The index `[a/N, b/N]` with `1 = (a/N) N tau_K + (b/N) N`, i.e. `[0, 1/N]`.
pub fn principal_index(n: i64) -> Result<SiegelIndex> {
    SiegelIndex::from_fractions(0, 1, n)
}

/// Residuals of the norm identity between Siegel-Ramachandra invariants and `Delta`.
#[derive(Clone, Debug)]
pub struct NormIdentityReport {
    pub lhs: ApComplex,
    pub rhs: ApComplex,
    /// `rhs` rebuilt from `eta` directly, with the `(2 pi)^12` factors cancelled.
    pub rhs_eta: ApComplex,
    /// log2 of `|lhs / rhs - 1|`.
    pub residual_log2: f64,
    /// log2 of `|Im rhs| / |rhs|`.
    pub imag_residual_log2: f64,
    /// log2 of `|rhs_eta / rhs - 1|`.
    pub eta_consistency_log2: f64,
    /// The `t` in `(Z/N)^x / {±1}` indexing the orbit.
    pub orbit: Vec<i64>,
}

/// Representatives of `(Z/N)^x / {±1}`, the scalar part of `<T, tI> / T`.
pub fn norm_orbit(order: &OrderSpec) -> Vec<i64> {
    let n = order.conductor() as i64;
    let t = t_group(order.field(), order.conductor());
    let mut seen: Vec<i64> = Vec::new();
    let mut reps = Vec::new();
    for u in (1..n).filter(|&u| gcd(u, n) == 1) {
        if seen.contains(&u) {
            continue;
        }
        reps.push(u);
        for m in &t {
            if m.b == 0 && m.c == 0 && m.a == m.d {
                seen.push((u * m.a).rem_euclid(n));
            }
        }
    }
    reps
}

fn log2_rel(a: &ApComplex, b: &ApComplex) -> f64 {
    let d = (a - b).abs();
    match (d.magnitude(), b.abs().magnitude()) {
        (None, _) => f64::NEG_INFINITY,
        (Some(x), Some(y)) => (x - y) as f64,
        (Some(x), None) => x as f64,
    }
}

pub fn verify_norm_identity(order: &OrderSpec, ctx: &PrecisionCtx) -> Result<NormIdentityReport> {
    let n = order.conductor() as i64;
    let tau = order.field().tau();
    let w = ctx.working() + 64;
    let sub = PrecisionCtx::with_bits(w);
    let orbit = norm_orbit(order);
    let mut factors = Vec::new();
    for &t in &orbit {
        factors.push(siegel(&SiegelIndex::from_fractions(0, t, n)?, tau, &sub)?.powi(12 * n));
    }
    let lhs = product(&factors, w).powi(2.min(n - 1));

    let primes: Vec<u64> = order.factorization().iter().map(|&(p, _)| p).collect();
    let nu: u64 = if primes.len() == 1 { primes[0] } else { 1 };
    let mut d_factors = vec![ApComplex::from_real(ApFloat::from_int(nu, w)).powi(12 * n)];
    let mut e_factors = d_factors.clone();
    for mask in 0u32..(1 << primes.len()) {
        let p_s: u64 = (0..primes.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| primes[i])
            .product();
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        let point = tau.scale(order.conductor() / p_s);
        d_factors.push(delta(&point, &sub)?.powi(sign * n));
        e_factors.push(eta(&point, &sub)?.powi(24 * sign * n));
    }
    let rhs = product(&d_factors, w);
    let rhs_eta = product(&e_factors, w);
    let residual_log2 = log2_rel(&lhs, &rhs);
    let imag_residual_log2 = match (rhs.im.abs().magnitude(), rhs.abs().magnitude()) {
        (None, _) => f64::NEG_INFINITY,
        (Some(x), Some(y)) => (x - y) as f64,
        (Some(x), None) => x as f64,
    };
    let eta_consistency_log2 = log2_rel(&rhs_eta, &rhs);
    Ok(NormIdentityReport {
        lhs,
        rhs,
        rhs_eta,
        residual_log2,
        imag_residual_log2,
        eta_consistency_log2,
        orbit,
    })
}

/// `prod |g_[0, 1/N] * w * beta_Q (tau_Q)|^(12N)` over `w` in `W / T` and reduced forms `Q`;
/// for conductors with two or more prime factors this is the absolute value of the norm of a
/// unit and so equals 1. Returns log2 of `|product - 1|`.
pub fn siegel_unit_norm_check(order: &OrderSpec, ctx: &PrecisionCtx) -> Result<f64> {
    let field = order.field();
    let n = order.conductor() as i64;
    let w = ctx.working() + 64;
    let sub = PrecisionCtx::with_bits(w);
    let t = t_group(field, order.conductor());
    let mut covered: Vec<Mat2ModN> = Vec::new();
    let mut reps: Vec<Mat2ModN> = Vec::new();
    for m in w_group(field, order.conductor()) {
        if covered.contains(&m) {
            continue;
        }
        covered.extend(t.iter().map(|x| m.mul(x)));
        reps.push(m);
    }
    let mut factors = Vec::new();
    for q in reduced_forms(field.disc())? {
        let q = equivalent_form_prime_to(&q, n);
        let (tau_q, beta) = form_to_datum(&q, field)?;
        let beta = beta.reduce(n);
        for r in &reps {
            let m = r.mul(&beta);
            let idx = SiegelIndex::from_fractions(m.c, m.d, n)?;
            let g = siegel(&idx, &tau_q, &sub)?;
            factors.push(ApComplex::from_real(g.abs()).powi(12 * n));
        }
    }
    let p = product(&factors, w);
    let one = ApComplex::one(w);
    Ok(log2_rel(&p, &one))
}

/// Decimal rendering of the real part to `digits` significant digits.
pub fn approx_string(v: &ApComplex, digits: usize) -> alloc::string::String {
    v.re.to_decimal(digits)
}

/// `|p(x)|` relative to `(1 + |x|)^deg`, as log2.
pub fn root_residual_log2(p: &IntPoly, x: &ApComplex) -> f64 {
    let v = p.eval_complex(x).abs();
    let deg = p.degree().unwrap_or(0) as f64;
    let scale = num_traits::Float::log2(1.0 + x.abs().to_f64()) * deg;
    v.magnitude()
        .map_or(f64::NEG_INFINITY, |m| m as f64 - scale)
}
