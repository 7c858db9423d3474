//! Deciding and solving `p = x^2 + n y^2` with ring class polynomials.

use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::arith::{is_prime, is_square, isqrt, primes_below, sqrt_mod_prime};
use crate::error::{Error, Result};
use crate::invariants::min_poly_of;
use crate::modular::{build_eta_quotient, PrecisionCtx};
use crate::poly::IntPoly;
use crate::quadratic::{kronecker_symbol, OrderSpec};

/// Primes below this bound have their roots found by a direct scan.
pub const SCAN_BOUND: u64 = 1 << 20;
/// Upper limit for [`brute_force_represents`].
pub const BRUTE_FORCE_BOUND: u64 = 10_000_000;

/// All `x` in `[0, p)` with `f(x) = 0 mod p`.
pub fn roots_mod_p(f: &IntPoly, p: u64) -> Vec<u64> {
    if p >= SCAN_BOUND && !f.has_root_mod(p) {
        return Vec::new();
    }
    (0..p).filter(|&x| f.eval_mod(x, p) == 0).collect()
}

/// `(x, y)` with `x^2 + n y^2 = p`, `x, y >= 0`, by Cornacchia's algorithm.
pub fn cornacchia(p: u64, n: u64) -> Option<(u64, u64)> {
    if p < 3 || n == 0 || p % n == 0 {
        return None;
    }
    let found = sqrt_mod_prime(-(n as i64), p).and_then(|r| {
        let r = if 2 * r < p { p - r } else { r };
        let (mut a, mut b) = (p, r);
        let bound = isqrt(p);
        while b > bound {
            (a, b) = (b, a % b);
        }
        let rest = p - b * b;
        (rest % n == 0 && is_square(rest / n)).then(|| (b, isqrt(rest / n)))
    });
    match found {
        Some(w) => Some(w),
        None if p < 1_000_000 => brute_force_represents(p, n).ok().flatten(),
        None => None,
    }
}

/// Exhaustive search over `y`.
pub fn brute_force_represents(p: u64, n: u64) -> Result<Option<(u64, u64)>> {
    if p >= BRUTE_FORCE_BOUND {
        return Err(Error::InvalidConductor(p as i64));
    }
    if n == 0 {
        return Err(Error::InvalidConductor(0));
    }
    let mut y = 0;
    while n * y * y <= p {
        let rest = p - n * y * y;
        if is_square(rest) {
            return Ok(Some((isqrt(rest), y)));
        }
        y += 1;
    }
    Ok(None)
}

/// A prime `p` and the ring class polynomial of `Z[sqrt(-n)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationProblem {
    pub n: u64,
    pub p: u64,
    pub f_n: IntPoly,
}

/// Why the criterion does not apply to a prime.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum NotApplicable {
    EvenPrime,
    NotPrime,
    DividesN,
    DividesDiscriminant,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// `p = x^2 + n y^2` with the given witness.
    Represented {
        x: u64,
        y: u64,
    },
    NotRepresented,
    NotApplicable(NotApplicable),
    /// The criterion holds but no witness was found; never expected.
    MissingWitness,
}

impl Outcome {
    pub fn is_represented(&self) -> Option<bool> {
        match self {
            Outcome::Represented { .. } | Outcome::MissingWitness => Some(true),
            Outcome::NotRepresented => Some(false),
            Outcome::NotApplicable(_) => None,
        }
    }
}

/// `(-n / p) = 1`.
pub fn congruence_condition(n: u64, p: u64) -> bool {
    kronecker_symbol(-(n as i64), p as i64) == 1
}

/// Applicability conditions, given `disc(f_n)`.
pub fn applicability(n: u64, p: u64, disc: &BigInt) -> Option<NotApplicable> {
    if p == 2 {
        Some(NotApplicable::EvenPrime)
    } else if !is_prime(p) {
        Some(NotApplicable::NotPrime)
    } else if n % p == 0 {
        Some(NotApplicable::DividesN)
    } else if (disc % BigInt::from(p)) == BigInt::from(0) {
        Some(NotApplicable::DividesDiscriminant)
    } else {
        None
    }
}

/// `p = x^2 + n y^2` iff `(-n/p) = 1` and `f_n` has a root mod `p`.
pub fn represents(problem: &RepresentationProblem) -> Result<Outcome> {
    let disc = problem.f_n.discriminant()?;
    represents_with_disc(problem, &disc)
}

fn represents_with_disc(problem: &RepresentationProblem, disc: &BigInt) -> Result<Outcome> {
    let RepresentationProblem { n, p, ref f_n } = *problem;
    if let Some(reason) = applicability(n, p, disc) {
        return Ok(Outcome::NotApplicable(reason));
    }
    let holds = congruence_condition(n, p) && !roots_mod_p(f_n, p).is_empty();
    if !holds {
        return Ok(Outcome::NotRepresented);
    }
    Ok(match cornacchia(p, n) {
        Some((x, y))
            if BigInt::from(x).pow(2) + BigInt::from(n) * BigInt::from(y).pow(2)
                == BigInt::from(p) =>
        {
            Outcome::Represented { x, y }
        }
        _ => Outcome::MissingWitness,
    })
}

/// The ring class polynomial used for `x^2 + n y^2`: the level-N eta quotient's minimal
/// polynomial for the order `Z[sqrt(-n)]` of conductor N.
pub fn norm_form_polynomial(n: u64, ctx: Option<&PrecisionCtx>) -> Result<IntPoly> {
    let order = OrderSpec::for_norm_form(n)?;
    let spec = build_eta_quotient(order.conductor())?;
    Ok(min_poly_of(&spec, &order, ctx)?.0)
}

/// One prime of a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub p: u64,
    pub outcome: Outcome,
    pub congruence: bool,
    pub brute: Option<(u64, u64)>,
}

impl SweepRow {
    /// Criterion and oracle agree (vacuous when not applicable).
    pub fn agrees(&self) -> bool {
        match self.outcome.is_represented() {
            None => true,
            Some(r) => r == self.brute.is_some() && self.outcome != Outcome::MissingWitness,
        }
    }
}

/// Summary of a sweep over odd primes below a bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub n: u64,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn applicable(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows
            .iter()
            .filter(|r| r.outcome.is_represented().is_some())
    }

    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(SweepRow::agrees)
    }

    /// A prime passing the congruence condition that is not represented.
    pub fn congruence_counterexample(&self) -> Option<u64> {
        self.applicable()
            .find(|r| r.congruence && r.outcome == Outcome::NotRepresented)
            .map(|r| r.p)
    }
}

pub fn sweep(n: u64, f_n: &IntPoly, bound: u64) -> Result<SweepReport> {
    let disc = f_n.discriminant()?;
    let mut rows = Vec::new();
    for p in primes_below(bound).into_iter().filter(|&p| p > 2) {
        let problem = RepresentationProblem {
            n,
            p,
            f_n: f_n.clone(),
        };
        let outcome = represents_with_disc(&problem, &disc)?;
        rows.push(SweepRow {
            p,
            congruence: congruence_condition(n, p),
            brute: brute_force_represents(p, n)?,
            outcome,
        });
    }
    Ok(SweepReport { n, rows })
}
