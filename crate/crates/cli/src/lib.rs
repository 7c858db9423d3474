//! Command-line front end for `ringclass-core`.

pub mod cache;

use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use ringclass_core::apfloat::ApComplex;
use ringclass_core::diophantine::{
    represents, sweep, NotApplicable, Outcome, RepresentationProblem,
};
use ringclass_core::error::Error;
use ringclass_core::galois::{class_number_order, conjugate_data, reduced_forms};
use ringclass_core::invariants::{
    approx_string, conjugates, initial_precision, invariant_spec, min_poly, min_poly_j,
    ring_class_invariant, root_residual_log2, verify_degree_and_irreducibility,
    verify_norm_identity,
};
use ringclass_core::modular::{build_eta_quotient, check_ono_conditions, PrecisionCtx};
use ringclass_core::poly::IntPoly;
use ringclass_core::quadratic::{
    hypothesis_holds, reproduce_table1, small_group_prime_powers, OrderSpec, QuadField,
    TABLE1_PRIME_POWER_BOUND,
};

use cache::PolyCacheEntry;

pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_NO_CONVERGENCE: u8 = 3;
pub const EXIT_SUITE_FAILURE: u8 = 4;
pub const EXIT_IO: u8 = 1;

/// Largest `log2` residual accepted by the norm suite, about `1e-30`.
const NORM_SUITE_THRESHOLD_LOG2: f64 = -100.0;

#[derive(Parser, Debug)]
#[command(
    name = "ringclass",
    version,
    about = "Ring class invariants of imaginary quadratic orders"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate d_K and print tau_K, the unit count and the prime powers with |G| <= 2.
    FieldInfo {
        #[arg(long, allow_hyphen_values = true)]
        dk: i64,
    },
    /// Minimal polynomial of the ring class invariant of the order of conductor N.
    Minpoly {
        #[command(flatten)]
        order: OrderArgs,
        /// Starting precision in bits; doubling still applies.
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        cache: CacheArgs,
        /// Use j instead of the eta quotient.
        #[arg(long)]
        use_j: bool,
    },
    /// Decide whether p = x^2 + n y^2.
    Solve {
        #[arg(long)]
        n: u64,
        #[arg(
            long,
            conflicts_with = "sweep_below",
            required_unless_present = "sweep_below"
        )]
        p: Option<u64>,
        /// Decide every odd prime below the bound and compare with brute force.
        #[arg(long)]
        sweep_below: Option<u64>,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Run a property suite.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        dk: Option<i64>,
        #[arg(long)]
        conductor: Option<u64>,
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// List the reduced primitive forms of a negative discriminant.
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct OrderArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub dk: i64,
    #[arg(long)]
    pub conductor: u64,
}

#[derive(Args, Debug, Clone)]
pub struct CacheArgs {
    /// Cache directory.
    #[arg(long = "cache", env = "RINGCLASS_CACHE")]
    pub dir: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Norm,
    Ono,
    Table1,
    Conjugates,
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
    io_kind: Option<io::ErrorKind>,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
            io_kind: None,
        }
    }

    /// The reader of our output went away.
    pub fn is_broken_pipe(&self) -> bool {
        self.io_kind == Some(io::ErrorKind::BrokenPipe)
    }

    fn validation(message: impl Into<String>) -> Self {
        Self::new(EXIT_VALIDATION, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoConvergence { .. } => EXIT_NO_CONVERGENCE,
            _ => EXIT_VALIDATION,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError {
            io_kind: Some(e.kind()),
            ..CliError::new(EXIT_IO, e.to_string())
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::FieldInfo { dk } => field_info(dk, out),
        Command::Minpoly {
            order,
            precision,
            json,
            cache,
            use_j,
        } => minpoly(order, precision, json, cache.dir.as_deref(), use_j, out),
        Command::Solve {
            n,
            p,
            sweep_below,
            cache,
        } => solve(n, p, sweep_below, cache.dir.as_deref(), out),
        Command::Verify {
            dk,
            conductor,
            suite,
            precision,
        } => verify(dk, conductor, suite, precision, out),
        Command::Classgroup { disc } => classgroup(disc, out),
    }
}

fn field_info(dk: i64, out: &mut dyn Write) -> CliResult {
    let f = QuadField::new(dk)?;
    let small: Vec<String> = small_group_prime_powers(&f, TABLE1_PRIME_POWER_BOUND)
        .iter()
        .map(|&(p, r)| p.pow(r).to_string())
        .collect();
    writeln!(out, "d_K: {dk} (fundamental)")?;
    writeln!(out, "tau_K: {}", f.tau())?;
    writeln!(out, "unit_count: {}", f.unit_count())?;
    writeln!(out, "class: {}", f.class().label())?;
    writeln!(out, "|G| <= 2 for p^r in {{{}}}", small.join(","))?;
    Ok(())
}

fn order_of(args: OrderArgs) -> CliResult<OrderSpec> {
    Ok(OrderSpec::from_disc(args.dk, args.conductor)?)
}

fn start_ctx(order: &OrderSpec, precision: Option<u32>) -> CliResult<PrecisionCtx> {
    let bits = precision.unwrap_or_else(|| initial_precision(order));
    Ok(PrecisionCtx::new(bits, PrecisionCtx::DEFAULT_GUARD)?)
}

/// Computes the cache entry of `order` from scratch.
pub fn compute_entry(order: &OrderSpec, precision: Option<u32>) -> CliResult<PolyCacheEntry> {
    let ctx = start_ctx(order, precision)?;
    let (p, rep) = min_poly(order, Some(&ctx))?;
    let value = ring_class_invariant(order, &PrecisionCtx::with_bits(rep.precision_used))?;
    Ok(PolyCacheEntry {
        d_k: order.field().disc(),
        conductor: order.conductor(),
        coeffs: PolyCacheEntry::coeffs_of(&p),
        precision_bits: rep.precision_used,
        invariant_approx: approx_string(&value, 50),
        spec_exponents: invariant_spec(order)?.exponents,
    })
}

/// A verified cache hit, or a fresh computation written through to the cache.
pub fn cached_entry(
    order: &OrderSpec,
    precision: Option<u32>,
    dir: Option<&Path>,
) -> CliResult<PolyCacheEntry> {
    let Some(dir) = dir else {
        return compute_entry(order, precision);
    };
    if let Some(e) = cache::load(dir, order.field().disc(), order.conductor()) {
        if e.is_valid_for(order) {
            return Ok(e);
        }
    }
    let e = compute_entry(order, precision)?;
    cache::store(dir, &e)?;
    Ok(e)
}

fn entry_poly(e: &PolyCacheEntry) -> CliResult<IntPoly> {
    e.poly()
        .ok_or_else(|| CliError::validation("cache entry has a malformed coefficient"))
}

fn minpoly(
    args: OrderArgs,
    precision: Option<u32>,
    json: bool,
    dir: Option<&Path>,
    use_j: bool,
    out: &mut dyn Write,
) -> CliResult {
    let order = order_of(args)?;
    if !hypothesis_holds(&order).holds {
        eprintln!("warning: |G| <= 2 at a prime dividing the conductor; the value need not generate the ring class field");
    }
    if use_j {
        let ctx = start_ctx(&order, precision)?;
        let p = min_poly_j(&order, Some(&ctx))?;
        if json {
            let v: Vec<String> = PolyCacheEntry::coeffs_of(&p);
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&v).map_err(io::Error::from)?
            )?;
        } else {
            writeln!(out, "{p}")?;
        }
        return Ok(());
    }
    let e = cached_entry(&order, precision, dir)?;
    if json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&e).map_err(io::Error::from)?
        )?;
    } else {
        writeln!(out, "{}", entry_poly(&e)?)?;
    }
    Ok(())
}

fn not_applicable_text(r: NotApplicable) -> &'static str {
    match r {
        NotApplicable::EvenPrime => "criterion not applicable (p = 2)",
        NotApplicable::NotPrime => "criterion not applicable (p not prime)",
        NotApplicable::DividesN => "criterion not applicable (p | n)",
        NotApplicable::DividesDiscriminant => "criterion not applicable (p | disc f_n)",
    }
}

fn outcome_text(o: &Outcome) -> String {
    match o {
        Outcome::Represented { x, y } => format!("yes x={x} y={y}"),
        Outcome::NotRepresented => "no".into(),
        Outcome::NotApplicable(r) => not_applicable_text(*r).into(),
        Outcome::MissingWitness => "yes (no witness found)".into(),
    }
}

fn solve(
    n: u64,
    p: Option<u64>,
    sweep_below: Option<u64>,
    dir: Option<&Path>,
    out: &mut dyn Write,
) -> CliResult {
    let order = OrderSpec::for_norm_form(n)?;
    let f_n = entry_poly(&cached_entry(&order, None, dir)?)?;
    if let Some(p) = p {
        let o = represents(&RepresentationProblem { n, p, f_n })?;
        writeln!(out, "{}", outcome_text(&o))?;
        return Ok(());
    }
    let bound = sweep_below
        .ok_or_else(|| CliError::validation("one of --p or --sweep-below is required"))?;
    let r = sweep(n, &f_n, bound)?;
    writeln!(
        out,
        "{:>8}  {:<40}  {:<14}  agree",
        "p", "criterion", "brute force"
    )?;
    for row in &r.rows {
        let brute = row
            .brute
            .map_or("no".to_string(), |(x, y)| format!("x={x} y={y}"));
        let agree = if row.agrees() { "ok" } else { "MISMATCH" };
        writeln!(
            out,
            "{:>8}  {:<40}  {:<14}  {agree}",
            row.p,
            outcome_text(&row.outcome),
            brute
        )?;
    }
    let applicable = r.applicable().count();
    writeln!(
        out,
        "{applicable} applicable primes below {bound}, all agree: {}",
        r.all_agree()
    )?;
    if r.all_agree() {
        Ok(())
    } else {
        Err(CliError::new(
            EXIT_SUITE_FAILURE,
            "criterion disagrees with brute force",
        ))
    }
}

fn suite_result(ok: bool, what: &str) -> CliResult {
    if ok {
        Ok(())
    } else {
        Err(CliError::new(
            EXIT_SUITE_FAILURE,
            format!("{what} suite failed"),
        ))
    }
}

fn verify(
    dk: Option<i64>,
    conductor: Option<u64>,
    suite: Suite,
    precision: Option<u32>,
    out: &mut dyn Write,
) -> CliResult {
    let need_order = || -> CliResult<OrderSpec> {
        match (dk, conductor) {
            (Some(dk), Some(n)) => order_of(OrderArgs { dk, conductor: n }),
            _ => Err(CliError::validation(
                "this suite needs --dk and --conductor",
            )),
        }
    };
    match suite {
        Suite::Table1 => verify_table1(out),
        Suite::Ono => {
            let n =
                conductor.ok_or_else(|| CliError::validation("the ono suite needs --conductor"))?;
            let spec = build_eta_quotient(n)?;
            let r = check_ono_conditions(&spec);
            writeln!(out, "exponents: {:?}", spec.exponents)?;
            writeln!(out, "prefactor: {}", spec.prefactor()?)?;
            writeln!(out, "weight zero: {}", r.weight_zero)?;
            writeln!(out, "order at infinity: {}", r.order_at_infinity)?;
            writeln!(out, "order at zero: {}", r.order_at_zero)?;
            writeln!(out, "square character: {}", r.square_character)?;
            suite_result(r.passes(), "ono")
        }
        Suite::Norm => {
            let order = need_order()?;
            let ctx = start_ctx(&order, precision)?;
            let r = verify_norm_identity(&order, &ctx)?;
            writeln!(out, "orbit t: {:?}", r.orbit)?;
            writeln!(out, "lhs: {}", scientific(&r.lhs))?;
            writeln!(out, "rhs: {}", scientific(&r.rhs))?;
            writeln!(out, "relative residual: 2^{:.1}", r.residual_log2)?;
            writeln!(out, "eta consistency: 2^{:.1}", r.eta_consistency_log2)?;
            suite_result(r.residual_log2 < NORM_SUITE_THRESHOLD_LOG2, "norm")
        }
        Suite::Conjugates => verify_conjugates(&need_order()?, precision, out),
    }
}

fn scientific(v: &ApComplex) -> String {
    format!("{:.16e} {:+.16e}*i", v.re.to_f64(), v.im.to_f64())
}

fn verify_table1(out: &mut dyn Write) -> CliResult {
    let show = |v: &[(u64, u32)]| {
        v.iter()
            .map(|&(p, r)| p.pow(r).to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let cols = reproduce_table1();
    for c in &cols {
        writeln!(
            out,
            "{:<22} computed {{{}}} uniform={} tabulated {{{}}}",
            c.class.label(),
            show(&c.entries),
            c.uniform,
            show(c.class.tabulated())
        )?;
        for (d, s) in &c.deviations {
            writeln!(out, "    d_K = {d}: {{{}}}", show(s))?;
        }
    }
    let ok = cols.iter().all(|c| c.matches_tabulated());
    if ok {
        writeln!(out, "Table 1 reproduced")?;
    } else {
        writeln!(out, "Table 1 not reproduced")?;
    }
    suite_result(ok, "table1")
}

fn verify_conjugates(order: &OrderSpec, precision: Option<u32>, out: &mut dyn Write) -> CliResult {
    let (p, rep) = min_poly(order, Some(&start_ctx(order, precision)?))?;
    let ctx = PrecisionCtx::with_bits(rep.precision_used);
    let data = conjugate_data(order.field(), order.conductor())?;
    let values = conjugates(order, &ctx)?;
    let threshold = -f64::from(rep.precision_used / 2);
    let mut ok = data.len() == values.len();
    for (i, (d, v)) in data.iter().zip(&values).enumerate() {
        let res = root_residual_log2(&p, v);
        ok &= res < threshold;
        writeln!(
            out,
            "{i}: gamma={} = diag(1,{}) * {} lift={} tau_Q={} value={} residual=2^{:.0}",
            d.matrix,
            d.diag_d,
            d.sl2_part,
            d.sl2_lift,
            d.eval_point,
            scientific(v),
            res
        )?;
    }
    let irr = verify_degree_and_irreducibility(&p, order)?;
    let h = class_number_order(order.field(), order.conductor());
    ok &= irr.degree_ok();
    writeln!(
        out,
        "{} conjugates, class number {h}, polynomial {p}",
        values.len()
    )?;
    match irr.certificate {
        Some(q) => writeln!(out, "irreducible mod {q}")?,
        None => writeln!(out, "no irreducibility certificate among {:?}", irr.tried)?,
    }
    suite_result(ok, "conjugates")
}

fn classgroup(disc: i64, out: &mut dyn Write) -> CliResult {
    for f in reduced_forms(disc)? {
        writeln!(out, "{} {} {}", f.a, f.b, f.c)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let nc = CliError::from(Error::NoConvergence {
            bits: 64,
            residual_log2: -3.0,
        });
        assert_eq!(nc.code, EXIT_NO_CONVERGENCE);
        assert_eq!(
            CliError::from(Error::InvalidConductor(0)).code,
            EXIT_VALIDATION
        );
        assert_eq!(
            suite_result(false, "x").unwrap_err().code,
            EXIT_SUITE_FAILURE
        );
        let bp = CliError::from(io::Error::from(io::ErrorKind::BrokenPipe));
        assert!(bp.is_broken_pipe());
        assert_eq!(bp.code, EXIT_IO);
    }
}
