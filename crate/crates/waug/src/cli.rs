//! Argument parsing and dispatch: one subcommand per core procedure.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use waug_core::algebra::{augmentation, convolve, l1_norm, omega_norm, sigma_sequence};
use waug_core::idealkit::{
    decompose_full, decompose_point, divide_shift, pseudo_generation_necessity, rewrite_pseudofinite, telescope,
    witness_nontp_element, witness_prop45, witness_thm75, ShiftSide,
};
use waug_core::rational::parse_rational;
use waug_core::sequences::{
    build_block_sequence, check_prefix_tp, failure_witness, growth_check, Classification, PrefixSequence,
    SuspectReason, TpConfig,
};
use waug_core::structures::{ball_table, LevelSet, PseudoFinite, StepKind};
use waug_core::weights::{
    build_lemma74, build_lemma76, estimate_radii, tau_and_c, verify_weight_axioms, Lemma74Certificate,
    Lemma76Certificate,
};
use waug_core::{Element, FinElement, Rational, Structure, Weight, WeightValue, DEFAULT_BALL_CAP};

use crate::io::{self, encode_element, rat};
use crate::report::{self, bound_check, decision, enclosure, scalar, Report, Table};
use crate::{CliError, BALL_CAP_ENV};

#[derive(Parser, Debug)]
#[command(name = "waug", version, about = "Certified computations on weighted l1 algebras of groups and monoids")]
pub struct Cli {
    /// Bits of precision for dyadic enclosures.
    #[arg(long, global = true, default_value_t = waug_core::DEFAULT_PRECISION)]
    pub precision: u32,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Balls, ancestries and pseudo-finiteness.
    #[command(subcommand)]
    Structure(StructureCmd),
    /// Weight construction and certification.
    #[command(subcommand)]
    Weight(WeightCmd),
    /// Tail-preservation diagnostics for positive sequences.
    #[command(subcommand)]
    Tau(TauCmd),
    /// Arithmetic on finitely supported elements.
    #[command(subcommand)]
    Element(ElementCmd),
    /// Ideal membership: decompositions and witnesses.
    #[command(subcommand)]
    Ideal(IdealCmd),
}

#[derive(Args, Debug)]
pub struct SpecArg {
    /// Structure spec (JSON).
    #[arg(long)]
    pub spec: PathBuf,
}

#[derive(Args, Debug)]
pub struct DepthArg {
    #[arg(long, visible_alias = "radius")]
    pub depth: usize,
}

#[derive(Subcommand, Debug)]
pub enum StructureCmd {
    /// Ancestry balls B_0 … B_N.
    Ball {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        depth: DepthArg,
    },
    /// An ancestry chain from an element back to e.
    Ancestry {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        depth: DepthArg,
        /// Element in the structure's JSON encoding.
        #[arg(long)]
        at: String,
    },
    /// Search for a covering ball B_n = M.
    Pseudofinite {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        depth: DepthArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum WeightCmd {
    /// Exhaustive weight axioms over B_R.
    Verify {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        weight: PathBuf,
        #[command(flatten)]
        depth: DepthArg,
    },
    /// Sphere minima τ_n, the constant C and τ_n ≤ Cτ_{n+1}.
    Tau {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        weight: PathBuf,
        #[command(flatten)]
        depth: DepthArg,
    },
    /// The block weight (ρ+ε(n))ⁿ on ℤ⁺ with its certificate.
    BuildL74 {
        #[arg(long)]
        rho: String,
        #[arg(long)]
        blocks: usize,
    },
    /// The two-sided weight ρⁿγ_n with its certificate.
    BuildL76 {
        #[arg(long)]
        rho: String,
        #[command(flatten)]
        depth: DepthArg,
    },
    /// Finite-n root diagnostics ω_N^{1/N} on ℤ or ℤ⁺.
    Radii {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        weight: PathBuf,
        #[command(flatten)]
        depth: DepthArg,
    },
}

#[derive(Args, Debug)]
pub struct SeqArg {
    /// Sequence CSV: index,numerator,denominator.
    #[arg(long)]
    pub csv: PathBuf,
    /// Use only the first N terms.
    #[arg(long, visible_alias = "radius")]
    pub depth: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum TauCmd {
    /// Prefix D̂ and classification.
    Check {
        #[command(flatten)]
        seq: SeqArg,
    },
    /// Search for x with ‖x‖_τ ≤ 1 and T(x) ≥ target.
    Witness {
        #[command(flatten)]
        seq: SeqArg,
        #[arg(long)]
        target: String,
    },
    /// The block sequence with ratios τ_{n_k+1}/Σ_{j≤n_k}τ_j = 1/k.
    Blockseq {
        #[arg(long)]
        rho: String,
        #[arg(long)]
        blocks: usize,
    },
    /// τ_{n+1} ≥ DΣτ_j implies τ_{j+1} ≥ D(D+1)^{j−1}τ_1.
    Growth {
        #[command(flatten)]
        seq: SeqArg,
        /// The constant D.
        #[arg(long)]
        target: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ElementCmd {
    /// f₁ * f₂ * ….
    Convolve {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, required = true, num_args = 1)]
        element: Vec<PathBuf>,
    },
    /// ‖f‖_ω and ‖f‖₁.
    Norm {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        weight: PathBuf,
        #[arg(long)]
        element: PathBuf,
    },
    /// Partial augmentations σ_1 … σ_N.
    Sigma {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        element: PathBuf,
        #[command(flatten)]
        depth: DepthArg,
        /// Also report Σ τ_n|σ_n| for this weight.
        #[arg(long)]
        weight: Option<PathBuf>,
    },
    /// φ(f) = Σ f(u).
    Augment {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        element: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum IdealCmd {
    /// f = Σ β_i (δ_e − δ_{u_i}) along the support order.
    Telescope {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        element: PathBuf,
    },
    /// δ_e − δ_u along a geodesic, with norm bounds.
    DecomposePoint {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        weight: PathBuf,
        /// Element in the structure's JSON encoding.
        #[arg(long)]
        at: String,
        /// The constant D of τ_{n+1} ≥ DΣ_{j≤n}τ_j.
        #[arg(long, default_value = "1")]
        d: String,
    },
    /// f = Σ s⁽ⁱ⁾ (δ_e − δ_{x_i}) with norm bounds.
    DecomposeFull {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        weight: PathBuf,
        #[arg(long)]
        element: PathBuf,
        #[arg(long, default_value = "1")]
        d: String,
    },
    /// f = g * (δ₁ − δ₀) on ℤ or ℤ⁺.
    DivideShift {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        element: PathBuf,
    },
    /// Rewrite over the inductive generator family of a pseudo-finite monoid.
    RewritePf {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        element: PathBuf,
        #[command(flatten)]
        depth: DepthArg,
    },
    /// Whether the union of supports pseudo-generates the monoid.
    Necessity {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, required = true, num_args = 1)]
        element: Vec<PathBuf>,
        #[command(flatten)]
        depth: DepthArg,
    },
    /// Partial-augmentation witness on a non-pseudo-finite monoid.
    #[command(name = "witness-45")]
    Witness45 {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        blocks: usize,
    },
    /// Weighted partial-augmentation witness from a vector α.
    #[command(name = "witness-65")]
    Witness65 {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        weight: PathBuf,
        /// α as CSV: index,numerator,denominator.
        #[arg(long)]
        alpha: PathBuf,
    },
    /// Bounded element with divergent divisor for the block weight.
    #[command(name = "witness-75")]
    Witness75 {
        #[arg(long)]
        rho: String,
        #[arg(long)]
        blocks: usize,
    },
}

struct Ctx {
    precision: u32,
    cap: usize,
}

fn ball_cap() -> Result<usize, CliError> {
    match std::env::var(BALL_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Input(format!("{BALL_CAP_ENV}={v} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_BALL_CAP),
    }
}

fn rational_arg(flag: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::Input(format!("--{flag}: {e}")))
}

fn element_arg(s: &Structure, text: &str) -> Result<Element, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("--at: {e}")))?;
    let u = io::decode_element(s.family(), &v).map_err(|e| CliError::Input(format!("--at: {e}")))?;
    s.validate(&u).map_err(|e| CliError::Input(format!("--at: {e}")))?;
    Ok(u)
}

fn structure(rep: &mut Report, a: &SpecArg) -> Result<Structure, CliError> {
    let l = io::load_structure(&a.spec)?;
    rep.input("spec", &a.spec, &l.bytes);
    Ok(l.value)
}

fn weight(rep: &mut Report, path: &Path, s: &Structure, prec: u32) -> Result<Weight, CliError> {
    let l = io::load_weight(path, s)?;
    rep.input("weight", path, &l.bytes);
    Ok(Weight::build(&l.value, prec)?)
}

fn element(rep: &mut Report, path: &Path, s: &Structure) -> Result<FinElement, CliError> {
    let l = io::load_element(path, s)?;
    rep.input("element", path, &l.bytes);
    Ok(l.value)
}

fn sequence(rep: &mut Report, a: &SeqArg) -> Result<PrefixSequence, CliError> {
    let l = io::load_sequence(&a.csv)?;
    rep.input("sequence", &a.csv, &l.bytes);
    match a.depth {
        Some(n) if n < l.value.len() => {
            rep.param("depth", json!(n));
            Ok(PrefixSequence::new(l.value.values()[..n].to_vec())?)
        }
        _ => Ok(l.value),
    }
}

fn rats(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

fn elems(v: &[Element]) -> Value {
    Value::Array(v.iter().map(encode_element).collect())
}

fn weight_value(v: &WeightValue) -> Value {
    match v {
        WeightValue::Exact(r) => json!({ "exact": rat(r) }),
        WeightValue::Enclosed(e) => json!({ "enclosure": enclosure(e) }),
    }
}

fn rat_cells(r: &Rational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

fn sequence_table(values: &[Rational]) -> Table {
    Table {
        header: vec!["n", "numerator", "denominator"],
        rows: values
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let [a, b] = rat_cells(r);
                vec![(i + 1).to_string(), a, b]
            })
            .collect(),
    }
}

fn level_set(l: &LevelSet<'_>) -> Value {
    match l {
        LevelSet::Finite(s) => json!({ "kind": "finite", "elements": elems(s) }),
        LevelSet::Universal => json!({ "kind": "universal" }),
        LevelSet::CoFinite(s) => json!({ "kind": "cofinite", "excluded": elems(s) }),
    }
}

fn l74_certificate(c: &Lemma74Certificate) -> Value {
    let eq71: Vec<Value> = c
        .eq71
        .iter()
        .map(|e| json!({ "k": e.k, "n_k": e.n_k, "exact": e.exact, "via_bound": e.via_bound, "certified": e.via_bound && e.exact != Some(false) }))
        .collect();
    json!({
        "upto": c.upto,
        "eps_in_range": c.eps_in_range,
        "eps_nonincreasing": c.eps_nonincreasing,
        "eps_drops": c.eps_drops,
        "boundaries_increasing": c.boundaries_increasing,
        "choice_bounds": c.choice_bounds,
        "eq71": eq71,
        "above_rho_power": c.above_rho_power,
        "submultiplicative": c.submultiplicative,
        "certified": c.passed,
    })
}

fn l76_certificate(c: &Lemma76Certificate) -> Value {
    let ratios: Vec<Value> = c
        .ratios
        .iter()
        .map(|r| json!({ "k": r.k, "n_k": r.n_k, "ratio": rat(&r.ratio), "bound": rat(&r.bound), "certified": r.holds }))
        .collect();
    json!({
        "depth": c.depth,
        "seeds": c.seeds,
        "recursion": c.recursion,
        "star": c.star,
        "dagger": c.dagger,
        "submultiplicative_exponents": c.submultiplicative_exponents,
        "submultiplicative": c.submultiplicative,
        "pairs_checked": c.pairs_checked,
        "violation": c.violation.as_ref().map(|v| json!({ "i": v.i, "j": v.j })),
        "extension_constant": rat(&c.extension_constant),
        "ratios": ratios,
        "certified": c.passed,
    })
}

/// Parses, runs, writes the report and returns the exit code.
pub fn main_with(cli: Cli) -> u8 {
    match run(&cli) {
        Ok(rep) => match emit(&cli, &rep) {
            Ok(()) => u8::from(!rep.certified),
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn emit(cli: &Cli, rep: &Report) -> Result<(), CliError> {
    let text = match cli.format {
        Format::Json => rep.render_json(),
        Format::Csv => rep.render_csv(),
    };
    match &cli.out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs one subcommand. Certificate failures become an uncertified report;
/// input errors propagate.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let ctx = Ctx { precision: cli.precision, cap: ball_cap()? };
    if ctx.precision < 16 {
        return Err(CliError::Input("--precision must be at least 16".into()));
    }
    let mut rep = Report::new(operation_name(&cli.command));
    rep.param("precision", json!(ctx.precision));
    rep.param("ball_cap", json!(ctx.cap));
    match dispatch(&ctx, &cli.command, &mut rep) {
        Ok(()) => Ok(rep),
        Err(CliError::Failure(msg)) => {
            rep.certified = false;
            rep.table = None;
            rep.result = json!({ "failure": msg });
            Ok(rep)
        }
        Err(e) => Err(e),
    }
}

fn operation_name(c: &Command) -> &'static str {
    match c {
        Command::Structure(StructureCmd::Ball { .. }) => "structure ball",
        Command::Structure(StructureCmd::Ancestry { .. }) => "structure ancestry",
        Command::Structure(StructureCmd::Pseudofinite { .. }) => "structure pseudofinite",
        Command::Weight(WeightCmd::Verify { .. }) => "weight verify",
        Command::Weight(WeightCmd::Tau { .. }) => "weight tau",
        Command::Weight(WeightCmd::BuildL74 { .. }) => "weight build-l74",
        Command::Weight(WeightCmd::BuildL76 { .. }) => "weight build-l76",
        Command::Weight(WeightCmd::Radii { .. }) => "weight radii",
        Command::Tau(TauCmd::Check { .. }) => "tau check",
        Command::Tau(TauCmd::Witness { .. }) => "tau witness",
        Command::Tau(TauCmd::Blockseq { .. }) => "tau blockseq",
        Command::Tau(TauCmd::Growth { .. }) => "tau growth",
        Command::Element(ElementCmd::Convolve { .. }) => "element convolve",
        Command::Element(ElementCmd::Norm { .. }) => "element norm",
        Command::Element(ElementCmd::Sigma { .. }) => "element sigma",
        Command::Element(ElementCmd::Augment { .. }) => "element augment",
        Command::Ideal(IdealCmd::Telescope { .. }) => "ideal telescope",
        Command::Ideal(IdealCmd::DecomposePoint { .. }) => "ideal decompose-point",
        Command::Ideal(IdealCmd::DecomposeFull { .. }) => "ideal decompose-full",
        Command::Ideal(IdealCmd::DivideShift { .. }) => "ideal divide-shift",
        Command::Ideal(IdealCmd::RewritePf { .. }) => "ideal rewrite-pf",
        Command::Ideal(IdealCmd::Necessity { .. }) => "ideal necessity",
        Command::Ideal(IdealCmd::Witness45 { .. }) => "ideal witness-45",
        Command::Ideal(IdealCmd::Witness65 { .. }) => "ideal witness-65",
        Command::Ideal(IdealCmd::Witness75 { .. }) => "ideal witness-75",
    }
}

fn dispatch(ctx: &Ctx, c: &Command, rep: &mut Report) -> Result<(), CliError> {
    match c {
        Command::Structure(c) => structure_cmd(ctx, c, rep),
        Command::Weight(c) => weight_cmd(ctx, c, rep),
        Command::Tau(c) => tau_cmd(c, rep),
        Command::Element(c) => element_cmd(ctx, c, rep),
        Command::Ideal(c) => ideal_cmd(ctx, c, rep),
    }
}

fn structure_cmd(ctx: &Ctx, c: &StructureCmd, rep: &mut Report) -> Result<(), CliError> {
    match c {
        StructureCmd::Ball { spec, depth } => {
            let s = structure(rep, spec)?;
            rep.param("depth", json!(depth.depth));
            let t = ball_table(&s, depth.depth, ctx.cap)?;
            let levels: Vec<Value> = (0..=depth.depth)
                .map(|n| json!({ "n": n, "ball_size": t.ball_size(n), "sphere": level_set(&t.sphere(n)) }))
                .collect();
            rep.table = Some(Table {
                header: vec!["n", "ball_size", "sphere_size"],
                rows: (0..=depth.depth)
                    .map(|n| {
                        let sphere = t.sphere(n).finite().map(|s| s.len().to_string()).unwrap_or_default();
                        vec![n.to_string(), t.ball_size(n).map(|b| b.to_string()).unwrap_or_default(), sphere]
                    })
                    .collect(),
            });
            rep.result = json!({
                "levels": levels,
                "covering_level": t.covering_level(),
                "stalled": t.is_stalled(),
            });
            rep.certified = true;
        }
        StructureCmd::Ancestry { spec, depth, at } => {
            let s = structure(rep, spec)?;
            let u = element_arg(&s, at)?;
            rep.param("depth", json!(depth.depth));
            rep.param("at", encode_element(&u));
            let t = ball_table(&s, depth.depth, ctx.cap)?;
            match (t.level_of(&u), t.ancestry(&u)) {
                (Some(level), Some(chain)) => {
                    let steps: Vec<Value> = chain
                        .iter()
                        .map(|z| {
                            let link = t.link_of(z).map(|l| {
                                json!({
                                    "generator": encode_element(&s.generators()[l.gen]),
                                    "kind": match l.kind { StepKind::Multiply => "multiply", StepKind::Divide => "divide" },
                                })
                            });
                            json!({ "element": encode_element(z), "link": link })
                        })
                        .collect();
                    rep.result = json!({ "level": level, "ancestry": steps });
                    rep.certified = true;
                }
                _ => {
                    rep.result = json!({ "level": Value::Null, "reason": format!("not in B_{}", depth.depth) });
                    rep.certified = false;
                }
            }
        }
        StructureCmd::Pseudofinite { spec, depth } => {
            let s = structure(rep, spec)?;
            rep.param("depth", json!(depth.depth));
            rep.result = match waug_core::structures::pseudo_finite_within(&s, depth.depth, ctx.cap)? {
                PseudoFinite::Found { n, sizes } => json!({ "verdict": "found", "n": n, "sizes": sizes }),
                PseudoFinite::NotWithinDepth { depth, sizes, reason, proof } => json!({
                    "verdict": "not_within_depth",
                    "depth": depth,
                    "sizes": sizes,
                    "reason": reason,
                    "never_pseudo_finite": proof,
                }),
            };
            rep.certified = true;
        }
    }
    Ok(())
}

fn weight_cmd(ctx: &Ctx, c: &WeightCmd, rep: &mut Report) -> Result<(), CliError> {
    let prec = ctx.precision;
    match c {
        WeightCmd::Verify { spec, weight: wp, depth } => {
            let s = structure(rep, spec)?;
            let w = weight(rep, wp, &s, prec)?;
            rep.param("radius", json!(depth.depth));
            let r = verify_weight_axioms(&w, &s, depth.depth, prec, ctx.cap)?;
            rep.result = json!({
                "radius": r.radius,
                "ball_size": r.ball_size,
                "identity_is_one": r.identity_is_one,
                "at_least_one": r.at_least_one,
                "pairs_checked": r.pairs_checked,
                "pairs_skipped": r.pairs_skipped,
                "undecided": r.undecided,
                "violation": r.violation.as_ref().map(|v| json!({
                    "u": encode_element(&v.u),
                    "v": encode_element(&v.v),
                    "lhs": enclosure(&v.lhs),
                    "rhs": enclosure(&v.rhs),
                })),
                "lemma74": r.lemma74.as_ref().map(l74_certificate),
                "certified": r.passed,
            });
            rep.certified = r.passed;
        }
        WeightCmd::Tau { spec, weight: wp, depth } => {
            let s = structure(rep, spec)?;
            let w = weight(rep, wp, &s, prec)?;
            rep.param("depth", json!(depth.depth));
            let r = tau_and_c(&w, &s, depth.depth, prec, ctx.cap)?;
            rep.table = Some(Table {
                header: vec!["n", "lo_num", "lo_den", "hi_num", "hi_den"],
                rows: r
                    .tau
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        let [a, b] = rat_cells(t.lo());
                        let [c, d] = rat_cells(t.hi());
                        vec![(i + 1).to_string(), a, b, c, d]
                    })
                    .collect(),
            });
            rep.result = json!({
                "tau": r.tau.iter().map(weight_value).collect::<Vec<_>>(),
                "minimizers": elems(&r.minimizers),
                "c": weight_value(&r.c),
                "lemma61": r.lemma61.iter().map(|d| decision(*d)).collect::<Vec<_>>(),
                "lemma61_certified": r.lemma61_holds(),
            });
            rep.certified = r.lemma61_holds();
        }
        WeightCmd::BuildL74 { rho, blocks } => {
            let rho = rational_arg("rho", rho)?;
            rep.param("rho", rat(&rho));
            rep.param("blocks", json!(blocks));
            let w = build_lemma74(&rho, *blocks, prec)?;
            let upto = w.boundaries().last().map_or(1, |n| n + 1);
            let cert = w.certify(upto, prec)?;
            rep.table = Some(Table {
                header: vec!["k", "n_k", "eps_num", "eps_den"],
                rows: w
                    .boundaries()
                    .iter()
                    .enumerate()
                    .map(|(i, n)| {
                        let [a, b] = rat_cells(&w.eps(n + 1));
                        vec![(i + 1).to_string(), n.to_string(), a, b]
                    })
                    .collect(),
            });
            rep.result = json!({
                "boundaries": w.boundaries(),
                "ratio_bounds": rats(w.ratio_bounds()),
                "certificate": l74_certificate(&cert),
            });
            rep.certified = cert.passed;
        }
        WeightCmd::BuildL76 { rho, depth } => {
            let rho = rational_arg("rho", rho)?;
            rep.param("rho", rat(&rho));
            rep.param("depth", json!(depth.depth));
            let w = build_lemma76(&rho, depth.depth)?;
            let cert = w.certify();
            let omega = (1..=depth.depth as i64).map(|n| w.value(n)).collect::<Result<Vec<_>, _>>()?;
            rep.table = Some(sequence_table(&omega));
            rep.result = json!({
                "exponents": w.exponents(),
                "certificate": l76_certificate(&cert),
            });
            rep.certified = cert.passed;
        }
        WeightCmd::Radii { spec, weight: wp, depth } => {
            let s = structure(rep, spec)?;
            let w = weight(rep, wp, &s, prec)?;
            rep.param("depth", json!(depth.depth));
            let r = estimate_radii(&w, &s, depth.depth, prec, ctx.cap)?;
            rep.result = json!({
                "n": r.n,
                "rho2": enclosure(&r.rho2),
                "rho1": r.rho1.as_ref().map(enclosure),
                "running_inf": enclosure(&r.running_inf),
                "note": "finite-n diagnostics; no limit is claimed",
            });
            rep.certified = true;
        }
    }
    Ok(())
}

fn tau_cmd(c: &TauCmd, rep: &mut Report) -> Result<(), CliError> {
    match c {
        TauCmd::Check { seq } => {
            let tau = sequence(rep, seq)?;
            let config = TpConfig::default();
            rep.param("threshold", rat(&config.threshold));
            rep.param("window", json!(config.window));
            rep.param("min_drop", rat(&config.min_drop));
            let v = check_prefix_tp(&tau, &config);
            let reason = v.reason.as_ref().map(|r| match r {
                SuspectReason::BelowThreshold { index, ratio } => {
                    json!({ "kind": "below_threshold", "index": index, "ratio": rat(ratio) })
                }
                SuspectReason::TrailingDecrease { from, drop } => {
                    json!({ "kind": "trailing_decrease", "from": from, "drop": rat(drop) })
                }
            });
            let consistent = v.classification == Classification::PrefixConsistent;
            rep.table = Some(sequence_table(&v.ratios));
            rep.result = json!({
                "d_hat": rat(&v.d_hat),
                "argmin": v.argmin,
                "ratios": rats(&v.ratios),
                "classification": if consistent { "prefix_consistent" } else { "suspect_fail" },
                "reason": reason,
                "witness": { "x": rats(&v.witness.x), "norm": rat(&v.witness.norm), "t": rat(&v.witness.t) },
            });
            rep.certified = consistent;
        }
        TauCmd::Witness { seq, target } => {
            let tau = sequence(rep, seq)?;
            let target = rational_arg("target", target)?;
            rep.param("target", rat(&target));
            match failure_witness(&tau, &target)? {
                Some(w) => {
                    let support: Vec<usize> =
                        w.x.iter().enumerate().filter(|(_, v)| !num_traits::Zero::is_zero(*v)).map(|(i, _)| i + 1).collect();
                    let norm_ok = w.norm <= Rational::from_integer(1.into());
                    let t_ok = w.t >= target;
                    rep.result = json!({
                        "found": true,
                        "x": rats(&w.x),
                        "support": support,
                        "norm": { "value": rat(&w.norm), "at_most_one": norm_ok },
                        "t": { "value": rat(&w.t), "at_least_target": t_ok },
                    });
                    rep.certified = norm_ok && t_ok;
                }
                None => {
                    rep.result = json!({ "found": false, "reason": "prefix too short to exhibit the target" });
                    rep.certified = false;
                }
            }
        }
        TauCmd::Blockseq { rho, blocks } => {
            let rho = rational_arg("rho", rho)?;
            rep.param("rho", rat(&rho));
            rep.param("blocks", json!(blocks));
            let b = build_block_sequence(&rho, *blocks)?;
            rep.table = Some(sequence_table(b.tau.values()));
            rep.result = json!({
                "boundaries": b.boundaries,
                "below_rho_power": b.below_rho_power,
                "boundary_ratios": rats(&b.boundary_ratios),
                "ratios_bounded": b.ratios_bounded,
            });
            rep.certified = b.below_rho_power.is_none() && b.ratios_bounded;
        }
        TauCmd::Growth { seq, target } => {
            let tau = sequence(rep, seq)?;
            let d = rational_arg("target", target)?;
            rep.param("d", rat(&d));
            let g = growth_check(&tau, &d)?;
            let implication = !g.hypothesis_holds() || g.conclusion_holds();
            rep.result = json!({
                "hypothesis_failure": g.hypothesis_failure,
                "conclusion_failure": g.conclusion_failure,
                "implication_holds": implication,
            });
            rep.certified = implication;
        }
    }
    Ok(())
}

fn element_cmd(ctx: &Ctx, c: &ElementCmd, rep: &mut Report) -> Result<(), CliError> {
    let prec = ctx.precision;
    match c {
        ElementCmd::Convolve { spec, element: paths } => {
            let s = structure(rep, spec)?;
            let mut acc: Option<FinElement> = None;
            for p in paths {
                let f = element(rep, p, &s)?;
                acc = Some(match acc {
                    None => f,
                    Some(a) => convolve(&s, &a, &f)?,
                });
            }
            let f = acc.expect("at least one element");
            rep.result = json!({ "product": report::element(&f), "augmentation": scalar(&augmentation(&f)) });
            rep.certified = true;
        }
        ElementCmd::Norm { spec, weight: wp, element: ep } => {
            let s = structure(rep, spec)?;
            let w = weight(rep, wp, &s, prec)?;
            let f = element(rep, ep, &s)?;
            rep.result = json!({
                "omega_norm": enclosure(&omega_norm(&w, &s, &f, prec, ctx.cap)?),
                "l1_norm": enclosure(&l1_norm(&f, prec)),
            });
            rep.certified = true;
        }
        ElementCmd::Sigma { spec, element: ep, depth, weight: wp } => {
            let s = structure(rep, spec)?;
            let f = element(rep, ep, &s)?;
            rep.param("depth", json!(depth.depth));
            let tau = match wp {
                Some(p) => {
                    let w = weight(rep, p, &s, prec)?;
                    let t = tau_and_c(&w, &s, depth.depth, prec, ctx.cap)?;
                    Some(t.tau.iter().map(WeightValue::enclosure).collect::<Vec<_>>())
                }
                None => None,
            };
            let balls = ball_table(&s, depth.depth, ctx.cap)?;
            let r = sigma_sequence(&f, &balls, tau.as_deref(), prec)?;
            rep.table = Some(Table {
                header: vec!["n", "re_num", "re_den", "im_num", "im_den"],
                rows: r
                    .sigma
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let [a, b] = rat_cells(&c.re);
                        let [x, y] = rat_cells(&c.im);
                        vec![(i + 1).to_string(), a, b, x, y]
                    })
                    .collect(),
            });
            rep.result = json!({
                "sigma": r.sigma.iter().map(scalar).collect::<Vec<_>>(),
                "stabilized_at": r.stabilized_at,
                "augmentation": scalar(&r.augmentation),
                "abs_sum": enclosure(&r.abs_sum),
                "weighted_sum": r.weighted_sum.as_ref().map(enclosure),
            });
            rep.certified = r.stabilized_at.is_some();
        }
        ElementCmd::Augment { spec, element: ep } => {
            let s = structure(rep, spec)?;
            let f = element(rep, ep, &s)?;
            let a = augmentation(&f);
            rep.result = json!({ "augmentation": scalar(&a), "in_augmentation_ideal": a.is_zero() });
            rep.certified = true;
        }
    }
    Ok(())
}

fn ideal_cmd(ctx: &Ctx, c: &IdealCmd, rep: &mut Report) -> Result<(), CliError> {
    let prec = ctx.precision;
    match c {
        IdealCmd::Telescope { spec, element: ep } => {
            let s = structure(rep, spec)?;
            let f = element(rep, ep, &s)?;
            let e = s.identity();
            let order: Vec<Element> =
                std::iter::once(e.clone()).chain(f.support().filter(|u| **u != e).cloned()).collect();
            let d = telescope(&s, &f, &order)?;
            rep.result = json!({ "order": elems(&order), "decomposition": report::decomposition(&d) });
            rep.certified = true;
        }
        IdealCmd::DecomposePoint { spec, weight: wp, at, d } => {
            let s = structure(rep, spec)?;
            let w = weight(rep, wp, &s, prec)?;
            let u = element_arg(&s, at)?;
            let d = rational_arg("d", d)?;
            rep.param("at", encode_element(&u));
            rep.param("d", rat(&d));
            let p = decompose_point(&s, &w, &d, &u, prec, ctx.cap)?;
            rep.result = json!({
                "geodesic": p.geodesic.iter().map(|&i| encode_element(&s.generators()[i])).collect::<Vec<_>>(),
                "decomposition": report::decomposition(&p.decomposition),
                "chain_bound": bound_check(&p.chain),
                "norm_bounds": p.bounds.iter().map(bound_check).collect::<Vec<_>>(),
            });
            rep.certified = p.passed();
        }
        IdealCmd::DecomposeFull { spec, weight: wp, element: ep, d } => {
            let s = structure(rep, spec)?;
            let w = weight(rep, wp, &s, prec)?;
            let f = element(rep, ep, &s)?;
            let d = rational_arg("d", d)?;
            rep.param("d", rat(&d));
            let r = decompose_full(&s, &w, &d, &f, prec, ctx.cap)?;
            rep.result = json!({
                "order": elems(&r.order),
                "decomposition": report::decomposition(&r.decomposition),
                "bound": enclosure(&r.bound),
                "norm_bounds": r.checks.iter().map(bound_check).collect::<Vec<_>>(),
            });
            rep.certified = r.passed();
        }
        IdealCmd::DivideShift { spec, element: ep } => {
            let s = structure(rep, spec)?;
            let f = element(rep, ep, &s)?;
            let q = divide_shift(&s, &f)?;
            rep.result = json!({
                "side": match q.side { ShiftSide::Positive => "positive", ShiftSide::Negative => "negative" },
                "quotient": report::element(&q.quotient),
                "divisor": report::element(&q.divisor),
                "reconvolves": true,
            });
            rep.certified = true;
        }
        IdealCmd::RewritePf { spec, element: ep, depth } => {
            let s = structure(rep, spec)?;
            let f = element(rep, ep, &s)?;
            rep.param("depth", json!(depth.depth));
            let balls = ball_table(&s, depth.depth, ctx.cap)?;
            let r = rewrite_pseudofinite(&s, &balls, &f)?;
            rep.result = json!({
                "level": r.level,
                "generators": r.exprs.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "decomposition": report::decomposition(&r.decomposition),
            });
            rep.certified = true;
        }
        IdealCmd::Necessity { spec, element: paths, depth } => {
            let s = structure(rep, spec)?;
            let gens = paths.iter().map(|p| element(rep, p, &s)).collect::<Result<Vec<_>, _>>()?;
            rep.param("depth", json!(depth.depth));
            let r = pseudo_generation_necessity(&s, &gens, depth.depth, ctx.cap)?;
            rep.result = json!({
                "x": elems(&r.x),
                "sizes": r.sizes,
                "covering_level": r.covering_level,
                "stalled": r.stalled,
                "refuted": r.refuted,
            });
            rep.certified = !r.refuted;
        }
        IdealCmd::Witness45 { spec, blocks } => {
            let s = structure(rep, spec)?;
            rep.param("blocks", json!(blocks));
            let w = witness_prop45(&s, *blocks, ctx.cap)?;
            rep.table = Some(sequence_table(&w.sigma));
            rep.result = json!({
                "levels": w.levels,
                "points": elems(&w.points),
                "element": report::element(&w.element),
                "zeta_truncated": rat(&w.zeta),
                "sigma": rats(&w.sigma),
                "sigma_matches_tail": w.sigma_matches_tail,
                "lower_bounds": rats(&w.lower_bounds),
                "lower_bound_certified": w.lower_bound_holds,
                "harmonic_floor": rat(&w.harmonic_floor),
                "diverges_like_harmonic": w.diverges_like_harmonic,
                "note": "truncated witness; divergence of the untruncated sums is an analytic statement, not computed",
            });
            rep.certified = w.sigma_matches_tail && w.lower_bound_holds && w.diverges_like_harmonic;
        }
        IdealCmd::Witness65 { spec, weight: wp, alpha } => {
            let s = structure(rep, spec)?;
            let w = weight(rep, wp, &s, prec)?;
            let a = io::load_vector(alpha)?;
            rep.input("alpha", alpha, &a.bytes);
            let r = witness_nontp_element(&s, &w, &a.value, prec, ctx.cap)?;
            rep.table = Some(sequence_table(&r.sigma));
            rep.result = json!({
                "points": elems(&r.points),
                "element": report::element(&r.element),
                "norm": enclosure(&r.norm),
                "sigma": rats(&r.sigma),
                "sigma_matches_tails": r.sigma_matches_tails,
                "tau": r.tau.iter().map(enclosure).collect::<Vec<_>>(),
                "c": enclosure(&r.c),
                "weighted_sigma": enclosure(&r.weighted_sigma),
                "ceiling": enclosure(&r.ceiling),
                "gap": { "decision": decision(r.gap), "certified": r.gap.holds() },
                "note": "evidence at prefix scale",
            });
            rep.certified = r.sigma_matches_tails;
        }
        IdealCmd::Witness75 { rho, blocks } => {
            let rho = rational_arg("rho", rho)?;
            rep.param("rho", rat(&rho));
            rep.param("blocks", json!(blocks));
            let w = witness_thm75(&rho, *blocks, prec)?;
            let terms: Vec<Value> = w
                .terms
                .iter()
                .map(|t| json!({ "k": t.k, "n_k": t.n_k, "base": rat(&t.base), "weighted": enclosure(&t.weighted), "within_ceiling": t.within_ceiling }))
                .collect();
            rep.result = json!({
                "terms": terms,
                "norm": enclosure(&w.norm),
                "ceiling": rat(&w.ceiling),
                "bounded": { "certified": w.bounded },
                "divisor_norm": rat(&w.divisor_norm),
                "flag": "bounded element, divergent divisor",
            });
            rep.certified = w.bounded;
        }
    }
    Ok(())
}
