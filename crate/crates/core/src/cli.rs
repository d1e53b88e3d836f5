//! Command-line front end: law suites over the instance zoo, the resource
//! program interpreter, and change of enrichment.
//!
//! Exit codes: 0 all laws pass, 1 a law fails, 2 separation violation,
//! 3 configuration error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::duoidal::{
    check_duoidal_laws_with, duoidal_from_products, find_zeta_non_surjective, finset_cartesian_duoidal, finset_cocartesian_duoidal,
    finset_products, label_duoidal, mutant_broken_delta, mutant_zeta_swapped, mutant_zeta_unrestricted, opposite_duoidal,
    subset_duoidal, subset_products, Duoidal, LawCfg, ProbeCfg,
};
use crate::enrich::{
    change_enrichment, check_double_lax, forgetful_functor, hom_profile, identity_functor, pf_bang, sep_hom_functor,
    sep_hom_functor_unchecked, try_par, DlCfg, DoubleLaxFunctor, SepHom, UnitorSide,
};
use crate::finset::{Elem, FinSet};
use crate::freyd::{
    check_adjunction, check_freyd, coreflection_witness, freyd_probes, load_freyd_json, noncentral_j_mutant, to_subset_freyd,
    AdjCfg, FreydCat, FreydCfg, SubsetFreyd, UCfg,
};
use crate::mcat::{bit_base, TypeObj};
use crate::report::LawReport;
use crate::resources::{
    all_stores, build_resource_variant, check_program, parse_store, run, ProgramFile, ResError, ResourceCtx, ResourceVariant,
};
use crate::sepmonoid::{check_separated_laws, drop_separation, nat_sep_monoid, pf_sep_monoid, product_sep, SepMonoid};
use crate::vfreyd::{check_derived_lemmas, check_vfreyd, VFreyd, VfCfg};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_LAW: i32 = 1;
pub const EXIT_SEPARATION: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

const DEFAULT_SEED: u64 = 0x5eed;
const MARKED_Z2: &str = include_str!("../freyd/z2_distinguished.json");

#[derive(Parser, Debug)]
#[command(name = "duofreyd", version, about = "Law checkers for duoidally enriched Freyd categories")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run a law suite on a named instance or a file.
    Check(CheckArgs),
    /// Type-check and run a resource program.
    Run(RunArgs),
    /// Change the enrichment of the resource instance and check the result.
    Enrich(EnrichArgs),
    /// List the named instances per suite.
    List,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Duoidal,
    Sepmonoid,
    Vfreyd,
    Freyd,
    Adjunction,
    Doublelax,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Table,
    Jsonl,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Probe seed; DUOFREYD_SEED is used when absent.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Largest carrier size among probe objects.
    #[arg(long, default_value_t = 2)]
    max_size: usize,
    /// Elements enumerated per law instance, and per label of a resource hom.
    #[arg(long, default_value_t = 4096)]
    budget: u128,
    /// Object tuples per law before sampling.
    #[arg(long, default_value_t = 200_000)]
    max_instances: usize,
    /// Morphism tuples per naturality or functoriality law before sampling.
    #[arg(long, default_value_t = 4000)]
    max_morphism_instances: usize,
}

#[derive(Args, Debug, Clone)]
struct ResArgs {
    /// Number of resources.
    #[arg(long = "R", default_value_t = 1)]
    r: usize,
    /// Bits per resource.
    #[arg(long, default_value_t = 1)]
    bits: u32,
    /// Base types to probe, comma separated.
    #[arg(long, default_value = "e,bit")]
    types: String,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long)]
    instance: Option<String>,
    /// JSON instance (sepmonoid, freyd) or homomorphism table (doublelax).
    #[arg(long)]
    file: Option<PathBuf>,
    #[command(flatten)]
    res: ResArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct RunArgs {
    file: PathBuf,
    #[arg(long, default_value = "*")]
    input: String,
    /// Initial store such as `x=0,y=1`; all zeros when absent.
    #[arg(long)]
    store: Option<String>,
}

#[derive(Args, Debug)]
struct EnrichArgs {
    #[arg(long, default_value = "resources")]
    instance: String,
    #[arg(long, group = "functor")]
    forgetful: bool,
    /// Homomorphism table `target ...` / `m -> n`.
    #[arg(long, group = "functor")]
    sep_hom: Option<PathBuf>,
    #[arg(long, group = "functor")]
    identity: bool,
    #[command(flatten)]
    res: ResArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug)]
struct ConfigError(String);

impl<E: std::fmt::Display> From<E> for ConfigError {
    fn from(e: E) -> Self {
        ConfigError(e.to_string())
    }
}

type CmdResult = Result<i32, ConfigError>;

pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    execute(std::env::args_os(), &mut out)
}

/// Parses `args` (program name first) and runs the command, writing the
/// report to `out`. Returns the exit code.
pub fn execute<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let _ = write!(out, "{e}");
            return code;
        }
    };
    let res = match cli.cmd {
        Cmd::Check(a) => cmd_check(&a, out),
        Cmd::Run(a) => cmd_run(&a, out),
        Cmd::Enrich(a) => cmd_enrich(&a, out),
        Cmd::List => cmd_list(out),
    };
    match res {
        Ok(code) => code,
        Err(ConfigError(msg)) => {
            let _ = writeln!(out, "error: {msg}");
            EXIT_CONFIG
        }
    }
}

fn seed(flag: Option<u64>) -> Result<u64, ConfigError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("DUOFREYD_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| ConfigError(format!("DUOFREYD_SEED={s} is not an integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn law_cfg(c: &Common) -> Result<LawCfg, ConfigError> {
    if c.budget == 0 || c.max_size == 0 || c.max_instances == 0 || c.max_morphism_instances == 0 {
        return Err(ConfigError("budgets must be positive".into()));
    }
    Ok(LawCfg {
        probe: ProbeCfg { budget: c.budget, seed: seed(c.seed)? },
        max_instances: c.max_instances,
        max_morphism_instances: c.max_morphism_instances,
    })
}

fn emit(out: &mut dyn Write, fmt: Format, reports: &[LawReport]) -> CmdResult {
    for r in reports {
        match fmt {
            Format::Table => writeln!(out, "{r}")?,
            Format::Jsonl => {
                let lines = r.to_jsonl();
                if !lines.is_empty() {
                    writeln!(out, "{lines}")?;
                }
            }
        }
    }
    Ok(if reports.iter().all(LawReport::passed) { EXIT_PASS } else { EXIT_LAW })
}

fn unknown(kind: &str, name: &str) -> ConfigError {
    ConfigError(format!("unknown {kind} instance `{name}` (see `duofreyd list`)"))
}

fn resource_ctx(r: &ResArgs) -> Result<ResourceCtx, ConfigError> {
    if r.bits == 0 || r.bits > 4 {
        return Err(ConfigError("--bits must be between 1 and 4".into()));
    }
    let names = ResourceCtx::bits(r.r).resources.into_iter().map(|(n, _)| (n, FinSet::range(1 << r.bits)));
    Ok(ResourceCtx::new(names.collect(), bit_base()))
}

fn types(r: &ResArgs) -> Vec<TypeObj> {
    r.types.split(',').map(str::trim).filter(|s| !s.is_empty()).map(TypeObj::parse).collect()
}

fn resource_instance(r: &ResArgs, variant: ResourceVariant, budget: u128) -> Result<crate::resources::ResourceVFreyd, ConfigError> {
    let ctx = resource_ctx(r)?;
    let ts = types(r);
    for t in &ts {
        ctx.value_size(t)?;
    }
    Ok(build_resource_variant(&ctx, &ts, variant, budget)?)
}

const DUOIDALS: &[&str] = &[
    "subset",
    "label",
    "finset-cartesian",
    "finset-cocartesian",
    "opposite-subset",
    "products-finset",
    "products-subset",
    "mutant-zeta-restriction",
    "mutant-broken-delta",
    "mutant-zeta-swapped",
];
const SEPMONOIDS: &[&str] = &["pf", "nat", "product", "mutant-drop-separation"];
const VFREYDS: &[&str] = &[
    "resources",
    "mutant-par-nosep",
    "mutant-seq-nolift",
    "mutant-hommap-label",
    "free-trivial",
    "free-z2",
    "free-d4",
    "free-left-zero-writer",
    "marked-z2",
];
const FREYDS: &[&str] = &["trivial", "z2", "d4", "left-zero-writer", "mutant-noncentral-j"];
const DOUBLELAX: &[&str] =
    &["identity-subset", "sep-hom", "forgetful-subset", "forgetful-label", "mutant-sep-hom-unreflected"];

fn cmd_list(out: &mut dyn Write) -> CmdResult {
    for (k, names) in [
        ("duoidal", DUOIDALS),
        ("sepmonoid", SEPMONOIDS),
        ("vfreyd", VFREYDS),
        ("freyd", FREYDS),
        ("adjunction", &["probes"][..]),
        ("doublelax", DOUBLELAX),
    ] {
        writeln!(out, "{k}: {}", names.join(", "))?;
    }
    Ok(EXIT_PASS)
}

fn slug(name: &str) -> String {
    name.to_lowercase().replace(' ', "-")
}

fn duoidal_instance(name: &str, r: &ResArgs) -> Result<Arc<dyn Duoidal>, ConfigError> {
    let s = subset_duoidal();
    Ok(match name {
        "subset" => Arc::new(s),
        "label" => Arc::new(label_duoidal(&pf_sep_monoid(&resource_ctx(r)?.names()))?),
        "finset-cartesian" => Arc::new(finset_cartesian_duoidal()),
        "finset-cocartesian" => Arc::new(finset_cocartesian_duoidal()),
        "opposite-subset" => Arc::new(opposite_duoidal(Arc::new(s))),
        "products-finset" => Arc::new(duoidal_from_products(&finset_products())?),
        "products-subset" => Arc::new(duoidal_from_products(&subset_products())?),
        "mutant-zeta-restriction" => Arc::new(mutant_zeta_unrestricted(&s)),
        "mutant-broken-delta" => Arc::new(mutant_broken_delta(&s)),
        "mutant-zeta-swapped" => Arc::new(mutant_zeta_swapped(&s)),
        _ => return Err(unknown("duoidal", name)),
    })
}

fn sep_instance(a: &CheckArgs, name: &str) -> Result<SepMonoid, ConfigError> {
    if let Some(p) = &a.file {
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p)?)?;
        return Ok(SepMonoid::from_json(&v)?);
    }
    let pf = pf_sep_monoid(&resource_ctx(&a.res)?.names());
    Ok(match name {
        "pf" => pf,
        "nat" => nat_sep_monoid(),
        "product" => product_sep(&pf, &nat_sep_monoid()),
        "mutant-drop-separation" => {
            let first = pf.probes.last().cloned().unwrap_or_else(|| Elem::list(vec![]));
            drop_separation(&pf, Elem::list(vec![]), first)
        }
        _ => return Err(unknown("sepmonoid", name)),
    })
}

fn freyd_instance(a: &CheckArgs, name: &str) -> Result<(FreydCat, Vec<crate::mcat::BMor>), ConfigError> {
    if let Some(p) = &a.file {
        return Ok(load_freyd_json(&std::fs::read_to_string(p)?)?);
    }
    if name == "mutant-noncentral-j" {
        return Ok((noncentral_j_mutant(), Vec::new()));
    }
    freyd_probes().into_iter().find(|p| slug(&p.name) == name).map(|p| (p, Vec::new())).ok_or_else(|| unknown("freyd", name))
}

fn marked_z2() -> Result<SubsetFreyd, ConfigError> {
    let (z2, extra) = load_freyd_json(MARKED_Z2)?;
    Ok(SubsetFreyd::new(&z2, &extra))
}

fn cmd_check(a: &CheckArgs, out: &mut dyn Write) -> CmdResult {
    let law = law_cfg(&a.common)?;
    let inst = |d: &str| a.instance.clone().unwrap_or_else(|| d.to_string());
    let reports = match a.kind {
        Kind::Duoidal => {
            let name = inst("subset");
            let v = duoidal_instance(&name, &a.res)?;
            let probes = v.probe_objects(a.common.max_size);
            let mut r = check_duoidal_laws_with(&*v, &probes, &law);
            if !name.starts_with("mutant") {
                if let Some(w) = find_zeta_non_surjective(&*v, &probes) {
                    let keys: Vec<&str> = w.objects.iter().map(|o| o.key()).collect();
                    r.note(format!("ζ is not surjective at ({}): misses {}", keys.join(", "), w.missing));
                }
            }
            vec![r]
        }
        Kind::Sepmonoid => vec![check_separated_laws(&sep_instance(a, &inst("pf"))?, None)],
        Kind::Vfreyd => {
            let name = inst("resources");
            let vf = VfCfg { law, ..VfCfg::default() };
            let variant = match name.as_str() {
                "resources" => Some(ResourceVariant::Sound),
                "mutant-par-nosep" => Some(ResourceVariant::ParUnseparated),
                "mutant-seq-nolift" => Some(ResourceVariant::SeqNoLift),
                "mutant-hommap-label" => Some(ResourceVariant::HomMapAddsResource),
                _ => None,
            };
            let c: Arc<dyn VFreyd> = match variant {
                Some(v) => Arc::new(resource_instance(&a.res, v, a.common.budget)?),
                None if name == "marked-z2" => Arc::new(marked_z2()?),
                None => {
                    let p = name.strip_prefix("free-").ok_or_else(|| unknown("vfreyd", &name))?;
                    let fc = freyd_probes().into_iter().find(|f| slug(&f.name) == p).ok_or_else(|| unknown("vfreyd", &name))?;
                    Arc::new(to_subset_freyd(&fc))
                }
            };
            let ts = if variant.is_some() { types(&a.res) } else { c.type_probes() };
            vec![check_vfreyd(&*c, &ts, &vf), check_derived_lemmas(&*c, &ts, &vf)]
        }
        Kind::Freyd => {
            let (f, _) = freyd_instance(a, &inst("z2"))?;
            vec![check_freyd(&f, &FreydCfg { seed: law.probe.seed, ..FreydCfg::default() })]
        }
        Kind::Adjunction => {
            let probes = freyd_probes();
            let mut subs: Vec<Arc<SubsetFreyd>> = probes.iter().map(|p| Arc::new(to_subset_freyd(p))).collect();
            let marked = Arc::new(marked_z2()?);
            subs.push(marked.clone());
            let cfg = AdjCfg { vf: VfCfg { law, ..VfCfg::default() }, u: UCfg::default() };
            let mut r = check_adjunction(&probes, &subs, &cfg);
            for s in &subs {
                let verdict = match coreflection_witness(&**s, &cfg.u)? {
                    None => "in the image of the free functor".to_string(),
                    Some(w) => format!("not in the image: {w}"),
                };
                r.note(format!("{}: {verdict}", s.name()));
            }
            vec![r]
        }
        Kind::Doublelax => {
            let name = inst("sep-hom");
            let f = doublelax_instance(a, &name)?;
            let probes = f.src.probe_objects(a.common.max_size);
            vec![check_double_lax(&f, &probes, &DlCfg { law, ..DlCfg::default() })]
        }
    };
    emit(out, a.common.format, &reports)
}

fn doublelax_instance(a: &CheckArgs, name: &str) -> Result<DoubleLaxFunctor, ConfigError> {
    let names = resource_ctx(&a.res)?.names();
    Ok(match name {
        "identity-subset" => identity_functor(Arc::new(subset_duoidal())),
        "sep-hom" => match &a.file {
            Some(p) => sep_hom_functor(&SepHom::parse_table("φ", pf_sep_monoid(&names), &std::fs::read_to_string(p)?)?)?,
            None => sep_hom_functor(&pf_bang(&names))?,
        },
        "forgetful-subset" => forgetful_functor(Arc::new(subset_duoidal()), UnitorSide::Left)?,
        "forgetful-label" => forgetful_functor(Arc::new(label_duoidal(&pf_sep_monoid(&names))?), UnitorSide::Left)?,
        "mutant-sep-hom-unreflected" => {
            let m = pf_sep_monoid(&names);
            let e = m.unit.clone();
            sep_hom_functor_unchecked(&SepHom { name: "cst_e".into(), src: m.clone(), dst: m, map: Arc::new(move |_| e.clone()) })?
        }
        _ => return Err(unknown("doublelax", name)),
    })
}

fn cmd_run(a: &RunArgs, out: &mut dyn Write) -> CmdResult {
    let src = std::fs::read_to_string(&a.file).map_err(|e| ConfigError(format!("{}: {e}", a.file.display())))?;
    let p = ProgramFile::parse(&src)?;
    match check_program(&p.ctx, &p.main) {
        Err(e @ ResError::Separation { .. }) => {
            writeln!(out, "rejected: {e}")?;
            return Ok(EXIT_SEPARATION);
        }
        Err(e) => return Err(e.into()),
        Ok(_) => {}
    }
    let input = Elem::parse(&a.input)?;
    let store = match &a.store {
        Some(s) => parse_store(&p.ctx, s)?,
        None => all_stores(&p.ctx).remove(0),
    };
    let r = run(&p.ctx, &p.main, &input, &store)?;
    let shown: Vec<String> = p.ctx.resources.iter().zip(&r.store).map(|((n, _), v)| format!("{n}={v}")).collect();
    writeln!(out, "output: {}", r.output)?;
    writeln!(out, "store: {}", shown.join(","))?;
    writeln!(out, "label: {{{}}}", r.label.join(","))?;
    Ok(EXIT_PASS)
}

fn describe(c: &dyn VFreyd, ts: &[TypeObj]) -> Vec<String> {
    hom_profile(c, ts)
        .into_iter()
        .map(|(a, b, by)| {
            let parts: Vec<String> = by.iter().map(|(g, n)| format!("{g}:{n}")).collect();
            let total: u128 = by.iter().map(|(_, n)| n).sum();
            format!("C({a},{b}) = {total} [{}]", parts.join(" "))
        })
        .collect()
}

fn cmd_enrich(a: &EnrichArgs, out: &mut dyn Write) -> CmdResult {
    if a.instance != "resources" {
        return Err(unknown("enrich", &a.instance));
    }
    let law = law_cfg(&a.common)?;
    let table = a.common.format == Format::Table;
    let ctx = resource_ctx(&a.res)?;
    let c = Arc::new(resource_instance(&a.res, ResourceVariant::Sound, a.common.budget)?);
    let ts = types(&a.res);
    let f = if a.forgetful {
        forgetful_functor(c.v(), UnitorSide::Left)?
    } else if let Some(p) = &a.sep_hom {
        sep_hom_functor(&SepHom::parse_table("φ", ctx.monoid(), &std::fs::read_to_string(p)?)?)?
    } else if a.identity {
        identity_functor(c.v())
    } else {
        return Err(ConfigError("choose one of --forgetful, --sep-hom <table>, --identity".into()));
    };
    let f = Arc::new(f);
    let dl = check_double_lax(&f, &f.src.probe_objects(a.common.max_size), &DlCfg { law, ..DlCfg::default() });
    if !dl.passed() {
        return emit(out, a.common.format, &[dl]);
    }
    let changed = change_enrichment(f.clone(), c.clone())?;
    let before = describe(&*c, &ts);
    let after = describe(&changed, &ts);
    if table {
        writeln!(out, "functor {}: {} → {}", f.name, f.src.name(), f.dst.name())?;
        writeln!(out, "before:")?;
        for l in &before {
            writeln!(out, "  {l}")?;
        }
        writeln!(out, "after:")?;
        for l in &after {
            writeln!(out, "  {l}")?;
        }
    }
    let mut extra = LawReport::new(format!("change of enrichment along {}", f.name));
    if a.identity {
        extra.check("description-round-trip", "", if before == after { Ok(1) } else { Err("descriptions differ".into()) });
    }
    if a.forgetful {
        for x in &ts {
            for y in &ts {
                let (na, nb) = (ctx.value_size(x)? as u32, ctx.value_size(y)? as u128);
                let got = changed.hom(x, y).count();
                let want = nb.pow(na);
                extra.check("pure-map-count", format!("{x}, {y}"), if got == want { Ok(1) } else { Err(format!("{got} maps, expected {want}")) });
            }
        }
    }
    if a.sep_hom.is_some() {
        let e = TypeObj::unit();
        let h = c.hom(&e, &e);
        let dst_sep = |x: &Elem, y: &Elem| {
            let w = f.dst.clone();
            let fh = f.on_obj(&h);
            w.par(&fh, &fh).contains(&Elem::pair(x.clone(), y.clone()))
        };
        if let Some(xs) = h.elements(a.common.budget) {
            let empty = |x: &Elem| h.grade_of(x).and_then(|g| g.as_list().map(<[Elem]>::is_empty)).unwrap_or(false);
            let (mut acc, mut rej, mut bad) = (0u64, 0u64, Vec::new());
            for x in &xs {
                for y in &xs {
                    let ok = try_par(&changed, &e, &e, &e, &e, x, y).is_some();
                    if ok {
                        acc += 1;
                    } else {
                        rej += 1;
                    }
                    if ok != dst_sep(x, y) || (ok && try_par(&*c, &e, &e, &e, &e, x, y).is_none()) {
                        bad.push(format!("({x}, {y})"));
                    }
                    if !ok && (empty(x) || empty(y)) {
                        bad.push(format!("({x}, {y}) has a resource-free side"));
                    }
                }
            }
            if table {
                writeln!(out, "par on C(e,e): {acc} pairs accepted, {rej} rejected")?;
            }
            extra.check("par-domain", "C(e,e) ∗ C(e,e)", if bad.is_empty() { Ok(acc + rej) } else { Err(bad[0].clone()) });
        }
    }
    let vf = VfCfg { law, ..VfCfg::default() };
    let r = check_vfreyd(&changed, &ts, &vf);
    emit(out, a.common.format, &[extra, r])
}
