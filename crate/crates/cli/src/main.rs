mod cache;
mod error;
mod inputs;
mod render;
mod request;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fraisse_core::flows::{DEFAULT_ELEMENT_CAP, DEFAULT_POINT_CAP, DEFAULT_SUBGROUP_CAP};
use fraisse_core::ramsey::DEFAULT_BUDGET;
use fraisse_core::report::{Report, Verdict};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use cache::Cache;
use error::CliError;
use request::{Axiom, FlowCaps, Request};

#[derive(Parser)]
#[command(name = "fraisse", version, about = "Finite checks for Fraisse classes, Ramsey-type properties and group flows")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,

    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Report cache directory.
    #[arg(long, env = "FRAISSE_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,

    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Seed for sampling in `cache audit`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// List the members of a class with N points, up to isomorphism.
    Enumerate {
        #[command(flatten)]
        class: ClassArg,
        #[arg(long)]
        n: usize,
    },
    /// Bounded checks of the class axioms.
    Class {
        #[command(subcommand)]
        command: ClassCommand,
    },
    /// Finite approximations of the limit.
    Limit {
        #[command(subcommand)]
        command: LimitCommand,
    },
    /// Ramsey witnesses: check a candidate or search by size.
    Ramsey {
        #[command(subcommand)]
        command: RamseyCommand,
    },
    /// The ordering property of an order expansion.
    Ordering {
        #[command(subcommand)]
        command: OrderingCommand,
    },
    /// Ramsey property relative to a base class.
    #[command(name = "relative-ramsey")]
    RelativeRamsey {
        #[command(subcommand)]
        command: RelativeCommand,
    },
    /// The weak ordering property on a limit approximation.
    #[command(name = "weak-ordering")]
    WeakOrdering {
        #[command(subcommand)]
        command: WeakCommand,
    },
    /// Whether an ordering is realized in the expansion class.
    Claim {
        #[command(subcommand)]
        command: ClaimCommand,
    },
    /// Cross-checks between weak and full ordering properties.
    Audit {
        #[command(subcommand)]
        command: AuditCommand,
    },
    /// Finite flows of permutation groups.
    Flow {
        #[command(subcommand)]
        command: FlowCommand,
    },
    /// Orderings of a structure preserved by all its partial automorphisms.
    #[command(name = "invariant-orderings")]
    InvariantOrderings {
        #[arg(long)]
        structure: String,
    },
    /// Inspect the report cache.
    Cache {
        #[command(subcommand)]
        command: CacheCommand,
    },
}

#[derive(Args)]
struct ClassArg {
    /// Builtin class name or class-spec file.
    #[arg(long, alias = "spec")]
    class: String,
}

#[derive(Args)]
struct ExpansionArgs {
    /// Order-expansion class (builtin name or class-spec file).
    #[arg(long, alias = "spec")]
    class: String,
    /// Base class; defaults to the expansion's own base.
    #[arg(long)]
    base: Option<String>,
}

#[derive(Subcommand)]
enum ClassCommand {
    /// Bounded check of one axiom on members with at most N points.
    Check {
        #[arg(value_enum)]
        axiom: Axiom,
        #[command(flatten)]
        class: ClassArg,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum LimitCommand {
    /// Build a carrier realizing every one-point extension up to the given level.
    Build {
        #[command(flatten)]
        class: ClassArg,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 12)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum RamseyCommand {
    /// Whether C is a Ramsey witness for (A, B, k).
    Verify {
        #[command(flatten)]
        class: ClassArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        c: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// The least Ramsey witness with at most MAX points.
    Search {
        #[command(flatten)]
        class: ClassArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        max: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Subcommand)]
enum OrderingCommand {
    /// Whether B0 has the ordering property for A0 in the expansion.
    Verify {
        #[command(flatten)]
        class: ExpansionArgs,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// The least ordering-property witness with at most MAX points.
    Search {
        #[command(flatten)]
        class: ExpansionArgs,
        #[arg(long)]
        a: String,
        #[arg(long)]
        max: usize,
    },
}

#[derive(Subcommand)]
enum RelativeCommand {
    /// Whether C0 is a relative Ramsey witness for (A, B, k).
    Verify {
        #[command(flatten)]
        class: ExpansionArgs,
        /// A0, a member of the base class.
        #[arg(long)]
        a: String,
        /// B, a member of the expansion.
        #[arg(long)]
        b: String,
        #[arg(long)]
        k: usize,
        /// C0, a member of the base class.
        #[arg(long)]
        c: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Subcommand)]
enum WeakCommand {
    /// Whether the given points of the carrier witness the weak ordering property.
    Verify {
        #[command(flatten)]
        class: ExpansionArgs,
        #[arg(long)]
        a: String,
        /// Carrier points of the designated copy of B0, comma separated.
        #[arg(long)]
        b: String,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 12)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum ClaimCommand {
    /// Whether F0 ordered by the given ordering contains every member with at most M points.
    Realizes {
        #[command(flatten)]
        class: ClassArg,
        #[arg(long)]
        structure: String,
        /// Points from least to greatest, comma separated.
        #[arg(long)]
        ordering: String,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Subcommand)]
enum AuditCommand {
    /// Compare weak and full ordering property witnesses over all small members.
    #[command(name = "wop-op")]
    WopOp {
        #[command(flatten)]
        class: ExpansionArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 8)]
        cap: usize,
        #[arg(long, default_value_t = 6)]
        max: usize,
    },
}

#[derive(Args, Clone, Copy)]
struct GroupCaps {
    #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
    element_cap: usize,
    #[arg(long, default_value_t = DEFAULT_SUBGROUP_CAP)]
    subgroup_cap: usize,
    #[arg(long, default_value_t = DEFAULT_POINT_CAP)]
    point_cap: usize,
}

impl From<GroupCaps> for FlowCaps {
    fn from(c: GroupCaps) -> FlowCaps {
        FlowCaps { element_cap: c.element_cap, subgroup_cap: c.subgroup_cap, point_cap: c.point_cap }
    }
}

#[derive(Subcommand)]
enum FlowCommand {
    /// Sym(N) acting on the orderings of N points.
    Lo {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        caps: GroupCaps,
    },
    /// Orbits of the flow.
    Orbits {
        #[arg(long)]
        flow: String,
        #[command(flatten)]
        caps: GroupCaps,
    },
    /// Points fixed by every given element.
    Fix {
        #[arg(long)]
        flow: String,
        /// Permutations generating H (JSON text or file).
        #[arg(long)]
        h: Option<String>,
        #[command(flatten)]
        caps: GroupCaps,
    },
    /// Stabilizer of a point.
    Stab {
        #[arg(long)]
        flow: String,
        #[arg(long)]
        x: usize,
        #[command(flatten)]
        caps: GroupCaps,
    },
    /// Whether the flow is a single orbit.
    Minimal {
        #[arg(long)]
        flow: String,
        #[command(flatten)]
        caps: GroupCaps,
    },
    /// Search for an equivariant surjection onto a second flow.
    Factor {
        #[arg(long)]
        flow: String,
        #[arg(long)]
        onto: String,
        #[command(flatten)]
        caps: GroupCaps,
    },
    /// Whether every subgroup class has a fixed point in the flow.
    Universal {
        #[arg(long)]
        flow: String,
        #[command(flatten)]
        caps: GroupCaps,
    },
    /// Fixed points of a subgroup across all coset flows.
    #[command(name = "rel-ea")]
    RelEa {
        #[arg(long)]
        group: String,
        #[arg(long)]
        h: Option<String>,
        #[command(flatten)]
        caps: GroupCaps,
    },
    /// Check that universality and minimality agree with the fix criterion.
    #[command(name = "audit-minimality")]
    AuditMinimality {
        #[arg(long)]
        flow: String,
        #[arg(long, default_value_t = 0)]
        x: usize,
        #[command(flatten)]
        caps: GroupCaps,
    },
    /// Whether no element outside a subgroup fixes one of its fixed points.
    #[command(name = "maximal-fix")]
    MaximalFix {
        #[arg(long)]
        flow: String,
        #[arg(long)]
        h: Option<String>,
        #[command(flatten)]
        caps: GroupCaps,
    },
}

#[derive(Subcommand)]
enum CacheCommand {
    /// Recompute a seeded sample of cache entries and compare.
    Audit {
        #[arg(long, default_value_t = 16)]
        sample: usize,
    },
}

fn resolve(command: Command) -> Result<Request, CliError> {
    use inputs::*;
    Ok(match command {
        Command::Enumerate { class: c, n } => Request::Enumerate { class: class(&c.class)?, n },
        Command::Class { command: ClassCommand::Check { axiom, class: c, n, cap } } => {
            Request::ClassCheck { axiom, class: class(&c.class)?, n, cap }
        }
        Command::Limit { command: LimitCommand::Build { class: c, level, cap } } => {
            Request::LimitBuild { class: class(&c.class)?, level, cap }
        }
        Command::Ramsey { command: RamseyCommand::Verify { class: c, a, b, k, c: cc, budget } } => {
            let k_ = class(&c.class)?;
            Request::RamseyVerify {
                a: structure(&a, &k_, "a")?,
                b: structure(&b, &k_, "b")?,
                c: structure(&cc, &k_, "c")?,
                class: k_,
                k,
                budget,
            }
        }
        Command::Ramsey { command: RamseyCommand::Search { class: c, a, b, k, max, budget } } => {
            let k_ = class(&c.class)?;
            Request::RamseySearch { a: structure(&a, &k_, "a")?, b: structure(&b, &k_, "b")?, class: k_, k, max, budget }
        }
        Command::Ordering { command: OrderingCommand::Verify { class: c, a, b } } => {
            let k = class(&c.class)?;
            let k0 = base(c.base.as_deref(), &k)?;
            Request::OrderingVerify { a: structure(&a, &k0, "a")?, b: structure(&b, &k0, "b")?, class: k, base: k0 }
        }
        Command::Ordering { command: OrderingCommand::Search { class: c, a, max } } => {
            let k = class(&c.class)?;
            let k0 = base(c.base.as_deref(), &k)?;
            Request::OrderingSearch { a: structure(&a, &k0, "a")?, class: k, base: k0, max }
        }
        Command::RelativeRamsey { command: RelativeCommand::Verify { class: c, a, b, k, c: cc, budget } } => {
            let kk = class(&c.class)?;
            let k0 = base(c.base.as_deref(), &kk)?;
            Request::RelativeRamseyVerify {
                a: structure(&a, &k0, "a")?,
                b: structure(&b, &kk, "b")?,
                c: structure(&cc, &k0, "c")?,
                class: kk,
                base: k0,
                k,
                budget,
            }
        }
        Command::WeakOrdering { command: WeakCommand::Verify { class: c, a, b, level, cap } } => {
            let k = class(&c.class)?;
            let k0 = base(c.base.as_deref(), &k)?;
            Request::WeakOrderingVerify { a: structure(&a, &k0, "a")?, b: points(&b)?, class: k, base: k0, level, cap }
        }
        Command::Claim { command: ClaimCommand::Realizes { class: c, structure: s, ordering: o, m } } => {
            let k = class(&c.class)?;
            let base_k = k.base_class();
            let f0 = match &base_k {
                Some(k0) => structure(&s, k0, "structure")?,
                None => structure_file(&s)?,
            };
            Request::ClaimRealizes { class: k, structure: f0, ordering: ordering(&o)?, m }
        }
        Command::Audit { command: AuditCommand::WopOp { class: c, n, level, cap, max } } => {
            let k = class(&c.class)?;
            let k0 = base(c.base.as_deref(), &k)?;
            Request::AuditWopOp { class: k, base: k0, n, level, cap, max }
        }
        Command::Flow { command } => match command {
            FlowCommand::Lo { n, caps } => Request::FlowLo { n, caps: caps.into() },
            FlowCommand::Orbits { flow: f, caps } => Request::FlowOrbits { flow: flow(&f)?, caps: caps.into() },
            FlowCommand::Fix { flow: f, h, caps } => {
                Request::FlowFix { flow: flow(&f)?, h: perms(h.as_deref())?, caps: caps.into() }
            }
            FlowCommand::Stab { flow: f, x, caps } => Request::FlowStab { flow: flow(&f)?, x, caps: caps.into() },
            FlowCommand::Minimal { flow: f, caps } => Request::FlowMinimal { flow: flow(&f)?, caps: caps.into() },
            FlowCommand::Factor { flow: f, onto, caps } => {
                Request::FlowFactor { flow: flow(&f)?, onto: flow(&onto)?, caps: caps.into() }
            }
            FlowCommand::Universal { flow: f, caps } => Request::FlowUniversal { flow: flow(&f)?, caps: caps.into() },
            FlowCommand::RelEa { group: g, h, caps } => {
                Request::FlowRelEa { group: group(&g)?, h: perms(h.as_deref())?, caps: caps.into() }
            }
            FlowCommand::AuditMinimality { flow: f, x, caps } => {
                Request::FlowAuditMinimality { flow: flow(&f)?, x, caps: caps.into() }
            }
            FlowCommand::MaximalFix { flow: f, h, caps } => {
                Request::FlowMaximalFix { flow: flow(&f)?, h: perms(h.as_deref())?, caps: caps.into() }
            }
        },
        Command::InvariantOrderings { structure: s } => Request::InvariantOrderings { structure: structure_file(&s)? },
        Command::Cache { .. } => unreachable!("handled before resolution"),
    })
}

fn cache_audit(cache: Option<&Cache>, sample_size: usize, seed: u64) -> Result<Report, CliError> {
    let instance = json!({ "operation": "cache-audit", "sample": sample_size, "seed": seed });
    let Some(cache) = cache else {
        return Err(CliError::Usage("cache audit needs a cache directory".into()));
    };
    let keys = cache.keys().map_err(|e| CliError::Input(format!("cannot list {}: {e}", cache.dir().display())))?;
    if keys.is_empty() {
        return Ok(Report::new("cache_transparency", instance, Verdict::VacuousTrue));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked: Vec<usize> = sample(&mut rng, keys.len(), sample_size.min(keys.len())).into_vec();
    picked.sort_unstable();
    let mut mismatched = Vec::new();
    let mut checked = Vec::new();
    for &i in &picked {
        let key = &keys[i];
        let entry = cache.load(key).map_err(|e| CliError::Input(format!("unreadable cache entry {key}: {e}")))?;
        let fresh = entry.request.execute()?;
        let same = serde_json::to_string(&fresh).ok() == serde_json::to_string(&entry.report).ok()
            && cache::key(&entry.request) == *key;
        if !same {
            mismatched.push(key.clone());
        }
        checked.push(key.clone());
    }
    let verdict = Verdict::from_bool(mismatched.is_empty());
    let mut r = Report::new("cache_transparency", instance, verdict).result(json!({
        "entries": keys.len(),
        "checked": checked,
    }));
    if !mismatched.is_empty() {
        r = r.counterexample(&mismatched);
    }
    Ok(r)
}

fn run(cli: Cli) -> Result<Report, CliError> {
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot set up {j} workers: {e}")))?;
    }
    let cache = if cli.no_cache { None } else { cli.cache_dir.or_else(cache::default_dir).map(Cache::new) };
    if let Command::Cache { command: CacheCommand::Audit { sample } } = cli.command {
        return cache_audit(cache.as_ref(), sample, cli.seed);
    }
    let request = resolve(cli.command)?;
    if let Some(hit) = cache.as_ref().and_then(|c| c.get(&request)) {
        return Ok(hit);
    }
    let report = request.execute()?;
    if let Some(c) = &cache {
        if let Err(e) = c.put(&request, &report) {
            eprintln!("warning: could not write to cache {}: {e}", c.dir().display());
        }
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.format;
    match run(cli) {
        Ok(report) => {
            let text = match format {
                Format::Machine => serde_json::to_string(&report).expect("serializable") + "\n",
                Format::Human => render::human(&report),
            };
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(report.verdict.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
