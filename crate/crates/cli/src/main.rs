//! `coarse-geom` command-line front end. Reads and writes JSON; exit code 0
//! on pass, 1 when a check ran and failed, 2 on input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use coarse_geom::bouquet::{
    certify_asymptotic, equivalence_spread, prune, rebase, schedule, tighten_loose_bouquet, tip_sequence,
    validate_bouquet, Bound, Bouquet, CertifyOptions, RebaseOptions, ShortFunction, TargetRule,
};
use coarse_geom::comparison::{rcat0_random_check, rcat0_triangle_check};
use coarse_geom::ends::end_chains;
use coarse_geom::metric::EstimatorRegistry;
use coarse_geom::sampling::{DEFAULT_SEED, SEED_ENV};
use coarse_geom::sequences::{
    gromov_to_bouquet_sequence, sequence_to_bouquet, sequences_equivalent, validate_sequence, EquivMode,
    EquivOptions, SeqRec,
};
use coarse_geom::spaces::{GeneratorRegistry, RegionSpec};
use coarse_geom::topology::{
    neighborhood_member, separation_check, Candidate, NeighborhoodSpec, SeparationTime, Tri, Variant,
};
use coarse_geom::verify::{verify_paper, RunConfig};
use coarse_geom::{GeomError, MetricSpace, Site};

#[derive(Parser)]
#[command(name = "coarse-geom", version, about = "Finite-scale coarse geometry toolkit")]
struct Cli {
    /// Output format for tabular results.
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a space from a named region kind.
    Gen(GenArgs),
    /// Estimate four-point hyperbolicity.
    Delta(DeltaArgs),
    /// Rough CAT(0) comparison check on one or many triangles.
    Rcat0(RcatArgs),
    #[command(subcommand)]
    Bouquet(BouquetCmd),
    #[command(subcommand)]
    Seq(SeqCmd),
    /// End chains of components outside growing balls.
    Ends(EndsArgs),
    #[command(subcommand)]
    Topo(TopoCmd),
    /// Run the acceptance criteria.
    VerifyPaper(VerifyArgs),
}

#[derive(Args)]
struct GenArgs {
    /// List registered kinds and exit.
    #[arg(long)]
    list: bool,
    #[arg(long, required_unless_present = "list")]
    kind: Option<String>,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 10.0)]
    extent: f64,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    width: Option<f64>,
    #[arg(long)]
    height: Option<f64>,
    #[arg(long)]
    w: Option<usize>,
    #[arg(long)]
    h: Option<usize>,
    #[arg(long)]
    branching: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    vertices: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct DeltaArgs {
    #[arg(required_unless_present = "list")]
    space: Option<PathBuf>,
    #[arg(long, default_value = "sampled")]
    method: String,
    /// Sample count or subset size, as the method reads it.
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct RcatArgs {
    space: PathBuf,
    /// Constant C; defaults to the one recorded by the generator.
    #[arg(long)]
    c: Option<f64>,
    /// Check N random geodesic triangles.
    #[arg(long, conflicts_with = "triangle")]
    random_triangles: Option<usize>,
    /// Geodesic triangle on three vertex ids, e.g. 0,5,9.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    triangle: Option<Vec<usize>>,
    #[arg(long, default_value_t = 64)]
    pairs: usize,
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum BouquetCmd {
    /// Build a ray bouquet: truncations of one shortest path.
    Ray {
        space: PathBuf,
        #[arg(long)]
        from: Option<usize>,
        #[arg(long)]
        to: usize,
        #[arg(long, default_value_t = 2.0)]
        base: f64,
        #[arg(long, default_value_t = 8)]
        horizon: usize,
        #[arg(long, default_value_t = 0.0)]
        c: f64,
    },
    /// Validate the bouquet axioms.
    Check {
        space: PathBuf,
        bouquet: PathBuf,
        #[arg(long)]
        spacing: Option<f64>,
    },
    /// Truncate path n to alpha_n * L_n.
    Prune {
        space: PathBuf,
        bouquet: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<f64>,
    },
    /// Move the origin.
    Rebase {
        space: PathBuf,
        bouquet: PathBuf,
        #[arg(long)]
        to: usize,
        #[arg(long)]
        rcat: Option<f64>,
        #[arg(long)]
        c_target: f64,
        #[arg(long, value_enum, default_value = "auto")]
        targets: Targets,
    },
    /// Turn a loose bouquet into a constant one by subsequence selection.
    Tighten {
        space: PathBuf,
        bouquet: PathBuf,
        #[arg(long)]
        rcat: Option<f64>,
    },
    /// Tip sequence of a bouquet.
    Tips { space: PathBuf, bouquet: PathBuf },
    /// Asymptoticity certificate of two bouquets (profile as CSV with --format csv).
    Certify { space: PathBuf, first: PathBuf, second: PathBuf },
    /// Spread of two asymptotic bouquets against 5C + 4.
    Spread {
        space: PathBuf,
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        rcat: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Targets {
    Auto,
    Tips,
    Midpoints,
}

#[derive(Subcommand)]
enum SeqCmd {
    Check { space: PathBuf, seq: PathBuf },
    Equiv {
        space: PathBuf,
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value = "asymptotic")]
        mode: Mode,
        #[arg(long)]
        k: Option<f64>,
    },
    ToBouquet {
        space: PathBuf,
        seq: PathBuf,
        #[arg(long)]
        rcat: Option<f64>,
    },
    FromGromov {
        space: PathBuf,
        seq: PathBuf,
        #[arg(long)]
        delta: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Asymptotic,
    Loose,
    Gromov,
}

#[derive(Args)]
struct EndsArgs {
    space: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    schedule: Vec<f64>,
    #[arg(long)]
    basepoint: Option<usize>,
}

#[derive(Subcommand)]
enum TopoCmd {
    /// Three-valued membership in S, S0 or S'.
    Member {
        space: PathBuf,
        /// Representatives of the center class.
        #[arg(long, required = true, num_args = 1..)]
        center: Vec<PathBuf>,
        /// Representatives of the candidate class.
        #[arg(long, num_args = 1.., conflicts_with = "point")]
        candidate: Vec<PathBuf>,
        /// Candidate point: a vertex id or x,y.
        #[arg(long)]
        point: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum, default_value = "s")]
        variant: VariantArg,
        #[arg(long)]
        rcat: Option<f64>,
    },
    /// Disjoint S(., 1; n, t) neighbourhoods of two inequivalent classes.
    Separate {
        space: PathBuf,
        #[arg(long, required = true, num_args = 1..)]
        x: Vec<PathBuf>,
        #[arg(long, required = true, num_args = 1..)]
        y: Vec<PathBuf>,
        #[arg(long)]
        rcat: Option<f64>,
        #[arg(long, value_enum, default_value = "previous-length")]
        time: TimeArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    S,
    S0,
    Sprime,
}

#[derive(Clone, Copy, ValueEnum)]
enum TimeArg {
    PreviousLength,
    Length,
}

#[derive(Args)]
struct VerifyArgs {
    /// RunConfig JSON; flags and the seed variable override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, env = SEED_ENV)]
    seed: Option<u64>,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    tol_exact: Option<f64>,
    #[arg(long)]
    tol_net: Option<f64>,
}

/// An input error (exit code 2).
struct Failure(String);

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        Failure(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure(e.to_string())
    }
}

/// Rendered result plus whether the check passed.
struct Done {
    body: String,
    passed: bool,
}

fn json(v: &impl Serialize, passed: bool) -> Done {
    Done {
        body: serde_json::to_string_pretty(v).expect("serializable") + "\n",
        passed,
    }
}

fn raw(text: String) -> Done {
    Done {
        body: text + "\n",
        passed: true,
    }
}

fn table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>, passed: bool) -> Result<Done, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure(e.to_string()))?;
    Ok(Done {
        body: String::from_utf8(bytes).expect("csv is utf-8"),
        passed,
    })
}

fn no_csv(format: Format, what: &str) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(Failure(format!("`{what}` has no tabular output; use --format json")));
    }
    Ok(())
}

fn load_space(p: &Path) -> Result<MetricSpace, Failure> {
    MetricSpace::load(p).map_err(|e| Failure(format!("{}: {e}", p.display())))
}

fn load_bouquet(s: &MetricSpace, p: &Path) -> Result<Bouquet, Failure> {
    Bouquet::load(s, p).map_err(|e| Failure(format!("{}: {e}", p.display())))
}

fn load_seq(s: &MetricSpace, p: &Path) -> Result<SeqRec, Failure> {
    SeqRec::load(s, p).map_err(|e| Failure(format!("{}: {e}", p.display())))
}

fn rcat_of(s: &MetricSpace, given: Option<f64>) -> Result<f64, Failure> {
    given
        .or_else(|| s.info().and_then(|i| i.rcat_constant))
        .ok_or_else(|| Failure("no rough CAT(0) constant recorded; pass --rcat".into()))
}

fn parse_site(text: &str) -> Result<Site, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || Failure(format!("`{text}` is neither a vertex id nor x,y"));
    match parts.as_slice() {
        [v] => v.parse().map(Site::Vertex).map_err(|_| bad()),
        [x, y] => Ok(Site::Planar([x.parse().map_err(|_| bad())?, y.parse().map_err(|_| bad())?])),
        _ => Err(bad()),
    }
}

fn run(cli: &Cli) -> Result<Done, Failure> {
    let f = cli.format;
    match &cli.cmd {
        Cmd::Gen(a) => {
            let reg = GeneratorRegistry::standard();
            if a.list {
                let rows: Vec<[String; 2]> = reg
                    .names()
                    .into_iter()
                    .map(|n| [n.to_string(), reg.get(n).expect("listed").summary().to_string()])
                    .collect();
                if f == Format::Csv {
                    return table(&["kind", "summary"], rows.into_iter().map(Vec::from), true);
                }
                return Ok(json(&rows, true));
            }
            no_csv(f, "gen")?;
            let spec = RegionSpec {
                k: a.k,
                width: a.width,
                height: a.height,
                w: a.w,
                h: a.h,
                branching: a.branching,
                depth: a.depth,
                vertices: a.vertices,
                seed: a.seed,
                ..RegionSpec::new(a.kind.as_deref().expect("required"), a.eps, a.extent)
            };
            Ok(raw(reg.generate(&spec)?.to_json()))
        }
        Cmd::Delta(a) => {
            let reg = EstimatorRegistry::standard();
            if a.list {
                if f == Format::Csv {
                    return table(&["method"], reg.list().into_iter().map(|n| vec![n.to_string()]), true);
                }
                return Ok(json(&reg.list(), true));
            }
            no_csv(f, "delta")?;
            let s = load_space(a.space.as_deref().expect("required"))?;
            Ok(json(&reg.build(&a.method)?.estimate(&s, a.budget, a.seed)?, true))
        }
        Cmd::Rcat0(a) => {
            no_csv(f, "rcat0")?;
            let s = load_space(&a.space)?;
            let c = rcat_of(&s, a.c)?;
            match (&a.triangle, a.random_triangles) {
                (Some(v), _) => {
                    let tri = [s.geodesic(v[0], v[1])?, s.geodesic(v[1], v[2])?, s.geodesic(v[2], v[0])?];
                    let r = rcat0_triangle_check(&s, &tri, c, a.pairs, a.seed)?;
                    Ok(json(&r, r.passed))
                }
                (None, n) => {
                    let r = rcat0_random_check(&s, c, n.unwrap_or(100), a.pairs, a.seed)?;
                    Ok(json(&r, r.passed))
                }
            }
        }
        Cmd::Bouquet(b) => bouquet(b, f),
        Cmd::Seq(q) => seq(q, f),
        Cmd::Ends(a) => {
            let s = load_space(&a.space)?;
            let e = end_chains(&s, a.basepoint.unwrap_or(s.basepoint()), &a.schedule)?;
            if f == Format::Csv {
                return table(
                    &["chain", "finite", "components", "sizes"],
                    e.chains.iter().enumerate().map(|(i, c)| {
                        let join = |v: Vec<String>| v.join(" ");
                        vec![
                            i.to_string(),
                            c.finite.to_string(),
                            join(c.components.iter().map(|x| x.to_string()).collect()),
                            join(c.sizes.iter().map(|x| x.to_string()).collect()),
                        ]
                    }),
                    true,
                );
            }
            Ok(json(&e, true))
        }
        Cmd::Topo(t) => topo(t, f),
        Cmd::VerifyPaper(a) => verify(a, f),
    }
}

fn bouquet(cmd: &BouquetCmd, f: Format) -> Result<Done, Failure> {
    match cmd {
        BouquetCmd::Ray {
            space,
            from,
            to,
            base,
            horizon,
            c,
        } => {
            no_csv(f, "bouquet ray")?;
            let s = load_space(space)?;
            let b = Bouquet::ray(
                &s,
                from.unwrap_or(s.basepoint()),
                *to,
                &schedule(*base, *horizon),
                Bound::Constant(*c),
                ShortFunction::Standard,
            )?
            .with_base(*base);
            Ok(raw(b.to_json()))
        }
        BouquetCmd::Check { space, bouquet, spacing } => {
            no_csv(f, "bouquet check")?;
            let s = load_space(space)?;
            let v = validate_bouquet(&s, &load_bouquet(&s, bouquet)?, *spacing)?;
            let ok = v.valid;
            Ok(json(&v, ok))
        }
        BouquetCmd::Prune { space, bouquet, alpha } => {
            no_csv(f, "bouquet prune")?;
            let s = load_space(space)?;
            let p = prune(&s, &load_bouquet(&s, bouquet)?, alpha)?;
            if p.non_bouquet {
                eprintln!("warning: pruned lengths do not increase; the result is not a bouquet");
            }
            Ok(Done {
                body: p.bouquet.to_json() + "\n",
                passed: !p.non_bouquet,
            })
        }
        BouquetCmd::Rebase {
            space,
            bouquet,
            to,
            rcat,
            c_target,
            targets,
        } => {
            no_csv(f, "bouquet rebase")?;
            let s = load_space(space)?;
            let opts = RebaseOptions {
                rcat: rcat_of(&s, *rcat)?,
                c_target: *c_target,
                short: ShortFunction::Standard,
                targets: match targets {
                    Targets::Auto => TargetRule::Auto,
                    Targets::Tips => TargetRule::Tips,
                    Targets::Midpoints => TargetRule::Midpoints,
                },
            };
            let r = rebase(&s, &load_bouquet(&s, bouquet)?, *to, &opts)?;
            eprintln!(
                "kept {:?}, targets {:?}, constant before pruning {}, pruned by {:?}",
                r.kept, r.rule_used, r.c_unpruned, r.pruned_by
            );
            Ok(raw(r.bouquet.to_json()))
        }
        BouquetCmd::Tighten { space, bouquet, rcat } => {
            no_csv(f, "bouquet tighten")?;
            let s = load_space(space)?;
            let r = tighten_loose_bouquet(&s, &load_bouquet(&s, bouquet)?, rcat_of(&s, *rcat)?)?;
            eprintln!("selected {:?}, constant {}", r.selected, r.c);
            Ok(raw(r.bouquet.to_json()))
        }
        BouquetCmd::Tips { space, bouquet } => {
            no_csv(f, "bouquet tips")?;
            let s = load_space(space)?;
            Ok(raw(tip_sequence(&s, &load_bouquet(&s, bouquet)?)?.to_json()))
        }
        BouquetCmd::Certify { space, first, second } => {
            let s = load_space(space)?;
            let c = certify_asymptotic(
                &s,
                &load_bouquet(&s, first)?,
                &load_bouquet(&s, second)?,
                &CertifyOptions::default(),
            )?;
            let ok = c.verdict.is_equivalent();
            if f == Format::Csv {
                return table(
                    &["t", "gap"],
                    c.profile.iter().map(|[t, g]| vec![t.to_string(), g.to_string()]),
                    ok,
                );
            }
            Ok(json(&c, ok))
        }
        BouquetCmd::Spread {
            space,
            first,
            second,
            rcat,
        } => {
            no_csv(f, "bouquet spread")?;
            let s = load_space(space)?;
            let r = equivalence_spread(
                &s,
                &load_bouquet(&s, first)?,
                &load_bouquet(&s, second)?,
                rcat_of(&s, *rcat)?,
            )?;
            let ok = r.within;
            Ok(json(&r, ok))
        }
    }
}

fn seq(cmd: &SeqCmd, f: Format) -> Result<Done, Failure> {
    match cmd {
        SeqCmd::Check { space, seq } => {
            no_csv(f, "seq check")?;
            let s = load_space(space)?;
            let v = validate_sequence(&s, &load_seq(&s, seq)?)?;
            let ok = v.valid;
            Ok(json(&v, ok))
        }
        SeqCmd::Equiv {
            space,
            first,
            second,
            mode,
            k,
        } => {
            let s = load_space(space)?;
            let mode = match mode {
                Mode::Asymptotic => EquivMode::Asymptotic,
                Mode::Loose => EquivMode::Loose,
                Mode::Gromov => EquivMode::Gromov,
            };
            let opts = EquivOptions { k: *k, witness: None };
            let c = sequences_equivalent(&s, &load_seq(&s, first)?, &load_seq(&s, second)?, mode, &opts)?;
            let ok = c.verdict.is_equivalent();
            if f == Format::Csv {
                let mut rows = Vec::new();
                for (m, row) in c.pair_profile.iter().enumerate() {
                    for (n, v) in row.iter().enumerate() {
                        rows.push(vec![
                            (m + 1).to_string(),
                            (n + 1).to_string(),
                            v.to_string(),
                            c.gromov_profile[m][n].to_string(),
                        ]);
                    }
                }
                return table(&["m", "n", "pair_profile", "gromov_product"], rows, ok);
            }
            Ok(json(&c, ok))
        }
        SeqCmd::ToBouquet { space, seq, rcat } => {
            no_csv(f, "seq to-bouquet")?;
            let s = load_space(space)?;
            let r = sequence_to_bouquet(&s, &load_seq(&s, seq)?, rcat_of(&s, *rcat)?, ShortFunction::Standard)?;
            eprintln!("kept {:?}", r.kept);
            Ok(raw(r.bouquet.to_json()))
        }
        SeqCmd::FromGromov { space, seq, delta } => {
            no_csv(f, "seq from-gromov")?;
            let s = load_space(space)?;
            let r = gromov_to_bouquet_sequence(&s, &load_seq(&s, seq)?, *delta)?;
            eprintln!("kept {:?}, constant {}", r.kept, r.c);
            Ok(raw(r.sequence.to_json()))
        }
    }
}

fn topo(cmd: &TopoCmd, f: Format) -> Result<Done, Failure> {
    no_csv(f, "topo")?;
    match cmd {
        TopoCmd::Member {
            space,
            center,
            candidate,
            point,
            r,
            n,
            t,
            variant,
            rcat,
        } => {
            let s = load_space(space)?;
            let centers = center.iter().map(|p| load_bouquet(&s, p)).collect::<Result<Vec<_>, _>>()?;
            let cands = candidate.iter().map(|p| load_bouquet(&s, p)).collect::<Result<Vec<_>, _>>()?;
            let y = match point {
                Some(text) => Candidate::Point(parse_site(text)?),
                None if !cands.is_empty() => Candidate::Bouquets(&cands),
                None => return Err(Failure("give --candidate bouquets or --point".into())),
            };
            let spec = NeighborhoodSpec {
                r: *r,
                n: *n,
                t: *t,
                variant: match variant {
                    VariantArg::S => Variant::S,
                    VariantArg::S0 => Variant::S0,
                    VariantArg::Sprime => Variant::Sprime,
                },
            };
            let m = neighborhood_member(&s, &spec, &centers, &y, *rcat)?;
            let ok = m.verdict == Tri::True;
            Ok(json(&m, ok))
        }
        TopoCmd::Separate {
            space,
            x,
            y,
            rcat,
            time,
        } => {
            let s = load_space(space)?;
            let xs = x.iter().map(|p| load_bouquet(&s, p)).collect::<Result<Vec<_>, _>>()?;
            let ys = y.iter().map(|p| load_bouquet(&s, p)).collect::<Result<Vec<_>, _>>()?;
            let time = match time {
                TimeArg::PreviousLength => SeparationTime::PreviousLength,
                TimeArg::Length => SeparationTime::Length,
            };
            let r = separation_check(&s, &xs, &ys, rcat_of(&s, *rcat)?, time)?;
            let ok = r.passed;
            Ok(json(&r, ok))
        }
    }
}

fn verify(a: &VerifyArgs, f: Format) -> Result<Done, Failure> {
    let mut cfg = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure(format!("{}: {e}", p.display())))?;
            RunConfig::from_json(&text).map_err(|e| Failure(format!("{}: {e}", p.display())))?
        }
        None => RunConfig::default(),
    };
    // clap already folds the seed variable into --seed.
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if let Some(h) = a.horizon {
        cfg.horizon = h;
    }
    if let Some(t) = a.tol_exact {
        cfg.tol_exact = t;
    }
    if let Some(t) = a.tol_net {
        cfg.tol_net = t;
    }
    let report = verify_paper(&cfg)?;
    for c in &report.criteria {
        eprintln!(
            "criterion {:>2} {:<26} {:<17} {:.2}s",
            c.id,
            c.name,
            c.status,
            c.elapsed.as_secs_f64()
        );
    }
    if f == Format::Csv {
        return table(
            &["id", "name", "status", "measured", "detail"],
            report.criteria.iter().map(|c| {
                let m: Vec<String> = c.measured.iter().map(|(k, v)| format!("{k}={v}")).collect();
                vec![c.id.to_string(), c.name.to_string(), c.status.clone(), m.join(";"), c.detail.clone()]
            }),
            report.passed,
        );
    }
    Ok(Done {
        body: report.to_json() + "\n",
        passed: report.passed,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(done) => {
            let written = match &cli.output {
                Some(p) => std::fs::write(p, &done.body).map_err(|e| format!("{}: {e}", p.display())),
                None => {
                    print!("{}", done.body);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if done.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
