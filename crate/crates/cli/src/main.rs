use std::fmt::Display;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use posetcat::catalog::{enumerate_lattices, enumerate_posets, monotone_maps, MapSearch};
use posetcat::karoubi::{audit_cube_idempotents, retract_certificate, AuditMode};
use posetcat::presheaf::{horn, left_kan, left_kan_map, representable, triangulate, PosetSite, Presheaf};
use posetcat::verify::{run_verify_all, SuiteBounds, VerificationReport};
use posetcat::Poset;

#[derive(Parser)]
#[command(
    name = "posetcat",
    version,
    about = "Finite posets, cubes and presheaves: audits and computations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Human,
    Count,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Posets,
    Lattices,
    Maps,
}

#[derive(Subcommand)]
enum Command {
    /// Split every idempotent endomorphism of [1]^n and check the middle object is complete.
    AuditIdempotents {
        #[arg(long)]
        dim: usize,
        /// Sample this many endomorphisms instead of enumerating all of them.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        timings: bool,
    },
    /// Exhibit a complete poset as a retract of a cube.
    Certify {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Enumerate posets or lattices up to isomorphism, or monotone maps.
    Enumerate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        dom: Option<PathBuf>,
        #[arg(long)]
        cod: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The nerve of [1]^n restricted to simplices of dimension at most the truncation.
    Triangulate {
        #[arg(long)]
        cube_dim: usize,
        #[arg(long)]
        trunc: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Evaluate the left Kan extension of a simplicial presheaf at a complete poset.
    Kan {
        /// The complete poset to evaluate at.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, conflicts_with = "presheaf", required_unless_present = "presheaf")]
        simplex: Option<usize>,
        #[arg(long)]
        presheaf: Option<PathBuf>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// The union of the given faces of the n-simplex, optionally extended to a complete poset.
    Horn {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        faces: Vec<usize>,
        #[arg(long)]
        trunc: Option<usize>,
        /// Complete poset at which to evaluate the extended inclusion.
        #[arg(long)]
        at: Option<PathBuf>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Run every audit at the given bounds.
    VerifyAll {
        #[arg(long, default_value_t = 5)]
        max_poset: usize,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long, default_value_t = 3)]
        max_simplex: usize,
        #[arg(long, default_value_t = 6)]
        max_lattice: usize,
        #[arg(long)]
        deep: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        timings: bool,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl<E: Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn read_poset(path: Option<&Path>) -> Result<Arc<Poset>, Failure> {
    Ok(Arc::new(serde_json::from_str(&read_input(path)?)?))
}

fn json<T: Serialize>(value: &T) -> Outcome {
    Ok(serde_json::to_string_pretty(value)?)
}

#[derive(Serialize)]
struct Counts<'a> {
    counts: &'a [usize],
}

fn audit(dim: usize, samples: Option<usize>, seed: u64, timings: bool) -> Outcome {
    let mode = match samples {
        Some(samples) => AuditMode::Sampled { samples, seed },
        None => AuditMode::Exhaustive,
    };
    let mut report = audit_cube_idempotents(dim, mode)?;
    if !timings {
        report.wall_ms = None;
    }
    let out = json(&report)?;
    if report.passed() {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn certify(input: Option<&Path>) -> Outcome {
    let cert = retract_certificate(&read_poset(input)?)?;
    let out = json(&cert)?;
    match cert.check() {
        Ok(()) => Ok(out),
        Err(e) => Err(Failure::Check(format!("{out}\n{e}"))),
    }
}

fn enumerate(kind: Kind, size: Option<usize>, dom: Option<&Path>, cod: Option<&Path>, format: Format) -> Outcome {
    let need_size = || size.ok_or_else(|| Failure::Usage("--size is required".into()));
    let items: Vec<serde_json::Value> = match kind {
        Kind::Posets => enumerate_posets(need_size()?)?
            .iter()
            .map(|c| serde_json::to_value(&c.poset))
            .collect::<Result<_, _>>()?,
        Kind::Lattices => enumerate_lattices(need_size()?)?
            .iter()
            .map(|c| serde_json::to_value(&c.poset))
            .collect::<Result<_, _>>()?,
        Kind::Maps => {
            let (Some(dom), Some(cod)) = (dom, cod) else {
                return Err(Failure::Usage("--dom and --cod are required for maps".into()));
            };
            let (dom, cod) = (read_poset(Some(dom))?, read_poset(Some(cod))?);
            if format == Format::Count {
                return Ok(MapSearch::new(dom, cod).count().to_string());
            }
            monotone_maps(&dom, &cod)
                .iter()
                .map(serde_json::to_value)
                .collect::<Result<_, _>>()?
        }
    };
    match format {
        Format::Count => Ok(items.len().to_string()),
        Format::Json => json(&items),
        Format::Human => Ok(items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\n")),
    }
}

fn triangulation(cube_dim: usize, trunc: usize, format: Format) -> Outcome {
    let t = triangulate(cube_dim, trunc)?;
    match format {
        Format::Json => json(&t),
        Format::Count => json(&Counts {
            counts: t.cell_counts(),
        }),
        Format::Human => Ok(t
            .cell_counts()
            .iter()
            .enumerate()
            .map(|(m, c)| format!("[{m}]  {c}"))
            .collect::<Vec<_>>()
            .join("\n")),
    }
}

fn kan(input: Option<&Path>, simplex: Option<usize>, presheaf: Option<&Path>, depth: Option<usize>) -> Outcome {
    let m = read_poset(input)?;
    let x: Presheaf = match (simplex, presheaf) {
        (Some(k), _) => representable(
            &Arc::new(PosetSite::delta(depth.unwrap_or(k + 1) + 1)?),
            &Poset::chain(k),
        ),
        (None, Some(p)) => serde_json::from_str(&read_input(Some(p))?)?,
        (None, None) => return Err(Failure::Usage("one of --simplex or --presheaf is required".into())),
    };
    let depth = depth.unwrap_or_else(|| simplex.map_or(x.site().dim(), |k| k + 1));
    json(&left_kan(&x, &m, depth)?)
}

fn horn_cmd(n: usize, faces: &[usize], trunc: Option<usize>, at: Option<&Path>, depth: Option<usize>) -> Outcome {
    let depth = depth.unwrap_or(n + 1);
    let inc = horn(n, faces, trunc.unwrap_or(depth + 1))?;
    match at {
        None => json(inc.source().as_ref()),
        Some(p) => {
            let k = left_kan_map(&inc, &read_poset(Some(p))?, depth)?;
            let out = json(&k)?;
            if k.is_injective() {
                Ok(out)
            } else {
                Err(Failure::Check(out))
            }
        }
    }
}

fn render(report: &VerificationReport) -> String {
    let width = report.records.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut lines = vec![format!("{:width$}  {:6}  counts", "check", "status")];
    for r in &report.records {
        let counts: Vec<String> = r.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let status = if r.passed { "pass" } else { "FAIL" };
        let time = r.elapsed_ms.map(|t| format!("  ({t} ms)")).unwrap_or_default();
        lines.push(format!("{:width$}  {status:6}  {}{time}", r.name, counts.join(" ")));
        for f in &r.failures {
            lines.push(format!("{:width$}    {f}", ""));
        }
    }
    lines.push(format!("overall: {}", if report.passed { "pass" } else { "FAIL" }));
    lines.join("\n")
}

fn verify(bounds: SuiteBounds, format: Format) -> Outcome {
    let report = run_verify_all(&bounds)?;
    let out = match format {
        Format::Human => render(&report),
        _ => json(&report)?,
    };
    if report.passed {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::AuditIdempotents {
            dim,
            samples,
            seed,
            timings,
        } => audit(dim, samples, seed, timings),
        Command::Certify { input } => certify(input.as_deref()),
        Command::Enumerate {
            kind,
            size,
            dom,
            cod,
            format,
        } => enumerate(kind, size, dom.as_deref(), cod.as_deref(), format),
        Command::Triangulate {
            cube_dim,
            trunc,
            format,
        } => triangulation(cube_dim, trunc, format),
        Command::Kan {
            input,
            simplex,
            presheaf,
            depth,
        } => kan(input.as_deref(), simplex, presheaf.as_deref(), depth),
        Command::Horn {
            n,
            faces,
            trunc,
            at,
            depth,
        } => horn_cmd(n, &faces, trunc, at.as_deref(), depth),
        Command::VerifyAll {
            max_poset,
            max_dim,
            max_simplex,
            max_lattice,
            deep,
            seed,
            samples,
            format,
            timings,
        } => verify(
            SuiteBounds {
                max_poset,
                max_dim,
                max_simplex,
                max_lattice,
                deep,
                seed,
                samples,
                timings,
            },
            format,
        ),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("POSETCAT_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .map_err(|_| Failure::Usage(format!("POSETCAT_THREADS must be a positive integer, got {value:?}")))?;
    if threads == 0 {
        return Err(Failure::Usage("POSETCAT_THREADS must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn emit(out: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{out}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| dispatch(cli.command)) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(Failure::Check(out)) => {
            emit(&out);
            eprintln!("posetcat: a check failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("posetcat: {msg}");
            ExitCode::from(2)
        }
    }
}
