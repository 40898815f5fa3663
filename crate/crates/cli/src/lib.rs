//! Command-line front end for `kwise-sparsify`.
//!
//! Exit codes: 0 on success (or a YES verdict), 1 on a NO verdict, 2 for
//! usage and input errors, 3 when a computation fails.

use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kwise_sparsify::derand::{derandomized_sparsify, DerandConfig};
use kwise_sparsify::graph::round_to_multigraph;
use kwise_sparsify::kwise::{parse_marginals, KWiseSpace, Seed};
use kwise_sparsify::linalg::SpectralReference;
use kwise_sparsify::lowerbound::{
    dependent_subset, disconnection_probability, fixtures, independence_order,
    EdgeDistribution, PartitionDistribution, ThreeWiseCompleteDistribution,
};
use kwise_sparsify::resistance::{effective_resistances_approx, effective_resistances_exact};
use kwise_sparsify::sparsify::{
    adjust_for_alpha, sparsify_random, sparsify_with_seed, SparsifyParams,
};
use kwise_sparsify::verify::{verify, PinvMode, Verdict, VerifierParams};
use kwise_sparsify::{Error, WeightedGraph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "kwsparse", version, about = "Spectral sparsification with k-wise independent sampling")]
pub struct Cli {
    /// Slack for spectral comparisons in `check`.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Suppress diagnostics on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Solver,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    Partition,
    Threewise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Report {
    Independence,
    Disconnect,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sparsify a graph with one seed of the k-wise space.
    #[command(group(ArgGroup::new("pick").required(true).args(["seed", "random"])))]
    Sparsify {
        /// Edge-list file, or `-` for stdin.
        input: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0.25)]
        delta: f64,
        /// Bits of precision for the sampling probabilities.
        #[arg(long, default_value_t = 16)]
        t: u32,
        #[arg(long)]
        seed: Option<u128>,
        /// Draw the seed from a generator seeded by `--rng-seed`.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 0, requires = "random")]
        rng_seed: u64,
        /// Use resistances from a pseudoinverse perturbed by this factor.
        #[arg(long)]
        approx_gamma: Option<f64>,
        #[arg(long, default_value_t = 1, requires = "approx_gamma")]
        noise_seed: u64,
        /// Override the oversampling rate.
        #[arg(long)]
        rate: Option<f64>,
    },
    /// Deterministic sparsification by seed enumeration.
    Derand {
        input: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1 << 24)]
        cap: u128,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Noise seed for approximate resistances; 0 uses exact ones.
        #[arg(long, default_value_t = 0)]
        noise_seed: u64,
        #[arg(long)]
        rate: Option<f64>,
    },
    /// Trace-power test: is `candidate` an eps-approximation of `reference`?
    Verify {
        reference: PathBuf,
        candidate: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        noise_seed: u64,
    },
    /// Eigenvalue check of `candidate` against `reference` at `--eps`.
    Check {
        reference: PathBuf,
        candidate: PathBuf,
        #[arg(long)]
        eps: f64,
    },
    /// Effective resistance of every edge.
    Resistances {
        input: PathBuf,
        #[arg(long)]
        approx_gamma: Option<f64>,
        #[arg(long, default_value_t = 1, requires = "approx_gamma")]
        noise_seed: u64,
    },
    /// Print one sample of a k-wise space as a 0/1 string.
    #[command(group(ArgGroup::new("coords").required(true).args(["m", "marginals"])))]
    Kwise {
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: u32,
        /// File of marginals; otherwise every marginal is `--p`.
        #[arg(long)]
        marginals: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5, conflicts_with = "marginals")]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u128,
    },
    /// Exact analysis of a lower-bound distribution on a fixture graph.
    Lowerbound {
        /// `petersen`, `heawood`, `complete:<n>` or `cycle:<n>`.
        #[arg(long)]
        fixture: String,
        #[arg(long, value_enum, default_value_t = Dist::Partition)]
        dist: Dist,
        #[arg(long, value_enum, default_value_t = Report::Independence)]
        report: Report,
    },
    /// Round weights to integers times a power of two.
    Round { input: PathBuf },
    /// Print the Laplacian in matrix text format.
    Laplacian { input: PathBuf },
}

/// A failed run: exit code plus one-line message.
#[derive(Debug)]
struct Failure {
    code: i32,
    msg: String,
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_USAGE,
        msg: e.to_string(),
    }
}

fn compute(e: Error) -> Failure {
    let msg = match &e {
        Error::ExhaustedSeeds {
            best: Some(best), ..
        } => format!(
            "{e}; best candidate seed={} edges={} verdict={}",
            best.seed_index,
            best.edge_count,
            best.verifier_verdict.map_or("unverified".into(), |v| v.to_string())
        ),
        _ => e.to_string(),
    };
    Failure {
        code: EXIT_COMPUTE,
        msg,
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stderr: &'a mut dyn Write,
    quiet: bool,
}

impl Io<'_> {
    fn read(&mut self, path: &Path) -> Result<Vec<u8>, Failure> {
        if path == Path::new("-") {
            let mut buf = Vec::new();
            self.stdin
                .read_to_end(&mut buf)
                .map_err(|e| usage(format!("stdin: {e}")))?;
            Ok(buf)
        } else {
            fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))
        }
    }

    fn graph(&mut self, path: &Path) -> Result<WeightedGraph, Failure> {
        let text = self.read(path)?;
        WeightedGraph::parse_edge_list(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    fn note(&mut self, line: &str) {
        if !self.quiet {
            let _ = writeln!(self.stderr, "{line}");
        }
    }

    /// Machine-readable lines that `--quiet` keeps.
    fn report(&mut self, line: &str) {
        let _ = writeln!(self.stderr, "{line}");
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let output = cli.output.clone();
    let mut io = Io {
        stdin,
        stderr,
        quiet: cli.quiet,
    };
    let result = execute(&cli, &mut io).and_then(|(text, code)| {
        match &output {
            Some(path) => fs::write(path, &text)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?,
            None => stdout
                .write_all(text.as_bytes())
                .map_err(|e| usage(format!("stdout: {e}")))?,
        }
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(io.stderr, "error: {}", f.msg);
            f.code
        }
    }
}

fn execute(cli: &Cli, io: &mut Io<'_>) -> Result<(String, i32), Failure> {
    if !(cli.tolerance >= 0.0 && cli.tolerance.is_finite()) {
        return Err(usage("--tolerance must be a finite nonnegative number"));
    }
    match &cli.command {
        Command::Sparsify {
            input,
            k,
            eps,
            delta,
            t,
            seed,
            random,
            rng_seed,
            approx_gamma,
            noise_seed,
            rate,
        } => {
            let g = io.graph(input)?;
            let params = match rate {
                Some(s) => SparsifyParams::with_rate(*k, *eps, *delta, *s),
                None if g.vertex_count() < 2 => SparsifyParams::with_rate(*k, *eps, *delta, 1.0),
                None => SparsifyParams::new(g.vertex_count(), *k, *eps, *delta),
            }
            .map_err(usage)?;
            let r = match approx_gamma {
                Some(gamma) => effective_resistances_approx(&g, *gamma, *noise_seed)
                    .and_then(|r| adjust_for_alpha(&r, *gamma)),
                None => effective_resistances_exact(&g),
            };
            let r = match r {
                Ok(r) => r,
                // Degenerate inputs are returned unchanged by the sparsifier.
                Err(Error::Disconnected) if g.edge_count() == 0 => {
                    kwise_sparsify::resistance::ResistanceTable::new(
                        Vec::new(),
                        kwise_sparsify::resistance::ResistanceMode::Exact,
                    )
                }
                Err(e @ Error::OutOfRange { .. }) => return Err(usage(e)),
                Err(e) => return Err(compute(e)),
            };
            let out = if *random {
                io.note(&format!("rng_seed={rng_seed}"));
                let mut rng = ChaCha8Rng::seed_from_u64(*rng_seed);
                sparsify_random(&g, &r, &params, *t, &mut rng)
            } else {
                sparsify_with_seed(&g, &r, &params, *t, Seed(seed.expect("group requires one")))
            }
            .map_err(|e| match e {
                Error::OutOfRange { .. } | Error::SeedOutOfRange { .. } => usage(e),
                e => compute(e),
            })?;
            for w in &out.warnings {
                io.note(&format!("warning: {w}"));
            }
            let seed_text = out.seed.map_or("none".into(), |s| s.index().to_string());
            io.note(&format!(
                "seed={seed_text} edges={} expected_edges={}",
                out.graph.edge_count(),
                out.expected_edges()
            ));
            Ok((out.graph.to_edge_list(), EXIT_OK))
        }
        Command::Derand {
            input,
            k,
            eps,
            cap,
            jobs,
            noise_seed,
            rate,
        } => {
            let g = io.graph(input)?;
            let mut config = DerandConfig::new(*k, *eps).map_err(usage)?;
            config.enumeration_cap = *cap;
            config.parallel_width = *jobs;
            config.noise_seed = *noise_seed;
            config.rate_override = *rate;
            config.validate().map_err(usage)?;
            let out = derandomized_sparsify(&g, &config).map_err(compute)?;
            io.report(&format!(
                "seed={} edges={} threshold={} verdict={}",
                out.report.seed_index,
                out.report.edge_count,
                out.constants.threshold,
                out.report.verifier_verdict.unwrap_or(Verdict::No)
            ));
            Ok((out.graph.to_edge_list(), EXIT_OK))
        }
        Command::Verify {
            reference,
            candidate,
            eps,
            alpha,
            mode,
            noise_seed,
        } => {
            let (a, b) = same_size_pair(io, reference, candidate)?;
            let mode = match mode {
                Mode::Exact => PinvMode::Exact,
                Mode::Solver => PinvMode::Solver {
                    noise_seed: *noise_seed,
                },
            };
            let params = VerifierParams::new(*eps, *alpha, mode).map_err(usage)?;
            let verdict = verify(&a.laplacian(), &b.laplacian(), params).map_err(compute)?;
            Ok((
                format!("{verdict}\n"),
                if verdict.is_yes() { EXIT_OK } else { EXIT_NO },
            ))
        }
        Command::Check {
            reference,
            candidate,
            eps,
        } => {
            let (a, b) = same_size_pair(io, reference, candidate)?;
            if !(*eps >= 0.0 && eps.is_finite()) {
                return Err(usage("--eps must be a finite nonnegative number"));
            }
            let oracle = SpectralReference::new(&a.laplacian()).map_err(compute)?;
            let ok = match oracle.check_with_tol(&b.laplacian(), *eps, cli.tolerance) {
                Ok(ok) => ok,
                Err(Error::KernelMismatch) => false,
                Err(e) => return Err(compute(e)),
            };
            let text = if ok { "YES\n" } else { "NO\n" };
            Ok((text.into(), if ok { EXIT_OK } else { EXIT_NO }))
        }
        Command::Resistances {
            input,
            approx_gamma,
            noise_seed,
        } => {
            let g = io.graph(input)?;
            let r = match approx_gamma {
                Some(gamma) => effective_resistances_approx(&g, *gamma, *noise_seed),
                None => effective_resistances_exact(&g),
            }
            .map_err(|e| match e {
                Error::OutOfRange { .. } => usage(e),
                e => compute(e),
            })?;
            let mut text = String::new();
            for (e, x) in g.edges().iter().zip(r.values()) {
                let _ = writeln!(text, "{} {} {x}", e.u, e.v);
            }
            Ok((text, EXIT_OK))
        }
        Command::Kwise {
            m,
            k,
            t,
            marginals,
            p,
            seed,
        } => {
            let probs = match marginals {
                Some(path) => {
                    let text = io.read(path)?;
                    let probs = parse_marginals(&text)
                        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
                    if let Some(m) = m {
                        if *m != probs.len() {
                            return Err(usage(format!(
                                "--m {m} does not match {} marginals in {}",
                                probs.len(),
                                path.display()
                            )));
                        }
                    }
                    probs
                }
                None => vec![*p; m.expect("group requires one")],
            };
            let space = KWiseSpace::build(&probs, *k, *t).map_err(usage)?;
            let bits = space.sample_at(Seed(*seed)).map_err(usage)?;
            let mut text: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
            text.push('\n');
            io.note(&format!(
                "field_log={} seed_count=2^{}",
                space.field_log(),
                space.seed_bits()
            ));
            Ok((text, EXIT_OK))
        }
        Command::Lowerbound {
            fixture,
            dist,
            report,
        } => {
            let g = fixtures::by_name(fixture)
                .ok_or_else(|| usage(format!("unknown fixture {fixture:?}")))?;
            let n = g.vertex_count();
            let d: Box<dyn EdgeDistribution> = match dist {
                Dist::Partition => Box::new(PartitionDistribution::new(g)),
                Dist::Threewise => {
                    if g.edge_count() != n * (n - 1) / 2 {
                        return Err(usage("the three-wise distribution needs a complete:<n> fixture"));
                    }
                    Box::new(ThreeWiseCompleteDistribution::new(n).map_err(usage)?)
                }
            };
            let mut text = String::new();
            match report {
                Report::Independence => {
                    let k = independence_order(d.as_ref()).map_err(compute)?;
                    let _ = writeln!(text, "independence_order={k}");
                    if let Some(w) = dependent_subset(d.as_ref(), k + 1).map_err(compute)? {
                        let edges: Vec<String> = w
                            .iter()
                            .map(|&i| {
                                let e = &d.graph().edges()[i];
                                format!("{}-{}", e.u, e.v)
                            })
                            .collect();
                        let _ = writeln!(text, "witness={}", edges.join(","));
                    }
                }
                Report::Disconnect => {
                    let p = disconnection_probability(d.as_ref()).map_err(compute)?;
                    let _ = writeln!(text, "disconnection_probability={p}");
                }
            }
            Ok((text, EXIT_OK))
        }
        Command::Round { input } => {
            let g = io.graph(input)?;
            let r = round_to_multigraph(&g).map_err(compute)?;
            Ok((
                format!("# shift_t={}\n{}", r.shift_t, r.graph.to_edge_list()),
                EXIT_OK,
            ))
        }
        Command::Laplacian { input } => {
            let g = io.graph(input)?;
            Ok((g.laplacian().to_text(), EXIT_OK))
        }
    }
}

fn same_size_pair(
    io: &mut Io<'_>,
    a: &Path,
    b: &Path,
) -> Result<(WeightedGraph, WeightedGraph), Failure> {
    let ga = io.graph(a)?;
    let gb = io.graph(b)?;
    if ga.vertex_count() != gb.vertex_count() {
        return Err(usage(format!(
            "graphs have {} and {} vertices",
            ga.vertex_count(),
            gb.vertex_count()
        )));
    }
    Ok((ga, gb))
}
