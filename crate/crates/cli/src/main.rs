//! Command-line front end: bound, construct, verify, search, and survey.
//!
//! Exit codes: 0 success, 1 verification failure or unsuccessful search,
//! 2 internal inconsistency, 64 usage error.

use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qgraph_core::bounds::BoundReport;
use qgraph_core::constructions;
use qgraph_core::search::{self, EstimateOptions, SearchProblem};
use qgraph_core::survey::{self, SurveyOptions};
use qgraph_core::{Error, Family, Graph, Result, VerifiedCertificate};

#[derive(Parser)]
#[command(
    name = "qgraph",
    version,
    about = "Bounds and verified certificates for the minimum number of distinct \
             eigenvalues over symmetric matrices with a prescribed graph support"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound q(G) for one graph and report exactness
    Bound(BoundArgs),
    /// Build a certificate for a structured family (always verified)
    Construct(ConstructArgs),
    /// Re-verify certificate files from scratch
    Verify(VerifyArgs),
    /// Search for a certificate with a prescribed spectral shape
    Search(SearchArgs),
    /// Process a stream of graph6 lines
    Survey(SurveyArgs),
}

#[derive(Args)]
struct GraphSource {
    /// graph6 token
    #[arg(long, value_name = "TOKEN")]
    graph6: Option<String>,
    /// Family name and parameters, e.g. `--family cycle 7`
    #[arg(long, num_args = 1.., value_name = "NAME [ARG]")]
    family: Option<Vec<String>>,
    /// Edge-list file: `n <count>` header then `u v` lines
    #[arg(long, value_name = "FILE")]
    edges: Option<PathBuf>,
}

impl GraphSource {
    fn load(&self) -> Result<Graph> {
        match (&self.graph6, &self.family, &self.edges) {
            (Some(token), None, None) => Graph::from_graph6(token),
            (None, Some(spec), None) => Family::parse(&spec[0], &spec[1..])?.generate(),
            (None, None, Some(path)) => Graph::from_edge_list_text(&read_input(path)?),
            _ => Err(Error::InvalidArgument(
                "provide exactly one of --graph6, --family, --edges".into(),
            )),
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Search restart budget per candidate profile (0 disables the search)
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    /// Largest vertex count on which the search runs
    #[arg(long, default_value_t = 8)]
    search_limit: usize,
    #[arg(long, default_value_t = 2000)]
    sweeps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ConstructArgs {
    /// Recipe: a family spec (`complete 5`, `s-graph 4 4`, `house`, ...) or a
    /// builder prefix (`complete-minus-edge 6`, `octahedron`,
    /// `join-self <family>`, `cartesian-k2 <recipe>`, `corona <recipe>`,
    /// `adjacency <family>`)
    #[arg(required = true, num_args = 1.., value_name = "RECIPE")]
    recipe: Vec<String>,
    /// Copy weight for `cartesian-k2`
    #[arg(long, default_value_t = constructions::DEFAULT_CARTESIAN_WEIGHT)]
    alpha: f64,
    /// Coupling weight for `cartesian-k2`
    #[arg(long, default_value_t = constructions::DEFAULT_CARTESIAN_WEIGHT)]
    beta: f64,
    /// Write the certificate here instead of stdout
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Certificate JSON files
    #[arg(required = true, value_name = "FILE")]
    files: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Target number of distinct eigenvalues
    #[arg(long)]
    q: Option<usize>,
    /// Explicit eigenvalues, strictly decreasing, comma-separated
    #[arg(long, value_name = "V1,V2,...", requires = "multiplicities")]
    values: Option<String>,
    /// Multiplicities matching --values, comma-separated
    #[arg(long, value_name = "M1,M2,...", requires = "values")]
    multiplicities: Option<String>,
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    #[arg(long, default_value_t = 5000)]
    sweeps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SurveyArgs {
    /// graph6 lines; stdin when omitted
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Worker threads (0 = automatic)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    #[arg(long, default_value_t = 8)]
    search_limit: usize,
    #[arg(long, default_value_t = 2000)]
    sweeps: usize,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Bound(args) => cmd_bound(args),
        Command::Construct(args) => cmd_construct(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Search(args) => cmd_search(args),
        Command::Survey(args) => cmd_survey(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Graph6 { .. }
        | Error::Graph6Size { .. }
        | Error::EdgeList { .. }
        | Error::InvalidArgument(_)
        | Error::Disconnected(_)
        | Error::DimensionMismatch(_)
        | Error::NonFinite => 64,
        Error::Construction(_) => 1,
        Error::SolverFailure { .. } | Error::CertificateFile(_) => 2,
    }
}

fn read_input(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn cmd_bound(args: BoundArgs) -> Result<i32> {
    let g = args.source.load()?;
    let token = g.to_graph6()?;
    let opts = SurveyOptions {
        seed: args.seed,
        restarts: args.restarts,
        max_sweeps: args.sweeps,
        search_limit: args.search_limit,
        ..SurveyOptions::default()
    };
    let rows = survey::run_survey(&[token.as_str()], &opts)?;
    let row = rows.into_iter().next().expect("one input line");
    if row.lower > row.upper {
        eprintln!("error: inconsistent report: lower {} > upper {}", row.lower, row.upper);
        return Ok(2);
    }
    match args.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&row)
                .map_err(|e| Error::CertificateFile(e.to_string()))?
        ),
        Format::Tsv => {
            println!("{}", survey::TSV_HEADER);
            println!("{}", row.to_tsv());
        }
    }
    Ok(0)
}

fn build_recipe(tokens: &[String], alpha: f64, beta: f64) -> Result<VerifiedCertificate> {
    let name = tokens[0].as_str();
    let rest = &tokens[1..];
    let num = |k: usize| -> Result<usize> {
        rest.get(k)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                Error::InvalidArgument(format!("{name}: expected numeric parameter #{}", k + 1))
            })
    };
    let inner_family = || -> Result<Graph> {
        if rest.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "{name}: expected an inner family spec"
            )));
        }
        Family::parse(&rest[0], &rest[1..])?.generate()
    };
    let inner_recipe = || -> Result<VerifiedCertificate> {
        if rest.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "{name}: expected an inner recipe"
            )));
        }
        build_recipe(rest, alpha, beta)
    };
    match name {
        "complete-minus-edge" => constructions::complete_minus_edge_certificate(num(0)?),
        "octahedron" => constructions::octahedron_certificate(),
        "join-self" => {
            constructions::join_self_certificate(&inner_family()?).map(|(cert, _)| cert)
        }
        "cartesian-k2" => constructions::cartesian_k2_certificate(&inner_recipe()?, alpha, beta),
        "corona" => constructions::corona_certificate(&inner_recipe()?),
        "adjacency" => constructions::adjacency_certificate(&inner_family()?),
        _ => family_certificate(&Family::parse(name, rest)?),
    }
}

fn family_certificate(family: &Family) -> Result<VerifiedCertificate> {
    match family {
        Family::Complete { n } => constructions::complete_certificate(*n),
        Family::Cycle { n } => constructions::cycle_certificate(*n),
        Family::CompleteBipartite { m, n } => {
            constructions::complete_bipartite_certificate(*m, *n)
        }
        Family::CompleteMultipartite { parts } => constructions::multipartite_certificate(parts),
        Family::Hypercube { d } => constructions::hypercube_certificate(*d),
        Family::SGraph { m, n } => constructions::s_graph_certificate(*m, *n),
        Family::CliquePath { n, k } => constructions::clique_path_certificate(*n, *k),
        Family::House => constructions::house_certificate(),
        Family::Gem => constructions::gem_certificate(),
        other => constructions::adjacency_certificate(&other.generate()?),
    }
}

fn cmd_construct(args: ConstructArgs) -> Result<i32> {
    let cert = build_recipe(&args.recipe, args.alpha, args.beta)?;
    let text = cert.to_certificate()?.to_json()?;
    match &args.output {
        Some(path) => fs::write(path, text + "\n")
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let mut worst = 0;
    for path in &args.files {
        // Anything wrong with the certificate's content counts as a failed
        // verification for that file; only solver breakdowns abort the run.
        let outcome = match qgraph_core::Certificate::from_json(&read_input(path)?)
            .and_then(|cert| cert.verify())
        {
            Ok(outcome) => outcome,
            Err(e @ Error::SolverFailure { .. }) => return Err(e),
            Err(e) => {
                match args.format {
                    Format::Json => {
                        println!(
                            "{}",
                            json!({ "file": path.display().to_string(), "error": e.to_string() })
                        );
                    }
                    Format::Tsv => println!("{}\tFAILED\t{e}", path.display()),
                }
                worst = 1;
                continue;
            }
        };
        match args.format {
            Format::Json => {
                let line = json!({
                    "file": path.display().to_string(),
                    "outcome": outcome,
                });
                println!("{line}");
            }
            Format::Tsv => {
                if outcome.ok {
                    println!("{}\tok\tq={}", path.display(), outcome.distinct);
                } else {
                    println!(
                        "{}\tFAILED\t{}",
                        path.display(),
                        outcome.failures.join("; ")
                    );
                }
            }
        }
        if !outcome.ok {
            worst = 1;
        }
    }
    Ok(worst)
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad {what} entry: {t:?}")))
        })
        .collect()
}

fn cmd_search(args: SearchArgs) -> Result<i32> {
    let g = args.source.load()?;

    let emit = |cert: Option<&VerifiedCertificate>, stats: &search::SearchStats| -> Result<i32> {
        let payload = match cert {
            Some(c) => json!({ "certificate": c.to_certificate()?, "stats": stats }),
            None => json!({ "certificate": null, "stats": stats }),
        };
        println!("{payload:#}");
        Ok(if cert.is_some() { 0 } else { 1 })
    };

    if let (Some(values), Some(mults)) = (&args.values, &args.multiplicities) {
        let values: Vec<f64> = parse_list(values, "eigenvalue")?;
        let mults: Vec<usize> = parse_list(mults, "multiplicity")?;
        if let Some(q) = args.q {
            if q != values.len() {
                return Err(Error::InvalidArgument(
                    "--q disagrees with the number of --values".into(),
                ));
            }
        }
        let problem = SearchProblem::with_profile(g, values, mults)
            .seeded(args.seed)
            .with_budget(args.restarts, args.sweeps);
        let outcome = search::find_with_multiplicities(&problem)?;
        return emit(outcome.certificate.as_ref(), &outcome.stats);
    }

    match args.q {
        Some(2) => {
            let problem = SearchProblem::involution(g)
                .seeded(args.seed)
                .with_budget(args.restarts, args.sweeps);
            let outcome = search::find_involution(&problem)?;
            emit(outcome.certificate.as_ref(), &outcome.stats)
        }
        Some(k) => {
            let opts = EstimateOptions {
                restarts: args.restarts,
                max_sweeps: args.sweeps,
                seed: args.seed,
                max_profiles: 50,
            };
            let (cert, stats) = search::find_distinct_count(&g, k, &opts)?;
            emit(cert.as_ref(), &stats)
        }
        None => {
            let report = BoundReport::compute(&g)?;
            let mut seeds = vec![constructions::adjacency_certificate(&g)?];
            if let Ok(cover) = constructions::clique_cover_certificate(
                &g,
                &report.upper.cover.cliques,
                args.seed,
            ) {
                seeds.push(cover);
            }
            let opts = EstimateOptions {
                restarts: args.restarts,
                max_sweeps: args.sweeps,
                seed: args.seed,
                max_profiles: 50,
            };
            let est = search::estimate_q(&g, &seeds, &opts)?;
            let certificate = match est.certificates.first() {
                Some(c) => Some(c.to_certificate()?),
                None => None,
            };
            let payload = json!({
                "lower": est.lower,
                "upper": est.upper,
                "exact": est.exact(),
                "bounds": est.report,
                "certificate": certificate,
                "searched": est.searched,
            });
            println!("{payload:#}");
            Ok(if est.exact().is_some() { 0 } else { 1 })
        }
    }
}

fn cmd_survey(args: SurveyArgs) -> Result<i32> {
    let text = match &args.input {
        Some(path) => read_input(path)?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::InvalidArgument(format!("stdin: {e}")))?;
            buf
        }
    };
    let lines: Vec<&str> = text.lines().collect();
    let opts = SurveyOptions {
        seed: args.seed,
        restarts: args.restarts,
        max_sweeps: args.sweeps,
        search_limit: args.search_limit,
        ..SurveyOptions::default()
    };
    let rows = if args.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?
            .install(|| survey::run_survey(&lines, &opts))?
    } else {
        survey::run_survey(&lines, &opts)?
    };
    let summary = survey::summarize(&rows);
    match args.format {
        Format::Tsv => {
            println!("{}", survey::TSV_HEADER);
            for row in &rows {
                println!("{}", row.to_tsv());
            }
            println!("{}", summary.to_tsv_block());
        }
        Format::Json => {
            for row in &rows {
                println!("{}", row.to_json()?);
            }
            println!("{}", summary.to_json()?);
        }
    }
    Ok(0)
}
