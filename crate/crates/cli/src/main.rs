//! Command-line front end: every pipeline stage behind a subcommand with
//! stable file formats. Exit codes: 0 success / verdict true, 1 verdict
//! false, 2 usage or format error, 3 resource cap exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use twodd_core::certify::{
    check, reduce_2ac, reduce_3ac, verify_certificate, Caps, Certificate, Verdict,
};
use twodd_core::enumerate::{
    census, code_hex, generate, Analysis, CanonicalForm, FamilyFilter, FamilySpec,
    GenerateOptions,
};
use twodd_core::factors::{enumerate_factors, open_routes};
use twodd_core::io::{
    format_graph_dot, format_graph_text, format_permset, parse_graph_text, parse_permset,
    GraphJson,
};
use twodd_core::permset::find_biconjugacy;
use twodd_core::{Digraph, Error, Perm, SpliceMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Parser)]
#[command(
    name = "twodd",
    version,
    about = "Alternating-cycle decomposition, routes, residues, and non-Hamiltonicity certificates for 2-diregular digraphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Cap on alternating cycles for exhaustive factor scans (2^K factors).
    #[arg(long, global = true, default_value_t = 24, env = "TWODD_MAX_FACTOR_BITS")]
    max_factor_bits: u32,
    /// Cap on the AC count for the exhaustive subset scan in `check`.
    #[arg(long, global = true, default_value_t = 12, env = "TWODD_MAX_ACS")]
    max_acs: usize,
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the alternating-cycle partition of a graph.
    Decompose {
        graph: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Enumerate all factors as JSON records.
    Factors {
        graph: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Open routes of an open graph, as a permutation-set file.
    Routes {
        graph: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Relabel exits so the first open factor's route is the identity.
        #[arg(long)]
        normalize: bool,
    },
    /// Residue of a route set (from a graph or a permutation-set file).
    Residue {
        /// Graph file; routes are computed first.
        graph: Option<PathBuf>,
        /// Permutation-set file to use directly.
        #[arg(long, conflicts_with = "graph")]
        permset: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for a biconjugacy witness between two permutation sets.
    Equiv { set1: PathBuf, set2: PathBuf },
    /// Splice two open graphs; x and y in cycle notation (default identity).
    Splice {
        f: PathBuf,
        fp: PathBuf,
        #[arg(long, default_value = "I")]
        x: String,
        #[arg(long, default_value = "I")]
        y: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the certification pipeline; exit 0 iff non-Hamiltonian.
    Check {
        graph: PathBuf,
        /// Where to write the certificate JSON.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Re-check a certificate file against a graph; exit 0 iff it replays.
    VerifyCert { graph: PathBuf, cert: PathBuf },
    /// Apply the 2-AC/3-AC reductions to a fixpoint.
    Reduce {
        graph: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exhaustively generate a family, writing an archive and an index.
    Generate {
        #[command(flatten)]
        family: FamilyArgs,
        /// Output prefix: writes <prefix>.graphs and <prefix>.index.
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        long_run: bool,
        /// Process one shard of a long run: "i/N".
        #[arg(long)]
        shard: Option<String>,
    },
    /// Generate a family and tabulate statistics.
    Census {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        long_run: bool,
        #[arg(long)]
        shard: Option<String>,
    },
}

#[derive(clap::Args)]
struct FamilyArgs {
    /// Arcs per alternating cycle (2k).
    #[arg(long, default_value_t = 6)]
    arcs_per_ac: usize,
    /// Number of alternating cycles (m).
    #[arg(long)]
    acs: usize,
    #[arg(long)]
    clean: bool,
    #[arg(long)]
    connected: bool,
    /// Exact number of saturated vertices for boundary families.
    #[arg(long, conflicts_with = "all_saturated")]
    saturated: Option<usize>,
    /// Identify every exit: generate 2-dds.
    #[arg(long)]
    all_saturated: bool,
    #[arg(long)]
    odd_family: bool,
    #[arg(long)]
    non_2_splittable: bool,
}

impl FamilyArgs {
    fn to_spec(&self) -> FamilySpec {
        let mut filters = Vec::new();
        if self.all_saturated {
            filters.push(FamilyFilter::SaturatedOnly);
        }
        if self.odd_family {
            filters.push(FamilyFilter::OddFamily);
        }
        if self.non_2_splittable {
            filters.push(FamilyFilter::Non2Splittable);
        }
        FamilySpec {
            arcs_per_ac: self.arcs_per_ac,
            ac_count: self.acs,
            clean: self.clean,
            require_connected: self.connected,
            saturated_count: self.saturated,
            filters,
        }
    }
}

fn read_graph(path: &Path) -> Result<Digraph, Error> {
    let text = fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        let json: GraphJson = serde_json::from_str(&text)?;
        json.to_graph()
    } else {
        parse_graph_text(&text)
    }
}

fn write_out(path: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn parse_shard(text: &Option<String>) -> Result<Option<(usize, usize)>, Error> {
    let Some(text) = text else { return Ok(None) };
    let mut it = text.splitn(2, '/');
    let bad = || Error::Parse(format!("shard must be i/N, got {text:?}"));
    let i = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let n = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    Ok(Some((i, n)))
}

fn run(cli: Cli) -> Result<u8, Error> {
    let caps = Caps {
        max_factor_bits: cli.max_factor_bits,
        max_subset_acs: cli.max_acs,
    };
    match cli.cmd {
        Cmd::Decompose { graph, output } => {
            let g = read_graph(&graph)?;
            let acs = g.ac_decompose()?;
            let content = match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&GraphJson::from_graph(&g, Some(&acs)))? + "\n"
                }
                Format::Dot => format_graph_dot(&g),
                Format::Text => {
                    let mut out = String::new();
                    for (i, c) in acs.iter().enumerate() {
                        let fmt = |ids: Vec<usize>| {
                            ids.iter()
                                .map(|&id| {
                                    let a = g.arc(id);
                                    format!("{}->{}", a.from + 1, a.to + 1)
                                })
                                .collect::<Vec<_>>()
                                .join(" ")
                        };
                        out.push_str(&format!(
                            "ac {} odd={} clean={} forward: {} backward: {}\n",
                            i,
                            c.is_odd(),
                            g.ac_is_clean(c),
                            fmt(c.forward_arcs().collect()),
                            fmt(c.backward_arcs().collect()),
                        ));
                    }
                    out
                }
            };
            write_out(&output, &content)?;
            Ok(0)
        }
        Cmd::Factors { graph, output } => {
            let g = read_graph(&graph)?;
            let acs = g.ac_decompose()?;
            let mut out = String::new();
            for f in enumerate_factors(&g, &acs, caps.max_factor_bits)? {
                let record = serde_json::json!({
                    "selection": format!("{:0width$b}", f.selection, width = acs.len()),
                    "index": f.index(),
                    "cycles": f.cycles.iter().map(|c| c.iter().map(|v| v + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "paths": f.paths.iter().map(|p| p.iter().map(|v| v + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
                });
                out.push_str(&record.to_string());
                out.push('\n');
            }
            write_out(&output, &out)?;
            Ok(0)
        }
        Cmd::Routes {
            graph,
            output,
            normalize,
        } => {
            let g = read_graph(&graph)?;
            let mut routes = open_routes(&g, caps.max_factor_bits)?;
            if normalize {
                routes = routes.normalized();
            }
            write_out(&output, &format_permset(&routes.routes))?;
            Ok(0)
        }
        Cmd::Residue {
            graph,
            permset,
            output,
        } => {
            let set = match (graph, permset) {
                (Some(path), None) => {
                    let g = read_graph(&path)?;
                    open_routes(&g, caps.max_factor_bits)?.routes
                }
                (None, Some(path)) => parse_permset(&fs::read_to_string(path)?)?,
                _ => {
                    return Err(Error::Parse(
                        "residue needs exactly one of a graph file or --permset".into(),
                    ))
                }
            };
            write_out(&output, &format_permset(&set.residue()?))?;
            Ok(0)
        }
        Cmd::Equiv { set1, set2 } => {
            let a = parse_permset(&fs::read_to_string(set1)?)?;
            let b = parse_permset(&fs::read_to_string(set2)?)?;
            match find_biconjugacy(&a, &b)? {
                Some((x, y)) => {
                    println!("x = {x}");
                    println!("y = {y}");
                    Ok(0)
                }
                None => {
                    println!("no biconjugacy witness");
                    Ok(1)
                }
            }
        }
        Cmd::Splice { f, fp, x, y, output } => {
            let gf = read_graph(&f)?;
            let gfp = read_graph(&fp)?;
            let n = gf.labeling()?.exits.len();
            let map = SpliceMap::new(&gf, &gfp, Perm::parse(&x, n)?, Perm::parse(&y, n)?)?;
            let spliced = twodd_core::digraph::spliced_graph(&gf, &gfp, &map)?;
            let content = match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&GraphJson::from_graph(&spliced, None))? + "\n"
                }
                _ => format_graph_text(&spliced),
            };
            write_out(&output, &content)?;
            Ok(0)
        }
        Cmd::Check { graph, output } => {
            let g = read_graph(&graph)?;
            let cert = check(&g, &caps)?;
            let content = serde_json::to_string_pretty(&cert)? + "\n";
            write_out(&output, &content)?;
            match cert.verdict {
                Verdict::NonHamiltonian => Ok(0),
                Verdict::Hamiltonian => Ok(1),
                Verdict::Undecided => Ok(3),
            }
        }
        Cmd::VerifyCert { graph, cert } => {
            let g = read_graph(&graph)?;
            let cert: Certificate = serde_json::from_str(&fs::read_to_string(cert)?)?;
            match verify_certificate(&g, &cert) {
                Ok(()) => {
                    println!("certificate verified: {:?}", cert.verdict);
                    Ok(0)
                }
                Err(Error::BadCertificate(msg)) => {
                    println!("certificate rejected: {msg}");
                    Ok(1)
                }
                Err(e) => Err(e),
            }
        }
        Cmd::Reduce { graph, output } => {
            let mut g = read_graph(&graph)?;
            let mut steps = 0;
            loop {
                let red = match reduce_2ac(&g, &caps)? {
                    Some(r) => Some(r),
                    None => reduce_3ac(&g, &caps)?,
                };
                match red {
                    Some(r) => {
                        eprintln!("step {}: {}", steps + 1, serde_json::to_string(&r.step)?);
                        g = r.graph;
                        steps += 1;
                    }
                    None => break,
                }
            }
            eprintln!("{steps} reduction step(s)");
            write_out(&output, &format_graph_text(&g))?;
            Ok(0)
        }
        Cmd::Generate {
            family,
            output,
            long_run,
            shard,
        } => {
            let spec = family.to_spec();
            let options = GenerateOptions {
                long_run,
                shard: parse_shard(&shard)?,
            };
            let graphs = generate(&spec, &options)?;
            let mut archive = String::new();
            let mut index = String::new();
            for (i, g) in graphs.iter().enumerate() {
                let CanonicalForm { code, .. } = twodd_core::enumerate::canonical_form(g);
                archive.push_str(&format!("# graph {} {}\n", i, code_hex(&code)));
                archive.push_str(&format_graph_text(g));
                archive.push('\n');
                index.push_str(&code_hex(&code));
                index.push('\n');
            }
            fs::write(output.with_extension("graphs"), archive)?;
            fs::write(output.with_extension("index"), index)?;
            eprintln!("{} graphs", graphs.len());
            Ok(0)
        }
        Cmd::Census {
            family,
            long_run,
            shard,
        } => {
            let spec = family.to_spec();
            let options = GenerateOptions {
                long_run,
                shard: parse_shard(&shard)?,
            };
            let analyses = [
                Analysis::Connectivity,
                Analysis::Cleanliness,
                Analysis::ParityFamily,
                Analysis::Splittability,
                Analysis::Hamiltonicity,
                Analysis::ResidueSize,
                Analysis::Certification,
            ];
            let table = census(&spec, &analyses, &options)?;
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&table)?),
                _ => print!("{}", table.to_tsv()),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    #[cfg(feature = "parallel")]
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    if cli.jobs.is_some() {
        eprintln!("warning: built without the parallel feature; --jobs ignored");
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::CapExceeded(_) => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
