//! Command-line front end: family generation, curvature computation and the
//! conjecture probes, with CSV/JSON output.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hypercurv::curvature::{
    self, CGenericOptions, CurvatureKind, KappaOptions, KdOptions,
};
use hypercurv::{format, transport, FamilySpec, Hypergraph, HypergraphError};
use rayon::prelude::*;
use std::io::{Read, Write};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "hypercurv", version, about = "Discrete Ricci curvatures of weighted hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print vertex count, edge count, volume, diameter and the degree table.
    Info {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Generate a family instance and write it in the text format.
    Gen(GenArgs),
    /// Compute curvatures for one pair or all pairs.
    Curvature(CurvatureArgs),
    /// Per-λ diagnostic tables: ψ/λ samples, the KD − wKD gap and the
    /// pairing-constant trace.
    Probe(ProbeArgs),
}

#[derive(Args)]
struct IoArgs {
    /// Input file (defaults to stdin).
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Output file (defaults to stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct GenArgs {
    /// Family: kn (complete graph), cn (cycle), khn (complete hypergraph),
    /// r1 (1-regular), fig1, fig2, fig3.
    family: String,
    /// Vertex count for kn/cn/khn/r1.
    #[arg(long)]
    n: Option<usize>,
    /// Count of p vertices for the fig families.
    #[arg(long = "A")]
    a: Option<usize>,
    /// Count of q vertices for the fig families.
    #[arg(long = "B")]
    b: Option<usize>,
    /// Weight of the covering hyperedge for the fig families.
    #[arg(long = "w-ev", default_value_t = 1.0)]
    w_ev: f64,
    /// Weight of the second hyperedge (fig families) or of the single
    /// hyperedge (r1).
    #[arg(long = "w-e", default_value_t = 1.0)]
    w_e: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CurvatureArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Which curvature to compute.
    #[arg(long, value_enum)]
    method: Method,
    /// A single vertex pair.
    #[arg(long, num_args = 2, value_names = ["X", "Y"], conflicts_with = "all")]
    pair: Option<Vec<usize>>,
    /// All unordered vertex pairs.
    #[arg(long)]
    all: bool,
    /// Comma-separated λ schedule for the iktu/wiktu methods.
    #[arg(long, value_delimiter = ',')]
    lambdas: Option<Vec<f64>>,
    /// Stabilization tolerance for the λ schedule.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Lly,
    Iktu,
    Wiktu,
    C,
}

#[derive(Args)]
struct ProbeArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long, num_args = 2, value_names = ["X", "Y"], required = true)]
    pair: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    lambdas: Option<Vec<f64>>,
    /// Sample count for the ψ/λ infimum.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<HypergraphError>().is_some() {
                2
            } else {
                1
            }
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Info { io } => {
            let h = read_hypergraph(&io.input)?;
            let m = h.metric();
            let mut out = String::new();
            out.push_str(&format!("n: {}\n", h.vertex_count()));
            out.push_str(&format!("edges: {}\n", h.edges().len()));
            out.push_str(&format!("vol: {}\n", m.vol()));
            out.push_str(&format!("diam: {}\n", m.diam()));
            out.push_str("degrees:\n");
            for v in 0..h.vertex_count() {
                out.push_str(&format!("  {v}: {}\n", m.deg(v)));
            }
            write_output(&io.output, &out)?;
            Ok(0)
        }
        Command::Gen(args) => {
            let spec = family_spec(&args)?;
            let h = spec.generate()?;
            let mut text = String::new();
            text.push_str(&format!("# {} vertices, {} hyperedges\n", h.vertex_count(), h.edges().len()));
            for (v, label) in spec.vertex_labels().iter().enumerate() {
                text.push_str(&format!("# {label} = {v}\n"));
            }
            text.push_str(&format::serialize(&h));
            write_output(&args.output, &text)?;
            Ok(0)
        }
        Command::Curvature(args) => run_curvature(args),
        Command::Probe(args) => run_probe(args),
    }
}

fn family_spec(args: &GenArgs) -> Result<FamilySpec> {
    let need_n = || args.n.ok_or_else(|| anyhow!("--n is required for this family"));
    let need_ab = || -> Result<(usize, usize)> {
        Ok((
            args.a.ok_or_else(|| anyhow!("--A is required for fig families"))?,
            args.b.ok_or_else(|| anyhow!("--B is required for fig families"))?,
        ))
    };
    Ok(match args.family.as_str() {
        "kn" => FamilySpec::CompleteGraph { n: need_n()? },
        "cn" => FamilySpec::Cycle { n: need_n()? },
        "khn" => FamilySpec::CompleteHypergraph { n: need_n()? },
        "r1" => FamilySpec::OneRegular { n: need_n()?, weight: args.w_e },
        "fig1" => {
            let (a, b) = need_ab()?;
            FamilySpec::Fig1 { a, b, w_ev: args.w_ev, w_e: args.w_e }
        }
        "fig2" => {
            let (a, b) = need_ab()?;
            FamilySpec::Fig2 { a, b, w_ev: args.w_ev, w_e: args.w_e }
        }
        "fig3" => {
            let (a, b) = need_ab()?;
            FamilySpec::Fig3 { a, b, w_ev: args.w_ev, w_e: args.w_e }
        }
        other => bail!("unknown family '{other}' (expected kn, cn, khn, r1, fig1, fig2, fig3)"),
    })
}

struct PairRow {
    x: usize,
    y: usize,
    dist: f64,
    kappa_lly: Option<f64>,
    kappa_iktu: Option<f64>,
    kappa_wiktu: Option<f64>,
    c: Option<f64>,
    pairing: Option<f64>,
    lambda_stab: Option<f64>,
    certificate: Option<f64>,
    error: Option<String>,
}

fn run_curvature(args: CurvatureArgs) -> Result<i32> {
    let h = read_hypergraph(&args.io.input)?;
    let n = h.vertex_count();
    let pairs: Vec<(usize, usize)> = if args.all {
        (0..n).flat_map(|x| ((x + 1)..n).map(move |y| (x, y))).collect()
    } else {
        let p = args
            .pair
            .as_ref()
            .ok_or_else(|| anyhow!("pass --pair <X> <Y> or --all"))?;
        vec![(p[0], p[1])]
    };
    for &(x, y) in &pairs {
        if x >= n || y >= n {
            bail!("pair ({x}, {y}) out of range for {n} vertices");
        }
        if x == y {
            bail!("pair must name two distinct vertices");
        }
    }

    let mut kappa_opts = KappaOptions::default();
    if let Some(lambdas) = &args.lambdas {
        kappa_opts.lambdas = lambdas.clone();
    }
    if let Some(tol) = args.tol {
        kappa_opts.stabilization_tol = tol;
    }

    let rows: Vec<PairRow> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            let mut opts = kappa_opts.clone();
            opts.kd.seed = args.seed.wrapping_add(i as u64);
            compute_row(&h, x, y, args.method, &opts, args.seed.wrapping_add(i as u64))
        })
        .collect();

    let text = match args.format {
        Format::Csv => rows_to_csv(&rows)?,
        Format::Json => rows_to_json(&rows),
    };
    write_output(&args.io.output, &text)?;
    Ok(if rows.iter().all(|r| r.error.is_none()) { 0 } else { 1 })
}

fn compute_row(
    h: &Hypergraph,
    x: usize,
    y: usize,
    method: Method,
    opts: &KappaOptions,
    seed: u64,
) -> PairRow {
    let mut row = PairRow {
        x,
        y,
        dist: h.metric().dist_f(x, y),
        kappa_lly: None,
        kappa_iktu: None,
        kappa_wiktu: None,
        c: None,
        pairing: None,
        lambda_stab: None,
        certificate: None,
        error: None,
    };
    let result = (|| -> Result<(), hypercurv::SolverError> {
        match method {
            Method::Lly => {
                row.kappa_lly = Some(transport::lly_curvature(h, x, y)?);
                row.certificate = Some(0.0);
            }
            Method::Iktu | Method::Wiktu => {
                let kind = if method == Method::Iktu {
                    CurvatureKind::Iktu
                } else {
                    CurvatureKind::Wiktu
                };
                let report = curvature::kappa(h, x, y, kind, opts)?;
                match kind {
                    CurvatureKind::Iktu => row.kappa_iktu = Some(report.kappa),
                    CurvatureKind::Wiktu => row.kappa_wiktu = Some(report.kappa),
                }
                row.pairing = Some(report.pairing);
                row.lambda_stab = Some(report.stabilized_at);
                row.certificate = report.rows.last().map(|r| r.certificate);
            }
            Method::C => {
                match curvature::c_two_level(h, x, y) {
                    Ok(two) => row.c = Some(two.value),
                    Err(hypercurv::SolverError::UnsupportedStructure(_)) => {
                        let opts = CGenericOptions { seed, ..CGenericOptions::default() };
                        let g = curvature::c_generic(h, x, y, &opts)?;
                        row.c = Some(g.value);
                    }
                    Err(e) => return Err(e),
                }
                row.pairing = row.c.map(|v| v * h.metric().dist_f(x, y));
            }
        }
        Ok(())
    })();
    if let Err(e) = result {
        row.error = Some(e.to_string());
    }
    row
}

/// 12 significant digits, as the CSV column format.
fn sig12(v: f64) -> String {
    format!("{:.11e}", v)
}

fn opt12(v: Option<f64>) -> String {
    v.map(sig12).unwrap_or_default()
}

fn rows_to_csv(rows: &[PairRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "x",
        "y",
        "d",
        "kappa_lly",
        "kappa_iktu",
        "kappa_wiktu",
        "c",
        "pairing",
        "lambda_stab",
        "certificate",
        "error",
    ])?;
    for r in rows {
        w.write_record([
            r.x.to_string(),
            r.y.to_string(),
            format!("{}", r.dist),
            opt12(r.kappa_lly),
            opt12(r.kappa_iktu),
            opt12(r.kappa_wiktu),
            opt12(r.c),
            opt12(r.pairing),
            opt12(r.lambda_stab),
            opt12(r.certificate),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn rows_to_json(rows: &[PairRow]) -> String {
    let items: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "x": r.x,
                "y": r.y,
                "d": r.dist,
                "kappa_lly": r.kappa_lly,
                "kappa_iktu": r.kappa_iktu,
                "kappa_wiktu": r.kappa_wiktu,
                "c": r.c,
                "pairing": r.pairing,
                "lambda_stab": r.lambda_stab,
                "certificate": r.certificate,
                "error": r.error,
            })
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&items).expect("serializable rows");
    s.push('\n');
    s
}

fn run_probe(args: ProbeArgs) -> Result<i32> {
    let h = read_hypergraph(&args.io.input)?;
    let (x, y) = (args.pair[0], args.pair[1]);
    let lambdas = args.lambdas.unwrap_or_else(|| vec![1e-2, 1e-3, 1e-4]);
    let rows = hypercurv::resolvent::probe_liminf(&h, x, y, &lambdas, args.samples, args.seed)?;
    let kd_opts = KdOptions { seed: args.seed, ..KdOptions::default() };
    let min_norm = hypercurv::polytope::MinNormOptions::default();
    let cache = h.metric();

    let mut table: Vec<(f64, f64, f64, usize, f64, f64, f64, f64)> = Vec::new();
    for row in &rows {
        let kd = curvature::kd(&h, x, y, row.lambda, &kd_opts)?;
        let wkd = curvature::wkd(&h, x, y, row.lambda, &kd_opts)?;
        let l0 = hypercurv::polytope::laplacian_l0_with(&h, &kd.potential, &min_norm)?;
        let pairing = cache.pairing(&l0.value, x, y);
        table.push((
            row.lambda,
            row.min_ratio,
            row.mean_ratio,
            row.samples,
            kd.value,
            wkd.value,
            kd.value - wkd.value,
            pairing,
        ));
    }

    let text = match args.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "lambda",
                "psi_over_lambda_min",
                "psi_over_lambda_mean",
                "samples",
                "kd",
                "wkd",
                "kd_minus_wkd",
                "pairing",
            ])?;
            for t in &table {
                w.write_record([
                    sig12(t.0),
                    sig12(t.1),
                    sig12(t.2),
                    t.3.to_string(),
                    sig12(t.4),
                    sig12(t.5),
                    sig12(t.6),
                    sig12(t.7),
                ])?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Json => {
            let items: Vec<serde_json::Value> = table
                .iter()
                .map(|t| {
                    serde_json::json!({
                        "lambda": t.0,
                        "psi_over_lambda_min": t.1,
                        "psi_over_lambda_mean": t.2,
                        "samples": t.3,
                        "kd": t.4,
                        "wkd": t.5,
                        "kd_minus_wkd": t.6,
                        "pairing": t.7,
                    })
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&items)?;
            s.push('\n');
            s
        }
    };
    write_output(&args.io.output, &text)?;
    Ok(0)
}

fn read_hypergraph(input: &Option<PathBuf>) -> Result<Hypergraph> {
    let text = match input {
        Some(path) => std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?,
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf).context("reading stdin")?;
            buf
        }
    };
    Ok(format::parse(&text)?)
}

fn write_output(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}
