use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kdyck::formulas::{
    bounded_total, fuss_catalan, nct_bivariate, nct_bivariate_printed, refined_count,
};
use kdyck::render::{geometric_svg, geometric_tikz, path_svg, path_tikz, tree_svg, tree_tikz};
use kdyck::series::{tree_gf, CoeffJson};
use kdyck::signature::all_signatures;
use kdyck::verify::{run_sweep, SweepConfig};
use kdyck::{
    decompose_bounded, enumerate_paths, enumerate_trees, path_to_tree, recombine, tree_to_path,
    BigCount, BoundedDecomposition, GeometricNct, KDyckPath, KnctTree, Signature,
};
use num_bigint::BigInt;

#[derive(Parser, Debug)]
#[command(
    name = "kdyck",
    version,
    about = "Exact counting, enumeration and bijections for k-Dyck paths and k-non-crossing trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form counts
    Count(CountArgs),
    /// List every path or tree of a given size
    Enumerate(EnumerateArgs),
    /// Convert between trees and paths, one object per input line
    Biject(BijectArgs),
    /// Cross-check formulas, exhaustive enumeration and the series engine
    Verify(VerifyArgs),
    /// Draw a path or a tree as TikZ or SVG
    Render(RenderArgs),
    /// Coefficients of the marked tree generating function as JSON lines
    Series(SeriesArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Text,
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum LineFormat {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Figure {
    Tikz,
    Svg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    #[value(alias = "paths")]
    Path,
    #[value(alias = "trees")]
    Tree,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Drawable {
    Path,
    Tree,
    Geometric,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    t: usize,
    /// Number of down-steps
    #[arg(long, conflicts_with = "n")]
    m: Option<usize>,
    /// Number of tree nodes; the path size is n - t - 1
    #[arg(long)]
    n: Option<usize>,
    /// A residue signature such as 1,3,6
    #[arg(long, conflicts_with_all = ["all_signatures", "bivariate"])]
    signature: Option<Signature>,
    #[arg(long, conflicts_with = "bivariate")]
    all_signatures: bool,
    /// Non-crossing trees on n nodes split by left edges (k = 2 only)
    #[arg(long)]
    bivariate: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: TableFormat,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    t: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BijectArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    t: usize,
    #[arg(long, value_enum)]
    from: Kind,
    /// Print both histograms and fail when they differ
    #[arg(long)]
    stats: bool,
    /// Read from a file instead of standard input
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: LineFormat,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Check a single k instead of 2 and 3
    #[arg(long)]
    k: Option<usize>,
    /// Check a single boundary instead of every t < k
    #[arg(long)]
    t: Option<usize>,
    /// Largest number of down-steps
    #[arg(long, default_value_t = 5)]
    m: usize,
    /// Largest node count for the non-crossing tree check
    #[arg(long, default_value_t = 8)]
    max_n: usize,
    /// Check the misprinted bivariate formula instead of the corrected one
    #[arg(long)]
    use_printed_bivariate: bool,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[arg(value_enum)]
    what: Drawable,
    #[arg(long, value_enum, default_value = "svg")]
    format: Figure,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    t: usize,
    /// Read from a file instead of standard input
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    t: usize,
    /// Truncation order in z
    #[arg(long)]
    order: usize,
    /// Print only this coefficient
    #[arg(long)]
    z: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("line {line}: {source}")]
    Input { line: usize, source: kdyck::Error },
    #[error(transparent)]
    Lib(#[from] kdyck::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            _ => 2,
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code());
    }
    let result = match cli.command {
        Command::Count(a) => cmd_count(&a),
        Command::Enumerate(a) => cmd_enumerate(&a),
        Command::Biject(a) => cmd_biject(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Render(a) => cmd_render(&a),
        Command::Series(a) => cmd_series(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn configure_threads() -> CliResult {
    let Ok(raw) = std::env::var("KDYCK_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "KDYCK_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn check_kt(k: usize, t: usize) -> CliResult {
    if k < 2 {
        return Err(CliError::Usage(format!("--k must be at least 2, got {k}")));
    }
    if t >= k {
        return Err(CliError::Usage(format!(
            "--t must be below k, got t={t}, k={k}"
        )));
    }
    Ok(())
}

fn output(path: Option<&PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_input(path: Option<&PathBuf>) -> CliResult<String> {
    let mut text = String::new();
    match path {
        Some(p) => {
            File::open(p)?.read_to_string(&mut text)?;
        }
        None => {
            io::stdin().read_to_string(&mut text)?;
        }
    }
    Ok(text)
}

fn cmd_count(a: &CountArgs) -> CliResult {
    check_kt(a.k, a.t)?;
    let mut out = output(None)?;
    if a.bivariate {
        return count_bivariate(a, &mut out);
    }
    let m = match (a.m, a.n) {
        (Some(m), _) => m,
        (None, Some(n)) if n > a.t => n - a.t - 1,
        (None, Some(n)) => {
            return Err(CliError::Usage(format!(
                "--n must exceed t, got n={n}, t={}",
                a.t
            )))
        }
        (None, None) => match &a.signature {
            Some(s) => s.total(),
            None => return Err(CliError::Usage("one of --m or --n is required".into())),
        },
    };
    let rows: Vec<(Signature, BigCount)> = if let Some(s) = &a.signature {
        if s.k() != a.k {
            return Err(CliError::Usage(format!(
                "signature {s} has {} entries, expected {}",
                s.k(),
                a.k
            )));
        }
        if s.total() != m {
            return Err(CliError::Usage(format!(
                "signature {s} sums to {}, expected m = {m}",
                s.total()
            )));
        }
        vec![(s.clone(), refined_count(a.t, s)?)]
    } else if a.all_signatures {
        all_signatures(a.k, m)
            .into_iter()
            .map(|s| refined_count(a.t, &s).map(|c| (s, c)))
            .collect::<kdyck::Result<_>>()?
    } else {
        Vec::new()
    };
    let total = bounded_total(a.k, a.t, m)?;
    let fuss = if a.t == 0 {
        Some(fuss_catalan(a.k, m)?)
    } else {
        None
    };
    let row_sum: BigCount = rows.iter().map(|(_, c)| c.clone()).sum();

    match a.format {
        TableFormat::Text => {
            for (s, c) in &rows {
                writeln!(out, "{s}: {c}")?;
            }
            if a.signature.is_none() {
                if a.all_signatures {
                    writeln!(out, "sum: {row_sum}")?;
                }
                writeln!(out, "total: {total}")?;
                if let Some(f) = &fuss {
                    writeln!(out, "fuss-catalan: {f}")?;
                }
            }
        }
        TableFormat::Json => {
            let rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|(s, c)| serde_json::json!({"signature": s, "count": c}))
                .collect();
            let mut doc =
                serde_json::json!({"k": a.k, "t": a.t, "m": m, "rows": rows, "total": total});
            if let Some(f) = &fuss {
                doc["fuss_catalan"] = serde_json::json!(f);
            }
            serde_json::to_writer(&mut out, &doc)?;
            writeln!(out)?;
        }
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            let mut header = vec!["k".to_string(), "t".into(), "m".into()];
            header.extend((1..=a.k).map(|h| format!("a_{h}")));
            header.push("count".into());
            w.write_record(&header)?;
            let rows = if rows.is_empty() {
                all_signatures(a.k, m)
                    .into_iter()
                    .map(|s| refined_count(a.t, &s).map(|c| (s, c)))
                    .collect::<kdyck::Result<Vec<_>>>()?
            } else {
                rows
            };
            for (s, c) in &rows {
                let mut rec = vec![a.k.to_string(), a.t.to_string(), m.to_string()];
                rec.extend(s.counts().iter().map(usize::to_string));
                rec.push(c.to_string());
                w.write_record(&rec)?;
            }
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(())
}

fn count_bivariate(a: &CountArgs, out: &mut dyn Write) -> CliResult {
    if a.k != 2 || a.t != 0 {
        return Err(CliError::Usage("--bivariate needs k = 2 and t = 0".into()));
    }
    let n = match (a.n, a.m) {
        (Some(n), _) => n,
        (None, Some(m)) => m + 1,
        (None, None) => return Err(CliError::Usage("--bivariate needs --n".into())),
    };
    if n < 2 {
        return Err(CliError::Usage(format!(
            "--bivariate needs n >= 2, got {n}"
        )));
    }
    let rows: Vec<(usize, BigCount)> = (0..=n - 2)
        .map(|j| nct_bivariate(n, j).map(|c| (j, c)))
        .collect::<kdyck::Result<_>>()?;
    match a.format {
        TableFormat::Text => {
            for (j, c) in &rows {
                writeln!(out, "j={j}: {c}")?;
            }
        }
        TableFormat::Json => {
            let rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|(j, c)| serde_json::json!({"j": j, "count": c}))
                .collect();
            serde_json::to_writer(&mut *out, &serde_json::json!({"n": n, "rows": rows}))?;
            writeln!(out)?;
        }
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["n", "j", "count"])?;
            for (j, c) in &rows {
                w.write_record([n.to_string(), j.to_string(), c.to_string()])?;
            }
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_enumerate(a: &EnumerateArgs) -> CliResult {
    check_kt(a.k, a.t)?;
    let mut out = output(a.output.as_ref())?;
    let mut count = 0u64;
    match a.kind {
        Kind::Path => {
            for p in enumerate_paths(a.k, a.m, a.t)? {
                writeln!(out, "{p}")?;
                count += 1;
            }
        }
        Kind::Tree => {
            if a.t != 0 {
                return Err(CliError::Usage(
                    "trees are enumerated with t = 0 only".into(),
                ));
            }
            for tree in enumerate_trees(a.k, a.m)? {
                writeln!(out, "{}", tree.canonical())?;
                count += 1;
            }
        }
    }
    writeln!(out, "{count}")?;
    out.flush()?;
    Ok(())
}

struct Converted {
    path: KDyckPath,
    trees: Vec<KnctTree>,
}

impl Converted {
    fn tree_text(&self) -> String {
        self.trees
            .iter()
            .map(KnctTree::canonical)
            .collect::<Vec<_>>()
            .join(";")
    }

    fn edge_hist(&self) -> Signature {
        let mut acc = Signature::zeros(self.path.k());
        for (s, tree) in self.trees.iter().enumerate() {
            acc = acc.add(&tree.edge_class_histogram(s));
        }
        acc
    }
}

fn convert_line(k: usize, t: usize, from: Kind, line: &str) -> kdyck::Result<Converted> {
    match from {
        Kind::Path => {
            let path = KDyckPath::parse(k, t, line)?;
            let trees = if t == 0 {
                vec![path_to_tree(&path)?]
            } else {
                decompose_bounded(&path)?
                    .components()
                    .iter()
                    .map(path_to_tree)
                    .collect::<kdyck::Result<_>>()?
            };
            Ok(Converted { path, trees })
        }
        Kind::Tree => {
            let trees: Vec<KnctTree> = line
                .split(';')
                .map(|part| KnctTree::parse(k, part))
                .collect::<kdyck::Result<_>>()?;
            if trees.len() != t + 1 {
                return Err(kdyck::Error::MalformedDecomposition(format!(
                    "expected {} ';'-separated trees, found {}",
                    t + 1,
                    trees.len()
                )));
            }
            let path = if t == 0 {
                tree_to_path(&trees[0])
            } else {
                let parts = trees.iter().map(tree_to_path).collect();
                recombine(&BoundedDecomposition::new(k, t, parts)?)?
            };
            Ok(Converted { path, trees })
        }
    }
}

fn cmd_biject(a: &BijectArgs) -> CliResult {
    check_kt(a.k, a.t)?;
    let reader: Box<dyn BufRead> = match &a.input {
        Some(p) => Box::new(BufReader::new(File::open(p)?)),
        None => Box::new(BufReader::new(io::stdin().lock())),
    };
    let mut out = output(None)?;
    let mut mismatches = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        let c = convert_line(a.k, a.t, a.from, line.trim()).map_err(|source| CliError::Input {
            line: line_no,
            source,
        })?;
        let converted = match a.from {
            Kind::Path => c.tree_text(),
            Kind::Tree => c.path.to_string(),
        };
        let residue = c.path.residue_histogram();
        let edges = c.edge_hist();
        if a.stats && residue != edges {
            mismatches.push(format!("line {line_no}: edges {edges}, residues {residue}"));
        }
        match a.format {
            LineFormat::Text if a.stats => {
                writeln!(out, "{converted}\tedges {edges} residues {residue}")?
            }
            LineFormat::Text => writeln!(out, "{converted}")?,
            LineFormat::Json => {
                let mut doc = serde_json::json!({
                    "tree": c.tree_text(),
                    "path": c.path.to_string(),
                    "stats": residue,
                });
                if a.stats {
                    doc["edge_stats"] = serde_json::json!(edges);
                }
                serde_json::to_writer(&mut out, &doc)?;
                writeln!(out)?;
            }
        }
    }
    out.flush()?;
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "histograms differ\n{}",
            mismatches.join("\n")
        )))
    }
}

fn cmd_verify(a: &VerifyArgs) -> CliResult {
    if let Some(k) = a.k {
        check_kt(k, a.t.unwrap_or(0))?;
    }
    if a.max_n > 9 {
        return Err(CliError::Usage(format!(
            "--max-n is limited to 9, got {}",
            a.max_n
        )));
    }
    let config = SweepConfig {
        ks: a.k.map_or_else(|| vec![2, 3], |k| vec![k]),
        ts: a.t.map(|t| vec![t]),
        ms: (0..=a.m).collect(),
        bivariate_ns: (2..=a.max_n).collect(),
        printed_bivariate: a.use_printed_bivariate,
        ..SweepConfig::default()
    };
    let report = run_sweep(&config)?;
    println!("{report}");
    if a.use_printed_bivariate {
        // the corrected form is always shown next to the misprint
        let good = run_sweep(&SweepConfig {
            ks: Vec::new(),
            bivariate_ns: (2..=a.max_n.max(8)).collect(),
            printed_bivariate: false,
            ..config.clone()
        })?;
        let agree = good.passed();
        println!(
            "corrected bivariate formula, n <= {}: {}",
            a.max_n.max(8),
            if agree {
                "agrees with the geometric count"
            } else {
                "FAILED"
            }
        );
        if let Some(n) = first_printed_mismatch(a.max_n) {
            println!("printed bivariate formula first disagrees at n={n}");
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Failed("verification failed".into()))
    }
}

fn first_printed_mismatch(max_n: usize) -> Option<usize> {
    (2..=max_n).find(|&n| {
        (0..=n - 2).any(|j| nct_bivariate_printed(n, j).ok() != nct_bivariate(n, j).ok())
    })
}

fn cmd_render(a: &RenderArgs) -> CliResult {
    let text = read_input(a.input.as_ref())?;
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .unwrap_or("");
    let fig = match a.what {
        Drawable::Path => {
            check_kt(a.k, a.t)?;
            let p = KDyckPath::parse(a.k, a.t, line)
                .map_err(|source| CliError::Input { line: 1, source })?;
            match a.format {
                Figure::Svg => path_svg(&p),
                Figure::Tikz => path_tikz(&p),
            }
        }
        Drawable::Tree => {
            check_kt(a.k, 0)?;
            let tree =
                KnctTree::parse(a.k, line).map_err(|source| CliError::Input { line: 1, source })?;
            match a.format {
                Figure::Svg => tree_svg(&tree)?,
                Figure::Tikz => tree_tikz(&tree)?,
            }
        }
        Drawable::Geometric => {
            let tree =
                GeometricNct::parse(line).map_err(|source| CliError::Input { line: 1, source })?;
            match a.format {
                Figure::Svg => geometric_svg(&tree),
                Figure::Tikz => geometric_tikz(&tree),
            }
        }
    };
    let mut out = output(a.output.as_ref())?;
    out.write_all(fig.as_bytes())?;
    if !fig.ends_with('\n') {
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_series(a: &SeriesArgs) -> CliResult {
    check_kt(a.k, a.t)?;
    if let Some(z) = a.z {
        if z > a.order {
            return Err(CliError::Usage(format!(
                "--z {z} exceeds --order {}",
                a.order
            )));
        }
    }
    let f = tree_gf::<BigInt>(a.k, a.t, a.order)?;
    let mut out = output(None)?;
    let powers: Vec<usize> = match a.z {
        Some(z) => vec![z],
        None => (0..=a.order).collect(),
    };
    for z in powers {
        serde_json::to_writer(&mut out, &CoeffJson::new(z, f.coeff(z)?))?;
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}
