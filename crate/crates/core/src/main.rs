use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sppam::dataset::{parse_arff, parse_csv, write_arff, write_csv, CsvOptions, Dataset};
use sppam::eval::{
    compare_datasets, delta_csv, delta_table, evaluate, group_stratified_folds, metrics_csv, metrics_table,
    ClassifierKind, CompareConfig, DEFAULT_ALPHA,
};
use sppam::synth::{generate_group_mean, generate_surf, GroupMeanConfig, SurfConfig};
use sppam::transform::{attribute_count, derive_output_schema, layout_note, transform, TransformConfig};

#[derive(Parser)]
#[command(name = "sppam", version, about = "Consolidate grouped records into one aggregate record per group")]
struct Cli {
    /// Worker threads for aggregation and cross-validation (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Aggregate every group of records into a single record.
    Transform(TransformArgs),
    /// Print the derived output schema and its attribute count.
    Schema(SchemaArgs),
    /// Write a record_index,fold assignment as CSV.
    Folds(FoldsArgs),
    /// Cross-validate classifiers on one dataset.
    Eval(EvalArgs),
    /// Cross-validate on an original and a transformed dataset and report the change.
    Compare(CompareArgs),
    /// Generate a synthetic surf-observation dataset.
    GenSurf(GenSurfArgs),
    /// Generate data whose labels depend on per-group means.
    GenGroupMean(GenGroupMeanArgs),
}

#[derive(Args)]
struct TransformArgs {
    input: PathBuf,
    #[arg(long)]
    pivot: String,
    #[arg(long)]
    class: String,
    #[arg(long)]
    id: Option<String>,
    /// Round derived numbers to at most this many decimals.
    #[arg(long)]
    decimals: Option<u32>,
    /// Order records by this attribute before aggregating.
    #[arg(long)]
    sort_by: Option<String>,
    /// Output file; `.csv` writes CSV, anything else ARFF. Defaults to stdout (ARFF).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SchemaArgs {
    input: PathBuf,
    #[arg(long)]
    pivot: String,
    #[arg(long)]
    class: String,
    #[arg(long)]
    id: Option<String>,
}

#[derive(Args)]
struct FoldsArgs {
    input: PathBuf,
    /// Class used for stratification (default: the last attribute).
    #[arg(long)]
    class: Option<String>,
    #[arg(short, long, default_value_t = 10)]
    k: usize,
    #[arg(long)]
    group_by: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CvArgs {
    #[arg(long)]
    class: String,
    /// Comma-separated classifier names.
    #[arg(long, value_delimiter = ',', default_value = "ZeroR,OneR,NaiveBayes,DecisionStump")]
    classifiers: Vec<String>,
    #[arg(short, long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep records sharing this attribute's value in one fold.
    #[arg(long)]
    group_by: Option<String>,
    /// Significance level: 0.01 or 0.05.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Print CSV instead of an aligned table.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct EvalArgs {
    input: PathBuf,
    #[command(flatten)]
    cv: CvArgs,
}

#[derive(Args)]
struct CompareArgs {
    original: PathBuf,
    transformed: PathBuf,
    #[command(flatten)]
    cv: CvArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    PraiaGrande,
    Aljezur,
}

#[derive(Args)]
struct GenSurfArgs {
    #[arg(long, value_enum, default_value_t = Preset::PraiaGrande)]
    preset: Preset,
    #[arg(long)]
    days: Option<usize>,
    /// Days whose last observation is positive.
    #[arg(long)]
    positive_days: Option<usize>,
    /// Positive records overall.
    #[arg(long)]
    positive_records: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenGroupMeanArgs {
    #[arg(long, default_value_t = GroupMeanConfig::default().groups)]
    groups: usize,
    #[arg(long, default_value_t = GroupMeanConfig::default().group_size)]
    group_size: usize,
    #[arg(long, default_value_t = GroupMeanConfig::default().noise_attributes)]
    noise: usize,
    #[arg(long, default_value_t = GroupMeanConfig::default().separation)]
    separation: f64,
    #[arg(long, default_value_t = GroupMeanConfig::default().spread)]
    spread: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

enum CliError {
    Parse(String),
    Config(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) | CliError::Config(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

fn config_err(e: impl fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn read(path: &Path, options: impl FnOnce() -> CsvOptions) -> Result<Dataset, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    if is_csv(path) {
        let mut options = options();
        if let Some(stem) = path.file_stem() {
            options.relation = stem.to_string_lossy().into_owned();
        }
        parse_csv(&text, &options).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    } else {
        parse_arff(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }
}

fn render(dataset: &Dataset, path: Option<&Path>, decimals: Option<u32>) -> String {
    match path {
        Some(p) if is_csv(p) => write_csv(dataset, decimals),
        _ => write_arff(dataset, decimals),
    }
}

fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn transform_config(pivot: &str, class: &str, id: Option<&String>) -> TransformConfig {
    let config = TransformConfig::new(pivot, class);
    match id {
        Some(id) => config.with_id(id),
        None => config,
    }
}

fn cmd_transform(args: TransformArgs) -> Result<(), CliError> {
    let input = read(&args.input, || {
        CsvOptions::with_keys(&args.pivot, args.id.as_deref(), &args.class)
    })?;
    let mut config = transform_config(&args.pivot, &args.class, args.id.as_ref());
    if let Some(s) = &args.sort_by {
        config = config.with_sort_by(s);
    }
    let out = transform(&input, &config).map_err(config_err)?;
    emit(&render(&out.dataset, args.output.as_deref(), args.decimals), args.output.as_deref())?;
    let summary = format!(
        "{} groups, {} \u{2192} {} attributes",
        out.dataset.len(),
        input.schema().len(),
        out.dataset.schema().len()
    );
    if args.output.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    if !out.mixed_class_groups.is_empty() {
        eprintln!(
            "warning: {} group(s) contain more than one class; kept the last: {}",
            out.mixed_class_groups.len(),
            out.mixed_class_groups.join(", ")
        );
    }
    Ok(())
}

fn cmd_schema(args: SchemaArgs) -> Result<(), CliError> {
    let input = read(&args.input, || {
        CsvOptions::with_keys(&args.pivot, args.id.as_deref(), &args.class)
    })?;
    let config = transform_config(&args.pivot, &args.class, args.id.as_ref());
    let schema = derive_output_schema(input.schema(), &config).map_err(config_err)?;
    let count = attribute_count(input.schema(), &config).map_err(config_err)?;
    let mut out = String::new();
    for (i, attribute) in schema.iter().enumerate() {
        let kind = match attribute.domain() {
            Some(values) => format!("{{{}}}", values.join(", ")),
            None if attribute.is_numeric() => "NUMERIC".to_string(),
            None => "STRING".to_string(),
        };
        out.push_str(&format!("{:>3}  {}  {kind}\n", i + 1, attribute.name));
    }
    out.push_str(&format!("{count} attributes\n"));
    if let Some(note) = layout_note(input.schema(), &config) {
        out.push_str(&note);
        out.push('\n');
    }
    emit(&out, None)
}

fn cmd_folds(args: FoldsArgs) -> Result<(), CliError> {
    let input = read(&args.input, || CsvOptions {
        nominal_columns: args.class.iter().cloned().collect(),
        string_columns: args.group_by.iter().cloned().collect(),
        ..CsvOptions::default()
    })?;
    let class = match &args.class {
        Some(c) => c.clone(),
        None => input
            .schema()
            .attributes()
            .last()
            .map(|a| a.name.clone())
            .ok_or_else(|| CliError::Config("dataset has no attributes".into()))?,
    };
    let folds = group_stratified_folds(&input, &class, args.k, args.group_by.as_deref(), args.seed)
        .map_err(config_err)?;
    let mut out = String::from("record_index,fold\n");
    for (r, f) in folds.assignments().iter().enumerate() {
        out.push_str(&format!("{r},{f}\n"));
    }
    emit(&out, args.output.as_deref())
}

fn compare_config(cv: &CvArgs) -> Result<CompareConfig, CliError> {
    let classifiers = cv
        .classifiers
        .iter()
        .map(|name| name.parse::<ClassifierKind>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(config_err)?;
    if classifiers.is_empty() {
        return Err(CliError::Config("no classifiers given".into()));
    }
    sppam::eval::t_critical(cv.alpha, 1).map_err(config_err)?;
    Ok(CompareConfig {
        classifiers,
        k: cv.k,
        repeats: cv.repeats,
        seed: cv.seed,
        group_by: cv.group_by.clone(),
        alpha: cv.alpha,
    })
}

fn eval_options(cv: &CvArgs) -> CsvOptions {
    CsvOptions {
        nominal_columns: vec![cv.class.clone()],
        string_columns: cv.group_by.iter().cloned().collect(),
        ..CsvOptions::default()
    }
}

fn cmd_eval(args: EvalArgs) -> Result<(), CliError> {
    let config = compare_config(&args.cv)?;
    let input = read(&args.input, || eval_options(&args.cv))?;
    let report = evaluate(&input, &args.cv.class, &config, args.cv.group_by.as_deref()).map_err(config_err)?;
    let reports = [report];
    let text = if args.cv.csv {
        metrics_csv(&reports)
    } else {
        metrics_table(&reports)
    };
    emit(&text, None)
}

fn cmd_compare(args: CompareArgs) -> Result<(), CliError> {
    let config = compare_config(&args.cv)?;
    let original = read(&args.original, || eval_options(&args.cv))?;
    let transformed = read(&args.transformed, || CsvOptions {
        nominal_columns: vec![args.cv.class.clone()],
        ..CsvOptions::default()
    })?;
    let comparison = compare_datasets(&original, &transformed, &args.cv.class, &config).map_err(config_err)?;
    let text = if args.cv.csv {
        delta_csv(&comparison)
    } else {
        let reports = [comparison.original.clone(), comparison.transformed.clone()];
        format!("{}\n{}", metrics_table(&reports), delta_table(&comparison))
    };
    emit(&text, None)
}

fn cmd_gen_surf(args: GenSurfArgs) -> Result<(), CliError> {
    let mut config = match args.preset {
        Preset::PraiaGrande => SurfConfig::praia_grande(args.seed),
        Preset::Aljezur => SurfConfig::aljezur(args.seed),
    };
    if let Some(d) = args.days {
        config.days = d;
    }
    if let Some(p) = args.positive_days {
        config.positive_days = p;
    }
    if let Some(p) = args.positive_records {
        config.positive_records = p;
    }
    let dataset = generate_surf(&config).map_err(config_err)?;
    emit(&render(&dataset, args.output.as_deref(), None), args.output.as_deref())
}

fn cmd_gen_group_mean(args: GenGroupMeanArgs) -> Result<(), CliError> {
    let config = GroupMeanConfig {
        groups: args.groups,
        group_size: args.group_size,
        noise_attributes: args.noise,
        separation: args.separation,
        spread: args.spread,
        seed: args.seed,
    };
    let dataset = generate_group_mean(&config).map_err(config_err)?;
    emit(&render(&dataset, args.output.as_deref(), None), args.output.as_deref())
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(config_err)?;
    }
    match cli.command {
        Command::Transform(a) => cmd_transform(a),
        Command::Schema(a) => cmd_schema(a),
        Command::Folds(a) => cmd_folds(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Compare(a) => cmd_compare(a),
        Command::GenSurf(a) => cmd_gen_surf(a),
        Command::GenGroupMean(a) => cmd_gen_group_mean(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
