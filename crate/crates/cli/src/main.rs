//! `sdt`: distance transforms, template matching, watershed segmentation and
//! the evaluation experiments from the command line.
//!
//! Every subcommand writes into an output directory: the result files plus a
//! `manifest.json` recording the command, seed and parameters. Existing files
//! are never replaced unless `--force` is given. Outputs depend only on the
//! inputs, flags and seed, never on `--threads`.

mod output;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use output::OutputSet;
use sdt_core::experiments::{
    auc_two_segments, run_accuracy_experiment, run_disks_experiment, run_template_experiment, watershed_demo,
    AccuracyConfig, BlobDemoConfig, DisksConfig, TemplateConfig,
};
use sdt_core::io::{self, ImageFormat};
use sdt_core::matching::{analyze_minima, match_template};
use sdt_core::rng::DEFAULT_SEED;
use sdt_core::sdt::ParamOverrides;
use sdt_core::synth::Glyph;
use sdt_core::watershed::{segment, DEFAULT_H};
use sdt_core::{transform, Backend, BinaryImage, SdtParams};

#[derive(Parser, Debug)]
#[command(name = "sdt", version, about = "Stochastic distance transforms for binary images")]
struct Cli {
    /// Seed for every random draw (noise, Monte Carlo realizations, placements).
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Maximum number of worker threads (default: all cores). Results do not
    /// depend on this value.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Overwrite existing output files.
    #[arg(long, global = true)]
    force: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distance map of a binary image (CSV and raw f32).
    Transform(TransformArgs),
    /// Exhaustive template matching with minima analysis.
    Match(MatchArgs),
    /// Seeded watershed segmentation on the internal distance map.
    Segment(SegmentArgs),
    /// Run one of the bundled evaluation experiments.
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BackendArg {
    Dt,
    McSdt,
    DetSdt,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Dt => Backend::Dt,
            BackendArg::McSdt => Backend::McSdt,
            BackendArg::DetSdt => Backend::DetSdt,
        }
    }
}

/// Transform parameters shared by `transform`, `match` and `segment`.
#[derive(Args, Debug)]
struct ParamArgs {
    /// Distance backend.
    #[arg(long, value_enum, default_value = "det-sdt")]
    backend: BackendArg,
    /// Point removal probability of the random set, in [0, 1].
    #[arg(long)]
    rho: Option<f64>,
    /// Saturation distance (default: image diagonal, rounded up).
    #[arg(long)]
    dmax: Option<f64>,
    /// Monte Carlo realizations (default 400).
    #[arg(long)]
    n: Option<usize>,
    /// Probability mass covered by the deterministic evaluator (default 0.999).
    #[arg(long)]
    mass: Option<f64>,
    /// Fixed number of nearest points for the deterministic evaluator.
    #[arg(long)]
    k: Option<usize>,
    /// TOML file with any of the keys rho, dmax, n, mass, k. Flags take
    /// precedence over the file.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Input image options shared by the file-based subcommands.
#[derive(Args, Debug)]
struct InputArgs {
    /// Grey threshold in [0, 1]: pixels with intensity >= threshold are foreground.
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    /// Treat dark pixels as foreground instead.
    #[arg(long)]
    invert: bool,
}

#[derive(Args, Debug)]
struct TransformArgs {
    /// Input image (.pgm or .png).
    input: PathBuf,
    /// Output directory.
    #[arg(short, long)]
    out: PathBuf,
    #[command(flatten)]
    image: InputArgs,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args, Debug)]
struct MatchArgs {
    /// Image to search (.pgm or .png).
    image: PathBuf,
    /// Template (.pgm or .png); must fit inside the image.
    template: PathBuf,
    #[arg(short, long)]
    out: PathBuf,
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args, Debug)]
struct SegmentArgs {
    /// Input image (.pgm or .png); the foreground is the object to split.
    input: PathBuf,
    #[arg(short, long)]
    out: PathBuf,
    /// h-maxima tolerance for seed extraction.
    #[arg(long, default_value_t = DEFAULT_H)]
    h: f64,
    #[command(flatten)]
    image: InputArgs,
    #[command(flatten)]
    params: ParamArgs,
}

/// Flags shared by every experiment preset.
#[derive(Args, Debug)]
struct ExperimentCommon {
    #[arg(short, long)]
    out: PathBuf,
    /// TOML file with preset keys (see README). Flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Monte Carlo realizations.
    #[arg(long)]
    n: Option<usize>,
    /// Probability mass for the deterministic evaluator.
    #[arg(long)]
    mass: Option<f64>,
    /// Saturation distance.
    #[arg(long)]
    dmax: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Experiment {
    /// AADE of each backend on noisy glyphs (defaults: 100 reps, p 0.001, rho 0.75).
    Accuracy {
        #[command(flatten)]
        common: ExperimentCommon,
        #[arg(long)]
        reps: Option<usize>,
        /// Salt-noise probability per background pixel.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        rho: Option<f64>,
        /// Glyph image side length.
        #[arg(long)]
        size: Option<usize>,
        /// Comma-separated glyphs: A, X.
        #[arg(long, value_delimiter = ',')]
        glyphs: Option<Vec<GlyphArg>>,
    },
    /// NoM and catchment basin size over a rho sweep (defaults: 50 reps, sigma 0.1).
    Template {
        #[command(flatten)]
        common: ExperimentCommon,
        #[arg(long)]
        reps: Option<usize>,
        /// Gaussian noise standard deviation.
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        threshold: Option<f64>,
        /// Comma-separated rho values (default: 0, 0.025, ..., 0.975, 0.99).
        #[arg(long, value_delimiter = ',')]
        rhos: Option<Vec<f64>>,
        #[arg(long, value_enum)]
        backend: Option<BackendArg>,
    },
    /// Two-disk separation frequencies (defaults: 200 reps, rho 0.75, r 3*pi).
    Disks {
        #[command(flatten)]
        common: ExperimentCommon,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        rho: Option<f64>,
        /// h-maxima tolerance.
        #[arg(long)]
        h: Option<f64>,
        /// Number of centre distances.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Segment counts on the noisy blob scene (defaults: sigma 0.1, rho 0.95, dmax 256).
    WatershedDemo {
        #[command(flatten)]
        common: ExperimentCommon,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long)]
        h: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GlyphArg {
    #[value(name = "A")]
    A,
    #[value(name = "X")]
    X,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let written = match &cli.command {
        Command::Transform(a) => cmd_transform(&cli, a)?,
        Command::Match(a) => cmd_match(&cli, a)?,
        Command::Segment(a) => cmd_segment(&cli, a)?,
        Command::Experiment(e) => cmd_experiment(&cli, e)?,
    };
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn load_binary(path: &Path, input: &InputArgs) -> Result<BinaryImage> {
    let format = ImageFormat::from_path(path)?;
    let gray = io::read_image(path, format).with_context(|| format!("reading {}", path.display()))?;
    let img = gray.threshold(input.threshold);
    Ok(if input.invert { img.complement() } else { img })
}

fn build_params(args: &ParamArgs, width: usize, height: usize) -> Result<SdtParams> {
    let mut params = SdtParams::for_domain(0.0, width, height)?;
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        params = params.apply(&ParamOverrides::parse(&text)?)?;
    }
    let flags = ParamOverrides {
        rho: args.rho,
        dmax: args.dmax,
        n: args.n,
        mass: args.mass,
        k: args.k,
    };
    Ok(params.apply(&flags)?)
}

fn manifest(cli: &Cli, command: &str) -> Value {
    json!({
        "tool": "sdt",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "seed": cli.seed,
    })
}

fn cmd_transform(cli: &Cli, a: &TransformArgs) -> Result<Vec<PathBuf>> {
    let img = load_binary(&a.input, &a.image)?;
    let (w, h) = img.dims();
    let params = build_params(&a.params, w, h)?;
    let backend = Backend::from(a.params.backend);
    let map = transform(&img, backend, &params, cli.seed);

    let mut out = OutputSet::new(&a.out, cli.force);
    out.add("distance.csv", io::distance_map_to_csv(&map));
    out.add("distance.f32", io::encode_distance_raw(&map));
    let mut m = manifest(cli, "transform");
    m["input"] = json!(a.input.display().to_string());
    m["backend"] = json!(backend.name());
    m["params"] = serde_json::to_value(params)?;
    out.finish(m)
}

fn cmd_match(cli: &Cli, a: &MatchArgs) -> Result<Vec<PathBuf>> {
    let image = load_binary(&a.image, &a.input)?;
    let template = load_binary(&a.template, &a.input)?;
    let (w, h) = image.dims();
    let params = build_params(&a.params, w, h)?;
    let backend = Backend::from(a.params.backend);
    let field = match_template(&image, &template, backend, &params, cli.seed)?;
    let report = analyze_minima(&field)?;

    let mut out = OutputSet::new(&a.out, cli.force);
    out.add("field.csv", field.to_csv());
    out.add("minima.csv", report.to_csv(&field));
    out.add("basins.pgm", io::encode_label_pgm(&report.cb_labels));
    let mut m = manifest(cli, "match");
    m["image"] = json!(a.image.display().to_string());
    m["template"] = json!(a.template.display().to_string());
    m["backend"] = json!(backend.name());
    m["params"] = serde_json::to_value(params)?;
    m["result"] = json!({
        "nom": report.nom,
        "cb_size": report.cb_size,
        "global_min": [report.global_min.0, report.global_min.1],
        "global_value": report.global_value,
    });
    out.finish(m)
}

fn cmd_segment(cli: &Cli, a: &SegmentArgs) -> Result<Vec<PathBuf>> {
    let object = load_binary(&a.input, &a.image)?;
    let (w, h) = object.dims();
    let params = build_params(&a.params, w, h)?;
    let backend = Backend::from(a.params.backend);
    let result = segment(&object, backend, &params, cli.seed, a.h)?;

    let mut out = OutputSet::new(&a.out, cli.force);
    out.add("segments.csv", result.to_csv());
    out.add("labels.pgm", io::encode_label_pgm(&result.labels));
    let mut m = manifest(cli, "segment");
    m["input"] = json!(a.input.display().to_string());
    m["backend"] = json!(backend.name());
    m["h"] = json!(a.h);
    m["params"] = serde_json::to_value(params)?;
    m["segment_count"] = json!(result.segment_count);
    out.finish(m)
}

fn load_config<T: DeserializeOwned + Default>(path: Option<&PathBuf>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))
        }
    }
}

fn set<T: Copy>(target: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *target = v;
    }
}

fn cmd_experiment(cli: &Cli, e: &Experiment) -> Result<Vec<PathBuf>> {
    match e {
        Experiment::Accuracy { common, reps, p, rho, size, glyphs } => {
            let mut cfg: AccuracyConfig = load_config(common.config.as_ref())?;
            cfg.seed = cli.seed;
            set(&mut cfg.repetitions, *reps);
            set(&mut cfg.p, *p);
            set(&mut cfg.rho, *rho);
            set(&mut cfg.size, *size);
            set(&mut cfg.n_realizations, common.n);
            set(&mut cfg.mass, common.mass);
            if common.dmax.is_some() {
                cfg.d_max = common.dmax;
            }
            if let Some(g) = glyphs {
                cfg.glyphs = g
                    .iter()
                    .map(|g| match g {
                        GlyphArg::A => Glyph::A,
                        GlyphArg::X => Glyph::XPointCloud,
                    })
                    .collect();
            }
            let report = run_accuracy_experiment(&cfg)?;
            let mut out = OutputSet::new(&common.out, cli.force);
            out.add("accuracy_summary.csv", report.summary_csv());
            for backend in Backend::ALL {
                out.add(format!("accuracy_{backend}.csv"), report.table(backend).to_csv());
            }
            let mut m = manifest(cli, "experiment accuracy");
            m["config"] = serde_json::to_value(&cfg)?;
            out.finish(m)
        }
        Experiment::Template { common, reps, sigma, threshold, rhos, backend } => {
            let mut cfg: TemplateConfig = load_config(common.config.as_ref())?;
            cfg.seed = cli.seed;
            set(&mut cfg.repetitions, *reps);
            set(&mut cfg.sigma, *sigma);
            set(&mut cfg.threshold, *threshold);
            set(&mut cfg.n_realizations, common.n);
            set(&mut cfg.mass, common.mass);
            if common.dmax.is_some() {
                cfg.d_max = common.dmax;
            }
            if let Some(r) = rhos {
                cfg.rhos = r.clone();
            }
            if let Some(b) = backend {
                cfg.backend = (*b).into();
            }
            let table = run_template_experiment(&cfg)?;
            let mut out = OutputSet::new(&common.out, cli.force);
            out.add(format!("template_{}.csv", cfg.backend), table.to_csv());
            let mut m = manifest(cli, "experiment template");
            m["config"] = serde_json::to_value(&cfg)?;
            out.finish(m)
        }
        Experiment::Disks { common, reps, rho, h, steps } => {
            let mut cfg: DisksConfig = load_config(common.config.as_ref())?;
            cfg.seed = cli.seed;
            set(&mut cfg.repetitions, *reps);
            set(&mut cfg.rho, *rho);
            set(&mut cfg.h, *h);
            set(&mut cfg.steps, *steps);
            set(&mut cfg.n_realizations, common.n);
            set(&mut cfg.mass, common.mass);
            if common.dmax.is_some() {
                cfg.d_max = common.dmax;
            }
            let report = run_disks_experiment(&cfg)?;
            let mut out = OutputSet::new(&common.out, cli.force);
            let mut auc = String::from("backend,auc_two_segments\n");
            let mut aucs = serde_json::Map::new();
            for (backend, table) in &report.tables {
                let value = auc_two_segments(table)?;
                auc.push_str(&format!("{backend},{value}\n"));
                aucs.insert(backend.to_string(), json!(value));
                out.add(format!("disks_{backend}.csv"), table.to_csv());
            }
            out.add("disks_auc.csv", auc);
            let mut m = manifest(cli, "experiment disks");
            m["config"] = serde_json::to_value(&cfg)?;
            m["auc"] = Value::Object(aucs);
            out.finish(m)
        }
        Experiment::WatershedDemo { common, sigma, threshold, rho, h } => {
            let mut cfg: BlobDemoConfig = load_config(common.config.as_ref())?;
            cfg.seed = cli.seed;
            set(&mut cfg.sigma, *sigma);
            set(&mut cfg.threshold, *threshold);
            set(&mut cfg.rho, *rho);
            set(&mut cfg.h, *h);
            set(&mut cfg.n_realizations, common.n);
            set(&mut cfg.mass, common.mass);
            set(&mut cfg.d_max, common.dmax);
            let report = watershed_demo(&cfg)?;
            let mut out = OutputSet::new(&common.out, cli.force);
            out.add("watershed_demo.csv", report.to_csv());
            out.add("object.pgm", io::encode_binary_pgm(&report.object));
            for (backend, _, labels) in &report.results {
                out.add(format!("labels_{backend}.pgm"), io::encode_label_pgm(labels));
            }
            let mut m = manifest(cli, "experiment watershed-demo");
            m["config"] = serde_json::to_value(&cfg)?;
            out.finish(m)
        }
    }
}
