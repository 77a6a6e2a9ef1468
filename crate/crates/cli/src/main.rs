//! `groves`: sample, enumerate, measure and draw groves and Aztec diamond
//! tilings.
//!
//! Exit status is 0 on success, 2 for bad arguments or inputs (including
//! cost-guard refusals) and 1 for internal faults.

mod render;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use grove_core::arctic::{convergence_experiment, temperate_ratio, ExperimentRow};
use grove_core::aztec::{generate_tiling, AztecTiling};
use grove_core::grove::validate;
use grove_core::lattice::{label_from_index, labels_per_family};
use grove_core::rates::{aztec_e, aztec_p, grove_e, grove_p};
use grove_core::recurrence_poly::{cube_poly_edges, enumerate_tilings, oracle_groves};
use grove_core::shuffle::{generate, parse_probability, DEFAULT_SEED};
use grove_core::structures::{nexus_trace, young_projection};
use grove_core::{Bias, Family, Grove, Order};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::json;

use render::{render_grove_svg, render_tiling_svg, GroveSvgOptions, TilingSvgOptions};

#[derive(Parser)]
#[command(name = "groves", version, about = "Random groves and Aztec diamond tilings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Groves on the simplified triangular lattice.
    #[command(subcommand)]
    Grove(GroveCmd),
    /// Domino tilings of the Aztec diamond.
    #[command(subcommand)]
    Aztec(AztecCmd),
    /// Frozen-boundary experiments.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Nexus of a growing random grove.
    #[command(subcommand)]
    Nexus(NexusCmd),
    /// Young diagrams of frozen corners.
    #[command(subcommand)]
    Young(YoungCmd),
    /// Area fraction of the temperate zone for a bias.
    Rho(BiasArgs),
}

#[derive(Subcommand)]
enum GroveCmd {
    /// Draw a random grove by shuffling.
    Sample {
        #[command(flatten)]
        common: SampleArgs,
        #[command(flatten)]
        bias: BiasArgs,
        #[command(flatten)]
        svg: GroveSvgArgs,
    },
    /// Exact edge probabilities and creation rates of one order.
    Probs {
        #[arg(long)]
        order: Order,
        #[command(flatten)]
        bias: BiasArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count (or list) all groves of one order.
    Enumerate {
        #[arg(long)]
        order: Order,
        /// Print every grove as a JSON line instead of the count.
        #[arg(long)]
        list: bool,
    },
    /// Draw a grove read from a JSON file.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        bias: BiasArgs,
        #[command(flatten)]
        svg: GroveSvgArgs,
    },
}

#[derive(Subcommand)]
enum AztecCmd {
    /// Draw a uniformly random tiling by domino shuffling.
    Sample {
        #[command(flatten)]
        common: SampleArgs,
        #[command(flatten)]
        svg: TilingSvgArgs,
    },
    /// Exact north-domino probabilities and creation rates of one order.
    Probs {
        #[arg(long)]
        order: Order,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count (or list) all tilings of one order.
    Enumerate {
        #[arg(long)]
        order: Order,
        #[arg(long)]
        list: bool,
    },
    /// Draw a tiling read from a JSON file.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        svg: TilingSvgArgs,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Misfit against the inscribed circle, uniform bias.
    Arctic {
        #[command(flatten)]
        experiment: ExperimentArgs,
    },
    /// Misfit against the inscribed ellipse of a bias.
    Ellipse {
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[command(flatten)]
        bias: BiasArgs,
    },
}

#[derive(Subcommand)]
enum NexusCmd {
    /// Nexus after each shuffle up to the given order.
    Trace {
        #[arg(long)]
        order: Order,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        bias: BiasArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum YoungCmd {
    /// Frozen corner of one family as a Young diagram.
    Project {
        /// Grove JSON to read; a random grove is drawn when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, required_unless_present = "input")]
        order: Option<Order>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        bias: BiasArgs,
        #[arg(long, value_enum, default_value = "a")]
        family: FamilyArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    order: Order,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: SampleFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Probabilities accept `p/q`, decimals or integers. A missing parameter
/// is whatever makes the three sum to 1; with none given the bias is
/// uniform.
#[derive(Args, Clone)]
struct BiasArgs {
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
}

#[derive(Args)]
struct GroveSvgArgs {
    /// Edge length in pixels.
    #[arg(long, default_value_t = 8.0)]
    pixel: f64,
    #[arg(long)]
    highlight_frozen: bool,
    /// Draw the inscribed circle or ellipse.
    #[arg(long)]
    overlay: bool,
}

#[derive(Args)]
struct TilingSvgArgs {
    /// Cell side in pixels.
    #[arg(long, default_value_t = 6.0)]
    pixel: f64,
    #[arg(long)]
    overlay: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [50u32, 100, 200])]
    orders: Vec<Order>,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleFormat {
    Json,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    A,
    B,
    C,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::A => Family::A,
            FamilyArg::B => Family::B,
            FamilyArg::C => Family::C,
        }
    }
}

/// Failure split by exit status.
enum Failure {
    Usage(String),
    Internal(anyhow::Error),
}

impl From<grove_core::Error> for Failure {
    fn from(e: grove_core::Error) -> Self {
        use grove_core::Error as E;
        match e {
            E::Internal(_) | E::InexactDivision(_) | E::MalformedTerm(_) | E::ZeroConstantTerm => {
                Failure::Internal(e.into())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Internal(e)
    }
}

type Outcome = Result<(), Failure>;

impl BiasArgs {
    fn resolve(&self) -> Result<Bias, Failure> {
        let parse = |s: &Option<String>| s.as_deref().map(parse_probability).transpose();
        let (a, b, c) = (parse(&self.alpha)?, parse(&self.beta)?, parse(&self.gamma)?);
        let one = num_rational::Ratio::from_integer(1i64);
        let bias = match (a, b, c) {
            (None, None, None) => return Ok(Bias::uniform()),
            (Some(a), Some(b), Some(c)) => Bias::new(a, b, c),
            (Some(a), Some(b), None) => Bias::new(a, b, one - a - b),
            (Some(a), None, Some(c)) => Bias::new(a, one - a - c, c),
            (None, Some(b), Some(c)) => Bias::new(one - b - c, b, c),
            _ => {
                return Err(Failure::Usage(
                    "give at least two of --alpha, --beta, --gamma".into(),
                ))
            }
        };
        Ok(bias?)
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Outcome {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).context("writing to stdout")?;
        }
    }
    Ok(())
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn split(r: &BigRational) -> (String, String, f64) {
    (
        r.numer().to_string(),
        r.denom().to_string(),
        r.to_f64().unwrap_or(f64::NAN),
    )
}

/// Rows `n,i,j,p_num,p_den,p_float,E_num,E_den`.
fn probability_table(rows: Vec<(Order, i32, i32, BigRational, BigRational)>, format: TableFormat) -> String {
    match format {
        TableFormat::Csv => {
            let mut out = String::from("n,i,j,p_num,p_den,p_float,E_num,E_den\n");
            for (n, i, j, p, e) in rows {
                let (pn, pd, pf) = split(&p);
                let (en, ed, _) = split(&e);
                out.push_str(&format!("{n},{i},{j},{pn},{pd},{pf:.12},{en},{ed}\n"));
            }
            out
        }
        TableFormat::Json => {
            let items: Vec<_> = rows
                .into_iter()
                .map(|(n, i, j, p, e)| {
                    let (pn, pd, pf) = split(&p);
                    let (en, ed, _) = split(&e);
                    json!({"n": n, "i": i, "j": j, "p_num": pn, "p_den": pd, "p_float": pf, "E_num": en, "E_den": ed})
                })
                .collect();
            serde_json::to_string_pretty(&items).unwrap() + "\n"
        }
    }
}

fn experiment_table(rows: &[ExperimentRow], format: TableFormat) -> String {
    match format {
        TableFormat::Csv => {
            let mut out = String::from("order,samples,epsilon,mean_misfit,std_misfit,seed\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{:.6},{:.6},{}\n",
                    r.order, r.samples, r.epsilon, r.mean_misfit, r.std_misfit, r.seed
                ));
            }
            out
        }
        TableFormat::Json => serde_json::to_string_pretty(rows).unwrap() + "\n",
    }
}

fn load_grove(path: &PathBuf) -> Result<Grove, Failure> {
    let g = Grove::from_json(&read_input(path)?)?;
    validate(&g).into_result()?;
    Ok(g)
}

fn grove_svg(g: &Grove, args: &GroveSvgArgs, bias: Bias) -> String {
    let options = GroveSvgOptions {
        pixel: args.pixel,
        highlight_frozen: args.highlight_frozen,
        overlay: args.overlay.then_some(bias),
    };
    render_grove_svg(g, &options)
}

fn tiling_svg(t: &AztecTiling, args: &TilingSvgArgs) -> String {
    render_tiling_svg(
        t,
        &TilingSvgOptions {
            pixel: args.pixel,
            overlay: args.overlay,
        },
    )
}

fn check_pixel(pixel: f64) -> Outcome {
    if pixel.is_finite() && pixel > 0.0 {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--pixel must be positive, got {pixel}")))
    }
}

fn run_grove(cmd: GroveCmd) -> Outcome {
    match cmd {
        GroveCmd::Sample { common, bias, svg } => {
            let bias = bias.resolve()?;
            check_pixel(svg.pixel)?;
            let g = generate(common.order, &bias, common.seed)?;
            let text = match common.format {
                SampleFormat::Json => g.to_json() + "\n",
                SampleFormat::Svg => grove_svg(&g, &svg, bias),
            };
            emit(&common.out, &text)
        }
        GroveCmd::Probs { order, bias, format, out } => {
            let bias = bias.resolve()?;
            if order == 0 {
                return Err(grove_core::Error::InvalidOrder(0, 1).into());
            }
            let depth = order.max(2);
            let p = grove_p(&bias, depth)?.p_slice(order).expect("depth covers the order");
            let e = grove_e(&bias, depth)?.e_slice(order).expect("depth covers the order");
            let rows = (0..labels_per_family(order))
                .map(|idx| {
                    let (i, j) = label_from_index(idx);
                    (order, i as i32, j as i32, p[idx].clone(), e[idx].clone())
                })
                .collect();
            emit(&out, &probability_table(rows, format))
        }
        GroveCmd::Enumerate { order, list } => {
            let text = if list {
                oracle_groves(order)?
                    .iter()
                    .map(|g| g.to_json() + "\n")
                    .collect::<String>()
            } else {
                format!("{}\n", cube_poly_edges(order, false)?.len())
            };
            emit(&None, &text)
        }
        GroveCmd::Render { input, out, bias, svg } => {
            let bias = bias.resolve()?;
            check_pixel(svg.pixel)?;
            let g = load_grove(&input)?;
            emit(&out, &grove_svg(&g, &svg, bias))
        }
    }
}

fn run_aztec(cmd: AztecCmd) -> Outcome {
    match cmd {
        AztecCmd::Sample { common, svg } => {
            check_pixel(svg.pixel)?;
            let t = generate_tiling(common.order, common.seed)?;
            let text = match common.format {
                SampleFormat::Json => t.to_json() + "\n",
                SampleFormat::Svg => tiling_svg(&t, &svg),
            };
            emit(&common.out, &text)
        }
        AztecCmd::Probs { order, format, out } => {
            if order == 0 {
                return Err(grove_core::Error::InvalidOrder(0, 1).into());
            }
            let p = aztec_p(order)?;
            let e = aztec_e(order)?;
            let rows = p
                .layer(order)
                .into_iter()
                .map(|((i, j), pv)| (order, i, j, pv, e.get(order, i, j)))
                .collect();
            emit(&out, &probability_table(rows, format))
        }
        AztecCmd::Enumerate { order, list } => {
            let tilings = enumerate_tilings(order)?;
            let text = if list {
                tilings.iter().map(|t| t.to_json() + "\n").collect::<String>()
            } else {
                format!("{}\n", tilings.len())
            };
            emit(&None, &text)
        }
        AztecCmd::Render { input, out, svg } => {
            check_pixel(svg.pixel)?;
            let t = AztecTiling::from_json(&read_input(&input)?)?;
            emit(&out, &tiling_svg(&t, &svg))
        }
    }
}

fn run_experiment(args: &ExperimentArgs, bias: &Bias) -> Outcome {
    let rows = convergence_experiment(&args.orders, args.samples, args.epsilon, bias, args.seed)?;
    emit(&args.out, &experiment_table(&rows, args.format))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Grove(cmd) => run_grove(cmd),
        Command::Aztec(cmd) => run_aztec(cmd),
        Command::Verify(VerifyCmd::Arctic { experiment }) => run_experiment(&experiment, &Bias::uniform()),
        Command::Verify(VerifyCmd::Ellipse { experiment, bias }) => {
            run_experiment(&experiment, &bias.resolve()?)
        }
        Command::Nexus(NexusCmd::Trace {
            order,
            seed,
            bias,
            format,
            out,
        }) => {
            let trace = nexus_trace(order, &bias.resolve()?, seed)?;
            let text = match format {
                TableFormat::Csv => trace.to_csv(),
                TableFormat::Json => serde_json::to_string_pretty(&trace).unwrap() + "\n",
            };
            emit(&out, &text)
        }
        Command::Young(YoungCmd::Project {
            input,
            order,
            seed,
            bias,
            family,
            out,
        }) => {
            let g = match (&input, order) {
                (Some(path), _) => load_grove(path)?,
                (None, Some(n)) => generate(n, &bias.resolve()?, seed)?,
                (None, None) => return Err(Failure::Usage("give --input or --order".into())),
            };
            emit(&out, &(young_projection(&g, family.into()).to_json() + "\n"))
        }
        Command::Rho(bias) => {
            let ratio = temperate_ratio(&bias.resolve()?);
            if ratio.degenerate {
                eprintln!("degenerate bias: the boundary collapses");
            }
            emit(&None, &format!("{:.6}\n", ratio.value))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(1)
        }
    }
}
