use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qse_core::channels::{amplitude_damping, apply_local_b};
use qse_core::decomposition::verify_theorem;
use qse_core::steering::steering_ellipsoid;
use qse_core::sweep::linear_grid;
use qse_core::{Side, TwoQubitState};
use qse_toolkit::demo::needle_demo;
use qse_toolkit::formats::{
    load_channel, load_state, load_state_spec, write_json, EllipsoidJson, StateSpec,
    TheoremReportJson,
};
use qse_toolkit::scan::{
    argmax_delta_d, run_c3_scan, run_p_scan, write_c3_rows, write_rows, ChannelFamily, PGrid,
    ScanConfig,
};
use qse_toolkit::verify::{run_verify, VerifyOptions};
use qse_toolkit::{Result, ToolkitError};

#[derive(Parser)]
#[command(name = "qse", version, about = "Quantum steering ellipsoids, discord and channel sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export the steering ellipsoid of a state as JSON.
    Qse(QseArgs),
    /// Sweep a state through a channel family and write a CSV table.
    Scan(ScanArgs),
    /// Sweep c3 of a Bell-diagonal state and summarise each discord curve.
    C3scan(C3Args),
    /// Compare the needle lengths of the two textbook needle states.
    DemoNeedle {
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
    },
    /// Run the randomised invariant suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    A,
    B,
    Both,
}

#[derive(Args)]
struct StateArgs {
    /// State JSON file.
    #[arg(long, conflicts_with = "bell_diag")]
    state: Option<PathBuf>,
    /// Bell-diagonal correlations `c1,c2,c3`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    bell_diag: Option<Vec<f64>>,
}

impl StateArgs {
    fn spec(&self) -> Result<Option<StateSpec>> {
        match (&self.state, &self.bell_diag) {
            (Some(path), _) => Ok(Some(load_state_spec(path)?)),
            (None, Some(c)) => match c.as_slice() {
                &[c1, c2, c3] => Ok(Some(StateSpec::BellDiag { c: [c1, c2, c3] })),
                _ => Err(ToolkitError::Usage("--bell-diag takes exactly three values c1,c2,c3".into())),
            },
            (None, None) => Ok(None),
        }
    }

    fn build(&self) -> Result<TwoQubitState> {
        if let Some(path) = &self.state {
            return load_state(path);
        }
        self.spec()?
            .ok_or_else(|| ToolkitError::Usage("one of --state or --bell-diag is required".into()))?
            .build()
    }
}

#[derive(Args)]
struct QseArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Amplitude-damping probability applied to qubit B first.
    #[arg(long, conflicts_with = "channel")]
    ad: Option<f64>,
    /// Channel JSON file applied to qubit B first.
    #[arg(long)]
    channel: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "b")]
    side: SideArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    p_start: Option<f64>,
    #[arg(long)]
    p_end: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Use evolution times with `p = 1 - exp(-gamma t)` instead of a `p` grid.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, requires = "gamma")]
    t_start: Option<f64>,
    #[arg(long, requires = "gamma")]
    t_end: Option<f64>,
}

impl GridArgs {
    /// Applies the flags on top of `base`. Switching between a `p` grid and a
    /// time grid keeps only the step count.
    fn apply(&self, base: PGrid) -> Result<PGrid> {
        let time_flags = self.gamma.is_some() || self.t_start.is_some() || self.t_end.is_some();
        let p_flags = self.p_start.is_some() || self.p_end.is_some();
        if time_flags && p_flags {
            return Err(ToolkitError::Usage("p-grid and time-grid flags are exclusive".into()));
        }
        Ok(match base {
            PGrid::Time { gamma, t_start, t_end, steps } if !p_flags => PGrid::Time {
                gamma: self.gamma.unwrap_or(gamma),
                t_start: self.t_start.unwrap_or(t_start),
                t_end: self.t_end.unwrap_or(t_end),
                steps: self.steps.unwrap_or(steps),
            },
            PGrid::Linear { steps, .. } | PGrid::Time { steps, .. } if time_flags => PGrid::Time {
                gamma: self.gamma.unwrap_or(1.0),
                t_start: self.t_start.unwrap_or(0.0),
                t_end: self.t_end.ok_or_else(|| ToolkitError::Usage("--t-end is required with --gamma".into()))?,
                steps: self.steps.unwrap_or(steps),
            },
            PGrid::Linear { start, end, steps } => PGrid::Linear {
                start: self.p_start.unwrap_or(start),
                end: self.p_end.unwrap_or(end),
                steps: self.steps.unwrap_or(steps),
            },
            PGrid::Time { steps, .. } => PGrid::Linear {
                start: self.p_start.unwrap_or(0.0),
                end: self.p_end.unwrap_or(1.0),
                steps: self.steps.unwrap_or(steps),
            },
        })
    }
}

#[derive(Args)]
struct ScanArgs {
    /// Scan configuration JSON; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, value_enum)]
    channel: Option<ChannelFamily>,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct C3Args {
    #[arg(long, allow_hyphen_values = true)]
    c1: f64,
    #[arg(long, allow_hyphen_values = true)]
    c2: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    c3_start: f64,
    #[arg(long, default_value_t = 0.2, allow_hyphen_values = true)]
    c3_end: f64,
    #[arg(long, default_value_t = 21)]
    c3_steps: usize,
    #[arg(long, value_enum, default_value = "ad")]
    channel: ChannelFamily,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Only run suites whose name contains this string.
    #[arg(long)]
    suite: Option<String>,
    /// Check the needle/discord/preparation equivalence for one state and
    /// print the report as JSON instead of running the suites.
    #[arg(long)]
    state: Option<PathBuf>,
    /// Inflate post-channel lengths in the monotonicity suite (harness self-test).
    #[arg(long, default_value_t = 0.0)]
    inflate_length: f64,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| ToolkitError::io(p, e))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_qse(args: &QseArgs) -> Result<()> {
    let mut state = args.state.build()?;
    let channel = match (&args.channel, args.ad) {
        (Some(path), _) => Some(load_channel(path)?),
        (None, Some(p)) => Some(amplitude_damping(p)?),
        (None, None) => None,
    };
    if let Some(ch) = channel {
        state = apply_local_b(&state, &ch);
    }
    let export = |side| EllipsoidJson::new(&steering_ellipsoid(&state, side), side);
    let out = args.out.as_deref();
    match args.side {
        SideArg::A => write_json(&export(Side::A), out),
        SideArg::B => write_json(&export(Side::B), out),
        SideArg::Both => write_json(&[export(Side::A), export(Side::B)], out),
    }
}

fn cmd_scan(args: &ScanArgs) -> Result<()> {
    let base: Option<ScanConfig> = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| ToolkitError::io(path, e))?;
            Some(serde_json::from_str(&text).map_err(|source| ToolkitError::Json {
                path: path.clone(),
                source,
            })?)
        }
        None => None,
    };
    let state = match (args.state.spec()?, &base) {
        (Some(s), _) => s,
        (None, Some(b)) => b.state.clone(),
        (None, None) => {
            return Err(ToolkitError::Usage("a state is required (--state, --bell-diag or --config)".into()))
        }
    };
    let cfg = ScanConfig {
        state,
        channel: args.channel.or(base.as_ref().map(|b| b.channel)).unwrap_or(ChannelFamily::Ad),
        grid: args.grid.apply(base.as_ref().map(|b| b.grid).unwrap_or_default())?,
        seed: args.seed.or(base.as_ref().map(|b| b.seed)).unwrap_or(0),
    };
    cfg.grid.validate()?;
    if let Some(path) = &args.state.state {
        // Surface validation problems with the file path attached.
        load_state(path)?;
    }
    let rows = run_p_scan(&cfg)?;
    write_rows(&rows, output(args.out.as_deref())?)
}

fn cmd_c3scan(args: &C3Args) -> Result<()> {
    if args.c3_steps == 0 || args.c3_start > args.c3_end {
        return Err(ToolkitError::Usage("c3 grid needs c3-start <= c3-end and at least one step".into()));
    }
    let c3s = if args.c3_steps == 1 {
        vec![args.c3_start]
    } else {
        linear_grid(args.c3_start, args.c3_end, args.c3_steps)
    };
    let grid = args.grid.apply(PGrid::default())?;
    let rows = run_c3_scan(args.c1, args.c2, &c3s, args.channel, &grid, args.seed)?;
    for row in &rows {
        if let Err(note) = &row.summary {
            eprintln!("warning: c3 = {}: {note}", row.c3);
        }
    }
    if let Some((c3, s)) = argmax_delta_d(&rows) {
        eprintln!("largest delta D = {:.6e} at c3 = {c3} (peak at p = {})", s.delta_d, s.p_peak);
    }
    write_c3_rows(&rows, output(args.out.as_deref())?)
}

fn cmd_verify(args: &VerifyArgs) -> Result<()> {
    if let Some(path) = &args.state {
        let report = verify_theorem(&load_state(path)?);
        write_json(&TheoremReportJson::from(&report), None)?;
        return if report.consistent {
            Ok(())
        } else {
            Err(ToolkitError::VerificationFailed(format!("{}: equivalence does not hold", path.display())))
        };
    }
    if args.trials == 0 {
        return Err(ToolkitError::Usage("--trials must be at least 1".into()));
    }
    let opts = VerifyOptions {
        trials: args.trials,
        seed: args.seed,
        length_inflation: args.inflate_length,
    };
    let report = run_verify(&opts, args.suite.as_deref());
    if report.suites.is_empty() {
        return Err(ToolkitError::Usage("no suite matches the filter".into()));
    }
    println!("{report}");
    if report.passed() {
        Ok(())
    } else {
        Err(ToolkitError::VerificationFailed("one or more suites failed".into()))
    }
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Qse(a) => cmd_qse(a),
        Command::Scan(a) => cmd_scan(a),
        Command::C3scan(a) => cmd_c3scan(a),
        Command::DemoNeedle { delta } => {
            println!("{}", needle_demo(*delta)?);
            Ok(())
        }
        Command::Verify(a) => cmd_verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
