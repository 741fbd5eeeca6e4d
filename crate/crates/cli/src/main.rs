use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use swissrank_cli::{EmSettings, FormatChoice, MethodChoice, MetricChoice, RunConfig};

#[derive(Parser)]
#[command(
    name = "swissrank",
    version,
    about = "Alternative rankings for Swiss-system team tournaments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank one tournament and write the comparison artifacts.
    Rank(RankArgs),
}

#[derive(Args)]
struct RankArgs {
    /// Match results CSV with header round,team_a,team_b,game_points_a.
    #[arg(long, value_name = "FILE")]
    input: PathBuf,

    /// Roster CSV with header id,name,start_rank adding display names
    /// and pre-tournament seeding.
    #[arg(long, value_name = "FILE")]
    roster: Option<PathBuf>,

    /// Ratio scales for the least-squares rankings.
    #[arg(long, value_delimiter = ',', default_value = "A,B,C,D", value_name = "NAMES")]
    scales: Vec<String>,

    /// Ranking producers: llsm, em, official, sonneborn-berger,
    /// buchholz, mix, start.
    #[arg(long, value_delimiter = ',', default_value = "llsm,official", value_name = "NAMES")]
    methods: Vec<MethodChoice>,

    /// Ratio scales for the eigenvalue-completion rankings.
    #[arg(long, value_delimiter = ',', default_value = "C", value_name = "NAMES")]
    em_scales: Vec<String>,

    /// Pairwise ranking comparisons to tabulate: spearman, tau.
    #[arg(long, value_delimiter = ',', default_value = "spearman,tau", value_name = "NAMES")]
    metrics: Vec<MetricChoice>,

    /// Embed the rankings in the plane (or in --mds-dims dimensions)
    /// from their pairwise log distances.
    #[arg(long)]
    mds: bool,

    /// Embedding dimension; must be below the number of rankings.
    #[arg(long, default_value_t = 2, value_name = "K")]
    mds_dims: usize,

    /// Output directory. Falls back to $SWISSRANK_OUT_DIR, then ./out.
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    /// Artifact formats to write: csv, json.
    #[arg(long, value_delimiter = ',', default_value = "csv,json", value_name = "NAMES")]
    formats: Vec<FormatChoice>,

    /// Extra scale file (game_points,ratio rows); the file stem names
    /// the scale. May repeat.
    #[arg(long = "custom-scale", value_name = "FILE")]
    custom_scales: Vec<PathBuf>,

    /// Write the incomplete comparison matrix per weight-solver scale.
    #[arg(long)]
    dump_pcm: bool,

    /// Write the optimized missing entries per completion scale.
    #[arg(long)]
    dump_completion: bool,

    /// Give up if the completion has not settled after this many
    /// coordinate sweeps.
    #[arg(long, default_value_t = EmSettings::default().sweep_cap, value_name = "N")]
    em_sweep_cap: usize,

    /// Relative residual bound for the principal eigenpair.
    #[arg(long, default_value_t = EmSettings::default().eigen_tol, value_name = "TOL")]
    em_eigen_tol: f64,

    /// Log-space width below which a coordinate search stops.
    #[arg(long, default_value_t = EmSettings::default().coord_tol, value_name = "TOL")]
    em_coord_tol: f64,

    /// Relative eigenvalue improvement below which sweeping stops.
    #[arg(long, default_value_t = EmSettings::default().sweep_tol, value_name = "TOL")]
    em_sweep_tol: f64,
}

impl RankArgs {
    fn into_config(self) -> RunConfig {
        let out_dir = self
            .out_dir
            .or_else(|| std::env::var_os("SWISSRANK_OUT_DIR").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"));
        let mut cfg = RunConfig::new(self.input, out_dir);
        cfg.roster = self.roster;
        cfg.scales = self.scales;
        cfg.methods = self.methods;
        cfg.em_scales = self.em_scales;
        cfg.metrics = self.metrics;
        cfg.mds = self.mds;
        cfg.mds_dims = self.mds_dims;
        cfg.formats = self.formats;
        cfg.custom_scales = self.custom_scales;
        cfg.dump_pcm = self.dump_pcm;
        cfg.dump_completion = self.dump_completion;
        cfg.em = EmSettings {
            sweep_cap: self.em_sweep_cap,
            eigen_tol: self.em_eigen_tol,
            coord_tol: self.em_coord_tol,
            sweep_tol: self.em_sweep_tol,
        };
        cfg
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 5,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Rank(args) => {
            let cfg = args.into_config();
            match swissrank_cli::run(&cfg) {
                Ok(summary) => {
                    for w in &summary.warnings {
                        eprintln!("warning: {w}");
                    }
                    println!(
                        "wrote {} files to {}",
                        summary.files.len(),
                        summary.out_dir.display()
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
    }
}
