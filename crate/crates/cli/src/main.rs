use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use corridor_rays::commands::{self, Grid, Link, SimulateArgs, VerifyArgs};
use corridor_rays::formats::write_atomic;
use corridor_rays::CliResult;

/// Few-ray received power simulator for mmWave corridor and open-area links.
#[derive(Parser, Debug)]
#[command(name = "corridor-rays", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep a propagation model over distance and fit the alpha-beta model.
    Simulate {
        #[command(flatten)]
        link: LinkArgs,
        /// five_ray, two_ray, free_space or oracle:K
        #[arg(long, default_value = "five_ray")]
        model: String,
        #[command(flatten)]
        grid: GridArgs,
        /// Sweep CSV destination.
        #[arg(long)]
        out: PathBuf,
        /// Also write the fit JSON here.
        #[arg(long)]
        fit_out: Option<PathBuf>,
    },
    /// Fit the alpha-beta model to a measurement or sweep CSV.
    Fit {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two fits with a z-test on slope and intercept.
    Ztest { a: PathBuf, b: PathBuf },
    /// Check how much power the strongest rays carry against the image-method reference.
    Verify {
        #[command(flatten)]
        link: LinkArgs,
        #[arg(long, default_value_t = 3)]
        max_order: usize,
        #[command(flatten)]
        grid: GridArgs,
        /// Only distances at or beyond this are checked, metres.
        #[arg(long, default_value_t = 10.0)]
        check_from: f64,
        #[arg(long, default_value_t = 5)]
        top: usize,
        #[arg(long, default_value_t = 0.90)]
        threshold: f64,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate reflection coefficients of a material against grazing angle.
    Fresnel {
        #[arg(long)]
        material: String,
        /// Extra `name,eps_r` materials.
        #[arg(long)]
        materials: Option<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        step_deg: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-polarization discrimination from co- and cross-polar power files.
    Xpd {
        #[arg(long)]
        copol: PathBuf,
        #[arg(long)]
        crosspol: PathBuf,
    },
}

#[derive(Args, Debug)]
struct LinkArgs {
    /// Scenario JSON.
    #[arg(long)]
    scenario: PathBuf,
    /// Extra `name,eps_r` materials.
    #[arg(long)]
    materials: Option<PathBuf>,
    /// horn17, horn23, isotropic, gaussian:G,AZ,EL[,FLOOR] or csv:G,AZ.csv,EL.csv
    #[arg(long, default_value = "horn17")]
    pattern_tx: String,
    #[arg(long, default_value = "horn17")]
    pattern_rx: String,
}

impl LinkArgs {
    fn load(&self) -> CliResult<Link> {
        commands::load_link(
            &self.scenario,
            self.materials.as_deref(),
            &self.pattern_tx,
            &self.pattern_rx,
        )
    }
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, default_value_t = 1.9)]
    dmin: f64,
    #[arg(long, default_value_t = 39.7)]
    dmax: f64,
    #[arg(long, default_value_t = 0.3)]
    dstep: f64,
}

impl From<GridArgs> for Grid {
    fn from(g: GridArgs) -> Self {
        Grid {
            dmin: g.dmin,
            dmax: g.dmax,
            dstep: g.dstep,
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Simulate {
            link,
            model,
            grid,
            out,
            fit_out,
        } => {
            let text = commands::simulate(SimulateArgs {
                link: link.load()?,
                model,
                grid: grid.into(),
                out,
                fit_out,
            })?;
            print!("{text}");
        }
        Command::Fit { input, out } => print!("{}", commands::fit(&input, out.as_deref())?),
        Command::Ztest { a, b } => print!("{}", commands::ztest(&a, &b)?),
        Command::Verify {
            link,
            max_order,
            grid,
            check_from,
            top,
            threshold,
            out,
        } => {
            let report = commands::verify(VerifyArgs {
                link: link.load()?,
                max_order,
                grid: grid.into(),
                check_from,
                top,
                threshold,
            })?;
            emit(&report.text, out.as_ref())?;
            if out.is_some() {
                print!("{}", report.text.lines().last().unwrap_or_default());
                println!();
            }
            if !report.pass {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Fresnel {
            material,
            materials,
            step_deg,
            out,
        } => emit(
            &commands::fresnel(&material, materials.as_deref(), step_deg)?,
            out.as_ref(),
        )?,
        Command::Xpd { copol, crosspol } => print!("{}", commands::xpd(&copol, &crosspol)?),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("corridor-rays: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
