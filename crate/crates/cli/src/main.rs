//! `latstab`: floor-product bound checks on boxes and Lp-balls from the
//! command line.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use latstab::lp::{default_grid, lp_sweep, LpSweepRow};
use latstab::stability::{random_rotations, write_sweep_csv};
use latstab::{
    check_minima_sandwich, count_lattice_points, givens_rotation, p_threshold, rotation_sweep, stability_radius,
    successive_minima, verify, AxisBox, Body, Exponent, LpBall, Matrix, RotatedBox, Rotation, Status, Transform,
};

const DEFAULT_EPS: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "latstab", version, about = "Verify the floor-product lattice point bound for boxes and Lp-balls")]
struct Cli {
    /// Boundary tolerance for membership tests.
    #[arg(long, global = true, env = "LATSTAB_EPS", default_value_t = DEFAULT_EPS)]
    eps: f64,

    /// Output format; sweeps default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count lattice points of a body.
    Count(BodyArgs),
    /// Successive minima of a body with achieving lattice vectors.
    Minima(BodyArgs),
    /// Verdict on the floor-product bound.
    Verify(BodyArgs),
    /// Isolation distance and stability radius of a box.
    StabilityRadius(BoxArgs),
    /// Verify rotated copies of a box, one CSV row per rotation.
    RotationSweep(RotationSweepArgs),
    /// Sufficient exponent for the Lp lattice point set to equal the box's.
    LpThreshold(BoxArgs),
    /// Lattice counts of Lp-balls over a grid of exponents.
    LpSweep(LpSweepArgs),
    /// Successive minima of T K against the continuity bounds.
    SandwichCheck(SandwichArgs),
}

#[derive(Args, Debug)]
struct BoxArgs {
    /// Semi-axes, e.g. 2.3,1.7 or 1/3,2 (parsed exactly).
    #[arg(long, value_parser = parse_box)]
    alphas: AxisBox,
}

#[derive(Args, Debug)]
struct BodyArgs {
    #[command(flatten)]
    shape: BoxArgs,

    /// Rotate the box in the plane (i, j) by theta radians: i,j,theta.
    #[arg(long, value_parser = parse_givens, conflicts_with = "p")]
    rotate_givens: Option<(usize, usize, f64)>,

    /// Lp exponent (a number >= 1 or inf).
    #[arg(long, value_parser = parse_exponent)]
    p: Option<Exponent>,
}

#[derive(Args, Debug)]
struct RotationSweepArgs {
    #[command(flatten)]
    shape: BoxArgs,

    /// Seed for random rotations.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Number of random rotations.
    #[arg(long, default_value_t = 100)]
    samples: usize,

    /// Largest ‖R - I‖ of a random rotation; defaults to the stability radius.
    #[arg(long)]
    max_opnorm: Option<f64>,

    /// Use Givens rotations in this plane (i,j) instead of random ones.
    #[arg(long, value_parser = parse_plane, requires = "thetas")]
    plane: Option<(usize, usize)>,

    /// Angles for --plane, comma separated.
    #[arg(long, value_delimiter = ',', requires = "plane")]
    thetas: Vec<f64>,
}

#[derive(Args, Debug)]
struct LpSweepArgs {
    #[command(flatten)]
    shape: BoxArgs,

    /// Exponents, comma separated; inf allowed. Defaults to p0, p0 + 1/2,
    /// 2 p0, 10 p0, inf when the threshold applies and 1,2,4,8,16,inf otherwise.
    #[arg(long, value_delimiter = ',', value_parser = parse_exponent)]
    ps: Vec<Exponent>,
}

#[derive(Args, Debug)]
struct SandwichArgs {
    #[command(flatten)]
    shape: BoxArgs,

    /// Uniform dilation T = s I.
    #[arg(long, conflicts_with = "matrix")]
    scale: Option<f64>,

    /// Transform rows separated by ';', entries by ',', e.g. "1,0.1;0,1".
    #[arg(long, value_parser = parse_matrix)]
    matrix: Option<Matrix>,
}

fn parse_box(s: &str) -> Result<AxisBox, String> {
    AxisBox::parse(s).map_err(|e| e.to_string())
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    Exponent::parse(s).map_err(|e| e.to_string())
}

fn parse_index(s: &str, what: &str) -> Result<usize, String> {
    s.trim().parse().map_err(|_| format!("{what} `{s}` is not a coordinate index"))
}

fn parse_plane(s: &str) -> Result<(usize, usize), String> {
    match s.split(',').collect::<Vec<_>>().as_slice() {
        [i, j] => Ok((parse_index(i, "i")?, parse_index(j, "j")?)),
        _ => Err("expected i,j".into()),
    }
}

fn parse_givens(s: &str) -> Result<(usize, usize, f64), String> {
    match s.split(',').collect::<Vec<_>>().as_slice() {
        [i, j, t] => {
            let theta: f64 = t.trim().parse().map_err(|_| format!("theta `{t}` is not a number"))?;
            Ok((parse_index(i, "i")?, parse_index(j, "j")?, theta))
        }
        _ => Err("expected i,j,theta".into()),
    }
}

fn parse_matrix(s: &str) -> Result<Matrix, String> {
    let rows = s
        .split(';')
        .enumerate()
        .map(|(r, row)| {
            row.split(',')
                .enumerate()
                .map(|(c, v)| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| format!("entry ({r}, {c}) `{v}` is not a number"))
                })
                .collect::<Result<Vec<f64>, String>>()
        })
        .collect::<Result<Vec<_>, String>>()?;
    Matrix::from_rows(&rows).map_err(|e| e.to_string())
}

fn build_body(args: &BodyArgs) -> Result<Body> {
    let b = args.shape.alphas.clone();
    Ok(match (args.rotate_givens, args.p) {
        (Some((i, j, theta)), _) => {
            let r = givens_rotation(b.dim(), i, j, theta).context("--rotate-givens")?;
            RotatedBox::new(b, r).context("bodies")?.into()
        }
        (None, Some(p)) => LpBall::new(p, b).context("bodies")?.into(),
        (None, None) => b.into(),
    })
}

fn exit_for(status: Status) -> u8 {
    match status {
        Status::Tight | Status::Strict => 0,
        Status::Violation => 2,
        Status::BoundaryAmbiguous => 3,
    }
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_vec(value)?;
    s.push(b'\n');
    Ok(s)
}

fn lp_rows_csv(rows: &[LpSweepRow]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    writeln!(out, "p,count,ambiguous,matches_box")?;
    for r in rows {
        writeln!(out, "{},{},{},{}", r.p, r.count, r.ambiguous, r.matches_box)?;
    }
    Ok(out)
}

/// Output bytes and exit code for one command.
fn run(cli: &Cli) -> Result<(Vec<u8>, u8)> {
    let eps = cli.eps;
    if !(0.0..0.5).contains(&eps) {
        bail!("--eps must lie in [0, 0.5), got {eps}");
    }
    let sweep = matches!(cli.command, Command::RotationSweep(_) | Command::LpSweep(_));
    let format = cli.format.unwrap_or(if sweep { Format::Csv } else { Format::Json });
    if format == Format::Csv && !sweep {
        bail!("--format csv is only available for rotation-sweep and lp-sweep");
    }
    match &cli.command {
        Command::Count(args) => {
            let body = build_body(args)?;
            let c = count_lattice_points(&body, eps).context("enumeration")?;
            Ok((json(&c)?, if c.ambiguous > 0 { 3 } else { 0 }))
        }
        Command::Minima(args) => {
            let m = successive_minima(&build_body(args)?).context("minima")?;
            Ok((json(&m)?, 0))
        }
        Command::Verify(args) => {
            let v = verify(&build_body(args)?, eps).context("bhw")?;
            Ok((json(&v)?, exit_for(v.status)))
        }
        Command::StabilityRadius(args) => Ok((json(&stability_radius::<f64>(&args.alphas))?, 0)),
        Command::RotationSweep(args) => {
            let b = &args.shape.alphas;
            let rotations: Vec<Rotation> = match args.plane {
                Some((i, j)) => args
                    .thetas
                    .iter()
                    .map(|&t| givens_rotation(b.dim(), i, j, t))
                    .collect::<latstab::Result<_>>()
                    .context("--plane")?,
                None => {
                    let max = args.max_opnorm.unwrap_or_else(|| stability_radius::<f64>(b).radius);
                    random_rotations(b.dim(), args.seed, args.samples, max).context("stability")?
                }
            };
            let records = rotation_sweep(b, &rotations, eps).context("stability")?;
            let code = records.iter().map(|r| exit_for(r.status)).max().unwrap_or(0);
            let bytes = match format {
                Format::Json => json(&records)?,
                Format::Csv => {
                    let mut out = Vec::new();
                    write_sweep_csv(&records, &mut out).context("stability")?;
                    out
                }
            };
            Ok((bytes, code))
        }
        Command::LpThreshold(args) => Ok((json(&p_threshold::<f64>(&args.alphas).context("lp")?)?, 0)),
        Command::LpSweep(args) => {
            let b = &args.shape.alphas;
            let grid: Vec<Exponent> = if !args.ps.is_empty() {
                args.ps.clone()
            } else if let Ok(r) = p_threshold::<f64>(b) {
                let mut g: Vec<Exponent> = default_grid(r.p0).into_iter().map(Exponent::Finite).collect();
                g.push(Exponent::Infinite);
                g
            } else {
                [1.0, 2.0, 4.0, 8.0, 16.0]
                    .into_iter()
                    .map(Exponent::Finite)
                    .chain([Exponent::Infinite])
                    .collect()
            };
            let rows = lp_sweep(b, &grid, eps).context("lp")?;
            let bytes = match format {
                Format::Json => json(&rows)?,
                Format::Csv => lp_rows_csv(&rows)?,
            };
            Ok((bytes, 0))
        }
        Command::SandwichCheck(args) => {
            let b = &args.shape.alphas;
            let t = match (&args.matrix, args.scale) {
                (Some(m), _) => Transform::new(m.clone()).context("--matrix")?,
                (None, Some(s)) => Transform::new(Matrix::identity(b.dim()).scale(s)).context("--scale")?,
                (None, None) => bail!("sandwich-check needs --scale or --matrix"),
            };
            let rep = check_minima_sandwich(b, &t).context("minima")?;
            Ok((json(&rep)?, 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (bytes, code) = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let written = match &cli.out {
        Some(path) => File::create(path)
            .and_then(|mut f| f.write_all(&bytes))
            .with_context(|| format!("writing {}", path.display())),
        None => io::stdout().lock().write_all(&bytes).context("writing stdout"),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
