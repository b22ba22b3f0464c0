use std::fs;

use clap::{Args, Parser, Subcommand, ValueEnum};
use plane_homeo::compact::{format_cloud, parse_cloud};
use plane_homeo::fixed_points::FixedPointError;
use plane_homeo::genericity::{lemma3_experiment, lemma4_experiment};
use plane_homeo::homeo::Support;
use plane_homeo::metric::{du, truncation_error_bound};
use plane_homeo::{
    avoid_fixed_points_on_grid, certify_fixed_point_free, nowhere_dense_escape, parse_complex, parse_expr,
    support_sample, winding_certificate, Cell2, CompactSet, Complex64, Disk, Family, Homeo, MetricConfig,
};
use serde::Serialize;

use crate::error::{failed, CliError};

#[derive(Parser, Debug)]
#[command(name = "phomeo", version, about = "Experiments and certificates for plane homeomorphisms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct MetricFlags {
    /// Series truncation N.
    #[arg(long = "N", default_value_t = 40)]
    pub truncation: u32,
    /// Radial and angular samples per disk.
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    /// Add Lipschitz slack so every supremum is an upper bound.
    #[arg(long)]
    pub rigorous: bool,
}

impl MetricFlags {
    fn config(&self) -> Result<MetricConfig, CliError> {
        MetricConfig::new(self.truncation, self.grid, self.grid, self.rigorous).map_err(|e| CliError::Input(e.to_string()))
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Group metric d(f, g) and its truncation bound.
    Dist {
        #[arg(short = 'f')]
        f: String,
        #[arg(short = 'g')]
        g: String,
        #[command(flatten)]
        metric: MetricFlags,
    },
    /// Certify that f has no fixed point on a closed disk.
    Certify {
        #[arg(short = 'f')]
        f: String,
        /// cx,cy,r
        #[arg(long, default_value = "0,0,10")]
        disk: String,
        #[arg(long, default_value_t = 0.1)]
        spacing: f64,
        /// Exit with status 2 when the certificate is inconclusive.
        #[arg(long)]
        strict: bool,
    },
    /// Winding number of z ↦ f(z) − z round a circle.
    Winding {
        #[arg(short = 'f')]
        f: String,
        /// cx,cy,r
        #[arg(long)]
        disk: String,
        #[arg(long, default_value_t = 64)]
        steps: usize,
        #[arg(long)]
        strict: bool,
    },
    /// Small translation of f with no fixed point on a grid.
    Perturb {
        #[arg(short = 'f')]
        f: String,
        #[arg(long)]
        eps: f64,
        /// Cloud file, one "re im" per line.
        #[arg(long = "grid-file")]
        grid_file: String,
        #[command(flatten)]
        metric: MetricFlags,
    },
    /// Perturb f (supported in a 2-cell) so its support leaves the cell.
    Escape {
        #[arg(short = 'f', default_value = "id")]
        f: String,
        /// alpha,rho,eta with alpha in complex syntax, e.g. 0.1-0.2i,0.25,0.1
        #[arg(long)]
        cell: String,
        /// Chart of the cell.
        #[arg(long, default_value = "id")]
        chart: String,
        #[arg(long)]
        eps: f64,
        #[command(flatten)]
        metric: MetricFlags,
    },
    /// Convergence tables.
    Converge {
        #[arg(value_enum)]
        experiment: Experiment,
        #[arg(long)]
        family: String,
        /// Base map for the lemma3 families.
        #[arg(long, default_value = "id")]
        base: String,
        #[arg(long, default_value_t = 20)]
        nmax: u32,
        /// Compact set for lemma3 (cloud file); defaults to the origin.
        #[arg(long)]
        cloud: Option<String>,
        /// CSV output path; stdout when absent.
        #[arg(long)]
        out: Option<String>,
        #[command(flatten)]
        metric: MetricFlags,
    },
    /// Sampled support of f on a disk.
    Support {
        #[arg(short = 'f')]
        f: String,
        /// cx,cy,r
        #[arg(long)]
        disk: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 0.05)]
        resolution: f64,
        /// Cloud output path; stdout when absent.
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Lemma3,
    Lemma4,
}

fn expr(flag: &'static str, text: &str) -> Result<Homeo, CliError> {
    parse_expr(text).map_err(|err| CliError::Expr { flag, err })
}

fn number(what: &str, text: &str) -> Result<f64, CliError> {
    let v: f64 = text.trim().parse().map_err(|_| CliError::Input(format!("{what}: not a number: {text:?}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Input(format!("{what}: not finite: {text:?}")))
    }
}

fn parse_disk(text: &str) -> Result<Disk, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Input(format!("--disk expects cx,cy,r, got {text:?}")));
    }
    let center = Complex64::new(number("disk cx", parts[0])?, number("disk cy", parts[1])?);
    Disk::closed(center, number("disk r", parts[2])?).map_err(|e| CliError::Input(e.to_string()))
}

fn parse_cell(text: &str, chart: Homeo) -> Result<Cell2, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Input(format!("--cell expects alpha,rho,eta, got {text:?}")));
    }
    let alpha = parse_complex(parts[0]).map_err(|err| CliError::Expr { flag: "--cell", err })?;
    let rho = number("cell rho", parts[1])?;
    let eta = number("cell eta", parts[2])?;
    Cell2::new(chart, alpha, rho, eta).map_err(|e| CliError::Input(e.to_string()))
}

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io { path: path.into(), message: e.to_string() })
}

fn write(path: &str, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io { path: path.into(), message: e.to_string() })
}

fn read_cloud(path: &str) -> Result<CompactSet, CliError> {
    let pts = parse_cloud(&read(path)?).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    CompactSet::new(pts, None).map_err(|e| CliError::Input(format!("{path}: {e}")))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(failed)?;
    }
    let bytes = w.into_inner().map_err(failed)?;
    String::from_utf8(bytes).map_err(failed)
}

#[derive(Serialize)]
struct DistReport {
    f: String,
    g: String,
    dist: f64,
    du_forward: f64,
    du_inverse: f64,
    /// Bound on the truncation error of `dist` (both halves).
    truncation_bound: f64,
    /// "lower_bound" for grid maxima, "upper_bound" in rigorous mode.
    sup_estimates: &'static str,
}

#[derive(Serialize)]
#[serde(untagged)]
enum WindingOutput {
    Done(plane_homeo::WindingResult),
    Inconclusive { verdict: &'static str, reason: String },
}

#[derive(Serialize)]
struct SupportSummary {
    empty: bool,
    points: usize,
    net_resolution: Option<f64>,
    out: String,
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Dist { f, g, metric } => {
            let (fh, gh) = (expr("-f", f)?, expr("-g", g)?);
            let cfg = metric.config()?;
            let forward = du(&fh, &gh, &cfg).map_err(failed)?;
            let backward = du(&fh.clone().inverse(), &gh.clone().inverse(), &cfg).map_err(failed)?;
            Ok(json(&DistReport {
                f: fh.to_string(),
                g: gh.to_string(),
                dist: forward + backward,
                du_forward: forward,
                du_inverse: backward,
                truncation_bound: 2.0 * truncation_error_bound(&cfg),
                sup_estimates: if cfg.rigorous { "upper_bound" } else { "lower_bound" },
            }))
        }
        Command::Certify { f, disk, spacing, strict } => {
            let h = expr("-f", f)?;
            let region = parse_disk(disk)?;
            let cert = match certify_fixed_point_free(&h, region, *spacing) {
                Ok(c) => c,
                Err(FixedPointError::Argument(m)) => return Err(CliError::Input(m)),
                Err(e) => return Err(failed(e)),
            };
            let doc = json(&cert);
            if *strict && cert.is_inconclusive() {
                let reason = match &cert.verdict {
                    plane_homeo::Verdict::Inconclusive { reason } => reason.clone(),
                    _ => unreachable!(),
                };
                return Err(CliError::Inconclusive { reason, document: doc });
            }
            Ok(doc)
        }
        Command::Winding { f, disk, steps, strict } => {
            let h = expr("-f", f)?;
            let d = parse_disk(disk)?;
            match winding_certificate(&h, d, *steps) {
                Ok(w) => Ok(json(&WindingOutput::Done(w))),
                Err(FixedPointError::Inconclusive(reason)) => {
                    let doc = json(&WindingOutput::Inconclusive { verdict: "inconclusive", reason: reason.clone() });
                    if *strict {
                        Err(CliError::Inconclusive { reason, document: doc })
                    } else {
                        Ok(doc)
                    }
                }
                Err(FixedPointError::Argument(m)) => Err(CliError::Input(m)),
                Err(e) => Err(failed(e)),
            }
        }
        Command::Perturb { f, eps, grid_file, metric } => {
            let h = expr("-f", f)?;
            let grid = read_cloud(grid_file)?;
            let cfg = metric.config()?;
            let rep = avoid_fixed_points_on_grid(&h, &grid, *eps, &cfg).map_err(failed)?;
            Ok(json(&rep))
        }
        Command::Escape { f, cell, chart, eps, metric } => {
            let h = expr("-f", f)?;
            let cell = parse_cell(cell, expr("--chart", chart)?)?;
            let cfg = metric.config()?;
            let rep = nowhere_dense_escape(&h, &cell, *eps, &cfg).map_err(failed)?;
            Ok(json(&rep))
        }
        Command::Converge { experiment, family, base, nmax, cloud, out, metric } => {
            let cfg = metric.config()?;
            let base = expr("--base", base)?;
            let csv = match experiment {
                Experiment::Lemma3 => {
                    let fam = lemma3_family(family, base)?;
                    let k = match cloud {
                        Some(path) => read_cloud(path)?,
                        None => CompactSet::singleton(Complex64::new(0.0, 0.0)),
                    };
                    let rows = lemma3_experiment(&fam, &k, *nmax, &cfg).map_err(failed)?;
                    to_csv(&rows)?
                }
                Experiment::Lemma4 => {
                    let (g, h) = lemma4_families(family, base)?;
                    let rows = lemma4_experiment(&g, &h, *nmax, &cfg).map_err(failed)?;
                    to_csv(&rows)?
                }
            };
            match out {
                Some(path) => {
                    write(path, &csv)?;
                    Ok(String::new())
                }
                None => Ok(csv),
            }
        }
        Command::Support { f, disk, tol, resolution, out } => {
            let h = expr("-f", f)?;
            let region = parse_disk(disk)?;
            let support = support_sample(&h, region, *tol, *resolution).map_err(|e| CliError::Input(e.to_string()))?;
            let (cloud, summary) = match &support {
                Support::Empty => (String::new(), (true, 0, None)),
                Support::Sampled(set) => (format_cloud(set.points()), (false, set.len(), set.net_resolution())),
            };
            match out {
                Some(path) => {
                    write(path, &cloud)?;
                    Ok(json(&SupportSummary {
                        empty: summary.0,
                        points: summary.1,
                        net_resolution: summary.2,
                        out: path.clone(),
                    }))
                }
                None => Ok(cloud),
            }
        }
    }
}

/// Named families for `converge lemma3`: `h_n → base`.
pub fn lemma3_family(name: &str, base: Homeo) -> Result<Family, CliError> {
    match name {
        "translate" => Ok(Family::Translated { base, offset: Complex64::new(1.0, 0.0) }),
        "rotate" => Ok(Family::Rotated { base, angle: 1.0 }),
        "constant" => Ok(Family::Constant(base)),
        other => Err(CliError::Input(format!(
            "unknown lemma3 family {other:?}; expected translate, rotate or constant"
        ))),
    }
}

/// Named family pairs `(g_n, h_n)` for `converge lemma4`.
pub fn lemma4_families(name: &str, base: Homeo) -> Result<(Family, Family), CliError> {
    let id = Homeo::identity();
    match name {
        "translate-pair" => Ok((
            Family::Translated { base: id.clone(), offset: Complex64::new(1.0, 0.0) },
            Family::Translated { base: id, offset: Complex64::new(0.0, 1.0) },
        )),
        "scale-rotate" => Ok((
            Family::Translated { base: Homeo::scaling(2.0).expect("positive"), offset: Complex64::new(1.0, 0.0) },
            Family::Rotated { base: id, angle: 1.0 },
        )),
        "constant" => Ok((Family::Constant(base.clone()), Family::Constant(base))),
        other => Err(CliError::Input(format!(
            "unknown lemma4 family {other:?}; expected translate-pair, scale-rotate or constant"
        ))),
    }
}
