use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use segmap::bcb::{
    bcb_equilibrium_curves, bcb_smoothness_curves, bcb_sn2_curve, diagonal_thresholds, find_cycles_1d,
};
use segmap::equilibria::enumerate_fixed_points;
use segmap::io::{
    curves_table, emit_raster, fixed_points_table, fmt_f64, orbit_table, parse_config, sweep1d_table,
    RasterImage, RunConfig, Table,
};
use segmap::restrict::{
    build_restriction, derivative_1d, eval_1d, first_return, g_closed_form, RestrictionTag,
    ReturnMapSpec,
};
use segmap::sweep::{basins, sweep1d, sweep2d, Path1D};
use segmap::{orbit, Error, Result, State};

#[derive(Parser)]
#[command(name = "segmap", version, about = "Constrained two-population segregation map")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Configuration file (`key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    gamma1: Option<String>,
    #[arg(long, global = true)]
    gamma2: Option<String>,
    #[arg(long, global = true)]
    tau1: Option<String>,
    #[arg(long, global = true)]
    tau2: Option<String>,
    #[arg(long, global = true)]
    n1: Option<String>,
    #[arg(long, global = true)]
    n2: Option<String>,
    #[arg(long, global = true)]
    k1: Option<String>,
    #[arg(long, global = true)]
    k2: Option<String>,
    #[arg(long, global = true)]
    transient: Option<String>,
    #[arg(long, global = true)]
    detect: Option<String>,
    #[arg(long, global = true)]
    max_period: Option<String>,
    /// Initial conditions as fractions of (K1, K2): `a,b; c,d; ...`.
    #[arg(long, global = true)]
    ics: Option<String>,
    /// Phase-plane window `x_min,x_max,y_min,y_max`.
    #[arg(long, global = true)]
    window: Option<String>,
    #[arg(long, global = true)]
    resolution: Option<String>,
    /// Output file; tables go to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps (0: one per core). Does not change output.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tag {
    T1,
    T2,
    F1,
    F2,
    Diag,
}

#[derive(Clone, Copy, ValueEnum)]
enum SectionArg {
    /// The line x2 = K2.
    X2,
    /// The line x1 = K1.
    X1,
}

#[derive(Clone, Copy, ValueEnum)]
enum Vary {
    K1,
    K2,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fixed points with real/virtual flag, region and stability.
    Equilibria,
    /// Iterates of the map from one initial state.
    Orbit {
        #[arg(long)]
        x1: f64,
        #[arg(long)]
        x2: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Samples of a 1-D restriction, or its attracting cycles.
    Restriction {
        #[arg(long, value_enum)]
        tag: Tag,
        #[arg(long, default_value_t = 1001)]
        samples: usize,
        /// List attracting cycles instead of samples.
        #[arg(long)]
        cycles: bool,
        #[arg(long, default_value_t = 30)]
        cycle_max_period: usize,
    },
    /// Samples of the k-th return map on a constraint line.
    ReturnMap {
        #[arg(long, value_enum, default_value = "x2")]
        section: SectionArg,
        #[arg(long, default_value_t = 1)]
        returns: usize,
        #[arg(long, default_value_t = 1001)]
        samples: usize,
    },
    /// Border-collision curves in the (K1, K2) plane.
    BcbCurves {
        #[arg(long, default_value = "0,1.5")]
        range: String,
        #[arg(long, default_value_t = 301)]
        samples: usize,
        /// Also trace the corner two-cycle curve (slower).
        #[arg(long)]
        sn2: bool,
    },
    /// Critical constraints of the map on the diagonal.
    Thresholds,
    /// Two-parameter attractor diagram written as PPM.
    Sweep2d {
        #[arg(long, default_value = "0,1.5")]
        k1_range: String,
        #[arg(long, default_value = "0,1.5")]
        k2_range: String,
    },
    /// One-parameter bifurcation diagram as a table.
    Sweep1d {
        #[arg(long, value_enum)]
        vary: Vary,
        /// Value of the constraint held fixed.
        #[arg(long)]
        fixed: f64,
        #[arg(long)]
        range: String,
    },
    /// Basins of attraction over the window, written as PPM.
    Basins,
}

fn pair(s: &str, what: &str) -> Result<(f64, f64)> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidConfig(format!("{what}: expected lo,hi, got {s:?}")))?;
    match v.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(Error::InvalidConfig(format!("{what}: expected lo,hi, got {s:?}"))),
    }
}

fn load_config(c: &Common) -> Result<RunConfig> {
    let mut cfg = match &c.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    let overrides = [
        ("gamma1", &c.gamma1),
        ("gamma2", &c.gamma2),
        ("tau1", &c.tau1),
        ("tau2", &c.tau2),
        ("n1", &c.n1),
        ("n2", &c.n2),
        ("k1", &c.k1),
        ("k2", &c.k2),
        ("transient", &c.transient),
        ("detect", &c.detect),
        ("max_period", &c.max_period),
        ("ics", &c.ics),
        ("window", &c.window),
        ("resolution", &c.resolution),
    ];
    for (key, v) in overrides {
        if let Some(v) = v {
            cfg.set(key, v, 0).map_err(|e| match e {
                Error::Syntax { msg, .. } => Error::InvalidConfig(format!("--{key}: {msg}")),
                e => e,
            })?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_table(t: &Table, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => segmap::io::emit_csv(t, p),
        None => {
            // render first so a closed pipe (`| head`) is not reported as a failure
            let bytes = t.to_bytes()?;
            let mut lock = std::io::stdout().lock();
            match lock.write_all(&bytes).and_then(|_| lock.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

fn need_out(out: Option<&Path>) -> Result<&Path> {
    out.ok_or_else(|| Error::InvalidConfig("raster output needs --out <file.ppm>".into()))
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(&cli.common)?;
    let p = cfg.params;
    let out = cli.common.out.as_deref();
    let threads = cli.common.threads;
    match cli.cmd {
        Cmd::Equilibria => write_table(&fixed_points_table(&enumerate_fixed_points(&p)?)?, out),
        Cmd::Orbit { x1, x2, steps } => {
            if !(x1 >= 0.0 && x2 >= 0.0) {
                return Err(Error::InvalidConfig("initial state must be non-negative".into()));
            }
            write_table(&orbit_table(&orbit(&p, State::new(x1, x2), steps))?, out)
        }
        Cmd::Restriction { tag, samples, cycles, cycle_max_period } => {
            let tag = match tag {
                Tag::T1 => RestrictionTag::T1,
                Tag::T2 => RestrictionTag::T2,
                Tag::F1 => RestrictionTag::F1,
                Tag::F2 => RestrictionTag::F2,
                Tag::Diag => RestrictionTag::Diagonal,
            };
            let m = build_restriction(&p, tag)?;
            if cycles {
                let mut t = Table::new(["period", "superstable", "word", "points"]);
                for c in find_cycles_1d(&m, cycle_max_period)? {
                    let pts: Vec<String> = c.points.iter().map(|v| fmt_f64(*v)).collect();
                    t.push(vec![
                        c.period.to_string(),
                        c.superstable.to_string(),
                        c.word,
                        pts.join(" "),
                    ])?;
                }
                return write_table(&t, out);
            }
            if samples < 2 {
                return Err(Error::Resolution(samples));
            }
            let (lo, hi) = m.domain();
            let mut t = Table::new(["x", "value", "branch", "slope_left", "slope_right"]);
            for i in 0..samples {
                let x = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
                let (v, b) = eval_1d(&m, x)?;
                let (l, r) = derivative_1d(&m, x)?;
                t.push(vec![fmt_f64(x), fmt_f64(v), b.to_string(), fmt_f64(l), fmt_f64(r)])?;
            }
            write_table(&t, out)
        }
        Cmd::ReturnMap { section, returns, samples } => {
            let spec = match section {
                SectionArg::X2 => ReturnMapSpec::on_x2_line(&p, returns),
                SectionArg::X1 => ReturnMapSpec::on_x1_line(&p, returns),
            };
            spec.validate(&p)?;
            if samples < 1 {
                return Err(Error::Resolution(samples));
            }
            let closed = matches!(section, SectionArg::X2) && returns == 1;
            let mut t = Table::new(["x", "value", "intermediate", "closed_form"]);
            for i in 1..=samples {
                let x = spec.lo + (spec.hi - spec.lo) * i as f64 / samples as f64;
                // orbits captured by an axis have no return; they are left out
                let Ok(hit) = first_return(&p, &spec, x) else { continue };
                let g = if closed { fmt_f64(g_closed_form(&p, x)) } else { String::new() };
                t.push(vec![fmt_f64(x), fmt_f64(hit.value), hit.intermediate.to_string(), g])?;
            }
            write_table(&t, out)
        }
        Cmd::BcbCurves { range, samples, sn2 } => {
            let r = pair(&range, "--range")?;
            let mut curves = Vec::new();
            curves.extend(bcb_equilibrium_curves(&p, r, samples)?);
            curves.extend(bcb_smoothness_curves(&p, r, samples)?);
            if sn2 {
                curves.push(bcb_sn2_curve(&p, r, samples)?);
            }
            write_table(&curves_table(&curves)?, out)
        }
        Cmd::Thresholds => {
            let t = diagonal_thresholds(&p)?;
            let mut tab = Table::new(["name", "value"]);
            for (k, v) in [
                ("k_fp_bcb", t.k_fp_bcb),
                ("k_bar", t.k_bar),
                ("x_c", t.x_c),
                ("k_smooth", t.k_smooth),
            ] {
                tab.push(vec![k.into(), fmt_f64(v)])?;
            }
            write_table(&tab, out)
        }
        Cmd::Sweep2d { k1_range, k2_range } => {
            let path = need_out(out)?;
            let g = sweep2d(
                &p,
                pair(&k1_range, "--k1-range")?,
                pair(&k2_range, "--k2-range")?,
                cfg.resolution,
                &cfg.scan,
                threads,
            )?;
            emit_raster(&RasterImage::from_period_grid(&g), path)
        }
        Cmd::Sweep1d { vary, fixed, range } => {
            let range = pair(&range, "--range")?;
            let path = match vary {
                Vary::K1 => Path1D::VaryK1 { k2: fixed, range },
                Vary::K2 => Path1D::VaryK2 { k1: fixed, range },
            };
            let s = sweep1d(&p, path, cfg.resolution, &cfg.scan, threads)?;
            write_table(&sweep1d_table(&path, &s)?, out)
        }
        Cmd::Basins => {
            let path = need_out(out)?;
            let b = basins(&p, &cfg.window, cfg.resolution, &cfg.scan, threads)?;
            emit_raster(&RasterImage::from_basins(&b), path)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            let msg = e.to_string();
            let line = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("{}", line.trim());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
