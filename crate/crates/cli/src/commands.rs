use std::fmt::Write as _;

use cubic_rds::distribution::{expect_log, LogIntegrand};
use cubic_rds::normal_form::{run_checks, CheckRow};
use cubic_rds::orbit::{basin_grid, escape_experiment, estimate_basin, iterate, EscapeParams};
use cubic_rds::stability::{classify_attractors, format_set, two_point_scan, ScanRow};
use cubic_rds::{
    BasinEstimate, FixedPointLabel, OrbitParams, SeedSpec, SimplexPoint, ThetaDistribution, TrajectoryRecord,
};

use crate::config::RunConfig;
use crate::CliError;

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Classify,
    Scan,
    Basin,
    Escape,
    NormalformCheck,
}

pub struct Output {
    pub csv: String,
    /// Human-readable text for stderr.
    pub report: Option<String>,
    pub failed: bool,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Classify => "classify",
            Command::Scan => "scan",
            Command::Basin => "basin",
            Command::Escape => "escape",
            Command::NormalformCheck => "normalform-check",
        }
    }

    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Command::Simulate => &["dist", "x0", "steps", "eps", "dwell", "trials", "seed", "threads", "out"],
            Command::Classify => &["dist", "out"],
            Command::Scan => &["from", "to", "step", "offset", "out"],
            Command::Basin => &["dist", "x0", "grid", "trials", "steps", "eps", "dwell", "seed", "threads", "out"],
            Command::Escape => &["dist", "target", "start", "eps", "steps", "trials", "seed", "threads", "out"],
            Command::NormalformCheck => &["seed", "out"],
        }
    }

    pub fn run(self, cfg: &mut RunConfig) -> Result<Output, CliError> {
        let body = match self {
            Command::Simulate => simulate(cfg)?,
            Command::Classify => classify(cfg)?,
            Command::Scan => scan(cfg)?,
            Command::Basin => basin(cfg)?,
            Command::Escape => escape(cfg)?,
            Command::NormalformCheck => normalform_check(cfg)?,
        };
        let csv = cfg.header_lines(self.name(), self.keys()) + &body.csv;
        Ok(Output { csv, ..body })
    }
}

fn plain(csv: String) -> Output {
    Output { csv, report: None, failed: false }
}

fn distribution(cfg: &RunConfig) -> Result<ThetaDistribution, CliError> {
    cfg.require::<String>("dist")?.parse().map_err(CliError::from)
}

fn point(cfg: &RunConfig) -> Result<Option<SimplexPoint>, CliError> {
    let Some(raw) = cfg.raw("x0") else { return Ok(None) };
    let parts: Vec<f64> = raw
        .split(',')
        .map(|s| s.parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Config(format!("invalid x0 '{raw}': {e}")))?;
    let [a, b, c] = parts[..] else {
        return Err(CliError::Config(format!("x0 '{raw}' needs three coordinates")));
    };
    SimplexPoint::new(a, b, c).map(Some).map_err(CliError::from)
}

fn orbit_params(cfg: &mut RunConfig) -> Result<OrbitParams, CliError> {
    let d = OrbitParams::default();
    let p = OrbitParams {
        max_steps: cfg.positive("steps", d.max_steps)?,
        eps_conv: cfg.positive_real("eps", d.eps_conv)?,
        dwell: cfg.positive("dwell", d.dwell)?,
        keep_history: false,
    };
    p.validate()?;
    Ok(p)
}

fn simulate(cfg: &mut RunConfig) -> Result<Output, CliError> {
    let dist = distribution(cfg)?;
    let x0 = point(cfg)?.ok_or_else(|| CliError::Config("simulate needs x0".into()))?;
    let params = orbit_params(cfg)?;
    let trials = cfg.positive("trials", 1)?;
    let seed = cfg.get_or("seed", DEFAULT_SEED)?;
    let records = crate::ordered(trials, |i| iterate(&dist, &x0, SeedSpec::new(seed, i as u64), &params))?;
    let mut csv = format!("{}\n", TrajectoryRecord::CSV_HEADER);
    for r in records {
        writeln!(csv, "{}", r.csv_row()).expect("string write");
    }
    Ok(plain(csv))
}

fn classify(cfg: &mut RunConfig) -> Result<Output, CliError> {
    let dist = distribution(cfg)?;
    let report = classify_attractors(&dist)?;
    let e = &report.exponents;
    let s = &report.region_sets;
    let csv = format!(
        "exp_e1,exp_center,exp_saddle_in,exp_saddle_out,set_intG1,set_M12,set_M23,set_Gamma12\n{},{},{},{},{},{},{},{}\n",
        e.e1,
        e.center,
        e.saddle_in,
        e.saddle_out,
        format_set(&s.int_g1),
        format_set(&s.m12),
        format_set(&s.m23),
        format_set(&s.gamma12)
    );
    let braces = |set| format!("{{{}}}", format_set(set).replace(';', ", "));
    let mut text = format!("distribution {dist}\n");
    for (name, v) in [
        ("E log 3(1-T)", e.e1),
        ("E log(1/3+T)", e.center),
        ("E log(3T/2)", e.saddle_in),
        ("E log(2-3T/2)", e.saddle_out),
    ] {
        writeln!(text, "  {name:<15} {v:>12.6}").expect("string write");
    }
    for (name, set) in [("int G1", &s.int_g1), ("M12", &s.m12), ("M23", &s.m23), ("Gamma12", &s.gamma12)] {
        writeln!(text, "  A(x), x in {name:<8} {}", braces(set)).expect("string write");
    }
    Ok(Output { csv, report: Some(text), failed: false })
}

fn scan(cfg: &mut RunConfig) -> Result<Output, CliError> {
    let from = cfg.get_or("from", 0.567)?;
    let to = cfg.get_or("to", 0.767)?;
    let step = cfg.get_or("step", 1e-3)?;
    let offset = cfg.get_or("offset", 0.1)?;
    let rows = two_point_scan(from, to, step, offset)?;
    let mut csv = format!("{}\n", ScanRow::CSV_HEADER);
    for r in rows {
        writeln!(csv, "{}", r.csv_row()).expect("string write");
    }
    Ok(plain(csv))
}

fn basin(cfg: &mut RunConfig) -> Result<Output, CliError> {
    let dist = distribution(cfg)?;
    let params = orbit_params(cfg)?;
    let trials = cfg.positive("trials", 100)?;
    let seed = cfg.get_or("seed", DEFAULT_SEED)?;
    let estimates = match point(cfg)? {
        Some(x0) => vec![estimate_basin(&dist, &x0, trials, seed, &params)?],
        None => {
            let grid = cfg.positive("grid", 7)?;
            basin_grid(&dist, grid, trials, seed, &params)?
        }
    };
    let mut csv = format!("{}\n", BasinEstimate::csv_header());
    for e in estimates {
        writeln!(csv, "{}", e.csv_row()).expect("string write");
    }
    Ok(plain(csv))
}

fn escape(cfg: &mut RunConfig) -> Result<Output, CliError> {
    let dist = distribution(cfg)?;
    let target: FixedPointLabel = cfg.get_or("target", FixedPointLabel::E1)?;
    let params = EscapeParams {
        start_distance: cfg.positive_real("start", 1e-3)?,
        eps: cfg.positive_real("eps", 1e-2)?,
        trials: cfg.positive("trials", 100)?,
        max_steps: cfg.positive("steps", 10_000)?,
        master_seed: cfg.get_or("seed", DEFAULT_SEED)?,
    };
    let exponent = match target {
        FixedPointLabel::E1 => expect_log(&dist, LogIntegrand::E1),
        FixedPointLabel::Center => expect_log(&dist, LogIntegrand::Center),
        // the saddle repels as soon as either direction fails to contract
        FixedPointLabel::C12 => {
            expect_log(&dist, LogIntegrand::SaddleIn).max(expect_log(&dist, LogIntegrand::SaddleOut))
        }
        other => return Err(CliError::Config(format!("escape target must be E1, C12 or Center, not {other}"))),
    };
    let report = escape_experiment(&dist, target, &params)?;
    let median = report.median_escape_time().map_or_else(|| "NA".to_string(), |m| m.to_string());
    let csv = format!(
        "target,trials,escaped,fraction,median_escape_time,exponent,exponent_nonnegative\n{target},{},{},{},{median},{exponent},{}\n",
        report.trials,
        report.escaped(),
        report.fraction(),
        exponent >= 0.0
    );
    let text =
        (exponent < 0.0).then(|| format!("warning: exponent at {target} is {exponent} < 0, escape is not expected\n"));
    Ok(Output { csv, report: text, failed: false })
}

fn normalform_check(cfg: &mut RunConfig) -> Result<Output, CliError> {
    let seed = cfg.get_or("seed", DEFAULT_SEED)?;
    let rows = run_checks(seed)?;
    let failed = rows.iter().any(|r| !r.pass);
    let mut csv = format!("{}\n", CheckRow::CSV_HEADER);
    for r in &rows {
        writeln!(csv, "{}", r.csv_row()).expect("string write");
    }
    Ok(Output { csv, report: None, failed })
}
