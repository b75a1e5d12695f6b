//! Execution of each subcommand: build the inputs, call the library, and
//! render the report and the one-line summary.

use gmlab_core::gm::beta_star;
use gmlab_core::gm::{
    defect_profile, dyadic_grid, least_squares_slope, membership, remark1_condition, theorem4_bound_check,
    theorem6_condition, BetaSpec, DefectReport, RatioSample, Verdict, DEFAULT_CS,
};
use gmlab_core::series::{
    checkpoint_indices, convergence_report, diverge_lower_bound, divergence_probe, lemma1_suite, ReportSettings, X0,
};
use gmlab_core::{ConvergenceVerdict, EvalGrid, SineSeries};
use serde::Serialize;

use crate::config::{decades_of, Command, Format, RunConfig};
use crate::output::{csv, format_real, json, Cell};
use crate::CliError;

/// Largest relative residual accepted by `lemma1`.
pub const LEMMA1_TOL: f64 = 1e-10;

/// Result of a run before anything is written.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// Serialized report.
    pub content: String,
    /// One-line `key=value` summary.
    pub summary: String,
    /// Numerical guards that fired; fatal under `--strict`.
    pub warnings: Vec<String>,
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        Command::Defect => defect(cfg),
        Command::Embed => embed(cfg),
        Command::Lemma1 => lemma1(cfg),
        Command::Converge => converge(cfg),
        Command::Diverge => diverge(cfg),
        Command::Report => report(cfg),
    }
}

fn render<T: Serialize>(cfg: &RunConfig, value: &T, header: &[&str], rows: Vec<Vec<Cell>>) -> String {
    match cfg.format {
        Format::Json => json(value),
        Format::Csv => csv(header, rows),
    }
}

fn summary(verdict: &str, max_ratio: f64, slope: f64) -> String {
    format!(
        "verdict={verdict} max_ratio={} slope={}",
        format_real(max_ratio),
        format_real(slope)
    )
}

fn defect(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let seq = cfg.family.build()?;
    let rep: DefectReport = defect_profile(
        &seq,
        cfg.r,
        &BetaSpec::star(cfg.r, cfg.c),
        &dyadic_grid(cfg.m_max),
        &cfg.thresholds,
    )?;
    let rows = rep
        .samples
        .iter()
        .map(|s| vec![s.m.into(), s.lhs.into(), s.beta.into(), s.ratio.into()])
        .collect();
    let mut warnings = Vec::new();
    if rep.zero_beta_count() > 0 {
        warnings.push(format!(
            "majorant vanished at {} window(s) with nonzero variation",
            rep.zero_beta_count()
        ));
    }
    Ok(Outcome {
        content: render(cfg, &rep, &["m", "lhs", "beta", "ratio"], rows),
        summary: summary(rep.verdict.token(), rep.max_ratio, rep.slope),
        warnings,
    })
}

#[derive(Serialize)]
struct EmbedReport {
    r: u64,
    c: f64,
    samples: Vec<RatioSample>,
    max_ratio: f64,
    slope: f64,
    verdict: Verdict,
}

fn embed(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let seq = cfg.family.build()?;
    let beta = |n: u64| beta_star(&seq, n, 1, cfg.c).expect("c and n validated");
    let rep = remark1_condition(beta, cfg.r, &dyadic_grid(cfg.n_max))?;
    let verdict = rep.classify(&cfg.thresholds)?;
    let slope = rep.trend_slope();
    let rows = rep
        .samples
        .iter()
        .map(|s| vec![s.n.into(), s.ratio.into(), s.flagged.into()])
        .collect();
    let warnings = match rep.flagged().count() {
        0 => Vec::new(),
        k => vec![format!("majorant vanished at {k} index(es)")],
    };
    let out = EmbedReport {
        r: cfg.r,
        c: cfg.c,
        max_ratio: rep.max_ratio,
        samples: rep.samples,
        slope,
        verdict,
    };
    Ok(Outcome {
        content: render(cfg, &out, &["n", "ratio", "flagged"], rows),
        summary: summary(verdict.token(), out.max_ratio, slope),
        warnings,
    })
}

fn lemma1(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let suite = lemma1_suite(cfg.trials, cfg.seed, cfg.n_max, cfg.r, cfg.exclusion_tol)?;
    let pass = suite.max_residual <= LEMMA1_TOL;
    let rows = suite
        .cases
        .iter()
        .map(|c| {
            vec![
                c.trial.into(),
                c.seed.into(),
                c.n.into(),
                c.r.into(),
                c.x.into(),
                c.block_sum.into(),
                c.rhs.into(),
                c.residual.into(),
            ]
        })
        .collect();
    let header = ["trial", "seed", "n", "r", "x", "block_sum", "rhs", "residual"];
    let warnings = if pass {
        Vec::new()
    } else {
        vec![format!("max residual exceeds {}", format_real(LEMMA1_TOL))]
    };
    Ok(Outcome {
        content: render(cfg, &suite, &header, rows),
        summary: format!(
            "verdict={} max_residual={} pass={pass}",
            if pass { "pass" } else { "fail" },
            format_real(suite.max_residual)
        ),
        warnings,
    })
}

/// `n_min, 2 n_min, 4 n_min, …` up to `n_max`.
fn doubling(n_min: u64, n_max: u64) -> Vec<u64> {
    std::iter::successors(Some(n_min), |&n| n.checked_mul(2))
        .take_while(|&n| n <= n_max)
        .collect()
}

/// Slope of `ln y` on `ln n` over the positive finite values.
fn log_slope(ns: &[u64], ys: &[f64]) -> f64 {
    let (xs, ys): (Vec<f64>, Vec<f64>) = ns
        .iter()
        .zip(ys)
        .filter(|(_, y)| y.is_finite() && **y > 0.0)
        .map(|(&n, &y)| ((n as f64).ln(), y.ln()))
        .unzip();
    least_squares_slope(&xs, &ys)
}

fn converge(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let series = SineSeries::new(cfg.family.build()?);
    let ns = doubling(cfg.n_min, cfg.n_max);
    let grid = EvalGrid::chebyshev(cfg.grid_size, cfg.exclusion_tol)?.with_special_points(cfg.r);
    let rep = convergence_report(
        &series,
        cfg.r,
        cfg.c,
        &ns,
        &grid,
        cfg.big_n_max,
        cfg.cap,
        &ReportSettings::default(),
    )?;
    let ratios = rep.remainder_ratios();
    let rows = (0..rep.n_grid.len())
        .map(|i| {
            vec![
                rep.n_grid[i].into(),
                rep.eps1[i].into(),
                rep.eps2.get(i).copied().unwrap_or(0.0).into(),
                rep.sup_remainder[i].into(),
                rep.side_condition_partials[i].into(),
                rep.nbn_sup[i].into(),
                ratios[i].into(),
            ]
        })
        .collect();
    let header = [
        "n",
        "eps1",
        "eps2",
        "sup_remainder",
        "side_condition_partial",
        "nbn_sup",
        "remainder_ratio",
    ];
    let mut warnings = Vec::new();
    let capped = &rep.diagnostics.cap_attained;
    if !capped.is_empty() {
        let list: Vec<String> = capped.iter().map(u64::to_string).collect();
        warnings.push(format!(
            "supremum of k|b_k| attained at the cap {} for n in [{}]",
            cfg.cap,
            list.join(" ")
        ));
    }
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let slope = log_slope(&rep.n_grid, &rep.sup_remainder);
    let summary = format!(
        "{} tail_bound={}",
        summary(rep.verdict.token(), max_ratio, slope),
        format_real(rep.diagnostics.truncation_tail)
    );
    Ok(Outcome {
        content: render(cfg, &rep, &header, rows),
        summary,
        warnings,
    })
}

#[derive(Serialize)]
struct Checkpoint {
    k: u64,
    n: u64,
    partial_sum: f64,
    lower_bound: f64,
}

#[derive(Serialize)]
struct DivergeReport {
    x: f64,
    checkpoints: Vec<Checkpoint>,
    increase: f64,
    lower_bound_increase: f64,
    verdict: ConvergenceVerdict,
}

fn diverge(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let series = SineSeries::new(cfg.family.build()?);
    let decades = decades_of(cfg.k).expect("validated");
    let probe = divergence_probe(&series, X0, decades, ReportSettings::default().divergence_threshold)?;
    let checkpoints = (1..=decades)
        .zip(checkpoint_indices(decades))
        .zip(&probe.checkpoints)
        .map(|((j, n), &(_, s))| {
            let k = 10u64.pow(j);
            Ok(Checkpoint {
                k,
                n,
                partial_sum: s,
                lower_bound: diverge_lower_bound(k)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let lower_bound_increase = checkpoints[checkpoints.len() - 1].lower_bound - checkpoints[0].lower_bound;
    let verdict = if probe.witness {
        ConvergenceVerdict::DivergenceWitness
    } else {
        ConvergenceVerdict::Inconclusive
    };
    let rows = checkpoints
        .iter()
        .map(|c| vec![c.k.into(), c.n.into(), c.partial_sum.into(), c.lower_bound.into()])
        .collect();
    let rep = DivergeReport {
        x: X0,
        checkpoints,
        increase: probe.increase,
        lower_bound_increase,
        verdict,
    };
    Ok(Outcome {
        content: render(cfg, &rep, &["k", "n", "partial_sum", "lower_bound"], rows),
        summary: format!(
            "verdict={} increase={} lower_bound_increase={}",
            verdict.token(),
            format_real(rep.increase),
            format_real(lower_bound_increase)
        ),
        warnings: Vec::new(),
    })
}

#[derive(Serialize)]
struct ClassRow {
    r: u64,
    verdict: Verdict,
    slope: f64,
    max_ratio: f64,
    best_c: f64,
    /// `max n b_n / (4r Σ b_k)`; absent for sequences with negative terms.
    weak_monotone_max: Option<f64>,
    /// Partial sum of the block-asymmetry series up to `n-max`; 0 for `r <= 2`.
    side_condition: f64,
}

fn report(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let seq = cfg.family.build()?;
    let m_grid = dyadic_grid(cfg.m_max);
    let nonnegative = seq.take(cfg.n_max * 8).iter().all(|&b| b >= 0.0);
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for r in 1..=cfg.r {
        let mem = membership(&seq, r, &DEFAULT_CS, &m_grid, &cfg.thresholds)?;
        let (best_c, best) = mem
            .profiles
            .iter()
            .min_by(|a, b| a.1.slope.total_cmp(&b.1.slope))
            .expect("three profiles");
        let weak = if nonnegative {
            let range: Vec<u64> = (r + 1..=cfg.n_max).collect();
            let rep = theorem4_bound_check(&seq, r, cfg.c, &range)?;
            if rep.any_flagged() {
                warnings.push(format!("weak-monotonicity window sum vanished at step {r}"));
            }
            Some(rep.max_ratio)
        } else {
            None
        };
        let side = if r >= 3 {
            theorem6_condition(&seq, r, cfg.n_max)?
        } else {
            0.0
        };
        rows.push(ClassRow {
            r,
            verdict: mem.verdict,
            slope: best.slope,
            max_ratio: best.max_ratio,
            best_c: *best_c,
            weak_monotone_max: weak,
            side_condition: side,
        });
    }
    let table = rows
        .iter()
        .map(|row| {
            vec![
                row.r.into(),
                row.verdict.token().into(),
                row.slope.into(),
                row.max_ratio.into(),
                row.best_c.into(),
                row.weak_monotone_max.unwrap_or(f64::NAN).into(),
                row.side_condition.into(),
            ]
        })
        .collect();
    let header = [
        "r",
        "verdict",
        "slope",
        "max_ratio",
        "best_c",
        "weak_monotone_max",
        "side_condition",
    ];
    let last = rows.last().expect("r >= 1");
    Ok(Outcome {
        content: render(cfg, &rows, &header, table),
        summary: summary(last.verdict.token(), last.max_ratio, last.slope),
        warnings,
    })
}
