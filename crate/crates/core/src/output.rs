//! CSV emission. Numbers use six significant digits in the style of C's `%g`.

use std::io::Write;

use crate::analysis::{lemma4_diagnostic, step_bound, MonteCarlo, SweepRow};
use crate::error::Result;
use crate::scalar::Scalar;
use crate::simulator::{ClosestReport, RunRecord, SimReport};
use crate::topology::Topology;

/// `%g` with six significant digits.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    // exponent after rounding to six digits
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (5 - exp) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

pub const AGGREGATE_HEADER: [&str; 22] = [
    "algorithm",
    "topology",
    "n",
    "r",
    "sr",
    "runs",
    "seed",
    "anl",
    "anl_ci",
    "ampr",
    "ampr_sd",
    "arre",
    "arre_sd",
    "min_rre",
    "anrr",
    "anrr_sd",
    "atdpr",
    "atdpr_sd",
    "total_msgs_mean",
    "total_msgs_ci",
    "msgs_per_round",
    "msgs_per_round_ci",
];

/// One row per report. `total_msgs_*` are per run; the trailing two columns
/// are per round.
pub fn write_aggregate<W: Write>(w: W, reports: &[SimReport]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(AGGREGATE_HEADER)?;
    for r in reports {
        out.write_record([
            r.algorithm.to_string(),
            r.topology.to_string(),
            r.n.to_string(),
            fmt_num(r.radius),
            fmt_num(r.sr),
            r.runs.to_string(),
            r.seed.to_string(),
            fmt_num(r.anl.mean),
            fmt_num(r.anl.ci),
            fmt_num(r.ampr.mean),
            fmt_num(r.ampr.sd),
            fmt_num(r.arre.mean),
            fmt_num(r.arre.sd),
            fmt_num(r.min_rre),
            fmt_num(r.anrr.mean),
            fmt_num(r.anrr.sd),
            fmt_num(r.atdpr.mean),
            fmt_num(r.atdpr.sd),
            fmt_num(r.msgs_per_run.mean),
            fmt_num(r.msgs_per_run.ci),
            fmt_num(r.msgs_per_round.mean),
            fmt_num(r.msgs_per_round.ci),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Every round of every run; `run` is the run index.
pub fn write_rounds<W: Write, S: Scalar>(
    w: W,
    runs: &[RunRecord<S>],
    first_seed: u64,
) -> Result<()> {
    let mut out = writer(w);
    out.write_record([
        "run",
        "round",
        "event_x",
        "event_y",
        "source",
        "winner",
        "stop_reason",
        "routing_msgs",
        "auction_msgs",
        "steps",
        "travel_m",
    ])?;
    for run in runs {
        let index = run.seed.wrapping_sub(first_seed).to_string();
        for r in &run.rounds {
            out.write_record([
                index.clone(),
                r.round_index.to_string(),
                fmt_num(r.event.x.as_f64()),
                fmt_num(r.event.y.as_f64()),
                r.collecting_robot.to_string(),
                r.result
                    .outcome
                    .winner()
                    .map_or_else(|| "none".to_string(), |w| w.to_string()),
                r.result
                    .stop_reason()
                    .map_or_else(|| "none".to_string(), |s| s.to_string()),
                r.result.routing_messages.to_string(),
                r.result.auction_messages.to_string(),
                r.result.routing_steps.to_string(),
                fmt_num(r.winner_travel.as_f64()),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Hop traces of all routings, prefixed by the run index.
pub fn write_traces<W: Write, S: Scalar>(
    w: W,
    runs: &[RunRecord<S>],
    first_seed: u64,
) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["run", "round", "step", "node_id", "mode"])?;
    for run in runs {
        let index = run.seed.wrapping_sub(first_seed).to_string();
        for r in &run.rounds {
            let Some(route) = r.result.routing.as_ref() else {
                continue;
            };
            for (step, (node, mode)) in route.hop_trace.iter().zip(&route.mode_trace).enumerate() {
                out.write_record([
                    index.clone(),
                    r.round_index.to_string(),
                    step.to_string(),
                    node.to_string(),
                    mode.to_string(),
                ])?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Robots as `id,x,y,energy`.
pub fn write_snapshot_nodes<W: Write, S: Scalar>(w: W, t: &Topology<S>) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["id", "x", "y", "energy"])?;
    for r in &t.robots {
        out.write_record([
            r.id.to_string(),
            fmt_num(r.position.x.as_f64()),
            fmt_num(r.position.y.as_f64()),
            fmt_num(r.energy.as_f64()),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Gabriel edges as `u,v` with `u < v`.
pub fn write_snapshot_edges<W: Write, S: Scalar>(w: W, t: &Topology<S>) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["u", "v"])?;
    for (u, v) in t.edges() {
        out.write_record([u.to_string(), v.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_closest<W: Write>(w: W, reports: &[ClosestReport], seed: u64) -> Result<()> {
    let mut out = writer(w);
    out.write_record([
        "topology",
        "n",
        "r",
        "sr",
        "trials",
        "seed",
        "gfgf2_closest_rate",
        "rfta1_closest_rate",
        "gfgf2_msgs",
        "gfgf2_msgs_ci",
        "rfta1_msgs",
        "rfta1_msgs_ci",
    ])?;
    for r in reports {
        out.write_record([
            r.topology.to_string(),
            r.n.to_string(),
            fmt_num(r.radius),
            fmt_num(r.sr),
            r.trials.to_string(),
            seed.to_string(),
            fmt_num(r.routing_rate),
            fmt_num(r.rfta1_rate),
            fmt_num(r.routing_msgs.mean),
            fmt_num(r.routing_msgs.ci),
            fmt_num(r.rfta1_msgs.mean),
            fmt_num(r.rfta1_msgs.ci),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_monte_carlo<W: Write>(w: W, rows: &[MonteCarlo], seed: u64) -> Result<()> {
    let mut out = writer(w);
    out.write_record([
        "n",
        "r",
        "bound",
        "empirical",
        "trials",
        "sigma",
        "seed",
        "holds",
    ])?;
    for m in rows {
        out.write_record([
            m.n.to_string(),
            fmt_num(m.r),
            fmt_num(m.bound),
            fmt_num(m.empirical),
            m.trials.to_string(),
            fmt_num(m.sigma()),
            seed.to_string(),
            m.consistent().to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// One sweep table; `label` columns identify the base configuration.
pub struct SweepTable {
    pub algorithm: String,
    pub topology: String,
    pub n: usize,
    pub radius: f64,
    pub runs: usize,
    pub seed: u64,
    pub rows: Vec<SweepRow>,
}

pub fn write_sweeps<W: Write>(w: W, tables: &[SweepTable]) -> Result<()> {
    let mut out = writer(w);
    out.write_record([
        "algorithm",
        "topology",
        "n",
        "r",
        "multiplier",
        "sr",
        "runs",
        "seed",
        "anl",
        "anl_sd",
        "anl_ci",
        "msgs_per_round",
        "best",
    ])?;
    for t in tables {
        let best = crate::analysis::best_multiplier(&t.rows);
        for row in &t.rows {
            out.write_record([
                t.algorithm.clone(),
                t.topology.clone(),
                t.n.to_string(),
                fmt_num(t.radius),
                row.multiplier.to_string(),
                fmt_num(row.sr),
                t.runs.to_string(),
                t.seed.to_string(),
                fmt_num(row.lifetime.mean),
                fmt_num(row.lifetime.sd),
                fmt_num(row.lifetime.ci),
                fmt_num(row.msgs_per_round.mean),
                (best == Some(row.multiplier)).to_string(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Per-run summary of the face-count message estimate and the routing step bound.
pub fn write_lemma4<W: Write, S: Scalar>(
    w: W,
    runs: &[RunRecord<S>],
    first_seed: u64,
) -> Result<()> {
    let mut out = writer(w);
    out.write_record([
        "run",
        "rounds",
        "mean_edges",
        "mean_faces",
        "mean_degree",
        "mean_measured",
        "mean_estimate",
        "edge_bound_violations",
        "max_step_ratio",
        "step_bound_violations",
    ])?;
    for run in runs {
        let d = lemma4_diagnostic(run);
        let k = d.rows.len().max(1) as f64;
        let (worst, bad) = step_bound(run);
        out.write_record([
            run.seed.wrapping_sub(first_seed).to_string(),
            d.rows.len().to_string(),
            fmt_num(d.rows.iter().map(|r| r.edges as f64).sum::<f64>() / k),
            fmt_num(d.rows.iter().map(|r| r.faces as f64).sum::<f64>() / k),
            fmt_num(d.rows.iter().map(|r| r.average_degree).sum::<f64>() / k),
            fmt_num(d.mean_measured),
            fmt_num(d.mean_estimate),
            d.bound_violations.to_string(),
            fmt_num(worst),
            bad.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
