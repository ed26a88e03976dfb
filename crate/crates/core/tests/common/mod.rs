//! Checks shared by the integration targets.

use wsrn_core::energy::energy_loss;
use wsrn_core::{Outcome, RunRecord, SimConfig};

/// Energy, reaction and message ledger mismatches for one finished run.
pub fn ledger_errors(c: &SimConfig, run: &RunRecord) -> Vec<String> {
    let mut errors = Vec::new();
    let mut expect = |ok: bool, what: &str| {
        if !ok {
            errors.push(format!("seed {}: {what}", run.seed));
        }
    };
    let e0 = c.energy.initial_energy;
    let tol = 1e-9 * e0 * c.n as f64;
    let drained: f64 = run.robots.iter().map(|r| e0 - r.energy).sum();
    let consumed: f64 = run.rounds.iter().map(|r| r.energy_consumed).sum();
    let by_formula: f64 = run
        .rounds
        .iter()
        .map(|r| energy_loss(r.winner_travel, &c.energy))
        .sum();
    expect(
        (drained - consumed).abs() < tol,
        "energy drained differs from energy consumed",
    );
    expect(
        (drained - by_formula).abs() < tol,
        "energy drained differs from the loss formula",
    );

    let reactions: u32 = run.robots.iter().map(|r| r.reactions).sum();
    expect(
        reactions as usize == run.lifetime,
        "reactions differ from lifetime",
    );
    let travelled: f64 = run.robots.iter().map(|r| r.traveled).sum();
    let moved: f64 = run.rounds.iter().map(|r| r.winner_travel).sum();
    expect(
        (travelled - moved).abs() < 1e-9 * (1.0 + moved),
        "distance ledger",
    );

    let sent: u64 = run.robots.iter().map(|r| r.messages_sent).sum();
    expect(
        sent == run.total_messages(),
        "per-robot messages differ from per-round messages",
    );
    expect(
        run.rounds.iter().all(|r| {
            r.result.total_messages == r.result.routing_messages + r.result.auction_messages
        }),
        "round message split",
    );

    expect(
        run.robots.iter().all(|r| r.energy >= 0.0),
        "negative energy",
    );
    match run.rounds.split_last() {
        Some((last, done)) => {
            expect(
                last.result.outcome == Outcome::NetworkDead,
                "last round assigned",
            );
            expect(
                done.iter()
                    .all(|r| matches!(r.result.outcome, Outcome::Assigned(_))),
                "early unassigned round",
            );
            expect(
                done.len() == run.lifetime,
                "lifetime differs from assigned rounds",
            );
        }
        None => expect(false, "no rounds"),
    }
    errors
}
