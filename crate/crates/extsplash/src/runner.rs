//! Runs checks on worker threads; results come back in registry order.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Instant;

use extsplash_core::verify::{run_check, CheckError, CheckId, CheckReport, RunOptions};
use extsplash_core::FieldTower;

use crate::report::{Entry, VerifyReport};

/// One finished check.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: CheckId,
    pub result: Result<CheckReport, CheckError>,
    pub wall_ms: u64,
}

impl Outcome {
    pub fn budget_exceeded(&self) -> bool {
        matches!(self.result, Err(CheckError::BudgetExceeded { .. }))
    }
}

/// Run `ids` with up to `threads` workers (`0` means one per core).
pub fn run_checks(ids: &[CheckId], tower: &Arc<FieldTower>, opts: RunOptions, threads: usize) -> Vec<Outcome> {
    let workers = if threads == 0 { thread::available_parallelism().map(|n| n.get()).unwrap_or(1) } else { threads };
    let workers = workers.clamp(1, ids.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Outcome>>> = ids.iter().map(|_| Mutex::new(None)).collect();
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= ids.len() {
                    break;
                }
                let start = Instant::now();
                let result = run_check(ids[i], tower.clone(), opts);
                let wall_ms = start.elapsed().as_millis() as u64;
                *slots[i].lock().expect("slot lock") = Some(Outcome { id: ids[i], result, wall_ms });
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().expect("slot lock").expect("every job ran")).collect()
}

/// Entries for the report; errors other than the budget are internal faults
/// and are surfaced to the caller.
pub fn to_report(outcomes: &[Outcome], tower: &FieldTower, opts: RunOptions) -> Result<VerifyReport, CheckError> {
    let field = tower.spec().to_text().unwrap_or_default();
    let mut entries = Vec::new();
    for o in outcomes {
        match &o.result {
            Ok(r) => entries.push(Entry::from_report(r, o.wall_ms)),
            Err(CheckError::BudgetExceeded { needed, .. }) => {
                entries.push(Entry::budget_exceeded(o.id, tower.q(), &field, *needed, opts.seed, opts.budget, o.wall_ms))
            }
            Err(e) => return Err(e.clone()),
        }
    }
    Ok(VerifyReport::new(entries))
}
