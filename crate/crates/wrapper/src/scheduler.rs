//! Fixed-interval scheduling with bounded jitter. An activation never runs
//! concurrently with itself; a run that comes due while the previous one is
//! still in flight is skipped and recorded.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc::{channel, Receiver, Sender};
use std::sync::Arc;
use std::thread::JoinHandle;
use std::time::Duration;

use chrono::{DateTime, Utc};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::model::{ExtensionActivation, RunReport, MIN_FREQUENCY_SECS};
use crate::run::RunError;

/// Maximum relative deviation from the configured interval.
pub const JITTER: f64 = 0.10;

pub type Executor = Arc<dyn Fn(&ExtensionActivation) -> Result<RunReport, RunError> + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "camelCase")]
pub enum HistoryOutcome {
    Completed { report: RunReport },
    Failed { reason: String },
    SkippedOverlap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub at: DateTime<Utc>,
    #[serde(flatten)]
    pub outcome: HistoryOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TickEvent {
    Started(usize),
    SkippedOverlap(usize),
    Finished(usize),
}

struct Slot {
    activation: ExtensionActivation,
    next_due: DateTime<Utc>,
    running: bool,
    history: Vec<HistoryEntry>,
}

type Completion = (usize, DateTime<Utc>, Result<RunReport, RunError>);

pub struct Scheduler {
    slots: Vec<Slot>,
    executor: Executor,
    rng: StdRng,
    tx: Sender<Completion>,
    rx: Receiver<Completion>,
    workers: Vec<JoinHandle<()>>,
}

/// `frequency` scaled by a factor drawn from `[1 - JITTER, 1 + JITTER]`.
pub fn jittered<R: Rng + ?Sized>(frequency_secs: u64, rng: &mut R) -> chrono::Duration {
    let factor = 1.0 + rng.random_range(-JITTER..=JITTER);
    chrono::Duration::milliseconds((frequency_secs as f64 * 1000.0 * factor).round() as i64)
}

impl Scheduler {
    pub fn new(executor: Executor, seed: u64) -> Self {
        let (tx, rx) = channel();
        Scheduler {
            slots: Vec::new(),
            executor,
            rng: StdRng::seed_from_u64(seed),
            tx,
            rx,
            workers: Vec::new(),
        }
    }

    /// Registers an activation; its first run is due at `now`.
    pub fn add(&mut self, activation: ExtensionActivation, now: DateTime<Utc>) -> Result<usize, RunError> {
        if activation.frequency_secs < MIN_FREQUENCY_SECS {
            return Err(RunError::ConfigInvalid(format!("frequency must be at least {MIN_FREQUENCY_SECS} s")));
        }
        self.slots.push(Slot {
            activation,
            next_due: now,
            running: false,
            history: Vec::new(),
        });
        Ok(self.slots.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn activation(&self, slot: usize) -> &ExtensionActivation {
        &self.slots[slot].activation
    }

    pub fn history(&self, slot: usize) -> &[HistoryEntry] {
        &self.slots[slot].history
    }

    pub fn next_due(&self, slot: usize) -> DateTime<Utc> {
        self.slots[slot].next_due
    }

    pub fn is_running(&self, slot: usize) -> bool {
        self.slots[slot].running
    }

    fn record(&mut self, (slot, at, result): Completion) {
        let s = &mut self.slots[slot];
        s.running = false;
        s.activation.last_run_at = Some(at);
        let outcome = match result {
            Ok(report) => {
                s.activation.last_run_report = Some(report.clone());
                HistoryOutcome::Completed { report }
            }
            Err(e) => HistoryOutcome::Failed { reason: e.to_string() },
        };
        s.history.push(HistoryEntry { at, outcome });
    }

    fn collect(&mut self, events: &mut Vec<TickEvent>) {
        while let Ok(done) = self.rx.try_recv() {
            events.push(TickEvent::Finished(done.0));
            self.record(done);
        }
        self.workers.retain(|w| !w.is_finished());
    }

    /// Collects finished runs, then starts (or skips) everything due at `now`.
    pub fn tick_at(&mut self, now: DateTime<Utc>) -> Vec<TickEvent> {
        let mut events = Vec::new();
        self.collect(&mut events);
        for i in 0..self.slots.len() {
            if self.slots[i].next_due > now {
                continue;
            }
            let delay = jittered(self.slots[i].activation.frequency_secs, &mut self.rng);
            let slot = &mut self.slots[i];
            slot.next_due = now + delay;
            if slot.running {
                slot.history.push(HistoryEntry {
                    at: now,
                    outcome: HistoryOutcome::SkippedOverlap,
                });
                events.push(TickEvent::SkippedOverlap(i));
                continue;
            }
            slot.running = true;
            let activation = slot.activation.clone();
            let executor = self.executor.clone();
            let tx = self.tx.clone();
            self.workers.push(std::thread::spawn(move || {
                let result = executor(&activation);
                let _ = tx.send((i, Utc::now(), result));
            }));
            events.push(TickEvent::Started(i));
        }
        events
    }

    /// Blocks until every in-flight run has finished and been recorded.
    pub fn wait_idle(&mut self) -> Vec<TickEvent> {
        let mut events = Vec::new();
        while self.slots.iter().any(|s| s.running) {
            match self.rx.recv() {
                Ok(done) => {
                    events.push(TickEvent::Finished(done.0));
                    self.record(done);
                }
                Err(_) => break,
            }
        }
        for w in self.workers.drain(..) {
            let _ = w.join();
        }
        events
    }

    /// Ticks on the wall clock until `stop` is set, then drains in-flight runs.
    pub fn run(&mut self, stop: &AtomicBool, poll: Duration) {
        while !stop.load(Ordering::Relaxed) {
            for e in self.tick_at(Utc::now()) {
                tracing::info!(?e, "scheduler");
            }
            std::thread::sleep(poll);
        }
        self.wait_idle();
    }
}
