use std::sync::mpsc::{channel, Receiver};
use std::sync::{Arc, Mutex};

use chrono::{Duration, TimeZone, Utc};
use rand::rngs::StdRng;
use rand::SeedableRng;
use semantify_wrapper::scheduler::{jittered, Executor, HistoryOutcome, TickEvent, JITTER};
use semantify_wrapper::{ExtensionActivation, PlatformTarget, RunError, RunReport, Scheduler};

fn activation(freq: u64) -> ExtensionActivation {
    ExtensionActivation {
        website_id: "w".into(),
        adapter_id: "structured_feed".into(),
        config: Default::default(),
        frequency_secs: freq,
        last_run_at: None,
        last_run_report: None,
        platform: PlatformTarget {
            endpoint: "http://unused".into(),
            api_key: "k".into(),
        },
    }
}

fn report() -> RunReport {
    RunReport {
        fetched: 1,
        mapped: 1,
        pushed_created: 1,
        ..RunReport::default()
    }
}

#[test]
fn overlapping_run_is_skipped_and_recorded() {
    let (release_tx, release_rx) = channel::<()>();
    let release: Arc<Mutex<Receiver<()>>> = Arc::new(Mutex::new(release_rx));
    let executor: Executor = Arc::new(move |_| {
        release.lock().unwrap().recv().unwrap();
        Ok(report())
    });
    let mut s = Scheduler::new(executor, 1);
    let t0 = Utc.with_ymd_and_hms(2018, 1, 1, 0, 0, 0).unwrap();
    let slot = s.add(activation(60), t0).unwrap();

    assert_eq!(s.tick_at(t0), vec![TickEvent::Started(slot)]);
    assert!(s.is_running(slot));
    let due = s.next_due(slot);
    assert_eq!(s.tick_at(due), vec![TickEvent::SkippedOverlap(slot)]);
    assert_eq!(s.tick_at(due), vec![], "not due again yet");

    release_tx.send(()).unwrap();
    assert_eq!(s.wait_idle(), vec![TickEvent::Finished(slot)]);
    let h = s.history(slot);
    assert_eq!(h.len(), 2);
    assert_eq!(h[0].outcome, HistoryOutcome::SkippedOverlap);
    assert_eq!(h[1].outcome, HistoryOutcome::Completed { report: report() });
    assert_eq!(s.activation(slot).last_run_report, Some(report()));
    assert!(s.activation(slot).last_run_at.is_some());

    let next = s.next_due(slot);
    release_tx.send(()).unwrap();
    assert_eq!(s.tick_at(next), vec![TickEvent::Started(slot)]);
    s.wait_idle();
    assert_eq!(s.history(slot).len(), 3);
}

#[test]
fn failures_are_recorded() {
    let executor: Executor = Arc::new(|_| Err(RunError::SourceUnreachable("down".into())));
    let mut s = Scheduler::new(executor, 2);
    let now = Utc::now();
    let slot = s.add(activation(120), now).unwrap();
    s.tick_at(now);
    s.wait_idle();
    assert!(matches!(&s.history(slot)[0].outcome, HistoryOutcome::Failed { reason } if reason.contains("down")));
    assert!(s.activation(slot).last_run_report.is_none());
}

#[test]
fn too_frequent_activation_is_refused() {
    let mut s = Scheduler::new(Arc::new(|_| Ok(RunReport::default())), 3);
    assert!(matches!(s.add(activation(59), Utc::now()), Err(RunError::ConfigInvalid(_))));
    assert!(s.is_empty());
}

#[test]
fn intervals_stay_within_jitter_bounds() {
    let mut rng = StdRng::seed_from_u64(9);
    for freq in [60u64, 61, 300, 3600, 86_400] {
        let lo = (freq as f64 * 1000.0 * (1.0 - JITTER)).floor() as i64;
        let hi = (freq as f64 * 1000.0 * (1.0 + JITTER)).ceil() as i64;
        let mut seen_below = false;
        let mut seen_above = false;
        for _ in 0..2000 {
            let d = jittered(freq, &mut rng).num_milliseconds();
            assert!((lo..=hi).contains(&d), "{freq}: {d}");
            seen_below |= d < freq as i64 * 1000;
            seen_above |= d > freq as i64 * 1000;
        }
        assert!(seen_below && seen_above);
    }

    let mut s = Scheduler::new(Arc::new(|_| Ok(RunReport::default())), 4);
    let mut now = Utc.with_ymd_and_hms(2018, 6, 1, 0, 0, 0).unwrap();
    let slot = s.add(activation(600), now).unwrap();
    for _ in 0..200 {
        assert_eq!(s.tick_at(now), vec![TickEvent::Started(slot)]);
        s.wait_idle();
        let gap = s.next_due(slot) - now;
        assert!(gap >= Duration::milliseconds(540_000) && gap <= Duration::milliseconds(660_000), "{gap}");
        now = s.next_due(slot);
    }
    assert_eq!(s.history(slot).len(), 200);
}
