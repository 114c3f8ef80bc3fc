//! Scaling measurements: setup, proving and verification cost as the
//! payload count grows.
//!
//! Setup and proving are expected to grow linearly in the payload count
//! (the hash circuit dominates and there is one hash per payload), while
//! verification time and proof size stay flat. `run_scaling` measures a
//! real issue-prove-verify cycle per count and `linearity` condenses the
//! result into per-payload increments.

use crate::encoding::SLOTS_PER_PAYLOAD;
use crate::error::{Error, Result};
use crate::issuer::{self, CredentialSchema, IssuerKeypair};
use crate::prover::{create_context, Statement};
use crate::verifier::verify_context;
use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

/// Measurements for one payload count.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub payloads: u16,
    /// One-shot trusted-setup wall time.
    pub setup_ms: f64,
    /// Median proof-creation wall time over `reps` runs.
    pub prove_ms: f64,
    /// Median verification wall time over `reps` runs (after one warmup).
    pub verify_ms: f64,
    pub pk_bytes: u64,
    pub vk_bytes: u64,
    pub proof_bytes: u64,
    pub reps: u32,
}

/// A full scaling run.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    pub host: String,
}

/// Per-payload increments of one metric across consecutive counts.
#[derive(Clone, Debug)]
pub struct LinearitySummary {
    pub metric: &'static str,
    pub increments: Vec<f64>,
    pub mean_increment: f64,
    /// Largest relative deviation of any increment from the mean.
    pub max_rel_deviation: f64,
}

fn host_fingerprint() -> String {
    let cores = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(0);
    format!("{}-{} cores={cores}", std::env::consts::OS, std::env::consts::ARCH)
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).expect("durations are finite"));
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) / 2.0
    }
}

fn ms(from: Instant) -> f64 {
    from.elapsed().as_secs_f64() * 1e3
}

/// Measure setup, prove and verify for each payload count in `counts`.
///
/// `counts` must be strictly increasing (the linearity summary reads
/// consecutive differences) and `reps` at least 3. Each count runs a full
/// cycle: fresh issuer, unseeded setup, one credential, a one-clause
/// statement, `reps` proofs and `reps` verifications.
pub fn run_scaling(counts: &[u16], reps: u32) -> Result<BenchReport> {
    if reps < 3 {
        return Err(Error::Range(format!("repetitions must be >= 3, got {reps}")));
    }
    if counts.is_empty() {
        return Err(Error::Range("no payload counts given".into()));
    }
    if !counts.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Range(
            "payload counts must be strictly increasing".into(),
        ));
    }
    if let Some(&bad) = counts
        .iter()
        .find(|c| !(crate::encoding::MIN_PAYLOADS..=crate::encoding::MAX_PAYLOADS).contains(c))
    {
        return Err(Error::Range(format!(
            "payload count {bad} outside [{}, {}]",
            crate::encoding::MIN_PAYLOADS,
            crate::encoding::MAX_PAYLOADS
        )));
    }

    let mut records = Vec::with_capacity(counts.len());
    for &payloads in counts {
        let keypair = IssuerKeypair::generate();
        let labels = (0..payloads as usize * SLOTS_PER_PAYLOAD - 1)
            .map(|i| format!("attr{i}"))
            .collect();
        let schema = CredentialSchema::new("bench/scaling", keypair.issuer_id(), payloads, labels)?;

        let started = Instant::now();
        let (_, pk, vk) = issuer::bootstrap_issuer(&schema, None)?;
        let setup_ms = ms(started);

        let values: BTreeMap<String, u64> = schema.slot_labels[..schema.nonce_slot()]
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), 100 + i as u64))
            .collect();
        let credential = issuer::issue_credential(&keypair, &schema, &values)?;
        let statement = Statement::parse("attr0 >= 100", &schema)?;

        let mut prove_samples = Vec::with_capacity(reps as usize);
        let mut context = None;
        for _ in 0..reps {
            let started = Instant::now();
            let ctx = create_context(&pk, &credential, &statement)?;
            prove_samples.push(ms(started));
            context = Some(ctx);
        }
        let context = context.expect("reps >= 3 produced at least one context");

        let issuer_key = keypair.public();
        let mut verify_samples = Vec::with_capacity(reps as usize);
        for i in 0..=reps {
            let started = Instant::now();
            let report = verify_context(&vk, &issuer_key, &context, &statement)?;
            if !report.overall() {
                return Err(Error::Backend(format!(
                    "benchmark context failed verification: {:?}",
                    report.failure_detail
                )));
            }
            if i > 0 {
                // First run warms caches and page tables; discard it.
                verify_samples.push(ms(started));
            }
        }

        records.push(BenchRecord {
            payloads,
            setup_ms,
            prove_ms: median(&mut prove_samples),
            verify_ms: median(&mut verify_samples),
            pk_bytes: pk.to_bytes().len() as u64,
            vk_bytes: vk.to_bytes().len() as u64,
            proof_bytes: context.proof().to_bytes().len() as u64,
            reps,
        });
    }
    Ok(BenchReport {
        records,
        host: host_fingerprint(),
    })
}

/// Per-payload increments for the metrics expected to scale linearly.
pub fn linearity(report: &BenchReport) -> Vec<LinearitySummary> {
    let metrics: [(&'static str, fn(&BenchRecord) -> f64); 3] = [
        ("setup_ms", |r| r.setup_ms),
        ("prove_ms", |r| r.prove_ms),
        ("pk_bytes", |r| r.pk_bytes as f64),
    ];
    metrics
        .iter()
        .map(|(name, get)| {
            let increments: Vec<f64> = report
                .records
                .windows(2)
                .map(|w| {
                    let payload_step = f64::from(w[1].payloads - w[0].payloads);
                    (get(&w[1]) - get(&w[0])) / payload_step
                })
                .collect();
            let mean = increments.iter().sum::<f64>() / increments.len().max(1) as f64;
            let max_rel_deviation = increments
                .iter()
                .map(|i| ((i - mean) / mean).abs())
                .fold(0.0, f64::max);
            LinearitySummary {
                metric: name,
                increments,
                mean_increment: mean,
                max_rel_deviation,
            }
        })
        .collect()
}

/// Write the report as CSV: a fixed header, one row per payload count, and
/// `#`-prefixed trailer lines with the host fingerprint and the linearity
/// summary.
pub fn write_csv<W: Write>(report: &BenchReport, mut w: W) -> std::io::Result<()> {
    writeln!(
        w,
        "payloads,setup_ms,prove_ms,verify_ms,pk_bytes,vk_bytes,proof_bytes,reps"
    )?;
    for r in &report.records {
        writeln!(
            w,
            "{},{:.3},{:.3},{:.3},{},{},{},{}",
            r.payloads, r.setup_ms, r.prove_ms, r.verify_ms, r.pk_bytes, r.vk_bytes,
            r.proof_bytes, r.reps
        )?;
    }
    writeln!(w, "# host: {}", report.host)?;
    if report.records.len() >= 2 {
        for summary in linearity(report) {
            let increments = summary
                .increments
                .iter()
                .map(|i| format!("{i:.3}"))
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(
                w,
                "# linearity {}: per_payload_increments=[{}] mean={:.3} max_rel_dev={:.3}",
                summary.metric, increments, summary.mean_increment, summary.max_rel_deviation
            )?;
        }
    }
    Ok(())
}
