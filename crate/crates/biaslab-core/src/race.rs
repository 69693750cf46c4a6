//! Race time series S_k(Q;q,a₁) − S_k(Q;q,a₂): streaming evaluation,
//! normalized error terms, sign-change detection, and CSV output.
//!
//! Both partial sums come from a single pass sharing the deterministic
//! block accumulation of `arith::summatory`, so a race point's s1 equals
//! the standalone summatory value bit for bit.

use std::io::{self, Write};

use serde::Serialize;

use crate::arith::{first_member, ik_value, FactorizationTable};
use crate::error::{Error, Result};
use crate::euler::ConstantsReport;
use crate::sum::{map_blocks, KahanSum, BLOCK_LEN};

/// Configuration of one race. The default normalization exponent
/// 1 + 1/(2k) is the oscillation-size exponent; override it to explore
/// other Θ hypotheses.
#[derive(Debug, Clone, Serialize)]
pub struct RaceConfig {
    pub q: u64,
    pub a1: u64,
    pub a2: u64,
    pub k: u32,
    pub q_max: u64,
    pub stride: u64,
    pub normalization_exponent: f64,
}

impl RaceConfig {
    pub fn new(q: u64, a1: u64, a2: u64, k: u32, q_max: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("modulus must be ≥ 1".into()));
        }
        if k < 2 {
            return Err(Error::InvalidArgument(format!("order k must be ≥ 2, got {k}")));
        }
        if a1 % q == a2 % q {
            return Err(Error::InvalidArgument(format!(
                "race requires a1 ≢ a2 (mod q): {a1} ≡ {a2} (mod {q})"
            )));
        }
        let stride = (q_max / 1000).max(1);
        Ok(RaceConfig {
            q,
            a1: a1 % q,
            a2: a2 % q,
            k,
            q_max,
            stride,
            normalization_exponent: 1.0 + 1.0 / (2.0 * k as f64),
        })
    }

    pub fn with_stride(mut self, stride: u64) -> Result<Self> {
        if stride == 0 {
            return Err(Error::InvalidArgument("stride must be ≥ 1".into()));
        }
        self.stride = stride;
        Ok(self)
    }

    pub fn with_exponent(mut self, exponent: f64) -> Self {
        self.normalization_exponent = exponent;
        self
    }
}

/// One sampled point of the race.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RacePoint {
    pub cutoff: u64,
    pub s1: f64,
    pub s2: f64,
    pub diff: f64,
    pub normalized: f64,
}

struct BlockOut {
    s1: f64,
    s2: f64,
    count1: u64,
    count2: u64,
    // (sample index, within-block partial sums at that cutoff)
    samples: Vec<(usize, f64, f64)>,
}

/// Stream both class sums to `q_max`, emitting one point per stride.
pub fn run_race(cfg: &RaceConfig, table: &FactorizationTable) -> Result<Vec<RacePoint>> {
    if cfg.q_max > table.limit() {
        return Err(Error::OutOfRange(format!(
            "race cutoff {} exceeds sieve limit {}",
            cfg.q_max,
            table.limit()
        )));
    }
    if cfg.q == 0 || cfg.a1 == cfg.a2 {
        return Err(Error::InvalidArgument("invalid race configuration".into()));
    }
    let samples: Vec<u64> = (1..=cfg.q_max / cfg.stride).map(|j| j * cfg.stride).collect();
    if cfg.q_max == 0 {
        return Ok(Vec::new());
    }

    let (q, a1, a2, k) = (cfg.q, cfg.a1, cfg.a2, cfg.k);
    let last_block = (cfg.q_max - 1) / BLOCK_LEN;
    let outs = map_blocks(last_block, |idx| {
        let lo = idx * BLOCK_LEN + 1;
        let hi = cfg.q_max.min((idx + 1) * BLOCK_LEN);
        // Sample indices falling inside this block.
        let first = (lo - 1) / cfg.stride; // samples strictly below lo
        let mut acc1 = KahanSum::new();
        let mut acc2 = KahanSum::new();
        let mut n1 = first_member(lo, q, a1);
        let mut n2 = first_member(lo, q, a2);
        let (mut count1, mut count2) = (0u64, 0u64);
        let mut sample_rows = Vec::new();
        let mut j = first + 1;
        while j * cfg.stride <= hi {
            let cut = j * cfg.stride;
            while n1 <= cut {
                acc1.add(ik_value(n1, k, table));
                count1 += 1;
                n1 += q;
            }
            while n2 <= cut {
                acc2.add(ik_value(n2, k, table));
                count2 += 1;
                n2 += q;
            }
            sample_rows.push((j as usize - 1, acc1.value(), acc2.value()));
            j += 1;
        }
        while n1 <= hi {
            acc1.add(ik_value(n1, k, table));
            count1 += 1;
            n1 += q;
        }
        while n2 <= hi {
            acc2.add(ik_value(n2, k, table));
            count2 += 1;
            n2 += q;
        }
        BlockOut {
            s1: acc1.value(),
            s2: acc2.value(),
            count1,
            count2,
            samples: sample_rows,
        }
    });

    let mut points = vec![
        RacePoint {
            cutoff: 0,
            s1: 0.0,
            s2: 0.0,
            diff: 0.0,
            normalized: 0.0,
        };
        samples.len()
    ];
    let mut prefix1 = KahanSum::new();
    let mut prefix2 = KahanSum::new();
    for out in outs {
        for &(si, p1, p2) in &out.samples {
            let mut t1 = prefix1;
            t1.add(p1);
            let mut t2 = prefix2;
            t2.add(p2);
            let cutoff = samples[si];
            let s1 = t1.value();
            let s2 = t2.value();
            let diff = s1 - s2;
            points[si] = RacePoint {
                cutoff,
                s1,
                s2,
                diff,
                normalized: diff / (cutoff as f64).powf(cfg.normalization_exponent),
            };
        }
        prefix1.add(out.s1);
        prefix2.add(out.s2);
        let _ = (out.count1, out.count2);
    }
    Ok(points)
}

/// Sign-change record over a sampled race.
#[derive(Debug, Clone, Serialize)]
pub struct SignChangeReport {
    pub changes: Vec<u64>,
    pub count: usize,
    pub max_normalized: f64,
    pub min_normalized: f64,
}

/// Scan (cutoff, diff) pairs; a change is recorded at the first point whose
/// sign strictly opposes the last nonzero sign. Zeros carry the previous
/// sign and never record a change by themselves.
pub fn detect_sign_changes_in<I: IntoIterator<Item = (u64, f64)>>(seq: I) -> Vec<u64> {
    let mut changes = Vec::new();
    let mut last = 0i8;
    for (cutoff, diff) in seq {
        let sign = if diff > 0.0 {
            1
        } else if diff < 0.0 {
            -1
        } else {
            0
        };
        if sign != 0 {
            if last != 0 && sign != last {
                changes.push(cutoff);
            }
            last = sign;
        }
    }
    changes
}

pub fn detect_sign_changes(points: &[RacePoint]) -> SignChangeReport {
    let changes = detect_sign_changes_in(points.iter().map(|p| (p.cutoff, p.diff)));
    let max_normalized = points.iter().map(|p| p.normalized).fold(0.0, f64::max);
    let min_normalized = points.iter().map(|p| p.normalized).fold(0.0, f64::min);
    SignChangeReport {
        count: changes.len(),
        changes,
        max_normalized,
        min_normalized,
    }
}

/// Empirical constant in the ≫ log T oscillation count: count / log T.
pub fn oscillation_stats(report: &SignChangeReport, t: f64) -> Result<f64> {
    if t <= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "oscillation statistic requires T > 1, got {t}"
        )));
    }
    Ok(report.count as f64 / t.ln())
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// S_k(Q;q,a) − c(q,a)·Q², the quantity whose oscillation the Ω-results
/// concern. Uses c_unit for unit classes, c_zero for a = 0 mod prime q.
pub fn error_term(
    cutoff: u64,
    q: u64,
    a: u64,
    k: u32,
    constants: &ConstantsReport,
    table: &FactorizationTable,
) -> Result<f64> {
    if constants.q != q || constants.k != k {
        return Err(Error::InvalidArgument(
            "constants report does not match the requested (q, k)".into(),
        ));
    }
    let a = a % q.max(1);
    let c = if q == 1 || gcd(a, q) == 1 {
        constants.c_unit
    } else if a == 0 {
        constants.c_zero.ok_or_else(|| {
            Error::Unsupported(format!("zero-class constant unavailable for q={q}"))
        })?
    } else {
        return Err(Error::Unsupported(format!(
            "no main-term constant for the non-unit class {a} mod {q}"
        )));
    };
    let s = crate::arith::summatory(cutoff, q, a, k, table)?;
    Ok(s.sum - c * (cutoff as f64) * (cutoff as f64))
}

/// CSV with a '#' manifest line: '.' decimal, 15 significant digits.
pub fn write_csv<W: Write>(mut w: W, cfg: &RaceConfig, points: &[RacePoint]) -> io::Result<()> {
    writeln!(
        w,
        "# race q={} a1={} a2={} k={} qmax={} stride={} normalization_exponent={:.14e}",
        cfg.q, cfg.a1, cfg.a2, cfg.k, cfg.q_max, cfg.stride, cfg.normalization_exponent
    )?;
    writeln!(w, "Q,s1,s2,diff,normalized")?;
    for p in points {
        writeln!(
            w,
            "{},{:.14e},{:.14e},{:.14e},{:.14e}",
            p.cutoff, p.s1, p.s2, p.diff, p.normalized
        )?;
    }
    Ok(())
}
