//! Parallel sampling campaigns.
//!
//! Sample indices are cut into fixed-size blocks independent of the thread
//! count. Each block builds its own accumulators and dump lines; blocks are
//! merged in index order, so every output is identical for any `--threads`.

use std::ops::Range;

use forestlab_core::littlewood::{CertificateAccumulator, CertificateWindow, LittlewoodCertificate};
use forestlab_core::samplers::PreparedSampler;
use forestlab_core::stats::{EmpiricalForestLaw, LawAccumulator, LawProbe};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::formats::DumpLine;

pub const BLOCK: u64 = 256;

/// Runs `f` on consecutive index blocks of `0..n` on a pool of `threads`
/// workers (0 = all cores) and returns the block results in index order.
pub fn run_blocks<A, F>(threads: usize, n: u64, f: F) -> Result<Vec<A>>
where
    A: Send,
    F: Fn(Range<u64>) -> Result<A> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
    let blocks: Vec<Range<u64>> = (0..n.div_ceil(BLOCK)).map(|b| b * BLOCK..((b + 1) * BLOCK).min(n)).collect();
    pool.install(|| blocks.into_par_iter().map(&f).collect())
}

#[derive(Debug, Clone, Default)]
pub struct CampaignOptions {
    /// Radius of the certificate window, if a certificate is wanted.
    pub certificate_window: Option<u32>,
    pub dump: bool,
    pub threads: usize,
}

#[derive(Debug, Clone)]
pub struct CampaignOutcome {
    pub law: EmpiricalForestLaw,
    pub certificate: Option<LittlewoodCertificate>,
    /// NDJSON, one line per sample in index order.
    pub dump: Option<String>,
}

struct Block {
    law: LawAccumulator,
    cert: CertificateAccumulator,
    dump: String,
}

/// Samples `0..n` of `seed` once and feeds every requested consumer.
pub fn run_campaign(sampler: &PreparedSampler<'_>, n: u64, seed: u64, opts: &CampaignOptions) -> Result<CampaignOutcome> {
    if n == 0 {
        return Err(forestlab_core::Error::Validation("sample count N must be at least 1".into()).into());
    }
    let probe = LawProbe::new(sampler)?;
    let window = opts.certificate_window.map(|w| CertificateWindow::new(sampler, w, None)).transpose()?;
    let host = sampler.host().graph();
    let model = sampler.config().model.to_string();
    let blocks = run_blocks(opts.threads, n, |range| {
        let mut b = Block { law: LawAccumulator::new(&probe), cert: CertificateAccumulator::default(), dump: String::new() };
        for i in range {
            let s = sampler.sample(seed, i)?;
            b.law.observe(&probe, &s);
            if let Some(w) = &window {
                w.observe(&mut b.cert, &s)?;
            }
            if opts.dump {
                b.dump.push_str(&DumpLine::new(host, &model, &s).to_line());
            }
        }
        Ok(b)
    })?;
    let mut law = LawAccumulator::new(&probe);
    let mut cert = CertificateAccumulator::default();
    let mut dump = String::new();
    for b in blocks {
        law.merge(&b.law);
        cert.merge(&b.cert);
        dump.push_str(&b.dump);
    }
    let certificate = window.map(|w| w.finish(&cert)).transpose()?;
    Ok(CampaignOutcome {
        law: EmpiricalForestLaw::from_accumulator(&probe, &law)?,
        certificate,
        dump: opts.dump.then_some(dump),
    })
}
