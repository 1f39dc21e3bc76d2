//! JSON-lines trace files: a header line, then one snapshot per line.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{SampleTrace, SamplerConfig};
use crate::error::{Error, Result};
use crate::graph::{Graph, Group};

pub const TRACE_FORMAT: &str = "sbfc-trace/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub format: String,
    pub config: SamplerConfig,
    pub chains: usize,
    pub rng: String,
    pub feature_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iter: usize,
    pub log_score: f64,
    pub groups: Vec<Group>,
    pub parents: Vec<Option<usize>>,
}

pub fn write_trace<W: Write>(mut w: W, trace: &SampleTrace) -> Result<()> {
    let header = TraceHeader {
        format: TRACE_FORMAT.to_string(),
        config: trace.config,
        chains: trace.chains,
        rng: trace.rng.clone(),
        feature_names: trace.feature_names.clone(),
    };
    serde_json::to_writer(&mut w, &header)?;
    w.write_all(b"\n")?;
    for ((g, &s), &it) in trace.samples.iter().zip(&trace.log_scores).zip(&trace.iterations) {
        let rec = TraceRecord { iter: it, log_score: s, groups: g.groups().to_vec(), parents: g.parents().to_vec() };
        serde_json::to_writer(&mut w, &rec)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace<R: BufRead>(r: R) -> Result<SampleTrace> {
    let mut lines = r.lines().enumerate().filter(|(_, l)| l.as_ref().map_or(true, |l| !l.trim().is_empty()));
    let parse_err = |line: usize, e: &dyn std::fmt::Display| Error::Parse { line: line + 1, message: e.to_string() };
    let (_, first) = lines.next().ok_or_else(|| Error::Inference("trace file is empty".into()))?;
    let header: TraceHeader = serde_json::from_str(&first?).map_err(|e| parse_err(0, &e))?;
    if header.format != TRACE_FORMAT {
        return Err(Error::Parse { line: 1, message: format!("unknown trace format {:?}", header.format) });
    }
    let d = header.feature_names.len();
    let mut trace = SampleTrace {
        samples: Vec::new(),
        log_scores: Vec::new(),
        iterations: Vec::new(),
        config: header.config,
        chains: header.chains,
        rng: header.rng,
        feature_names: header.feature_names,
    };
    for (i, line) in lines {
        let rec: TraceRecord = serde_json::from_str(&line?).map_err(|e| parse_err(i, &e))?;
        if rec.groups.len() != d {
            return Err(Error::Validation(format!("line {}: {} nodes, header names {d}", i + 1, rec.groups.len())));
        }
        let g = Graph::from_parts(rec.parents, rec.groups).map_err(|e| parse_err(i, &e))?;
        trace.samples.push(g);
        trace.log_scores.push(rec.log_score);
        trace.iterations.push(rec.iter);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::synthetic::chained_dataset;
    use crate::sampler::run_chain;
    use crate::score::Hyperparams;

    #[test]
    fn round_trip_is_exact() {
        let ds = chained_dataset(40, 4, 2, 1);
        let hp = Hyperparams::for_data(&ds, 5.0).unwrap();
        let cfg = SamplerConfig { iterations: 100, thin: 10, burnin_fraction: 0.2, switch_k: 10, seed: 2 };
        let t = run_chain(&ds, &hp, &cfg).unwrap();
        let mut buf = Vec::new();
        write_trace(&mut buf, &t).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 1 + t.len());
        assert!(text.lines().nth(1).unwrap().starts_with(r#"{"iter":30,"log_score":"#));
        let back = read_trace(buf.as_slice()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_trace("".as_bytes()).is_err());
        assert!(read_trace("{\"format\":\"x\"}\n".as_bytes()).is_err());
    }
}
