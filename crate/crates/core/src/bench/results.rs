use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const RESULT_HEADER: [&str; 11] =
    ["family", "n", "k", "algorithm", "param", "func_idx", "trial_idx", "seed", "t_hit", "capped", "wall_ns"];

/// One walk of one walker. Capped runs record the cap as `t_hit`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRow {
    pub family: String,
    pub n: usize,
    pub k: usize,
    pub algorithm: String,
    pub param: String,
    pub func_idx: usize,
    pub trial_idx: usize,
    pub seed: u64,
    pub t_hit: u64,
    pub capped: bool,
    pub wall_ns: u64,
}

pub fn write_results_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(RESULT_HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results_csv<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?;
    if header.iter().ne(RESULT_HEADER) {
        return Err(Error::Parse { line: 1, message: format!("expected header {}", RESULT_HEADER.join(",")) });
    }
    let rows = rd.deserialize().collect::<std::result::Result<Vec<ResultRow>, _>>()?;
    if rows.is_empty() {
        return Err(Error::InvalidArgument("results file has no rows".into()));
    }
    Ok(rows)
}

/// Hitting-time statistics for one (family, k, walker) cell. Capped runs
/// enter the mean and median at the cap value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub family: String,
    pub n: usize,
    pub k: usize,
    pub algorithm: String,
    pub param: String,
    pub runs: usize,
    pub mean: f64,
    pub median: f64,
    pub cap_rate: f64,
}

impl SummaryRow {
    /// `algorithm` with its parameter, e.g. `exponential(1)`.
    pub fn label(&self) -> String {
        if self.param.is_empty() {
            self.algorithm.clone()
        } else {
            format!("{}({})", self.algorithm, self.param)
        }
    }
}

/// Group rows by (family, k, algorithm, param) in order of first appearance.
///
/// Rows of the ε-fitted Laplacian walker carry a per-function parameter and
/// are pooled under an empty one.
pub fn summarize(rows: &[ResultRow]) -> Vec<SummaryRow> {
    let mut keys: Vec<(String, usize, usize, String, String)> = Vec::new();
    let mut samples: Vec<Vec<&ResultRow>> = Vec::new();
    for r in rows {
        let param = if r.algorithm == "laplacian_eps" { String::new() } else { r.param.clone() };
        let key = (r.family.clone(), r.n, r.k, r.algorithm.clone(), param);
        match keys.iter().position(|k| *k == key) {
            Some(i) => samples[i].push(r),
            None => {
                keys.push(key);
                samples.push(vec![r]);
            }
        }
    }
    keys.into_iter()
        .zip(samples)
        .map(|((family, n, k, algorithm, param), group)| {
            let mut t: Vec<u64> = group.iter().map(|r| r.t_hit).collect();
            t.sort_unstable();
            let runs = t.len();
            let mean = t.iter().map(|&x| x as f64).sum::<f64>() / runs as f64;
            let median = if runs % 2 == 1 {
                t[runs / 2] as f64
            } else {
                0.5 * (t[runs / 2 - 1] + t[runs / 2]) as f64
            };
            let cap_rate = group.iter().filter(|r| r.capped).count() as f64 / runs as f64;
            SummaryRow { family, n, k, algorithm, param, runs, mean, median, cap_rate }
        })
        .collect()
}

pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(alg: &str, k: usize, t: u64, capped: bool) -> ResultRow {
        ResultRow {
            family: "grid".into(),
            n: 64,
            k,
            algorithm: alg.into(),
            param: String::new(),
            func_idx: 0,
            trial_idx: 0,
            seed: 1,
            t_hit: t,
            capped,
            wall_ns: 0,
        }
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![row("vanilla", 3, 10, false), row("laplacian", 3, 100, true)];
        let mut buf = Vec::new();
        write_results_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("family,n,k,algorithm,param,func_idx,trial_idx,seed,t_hit,capped,wall_ns\n"));
        assert!(text.contains("grid,64,3,laplacian,,0,0,1,100,true,0"));
        assert_eq!(read_results_csv(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn bad_inputs_rejected() {
        assert!(read_results_csv("a,b\n1,2\n".as_bytes()).is_err());
        let mut buf = Vec::new();
        write_results_csv(&[], &mut buf).unwrap();
        assert!(read_results_csv(&buf[..]).is_err());
    }

    #[test]
    fn summary_statistics() {
        let rows = vec![
            row("vanilla", 3, 4, false),
            row("vanilla", 3, 10, true),
            row("vanilla", 3, 1, false),
            row("vanilla", 3, 7, false),
            row("laplacian", 3, 2, false),
        ];
        let s = summarize(&rows);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].runs, 4);
        assert_eq!(s[0].mean, 5.5);
        assert_eq!(s[0].median, 5.5);
        assert_eq!(s[0].cap_rate, 0.25);
        assert_eq!(s[1].median, 2.0);
        assert_eq!(s[1].label(), "laplacian");
    }
}
