use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use hardy_lab::{run_experiment, with_threads, ExperimentConfig, Report};

struct Criterion {
    id: u32,
    what: &'static str,
    experiment: &'static str,
    /// Rows that must match their expectation; empty means every row.
    rows: &'static [&'static str],
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, what: "beta=1 coefficients, FFT 1e-8 and binomial 1e-10", experiment: "beta-one-remark", rows: &["coefficients_fft", "coefficients_oracle"] },
    Criterion { id: 2, what: "negative coefficients, decay slope -(beta+1) +- 0.1", experiment: "fourier-coefficients", rows: &[] },
    Criterion { id: 3, what: "identity: exponent 1 +- 0.05, not compact, unit spectrum", experiment: "identity-sanity", rows: &[] },
    Criterion { id: 4, what: "same modulus, different compactness, alpha-sufficient at p=5", experiment: "same-modulus", rows: &[] },
    Criterion { id: 5, what: "theta=4 Luecking exponents and verdicts, spectral tails", experiment: "shapiro-taylor", rows: &[] },
    Criterion { id: 6, what: "theta=2 normalized profile spread < 4", experiment: "log-power-profile", rows: &["rho_log_power_normalized"] },
    Criterion { id: 7, what: "loglog symbol compact, in no Schatten class", experiment: "no-schatten", rows: &[] },
    Criterion { id: 8, what: "psi exponent in [1.8, 2.0], alpha-sufficient at p=3", experiment: "no-schatten-same-modulus", rows: &[] },
    Criterion { id: 9, what: "z/2: Schatten sum and HS integral 4/3", experiment: "rotation-sanity", rows: &["hs_integral", "schatten_sum_p2[N=64]"] },
    Criterion { id: 10, what: "box/window decomposition and ratio spread <= 3", experiment: "box-window-equivalence", rows: &[] },
    Criterion { id: 11, what: "Poisson moments exponent -2 +- 0.2, Cauchy partial sums", experiment: "poisson-moments", rows: &[] },
    Criterion { id: 12, what: "preimage and sampled measures within x2", experiment: "preimage-vs-sampled", rows: &[] },
];

fn run(experiment: &str, out: &Path, threads: Option<usize>) -> Report {
    let mut cfg = ExperimentConfig::new(experiment);
    cfg.output_dir = Some(out.to_path_buf());
    with_threads(threads, || run_experiment(&cfg)).unwrap().unwrap_or_else(|e| panic!("{experiment}: {e}"))
}

fn check(c: &Criterion, report: &Report) -> Result<(), String> {
    let rows: Vec<_> = if c.rows.is_empty() {
        report.verdicts.iter().filter(|r| r.expected.is_some()).collect()
    } else {
        c.rows.iter().map(|n| report.verdict(n).ok_or_else(|| format!("no row {n}"))).collect::<Result<_, _>>()?
    };
    if rows.is_empty() {
        return Err("no rows".into());
    }
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| !r.confirmed())
        .map(|r| format!("{} = {:?} (expected {:?}, measured {:?})", r.name(), r.passed(), r.expected, r.measured))
        .collect();
    if bad.is_empty() { Ok(()) } else { Err(bad.join("; ")) }
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect()
}

fn determinism(out: &Path) -> Result<(), String> {
    let id = "box-window-equivalence";
    run(id, out, Some(1));
    let a = snapshot(&out.join(id));
    run(id, out, Some(4));
    let b = snapshot(&out.join(id));
    if a.keys().ne(b.keys()) {
        return Err(format!("file sets differ: {:?} vs {:?}", a.keys(), b.keys()));
    }
    let differing: Vec<_> = a.iter().filter(|(k, v)| b[*k] != **v).map(|(k, _)| k.clone()).collect();
    if differing.is_empty() { Ok(()) } else { Err(format!("bytes differ in {differing:?}")) }
}

#[test]
fn acceptance() {
    let tmp = tempfile::tempdir().unwrap();
    let mut lines = Vec::new();
    let mut failed = 0;
    let mut record = |id: u32, what: &str, r: Result<(), String>| {
        let line = match r {
            Ok(()) => format!("criterion {id:>2} PASS  {what}"),
            Err(e) => {
                failed += 1;
                format!("criterion {id:>2} FAIL  {what}: {e}")
            }
        };
        // straight to stderr so the lines show without --nocapture
        let _ = writeln!(std::io::stderr().lock(), "{line}");
        lines.push(line);
    };
    for c in CRITERIA {
        let report = run(c.experiment, tmp.path(), None);
        record(c.id, c.what, check(c, &report));
    }
    record(13, "byte-identical outputs across runs and thread counts", determinism(&tmp.path().join("det")));
    assert_eq!(failed, 0, "\n{}", lines.join("\n"));
}
