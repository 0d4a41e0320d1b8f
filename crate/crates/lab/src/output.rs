//! Plot-ready CSV files: RFC 4180, CRLF line ends, floats with 18
//! significant digits.

use std::collections::BTreeMap;
use std::path::Path;

use hardy_core::measure::{unsigned_sector, CarlesonProfile, PullbackHistogram};
use hardy_core::operator::{OperatorMatrix, SingularSpectrum};
use hardy_core::symbols::BoundaryTrace;

use crate::error::{LabError, LabResult};

/// `{:.17e}`: one digit before the point, seventeen after.
pub fn num(x: f64) -> String {
    format!("{x:.17e}")
}

/// Writes a header and rows of pre-formatted fields.
pub fn write_rows<I>(path: &Path, header: &[&str], rows: I) -> LabResult<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let file = std::fs::File::create(path).map_err(|e| LabError::io(path, e))?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(std::io::BufWriter::new(file));
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| LabError::io(path, e))?;
    Ok(())
}

pub fn write_trace(path: &Path, trace: &BoundaryTrace) -> LabResult<()> {
    let rows = (0..trace.len()).map(|i| {
        let v = trace.value(i);
        vec![num(trace.nodes()[i]), num(v.re), num(v.im), num(trace.weights()[i])]
    });
    write_rows(path, &["t", "re", "im", "weight"], rows)
}

pub fn write_profile(path: &Path, profile: &CarlesonProfile) -> LabResult<()> {
    let rows = profile.levels.iter().map(|l| {
        vec![l.n.to_string(), num(l.h), num(l.rho_hat), l.centers_tested.to_string(), l.effective_samples.to_string()]
    });
    write_rows(path, &["n", "h", "rho_hat", "centers_tested", "effective_samples"], rows)
}

/// Nonzero sectors of levels `0..=min(depth, max_level)`, ordered by `(n, j)`.
pub fn write_histogram(path: &Path, hist: &PullbackHistogram, max_level: u32) -> LabResult<()> {
    let mut rows = Vec::new();
    for n in 0..=hist.depth().min(max_level) {
        let mut cells: BTreeMap<u64, (f64, f64)> = BTreeMap::new();
        for (s, m) in hist.box_runs(n).sectors() {
            cells.entry(unsigned_sector(n, s)).or_default().0 = m;
        }
        for (s, m) in hist.window_runs(n).sectors() {
            cells.entry(unsigned_sector(n, s)).or_default().1 = m;
        }
        rows.extend(cells.into_iter().filter(|(_, (b, w))| *b > 0.0 || *w > 0.0).map(|(j, (b, w))| {
            vec![n.to_string(), j.to_string(), num(b), num(w)]
        }));
    }
    write_rows(path, &["n", "j", "box_mass", "window_mass"], rows)
}

pub fn write_spectrum(path: &Path, spectrum: &SingularSpectrum) -> LabResult<()> {
    let rows = spectrum.values.iter().enumerate().map(|(k, &s)| vec![(k + 1).to_string(), num(s)]);
    write_rows(path, &["k", "sigma_k"], rows)
}

pub fn write_matrix(path: &Path, a: &OperatorMatrix) -> LabResult<()> {
    let n = a.order();
    let rows = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).map(|(r, c)| {
        let v = a.entry(r, c);
        vec![r.to_string(), c.to_string(), num(v.re), num(v.im)]
    });
    write_rows(path, &["n", "m", "re", "im"], rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eighteen_digits() {
        assert_eq!(num(1.0 / 3.0), "3.33333333333333315e-1");
        assert_eq!(num(0.0), "0.00000000000000000e0");
        assert_eq!(num(-0.15625), "-1.56250000000000000e-1");
        assert_eq!(num(f64::MIN_POSITIVE), "2.22507385850720138e-308");
    }

    #[test]
    fn crlf_and_quoting() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.csv");
        write_rows(&p, &["a", "b"], vec![vec!["1".into(), "x,y".into()]]).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "a,b\r\n1,\"x,y\"\r\n");
    }
}
