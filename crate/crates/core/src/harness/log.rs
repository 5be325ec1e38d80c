use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::config::{ExperimentConfig, RunManifest};
use super::run::StepRecord;
use crate::{Error, Result};

pub const CSV_HEADER: &str = "replication,t,action,scheme,jnr_db,rho,ser,packet_error,cost";

/// `printf("%.9g")` formatting.
pub fn format_g9(x: f64) -> String {
    const P: i32 = 9;
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..P).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (P - 1 - exp) as usize, x)).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_csv<W: Write>(mut w: W, records: &[StepRecord]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.replication,
            r.t,
            r.action,
            r.scheme,
            format_g9(r.jnr_db),
            format_g9(r.rho),
            format_g9(r.ser),
            u8::from(r.packet_error),
            format_g9(r.cost),
        )?;
    }
    w.flush()
}

/// Writes `path` as CSV and a `.json` sidecar with the resolved config.
pub fn write_log(records: &[StepRecord], cfg: &ExperimentConfig, path: &Path) -> Result<()> {
    let io_err = |p: &Path| {
        let p = p.to_owned();
        move |source| Error::Io { path: p, source }
    };
    let file = File::create(path).map_err(io_err(path))?;
    write_csv(BufWriter::new(file), records).map_err(io_err(path))?;

    let sidecar = path.with_extension("json");
    let manifest = RunManifest::new(cfg.clone());
    let json = serde_json::to_string_pretty(&manifest).map_err(|source| Error::Json {
        path: sidecar.clone(),
        source,
    })?;
    std::fs::write(&sidecar, json + "\n").map_err(io_err(&sidecar))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g9_matches_printf() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (10.0, "10"),
            (0.1, "0.1"),
            (0.0786496035, "0.0786496035"),
            (0.078649603525142, "0.0786496035"),
            (1e-4, "0.0001"),
            (1.5e-5, "1.5e-05"),
            (123456789.0, "123456789"),
            (1234567890.0, "1.23456789e+09"),
            (-2.5, "-2.5"),
            (1.0 / 3.0, "0.333333333"),
            (9.9999999999, "10"),
            (0.001, "0.001"),
        ];
        for (x, want) in cases {
            assert_eq!(format_g9(x), want, "{x}");
        }
    }

    #[test]
    fn empty_log_is_header_only() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CSV_HEADER}\n"));
    }
}
