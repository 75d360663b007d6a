//! CSV emission. Floats are written with 17 significant digits so that
//! parsing them back is lossless.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use twomode::analysis::{ScalingFit, SweepRecord};

pub const SWEEP_HEADER: [&str; 10] = [
    "N",
    "gamma",
    "t",
    "purity",
    "qfi_diss",
    "qfi_lower",
    "qfi_practical_lower",
    "qfi_exact",
    "negativity_ab",
    "negativity_cd",
];

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn writer(path: Option<&Path>) -> Result<csv::Writer<Box<dyn Write>>> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink))
}

pub fn write_sweep<W: Write>(out: &mut csv::Writer<W>, records: &[SweepRecord]) -> Result<()> {
    out.write_record(SWEEP_HEADER)?;
    for r in records {
        out.write_record([
            r.n.to_string(),
            num(r.gamma),
            num(r.t),
            num(r.purity),
            num(r.qfi_diss),
            num(r.qfi_lower),
            num(r.qfi_practical_lower),
            opt_num(r.qfi_exact),
            num(r.negativity_ab),
            num(r.negativity_cd),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_sweep(path: &Path) -> Result<Vec<SweepRecord>> {
    let mut reader = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let headers = reader.headers()?.clone();
    if headers.iter().ne(SWEEP_HEADER) {
        return crate::config::usage(format!("{}: not a sweep CSV (header {:?})", path.display(), headers));
    }
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row?;
        let f = |i: usize| -> Result<f64> {
            row[i]
                .parse()
                .with_context(|| format!("{}: bad number `{}`", path.display(), &row[i]))
        };
        records.push(SweepRecord {
            n: row[0].parse().with_context(|| format!("bad N `{}`", &row[0]))?,
            gamma: f(1)?,
            t: f(2)?,
            purity: f(3)?,
            qfi_diss: f(4)?,
            qfi_lower: f(5)?,
            qfi_practical_lower: f(6)?,
            qfi_exact: if row[7].is_empty() { None } else { Some(f(7)?) },
            negativity_ab: f(8)?,
            negativity_cd: f(9)?,
        });
    }
    Ok(records)
}

pub fn write_fits<W: Write>(out: &mut csv::Writer<W>, rows: &[(&str, f64, ScalingFit)]) -> Result<()> {
    out.write_record(["series", "t", "alpha", "beta", "r_squared"])?;
    for (series, t, fit) in rows {
        out.write_record([
            series.to_string(),
            num(*t),
            num(fit.alpha),
            num(fit.beta),
            num(fit.r_squared),
        ])?;
    }
    out.flush()?;
    Ok(())
}
