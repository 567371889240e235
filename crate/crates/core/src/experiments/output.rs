use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// A row type with a fixed CSV schema.
pub trait Tabular: Serialize {
    const HEADER: &'static [&'static str];
    fn record(&self) -> Vec<String>;
}

/// RFC 4180 CSV with a header row and `\n` line endings.
pub fn render_csv<T: Tabular>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(T::HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

pub fn render_json<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(rows)?;
    out.push(b'\n');
    Ok(out)
}

pub fn write_output<T: Tabular>(rows: &[T], format: Format, path: &Path) -> Result<()> {
    let bytes = match format {
        Format::Csv => render_csv(rows)?,
        Format::Json => render_json(rows)?,
    };
    let mut f = BufWriter::new(File::create(path)?);
    f.write_all(&bytes)?;
    f.flush()?;
    Ok(())
}
