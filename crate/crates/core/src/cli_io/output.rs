use std::fs::{self, File};
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::OutputFormat;
use crate::field::{FieldRealization, Provenance};
use crate::model::GridSpec;

/// Text sidecar written next to every raw field file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawSidecar {
    pub data_file: String,
    pub byte_order: String,
    pub dtype: String,
    pub count: usize,
    pub k: usize,
    pub grid: Option<GridSpec>,
    /// Point coordinates `[x₁, …, x_k, t]`, only for scattered point sets.
    pub points: Option<Vec<Vec<f64>>>,
    pub provenance: Provenance,
}

/// Writes `field` to `path` (csv) or to `path` plus `path.json` (raw) and
/// returns the files written.
pub fn write_field(field: &FieldRealization, format: OutputFormat, path: &Path) -> io::Result<Vec<PathBuf>> {
    match format {
        OutputFormat::Csv => {
            let mut w = BufWriter::new(File::create(path)?);
            let k = field.points.k();
            let header: Vec<String> = (1..=k).map(|d| format!("x{d}")).chain(["t".into(), "value".into()]).collect();
            writeln!(w, "{}", header.join(","))?;
            for (i, v) in field.values.iter().enumerate() {
                for x in field.points.spatial(i) {
                    write!(w, "{x:.16e},")?;
                }
                writeln!(w, "{:.16e},{v:.16e}", field.points.time(i))?;
            }
            w.flush()?;
            Ok(vec![path.to_path_buf()])
        }
        OutputFormat::Raw => {
            let mut w = BufWriter::new(File::create(path)?);
            for v in &field.values {
                w.write_all(&v.to_le_bytes())?;
            }
            w.flush()?;
            let pts = &field.points;
            let sidecar = RawSidecar {
                data_file: path
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default(),
                byte_order: "little_endian".into(),
                dtype: "f64".into(),
                count: field.values.len(),
                k: pts.k(),
                grid: pts.grid().cloned(),
                points: pts.grid().is_none().then(|| {
                    (0..pts.len())
                        .map(|i| pts.spatial(i).iter().copied().chain([pts.time(i)]).collect())
                        .collect()
                }),
                provenance: field.provenance.clone(),
            };
            let side = sidecar_path(path);
            fs::write(&side, serde_json::to_string_pretty(&sidecar)? + "\n")?;
            Ok(vec![path.to_path_buf(), side])
        }
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Reads a raw little-endian `f64` file.
pub fn read_raw(path: &Path) -> io::Result<Vec<f64>> {
    let mut bytes = vec![];
    File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() % 8 != 0 {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "length is not a multiple of 8"));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect())
}
