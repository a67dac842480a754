//! File-level entry point: picks a parser from the file name and
//! transparently inflates gzip.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use flate2::read::GzDecoder;

use super::{parse_csv, parse_xes, ColumnMap, EventLog, IngestError, IngestOptions};

/// Reads `.xes`, `.csv`, or either with a `.gz` suffix.
///
/// `columns` only matters for delimited input; `None` means the default
/// header names.
pub fn read_log_file(
    path: &Path,
    opts: &IngestOptions,
    columns: Option<&ColumnMap>,
) -> Result<EventLog, IngestError> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().to_string())
        .unwrap_or_default();
    let lower = name.to_lowercase();
    let (stem, compressed) = match lower.strip_suffix(".gz") {
        Some(stem) => (stem.to_string(), true),
        None => (lower, false),
    };

    let file = File::open(path)?;
    let default_columns = ColumnMap::default();
    let columns = columns.unwrap_or(&default_columns);

    let mut log = if stem.ends_with(".xes") {
        if compressed {
            parse_xes(BufReader::new(GzDecoder::new(file)), opts)?
        } else {
            parse_xes(BufReader::new(file), opts)?
        }
    } else if stem.ends_with(".csv") {
        if compressed {
            parse_csv(BufReader::new(GzDecoder::new(file)), columns, opts)?
        } else {
            parse_csv(BufReader::new(file), columns, opts)?
        }
    } else {
        return Err(IngestError::UnsupportedFormat(name));
    };

    log.source_meta
        .insert("source_file".to_string(), name.clone());
    if compressed {
        log.source_meta
            .insert("compressed".to_string(), "gzip".to_string());
    }
    Ok(log)
}
