//! Flat-file formats: daily bars, book snapshots and basket positions, all
//! RFC-4180 CSV in UTF-8, plus the ADV helper and a JSON dataset manifest.
//!
//! Every parse error carries the 1-based line number of the offending record
//! and, where there is one, the column name. Files read through the `read_*`
//! helpers additionally carry the path.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Side};
use crate::measures::{DailyBar, LiquidityIndex, LiquidityKind};
use crate::orderbook::{AdvContext, BookLevel, OrderBookSnapshot};
use crate::portfolio::BasketPosition;

pub const BAR_HEADER: [&str; 6] = ["date", "open", "high", "low", "close", "volume"];
pub const SNAPSHOT_HEADER: [&str; 5] = ["timestamp", "side", "level", "price", "volume"];
pub const POSITION_HEADER: [&str; 3] = ["instrument", "beta", "lix"];

/// Default trailing window for average daily volume, about one trading month.
pub const DEFAULT_ADV_WINDOW: u32 = 20;

/// One CSV record with its line number, fields already UTF-8 checked.
struct Row {
    line: u64,
    fields: Vec<String>,
}

impl Row {
    fn field(&self, idx: usize) -> &str {
        self.fields[idx].trim()
    }

    fn parse_err(&self, column: &str, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: column.to_string(),
            message: message.into(),
        }
    }

    fn number(&self, idx: usize, header: &[&str]) -> Result<f64> {
        let raw = self.field(idx);
        let v: f64 = raw
            .parse()
            .map_err(|_| self.parse_err(header[idx], format!("`{raw}` is not a number")))?;
        if !v.is_finite() {
            return Err(self.parse_err(header[idx], "value is not finite"));
        }
        Ok(v)
    }
}

/// Reads all records, checking the header and the column count of each row.
fn read_rows<R: Read>(reader: R, header: &[&str]) -> Result<Vec<Row>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut rows = Vec::new();
    let mut record = csv::ByteRecord::new();
    let mut seen_header = false;
    loop {
        let more = rdr.read_byte_record(&mut record).map_err(|e| csv_error(&e))?;
        if !more {
            break;
        }
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let mut fields = Vec::with_capacity(record.len());
        for (i, raw) in record.iter().enumerate() {
            let s = std::str::from_utf8(raw).map_err(|_| Error::Parse {
                line,
                column: header.get(i).copied().unwrap_or("?").to_string(),
                message: "invalid UTF-8".into(),
            })?;
            // only an unterminated quote can carry a line break into a field
            if s.contains(['\n', '\r']) {
                return Err(Error::Parse {
                    line,
                    column: header.get(i).copied().unwrap_or("?").to_string(),
                    message: "unterminated quoted field".into(),
                });
            }
            fields.push(s.to_string());
        }
        if !seen_header {
            seen_header = true;
            let got: Vec<&str> = fields.iter().map(|f| f.trim().trim_start_matches('\u{feff}')).collect();
            if got != header {
                return Err(Error::Parse {
                    line,
                    column: "header".into(),
                    message: format!("expected `{}`, found `{}`", header.join(","), got.join(",")),
                });
            }
            continue;
        }
        if fields.len() == 1 && fields[0].trim().is_empty() {
            continue;
        }
        if fields.len() != header.len() {
            return Err(Error::Parse {
                line,
                column: header.get(fields.len()).copied().unwrap_or("<extra>").to_string(),
                message: format!("expected {} fields, found {}", header.len(), fields.len()),
            });
        }
        rows.push(Row { line, fields });
    }
    if !seen_header {
        return Err(Error::Parse {
            line: 1,
            column: "header".into(),
            message: format!("missing header `{}`", header.join(",")),
        });
    }
    Ok(rows)
}

fn csv_error(e: &csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.kind() {
        csv::ErrorKind::Io(io) => Error::Io(std::io::Error::new(io.kind(), io.to_string())),
        _ => Error::Parse {
            line,
            column: "?".into(),
            message: e.to_string(),
        },
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::Io(e).in_file(path.display().to_string()))
}

/// Parses `date,open,high,low,close,volume` rows into validated bars sorted by
/// date. Duplicate dates are rejected.
pub fn parse_daily_bars<R: Read>(reader: R, instrument_id: &str) -> Result<Vec<DailyBar>> {
    let h = &BAR_HEADER;
    let mut parsed = Vec::new();
    for row in read_rows(reader, h)? {
        let raw_date = row.field(0);
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d")
            .map_err(|_| row.parse_err("date", format!("`{raw_date}` is not an ISO-8601 date")))?;
        let open = row.number(1, h)?;
        let high = row.number(2, h)?;
        let low = row.number(3, h)?;
        let close = row.number(4, h)?;
        let volume = row.number(5, h)?;
        let bar = DailyBar::new(instrument_id, date, open, high, low, close, volume)
            .map_err(|e| e.at_line(row.line))?;
        parsed.push((row.line, bar));
    }
    parsed.sort_by_key(|(line, bar)| (bar.date(), *line));
    for pair in parsed.windows(2) {
        if pair[0].1.date() == pair[1].1.date() {
            let line = pair[0].0.max(pair[1].0);
            return Err(Error::Parse {
                line,
                column: "date".into(),
                message: format!("duplicate date {}", pair[1].1.date()),
            });
        }
    }
    Ok(parsed.into_iter().map(|(_, b)| b).collect())
}

/// Reads a bar file; the instrument id is the file stem.
pub fn read_daily_bars(path: impl AsRef<Path>) -> Result<Vec<DailyBar>> {
    let path = path.as_ref();
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_daily_bars(open(path)?, &id).map_err(|e| e.in_file(path.display().to_string()))
}

/// Writes bars in the format [`parse_daily_bars`] reads. Floats use the
/// shortest representation that parses back to the same value.
pub fn write_daily_bars<W: Write>(writer: W, bars: &[DailyBar]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(BAR_HEADER).map_err(|e| csv_error(&e))?;
    for b in bars {
        w.write_record([
            b.date().format("%Y-%m-%d").to_string(),
            b.open().to_string(),
            b.high().to_string(),
            b.low().to_string(),
            b.close().to_string(),
            b.volume().to_string(),
        ])
        .map_err(|e| csv_error(&e))?;
    }
    w.flush()?;
    Ok(())
}

struct PendingLevel {
    level: u32,
    line: u64,
    book_level: BookLevel,
}

#[derive(Default)]
struct PendingSnapshot {
    timestamp: f64,
    bids: Vec<PendingLevel>,
    asks: Vec<PendingLevel>,
}

fn finish_side(mut levels: Vec<PendingLevel>, timestamp: f64, side: Side) -> Result<Vec<BookLevel>> {
    levels.sort_by_key(|l| (l.level, l.line));
    for (i, l) in levels.iter().enumerate() {
        let expected = i as u32 + 1;
        if l.level == expected {
            continue;
        }
        if l.level < expected {
            return Err(Error::DuplicateLevel {
                timestamp,
                side,
                level: l.level,
            }
            .at_line(l.line));
        }
        return Err(Error::GapInLevels {
            timestamp,
            side,
            level: expected,
        }
        .at_line(l.line));
    }
    Ok(levels.into_iter().map(|l| l.book_level).collect())
}

/// Parses `timestamp,side,level,price,volume` rows (side `B` or `A`, levels
/// numbered 1..N from the touch) into snapshots ordered by timestamp.
pub fn parse_book_snapshots<R: Read>(reader: R) -> Result<Vec<OrderBookSnapshot>> {
    let h = &SNAPSHOT_HEADER;
    let mut groups: BTreeMap<u64, PendingSnapshot> = BTreeMap::new();
    for row in read_rows(reader, h)? {
        let timestamp = row.number(0, h)?;
        if timestamp < 0.0 {
            return Err(row.parse_err("timestamp", format!("{timestamp} is negative")));
        }
        let side = match row.field(1) {
            "B" | "b" => Side::Bid,
            "A" | "a" => Side::Ask,
            other => return Err(row.parse_err("side", format!("`{other}` is not B or A"))),
        };
        let raw_level = row.field(2);
        let level: u32 = raw_level
            .parse()
            .ok()
            .filter(|&l| l >= 1)
            .ok_or_else(|| row.parse_err("level", format!("`{raw_level}` is not a level number >= 1")))?;
        let price = row.number(3, h)?;
        let volume = row.number(4, h)?;
        let book_level = BookLevel::new(price, volume).map_err(|e| e.at_line(row.line))?;
        // adding 0.0 folds -0.0 into 0.0; bit order matches numeric order for non-negatives
        let timestamp = timestamp + 0.0;
        let entry = groups.entry(timestamp.to_bits()).or_default();
        entry.timestamp = timestamp;
        let pending = PendingLevel {
            level,
            line: row.line,
            book_level,
        };
        match side {
            Side::Bid => entry.bids.push(pending),
            Side::Ask => entry.asks.push(pending),
        }
    }
    groups
        .into_values()
        .map(|g| {
            let ts = g.timestamp;
            let bids = finish_side(g.bids, ts, Side::Bid)?;
            let asks = finish_side(g.asks, ts, Side::Ask)?;
            OrderBookSnapshot::new(ts, bids, asks).map_err(|e| e.at_timestamp(ts))
        })
        .collect()
}

pub fn read_book_snapshots(path: impl AsRef<Path>) -> Result<Vec<OrderBookSnapshot>> {
    let path = path.as_ref();
    parse_book_snapshots(open(path)?).map_err(|e| e.in_file(path.display().to_string()))
}

/// Parses `instrument,beta,lix` rows. Weights are not normalised here.
pub fn parse_positions<R: Read>(reader: R) -> Result<Vec<BasketPosition>> {
    let h = &POSITION_HEADER;
    read_rows(reader, h)?
        .into_iter()
        .map(|row| {
            let id = row.field(0).to_string();
            if id.is_empty() {
                return Err(row.parse_err("instrument", "empty instrument id"));
            }
            let beta = row.number(1, h)?;
            let lix = row.number(2, h)?;
            let lix = LiquidityIndex::new(lix, LiquidityKind::Daily).map_err(|e| e.at_line(row.line))?;
            BasketPosition::new(id, beta, lix).map_err(|e| e.at_line(row.line))
        })
        .collect()
}

pub fn read_positions(path: impl AsRef<Path>) -> Result<Vec<BasketPosition>> {
    let path = path.as_ref();
    parse_positions(open(path)?).map_err(|e| e.in_file(path.display().to_string()))
}

/// Mean volume over the trailing `window_days` bars, skipping zero-volume days.
///
/// `bars` must be in date order, as returned by [`parse_daily_bars`].
pub fn compute_adv(bars: &[DailyBar], window_days: u32, session_length: f64) -> Result<AdvContext> {
    if window_days == 0 {
        return Err(Error::InvalidParams("ADV window must be at least one day".into()));
    }
    if bars.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let start = bars.len().saturating_sub(window_days as usize);
    let traded: Vec<f64> = bars[start..]
        .iter()
        .map(DailyBar::volume)
        .filter(|&v| v > 0.0)
        .collect();
    if traded.is_empty() {
        return Err(Error::AllZeroVolume);
    }
    let adv = traded.iter().sum::<f64>() / traded.len() as f64;
    AdvContext::new(adv, window_days, session_length)
}

/// Describes one instrument's data files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub instrument_id: String,
    pub bar_file: PathBuf,
    #[serde(default)]
    pub snapshot_file: Option<PathBuf>,
    pub session_length: f64,
    #[serde(default)]
    pub currency: Option<String>,
}

/// Parsed contents of a [`DatasetManifest`].
#[derive(Debug, Clone)]
pub struct Dataset {
    pub manifest: DatasetManifest,
    pub bars: Vec<DailyBar>,
    pub snapshots: Vec<OrderBookSnapshot>,
}

impl DatasetManifest {
    /// Reads a JSON manifest. Relative file paths are resolved against the
    /// manifest's directory.
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(e).in_file(path.display().to_string()))?;
        let mut m: DatasetManifest = serde_json::from_str(&text).map_err(|e| {
            Error::Parse {
                line: e.line() as u64,
                column: "manifest".into(),
                message: e.to_string(),
            }
            .in_file(path.display().to_string())
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        if m.bar_file.is_relative() {
            m.bar_file = base.join(&m.bar_file);
        }
        if let Some(s) = m.snapshot_file.as_mut() {
            if s.is_relative() {
                *s = base.join(&*s);
            }
        }
        Ok(m)
    }

    /// Checks the session length and parses every referenced file.
    pub fn load(&self) -> Result<Dataset> {
        if !(self.session_length.is_finite() && self.session_length > 0.0) {
            return Err(Error::InvalidParams(format!(
                "session length must be positive, got {}",
                self.session_length
            )));
        }
        let bars = parse_daily_bars(open(&self.bar_file)?, &self.instrument_id)
            .map_err(|e| e.in_file(self.bar_file.display().to_string()))?;
        let snapshots = match &self.snapshot_file {
            Some(p) => read_book_snapshots(p)?,
            None => Vec::new(),
        };
        Ok(Dataset {
            manifest: self.clone(),
            bars,
            snapshots,
        })
    }
}
