use std::collections::HashMap;
use std::io::{Read, Write};

use super::IngestError;

pub const REQUIRED_COLUMNS: [&str; 9] = [
    "match_id",
    "set_no",
    "game_no",
    "point_no",
    "server",
    "point_victor",
    "rally_count",
    "ace",
    "double_fault",
];

const PLAYER_COLUMNS: [&str; 2] = ["player1", "player2"];

/// One row of a point log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawPointRow {
    pub match_id: String,
    pub set_no: u32,
    pub game_no: u32,
    pub point_no: u32,
    /// 1 or 2.
    pub server: u8,
    /// 1 or 2.
    pub point_victor: u8,
    /// Shots in the point, counting the serve.
    pub rally_count: u32,
    pub ace: bool,
    pub double_fault: bool,
    /// Optional player names, used to tag matches when building profiles.
    pub player1: Option<String>,
    pub player2: Option<String>,
}

impl RawPointRow {
    pub fn order_key(&self) -> (u32, u32, u32) {
        (self.set_no, self.game_no, self.point_no)
    }
}

struct Columns {
    index: HashMap<&'static str, usize>,
}

impl Columns {
    fn get<'r>(&self, record: &'r csv::StringRecord, name: &str) -> Option<&'r str> {
        self.index.get(name).and_then(|&i| record.get(i))
    }
}

struct Line<'a> {
    line: u64,
    record: &'a csv::StringRecord,
    columns: &'a Columns,
}

impl Line<'_> {
    fn error(&self, column: &str, value: &str, reason: impl Into<String>) -> IngestError {
        IngestError::ParseError {
            line: self.line,
            column: column.to_string(),
            value: value.to_string(),
            reason: reason.into(),
        }
    }

    fn text(&self, column: &str) -> &str {
        self.columns.get(self.record, column).unwrap_or("")
    }

    fn uint(&self, column: &str) -> Result<u32, IngestError> {
        let value = self.text(column);
        value
            .parse::<u32>()
            .map_err(|_| self.error(column, value, "expected a non-negative integer"))
    }

    fn player(&self, column: &str) -> Result<u8, IngestError> {
        let value = self.text(column);
        match value {
            "1" => Ok(1),
            "2" => Ok(2),
            _ => Err(self.error(column, value, "expected 1 or 2")),
        }
    }

    fn flag(&self, column: &str) -> Result<bool, IngestError> {
        let value = self.text(column);
        match value {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(self.error(column, value, "expected 0 or 1")),
        }
    }

    fn optional(&self, column: &str) -> Option<String> {
        self.columns
            .get(self.record, column)
            .filter(|v| !v.is_empty())
            .map(str::to_string)
    }

    fn parse(&self) -> Result<RawPointRow, IngestError> {
        let row = RawPointRow {
            match_id: self.text("match_id").to_string(),
            set_no: self.uint("set_no")?,
            game_no: self.uint("game_no")?,
            point_no: self.uint("point_no")?,
            server: self.player("server")?,
            point_victor: self.player("point_victor")?,
            rally_count: self.uint("rally_count")?,
            ace: self.flag("ace")?,
            double_fault: self.flag("double_fault")?,
            player1: self.optional("player1"),
            player2: self.optional("player2"),
        };
        if row.rally_count == 0 {
            return Err(self.error(
                "rally_count",
                "0",
                "rally count includes the serve, so it is at least 1",
            ));
        }
        if row.ace && row.point_victor != row.server {
            return Err(self.error("ace", "1", "an ace must be won by the server"));
        }
        if row.double_fault && row.point_victor == row.server {
            return Err(self.error(
                "double_fault",
                "1",
                "a double fault must be lost by the server",
            ));
        }
        if row.ace && row.double_fault {
            return Err(self.error(
                "double_fault",
                "1",
                "a point cannot be both an ace and a double fault",
            ));
        }
        Ok(row)
    }
}

/// Parses a point log. Columns may appear in any order; unknown columns are
/// ignored.
pub fn parse_points_csv<R: Read>(reader: R) -> Result<Vec<RawPointRow>, IngestError> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv
        .headers()
        .map_err(|e| IngestError::Csv {
            line: 1,
            message: e.to_string(),
        })?
        .clone();

    let mut index = HashMap::new();
    for (i, name) in headers.iter().enumerate() {
        let name = name.trim_start_matches('\u{feff}');
        if let Some(known) = REQUIRED_COLUMNS
            .iter()
            .chain(PLAYER_COLUMNS.iter())
            .find(|c| c.eq_ignore_ascii_case(name))
        {
            index.entry(*known).or_insert(i);
        }
    }
    let missing: Vec<String> = REQUIRED_COLUMNS
        .iter()
        .filter(|c| !index.contains_key(*c))
        .map(|c| c.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(IngestError::MissingColumn(missing));
    }
    let columns = Columns { index };

    let mut rows = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        let more = csv.read_record(&mut record).map_err(|e| IngestError::Csv {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        if !more {
            break;
        }
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        rows.push(
            Line {
                line,
                record: &record,
                columns: &columns,
            }
            .parse()?,
        );
    }
    Ok(rows)
}

/// Writes rows in the canonical column order. Player name columns are only
/// written when some row carries them.
pub fn write_points_csv<W: Write>(rows: &[RawPointRow], writer: W) -> csv::Result<()> {
    let with_players = rows
        .iter()
        .any(|r| r.player1.is_some() || r.player2.is_some());
    let mut csv = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = REQUIRED_COLUMNS.to_vec();
    if with_players {
        header.extend(PLAYER_COLUMNS);
    }
    csv.write_record(&header)?;
    for row in rows {
        let mut fields = vec![
            row.match_id.clone(),
            row.set_no.to_string(),
            row.game_no.to_string(),
            row.point_no.to_string(),
            row.server.to_string(),
            row.point_victor.to_string(),
            row.rally_count.to_string(),
            u8::from(row.ace).to_string(),
            u8::from(row.double_fault).to_string(),
        ];
        if with_players {
            fields.push(row.player1.clone().unwrap_or_default());
            fields.push(row.player2.clone().unwrap_or_default());
        }
        csv.write_record(&fields)?;
    }
    csv.flush()?;
    Ok(())
}
