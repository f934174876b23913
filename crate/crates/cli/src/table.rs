//! Plot-ready result tables with deterministic CSV/JSON emission.

use std::io::Write;

/// One table cell; floats print as shortest round-trip decimals.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Str(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(v) => format!("{v}"),
            Cell::Int(v) => format!("{v}"),
            Cell::Str(s) => s.replace(',', ";"),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Float(v) => serde_json::json!(v),
            Cell::Int(v) => serde_json::json!(v),
            Cell::Str(s) => serde_json::json!(s),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map(Cell::Float).unwrap_or(Cell::Empty)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row arity must match the header"
        );
        self.rows.push(row);
    }

    /// Number of rows whose `error` column (when present) is nonempty.
    pub fn error_rows(&self) -> usize {
        match self.columns.iter().position(|&c| c == "error") {
            None => 0,
            Some(idx) => self
                .rows
                .iter()
                .filter(|r| !matches!(r[idx], Cell::Empty))
                .count(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

/// Writes the table; output bytes are a pure function of the table.
pub fn emit<W: Write>(table: &Table, format: Format, mut out: W) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "{}", table.columns.join(","))?;
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                writeln!(out, "{}", cells.join(","))?;
            }
        }
        Format::Json => {
            let value = serde_json::json!({
                "columns": table.columns,
                "rows": table.rows.iter()
                    .map(|r| r.iter().map(Cell::json).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            });
            serde_json::to_writer(&mut out, &value)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_shapes() {
        let mut t = Table::new(vec!["a", "b", "error"]);
        t.push(vec![Cell::Float(0.5), Cell::Empty, Cell::Empty]);
        t.push(vec![
            Cell::Float(1.0),
            Cell::Int(3),
            Cell::Str("boom".into()),
        ]);
        assert_eq!(t.error_rows(), 1);

        let mut csv = Vec::new();
        emit(&t, Format::Csv, &mut csv).unwrap();
        assert_eq!(
            String::from_utf8(csv).unwrap(),
            "a,b,error\n0.5,,\n1,3,boom\n"
        );

        let mut json = Vec::new();
        emit(&t, Format::Json, &mut json).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&json).unwrap();
        assert_eq!(v["rows"][0][1], serde_json::Value::Null);
    }

    #[test]
    fn header_only_table() {
        let t = Table::new(vec!["x"]);
        let mut csv = Vec::new();
        emit(&t, Format::Csv, &mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "x\n");
    }
}
