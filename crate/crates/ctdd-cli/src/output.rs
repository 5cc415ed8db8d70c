//! CSV emission with the fixed result-table schema.

use std::io::Write;
use std::path::Path;

use ctdd_core::model::Direction;
use ctdd_core::CoreError;

pub const CSV_HEADER: &str =
    "axis,value,direction,engine,n0,success,ci95,throughput_bps_hz_m2,wall_ms,error";

/// One result row. Optional fields print empty.
pub struct Row {
    pub axis: Option<&'static str>,
    pub value: Option<f64>,
    pub direction: Direction,
    pub engine: &'static str,
    /// Serving tier; `None` marks the overall row.
    pub n0: Option<u32>,
    pub success: Option<f64>,
    pub ci95: Option<f64>,
    pub throughput: Option<f64>,
    pub wall_ms: Option<f64>,
    pub error: Option<String>,
}

impl Default for Row {
    fn default() -> Self {
        Row {
            axis: None,
            value: None,
            direction: Direction::Downlink,
            engine: "",
            n0: None,
            success: None,
            ci95: None,
            throughput: None,
            wall_ms: None,
            error: None,
        }
    }
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

impl Row {
    fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.axis.unwrap_or(""),
            opt_f64(self.value),
            self.direction.label(),
            self.engine,
            self.n0.map(|n| n.to_string()).unwrap_or_else(|| "overall".into()),
            opt_f64(self.success),
            opt_f64(self.ci95),
            opt_f64(self.throughput),
            opt_f64(self.wall_ms),
            self.error.as_deref().unwrap_or("").replace(',', ";"),
        )
    }
}

/// Writes rows to a file or echoes them to stdout.
pub struct CsvSink {
    out: Box<dyn Write>,
}

impl CsvSink {
    pub fn open(path: Option<&Path>) -> Result<Self, CoreError> {
        let mut out: Box<dyn Write> = match path {
            Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p).map_err(
                |e| CoreError::InvalidConfig(format!("cannot create {}: {e}", p.display())),
            )?)),
            None => Box::new(std::io::stdout()),
        };
        writeln!(out, "{CSV_HEADER}").map_err(io_err)?;
        Ok(CsvSink { out })
    }

    pub fn write(&mut self, row: &Row) -> Result<(), CoreError> {
        writeln!(self.out, "{}", row.to_csv()).map_err(io_err)
    }

    pub fn finish(&mut self) -> Result<(), CoreError> {
        self.out.flush().map_err(io_err)
    }
}

fn io_err(e: std::io::Error) -> CoreError {
    CoreError::InvalidConfig(format!("io error: {e}"))
}
