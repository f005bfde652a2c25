//! CSV / JSON trajectory output and run summaries.

use std::fmt;
use std::io::Write;

use serde::Serialize;

use super::TrajectoryRecord;
use crate::error::ScenarioError;
use crate::math::Real;

/// Column order of the CSV output; also the JSON key set.
pub const COLUMNS: [&str; 8] = [
    "frame",
    "x",
    "y",
    "z",
    "iterations",
    "min_mesh_distance",
    "displacement",
    "planes_hit",
];

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, ScenarioError> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(ScenarioError::Invalid(format!(
                "unknown output format `{other}`"
            ))),
        }
    }
}

#[derive(Serialize)]
struct Row {
    frame: usize,
    x: Real,
    y: Real,
    z: Real,
    iterations: usize,
    min_mesh_distance: Real,
    displacement: Real,
    planes_hit: usize,
}

impl From<&TrajectoryRecord> for Row {
    fn from(r: &TrajectoryRecord) -> Self {
        Row {
            frame: r.frame,
            x: r.position.x,
            y: r.position.y,
            z: r.position.z,
            iterations: r.iterations,
            min_mesh_distance: r.min_mesh_distance,
            displacement: r.displacement,
            planes_hit: r.planes_hit,
        }
    }
}

/// Writes one CSV row or JSON object per record. CSV always starts with the
/// header, even with no records.
pub fn write_records<W: Write>(
    records: &[TrajectoryRecord],
    format: OutputFormat,
    out: W,
) -> Result<(), ScenarioError> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(out);
            w.write_record(COLUMNS)?;
            for r in records {
                w.serialize(Row::from(r))?;
            }
            w.flush().map_err(csv::Error::from)?;
        }
        OutputFormat::Json => {
            let rows: Vec<Row> = records.iter().map(Row::from).collect();
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &rows)?;
            writeln!(out).map_err(serde_json::Error::io)?;
        }
    }
    Ok(())
}

/// Aggregate view of a record stream.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Summary {
    pub frames: usize,
    pub max_iterations: usize,
    pub min_mesh_distance: Real,
    /// Frames whose displacement exceeds the jitter threshold.
    pub jitter_count: usize,
    /// Frames commanded to move more than ten thresholds that moved less
    /// than a tenth of the commanded distance.
    pub snag_count: usize,
    /// World-space threshold used for both counts.
    pub threshold: Real,
}

/// Summarizes `records` given the commanded speed of each frame.
/// `threshold` is the stand-off distance in world units, usually `ε` times
/// the smallest radius.
pub fn summarize(records: &[TrajectoryRecord], commanded: &[Real], threshold: Real) -> Summary {
    let mut s = Summary {
        frames: records.len(),
        max_iterations: 0,
        min_mesh_distance: Real::INFINITY,
        jitter_count: 0,
        snag_count: 0,
        threshold,
    };
    for r in records {
        s.max_iterations = s.max_iterations.max(r.iterations);
        s.min_mesh_distance = s.min_mesh_distance.min(r.min_mesh_distance);
        if r.displacement > threshold {
            s.jitter_count += 1;
        }
        let speed = commanded.get(r.frame).copied().unwrap_or(0.0);
        if speed > 10.0 * threshold && r.displacement < 0.1 * speed {
            s.snag_count += 1;
        }
    }
    s
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "frames:            {}", self.frames)?;
        writeln!(f, "max iterations:    {}", self.max_iterations)?;
        writeln!(f, "min mesh distance: {}", self.min_mesh_distance)?;
        writeln!(
            f,
            "jitter frames:     {} (displacement > {})",
            self.jitter_count, self.threshold
        )?;
        write!(f, "snag frames:       {}", self.snag_count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::Vector3;

    fn rec(frame: usize, displacement: Real) -> TrajectoryRecord {
        TrajectoryRecord {
            frame,
            position: Vector3::new(1.5, -2.0, 0.25),
            iterations: frame % 4,
            min_mesh_distance: 1.0 + frame as Real,
            displacement,
            planes_hit: 1,
        }
    }

    #[test]
    fn empty_csv_is_header_only() {
        let mut buf = Vec::new();
        write_records(&[], OutputFormat::Csv, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "frame,x,y,z,iterations,min_mesh_distance,displacement,planes_hit\n"
        );
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        write_records(&[rec(0, 0.5), rec(1, 0.0)], OutputFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "0,1.5,-2.0,0.25,0,1.0,0.5,1");
    }

    #[test]
    fn json_has_same_keys() {
        let mut buf = Vec::new();
        write_records(&[rec(2, 0.5)], OutputFormat::Json, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let obj = v.as_array().unwrap()[0].as_object().unwrap();
        let mut keys: Vec<_> = obj.keys().map(String::as_str).collect();
        let mut expected = COLUMNS.to_vec();
        keys.sort_unstable();
        expected.sort_unstable();
        assert_eq!(keys, expected);
        assert_eq!(obj["iterations"], 2);
    }

    #[test]
    fn summary_counts() {
        let records = [rec(0, 2.0), rec(1, 0.001), rec(2, 0.05), rec(3, 1.0)];
        let s = summarize(&records, &[2.0, 2.0, 0.01, 2.0], 0.005);
        assert_eq!(s.max_iterations, 3);
        assert_eq!(s.min_mesh_distance, 1.0);
        assert_eq!(s.jitter_count, 3);
        // Frame 1 barely moved while commanded 2.0; frame 2 was commanded too little to count.
        assert_eq!(s.snag_count, 1);
    }
}
