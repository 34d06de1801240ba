//! Curve files: CSV `s,x,y,z` or JSON `{length, samples, flags}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ClosedCurve, Orientation};
use crate::error::{Error, Result};
use crate::Vec3;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CurveFlags {
    #[serde(default)]
    pub polygon: bool,
    #[serde(default)]
    pub orientation: Orientation,
    /// Resolution used when the file lists polygon vertices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFile {
    pub length: f64,
    pub samples: Vec<[f64; 3]>,
    #[serde(default)]
    pub flags: CurveFlags,
}

impl CurveFile {
    pub fn into_curve(self) -> Result<ClosedCurve> {
        let pts: Vec<Vec3> = self
            .samples
            .iter()
            .map(|p| Vec3::new(p[0], p[1], p[2]))
            .collect();
        if self.flags.polygon {
            let n = self.flags.resolution.unwrap_or(pts.len().max(64));
            return ClosedCurve::polygon(&pts, n);
        }
        ClosedCurve::resample_arclength(&pts, pts.len())
    }
}

impl ClosedCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,x,y,z\n");
        for (i, p) in self.samples().iter().enumerate() {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e}\n",
                self.param(i),
                p.x,
                p.y,
                p.z
            ));
        }
        out
    }

    /// Parses the CSV format. Rows must have strictly increasing s ≥ 0; the
    /// samples are taken as a closed point list and resampled uniformly.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty curve file".into()))?;
        let cols: Vec<&str> = header.split(',').map(|c| c.trim()).collect();
        if cols != ["s", "x", "y", "z"] {
            return Err(Error::Parse(format!(
                "expected header `s,x,y,z`, got `{header}`"
            )));
        }
        let mut pts = Vec::new();
        let mut last_s = f64::NEG_INFINITY;
        for (k, line) in lines.enumerate() {
            let v: Vec<f64> = line
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("row {}: {e}", k + 2)))?;
            if v.len() != 4 {
                return Err(Error::Parse(format!("row {}: expected 4 columns", k + 2)));
            }
            if v[0] < 0.0 || v[0] <= last_s {
                return Err(Error::Parse(format!(
                    "row {}: s must be nonnegative and strictly increasing",
                    k + 2
                )));
            }
            last_s = v[0];
            pts.push(Vec3::new(v[1], v[2], v[3]));
        }
        ClosedCurve::resample_arclength(&pts, pts.len())
    }

    pub fn to_file_record(&self) -> CurveFile {
        let (pts, resolution) = match self.polygon_vertices() {
            Some((v, _)) => (v.to_vec(), Some(self.n())),
            None => (self.samples().to_vec(), None),
        };
        CurveFile {
            length: self.length(),
            samples: pts.iter().map(|p| [p.x, p.y, p.z]).collect(),
            flags: CurveFlags {
                polygon: self.is_polygon(),
                orientation: self.orientation(),
                resolution,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file_record()).expect("curve serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: CurveFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        f.into_curve()
    }

    /// Loads `.csv` or `.json` by extension.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_json(&text),
            _ => Self::from_csv(&text),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => self.to_json(),
            _ => self.to_csv(),
        };
        std::fs::write(path, text)?;
        Ok(())
    }
}
