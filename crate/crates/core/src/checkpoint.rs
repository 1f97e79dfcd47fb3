//! Belief checkpoint file format.
//!
//! A checkpoint is a small self-describing text file: a versioned magic
//! line, the grid geometry as `key value` pairs, then the mass matrix, one
//! intercept row per line. Floats are written in shortest round-trip form,
//! so save/load preserves the belief bit for bit.
//!
//! ```text
//! sleeptune-belief v1
//! intercept_max 1.5
//! slope_max 3
//! resolution 61
//! mass
//! 0.00026873... (61 values)
//! ...
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::tuner::{GridSpec, ParamBelief};

const MAGIC: &str = "sleeptune-belief v1";

impl ParamBelief {
    pub fn to_checkpoint_string(&self) -> String {
        let spec = self.spec();
        let mut out = String::new();
        out.push_str(MAGIC);
        out.push('\n');
        let _ = writeln!(out, "intercept_max {}", spec.intercept_max);
        let _ = writeln!(out, "slope_max {}", spec.slope_max);
        let _ = writeln!(out, "resolution {}", spec.resolution);
        out.push_str("mass\n");
        for row in self.mass().chunks(spec.resolution) {
            let mut first = true;
            for m in row {
                if !first {
                    out.push(' ');
                }
                let _ = write!(out, "{m}");
                first = false;
            }
            out.push('\n');
        }
        out
    }

    pub fn from_checkpoint_str(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(line) if line.trim_end() == MAGIC => {}
            Some(line) => {
                return Err(Error::parse(format!(
                    "unsupported checkpoint header {line:?}, expected {MAGIC:?}"
                )))
            }
            None => return Err(Error::parse("empty checkpoint")),
        }

        let mut intercept_max = None;
        let mut slope_max = None;
        let mut resolution = None;
        loop {
            let line = lines
                .next()
                .ok_or_else(|| Error::parse("checkpoint ends before mass section"))?;
            let line = line.trim();
            if line == "mass" {
                break;
            }
            let (key, value) = line
                .split_once(' ')
                .ok_or_else(|| Error::parse(format!("malformed checkpoint line {line:?}")))?;
            match key {
                "intercept_max" => {
                    intercept_max = Some(parse_float(value, "intercept_max")?);
                }
                "slope_max" => {
                    slope_max = Some(parse_float(value, "slope_max")?);
                }
                "resolution" => {
                    let r: usize = value
                        .parse()
                        .map_err(|e| Error::parse(format!("resolution: {e}")))?;
                    resolution = Some(r);
                }
                other => {
                    return Err(Error::parse(format!("unknown checkpoint key {other:?}")));
                }
            }
        }

        let spec = GridSpec {
            intercept_max: intercept_max
                .ok_or_else(|| Error::parse("checkpoint missing intercept_max"))?,
            slope_max: slope_max.ok_or_else(|| Error::parse("checkpoint missing slope_max"))?,
            resolution: resolution.ok_or_else(|| Error::parse("checkpoint missing resolution"))?,
        };
        // Validate before sizing any allocation off the header.
        spec.validate()?;

        let mut mass = Vec::with_capacity(spec.node_count());
        for (i, line) in lines.by_ref().take(spec.resolution).enumerate() {
            let row: Vec<f64> = line
                .split_whitespace()
                .map(|tok| parse_float(tok, "mass"))
                .collect::<Result<_>>()?;
            if row.len() != spec.resolution {
                return Err(Error::parse(format!(
                    "mass row {i} has {} values, expected {}",
                    row.len(),
                    spec.resolution
                )));
            }
            mass.extend(row);
        }
        if mass.len() != spec.node_count() {
            return Err(Error::parse(format!(
                "checkpoint has {} mass values, expected {}",
                mass.len(),
                spec.node_count()
            )));
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::parse("trailing content after mass matrix"));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::parse(format!(
                "checkpoint mass sums to {total}, expected 1"
            )));
        }
        ParamBelief::from_masses(spec, mass)
    }

    pub fn save_checkpoint(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_checkpoint_string())?;
        Ok(())
    }

    pub fn load_checkpoint(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_checkpoint_str(&text)
    }
}

fn parse_float(token: &str, field: &str) -> Result<f64> {
    let v: f64 = token
        .parse()
        .map_err(|e| Error::parse(format!("{field}: {e}")))?;
    if !v.is_finite() {
        return Err(Error::parse(format!("{field}: {v} is not finite")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tuner::{posterior_update, DriftKernel, KpiBatch};

    #[test]
    fn roundtrip_is_bit_exact() {
        let uniform = ParamBelief::uniform(GridSpec::default()).unwrap();
        let batch = KpiBatch::new(0.2, vec![true, true, false, true], 0, 0);
        let belief = posterior_update(&uniform, &batch, &DriftKernel::none()).belief;
        let text = belief.to_checkpoint_string();
        let reloaded = ParamBelief::from_checkpoint_str(&text).unwrap();
        assert_eq!(reloaded, belief);
    }

    #[test]
    fn roundtrip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("belief.ckpt");
        let belief = ParamBelief::uniform(GridSpec {
            intercept_max: 1.2,
            slope_max: 2.0,
            resolution: 9,
        })
        .unwrap();
        belief.save_checkpoint(&path).unwrap();
        assert_eq!(ParamBelief::load_checkpoint(&path).unwrap(), belief);
    }

    #[test]
    fn rejects_malformed_checkpoints() {
        let good = ParamBelief::uniform(GridSpec::default())
            .unwrap()
            .to_checkpoint_string();

        assert!(ParamBelief::from_checkpoint_str("").is_err());
        assert!(ParamBelief::from_checkpoint_str("belief v0\n").is_err());
        assert!(ParamBelief::from_checkpoint_str(&good.replace("v1", "v2")).is_err());
        // Truncated mass matrix.
        let cut: String = good.lines().take(10).collect::<Vec<_>>().join("\n");
        assert!(ParamBelief::from_checkpoint_str(&cut).is_err());
        // Unknown key.
        assert!(
            ParamBelief::from_checkpoint_str(&good.replace("slope_max", "slope_mix")).is_err()
        );
        // Resolution that disagrees with the matrix.
        assert!(
            ParamBelief::from_checkpoint_str(&good.replace("resolution 61", "resolution 60"))
                .is_err()
        );
        // Oversized header must be rejected before any allocation.
        let bomb = "sleeptune-belief v1\nintercept_max 1\nslope_max 1\nresolution 99999999\nmass\n";
        assert!(ParamBelief::from_checkpoint_str(bomb).is_err());
    }
}
