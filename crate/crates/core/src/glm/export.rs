//! Plain-text serialization of a fitted penalized model.
//!
//! The format is line-oriented and versioned so a saved model stays readable
//! by eye and greppable in run directories. Values use the shortest exact
//! decimal form, so render → parse is lossless.

use serde::{Deserialize, Serialize};

use super::GlmError;

const MAGIC: &str = "cogspeech-model v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFeature {
    pub name: String,
    pub coefficient: f64,
    /// Training mean of the raw feature (the model applies to z-scores).
    pub mean: f64,
    /// Training standard deviation of the raw feature.
    pub sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub alpha: f64,
    pub lambda: f64,
    pub intercept: f64,
    pub features: Vec<ModelFeature>,
}

impl ModelFile {
    /// Predicted probability for one raw (unstandardized) feature row, in
    /// the same order as `features`.
    pub fn predict_raw(&self, row: &[f64]) -> f64 {
        debug_assert_eq!(row.len(), self.features.len());
        let mut eta = self.intercept;
        for (value, feat) in row.iter().zip(&self.features) {
            let z = if feat.sd > 0.0 {
                (value - feat.mean) / feat.sd
            } else {
                0.0
            };
            eta += z * feat.coefficient;
        }
        super::sigmoid(eta)
    }
}

pub fn render_model(model: &ModelFile) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    out.push_str(&format!("alpha {}\n", model.alpha));
    out.push_str(&format!("lambda {}\n", model.lambda));
    out.push_str(&format!("intercept {}\n", model.intercept));
    out.push_str(&format!("features {}\n", model.features.len()));
    for f in &model.features {
        out.push_str(&format!("{}\t{}\t{}\t{}\n", f.name, f.coefficient, f.mean, f.sd));
    }
    out
}

pub fn parse_model(text: &str) -> Result<ModelFile, GlmError> {
    let mut lines = text.lines();
    let magic = lines
        .next()
        .ok_or_else(|| GlmError::Invalid("empty model file".into()))?;
    if magic.trim() != MAGIC {
        return Err(GlmError::Invalid(format!(
            "unsupported model header '{magic}' (expected '{MAGIC}')"
        )));
    }

    let mut scalar = |key: &str| -> Result<f64, GlmError> {
        let line = lines
            .next()
            .ok_or_else(|| GlmError::Invalid(format!("missing '{key}' line")))?;
        let (k, v) = line
            .split_once(' ')
            .ok_or_else(|| GlmError::Invalid(format!("malformed '{key}' line: {line}")))?;
        if k != key {
            return Err(GlmError::Invalid(format!("expected '{key}', found '{k}'")));
        }
        v.trim()
            .parse::<f64>()
            .map_err(|e| GlmError::Invalid(format!("bad value for '{key}': {e}")))
    };

    let alpha = scalar("alpha")?;
    let lambda = scalar("lambda")?;
    let intercept = scalar("intercept")?;
    let count = scalar("features")? as usize;

    let mut features = Vec::with_capacity(count);
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split('\t').collect();
        if parts.len() != 4 {
            return Err(GlmError::Invalid(format!(
                "feature line needs 4 tab-separated fields, found {}: {line}",
                parts.len()
            )));
        }
        let parse = |s: &str| -> Result<f64, GlmError> {
            s.parse::<f64>()
                .map_err(|e| GlmError::Invalid(format!("bad number '{s}': {e}")))
        };
        features.push(ModelFeature {
            name: parts[0].to_string(),
            coefficient: parse(parts[1])?,
            mean: parse(parts[2])?,
            sd: parse(parts[3])?,
        });
    }
    if features.len() != count {
        return Err(GlmError::Invalid(format!(
            "feature count mismatch: header says {count}, found {}",
            features.len()
        )));
    }
    Ok(ModelFile {
        alpha,
        lambda,
        intercept,
        features,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ModelFile {
        ModelFile {
            alpha: 0.37,
            lambda: 0.004915281232,
            intercept: -1.25,
            features: vec![
                ModelFeature {
                    name: "pitch_min_mean".into(),
                    coefficient: -0.831772,
                    mean: 117.3,
                    sd: 21.75,
                },
                ModelFeature {
                    name: "ppl_others".into(),
                    coefficient: 0.0,
                    mean: 44.31,
                    sd: 8.6e-3,
                },
            ],
        }
    }

    #[test]
    fn render_parse_round_trip_is_exact() {
        let m = sample();
        let parsed = parse_model(&render_model(&m)).unwrap();
        assert_eq!(m, parsed);
    }

    #[test]
    fn wrong_header_is_rejected() {
        assert!(parse_model("something-else v9\n").is_err());
    }

    #[test]
    fn truncated_feature_table_is_rejected() {
        let text = render_model(&sample());
        let cut = text.rsplit_once('\n').unwrap().0.rsplit_once('\n').unwrap().0;
        assert!(parse_model(cut).is_err());
    }

    #[test]
    fn predict_standardizes_with_stored_moments() {
        let m = sample();
        // Row at the stored means: eta = intercept exactly.
        let p = m.predict_raw(&[117.3, 44.31]);
        let expected = 1.0 / (1.0 + f64::exp(1.25));
        assert!((p - expected).abs() < 1e-12);
    }
}
