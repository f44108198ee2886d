use serde::{Deserialize, Serialize};

/// One verification verdict, serialized as
/// `{"test", "n_samples", "tv", "threshold", "pass"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub test: String,
    pub n_samples: u64,
    pub tv: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl VerificationReport {
    /// Passes when `tv <= threshold`.
    pub fn new(test: impl Into<String>, n_samples: u64, tv: f64, threshold: f64) -> Self {
        VerificationReport {
            test: test.into(),
            n_samples,
            tv,
            threshold,
            pass: tv <= threshold,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let r = VerificationReport::new("rooted/star", 10, 0.01, 0.015);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["test"], "rooted/star");
        assert_eq!(v["n_samples"], 10);
        assert_eq!(v["pass"], true);
        assert_eq!(v.as_object().unwrap().len(), 5);
    }
}
