//! Report envelope written by every subcommand: command echo, input digest,
//! effective configuration, and the module-specific payload.

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
pub struct SolveReport {
    pub command: String,
    pub game_digest: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub results: serde_json::Value,
    /// Omitted under --no-timestamp so reruns are byte-identical.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

pub fn digest_of<T: Serialize>(value: &T) -> String {
    let json = serde_json::to_string(value).expect("serializable input");
    let mut hasher = Sha256::new();
    hasher.update(json.as_bytes());
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}
