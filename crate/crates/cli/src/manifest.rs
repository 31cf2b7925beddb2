use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Record of one run. Re-running with the same inputs and node budget
/// gives the same `results_sha256`; only `wall_seconds` varies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub max_nodes: u64,
    pub seed: u64,
    pub results_sha256: String,
    pub wall_seconds: f64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunManifest {
    pub fn new(command: Vec<String>, max_nodes: u64, seed: u64) -> Self {
        RunManifest {
            command,
            inputs: Vec::new(),
            max_nodes,
            seed,
            results_sha256: String::new(),
            wall_seconds: 0.0,
        }
    }

    pub fn add_input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn json_round_trip() {
        let mut m = RunManifest::new(vec!["starprod".into(), "table".into()], 10, 1);
        m.add_input(Path::new("a.csv"), b"1,2\n");
        let back: RunManifest = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(back, m);
    }
}
