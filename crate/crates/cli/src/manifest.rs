use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::{Ctx, OutputFormat};
use hyperlocus_core::DEFAULT_PRIME;

/// What a command produced, before the manifest is attached.
pub struct Report {
    pub text: String,
    /// Must be a JSON object; the manifest is added under `"manifest"`.
    pub json: Value,
    /// Command-specific flags, recorded in the manifest.
    pub flags: Vec<(&'static str, String)>,
    pub primes: Vec<u64>,
    pub exit: u8,
}

impl Report {
    pub fn new(text: String, json: Value) -> Self {
        Self {
            text,
            json,
            flags: Vec::new(),
            primes: Vec::new(),
            exit: 0,
        }
    }

    pub fn flag(mut self, name: &'static str, value: impl ToString) -> Self {
        self.flags.push((name, value.to_string()));
        self
    }

    pub fn prime(mut self, p: u64) -> Self {
        if !self.primes.contains(&p) {
            self.primes.push(p);
        }
        self
    }

    pub fn exit(mut self, code: u8) -> Self {
        self.exit = code;
        self
    }

    pub fn document(&self, manifest: &RunManifest) -> anyhow::Result<String> {
        let mut doc = self.json.clone();
        let obj = doc.as_object_mut().ok_or_else(|| anyhow::anyhow!("report is not a JSON object"))?;
        obj.insert("manifest".into(), serde_json::to_value(manifest)?);
        Ok(serde_json::to_string_pretty(&doc)?)
    }
}

/// Everything that determines the bytes of an output.
///
/// `--threads` and `--out` are left out because they do not change results,
/// and wall time goes to stderr so equal manifests mean equal outputs.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub flags: BTreeMap<String, String>,
    pub seed: u64,
    pub primes: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, format: OutputFormat, ctx: &Ctx, report: &Report) -> Self {
        let mut flags: BTreeMap<String, String> = report.flags.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        let format = match format {
            OutputFormat::Text => "text",
            OutputFormat::Json => "json",
        };
        flags.insert("format".into(), format.into());
        flags.insert("prime".into(), ctx.prime.unwrap_or(DEFAULT_PRIME).to_string());
        flags.insert("trials".into(), ctx.trials.to_string());
        Self {
            tool: env!("CARGO_PKG_NAME").replace("-cli", ""),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            flags,
            seed: ctx.seed,
            primes: report.primes.iter().map(|p| p.to_string()).collect(),
        }
    }

    pub fn header(&self) -> String {
        let flags: Vec<String> = self.flags.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let primes = if self.primes.is_empty() { "none".to_string() } else { self.primes.join(", ") };
        format!(
            "# {} {} {}\n# flags: {} seed={}\n# primes used: {}\n",
            self.tool,
            self.version,
            self.command,
            flags.join(" "),
            self.seed,
            primes
        )
    }
}
