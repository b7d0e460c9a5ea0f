//! Parameter resolution: command-line flag, then config-file entry, then
//! built-in default, with every value parsed and range-checked through the
//! same path so the error text does not depend on where a value came from.

use crate::{Failure, GlobalArgs};
use deltabox::{RationalC, Sector};
use std::collections::BTreeMap;
use std::fs;

/// Every key a config file may set. Command-line flags use the same names.
const KNOWN_KEYS: [&str; 19] = [
    "nmax",
    "tol",
    "out",
    "format",
    "sigma",
    "pi",
    "g",
    "c",
    "k",
    "vectors",
    "with-ed",
    "c-min",
    "c-max",
    "steps",
    "q-max",
    "e-max",
    "tower",
    "level",
    "resolution",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// The config-file contents plus the global flags, ready to resolve
/// individual parameters against.
pub struct Settings {
    file: BTreeMap<String, String>,
    nmax: Option<String>,
    tol: Option<String>,
    out: Option<String>,
    format: Option<String>,
}

impl Settings {
    pub fn load(global: &GlobalArgs) -> Result<Self, Failure> {
        let mut file = BTreeMap::new();
        if let Some(path) = &global.config {
            let text = fs::read_to_string(path).map_err(|err| {
                Failure::invalid(format!("cannot read config file {path}: {err}"))
            })?;
            for (number, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return Err(Failure::invalid(format!(
                        "config line {} is not `key = value`: {line}",
                        number + 1
                    )));
                };
                let key = key.trim().to_string();
                if !KNOWN_KEYS.contains(&key.as_str()) {
                    return Err(Failure::invalid(format!(
                        "unknown config key on line {}: {key}",
                        number + 1
                    )));
                }
                file.insert(key, value.trim().to_string());
            }
        }
        Ok(Self {
            file,
            nmax: global.nmax.clone(),
            tol: global.tol.clone(),
            out: global.out.clone(),
            format: global.format.clone(),
        })
    }

    /// Raw resolved text for `key`: the flag wins, then the file.
    fn lookup<'a>(&'a self, flag: &'a Option<String>, key: &str) -> Option<&'a str> {
        flag.as_deref().or_else(|| self.file.get(key).map(String::as_str))
    }

    pub fn nmax(&self) -> Result<u32, Failure> {
        parse_u32("nmax", self.lookup(&self.nmax, "nmax"), 120)
    }

    pub fn tol(&self) -> Result<f64, Failure> {
        parse_f64("tol", self.lookup(&self.tol, "tol"), 1e-10)
    }

    pub fn out(&self) -> Option<String> {
        self.lookup(&self.out, "out").map(str::to_string)
    }

    pub fn format(&self) -> Result<Format, Failure> {
        match self.lookup(&self.format, "format").unwrap_or("csv") {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Failure::invalid(format!(
                "format must be csv or json, got {other}"
            ))),
        }
    }

    pub fn u32_value(&self, flag: &Option<String>, key: &str, default: u32) -> Result<u32, Failure> {
        parse_u32(key, self.lookup(flag, key), default)
    }

    pub fn usize_value(
        &self,
        flag: &Option<String>,
        key: &str,
        default: usize,
    ) -> Result<usize, Failure> {
        let text = match self.lookup(flag, key) {
            None => return Ok(default),
            Some(text) => text,
        };
        text.parse()
            .map_err(|_| Failure::invalid(format!("{key} must be a non-negative integer, got {text}")))
    }

    pub fn f64_value(&self, flag: &Option<String>, key: &str, default: f64) -> Result<f64, Failure> {
        parse_f64(key, self.lookup(flag, key), default)
    }

    pub fn text_value(&self, flag: &Option<String>, key: &str, default: &str) -> String {
        self.lookup(flag, key).unwrap_or(default).to_string()
    }

    /// Switches have no value form on the command line, so a config file is
    /// the only place one can be written as `true` or `false`.
    pub fn bool_value(&self, flag: bool, key: &str) -> Result<bool, Failure> {
        if flag {
            return Ok(true);
        }
        match self.file.get(key).map(String::as_str) {
            None => Ok(false),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(other) => Err(Failure::invalid(format!(
                "{key} must be true or false, got {other}"
            ))),
        }
    }

    /// Displacement for diagonalization paths: a decimal or a fraction.
    pub fn displacement(&self, flag: &Option<String>, default: f64) -> Result<f64, Failure> {
        let text = match self.lookup(flag, "c") {
            None => return Ok(default),
            Some(text) => text,
        };
        if text.contains('/') {
            let fraction: RationalC = text
                .parse()
                .map_err(|err: deltabox::Error| Failure::invalid(err.to_string()))?;
            return Ok(fraction.value());
        }
        text.parse()
            .map_err(|_| Failure::invalid(format!("c must be a decimal or p/q, got {text}")))
    }

    /// Displacement for divisibility-based paths: a fraction only.
    pub fn fraction(&self, flag: &Option<String>) -> Result<Option<RationalC>, Failure> {
        let text = match self.lookup(flag, "c") {
            None => return Ok(None),
            Some(text) => text,
        };
        if !text.contains('/') {
            return Err(Failure::invalid(format!(
                "this command needs c as an exact fraction p/q, got {text}"
            )));
        }
        let fraction: RationalC = text
            .parse()
            .map_err(|err: deltabox::Error| Failure::invalid(err.to_string()))?;
        Ok(Some(fraction))
    }

    pub fn sector(
        &self,
        sigma_flag: &Option<String>,
        pi_flag: &Option<String>,
    ) -> Result<Sector, Failure> {
        let sigma = parse_sign("sigma", self.lookup(sigma_flag, "sigma"))?;
        let pi = parse_sign("pi", self.lookup(pi_flag, "pi"))?;
        Sector::from_signs(sigma, pi).map_err(|err| Failure::invalid(err.to_string()))
    }
}

fn parse_u32(key: &str, text: Option<&str>, default: u32) -> Result<u32, Failure> {
    match text {
        None => Ok(default),
        Some(text) => text
            .parse()
            .map_err(|_| Failure::invalid(format!("{key} must be a positive integer, got {text}"))),
    }
}

fn parse_f64(key: &str, text: Option<&str>, default: f64) -> Result<f64, Failure> {
    match text {
        None => Ok(default),
        Some(text) => text
            .parse()
            .map_err(|_| Failure::invalid(format!("{key} must be a number, got {text}"))),
    }
}

fn parse_sign(key: &str, text: Option<&str>) -> Result<i32, Failure> {
    match text.unwrap_or("+1") {
        "+1" | "1" => Ok(1),
        "-1" => Ok(-1),
        other => Err(Failure::invalid(format!(
            "{key} must be +1 or -1, got {other}"
        ))),
    }
}
