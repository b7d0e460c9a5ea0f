//! Output plumbing: resolved-config echo, fixed float formatting, and the
//! sink selection shared by every subcommand. CSV carries 12 significant
//! digits for readability; JSON carries 17 so values round-trip exactly.

use crate::Failure;
use std::fs::File;
use std::io::{self, BufWriter, Write};

pub fn fmt_csv(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn fmt_json(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn open_sink(out: Option<String>) -> Result<Box<dyn Write>, Failure> {
    match out {
        Some(path) => {
            let file = File::create(&path)
                .map_err(|err| Failure::invalid(format!("cannot create {path}: {err}")))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

pub fn finish(mut sink: Box<dyn Write>) -> Result<(), Failure> {
    sink.flush()
        .map_err(|err| Failure::numeric(format!("write failed: {err}")))
}

enum Entry {
    Int(i64),
    Float(f64),
    Text(String),
}

/// Resolved configuration of one run, echoed into the output so every file
/// records how it was produced. Entries keep insertion order.
pub struct Provenance {
    command: &'static str,
    entries: Vec<(&'static str, Entry)>,
}

impl Provenance {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            entries: Vec::new(),
        }
    }

    pub fn int(&mut self, key: &'static str, value: i64) -> &mut Self {
        self.entries.push((key, Entry::Int(value)));
        self
    }

    pub fn float(&mut self, key: &'static str, value: f64) -> &mut Self {
        self.entries.push((key, Entry::Float(value)));
        self
    }

    pub fn text(&mut self, key: &'static str, value: impl Into<String>) -> &mut Self {
        self.entries.push((key, Entry::Text(value.into())));
        self
    }

    /// `# `-prefixed header block for CSV files.
    pub fn csv_header(&self) -> String {
        let mut header = format!("# deltabox {}\n", self.command);
        for (key, entry) in &self.entries {
            let value = match entry {
                Entry::Int(v) => v.to_string(),
                Entry::Float(v) => fmt_csv(*v),
                Entry::Text(v) => v.clone(),
            };
            header.push_str(&format!("# {key} {value}\n"));
        }
        header
    }

    /// `"command": ..., "config": {...}` fields for a JSON document.
    pub fn json_fields(&self) -> String {
        let mut fields = format!("\"command\":\"{}\",\"config\":{{", self.command);
        for (i, (key, entry)) in self.entries.iter().enumerate() {
            if i > 0 {
                fields.push(',');
            }
            let value = match entry {
                Entry::Int(v) => v.to_string(),
                Entry::Float(v) => fmt_json(*v),
                Entry::Text(v) => format!("\"{}\"", escape(v)),
            };
            fields.push_str(&format!("\"{key}\":{value}"));
        }
        fields.push('}');
        fields
    }
}

fn escape(text: &str) -> String {
    text.chars()
        .flat_map(|ch| match ch {
            '"' => vec!['\\', '"'],
            '\\' => vec!['\\', '\\'],
            other => vec![other],
        })
        .collect()
}

/// Joins already-rendered JSON values into an array literal.
pub fn json_array<I: IntoIterator<Item = String>>(items: I) -> String {
    let mut out = String::from("[");
    for (i, item) in items.into_iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&item);
    }
    out.push(']');
    out
}

pub fn write_all(sink: &mut dyn Write, text: &str) -> Result<(), Failure> {
    sink.write_all(text.as_bytes())
        .map_err(|err| Failure::numeric(format!("write failed: {err}")))
}
