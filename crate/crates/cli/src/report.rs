use serde_json::Value;

use crate::Format;

/// Process exit statuses other than success.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Usage = 1,
    Mismatch = 2,
    Resource = 3,
    Internal = 4,
}

/// Everything a subcommand can print. Formats a command does not support
/// are left as `None` and rejected as a usage error.
pub struct Report {
    pub plain: String,
    pub json: Value,
    pub csv: Option<String>,
    pub bfile: Option<String>,
    pub exit: Exit,
}

impl Report {
    pub fn new(plain: String, json: Value) -> Self {
        Report {
            plain,
            json,
            csv: None,
            bfile: None,
            exit: Exit::Ok,
        }
    }

    pub fn csv(mut self, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Self {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).expect("in-memory write");
        for row in rows {
            w.write_record(&row).expect("in-memory write");
        }
        let bytes = w.into_inner().expect("in-memory flush");
        self.csv = Some(String::from_utf8(bytes).expect("fields are utf-8"));
        self
    }

    pub fn bfile(mut self, text: String) -> Self {
        self.bfile = Some(text);
        self
    }

    pub fn exit(mut self, exit: Exit) -> Self {
        self.exit = exit;
        self
    }

    pub fn render(&self, format: Format) -> Option<String> {
        match format {
            Format::Plain => Some(ensure_newline(self.plain.clone())),
            Format::Json => Some(ensure_newline(
                serde_json::to_string_pretty(&self.json).expect("json values always serialize"),
            )),
            Format::Csv => self.csv.clone(),
            Format::Bfile => self.bfile.clone(),
        }
    }
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

/// Joins displayable items with single spaces.
pub fn spaced<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}
