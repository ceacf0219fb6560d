use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::Value;
use splint_core::Rational;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Aligned tables for reading.
    #[default]
    Text,
    /// One JSON object per line.
    Json,
}

/// Writes either the text lines or the JSON records of a command, never both.
pub struct Emitter {
    format: Format,
    out: io::StdoutLock<'static>,
}

impl Emitter {
    pub fn new(format: Format) -> Self {
        Emitter {
            format,
            out: io::stdout().lock(),
        }
    }

    pub fn is_text(&self) -> bool {
        self.format == Format::Text
    }

    pub fn line(&mut self, s: impl AsRef<str>) -> io::Result<()> {
        if self.is_text() {
            writeln!(self.out, "{}", s.as_ref())?;
        }
        Ok(())
    }

    pub fn table(&mut self, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
        if !self.is_text() {
            return Ok(());
        }
        let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
        for row in rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let render = |cells: Vec<&str>| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            format!("  {}", padded.join("  ").trim_end())
        };
        writeln!(self.out, "{}", render(header.to_vec()))?;
        for row in rows {
            writeln!(
                self.out,
                "{}",
                render(row.iter().map(String::as_str).collect())
            )?;
        }
        Ok(())
    }

    pub fn record(&mut self, v: Value) -> io::Result<()> {
        if !self.is_text() {
            writeln!(
                self.out,
                "{}",
                serde_json::to_string(&v).map_err(io::Error::other)?
            )?;
        }
        Ok(())
    }
}

pub fn labels(l: &[i64]) -> String {
    format!(
        "[{}]",
        l.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    )
}

pub fn rational_labels(l: &[Rational]) -> String {
    format!(
        "[{}]",
        l.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    )
}

pub fn rational_strings(l: &[Rational]) -> Vec<String> {
    l.iter().map(|x| x.to_string()).collect()
}

/// `1 + 3q + 9q^2`; `0` for the zero series.
pub fn series(c: &[i64]) -> String {
    let mut out = String::new();
    for (n, &x) in c.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let mag = x.unsigned_abs();
        if out.is_empty() {
            if x < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if x < 0 { " - " } else { " + " });
        }
        let coeff = if mag == 1 && n > 0 {
            String::new()
        } else {
            mag.to_string()
        };
        let power = match n {
            0 => String::new(),
            1 => "q".to_string(),
            _ => format!("q^{n}"),
        };
        out.push_str(&coeff);
        out.push_str(&power);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_formatting() {
        assert_eq!(series(&[1, 3, 9]), "1 + 3q + 9q^2");
        assert_eq!(series(&[0, -1, 0, 2]), "-q + 2q^3");
        assert_eq!(series(&[0, 0]), "0");
        assert_eq!(series(&[-2]), "-2");
    }

    #[test]
    fn label_formatting() {
        assert_eq!(labels(&[1, 0]), "[1, 0]");
        assert_eq!(rational_labels(&[Rational::new(1, 2)]), "[1/2]");
    }
}
