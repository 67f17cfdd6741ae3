//! Output format selection and destination handling.

use std::path::Path;

use crate::failure::Failure;

/// Table rendering format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Writes rendered output to the chosen destination, ending with a single
/// newline so files and pipes compare bytewise.
pub fn write_output(out: Option<&Path>, content: &str) -> Result<(), Failure> {
    let mut text = content.trim_end_matches('\n').to_string();
    text.push('\n');
    match out {
        None => {
            print!("{}", text);
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {}", path.display(), e))),
    }
}

/// Joins cells into a CSV line. Values never contain commas or quotes, so
/// no escaping is needed; this is asserted rather than silently assumed.
pub fn csv_line<I, T>(cells: I) -> String
where
    I: IntoIterator<Item = T>,
    T: AsRef<str>,
{
    let mut parts = Vec::new();
    for cell in cells {
        let cell = cell.as_ref();
        debug_assert!(
            !cell.contains(',') && !cell.contains('"') && !cell.contains('\n'),
            "cell {:?} would need CSV escaping",
            cell
        );
        parts.push(cell.to_string());
    }
    parts.join(",")
}

/// Renders a float so the text round-trips to the same bits.
pub fn render_f64(value: f64) -> String {
    let mut text = format!("{}", value);
    if !text.contains('.') && !text.contains('e') && !text.contains("inf") && !text.contains("NaN")
    {
        text.push_str(".0");
    }
    text
}
