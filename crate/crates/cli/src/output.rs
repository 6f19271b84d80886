use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::CliError;

pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Numerical(format!("cannot encode output: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn csv<I>(header: &[&str], records: I) -> Result<String, CliError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = ::csv::Writer::from_writer(Vec::new());
    let encode = |e: ::csv::Error| CliError::Numerical(format!("cannot encode CSV: {e}"));
    w.write_record(header).map_err(encode)?;
    for r in records {
        w.write_record(&r).map_err(encode)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Numerical(format!("cannot encode CSV: {e}")))?;
    Ok(String::from_utf8(bytes).expect("CSV fields are UTF-8"))
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    let result = match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    result.map_err(|e| {
        let target = out.map_or("standard output".into(), |p| p.display().to_string());
        CliError::Invalid(format!("cannot write {target}: {e}"))
    })
}
