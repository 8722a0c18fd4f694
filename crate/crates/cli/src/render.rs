//! Text rendering shared by the subcommands.

use serde::Serialize;

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

/// RFC 4180 quoting for the few fields that need it.
fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| field(c)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn index_value_csv<V: ToString>(rows: impl IntoIterator<Item = (i64, V)>) -> String {
    let rows: Vec<Vec<String>> = rows
        .into_iter()
        .map(|(i, v)| vec![i.to_string(), v.to_string()])
        .collect();
    csv(&["index", "value"], &rows)
}

pub fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}
