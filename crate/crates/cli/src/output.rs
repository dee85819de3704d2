use std::fmt::Write;

use gw_core::rational::format_rational;
use gw_core::InvariantTable;
use serde::Serialize;

use crate::args::Format;

#[derive(Serialize)]
struct JsonTable<'a> {
    kind: &'a str,
    d_max: u32,
    values: Vec<JsonValue>,
    route: &'a str,
}

#[derive(Serialize)]
struct JsonValue {
    d: u32,
    #[serde(rename = "N")]
    n: String,
}

/// Renders `table` in the requested format. `route` is the label printed
/// alongside (`"all"` when several routes agreed).
pub fn render(table: &InvariantTable, route: &str, format: Format) -> String {
    let rows: Vec<(u32, String)> = table.iter().map(|(d, n)| (d, format_rational(n))).collect();
    match format {
        Format::Table => {
            let wd = rows.iter().map(|(d, _)| d.to_string().len()).max().unwrap_or(1).max(1);
            let wn = rows.iter().map(|(_, n)| n.len()).max().unwrap_or(1).max(1);
            let mut out = format!("# {} invariants, route {}\n", table.kind(), route);
            writeln!(out, "{:>wd$}  {:>wn$}", "d", "N").unwrap();
            for (d, n) in &rows {
                writeln!(out, "{d:>wd$}  {n:>wn$}").unwrap();
            }
            out
        }
        Format::Csv => {
            let mut out = String::from("d,N\n");
            for (d, n) in &rows {
                writeln!(out, "{d},{n}").unwrap();
            }
            out
        }
        Format::Json => {
            let json = JsonTable {
                kind: table.kind().as_str(),
                d_max: table.d_max(),
                values: rows.into_iter().map(|(d, n)| JsonValue { d, n }).collect(),
                route,
            };
            let mut out = serde_json::to_string(&json).expect("table serializes");
            out.push('\n');
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gw_core::rational::int;
    use gw_core::{InvariantKind, Route};

    fn table() -> InvariantTable {
        InvariantTable::new(InvariantKind::Rational, vec![int(1), int(1), int(12)], Route::Wdvv).unwrap()
    }

    #[test]
    fn formats() {
        assert_eq!(
            render(&table(), "wdvv", Format::Table),
            "# rational invariants, route wdvv\nd   N\n1   1\n2   1\n3  12\n"
        );
        assert_eq!(render(&table(), "wdvv", Format::Csv), "d,N\n1,1\n2,1\n3,12\n");
        assert_eq!(
            render(&table().prefix(2).unwrap(), "wdvv", Format::Json),
            "{\"kind\":\"rational\",\"d_max\":2,\"values\":[{\"d\":1,\"N\":\"1\"},{\"d\":2,\"N\":\"1\"}],\"route\":\"wdvv\"}\n"
        );
    }
}
