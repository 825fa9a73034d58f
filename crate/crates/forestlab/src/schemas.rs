//! JSON Schemas for every document the tool reads or writes.

pub const DOCUMENT: &str = include_str!("../schemas/document.schema.json");
pub const LAW: &str = include_str!("../schemas/law.schema.json");
pub const CERTIFICATE: &str = include_str!("../schemas/certificate.schema.json");
pub const DUMP_LINE: &str = include_str!("../schemas/dump-line.schema.json");
pub const GRAPH: &str = include_str!("../schemas/graph.schema.json");
pub const GROUP: &str = include_str!("../schemas/group.schema.json");
pub const PROBABILITY_TABLE: &str = include_str!("../schemas/probability-table.schema.json");

pub const ALL: &[(&str, &str)] = &[
    ("document", DOCUMENT),
    ("law", LAW),
    ("certificate", CERTIFICATE),
    ("dump-line", DUMP_LINE),
    ("graph", GRAPH),
    ("group", GROUP),
    ("probability-table", PROBABILITY_TABLE),
];

#[cfg(test)]
mod tests {
    #[test]
    fn schemas_are_json() {
        for (name, s) in super::ALL {
            let v: serde_json::Value = serde_json::from_str(s).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(v.get("$schema").is_some(), "{name}");
        }
    }
}
