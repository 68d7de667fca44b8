use hyperlocus_core::atlas::{build, catalog, load, save};
use hyperlocus_core::ConfigurationRecord;

#[test]
fn every_catalog_entry_survives_a_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for entry in catalog() {
        let rec = build(entry.name).unwrap();
        let path = dir.path().join(format!("{}.json", entry.name));
        save(&rec, &path).unwrap();
        let (back, checks) = load(&path).unwrap();
        assert_eq!(back, rec, "{}", entry.name);
        assert!(!checks.is_empty(), "{}", entry.name);
        assert_eq!(back.incidence().unwrap().weak_table(), rec.incidence().unwrap().weak_table());
    }
}

#[test]
fn tampered_files_are_rejected() {
    let rec = build("d4").unwrap();
    let mut raw: serde_json::Value = serde_json::from_str(&rec.to_json().unwrap()).unwrap();
    // moving one point off its planes breaks the D4 validator
    raw["points"][0] = serde_json::json!(["1", "2", "3", "5"]);
    let err = ConfigurationRecord::from_json(&raw.to_string()).unwrap_err();
    assert!(err.to_string().contains("D4"), "{err}");

    let rec = build("a13-3").unwrap();
    let mut raw: serde_json::Value = serde_json::from_str(&rec.to_json().unwrap()).unwrap();
    raw["expected_weak_table"] = serde_json::json!({"3": 11, "4": 3, "5": 2});
    assert!(ConfigurationRecord::from_json(&raw.to_string()).is_err());

    raw["metadata"]["source"] = serde_json::json!("external-reference");
    raw["expected_weak_table"] = serde_json::json!({"3": 10, "4": 3, "5": 2});
    assert!(ConfigurationRecord::from_json(&raw.to_string()).is_err());
}

#[test]
fn parse_errors_report_position() {
    let text = "{\n  \"schema\": 1,\n  \"name\": oops\n}";
    let err = ConfigurationRecord::from_json(text).unwrap_err().to_string();
    assert!(err.contains("line 3"), "{err}");
}
