use potts::fixtures::{FIGURE1_JSON, FIGURE2_JSON};
use potts::io::{instance_to_json, parse_instance};
use sha2::{Digest, Sha256};

fn sha256(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[test]
fn bundled_fixtures_are_unchanged() {
    assert_eq!(
        sha256(FIGURE1_JSON),
        "19f6877325dd3900e08361b847774e9d78c22e00c4d5766d87719d1e49a59aa7"
    );
    assert_eq!(
        sha256(FIGURE2_JSON),
        "8d918e44d87e02c37a8a738d95acac9ab8b44c4add1a96034b8beb6cc7fffaac"
    );
}

#[test]
fn fixture_files_match_embedded_copies() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    assert_eq!(std::fs::read_to_string(format!("{dir}/fig1.json")).unwrap(), FIGURE1_JSON);
    assert_eq!(std::fs::read_to_string(format!("{dir}/fig2.json")).unwrap(), FIGURE2_JSON);
}

#[test]
fn finite_fixture_round_trips() {
    let fig2 = parse_instance(FIGURE2_JSON).unwrap();
    let text = instance_to_json(&fig2);
    assert_eq!(parse_instance(&text).unwrap(), fig2);
}
