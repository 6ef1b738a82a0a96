//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use mgo::geocheck::DEFAULT_SEED;
use mgo_verify::{outcome, suite, Outcome};
use serde_json::Value;

fn print(o: &Outcome) {
    println!("{} criterion {:>2} {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.id, o.name, o.detail);
}

fn main() {
    let (first, json_a) = suite(DEFAULT_SEED, true);
    for o in &first {
        print(o);
    }
    let (_, json_b) = suite(DEFAULT_SEED, false);
    let same = json_a == json_b;
    let det = outcome(
        10,
        "determinism",
        same,
        format!("two runs, {} and {} bytes, identical: {same}", json_a.len(), json_b.len()),
        Value::Null,
    );
    print(&det);
    let failed = first.iter().chain([&det]).filter(|o| !o.pass).count();
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
