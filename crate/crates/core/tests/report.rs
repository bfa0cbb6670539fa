use cliffgrav::report::*;
use cliffgrav::suite::{self, PointSource, SuiteConfig, IDENTITIES};

fn small(scenario: &str) -> SuiteConfig {
    SuiteConfig {
        scenario: scenario.into(),
        points: PointSource::Builtin(2),
        ..SuiteConfig::default()
    }
}

fn empty() -> Report {
    let mut r = suite::run_suite(&small("minkowski")).unwrap();
    r.identities.clear();
    r.summary = Summary::from_rows(&r.identities);
    r
}

#[test]
fn every_identity_is_listed_in_order() {
    let r = suite::run_suite(&small("flrw_flat")).unwrap();
    let ids: Vec<_> = r.identities.iter().map(|x| x.identity_id.as_str()).collect();
    let want: Vec<_> = IDENTITIES.iter().map(|i| i.id).collect();
    assert_eq!(ids, want);
    assert!(ids.windows(2).all(|w| w[0] < w[1]));
    for row in &r.identities {
        match row.status {
            Status::Skipped => {
                assert!(row.reason.is_some() && row.max_residual.is_none() && !row.pass);
                assert_eq!(row.points_evaluated, 0);
            }
            _ => {
                let res = row.max_residual.unwrap();
                assert_eq!(row.pass, res <= row.tolerance);
                assert_eq!(row.pass, row.status == Status::Pass);
            }
        }
    }
    assert_eq!(r.summary, Summary::from_rows(&r.identities));
    assert_eq!(r.schema, SCHEMA);
}

#[test]
fn json_round_trips() {
    let r = suite::run_suite(&small("perturbed_flat")).unwrap();
    let text = to_json(&r).unwrap();
    let back = from_json(&text).unwrap();
    assert_eq!(to_json(&back).unwrap(), text);
    assert_eq!(back.identities.len(), r.identities.len());
}

#[test]
fn unknown_fields_are_rejected() {
    let text = to_json(&empty()).unwrap();
    let bad = text.replacen("\"schema\"", "\"extra\": 1,\n  \"schema\"", 1);
    assert!(from_json(&bad).is_err());
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v.as_object_mut().unwrap().remove("summary");
    assert!(from_json(&v.to_string()).is_err());
}

#[test]
fn empty_report_is_valid() {
    let r = empty();
    let text = to_json(&r).unwrap();
    assert!(text.contains("\"identities\": []"));
    assert_eq!(from_json(&text).unwrap(), r);
    assert_eq!(to_csv(&r).unwrap(), "identity_id,status,points_evaluated,max_residual,tolerance,kind,reason\n");
    assert!(to_text(&r).ends_with("summary: 0 pass, 0 fail, 0 skipped\n"));
}

#[test]
fn output_is_byte_stable() {
    let a = suite::run_suite(&small("schwarzschild")).unwrap();
    let b = suite::run_suite(&small("schwarzschild")).unwrap();
    for f in [Format::Json, Format::Csv, Format::Text] {
        assert_eq!(render(&a, f).unwrap(), render(&b, f).unwrap());
    }
    let json = to_json(&a).unwrap();
    assert!(json.ends_with("}\n") && !json.contains('\r'));
}

#[test]
fn floats_keep_seventeen_digits() {
    assert_eq!(format_float(0.1), "1.0000000000000001e-1");
    assert_eq!(format_float(-4.8e-5), "-4.8000000000000001e-5");
    assert_eq!(format_float(0.0), "0.0000000000000000e0");
    assert_eq!(format_float(f64::NAN), "null");
    for x in [0.1, 1.0 / 3.0, 6.02e23, -1e-300] {
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
    }
}

#[test]
fn keys_are_sorted() {
    let text = to_json(&empty()).unwrap();
    let top: Vec<_> = text.lines().filter(|l| l.starts_with("  \"")).map(|l| l.trim().split('"').nth(1).unwrap()).collect();
    assert_eq!(top, ["environment", "identities", "schema", "summary"]);
}

#[test]
fn csv_has_one_row_per_identity() {
    let r = suite::run_suite(&small("rindler")).unwrap();
    let csv = to_csv(&r).unwrap();
    assert_eq!(csv.lines().count(), IDENTITIES.len() + 1);
    assert!(csv.lines().any(|l| l.starts_with("scenario.pullback_wiring,skipped,0,,")));
}
