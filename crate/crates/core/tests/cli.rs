use std::fs;
use std::path::{Path, PathBuf};

use iqpredict::cli::run;
use iqpredict::iq_file::{read_iq, IqFormat};
use iqpredict::ComplexSequence;
use tempfile::TempDir;

fn iq(args: &[&str]) -> iqpredict::Result<String> {
    let mut out = Vec::new();
    run(std::iter::once("iqpredict").chain(args.iter().copied()), &mut out)?;
    Ok(String::from_utf8(out).unwrap())
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn load(p: &Path) -> ComplexSequence {
    read_iq(p, IqFormat::from_path(p)).unwrap()
}

fn generate(dir: &TempDir, name: &str, ratio: &str, len: &str) -> PathBuf {
    let p = path(dir, name);
    iq(&["generate", "--ratio", ratio, "--len", len, "--seed", "3", "--out", s(&p)]).unwrap();
    p
}

#[test]
fn encode_decode_round_trip_for_every_method() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "in.cf32", "0.5", "4096");
    let orig = load(&input);
    for method in ["timecorr", "rap1", "rap2", "rap3", "auto-best", "auto-bw"] {
        let res = path(&dir, &format!("{method}.cf32"));
        let meta = path(&dir, &format!("{method}.meta"));
        let back = path(&dir, &format!("{method}.out.cf32"));
        iq(&["encode", "--method", method, "--in", s(&input), "--out", s(&res), "--meta", s(&meta)]).unwrap();
        assert_eq!(load(&res).len(), orig.len(), "{method}");
        iq(&["decode", "--in", s(&res), "--meta", s(&meta), "--out", s(&back)]).unwrap();
        let err = load(&back).max_component_error(&orig);
        assert!(err <= 1e-6, "{method}: {err}");
    }
}

#[test]
fn csv_round_trip_is_exact() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "in.csv", "0.3", "1024");
    let orig = load(&input);
    let (res, meta, back) = (path(&dir, "r.csv"), path(&dir, "r.meta"), path(&dir, "back.csv"));
    iq(&["encode", "--method", "rap3", "--in", s(&input), "--out", s(&res), "--meta", s(&meta)]).unwrap();
    iq(&["decode", "--in", s(&res), "--meta", s(&meta), "--out", s(&back)]).unwrap();
    assert!(load(&back).max_component_error(&orig) <= 1e-9 * orig.mean_abs());
}

#[test]
fn cf32_storage_is_bit_exact() {
    let dir = TempDir::new().unwrap();
    let a = generate(&dir, "a.cf32", "0.4", "256");
    let seq = load(&a);
    let b = path(&dir, "b.cf32");
    iqpredict::iq_file::write_iq(&b, IqFormat::Cf32, &seq).unwrap();
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(fs::metadata(&a).unwrap().len(), 256 * 8);
}

#[test]
fn auto_best_picks_timecorr_for_narrow_band() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "narrow.cf32", "0.05", "65536");
    let meta = path(&dir, "n.meta");
    iq(&["encode", "--method", "auto-best", "--in", s(&input), "--out", s(&path(&dir, "n.cf32")), "--meta", s(&meta)])
        .unwrap();
    assert!(fs::read_to_string(&meta).unwrap().contains("method=timecorr"));
}

#[test]
fn custom_rap_parameters_land_in_meta() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "in.cf32", "0.5", "1024");
    let (res, meta, back) = (path(&dir, "r.cf32"), path(&dir, "r.meta"), path(&dir, "b.cf32"));
    iq(&[
        "encode", "--method", "rap2", "--in", s(&input), "--out", s(&res), "--meta", s(&meta),
        "--eps", "0.02,0.05", "--sat", "3,1.5", "--rotate", "0.1", "--quant", "0.0625",
    ])
    .unwrap();
    let text = fs::read_to_string(&meta).unwrap();
    for line in ["passes=2", "eps.1=0.02", "eps.2=0.05", "sat.2=1.5", "rotate=0.1", "quant=0.0625"] {
        assert!(text.lines().any(|l| l == line), "missing {line} in\n{text}");
    }
    iq(&["decode", "--in", s(&res), "--meta", s(&meta), "--out", s(&back)]).unwrap();
    assert!(load(&back).max_component_error(&load(&input)) <= 1e-6);
}

#[test]
fn wrong_meta_decodes_to_garbage() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "in.cf32", "0.5", "4096");
    let orig = load(&input);
    let (res, meta, back) = (path(&dir, "r.cf32"), path(&dir, "r.meta"), path(&dir, "b.cf32"));
    iq(&["encode", "--method", "rap1", "--in", s(&input), "--out", s(&res), "--meta", s(&meta)]).unwrap();
    let text = fs::read_to_string(&meta).unwrap().replace("eps.1=0.007", "eps.1=0.3");
    fs::write(&meta, text).unwrap();
    iq(&["decode", "--in", s(&res), "--meta", s(&meta), "--out", s(&back)]).unwrap();
    let decoded = load(&back);
    let mean_err = decoded.iter().zip(orig.iter()).map(|(a, b)| (a - b).norm()).sum::<f64>() / orig.len() as f64;
    assert!(mean_err > 0.1 * orig.mean_abs(), "{mean_err}");
}

#[test]
fn rejects_bad_input() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "in.cf32", "0.5", "64");
    let out = path(&dir, "o.cf32");
    let meta = path(&dir, "o.meta");

    // truncated cf32
    let short = path(&dir, "short.cf32");
    fs::write(&short, [0u8; 12]).unwrap();
    assert!(iq(&["decode", "--in", s(&short), "--meta", s(&meta), "--out", s(&out)]).is_err());

    // malformed csv
    let bad_csv = path(&dir, "bad.csv");
    fs::write(&bad_csv, "re,im\n1.0,nope\n").unwrap();
    assert!(iq(&["analyze", "--in", s(&bad_csv), "--out", s(&path(&dir, "a.csv"))]).is_err());

    // spectrum of a non power-of-two length
    let odd = path(&dir, "odd.csv");
    fs::write(&odd, "re,im\n1,0\n0,1\n-1,0\n").unwrap();
    assert!(iq(&["analyze", "--in", s(&odd), "--out", s(&path(&dir, "a.csv"))]).is_err());

    // bad or missing meta
    fs::write(&meta, "method=rap\npasses=2\neps.1=0.1\nsat.1=1\n").unwrap();
    assert!(iq(&["decode", "--in", s(&input), "--meta", s(&meta), "--out", s(&out)]).is_err());
    fs::write(&meta, "method=mystery\n").unwrap();
    assert!(iq(&["decode", "--in", s(&input), "--meta", s(&meta), "--out", s(&out)]).is_err());
    assert!(iq(&["decode", "--in", s(&input), "--meta", s(&path(&dir, "none.meta")), "--out", s(&out)]).is_err());

    // options that do not belong to the method
    assert!(iq(&["encode", "--method", "timecorr", "--in", s(&input), "--out", s(&out), "--meta", s(&meta), "--eps", "0.1"]).is_err());
    assert!(iq(&["encode", "--method", "rap1", "--in", s(&input), "--out", s(&out), "--meta", s(&meta), "--tc-eps", "0.1"]).is_err());
    assert!(iq(&["encode", "--method", "rap2", "--in", s(&input), "--out", s(&out), "--meta", s(&meta), "--eps", "0.1"]).is_err());

    assert!(iq(&["generate", "--ratio", "0.5", "--len", "100", "--out", s(&out)]).is_err());
    assert!(iq(&["frobnicate"]).is_err());
}

#[test]
fn analyze_writes_centred_spectrum() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "in.cf32", "0.5", "256");
    let out = path(&dir, "spec.csv");
    iq(&["analyze", "--in", s(&input), "--out", s(&out)]).unwrap();
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("freq,magnitude"));
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(first[0], -0.5);
    assert_eq!(text.lines().count(), 257);
}

#[test]
fn sweep_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.csv"), path(&dir, "b.csv"));
    for p in [&a, &b] {
        iq(&["sweep", "--out", s(p), "--trials", "2", "--len", "1024", "--seed", "5"]).unwrap();
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().next(), Some("ratio,timecorr,rap1,rap2,rap3"));
    assert_eq!(text.lines().count(), 20);
}

#[test]
fn spectra_writes_both_tables() {
    let dir = TempDir::new().unwrap();
    let out_dir = path(&dir, "spectra");
    iq(&["spectra", "--out-dir", s(&out_dir), "--len", "1024"]).unwrap();
    let tc = fs::read_to_string(out_dir.join("timecorr_spectra.csv")).unwrap();
    let rap = fs::read_to_string(out_dir.join("rap_spectra.csv")).unwrap();
    assert_eq!(tc.lines().next(), Some("freq,original_0.8,timecorr_0.2,timecorr_0.5,timecorr_0.8"));
    assert_eq!(rap.lines().next(), Some("freq,original_0.5,rap1,rap2_mm10,rap3_mm10"));
    assert_eq!(tc.lines().count(), 1025);
}

#[test]
fn select_reports_both_policies() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "in.cf32", "0.5", "16384");
    let report = iq(&["select", "--in", s(&input)]).unwrap();
    assert!(report.contains("by-bandwidth: rap3"), "{report}");
    assert!(report.contains("pick-best: rap3"), "{report}");
    for m in ["bypass", "timecorr", "rap1", "rap2", "rap3"] {
        assert!(report.lines().any(|l| l.trim_start().starts_with(m)), "{report}");
    }
}

#[test]
fn help_goes_to_output() {
    let text = iq(&["--help"]).unwrap();
    assert!(text.contains("encode") && text.contains("sweep"));
}
