use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use trpca_core::io::{load_tensor, save_tensor};
use trpca_core::netpbm::{load_pnm, save_pnm, PnmImage, PnmKind};
use trpca_core::{identity_tensor, Tensor3, TensorDims};

fn trpca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trpca")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).map(str::trim))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn tsvd_of_identity_and_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let id = path(dir.path(), "id.tns");
    save_tensor(&id, &identity_tensor(4, 3).unwrap()).unwrap();
    let o = trpca(&["tsvd", &id]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(field(&text, "tubal_rank"), "4");
    assert_eq!(field(&text, "tnn").parse::<f64>().unwrap(), 4.0);
    assert_eq!(field(&text, "multi_rank"), "[4, 4, 4]");

    let json: serde_json::Value = serde_json::from_slice(&trpca(&["tsvd", &id, "--json"]).stdout).unwrap();
    assert_eq!(json["tubal_rank"], 4);
    assert!((json["incoherence"]["mu_u"].as_f64().unwrap() - 3.0).abs() < 1e-12);

    let zeros = path(dir.path(), "z.tns");
    save_tensor(&zeros, &Tensor3::zeros(TensorDims::new(3, 2, 2).unwrap())).unwrap();
    let text = stdout(&trpca(&["tsvd", &zeros]));
    assert_eq!(field(&text, "tubal_rank"), "0");
    assert_eq!(field(&text, "tnn").parse::<f64>().unwrap(), 0.0);
}

#[test]
fn bad_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.tns");
    fs::write(&bad, b"TNX3\0\0\0\0").unwrap();
    let o = trpca(&["tsvd", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("format error"));

    assert_eq!(trpca(&["tsvd", &path(dir.path(), "missing.tns")]).status.code(), Some(2));
    assert_eq!(trpca(&["solve"]).status.code(), Some(2));

    let txt = path(dir.path(), "image.png");
    fs::write(&txt, b"\x89PNG\r\n").unwrap();
    assert_eq!(trpca(&["denoise", &txt, "--out-dir", &path(dir.path(), "o")]).status.code(), Some(2));
}

#[test]
fn solve_round_trip_and_default_lambda() {
    let dir = tempfile::tempdir().unwrap();
    let x = path(dir.path(), "x.tns");
    let gen = trpca(&[
        "gen", "--n1", "30", "--n2", "24", "--n3", "5", "--rank", "2", "--m", "150", "--seed", "3", "--out", &x,
    ]);
    assert!(gen.status.success());
    assert!(String::from_utf8_lossy(&gen.stderr).contains("seed=3"));

    let (l, e) = (path(dir.path(), "l.tns"), path(dir.path(), "e.tns"));
    let o = trpca(&["solve", &x, "--out-L", &l, "--out-E", &e]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lambda: f64 = field(&text, "lambda").parse().unwrap();
    assert!((lambda - 1.0 / (30.0f64 * 5.0).sqrt()).abs() < 1e-15);
    assert_eq!(field(&text, "converged"), "true");
    assert_eq!(field(&text, "tubal_rank"), "2");

    let sum = &load_tensor(&l).unwrap() + &load_tensor(&e).unwrap();
    assert!(sum.max_abs_diff(&load_tensor(&x).unwrap()).unwrap() <= 1e-7);

    let text = stdout(&trpca(&["solve", &x, "--lambda", "0.25"]));
    assert_eq!(field(&text, "lambda").parse::<f64>().unwrap(), 0.25);

    let cfg = path(dir.path(), "c.cfg");
    fs::write(&cfg, "max_iter = 3\n").unwrap();
    assert_eq!(trpca(&["solve", &x, "--config", &cfg]).status.code(), Some(3));
    fs::write(&cfg, "rho = 0.5\n").unwrap();
    assert_eq!(trpca(&["solve", &x, "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn table1_rows_and_phase_matrix() {
    let o = trpca(&["table1", "--n", "16", "--n3", "4", "--seeds", "3", "--seed", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("n1,n2,n3,rank,"));
    assert!(lines[1..].iter().all(|l| l.starts_with("16,16,4,2,uniform,102,")));
    assert_eq!(text, stdout(&trpca(&["table1", "--n", "16", "--n3", "4", "--seeds", "3", "--seed", "1"])));

    let o = trpca(&["phase", "--n", "10", "--n3", "3", "--grid", "4", "--trials", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.len() == 5));
    assert_eq!(rows[1][0], "0.02");
    assert_eq!(rows[0][4], "0.4");
}

fn gradient_ppm(w: usize, h: usize) -> PnmImage {
    let samples = (0..w * h)
        .flat_map(|p| {
            let (i, j) = (p / w, p % w);
            [(8 * i) as u8, (6 * j) as u8, (3 * i + 2 * j) as u8]
        })
        .collect();
    PnmImage::new(PnmKind::Color, w, h, samples).unwrap()
}

#[test]
fn denoise_color_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "grad.ppm");
    save_pnm(&input, &gradient_ppm(20, 16)).unwrap();
    let out = dir.path().join("out");
    let report = path(dir.path(), "report.csv");
    for _ in 0..2 {
        let o = trpca(&[
            "denoise", &input, "--fraction", "0.1", "--seed", "7", "--baseline", "--out-dir",
            out.to_str().unwrap(), "--report", &report,
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["corrupted", "lowrank", "sparse", "baseline"] {
        let img = load_pnm(out.join(format!("grad_{name}.ppm"))).unwrap();
        assert_eq!((img.kind, img.width, img.height), (PnmKind::Color, 20, 16));
    }
    let mask = load_pnm(out.join("grad_mask.pgm")).unwrap();
    let set = mask.samples.iter().filter(|&&v| v == 255).count();
    assert!((32..=96).contains(&set), "{set}");

    let csv = fs::read_to_string(&report).unwrap();
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("file,frames,fraction,seed,psnr_trpca,psnr_baseline"));
    assert_eq!(lines[1], lines[2]);
    let cols: Vec<_> = lines[1].split(',').collect();
    assert!(cols[5].parse::<f64>().is_ok());
}

#[test]
fn zero_fraction_returns_low_rank_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "flat.pgm");
    // rank-one grayscale frame
    let samples = (0..12 * 10).map(|p| ((1 + p / 10) * (2 + p % 10)) as u8).collect();
    save_pnm(&input, &PnmImage::new(PnmKind::Gray, 10, 12, samples).unwrap()).unwrap();
    let out = dir.path().join("o");
    let o = trpca(&["denoise", &input, "--fraction", "0", "--out-dir", out.to_str().unwrap()]);
    assert!(o.status.success());
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let psnr = row.split(',').nth(4).unwrap();
    assert!(psnr == "inf" || psnr.parse::<f64>().unwrap() >= 60.0, "{row}");
    assert_eq!(load_pnm(out.join("flat_lowrank.pgm")).unwrap(), load_pnm(&input).unwrap());
}

#[test]
fn denoise_directory_of_frames() {
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("faces");
    fs::create_dir(&frames).unwrap();
    let frame: Vec<u8> = (0..14 * 12).map(|p| (40 + 3 * (p / 12) + 2 * (p % 12)) as u8).collect();
    for k in 0..5 {
        let img = PnmImage::new(PnmKind::Gray, 12, 14, frame.clone()).unwrap();
        save_pnm(frames.join(format!("{k:02}.pgm")), &img).unwrap();
    }
    fs::write(frames.join("notes.txt"), "ignored").unwrap();
    let out = dir.path().join("o");
    let o = trpca(&["denoise", frames.to_str().unwrap(), "--fraction", "0.15", "--out-dir", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("faces,5,0.15,0,"));
    for k in 0..5 {
        assert!(out.join(format!("faces_lowrank_{k:03}.pgm")).exists());
        let mask = load_pnm(out.join(format!("faces_mask_{k:03}.pgm"))).unwrap();
        assert_eq!(mask.samples.iter().filter(|&&v| v == 255).count(), 25);
    }
}
