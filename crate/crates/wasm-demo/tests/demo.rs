use trpca_core::imaging::stack_to_tensor;
use trpca_core::{average_rank, tubal_rank};
use trpca_wasm_demo::demo::{denoise_synthetic, phase_cell, synthetic_rgb, tsvt_spectrum};

#[test]
fn synthetic_image_is_nearly_low_rank() {
    let t = stack_to_tensor(&synthetic_rgb(64).unwrap());
    assert_eq!(t.shape(), (64, 64, 3));
    // byte rounding adds small full-rank noise; a loose cutoff sees the structure
    assert!(average_rank(&t, 1e-2).unwrap() <= 12.0);
    assert!(tubal_rank(&t, 1e-2).unwrap() < tubal_rank(&t, 1e-14).unwrap());
}

#[test]
fn denoise_improves_on_the_corrupted_image() {
    let d = denoise_synthetic(40, 0.1, 3).unwrap();
    for buf in [&d.clean, &d.corrupted, &d.recovered, &d.sparse, &d.baseline] {
        assert_eq!(buf.len(), 4 * 40 * 40);
        assert!(buf.iter().skip(3).step_by(4).all(|&a| a == 255));
    }
    assert!(d.psnr_trpca > d.psnr_corrupted + 10.0, "{} vs {}", d.psnr_trpca, d.psnr_corrupted);
    assert!(d.psnr_baseline > d.psnr_corrupted);
    assert!(denoise_synthetic(4, 0.1, 3).is_err());
    assert!(denoise_synthetic(40, 1.5, 3).is_err());
}

#[test]
fn spectrum_is_shrunk_by_tau() {
    let s = tsvt_spectrum(12, 5, 2, 0.05, 0.2, 1).unwrap();
    assert_eq!(s.before.len(), 5);
    for (b, a) in s.before.iter().zip(&s.after) {
        for (x, y) in b.iter().zip(a) {
            assert!((y - (x - 0.2).max(0.0)).abs() <= 1e-10, "{x} -> {y}");
        }
    }
    assert!(s.tnn_after < s.tnn_before);
    assert_eq!(s.rank_before, 12);
    assert!(s.rank_after < s.rank_before);
    assert!(tsvt_spectrum(12, 5, 2, 0.05, 0.0, 1).is_err());
}

#[test]
fn phase_cells_at_the_corners() {
    let easy = phase_cell(20, 6, 0.05, 0.02, 4).unwrap();
    assert!(easy.outcome.success && easy.rank == 1);
    let hard = phase_cell(20, 6, 0.4, 0.4, 4).unwrap();
    assert!(!hard.outcome.success && hard.rank == 8);
}
