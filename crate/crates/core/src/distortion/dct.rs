//! Blockwise 8x8 DCT quantization used by the compression distortion.

use crate::image::FloatPlane;

/// Standard JPEG luminance quantization table (Annex K).
const LUMA_QUANT: [f64; 64] = [
    16.0, 11.0, 10.0, 16.0, 24.0, 40.0, 51.0, 61.0, //
    12.0, 12.0, 14.0, 19.0, 26.0, 58.0, 60.0, 55.0, //
    14.0, 13.0, 16.0, 24.0, 40.0, 57.0, 69.0, 56.0, //
    14.0, 17.0, 22.0, 29.0, 51.0, 87.0, 80.0, 62.0, //
    18.0, 22.0, 37.0, 56.0, 68.0, 109.0, 103.0, 77.0, //
    24.0, 35.0, 55.0, 64.0, 81.0, 104.0, 113.0, 92.0, //
    49.0, 64.0, 78.0, 87.0, 103.0, 121.0, 120.0, 101.0, //
    72.0, 92.0, 95.0, 98.0, 112.0, 100.0, 103.0, 99.0,
];

/// Scales the luminance table for quality q in [1, 100] (IJG convention).
pub fn quant_table(quality: u32) -> [f64; 64] {
    let q = quality.clamp(1, 100);
    let scale = if q < 50 { 5000.0 / q as f64 } else { 200.0 - 2.0 * q as f64 };
    let mut table = [0.0; 64];
    for (i, slot) in table.iter_mut().enumerate() {
        *slot = ((LUMA_QUANT[i] * scale + 50.0) / 100.0).floor().clamp(1.0, 255.0);
    }
    table
}

/// Forward orthonormal 8-point DCT-II basis, row u, column x.
fn dct_basis() -> [[f64; 8]; 8] {
    let mut c = [[0.0; 8]; 8];
    for (u, row) in c.iter_mut().enumerate() {
        let alpha = if u == 0 { (1.0f64 / 8.0).sqrt() } else { (2.0f64 / 8.0).sqrt() };
        for (x, slot) in row.iter_mut().enumerate() {
            *slot = alpha * ((2.0 * x as f64 + 1.0) * u as f64 * std::f64::consts::PI / 16.0).cos();
        }
    }
    c
}

/// Quantizes every 8x8 block of the plane through the scaled table.
///
/// The plane is processed in place block by block; partial edge blocks are
/// handled by edge replication before the transform and cropped after.
pub fn block_dct_quantize(plane: &FloatPlane, quality: u32) -> FloatPlane {
    let table = quant_table(quality);
    let basis = dct_basis();
    let (w, h) = (plane.width(), plane.height());
    let mut out = FloatPlane::zeros(w, h);
    let mut block = [[0.0f64; 8]; 8];
    let mut coef = [[0.0f64; 8]; 8];
    for by in (0..h).step_by(8) {
        for bx in (0..w).step_by(8) {
            // Gather with edge replication and level shift.
            for (yy, row) in block.iter_mut().enumerate() {
                let sy = (by + yy).min(h - 1);
                for (xx, v) in row.iter_mut().enumerate() {
                    let sx = (bx + xx).min(w - 1);
                    *v = plane.get(sx, sy) - 128.0;
                }
            }
            forward_dct(&basis, &block, &mut coef);
            for (i, row) in coef.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    let q = table[i * 8 + j];
                    *v = (*v / q).round() * q;
                }
            }
            inverse_dct(&basis, &coef, &mut block);
            for (yy, row) in block.iter().enumerate() {
                let sy = by + yy;
                if sy >= h {
                    break;
                }
                for (xx, &v) in row.iter().enumerate() {
                    let sx = bx + xx;
                    if sx >= w {
                        break;
                    }
                    out.set(sx, sy, (v + 128.0).clamp(0.0, 255.0));
                }
            }
        }
    }
    out
}

/// F = C * B * C^T
fn forward_dct(basis: &[[f64; 8]; 8], block: &[[f64; 8]; 8], out: &mut [[f64; 8]; 8]) {
    let mut tmp = [[0.0; 8]; 8];
    for u in 0..8 {
        for x in 0..8 {
            let mut acc = 0.0;
            for y in 0..8 {
                acc += basis[u][y] * block[y][x];
            }
            tmp[u][x] = acc;
        }
    }
    for u in 0..8 {
        for v in 0..8 {
            let mut acc = 0.0;
            for x in 0..8 {
                acc += tmp[u][x] * basis[v][x];
            }
            out[u][v] = acc;
        }
    }
}

/// B = C^T * F * C
fn inverse_dct(basis: &[[f64; 8]; 8], coef: &[[f64; 8]; 8], out: &mut [[f64; 8]; 8]) {
    let mut tmp = [[0.0; 8]; 8];
    for y in 0..8 {
        for v in 0..8 {
            let mut acc = 0.0;
            for u in 0..8 {
                acc += basis[u][y] * coef[u][v];
            }
            tmp[y][v] = acc;
        }
    }
    for y in 0..8 {
        for x in 0..8 {
            let mut acc = 0.0;
            for v in 0..8 {
                acc += tmp[y][v] * basis[v][x];
            }
            out[y][x] = acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dct_roundtrips_without_quantization() {
        let basis = dct_basis();
        let mut block = [[0.0; 8]; 8];
        for (y, row) in block.iter_mut().enumerate() {
            for (x, v) in row.iter_mut().enumerate() {
                *v = ((x * 13 + y * 7) % 97) as f64 - 48.0;
            }
        }
        let mut coef = [[0.0; 8]; 8];
        let mut back = [[0.0; 8]; 8];
        forward_dct(&basis, &block, &mut coef);
        inverse_dct(&basis, &coef, &mut back);
        for y in 0..8 {
            for x in 0..8 {
                assert!((block[y][x] - back[y][x]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn quality_scaling_is_monotone() {
        let t90 = quant_table(90);
        let t10 = quant_table(10);
        for i in 0..64 {
            assert!(t10[i] >= t90[i]);
        }
        // q=50 is the unscaled table.
        let t50 = quant_table(50);
        for i in 0..64 {
            assert!((t50[i] - LUMA_QUANT[i].max(1.0)).abs() <= 1.0);
        }
    }

    #[test]
    fn constant_block_survives_quantization() {
        let plane = FloatPlane::filled(16, 16, 128.0);
        let out = block_dct_quantize(&plane, 10);
        for &v in out.data() {
            assert!((v - 128.0).abs() < 1e-9);
        }
    }

    #[test]
    fn harsh_quality_changes_textured_plane() {
        let vals: Vec<f64> = (0..256).map(|i| ((i * 53) % 256) as f64).collect();
        let plane = FloatPlane::new(16, 16, vals).unwrap();
        let out = block_dct_quantize(&plane, 10);
        let diff: f64 = plane
            .data()
            .iter()
            .zip(out.data())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            / 256.0;
        assert!(diff > 5.0, "mean abs diff {diff}");
    }
}
