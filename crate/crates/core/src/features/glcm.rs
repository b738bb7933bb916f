//! Gray-level co-occurrence matrices and their Haralick-style properties.

use crate::error::{Error, Result};
use crate::image::QuantizedPlane;

/// Co-occurrence angles supported by the descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlcmAngle {
    Deg0,
    Deg45,
    Deg90,
    Deg135,
}

impl GlcmAngle {
    pub const ALL: [GlcmAngle; 4] = [
        GlcmAngle::Deg0,
        GlcmAngle::Deg45,
        GlcmAngle::Deg90,
        GlcmAngle::Deg135,
    ];

    /// Pixel displacement for distance `d`. Y grows downward, so 45 degrees
    /// points up-right.
    pub fn displacement(self, d: usize) -> (isize, isize) {
        let d = d as isize;
        match self {
            GlcmAngle::Deg0 => (d, 0),
            GlcmAngle::Deg45 => (d, -d),
            GlcmAngle::Deg90 => (0, -d),
            GlcmAngle::Deg135 => (-d, -d),
        }
    }

    pub fn degrees(self) -> u32 {
        match self {
            GlcmAngle::Deg0 => 0,
            GlcmAngle::Deg45 => 45,
            GlcmAngle::Deg90 => 90,
            GlcmAngle::Deg135 => 135,
        }
    }
}

/// Symmetric, normalized co-occurrence matrix P(i,j).
#[derive(Debug, Clone)]
pub struct Glcm {
    levels: usize,
    matrix: Vec<f64>,
    distance: usize,
    angle: GlcmAngle,
}

impl Glcm {
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn distance(&self) -> usize {
        self.distance
    }

    pub fn angle(&self) -> GlcmAngle {
        self.angle
    }

    #[inline]
    pub fn p(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.levels + j]
    }

    /// Builds a Glcm directly from a normalized matrix; test and oracle entry
    /// point.
    pub fn from_matrix(levels: usize, matrix: Vec<f64>, distance: usize, angle: GlcmAngle) -> Result<Self> {
        if matrix.len() != levels * levels {
            return Err(Error::dimension("matrix size mismatch"));
        }
        Ok(Glcm { levels, matrix, distance, angle })
    }
}

/// Counts co-occurring label pairs at the given displacement, symmetrizes,
/// and normalizes to total mass 1.
pub fn compute_glcm(
    plane: &QuantizedPlane,
    distance: usize,
    angle: GlcmAngle,
    levels: usize,
) -> Result<Glcm> {
    if distance == 0 {
        return Err(Error::domain("distance must be at least 1"));
    }
    if let Some(&bad) = plane.labels().iter().find(|&&l| l as usize >= levels) {
        return Err(Error::domain(format!("label {bad} exceeds GLCM level count {levels}")));
    }
    let (w, h) = (plane.width() as isize, plane.height() as isize);
    let (dx, dy) = angle.displacement(distance);
    let mut counts = vec![0u64; levels * levels];
    let mut total = 0u64;
    for y in 0..h {
        let ny = y + dy;
        if ny < 0 || ny >= h {
            continue;
        }
        for x in 0..w {
            let nx = x + dx;
            if nx < 0 || nx >= w {
                continue;
            }
            let a = plane.label(x as usize, y as usize) as usize;
            let b = plane.label(nx as usize, ny as usize) as usize;
            counts[a * levels + b] += 1;
            counts[b * levels + a] += 1;
            total += 2;
        }
    }
    if total == 0 {
        return Err(Error::domain(format!(
            "no pixel pairs at distance {distance}, angle {} on a {}x{} plane",
            angle.degrees(),
            plane.width(),
            plane.height()
        )));
    }
    let matrix = counts.iter().map(|&c| c as f64 / total as f64).collect();
    Ok(Glcm { levels, matrix, distance, angle })
}

/// The six scalar texture properties read off a GLCM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlcmFeatures {
    pub contrast: f64,
    pub dissimilarity: f64,
    pub homogeneity: f64,
    pub asm: f64,
    pub energy: f64,
    pub correlation: f64,
}

impl GlcmFeatures {
    pub const COUNT: usize = 6;

    pub fn as_array(&self) -> [f64; 6] {
        [
            self.contrast,
            self.dissimilarity,
            self.homogeneity,
            self.asm,
            self.energy,
            self.correlation,
        ]
    }
}

/// Evaluates contrast, dissimilarity, homogeneity, ASM, energy, and
/// correlation over the matrix.
///
/// Correlation is defined as 1 when the marginal variance vanishes: a
/// constant image is perfectly self-correlated, and the feature matrix must
/// stay NaN-free.
pub fn glcm_features(glcm: &Glcm) -> GlcmFeatures {
    let l = glcm.levels;
    let mut contrast = 0.0;
    let mut dissimilarity = 0.0;
    let mut homogeneity = 0.0;
    let mut asm = 0.0;
    // Symmetric matrix, so row and column marginals coincide.
    let mut mu = 0.0;
    for i in 0..l {
        for j in 0..l {
            let p = glcm.p(i, j);
            let d = i as f64 - j as f64;
            contrast += p * d * d;
            dissimilarity += p * d.abs();
            homogeneity += p / (1.0 + d * d);
            asm += p * p;
            mu += p * i as f64;
        }
    }
    let mut var = 0.0;
    let mut cov = 0.0;
    for i in 0..l {
        let mut row_mass = 0.0;
        for j in 0..l {
            let p = glcm.p(i, j);
            row_mass += p;
            cov += p * (i as f64 - mu) * (j as f64 - mu);
        }
        var += row_mass * (i as f64 - mu) * (i as f64 - mu);
    }
    let correlation = if var <= 1e-15 { 1.0 } else { (cov / var).clamp(-1.0, 1.0) };
    GlcmFeatures {
        contrast,
        dissimilarity,
        homogeneity,
        asm,
        energy: asm.sqrt(),
        correlation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::QuantizedPlane;

    fn qplane(w: usize, h: usize, levels: usize, labels: &[u16]) -> QuantizedPlane {
        QuantizedPlane::new(w, h, levels, labels.to_vec()).unwrap()
    }

    #[test]
    fn two_horizontal_pairs() {
        // [[0,0],[1,1]] at d=1, 0 degrees: pairs (0,0) and (1,1).
        let p = qplane(2, 2, 2, &[0, 0, 1, 1]);
        let g = compute_glcm(&p, 1, GlcmAngle::Deg0, 2).unwrap();
        assert!((g.p(0, 0) - 0.5).abs() < 1e-12);
        assert!((g.p(1, 1) - 0.5).abs() < 1e-12);
        assert_eq!(g.p(0, 1), 0.0);
        assert_eq!(g.p(1, 0), 0.0);
    }

    #[test]
    fn constant_plane_single_entry() {
        let p = qplane(4, 4, 16, &[7; 16]);
        for angle in GlcmAngle::ALL {
            let g = compute_glcm(&p, 1, angle, 16).unwrap();
            assert!((g.p(7, 7) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn no_pairs_is_domain_error() {
        let p = qplane(1, 1, 2, &[0]);
        assert!(matches!(
            compute_glcm(&p, 1, GlcmAngle::Deg0, 2),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn matrix_is_symmetric_and_normalized() {
        let labels: Vec<u16> = (0..36).map(|i| (i * 5 % 4) as u16).collect();
        let p = qplane(6, 6, 4, &labels);
        for angle in GlcmAngle::ALL {
            let g = compute_glcm(&p, 2, angle, 4).unwrap();
            let mut total = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(g.p(i, j), g.p(j, i));
                    assert!(g.p(i, j) >= 0.0);
                    total += g.p(i, j);
                }
            }
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_image_features() {
        let p = qplane(4, 4, 16, &[3; 16]);
        let f = glcm_features(&compute_glcm(&p, 1, GlcmAngle::Deg0, 16).unwrap());
        assert_eq!(f.contrast, 0.0);
        assert_eq!(f.dissimilarity, 0.0);
        assert!((f.homogeneity - 1.0).abs() < 1e-12);
        assert!((f.asm - 1.0).abs() < 1e-12);
        assert!((f.energy - 1.0).abs() < 1e-12);
        assert_eq!(f.correlation, 1.0);
    }

    #[test]
    fn diagonal_half_mass_features() {
        let g = Glcm::from_matrix(2, vec![0.5, 0.0, 0.0, 0.5], 1, GlcmAngle::Deg0).unwrap();
        let f = glcm_features(&g);
        assert_eq!(f.contrast, 0.0);
        assert!((f.asm - 0.5).abs() < 1e-12);
        assert!((f.energy - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((f.correlation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn antidiagonal_features() {
        let g = Glcm::from_matrix(2, vec![0.0, 0.5, 0.5, 0.0], 1, GlcmAngle::Deg0).unwrap();
        let f = glcm_features(&g);
        assert!((f.contrast - 1.0).abs() < 1e-12);
        assert!((f.dissimilarity - 1.0).abs() < 1e-12);
        assert!((f.homogeneity - 0.5).abs() < 1e-12);
        assert!((f.correlation + 1.0).abs() < 1e-12);
    }

    #[test]
    fn energy_squares_to_asm() {
        let labels: Vec<u16> = (0..64).map(|i| (i % 3) as u16).collect();
        let p = qplane(8, 8, 3, &labels);
        let f = glcm_features(&compute_glcm(&p, 1, GlcmAngle::Deg45, 3).unwrap());
        assert!((f.energy * f.energy - f.asm).abs() < 1e-12);
    }
}
