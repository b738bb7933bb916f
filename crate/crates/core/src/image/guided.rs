//! Guided filter (He, Sun & Tang) on float planes.
//!
//! Used for transmission-map refinement in dehazing and base/detail
//! decomposition in deraining.

use crate::error::{Error, Result};
use crate::image::{box_mean, FloatPlane};

/// Edge-preserving smoothing of `input` steered by `guide`.
///
/// Per window: `a = cov(I,p) / (var(I) + eps)`, `b = mean(p) - a*mean(I)`,
/// output `q = mean(a)*I + mean(b)` with box means of radius `radius` and
/// reflect-101 borders.
pub fn guided_filter(
    guide: &FloatPlane,
    input: &FloatPlane,
    radius: usize,
    epsilon: f64,
) -> Result<FloatPlane> {
    if guide.width() != input.width() || guide.height() != input.height() {
        return Err(Error::dimension("guide and input sizes differ"));
    }
    if radius == 0 {
        return Err(Error::domain("radius must be at least 1"));
    }
    if epsilon <= 0.0 {
        return Err(Error::domain("epsilon must be positive"));
    }

    let mean_guide = box_mean(guide, radius);
    let mean_input = box_mean(input, radius);

    let n = guide.data().len();
    let mut gg = Vec::with_capacity(n);
    let mut gp = Vec::with_capacity(n);
    for i in 0..n {
        gg.push(guide.data()[i] * guide.data()[i]);
        gp.push(guide.data()[i] * input.data()[i]);
    }
    let corr_gg = box_mean(&FloatPlane::new(guide.width(), guide.height(), gg)?, radius);
    let corr_gp = box_mean(&FloatPlane::new(guide.width(), guide.height(), gp)?, radius);

    let mut a = FloatPlane::zeros(guide.width(), guide.height());
    let mut b = FloatPlane::zeros(guide.width(), guide.height());
    for i in 0..n {
        let mg = mean_guide.data()[i];
        let mp = mean_input.data()[i];
        let var = corr_gg.data()[i] - mg * mg;
        let cov = corr_gp.data()[i] - mg * mp;
        let ai = cov / (var + epsilon);
        a.data_mut()[i] = ai;
        b.data_mut()[i] = mp - ai * mg;
    }

    let mean_a = box_mean(&a, radius);
    let mean_b = box_mean(&b, radius);
    let mut out = FloatPlane::zeros(guide.width(), guide.height());
    for i in 0..n {
        out.data_mut()[i] = mean_a.data()[i] * guide.data()[i] + mean_b.data()[i];
    }
    out.debug_assert_finite();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_input_is_fixed_point() {
        let c = FloatPlane::filled(8, 8, 19.5);
        let out = guided_filter(&c, &c, 2, 1e-3).unwrap();
        for &v in out.data() {
            assert!((v - 19.5).abs() < 1e-9);
        }
    }

    #[test]
    fn huge_epsilon_approaches_double_box_mean() {
        // As eps -> inf, a -> 0 and b -> mean(p), so q -> box(box(p)).
        let vals: Vec<f64> = (0..64).map(|v| ((v * 37) % 251) as f64).collect();
        let guide = FloatPlane::new(8, 8, vals.clone()).unwrap();
        let input = FloatPlane::new(8, 8, vals).unwrap();
        let out = guided_filter(&guide, &input, 2, 1e12).unwrap();
        let expect = box_mean(&box_mean(&input, 2), 2);
        for i in 0..64 {
            assert!((out.data()[i] - expect.data()[i]).abs() < 1e-6);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let a = FloatPlane::zeros(4, 4);
        let b = FloatPlane::zeros(5, 4);
        assert!(guided_filter(&a, &b, 1, 1e-3).is_err());
        assert!(guided_filter(&a, &a, 0, 1e-3).is_err());
        assert!(guided_filter(&a, &a, 1, 0.0).is_err());
    }
}
