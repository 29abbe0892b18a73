//! Globally adaptive Gauss–Kronrod (G7/K15) integration and nested rules
//! for the low-dimensional domains used by the verification ops.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Integral estimate with the summed Kronrod error indicator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct QuadResult {
    pub value: f64,
    pub error: f64,
}

pub(crate) const MAX_PIECES: usize = 2000;

/// `∫_a^b f` to absolute tolerance `tol`; the interval with the largest
/// error is bisected until the total error is below `tol`.
pub(crate) fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0 });
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value: v, err: e });
    let mut err = e;
    while err > tol && heap.len() < MAX_PIECES {
        let p = heap.pop().unwrap();
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = gk15(&mut f, p.a, m);
        let (v2, e2) = gk15(&mut f, m, p.b);
        err += e1 + e2 - p.err;
        heap.push(Piece { a: p.a, b: m, value: v1, err: e1 });
        heap.push(Piece { a: m, b: p.b, value: v2, err: e2 });
    }
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let error: f64 = heap.iter().map(|p| p.err).sum();
    if !value.is_finite() {
        return Err(Error::Quadrature("non-finite integrand".into()));
    }
    Ok(QuadResult { value, error })
}

/// `∫_{lo}^{hi}` over a box by nested one-dimensional rules; inner
/// tolerances are tightened so the outer error indicator dominates.
pub(crate) fn integrate_box(f: &dyn Fn(&[f64]) -> f64, lo: &[f64], hi: &[f64], tol: f64) -> Result<QuadResult> {
    let mut y = vec![0.0; lo.len()];
    nested(f, lo, hi, tol, 0, &mut y)
}

fn nested(
    f: &dyn Fn(&[f64]) -> f64,
    lo: &[f64],
    hi: &[f64],
    tol: f64,
    depth: usize,
    y: &mut Vec<f64>,
) -> Result<QuadResult> {
    if depth == lo.len() {
        return Ok(QuadResult { value: f(y), error: 0.0 });
    }
    let width = hi[depth] - lo[depth];
    let mut inner_err = 0.0_f64;
    let mut failure = None;
    let mut y_loc = y.clone();
    let r = integrate(
        |v| {
            y_loc[depth] = v;
            match nested(f, lo, hi, 1e-2 * tol / width.max(1.0), depth + 1, &mut y_loc) {
                Ok(q) => {
                    inner_err = inner_err.max(q.error);
                    q.value
                }
                Err(e) => {
                    failure = Some(e);
                    f64::NAN
                }
            }
        },
        lo[depth],
        hi[depth],
        tol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let r = r?;
    Ok(QuadResult { value: r.value, error: r.error + inner_err * width })
}

/// `∫_{|z|<R} g(z) dz` in dimension `n ≤ 3` (polar / spherical for 2 and 3).
pub(crate) fn integrate_ball(g: &dyn Fn(&[f64]) -> f64, n: usize, radius: f64, tol: f64) -> Result<QuadResult> {
    use std::f64::consts::PI;
    match n {
        0 => Ok(QuadResult { value: g(&[]), error: 0.0 }),
        1 => integrate_box(g, &[-radius], &[radius], tol),
        2 => integrate_box(
            &|p: &[f64]| {
                let (r, th) = (p[0], p[1]);
                r * g(&[r * th.cos(), r * th.sin()])
            },
            &[0.0, 0.0],
            &[radius, 2.0 * PI],
            tol,
        ),
        3 => integrate_box(
            &|p: &[f64]| {
                let (r, th, ph) = (p[0], p[1], p[2]);
                let st = th.sin();
                r * r * st * g(&[r * st * ph.cos(), r * st * ph.sin(), r * th.cos()])
            },
            &[0.0, 0.0, 0.0],
            &[radius, PI, 2.0 * PI],
            tol,
        ),
        _ => Err(Error::Quadrature(format!("quadrature supports at most 3 ball dimensions, got {n}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_and_gaussians() {
        let q = integrate(|x| x.powi(5) - 2.0 * x, 0.0, 2.0, 1e-13).unwrap();
        assert!((q.value - (64.0 / 6.0 - 4.0)).abs() < 1e-12);
        let q = integrate(|x| (-x * x / 2.0).exp(), -12.0, 12.0, 1e-12).unwrap();
        assert!((q.value - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-11);
        let q = integrate(|x| x.sqrt(), 0.0, 1.0, 1e-10).unwrap();
        assert!((q.value - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn ball_volumes() {
        use std::f64::consts::PI;
        let one = |_: &[f64]| 1.0;
        assert!((integrate_ball(&one, 2, 0.5, 1e-12).unwrap().value - PI * 0.25).abs() < 1e-11);
        assert!((integrate_ball(&one, 3, 1.0, 1e-10).unwrap().value - 4.0 * PI / 3.0).abs() < 1e-9);
        let r2 = |z: &[f64]| z.iter().map(|v| v * v).sum::<f64>();
        // ∫_{|z|<1} |z|² dz in the plane = π/2
        assert!((integrate_ball(&r2, 2, 1.0, 1e-12).unwrap().value - PI / 2.0).abs() < 1e-11);
        assert!(integrate_ball(&one, 4, 1.0, 1e-6).is_err());
    }
}
