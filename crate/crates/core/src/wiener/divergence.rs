use serde::{Deserialize, Serialize};

use super::field::{h_inner, VectorField};
use super::quadrature::{integrate, integrate_ball, integrate_box, QuadResult};
use super::sampler::GaussianSampler;
use super::surface::{gaussian_density, surface_density, SurfaceChart};
use crate::error::{Error, Result};

/// Integration domains: an axis box, or `H_λ` in `(t', x'_1..x'_n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    HLambda { n: usize, lambda: f64 },
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Box { lo, .. } => lo.len(),
            Domain::HLambda { n, .. } => n + 1,
        }
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        match self {
            Domain::Box { lo, hi } => y.iter().zip(lo.iter().zip(hi)).all(|(v, (l, h))| l < v && v < h),
            Domain::HLambda { lambda, .. } => {
                let r2: f64 = y[1..].iter().map(|v| v * v).sum();
                r2 < y[0] && y[0] < *lambda
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Domain::Box { lo, hi } if lo.len() != hi.len() || lo.is_empty() || lo.iter().zip(hi).any(|(l, h)| !(l < h)) => {
                Err(Error::Precondition("box needs lo < hi in every coordinate".into()))
            }
            Domain::HLambda { lambda, .. } if !(*lambda > 0.0) => {
                Err(Error::Precondition(format!("λ must be positive, got {lambda}")))
            }
            _ => Ok(()),
        }
    }

    /// Boundary pieces with outward orientation. The corner set of `H_λ`
    /// carries no surface measure and is not listed.
    pub fn faces(&self) -> Vec<Face> {
        match self {
            Domain::Box { lo, hi } => {
                let mut out = Vec::new();
                for k in 0..lo.len() {
                    let other = |v: &[f64]| v.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, x)| *x).collect();
                    let base = FaceBase::Box { lo: other(lo), hi: other(hi) };
                    out.push(Face {
                        name: format!("y{k}=lo"),
                        chart: SurfaceChart::Flat { coord: k, value: lo[k], disk: None },
                        sign: -1.0,
                        base: base.clone(),
                    });
                    out.push(Face {
                        name: format!("y{k}=hi"),
                        chart: SurfaceChart::Flat { coord: k, value: hi[k], disk: None },
                        sign: 1.0,
                        base,
                    });
                }
                out
            }
            Domain::HLambda { n, lambda } => {
                let base = FaceBase::Ball { n: *n, radius: lambda.sqrt() };
                vec![
                    Face {
                        name: "l_lambda".into(),
                        chart: SurfaceChart::Flat { coord: 0, value: *lambda, disk: Some(*lambda) },
                        sign: 1.0,
                        base: base.clone(),
                    },
                    Face { name: "k_lambda".into(), chart: SurfaceChart::Paraboloid { lambda: *lambda }, sign: -1.0, base },
                ]
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FaceBase {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { n: usize, radius: f64 },
}

impl FaceBase {
    fn contains(&self, z: &[f64]) -> bool {
        match self {
            FaceBase::Box { lo, hi } => z.iter().zip(lo.iter().zip(hi)).all(|(v, (l, h))| l < v && v < h),
            FaceBase::Ball { radius, .. } => z.iter().map(|v| v * v).sum::<f64>() < radius * radius,
        }
    }
}

/// A boundary piece; `sign = -1` when the outward normal is opposite to the
/// chart normal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Face {
    pub name: String,
    pub chart: SurfaceChart,
    pub sign: f64,
    pub base: FaceBase,
}

impl Face {
    /// Index of the coordinate not in the base point.
    fn normal_coord(&self) -> usize {
        match self.chart {
            SurfaceChart::Flat { coord, .. } => coord,
            SurfaceChart::Paraboloid { .. } => 0,
        }
    }

    fn others(&self, v: &[f64]) -> Vec<f64> {
        let k = self.normal_coord();
        v.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, x)| *x).collect()
    }

    /// Outward unit `H`-normal at the base point.
    pub fn outward_normal(&self, z: &[f64], a: &[f64]) -> Vec<f64> {
        self.chart.h_normal(z, a).into_iter().map(|v| self.sign * v).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    /// Nested adaptive Gauss–Kronrod, at most 3 nested dimensions.
    Quadrature { tol: f64 },
    MonteCarlo { samples: usize, seed: u64 },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Quadrature { .. } => "quadrature",
            Method::MonteCarlo { .. } => "mc",
        }
    }
}

/// Value with its error bar (quadrature error estimate or MC standard
/// error).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl From<QuadResult> for Estimate {
    fn from(q: QuadResult) -> Self {
        Estimate { value: q.value, error: q.error }
    }
}

/// Gaussian integration context: scales `A`, variance `t`, centre `x0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gauss {
    pub a: Vec<f64>,
    pub t: f64,
    pub x0: Vec<f64>,
}

impl Gauss {
    pub fn centred(a: Vec<f64>, t: f64) -> Self {
        let x0 = vec![0.0; a.len()];
        Gauss { a, t, x0 }
    }
}

/// `∫_D f dp_t(x0, ·)`.
pub fn volume_integral(domain: &Domain, f: &(dyn Fn(&[f64]) -> f64 + Sync), g: &Gauss, method: &Method) -> Result<Estimate> {
    domain.validate()?;
    if g.a.len() != domain.dim() {
        return Err(Error::Precondition(format!("{} weights for a {}-dimensional domain", g.a.len(), domain.dim())));
    }
    match *method {
        Method::MonteCarlo { samples, seed } => {
            let s = GaussianSampler::diagonal(g.a.clone(), g.t, seed)?.with_center(g.x0.clone())?;
            let e = s.mc_expectation(|y| if domain.contains(y) { f(y) } else { 0.0 }, samples);
            nonfinite_check(e.rejected)?;
            Ok(Estimate { value: e.mean, error: e.stderr })
        }
        Method::Quadrature { tol } => {
            let h = |y: &[f64]| f(y) * gaussian_density(y, &g.a, g.t, &g.x0);
            match domain {
                Domain::Box { lo, hi } => {
                    if lo.len() > 3 {
                        return Err(Error::Quadrature(format!("box dimension {} exceeds 3", lo.len())));
                    }
                    Ok(integrate_box(&h, lo, hi, tol)?.into())
                }
                Domain::HLambda { n, lambda } => {
                    let lambda = *lambda;
                    let inner_err = std::cell::Cell::new(0.0_f64);
                    let outer = |x: &[f64]| {
                        let r2: f64 = x.iter().map(|v| v * v).sum();
                        let mut y = vec![0.0; x.len() + 1];
                        y[1..].copy_from_slice(x);
                        match integrate(
                            |tp| {
                                y[0] = tp;
                                h(&y)
                            },
                            r2,
                            lambda,
                            1e-3 * tol,
                        ) {
                            Ok(q) => {
                                inner_err.set(inner_err.get().max(q.error));
                                q.value
                            }
                            Err(_) => f64::NAN,
                        }
                    };
                    let q = integrate_ball(&outer, *n, lambda.sqrt(), tol)?;
                    Ok(Estimate { value: q.value, error: q.error + inner_err.get() })
                }
            }
        }
    }
}

/// `∫_face f(y, z) σ_t(x0, dy)` with `y` the lifted base point `z`.
pub fn face_integral(
    face: &Face,
    f: &(dyn Fn(&[f64], &[f64]) -> f64 + Sync),
    g: &Gauss,
    method: &Method,
    stream: u32,
) -> Result<Estimate> {
    let a_o = face.others(&g.a);
    let x_o = face.others(&g.x0);
    let integrand = |z: &[f64]| -> f64 {
        if !face.base.contains(z) {
            return 0.0;
        }
        match surface_density(&face.chart, &g.a, g.t, &g.x0, z) {
            Ok(d) => f(&face.chart.lift(z), z) * d,
            Err(_) => 0.0,
        }
    };
    if a_o.is_empty() {
        return Ok(Estimate { value: integrand(&[]), error: 0.0 });
    }
    match *method {
        Method::MonteCarlo { samples, seed } => {
            let s = GaussianSampler::diagonal(a_o, g.t, seed)?.with_center(x_o)?.substream(stream);
            let e = s.mc_expectation(integrand, samples);
            nonfinite_check(e.rejected)?;
            Ok(Estimate { value: e.mean, error: e.stderr })
        }
        Method::Quadrature { tol } => {
            let h = |z: &[f64]| integrand(z) * gaussian_density(z, &a_o, g.t, &x_o);
            let q = match &face.base {
                FaceBase::Box { lo, hi } => {
                    if lo.len() > 3 {
                        return Err(Error::Quadrature(format!("face dimension {} exceeds 3", lo.len())));
                    }
                    integrate_box(&h, lo, hi, tol)?
                }
                FaceBase::Ball { n, radius } => integrate_ball(&h, *n, *radius, tol)?,
            };
            Ok(q.into())
        }
    }
}

fn nonfinite_check(rejected: usize) -> Result<()> {
    if rejected > 0 {
        Err(Error::NonFinite(vec![rejected as f64]))
    } else {
        Ok(())
    }
}

/// Both sides of `∫_V [div F − ⟨F, y − x0⟩_H / t] dp_t = ∫_∂V ⟨F, n⟩_H dσ_t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub method: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub error_bar: f64,
    pub faces: Vec<(String, Estimate)>,
}

pub fn divergence_residual(field: &dyn VectorField, domain: &Domain, g: &Gauss, method: &Method) -> Result<DivergenceReport> {
    if field.dim() != domain.dim() {
        return Err(Error::Precondition(format!(
            "field of dimension {} on a {}-dimensional domain",
            field.dim(),
            domain.dim()
        )));
    }
    let vol = |y: &[f64]| {
        let v = field.eval(y);
        let d: Vec<f64> = y.iter().zip(&g.x0).map(|(a, b)| a - b).collect();
        field.divergence(y) - h_inner(&v, &d, &g.a) / g.t
    };
    let lhs = volume_integral(domain, &vol, g, method)?;
    let mut faces = Vec::new();
    let (mut rhs, mut err2) = (0.0, lhs.error.powi(2));
    for (k, face) in domain.faces().iter().enumerate() {
        let flux = |y: &[f64], z: &[f64]| h_inner(&field.eval(y), &face.outward_normal(z, &g.a), &g.a);
        let e = face_integral(face, &flux, g, method, 10 + k as u32)?;
        rhs += e.value;
        err2 += e.error.powi(2);
        faces.push((face.name.clone(), e));
    }
    let error_bar = match method {
        Method::MonteCarlo { .. } => err2.sqrt(),
        // error estimates of deterministic rules add
        Method::Quadrature { .. } => lhs.error + faces.iter().map(|(_, e)| e.error).sum::<f64>(),
    };
    Ok(DivergenceReport {
        method: method.name().into(),
        lhs: lhs.value,
        rhs,
        residual: lhs.value - rhs,
        error_bar,
        faces,
    })
}
