use super::problem::{CauchyProblem, Centering, ProblemSpace};
use super::solve::{assemble, SolutionSeries};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{certify_convergence, ConvergenceCertificate, MonomialSeries, MultiIndex, PointOracle, TailRule, VariableSpace};

/// Numerator of the radius rule `r = c0 / (1 + S)`.
pub const RADIUS_C0: f64 = 0.5;
/// Largest graded partial sum of the `G`-majorant accepted as bounded.
pub const MAJORANT_SUM_BOUND: f64 = 1e6;

/// `∂_t u − Σ a_i ∂_{x_i} u − b u = 0`, `u(0, x) = φ(x)`.
#[derive(Clone, Debug)]
pub struct LinearFirstOrderProblem<C: Scalar = f64> {
    pub a: Vec<MonomialSeries<C>>,
    pub b: MonomialSeries<C>,
    pub phi: MonomialSeries<C>,
    /// When set, `a` and `b` live over `(t, x)`, otherwise over `x`.
    pub time_dependent: bool,
}

impl<C: Scalar> LinearFirstOrderProblem<C> {
    /// The number of spatial variables is `a.len()`; coefficients are moved
    /// into the standard spaces by variable name.
    pub fn new(
        a: &[MonomialSeries<C>],
        b: &MonomialSeries<C>,
        phi: &MonomialSeries<C>,
        time_dependent: bool,
    ) -> Result<Self> {
        let n = a.len();
        if n == 0 {
            return Err(Error::Precondition("at least one coefficient a_i is required".into()));
        }
        let cs = if time_dependent { VariableSpace::tx(n) } else { VariableSpace::x(n) };
        Ok(LinearFirstOrderProblem {
            a: a.iter().map(|s| s.embed(&cs)).collect::<Result<_>>()?,
            b: b.embed(&cs)?,
            phi: phi.embed(&VariableSpace::x(n))?,
            time_dependent,
        })
    }

    pub fn x_vars(&self) -> usize {
        self.a.len()
    }

    pub fn with_phi(&self, phi: &MonomialSeries<C>) -> Result<Self> {
        Self::new(&self.a, &self.b, phi, self.time_dependent)
    }

    /// Plain Taylor coefficient of `t^j` of a coefficient, over `x`.
    fn t_layer(&self, c: &MonomialSeries<C>, j: u32) -> Result<MonomialSeries<C>> {
        let xs = VariableSpace::x(self.x_vars());
        if self.time_dependent {
            c.coefficient_of_power(0, j).embed(&xs)
        } else if j == 0 {
            Ok(c.clone())
        } else {
            Ok(MonomialSeries::zero(xs))
        }
    }

    /// `v_{k+1} = (1/(k+1)) Σ_{j≤k} [Σ_i a_{i,j} ∂_i v_{k−j} + b_j v_{k−j}]`
    /// on plain Taylor layers `u = Σ v_k t^k`.
    pub fn solve(&self, degree: u32) -> Result<SolutionSeries<C>> {
        let n = self.x_vars();
        let mut a_layers: Vec<Vec<MonomialSeries<C>>> = vec![Vec::new(); n];
        let mut b_layers = Vec::new();
        for j in 0..degree {
            for (i, a) in self.a.iter().enumerate() {
                a_layers[i].push(self.t_layer(a, j)?);
            }
            b_layers.push(self.t_layer(&self.b, j)?);
        }
        let mut v = vec![self.phi.truncated(degree).into_polynomial()];
        for k in 0..degree {
            let cap = degree - k - 1;
            let mut next = MonomialSeries::zero(VariableSpace::x(n)).truncated(cap);
            for j in 0..=k {
                let prev = &v[(k - j) as usize];
                for (i, al) in a_layers.iter().enumerate() {
                    next = next.add(&al[j as usize].mul(&prev.partial_deriv(i as u32), cap)?)?;
                }
                next = next.add(&b_layers[j as usize].mul(prev, cap)?)?;
            }
            v.push(next.scale(&C::one().div_int(k as i64 + 1)).into_polynomial());
        }
        // assemble divides by k!, so hand it u_k = k! v_k
        let layers: Vec<_> = v
            .iter()
            .enumerate()
            .map(|(k, s)| s.scale(&crate::scalar::factorial(k as u32)))
            .collect();
        let tx = VariableSpace::tx(n);
        Ok(SolutionSeries {
            series: assemble(&layers, &tx, degree),
            degree,
            residual_degree: degree.saturating_sub(1),
        })
    }

    /// The same equation as a general order-one problem with jet-centred
    /// right-hand side `Σ a_i (w0_i + w_i) + b (u0 + u)`.
    pub fn to_cauchy(&self) -> Result<CauchyProblem<C>> {
        let n = self.x_vars();
        let lay = ProblemSpace::new(1, n)?;
        let u0 = self.phi.constant_term();
        let mut cap: Option<u32> = self.b.cap();
        let mut terms = Vec::new();
        for (i, a) in self.a.iter().enumerate() {
            let w0 = self.phi.coeff(&MultiIndex::var(i as u32));
            let wv = MultiIndex::var(lay.w(&MultiIndex::var(i as u32), 0).unwrap());
            let a = a.embed(&lay.space)?;
            cap = match (cap, a.cap()) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
            for (al, c) in a.iter() {
                terms.push((al.add(&wv), c.clone()));
                terms.push((al.clone(), c.clone() * w0.clone()));
            }
        }
        let uv = MultiIndex::var(lay.u());
        for (al, c) in self.b.embed(&lay.space)?.iter() {
            terms.push((al.add(&uv), c.clone()));
            terms.push((al.clone(), c.clone() * u0.clone()));
        }
        let f = MonomialSeries::from_terms(lay.space.clone(), terms, cap);
        CauchyProblem::new(1, n, &f, std::slice::from_ref(&self.phi), Centering::Jet)
    }

    /// `G(t, x, w) = Σ a_i w_i + w_0 b` over `(t, x1..xn, w0, w1..wn)`.
    pub fn build_g(&self) -> Result<MonomialSeries<C>> {
        let n = self.x_vars();
        let mut names: Vec<String> = VariableSpace::tx(n).names().to_vec();
        names.extend((0..=n).map(|i| format!("w{i}")));
        let gs = VariableSpace::new(names);
        let w = |i: usize| MultiIndex::var((n + 1 + i) as u32);
        let mut g = self.b.embed(&gs)?.shift(&w(0));
        for (i, a) in self.a.iter().enumerate() {
            g = g.add(&a.embed(&gs)?.shift(&w(i + 1)))?;
        }
        Ok(g)
    }

    /// Witness `x_i = 2^{i+1}` over the coordinates of [`Self::build_g`].
    pub fn default_witness(&self, pnorm: f64) -> PointOracle {
        PointOracle::witness(Vec::new(), TailRule::Geometric { scale: 2.0, ratio: 2.0 }, pnorm)
    }

    /// `r = c0 / (1 + S)`, `S` the largest graded partial sum of `|G|` at
    /// the witness (coordinates ordered as in [`Self::build_g`]). Only the
    /// coefficients enter, never `φ`.
    pub fn majorant_radius(
        &self,
        pnorm: f64,
        witness: &PointOracle,
        cap: u32,
    ) -> Result<(f64, ConvergenceCertificate)> {
        let g = self.build_g()?.majorant();
        let cert = certify_convergence(&g, pnorm, witness, cap, MAJORANT_SUM_BOUND)?;
        if !cert.certified() {
            return Err(Error::Certification(format!(
                "G-majorant not certified at the witness (sums bounded: {}, witness ok: {})",
                cert.sums_bounded, cert.witness_check.ok
            )));
        }
        let s = cert.partial_sums.iter().fold(0.0_f64, |m, v| m.max(*v));
        Ok((RADIUS_C0 / (1.0 + s), cert))
    }
}
