//! The evolving shear profile
//!
//! ```text
//! b(t,y) = y + M(√π/2)[γ0²·erf(y/√s1) − γ2γ0²γ1³·erf(y/√s2)],
//! s1 = 4νt + γ0²,  s2 = 4νt + γ0²γ1²,
//! ```
//!
//! which solves `∂t b = ν ∂y² b` exactly, together with its derivatives and
//! the potential `V = b''/b` of the associated Schrödinger operator.

use num_traits::Float;
use core::f64::consts::PI;

use crate::quad::integrate1;
use crate::special::erf;
use crate::{Error, Result};

/// Beyond `y = SUPPORT_SIGMAS·√s1` both Gaussian parts of the flow are below
/// `exp(-64)` relative, so `b'' = 0` and `b' = 1` to double precision.
pub const SUPPORT_SIGMAS: f64 = 8.0;

/// Default bound on `γ1/γ2`.
pub const DEFAULT_RATIO_MAX: f64 = 0.2;

/// Parameters `(M, γ0, γ1, γ2, ν)` of the flow family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams {
    pub m: f64,
    pub gamma0: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub nu: f64,
}

impl FlowParams {
    /// Validated constructor. `M = 0` (plain Couette flow) is accepted.
    pub fn new(m: f64, gamma0: f64, gamma1: f64, gamma2: f64, nu: f64) -> Result<Self> {
        let p = Self { m, gamma0, gamma1, gamma2, nu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.m, self.gamma0, self.gamma1, self.gamma2, self.nu]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidParameter("parameters must be finite"));
        }
        if self.m < 0.0 {
            return Err(Error::InvalidParameter("M must be nonnegative"));
        }
        if !(self.gamma0 > 0.0 && self.gamma0 <= 0.5) {
            return Err(Error::InvalidParameter("gamma0 must lie in (0, 0.5]"));
        }
        if !(self.gamma1 > 0.0 && self.gamma1 <= 0.5) {
            return Err(Error::InvalidParameter("gamma1 must lie in (0, 0.5]"));
        }
        if !(self.gamma2 > 0.0 && self.gamma2 < 1.0) {
            return Err(Error::InvalidParameter("gamma2 must lie in (0,1)"));
        }
        if self.gamma1 >= self.gamma2 {
            return Err(Error::InvalidParameter("gamma1 must be smaller than gamma2"));
        }
        if self.nu <= 0.0 {
            return Err(Error::InvalidParameter("nu must be positive"));
        }
        // b' >= 1 − Mγ2γ0γ1² for all t, y
        if self.m * self.gamma2 * self.gamma0 * self.gamma1 * self.gamma1 >= 1.0 {
            return Err(Error::InvalidParameter("M too large: flow would not be monotone"));
        }
        Ok(())
    }

    /// Enforce `γ1/γ2 <= ratio_max`.
    pub fn check_ratio(&self, ratio_max: f64) -> Result<()> {
        if self.gamma1 / self.gamma2 > ratio_max {
            return Err(Error::InvalidParameter("gamma1/gamma2 exceeds the configured ratio bound"));
        }
        Ok(())
    }

    pub fn with_m(self, m: f64) -> Self {
        Self { m, ..self }
    }

    /// Time horizon `T = γ0²γ1²/ν`.
    pub fn horizon(&self) -> f64 {
        self.gamma0 * self.gamma0 * self.gamma1 * self.gamma1 / self.nu
    }

    pub fn at(&self, t: f64) -> Result<FlowState> {
        FlowState::new(*self, t)
    }
}

/// Flow parameters frozen at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowState {
    pub params: FlowParams,
    pub t: f64,
    pub s1: f64,
    pub s2: f64,
    // Gaussian amplitudes in b' = 1 + a1·e^{-y²/s1} + a2·e^{-y²/s2}
    a1: f64,
    a2: f64,
}

/// `(b, b', b'', b''')` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivs {
    pub b: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

impl FlowState {
    pub fn new(params: FlowParams, t: f64) -> Result<Self> {
        params.validate()?;
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter("t must be finite and nonnegative"));
        }
        let p = &params;
        let g02 = p.gamma0 * p.gamma0;
        let s1 = 4.0 * p.nu * t + g02;
        let s2 = 4.0 * p.nu * t + g02 * p.gamma1 * p.gamma1;
        let a1 = p.m * g02 / s1.sqrt();
        let a2 = -p.m * p.gamma2 * g02 * p.gamma1.powi(3) / s2.sqrt();
        Ok(Self { params, t, s1, s2, a1, a2 })
    }

    pub fn b(&self, y: f64) -> f64 {
        let h = 0.5 * PI.sqrt();
        y + h * (self.a1 * self.s1.sqrt() * erf(y / self.s1.sqrt())
            + self.a2 * self.s2.sqrt() * erf(y / self.s2.sqrt()))
    }

    pub fn derivs(&self, y: f64) -> Derivs {
        let g1 = self.a1 * libm::exp(-y * y / self.s1);
        let g2 = self.a2 * libm::exp(-y * y / self.s2);
        let b1 = 1.0 + g1 + g2;
        let b2 = -2.0 * y * (g1 / self.s1 + g2 / self.s2);
        let b3 = (-2.0 / self.s1 + 4.0 * y * y / (self.s1 * self.s1)) * g1
            + (-2.0 / self.s2 + 4.0 * y * y / (self.s2 * self.s2)) * g2;
        Derivs { b: self.b(y), b1, b2, b3 }
    }

    /// `b'` alone (cheaper than [`FlowState::derivs`]).
    pub fn slope(&self, y: f64) -> f64 {
        1.0 + self.a1 * libm::exp(-y * y / self.s1) + self.a2 * libm::exp(-y * y / self.s2)
    }

    /// `b'(0) − b'(y)`, without cancellation near the origin.
    pub fn slope_drop(&self, y: f64) -> f64 {
        -self.a1 * libm::expm1(-y * y / self.s1) - self.a2 * libm::expm1(-y * y / self.s2)
    }

    /// `b''/y`, regular at the origin.
    pub fn curvature_over_y(&self, y: f64) -> f64 {
        -2.0 * (self.a1 * libm::exp(-y * y / self.s1) / self.s1
            + self.a2 * libm::exp(-y * y / self.s2) / self.s2)
    }

    /// Half-width of the interval outside which the flow is Couette-like.
    pub fn support_radius(&self) -> f64 {
        SUPPORT_SIGMAS * self.s1.sqrt()
    }

    /// Lower bound on `b'` over the whole line.
    pub fn min_slope(&self) -> f64 {
        1.0 + self.a2.min(0.0)
    }

    /// Upper bound on `|V|` over the whole line.
    pub fn potential_bound(&self) -> f64 {
        2.0 * (self.a1.abs() / self.s1 + self.a2.abs() / self.s2) / self.min_slope()
    }

    /// Radius of the window around 0 where `V` uses its Taylor series.
    pub fn eps_sing(&self) -> f64 {
        1e-4 * self.params.gamma0 * self.params.gamma1
    }

    /// `V = b''/b`, even and negative.
    pub fn potential(&self, y: f64) -> f64 {
        if y.abs() < self.eps_sing() {
            return self.potential_series(y);
        }
        let b2 = -2.0 * y * (self.a1 * libm::exp(-y * y / self.s1) / self.s1
            + self.a2 * libm::exp(-y * y / self.s2) / self.s2);
        b2 / self.b(y)
    }

    /// Four-term even Taylor expansion of `b''/b` about the origin.
    pub fn potential_series(&self, y: f64) -> f64 {
        // b = Σ β_n y^{2n+1},  β_n = Σ_j a_j (−1)^n / ((2n+1) n! s_j^n)
        let mut beta = [0.0; 5];
        let mut fact = 1.0;
        for (n, bn) in beta.iter_mut().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let denom = (2 * n + 1) as f64 * fact;
            *bn = sign
                * (self.a1 / (denom * self.s1.powi(n as i32))
                    + self.a2 / (denom * self.s2.powi(n as i32)));
        }
        beta[0] += 1.0;
        // V = N(z)/D(z), z = y²
        let mut num = [0.0; 4];
        for (n, v) in num.iter_mut().enumerate() {
            *v = beta[n + 1] * ((2 * n + 3) * (2 * n + 2)) as f64;
        }
        let den = [beta[0], beta[1], beta[2], beta[3]];
        let mut q = [0.0; 4];
        for n in 0..4 {
            let mut s = num[n];
            for j in 0..n {
                s -= q[j] * den[n - j];
            }
            q[n] = s / den[0];
        }
        let z = y * y;
        q[0] + z * (q[1] + z * (q[2] + z * q[3]))
    }
}

/// `b(t, y)`.
pub fn eval_b(state: &FlowState, y: f64) -> f64 {
    state.b(y)
}

/// `(b, b', b'', b''')`.
pub fn eval_b_derivs(state: &FlowState, y: f64) -> Derivs {
    state.derivs(y)
}

/// `V(y) = b''(y)/b(y)`.
pub fn eval_potential(state: &FlowState, y: f64) -> f64 {
    state.potential(y)
}

/// `|∂t b − ν b''|` with `∂t b` from a fourth-order difference in `t`
/// (centered when `t >= 2dt`, one-sided otherwise).
pub fn heat_residual(state: &FlowState, y: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0) || state.t - dt < 0.0 {
        return Err(Error::InvalidParameter("heat_residual needs dt > 0 and t - dt >= 0"));
    }
    let p = state.params;
    // differences of b − y, so the Couette part cancels exactly
    let bt = |t: f64| -> Result<f64> { Ok(FlowState::new(p, t)?.b(y) - y) };
    let t = state.t;
    let dbdt = if t >= 2.0 * dt {
        (-bt(t + 2.0 * dt)? + 8.0 * bt(t + dt)? - 8.0 * bt(t - dt)? + bt(t - 2.0 * dt)?)
            / (12.0 * dt)
    } else {
        (-25.0 * bt(t)? + 48.0 * bt(t + dt)? - 36.0 * bt(t + 2.0 * dt)?
            + 16.0 * bt(t + 3.0 * dt)?
            - 3.0 * bt(t + 4.0 * dt)?)
            / (12.0 * dt)
    };
    Ok((dbdt - p.nu * state.derivs(y).b2).abs())
}

/// Summary of the profile
/// `h1(t,y) = γ2γ1³ s2^{-3/2} e^{-y²/s2} − γ2 γ0^{-3} e^{-y²/(γ0γ1)²}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H1Diagnostics {
    /// `∫ h1` over the line, by quadrature.
    pub total_integral: f64,
    /// Positive zero `ỹ` of `h1`.
    pub zero_point: f64,
    /// `∫_{-ỹ}^{ỹ} h1`, by quadrature.
    pub negative_part_integral: f64,
}

/// Pointwise `h1(t, y)`.
pub fn h1(params: &FlowParams, t: f64, y: f64) -> f64 {
    let p = params;
    let w0 = p.gamma0 * p.gamma1;
    let s2 = 4.0 * p.nu * t + w0 * w0;
    p.gamma2 * p.gamma1.powi(3) / (s2 * s2.sqrt()) * libm::exp(-y * y / s2)
        - p.gamma2 / p.gamma0.powi(3) * libm::exp(-y * y / (w0 * w0))
}

/// Closed form `∫ h1 = −√π γ2·4νt·γ1/((4νt + γ0²γ1²)γ0²)`.
pub fn h1_total_closed_form(params: &FlowParams, t: f64) -> f64 {
    let p = params;
    let w0 = p.gamma0 * p.gamma1;
    let tau = 4.0 * p.nu * t;
    -PI.sqrt() * p.gamma2 * tau * p.gamma1 / ((tau + w0 * w0) * p.gamma0 * p.gamma0)
}

/// Closed form of the positive zero of `h1`.
pub fn h1_zero_point(params: &FlowParams, t: f64) -> f64 {
    let p = params;
    let w0 = p.gamma0 * p.gamma1;
    let tau = 4.0 * p.nu * t;
    let s2 = tau + w0 * w0;
    (s2 * w0 * w0 / tau * libm::log(s2 * s2.sqrt() / (w0 * w0 * w0))).sqrt()
}

pub fn h1_diagnostics(params: &FlowParams, t: f64) -> Result<H1Diagnostics> {
    params.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter("h1 diagnostics need t > 0"));
    }
    let p = *params;
    let w0 = p.gamma0 * p.gamma1;
    let s2 = 4.0 * p.nu * t + w0 * w0;
    let yt = h1_zero_point(params, t);
    let upper = 12.0 * s2.sqrt();
    let f = |y: f64| h1(&p, t, y);
    let scale = p.gamma2 * p.gamma1 / (p.gamma0 * p.gamma0);
    let breaks = [w0, 3.0 * w0, s2.sqrt(), 3.0 * s2.sqrt()];
    let (inner, _) = integrate1(f, 0.0, yt, &breaks, 1e-14, 1e-17 * scale)?;
    let (outer, _) = integrate1(f, yt, upper, &breaks, 1e-14, 1e-17 * scale)?;
    Ok(H1Diagnostics {
        total_integral: 2.0 * (inner + outer),
        zero_point: yt,
        negative_part_integral: 2.0 * inner,
    })
}
