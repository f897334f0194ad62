//! Drive envelopes and the intracavity filtering factor ζ.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `∫ α_in² dt = 1`.
pub const PULSE_NORM_TOL: f64 = 1e-8;
/// Step-halving stopping criterion for [`intracavity_zeta`].
pub const ZETA_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PulseKind {
    Square,
    Gaussian,
    Exponential,
    Tabulated,
}

/// Real input envelope `α_in(t)`, normalized to one photon.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseShape {
    kind: PulseKind,
    tau: f64,
    shift: f64,
    table: Vec<(f64, f64)>,
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::param("tau", format!("must be finite and > 0, got {tau}")))
    }
}

impl PulseShape {
    /// `1/√τ` on `[−τ/2, τ/2]`.
    pub fn square(tau: f64) -> Result<Self> {
        Self::analytic(PulseKind::Square, tau)
    }

    /// `α² = e^{−t²/2τ²}/√(2πτ²)`.
    pub fn gaussian(tau: f64) -> Result<Self> {
        Self::analytic(PulseKind::Gaussian, tau)
    }

    /// `α² = e^{−t/τ}/τ` for `t ≥ 0`.
    pub fn exponential(tau: f64) -> Result<Self> {
        Self::analytic(PulseKind::Exponential, tau)
    }

    fn analytic(kind: PulseKind, tau: f64) -> Result<Self> {
        check_tau(tau)?;
        Ok(Self {
            kind,
            tau,
            shift: 0.0,
            table: Vec::new(),
        })
    }

    /// Linearly interpolated samples, zero outside the table. Times must be
    /// strictly increasing and `∫α² dt` must be 1 within [`PULSE_NORM_TOL`].
    pub fn tabulated(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::param("pulse", "a table needs at least two samples"));
        }
        if samples.iter().any(|(t, a)| !t.is_finite() || !a.is_finite()) {
            return Err(Error::NonFinite("pulse table"));
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::param("pulse", "sample times must be strictly increasing"));
        }
        let span = samples.last().unwrap().0 - samples[0].0;
        let p = Self {
            kind: PulseKind::Tabulated,
            tau: span,
            shift: 0.0,
            table: samples,
        };
        let norm = p.energy();
        if (norm - 1.0).abs() > PULSE_NORM_TOL {
            return Err(Error::NotNormalized(format!("∫α² dt = {norm}")));
        }
        Ok(p)
    }

    /// Like [`PulseShape::tabulated`], rescaling the amplitudes to unit energy.
    pub fn tabulated_normalized(samples: Vec<(f64, f64)>) -> Result<Self> {
        let raw = Self {
            kind: PulseKind::Tabulated,
            tau: 1.0,
            shift: 0.0,
            table: samples.clone(),
        };
        let e = raw.energy();
        if !(e > 0.0) || !e.is_finite() {
            return Err(Error::NotNormalized(format!("∫α² dt = {e}")));
        }
        let s = 1.0 / e.sqrt();
        Self::tabulated(samples.into_iter().map(|(t, a)| (t, a * s)).collect())
    }

    /// Parses two whitespace-separated columns (time in s, amplitude in
    /// s^{-1/2}); `#` starts a comment.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut samples = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 2 {
                return Err(Error::Parse {
                    line: i + 1,
                    reason: format!("expected 2 columns, found {}", cols.len()),
                });
            }
            let num = |s: &str| {
                s.parse::<f64>().map_err(|e| Error::Parse {
                    line: i + 1,
                    reason: format!("`{s}`: {e}"),
                })
            };
            samples.push((num(cols[0])?, num(cols[1])?));
        }
        Self::tabulated(samples)
    }

    /// The same pulse delayed by `dt`.
    pub fn shifted(&self, dt: f64) -> Self {
        let mut p = self.clone();
        p.shift += dt;
        p
    }

    pub fn kind(&self) -> PulseKind {
        self.kind
    }

    /// Characteristic duration τ (the span for tabulated pulses).
    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Interval outside which the amplitude is zero or negligible.
    pub fn support(&self) -> (f64, f64) {
        let (a, b) = match self.kind {
            PulseKind::Square => (-0.5 * self.tau, 0.5 * self.tau),
            PulseKind::Gaussian => (-9.0 * self.tau, 9.0 * self.tau),
            PulseKind::Exponential => (0.0, 40.0 * self.tau),
            PulseKind::Tabulated => (self.table[0].0, self.table.last().unwrap().0),
        };
        (a + self.shift, b + self.shift)
    }

    /// Points where the envelope is not smooth.
    fn breakpoints(&self) -> Vec<f64> {
        match self.kind {
            PulseKind::Square | PulseKind::Exponential => {
                let (a, b) = self.support();
                vec![a, b]
            }
            PulseKind::Gaussian => Vec::new(),
            PulseKind::Tabulated => self.table.iter().map(|(t, _)| t + self.shift).collect(),
        }
    }

    pub fn amplitude(&self, t: f64) -> f64 {
        let t = t - self.shift;
        let tau = self.tau;
        match self.kind {
            PulseKind::Square => {
                if t.abs() <= 0.5 * tau {
                    tau.sqrt().recip()
                } else {
                    0.0
                }
            }
            PulseKind::Gaussian => {
                (2.0 * std::f64::consts::PI * tau * tau).powf(-0.25) * (-t * t / (4.0 * tau * tau)).exp()
            }
            PulseKind::Exponential => {
                if t >= 0.0 {
                    (-t / (2.0 * tau)).exp() / tau.sqrt()
                } else {
                    0.0
                }
            }
            PulseKind::Tabulated => {
                let tab = &self.table;
                if t < tab[0].0 || t > tab[tab.len() - 1].0 {
                    return 0.0;
                }
                let k = tab.partition_point(|(ti, _)| *ti <= t).clamp(1, tab.len() - 1);
                let (t0, a0) = tab[k - 1];
                let (t1, a1) = tab[k];
                a0 + (a1 - a0) * (t - t0) / (t1 - t0)
            }
        }
    }

    /// `∫ α_in² dt`: exact for the analytic shapes and for the piecewise
    /// linear interpolant.
    pub fn energy(&self) -> f64 {
        match self.kind {
            PulseKind::Tabulated => self
                .table
                .windows(2)
                .map(|w| {
                    let (t0, a) = w[0];
                    let (t1, b) = w[1];
                    (t1 - t0) * (a * a + a * b + b * b) / 3.0
                })
                .sum(),
            _ => 1.0,
        }
    }
}

const GAUSS3: [(f64, f64); 3] = [
    (-0.774_596_669_241_483_4, 5.0 / 9.0),
    (0.0, 8.0 / 9.0),
    (0.774_596_669_241_483_4, 5.0 / 9.0),
];

/// `ζ = κ² ∫dt [∫_{−∞}^t dt′ e^{−κ(t−t′)} α_in(t′)]²`, the factor by which
/// cavity filtering reduces the effective coupling of a pulse.
///
/// The inner integral is propagated step by step (exact decay, three-point
/// Gauss–Legendre drive), the outer one by the trapezoid rule; the step is
/// halved until ζ changes by less than [`ZETA_TOL`].
pub fn intracavity_zeta(pulse: &PulseShape, kappa: f64) -> Result<f64> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::param("kappa", format!("must be finite and > 0, got {kappa}")));
    }
    let norm = pulse.energy();
    if (norm - 1.0).abs() > PULSE_NORM_TOL {
        return Err(Error::NotNormalized(format!("∫α² dt = {norm}")));
    }
    let tau = pulse.tau();
    let (s0, s1) = pulse.support();
    let centre = 0.5 * (s0 + s1);
    let start = s0.min(centre - 5.0 * tau);
    let end = s1.max(centre + 5.0 * tau) + 20.0 / kappa;

    let mut nodes: Vec<f64> = pulse
        .breakpoints()
        .into_iter()
        .filter(|t| *t > start && *t < end)
        .collect();
    nodes.push(start);
    nodes.push(end);
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();

    let mut per_unit = 256.0 / (end - start);
    let mut prev = zeta_on_grid(pulse, kappa, &nodes, per_unit);
    for _ in 0..14 {
        per_unit *= 2.0;
        let next = zeta_on_grid(pulse, kappa, &nodes, per_unit);
        let change = (next - prev).abs();
        prev = next;
        if change < ZETA_TOL {
            return Ok(next);
        }
    }
    let change = (zeta_on_grid(pulse, kappa, &nodes, per_unit * 2.0) - prev).abs();
    if change < ZETA_TOL {
        Ok(prev)
    } else {
        Err(Error::GridTooCoarse { change })
    }
}

fn zeta_on_grid(pulse: &PulseShape, kappa: f64, nodes: &[f64], per_unit: f64) -> f64 {
    let mut inner = 0.0;
    let mut acc = 0.0;
    for seg in nodes.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let steps = ((b - a) * per_unit).ceil().max(2.0) as usize;
        let h = (b - a) / steps as f64;
        let decay = (-kappa * h).exp();
        for k in 0..steps {
            let t0 = a + k as f64 * h;
            let drive: f64 = GAUSS3
                .iter()
                .map(|&(x, w)| {
                    let s = t0 + 0.5 * h * (1.0 + x);
                    0.5 * h * w * (-kappa * (t0 + h - s)).exp() * pulse.amplitude(s)
                })
                .sum();
            let next = decay * inner + drive;
            acc += 0.5 * h * (inner * inner + next * next);
            inner = next;
        }
    }
    kappa * kappa * acc
}
