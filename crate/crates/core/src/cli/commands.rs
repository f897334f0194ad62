//! The six subcommands, each producing a [`Table`].

use num_complex::Complex64;
use rayon::prelude::*;

use crate::deformations::{Deformation, DeformationKind, PhysicalParams, RegimeGuard, RegimeStatus};
use crate::noise::{
    bath_gaussian_factor, bath_monte_carlo, eta_reduction, intracavity_zeta, NoiseBudget, PulseKind, PulseShape,
};
use crate::protocol::{
    deformation_phases, fit_power_law, mean_field_numeric_with, mean_field_qm, outcome, theta, theta_first_order,
    OracleOptions,
};
use crate::sensitivity::{
    apply_noise_budget, requirement_budget, resolvable_strength, table2_columns, uncertainty_curve,
    uncertainty_minimum,
};

use super::config::{PulseConfig, RunConfig};
use super::output::{Cell, Table};
use super::CliError;

const UNDEFORMED_TOL: f64 = 1e-6;
const DEFORMED_TOL: f64 = 0.02;
/// Tolerance on the fitted strength exponent of the oracle phase.
const LINEARITY_TOL: f64 = 0.02;
/// Reference-table agreement factors for `δ⟨Φ⟩` and the resolvable strength.
const IMPRECISION_FACTOR: f64 = 2.0;
const STRENGTH_FACTOR: f64 = 5.0;

fn within_factor(value: f64, target: f64, f: f64) -> bool {
    let r = value / target;
    r.is_finite() && r > 0.0 && r.max(1.0 / r) <= f * (1.0 + 1e-12)
}

fn warn_marginal(d: &Deformation) {
    if let Ok(RegimeStatus::Marginal) = RegimeGuard::default().check(d) {
        eprintln!(
            "warning: dimensionless {} = {:e} is close to the perturbative limit",
            d.kind.name(),
            d.strength
        );
    }
}

/// `Θ`, the mean-field rotation and, for a deformed model, the shot-noise
/// resolution of the bare strength.
pub fn cmd_theta(config: &RunConfig) -> Result<Table, CliError> {
    let params = config.physical()?;
    let model = config.deformation.model()?;
    warn_marginal(&model.dimensionless(&params));
    let out = outcome(&model, &params)?;
    let (imprecision, resolvable) = match model.kind() {
        DeformationKind::None => (Cell::Empty, Cell::Empty),
        kind => {
            let r = resolvable_strength(kind, &params)?;
            (r.phase_imprecision.into(), r.resolvable_strength.into())
        }
    };
    let mut t = Table::new(&[
        "model",
        "strength",
        "lambda",
        "n_p",
        "theta_re_rad",
        "theta_im_rad",
        "theta_abs_rad",
        "phi_rad",
        "delta_phi_rad",
        "delta_strength",
    ]);
    t.push(vec![
        model.kind().name().into(),
        model.bare_strength().into(),
        params.lambda().into(),
        params.n_p().into(),
        out.theta.re.into(),
        out.theta.im.into(),
        out.theta.norm().into(),
        out.phi.into(),
        imprecision,
        resolvable,
    ]);
    Ok(t)
}

fn oracle_row(t: &mut Table, quantity: &str, value: f64, reference: f64, tol: Option<f64>) {
    let rel = ((value - reference) / reference).abs();
    t.push(vec![
        quantity.into(),
        value.into(),
        reference.into(),
        rel.into(),
        tol.map_or(Cell::Empty, Cell::Num),
        tol.map_or(Cell::Empty, |tol| Cell::Bool(rel <= tol)),
    ]);
}

/// Brute-force mean field against the closed forms.
///
/// Undeformed: the exact Kerr mean field. Deformed: the first-order phase
/// shift, its linearity in the strength, and the per-photon-number exponent
/// of the vacuum phase over `n ∈ [4, 12]` (informational).
pub fn cmd_oracle(config: &RunConfig) -> Result<Table, CliError> {
    let o = config
        .oracle
        .ok_or_else(|| CliError::Config("missing [oracle] section".into()))?;
    let opts = OracleOptions {
        mode: o.mode,
        convergence_tol: Some(1e-8),
    };
    let alpha = Complex64::new(o.alpha, 0.0);
    let n_p = o.alpha * o.alpha;
    let numeric = |d: &Deformation| mean_field_numeric_with(&opts, alpha, o.nbar, o.lambda, d, o.opt_dim, o.mech_dim);
    let mut t = Table::new(&["quantity", "value", "reference", "rel_error", "tolerance", "pass"]);

    let kind = config.deformation.model;
    if kind == DeformationKind::None || o.strength == 0.0 {
        let tol = o.tolerance.unwrap_or(UNDEFORMED_TOL);
        let num = numeric(&Deformation::NONE)?;
        let qm = mean_field_qm(o.alpha, o.lambda, n_p);
        let rel = (num - qm).norm() / qm.norm();
        t.push(vec![
            "mean_field_re".into(),
            num.re.into(),
            qm.re.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ]);
        t.push(vec![
            "mean_field_im".into(),
            num.im.into(),
            qm.im.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ]);
        t.push(vec![
            "mean_field".into(),
            num.norm().into(),
            qm.norm().into(),
            rel.into(),
            tol.into(),
            (rel <= tol).into(),
        ]);
        return Ok(t);
    }

    let tol = o.tolerance.unwrap_or(DEFORMED_TOL);
    let d = Deformation::new(kind, o.strength);
    let base = numeric(&Deformation::NONE)?;
    let shift = |d: &Deformation| -> Result<f64, CliError> { Ok((numeric(d)? / base).arg()) };
    let s1 = shift(&d)?;
    let s2 = shift(&d.with_strength(2.0 * o.strength))?;
    let analytic = -theta_first_order(&d, o.lambda, n_p, o.nbar).re;
    oracle_row(&mut t, "phase_shift_rad", s1, analytic, Some(tol));
    let k = (s2 / s1).log2();
    oracle_row(&mut t, "strength_exponent", k, 1.0, Some(LINEARITY_TOL));

    let ns: Vec<usize> = (4..=12).filter(|&n| n < o.opt_dim).collect();
    if ns.len() >= 2 {
        let phases = deformation_phases(&d, o.lambda, &ns, o.mech_dim)?;
        let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
        let (k, _) = fit_power_law(&xs, &phases)?;
        let leading = match kind {
            DeformationKind::Beta => 4.0,
            DeformationKind::Gamma => 3.0,
            _ => 2.0,
        };
        oracle_row(&mut t, "photon_number_exponent", k, leading, None);
    }
    Ok(t)
}

/// The three reference columns, each flagged against its quoted resolution
/// and a strength resolution of order one.
pub fn cmd_table2() -> Result<Table, CliError> {
    let mut t = Table::new(&[
        "model",
        "finesse",
        "m_kg",
        "omega_m_2pi_hz",
        "lambda_l_m",
        "n_p",
        "n_r",
        "lambda",
        "theta_abs_per_unit_rad",
        "delta_phi_rad",
        "delta_strength",
        "delta_phi_quoted_rad",
        "delta_phi_within_2x",
        "delta_strength_within_5x",
    ]);
    for col in table2_columns() {
        let params = PhysicalParams::si(col.inputs)?;
        let r = resolvable_strength(col.model, &params)?;
        let i = &col.inputs;
        t.push(vec![
            col.model.name().into(),
            i.finesse.into(),
            i.m_kg.into(),
            (i.omega_m_rad_s / (2.0 * std::f64::consts::PI)).into(),
            i.lambda_l_m.into(),
            i.n_p.into(),
            i.n_r.into(),
            params.lambda().into(),
            r.theta_magnitude.into(),
            r.phase_imprecision.into(),
            r.resolvable_strength.into(),
            col.quoted_imprecision.into(),
            within_factor(r.phase_imprecision, col.quoted_imprecision, IMPRECISION_FACTOR).into(),
            within_factor(r.resolvable_strength, 1.0, STRENGTH_FACTOR).into(),
        ]);
    }
    Ok(t)
}

/// `Θ` and the resolvable strength at each grid point, in grid order.
pub fn cmd_sweep(config: &RunConfig) -> Result<Table, CliError> {
    let s = config
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("missing [sweep] section".into()))?;
    let base = config.physical()?;
    let model = config.deformation.model()?;
    if model.kind() == DeformationKind::None {
        return Err(CliError::Config("sweep needs a deformation model".into()));
    }
    let mut t = Table::new(&[
        s.parameter.column(),
        "lambda",
        "theta_re_rad",
        "theta_im_rad",
        "theta_abs_rad",
        "delta_strength",
    ]);
    let rows: Vec<Result<Vec<Cell>, CliError>> = s
        .grid
        .par_iter()
        .map(|&v| {
            let params = base.map(|i| s.parameter.set(i, v))?;
            let th = theta(&model, &params)?;
            let r = resolvable_strength(model.kind(), &params)?;
            Ok(vec![
                v.into(),
                params.lambda().into(),
                th.re.into(),
                th.im.into(),
                th.norm().into(),
                r.resolvable_strength.into(),
            ])
        })
        .collect();
    for row in rows {
        t.push(row?);
    }
    Ok(t)
}

/// Standard and modified minimum position uncertainty, in Planck units,
/// one row per (β₀, Δp) pair. `is_minimum` marks the sample nearest the
/// analytic minimum of each modified curve.
pub fn cmd_figure1(config: &RunConfig) -> Result<Table, CliError> {
    let f = config.figure1.clone().unwrap_or_default();
    let mut t = Table::new(&[
        "beta0",
        "dp_over_mp_c",
        "dx_min_over_lp",
        "dx_heisenberg_over_lp",
        "dx_at_minimum_over_lp",
    ]);
    for &b in &f.beta0 {
        let curve = uncertainty_curve(b, &f.range)?;
        let min = uncertainty_minimum(b)?;
        for (u, x) in curve {
            t.push(vec![
                b.into(),
                u.into(),
                x.into(),
                (0.5 / u).into(),
                min.map_or(Cell::Empty, |(_, xm)| Cell::Num(xm)),
            ]);
        }
    }
    Ok(t)
}

fn pulse_zeta(p: &PulseConfig) -> Result<f64, CliError> {
    let shape = match p.kind {
        PulseKind::Tabulated => {
            let path = p.table_path.as_deref().unwrap_or_default();
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
            PulseShape::parse_table(&text)?
        }
        kind => {
            let tau = p.tau_s.unwrap_or_default();
            match kind {
                PulseKind::Square => PulseShape::square(tau)?,
                PulseKind::Gaussian => PulseShape::gaussian(tau)?,
                _ => PulseShape::exponential(tau)?,
            }
        }
    };
    Ok(intracavity_zeta(&shape, p.kappa_per_s)?)
}

fn budget_row(t: &mut Table, item: &str, bound: &str, value: f64, pass: Cell, note: String) {
    t.push(vec![item.into(), bound.into(), value.into(), pass, note.into()]);
}

/// Requirement checklist, multiplicative reductions and their composite.
///
/// Without a `[noise]` section the budget is the unit budget. With one, the
/// reductions follow from `η`, `n̄`, `T` and `Q` of `[physical]`.
pub fn cmd_noise_budget(config: &RunConfig, seed: u64) -> Result<Table, CliError> {
    let kind = config.deformation.model;
    let params = match config.physical {
        Some(_) => Some(config.physical()?),
        None => None,
    };
    let mut t = Table::new(&["item", "bound", "value", "pass", "note"]);
    if let Some(p) = &params {
        for c in requirement_budget(p) {
            budget_row(&mut t, &c.name, &c.bound, c.actual, c.pass.into(), String::new());
        }
    }

    let budget = match (&config.noise, &params) {
        (None, _) => NoiseBudget::unit(),
        (Some(_), None) => return Err(CliError::Config("[noise] needs a [physical] section".into())),
        (Some(n), Some(p)) => {
            let zeta = match (n.zeta, &n.pulse) {
                (Some(z), _) => z,
                (None, Some(pulse)) => pulse_zeta(pulse)?,
                (None, None) => 1.0,
            };
            NoiseBudget::from_params(kind, p, zeta)?
        }
    };
    let reduction = eta_reduction(kind, budget.eta)?;
    debug_assert!((reduction - budget.theta_reduction).abs() < 1e-15);
    let none = || Cell::Empty;
    budget_row(&mut t, "zeta", "(0, 1]", budget.zeta, none(), "cavity filtering, not applied to Θ".into());
    budget_row(&mut t, "eta", "(0, 1]", budget.eta, none(), String::new());
    budget_row(
        &mut t,
        "theta_reduction",
        "(0, 1]",
        budget.theta_reduction,
        none(),
        format!("{:.3} (~{:.1})", budget.theta_reduction, budget.theta_reduction),
    );
    budget_row(&mut t, "thermal_factor", "(0, 1]", budget.thermal_factor, none(), String::new());
    budget_row(&mut t, "decoherence_factor", "(0, 1]", budget.decoherence_factor, none(), String::new());
    budget_row(&mut t, "composite", "(0, 1]", budget.composite(), none(), String::new());

    if let (Some(p), true) = (&params, kind != DeformationKind::None) {
        let r = resolvable_strength(kind, p)?;
        let reduced = apply_noise_budget(&r, &budget)?;
        budget_row(&mut t, "delta_strength_shot_noise", "", r.resolvable_strength, none(), String::new());
        budget_row(&mut t, "delta_strength_with_budget", "", reduced.resolvable_strength, none(), String::new());
    }

    if let (Some(n), Some(p)) = (&config.noise, &params) {
        if n.monte_carlo_samples > 0 {
            let i = p.inputs();
            let mc = bath_monte_carlo(p.lambda(), i.t_k, i.omega_m_rad_s, i.q, n.monte_carlo_samples, seed)?;
            let exact = bath_gaussian_factor(p.lambda(), i.t_k, i.omega_m_rad_s, i.q);
            budget_row(
                &mut t,
                "bath_monte_carlo",
                "",
                mc.mean.re,
                none(),
                format!("std_error {:.3e}, {} samples, seed {seed}", mc.std_error, mc.samples),
            );
            budget_row(&mut t, "bath_gaussian_exact", "", exact, none(), String::new());
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::{DeformationConfig, NoiseConfig, OracleConfig, SweepConfig, SweepParameter};
    use crate::protocol::OracleMode;
    use crate::sensitivity::first_parameter_set;

    fn num(t: &Table, row: usize, col: &str) -> f64 {
        match &t.rows[row][t.column(col).unwrap()] {
            Cell::Num(v) => *v,
            c => panic!("{col} is {c:?}"),
        }
    }

    fn physical(kind: DeformationKind, strength: f64) -> RunConfig {
        RunConfig {
            deformation: DeformationConfig { model: kind, strength },
            physical: Some(first_parameter_set()),
            ..Default::default()
        }
    }

    #[test]
    fn theta_mu_column_magnitude() {
        let t = cmd_theta(&physical(DeformationKind::Mu, 1.0)).unwrap();
        assert!(within_factor(num(&t, 0, "theta_abs_rad"), 1e-4, 2.0));
    }

    #[test]
    fn theta_zero_strength() {
        let t = cmd_theta(&physical(DeformationKind::Beta, 0.0)).unwrap();
        assert_eq!(num(&t, 0, "theta_abs_rad"), 0.0);
    }

    #[test]
    fn theta_names_lambda_guard() {
        let mut c = physical(DeformationKind::Mu, 1.0);
        c.physical.as_mut().unwrap().finesse = 1e9;
        let e = cmd_theta(&c).unwrap_err();
        assert_eq!(e.exit_code(), super::super::exit::REGIME);
        assert!(e.to_string().contains("λ < 1"), "{e}");
    }

    #[test]
    fn table2_flags_all_pass() {
        let t = cmd_table2().unwrap();
        for r in 0..3 {
            assert_eq!(t.rows[r][t.column("delta_phi_within_2x").unwrap()], Cell::Bool(true));
            assert_eq!(t.rows[r][t.column("delta_strength_within_5x").unwrap()], Cell::Bool(true));
        }
    }

    fn sweep_slope(kind: DeformationKind) -> f64 {
        let mut c = physical(kind, 1.0);
        c.sweep = Some(SweepConfig {
            parameter: SweepParameter::NP,
            grid: vec![1e6, 1e7, 1e8, 1e9],
        });
        let t = cmd_sweep(&c).unwrap();
        let xs: Vec<f64> = (0..4).map(|r| num(&t, r, "n_p")).collect();
        let ys: Vec<f64> = (0..4).map(|r| num(&t, r, "theta_abs_rad")).collect();
        fit_power_law(&xs, &ys).unwrap().0
    }

    #[test]
    fn sweep_slopes() {
        assert!((sweep_slope(DeformationKind::Beta) - 3.0).abs() < 0.01);
        assert!((sweep_slope(DeformationKind::Mu) - 1.0).abs() < 0.01);
    }

    #[test]
    fn empty_sweep_has_header_only() {
        let mut c = physical(DeformationKind::Beta, 1.0);
        c.sweep = Some(SweepConfig {
            parameter: SweepParameter::MKg,
            grid: vec![],
        });
        assert_eq!(cmd_sweep(&c).unwrap().to_csv().lines().count(), 1);
    }

    #[test]
    fn figure1_modified_dominates() {
        let t = cmd_figure1(&RunConfig::default()).unwrap();
        for r in 0..t.rows.len() {
            assert!(num(&t, r, "dx_min_over_lp") >= num(&t, r, "dx_heisenberg_over_lp"));
        }
    }

    #[test]
    fn oracle_undeformed_passes() {
        let c = RunConfig {
            oracle: Some(OracleConfig {
                alpha: 2.0,
                nbar: 0.0,
                lambda: 0.3,
                opt_dim: 32,
                mech_dim: 32,
                strength: 0.0,
                mode: OracleMode::Framed,
                tolerance: None,
            }),
            ..Default::default()
        };
        let t = cmd_oracle(&c).unwrap();
        assert!(num(&t, 2, "rel_error") < 1e-8);
    }

    #[test]
    fn oracle_cutoff_is_distinct() {
        let c = RunConfig {
            oracle: Some(OracleConfig {
                alpha: 1.0,
                nbar: 2.0,
                lambda: 0.3,
                opt_dim: 16,
                mech_dim: 4,
                strength: 0.0,
                mode: OracleMode::Framed,
                tolerance: None,
            }),
            ..Default::default()
        };
        assert_eq!(cmd_oracle(&c).unwrap_err().exit_code(), super::super::exit::CUTOFF);
    }

    #[test]
    fn noise_budget_default_is_unit() {
        let t = cmd_noise_budget(&RunConfig::default(), 0).unwrap();
        let r = t.rows.iter().position(|r| r[0] == Cell::from("composite")).unwrap();
        assert_eq!(num(&t, r, "value"), 1.0);
    }

    #[test]
    fn noise_budget_eta_line() {
        let mut c = physical(DeformationKind::Beta, 1.0);
        c.physical.as_mut().unwrap().eta = 0.9;
        c.noise = Some(NoiseConfig {
            zeta: None,
            pulse: None,
            monte_carlo_samples: 0,
        });
        let t = cmd_noise_budget(&c, 0).unwrap();
        let r = t.rows.iter().position(|r| r[0] == Cell::from("theta_reduction")).unwrap();
        assert_eq!(t.rows[r][4], Cell::from("0.478 (~0.5)"));
    }

    #[test]
    fn noise_budget_temperature_check() {
        let mut c = physical(DeformationKind::Beta, 1.0);
        let p = c.physical.as_mut().unwrap();
        p.t_k = 0.2;
        p.q = 1e6;
        let t = cmd_noise_budget(&c, 0).unwrap();
        let r = t.rows.iter().position(|r| matches!(&r[0], Cell::Text(s) if s.contains("temperature"))).unwrap();
        assert_eq!(t.rows[r][3], Cell::Bool(false));
    }
}
