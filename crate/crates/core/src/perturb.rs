//! Rayleigh–Schrödinger coefficients: closed forms, truncated sums over
//! states, first-order wavefunction shifts, extraction from the exact
//! eigenvalue conditions, and the bound/continuum split for the finite well.
//!
//! Coefficients are per unit coupling: E(λ) = E0 + λE1 + λ²E2 + O(λ³) for
//! H' = −λδ.

use std::f64::consts::PI;

use crate::dd::Dd;
use crate::models::{
    boxed_well_even_states, finite_well_center_density, finite_well_spectrum, FiniteWellDeltaSpec,
    ModelSpec, OscillatorDeltaSpec, Parity, Units,
};
use crate::oracle::neville_at_zero;
use crate::series::{self, ordered_sum};
use crate::specfun::{self, cos_pi, sin_pi};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    ClosedForm,
    SumOverStates { l_max: u64 },
    /// Largest coupling step used.
    NumericExtraction { step: f64 },
}

impl Provenance {
    pub fn label(&self) -> String {
        match self {
            Provenance::ClosedForm => "closed-form".into(),
            Provenance::SumOverStates { l_max } => format!("sum-over-states(l_max={l_max})"),
            Provenance::NumericExtraction { step } => format!("numeric-extraction(step={step})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PTCoefficients {
    pub e0: f64,
    pub e1: f64,
    pub e2: f64,
    pub provenance: Provenance,
    /// Bound on |E2 − exact| from truncation or extrapolation; 0 for closed forms.
    pub e2_error: f64,
}

impl PTCoefficients {
    pub fn energy(&self, lambda: f64) -> f64 {
        self.e0 + lambda * (self.e1 + lambda * self.e2)
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidSpec(msg()))
    }
}

fn check_box(n: usize, p: f64, length: f64) -> Result<()> {
    check(n >= 1, || format!("box states count from 1, got {n}"))?;
    check(p > 0.0 && p < 1.0, || format!("need 0 < p < 1, got {p}"))?;
    check(length > 0.0 && length.is_finite(), || format!("need L > 0, got {length}"))
}

// ---------------------------------------------------------------- box

/// E0 = n²ħ²π²/2mL², E1 = −(2/L)sin²(nπp),
/// E2 = −(2m/n²ħ²π²)sin⁴(nπp)[1 + 2πn(1−2p)cot(nπp)].
/// The cot term is carried as sin³cos, so a node on the delta gives zeros.
pub fn box_pt_closed(n: usize, p: f64, length: f64, units: Units) -> Result<PTCoefficients> {
    check_box(n, p, length)?;
    let nf = n as f64;
    let s = sin_pi(nf * p);
    let c = cos_pi(nf * p);
    let e0 = units.energy_of_k(nf * PI / length);
    let e1 = -2.0 / length * s * s;
    let pre = 2.0 * units.mass / (nf * nf * units.hbar * units.hbar * PI * PI);
    let e2 = -pre * (s.powi(4) + 2.0 * PI * nf * (1.0 - 2.0 * p) * s.powi(3) * c);
    Ok(PTCoefficients { e0, e1, e2, provenance: Provenance::ClosedForm, e2_error: 0.0 })
}

/// (8m/ħ²π²)sin²(nπp) Σ_{l≤l_max, l≠n} sin²(lπp)/(n²−l²). The tail past
/// l_max is bounded by (8m/ħ²π²)sin²(nπp)/(l_max − n).
pub fn box_e2_sum(n: usize, p: f64, length: f64, units: Units, l_max: u64) -> Result<PTCoefficients> {
    check_box(n, p, length)?;
    check(l_max > n as u64, || format!("l_max must exceed n = {n}"))?;
    let nf = n as f64;
    let s = sin_pi(nf * p);
    let sum = ordered_sum(l_max as usize, 4096, |i| {
        let l = i as u64 + 1;
        if l == n as u64 {
            return Dd::ZERO;
        }
        let lf = l as f64;
        let sl = sin_pi(lf * p);
        Dd::new(sl * sl / ((nf - lf) * (nf + lf)))
    });
    let pre = 8.0 * units.mass / (units.hbar * units.hbar * PI * PI) * s * s;
    let closed = box_pt_closed(n, p, length, units)?;
    Ok(PTCoefficients {
        e0: closed.e0,
        e1: closed.e1,
        e2: pre * sum.to_f64(),
        provenance: Provenance::SumOverStates { l_max },
        e2_error: pre / (l_max - n as u64) as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psi1Form {
    /// Solution of the inhomogeneous equation with ⟨ψn|ψ1⟩ = 0.
    Closed,
    /// The closed form with cos(c·nπp) in place of the derived bracket
    /// (c = 4 as printed, c = 2 as the obvious alternative).
    PrintedCos(u8),
    /// Σ_{l≤l_max, l≠n} over all l.
    Sum { l_max: u64 },
    /// Σ over odd l only.
    OddSum { l_max: u64 },
}

impl Psi1Form {
    pub fn label(&self) -> String {
        match self {
            Psi1Form::Closed => "closed".into(),
            Psi1Form::PrintedCos(c) => format!("printed-cos{c}"),
            Psi1Form::Sum { l_max } => format!("sum(l_max={l_max})"),
            Psi1Form::OddSum { l_max } => format!("odd-sum(l_max={l_max})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionShift {
    pub n: usize,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub form: Psi1Form,
}

/// ψn⁽¹⁾(x) for the single-delta box, per unit λ.
/// ψ1 = √(2/L)(4mL/ħ²π²) sin(nπp) Σ_{l≠n} sin(lπp) sin(lπx/L)/(l²−n²).
/// Closed forms hold on 0 ≤ x ≤ pL.
pub fn box_psi1(n: usize, p: f64, x: f64, length: f64, units: Units, form: Psi1Form) -> Result<f64> {
    check_box(n, p, length)?;
    let nf = n as f64;
    let s = sin_pi(nf * p);
    let pre = (2.0 / length).sqrt() * 4.0 * units.mass * length / (units.hbar * units.hbar * PI * PI) * s;
    let closed_domain = || {
        check(x >= 0.0 && x <= p * length, || format!("closed form needs 0 ≤ x ≤ pL, got x = {x}"))
    };
    let series = |odd: bool, l_max: u64| -> Result<f64> {
        check(l_max > n as u64, || format!("l_max must exceed n = {n}"))?;
        let sum = ordered_sum(l_max as usize, 4096, |i| {
            let l = i as u64 + 1;
            if l == n as u64 || (odd && l % 2 == 0) {
                return Dd::ZERO;
            }
            let lf = l as f64;
            Dd::new(sin_pi(lf * p) * sin_pi(lf * x / length) / ((lf - nf) * (lf + nf)))
        });
        Ok(pre * sum.to_f64())
    };
    match form {
        Psi1Form::Closed => {
            closed_domain()?;
            Ok(pre * series::sum_rule_closed(n as u64, p, x, length))
        }
        Psi1Form::PrintedCos(c) => {
            closed_domain()?;
            Ok(pre * series::sum_rule_printed(n as u64, p, x, length, c as f64))
        }
        Psi1Form::Sum { l_max } => series(false, l_max),
        Psi1Form::OddSum { l_max } => series(true, l_max),
    }
}

pub fn box_wavefunction_shift(
    n: usize,
    p: f64,
    length: f64,
    units: Units,
    grid: &[f64],
    form: Psi1Form,
) -> Result<WavefunctionShift> {
    let values = grid.iter().map(|&x| box_psi1(n, p, x, length, units, form)).collect::<Result<Vec<_>>>()?;
    Ok(WavefunctionShift { n, grid: grid.to_vec(), values, form })
}

// ---------------------------------------------------------- oscillator

fn gamma_ratio(n: usize) -> f64 {
    let nf = n as f64;
    specfun::ln_gamma_ratio(nf + 0.5, nf + 1.0).expect("positive arguments").exp()
}

fn check_level(spec: &OscillatorDeltaSpec) -> Result<()> {
    spec.validate()
}

/// Coefficients of oscillator level `level` (counted from 0). Odd levels
/// vanish at the origin and are unshifted. For level 2n:
/// E1 = −(1/π)√(mω/ħ) Γ(n+1/2)/Γ(n+1) (= −|ψ(0)|²),
/// E2 = −(m/2π²ħ²)[Γ(n+1/2)/Γ(n+1)]²[ψ(n+1) − ψ(n+1/2)].
pub fn sho_pt_closed(level: usize, spec: &OscillatorDeltaSpec) -> Result<PTCoefficients> {
    check_level(spec)?;
    let e0 = spec.unperturbed_energy(level);
    if level % 2 == 1 {
        return Ok(PTCoefficients { e0, e1: 0.0, e2: 0.0, provenance: Provenance::ClosedForm, e2_error: 0.0 });
    }
    let n = level / 2;
    let u = spec.units;
    let r = gamma_ratio(n);
    let e1 = -(u.mass * spec.omega / u.hbar).sqrt() * r / PI;
    let nf = n as f64;
    let dpsi = specfun::digamma(nf + 1.0)? - specfun::digamma(nf + 0.5)?;
    let e2 = -u.mass / (2.0 * PI * PI * u.hbar * u.hbar) * r * r * dpsi;
    Ok(PTCoefficients { e0, e1, e2, provenance: Provenance::ClosedForm, e2_error: 0.0 })
}

/// E1 with the 1/√π prefactor as printed, for comparison only.
pub fn sho_e1_printed(level: usize, spec: &OscillatorDeltaSpec) -> f64 {
    if level % 2 == 1 {
        return 0.0;
    }
    let u = spec.units;
    -(u.mass * spec.omega / u.hbar).sqrt() * gamma_ratio(level / 2) / PI.sqrt()
}

/// E2 of level 2n from (1/2π)(m/ħ²) Σ_{l≠n} c_n c_l/(n−l) with
/// c_l = (2l)!/(4^l (l!)²), truncated at l_max. `e2` holds the tail-corrected
/// value when l_max is large enough for the correction, the raw partial sum
/// otherwise; `e2_error` is the size of the correction (or of the raw tail
/// estimate c_n·2/√(π l_max)).
pub fn sho_e2_sum(level: usize, spec: &OscillatorDeltaSpec, l_max: u64) -> Result<PTCoefficients> {
    check_level(spec)?;
    check(level % 2 == 0, || format!("sum over states is for even levels, got {level}"))?;
    let n = (level / 2) as u64;
    let run = series::sho_series(n, l_max)?;
    let u = spec.units;
    let pre = u.mass / (2.0 * PI * u.hbar * u.hbar);
    let raw = run.last();
    let (value, err) = match run.tail_corrected {
        Some(v) => (v, (v - raw).abs()),
        None => (raw, series::central_binomial(n) * 2.0 / (PI * l_max as f64).sqrt()),
    };
    let closed = sho_pt_closed(level, spec)?;
    Ok(PTCoefficients {
        e0: closed.e0,
        e1: closed.e1,
        e2: pre * value,
        provenance: Provenance::SumOverStates { l_max },
        e2_error: pre * err,
    })
}

// ------------------------------------------------------ numeric extraction

/// E1, E2 of the labelled state from exact roots at couplings ±h (or +h only
/// for the well, where only the attractive branch is tracked). Symmetric
/// differences are extrapolated in h², one-sided data are fitted by a
/// polynomial through the origin.
pub fn numeric_pt_extract(model: &ModelSpec, ordinal: usize, steps: &[f64]) -> Result<PTCoefficients> {
    let symmetric = !matches!(model, ModelSpec::Well(_));
    numeric_pt_extract_with(model, ordinal, steps, symmetric)
}

pub fn numeric_pt_extract_with(
    model: &ModelSpec,
    ordinal: usize,
    steps: &[f64],
    symmetric: bool,
) -> Result<PTCoefficients> {
    model.validate()?;
    let mut hs: Vec<f64> = steps.to_vec();
    hs.sort_by(|a, b| b.total_cmp(a));
    hs.dedup();
    check(hs.len() >= 3 && hs.iter().all(|h| *h > 0.0 && h.is_finite()), || {
        "need at least 3 distinct positive coupling steps".into()
    })?;
    let base = model.with_lambda(0.0);
    let e0 = base.state_energy(ordinal)?.energy;
    let half_gap = half_gap(&base, ordinal, e0)?;
    let energy = |lambda: f64| -> Result<f64> {
        let e = model.with_lambda(lambda).state_energy(ordinal).map_err(|e| match e {
            Error::InsufficientStates { .. } => Error::BranchJump { ordinal, lambda },
            other => other,
        })?;
        if (e.energy - e0).abs() >= half_gap {
            return Err(Error::BranchJump { ordinal, lambda });
        }
        Ok(e.energy)
    };
    let (e1, e2, err) = if symmetric {
        let mut d1 = Vec::new();
        let mut d2 = Vec::new();
        for &h in &hs {
            let (ep, em) = (energy(h)?, energy(-h)?);
            d1.push((ep - em) / (2.0 * h));
            d2.push(((ep - e0) + (em - e0)) / (2.0 * h * h));
        }
        let h2: Vec<f64> = hs.iter().map(|h| h * h).collect();
        let e2 = neville_at_zero(&h2, &d2);
        let coarser = neville_at_zero(&h2[..h2.len() - 1], &d2[..d2.len() - 1]);
        (neville_at_zero(&h2, &d1), e2, (e2 - coarser).abs())
    } else {
        let ds = hs.iter().map(|&h| Ok(energy(h)? - e0)).collect::<Result<Vec<f64>>>()?;
        let c = fit_through_origin(&hs, &ds);
        let c_coarse = fit_through_origin(&hs[..hs.len() - 1], &ds[..ds.len() - 1]);
        (c[0], c[1], (c[1] - c_coarse[1]).abs())
    };
    Ok(PTCoefficients { e0, e1, e2, provenance: Provenance::NumericExtraction { step: hs[0] }, e2_error: err })
}

fn half_gap(base: &ModelSpec, ordinal: usize, e0: f64) -> Result<f64> {
    let first = base.first_ordinal();
    let count = ordinal + 2 - first;
    let levels = match base {
        ModelSpec::Well(s) => finite_well_spectrum(s)?,
        _ => base.spectrum(count)?,
    };
    let gap = levels
        .iter()
        .filter(|r| r.ordinal != ordinal)
        .map(|r| (r.energy - e0).abs())
        .fold(f64::INFINITY, f64::min);
    // a lone state (one bound level of a shallow well) still needs a finite guard
    Ok(if gap.is_finite() { 0.5 * gap } else { e0.abs().max(1.0) })
}

/// Coefficients c1..cm of y = Σ c_k x^k through the m points.
fn fit_through_origin(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let m = xs.len();
    let mut a: Vec<Vec<f64>> =
        xs.iter().zip(ys).map(|(&x, &y)| (1..=m).map(|k| x.powi(k as i32)).chain([y]).collect()).collect();
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        for row in 0..m {
            if row != col {
                let f = a[row][col] / a[col][col];
                for k in col..=m {
                    a[row][k] -= f * a[col][k];
                }
            }
        }
    }
    (0..m).map(|i| a[i][m] / a[i][i]).collect()
}

/// Natural coupling unit ħ²/(2mℓ), with ℓ the box length, well half-width,
/// oscillator length ξ or Bohr radius.
pub fn coupling_scale(model: &ModelSpec) -> f64 {
    let ell = match model {
        ModelSpec::Box(s) => s.length,
        ModelSpec::Well(s) => s.half_width,
        ModelSpec::Oscillator(s) => s.xi(),
        ModelSpec::Hydrogen(s) => s.bohr_radius(),
    };
    model.units().kinetic() / ell
}

/// Steps 10⁻², 5·10⁻³, 2.5·10⁻³ in units of `coupling_scale`.
pub fn default_steps(model: &ModelSpec) -> Vec<f64> {
    let c = coupling_scale(model);
    [1e-2, 5e-3, 2.5e-3].iter().map(|h| h * c).collect()
}

/// Best available coefficients for a state: closed forms for the single-delta
/// box and the oscillator, extraction from the exact condition otherwise.
pub fn pt_coefficients(model: &ModelSpec, ordinal: usize) -> Result<PTCoefficients> {
    match model {
        ModelSpec::Box(s) if s.sites.len() == 1 => {
            let mut c = box_pt_closed(ordinal, s.sites[0].p, s.length, s.units)?;
            // per unit λ of the site strength
            let w = s.sites[0].weight;
            c.e1 *= w;
            c.e2 *= w * w;
            Ok(c)
        }
        ModelSpec::Oscillator(s) => sho_pt_closed(ordinal, s),
        ModelSpec::Well(_) => {
            let c = coupling_scale(model);
            let steps: Vec<f64> = WELL_STEPS.iter().map(|h| h * c).collect();
            numeric_pt_extract(model, ordinal, &steps)
        }
        _ => numeric_pt_extract(model, ordinal, &default_steps(model)),
    }
}

// --------------------------------------------------------- finite well

fn even_bound_states(spec: &FiniteWellDeltaSpec) -> Result<Vec<(usize, f64, f64)>> {
    let base = spec.with_lambda(0.0);
    Ok(finite_well_spectrum(&base)?
        .into_iter()
        .filter(|r| r.parity == Parity::Even)
        .map(|r| (r.ordinal, r.energy, finite_well_center_density(r.scan_var, &base)))
        .collect())
}

/// Σ over bound even l ≠ n of |ψl(0)ψn(0)|²/(En − El) for the unperturbed well.
pub fn well_bound_part_e2(spec: &FiniteWellDeltaSpec, ordinal: usize) -> Result<f64> {
    spec.validate()?;
    let even = even_bound_states(spec)?;
    if even.len() < 2 {
        return Err(Error::InsufficientStates { needed: 2, found: even.len() });
    }
    let spectrum = finite_well_spectrum(&spec.with_lambda(0.0))?;
    let target = spectrum
        .iter()
        .find(|r| r.ordinal == ordinal)
        .ok_or(Error::InsufficientStates { needed: ordinal, found: spectrum.len() })?;
    if target.parity == Parity::Odd {
        return Ok(0.0);
    }
    let (_, en, rho_n) = *even.iter().find(|s| s.0 == ordinal).expect("even state listed");
    Ok(even.iter().filter(|s| s.0 != ordinal).map(|&(_, el, rho_l)| rho_n * rho_l / (en - el)).sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxedContinuum {
    /// Outer wall positions R.
    pub outer: Vec<f64>,
    /// Continuum part of E2 from the quasi-continuum states at each R.
    pub values: Vec<f64>,
    /// Extrapolation to R → ∞ assuming corrections in 1/R.
    pub extrapolated: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WellDecomposition {
    pub ordinal: usize,
    pub total: PTCoefficients,
    pub bound: f64,
    /// total − bound
    pub continuum: f64,
    pub boxed: Option<BoxedContinuum>,
}

/// Coupling steps for the one-sided well extraction, in units of
/// `coupling_scale`.
pub const WELL_STEPS: [f64; 5] = [8e-3, 4e-3, 2e-3, 1e-3, 5e-4];

/// Splits E2 of a well state into bound and continuum parts. The continuum
/// part is total − bound; with `outer` walls given it is also summed over
/// the quasi-continuum of the well embedded in hard walls at ±R.
pub fn well_decomposition(spec: &FiniteWellDeltaSpec, ordinal: usize, outer: &[f64]) -> Result<WellDecomposition> {
    let model = ModelSpec::Well(spec.with_lambda(1.0));
    let c = coupling_scale(&model);
    let steps: Vec<f64> = WELL_STEPS.iter().map(|h| h * c).collect();
    let total = numeric_pt_extract(&model, ordinal, &steps)?;
    let bound = well_bound_part_e2(spec, ordinal)?;
    let boxed = if outer.is_empty() {
        None
    } else {
        let values = outer.iter().map(|&r| boxed_continuum_part(spec, ordinal, r)).collect::<Result<Vec<f64>>>()?;
        let xs: Vec<f64> = outer.iter().map(|r| 1.0 / r).collect();
        let extrapolated = if values.len() >= 2 { neville_at_zero(&xs, &values) } else { values[0] };
        Some(BoxedContinuum { outer: outer.to_vec(), values, extrapolated })
    };
    Ok(WellDecomposition { ordinal, total, bound, continuum: total.e2 - bound, boxed })
}

/// Continuum part of E2 for a well inside walls at ±R: the sum over every
/// boxed even state that is not one of the true bound states, up to inside
/// wavenumber K, plus the tail −ψn(0)²·2m/(πħ²K).
pub fn boxed_continuum_part(spec: &FiniteWellDeltaSpec, ordinal: usize, outer: f64) -> Result<f64> {
    let base = spec.with_lambda(0.0);
    let even = even_bound_states(&base)?;
    let pos = even
        .iter()
        .position(|s| s.0 == ordinal)
        .ok_or(Error::InvalidSpec(format!("state {ordinal} is not an even bound state")))?;
    let l = base.half_width;
    let k_max = (4.0 * base.alpha()).max(40.0 / l);
    let states = boxed_well_even_states(&base, outer, k_max)?;
    check(states.len() > even.len(), || "box too small to hold a quasi-continuum".into())?;
    let target = states[pos];
    let rho_n = target.center_density;
    let sum: f64 = states[even.len()..]
        .iter()
        .map(|s| rho_n * s.center_density / (target.energy - s.energy))
        .sum();
    let u = base.units;
    let tail = -rho_n * 2.0 * u.mass / (PI * u.hbar * u.hbar * k_max);
    Ok(sum + tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{BoxDeltaSpec, HydrogenDeltaSpec};

    fn u() -> Units {
        Units::default()
    }

    #[test]
    fn box_closed_centre() {
        let c = box_pt_closed(1, 0.5, 1.0, u()).unwrap();
        assert!((c.e0 - PI * PI).abs() < 1e-12);
        assert!((c.e1 + 2.0).abs() < 1e-14);
        assert!((c.e2 + 1.0 / (PI * PI)).abs() < 1e-15);
        let node = box_pt_closed(2, 0.5, 1.0, u()).unwrap();
        assert_eq!((node.e1, node.e2), (0.0, 0.0));
        let q = box_pt_closed(1, 0.25, 1.0, u()).unwrap();
        assert!((q.e1 + 1.0).abs() < 1e-14);
        // sin⁴ = 1/4, cot = 1: −(1/π²)(1/4)(1 + π)
        assert!((q.e2 + 0.25 * (1.0 + PI) / (PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn box_sum_matches_closed() {
        let s = box_e2_sum(1, 0.5, 1.0, u(), 100_000).unwrap();
        assert!((s.e2 + 1.0 / (PI * PI)).abs() < 1e-5);
        assert_eq!(box_e2_sum(2, 0.5, 1.0, u(), 50).unwrap().e2, 0.0);
        let s = box_e2_sum(1, 1.0 / 3.0, 1.0, u(), 10_000).unwrap();
        let c = box_pt_closed(1, 1.0 / 3.0, 1.0, u()).unwrap();
        assert!((s.e2 - c.e2).abs() <= s.e2_error);
    }

    #[test]
    fn psi1_forms() {
        let un = Units::new(1.3, 0.8).unwrap();
        for &(n, p, x) in &[(1, 0.5, 0.25), (1, 1.0 / 3.0, 1.0 / 6.0), (2, 0.3, 0.2), (3, 0.6, 0.45)] {
            let c = box_psi1(n, p, x, 1.0, un, Psi1Form::Closed).unwrap();
            let s = box_psi1(n, p, x, 1.0, un, Psi1Form::Sum { l_max: 200_000 }).unwrap();
            assert!((c - s).abs() < 1e-5, "{n} {p} {x}: {c} {s}");
        }
        assert_eq!(box_psi1(1, 0.5, 0.0, 1.0, un, Psi1Form::Closed).unwrap(), 0.0);
        assert!(box_psi1(1, 0.5, 0.0, 1.0, un, Psi1Form::Sum { l_max: 100 }).unwrap().abs() < 1e-15);
        assert!(box_psi1(1, 0.5, 0.7, 1.0, un, Psi1Form::Closed).is_err());
    }

    #[test]
    fn sho_closed_and_sum() {
        let spec = OscillatorDeltaSpec::new(1.0, 0.0, Units::new(1.0, 1.0).unwrap()).unwrap();
        let c = sho_pt_closed(0, &spec).unwrap();
        assert!((c.e0 - 0.5).abs() < 1e-15);
        assert!((c.e1 + (1.0 / PI).sqrt()).abs() < 1e-14);
        assert!((c.e2 + std::f64::consts::LN_2 / PI).abs() < 1e-14);
        let odd = sho_pt_closed(3, &spec).unwrap();
        assert_eq!((odd.e1, odd.e2), (0.0, 0.0));
        let s = sho_e2_sum(0, &spec, 1 << 16).unwrap();
        assert!((s.e2 - c.e2).abs() < 1e-6, "{} {}", s.e2, c.e2);
        assert!((sho_e1_printed(0, &spec) / c.e1 - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn extraction_box() {
        let m = ModelSpec::Box(BoxDeltaSpec::single(1.0, 0.5, 1.0, u()).unwrap());
        let c = numeric_pt_extract(&m, 1, &[1e-2, 5e-3, 2.5e-3]).unwrap();
        assert!((c.e1 + 2.0).abs() < 1e-6);
        assert!((c.e2 + 1.0 / (PI * PI)).abs() < 1e-6);
        let node = numeric_pt_extract(&m, 2, &[1e-2, 5e-3, 2.5e-3]).unwrap();
        assert!(node.e1.abs() < 1e-9 && node.e2.abs() < 1e-7);
    }

    #[test]
    fn extraction_oscillator_and_hydrogen() {
        let un = Units::new(1.0, 1.0).unwrap();
        let spec = OscillatorDeltaSpec::new(1.0, 1.0, un).unwrap();
        let c = numeric_pt_extract(&ModelSpec::Oscillator(spec), 0, &[1e-2, 5e-3, 2.5e-3]).unwrap();
        let closed = sho_pt_closed(0, &spec).unwrap();
        assert!((c.e1 - closed.e1).abs() < 1e-7);
        assert!((c.e2 - closed.e2).abs() < 1e-6);
        // hydrogen ground state: E1 = −ψ(a)², ψ = 2 a0^{-3/2} x e^{−x/a0}
        let h = HydrogenDeltaSpec::new(1.0, 1.0, 1.0, un).unwrap();
        let c = numeric_pt_extract(&ModelSpec::Hydrogen(h), 1, &[1e-2, 5e-3, 2.5e-3]).unwrap();
        let psi = 2.0 * (-1.0f64).exp();
        assert!((c.e1 + psi * psi).abs() < 1e-6, "{}", c.e1);
    }

    #[test]
    fn well_sign_reversal() {
        // 2αL = 2√50 ≈ 14.1 lies in (4π, 5π]: five bound states, top one even
        let spec = FiniteWellDeltaSpec::new(1.0, 50.0, 0.0, u()).unwrap();
        let top = spec.bound_count();
        let bound = well_bound_part_e2(&spec, top).unwrap();
        assert!(bound > 0.0);
        let d = well_decomposition(&spec, top, &[]).unwrap();
        assert!(d.total.e2 < 0.0);
        assert!(d.continuum < -bound);
        assert_eq!(well_bound_part_e2(&spec, top - 1).unwrap(), 0.0);
    }

    #[test]
    fn shallow_well_lacks_states() {
        let spec = FiniteWellDeltaSpec::new(1.0, 1.0, 0.0, u()).unwrap();
        assert!(matches!(well_bound_part_e2(&spec, 1), Err(Error::InsufficientStates { .. })));
    }

    #[test]
    fn fit_recovers_polynomial() {
        let xs = [0.3, 0.2, 0.1];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x - 3.0 * x * x + 0.5 * x * x * x).collect();
        let c = fit_through_origin(&xs, &ys);
        assert!((c[0] - 2.0).abs() < 1e-12 && (c[1] + 3.0).abs() < 1e-12 && (c[2] - 0.5).abs() < 1e-12);
    }
}
