//! The solvable systems with their eigenvalue conditions, singularity
//! lattices and spectra.
//!
//! Conventions: energies are measured from the bottom of the unperturbed
//! potential, a delta of strength λ > 0 is attractive (V = −λδ), and
//! g = 2mλ/ħ² is the jump in ψ'/ψ it produces.

use std::f64::consts::PI;

use crate::roots::{self, Bracket};
use crate::specfun;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for Units {
    /// ħ = 1, m = 1/2, so ħ²/2m = 1.
    fn default() -> Self {
        Units { hbar: 1.0, mass: 0.5 }
    }
}

impl Units {
    pub fn new(hbar: f64, mass: f64) -> Result<Units> {
        if !(hbar > 0.0 && mass > 0.0 && hbar.is_finite() && mass.is_finite()) {
            return Err(Error::InvalidSpec(format!("need hbar > 0 and m > 0, got ({hbar}, {mass})")));
        }
        Ok(Units { hbar, mass })
    }

    /// ħ²/2m.
    pub fn kinetic(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }

    /// ħ²k²/2m.
    pub fn energy_of_k(&self, k: f64) -> f64 {
        self.kinetic() * k * k
    }

    /// √(2m|E|)/ħ.
    pub fn k_of_energy(&self, e: f64) -> f64 {
        (e.abs() / self.kinetic()).sqrt()
    }

    /// 2mλ/ħ².
    pub fn jump(&self, lambda: f64) -> f64 {
        lambda / self.kinetic()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Parity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Mixed => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenRoot {
    /// Stable label: box and well count from 1, the oscillator level index
    /// from 0, hydrogen the principal number from 1.
    pub ordinal: usize,
    pub energy: f64,
    /// The variable the root was refined in (k, signed k, E or α).
    pub scan_var: f64,
    pub bracket: Option<Bracket>,
    pub residual: f64,
    pub parity: Parity,
}

impl EigenRoot {
    fn analytic(ordinal: usize, energy: f64, parity: Parity) -> Self {
        EigenRoot { ordinal, energy, scan_var: energy, bracket: None, residual: 0.0, parity }
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidSpec(msg()))
    }
}

// ---------------------------------------------------------------- box

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaSite {
    /// Position as a fraction of the box length.
    pub p: f64,
    /// Relative strength; the site strength is λ·weight.
    pub weight: f64,
}

/// Hard-wall box [0, L] with deltas −λ·w_i δ(x − p_i L).
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDeltaSpec {
    pub length: f64,
    pub sites: Vec<DeltaSite>,
    pub lambda: f64,
    pub units: Units,
}

impl BoxDeltaSpec {
    pub fn single(length: f64, p: f64, lambda: f64, units: Units) -> Result<Self> {
        let spec = BoxDeltaSpec { length, sites: vec![DeltaSite { p, weight: 1.0 }], lambda, units };
        spec.validate()?;
        Ok(spec)
    }

    /// Deltas given as (p, strength); λ is set to 1 so that `with_lambda`
    /// scales all strengths together.
    pub fn new(length: f64, deltas: &[(f64, f64)], units: Units) -> Result<Self> {
        let spec = BoxDeltaSpec {
            length,
            sites: deltas.iter().map(|&(p, weight)| DeltaSite { p, weight }).collect(),
            lambda: 1.0,
            units,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check(self.length > 0.0 && self.length.is_finite(), || format!("L must be positive, got {}", self.length))?;
        check(self.lambda.is_finite(), || "lambda must be finite".into())?;
        let mut prev = 0.0;
        for s in &self.sites {
            check(s.p > prev && s.p < 1.0, || {
                format!("delta positions must be strictly increasing in (0, 1), got {}", s.p)
            })?;
            check(s.weight.is_finite(), || "delta strengths must be finite".into())?;
            prev = s.p;
        }
        Ok(())
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        BoxDeltaSpec { lambda, ..self.clone() }
    }

    /// Strength of each site.
    pub fn strengths(&self) -> Vec<(f64, f64)> {
        self.sites.iter().map(|s| (s.p, self.lambda * s.weight)).collect()
    }

    /// The same box with x → L − x.
    pub fn mirrored(&self) -> Self {
        let mut sites: Vec<DeltaSite> =
            self.sites.iter().map(|s| DeltaSite { p: 1.0 - s.p, weight: s.weight }).collect();
        sites.reverse();
        BoxDeltaSpec { sites, ..self.clone() }
    }

    pub fn unperturbed_energy(&self, n: usize) -> f64 {
        self.units.energy_of_k(n as f64 * PI / self.length)
    }
}

/// floor(θ/π) for the phase θ = atan2(sψ, ψ') ∈ (−π, π].
fn half_turn_band(psi: f64, dpsi: f64) -> i64 {
    if psi > 0.0 {
        0
    } else if psi < 0.0 {
        -1
    } else if dpsi > 0.0 {
        0
    } else {
        1
    }
}

/// Advance (ψ, ψ') across a free segment of length d. `s` is the signed
/// wavenumber: E = sign(s)·ħ²s²/2m. Also returns the zeros of ψ in (0, d].
fn free_segment(s: f64, d: f64, psi: f64, dpsi: f64) -> (f64, f64, usize) {
    if s > 0.0 {
        let (sn, c) = (s * d).sin_cos();
        let p1 = c * psi + sn / s * dpsi;
        let d1 = -s * sn * psi + c * dpsi;
        // Prüfer phase: floor(θ/π) is read from the sign of ψ, and only
        // the number of whole turns comes from the phase itself. A zero on
        // a segment boundary is then counted exactly once.
        let phi = (s * psi).atan2(dpsi);
        let a = (s * p1).atan2(d1);
        let turns = ((phi + s * d - a) / (2.0 * PI)).round() as i64;
        let zeros = 2 * turns + half_turn_band(p1, d1) - half_turn_band(psi, dpsi);
        (p1, d1, zeros.max(0) as usize)
    } else {
        let (p1, d1) = if s < 0.0 {
            let q = -s;
            let (sh, ch) = ((q * d).sinh(), (q * d).cosh());
            (ch * psi + sh / q * dpsi, q * sh * psi + ch * dpsi)
        } else {
            (psi + d * dpsi, dpsi)
        };
        // at most one zero on a non-oscillatory segment
        let zero = psi != 0.0 && (p1 == 0.0 || p1.signum() != psi.signum());
        (p1, d1, zero as usize)
    }
}

/// ψ(L) and ψ'(L) for ψ(0) = 0, ψ'(0) = 1, plus the zeros of ψ in (0, L).
/// With `renorm` the pair is rescaled at each delta (sign preserved), which
/// keeps the zero count exact without overflow.
fn box_shoot(s: f64, spec: &BoxDeltaSpec, renorm: bool) -> (f64, f64, usize) {
    let g = spec.units.jump(spec.lambda);
    let (mut psi, mut dpsi) = (0.0, 1.0);
    let mut x = 0.0;
    let mut zeros = 0;
    for site in &spec.sites {
        let xs = site.p * spec.length;
        let (p1, d1, z) = free_segment(s, xs - x, psi, dpsi);
        zeros += z;
        psi = p1;
        dpsi = d1 - g * site.weight * p1;
        if renorm {
            let n = psi.abs().max(dpsi.abs());
            if n > 0.0 {
                psi /= n;
                dpsi /= n;
            }
        }
        x = xs;
    }
    let (p1, d1, z) = free_segment(s, spec.length - x, psi, dpsi);
    zeros += z;
    if p1 == 0.0 && zeros > 0 {
        zeros -= 1;
    }
    (p1, d1, zeros)
}

/// Number of eigenvalues below E(s) (Sturm oscillation count).
pub fn box_sturm_count(s: f64, spec: &BoxDeltaSpec) -> usize {
    box_shoot(s, spec, true).2
}

fn signed_energy(s: f64, units: &Units) -> f64 {
    s.signum() * units.energy_of_k(s)
}

/// Residual k²ψ(L) of the matching condition for ψ(0) = 0, ψ'(0) = 1.
/// For a single delta this is k sin kL − (2mλ/ħ²) sin kpL sin k(1−p)L.
pub fn box_delta_condition(k: f64, spec: &BoxDeltaSpec) -> f64 {
    k * k * box_shoot(k, spec, false).0
}

/// The single-delta condition written out directly.
pub fn box_single_delta_residual(k: f64, length: f64, p: f64, lambda: f64, units: &Units) -> f64 {
    k * (k * length).sin() - units.jump(lambda) * (k * p * length).sin() * (k * (1.0 - p) * length).sin()
}

/// Lowest `count` states, labelled by node count (ordinal n has n − 1 nodes).
/// Negative-energy states are included when the deltas bind them.
pub fn box_delta_spectrum(spec: &BoxDeltaSpec, count: usize) -> Result<Vec<EigenRoot>> {
    spec.validate()?;
    check(count >= 1, || "count must be at least 1".into())?;
    let units = spec.units;
    let attractive: f64 = spec
        .strengths()
        .iter()
        .map(|&(_, l)| units.jump(l).max(0.0))
        .sum();
    let mut s_min = -(0.5 * attractive + 1.0 / spec.length);
    while box_sturm_count(s_min, spec) > 0 {
        s_min *= 2.0;
    }
    let mut s_max = (count as f64 + 0.5) * PI / spec.length;
    while box_sturm_count(s_max, spec) < count {
        s_max *= 1.5;
    }
    let total = box_sturm_count(s_max, spec);
    let f = |s: f64| box_shoot(s, spec, false).0;
    let mut samples = 64 * (total + 2);
    let brackets = loop {
        let br = roots::scan_brackets(f, (s_min, s_max), samples, &[]);
        if br.len() == total {
            break br;
        }
        if samples > 1 << 22 {
            return Err(Error::NoConvergence(format!(
                "box scan found {} sign changes for {} states",
                br.len(),
                total
            )));
        }
        samples *= 4;
    };
    let mirror = spec.mirrored();
    let symmetric = spec
        .sites
        .iter()
        .zip(&mirror.sites)
        .all(|(a, b)| (a.p - b.p).abs() < 1e-14 && a.weight == b.weight);
    let mut out = Vec::with_capacity(count);
    for b in brackets.into_iter().take(count) {
        let r = roots::refine(f, b, 0.0)?;
        let ordinal = box_sturm_count(b.lo, spec) + 1;
        // parity about the centre of the box
        let parity = match (symmetric, ordinal % 2) {
            (false, _) => Parity::Mixed,
            (true, 1) => Parity::Even,
            (true, _) => Parity::Odd,
        };
        out.push(EigenRoot {
            ordinal,
            energy: signed_energy(r.x, &units),
            scan_var: r.x,
            bracket: Some(r.bracket),
            residual: r.residual,
            parity,
        });
    }
    Ok(out)
}

/// ħ²/(mλ): a centred delta in a box of width 2L binds a state below zero
/// only when L exceeds this.
pub fn critical_length(units: &Units, lambda: f64) -> f64 {
    units.hbar * units.hbar / (units.mass * lambda)
}

/// The negative-energy state of a single centred delta, if bound, together
/// with the critical half-width.
pub fn box_delta_bound_state(spec: &BoxDeltaSpec) -> Result<(Option<EigenRoot>, f64)> {
    spec.validate()?;
    check(spec.sites.len() == 1 && spec.sites[0].p == 0.5, || {
        "bound-state search needs a single delta at the centre".into()
    })?;
    let lambda = spec.lambda * spec.sites[0].weight;
    let units = spec.units;
    let lc = critical_length(&units, lambda);
    let half = 0.5 * spec.length;
    if !(lambda > 0.0) || half <= lc {
        return Ok((None, if lambda > 0.0 { lc } else { f64::INFINITY }));
    }
    // even state sinh κ(L − |x|): κL coth κL = mλL/ħ²
    let target = units.mass * lambda * half / (units.hbar * units.hbar);
    let f = |q: f64| {
        let x = q * half;
        let xc = if x == 0.0 { 1.0 } else { x / x.tanh() };
        xc - target
    };
    let hi = units.jump(lambda) / 2.0;
    let b = Bracket { lo: 0.0, hi, f_lo: f(0.0), f_hi: f(hi) };
    let r = roots::refine(f, b, 0.0)?;
    Ok((
        Some(EigenRoot {
            ordinal: 1,
            energy: -units.energy_of_k(r.x),
            scan_var: r.x,
            bracket: Some(r.bracket),
            residual: r.residual,
            parity: Parity::Even,
        }),
        lc,
    ))
}

/// Half-width at which the negative-energy state disappears, found by
/// bisecting on the Sturm count at E = 0 of the transfer-matrix condition.
pub fn critical_length_numeric(units: &Units, lambda: f64) -> Result<f64> {
    check(lambda > 0.0, || "critical length needs an attractive delta".into())?;
    let bound = |half: f64| -> Result<bool> {
        let spec = BoxDeltaSpec::single(2.0 * half, 0.5, lambda, *units)?;
        Ok(box_sturm_count(0.0, &spec) > 0)
    };
    let (mut lo, mut hi) = (1.0, 1.0);
    while bound(lo)? {
        lo *= 0.5;
    }
    while !bound(hi)? {
        hi *= 2.0;
    }
    while hi - lo > 4.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        if bound(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

// ---------------------------------------------------------- finite well

/// V = 0 for |x| < L, V0 outside, plus −λδ(x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteWellDeltaSpec {
    pub half_width: f64,
    pub v0: f64,
    pub lambda: f64,
    pub units: Units,
}

impl FiniteWellDeltaSpec {
    pub fn new(half_width: f64, v0: f64, lambda: f64, units: Units) -> Result<Self> {
        let s = FiniteWellDeltaSpec { half_width, v0, lambda, units };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check(self.half_width > 0.0 && self.half_width.is_finite(), || {
            format!("L must be positive, got {}", self.half_width)
        })?;
        check(self.v0 > 0.0 && self.v0.is_finite(), || format!("V0 must be positive, got {}", self.v0))?;
        check(self.lambda.is_finite(), || "lambda must be finite".into())
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        FiniteWellDeltaSpec { lambda, ..*self }
    }

    /// √(2mV0)/ħ.
    pub fn alpha(&self) -> f64 {
        self.units.k_of_energy(self.v0)
    }

    /// N + 1 where Nπ < 2αL ≤ (N+1)π.
    pub fn bound_count(&self) -> usize {
        (2.0 * self.alpha() * self.half_width / PI).ceil() as usize
    }

    fn kappa(&self, k: f64) -> f64 {
        let a = self.alpha();
        ((a - k) * (a + k)).max(0.0).sqrt()
    }
}

/// k sin kL − κ cos kL + (g/2)(cos kL + (κ/k) sin kL): zero on even states.
fn well_even_residual(k: f64, spec: &FiniteWellDeltaSpec) -> f64 {
    let l = spec.half_width;
    let kap = spec.kappa(k);
    let (s, c) = (k * l).sin_cos();
    let g = spec.units.jump(spec.lambda);
    k * s - kap * c + 0.5 * g * (c + kap / k * s)
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Even state below E = 0 (only for a strong delta): q = √(−2mE)/ħ.
fn well_even_residual_negative(q: f64, spec: &FiniteWellDeltaSpec) -> f64 {
    let l = spec.half_width;
    let a = spec.alpha();
    let kap = (a * a + q * q).sqrt();
    let g = spec.units.jump(spec.lambda);
    let (sh, ch) = ((q * l).sinh(), (q * l).cosh());
    // sinh(qL)/q written to stay finite at q = 0
    let shq = if q == 0.0 { l } else { sh / q };
    q * sh - 0.5 * g * ch + kap * (ch - 0.5 * g * shq)
}

/// k cos kL + κ sin kL: zero on odd states (untouched by a centred delta).
fn well_odd_residual(k: f64, spec: &FiniteWellDeltaSpec) -> f64 {
    let (s, c) = (k * spec.half_width).sin_cos();
    k * c + spec.kappa(k) * s
}

/// Residual of the even-state condition with the centred delta,
/// E tan kL − √(E(V0−E)) + λ√m/(√2ħ)[√(V0−E) tan kL + √E].
/// Singular where kL = (j + 1/2)π; see `finite_well_singularities`.
pub fn finite_well_delta_condition(e: f64, spec: &FiniteWellDeltaSpec) -> Result<f64> {
    finite_well_condition_signed(e, spec, 1.0)
}

/// The same condition with the opposite sign on the λ term (repulsive delta),
/// kept for comparison.
pub fn finite_well_delta_condition_printed(e: f64, spec: &FiniteWellDeltaSpec) -> Result<f64> {
    finite_well_condition_signed(e, spec, -1.0)
}

fn finite_well_condition_signed(e: f64, spec: &FiniteWellDeltaSpec, sign: f64) -> Result<f64> {
    spec.validate()?;
    if !(e > 0.0 && e < spec.v0) {
        return Err(Error::InvalidSpec(format!("need 0 < E < V0, got E = {e}")));
    }
    let u = spec.units;
    let t = (u.k_of_energy(e) * spec.half_width).tan();
    let c = spec.lambda * u.mass.sqrt() / (2f64.sqrt() * u.hbar);
    Ok(e * t - (e * (spec.v0 - e)).sqrt() + sign * c * ((spec.v0 - e).sqrt() * t + e.sqrt()))
}

/// Energies in (0, V0) where tan kL has poles.
pub fn finite_well_singularities(spec: &FiniteWellDeltaSpec) -> Vec<f64> {
    (0..)
        .map(|j| spec.units.energy_of_k((j as f64 + 0.5) * PI / spec.half_width))
        .take_while(|&e| e < spec.v0)
        .collect()
}

/// Unperturbed bound states (the delta is ignored).
pub fn finite_well_spectrum(spec: &FiniteWellDeltaSpec) -> Result<Vec<EigenRoot>> {
    finite_well_delta_spectrum(&spec.with_lambda(0.0))
}

/// All bound states with the centred delta, ordered by energy and labelled
/// from 1, with parities.
pub fn finite_well_delta_spectrum(spec: &FiniteWellDeltaSpec) -> Result<Vec<EigenRoot>> {
    spec.validate()?;
    let u = spec.units;
    let a = spec.alpha();
    let l = spec.half_width;
    let samples = 400 * (spec.bound_count() + 2) + 2000;
    let k_lo = 1e-9 * a;
    let mut states: Vec<EigenRoot> = Vec::new();

    let even = |k: f64| well_even_residual(k, spec);
    if even(k_lo) > 0.0 {
        // the delta has pulled the ground state below E = 0
        let g = u.jump(spec.lambda);
        let neg = |q: f64| well_even_residual_negative(q, spec);
        let hi = g.max(1.0 / l);
        let b = Bracket { lo: 0.0, hi, f_lo: neg(0.0), f_hi: neg(hi) };
        let r = roots::refine(neg, b, 0.0)?;
        states.push(EigenRoot {
            ordinal: 0,
            energy: -u.energy_of_k(r.x),
            scan_var: -r.x,
            bracket: Some(r.bracket),
            residual: r.residual,
            parity: Parity::Even,
        });
    }
    let mut push_roots = |f: &dyn Fn(f64) -> f64, parity: Parity| -> Result<()> {
        for b in roots::scan_brackets(f, (k_lo, a), samples, &[]) {
            let r = roots::refine(f, b, 0.0)?;
            states.push(EigenRoot {
                ordinal: 0,
                energy: u.energy_of_k(r.x),
                scan_var: r.x,
                bracket: Some(r.bracket),
                residual: r.residual,
                parity,
            });
        }
        Ok(())
    };
    push_roots(&even, Parity::Even)?;
    push_roots(&|k| well_odd_residual(k, spec), Parity::Odd)?;
    states.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    for (i, s) in states.iter_mut().enumerate() {
        s.ordinal = i + 1;
    }
    Ok(states)
}

/// |ψ(0)|² of the normalized unperturbed even state with inside wavenumber k.
pub fn finite_well_center_density(k: f64, spec: &FiniteWellDeltaSpec) -> f64 {
    let l = spec.half_width;
    let kap = spec.kappa(k);
    let c = (k * l).cos();
    1.0 / (l + (2.0 * k * l).sin() / (2.0 * k) + c * c / kap)
}

/// An even state of the well embedded in hard walls at ±R.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxedWellState {
    pub energy: f64,
    /// |ψ(0)|² of the normalized state.
    pub center_density: f64,
}

/// Even states of the well inside hard walls at ±R with inside wavenumber
/// below `k_max`. Below V0 the scan runs in k, above it in k' = √(k² − α²)
/// so the dense quasi-continuum is sampled evenly.
pub fn boxed_well_even_states(spec: &FiniteWellDeltaSpec, outer: f64, k_max: f64) -> Result<Vec<BoxedWellState>> {
    spec.validate()?;
    let l = spec.half_width;
    check(outer > l, || format!("outer wall {outer} must lie outside the well"))?;
    let a = spec.alpha();
    let d = outer - l;
    let below = |k: f64| {
        let kap = spec.kappa(k);
        let t = if kap * d < 1e-12 { d } else { (kap * d).tanh() / kap };
        let (s, c) = (k * l).sin_cos();
        k * s * t - c
    };
    let above = |kp: f64| {
        let k = (a * a + kp * kp).sqrt();
        let (s, c) = (k * l).sin_cos();
        k * s * d * sinc(kp * d) - c * (kp * d).cos()
    };
    let mut out = Vec::new();
    let n_below = 4000 + (400.0 * a * l / PI) as usize;
    for b in roots::scan_brackets(below, (1e-9 * a, a), n_below, &[]) {
        let r = roots::refine(below, b, 0.0)?;
        out.push(boxed_state(r.x, spec, outer));
    }
    if k_max > a {
        let kp_max = (k_max * k_max - a * a).sqrt();
        let n_above = 1000 + (24.0 * kp_max * outer / PI) as usize;
        for b in roots::scan_brackets(above, (0.0, kp_max), n_above, &[]) {
            let r = roots::refine(above, b, 0.0)?;
            out.push(boxed_state((a * a + r.x * r.x).sqrt(), spec, outer));
        }
    }
    Ok(out)
}

fn boxed_state(k: f64, spec: &FiniteWellDeltaSpec, outer: f64) -> BoxedWellState {
    let l = spec.half_width;
    let d = outer - l;
    let a = spec.alpha();
    let (s, c) = (k * l).sin_cos();
    let inside = 0.5 * l + (2.0 * k * l).sin() / (4.0 * k);
    let outside = if k > a {
        let kp = ((k - a) * (k + a)).sqrt();
        let (sd, cd) = (kp * d).sin_cos();
        // match ψ or ψ', whichever denominator is larger
        let b2 = if sd.abs() >= cd.abs() { (c / sd).powi(2) } else { (k * s / (kp * cd)).powi(2) };
        b2 * (0.5 * d - (2.0 * kp * d).sin() / (4.0 * kp))
    } else {
        let kap = spec.kappa(k);
        let x = kap * d;
        if x < 1e-8 {
            c * c * d / 3.0
        } else {
            c * c * (1.0 / (2.0 * kap * x.tanh()) - d / (2.0 * x.sinh().powi(2)))
        }
    };
    BoxedWellState { energy: spec.units.energy_of_k(k), center_density: 1.0 / (2.0 * (inside + outside)) }
}

// ---------------------------------------------------------- oscillator

/// Harmonic oscillator with −λδ(x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorDeltaSpec {
    pub omega: f64,
    pub lambda: f64,
    pub units: Units,
}

impl OscillatorDeltaSpec {
    pub fn new(omega: f64, lambda: f64, units: Units) -> Result<Self> {
        let s = OscillatorDeltaSpec { omega, lambda, units };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check(self.omega > 0.0 && self.omega.is_finite(), || format!("omega must be positive, got {}", self.omega))?;
        check(self.lambda.is_finite(), || "lambda must be finite".into())
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        OscillatorDeltaSpec { lambda, ..*self }
    }

    /// √(ħ/2mω).
    pub fn xi(&self) -> f64 {
        (self.units.hbar / (2.0 * self.units.mass * self.omega)).sqrt()
    }

    pub fn quantum(&self) -> f64 {
        self.units.hbar * self.omega
    }

    /// a = −E/ħω.
    pub fn a_of_energy(&self, e: f64) -> f64 {
        -e / self.quantum()
    }

    pub fn unperturbed_energy(&self, level: usize) -> f64 {
        (level as f64 + 0.5) * self.quantum()
    }
}

/// √2 Γ(3/4 + a/2)/Γ(1/4 + a/2) − mλξ/ħ² with a = −E/ħω. Zeros are the even
/// levels; poles at E = (2j + 3/2)ħω.
pub fn sho_delta_condition(e: f64, spec: &OscillatorDeltaSpec) -> Result<f64> {
    spec.validate()?;
    let a = spec.a_of_energy(e);
    let g = specfun::gamma(0.75 + 0.5 * a)?;
    let u = spec.units;
    Ok(2f64.sqrt() * g * specfun::rgamma(0.25 + 0.5 * a) - u.mass * spec.lambda * spec.xi() / (u.hbar * u.hbar))
}

/// Poles of the condition up to `e_max`.
pub fn sho_singularities(spec: &OscillatorDeltaSpec, e_max: f64) -> Vec<f64> {
    (0..)
        .map(|j| (2.0 * j as f64 + 1.5) * spec.quantum())
        .take_while(|&e| e <= e_max)
        .collect()
}

/// Lowest `count` levels. Even levels are roots of the condition, odd ones
/// are (2j + 3/2)ħω unchanged. Ordinal = level index from 0.
pub fn sho_delta_spectrum(spec: &OscillatorDeltaSpec, count: usize) -> Result<Vec<EigenRoot>> {
    spec.validate()?;
    check(count >= 1, || "count must be at least 1".into())?;
    let hw = spec.quantum();
    let n_even = count.div_ceil(2);
    let u = spec.units;
    // the free-line delta bound −mλ²/2ħ² is below every level
    let e_lo = -(u.mass * spec.lambda * spec.lambda / (2.0 * u.hbar * u.hbar)) - hw;
    let e_hi = (2.0 * n_even as f64 - 0.5) * hw;
    let poles = sho_singularities(spec, e_hi + hw);
    let f = |e: f64| sho_delta_condition(e, spec).unwrap_or(f64::NAN);
    let mut samples = 200 * (n_even + 2);
    let brackets = loop {
        let br = roots::scan_brackets(f, (e_lo, e_hi), samples, &poles);
        if br.len() >= n_even {
            break br;
        }
        if samples > 1 << 20 {
            return Err(Error::NoConvergence(format!(
                "oscillator scan found {} even roots, expected {n_even}",
                br.len()
            )));
        }
        samples *= 4;
    };
    let mut out = Vec::with_capacity(count);
    for (n, b) in brackets.into_iter().take(n_even).enumerate() {
        let r = roots::refine(f, b, 0.0)?;
        out.push(EigenRoot {
            ordinal: 2 * n,
            energy: r.x,
            scan_var: r.x,
            bracket: Some(r.bracket),
            residual: r.residual,
            parity: Parity::Even,
        });
        if 2 * n + 1 < count {
            out.push(EigenRoot::analytic(2 * n + 1, spec.unperturbed_energy(2 * n + 1), Parity::Odd));
        }
    }
    Ok(out)
}

// ------------------------------------------------------------ hydrogen

/// Half-line −e²/x potential (ψ(0) = 0) with −λδ(x − a).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HydrogenDeltaSpec {
    pub a: f64,
    pub lambda: f64,
    pub e2: f64,
    pub units: Units,
}

/// Largest 2ka used; beyond it e^{−z} scaling underflows the residual.
const HYDROGEN_Z_MAX: f64 = 300.0;

impl HydrogenDeltaSpec {
    pub fn new(a: f64, lambda: f64, e2: f64, units: Units) -> Result<Self> {
        let s = HydrogenDeltaSpec { a, lambda, e2, units };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check(self.a > 0.0 && self.a.is_finite(), || format!("a must be positive, got {}", self.a))?;
        check(self.e2 > 0.0 && self.e2.is_finite(), || format!("e2 must be positive, got {}", self.e2))?;
        check(self.lambda.is_finite(), || "lambda must be finite".into())
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        HydrogenDeltaSpec { lambda, ..*self }
    }

    /// ħ²/(me²).
    pub fn bohr_radius(&self) -> f64 {
        self.units.hbar * self.units.hbar / (self.units.mass * self.e2)
    }

    /// −me⁴/(2ħ²α²); α = n gives the unperturbed levels.
    pub fn energy_of_alpha(&self, alpha: f64) -> f64 {
        let u = self.units;
        -u.mass * self.e2 * self.e2 / (2.0 * u.hbar * u.hbar * alpha * alpha)
    }

    pub fn alpha_of_energy(&self, e: f64) -> f64 {
        let u = self.units;
        u.mass * self.e2 / (u.hbar * u.hbar * u.k_of_energy(e))
    }

    pub fn unperturbed_energy(&self, n: usize) -> f64 {
        self.energy_of_alpha(n as f64)
    }
}

/// Matching residual in α, z = 2ka:
/// z²e^{−z}[−M U' + M' U − (mλ/ħ²k) M U], with M = M(1−α, 2, z),
/// U = U(1−α, 2, z) and primes d/dz. At λ = 0 this is 1/Γ(1−α).
pub fn hydrogen_residual_alpha(alpha: f64, spec: &HydrogenDeltaSpec) -> Result<f64> {
    let u = spec.units;
    let k = u.mass * spec.e2 / (u.hbar * u.hbar * alpha);
    let z = 2.0 * k * spec.a;
    let ap = 1.0 - alpha;
    let m = specfun::kummer_m(ap, 2.0, z)?;
    let dm = 0.5 * ap * specfun::kummer_m(ap + 1.0, 3.0, z)?;
    let (uu, du) = specfun::tricomi_u_b2_with_deriv(ap, z)?;
    let mu = u.mass * spec.lambda / (u.hbar * u.hbar * k);
    Ok(z * z * (-z).exp() * (-m * du + dm * uu - mu * m * uu))
}

/// The matching residual at energy E < 0 (scaled as in `hydrogen_residual_alpha`).
pub fn hydrogen_delta_condition(e: f64, spec: &HydrogenDeltaSpec) -> Result<f64> {
    spec.validate()?;
    if !(e < 0.0) {
        return Err(Error::InvalidSpec(format!("need E < 0, got {e}")));
    }
    hydrogen_residual_alpha(spec.alpha_of_energy(e), spec)
}

/// Lowest `count` bound states, labelled n = 1, 2, ...
pub fn hydrogen_delta_spectrum(spec: &HydrogenDeltaSpec, count: usize) -> Result<Vec<EigenRoot>> {
    spec.validate()?;
    check(count >= 1, || "count must be at least 1".into())?;
    let a0 = spec.bohr_radius();
    let alpha_lo = (2.0 * spec.a / (a0 * HYDROGEN_Z_MAX)).max(0.02);
    let alpha_hi = count as f64 + 1.0;
    let f = |al: f64| hydrogen_residual_alpha(al, spec).unwrap_or(f64::NAN);
    let mut samples = 100 * (count + 2);
    let brackets = loop {
        let br = roots::scan_brackets(f, (alpha_lo, alpha_hi), samples, &[]);
        if br.len() >= count {
            break br;
        }
        if samples > 1 << 16 {
            return Err(Error::NoConvergence(format!(
                "hydrogen scan found {} roots in α ∈ [{alpha_lo}, {alpha_hi}], expected {count}",
                br.len()
            )));
        }
        samples *= 4;
    };
    let mut out = Vec::with_capacity(count);
    for (i, b) in brackets.into_iter().take(count).enumerate() {
        let r = roots::refine(f, b, 0.0)?;
        out.push(EigenRoot {
            ordinal: i + 1,
            energy: spec.energy_of_alpha(r.x),
            scan_var: r.x,
            bracket: Some(r.bracket),
            residual: r.residual,
            parity: Parity::Mixed,
        });
    }
    Ok(out)
}

// ------------------------------------------------------------ dispatch

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Box(BoxDeltaSpec),
    Well(FiniteWellDeltaSpec),
    Oscillator(OscillatorDeltaSpec),
    Hydrogen(HydrogenDeltaSpec),
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Box(_) => "box-delta",
            ModelSpec::Well(_) => "well-delta",
            ModelSpec::Oscillator(_) => "sho-delta",
            ModelSpec::Hydrogen(_) => "hydrogen-delta",
        }
    }

    pub fn units(&self) -> Units {
        match self {
            ModelSpec::Box(s) => s.units,
            ModelSpec::Well(s) => s.units,
            ModelSpec::Oscillator(s) => s.units,
            ModelSpec::Hydrogen(s) => s.units,
        }
    }

    pub fn lambda(&self) -> f64 {
        match self {
            ModelSpec::Box(s) => s.lambda,
            ModelSpec::Well(s) => s.lambda,
            ModelSpec::Oscillator(s) => s.lambda,
            ModelSpec::Hydrogen(s) => s.lambda,
        }
    }

    pub fn with_lambda(&self, lambda: f64) -> ModelSpec {
        match self {
            ModelSpec::Box(s) => ModelSpec::Box(s.with_lambda(lambda)),
            ModelSpec::Well(s) => ModelSpec::Well(s.with_lambda(lambda)),
            ModelSpec::Oscillator(s) => ModelSpec::Oscillator(s.with_lambda(lambda)),
            ModelSpec::Hydrogen(s) => ModelSpec::Hydrogen(s.with_lambda(lambda)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::Box(s) => s.validate(),
            ModelSpec::Well(s) => s.validate(),
            ModelSpec::Oscillator(s) => s.validate(),
            ModelSpec::Hydrogen(s) => s.validate(),
        }
    }

    /// Lowest `count` states (the well returns all of its bound states).
    pub fn spectrum(&self, count: usize) -> Result<Vec<EigenRoot>> {
        match self {
            ModelSpec::Box(s) => box_delta_spectrum(s, count),
            ModelSpec::Well(s) => {
                let mut v = finite_well_delta_spectrum(s)?;
                v.truncate(count);
                Ok(v)
            }
            ModelSpec::Oscillator(s) => sho_delta_spectrum(s, count),
            ModelSpec::Hydrogen(s) => hydrogen_delta_spectrum(s, count),
        }
    }

    /// Label of the lowest state.
    pub fn first_ordinal(&self) -> usize {
        match self {
            ModelSpec::Oscillator(_) => 0,
            _ => 1,
        }
    }

    /// Energy of the state with the given label.
    pub fn state_energy(&self, ordinal: usize) -> Result<EigenRoot> {
        let count = ordinal + 1 - self.first_ordinal();
        let all = match self {
            ModelSpec::Well(s) => finite_well_delta_spectrum(s)?,
            _ => self.spectrum(count)?,
        };
        all.into_iter()
            .find(|r| r.ordinal == ordinal)
            .ok_or(Error::InsufficientStates { needed: count, found: 0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> Units {
        Units::default()
    }

    #[test]
    fn box_lambda_zero_levels() {
        let spec = BoxDeltaSpec::single(1.0, 0.3, 0.0, u()).unwrap();
        let roots = box_delta_spectrum(&spec, 4).unwrap();
        for (r, n) in roots.iter().zip(1..) {
            assert_eq!(r.ordinal, n);
            assert!((r.scan_var - n as f64 * PI).abs() < 1e-12);
        }
        for n in 1..5 {
            assert!(box_delta_condition(n as f64 * PI, &spec).abs() < 1e-12);
        }
    }

    #[test]
    fn node_on_delta_is_untouched() {
        let spec = BoxDeltaSpec::single(1.0, 0.5, 0.2, u()).unwrap();
        let r = box_delta_spectrum(&spec, 3).unwrap();
        assert!(r[0].energy < PI * PI);
        assert!((r[1].energy - 4.0 * PI * PI).abs() < 1e-10);
        assert!(box_delta_condition(2.0 * PI, &spec).abs() < 1e-12);
    }

    #[test]
    fn transfer_matches_single_delta_form() {
        let units = Units::new(1.3, 0.7).unwrap();
        for &(k, p, lam) in &[(2.1, 0.3, 0.4), (7.7, 0.61, -1.2), (0.4, 0.05, 3.0)] {
            let spec = BoxDeltaSpec::single(1.7, p, lam, units).unwrap();
            let a = box_delta_condition(k, &spec);
            let b = box_single_delta_residual(k, 1.7, p, lam, &units);
            assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()), "{a} {b}");
        }
    }

    #[test]
    fn sturm_count_brackets_levels() {
        let spec = BoxDeltaSpec::single(1.0, 0.5, 0.0, u()).unwrap();
        assert_eq!(box_sturm_count(0.5 * PI, &spec), 0);
        assert_eq!(box_sturm_count(1.5 * PI, &spec), 1);
        assert_eq!(box_sturm_count(4.5 * PI, &spec), 4);
        assert_eq!(box_sturm_count(-3.0, &spec), 0);
    }

    #[test]
    fn strong_delta_binds_below_zero() {
        let units = Units::new(1.0, 1.0).unwrap();
        let spec = BoxDeltaSpec::single(4.0, 0.5, 1.0, units).unwrap();
        let (root, lc) = box_delta_bound_state(&spec).unwrap();
        assert_eq!(lc, 1.0);
        let root = root.unwrap();
        assert!(root.energy < 0.0);
        let spectrum = box_delta_spectrum(&spec, 1).unwrap();
        assert!((spectrum[0].energy - root.energy).abs() < 1e-12 * root.energy.abs());
        let spec = BoxDeltaSpec::single(1.0, 0.5, 1.0, units).unwrap();
        assert!(box_delta_bound_state(&spec).unwrap().0.is_none());
    }

    #[test]
    fn critical_length_detected() {
        let units = Units::new(1.0, 2.0).unwrap();
        let lc = critical_length_numeric(&units, 0.7).unwrap();
        assert!((lc - critical_length(&units, 0.7)).abs() < 1e-12 * lc);
    }

    #[test]
    fn mirror_symmetry() {
        let spec = BoxDeltaSpec::new(1.0, &[(0.2, 0.8), (0.7, 1.5)], u()).unwrap();
        let a = box_delta_spectrum(&spec, 4).unwrap();
        let b = box_delta_spectrum(&spec.mirrored(), 4).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.energy - y.energy).abs() < 1e-10 * x.energy.abs());
        }
    }

    #[test]
    fn well_three_states() {
        let units = u();
        let l = 1.0;
        // αL = 1.25π
        let alpha = 1.25 * PI / l;
        let v0 = units.energy_of_k(alpha);
        let spec = FiniteWellDeltaSpec::new(l, v0, 0.0, units).unwrap();
        let s = finite_well_spectrum(&spec).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(spec.bound_count(), 3);
        let par: Vec<Parity> = s.iter().map(|r| r.parity).collect();
        assert_eq!(par, vec![Parity::Even, Parity::Odd, Parity::Even]);
    }

    #[test]
    fn well_condition_reduces_at_zero_lambda() {
        let spec = FiniteWellDeltaSpec::new(1.0, 50.0, 0.0, u()).unwrap();
        let s = finite_well_spectrum(&spec).unwrap();
        assert_eq!(s.len(), 5);
        for r in s.iter().filter(|r| r.parity == Parity::Even) {
            let res = finite_well_delta_condition(r.energy, &spec).unwrap();
            assert!(res.abs() < 1e-9, "{res}");
        }
        assert!(finite_well_delta_condition(60.0, &spec).is_err());
    }

    #[test]
    fn well_delta_lowers_even_states() {
        let base = FiniteWellDeltaSpec::new(1.0, 50.0, 0.0, u()).unwrap();
        let s0 = finite_well_spectrum(&base).unwrap();
        let s1 = finite_well_delta_spectrum(&base.with_lambda(0.05)).unwrap();
        assert_eq!(s0.len(), s1.len());
        for (a, b) in s0.iter().zip(&s1) {
            match a.parity {
                Parity::Even => {
                    assert!(b.energy < a.energy);
                    let res = finite_well_delta_condition(b.energy, &base.with_lambda(0.05)).unwrap();
                    assert!(res.abs() < 1e-8, "{res}");
                }
                _ => assert_eq!(a.energy, b.energy),
            }
        }
    }

    #[test]
    fn well_density_is_kappa_over_one_plus_kappa_l() {
        let spec = FiniteWellDeltaSpec::new(1.0, 50.0, 0.0, u()).unwrap();
        let r = &finite_well_spectrum(&spec).unwrap()[0];
        let kap = spec.kappa(r.scan_var);
        let d = finite_well_center_density(r.scan_var, &spec);
        assert!((d - kap / (1.0 + kap)).abs() < 1e-12);
    }

    #[test]
    fn boxed_well_approaches_bound_states() {
        let spec = FiniteWellDeltaSpec::new(1.0, 50.0, 0.0, u()).unwrap();
        let free = finite_well_spectrum(&spec).unwrap();
        let boxed = boxed_well_even_states(&spec, 20.0, 0.0).unwrap();
        let even: Vec<&EigenRoot> = free.iter().filter(|r| r.parity == Parity::Even).collect();
        assert_eq!(boxed.len(), even.len());
        for (b, f) in boxed.iter().zip(even) {
            assert!((b.energy - f.energy).abs() < 1e-9);
            let d = finite_well_center_density(f.scan_var, &spec);
            assert!((b.center_density - d).abs() < 1e-9);
        }
    }

    #[test]
    fn sho_lambda_zero() {
        let units = Units::new(1.0, 1.0).unwrap();
        let spec = OscillatorDeltaSpec::new(1.0, 0.0, units).unwrap();
        let s = sho_delta_spectrum(&spec, 8).unwrap();
        for (r, n) in s.iter().zip(0..) {
            assert_eq!(r.ordinal, n);
            assert!((r.energy - (n as f64 + 0.5)).abs() < 1e-10, "{} {}", r.energy, n);
        }
    }

    #[test]
    fn sho_attractive_lowers_ground() {
        let units = Units::new(1.0, 1.0).unwrap();
        let spec = OscillatorDeltaSpec::new(1.0, 0.1, units).unwrap();
        let s = sho_delta_spectrum(&spec, 2).unwrap();
        assert!(s[0].energy < 0.5);
        assert_eq!(s[1].energy, 1.5);
        assert!(sho_delta_condition(1.5, &spec).is_err());
    }

    #[test]
    fn hydrogen_lambda_zero_gives_integer_alpha() {
        let units = Units::new(1.0, 1.0).unwrap();
        let spec = HydrogenDeltaSpec::new(1.0, 0.0, 1.0, units).unwrap();
        let s = hydrogen_delta_spectrum(&spec, 3).unwrap();
        for (r, n) in s.iter().zip(1..) {
            assert!((r.scan_var - n as f64).abs() < 1e-9, "{}", r.scan_var);
        }
        let r = hydrogen_residual_alpha(0.37, &spec).unwrap();
        assert!((r - specfun::rgamma(0.63)).abs() < 1e-8 * r.abs());
    }

    #[test]
    fn hydrogen_shift_follows_density() {
        let units = Units::new(1.0, 1.0).unwrap();
        let spec = HydrogenDeltaSpec::new(1.0, 1e-4, 1.0, units).unwrap();
        let e = hydrogen_delta_spectrum(&spec, 1).unwrap()[0].energy;
        // −λ|ψ1(a)|², ψ1 = 2 x e^{−x}
        let psi = 2.0 * (-1.0f64).exp();
        let e1 = (e + 0.5) / 1e-4;
        assert!((e1 + psi * psi).abs() < 1e-3, "{e1}");
    }

    #[test]
    fn sturm_count_with_node_on_delta() {
        // kx_s = 3π at k = 4.5π: ψ vanishes (to rounding) at the site
        let spec = BoxDeltaSpec::single(1.0, 2.0 / 3.0, 0.01, Units::default()).unwrap();
        for c in 1..7 {
            assert_eq!(box_sturm_count((c as f64 + 0.5) * PI, &spec), c);
        }
        assert_eq!(box_delta_spectrum(&spec, 4).unwrap().len(), 4);
    }
}
