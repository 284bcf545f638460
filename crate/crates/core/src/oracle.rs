//! Independent numerical ground truth: a finite-difference Hamiltonian
//! (tridiagonal, solved by Sturm bisection and inverse iteration) and
//! segment-wise Numerov shooting with the exact delta jump.

use crate::models::{ModelSpec, Units};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaMode {
    /// ψ'(x₊) − ψ'(x₋) = −(2mλ/ħ²)ψ at each delta. In the finite-difference
    /// scheme the delta must sit on a node and enters as −λ/h.
    JumpCondition,
    /// Each delta replaced by a unit-area Gaussian of this standard deviation.
    NarrowGaussian { width: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Three-point Laplacian, second order.
    FiniteDifference,
    /// Numerov shooting per smooth segment, fourth order.
    Numerov,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub domain: (f64, f64),
    /// Grid points including both ends.
    pub points: usize,
    pub delta_mode: DeltaMode,
    pub scheme: Scheme,
}

impl GridSpec {
    /// Default domain for the model: the box itself, ±20L around the well,
    /// ±14ξ for the oscillator, [0, 120 n² a0] for hydrogen with n states.
    pub fn default_for(model: &ModelSpec, states: usize, points: usize, scheme: Scheme) -> GridSpec {
        GridSpec { domain: default_domain(model, states), points, delta_mode: DeltaMode::JumpCondition, scheme }
    }

    /// As `default_for`, with at least `min_points` points and every
    /// breakpoint (delta site, potential step) on a node.
    pub fn aligned(model: &ModelSpec, states: usize, min_points: usize, scheme: Scheme) -> Result<GridSpec> {
        let domain = default_domain(model, states);
        let problem = Problem::from_model(model, domain)?;
        let intervals = align_points(&problem, min_points.max(3) - 1);
        Ok(GridSpec { domain, points: intervals + 1, delta_mode: DeltaMode::JumpCondition, scheme })
    }

    pub fn spacing(&self) -> f64 {
        (self.domain.1 - self.domain.0) / (self.points - 1) as f64
    }

    fn refined(&self, factor: usize) -> GridSpec {
        GridSpec { points: (self.points - 1) * factor + 1, ..*self }
    }
}

pub fn default_domain(model: &ModelSpec, states: usize) -> (f64, f64) {
    match model {
        ModelSpec::Box(s) => (0.0, s.length),
        ModelSpec::Well(s) => (-20.0 * s.half_width, 20.0 * s.half_width),
        ModelSpec::Oscillator(s) => (-14.0 * s.xi(), 14.0 * s.xi()),
        ModelSpec::Hydrogen(s) => {
            let n = states.max(1) as f64;
            (0.0, 120.0 * n * n * s.bohr_radius())
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum SegPot {
    Const(f64),
    /// c·x²
    Quadratic(f64),
    /// −e²/x
    Coulomb(f64),
}

impl SegPot {
    fn v(&self, x: f64) -> f64 {
        match *self {
            SegPot::Const(v) => v,
            SegPot::Quadratic(c) => c * x * x,
            SegPot::Coulomb(e2) => -e2 / x,
        }
    }
    fn d1(&self, x: f64) -> f64 {
        match *self {
            SegPot::Const(_) => 0.0,
            SegPot::Quadratic(c) => 2.0 * c * x,
            SegPot::Coulomb(e2) => e2 / (x * x),
        }
    }
    fn d2(&self, x: f64) -> f64 {
        match *self {
            SegPot::Const(_) => 0.0,
            SegPot::Quadratic(c) => 2.0 * c,
            SegPot::Coulomb(e2) => -2.0 * e2 / (x * x * x),
        }
    }
}

/// Hard walls at lo and hi, a potential smooth between breakpoints, and deltas.
#[derive(Debug, Clone)]
struct Problem {
    lo: f64,
    hi: f64,
    breaks: Vec<f64>,
    pots: Vec<SegPot>,
    deltas: Vec<(f64, f64)>,
    /// −e²/x with ψ(0) = 0 at lo = 0
    coulomb_origin: Option<f64>,
    /// Numerov-only grading: beyond each x the step is multiplied by the factor.
    grading: Vec<(f64, f64)>,
    units: Units,
}

impl Problem {
    fn from_model(model: &ModelSpec, domain: (f64, f64)) -> Result<Problem> {
        model.validate()?;
        let (lo, hi) = domain;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidSpec(format!("bad domain [{lo}, {hi}]")));
        }
        let units = model.units();
        let mut p = match model {
            ModelSpec::Box(s) => {
                let deltas: Vec<(f64, f64)> = s.strengths().iter().map(|&(p, l)| (p * s.length, l)).collect();
                Problem {
                    lo,
                    hi,
                    breaks: deltas.iter().map(|d| d.0).collect(),
                    pots: vec![SegPot::Const(0.0); deltas.len() + 1],
                    deltas,
                    coulomb_origin: None,
                    grading: Vec::new(),
                    units,
                }
            }
            ModelSpec::Well(s) => Problem {
                lo,
                hi,
                breaks: vec![-s.half_width, 0.0, s.half_width],
                pots: vec![SegPot::Const(s.v0), SegPot::Const(0.0), SegPot::Const(0.0), SegPot::Const(s.v0)],
                deltas: vec![(0.0, s.lambda)],
                coulomb_origin: None,
                grading: Vec::new(),
                units,
            },
            ModelSpec::Oscillator(s) => {
                let c = SegPot::Quadratic(0.5 * units.mass * s.omega * s.omega);
                Problem {
                    lo,
                    hi,
                    breaks: vec![0.0],
                    pots: vec![c, c],
                    deltas: vec![(0.0, s.lambda)],
                    coulomb_origin: None,
                    grading: Vec::new(),
                    units,
                }
            }
            ModelSpec::Hydrogen(s) => {
                if lo != 0.0 {
                    return Err(Error::InvalidSpec("hydrogen domain must start at 0".into()));
                }
                let c = SegPot::Coulomb(s.e2);
                Problem {
                    lo,
                    hi,
                    breaks: vec![s.a],
                    pots: vec![c, c],
                    deltas: vec![(s.a, s.lambda)],
                    coulomb_origin: Some(s.e2),
                    grading: (1..8)
                        .map(|j| (10.0 * s.bohr_radius() * 4f64.powi(j - 1), 2f64.powi(j)))
                        .filter(|&(x, _)| x > s.a && x < hi)
                        .collect(),
                    units,
                }
            }
        };
        if p.breaks.iter().any(|&b| b <= lo || b >= hi) {
            return Err(Error::InvalidSpec(format!("domain [{lo}, {hi}] must contain every breakpoint")));
        }
        p.lo = lo;
        Ok(p)
    }

    fn segment_of(&self, x: f64) -> usize {
        self.breaks.iter().take_while(|&&b| b < x).count()
    }

    /// V at x; the mean of both sides at a breakpoint.
    fn v_at(&self, x: f64) -> f64 {
        match self.breaks.iter().position(|&b| b == x) {
            Some(i) => 0.5 * (self.pots[i].v(x) + self.pots[i + 1].v(x)),
            None => self.pots[self.segment_of(x)].v(x),
        }
    }

    fn v_min(&self) -> f64 {
        let n = 2000;
        (0..=n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / n as f64)
            .filter(|&x| x > 0.0 || self.coulomb_origin.is_none())
            .map(|x| self.v_at(x))
            .fold(f64::INFINITY, f64::min)
    }

    /// A level below the whole spectrum.
    fn energy_floor(&self) -> f64 {
        let k = self.units.kinetic();
        let mut floor = self.v_min().min(0.0);
        if let Some(e2) = self.coulomb_origin {
            // ground state of −e²/x on the half line
            floor = -e2 * e2 / (4.0 * k);
        }
        let total: f64 = self.deltas.iter().map(|d| d.1.max(0.0)).sum();
        floor - total * total / (4.0 * k) - 1.0
    }
}

// ------------------------------------------------------- finite difference

struct Tridiag {
    diag: Vec<f64>,
    off: f64,
    h: f64,
    /// x of each interior node
    xs: Vec<f64>,
}

fn gaussian(x: f64, w: f64) -> f64 {
    (-0.5 * (x / w).powi(2)).exp() / (w * (2.0 * std::f64::consts::PI).sqrt())
}

fn on_node(x: f64, lo: f64, h: f64) -> Option<usize> {
    let t = (x - lo) / h;
    let i = t.round();
    ((t - i).abs() < 1e-9).then_some(i as usize)
}

fn build_fd(problem: &Problem, grid: &GridSpec) -> Result<Tridiag> {
    if grid.points < 3 {
        return Err(Error::InvalidSpec("grid needs at least 3 points".into()));
    }
    let h = grid.spacing();
    let k = problem.units.kinetic();
    let n = grid.points - 2;
    for &b in &problem.breaks {
        if on_node(b, problem.lo, h).is_none() && !matches!(grid.delta_mode, DeltaMode::NarrowGaussian { .. }) {
            return Err(Error::InvalidSpec(format!("breakpoint {b} does not fall on a grid node (h = {h})")));
        }
    }
    let xs: Vec<f64> = (1..=n).map(|i| problem.lo + i as f64 * h).collect();
    let mut diag: Vec<f64> = xs.iter().map(|&x| 2.0 * k / (h * h) + problem.v_at(snap(x, &problem.breaks, h))).collect();
    match grid.delta_mode {
        DeltaMode::JumpCondition => {
            for &(x, lam) in &problem.deltas {
                let i = on_node(x, problem.lo, h)
                    .ok_or_else(|| Error::InvalidSpec(format!("delta at {x} is not on a grid node")))?;
                diag[i - 1] -= lam / h;
            }
        }
        DeltaMode::NarrowGaussian { width } => {
            if width < 2.0 * h {
                return Err(Error::InvalidSpec(format!("Gaussian width {width} is below two grid spacings ({h})")));
            }
            for (d, &x) in diag.iter_mut().zip(&xs) {
                for &(x0, lam) in &problem.deltas {
                    *d -= lam * gaussian(x - x0, width);
                }
            }
        }
    }
    Ok(Tridiag { diag, off: -k / (h * h), h, xs })
}

/// Return the breakpoint itself when x is within rounding of one.
fn snap(x: f64, breaks: &[f64], h: f64) -> f64 {
    breaks.iter().copied().find(|b| (b - x).abs() < 1e-9 * h).unwrap_or(x)
}

impl Tridiag {
    /// Eigenvalues below sigma (negative pivots of T − σI).
    fn count_below(&self, sigma: f64) -> usize {
        let b2 = self.off * self.off;
        let mut count = 0;
        let mut d = 1.0;
        for (i, &a) in self.diag.iter().enumerate() {
            d = if i == 0 { a - sigma } else { a - sigma - b2 / d };
            if d == 0.0 {
                d = -f64::EPSILON * (a.abs() + self.off.abs());
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The k-th smallest eigenvalue (from 0).
    fn eigenvalue(&self, k: usize) -> f64 {
        let r = 2.0 * self.off.abs();
        let mut lo = self.diag.iter().copied().fold(f64::INFINITY, f64::min) - r;
        let mut hi = self.diag.iter().copied().fold(f64::NEG_INFINITY, f64::max) + r;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvector by inverse iteration, normalized to Σψ²h = 1, with the
    /// first significant component positive.
    fn eigenvector(&self, e: f64) -> Vec<f64> {
        let n = self.diag.len();
        let shift = e + 1e-12 * (e.abs() + self.off.abs());
        let mut v = vec![1.0; n];
        for _ in 0..4 {
            v = self.solve_shifted(shift, &v);
            let norm = (v.iter().map(|x| x * x).sum::<f64>() * self.h).sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
        }
        let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if let Some(first) = v.iter().find(|x| x.abs() > 1e-3 * peak) {
            if *first < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }
        v
    }

    /// Thomas algorithm for (T − σI)x = b.
    fn solve_shifted(&self, sigma: f64, b: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let tiny = 1e-300;
        let mut piv = self.diag[0] - sigma;
        if piv == 0.0 {
            piv = tiny;
        }
        c[0] = self.off / piv;
        d[0] = b[0] / piv;
        for i in 1..n {
            let mut piv = self.diag[i] - sigma - self.off * c[i - 1];
            if piv == 0.0 {
                piv = tiny;
            }
            c[i] = self.off / piv;
            d[i] = (b[i] - self.off * d[i - 1]) / piv;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = d[i] - c[i] * x[i + 1];
        }
        x
    }
}

// ------------------------------------------------------------- Numerov

struct NSeg {
    x0: f64,
    x1: f64,
    pot: SegPot,
    steps: usize,
    /// total delta strength at x1
    jump: f64,
}

fn numerov_segments(problem: &Problem, grid: &GridSpec) -> Vec<NSeg> {
    let h = grid.spacing();
    let mut edges = vec![problem.lo, problem.hi];
    edges.extend(&problem.breaks);
    edges.extend(problem.grading.iter().map(|g| g.0));
    edges.sort_by(|a, b| a.total_cmp(b));
    edges.dedup();
    edges
        .windows(2)
        .map(|w| {
            let (x0, x1) = (w[0], w[1]);
            let pot = problem.pots[problem.segment_of(0.5 * (x0 + x1))];
            let weight = problem.grading.iter().filter(|g| g.0 <= x0).map(|g| g.1).last().unwrap_or(1.0);
            let steps = (((x1 - x0) / (h * weight)).round() as usize).max(8);
            let jump = if x1 < problem.hi {
                problem.deltas.iter().filter(|d| d.0 == x1).map(|d| d.1).sum()
            } else {
                0.0
            };
            NSeg { x0, x1, pot, steps, jump }
        })
        .collect()
}

/// Zeros of ψ in (lo, hi) when shooting from lo with ψ = 0, ψ' = 1 at
/// energy e.
fn numerov_nodes(problem: &Problem, segs: &[NSeg], e: f64) -> usize {
    let k = problem.units.kinetic();
    let (mut psi, mut dpsi) = (0.0f64, 1.0f64);
    let mut nodes = 0usize;
    let mut last_sign = 0.0f64;
    let track = |v: f64, last_sign: &mut f64, nodes: &mut usize| {
        if v != 0.0 {
            let s = v.signum();
            if *last_sign != 0.0 && s != *last_sign {
                *nodes += 1;
            }
            *last_sign = s;
        }
    };
    for (j, seg) in segs.iter().enumerate() {
        let (x0, x1, n, pot) = (seg.x0, seg.x1, seg.steps, seg.pot);
        let h = (x1 - x0) / n as f64;
        let f = |x: f64| (pot.v(x) - e) / k;
        // the last five values, for the end derivative
        let mut ring = [0.0f64; 5];
        let (p0, p1, y0_term);
        match problem.coulomb_origin {
            Some(e2) if j == 0 => {
                let beta = e2 / k;
                let eps = e / k;
                let c2 = -0.5 * beta;
                let c3 = (0.5 * beta * beta - eps) / 6.0;
                let c4 = (-beta * c3 - eps * c2) / 12.0;
                p0 = 0.0;
                p1 = h + c2 * h * h + c3 * h.powi(3) + c4 * h.powi(4);
                // (1 − h²f/12)ψ at the origin, with fψ → −β
                y0_term = h * h * beta / 12.0;
            }
            _ => {
                let f0 = f(x0);
                let f1 = pot.d1(x0) / k;
                let f2 = pot.d2(x0) / k;
                p0 = psi;
                p1 = psi
                    + h * dpsi
                    + h * h / 2.0 * f0 * psi
                    + h.powi(3) / 6.0 * (f1 * psi + f0 * dpsi)
                    + h.powi(4) / 24.0 * (f2 * psi + 2.0 * f1 * dpsi + f0 * f0 * psi);
                y0_term = (1.0 - h * h * f0 / 12.0) * p0;
            }
        }
        ring[3] = p0;
        ring[4] = p1;
        let mut y_prev = y0_term;
        let mut fc = f(x0 + h);
        let mut y_cur = (1.0 - h * h * fc / 12.0) * p1;
        let mut cur = p1;
        if p0 != 0.0 && last_sign == 0.0 {
            last_sign = p0.signum();
        }
        track(p1, &mut last_sign, &mut nodes);
        let last_seg = j + 1 == segs.len();
        for i in 1..n {
            let x_next = if i + 1 == n { x1 } else { x0 + (i + 1) as f64 * h };
            let fnext = f(x_next);
            let y_next = 2.0 * (1.0 + 5.0 * h * h * fc / 12.0) * cur - y_prev;
            let next = y_next / (1.0 - h * h * fnext / 12.0);
            y_prev = y_cur;
            y_cur = y_next;
            fc = fnext;
            cur = next;
            ring.rotate_left(1);
            ring[4] = next;
            if next.abs() > 1e150 {
                let s = 1e-150;
                y_prev *= s;
                y_cur *= s;
                cur *= s;
                ring.iter_mut().for_each(|r| *r *= s);
            }
            if !(last_seg && i + 1 == n && next == 0.0) {
                track(next, &mut last_sign, &mut nodes);
            }
        }
        psi = cur;
        dpsi = (25.0 * ring[4] - 48.0 * ring[3] + 36.0 * ring[2] - 16.0 * ring[1] + 3.0 * ring[0]) / (12.0 * h);
        dpsi -= seg.jump / k * psi;
    }
    nodes
}

const BRACKET_EXPANSIONS: usize = 200;

fn numerov_eigenvalue(problem: &Problem, segs: &[NSeg], k: usize, floor: f64) -> Result<f64> {
    let count = |e: f64| numerov_nodes(problem, segs, e);
    let fail = || Error::NoConvergence(format!("Numerov node count never brackets state {k}; grid too coarse"));
    let mut lo = floor;
    let mut it = 0;
    while count(lo) > k {
        lo -= lo.abs() + 1.0;
        it += 1;
        if it > BRACKET_EXPANSIONS {
            return Err(fail());
        }
    }
    let mut hi = lo.abs().max(1.0);
    it = 0;
    while count(hi) <= k {
        hi += hi.abs().max(1.0);
        it += 1;
        if it > 60 {
            return Err(fail());
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count(mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

// ------------------------------------------------------------ public API

/// Lowest `k_states` eigenvalues on one grid. Jump-condition Numerov
/// shooting when `scheme` is Numerov, the tridiagonal Hamiltonian otherwise.
pub fn oracle_spectrum(model: &ModelSpec, grid: &GridSpec, k_states: usize) -> Result<Vec<f64>> {
    let problem = Problem::from_model(model, grid.domain)?;
    match grid.scheme {
        Scheme::FiniteDifference => {
            let t = build_fd(&problem, grid)?;
            if k_states > t.diag.len() {
                return Err(Error::InvalidSpec("more states requested than grid nodes".into()));
            }
            Ok((0..k_states).map(|k| t.eigenvalue(k)).collect())
        }
        Scheme::Numerov => {
            if let DeltaMode::NarrowGaussian { .. } = grid.delta_mode {
                return Err(Error::InvalidSpec("Numerov shooting supports the jump condition only".into()));
            }
            let segs = numerov_segments(&problem, grid);
            let floor = problem.energy_floor();
            (0..k_states).map(|k| numerov_eigenvalue(&problem, &segs, k, floor)).collect()
        }
    }
}

/// Energies extrapolated over grids refined by 1, 2, 4, ... (`levels` grids).
#[derive(Debug, Clone, PartialEq)]
pub struct OracleEstimate {
    pub energies: Vec<f64>,
    /// |best − next-best| per state.
    pub error_estimates: Vec<f64>,
    /// raw[level][state]
    pub raw: Vec<Vec<f64>>,
    pub spacings: Vec<f64>,
}

impl OracleEstimate {
    /// log₂ of successive raw differences for one state, one per refinement
    /// triple.
    pub fn observed_orders(&self, state: usize) -> Vec<f64> {
        let col: Vec<f64> = self.raw.iter().map(|r| r[state]).collect();
        col.windows(3)
            .map(|w| ((w[0] - w[1]).abs() / (w[1] - w[2]).abs()).log2())
            .collect()
    }
}

fn richardson_exponents(grid: &GridSpec) -> &'static [i32] {
    match grid.scheme {
        Scheme::FiniteDifference => &[2, 4, 6, 8],
        Scheme::Numerov => &[4, 5, 6, 7],
    }
}

/// Richardson table for halving steps; returns the best value and the
/// difference to the previous diagonal entry.
pub fn richardson(values: &[f64], exponents: &[i32]) -> (f64, f64) {
    let mut row: Vec<f64> = values.to_vec();
    let mut prev_best = row[row.len() - 1];
    let mut best = prev_best;
    for &p in exponents.iter().take(values.len().saturating_sub(1)) {
        let f = 2f64.powi(p);
        row = row.windows(2).map(|w| w[1] + (w[1] - w[0]) / (f - 1.0)).collect();
        prev_best = best;
        best = row[row.len() - 1];
    }
    (best, (best - prev_best).abs())
}

/// Oracle energies after Richardson extrapolation over `levels` grids.
/// Fails when the estimated error of any state exceeds `tol`.
pub fn oracle_spectrum_extrapolated(
    model: &ModelSpec,
    grid: &GridSpec,
    k_states: usize,
    levels: usize,
    tol: f64,
) -> Result<OracleEstimate> {
    let levels = levels.max(2);
    let grids: Vec<GridSpec> = (0..levels).map(|i| grid.refined(1 << i)).collect();
    use rayon::prelude::*;
    let raw: Vec<Vec<f64>> = grids
        .par_iter()
        .map(|g| oracle_spectrum(model, g, k_states))
        .collect::<Result<_>>()?;
    let exps = richardson_exponents(grid);
    let mut energies = Vec::with_capacity(k_states);
    let mut errs = Vec::with_capacity(k_states);
    for s in 0..k_states {
        let col: Vec<f64> = raw.iter().map(|r| r[s]).collect();
        let (best, err) = richardson(&col, exps);
        if err > tol {
            return Err(Error::NoConvergence(format!(
                "oracle state {s}: extrapolation error {err:e} exceeds {tol:e}"
            )));
        }
        energies.push(best);
        errs.push(err);
    }
    Ok(OracleEstimate { energies, error_estimates: errs, raw, spacings: grids.iter().map(|g| g.spacing()).collect() })
}

/// Eigenvalue `state` with each delta replaced by a Gaussian of the given
/// widths (finite differences with h = w/10, extrapolated in h), then
/// extrapolated polynomially in w to w = 0.
pub fn narrow_gaussian_limit(model: &ModelSpec, domain: (f64, f64), state: usize, widths: &[f64]) -> Result<f64> {
    if widths.len() < 2 {
        return Err(Error::InvalidSpec("need at least two widths".into()));
    }
    let problem = Problem::from_model(model, domain)?;
    let span = domain.1 - domain.0;
    let mut at_width = Vec::with_capacity(widths.len());
    for &w in widths {
        let base = (span / (w / 10.0)).round() as usize;
        // keep breakpoints on nodes: make the interval count a multiple of
        // what the breakpoints need
        let base = align_points(&problem, base);
        let vals: Vec<f64> = (0..3)
            .map(|i| {
                let g = GridSpec {
                    domain,
                    points: base * (1 << i) + 1,
                    delta_mode: DeltaMode::NarrowGaussian { width: w },
                    scheme: Scheme::FiniteDifference,
                };
                build_fd(&problem, &g).map(|t| t.eigenvalue(state))
            })
            .collect::<Result<_>>()?;
        at_width.push(richardson(&vals, &[2, 4]).0);
    }
    Ok(neville_at_zero(widths, &at_width))
}

/// Smallest interval count ≥ n that puts every breakpoint on a node.
fn align_points(problem: &Problem, n: usize) -> usize {
    let span = problem.hi - problem.lo;
    (n..n + 100_000)
        .find(|&m| {
            let h = span / m as f64;
            problem.breaks.iter().all(|&b| on_node(b, problem.lo, h).is_some())
        })
        .unwrap_or(n)
}

/// Value at 0 of the interpolating polynomial through (x_i, y_i).
pub fn neville_at_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i]);
        }
    }
    p[0]
}

/// Normalized finite-difference eigenpairs: (energies, vectors on interior
/// nodes, node positions, spacing).
pub fn eigenpairs(model: &ModelSpec, grid: &GridSpec, k_states: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>, Vec<f64>, f64)> {
    let problem = Problem::from_model(model, grid.domain)?;
    let t = build_fd(&problem, grid)?;
    let es: Vec<f64> = (0..k_states).map(|k| t.eigenvalue(k)).collect();
    let vs: Vec<Vec<f64>> = es.iter().map(|&e| t.eigenvector(e)).collect();
    Ok((es, vs, t.xs.clone(), t.h))
}

/// Four-point Lagrange interpolation of grid values (zero at the walls).
fn interpolate(xs: &[f64], v: &[f64], h: f64, x0: f64) -> f64 {
    let n = v.len() as isize;
    let val = |i: isize| if i < 0 || i >= n { 0.0 } else { v[i as usize] };
    let t = (x0 - xs[0]) / h;
    let i0 = t.floor() as isize;
    if (t - t.round()).abs() < 1e-9 {
        return val(t.round() as isize);
    }
    let s = t - i0 as f64;
    let (a, b, c, d) = (val(i0 - 1), val(i0), val(i0 + 1), val(i0 + 2));
    -s * (s - 1.0) * (s - 2.0) / 6.0 * a + (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0 * b
        - (s + 1.0) * s * (s - 2.0) / 2.0 * c
        + (s + 1.0) * s * (s - 1.0) / 6.0 * d
}

/// ψ_i(x0)ψ_j(x0) for the unperturbed model (states counted from 0),
/// from normalized grid eigenvectors extrapolated in h.
pub fn matrix_element_delta(model: &ModelSpec, i: usize, j: usize, x0: f64) -> Result<f64> {
    let base = model.with_lambda(0.0);
    let domain = default_domain(&base, i.max(j) + 1);
    let problem = Problem::from_model(&base, domain)?;
    let span = domain.1 - domain.0;
    let scale = match &base {
        ModelSpec::Box(s) => s.length / (i.max(j) + 1) as f64,
        ModelSpec::Well(s) => s.half_width / (i.max(j) + 1) as f64,
        ModelSpec::Oscillator(s) => s.xi() / (i.max(j) + 1) as f64,
        ModelSpec::Hydrogen(s) => s.bohr_radius() / (i.max(j) + 1) as f64,
    };
    let n0 = align_points(&problem, ((span / scale) * 25.0).round() as usize);
    let vals: Vec<f64> = (0..4)
        .map(|lvl| {
            let g = GridSpec {
                domain,
                points: n0 * (1 << lvl) + 1,
                delta_mode: DeltaMode::JumpCondition,
                scheme: Scheme::FiniteDifference,
            };
            let (_, vs, xs, h) = eigenpairs(&base, &g, i.max(j) + 1)?;
            Ok(interpolate(&xs, &vs[i], h, x0) * interpolate(&xs, &vs[j], h, x0))
        })
        .collect::<Result<_>>()?;
    Ok(richardson(&vals, &[2, 4, 6]).0)
}
