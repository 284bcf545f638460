use std::f64::consts::PI;

use delta_spectra::dd::Dd;
use delta_spectra::models::*;
use delta_spectra::series;
use delta_spectra::specfun;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gamma_recurrence(x in 0.05f64..30.0) {
        let g = specfun::gamma(x).unwrap();
        let g1 = specfun::gamma(x + 1.0).unwrap();
        prop_assert!(rel(g1, x * g) < 1e-13, "x = {x}");
    }

    #[test]
    fn gamma_reflection(x in -4.95f64..4.95) {
        prop_assume!((x - x.round()).abs() > 0.02);
        let lhs = specfun::gamma(x).unwrap() * specfun::gamma(1.0 - x).unwrap();
        let rhs = PI / specfun::sin_pi(x);
        prop_assert!(rel(lhs, rhs) < 1e-12, "x = {x}: {lhs} vs {rhs}");
    }

    #[test]
    fn rgamma_is_reciprocal(x in -6.0f64..20.0) {
        prop_assume!(x > 0.0 || (x - x.round()).abs() > 0.02);
        let g = specfun::gamma(x).unwrap();
        prop_assert!(rel(specfun::rgamma(x) * g, 1.0) < 1e-12);
    }

    #[test]
    fn digamma_recurrence(x in 0.05f64..50.0) {
        let d = specfun::digamma(x).unwrap();
        let d1 = specfun::digamma(x + 1.0).unwrap();
        prop_assert!((d1 - d - 1.0 / x).abs() < 1e-12 * (1.0 + d1.abs() + 1.0 / x), "x = {x}");
    }

    #[test]
    fn kummer_derivative(a in -3.0f64..3.0, b in 0.3f64..4.0, z in -5.0f64..5.0) {
        let h = 1e-5;
        let fd = (specfun::kummer_m(a, b, z + h).unwrap() - specfun::kummer_m(a, b, z - h).unwrap()) / (2.0 * h);
        let exact = a / b * specfun::kummer_m(a + 1.0, b + 1.0, z).unwrap();
        let scale = 1.0 + exact.abs() + specfun::kummer_m(a, b, z).unwrap().abs();
        prop_assert!((fd - exact).abs() <= 1e-6 * scale, "a={a} b={b} z={z}: {fd} vs {exact}");
    }

    #[test]
    fn kummer_kummer_transformation(a in -2.0f64..2.0, b in 0.5f64..3.0, z in 0.0f64..6.0) {
        // M(a,b,z) = e^z M(b−a,b,−z)
        let lhs = specfun::kummer_m(a, b, z).unwrap();
        let rhs = z.exp() * specfun::kummer_m(b - a, b, -z).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs() + z.exp()), "a={a} b={b} z={z}");
    }

    #[test]
    fn pcf_satisfies_weber_equation(a in -6.0f64..6.0, z in -2.0f64..8.0) {
        let h = 1e-4;
        let u = specfun::pcf_u(a, z).unwrap();
        let up = specfun::pcf_u(a, z + h).unwrap();
        let um = specfun::pcf_u(a, z - h).unwrap();
        let second = (up - 2.0 * u + um) / (h * h);
        let rhs = (0.25 * z * z + a) * u;
        let scale = second.abs().max(rhs.abs()).max((0.25 * z * z + a.abs()) * u.abs()).max(1e-300);
        prop_assert!((second - rhs).abs() <= 1e-5 * scale, "a={a} z={z}: {second} vs {rhs}");
    }

    #[test]
    fn mirror_symmetry(p in 0.02f64..0.98, q in 0.02f64..0.98, w in -3.0f64..3.0, lambda in -8.0f64..8.0) {
        prop_assume!((p - q).abs() > 1e-3);
        let sites = if p < q { [(p, lambda), (q, w)] } else { [(q, w), (p, lambda)] };
        let spec = BoxDeltaSpec::new(1.0, &sites, Units::default()).unwrap();
        let a = box_delta_spectrum(&spec, 5).unwrap();
        let b = box_delta_spectrum(&spec.mirrored(), 5).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x.energy - y.energy).abs() <= 1e-10 * (1.0 + x.energy.abs()), "{} vs {}", x.energy, y.energy);
        }
    }

    #[test]
    fn node_protection(n in 2usize..7, j_frac in 0.0f64..1.0, lambda in -5.0f64..5.0) {
        // δ on an interior node x = jL/n of state n
        let j = 1 + ((n - 1) as f64 * j_frac) as usize;
        let j = j.min(n - 1);
        let p = j as f64 / n as f64;
        let spec = BoxDeltaSpec::single(1.0, p, lambda, Units::default()).unwrap();
        let e0 = spec.unperturbed_energy(n);
        let e = ModelSpec::Box(spec).state_energy(n).unwrap().energy;
        prop_assert!(rel(e, e0) < 1e-10, "n={n} p={p} λ={lambda}: {e} vs {e0}");
    }

    #[test]
    fn sawtooth_brackets_the_limit(j in 2usize..3000) {
        let target = (PI - 2.0) / 8.0;
        let s = series::pi_partial_sums(j);
        let a = s[j - 2].to_f64() - target;
        let b = s[j - 1].to_f64() - target;
        prop_assert!(a * b < 0.0, "j = {j}");
    }

    #[test]
    fn averaging_dominates(j in 2usize..3000) {
        let target = (PI - 2.0) / 8.0;
        let s = series::pi_partial_sums(j);
        let avg = (s[j - 1] + s[j - 2]).mul_f64(0.5).to_f64();
        let raw = s[j - 1].to_f64();
        prop_assert!((avg - target).abs() < (raw - target).abs(), "j = {j}");
    }

    #[test]
    fn accelerate_avg_halves_consecutive(v in prop::collection::vec(-1e3f64..1e3, 2..50)) {
        let avg = series::accelerate_avg(&v).unwrap();
        prop_assert_eq!(avg.len(), v.len() - 1);
        for (i, a) in avg.iter().enumerate() {
            prop_assert!(*a >= v[i].min(v[i + 1]) && *a <= v[i].max(v[i + 1]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn summation_is_thread_count_independent(len in 1usize..200_000, chunk in 1usize..5000, seed in 0u64..1000) {
        let term = |i: usize| {
            let x = ((i as u64).wrapping_mul(2654435761).wrapping_add(seed) % 10007) as f64;
            Dd::new((x - 5003.0) / (1.0 + i as f64))
        };
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let many = rayon::ThreadPoolBuilder::new().num_threads(6).build().unwrap();
        let a = one.install(|| series::ordered_sum(len, chunk, term));
        let b = many.install(|| series::ordered_sum(len, chunk, term));
        prop_assert_eq!(a.to_f64().to_bits(), b.to_f64().to_bits());
        prop_assert_eq!(a, b);
    }
}

#[test]
fn sawtooth_ungrouped_matches_grouped() {
    let saw = series::sawtooth_series(4000);
    let grouped = series::pi_series(2000, false).unwrap();
    assert!((saw.last() - grouped.last()).abs() < 1e-15);
}

// specfun, as stated over the wider ranges

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gamma_recurrence_wide(x in -10.0f64..30.0) {
        prop_assume!(x > 0.0 || (x - x.round()).abs() > 1e-3);
        let g1 = specfun::gamma(x + 1.0).unwrap();
        let g = specfun::gamma(x).unwrap();
        prop_assert!(((g1 - x * g) / g1).abs() <= 1e-11, "x = {x}");
    }

    #[test]
    fn digamma_recurrence_absolute(x in 0.05f64..60.0) {
        let d = specfun::digamma(x).unwrap();
        let d1 = specfun::digamma(x + 1.0).unwrap();
        prop_assert!((d1 - d - 1.0 / x).abs() <= 1e-11, "x = {x}");
    }
}

// roots

fn poly_roots() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, 1..7).prop_filter("separated roots", |r| {
        let mut s = r.clone();
        s.sort_by(f64::total_cmp);
        s.windows(2).all(|w| w[1] - w[0] > 0.05)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scan_finds_every_polynomial_root(mut roots in poly_roots()) {
        use delta_spectra::roots::{refine, scan_brackets, DEFAULT_TOL};
        roots.sort_by(f64::total_cmp);
        let f = |x: f64| roots.iter().map(|r| x - r).product::<f64>();
        let brackets = scan_brackets(f, (-5.5, 5.5), 50 * 6, &[]);
        prop_assert_eq!(brackets.len(), roots.len());
        for (b, r) in brackets.iter().zip(&roots) {
            let res = refine(f, *b, DEFAULT_TOL).unwrap();
            prop_assert!((res.x - r).abs() <= 1e-10);
            let h = 1e-7;
            let slope = (f(res.x + h) - f(res.x - h)) / (2.0 * h);
            prop_assert!(f(res.x).abs() <= (slope.abs() * DEFAULT_TOL).max(1e-9));
            let again = refine(f, *b, DEFAULT_TOL).unwrap();
            prop_assert_eq!(res.x.to_bits(), again.x.to_bits());
        }
    }
}

#[test]
fn registered_poles_are_never_roots() {
    use delta_spectra::roots::{refine, scan_brackets, DEFAULT_TOL};
    let poles: Vec<f64> = (0..4).map(|j| (j as f64 + 0.5) * PI).collect();
    let brackets = scan_brackets(f64::tan, (0.1, 12.0), 2000, &poles);
    let xs: Vec<f64> = brackets.iter().map(|b| refine(f64::tan, *b, DEFAULT_TOL).unwrap().x).collect();
    assert_eq!(xs.len(), 3);
    for (j, x) in xs.iter().enumerate() {
        assert!((x - (j + 1) as f64 * PI).abs() < 1e-11);
    }
}

// models

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn box_levels_continuous_in_lambda(n in 1usize..6, p in 0.02f64..0.98, lambda in -3.0f64..3.0) {
        let spec = ModelSpec::Box(BoxDeltaSpec::single(1.0, p, lambda, Units::default()).unwrap());
        let dl = 1e-3;
        let a = spec.state_energy(n).unwrap().energy;
        let b = spec.with_lambda(lambda + dl).state_energy(n).unwrap().energy;
        // |dE/dλ| = |ψ_n(p)|² ≤ 4/L here
        prop_assert!((b - a).abs() <= 4.0 * dl, "{a} → {b}");
    }
}

#[test]
fn lambda_zero_gives_textbook_levels() {
    let u = Units::default();
    let b = BoxDeltaSpec::single(2.0, 0.3, 0.0, u).unwrap();
    for r in box_delta_spectrum(&b, 6).unwrap() {
        assert!((r.scan_var - r.ordinal as f64 * PI / 2.0).abs() <= 1e-10);
    }
    let s = OscillatorDeltaSpec::new(1.7, 0.0, u).unwrap();
    for r in sho_delta_spectrum(&s, 6).unwrap() {
        assert!((r.energy - (r.ordinal as f64 + 0.5) * 1.7).abs() <= 1e-10, "{r:?}");
    }
    let h = HydrogenDeltaSpec::new(0.8, 0.0, 1.0, Units::new(1.0, 1.0).unwrap()).unwrap();
    for r in hydrogen_delta_spectrum(&h, 4).unwrap() {
        let n = r.ordinal as f64;
        assert!((r.scan_var - n).abs() <= 1e-10 * n, "{r:?}");
    }
    let w = FiniteWellDeltaSpec::new(1.0, 30.0, 0.0, u).unwrap();
    let plain = finite_well_spectrum(&w).unwrap();
    let with = finite_well_delta_spectrum(&w).unwrap();
    assert_eq!(plain.len(), with.len());
    for (a, b) in plain.iter().zip(&with) {
        assert!((a.scan_var - b.scan_var).abs() <= 1e-10);
    }
}

#[test]
fn finite_well_count_sweep() {
    let u = Units::default();
    let mut tested = 0;
    for i in 0..60 {
        let v0 = 0.3 + 4.1 * i as f64;
        let spec = FiniteWellDeltaSpec::new(1.0, v0, 0.0, u).unwrap();
        let x = 2.0 * spec.alpha() / PI;
        if (x - x.round()).abs() < 1e-3 {
            continue;
        }
        tested += 1;
        assert_eq!(finite_well_spectrum(&spec).unwrap().len(), x.ceil() as usize, "V0 = {v0}");
    }
    assert!(tested >= 50);
}

// perturb

#[test]
fn box_cross_route_converges_as_one_over_lmax() {
    use delta_spectra::perturb::{box_e2_sum, box_pt_closed};
    let u = Units::default();
    for n in [1, 3, 5] {
        for p in [0.5, 1.0 / 3.0, 0.25] {
            let closed = box_pt_closed(n, p, 1.0, u).unwrap().e2;
            let diffs: Vec<(f64, f64)> = [1e3, 1e4, 1e5]
                .iter()
                .map(|&l| {
                    let s = box_e2_sum(n, p, 1.0, u, l as u64).unwrap();
                    assert!((s.e2 - closed).abs() <= s.e2_error);
                    (l, (s.e2 - closed).abs())
                })
                .collect();
            let c = diffs[0].0 * diffs[0].1;
            for &(l, d) in &diffs[1..] {
                assert!(d <= 1.05 * c / l + 1e-13, "n={n} p={p}: {d:e} at l_max = {l}, C = {c:e}");
            }
        }
    }
}

#[test]
fn nodal_states_have_no_corrections() {
    use delta_spectra::perturb::{box_e2_sum, box_pt_closed, numeric_pt_extract};
    let u = Units::default();
    for (n, p) in [(2, 0.5), (3, 1.0 / 3.0), (3, 2.0 / 3.0), (4, 0.25), (4, 0.75)] {
        let c = box_pt_closed(n, p, 1.0, u).unwrap();
        let s = box_e2_sum(n, p, 1.0, u, 10_000).unwrap();
        let m = ModelSpec::Box(BoxDeltaSpec::single(1.0, p, 1.0, u).unwrap());
        let x = numeric_pt_extract(&m, n, &[1e-2, 5e-3, 2.5e-3]).unwrap();
        for v in [c.e1, c.e2, s.e2, x.e1, x.e2] {
            assert!(v.abs() < 1e-8, "n={n} p={p}: {v:e}");
        }
    }
    let osc = ModelSpec::Oscillator(OscillatorDeltaSpec::new(1.0, 1.0, u).unwrap());
    for level in [1, 3] {
        let x = numeric_pt_extract(&osc, level, &[1e-2, 5e-3, 2.5e-3]).unwrap();
        assert!(x.e1.abs() < 1e-8 && x.e2.abs() < 1e-8);
    }
}

// series

#[test]
fn odd_reciprocal_sums_telescope() {
    for n in [1u64, 3, 5, 7] {
        let target = 1.0 / (4.0 * (n * n) as f64);
        let run = series::odd_reciprocal_sum(n, 100_000).unwrap();
        let err = |terms: usize| (run.partial_sums[terms - 1] - target).abs();
        let c = err(1000) * 1000.0;
        for terms in [10_000, 50_000, 100_000] {
            assert!(err(terms) <= 1.05 * c / terms as f64, "n={n}, N={terms}");
        }
        // S(N) + C/N: eliminate the 1/N term between N/2 and N
        let (a, b) = (run.partial_sums[49_999], run.partial_sums[99_999]);
        assert!((2.0 * b - a - target).abs() <= 1e-7, "n={n}");
    }
}

#[test]
fn grouping_is_exact() {
    let k = 5000;
    let saw = series::sawtooth_series(2 * k);
    let grouped = series::pi_partial_sums(k);
    for j in 1..=k {
        assert_eq!(saw.partial_sums[2 * j - 1].to_bits(), grouped[j - 1].to_f64().to_bits(), "k = {j}");
    }
}

#[test]
fn partial_sums_repeat_bitwise() {
    let a = series::pi_series(20_000, true).unwrap();
    let b = series::pi_series(20_000, true).unwrap();
    assert!(a.partial_sums.iter().zip(&b.partial_sums).all(|(x, y)| x.to_bits() == y.to_bits()));
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let p = delta_spectra::perturb::box_e2_sum(1, 0.3, 1.0, Units::default(), 200_000).unwrap();
    let q = pool.install(|| delta_spectra::perturb::box_e2_sum(1, 0.3, 1.0, Units::default(), 200_000).unwrap());
    assert_eq!(p.e2.to_bits(), q.e2.to_bits());
}

// oracle

#[test]
fn eigenvectors_are_orthonormal() {
    use delta_spectra::oracle::{eigenpairs, GridSpec, Scheme};
    let u1 = Units::new(1.0, 1.0).unwrap();
    let models = [
        ModelSpec::Box(BoxDeltaSpec::single(1.0, 0.3, 2.0, Units::default()).unwrap()),
        ModelSpec::Well(FiniteWellDeltaSpec::new(1.0, 50.0, 0.3, Units::default()).unwrap()),
        ModelSpec::Oscillator(OscillatorDeltaSpec::new(1.0, 0.4, u1).unwrap()),
        ModelSpec::Hydrogen(HydrogenDeltaSpec::new(1.0, 0.2, 1.0, u1).unwrap()),
    ];
    for m in &models {
        let grid = GridSpec::aligned(m, 3, 2000, Scheme::FiniteDifference).unwrap();
        let (_, vs, _, h) = eigenpairs(m, &grid, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = h * vs[i].iter().zip(&vs[j]).map(|(a, b)| a * b).sum::<f64>();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() <= 1e-9, "{}: ⟨{i}|{j}⟩ = {dot}", m.name());
            }
        }
    }
}
