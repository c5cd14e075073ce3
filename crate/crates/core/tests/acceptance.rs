//! Acceptance suite: every criterion runs at its stated tolerance and
//! prints one PASS/FAIL line. Criteria run sequentially in a single
//! test so wall-clock measurements are not distorted by test-level
//! parallelism. Run with `cargo test --test acceptance -- --nocapture`
//! to see the per-criterion lines immediately.

mod common;

use std::panic::AssertUnwindSafe;
use std::time::Instant;

use common::*;
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rom_core::bench::{fit_scaling_exponent, run_benchmark};
use rom_core::gram_schmidt::gram_deviation;
use rom_core::integration::linspace;
use rom_core::pendulum::{generate_training, simulate_pendulum, PendulumConfig};
use rom_core::splines::SUPPORTED_DEGREES;
use rom_core::{
    build_surrogate, fit_spline, reduce_basis, relative_l2_error, Basis, Quadrature,
    QuadratureRule, Surrogate, TrainingSet,
};

const TIME_MAX: f64 = 50.0;
const TIME_COUNT: usize = 1001;
const LAMBDA_MIN: f64 = 1.0;
const LAMBDA_MAX: f64 = 5.0;

type Outcome = Result<String, String>;
type CriterionFn = fn() -> Outcome;

fn pendulum_config(n_lambda: usize) -> PendulumConfig {
    PendulumConfig::new(
        0.2,
        linspace(LAMBDA_MIN, LAMBDA_MAX, n_lambda),
        linspace(0.0, TIME_MAX, TIME_COUNT),
        std::f64::consts::FRAC_PI_2,
        0.0,
        10,
    )
    .unwrap()
}

/// Dense ground-truth set for validation: one solution per test lambda.
fn test_rows(lambdas: &[f64]) -> Array2<f64> {
    let cfg = pendulum_config(2);
    let mut rows = Array2::zeros((lambdas.len(), TIME_COUNT));
    for (i, &lam) in lambdas.iter().enumerate() {
        rows.row_mut(i)
            .assign(&simulate_pendulum(&cfg, lam).unwrap());
    }
    rows
}

fn validate_against(
    surrogate: &Surrogate,
    q: &Quadrature,
    lambdas: &[f64],
    truth: &Array2<f64>,
) -> (f64, f64) {
    let mut errors: Vec<f64> = lambdas
        .iter()
        .enumerate()
        .map(|(i, &lam)| {
            let approx = surrogate.eval(lam).unwrap();
            relative_l2_error(q, approx.view(), truth.row(i)).unwrap()
        })
        .collect();
    errors.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let max = *errors.last().unwrap();
    let median = if errors.len() % 2 == 1 {
        errors[errors.len() / 2]
    } else {
        0.5 * (errors[errors.len() / 2 - 1] + errors[errors.len() / 2])
    };
    (max, median)
}

struct PendulumData {
    quadrature: Quadrature,
    test_lambdas: Vec<f64>,
    test_values: Array2<f64>,
}

fn criterion_1(data: &mut Option<PendulumData>) -> Outcome {
    let started = Instant::now();
    let cfg = pendulum_config(101);
    let training = generate_training(&cfg).map_err(|e| e.to_string())?;
    let q = Quadrature::new(cfg.t_grid(), QuadratureRule::Riemann).map_err(|e| e.to_string())?;
    let surrogate = build_surrogate(&training, &q, 1e-14, 5, true).map_err(|e| e.to_string())?;

    // Every solution departs from rest at the same angle; the model
    // must reproduce it at the reference parameter.
    let at_two = surrogate.eval(2.0).map_err(|e| e.to_string())?;
    let ic_gap = (at_two[0] - std::f64::consts::FRAC_PI_2).abs();
    if ic_gap > 1e-9 {
        return Err(format!("initial angle off by {ic_gap:.3e} at lambda = 2"));
    }

    let test_lambdas = linspace(LAMBDA_MIN, LAMBDA_MAX, 1001);
    let test_values = test_rows(&test_lambdas);
    let (max, median) = validate_against(&surrogate, &q, &test_lambdas, &test_values);
    let elapsed = started.elapsed().as_secs_f64();

    *data = Some(PendulumData {
        quadrature: q,
        test_lambdas,
        test_values,
    });

    let detail = format!(
        "n={} max={max:.3e} median={median:.3e} elapsed={elapsed:.1}s",
        surrogate.n_basis()
    );
    if max >= 1e-3 {
        return Err(format!("max error {max:.3e} not below 1e-3 ({detail})"));
    }
    if median >= 1e-5 {
        return Err(format!(
            "median error {median:.3e} not below 1e-5 ({detail})"
        ));
    }
    if elapsed >= 60.0 {
        return Err(format!("end-to-end runtime {elapsed:.1}s not below 60s"));
    }
    Ok(detail)
}

fn criterion_2(data: &PendulumData) -> Outcome {
    let mut maxima = Vec::new();
    for n in [11usize, 21, 51, 101] {
        let cfg = pendulum_config(n);
        let training = generate_training(&cfg).map_err(|e| e.to_string())?;
        let surrogate = build_surrogate(&training, &data.quadrature, 1e-14, 5, true)
            .map_err(|e| e.to_string())?;
        let (max, _) = validate_against(
            &surrogate,
            &data.quadrature,
            &data.test_lambdas,
            &data.test_values,
        );
        maxima.push((n, max));
    }
    let detail = maxima
        .iter()
        .map(|(n, m)| format!("N={n}:{m:.2e}"))
        .collect::<Vec<_>>()
        .join(" ");
    for w in maxima.windows(2) {
        if w[1].1 > w[0].1 {
            return Err(format!(
                "max error increased from N={} to N={} ({detail})",
                w[0].0, w[1].0
            ));
        }
    }
    let last = maxima.last().unwrap().1;
    if last >= 1e-3 {
        return Err(format!("max error at N=101 is {last:.3e}, not below 1e-3"));
    }
    Ok(detail)
}

fn criterion_3() -> Outcome {
    let mut max_gram = 0.0f64;
    let mut max_recursion_gap = 0.0f64;
    for seed in 0..50u64 {
        let (training, q) = random_smooth_family(seed, 30, 201);
        let rb = reduce_basis(&training, &q, 1e-10, true).map_err(|e| e.to_string())?;

        // (a) orthonormality of the basis.
        let dev = gram_deviation(rb.elements(), &q).map_err(|e| e.to_string())?;
        max_gram = max_gram.max(dev);
        if dev >= 1e-10 {
            return Err(format!("seed {seed}: Gram deviation {dev:.3e} >= 1e-10"));
        }

        // (b) greedy errors never increase.
        for w in rb.greedy_errors().windows(2) {
            if w[1] > w[0] * (1.0 + 1e-12) {
                return Err(format!("seed {seed}: greedy errors increased ({w:?})"));
            }
        }

        // (c) a looser tolerance yields a prefix of the same basis.
        let loose = reduce_basis(&training, &q, 1e-5, true).map_err(|e| e.to_string())?;
        if loose.greedy_indices() != &rb.greedy_indices()[..loose.n_basis()] {
            return Err(format!("seed {seed}: bases are not nested"));
        }
        for i in 0..loose.n_basis() {
            if max_abs_diff(loose.elements().row(i), rb.elements().row(i)) != 0.0 {
                return Err(format!("seed {seed}: nested element {i} differs"));
            }
        }

        // (d) interpolation conditions at the empirical nodes.
        let eim = rom_core::eim::build_eim(&rb).map_err(|e| e.to_string())?;
        for row in 0..training.n_train() {
            let f = training.row(row);
            let interp = eim.interpolate(f).map_err(|e| e.to_string())?;
            for &node in eim.nodes() {
                let gap = (interp[node] - f[node]).norm();
                if gap > 1e-12 {
                    return Err(format!(
                        "seed {seed}: interpolation condition violated by {gap:.3e}"
                    ));
                }
            }
        }

        // (e) exactness on the basis span.
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
        let mut combo = Array1::<Complex64>::zeros(q.len());
        for e in rb.elements().rows() {
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            for (acc, ei) in combo.iter_mut().zip(e.iter()) {
                *acc += c * ei;
            }
        }
        let interp = eim.interpolate(combo.view()).map_err(|e| e.to_string())?;
        let scale = combo
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max)
            .max(1e-300);
        let dev = max_abs_diff(interp.view(), combo.view()) / scale;
        if dev > 1e-10 {
            return Err(format!(
                "seed {seed}: span reproduction error {dev:.3e} > 1e-10"
            ));
        }

        // (f) recursive errors agree with directly computed ones.
        for size in 0..rb.n_basis() {
            let direct = max_direct_error(&training, rb.elements(), size, &q, true);
            let gap = (direct - rb.greedy_errors()[size]).abs();
            max_recursion_gap = max_recursion_gap.max(gap);
            if gap >= 1e-10 {
                return Err(format!(
                    "seed {seed}: recursion drift {gap:.3e} at prefix {size}"
                ));
            }
        }
    }
    Ok(format!(
        "50 families, max Gram deviation {max_gram:.2e}, max recursion gap {max_recursion_gap:.2e}"
    ))
}

fn criterion_4() -> Outcome {
    let grid = linspace(0.0, 10.0, 1000);
    let q = Quadrature::new(&grid, QuadratureRule::Riemann).map_err(|e| e.to_string())?;
    let mut basis_sizes = Vec::new();
    for (i, &n) in [100usize, 300, 1000, 3000].iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        rng.set_stream(i as u64);
        let mut params = Array2::zeros((n, 3));
        for mut row in params.rows_mut() {
            row[0] = rng.random_range(1.0..3.0); // frequency
            row[1] = rng.random_range(0.0..0.8); // damping
            row[2] = rng.random_range(0.0..std::f64::consts::PI); // phase
        }
        let values = Array2::from_shape_fn((n, 1000), |(r, c)| {
            let x = grid[c];
            Complex64::new(
                (-params[[r, 1]] * x).exp() * (params[[r, 0]] * x + params[[r, 2]]).sin(),
                0.0,
            )
        });
        let training = TrainingSet::new(values, params, Array1::from(grid.clone()))
            .map_err(|e| e.to_string())?;
        let rb = reduce_basis(&training, &q, 1e-4, true).map_err(|e| e.to_string())?;
        basis_sizes.push((n, rb.n_basis()));
    }
    let detail = basis_sizes
        .iter()
        .map(|(n, b)| format!("N={n}:n={b}"))
        .collect::<Vec<_>>()
        .join(" ");
    let n_1000 = basis_sizes[2].1 as f64;
    let n_3000 = basis_sizes[3].1 as f64;
    if n_3000 > 1.1 * n_1000 {
        return Err(format!(
            "basis size does not saturate: n(3000)={n_3000} > 1.1 x n(1000)={n_1000} ({detail})"
        ));
    }
    Ok(detail)
}

fn criterion_5() -> Outcome {
    let started = Instant::now();
    let records = run_benchmark(
        &[(50, 50), (100, 100), (200, 200), (300, 300)],
        &[QuadratureRule::Riemann],
        &[1e-12],
        &[false],
        3,
        12345,
    )
    .map_err(|e| e.to_string())?;
    let exponent = fit_scaling_exponent(&records).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed().as_secs_f64();
    let detail = format!(
        "exponent={exponent:.3} elapsed={elapsed:.1}s ({} records)",
        records.len()
    );
    if !(2.5..=3.5).contains(&exponent) {
        return Err(format!(
            "scaling exponent {exponent:.3} outside [2.5, 3.5] ({detail})"
        ));
    }
    if elapsed >= 600.0 {
        return Err(format!(
            "benchmark runtime {elapsed:.1}s not below 10 minutes"
        ));
    }
    Ok(detail)
}

fn criterion_6() -> Outcome {
    let records = run_benchmark(
        &[(30, 30)],
        &[QuadratureRule::Euclidean],
        &[1e-12],
        &[false],
        100,
        777,
    )
    .map_err(|e| e.to_string())?;
    let full = records.iter().filter(|r| r.n_basis == 30).count();
    let detail = format!("{full}/100 runs at full rank");
    if full < 95 {
        return Err(format!("only {detail}"));
    }
    Ok(detail)
}

fn criterion_7() -> Outcome {
    let cfg = PendulumConfig::new(
        0.2,
        linspace(LAMBDA_MIN, LAMBDA_MAX, 21),
        linspace(0.0, TIME_MAX, 201),
        std::f64::consts::FRAC_PI_2,
        0.0,
        10,
    )
    .unwrap();
    let training = generate_training(&cfg).map_err(|e| e.to_string())?;
    let q = Quadrature::new(cfg.t_grid(), QuadratureRule::Riemann).map_err(|e| e.to_string())?;
    let built = build_surrogate(&training, &q, 1e-12, 3, true).map_err(|e| e.to_string())?;
    let rebuilt = build_surrogate(&training, &q, 1e-12, 3, true).map_err(|e| e.to_string())?;

    if built.reduced_basis().greedy_indices() != rebuilt.reduced_basis().greedy_indices() {
        return Err("greedy indices differ between identical builds".into());
    }
    if built.eim().nodes() != rebuilt.eim().nodes() {
        return Err("empirical nodes differ between identical builds".into());
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("model.json");
    rom_core::io::save_model(&path, &built).map_err(|e| e.to_string())?;
    let loaded = rom_core::io::load_model(&path).map_err(|e| e.to_string())?;

    let mut worst = 0.0f64;
    for lam in linspace(LAMBDA_MIN, LAMBDA_MAX, 16) {
        let a = built.eval(lam).map_err(|e| e.to_string())?;
        let b = loaded.eval(lam).map_err(|e| e.to_string())?;
        let dev = a
            .iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        worst = worst.max(dev);
    }
    if worst > 1e-14 {
        return Err(format!(
            "round-trip evaluation deviates by {worst:.3e} > 1e-14"
        ));
    }
    Ok(format!(
        "round-trip deviation {worst:.1e}, builds identical"
    ))
}

fn criterion_8() -> Outcome {
    // Trapezoid rule converges at second order.
    let reference = 1.0 - (-1.0f64).exp();
    let trap_err = |l: usize| {
        let q = Quadrature::new(&linspace(0.0, 1.0, l), QuadratureRule::Trapezoidal).unwrap();
        let f: Array1<Complex64> = q
            .points()
            .iter()
            .map(|x| Complex64::new((-x).exp(), 0.0))
            .collect();
        (q.integral(f.view()).unwrap().re - reference).abs()
    };
    let ratio = trap_err(129) / trap_err(257);
    if !(3.2..=4.8).contains(&ratio) {
        return Err(format!(
            "trapezoid convergence ratio {ratio:.2} outside [3.2, 4.8]"
        ));
    }

    // Degree-k splines reproduce degree-k polynomials.
    for k in SUPPORTED_DEGREES {
        let p = |x: f64| {
            (0..=k)
                .map(|j| (j as f64 + 1.0) * x.powi(j as i32))
                .sum::<f64>()
        };
        let x = linspace(0.0, 1.0, 20);
        let y: Vec<f64> = x.iter().map(|&v| p(v)).collect();
        let s = fit_spline(&x, &y, k).map_err(|e| e.to_string())?;
        for &m in &linspace(0.0, 1.0, 201) {
            let exact = p(m);
            let err = (s.eval(m).unwrap() - exact).abs() / exact.abs().max(1.0);
            if err > 1e-9 {
                return Err(format!("degree-{k} spline error {err:.3e} > 1e-9 at {m}"));
            }
        }
    }

    // Pythagoras for projections.
    let (training, q) = random_smooth_family(99, 25, 301);
    let rb = reduce_basis(&training, &q, 1e-8, true).map_err(|e| e.to_string())?;
    let basis = Basis::from_reduced(&rb).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for _ in 0..20 {
        let f = Array1::from_shape_fn(q.len(), |_| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let total = q.norm(f.view()).unwrap().powi(2);
        let projected = q
            .norm(basis.project(f.view()).unwrap().view())
            .unwrap()
            .powi(2);
        let error = basis.projection_error(f.view()).unwrap();
        if (total - projected - error).abs() > 1e-10 * total.max(1.0) {
            return Err(format!(
                "Pythagoras violated: {total} != {projected} + {error}"
            ));
        }
    }
    Ok(format!(
        "trapezoid ratio {ratio:.2}, splines exact, Pythagoras holds"
    ))
}

#[test]
fn acceptance() {
    let mut failures: Vec<String> = Vec::new();
    let mut results: Vec<(String, bool, String)> = Vec::new();
    let mut record = |name: &str, outcome: Outcome, failures: &mut Vec<String>| match outcome {
        Ok(detail) => {
            println!("criterion {name}: PASS — {detail}");
            results.push((name.to_string(), true, detail));
        }
        Err(msg) => {
            println!("criterion {name}: FAIL — {msg}");
            failures.push(format!("{name}: {msg}"));
            results.push((name.to_string(), false, msg));
        }
    };

    let mut pendulum_data: Option<PendulumData> = None;
    let c1 = std::panic::catch_unwind(AssertUnwindSafe(|| criterion_1(&mut pendulum_data)))
        .unwrap_or_else(|_| Err("panicked".into()));
    record("1 (pendulum end-to-end)", c1, &mut failures);

    let c2 = match &pendulum_data {
        Some(data) => std::panic::catch_unwind(AssertUnwindSafe(|| criterion_2(data)))
            .unwrap_or_else(|_| Err("panicked".into())),
        None => Err("skipped: criterion 1 setup unavailable".into()),
    };
    record("2 (discretization sweep)", c2, &mut failures);
    drop(pendulum_data);

    let runs: Vec<(&str, CriterionFn)> = vec![
        ("3 (greedy/EIM properties)", criterion_3),
        ("4 (compression saturation)", criterion_4),
        ("5 (benchmark scaling)", criterion_5),
        ("6 (no compression)", criterion_6),
        ("7 (round-trip and determinism)", criterion_7),
        ("8 (quadrature/spline properties)", criterion_8),
    ];
    for (name, f) in runs {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        record(name, outcome, &mut failures);
    }

    println!();
    for (name, passed, _) in &results {
        println!(
            "criterion {name}: {}",
            if *passed { "PASS" } else { "FAIL" }
        );
    }
    assert!(
        failures.is_empty(),
        "acceptance criteria failed:\n{}",
        failures.join("\n")
    );
}
