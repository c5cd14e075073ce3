//! Timing harness for the greedy build: randomized training sets across
//! parameter combinations, with a log-log scaling fit.
//!
//! Each (size, rule, tolerance, normalize, repetition) cell draws an
//! i.i.d. uniform(-1, 1) matrix from a counter-based generator — the
//! stream id is the record index — so any record can be regenerated
//! independently of execution order. The timer wraps the greedy build
//! only, excluding generation and I/O.

use std::time::Instant;

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::integration::{linspace, Quadrature, QuadratureRule};
use crate::reduced_basis::{reduce_basis, TrainingSet};

/// One timed greedy build.
#[derive(Debug, Clone)]
pub struct BenchRecord {
    pub rule: QuadratureRule,
    pub normalize: bool,
    pub greedy_tol: f64,
    pub n_train: usize,
    pub n_points: usize,
    /// Stream id of the counter-based generator for this record.
    pub seed: u64,
    pub wall_time_seconds: f64,
    pub n_basis: usize,
}

/// Uniform(-1, 1) training matrix drawn from stream `stream` of the
/// generator seeded with `seed`.
pub fn random_training(n: usize, l: usize, seed: u64, stream: u64) -> TrainingSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let values =
        Array2::from_shape_fn((n, l), |_| Complex64::new(rng.random_range(-1.0..1.0), 0.0));
    let params = Array2::from_shape_fn((n, 1), |(i, _)| i as f64);
    let grid = linspace(0.0, 1.0, l);
    TrainingSet::new(values, params, grid.into())
        .expect("randomly generated training sets are structurally valid")
}

#[derive(Debug, Clone, Copy)]
struct BenchCell {
    n: usize,
    l: usize,
    rule: QuadratureRule,
    greedy_tol: f64,
    normalize: bool,
    stream: u64,
}

fn run_cell(cell: BenchCell, seed: u64) -> BenchRecord {
    let BenchCell {
        n,
        l,
        rule,
        greedy_tol,
        normalize,
        stream,
    } = cell;
    let training = random_training(n, l, seed, stream);
    let q = Quadrature::new(training.physical_points().as_slice().unwrap(), rule)
        .expect("generated grids satisfy the quadrature preconditions");
    let started = Instant::now();
    let outcome = reduce_basis(&training, &q, greedy_tol, normalize);
    let wall_time_seconds = started.elapsed().as_secs_f64();
    let n_basis = match outcome {
        Ok(rb) => rb.n_basis(),
        Err(e) => {
            log::warn!(
                "benchmark cell (N={n}, L={l}, {rule}, tol={greedy_tol}, \
                 normalize={normalize}, stream={stream}) failed: {e}"
            );
            0
        }
    };
    BenchRecord {
        rule,
        normalize,
        greedy_tol,
        n_train: n,
        n_points: l,
        seed: stream,
        wall_time_seconds,
        n_basis,
    }
}

/// Times `reduce_basis` over every combination of the given sizes,
/// rules, tolerances and normalization options, `reps` times each.
/// Cells run sequentially so timings do not interfere; output ordering
/// (and content, for a fixed seed) is deterministic.
pub fn run_benchmark(
    sizes: &[(usize, usize)],
    rules: &[QuadratureRule],
    tols: &[f64],
    normalize_opts: &[bool],
    reps: u32,
    seed: u64,
) -> Result<Vec<BenchRecord>> {
    run_benchmark_with_options(sizes, rules, tols, normalize_opts, reps, seed, false)
}

/// Like [`run_benchmark`], optionally running cells on worker threads.
/// Record order and every non-timing field stay identical to a
/// sequential run; wall times from a parallel run are comparative only.
pub fn run_benchmark_with_options(
    sizes: &[(usize, usize)],
    rules: &[QuadratureRule],
    tols: &[f64],
    normalize_opts: &[bool],
    reps: u32,
    seed: u64,
    parallel: bool,
) -> Result<Vec<BenchRecord>> {
    if reps < 1 {
        return Err(Error::InvalidData("reps must be at least 1".into()));
    }
    if sizes.is_empty() || rules.is_empty() || tols.is_empty() || normalize_opts.is_empty() {
        return Err(Error::InvalidData(
            "sizes, rules, tolerances and normalize options must be non-empty".into(),
        ));
    }
    if sizes.iter().any(|&(n, l)| n < 1 || l < 2) {
        return Err(Error::InvalidData(
            "sizes need at least 1 training row and 2 physical points".into(),
        ));
    }

    let mut cells = Vec::new();
    let mut stream = 0u64;
    for &(n, l) in sizes {
        for &rule in rules {
            for &greedy_tol in tols {
                for &normalize in normalize_opts {
                    for _ in 0..reps {
                        cells.push(BenchCell {
                            n,
                            l,
                            rule,
                            greedy_tol,
                            normalize,
                            stream,
                        });
                        stream += 1;
                    }
                }
            }
        }
    }

    if !parallel {
        return Ok(cells.into_iter().map(|cell| run_cell(cell, seed)).collect());
    }

    log::warn!("benchmark cells run in parallel; wall times are comparative only");
    let workers = std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
        .min(cells.len().max(1));
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results: Vec<std::sync::Mutex<Option<BenchRecord>>> =
        cells.iter().map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= cells.len() {
                    break;
                }
                let record = run_cell(cells[i], seed);
                *results[i].lock().unwrap() = Some(record);
            });
        }
    });
    Ok(results
        .into_iter()
        .map(|slot| slot.into_inner().unwrap().expect("every cell ran"))
        .collect())
}

/// Least-squares slope of `log(wall time)` against `log(N)` over the
/// square records. Needs at least 4 distinct sizes spanning a 4x range.
pub fn fit_scaling_exponent(records: &[BenchRecord]) -> Result<f64> {
    let square: Vec<&BenchRecord> = records.iter().filter(|r| r.n_train == r.n_points).collect();
    let mut sizes: Vec<usize> = square.iter().map(|r| r.n_train).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "scaling fit needs at least 4 distinct square sizes, got {}",
            sizes.len()
        )));
    }
    let span = *sizes.last().unwrap() as f64 / sizes[0] as f64;
    if span < 4.0 {
        return Err(Error::InsufficientData(format!(
            "scaling fit needs sizes spanning at least a 4x range, got {span:.2}x"
        )));
    }

    let points: Vec<(f64, f64)> = square
        .iter()
        .map(|r| ((r.n_train as f64).ln(), r.wall_time_seconds.max(1e-9).ln()))
        .collect();
    let m = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / m;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in points {
        num += (x - mean_x) * (y - mean_y);
        den += (x - mean_x) * (x - mean_x);
    }
    Ok(num / den)
}
