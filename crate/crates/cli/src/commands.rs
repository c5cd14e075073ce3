use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use ndarray::{Array1, Array2};

use rom_core::bench::{fit_scaling_exponent, run_benchmark_with_options};
use rom_core::integration::linspace;
use rom_core::io::{
    read_matrix, read_matrix_real, write_bench_csv, write_matrix, write_matrix_real, MatrixKind,
};
use rom_core::pendulum::{generate_training, PendulumConfig};
use rom_core::surrogate::relative_l2_error;
use rom_core::{
    build_surrogate, reduce_basis, Error, Quadrature, QuadratureRule, Result, TrainingSet,
};

use crate::{
    BenchArgs, BuildRbArgs, BuildSurrogateArgs, Command, EvalArgs, GenPendulumArgs, ValidateArgs,
};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::GenPendulum(args) => gen_pendulum(args),
        Command::BuildRb(args) => build_rb(args),
        Command::BuildSurrogate(args) => build_surrogate_cmd(args),
        Command::Eval(args) => eval(args),
        Command::Validate(args) => validate(args),
        Command::Bench(args) => bench(args),
    }
}

fn gen_pendulum(args: GenPendulumArgs) -> Result<()> {
    if args.lambda_count == 0 {
        return Err(Error::InvalidData(
            "--lambda-count must be at least 1".into(),
        ));
    }
    let cfg = PendulumConfig::new(
        args.b,
        linspace(args.lambda_min, args.lambda_max, args.lambda_count),
        linspace(args.t_min, args.t_max, args.t_count),
        args.theta0,
        args.omega0,
        args.substeps,
    )?;
    let training = generate_training(&cfg)?;

    std::fs::create_dir_all(&args.out)?;
    let training_path = args.out.join("training.csv");
    let params_path = args.out.join("params.csv");
    let grid_path = args.out.join("grid.csv");

    write_matrix(&training_path, training.values(), MatrixKind::Training)?;
    write_matrix_real(
        &params_path,
        training.parameter_points(),
        MatrixKind::Params,
    )?;
    let grid = training
        .physical_points()
        .to_owned()
        .insert_axis(ndarray::Axis(0));
    write_matrix_real(&grid_path, grid.view(), MatrixKind::Grid)?;

    println!(
        "wrote {} ({} x {})",
        training_path.display(),
        training.n_train(),
        training.n_points()
    );
    println!("wrote {}", params_path.display());
    println!("wrote {}", grid_path.display());
    Ok(())
}

fn read_grid(path: &Path) -> Result<Vec<f64>> {
    let (grid, _) = read_matrix_real(path)?;
    if grid.nrows() == 1 {
        Ok(grid.row(0).to_vec())
    } else if grid.ncols() == 1 {
        Ok(grid.column(0).to_vec())
    } else {
        Err(Error::Parse(format!(
            "{}: grid file must be a single row or a single column",
            path.display()
        )))
    }
}

fn read_training(
    training_path: &Path,
    grid_path: &Path,
    params_path: Option<&Path>,
) -> Result<(TrainingSet, Vec<f64>)> {
    let (values, _) = read_matrix(training_path)?;
    let grid = read_grid(grid_path)?;
    if grid.len() != values.ncols() {
        return Err(Error::Dimension {
            expected: values.ncols(),
            got: grid.len(),
        });
    }
    let params = match params_path {
        Some(path) => {
            let (p, _) = read_matrix_real(path)?;
            if p.nrows() != values.nrows() {
                return Err(Error::Dimension {
                    expected: values.nrows(),
                    got: p.nrows(),
                });
            }
            p
        }
        None => Array2::from_shape_fn((values.nrows(), 1), |(i, _)| i as f64),
    };
    let training = TrainingSet::new(values, params, Array1::from(grid.clone()))?;
    Ok((training, grid))
}

fn parse_rule(s: &str) -> Result<QuadratureRule> {
    s.parse()
}

fn build_rb(args: BuildRbArgs) -> Result<()> {
    let (training, grid) = read_training(&args.training, &args.grid, args.params.as_deref())?;
    let rule = parse_rule(&args.rule)?;
    let q = Quadrature::new(&grid, rule)?;
    let rb = reduce_basis(&training, &q, args.greedy_tol, args.normalize)?;

    write_matrix(&args.out, rb.elements(), MatrixKind::Basis)?;
    if let Some(errors_path) = &args.errors_out {
        let history = rb.projection_error_history();
        let table = Array2::from_shape_fn((history.len(), 2), |(i, j)| {
            if j == 0 {
                i as f64
            } else {
                history[i]
            }
        });
        write_matrix_real(errors_path, table.view(), MatrixKind::Params)?;
    }

    println!("n = {}", rb.n_basis());
    println!("final_error = {:.6e}", rb.residual_error());
    println!("wrote {}", args.out.display());
    Ok(())
}

fn build_surrogate_cmd(args: BuildSurrogateArgs) -> Result<()> {
    let (training, grid) = read_training(&args.training, &args.grid, Some(args.params.as_path()))?;
    let rule = parse_rule(&args.rule)?;
    let q = Quadrature::new(&grid, rule)?;
    let surrogate = build_surrogate(
        &training,
        &q,
        args.greedy_tol,
        args.poly_deg,
        args.normalize,
    )?;
    rom_core::io::save_model(&args.out, &surrogate)?;

    let report = surrogate.report();
    println!("n = {}", report.n_basis);
    println!("build_seconds = {:.3}", report.wall_time_seconds);
    println!("wrote {}", args.out.display());
    Ok(())
}

fn eval(args: EvalArgs) -> Result<()> {
    let surrogate = rom_core::io::load_model(&args.model)?;
    let values = surrogate.eval(args.lambda)?;
    match &args.out {
        Some(path) => {
            let row = values.insert_axis(ndarray::Axis(0));
            write_matrix_real(path, row.view(), MatrixKind::Training)?;
            println!("wrote {}", path.display());
        }
        None => {
            let stdout = std::io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            for v in values.iter() {
                writeln!(out, "{v:.16e}")?;
            }
        }
    }
    Ok(())
}

fn validate(args: ValidateArgs) -> Result<()> {
    let surrogate = rom_core::io::load_model(&args.model)?;
    let (test_values, _) = read_matrix_real(&args.test_training)?;
    let (test_params, _) = read_matrix_real(&args.test_params)?;
    if test_params.nrows() != test_values.nrows() {
        return Err(Error::Dimension {
            expected: test_values.nrows(),
            got: test_params.nrows(),
        });
    }
    if test_params.ncols() != 1 {
        return Err(Error::Unsupported(
            "validation requires a 1-D parameter file".into(),
        ));
    }
    let q = surrogate.reduced_basis().quadrature();
    if test_values.ncols() != q.len() {
        return Err(Error::Dimension {
            expected: q.len(),
            got: test_values.ncols(),
        });
    }

    let mut errors = Vec::with_capacity(test_values.nrows());
    for j in 0..test_values.nrows() {
        let lambda = test_params[[j, 0]];
        let approx = surrogate.eval(lambda)?;
        let err = relative_l2_error(q, approx.view(), test_values.row(j))?;
        errors.push((lambda, err));
    }

    let table = Array2::from_shape_fn((errors.len(), 2), |(i, j)| {
        if j == 0 {
            errors[i].0
        } else {
            errors[i].1
        }
    });
    write_matrix_real(&args.out, table.view(), MatrixKind::Params)?;

    let mut sorted: Vec<f64> = errors.iter().map(|(_, e)| *e).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    };
    println!("count = {}", sorted.len());
    println!("max = {:.6e}", sorted.last().unwrap());
    println!("median = {median:.6e}");
    println!("wrote {}", args.out.display());
    Ok(())
}

fn parse_sizes(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .map(|token| {
            let (n, l) = token
                .trim()
                .split_once(['x', 'X'])
                .ok_or_else(|| Error::Parse(format!("invalid size '{token}', expected NxL")))?;
            let n = n
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("invalid size '{token}'")))?;
            let l = l
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("invalid size '{token}'")))?;
            Ok((n, l))
        })
        .collect()
}

fn bench(args: BenchArgs) -> Result<()> {
    let sizes = parse_sizes(&args.sizes)?;
    let rules: Vec<QuadratureRule> = args
        .rules
        .split(',')
        .map(|r| parse_rule(r.trim()))
        .collect::<Result<_>>()?;
    let tols: Vec<f64> = args
        .tols
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("invalid tolerance '{t}'")))
        })
        .collect::<Result<_>>()?;
    let normalize: Vec<bool> = args
        .normalize
        .split(',')
        .map(|b| {
            b.trim()
                .parse::<bool>()
                .map_err(|_| Error::Parse(format!("invalid normalize value '{b}'")))
        })
        .collect::<Result<_>>()?;

    let records = run_benchmark_with_options(
        &sizes,
        &rules,
        &tols,
        &normalize,
        args.reps,
        args.seed,
        args.parallel,
    )?;
    match &args.out {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            write_bench_csv(&mut out, &records)?;
            out.flush()?;
            println!("wrote {} ({} records)", path.display(), records.len());
        }
        None => {
            let stdout = std::io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            write_bench_csv(&mut out, &records)?;
            out.flush()?;
        }
    }
    if args.fit_exponent {
        let exponent = fit_scaling_exponent(&records)?;
        println!("exponent = {exponent:.4}");
    }
    Ok(())
}
