use std::fs;
use std::io::{self, Write};
use std::path::Path;

use ninner_core::applications::compare_fits;
use ninner_core::dodgson::{condensation_residual, condense, leading_block_residual};
use ninner_core::io::{parse_dataset, parse_matrix, parse_vectors};
use ninner_core::products::{iterated_2_inner_expanded, representation_report, ConditionedPair};
use ninner_core::suite::{run_suite, SuiteConfig, SuiteReport};
use ninner_core::{Exact, InnerSpace, Mode, ProductKind, Scalar, SquareMatrix, Vector};
use serde::Serialize;
use serde_json::{json, Value};

use crate::{exit, Cli, Command, DodgsonArgs, Failure, ProductArgs, RegressArgs, VerifyArgs};

type Outcome = Result<u8, Failure>;

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(Failure::from)?
    };
}

pub fn run(cli: &Cli) -> Outcome {
    let stdout = io::stdout();
    let out = &mut io::BufWriter::new(stdout.lock());
    let code = dispatch(cli, out)?;
    out.flush()?;
    Ok(code)
}

fn dispatch(cli: &Cli, out: &mut impl Write) -> Outcome {
    match (&cli.command, cli.mode) {
        (Command::Product(a), Mode::Exact) => product::<Exact>(cli, a, out),
        (Command::Product(a), Mode::Float) => product::<f64>(cli, a, out),
        (Command::Verify(a), _) => verify(cli, a, out),
        (Command::Regress(a), Mode::Exact) => regress::<Exact>(cli, a, out),
        (Command::Regress(a), Mode::Float) => regress::<f64>(cli, a, out),
        (Command::Dodgson(a), Mode::Exact) => dodgson::<Exact>(cli, a, out),
        (Command::Dodgson(a), Mode::Float) => dodgson::<f64>(cli, a, out),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(exit::USAGE, format!("cannot read {}: {e}", path.display())))
}

fn emit<T: Serialize>(out: &mut impl Write, value: &T) -> Result<(), Failure> {
    say!(out, "{}", serde_json::to_string_pretty(value).expect("reports serialize"));
    Ok(())
}

fn text<S: Scalar>(v: &S) -> String {
    v.to_string()
}

fn product<S: Scalar>(cli: &Cli, a: &ProductArgs, out: &mut impl Write) -> Outcome {
    let vectors: Vec<Vector<S>> = parse_vectors(&read(&a.file)?)?;
    let pick = |i: usize| {
        vectors.get(i).cloned().ok_or_else(|| {
            Failure::new(exit::USAGE, format!("index {i} is out of range: the file holds {} vectors", vectors.len()))
        })
    };
    let mut x = a.x;
    let mut y = a.y;
    let mut cond = a.cond.clone();
    if a.swap_roles {
        if x != y {
            return Err(Failure::new(exit::USAGE, "--swap-roles needs --x and --y to name the same vector"));
        }
        let last = cond.last_mut().expect("clap requires --cond");
        std::mem::swap(&mut x, last);
        y = x;
    }
    let p = ConditionedPair::new(pick(x)?, pick(y)?, cond.iter().map(|&i| pick(i)).collect::<Result<_, _>>()?);
    let space = InnerSpace::euclidean(p.x.len()).with_tol(cli.tol);
    let report = representation_report(&space, &p)?;
    let expansion = iterated_2_inner_expanded(&space, &p)?;
    let value = match a.kind {
        ProductKind::Standard => report.standard_value.clone(),
        ProductKind::Iterated => report.value.clone(),
    };
    if cli.json {
        emit(out, &json!({
            "kind": a.kind,
            "mode": cli.mode,
            "x": x,
            "y": y,
            "conditioners": cond,
            "n": report.n,
            "value": value.to_json(),
            "iterated_value": report.value.to_json(),
            "iterated_top": expansion.top.iter().map(|r| [r[0].to_json(), r[1].to_json()]).collect::<Vec<_>>(),
            "e_factor": report.e_factor.to_json(),
            "standard_value": report.standard_value.to_json(),
            "residual": report.residual.to_json(),
        }))?;
    } else {
        let conds = cond.iter().map(|i| format!("v{i}")).collect::<Vec<_>>().join(", ");
        let sym = match a.kind {
            ProductKind::Standard => format!("<v{x}, v{y} | {conds}>"),
            ProductKind::Iterated => format!("(v{x}, v{y} | {conds})_*"),
        };
        say!(out, "{sym} = {}", text(&value));
        let t = &expansion.top;
        say!(out, 
            "iterated expansion: det [[{}, {}], [{}, {}]] = {}",
            t[0][0], t[0][1], t[1][0], t[1][1], report.value
        );
        say!(out, "E_{} = {}", report.n, report.e_factor);
        say!(out, "standard value = {}", report.standard_value);
        say!(out, "iterated − E_n·standard = {}", report.residual);
    }
    Ok(exit::OK)
}

fn verify(cli: &Cli, a: &VerifyArgs, out: &mut impl Write) -> Outcome {
    let cfg = SuiteConfig {
        suite: a.suite,
        dim: a.dim.unwrap_or((a.n + 1).max(4)),
        n: a.n,
        trials: a.trials,
        seed: cli.seed,
        mode: cli.mode,
        tol: cli.tol,
    };
    let report = run_suite(&cfg)?;
    if cli.json {
        emit(out, &report)?;
    } else {
        print_suite(out, &report)?;
    }
    Ok(if report.ok { exit::OK } else { exit::UNEXPECTED })
}

fn print_suite(out: &mut impl Write, r: &SuiteReport) -> Result<(), Failure> {
    let c = &r.config;
    say!(out, 
        "suite {} (mode {}, n = {}, dim = {}, trials = {}, seed = {})",
        c.suite, c.mode, c.n, c.dim, c.trials, c.seed
    );
    for check in &r.checks {
        let status = match (check.as_expected, check.expected_pass) {
            (true, true) => "PASS",
            (true, false) => "VIOLATED (expected)",
            (false, true) => "FAIL",
            (false, false) => "UNEXPECTED PASS",
        };
        say!(out, 
            "  [{}] {status}: {} ({}/{} trials failed)",
            check.suite, check.name, check.failures, check.trials
        );
    }
    let first = r.checks.iter().find_map(|c| c.counterexample.as_ref().map(|ce| (c, ce)));
    if let Some((check, ce)) = first {
        say!(out, "first counterexample ({}): {}", check.name, compact(ce));
    }
    say!(out, 
        "{}/{} checks as expected: {}",
        r.checks_as_expected,
        r.checks.len(),
        if r.ok { "ok" } else { "NOT ok" }
    );
    Ok(())
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

fn regress<S: Scalar>(cli: &Cli, a: &RegressArgs, out: &mut impl Write) -> Outcome {
    let [p, q] = a.predictors.as_slice() else {
        return Err(Failure::new(exit::USAGE, "--predictors needs exactly two column names"));
    };
    let ds = parse_dataset::<S>(&read(&a.file)?, &a.response, [p, q])?;
    let cmp = compare_fits(&ds, cli.tol)?;
    if cli.json {
        emit(out, &json!({ "mode": cli.mode, "response": a.response, "predictors": [p, q], "comparison": cmp }))?;
    } else {
        say!(out, "{} ≈ a·{p} + b·{q} + c over {} samples", a.response, ds.len());
        for f in &cmp.fits {
            say!(out, "  {:<17} a = {}, b = {}, c = {}, RSS = {}", f.method.to_string(), f.a, f.b, f.c, f.residual_sum_squares);
        }
        say!(out, "max pairwise discrepancy = {}", cmp.max_discrepancy);
        say!(out, "methods {}", if cmp.agree { "agree" } else { "DISAGREE" });
    }
    Ok(if cmp.agree { exit::OK } else { exit::UNEXPECTED })
}

fn dodgson<S: Scalar>(cli: &Cli, a: &DodgsonArgs, out: &mut impl Write) -> Outcome {
    let m: SquareMatrix<S> = parse_matrix(&read(&a.file)?)?;
    let det = m.determinant();
    let cond = condense(&m);
    let residuals = if m.order() >= 3 {
        Some((leading_block_residual(&m)?, condensation_residual(&m)?))
    } else {
        None
    };
    let h = ninner_core::linalg::hadamard_bound(&m);
    let ok = cond.value.approx_eq(&det, cli.tol, h)
        && residuals.as_ref().is_none_or(|(r1, r2)| r1.is_negligible(cli.tol, h * h) && r2.is_negligible(cli.tol, h * h));
    if cli.json {
        emit(out, &json!({
            "mode": cli.mode,
            "order": m.order(),
            "determinant": det.to_json(),
            "condensation": cond,
            "leading_block_residual": residuals.as_ref().map(|r| r.0.to_json()),
            "condensation_residual": residuals.as_ref().map(|r| r.1.to_json()),
            "ok": ok,
        }))?;
    } else {
        say!(out, "order {} matrix", m.order());
        say!(out, "determinant = {det}");
        let how = if cond.fell_back {
            "fell back to elimination".to_string()
        } else {
            format!("{} row rotation(s)", cond.rotations)
        };
        say!(out, "condensation = {} ({how}{})", cond.value, if cond.fragile { ", float: numerically fragile" } else { "" });
        match &residuals {
            Some((r1, r2)) => {
                say!(out, "leading-block identity residual = {r1}");
                say!(out, "condensation identity residual = {r2}");
            }
            None => say!(out, "identities need order ≥ 3"),
        }
        say!(out, "{}", if ok { "ok" } else { "NOT ok" });
    }
    Ok(if ok { exit::OK } else { exit::UNEXPECTED })
}
