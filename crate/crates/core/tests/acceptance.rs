//! Acceptance suite. Prints one `criterion N: PASS|FAIL` line per criterion
//! and exits non-zero if any fails.

mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::{random_unimodular, random_vacuum_diagram};
use kappa_expand::algebra::rational::{frac, int};
use kappa_expand::algebra::{Fraction, Poly, Var};
use kappa_expand::diagram::{Diagram, LinePower};
use kappa_expand::expansion::{determinant, expand_vacuum, expand_with_externals, external_reduction};
use kappa_expand::oracles::{compare_series, gauss_laguerre_eval, oneloop_series_via_psi};
use kappa_expand::render::{parse_json, render};
use kappa_expand::spec::Format;
use kappa_expand::KappaSeries;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn d() -> Poly {
    Poly::var(Var::D)
}

fn a() -> Poly {
    Poly::var(Var::A(0))
}

/// Polynomial in `D` from ascending integer coefficients.
fn in_d(coeffs: &[i64]) -> Poly {
    coeffs.iter().rev().fold(Poly::zero(), |acc, &c| &(&acc * &d()) + &Poly::int(c))
}

fn d_shift(k: i64) -> Poly {
    &d() + &Poly::int(k)
}

fn product(factors: &[Poly]) -> Poly {
    factors.iter().fold(Poly::one(), |acc, f| &acc * f)
}

fn check_coeffs(got: &[Fraction], expected: &[Fraction]) -> Result<(), String> {
    for (j, e) in expected.iter().enumerate() {
        ensure(&got[j] == e, || format!("kappa^{j}: got {} expected {}", got[j], e))?;
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let s = expand_vacuum(&Diagram::one_loop(LinePower::Symbolic(0)), 5).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let base = product(&[d(), d_shift(2)]);
    let expected = [
        Fraction::from_poly(Poly::one()),
        Fraction::from_poly(Poly::zero()),
        Fraction::new(base.clone(), &Poly::int(8) * &a()),
        Fraction::new(product(&[base.clone(), d_shift(4), Poly::int(-1)]), &Poly::int(24) * &a().pow(2)),
        Fraction::new(
            product(&[&a() + &Poly::int(2), base.clone(), d_shift(4), d_shift(6)]),
            &Poly::int(128) * &a().pow(3),
        ),
        Fraction::new(
            product(&[&(&Poly::int(5) * &a()) + &Poly::int(6), base, d_shift(4), d_shift(6), d_shift(8), Poly::int(-1)]),
            &Poly::int(960) * &a().pow(4),
        ),
    ];
    check_coeffs(&s.coeffs, &expected)?;
    ensure(elapsed <= Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("{elapsed:.2?}"))
}

fn watermelon_general_d() -> Vec<Fraction> {
    let base = product(&[d(), d_shift(2)]);
    let c = |num: Poly, den: i64| Fraction::new(num, Poly::int(den));
    vec![
        c(Poly::one(), 1),
        c(Poly::zero(), 1),
        c(&Poly::int(9) * &base, 32),
        c(product(&[Poly::int(-9), base.clone(), d_shift(4)]), 128),
        c(product(&[Poly::int(3), base.clone(), in_d(&[1048, 522, 81])]), 4096),
        c(product(&[Poly::int(-9), base.clone(), d_shift(4), in_d(&[2576, 918, 117])]), 40960),
        c(product(&[base.clone(), in_d(&[564864, 397744, 110916, 15228, 891])]), 65536),
        c(
            product(&[Poly::int(-3), base.clone(), d_shift(4), in_d(&[29651840, 15696528, 3452148, 391068, 19683])]),
            9175040,
        ),
        c(
            product(&[
                Poly::int(3),
                base,
                d_shift(4),
                in_d(&[1419854080, 843338336, 212508840, 29562300, 2344950, 85779]),
            ]),
            83886080,
        ),
    ]
}

fn watermelon_order8() -> Result<(KappaSeries, Duration), String> {
    let start = Instant::now();
    let s = expand_vacuum(&Diagram::watermelon(), 8).map_err(|e| e.to_string())?;
    Ok((s, start.elapsed()))
}

fn criterion_2() -> Outcome {
    let (s, elapsed) = watermelon_order8()?;
    check_coeffs(&s.coeffs, &watermelon_general_d())?;
    ensure(s.coeffs.len() == 9, || format!("{} coefficients", s.coeffs.len()))?;
    ensure(elapsed <= Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{elapsed:.2?}"))
}

fn criterion_3() -> Outcome {
    let (s, _) = watermelon_order8()?;
    let table: [(i64, [(i64, i64); 7], &str); 3] = [
        (
            1,
            [(27, 32), (-135, 128), (14859, 4096), (-97497, 8192), (3268929, 65536), (-63271629, 262144), (22569248565, 16777216)],
            "\\frac{1}{2^{4}\\pi^{3/2}}",
        ),
        (
            2,
            [(9, 4), (-27, 8), (453, 32), (-1647, 32), (15157, 64), (-157293, 128), (3720699, 512)],
            "\\frac{1}{2^{8}\\pi^{3}}",
        ),
        (
            3,
            [(135, 32), (-945, 128), (150435, 4096), (-1206387, 8192), (48595005, 65536), (-1079675235, 262144), (432899207685, 16777216)],
            "\\frac{1}{2^{12}\\pi^{9/2}}",
        ),
    ];
    for (dim, values, prefactor) in table {
        let sd = s.with_dimension(&int(dim));
        let mut expected = vec![Fraction::from_poly(Poly::one()), Fraction::from_poly(Poly::zero())];
        expected.extend(values.iter().map(|&(n, m)| Fraction::from_poly(Poly::constant(frac(n, m)))));
        check_coeffs(&sd.coeffs, &expected).map_err(|e| format!("D={dim}: {e}"))?;
        let latex = render(&sd, Format::Latex);
        ensure(latex.starts_with(prefactor), || format!("D={dim}: prefactor in {latex}"))?;
    }
    Ok("D = 1, 2, 3".into())
}

fn criterion_4() -> Outcome {
    let powers = [LinePower::Symbolic(0), LinePower::int(1), LinePower::int(2), LinePower::int(3)];
    for p in &powers {
        for order in 0..=5 {
            let ours = expand_vacuum(&Diagram::one_loop(p.clone()), order).map_err(|e| e.to_string())?;
            let oracle = oneloop_series_via_psi(p, order).map_err(|e| e.to_string())?;
            ensure(ours.coeffs == oracle, || format!("power {p:?} order {order}"))?;
        }
    }
    Ok("4 powers x orders 0..5".into())
}

fn criterion_5() -> Outcome {
    let cases = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..cases {
        let dg = random_vacuum_diagram(&mut rng, 3, 5);
        let s = expand_vacuum(&dg, 3).map_err(|e| e.to_string())?;
        ensure(s.coeffs[0] == Fraction::from_poly(Poly::one()), || format!("case {i}: coeffs[0] of {dg:?}"))?;
        ensure(s.coeffs[1].is_zero(), || format!("case {i}: coeffs[1] of {dg:?}"))?;
        for (j, c) in s.coeffs.iter().enumerate() {
            ensure(c.den().degree_in(Var::D) == 0 && c.num().degree_in(Var::D) <= j as u32, || {
                format!("case {i}: deg_D of coeffs[{j}] = {c}")
            })?;
        }
        let t = random_unimodular(&mut rng, dg.loops());
        let r = dg.reroute(&t).map_err(|e| e.to_string())?;
        ensure(
            determinant(&dg.assemble_quadratic_form().m) == determinant(&r.assemble_quadratic_form().m),
            || format!("case {i}: det M changed under {t:?}"),
        )?;
        let rs = expand_vacuum(&r, 3).map_err(|e| e.to_string())?;
        ensure(rs == s, || format!("case {i}: series changed under {t:?}"))?;
    }

    let powers = [0u16, 1, 2, 3].map(LinePower::Symbolic);
    let s = expand_vacuum(&Diagram::watermelon_with(powers), 4).map_err(|e| e.to_string())?;
    let mut perms = 0;
    for p in permutations(4) {
        let bindings: HashMap<Var, Poly> = (0..4).map(|k| (Var::A(k as u16), Poly::var(Var::A(p[k] as u16)))).collect();
        ensure(s.substitute(&bindings) == s, || format!("permutation {p:?}"))?;
        perms += 1;
    }
    ensure(perms == 24, || format!("{perms} permutations"))?;
    Ok(format!("{cases} random diagrams, {perms} permutations"))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let grid = [0.05, 0.1, 0.2];
    let runs = [
        (Diagram::watermelon(), 8, 2i64, 32usize),
        (Diagram::one_loop(LinePower::int(1)), 5, 1, 64),
    ];
    let mut summary = Vec::new();
    let mut failures = Vec::new();
    for (dg, order, dim, nodes) in runs {
        let s = expand_vacuum(&dg, order).map_err(|e| e.to_string())?.with_dimension(&int(dim));
        let report = compare_series(&s, &dg, &[], &grid, &int(dim), 1e-3, nodes).map_err(|e| e.to_string())?;
        let rel: Vec<String> = report.rows.iter().map(|r| format!("{:.2e}", r.relative)).collect();
        let line = format!("N={order} D={dim} rel=[{}] slope={:.2}", rel.join(", "), report.slope.unwrap_or(f64::NAN));
        if !report.passed() {
            failures.push(line.clone());
        }
        summary.push(line);
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(30) {
        failures.push(format!("took {elapsed:?}"));
    }
    if failures.is_empty() {
        Ok(format!("{}; {elapsed:.2?}", summary.join("; ")))
    } else {
        Err(summary.join("; "))
    }
}

fn criterion_7() -> Outcome {
    let bubble = Diagram::bubble(LinePower::int(1), LinePower::int(1));
    let (n, det) = external_reduction(&bubble.assemble_quadratic_form());
    let c1 = Poly::var(Var::C(0));
    let c2 = Poly::var(Var::C(1));
    let reduced = Fraction::new(n[0][0].clone(), det);
    let expected = Fraction::new(product(&[Poly::int(2), c1.clone(), c2.clone()]), &c1 + &c2);
    ensure(reduced == expected, || format!("N = {reduced}"))?;

    let zero = HashMap::from([(Var::S(0, 0), Poly::zero())]);
    for dg in [bubble.clone(), Diagram::bubble(LinePower::Symbolic(0), LinePower::Symbolic(1))] {
        let ext = expand_with_externals(&dg, 4).map_err(|e| e.to_string())?;
        let vac = expand_vacuum(&dg.without_externals(), 4).map_err(|e| e.to_string())?;
        ensure(ext.coeffs.iter().map(|c| c.substitute(&zero)).eq(vac.coeffs.iter().cloned()), || {
            format!("s=0 bracket differs for {dg:?}")
        })?;
        ensure(ext.prefactor.substitute(&zero).delta0 == vac.prefactor.delta0, || "s=0 prefactor differs".into())?;
    }

    let s = expand_with_externals(&bubble, 4).map_err(|e| e.to_string())?.with_dimension(&int(1));
    let inv = vec![vec![0.25]];
    let series = s.partial_sum(0.1, 1.0, &inv);
    let q = gauss_laguerre_eval(&bubble, &inv, 0.1, &int(1), 64).map_err(|e| e.to_string())?;
    let rel = (series / q.value - 1.0).abs();
    ensure(rel < 1e-4, || format!("rel = {rel:.3e}"))?;
    Ok(format!("rel = {rel:.2e}"))
}

fn criterion_8() -> Outcome {
    let spec = concat!(env!("CARGO_MANIFEST_DIR"), "/specs/watermelon.spec");
    let bin = env!("CARGO_BIN_EXE_kappa-expand");
    let out = Command::new(bin)
        .args([spec, "--order", "8", "--dimension", "2", "--format", "latex"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let text = String::from_utf8_lossy(&out.stdout);
    for (n, m) in [(9, 4), (27, 8), (453, 32), (1647, 32), (15157, 64), (157293, 128), (3720699, 512)] {
        let f = format!("\\frac{{{n}}}{{{m}}}");
        ensure(text.contains(&f), || format!("missing {f}"))?;
    }

    let (s, _) = watermelon_order8()?;
    let mut round_trips = 0;
    for series in [
        s.clone(),
        s.with_dimension(&int(2)),
        expand_vacuum(&Diagram::one_loop(LinePower::Symbolic(0)), 6).map_err(|e| e.to_string())?,
        expand_with_externals(&Diagram::bubble(LinePower::Symbolic(0), LinePower::int(2)), 3).map_err(|e| e.to_string())?,
    ] {
        let json = render(&series, Format::Json);
        let back = parse_json(&json).map_err(|e| e.to_string())?;
        ensure(back == series, || "JSON round trip changed the series".into())?;
        ensure(render(&back, Format::Json) == json, || "JSON re-render differs".into())?;
        round_trips += 1;
    }
    Ok(format!("7 fractions, {round_trips} JSON round trips"))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n}: FAIL ({detail})");
            }
        }
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
