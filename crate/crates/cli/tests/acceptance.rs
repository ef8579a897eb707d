//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines always reach the output.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use posmap::dynamics::{evolve_track, uniform_grid, ChannelFamily, TrackOptions};
use posmap::maps::{
    catalog, is_block_positive, is_co_cp, is_cp, is_decomposable, CatalogMap, ChoiMatrix, DecompositionVerdict,
    DykstraOptions, SeeSawOptions,
};
use posmap::matcore::random::{random_hermitian, random_psd, substream};
use posmap::matcore::{hermitian_eig, kron, partial_transpose, pauli, ComplexMatrix, Leg, C64};
use posmap::measures::{dcoef, dcoef_sup, eof_upper, map_witness, negativity, ppt_test, MeasureOptions, PptVerdict};
use posmap::states::{make_named, random_separable, DensityMatrix, StateFamily};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(failures: &mut Vec<String>, ok: bool, what: String) {
    if !ok {
        failures.push(what);
    }
}

fn finish(failures: Vec<String>, elapsed: Duration, budget: Duration) -> Outcome {
    let mut failures = failures;
    if elapsed > budget {
        failures.push(format!("took {elapsed:.2?}, budget {budget:?}"));
    }
    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{elapsed:.2?}")
        } else {
            failures.join("; ")
        },
    }
}

fn bell() -> DensityMatrix {
    make_named(&StateFamily::Bell { k: 1 }).unwrap().state
}

fn werner(p: f64) -> DensityMatrix {
    make_named(&StateFamily::Werner { p }).unwrap().state
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut f = Vec::new();
    let rho = bell();
    let lam = ppt_test(&rho).min_eigenvalue;
    check(&mut f, (lam + 0.5).abs() <= 1e-9, format!("ppt λ_min {lam}"));
    let n = negativity(&rho);
    check(&mut f, (n - 0.5).abs() <= 1e-9, format!("negativity {n}"));
    let e = eof_upper(&rho, &MeasureOptions::default()).unwrap().value;
    check(&mut f, (e - 1.0).abs() <= 1e-6, format!("eof_upper {e}"));
    let d = dcoef(&rho, &pauli::x(), &pauli::x(), &MeasureOptions::default())
        .unwrap()
        .value;
    check(&mut f, (d - 1.0).abs() <= 1e-9, format!("dcoef {d}"));
    finish(f, start.elapsed(), Duration::from_secs(1))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut f = Vec::new();
    for i in 0..=10 {
        let p = i as f64 / 10.0;
        let o = ppt_test(&werner(p));
        let expected = (1.0 - 3.0 * p) / 4.0;
        check(
            &mut f,
            (o.min_eigenvalue - expected).abs() <= 1e-9,
            format!("p={p}: λ_min {} vs {expected}", o.min_eigenvalue),
        );
        check(
            &mut f,
            (o.verdict == PptVerdict::Npt) == (p > 1.0 / 3.0),
            format!("p={p}: verdict {:?}", o.verdict),
        );
    }
    finish(f, start.elapsed(), Duration::from_secs(5))
}

/// Wootters concurrence of a two-qubit state.
fn concurrence(rho: &DensityMatrix) -> f64 {
    let yy = kron(&pauli::y(), &pauli::y());
    let tilde = yy.matmul(&rho.matrix().conj()).matmul(&yy);
    let sqrt_rho = rho.eigen().map_values(|x| x.max(0.0).sqrt());
    let m = sqrt_rho.matmul(&tilde).matmul(&sqrt_rho);
    let mut l: Vec<f64> = hermitian_eig(&m)
        .unwrap()
        .values
        .iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    l.sort_by(|a, b| b.total_cmp(a));
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

fn binary_entropy(x: f64) -> f64 {
    [x, 1.0 - x].iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

fn eof_two_qubits(rho: &DensityMatrix) -> f64 {
    let c = concurrence(rho);
    binary_entropy((1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0)
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut f = Vec::new();
    let opts = MeasureOptions {
        k: Some(16),
        restarts: 32,
        ..Default::default()
    };
    let witnesses = [
        catalog(&CatalogMap::Transpose { d: 2 }).unwrap(),
        catalog(&CatalogMap::Reduction { d: 2 }).unwrap(),
    ];
    let mut worst = (0.0f64, 0.0f64);
    for seed in 0..10u64 {
        for (d1, d2) in [(2, 2), (2, 3)] {
            let (rho, _) = random_separable(d1, d2, 4, seed).unwrap();
            let o = MeasureOptions { seed, ..opts.clone() };
            let e = eof_upper(&rho, &o).unwrap().value;
            let d = dcoef_sup(&rho, &o).unwrap().value;
            worst = (worst.0.max(e), worst.1.max(d));
            check(
                &mut f,
                e <= 0.02,
                format!("separable {d1}x{d2} seed {seed}: eof_upper {e}"),
            );
            check(
                &mut f,
                d <= 0.02,
                format!("separable {d1}x{d2} seed {seed}: dcoef_sup {d}"),
            );
            check(
                &mut f,
                ppt_test(&rho).verdict == PptVerdict::Ppt,
                format!("separable {d1}x{d2} seed {seed}: certified NPT"),
            );
            for w in &witnesses {
                check(
                    &mut f,
                    !map_witness(&rho, w).unwrap().entangled,
                    format!("separable {d1}x{d2} seed {seed}: witness fired"),
                );
            }
        }
    }
    for (name, rho) in [("bell", bell()), ("werner(0.9)", werner(0.9))] {
        let analytic = eof_two_qubits(&rho);
        let e = eof_upper(&rho, &opts).unwrap().value;
        check(
            &mut f,
            e >= 0.9 * analytic,
            format!("{name}: eof_upper {e} < 0.9·{analytic}"),
        );
        let d = dcoef_sup(&rho, &opts).unwrap().value;
        check(&mut f, d >= 0.9, format!("{name}: dcoef_sup {d} < 0.9"));
    }
    let mut out = finish(f, start.elapsed(), Duration::from_secs(120));
    out.detail = format!(
        "{} (worst separable eof {:.1e}, dcoef_sup {:.1e})",
        out.detail, worst.0, worst.1
    );
    out
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut f = Vec::new();
    let seesaw = SeeSawOptions::default();
    let dykstra = DykstraOptions::default();
    let verdicts = |c: &ChoiMatrix| {
        (
            is_cp(c, 1e-9).unwrap().holds,
            is_co_cp(c, 1e-9).unwrap().holds,
            is_decomposable(c, &dykstra).unwrap(),
            is_block_positive(c, &seesaw).unwrap().positive,
        )
    };

    let (cp, _, dec, bp) = verdicts(&catalog(&CatalogMap::Identity { d: 2 }).unwrap());
    check(&mut f, cp && dec.is_decomposable() && bp, "identity".into());
    let (cp, co, dec, bp) = verdicts(&catalog(&CatalogMap::Transpose { d: 2 }).unwrap());
    check(&mut f, !cp && co && dec.is_decomposable() && bp, "transpose".into());
    let (cp, _, dec, bp) = verdicts(&catalog(&CatalogMap::Reduction { d: 2 }).unwrap());
    check(&mut f, !cp && dec.is_decomposable() && bp, "reduction(2)".into());
    let (cp, co, dec, bp) = verdicts(&catalog(&CatalogMap::ChoiMap).unwrap());
    check(
        &mut f,
        bp && !cp
            && !co
            && dec.residual >= 1e-3
            && dec.iterations == 5000
            && dec.verdict == DecompositionVerdict::NonDecomposable,
        format!(
            "choi_map: bp={bp} cp={cp} co_cp={co} residual={} iterations={} verdict={:?}",
            dec.residual, dec.iterations, dec.verdict
        ),
    );

    let mut rng = substream(2024, 0);
    for i in 0..50 {
        let (d_in, d_out) = [(2, 2), (2, 3), (3, 2), (3, 3)][i % 4];
        let c = ChoiMatrix::new(random_psd(d_in * d_out, 1 + i % (d_in * d_out), &mut rng), d_in, d_out).unwrap();
        let (cp, co, dec, bp) = verdicts(&c);
        check(&mut f, cp, format!("random CP map {i} not CP"));
        check(
            &mut f,
            !(cp || co) || dec.is_decomposable(),
            format!("random map {i}: cone member not decomposable"),
        );
        check(
            &mut f,
            !dec.is_decomposable() || bp,
            format!("random map {i}: decomposable but not block positive"),
        );
    }
    finish(f, start.elapsed(), Duration::from_secs(30))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut f = Vec::new();
    let quiet = TrackOptions::default();

    let mix = ChannelFamily::transpose_mix(2, 1.0).unwrap();
    let grid = uniform_grid(1.5, 30).unwrap();
    let rec = evolve_track(&bell(), &mix, &grid, &quiet).unwrap();
    match rec.first_negative_time() {
        Some(t) if t > 0.0 && t <= 1.0 => {}
        other => f.push(format!("transpose_mix first negative time {other:?}")),
    }
    let last = rec.points.last().unwrap().min_eig;
    check(&mut f, (last + 0.5).abs() <= 1e-6, format!("final λ_min {last}"));

    for seed in 0..10u64 {
        let (d1, d2) = if seed % 2 == 0 { (2, 2) } else { (2, 3) };
        let (rho, _) = random_separable(d1, d2, 4, seed).unwrap();
        let rec = evolve_track(&rho, &mix, &grid, &quiet).unwrap();
        let min = rec.points.iter().map(|p| p.min_eig).fold(f64::INFINITY, f64::min);
        check(&mut f, min >= -1e-9, format!("separable seed {seed}: λ_min {min}"));
    }

    let flow = ChannelFamily::depolarizing_flow(2, 1.0).unwrap();
    let grid = uniform_grid(3.0, 60).unwrap();
    let step = grid[1] - grid[0];
    let rec = evolve_track(&bell(), &flow, &grid, &quiet).unwrap();
    let zero = rec
        .points
        .iter()
        .find(|p| p.negativity.is_some_and(|n| n <= 1e-12))
        .map(|p| p.t);
    match zero {
        Some(t) if (t - 3f64.ln()).abs() <= step => {}
        other => f.push(format!("depolarizing zero crossing {other:?}, expected ln 3 ± {step}")),
    }
    finish(f, start.elapsed(), Duration::from_secs(60))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut f = Vec::new();
    let mut rng = substream(6, 0);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = 1 + (i * 37) % 64;
        let h = random_hermitian(n, &mut rng);
        let err = hermitian_eig(&h).unwrap().reconstruct().distance(&h);
        worst = worst.max(err);
    }
    check(&mut f, worst < 1e-9, format!("eig reconstruction error {worst}"));

    for (d1, d2) in [(2, 2), (2, 3), (3, 4)] {
        let m = ComplexMatrix::from_fn(d1 * d2, |i, j| {
            C64::new((i * 7 + j) as f64 % 5.0 - 2.0, (i as f64 - j as f64) * 0.3)
        });
        for leg in [Leg::First, Leg::Second] {
            let pt = partial_transpose(&m, (d1, d2), leg).unwrap();
            let back = partial_transpose(&pt, (d1, d2), leg).unwrap();
            check(&mut f, back.distance(&m) <= 1e-12, format!("PT involution {d1}x{d2}"));
            check(
                &mut f,
                (pt.frobenius_norm() - m.frobenius_norm()).abs() <= 1e-12,
                format!("PT isometry {d1}x{d2}"),
            );
        }
    }

    // A PSD Choi plus the partial transpose of another: decomposable by construction.
    let a = random_psd(9, 9, &mut rng);
    let b = random_psd(9, 9, &mut rng);
    let mix = &a + &partial_transpose(&b, (3, 3), Leg::Second).unwrap();
    let c = ChoiMatrix::new(mix, 3, 3).unwrap();
    let report = is_decomposable(
        &c,
        &DykstraOptions {
            max_iter: 2000,
            tol: 1e-8,
        },
    )
    .unwrap();
    check(
        &mut f,
        report.residual < 1e-8 && report.iterations <= 2000,
        format!(
            "Dykstra residual {} after {} iterations",
            report.residual, report.iterations
        ),
    );
    finish(f, start.elapsed(), Duration::from_secs(60))
}

fn run_cli(dir: &Path, args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_posmap"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut f = Vec::new();
    let root = std::env::temp_dir().join(format!("posmap-acceptance-{}", std::process::id()));
    let runs: Vec<PathBuf> = (0..2).map(|i| root.join(format!("run{i}"))).collect();
    let commands: Vec<Vec<&str>> = vec![
        vec!["state", "make", "--family", "bell", "--k", "1", "--out", "bell.json"],
        vec![
            "state",
            "make",
            "--family",
            "werner",
            "--p",
            "0.2",
            "--out",
            "werner.json",
        ],
        vec![
            "state",
            "make",
            "--family",
            "random_separable",
            "--d1",
            "2",
            "--d2",
            "3",
            "--out",
            "sep.json",
        ],
        vec![
            "state",
            "make",
            "--family",
            "random_density",
            "--rank",
            "2",
            "--out",
            "rand.json",
        ],
        vec![
            "state",
            "make",
            "--family",
            "gibbs",
            "--model",
            "ising",
            "--n",
            "2",
            "--out",
            "gibbs.json",
        ],
        vec!["state", "info", "bell.json", "--out", "info.json"],
        vec!["measure", "ppt", "bell.json", "--out", "ppt.json"],
        vec!["measure", "negativity", "bell.json", "--out", "neg.json"],
        vec!["measure", "eof", "rand.json", "--restarts", "8", "--out", "eof.json"],
        vec![
            "measure",
            "dcoef-sup",
            "werner.json",
            "--restarts",
            "4",
            "--out",
            "dsup.json",
        ],
        vec![
            "map",
            "check",
            "--catalog",
            "transpose",
            "--d",
            "2",
            "--out",
            "check.json",
        ],
        vec![
            "map",
            "apply",
            "--catalog",
            "reduction",
            "--d",
            "2",
            "--state",
            "bell.json",
            "--out",
            "apply.json",
        ],
        vec![
            "evolve",
            "bell.json",
            "--family",
            "depolarizing_flow",
            "--rate",
            "1",
            "--t-max",
            "3",
            "--steps",
            "60",
            "--format",
            "csv",
            "--out",
            "dep.csv",
        ],
        vec![
            "evolve",
            "bell.json",
            "--family",
            "transpose_mix",
            "--t-max",
            "1",
            "--steps",
            "10",
            "--out",
            "mix.json",
        ],
    ];
    let mut transcripts = [Vec::new(), Vec::new()];
    for (run, transcript) in runs.iter().zip(transcripts.iter_mut()) {
        std::fs::create_dir_all(run).unwrap();
        for cmd in &commands {
            let mut args = vec!["--seed", "42"];
            args.extend(cmd);
            let (code, stdout) = run_cli(run, &args);
            if code != 0 {
                f.push(format!("{} exited {code}", cmd.join(" ")));
            }
            transcript.push(stdout);
        }
    }
    check(
        &mut f,
        transcripts[0] == transcripts[1],
        "stdout differs between runs".into(),
    );
    for cmd in &commands {
        let file = cmd[cmd.iter().position(|a| *a == "--out").unwrap() + 1];
        let a = std::fs::read(runs[0].join(file)).unwrap_or_default();
        let b = std::fs::read(runs[1].join(file)).unwrap_or_default();
        check(&mut f, !a.is_empty() && a == b, format!("{file} differs between runs"));
    }
    let _ = std::fs::remove_dir_all(&root);
    finish(f, start.elapsed(), Duration::from_secs(120))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 Bell-state battery", criterion_1),
        ("2 Werner sweep", criterion_2),
        ("3 vanishing on separable states", criterion_3),
        ("4 map hierarchy", criterion_4),
        ("5 evolution of positivity", criterion_5),
        ("6 numerical substrate", criterion_6),
        ("7 CLI determinism", criterion_7),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        println!(
            "criterion {name}: {} ({})",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    } else {
        println!("all acceptance criteria passed");
        ExitCode::SUCCESS
    }
}
