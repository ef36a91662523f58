//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints its `PASS`/`FAIL` line; exits non-zero if any fails.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use onmf::double::{large_k_ratio, solve_orthogonal_centroids, Grouping};
use onmf::kmeans::{weighted_kmeans, KMeansConfig};
use onmf::matrix::{normalize_columns, DenseMatrix, NonNegMatrix};
use onmf::metrics::{non_orthogonality, planted_stat};
use onmf::oracle::{brute_force_bcc, brute_force_double, brute_force_kmeans, brute_force_single};
use onmf::sweep::{run_sweep, FactorMode, SweepConfig};
use onmf::{
    bcc_cluster, factorize, factorize_double_large_k, factorize_single, gen_planted, round_block,
    BipartiteLabeling, PlantedMode, SeededRng,
};

/// Slack for ratio checks whose optimum may be exactly 0 while the
/// algorithm's objective carries rounding noise.
fn fp_slack(m: &DenseMatrix<f64>) -> f64 {
    1e-9 * (1.0 + m.frobenius_norm_sq())
}

fn report(id: u32, name: &str, ok: bool, elapsed: Duration, limit: Duration, detail: &str) -> bool {
    let in_time = elapsed <= limit;
    let verdict = if ok && in_time { "PASS" } else { "FAIL" };
    println!(
        "{verdict} criterion {id:>2} {name}: {detail} [{:.2}s, limit {}s]",
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    ok && in_time
}

fn random_nonneg(
    rng: &mut SeededRng,
    rows: usize,
    cols: usize,
    zero_prob: f64,
) -> NonNegMatrix<f64> {
    let data = (0..rows * cols)
        .map(|_| {
            if rng.uniform() < zero_prob {
                0.0
            } else {
                rng.exp(1.0).unwrap()
            }
        })
        .collect();
    NonNegMatrix::new(DenseMatrix::new(rows, cols, data).unwrap()).unwrap()
}

fn random_binary(rng: &mut SeededRng, rows: usize, cols: usize) -> Vec<Vec<bool>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.uniform() < 0.5).collect())
        .collect()
}

fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn dist_sq(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

fn criterion_01_orthogonality_exactness() -> bool {
    let start = Instant::now();
    let mut rng = SeededRng::new(101);
    let noises = [0.0, 0.1, 0.5, 1.0];
    let modes = [
        FactorMode::Single,
        FactorMode::Double,
        FactorMode::DoubleLargeK,
    ];
    let mut violations = Vec::new();
    for i in 0..200 {
        let m = 1 + rng.below(60);
        let n = 1 + rng.below(60);
        let k = 1 + rng.below(10);
        let noise = noises[i % noises.len()];
        let mode = modes[i % modes.len()];
        let inst =
            gen_planted::<f64>(m, n, k, noise, 1000 + i as u64, mode.planted_mode()).unwrap();
        let sol = factorize(
            &inst.m_observed,
            k,
            mode,
            &KMeansConfig::with_seed(i as u64),
        )
        .unwrap();
        let w_no = non_orthogonality(sol.w_dense().inner());
        let a_no = if mode.is_double() {
            non_orthogonality(sol.a.transpose().inner())
        } else {
            0.0
        };
        if w_no != 0.0 || a_no != 0.0 {
            violations.push(format!(
                "#{i} {m}x{n} k={k} {}: W {w_no}, A {a_no}",
                mode.as_str()
            ));
        }
    }
    report(
        1,
        "orthogonality exactness",
        violations.is_empty(),
        start.elapsed(),
        Duration::from_secs(30),
        &format!(
            "200 instances, {} violations {:?}",
            violations.len(),
            violations.first()
        ),
    )
}

fn criterion_02_planted_reconstruction_mean() -> bool {
    let start = Instant::now();
    let (m, n, sigma, trials) = (20, 50, 0.5, 200);
    let total: f64 = (0..trials)
        .map(|t| {
            let inst = gen_planted::<f64>(m, n, 4, sigma, t as u64, PlantedMode::Single).unwrap();
            inst.m_observed
                .sub(&inst.m_truth)
                .unwrap()
                .frobenius_norm_sq()
        })
        .sum();
    let mean = total / trials as f64;
    let (expected, sd) = planted_stat(m, n, sigma);
    let band = 3.0 * sd / (trials as f64).sqrt();
    report(
        2,
        "planted reconstruction mean",
        (mean - expected).abs() <= band,
        start.elapsed(),
        Duration::from_secs(5),
        &format!("sample mean {mean:.3}, expected {expected} ± {band:.3}"),
    )
}

fn criterion_03_single_factor_bound() -> bool {
    let start = Instant::now();
    let mut rng = SeededRng::new(303);
    let mut failures = Vec::new();
    let mut ratios = Vec::new();
    for i in 0..50 {
        let rows = 1 + rng.below(5);
        let cols = 1 + rng.below(7);
        let k = 1 + rng.below(3);
        let m = if i % 2 == 0 {
            random_nonneg(&mut rng, rows, cols, 0.3)
        } else {
            gen_planted::<f64>(rows, cols, k, 0.3, i as u64, PlantedMode::Single)
                .unwrap()
                .m_observed
        };
        let cfg = KMeansConfig::with_seed(i as u64).restarts(50);
        let sol = factorize_single(&m, k, &cfg).unwrap();
        let opt = brute_force_single(&m, k).unwrap().objective;

        let pts = normalize_columns(&m);
        let km = weighted_kmeans(&pts, k, &cfg).unwrap().cost;
        let km_opt = brute_force_kmeans(&pts, k).unwrap().cost;
        let r_emp = if km_opt > 0.0 {
            km / km_opt
        } else if km <= 1e-12 * pts.total_weight().max(1.0) {
            1.0
        } else {
            f64::INFINITY
        };

        if sol.objective > 2.0 * r_emp * opt + fp_slack(&m) || sol.objective.is_nan() {
            failures.push(format!(
                "#{i}: alg {} opt {opt} r_emp {r_emp}",
                sol.objective
            ));
        }
        if opt > 1e-9 {
            ratios.push(sol.objective / opt);
        }
    }
    ratios.sort_by(f64::total_cmp);
    let median = ratios
        .get(ratios.len().saturating_sub(1) / 2)
        .copied()
        .unwrap_or(1.0);
    let worst = ratios.last().copied().unwrap_or(1.0);
    report(
        3,
        "single-factor 2r bound",
        failures.is_empty(),
        start.elapsed(),
        Duration::from_secs(120),
        &format!(
            "50 instances, {} failures {:?}; ratio to OPT median {median:.4}, max {worst:.4}",
            failures.len(),
            failures.first()
        ),
    )
}

fn criterion_04_large_k_bound() -> bool {
    let start = Instant::now();
    let mut rng = SeededRng::new(404);
    let bound = large_k_ratio();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let rows = random_binary(&mut rng, 4, 4);
        let m = BipartiteLabeling::from_matrix(&rows)
            .unwrap()
            .to_matrix::<f64>();
        let alg = factorize_double_large_k(&m).unwrap().objective;
        let opt = brute_force_double(&m, 4).unwrap();
        if alg > bound * opt + fp_slack(&m) || alg.is_nan() {
            failures.push(format!("#{i}: alg {alg} opt {opt}"));
        }
        if opt > 1e-9 {
            worst = worst.max(alg / opt);
        }
    }
    report(
        4,
        "large-k 1/sin²(π/12) bound",
        failures.is_empty(),
        start.elapsed(),
        Duration::from_secs(120),
        &format!(
            "50 binary 4x4, bound {bound:.4}, {} failures {:?}, worst ratio {worst:.4}",
            failures.len(),
            failures.first()
        ),
    )
}

fn criterion_05_rounding_bound() -> bool {
    let start = Instant::now();
    let mut rng = SeededRng::new(505);
    let mut failures = Vec::new();
    for i in 0..1000 {
        let (r, c) = (1 + rng.below(6), 1 + rng.below(6));
        let rows = random_binary(&mut rng, r, c);
        let blk = BipartiteLabeling::from_matrix(&rows)
            .unwrap()
            .to_matrix::<f64>()
            .into_inner();
        let a: Vec<f64> = (0..r)
            .map(|_| {
                if rng.uniform() < 0.15 {
                    0.0
                } else {
                    2.0 * rng.uniform()
                }
            })
            .collect();
        let w: Vec<f64> = (0..c)
            .map(|_| {
                if rng.uniform() < 0.15 {
                    0.0
                } else {
                    2.0 * rng.uniform()
                }
            })
            .collect();
        let (ah, wh) = round_block(&blk, &a, &w).unwrap();
        let mut frac = 0.0;
        let mut bin = 0.0;
        for x in 0..r {
            for y in 0..c {
                let v = blk.get(x, y);
                frac += (v - a[x] * w[y]).powi(2);
                let b = if ah[x] && wh[y] { 1.0 } else { 0.0 };
                bin += (v - b) * (v - b);
            }
        }
        if bin > 8.0 * frac {
            failures.push(format!("#{i}: binary {bin} fractional {frac}"));
        }
    }
    report(
        5,
        "rounding 8x bound",
        failures.is_empty(),
        start.elapsed(),
        Duration::from_secs(5),
        &format!(
            "1000 triples, {} failures {:?}",
            failures.len(),
            failures.first()
        ),
    )
}

fn criterion_06_bcc_bound() -> bool {
    let start = Instant::now();
    let mut rng = SeededRng::new(606);
    let mut failures = Vec::new();
    let mut ratios = Vec::new();
    for i in 0..30 {
        let m = 1 + rng.below(6);
        let n = 1 + rng.below(7 - m);
        let g = BipartiteLabeling::from_matrix(&random_binary(&mut rng, m, n)).unwrap();
        let alg = bcc_cluster(&g).unwrap().disagreements;
        let opt = brute_force_bcc(&g).unwrap();
        if alg > 120 * opt {
            failures.push(format!("#{i} {m}x{n}: alg {alg} opt {opt}"));
        }
        ratios.push(if opt == 0 {
            1.0
        } else {
            alg as f64 / opt as f64
        });
    }
    ratios.sort_by(f64::total_cmp);
    report(
        6,
        "BCC 120 bound",
        failures.is_empty(),
        start.elapsed(),
        Duration::from_secs(60),
        &format!(
            "30 labelings, {} failures {:?}, median ratio {:.3}, max {:.3}",
            failures.len(),
            failures.first(),
            ratios[(ratios.len() - 1) / 2],
            ratios[ratios.len() - 1]
        ),
    )
}

fn criterion_07_scaled_experiment_one() -> bool {
    let start = Instant::now();
    let grid: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
    let cfg = SweepConfig {
        m: 50,
        n: 500,
        k: 10,
        noise_grid: grid,
        trials: 7,
        seed: 2024,
        mode: FactorMode::Single,
        kmeans: KMeansConfig::default(),
    };
    let rows = run_sweep(&cfg).unwrap();

    let orthogonal = rows.iter().all(|r| r.max_non_orthogonality == 0.0);
    let below_planted: Vec<bool> = rows
        .iter()
        .map(|r| r.median_reconstruction_error <= r.median_planted_error)
        .collect();
    let recovery: Vec<f64> = rows.iter().map(|r| r.median_recovery_error).collect();
    let inversions: Vec<f64> = recovery
        .windows(2)
        .filter(|w| w[1] < w[0])
        .map(|w| (w[0] - w[1]) / w[0])
        .collect();
    let monotone = inversions.is_empty() || (inversions.len() == 1 && inversions[0] <= 0.02);
    let ok = orthogonal && below_planted.iter().all(|&b| b) && monotone;
    report(
        7,
        "scaled experiment 1",
        ok,
        start.elapsed(),
        Duration::from_secs(180),
        &format!(
            "(a) orthogonal {orthogonal}; (b) reconstruction below planted at {}/{} levels; \
             (c) {} inversions {inversions:?}; recovery {:?}",
            below_planted.iter().filter(|&&b| b).count(),
            rows.len(),
            inversions.len(),
            recovery
                .iter()
                .map(|v| format!("{v:.3}"))
                .collect::<Vec<_>>()
        ),
    )
}

/// `Σ_{q_j > 0} q_j ‖c_j − a_σ(j)‖²`.
fn centroid_objective(c: &[Vec<f64>], q: &[f64], sigma: &[usize], a: &[Vec<f64>]) -> f64 {
    c.iter()
        .zip(q)
        .zip(sigma)
        .filter(|((_, &qj), _)| qj > 0.0)
        .map(|((cj, &qj), &s)| qj * dist_sq(cj, &a[s]))
        .sum()
}

/// Enumerates every owner in `{none, 0..k}` for each coordinate. An owned
/// coordinate takes the minimizer of its 1-D quadratic over `v ≥ 0`.
fn exhaustive_centroid_opt(c: &[Vec<f64>], q: &[f64], sigma: &[usize], k: usize) -> f64 {
    let dim = c[0].len();
    let total = (k + 1).pow(dim as u32);
    let mut best = f64::INFINITY;
    for code in 0..total {
        let mut a = vec![vec![0.0; dim]; k];
        let mut rest = code;
        for h in 0..dim {
            let owner = rest % (k + 1);
            rest /= k + 1;
            if owner == k {
                continue;
            }
            // Minimize Σ_{σ(j)=owner} q_j (c_jh − v)² over v ≥ 0.
            let (mut num, mut den) = (0.0, 0.0);
            for j in 0..c.len() {
                if sigma[j] == owner && q[j] > 0.0 {
                    num += q[j] * c[j][h];
                    den += q[j];
                }
            }
            if den > 0.0 {
                a[owner][h] = (num / den).max(0.0);
            }
        }
        best = best.min(centroid_objective(c, q, sigma, &a));
    }
    best
}

fn criterion_08_coordinate_solver_optimal() -> bool {
    let start = Instant::now();
    let mut rng = SeededRng::new(808);
    let mut failures = Vec::new();
    for i in 0..100 {
        let k = 1 + rng.below(3);
        let dim = 1 + rng.below(4);
        let count = 1 + rng.below(5);
        let c: Vec<Vec<f64>> = (0..count)
            .map(|_| {
                (0..dim)
                    .map(|_| {
                        if rng.uniform() < 0.3 {
                            0.0
                        } else {
                            rng.uniform()
                        }
                    })
                    .collect()
            })
            .collect();
        let q: Vec<f64> = (0..count)
            .map(|_| {
                if rng.uniform() < 0.2 {
                    0.0
                } else {
                    3.0 * rng.uniform()
                }
            })
            .collect();
        let sigma: Vec<usize> = (0..count).map(|_| rng.below(k)).collect();
        let grouping = Grouping {
            sigma: sigma.clone(),
            groups: k,
        };
        let a = solve_orthogonal_centroids(&c, &q, &grouping, k).unwrap();
        let orthogonal = (0..dim).all(|h| a.iter().filter(|v| v[h] != 0.0).count() <= 1);
        let got = centroid_objective(&c, &q, &sigma, &a);
        let want = exhaustive_centroid_opt(&c, &q, &sigma, k);
        if !orthogonal || (got - want).abs() > 1e-12 * (1.0 + want) {
            failures.push(format!(
                "#{i}: solver {got} exhaustive {want} orthogonal {orthogonal}"
            ));
        }
    }
    report(
        8,
        "coordinate-wise solver optimality",
        failures.is_empty(),
        start.elapsed(),
        Duration::from_secs(10),
        &format!(
            "100 instances, {} failures {:?}",
            failures.len(),
            failures.first()
        ),
    )
}

fn criterion_09_geometric_facts() -> bool {
    let start = Instant::now();
    let mut rng = SeededRng::new(909);
    let samples = 100_000;
    let tol = 1e-9;
    // `lhs ≥ rhs` up to relative tolerance.
    let holds =
        |lhs: f64, rhs: f64| lhs >= rhs - tol * lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
    let vec_of = |rng: &mut SeededRng, dim: usize, signed: bool| -> Vec<f64> {
        (0..dim)
            .map(|_| {
                let v = if rng.uniform() < 0.2 {
                    0.0
                } else {
                    rng.exp(1.0).unwrap()
                };
                if signed && rng.uniform() < 0.5 {
                    -v
                } else {
                    v
                }
            })
            .collect()
    };
    let (mut unit, mut doubled, mut nonneg, mut center) = (0, 0, 0, 0);
    for _ in 0..samples {
        let dim = 1 + rng.below(6);

        // ‖y − θx‖² ≥ ½‖y‖²‖ȳ − x‖² for unit or zero x.
        let y = vec_of(&mut rng, dim, false);
        let mut x = vec_of(&mut rng, dim, false);
        let nx = norm_sq(&x).sqrt();
        if nx > 0.0 {
            x.iter_mut().for_each(|v| *v /= nx);
        }
        let theta = 3.0 * rng.uniform();
        let ny = norm_sq(&y);
        let ybar: Vec<f64> = if ny > 0.0 {
            y.iter().map(|v| v / ny.sqrt()).collect()
        } else {
            vec![0.0; dim]
        };
        let lhs = dist_sq(&y, &x.iter().map(|v| theta * v).collect::<Vec<_>>());
        if !holds(lhs, 0.5 * ny * dist_sq(&ybar, &x)) {
            unit += 1;
        }

        // ‖x − y‖² ≤ 2‖x‖² + 2‖y‖² for arbitrary vectors.
        let (u, v) = (vec_of(&mut rng, dim, true), vec_of(&mut rng, dim, true));
        if !holds(2.0 * norm_sq(&u) + 2.0 * norm_sq(&v), dist_sq(&u, &v)) {
            doubled += 1;
        }

        // ‖x − y‖² ≤ ‖x‖² + ‖y‖² for non-negative vectors.
        let (u, v) = (vec_of(&mut rng, dim, false), vec_of(&mut rng, dim, false));
        if !holds(norm_sq(&u) + norm_sq(&v), dist_sq(&u, &v)) {
            nonneg += 1;
        }

        // Σℓ_i‖x_i − b‖² = Σℓ_i‖x_i − y‖² + (Σℓ_i)‖y − b‖², y the weighted mean.
        let count = 1 + rng.below(5);
        let pts: Vec<Vec<f64>> = (0..count).map(|_| vec_of(&mut rng, dim, true)).collect();
        let w: Vec<f64> = (0..count).map(|_| 0.01 + rng.uniform()).collect();
        let total: f64 = w.iter().sum();
        let mean: Vec<f64> = (0..dim)
            .map(|h| pts.iter().zip(&w).map(|(p, wi)| wi * p[h]).sum::<f64>() / total)
            .collect();
        let b = vec_of(&mut rng, dim, true);
        let lhs: f64 = pts.iter().zip(&w).map(|(p, wi)| wi * dist_sq(p, &b)).sum();
        let rhs: f64 = pts
            .iter()
            .zip(&w)
            .map(|(p, wi)| wi * dist_sq(p, &mean))
            .sum::<f64>()
            + total * dist_sq(&mean, &b);
        if (lhs - rhs).abs() > tol * lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE) {
            center += 1;
        }
    }
    report(
        9,
        "geometric facts",
        unit + doubled + nonneg + center == 0,
        start.elapsed(),
        Duration::from_secs(10),
        &format!(
            "{samples} samples each; violations unit {unit}, doubled triangle {doubled}, \
             non-negative triangle {nonneg}, center {center}"
        ),
    )
}

fn onmf(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_onmf"))
        .args(args)
        .env("ONMF_THREADS", "4")
        .output()
        .expect("binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

/// Runs the same command line in two fresh directories; `{dir}` in an
/// argument is replaced by the directory, `{in}` by the shared input directory.
fn run_twice(input: &Path, args: &[&str]) -> bool {
    let runs: Vec<_> = (0..2)
        .map(|_| {
            let dir = tempfile::tempdir().unwrap();
            let d = dir.path().to_str().unwrap().to_owned();
            let i = input.to_str().unwrap();
            let concrete: Vec<String> = args
                .iter()
                .map(|a| a.replace("{dir}", &d).replace("{in}", i))
                .collect();
            let refs: Vec<&str> = concrete.iter().map(String::as_str).collect();
            let (stdout, code) = onmf(&refs);
            (stdout, code, read_all(dir.path()))
        })
        .collect();
    runs[0].1 == 0 && runs[0] == runs[1]
}

fn criterion_10_cli_determinism() -> bool {
    let start = Instant::now();
    let input = tempfile::tempdir().unwrap();
    let inp = input.path();
    let (_, code) = onmf(&[
        "generate",
        "--m",
        "30",
        "--n",
        "80",
        "--k",
        "4",
        "--noise",
        "0.3",
        "--seed",
        "9",
        "--mode",
        "double",
        "--out-dir",
        inp.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    fs::write(
        inp.join("edges.txt"),
        "0,0,+\n0,1,-\n1,0,+\n1,1,+\n2,0,-\n2,1,+\n",
    )
    .unwrap();

    let mut results = Vec::new();
    let gen: &[&str] = &[
        "generate",
        "--m",
        "12",
        "--n",
        "40",
        "--k",
        "3",
        "--noise",
        "0.5",
        "--seed",
        "4",
        "--mode",
        "single",
        "--out-dir",
        "{dir}",
    ];
    results.push(("generate", run_twice(inp, gen)));
    for mode in ["single", "double", "double-large-k"] {
        let fac: &[&str] = &[
            "factorize",
            "--input",
            "{in}/M.csv",
            "--k",
            "4",
            "--mode",
            mode,
            "--restarts",
            "8",
            "--seed",
            "3",
            "--out-a",
            "{dir}/A.csv",
            "--out-w",
            "{dir}/W.csv",
            "--no-timing",
        ];
        results.push(("factorize", run_twice(inp, fac)));
    }
    let eval: &[&str] = &[
        "evaluate",
        "--input",
        "{in}/M.csv",
        "--truth",
        "{in}/Mtruth.csv",
        "--a",
        "{in}/Atruth.csv",
        "--w",
        "{in}/Wtruth.csv",
    ];
    results.push(("evaluate", run_twice(inp, eval)));
    let sweep: &[&str] = &[
        "sweep",
        "--m",
        "15",
        "--n",
        "60",
        "--k",
        "3",
        "--noise-grid",
        "0.1,0.4,0.8",
        "--trials",
        "4",
        "--seed",
        "11",
        "--mode",
        "double",
        "--out",
        "{dir}/sweep.csv",
        "--no-timing",
    ];
    results.push(("sweep", run_twice(inp, sweep)));
    let bcc: &[&str] = &[
        "bcc",
        "--edges",
        "{in}/edges.txt",
        "--out",
        "{dir}/clusters.csv",
    ];
    results.push(("bcc", run_twice(inp, bcc)));

    let failed: Vec<&str> = results
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(n, _)| *n)
        .collect();
    report(
        10,
        "CLI determinism",
        failed.is_empty(),
        start.elapsed(),
        Duration::from_secs(30),
        &format!(
            "{} command lines run twice with ONMF_THREADS=4, differing: {failed:?}",
            results.len()
        ),
    )
}

fn main() {
    let criteria: [(u32, fn() -> bool); 10] = [
        (1, criterion_01_orthogonality_exactness),
        (2, criterion_02_planted_reconstruction_mean),
        (3, criterion_03_single_factor_bound),
        (4, criterion_04_large_k_bound),
        (5, criterion_05_rounding_bound),
        (6, criterion_06_bcc_bound),
        (7, criterion_07_scaled_experiment_one),
        (8, criterion_08_coordinate_solver_optimal),
        (9, criterion_09_geometric_facts),
        (10, criterion_10_cli_determinism),
    ];
    let mut failed = Vec::new();
    for (id, run) in criteria {
        match std::panic::catch_unwind(run) {
            Ok(true) => {}
            Ok(false) => failed.push(id),
            Err(_) => {
                println!("FAIL criterion {id:>2}: panicked");
                failed.push(id);
            }
        }
    }
    println!(
        "acceptance: {} passed, {} failed {failed:?}",
        criteria.len() - failed.len(),
        failed.len()
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
