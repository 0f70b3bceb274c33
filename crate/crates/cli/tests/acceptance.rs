//! Acceptance criteria 1-10. Runs without the libtest harness so each
//! criterion prints one PASS/FAIL line; any failure makes the target fail.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::process::Command;
use std::time::{Duration, Instant};

use squeeze_core::catalog::{self, BaseType, CartanHartogsParams};
use squeeze_core::comparisons::{self, Relation};
use squeeze_core::embedding::{self, InclusionStatus};
use squeeze_core::metrics;
use squeeze_core::pinching::{self, ScanOptions};
use squeeze_core::squeeze::{self, Provenance};
use squeeze_core::{diff, sampling, ExactModel, RealPoint, Strategy};

struct Check {
    ok: bool,
    detail: String,
}

impl Check {
    fn new() -> Self {
        Self { ok: true, detail: String::new() }
    }

    fn require(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if !cond {
            self.ok = false;
            if self.detail.len() < 2000 {
                self.detail.push_str(&what());
                self.detail.push_str("; ");
            }
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        if self.ok {
            self.detail = s.into();
        }
    }
}

fn pt(c: &[f64]) -> RealPoint {
    RealPoint::new(c.to_vec()).unwrap()
}

fn c1_geodesic() -> Check {
    let mut c = Check::new();
    let start = Instant::now();
    let mut worst = 0.0f64;
    let rhos: Vec<f64> = (0..10).map(|j| 0.2 + 0.7 * j as f64 / 9.0).collect();
    for &rho in &rhos {
        let r_lo = 0.5f64.max(1.0 - 2.0 * rho).max(1.0 / (1.0 + 2.0 * rho)) + 0.01;
        for i in 0..10 {
            let r = r_lo + (0.98 - r_lo) * i as f64 / 9.0;
            c.require(metrics::in_closed_form_region(r, rho), || format!("({r},{rho}) outside region"));
            let closed = metrics::geodesic_ball_boundary_distance(r, rho).unwrap();
            let orc = metrics::numerical_boundary_distance_oracle(r, rho, 2, 1_000_000).unwrap();
            let diff = (closed - orc.distance).abs();
            worst = worst.max(diff);
            c.require(diff <= 2e-4, || format!("r={r} rho={rho}: closed {closed} oracle {}", orc.distance));
        }
    }
    let lim = metrics::sigma(0.5f64.sqrt()).unwrap();
    let at = metrics::geodesic_ball_boundary_distance(0.999, 0.5).unwrap();
    c.require((at - lim).abs() <= 1e-3, || format!("r=0.999: {at} vs sigma(sqrt rho) {lim}"));
    let t = start.elapsed();
    c.require(t < Duration::from_secs(60), || format!("runtime {t:?}"));
    c.note(format!("max |closed - oracle| = {worst:.2e} on 100 points, r->1 gap {:.2e}, {t:.1?}", (at - lim).abs()));
    c
}

fn c2_cartan_hartogs() -> Check {
    let mut c = Check::new();
    let start = Instant::now();
    let bases = [
        BaseType::I { r: 1, s: 2 },
        BaseType::I { r: 2, s: 2 },
        BaseType::II { p: 2 },
        BaseType::III { q: 2 },
        BaseType::III { q: 3 },
        BaseType::IV { n: 2 },
        BaseType::IV { n: 3 },
    ];
    let mut worst = 0.0f64;
    let mut count = 0;
    for base in bases {
        for k in [0.3, 0.5, 1.0] {
            for m in [1, 2] {
                let p = CartanHartogsParams { base, k, m };
                let d = catalog::cartan_hartogs_domain(p).unwrap();
                let pole = catalog::cartan_hartogs_pole(&p);
                let h = diff::hessian(&d, &pole).unwrap();
                let nz = 2 * base.dim();
                for i in 0..h.nrows() {
                    for j in 0..h.ncols() {
                        let expect = match (i == j, i < nz) {
                            (true, true) => 2.0 * k,
                            (true, false) => 2.0,
                            _ => 0.0,
                        };
                        let err = (h[(i, j)] - expect).abs();
                        worst = worst.max(err);
                        c.require(err <= 1e-4, || format!("{base} k={k} m={m} H[{i},{j}] = {}", h[(i, j)]));
                    }
                }
                count += 1;
            }
        }
    }
    let t = start.elapsed();
    c.require(t < Duration::from_secs(30), || format!("runtime {t:?}"));
    c.note(format!("{count} Hessians, max entry error {worst:.2e}, {t:.1?}"));
    c
}

fn c3_thullen() -> Check {
    let mut c = Check::new();
    let p = pt(&[1.0, 0.0, 0.0, 0.0]);
    let mut out = Vec::new();
    for k in [0.25, 0.5, 0.75] {
        let d = catalog::thullen_domain(k).unwrap();
        let s = sampling::sample_interior(&d, 100_000, 42).unwrap();
        let r = pinching::pinching_radius(&d, &p, &s).unwrap();
        c.require((r.pinching - k).abs() <= 1e-2, || format!("k={k}: pinching {}", r.pinching));
        let est = squeeze::boundary_estimate_at_point(&d, &p, &[1e-2, 1e-4, 1e-6], &s, None).unwrap();
        let deepest = est.bounds.last().unwrap().bound.lower;
        c.require((est.limit - k.sqrt()).abs() <= 1e-2, || format!("k={k}: limit {}", est.limit));
        c.require((deepest - k.sqrt()).abs() <= 1e-2, || format!("k={k}: estimate at depth 1e-6 is {deepest}"));
        let lowers: Vec<f64> = est.bounds.iter().map(|b| b.bound.lower).collect();
        c.require(lowers.windows(2).all(|w| w[1] >= w[0]), || format!("k={k}: estimates not increasing as depth shrinks"));
        out.push(format!("k={k}: {:.4}/{:.4}", r.pinching, deepest));
    }
    c.note(format!("pinching/estimate {}", out.join(", ")));
    c
}

fn c4_reinhardt() -> Check {
    let mut c = Check::new();
    let eps = 0.01;
    let h = 0.5f64.exp();
    let p = pt(&[1.0, 0.0, h, 0.0]);
    let sheared = catalog::reinhardt_sheared(eps).unwrap();
    let hs = diff::hessian(&sheared, &p).unwrap();
    let em = (-0.5f64).exp();
    let expect = [8.0 - 8.0 * em * eps, 8.0 * em * eps, 4.0 / 1f64.exp(), 4.0 / 1f64.exp()];
    let mut diag_err = 0.0f64;
    for (i, e) in expect.iter().enumerate() {
        let err = (hs[(i, i)] - e).abs();
        diag_err = diag_err.max(err);
        c.require(err <= 1e-4, || format!("sheared H[{i},{i}] = {} vs {e}", hs[(i, i)]));
    }
    let scan = catalog::reinhardt_support_scan(eps, 500).unwrap();
    c.require((scan.max - h).abs() <= 1e-6, || format!("support max {} vs e^(1/2)", scan.max));
    c.require(scan.unique_argmax_at_origin, || format!("argmax not unique ({} points)", scan.argmax_count));
    c.require(scan.passed, || "support scan flagged".into());
    let plain = catalog::reinhardt_domain();
    let eig = diff::hessian_at_boundary(&plain, &p).unwrap().tangential_eigenvalues().unwrap();
    let zero = eig.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    c.require(zero <= 1e-6, || format!("unsheared tangential eigenvalues {eig:?}"));
    let s = sampling::sample_interior(&sheared, 100_000, 42).unwrap();
    let r = pinching::pinching_radius(&sheared, &p, &s).unwrap();
    c.require(r.pinching > 0.0 && r.gsc, || format!("sheared pinching {}", r.pinching));
    c.note(format!(
        "diag err {diag_err:.1e}, support max err {:.1e}, zero eigenvalue {zero:.1e}, sheared pinching {:.3e}",
        (scan.max - h).abs(),
        r.pinching
    ));
    c
}

fn c5_punctured_disc() -> Check {
    let mut c = Check::new();
    let mut out = Vec::new();
    for a in [0.2, 0.5, 0.8] {
        let spec = embedding::moebius_embedding(a).unwrap();
        let interior = sampling::sample_interior(&spec.domain, 20_000, 42).unwrap();
        let boundary = sampling::sample_boundary(&spec.domain, 20_000, 43).unwrap();
        let w = embedding::witness_radius(&spec, &boundary, &interior).unwrap();
        c.require((w.bound.lower - a).abs() <= 2e-3, || format!("a={a}: witness {}", w.bound.lower));
        c.require(w.bound.provenance == Provenance::EmbeddingWitness, || format!("a={a}: provenance {:?}", w.bound.provenance));
        let below = embedding::verify_inclusion(&spec, a - 0.05, 41, &interior, 42).unwrap();
        let above = embedding::verify_inclusion(&spec, a + 0.05, 41, &interior, 42).unwrap();
        c.require(below.included && below.status == InclusionStatus::Included, || format!("a={a}: r=a-0.05 {:?}", below.status));
        c.require(!above.included && above.status == InclusionStatus::Excluded, || format!("a={a}: r=a+0.05 {:?}", above.status));
        out.push(format!("a={a}: {:.5}", w.bound.lower));
    }
    c.note(format!("witness {}, inclusion flips across r = a", out.join(", ")));
    c
}

fn c6_limits() -> Check {
    let mut c = Check::new();
    let z = pt(&[0.3, 0.2]);
    let zn = z.norm();
    let radii: Vec<f64> = (0..30).map(|k| 1.0 - 0.5 / (k as f64 + 1.0)).collect();
    let domains: Vec<_> = radii.iter().map(|r| catalog::scaled_punctured_disc(*r).unwrap()).collect();
    let limit = catalog::punctured_disc();
    let rep = squeeze::increasing_sequence_eval(&domains, &limit, &z, &squeeze::exact_evaluator).unwrap();
    let mut worst = 0.0f64;
    for (step, r) in rep.steps.iter().zip(&radii) {
        let expect = zn * (1.0 / r - 1.0);
        worst = worst.max((step.gap - expect).abs());
        c.require((step.gap - expect).abs() <= 1e-12, || format!("r_k={r}: gap {} vs {expect}", step.gap));
    }
    c.require(rep.assertion_holds, || "increasing report does not assert convergence".into());
    let shrinking: Vec<_> = (1..=30).map(|k| catalog::scaled_punctured_disc(1.0 + 1.0 / k as f64).unwrap()).collect();
    let dec = squeeze::decreasing_sequence_eval(&shrinking, &limit, &z, &squeeze::exact_evaluator).unwrap();
    let limsup = dec.implied_bound.lower;
    c.require(dec.assertion_holds && dec.limit_value.upper >= limsup, || format!("decreasing: limit {:?} limsup {limsup}", dec.limit_value));
    c.note(format!("exhaustion gap error {worst:.1e}; decreasing: s = {:.6} >= limsup {limsup:.6}", dec.limit_value.lower));
    c
}

fn c7_envelopes() -> Check {
    let mut c = Check::new();
    let ss: Vec<f64> = (1..=20).map(|i| 0.05 * i as f64).collect();
    let rels = [
        Relation::MetricCK,
        Relation::MetricKB,
        Relation::MetricKKE,
        Relation::VolumeAny,
        Relation::VolumeKB,
        Relation::VolumeKKE,
    ];
    let mut inconsistent = Vec::new();
    for rel in rels {
        for n in 1..=8 {
            let envs: Vec<_> = ss.iter().map(|&s| comparisons::envelope(rel, s, n).unwrap()).collect();
            for e in &envs {
                let expected_bad = n == 1
                    && matches!(rel, Relation::MetricKKE | Relation::VolumeKKE)
                    && e.s > FRAC_1_SQRT_2;
                if !e.consistent {
                    inconsistent.push(format!("{rel:?} n={n} s={:.2}", e.s));
                }
                c.require(e.consistent != expected_bad, || format!("{rel:?} n={n} s={}: low {} high {}", e.s, e.low, e.high));
                c.require(e.low > 0.0 && e.high.is_finite(), || format!("{rel:?} n={n}: bad constants"));
            }
            for w in envs.windows(2) {
                c.require(w[1].low >= w[0].low, || format!("{rel:?} n={n}: low decreases at s={}", w[1].s));
                c.require(w[1].high <= w[0].high, || format!("{rel:?} n={n}: high increases at s={}", w[1].s));
            }
            let one = envs.last().unwrap();
            if matches!(rel, Relation::MetricCK | Relation::VolumeAny) {
                c.require(one.low == 1.0 && one.high == 1.0, || format!("{rel:?} n={n} at s=1: ({}, {})", one.low, one.high));
            }
        }
    }
    let kb = comparisons::envelope_kobayashi_bergman(1.0, 1).unwrap();
    c.require(kb.high == 8.0 * PI, || format!("KB high {} vs 8 pi", kb.high));
    c.note(format!(
        "6 relations x n=1..8 x 20 s values; KB(1,1) high = {} ; {} expected inconsistent n=1 KE cases",
        kb.high,
        inconsistent.len()
    ));
    c
}

fn c8_products() -> Check {
    let mut c = Check::new();
    let table = [
        (BaseType::I { r: 1, s: 1 }, 1.0),
        (BaseType::I { r: 2, s: 3 }, 1.0 / 2f64.sqrt()),
        (BaseType::I { r: 3, s: 3 }, 1.0 / 3f64.sqrt()),
        (BaseType::II { p: 1 }, 1.0),
        (BaseType::II { p: 4 }, 0.5),
        (BaseType::III { q: 2 }, 1.0),
        (BaseType::III { q: 5 }, 1.0 / 2f64.sqrt()),
        (BaseType::IV { n: 3 }, FRAC_1_SQRT_2),
        (BaseType::IV { n: 5 }, FRAC_1_SQRT_2),
    ];
    for (base, s) in table {
        let got = catalog::s_omega_constant(base).unwrap();
        c.require(got == s, || format!("s_Omega({base}) = {got} vs {s}"));
        let lim = catalog::cartan_hartogs_k_limit(base).unwrap();
        let expect = (s.powi(-2) + 1.0).powf(-0.5);
        c.require(lim == expect, || format!("k->0 limit for {base}: {lim} vs {expect}"));
    }
    let mut worst = 0.0f64;
    for a in [0.1, 0.25, 0.4, 0.49] {
        let z = catalog::product_to_triangle(&pt(&[a, 0.0, a, 0.0])).unwrap();
        let w = catalog::triangle_to_product(&z).unwrap();
        let f1 = squeeze::exact_squeezing(ExactModel::PuncturedDisc, &pt(&[w.coords()[0], w.coords()[1]])).unwrap().lower;
        let f2 = squeeze::exact_squeezing(ExactModel::PuncturedDisc, &pt(&[w.coords()[2], w.coords()[3]])).unwrap().lower;
        let b = squeeze::product_lower_bound(&[f1, f2]).unwrap();
        worst = worst.max((b - a / 2f64.sqrt()).abs());
        c.require((b - a / 2f64.sqrt()).abs() <= 1e-12, || format!("a={a}: bound {b}"));
        let rep = squeeze::hartogs_gap_report(a, &[1, 2, 5, 10, 100]).unwrap();
        c.require((rep.reference_bound - a * FRAC_1_SQRT_2).abs() <= 1e-12, || format!("a={a}: reference {}", rep.reference_bound));
        for row in &rep.rows {
            c.require(row.exceeds_reference && row.bound.lower >= rep.reference_bound - 1e-12, || {
                format!("a={a} j={}: bound {}", row.j, row.bound.lower)
            });
        }
    }
    c.note(format!("{} table entries exact, Hartogs bound error {worst:.1e}", table.len()));
    c
}

fn c9_semicontinuity() -> Check {
    let mut c = Check::new();
    let t = (0.5 / 2f64.sqrt()).exp();
    let cases = [
        ("ball:n=2", catalog::ball(2).unwrap(), pt(&[1.0, 0.0, 0.0, 0.0])),
        ("thullen:k=0.5", catalog::thullen_domain(0.5).unwrap(), pt(&[1.0, 0.0, 0.0, 0.0])),
        ("reinhardt", catalog::reinhardt_domain(), pt(&[t, 0.0, t, 0.0])),
    ];
    let radii = [0.05, 0.02, 0.01, 0.005];
    let mut out = Vec::new();
    for (name, d, base) in cases {
        let s = sampling::sample_interior(&d, 20_000, 42).unwrap();
        let opts = ScanOptions { samples_per_ring: 32, tolerance: 0.05, seed: 42, strategy: Strategy::default() };
        let rep = pinching::semicontinuity_scan(&d, &base, &radii, &s, &opts).unwrap();
        for ring in &rep.rings {
            c.require(ring.min_pinching >= rep.base_pinching - 0.05, || {
                format!("{name} radius {}: min {} vs base {}", ring.radius, ring.min_pinching, rep.base_pinching)
            });
        }
        c.require(rep.passed && rep.all_rings_passed, || format!("{name}: report not passed"));
        out.push(format!("{name}: base {:.3} liminf {:.3}", rep.base_pinching, rep.liminf_estimate));
    }
    c.note(out.join(", "));
    c
}

fn c10_determinism() -> Check {
    let mut c = Check::new();
    let bin = env!("CARGO_BIN_EXE_squeeze-lab");
    let runs: [&[&str]; 5] = [
        &["pinch", "--domain", "thullen:k=0.5", "--point", "1,0,0,0", "--samples", "20000", "--seed", "7"],
        &["geodesic", "--r-grid", "0.55:0.99:5", "--rho", "0.5", "--oracle", "--oracle-grid", "10000", "--format", "csv"],
        &["semicontinuity", "--domain", "ball:n=2", "--radii", "0.2,0.05", "--ring-samples", "8", "--samples", "5000"],
        &["verify-embedding", "--embedding", "moebius:a=0.5", "--r", "0.45,0.55", "--grid", "21", "--samples", "5000"],
        &["bounds", "--domain", "reinhardt-sheared", "--depth-grid", "1e-4:0.05:6", "--samples", "10000", "--format", "csv"],
    ];
    let mut n = 0;
    for args in runs {
        let go = |threads: Option<&str>| {
            let mut cmd = Command::new(bin);
            cmd.args(args);
            if let Some(t) = threads {
                cmd.env("SQUEEZE_LAB_THREADS", t);
            }
            cmd.output().expect("run squeeze-lab")
        };
        let a = go(None);
        let b = go(None);
        let single = go(Some("1"));
        c.require(a.status.success(), || format!("{args:?} failed: {}", String::from_utf8_lossy(&a.stderr)));
        c.require(a.stdout == b.stdout, || format!("{args:?}: repeated runs differ"));
        c.require(a.stdout == single.stdout, || format!("{args:?}: single-thread run differs"));
        c.require(!a.stdout.is_empty(), || format!("{args:?}: empty output"));
        n += 1;
    }
    c.note(format!("{n} commands byte-identical across repeats and thread counts"));
    c
}

fn main() {
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 10] = [
        ("geodesic-ball distance", c1_geodesic),
        ("Cartan-Hartogs Hessian", c2_cartan_hartogs),
        ("Thullen pinching", c3_thullen),
        ("Reinhardt example", c4_reinhardt),
        ("punctured-disc squeezing", c5_punctured_disc),
        ("limit theorems", c6_limits),
        ("comparison envelopes", c7_envelopes),
        ("product and limit constants", c8_products),
        ("semicontinuity", c9_semicontinuity),
        ("determinism", c10_determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let label = format!("criterion {}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|s| *s == (i + 1).to_string()) {
            continue;
        }
        let t = Instant::now();
        let check = f();
        let status = if check.ok { "PASS" } else { "FAIL" };
        println!("{label}: {status} [{name}] {} ({:.1?})", check.detail, t.elapsed());
        if !check.ok {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
