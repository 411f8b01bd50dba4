//! End-to-end acceptance run. Each criterion prints one PASS or FAIL line
//! with its runtime; the process exits non-zero if any failed.

#[path = "../../core/tests/common/mod.rs"]
mod common;
#[path = "../../core/tests/oracles/mod.rs"]
mod oracles;

use std::collections::{BTreeSet, HashMap};
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use http_body_util::BodyExt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tower::ServiceExt;

use micromap_core::glyphs::Shape;
use micromap_core::grouping::build_groups;
use micromap_core::model::GlyphKind;
use micromap_core::render::{ColumnReport, RenderedFigure};
use micromap_core::stats::{location_quotient, lowess_fit, pca_scores, LowessParams, LqInput};
use micromap_service::{router, ServiceConfig, SVG_TYPE};

struct Criterion {
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> String,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            name: "grouping oracle",
            limit: Some(Duration::from_secs(1)),
            run: grouping,
        },
        Criterion {
            name: "location quotient",
            limit: Some(Duration::from_secs(1)),
            run: lq_checks,
        },
        Criterion {
            name: "lowess",
            limit: Some(Duration::from_secs(30)),
            run: lowess,
        },
        Criterion {
            name: "software developer fixture",
            limit: Some(Duration::from_secs(5)),
            run: fixture,
        },
        Criterion {
            name: "figure structure",
            limit: Some(Duration::from_secs(10)),
            run: structure,
        },
        Criterion {
            name: "determinism",
            limit: None,
            run: determinism,
        },
        Criterion {
            name: "pca sort",
            limit: None,
            run: pca,
        },
        Criterion {
            name: "cli/service parity",
            limit: None,
            run: parity,
        },
    ];

    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.run));
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(detail) => match c.limit {
                Some(limit) if took > limit => {
                    (false, format!("{detail}; over the {limit:?} budget"))
                }
                _ => (true, detail),
            },
            Err(payload) => (false, panic_message(payload)),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} {:<28} {:>8.3}s  {}",
            if ok { "PASS" } else { "FAIL" },
            c.name,
            took.as_secs_f64(),
            detail
        );
    }
    let _ = panic::take_hook();
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else if let Some(s) = payload.downcast_ref::<&str>() {
        s.to_string()
    } else {
        "panicked".into()
    }
}

fn grouping() -> String {
    assert_eq!(build_groups(51).unwrap(), [5, 5, 5, 5, 5, 1, 5, 5, 5, 5, 5]);
    let ny = build_groups(62).unwrap();
    assert!(ny.iter().all(|&s| s == 4 || s == 5), "{ny:?}");
    assert_eq!(ny.iter().sum::<usize>(), 62);
    for n in 1..500 {
        let g = build_groups(n).unwrap();
        assert_eq!(g.iter().sum::<usize>(), n, "n={n}");
        assert!(g.iter().all(|&s| (1..=5).contains(&s)), "n={n}: {g:?}");
        assert!(g.iter().eq(g.iter().rev()), "n={n}: {g:?}");
        let singleton_median = g.len() % 2 == 1 && g[g.len() / 2] == 1;
        assert_eq!(singleton_median, n % 2 == 1, "n={n}: {g:?}");
    }
    format!("62 -> {ny:?}")
}

fn lq(a: f64, b: f64, c: f64, d: f64) -> f64 {
    location_quotient(LqInput {
        emp_cat_area: a,
        emp_total_area: b,
        emp_cat_nat: c,
        emp_total_nat: d,
    })
    .unwrap()
}

fn lq_checks() -> String {
    let q = lq(50.0, 1000.0, 200.0, 10000.0);
    assert!((q - 2.5).abs() <= 1e-12, "{q}");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let total = rng.gen_range(1.0..1e7);
        let a = total * rng.gen_range(0.0..1.0);
        let nat_total = rng.gen_range(1.0..1e9);
        let c = nat_total * rng.gen_range(1e-4..1.0);
        let k = rng.gen_range(1e-3..1e3);
        let q = lq(a, total, c, nat_total);
        let scaled = lq(a * k, total * k, c * k, nat_total * k);
        assert!((q - scaled).abs() <= 1e-12 * q.max(1.0), "{q} vs {scaled}");
        if a > 0.0 {
            let id = lq(a, total, a, total);
            assert!((id - 1.0).abs() <= 1e-12, "{id}");
        }
    }
    "10000 random inputs".into()
}

fn lowess() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let n = rng.gen_range(5..80);
        let (a, b): (f64, f64) = (rng.gen_range(-5.0..5.0), rng.gen_range(-3.0..3.0));
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                let x: f64 = rng.gen_range(-20.0..20.0);
                (x, a + b * x)
            })
            .collect();
        for iters in [0, 3] {
            let fit = lowess_fit(&pts, LowessParams::new(2.0 / 3.0, iters)).unwrap();
            for (p, f) in pts.iter().zip(fit) {
                assert!((p.1 - f).abs() < 1e-9, "line: {} vs {f}", p.1);
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let n = rng.gen_range(5..=200);
        let pts = oracles::random_points(&mut rng, n);
        for span in [2.0 / 3.0, 0.3] {
            if ((span * n as f64) - 1e-9).ceil() < 2.0 {
                continue;
            }
            for iters in [0, 3] {
                let got = lowess_fit(&pts, LowessParams::new(span, iters)).unwrap();
                let want = oracles::lowess_oracle(&pts, span, iters);
                for (g, w) in got.iter().zip(&want) {
                    worst = worst.max((g - w).abs());
                    assert!(
                        (g - w).abs() < 1e-8,
                        "case {case} n {n} span {span} iters {iters}: {g} vs {w}"
                    );
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let n = rng.gen_range(6..60);
        let pts = oracles::random_points(&mut rng, n);
        let c = rng.gen_range(-100.0..100.0);
        let a = rng.gen_range(0.01..50.0);
        for iters in [0, 3] {
            let params = LowessParams::new(2.0 / 3.0, iters);
            let base = lowess_fit(&pts, params).unwrap();
            let shifted: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x, y + c)).collect();
            let scaled: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x, a * y)).collect();
            let fs = lowess_fit(&shifted, params).unwrap();
            let fa = lowess_fit(&scaled, params).unwrap();
            for i in 0..n {
                assert!((fs[i] - (base[i] + c)).abs() < 1e-9, "shift");
                assert!(
                    (fa[i] - a * base[i]).abs() <= 1e-9 * (a * base[i]).abs().max(1.0),
                    "scale"
                );
            }
        }
    }
    format!("max oracle gap {worst:.1e}")
}

fn column(f: &RenderedFigure, glyph: GlyphKind) -> &ColumnReport {
    f.report
        .data_columns()
        .find(|c| c.glyph == Some(glyph))
        .unwrap()
}

fn fixture() -> String {
    let f = common::render(&common::recipe("fig3_4"));

    let boxes = column(&f, GlyphKind::Boxplot);
    let axis = boxes.axis.as_ref().unwrap();
    let mut xs = Vec::new();
    for m in &boxes.row("AL").unwrap().marks {
        match (&m.tag[..], &m.shape) {
            ("whisker", Shape::Line { x1, x2, .. }) => xs.extend([*x1, *x2]),
            ("box", Shape::Rect { x, w, .. }) => xs.extend([*x, x + w]),
            ("median", Shape::Line { x1, .. }) => xs.push(*x1),
            _ => {}
        }
    }
    let mut values: Vec<f64> = xs.iter().map(|&x| axis.value_at(x)).collect();
    values.sort_by(f64::total_cmp);
    values.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    let table = [29.58, 37.73, 49.39, 64.57, 81.29];
    assert_eq!(values.len(), 5, "{values:?}");
    for (v, t) in values.iter().zip(table) {
        assert!((v - t).abs() < 1e-6, "AL {v} vs {t}");
    }

    let ci = column(&f, GlyphKind::DotCi);
    let axis = ci.axis.as_ref().unwrap();
    let bar = ci
        .row("CA")
        .unwrap()
        .marks
        .iter()
        .find(|m| m.tag == "ci")
        .unwrap();
    let Shape::Line { x1, x2, .. } = bar.shape else {
        panic!("ci mark is not a line")
    };
    let (lo, hi) = (axis.value_at(x1.min(x2)), axis.value_at(x1.max(x2)));
    assert!(
        (lo - 82.45).abs() <= 0.01 && (hi - 84.65).abs() <= 0.01,
        "CA ci ({lo}, {hi})"
    );
    let refs: Vec<f64> = ci.references.iter().map(|r| r.value).collect();
    assert_eq!(refs, [66.0]);
    format!("CA ci ({lo:.2}, {hi:.2})")
}

fn structure() -> String {
    let ids = [
        "fig1_1", "fig2_1", "fig2_2", "fig2_3", "fig3_1", "fig3_3", "fig3_4",
    ];
    for id in ids {
        let r = common::recipe(id);
        let f = common::render(&r);
        let (panels, rows) = if r.atlas == "ny-counties" {
            (14, 62)
        } else {
            (11, 51)
        };
        assert_eq!(f.report.panels.len(), panels, "{id} panels");
        assert_eq!(f.report.rows.len(), rows, "{id} rows");

        let mut seen: HashMap<&str, usize> = HashMap::new();
        for p in &f.report.panels {
            for h in &p.highlighted {
                *seen.entry(h).or_default() += 1;
            }
        }
        for row in &f.report.rows {
            assert_eq!(seen.get(row.id.as_str()), Some(&1), "{id} {}", row.id);
        }
        assert_eq!(seen.len(), rows, "{id} highlights");

        for c in f
            .report
            .data_columns()
            .filter(|c| c.glyph == Some(GlyphKind::Scatter))
        {
            let points = |i: usize| {
                c.panels[i]
                    .marks
                    .iter()
                    .filter(|m| m.tag.starts_with("point-"))
                    .count()
            };
            let total = rows - c.missing.len();
            for (i, g) in f.report.groups.iter().enumerate() {
                assert_eq!(points(i), total, "{id} panel {i} point count");
                let members: BTreeSet<&str> = g.ids.iter().map(String::as_str).collect();
                let present = g.ids.iter().filter(|m| !c.missing.contains(m)).count();
                let filled: Vec<&str> = c.panels[i]
                    .marks
                    .iter()
                    .filter(|m| m.tag == "point-filled")
                    .filter_map(|m| m.region.as_deref())
                    .collect();
                assert_eq!(filled.len(), present, "{id} panel {i} filled");
                assert!(filled.iter().all(|r| members.contains(r)), "{id} panel {i}");
            }
        }
    }
    format!("{} recipes", ids.len())
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden")
}

fn determinism() -> String {
    let mut n = 0;
    for entry in std::fs::read_dir(golden_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("svg") {
            continue;
        }
        let id = path.file_stem().unwrap().to_str().unwrap();
        let r = common::recipe(id);
        let a = common::render(&r).svg;
        let b = common::render(&r).svg;
        assert!(a == b, "{id} differs between runs");
        let golden = std::fs::read_to_string(&path)
            .unwrap()
            .replace("\r\n", "\n");
        assert!(
            a.replace("\r\n", "\n") == golden,
            "{id} differs from its golden file"
        );
        n += 1;
    }
    assert!(n >= 3, "only {n} golden files");
    format!("{n} golden files")
}

fn pca() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..50 {
        let rows = oracles::random_matrix(&mut rng, 20, 4);
        let scores: Vec<Vec<f64>> = (1..=4)
            .map(|k| pca_scores(&oracles::names(4), &rows, k).unwrap())
            .collect();
        for (k, got) in scores.iter().enumerate() {
            let want = oracles::pca_oracle(&rows, k + 1);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-8, "component {}: {g} vs {w}", k + 1);
            }
        }
        for a in 0..4 {
            for b in a + 1..4 {
                let dot: f64 = scores[a].iter().zip(&scores[b]).map(|(x, y)| x * y).sum();
                assert!(dot.abs() < 1e-8, "components {a} {b}: {dot}");
            }
        }
    }
    let rows: Vec<Vec<f64>> = [3.0, 7.0, 1.0, 9.0, 5.0].iter().map(|&v| vec![v]).collect();
    let got = pca_scores(&oracles::names(1), &rows, 1).unwrap();
    let z = oracles::standardized(&rows);
    for (i, g) in got.iter().enumerate() {
        assert!(
            (g - z[(i, 0)]).abs() < 1e-12,
            "single column {g} vs {}",
            z[(i, 0)]
        );
    }
    "50 random 20x4 matrices".into()
}

fn parity() -> String {
    let rt = tokio::runtime::Runtime::new().unwrap();
    let app = router(&ServiceConfig {
        root: common::data_dir(),
        cors_origins: Vec::new(),
    });
    let tmp = tempfile::tempdir().unwrap();
    let ids = ["fig2_2", "fig2_3", "fig3_4"];
    for id in ids {
        let r = common::recipe(id);
        let out = tmp.path().join(format!("{id}.svg"));
        let status = Command::new(env!("CARGO_BIN_EXE_micromap"))
            .env_remove("MICROMAP_DATA_ROOT")
            .arg("--root")
            .arg(common::data_dir())
            .args(["render", "--figure", id, "--out"])
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success(), "{id}: cli exited {status}");
        let cli = std::fs::read(&out).unwrap();

        let spec: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(common::data_dir().join("figures").join(&r.spec)).unwrap(),
        )
        .unwrap();
        let body = serde_json::json!({ "dataset": r.dataset, "atlas": r.atlas, "spec": spec });
        let req = Request::post("/api/render")
            .header(header::CONTENT_TYPE, "application/json")
            .body(Body::from(body.to_string()))
            .unwrap();
        let (status, content_type, api) = rt.block_on(async {
            let res = app.clone().oneshot(req).await.unwrap();
            let status = res.status();
            let ct = res.headers()[header::CONTENT_TYPE]
                .to_str()
                .unwrap()
                .to_string();
            let bytes = res.into_body().collect().await.unwrap().to_bytes().to_vec();
            (status, ct, bytes)
        });
        assert_eq!(status, StatusCode::OK, "{id}");
        assert_eq!(content_type, SVG_TYPE, "{id}");
        assert!(cli == api, "{id}: cli and service bytes differ");
    }
    format!("{} specs, no web client involved", ids.len())
}
