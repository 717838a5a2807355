//! Command implementations for the `upsilon` binary, exposed as a library
//! so integration tests can drive them directly.
//!
//! Exit codes: 0 all applicable checks pass; 1 verification failure; 2
//! config or usage error; 3 internal inconsistency (an equivalence suite
//! whose members disagree — that signals a bug in the tool, never in the
//! model).

pub mod config;

use std::fmt::Write as _;

pub use config::{config_hash, emit, ComponentArray, ConfigError, Model, ModelConfig};

use upsilon_core::fields::{Antisym2, Antisym3, TangentPoint, Tensor3, Tensor4};
use upsilon_core::gallery;
use upsilon_core::geometry::{contract_lambda_upsilon, PointOps};
use upsilon_core::verify::{render_machine, render_text, Suite};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Machine,
}

#[derive(Debug, Clone, Default)]
pub struct GlobalOpts {
    pub tol: Option<f64>,
    pub points: Option<usize>,
    pub seed: Option<u64>,
    pub format: OutputFormat,
}

/// The built-in gallery as emittable configs.
pub fn gallery_names() -> Vec<&'static str> {
    gallery::all().iter().map(|m| m.name).collect()
}

pub fn gallery_config(name: &str) -> Option<ModelConfig> {
    let m = gallery::by_name(name)?;
    let components = match &m.connection {
        gallery::GalleryConnection::LeviCivita => None,
        gallery::GalleryConnection::Linear(rows) => Some(ComponentArray::Linear(rows.clone())),
        gallery::GalleryConnection::General(rows) => Some(ComponentArray::General(rows.clone())),
    };
    let kind = match &m.connection {
        gallery::GalleryConnection::LeviCivita => "levi-civita",
        gallery::GalleryConnection::Linear(_) => "linear",
        gallery::GalleryConnection::General(_) => "general",
    };
    Some(ModelConfig {
        name: m.name.to_string(),
        chart: config::ChartSection {
            dim: m.dim,
            coordinates: m.coordinates.clone(),
            guards: m.guards.clone(),
        },
        metric: config::MetricSection {
            unit_power: m.unit_power,
            rows: m.metric.clone(),
        },
        connection: config::ConnectionSection {
            kind: kind.to_string(),
            components,
        },
        sampling: config::SamplingSection {
            points: m.points,
            seed: m.seed,
            base_box: m.base_box.iter().map(|b| [b.0, b.1]).collect(),
            velocity_box: m.velocity_box.iter().map(|b| [b.0, b.1]).collect(),
        },
        tolerances: config::ToleranceSection {
            residual: m.residual_tol,
            nondegeneracy: m.nondegeneracy_tol,
        },
    })
}

fn load_model(path: &std::path::Path, opts: &GlobalOpts) -> Result<(Model, String), String> {
    let bytes = std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let hash = config_hash(&bytes);
    let source = String::from_utf8(bytes).map_err(|e| format!("config is not UTF-8: {e}"))?;
    let config: ModelConfig = source.parse().map_err(|e: ConfigError| e.to_string())?;
    let mut model = config.build().map_err(|e| e.to_string())?;
    if let Some(tol) = opts.tol {
        model.tolerances.residual = tol;
    }
    if let Some(points) = opts.points {
        model.sample_spec.count = points;
    }
    if let Some(seed) = opts.seed {
        model.sample_spec.seed = seed;
    }
    Ok((model, hash))
}

/// `check`: run the applicable verification suites over the config.
pub fn run_check(path: &std::path::Path, opts: &GlobalOpts) -> (i32, String) {
    let (model, hash) = match load_model(path, opts) {
        Ok(x) => x,
        Err(msg) => return (EXIT_CONFIG, format!("error: {msg}\n")),
    };
    let suite = match Suite::new(
        &model.chart,
        &model.metric,
        &model.connection,
        &model.sample_spec,
        model.tolerances,
    ) {
        Ok(s) => s,
        Err(e) => return (EXIT_CONFIG, format!("error: {e}\n")),
    };
    let report = match suite.run(
        &model.name,
        model.chart.names().to_vec(),
        model.sample_spec.seed,
        Some(hash),
    ) {
        Ok(r) => r,
        Err(e) => return (EXIT_CONFIG, format!("error: {e}\n")),
    };
    let rendered = match opts.format {
        OutputFormat::Text => render_text(&report),
        OutputFormat::Machine => render_machine(&report),
    };
    let code = if !report.all_consistent() {
        EXIT_INCONSISTENT
    } else if report.all_pass() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };
    (code, rendered)
}

fn parse_csv(text: &str, dim: usize, what: &str) -> Result<Vec<f64>, String> {
    let values: Result<Vec<f64>, _> = text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    let values = values.map_err(|e| format!("{what}: {e}"))?;
    if values.len() != dim {
        return Err(format!("{what}: expected {dim} comma-separated values"));
    }
    Ok(values)
}

fn label(i: usize, names: &[String]) -> String {
    let n = names.len();
    if i < n {
        names[i].clone()
    } else {
        format!("{}'", names[i - n])
    }
}

const PRINT_FLOOR: f64 = 1e-13;

fn render_antisym2(a: &Antisym2, names: &[String], out: &mut String) {
    let w = a.width();
    let mut shown = 0usize;
    let mut suppressed = 0usize;
    for i in 0..w {
        for j in (i + 1)..w {
            let v = a.get(i, j);
            if v == 0.0 {
                continue;
            }
            if v.abs() <= PRINT_FLOOR {
                suppressed += 1;
                continue;
            }
            let _ = writeln!(out, "  [{}, {}] = {v}", label(i, names), label(j, names));
            shown += 1;
        }
    }
    finish_listing(out, shown, suppressed);
}

fn render_antisym3(a: &Antisym3, names: &[String], out: &mut String) {
    let w = a.width();
    let mut shown = 0usize;
    let mut suppressed = 0usize;
    for i in 0..w {
        for j in (i + 1)..w {
            for k in (j + 1)..w {
                let v = a.get(i, j, k);
                if v == 0.0 {
                    continue;
                }
                if v.abs() <= PRINT_FLOOR {
                    suppressed += 1;
                    continue;
                }
                let _ = writeln!(
                    out,
                    "  [{}, {}, {}] = {v}",
                    label(i, names),
                    label(j, names),
                    label(k, names)
                );
                shown += 1;
            }
        }
    }
    finish_listing(out, shown, suppressed);
}

fn render_tensor3(t: &Tensor3, names: &[String], out: &mut String) {
    let n = t.n;
    let mut shown = 0usize;
    let mut suppressed = 0usize;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = t.get(a, b, c);
                if v == 0.0 {
                    continue;
                }
                if v.abs() <= PRINT_FLOOR {
                    suppressed += 1;
                    continue;
                }
                let _ = writeln!(out, "  [{}, {}, {}] = {v}", names[a], names[b], names[c]);
                shown += 1;
            }
        }
    }
    finish_listing(out, shown, suppressed);
}

fn render_tensor4(t: &Tensor4, names: &[String], out: &mut String) {
    let n = t.n;
    let mut shown = 0usize;
    let mut suppressed = 0usize;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let v = t.get(a, b, c, d);
                    if v == 0.0 {
                        continue;
                    }
                    if v.abs() <= PRINT_FLOOR {
                        suppressed += 1;
                        continue;
                    }
                    let _ = writeln!(
                        out,
                        "  [{}, {}, {}, {}] = {v}",
                        names[a], names[b], names[c], names[d]
                    );
                    shown += 1;
                }
            }
        }
    }
    finish_listing(out, shown, suppressed);
}

fn finish_listing(out: &mut String, shown: usize, suppressed: usize) {
    if shown == 0 && suppressed == 0 {
        let _ = writeln!(out, "  all components zero");
    } else if suppressed > 0 {
        let _ = writeln!(
            out,
            "  ({suppressed} entries below {PRINT_FLOOR:e} not shown)"
        );
    }
}

/// `eval`: print one object at one tangent point.
pub fn run_eval(
    path: &std::path::Path,
    object: &str,
    x_text: &str,
    v_text: Option<&str>,
    opts: &GlobalOpts,
) -> (i32, String) {
    let (model, _) = match load_model(path, opts) {
        Ok(x) => x,
        Err(msg) => return (EXIT_CONFIG, format!("error: {msg}\n")),
    };
    let n = model.chart.dim();
    let x = match parse_csv(x_text, n, "--x") {
        Ok(v) => v,
        Err(msg) => return (EXIT_CONFIG, format!("error: {msg}\n")),
    };
    let v = match v_text {
        Some(t) => match parse_csv(t, n, "--v") {
            Ok(v) => v,
            Err(msg) => return (EXIT_CONFIG, format!("error: {msg}\n")),
        },
        None => vec![0.0; n],
    };
    if !model.chart.contains(&x) {
        return (
            EXIT_CONFIG,
            format!("error: point {x:?} violates the chart guards\n"),
        );
    }
    let p = match TangentPoint::new(x, v) {
        Ok(p) => p,
        Err(e) => return (EXIT_CONFIG, format!("error: {e}\n")),
    };
    let ops = match PointOps::new(&model.metric, &model.connection, &p) {
        Ok(o) => o,
        Err(e) => return (EXIT_CONFIG, format!("error: {e}\n")),
    };

    let names = model.chart.names().to_vec();
    let mut out = String::new();
    let object_norm = object.to_ascii_lowercase();
    let header = |out: &mut String, name: &str, unit: i32, slots: &str| {
        let _ = writeln!(
            out,
            "{name} at x = {:?}, v = {:?} (length unit power {unit})",
            p.x, p.xdot
        );
        let _ = writeln!(out, "slots: {slots}");
    };
    match object_norm.as_str() {
        "upsilon" => {
            let u = ops.upsilon();
            header(&mut out, "upsilon", u.length_unit_power, "antisymmetric covector pair; primed = fiber");
            render_antisym2(u.as_d2(), &names, &mut out);
        }
        "lambda" => {
            let l = ops.lambda();
            header(&mut out, "lambda", l.length_unit_power, "antisymmetric vector pair; primed = fiber");
            render_antisym2(l.as_d2(), &names, &mut out);
        }
        "d-upsilon" => {
            let d = ops.d_upsilon();
            header(&mut out, "d-upsilon", d.length_unit_power, "antisymmetric covector triple; primed = fiber");
            render_antisym3(d.as_d3(), &names, &mut out);
        }
        "schouten" => {
            let s = ops.schouten();
            header(&mut out, "schouten", s.length_unit_power, "antisymmetric vector triple; primed = fiber");
            render_antisym3(s.as_d3(), &names, &mut out);
        }
        "torsion" => {
            let t = ops.torsion();
            header(&mut out, "torsion", 0, "antisymmetric base pair; third slot is the output direction");
            render_tensor3(&t, &names, &mut out);
        }
        "curvature" => {
            if model.connection.is_linear() {
                let r = ops.curvature_linear().expect("connection is linear");
                header(&mut out, "curvature", 0, "antisymmetric base pair; output direction; argument direction");
                render_tensor4(&r, &names, &mut out);
            } else {
                let r = ops.curvature();
                header(&mut out, "curvature", 0, "antisymmetric base pair; output direction");
                render_tensor3(&r, &names, &mut out);
            }
        }
        "nabla-g" => match ops.nabla_g() {
            Ok(nab) => {
                header(&mut out, "nabla-g", nab.length_unit_power, "derivative direction; symmetric metric pair");
                render_tensor3(&nab.tensor, &names, &mut out);
            }
            Err(e) => return (EXIT_CONFIG, format!("error: {e}\n")),
        },
        "d-k-g" => match ops.d_k_g() {
            Ok(d) => {
                header(&mut out, "d-K-g", d.length_unit_power, "covector slot; antisymmetric base pair");
                render_tensor3(&d.tensor, &names, &mut out);
            }
            Err(e) => return (EXIT_CONFIG, format!("error: {e}\n")),
        },
        "lie-k-gflat" => {
            let l = ops.lie_k_gflat();
            header(&mut out, "lie-K-gflat", l.length_unit_power, "antisymmetric covector pair; primed = fiber");
            render_antisym2(l.as_d2(), &names, &mut out);
        }
        "contraction" => {
            let c = contract_lambda_upsilon(&ops.lambda(), &ops.upsilon())
                .expect("same-point contraction");
            let _ = writeln!(out, "contraction = {c} (length unit power 0)");
        }
        other => {
            return (
                EXIT_CONFIG,
                format!(
                    "error: unknown object '{other}' (expected upsilon, lambda, d-upsilon, \
                     schouten, torsion, curvature, nabla-g, d-K-g, lie-K-gflat or contraction)\n"
                ),
            )
        }
    }
    (EXIT_PASS, out)
}

/// `examples list`.
pub fn run_examples_list() -> (i32, String) {
    let mut out = String::new();
    for name in gallery_names() {
        let _ = writeln!(out, "{name}");
    }
    (EXIT_PASS, out)
}

/// `examples emit <name>`: returns the canonical config text.
pub fn run_examples_emit(name: &str) -> (i32, String) {
    match gallery_config(name) {
        Some(config) => (EXIT_PASS, emit(&config)),
        None => (
            EXIT_CONFIG,
            format!(
                "error: unknown example '{name}' (known: {})\n",
                gallery_names().join(", ")
            ),
        ),
    }
}
