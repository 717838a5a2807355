//! Built-in example models.
//!
//! Each model carries its field definitions as DSL source strings plus a
//! sampling plan, so the CLI can emit it verbatim as a config file and the
//! test suites can build it directly.

use crate::expr::parse;
use crate::fields::{Chart, ConnectionField, GeneralConnection, LinearConnection, MetricField};
use crate::geometry::levi_civita;
use crate::verify::{SampleSpec, Tolerances};

#[derive(Debug, Clone)]
pub enum GalleryConnection {
    /// The metric-compatible torsion-free connection of the model metric.
    LeviCivita,
    /// Linear coefficients `K_l^u_m`, indexed `[l][u][m]`.
    Linear(Vec<Vec<Vec<String>>>),
    /// General coefficients `K_l^u(x, v)`, indexed `[l][u]`.
    General(Vec<Vec<String>>),
}

#[derive(Debug, Clone)]
pub struct GalleryModel {
    pub name: &'static str,
    pub dim: usize,
    pub coordinates: Vec<String>,
    pub guards: Vec<String>,
    /// Metric component sources, row major.
    pub metric: Vec<Vec<String>>,
    pub unit_power: i32,
    pub connection: GalleryConnection,
    pub base_box: Vec<(f64, f64)>,
    pub velocity_box: Vec<(f64, f64)>,
    pub points: usize,
    pub seed: u64,
    pub residual_tol: f64,
    pub nondegeneracy_tol: f64,
    /// Whether the full check suite is expected to pass for this model.
    pub expect_pass: bool,
}

impl GalleryModel {
    pub fn build_chart(&self) -> Chart {
        let guards = self
            .guards
            .iter()
            .map(|g| parse(g, self.dim).expect("gallery guard parses"))
            .collect();
        Chart::new(self.dim, self.coordinates.clone(), guards).expect("gallery chart is valid")
    }

    pub fn build_metric(&self) -> MetricField {
        let sources: Vec<&str> = self
            .metric
            .iter()
            .flat_map(|row| row.iter().map(|s| s.as_str()))
            .collect();
        MetricField::parse(self.dim, &sources, self.unit_power).expect("gallery metric is valid")
    }

    pub fn build_connection(&self) -> ConnectionField {
        match &self.connection {
            GalleryConnection::LeviCivita => levi_civita(&self.build_metric()),
            GalleryConnection::Linear(rows) => {
                let sources: Vec<&str> = rows
                    .iter()
                    .flat_map(|a| a.iter().flat_map(|b| b.iter().map(|s| s.as_str())))
                    .collect();
                ConnectionField::Linear(
                    LinearConnection::parse(self.dim, &sources)
                        .expect("gallery linear connection is valid"),
                )
            }
            GalleryConnection::General(rows) => {
                let sources: Vec<&str> = rows
                    .iter()
                    .flat_map(|a| a.iter().map(|s| s.as_str()))
                    .collect();
                ConnectionField::General(
                    GeneralConnection::parse(self.dim, &sources)
                        .expect("gallery general connection is valid"),
                )
            }
        }
    }

    pub fn sample_spec(&self) -> SampleSpec {
        SampleSpec {
            count: self.points,
            base_box: self.base_box.clone(),
            velocity_box: self.velocity_box.clone(),
            seed: self.seed,
        }
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            residual: self.residual_tol,
            nondegeneracy: self.nondegeneracy_tol,
        }
    }
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn diag_metric(entries: &[&str]) -> Vec<Vec<String>> {
    let n = entries.len();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| if r == c { entries[r].to_string() } else { "0".to_string() })
                .collect()
        })
        .collect()
}

fn zero_linear(n: usize) -> Vec<Vec<Vec<String>>> {
    vec![vec![vec!["0".to_string(); n]; n]; n]
}

fn defaults(model: &mut GalleryModel) {
    model.points = 30;
    model.seed = 42;
    model.residual_tol = 1e-8;
    model.nondegeneracy_tol = 1e-10;
}

fn minkowski_base(name: &'static str) -> GalleryModel {
    let mut m = GalleryModel {
        name,
        dim: 4,
        coordinates: strings(&["t", "x", "y", "z"]),
        guards: vec![],
        metric: diag_metric(&["-1", "1", "1", "1"]),
        unit_power: 2,
        connection: GalleryConnection::LeviCivita,
        base_box: vec![(-1.0, 1.0); 4],
        velocity_box: vec![(-2.0, 2.0); 4],
        points: 0,
        seed: 0,
        residual_tol: 0.0,
        nondegeneracy_tol: 0.0,
        expect_pass: true,
    };
    defaults(&mut m);
    m
}

fn minkowski_metric() -> GalleryModel {
    minkowski_base("minkowski-metric")
}

fn minkowski_zero_k() -> GalleryModel {
    let mut m = minkowski_base("minkowski-zero-K");
    m.connection = GalleryConnection::Linear(zero_linear(4));
    m
}

fn schwarzschild() -> GalleryModel {
    let mut m = GalleryModel {
        name: "schwarzschild",
        dim: 4,
        coordinates: strings(&["t", "r", "theta", "phi"]),
        // Exterior chart with margins: r > 2M + 0.1 (M = 1) and theta away
        // from the axis, so no sampled point degenerates.
        guards: strings(&["x1 - 2.1", "x2 - 0.1", "3.0415926 - x2"]),
        metric: vec![
            strings(&["-(1 - 2/x1)", "0", "0", "0"]),
            strings(&["0", "1/(1 - 2/x1)", "0", "0"]),
            strings(&["0", "0", "x1^2", "0"]),
            strings(&["0", "0", "0", "x1^2 * sin(x2)^2"]),
        ],
        unit_power: 2,
        connection: GalleryConnection::LeviCivita,
        base_box: vec![(-1.0, 1.0), (4.0, 20.0), (0.5, 2.6), (-3.0, 3.0)],
        velocity_box: vec![(-2.0, 2.0); 4],
        points: 0,
        seed: 0,
        residual_tol: 0.0,
        nondegeneracy_tol: 0.0,
        expect_pass: true,
    };
    defaults(&mut m);
    m
}

fn nonmetric_linear() -> GalleryModel {
    let mut m = minkowski_base("nonmetric-linear");
    let mut comps = zero_linear(4);
    comps[0][1][2] = "1".to_string();
    m.connection = GalleryConnection::Linear(comps);
    m.expect_pass = false;
    m
}

fn symmetric_nabla() -> GalleryModel {
    // Constant torsion-free connection A with A_0^0_0 = -1/2 on the flat
    // metric: nabla g is the fully symmetric tensor with (0,0,0)
    // component 1, nonzero but symmetric, so the induced structures are
    // still symplectic/Poisson.
    let mut m = minkowski_base("symmetric-nabla");
    let mut comps = zero_linear(4);
    comps[0][0][0] = "-0.5".to_string();
    m.connection = GalleryConnection::Linear(comps);
    m
}

fn nonlinear_general() -> GalleryModel {
    let mut m = minkowski_base("nonlinear-general");
    let mut comps = vec![vec!["0".to_string(); 4]; 4];
    comps[0][1] = "0.1*v0*v1".to_string();
    m.connection = GalleryConnection::General(comps);
    m.expect_pass = false;
    m
}

fn dim5_flat() -> GalleryModel {
    let mut m = GalleryModel {
        name: "dim5-flat",
        dim: 5,
        coordinates: strings(&["t", "x", "y", "z", "w"]),
        guards: vec![],
        metric: diag_metric(&["-1", "1", "1", "1", "1"]),
        unit_power: 2,
        connection: GalleryConnection::LeviCivita,
        base_box: vec![(-1.0, 1.0); 5],
        velocity_box: vec![(-2.0, 2.0); 5],
        points: 0,
        seed: 0,
        residual_tol: 0.0,
        nondegeneracy_tol: 0.0,
        expect_pass: true,
    };
    defaults(&mut m);
    m
}

/// All built-in models, in their canonical listing order.
pub fn all() -> Vec<GalleryModel> {
    vec![
        minkowski_metric(),
        minkowski_zero_k(),
        schwarzschild(),
        nonmetric_linear(),
        symmetric_nabla(),
        nonlinear_general(),
        dim5_flat(),
    ]
}

pub fn by_name(name: &str) -> Option<GalleryModel> {
    all().into_iter().find(|m| m.name == name)
}
