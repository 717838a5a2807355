//! Frozen golden values for the pointwise operations.
//!
//! Every golden here was produced by an independent brute-force route
//! before being frozen: hand expansion of the defining wedge monomials,
//! finite differences of plain value evaluations, or both. The oracle
//! code lives in this file and deliberately avoids the closed-form
//! derivative paths it checks.

use upsilon_core::fields::{
    ConnectionField, GeneralConnection, LinearConnection, MetricField, TangentPoint, Tensor3,
};
use upsilon_core::gallery;
use upsilon_core::geometry::{contract_lambda_upsilon, levi_civita, PointOps};
use upsilon_core::verify::{fd_d_upsilon, fd_residual_mixed, fd_schouten, FD_STEP};

fn tangent(x: &[f64], v: &[f64]) -> TangentPoint {
    TangentPoint::new(x.to_vec(), v.to_vec()).unwrap()
}

fn linear_single(n: usize, l: usize, u: usize, m: usize, src: &str) -> ConnectionField {
    let mut sources = vec!["0".to_string(); n * n * n];
    sources[(l * n + u) * n + m] = src.to_string();
    let refs: Vec<&str> = sources.iter().map(|s| s.as_str()).collect();
    ConnectionField::Linear(LinearConnection::parse(n, &refs).unwrap())
}

fn minkowski() -> MetricField {
    gallery::by_name("minkowski-metric").unwrap().build_metric()
}

/// Brute-force metric-compatible coefficients assembled directly from
/// metric jets and the inverse, outside the connection code path.
fn oracle_metric_connection(g: &MetricField, x: &[f64]) -> Vec<f64> {
    let n = g.dim();
    let p = TangentPoint::new(x.to_vec(), vec![0.0; n]).unwrap();
    let met = g.eval(&p).unwrap();
    let mut c = vec![0.0; n * n * n];
    for mu in 0..n {
        for l in 0..n {
            for v in 0..n {
                let mut acc = 0.0;
                for r in 0..n {
                    acc +=
                        met.ginv(l, r) * (met.dg(mu, r, v) + met.dg(v, r, mu) - met.dg(r, mu, v));
                }
                c[(mu * n + l) * n + v] = -0.5 * acc;
            }
        }
    }
    c
}

#[test]
fn metric_connection_polar_form_golden() {
    // Flat metric in polar-style coordinates: g = diag(-1, 1, x1^2).
    // Frozen from the brute-force coefficient assembly at x1 = 2:
    //   K_1^2_2 = -1/x1 = -0.5,  K_2^2_1 = -0.5,  K_2^1_2 = +x1 = 2.
    let g = MetricField::parse(3, &["-1", "0", "0", "0", "1", "0", "0", "0", "x1^2"], 2).unwrap();
    let x = [0.0, 2.0, 0.7];
    let oracle = oracle_metric_connection(&g, &x);
    let idx = |mu: usize, l: usize, v: usize| (mu * 3 + l) * 3 + v;
    assert!((oracle[idx(1, 2, 2)] - (-0.5)).abs() < 1e-14);
    assert!((oracle[idx(2, 2, 1)] - (-0.5)).abs() < 1e-14);
    assert!((oracle[idx(2, 1, 2)] - 2.0).abs() < 1e-14);

    let k = levi_civita(&g);
    let lin = k.as_linear().unwrap().eval_base(&x).unwrap();
    for mu in 0..3 {
        for l in 0..3 {
            for v in 0..3 {
                assert!(
                    (lin.c(mu, l, v) - oracle[idx(mu, l, v)]).abs() < 1e-14,
                    "component ({mu},{l},{v})"
                );
            }
        }
    }
}

#[test]
fn metric_connection_schwarzschild_golden() {
    // Exterior chart, M = 1, r = 10: K_0^1_0 = -(1 - 2/r)/r^2 = -0.008.
    let g = gallery::by_name("schwarzschild").unwrap().build_metric();
    let x = [0.0, 10.0, 1.2, 0.3];
    let oracle = oracle_metric_connection(&g, &x);
    let idx = |mu: usize, l: usize, v: usize| (mu * 4 + l) * 4 + v;
    assert!((oracle[idx(0, 1, 0)] - (-0.008)).abs() < 1e-15);

    let k = levi_civita(&g);
    let lin = k.as_linear().unwrap().eval_base(&x).unwrap();
    assert!((lin.c(0, 1, 0) - (-0.008)).abs() < 1e-15);

    // Coefficient derivatives against finite differences of the oracle.
    let h = FD_STEP;
    let mut max_dev = 0.0f64;
    for d in 0..4 {
        let mut xp = x;
        let mut xm = x;
        xp[d] += h;
        xm[d] -= h;
        let cp = oracle_metric_connection(&g, &xp);
        let cm = oracle_metric_connection(&g, &xm);
        for i in 0..64 {
            let fd = (cp[i] - cm[i]) / (2.0 * h);
            let (mu, rest) = (i / 16, i % 16);
            let (l, v) = (rest / 4, rest % 4);
            max_dev = max_dev.max((lin.dc(d, mu, l, v) - fd).abs());
        }
    }
    assert!(max_dev < 1e-7, "dc vs FD oracle: {max_dev:e}");
}

#[test]
fn metric_connection_vanishes_on_flat_metrics() {
    let g = minkowski();
    let k = levi_civita(&g);
    let lin = k.as_linear().unwrap().eval_base(&[0.3, -0.5, 2.0, 1.0]).unwrap();
    for mu in 0..4 {
        for l in 0..4 {
            for v in 0..4 {
                assert_eq!(lin.c(mu, l, v), 0.0);
            }
        }
    }
}

#[test]
fn torsion_single_coefficient_golden() {
    // K_0^2_1 = 1: the wedge expansion puts +1 at T(0,1,2), -1 at T(1,0,2).
    // Frozen from the fiber-derivative finite-difference oracle.
    let g = minkowski();
    let k = linear_single(4, 0, 2, 1, "1");
    let p = tangent(&[0.0; 4], &[0.3, -0.7, 1.1, 0.9]);
    let ops = PointOps::new(&g, &k, &p).unwrap();
    let t = ops.torsion();
    assert_eq!(t.get(0, 1, 2), 1.0);
    assert_eq!(t.get(1, 0, 2), -1.0);

    // Oracle: fiber-d_m K_l^u by central differences, antisymmetrized.
    let h = FD_STEP;
    let mut a = Tensor3::zeros(4);
    for m in 0..4 {
        let mut vp = p.xdot.clone();
        let mut vm = p.xdot.clone();
        vp[m] += h;
        vm[m] -= h;
        let kp = k.value_at(&p.x, &vp).unwrap();
        let km = k.value_at(&p.x, &vm).unwrap();
        for l in 0..4 {
            for u in 0..4 {
                a.set(l, m, u, (kp[l * 4 + u] - km[l * 4 + u]) / (2.0 * h));
            }
        }
    }
    for l in 0..4 {
        for m in 0..4 {
            for u in 0..4 {
                let fd = a.get(l, m, u) - a.get(m, l, u);
                assert!((t.get(l, m, u) - fd).abs() < 1e-9, "({l},{m},{u})");
            }
        }
    }

    // Linear-case torsion agrees and the metric-compatible connection is
    // torsion free.
    let tl = ops.torsion_linear().unwrap();
    for l in 0..4 {
        for m in 0..4 {
            for u in 0..4 {
                assert_eq!(t.get(l, m, u), tl.get(l, m, u));
            }
        }
    }
    let sch = gallery::by_name("schwarzschild").unwrap();
    let gs = sch.build_metric();
    let ks = levi_civita(&gs);
    let ps = tangent(&[0.0, 7.0, 1.4, 0.2], &[1.0, 0.5, -0.5, 2.0]);
    assert!(PointOps::new(&gs, &ks, &ps).unwrap().torsion().max_abs() < 1e-14);
}

#[test]
fn torsion_quadratic_connection_golden() {
    // K_l^u = 0.1 v^u v_l (index lowered with the flat metric):
    // T(l,m,u) = 0.1 (delta^u_m v_l - delta^u_l v_m), frozen analytically.
    let g = minkowski();
    let mut sources = vec![String::new(); 16];
    for l in 0..4 {
        for u in 0..4 {
            let sign = if l == 0 { "-" } else { "" };
            sources[l * 4 + u] = format!("{sign}0.1*v{u}*v{l}");
        }
    }
    let refs: Vec<&str> = sources.iter().map(|s| s.as_str()).collect();
    let k = ConnectionField::General(GeneralConnection::parse(4, &refs).unwrap());
    let p = tangent(&[0.0; 4], &[0.3, -0.7, 1.1, 0.9]);
    let t = PointOps::new(&g, &k, &p).unwrap().torsion();
    let vlow = |i: usize| if i == 0 { -p.xdot[0] } else { p.xdot[i] };
    for l in 0..4 {
        for m in 0..4 {
            for u in 0..4 {
                let expect = 0.1
                    * ((if u == m { vlow(l) } else { 0.0 })
                        - (if u == l { vlow(m) } else { 0.0 }));
                assert!((t.get(l, m, u) - expect).abs() < 1e-15, "({l},{m},{u})");
            }
        }
    }
    assert_eq!(t.get(0, 1, 1), -0.03);
}

#[test]
fn curvature_zero_cases() {
    // Zero connection and flat-metric compatible connection: R = 0.
    let g = minkowski();
    let p = tangent(&[0.1, 0.2, 0.3, 0.4], &[1.0, -1.0, 0.5, 0.25]);
    let k0 = linear_single(4, 0, 0, 0, "0");
    assert_eq!(PointOps::new(&g, &k0, &p).unwrap().curvature().max_abs(), 0.0);
    let klc = levi_civita(&g);
    assert_eq!(PointOps::new(&g, &klc, &p).unwrap().curvature().max_abs(), 0.0);
}

#[test]
fn curvature_flat_in_curvilinear_coordinates_vanishes() {
    // Flat spacetime in spherical spatial coordinates: curvature of the
    // metric-compatible connection is zero in any coordinates.
    let g = MetricField::parse(
        4,
        &[
            "-1", "0", "0", "0", //
            "0", "1", "0", "0", //
            "0", "0", "x1^2", "0", //
            "0", "0", "0", "x1^2 * sin(x2)^2",
        ],
        2,
    )
    .unwrap();
    let k = levi_civita(&g);
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
    for _ in 0..20 {
        let x = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(0.5..3.0),
            rng.gen_range(0.4..2.7),
            rng.gen_range(-3.0..3.0),
        ];
        let v = [
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        ];
        let p = tangent(&x, &v);
        let ops = PointOps::new(&g, &k, &p).unwrap();
        assert!(ops.curvature().max_abs() < 1e-9, "at {x:?}");
        assert!(ops.curvature_linear().unwrap().max_abs() < 1e-9);
    }
}

#[test]
fn curvature_schwarzschild_golden() {
    // Frozen at x = (0, 10, 1.2, 0.3) from a finite-difference assembly
    // of the displayed linear curvature over the brute-force connection:
    //   R(0,1,1,0) = 0.0032, R(0,1,0,1) = 0.005, R(2,3,3,2) = -0.4.
    let g = gallery::by_name("schwarzschild").unwrap().build_metric();
    let k = levi_civita(&g);
    let x = [0.0, 10.0, 1.2, 0.3];
    let p = tangent(&x, &[0.0; 4]);
    let r = PointOps::new(&g, &k, &p).unwrap().curvature_linear().unwrap();
    assert!((r.get(0, 1, 1, 0) - 0.0032).abs() < 1e-12);
    assert!((r.get(0, 1, 0, 1) - 0.005).abs() < 1e-12);
    assert!((r.get(2, 3, 3, 2) - (-0.4)).abs() < 1e-12);

    // Oracle: same components from FD derivatives of the brute-force
    // coefficients.
    let h = FD_STEP;
    let c0 = oracle_metric_connection(&g, &x);
    let n = 4;
    let cidx = |mu: usize, l: usize, v: usize| (mu * n + l) * n + v;
    let mut dc = vec![0.0; n * n * n * n];
    for d in 0..n {
        let mut xp = x;
        let mut xm = x;
        xp[d] += h;
        xm[d] -= h;
        let cp = oracle_metric_connection(&g, &xp);
        let cm = oracle_metric_connection(&g, &xm);
        for i in 0..n * n * n {
            dc[d * n * n * n + i] = (cp[i] - cm[i]) / (2.0 * h);
        }
    }
    let half = |l: usize, m: usize, u: usize, s: usize| {
        let mut acc = dc[l * n * n * n + cidx(m, u, s)];
        for rho in 0..n {
            acc += c0[cidx(l, rho, s)] * c0[cidx(m, u, rho)];
        }
        -2.0 * acc
    };
    for (l, m, u, s) in [(0, 1, 1, 0), (0, 1, 0, 1), (2, 3, 3, 2), (1, 2, 2, 1)] {
        let oracle = half(l, m, u, s) - half(m, l, u, s);
        assert!(
            (r.get(l, m, u, s) - oracle).abs() < 1e-6,
            "({l},{m},{u},{s}): {} vs {}",
            r.get(l, m, u, s),
            oracle
        );
    }
}

#[test]
fn curvature_linear_contraction_matches_general() {
    // R(l,m,u,s) v^s reproduces the general curvature of the promoted
    // connection, on 50 random linear connections.
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
    let g = minkowski();
    for trial in 0..50 {
        let k = ConnectionField::Linear(upsilon_core::verify::random::random_linear_connection(
            &mut rng, 4, 1.0,
        ));
        let p = tangent(
            &[0.2, -0.1, 0.4, -0.3],
            &[1.3, 0.6, -0.9, 0.2],
        );
        let ops = PointOps::new(&g, &k, &p).unwrap();
        let rl = ops.curvature_linear().unwrap();
        let rg = ops.curvature();
        for l in 0..4 {
            for m in 0..4 {
                for u in 0..4 {
                    let mut acc = 0.0;
                    for s in 0..4 {
                        acc += rl.get(l, m, u, s) * p.xdot[s];
                    }
                    assert!(
                        (acc - rg.get(l, m, u)).abs() < 1e-10,
                        "trial {trial} ({l},{m},{u})"
                    );
                }
            }
        }
    }
}

#[test]
fn upsilon_minkowski_zero_connection() {
    let g = minkowski();
    let k = linear_single(4, 0, 0, 0, "0");
    let p = tangent(&[0.0; 4], &[1.0, 2.0, 3.0, 4.0]);
    let u = PointOps::new(&g, &k, &p).unwrap().upsilon();
    let a = u.as_d2();
    let eta = |i: usize| if i == 0 { -1.0 } else { 1.0 };
    for l in 0..4 {
        for m in 0..4 {
            let expect = if l == m { eta(l) } else { 0.0 };
            assert_eq!(a.get(4 + l, m), expect);
            assert_eq!(a.get(m, 4 + l), -expect);
            assert_eq!(a.get(l, m), 0.0);
            assert_eq!(a.get(4 + l, 4 + m), 0.0);
        }
    }
    assert_eq!(u.length_unit_power, 2);
}

#[test]
fn lambda_minkowski_zero_connection() {
    let g = minkowski();
    let k = linear_single(4, 0, 0, 0, "0");
    let p = tangent(&[0.0; 4], &[1.0, 2.0, 3.0, 4.0]);
    let lam = PointOps::new(&g, &k, &p).unwrap().lambda();
    let a = lam.as_d2();
    let eta = |i: usize| if i == 0 { -1.0 } else { 1.0 };
    for l in 0..4 {
        for m in 0..4 {
            let expect = if l == m { eta(l) } else { 0.0 };
            assert_eq!(a.get(l, 4 + m), expect);
            assert_eq!(a.get(4 + m, l), -expect);
            assert_eq!(a.get(4 + l, 4 + m), 0.0);
        }
    }
    assert_eq!(lam.length_unit_power, -2);
}

#[test]
fn upsilon_linear_case_matches_promoted_substitution() {
    // For linear K the 2-form built from the promoted coefficients equals
    // the direct fiber-contraction substitution.
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
    let g = minkowski();
    let lin = upsilon_core::verify::random::random_linear_connection(&mut rng, 4, 1.0);
    let k = ConnectionField::Linear(lin.clone());
    let p = tangent(&[0.7, -0.3, 0.1, 0.5], &[0.4, 1.2, -0.8, 0.9]);
    let ops = PointOps::new(&g, &k, &p).unwrap();
    let u = ops.upsilon();
    let a = u.as_d2();
    // Hand substitution: base-base block from the coefficient contraction.
    let le = lin.eval_base(&p.x).unwrap();
    let met = g.eval(&p).unwrap();
    for v in 0..4 {
        for m in 0..4 {
            let term = |vv: usize, mm: usize| {
                let mut acc = 0.0;
                for l in 0..4 {
                    for r in 0..4 {
                        acc += met.g(l, mm) * le.c(vv, l, r) * p.xdot[r];
                    }
                }
                acc
            };
            let expect = -term(v, m) + term(m, v);
            assert!((a.get(v, m) - expect).abs() < 1e-12);
        }
    }
}

#[test]
fn contraction_golden_values() {
    // (1/2) L^{AB} U_{AB} = -n for every model; 0 against the zero
    // 2-vector; error on mismatched points.
    for model in gallery::all() {
        let g = model.build_metric();
        let k = model.build_connection();
        let n = model.dim;
        let x = if model.name == "schwarzschild" {
            vec![0.0, 8.0, 1.3, 0.2]
        } else {
            vec![0.2; n]
        };
        let p = TangentPoint::new(x, vec![0.7; n]).unwrap();
        let ops = PointOps::new(&g, &k, &p).unwrap();
        let c = contract_lambda_upsilon(&ops.lambda(), &ops.upsilon()).unwrap();
        assert!(
            (c - (-(n as f64))).abs() < 1e-12,
            "{}: {c}",
            model.name
        );
    }

    let g = minkowski();
    let k = linear_single(4, 0, 0, 0, "0");
    let p = tangent(&[0.0; 4], &[1.0, 0.0, 0.0, 0.0]);
    let ops = PointOps::new(&g, &k, &p).unwrap();
    let mut zero = ops.lambda();
    if let upsilon_core::fields::AntisymData::D2(ref mut a) = zero.data {
        *a = upsilon_core::fields::Antisym2::zeros(8);
    }
    assert_eq!(
        contract_lambda_upsilon(&zero, &ops.upsilon()).unwrap(),
        0.0
    );

    let p2 = tangent(&[0.5; 4], &[1.0, 0.0, 0.0, 0.0]);
    let ops2 = PointOps::new(&g, &k, &p2).unwrap();
    assert!(contract_lambda_upsilon(&ops2.lambda(), &ops.upsilon()).is_err());
}

#[test]
fn d_upsilon_goldens() {
    let p = tangent(&[0.1, -0.4, 0.8, 1.5], &[0.6, -1.2, 0.9, 0.3]);

    // Flat pair: exactly zero.
    let g = minkowski();
    let k0 = linear_single(4, 0, 0, 0, "0");
    assert_eq!(PointOps::new(&g, &k0, &p).unwrap().d_upsilon().max_abs(), 0.0);

    // Non-metric single coefficient K_0^1_2 = 1: the only monomial is
    // -(fiber-d^2) ∧ d^0 ∧ d^1, so the (fiber 2, 0, 1) entry is -1.
    // Frozen from the generic exterior-derivative oracle.
    let nm = gallery::by_name("nonmetric-linear").unwrap();
    let knm = nm.build_connection();
    let du = PointOps::new(&g, &knm, &p).unwrap().d_upsilon();
    let d3 = du.as_d3();
    assert_eq!(d3.get(4 + 2, 0, 1), -1.0);
    assert_eq!(d3.get(0, 1, 4 + 2), -1.0);
    assert_eq!(d3.get(1, 0, 4 + 2), 1.0);
    assert_eq!(d3.max_abs(), 1.0);

    let fd = fd_d_upsilon(&g, &knm, &p, FD_STEP).unwrap();
    let mut dev = 0.0f64;
    for a in 0..8 {
        for b in 0..8 {
            for c in 0..8 {
                dev = dev.max((d3.get(a, b, c) - fd.get(a, b, c)).abs());
            }
        }
    }
    assert!(dev < 1e-9, "generic exterior derivative oracle: {dev:e}");

    // Metric-compatible pair on a curved metric: closed.
    let sch = gallery::by_name("schwarzschild").unwrap();
    let gs = sch.build_metric();
    let ks = levi_civita(&gs);
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    for _ in 0..30 {
        let x = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(4.0..20.0),
            rng.gen_range(0.5..2.6),
            rng.gen_range(-3.0..3.0),
        ];
        let v = [
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        ];
        let ps = tangent(&x, &v);
        let dus = PointOps::new(&gs, &ks, &ps).unwrap().d_upsilon();
        assert!(dus.max_abs() < 1e-9, "at {x:?}: {:e}", dus.max_abs());
    }
}

#[test]
fn residual_mixed_goldens() {
    let g = minkowski();
    let p = tangent(&[0.1, -0.4, 0.8, 1.5], &[0.6, -1.2, 0.9, 0.3]);

    let k0 = linear_single(4, 0, 0, 0, "0");
    assert_eq!(
        PointOps::new(&g, &k0, &p).unwrap().residual_mixed().max_abs(),
        0.0
    );

    // K_0^1_2 = 1: residual (v=0, l=2, m=1) = g_11 = 1, frozen from the
    // finite-difference assembly of the condition.
    let nm = gallery::by_name("nonmetric-linear").unwrap();
    let knm = nm.build_connection();
    let ops = PointOps::new(&g, &knm, &p).unwrap();
    let rm = ops.residual_mixed();
    assert_eq!(rm.get(0, 2, 1), 1.0);
    let fd = fd_residual_mixed(&g, &knm, &p, FD_STEP).unwrap();
    for v in 0..4 {
        for l in 0..4 {
            for m in 0..4 {
                assert!((rm.get(v, l, m) - fd.get(v, l, m)).abs() < 1e-9);
            }
        }
    }

    // Metric-compatible connections satisfy the condition identically.
    let sch = gallery::by_name("schwarzschild").unwrap();
    let gs = sch.build_metric();
    let ks = levi_civita(&gs);
    let ps = tangent(&[0.0, 9.0, 1.1, 0.4], &[0.5, 1.5, -0.5, 0.8]);
    assert!(
        PointOps::new(&gs, &ks, &ps)
            .unwrap()
            .residual_mixed()
            .max_abs()
            < 1e-10
    );
}

#[test]
fn residual_cyclic_goldens() {
    let g = minkowski();
    let p = tangent(&[0.1, -0.4, 0.8, 1.5], &[0.6, -1.2, 0.9, 0.3]);

    let k0 = linear_single(4, 0, 0, 0, "0");
    assert_eq!(
        PointOps::new(&g, &k0, &p).unwrap().residual_cyclic().max_abs(),
        0.0
    );

    // Curvature-bearing non-metric connection K_0^2_1 = x1: the only
    // independent curvature entry is R(1,0)^2_1 = -2, so the lowered
    // cyclic sum has res(0,1,2) = 2 * v^1. Frozen at v^1 = -1.2.
    let kx = linear_single(4, 0, 2, 1, "x1");
    let rc = PointOps::new(&g, &kx, &p).unwrap().residual_cyclic();
    assert!((rc.get(0, 1, 2) - (-2.4)).abs() < 1e-14);
    assert!((rc.get(0, 1, 2) - 2.0 * p.xdot[1]).abs() < 1e-14);
    assert!((rc.max_abs() - 2.4).abs() < 1e-14);

    // First-Bianchi-style vanishing for metric-compatible connections.
    let sch = gallery::by_name("schwarzschild").unwrap();
    let gs = sch.build_metric();
    let ks = levi_civita(&gs);
    let ps = tangent(&[0.0, 6.0, 1.9, -0.7], &[1.0, -0.4, 0.3, 0.6]);
    assert!(
        PointOps::new(&gs, &ks, &ps)
            .unwrap()
            .residual_cyclic()
            .max_abs()
            < 1e-9
    );
}

#[test]
fn schouten_goldens() {
    let g = minkowski();
    let p = tangent(&[0.1, -0.4, 0.8, 1.5], &[0.6, -1.2, 0.9, 0.3]);

    let k0 = linear_single(4, 0, 0, 0, "0");
    assert_eq!(PointOps::new(&g, &k0, &p).unwrap().schouten().max_abs(), 0.0);

    // K_0^1_2 = 1: single wedge monomial 2 * d_2 ∧ fiber-d_1 ∧ fiber-d_0,
    // so the (2, fiber 0, fiber 1) entry is -2. Frozen from the
    // closed-3-form contraction oracle.
    let nm = gallery::by_name("nonmetric-linear").unwrap();
    let knm = nm.build_connection();
    let s = PointOps::new(&g, &knm, &p).unwrap().schouten();
    let s3 = s.as_d3();
    assert_eq!(s3.get(2, 4, 5), -2.0);
    assert_eq!(s3.get(2, 5, 4), 2.0);
    assert_eq!(s3.max_abs(), 2.0);
    assert_eq!(s.length_unit_power, -4);

    let fd = fd_schouten(&g, &knm, &p, FD_STEP).unwrap();
    let mut dev = 0.0f64;
    for a in 0..8 {
        for b in 0..8 {
            for c in 0..8 {
                dev = dev.max((s3.get(a, b, c) - fd.get(a, b, c)).abs());
            }
        }
    }
    assert!(dev < 1e-9, "contraction oracle: {dev:e}");

    // Metric-compatible pair on a curved metric: bracket vanishes.
    let g2 = MetricField::parse(
        4,
        &[
            "-1", "0", "0", "0", "0", "1 + x0^2", "0", "0", "0", "0", "1", "0", "0", "0", "0",
            "1",
        ],
        2,
    )
    .unwrap();
    let k2 = levi_civita(&g2);
    let s2 = PointOps::new(&g2, &k2, &p).unwrap().schouten();
    assert!(s2.max_abs() < 1e-9);
}

#[test]
fn nabla_g_and_d_k_g_goldens() {
    let p = tangent(&[0.1, -0.4, 0.8, 1.5], &[0.6, -1.2, 0.9, 0.3]);

    // Metric compatibility: nabla g = 0 for the derived connection.
    let sch = gallery::by_name("schwarzschild").unwrap();
    let gs = sch.build_metric();
    let ks = levi_civita(&gs);
    let ps = tangent(&[0.0, 11.0, 0.9, 2.0], &[0.2, -0.9, 0.1, 0.7]);
    let ops = PointOps::new(&gs, &ks, &ps).unwrap();
    assert!(ops.nabla_g().unwrap().max_abs() < 1e-10);
    assert!(ops.d_k_g().unwrap().max_abs() < 1e-10);
    assert!(ops.lie_k_gflat().max_abs() < 1e-10);

    // Zero connection on the flat metric.
    let g = minkowski();
    let k0 = linear_single(4, 0, 0, 0, "0");
    let ops0 = PointOps::new(&g, &k0, &p).unwrap();
    assert_eq!(ops0.nabla_g().unwrap().max_abs(), 0.0);
    assert_eq!(ops0.d_k_g().unwrap().max_abs(), 0.0);

    // K = 0 on g = diag(-1, 1 + x0^2, 1, 1): the only derivative is
    // d_0 g_11 = 2 x0, so d_K g has (r=1; l=0, m=1) = 2 x0 and the
    // antisymmetric partner negated. Frozen from the defining monomials.
    let gx = MetricField::parse(
        4,
        &[
            "-1", "0", "0", "0", "0", "1 + x0^2", "0", "0", "0", "0", "1", "0", "0", "0", "0",
            "1",
        ],
        2,
    )
    .unwrap();
    let opsx = PointOps::new(&gx, &k0, &p).unwrap();
    let d = opsx.d_k_g().unwrap();
    let expect = 2.0 * p.x[0];
    assert!((d.tensor.get(1, 0, 1) - expect).abs() < 1e-15);
    assert!((d.tensor.get(1, 1, 0) + expect).abs() < 1e-15);
    // nabla g: unantisymmetrized, nonzero only at (0,1,1).
    let nab = opsx.nabla_g().unwrap();
    assert!((nab.tensor.get(0, 1, 1) - expect).abs() < 1e-15);
    assert_eq!(nab.tensor.get(1, 0, 1), 0.0);

    // Errors for non-linear connections.
    let nlg = gallery::by_name("nonlinear-general").unwrap();
    let kn = nlg.build_connection();
    let opsn = PointOps::new(&g, &kn, &p).unwrap();
    assert!(opsn.nabla_g().is_err());
    assert!(opsn.d_k_g().is_err());
    assert!(opsn.torsion_linear().is_err());
    assert!(opsn.curvature_linear().is_err());
}

#[test]
fn raised_mixed_residual_sign_is_the_minus_variant() {
    // The raised mixed residual comes from antisymmetrizing
    // W(l,m,v) = 2 g^{rv} (d_r g^{lm} - g^{sl} fiber-d_s K_r^m) in its
    // last two slots; a plus sign in the second parenthesis would not
    // vanish for metric-compatible pairs. Pinned on a curved metric.
    let g = MetricField::parse(
        4,
        &[
            "-1", "0", "0", "0", "0", "1 + x0^2", "0", "0", "0", "0", "1", "0", "0", "0", "0",
            "1",
        ],
        2,
    )
    .unwrap();
    let k = levi_civita(&g);
    let p = tangent(&[0.4, 0.1, -0.2, 0.3], &[0.9, -0.8, 0.7, -0.6]);
    let ops = PointOps::new(&g, &k, &p).unwrap();
    assert!(ops.residual_mixed_raised().max_abs() < 1e-12);
    assert!(ops.residual_cyclic_raised().max_abs() < 1e-12);

    // Plus variant, assembled by hand: must NOT vanish here.
    let met = &ops.met;
    let conn = &ops.conn;
    let mut plus_max = 0.0f64;
    for l in 0..4 {
        for m in 0..4 {
            for v in 0..4 {
                let mut acc = 0.0;
                for r in 0..4 {
                    let mut t1 = met.dginv(r, l, m);
                    let mut t2 = met.dginv(r, l, v);
                    for s in 0..4 {
                        t1 -= met.ginv(s, l) * conn.dk_fiber(r, m, s);
                        t2 += met.ginv(s, l) * conn.dk_fiber(r, v, s);
                    }
                    acc += met.ginv(r, v) * t1 - met.ginv(r, m) * t2;
                }
                plus_max = plus_max.max(acc.abs());
            }
        }
    }
    assert!(
        plus_max > 0.1,
        "plus variant should be visibly nonzero, got {plus_max:e}"
    );
}

#[test]
fn upsilon_nondegenerate_across_gallery() {
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(44);
    for model in gallery::all() {
        let g = model.build_metric();
        let k = model.build_connection();
        let n = model.dim;
        for _ in 0..100 {
            let x: Vec<f64> = (0..n)
                .map(|i| rng.gen_range(model.base_box[i].0..model.base_box[i].1))
                .collect();
            let chart = model.build_chart();
            if !chart.contains(&x) {
                continue;
            }
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let p = TangentPoint::new(x, v).unwrap();
            let ops = PointOps::new(&g, &k, &p).unwrap();
            let det = ops.upsilon().as_d2().to_matrix().determinant();
            assert!(det.abs() > 1e-10, "{}: det {det:e}", model.name);
        }
    }
}

#[test]
fn lambda_linear_case_matches_promoted_substitution() {
    // For linear K the fiber-fiber block of the 2-vector equals the
    // direct coefficient contraction g^{lm} K_l^u_r v^r.
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
    let g = minkowski();
    let lin = upsilon_core::verify::random::random_linear_connection(&mut rng, 4, 1.0);
    let k = ConnectionField::Linear(lin.clone());
    let p = tangent(&[0.7, -0.3, 0.1, 0.5], &[0.4, 1.2, -0.8, 0.9]);
    let lam = PointOps::new(&g, &k, &p).unwrap().lambda();
    let a = lam.as_d2();
    let le = lin.eval_base(&p.x).unwrap();
    let met = g.eval(&p).unwrap();
    for v in 0..4 {
        for m in 0..4 {
            let term = |vv: usize, mm: usize| {
                let mut acc = 0.0;
                for l in 0..4 {
                    for r in 0..4 {
                        acc += met.ginv(l, mm) * le.c(l, vv, r) * p.xdot[r];
                    }
                }
                acc
            };
            let expect = term(v, m) - term(m, v);
            assert!((a.get(4 + v, 4 + m) - expect).abs() < 1e-12);
        }
    }
}

#[test]
fn residual_cyclic_is_the_cyclic_sum_of_the_lowered_curvature() {
    // The op must be, entry for entry, the cyclic sum of the g-lowered
    // curvature array; recomputed here in test code.
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(22);
    let g = gallery::by_name("minkowski-metric").unwrap().build_metric();
    for _ in 0..10 {
        let k = ConnectionField::Linear(upsilon_core::verify::random::random_linear_connection(
            &mut rng, 4, 1.0,
        ));
        let p = tangent(&[0.2, -0.4, 0.1, 0.3], &[1.0, -0.5, 0.25, 2.0]);
        let ops = PointOps::new(&g, &k, &p).unwrap();
        let r = ops.curvature();
        let met = g.eval(&p).unwrap();
        let rc = ops.residual_cyclic();
        for l in 0..4 {
            for m in 0..4 {
                for v in 0..4 {
                    let low = |a: usize, b: usize, c: usize| {
                        (0..4).map(|rho| met.g(rho, c) * r.get(a, b, rho)).sum::<f64>()
                    };
                    let expect = low(l, m, v) + low(m, v, l) + low(v, l, m);
                    assert!((rc.get(l, m, v) - expect).abs() < 1e-13);
                }
            }
        }
    }
}

#[test]
fn field_derivatives_match_finite_differences() {
    // Every derivative array entering the operations (metric, inverse
    // metric, connection, base and fiber directions) against central
    // differences of plain values, relative 1e-6 at 20 random points.
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
    let g = upsilon_core::verify::random::random_metric(&mut rng, 4, 0.02);
    let k = ConnectionField::General(
        upsilon_core::verify::random::random_general_connection(&mut rng, 4, 0.4),
    );
    let h = FD_STEP;
    let rel = |a: f64, fd: f64| (a - fd).abs() / a.abs().max(1.0);
    for _ in 0..20 {
        let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let p = TangentPoint::new(x.clone(), v.clone()).unwrap();
        let met = g.eval(&p).unwrap();
        let conn = k.eval(&p).unwrap();
        for d in 0..4 {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[d] += h;
            xm[d] -= h;
            let gp = g.value_at(&xp).unwrap();
            let gm = g.value_at(&xm).unwrap();
            let kp = k.value_at(&xp, &v).unwrap();
            let km = k.value_at(&xm, &v).unwrap();
            let mut vp = v.clone();
            let mut vm = v.clone();
            vp[d] += h;
            vm[d] -= h;
            let kfp = k.value_at(&x, &vp).unwrap();
            let kfm = k.value_at(&x, &vm).unwrap();
            // Inverse metric at shifted points for dginv.
            let inv = |vals: &[f64]| {
                nalgebra::DMatrix::from_fn(4, 4, |r, c| vals[r * 4 + c])
                    .try_inverse()
                    .unwrap()
            };
            let ip = inv(&gp);
            let im = inv(&gm);
            for r in 0..4 {
                for c in 0..4 {
                    let i = r * 4 + c;
                    assert!(rel(met.dg(d, r, c), (gp[i] - gm[i]) / (2.0 * h)) < 1e-6);
                    assert!(
                        rel(met.dginv(d, r, c), (ip[(r, c)] - im[(r, c)]) / (2.0 * h)) < 1e-6
                    );
                    assert!(rel(conn.dk_base(r, c, d), (kp[i] - km[i]) / (2.0 * h)) < 1e-6);
                    assert!(rel(conn.dk_fiber(r, c, d), (kfp[i] - kfm[i]) / (2.0 * h)) < 1e-6);
                }
            }
        }
    }
}
