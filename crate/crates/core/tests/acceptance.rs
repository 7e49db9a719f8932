//! End-to-end checks of the headline numbers. Each test writes one
//! `criterion N: PASS|FAIL ...` line to stdout, bypassing output capture.

use std::io::Write;
use std::time::Instant;

use graphdim_core::barlow_taylor::{dimension_scan, recurrence_by_dh, Kind, Method, PointSet};
use graphdim_core::dimension::{
    ball_concentration, estimate_beta, estimate_df, estimate_dm, estimate_ds, fit_exponent,
    ExponentFit,
};
use graphdim_core::generators::{
    make_homogeneous_tree, make_lattice_box, make_path, make_regular_tree, make_sierpinski,
};
use graphdim_core::graph::{ball_profile, mass_profile};
use graphdim_core::gw::{cluster_tail_experiment, sample_iic_tree, OffspringLaw};
use graphdim_core::parallel::replicas;
use graphdim_core::percolation::critical_ball_experiment;
use graphdim_core::rng::stream_rng;
use graphdim_core::suite::{kesten_dimensions, kesten_mass_dimension, KestenParams};
use graphdim_core::walk::{
    mean_exit_time_exact, return_probability_exact, return_probability_mc, Boundary, Distribution,
    Metric,
};
use graphdim_core::{Graph, Recurrence};
use rand::Rng;

fn report(criterion: u32, pass: bool, detail: &str) {
    let line = format!(
        "criterion {criterion}: {} {detail}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
}

fn within(fit: &ExponentFit, target: f64, tol: f64) -> bool {
    (fit.slope - target).abs() <= tol
}

fn binomial2() -> OffspringLaw {
    "binomial:2:0.5".parse().unwrap()
}

#[test]
fn criterion_1_lattice_sanity() {
    let start = Instant::now();
    let mut checks = Vec::new();
    for d in 1..=2 {
        let g = make_lattice_box(d, 1000).unwrap();
        let df = estimate_df(&ball_profile(&g, 1000), None).unwrap();
        let dm = estimate_dm(&mass_profile(&g, 1000).unwrap(), None).unwrap();
        checks.push((format!("Z{d} d_f"), df, d as f64));
        checks.push((format!("Z{d} d_m"), dm, d as f64));
    }
    // Return series to time 10^4. The Z^2 box edge sits beyond four
    // standard deviations of the walk at that time.
    for (d, n) in [(1, 5100), (2, 300)] {
        let g = make_lattice_box(d, n).unwrap();
        let s = return_probability_exact(&g, 5000, Boundary::Finite).unwrap();
        checks.push((
            format!("Z{d} d_s"),
            estimate_ds(&s, None).unwrap(),
            d as f64,
        ));
    }
    let elapsed = start.elapsed();
    let pass = checks.iter().all(|(_, f, t)| within(f, *t, 0.1)) && elapsed.as_secs() < 120;
    let detail: Vec<String> = checks
        .iter()
        .map(|(name, f, _)| format!("{name} {:.3}", f.slope))
        .collect();
    report(1, pass, &format!("{} ({:.0?})", detail.join(", "), elapsed));
    assert!(pass);
}

#[test]
fn criterion_2_critical_ball_lower_bound() {
    let start = Instant::now();
    let balls = critical_ball_experiment(2, 0.5, 64, 10_000, 2).unwrap();
    let separated: Vec<usize> = (1..=64)
        .filter(|&k| (balls[k - 1].mean - k as f64).abs() > 3.0 * balls[k - 1].std_error)
        .collect();
    let below: Vec<usize> = separated
        .iter()
        .copied()
        .filter(|&k| balls[k - 1].mean < k as f64)
        .collect();
    let elapsed = start.elapsed();
    let pass = below.is_empty() && elapsed.as_secs() < 600;
    report(
        2,
        pass,
        &format!(
            "E|B(64)| = {:.1} ± {:.1}; {} of 64 radii separated, {} below k ({:.0?})",
            balls[63].mean,
            balls[63].std_error,
            separated.len(),
            below.len(),
            elapsed
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_3_kesten_tree_dimensions() {
    let start = Instant::now();
    let k = kesten_dimensions(&binomial2(), &KestenParams::standard(), 3).unwrap();
    let elapsed = start.elapsed();
    let pass = within(&k.df, 2.0, 0.15)
        && within(&k.ds, 4.0 / 3.0, 0.1)
        && within(&k.beta, 3.0, 0.2)
        && k.barlow_bass.relative_discrepancy < 0.1
        && k.max_absorbed < 1e-9
        && elapsed.as_secs() < 1800;
    report(
        3,
        pass,
        &format!(
            "d_f {:.3} ± {:.3}, d_s {:.3} ± {:.3}, beta {:.3} ± {:.3}, Barlow-Bass {:.3}, absorbed {:.1e} ({:.0?})",
            k.df.slope,
            k.df.std_error,
            k.ds.slope,
            k.ds.std_error,
            k.beta.slope,
            k.beta.std_error,
            k.barlow_bass.relative_discrepancy,
            k.max_absorbed,
            elapsed
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_4_cluster_tail() {
    let start = Instant::now();
    let grid: Vec<u64> = (0..=8)
        .map(|i| (100.0 * 10f64.powf(i as f64 / 4.0)).round() as u64)
        .collect();
    let tail = cluster_tail_experiment(&binomial2(), &grid, 1_000_000, 4).unwrap();
    let pts: Vec<(f64, f64)> = grid
        .iter()
        .zip(&tail.survival)
        .map(|(&k, s)| (k as f64, s.mean))
        .collect();
    let fit = fit_exponent(&pts, None).unwrap();
    let elapsed = start.elapsed();
    let pass = within(&fit, -0.5, 0.05) && elapsed.as_secs() < 300;
    report(
        4,
        pass,
        &format!(
            "slope {:.3} ± {:.3} ({:.0?})",
            fit.slope, fit.std_error, elapsed
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_5_sierpinski_exponents() {
    let start = Instant::now();
    let g = make_sierpinski(7).unwrap();
    let exits: Vec<(f64, f64)> = [2usize, 4, 8, 16, 32, 64]
        .iter()
        .map(|&r| {
            (
                r as f64,
                mean_exit_time_exact(&g, r, Metric::Intrinsic).unwrap(),
            )
        })
        .collect();
    let beta = estimate_beta(&exits, None).unwrap();
    let df = estimate_df(&ball_profile(&g, 128), Some((8.0, 128.0))).unwrap();
    let s = return_probability_exact(&g, 2000, Boundary::Finite).unwrap();
    let ds = estimate_ds(&s, Some((10.0, 300.0))).unwrap();
    let log5 = 5f64.log2();
    let log3 = 3f64.log2();
    let elapsed = start.elapsed();
    let pass = within(&beta, log5, 0.1)
        && within(&df, log3, 0.1)
        && within(&ds, 2.0 * log3 / log5, 0.1)
        && elapsed.as_secs() < 900;
    report(
        5,
        pass,
        &format!(
            "beta {:.3}, d_f {:.3}, d_s {:.3} ({:.0?})",
            beta.slope, df.slope, ds.slope, elapsed
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_6_ball_concentration() {
    let radii = [64usize, 256, 1024];
    let sizes = replicas(400, 6, |_, s| {
        let t = sample_iic_tree(&binomial2(), 1024, s).unwrap().tree;
        radii.map(|n| t.layer_end(n) as u64)
    });
    let mut pass = true;
    let mut detail = Vec::new();
    for (i, &n) in radii.iter().enumerate() {
        let b: Vec<u64> = sizes.iter().map(|s| s[i]).collect();
        let c = ball_concentration(&b, n, 2.0, &[4.0, 8.0]).unwrap();
        pass &= c.holds();
        let cells: Vec<String> = c
            .lambdas
            .iter()
            .zip(c.fractions.iter().zip(&c.bounds))
            .map(|(l, (f, b))| format!("lambda {l}: {f:.3} vs {b:.3}"))
            .collect();
        detail.push(format!("n={n} C={:.2} [{}]", c.c_hat, cells.join(", ")));
    }
    report(6, pass, &detail.join("; "));
    assert!(
        pass,
        "fraction inside the band falls below 1 - C/lambda; see the line above"
    );
}

fn line_in_z3(n: u32) -> PointSet {
    let r = 1i32 << n;
    PointSet::new(3, (-r..=r).map(|x| vec![x, 0, 0])).unwrap()
}

fn plane_in_z3(n: u32) -> PointSet {
    let r = 1i32 << n;
    PointSet::new(
        3,
        (-r..=r).flat_map(|x| (-r..=r).map(move |y| vec![x, y, 0])),
    )
    .unwrap()
}

fn srw_range_in_z3(steps: usize, n: u32, seed: u64) -> PointSet {
    let r = 1i32 << n;
    let mut rng = stream_rng(seed, 0);
    let mut x = [0i32; 3];
    let mut sites = vec![x.to_vec()];
    for _ in 0..steps {
        let s = rng.random_range(0..6);
        x[s / 2] += if s % 2 == 0 { 1 } else { -1 };
        if x.iter().all(|c| c.abs() <= r) {
            sites.push(x.to_vec());
        }
    }
    PointSet::new(3, sites).unwrap()
}

#[test]
fn criterion_7_barlow_taylor_ordering() {
    // Part (a), solver exactness against enumeration, is the 500-case
    // property test in tests/barlow_taylor.rs.
    let grid: Vec<f64> = (0..=30).map(|i| i as f64 * 0.1).collect();
    let sets = [
        ("line", line_in_z3(10), 10, Recurrence::Inconclusive),
        ("plane", plane_in_z3(6), 6, Recurrence::Recurrent),
        (
            "SRW range",
            srw_range_in_z3(1_000_000, 7, 7),
            7,
            Recurrence::Recurrent,
        ),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, a, n, expected) in sets {
        let h = dimension_scan(&a, &grid, n, Kind::Hausdorff, None, Method::Greedy).unwrap();
        let p = dimension_scan(&a, &grid, n, Kind::Packing, Some(0.25), Method::Greedy).unwrap();
        let m = estimate_dm(&a.mass_profile(1 << n), Some((2.0, (1u64 << n) as f64))).unwrap();
        let band = |s1: f64, s2: f64| 2.0 * s1.hypot(s2);
        let ordered = h.estimate <= m.slope + band(h.std_error, m.std_error)
            && m.slope <= p.estimate + band(m.std_error, p.std_error);
        let verdict = recurrence_by_dh(h.estimate, h.std_error, 3);
        pass &= ordered && verdict == expected && h.bracketed && p.bracketed;
        detail.push(format!(
            "{name}: d_H {:.2} ± {:.2}, d_m {:.2} ± {:.2}, d_P {:.2} ± {:.2}, {verdict:?}",
            h.estimate, h.std_error, m.slope, m.std_error, p.estimate, p.std_error
        ));
    }
    report(7, pass, &detail.join("; "));
    assert!(pass);
}

#[test]
fn criterion_8_mass_dimension_proxy() {
    // Sup-norm radius the embedded walk reaches within the tree depth.
    let n_max = ((512.0f64 / 9.0).sqrt()).round() as usize;
    let m =
        kesten_mass_dimension(&binomial2(), 512, 9, 100, 24, Some((2.0, n_max as f64)), 8).unwrap();
    let pass = within(&m.dm, 4.0, 0.5);
    report(
        8,
        pass,
        &format!(
            "d_m {:.3} ± {:.3} on window {:?} (stretch goal, not asserted)",
            m.dm.slope, m.dm.std_error, m.dm.window
        ),
    );
}

fn cycle(n: usize) -> Graph {
    let edges: Vec<(u32, u32)> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
    Graph::from_edges(n, &edges, 0, None).unwrap()
}

#[test]
fn criterion_9_oracle_equivalence() {
    let graphs = vec![
        ("K2", Graph::from_edges(2, &[(0, 1)], 0, None).unwrap()),
        ("path", make_path(40).unwrap()),
        ("Z1 box", make_lattice_box(1, 200).unwrap()),
        ("Z2 box", make_lattice_box(2, 20).unwrap()),
        ("Z3 box", make_lattice_box(3, 6).unwrap()),
        ("odd cycle", cycle(9)),
        ("binary tree", make_regular_tree(2, 9).unwrap()),
        ("3-regular tree", make_homogeneous_tree(3, 8).unwrap()),
        ("Sierpinski", make_sierpinski(5).unwrap()),
    ];
    let mut worst_z: f64 = 0.0;
    let mut worst_mass: f64 = 0.0;
    let mut odd_mass: f64 = 0.0;
    for (_, g) in &graphs {
        assert!(g.num_vertices() <= 10_000);
        let exact = return_probability_exact(g, 30, Boundary::Finite).unwrap();
        let mc = return_probability_mc(g, 30, 40_000, 99, Boundary::Finite).unwrap();
        for ((&p, &q), &se) in exact
            .return_probs
            .iter()
            .zip(&mc.return_probs)
            .zip(&mc.std_errors)
        {
            let z = if se > 0.0 {
                (p - q).abs() / se
            } else if p == q {
                0.0
            } else {
                f64::INFINITY
            };
            worst_z = worst_z.max(z);
        }
        let mut dist = Distribution::new(g, Boundary::Finite).unwrap();
        let bipartite = g.is_bipartite();
        for t in 1..=200 {
            dist.step();
            worst_mass = worst_mass.max((dist.total_mass() - 1.0).abs());
            if bipartite && t % 2 == 1 {
                odd_mass = odd_mass.max(dist.mass_at(0));
            }
        }
    }
    let pass = worst_z <= 4.0 && worst_mass <= 1e-12 && odd_mass == 0.0;
    report(
        9,
        pass,
        &format!("max |MC - exact| = {worst_z:.2} sigma, max mass drift {worst_mass:.1e}, bipartite odd-time mass {odd_mass}"),
    );
    assert!(pass);
}
