use graphdim_core::barlow_taylor::{
    dimension_scan, mu_alpha, nu_alpha, rad, recurrence_by_dh, Kind, Method, PointSet,
};
use graphdim_core::rng::stream_rng;
use graphdim_core::{Error, Recurrence};
use proptest::prelude::*;
use rand::Rng;

const ALPHAS: [f64; 5] = [0.0, 0.5, 1.0, 1.7, 3.0];

fn sup_dist(a: &[i32], b: &[i32]) -> i64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (*x as i64 - *y as i64).abs())
        .max()
        .unwrap_or(0)
}

fn weight(e: u32, n: u32, alpha: f64) -> f64 {
    (2f64.powi(e as i32) / 2f64.powi(n as i32)).powf(alpha)
}

/// Cheapest cover of every point by candidate cubes, by DP over covered subsets.
fn cover_by_subsets(pts: &[Vec<i32>], n: u32, alpha: f64) -> f64 {
    let m = pts.len();
    let mut cubes = Vec::new();
    for c in pts {
        for e in 0..=n {
            let mask = pts
                .iter()
                .enumerate()
                .filter(|(_, p)| sup_dist(p, c) <= 1 << e)
                .fold(0usize, |s, (i, _)| s | 1 << i);
            cubes.push((mask, weight(e, n, alpha)));
        }
    }
    let full = (1usize << m) - 1;
    let mut best = vec![f64::INFINITY; 1 << m];
    best[0] = 0.0;
    for s in 1..=full {
        let low = s & s.wrapping_neg();
        for &(mask, w) in &cubes {
            if mask & low != 0 {
                best[s] = best[s].min(w + best[s & !mask]);
            }
        }
    }
    best[full]
}

/// Best packing found by trying every radius (or none) at every centre.
fn pack_by_enumeration(pts: &[Vec<i32>], n: u32, emax: u32, alpha: f64) -> f64 {
    fn go(
        pts: &[Vec<i32>],
        i: usize,
        placed: &mut Vec<(usize, i64)>,
        n: u32,
        emax: u32,
        alpha: f64,
    ) -> f64 {
        if i == pts.len() {
            return placed
                .iter()
                .map(|&(_, r)| weight(r.trailing_zeros(), n, alpha))
                .sum();
        }
        let mut best = go(pts, i + 1, placed, n, emax, alpha);
        for e in 0..=emax {
            let r = 1i64 << e;
            if placed
                .iter()
                .all(|&(j, s)| sup_dist(&pts[i], &pts[j]) > r + s)
            {
                placed.push((i, r));
                best = best.max(go(pts, i + 1, placed, n, emax, alpha));
                placed.pop();
            } else {
                break;
            }
        }
        best
    }
    go(pts, 0, &mut Vec::new(), n, emax, alpha)
}

/// Up to `m` distinct points of shell `n` in `Z^d`, kept near one corner so
/// that cubes interact.
fn shell_instance(seed: u64, d: usize, n: u32, m: usize) -> Vec<Vec<i32>> {
    let mut rng = stream_rng(seed, 0);
    let hi = 1i32 << n;
    let lo = (1i32 << (n - 1)) + 1;
    let mut pts: Vec<Vec<i32>> = Vec::new();
    while pts.len() < m {
        let axis = rng.random_range(0..d);
        let p: Vec<i32> = (0..d)
            .map(|k| {
                if k == axis {
                    rng.random_range(lo..=hi)
                } else {
                    rng.random_range(0..=hi)
                }
            })
            .collect();
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts
}

fn packing_exponent(n: u32, eps: f64) -> u32 {
    (n as f64 * (1.0 - eps) + 1e-9).floor() as u32
}

fn axis_line(d: usize, half: i32) -> PointSet {
    PointSet::new(
        d,
        (-half..=half).map(|x| {
            let mut p = vec![0; d];
            p[0] = x;
            p
        }),
    )
    .unwrap()
}

fn grid() -> Vec<f64> {
    (0..=30).map(|i| i as f64 * 0.1).collect()
}

#[test]
fn radius_matches_brute_force() {
    let mut rng = stream_rng(7, 0);
    for d in 1..=3 {
        let pts: Vec<Vec<i32>> = (0..20)
            .map(|_| (0..d).map(|_| rng.random_range(-6..=6)).collect())
            .collect();
        let set = PointSet::new(d, pts.clone()).unwrap();
        let brute = (0..=12i64)
            .find(|&r| {
                let centres = (0..13i32.pow(d as u32)).map(|mut k| {
                    (0..d)
                        .map(|_| {
                            let c = k % 13 - 6;
                            k /= 13;
                            c
                        })
                        .collect::<Vec<i32>>()
                });
                centres
                    .into_iter()
                    .any(|c| pts.iter().all(|p| sup_dist(p, &c) <= r))
            })
            .unwrap();
        assert_eq!(rad(&set).unwrap() as i64, brute, "d={d}");
    }
    assert_eq!(rad(&PointSet::new(1, [vec![0]]).unwrap()).unwrap(), 0);
    assert_eq!(
        rad(&PointSet::new(2, (0..=4).map(|x| vec![x, 0])).unwrap()).unwrap(),
        2
    );
    assert!(matches!(
        rad(&PointSet::new(3, Vec::<Vec<i32>>::new()).unwrap()),
        Err(Error::Argument(_))
    ));
}

#[test]
fn singleton_and_empty_shells() {
    let a = PointSet::new(3, [vec![-2, 7, 1]]).unwrap();
    for alpha in ALPHAS {
        for method in [Method::Exact, Method::Greedy] {
            let nu = nu_alpha(&a, 3, alpha, method).unwrap();
            assert!((nu - 0.125f64.powf(alpha)).abs() < 1e-12);
            // The largest admissible cube, radius 2^floor(3 * 0.75) = 4.
            let mu = mu_alpha(&a, 3, alpha, 0.25, method).unwrap();
            assert!((mu - 0.5f64.powf(alpha)).abs() < 1e-12);
            // Only radius 1 is admissible.
            let mu = mu_alpha(&a, 3, alpha, 0.7, method).unwrap();
            assert!((mu - 0.125f64.powf(alpha)).abs() < 1e-12);
            assert_eq!(nu_alpha(&a, 4, alpha, method).unwrap(), 0.0);
            assert_eq!(mu_alpha(&a, 4, alpha, 0.25, method).unwrap(), 0.0);
        }
    }
}

#[test]
fn dense_line_shells() {
    let a = axis_line(1, 16);
    let exact = nu_alpha(&a, 4, 1.0, Method::Exact).unwrap();
    let greedy = nu_alpha(&a, 4, 1.0, Method::Greedy).unwrap();
    assert!(exact <= 1.0 + 1e-12);
    assert!((exact - greedy).abs() < 1e-12);
    let pts: Vec<Vec<i32>> = a.shell(4).iter().map(|p| p.to_vec()).collect();
    assert!((cover_by_subsets(&pts, 4, 1.0) - exact).abs() < 1e-12);

    for n in [4, 5] {
        let a = axis_line(1, 1 << n);
        let exact = mu_alpha(&a, n, 0.5, 0.25, Method::Exact).unwrap();
        let greedy = mu_alpha(&a, n, 0.5, 0.25, Method::Greedy).unwrap();
        assert!(greedy <= exact + 1e-12);
        assert!(
            (exact - greedy) / exact < 0.2,
            "n={n}: exact {exact} greedy {greedy}"
        );
    }
}

#[test]
fn exact_solvers_refuse_large_shells() {
    let a = axis_line(2, 128);
    assert!(matches!(
        nu_alpha(&a, 7, 1.0, Method::Exact),
        Err(Error::Capacity(_))
    ));
    assert!(matches!(
        mu_alpha(&a, 7, 1.0, 0.25, Method::Exact),
        Err(Error::Capacity(_))
    ));
    assert!(nu_alpha(&a, 7, 1.0, Method::Greedy).is_ok());
}

#[test]
fn scan_examples() {
    let single = PointSet::new(3, [vec![0, 0, 0]]).unwrap();
    let s = dimension_scan(&single, &grid(), 8, Kind::Hausdorff, None, Method::Greedy).unwrap();
    assert_eq!(s.estimate, 0.0);

    // Full line at alpha = 1: one cube of radius 2^n per half gives 2, and a
    // cube of radius r >= 1 holds 2r + 1 <= 3r of the 2^n points, so no
    // cover beats 1/3.
    let line = axis_line(1, 1 << 10);
    let s = dimension_scan(&line, &grid(), 10, Kind::Hausdorff, None, Method::Greedy).unwrap();
    assert!(
        (s.estimate - 1.0).abs() < 0.2,
        "{} ± {}",
        s.estimate,
        s.std_error
    );
    assert_eq!(s.curves.len(), 31);
    let at_one = &s.curves[10];
    assert!(
        at_one
            .shells
            .iter()
            .all(|&v| (1.0 / 3.0..=2.0).contains(&v)),
        "{:?}",
        at_one.shells
    );
    assert!(s.curves[0].partial_sums.windows(2).all(|w| w[1] >= w[0]));

    assert!(dimension_scan(&line, &grid(), 2, Kind::Hausdorff, None, Method::Greedy).is_err());
}

#[test]
fn sparse_set_is_transient() {
    // One point per shell: shell values are exactly 2^(-n alpha).
    let a = PointSet::new(3, (1..=12).map(|k| vec![1 << k, 0, 0])).unwrap();
    let s = dimension_scan(&a, &grid(), 12, Kind::Hausdorff, None, Method::Greedy).unwrap();
    for c in &s.curves {
        for (i, &v) in c.shells.iter().enumerate() {
            let n = i as i32 + 1;
            assert!((v - 2f64.powf(-n as f64 * c.alpha)).abs() < 1e-12);
        }
    }
    assert!(s.estimate < 0.1, "{} ± {}", s.estimate, s.std_error);
    assert_eq!(
        recurrence_by_dh(s.estimate, s.std_error, 3),
        Recurrence::Transient
    );
}

#[test]
fn classifier_examples() {
    let line = axis_line(3, 1 << 8);
    let s = dimension_scan(&line, &grid(), 8, Kind::Hausdorff, None, Method::Greedy).unwrap();
    assert_eq!(
        recurrence_by_dh(s.estimate, s.std_error, 3),
        Recurrence::Inconclusive,
        "{} ± {}",
        s.estimate,
        s.std_error
    );
    let r = 1 << 4;
    let plane = PointSet::new(
        3,
        (-r..=r).flat_map(|x| (-r..=r).map(move |y| vec![x, y, 0])),
    )
    .unwrap();
    let s = dimension_scan(&plane, &grid(), 4, Kind::Hausdorff, None, Method::Greedy).unwrap();
    assert_eq!(
        recurrence_by_dh(s.estimate, s.std_error, 3),
        Recurrence::Recurrent,
        "{} ± {}",
        s.estimate,
        s.std_error
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn exact_solvers_match_enumeration(seed in any::<u64>(), d in 1usize..=3, n in 2u32..=5, m in 1usize..=12, eps in prop::sample::select(vec![0.25, 0.5])) {
        let m = m.min(1 << (n - 1 + (d as u32 - 1) * n));
        let pts = shell_instance(seed, d, n, m);
        let set = PointSet::new(d, pts.clone()).unwrap();
        prop_assert_eq!(set.shell(n).len(), pts.len());
        let emax = packing_exponent(n, eps);
        for alpha in ALPHAS {
            let nu = nu_alpha(&set, n, alpha, Method::Exact).unwrap();
            let oracle = cover_by_subsets(&pts, n, alpha);
            prop_assert!((nu - oracle).abs() <= 1e-9 * oracle.max(1.0), "nu {} oracle {}", nu, oracle);
            let mu = mu_alpha(&set, n, alpha, eps, Method::Exact).unwrap();
            let oracle = pack_by_enumeration(&pts, n, emax, alpha);
            prop_assert!((mu - oracle).abs() <= 1e-9 * oracle.max(1.0), "mu {} oracle {}", mu, oracle);
        }
    }

    #[test]
    fn greedy_bounds_and_monotonicity(seed in any::<u64>(), d in 1usize..=3, n in 2u32..=5, m in 1usize..=20) {
        let m = m.min(1 << (n - 1 + (d as u32 - 1) * n));
        let set = PointSet::new(d, shell_instance(seed, d, n, m)).unwrap();
        let mut last = (f64::INFINITY, f64::INFINITY);
        for alpha in ALPHAS {
            let nu_e = nu_alpha(&set, n, alpha, Method::Exact).unwrap();
            let nu_g = nu_alpha(&set, n, alpha, Method::Greedy).unwrap();
            let mu_e = mu_alpha(&set, n, alpha, 0.25, Method::Exact).unwrap();
            let mu_g = mu_alpha(&set, n, alpha, 0.25, Method::Greedy).unwrap();
            prop_assert!(nu_e <= nu_g + 1e-12);
            prop_assert!(mu_g <= mu_e + 1e-12);
            prop_assert!(nu_e >= 0.0 && mu_g >= 0.0);
            prop_assert!(nu_e <= last.0 + 1e-12 && mu_e <= last.1 + 1e-12);
            last = (nu_e, mu_e);
        }
    }
}
