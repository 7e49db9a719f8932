//! Fixtures shared by the benchmarks.

use graphdim_core::barlow_taylor::PointSet;
use graphdim_core::gw::sample_iic_tree;
use graphdim_core::Graph;

/// Kesten tree of critical binary branching.
pub fn kesten_tree(depth: usize, seed: u64) -> Graph {
    sample_iic_tree(&"binomial:2:0.5".parse().unwrap(), depth, seed)
        .unwrap()
        .tree
}

/// The square `[-2^n, 2^n]^2` in the plane `z = 0` of `Z^3`.
pub fn plane_in_z3(n: u32) -> PointSet {
    let r = 1i32 << n;
    PointSet::new(
        3,
        (-r..=r).flat_map(|x| (-r..=r).map(move |y| vec![x, y, 0])),
    )
    .unwrap()
}
