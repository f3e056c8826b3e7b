#![allow(dead_code)]

use proptest::prelude::*;
use tangles::prelude::*;

/// Random costed pool: `n` objects, up to `max_cuts` non-trivial cuts, small integer costs.
pub fn pool_strategy(max_n: usize, max_cuts: usize) -> impl Strategy<Value = CutPool> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(
            (prop::collection::vec(any::<bool>(), n), 0u8..6),
            0..=max_cuts,
        )
        .prop_map(move |raw| build_pool(n, &raw))
    })
}

pub fn build_pool(n: usize, raw: &[(Vec<bool>, u8)]) -> CutPool {
    let u = ObjectUniverse::new(n).unwrap();
    let cuts = raw
        .iter()
        .enumerate()
        .filter_map(|(id, (bits, cost))| {
            let mut c = make_cut(u, BitSet::from_bools(bits), id).ok()?;
            c.set_cost(*cost as f64);
            Some(c)
        })
        .collect();
    CutPool::new(u, cuts).unwrap()
}
