//! Reduced-size exactness checks; the full-size runs live in the acceptance
//! harness of the command-line crate.

use std::sync::Arc;

use graphlet_gibbs::exact::{rat, RandomSource};
use graphlet_gibbs::oracle::enumerate::DEFAULT_CAP;
use graphlet_gibbs::oracle::fixtures::{complete, cycle, path, star};
use graphlet_gibbs::oracle::suites::{bipartite_c4, polymer_key};
use graphlet_gibbs::oracle::{
    chi_square, exact_hardcore_distribution, exact_polymer_distribution,
    exact_potts_majority_distribution, exact_rooted_distribution, exact_unrooted_distribution,
    expected_exact_tv, tv_distance, Empirical, ExactDistribution,
};
use graphlet_gibbs::percolation::{RootedSampler, UnrootedSampler, WeightSpec};
use graphlet_gibbs::polymer::{Cftp, PolymerModel};
use graphlet_gibbs::spin::{HardcoreSampler, PottsParams, PottsSampler};

const N: u64 = 20_000;

fn assert_close<K: Ord + std::fmt::Debug>(emp: &Empirical<K>, exact: &ExactDistribution<K>) {
    let tv = tv_distance(emp, exact).unwrap();
    let floor = expected_exact_tv(exact, emp.total());
    let chi = chi_square(emp, exact).unwrap();
    assert!(tv < 2.0 * floor + 0.005, "tv {tv} floor {floor}");
    assert!(chi.p_value > 1e-4, "{chi:?}");
}

#[test]
fn rooted_colored_path() {
    let g = path(5);
    let spec = WeightSpec::uniform(rat(1, 5), 2);
    let exact = exact_rooted_distribution(&g, 2, &spec, DEFAULT_CAP).unwrap();
    let mut sampler = RootedSampler::new(&g, spec).unwrap();
    let mut src = RandomSource::new(1);
    let emp: Empirical<_> = (0..N)
        .map(|_| sampler.sample(2, &mut src).unwrap().graphlet.cells())
        .collect();
    assert_close(&emp, &exact);
}

#[test]
fn rooted_with_vanishing_factor_on_large_sets() {
    let g = complete(4);
    let spec = WeightSpec::custom(rat(1, 10), 1, |gamma| {
        if gamma.len() > 2 {
            rat(0, 1).into()
        } else {
            rat(1, 2).into()
        }
    });
    let exact = exact_rooted_distribution(&g, 0, &spec, DEFAULT_CAP).unwrap();
    assert_eq!(exact.len(), 4);
    let mut sampler = RootedSampler::new(&g, spec).unwrap();
    let mut src = RandomSource::new(2);
    let emp: Empirical<_> = (0..N)
        .map(|_| sampler.sample(0, &mut src).unwrap().graphlet.cells())
        .collect();
    assert_close(&emp, &exact);
}

#[test]
fn unrooted_cycle() {
    let g = cycle(5).unwrap();
    let exact = exact_unrooted_distribution(&g, &rat(1, 5), DEFAULT_CAP).unwrap();
    let mut sampler = UnrootedSampler::new(&g, rat(1, 5)).unwrap();
    let mut src = RandomSource::new(3);
    let emp: Empirical<_> = (0..N)
        .map(|_| sampler.sample(&mut src).unwrap().graphlet.sorted_vertices())
        .collect();
    assert_close(&emp, &exact);
}

#[test]
fn polymer_star() {
    let model = PolymerModel::uniform(Arc::new(star(3)), rat(1, 10), 2).unwrap();
    let exact = exact_polymer_distribution(&model, DEFAULT_CAP).unwrap();
    let mut cftp = Cftp::new(&model).unwrap();
    let mut src = RandomSource::new(4);
    let emp: Empirical<_> = (0..N)
        .map(|_| polymer_key(cftp.sample(&mut src).unwrap().config))
        .collect();
    assert_close(&emp, &exact);
}

#[test]
fn hardcore_c4() {
    let g = Arc::new(bipartite_c4());
    let exact = exact_hardcore_distribution(&g, &rat(1, 10)).unwrap();
    let sampler = HardcoreSampler::new(g, rat(1, 10)).unwrap();
    let mut src = RandomSource::new(5);
    let emp: Empirical<_> = (0..N)
        .map(|_| sampler.sample(&mut src).unwrap().vertices)
        .collect();
    assert_close(&emp, &exact);
}

#[test]
fn potts_k4() {
    let g = Arc::new(complete(4));
    let exact = exact_potts_majority_distribution(&g, 2, &rat(3, 2)).unwrap();
    let sampler = PottsSampler::new(g, PottsParams::new(2, rat(3, 2), rat(2, 1)).unwrap()).unwrap();
    let mut src = RandomSource::new(6);
    let emp: Empirical<_> = (0..5_000)
        .map(|_| sampler.sample(&mut src).unwrap().colors)
        .collect();
    assert_close(&emp, &exact);
}
