//! Map-level properties: organization of trained maps, chain reduction and
//! the relationship between label granularities.

use segmap::grouping::{map_main_classes, reduce_superclasses, MainClassMap, ReductionOptions, SuperClassMap};
use segmap::panel::{apply_standardization, fit_standardization, pool_years, PanelDataset, StandardizationParams};
use segmap::som::{init_codebook, train_online, CodeBook, InitMethod, Topology, TrainingSchedule};
use segmap::synth::{generate_panel, Emission, SynthConfig};
use segmap::trajectory::{build_trajectories, project_year, Granularity};

const YEARS: [i32; 5] = [2001, 2002, 2003, 2004, 2005];

fn codes() -> Vec<String> {
    ["X1", "X2", "X3"].iter().map(|s| s.to_string()).collect()
}

/// Four clusters placed along a line, six spreads apart.
fn collinear_panel(seed: u64) -> PanelDataset {
    let k = 4;
    let cfg = SynthConfig {
        n_individuals: 300,
        years: YEARS.to_vec(),
        codes: codes(),
        latent_labels: None,
        latent_p: (0..k).map(|a| (0..k).map(|b| if a == b { 0.7 } else { 0.1 }).collect()).collect(),
        initial: vec![0.25; 4],
        emissions: (0..k).map(|c| Emission { mean: vec![6.0 * c as f64; 3], spread: vec![1.0; 3] }).collect(),
        missing_rate: 0.02,
        seed,
    };
    generate_panel(&cfg).unwrap().0
}

fn trained_map(panel: &PanelDataset, rows: usize, cols: usize, seed: u64) -> (StandardizationParams, CodeBook) {
    let pooled = pool_years(panel, &YEARS, &codes()).unwrap();
    let params = fit_standardization(&pooled).unwrap();
    let z = apply_standardization(&params, &pooled).unwrap();
    let topology = Topology::grid2d(rows, cols).unwrap();
    let init = init_codebook(topology, &z, seed, InitMethod::Sample).unwrap();
    let trained = train_online(&init, &z, &TrainingSchedule::default_for(&topology, seed)).unwrap();
    (params, trained.codebook)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[test]
fn adjacent_units_are_closer_than_average() {
    for seed in [1, 2, 3] {
        let (_, cb) = trained_map(&collinear_panel(seed), 8, 8, seed);
        let (adjacent, all) = cb.neighbor_contrast();
        assert!(adjacent < all, "seed {seed}: adjacent {adjacent} vs all {all}");
    }
}

#[test]
fn chain_neighbors_are_nearest() {
    let (_, cb) = trained_map(&collinear_panel(4), 8, 8, 4);
    let map = reduce_superclasses(&cb, &ReductionOptions::new(4, 4)).unwrap();
    let chain = &map.chain_codebook;
    for u in 0..chain.unit_count() {
        let nearest = (0..chain.unit_count())
            .filter(|&v| v != u)
            .min_by(|&a, &b| dist(chain.vector(u), chain.vector(a)).total_cmp(&dist(chain.vector(u), chain.vector(b))))
            .unwrap();
        assert_eq!(nearest.abs_diff(u), 1, "unit {u} is nearest to {nearest}");
    }
}

fn seven_way(cb: &CodeBook) -> SuperClassMap {
    let mut opts = ReductionOptions::new(7, 9);
    opts.orientation = Some(0);
    reduce_superclasses(cb, &opts).unwrap()
}

#[test]
fn main_classes_compose_super_classes() {
    let panel = collinear_panel(5);
    let (params, cb) = trained_map(&panel, 8, 8, 5);
    let map = seven_way(&cb);
    let main = MainClassMap::default_seven();
    let sup = build_trajectories(&panel, &YEARS, &params, &cb, Granularity::Super(&map)).unwrap();
    let top = build_trajectories(&panel, &YEARS, &params, &cb, Granularity::Main(&map, &main)).unwrap();
    assert_eq!(map_main_classes(&map, &main, sup.labels()).unwrap(), top.labels());
    assert_eq!(top.alphabet(), ["A", "B", "C", "D"]);

    let rows = panel.individual_ids().len() * YEARS.len();
    let count = |labels: &[usize], k: usize| {
        let mut c = vec![0usize; k];
        for &l in labels {
            c[l] += 1;
        }
        c
    };
    let super_sizes = count(sup.labels(), 7);
    let main_sizes = count(top.labels(), 4);
    assert_eq!(super_sizes.iter().sum::<usize>(), rows);
    assert_eq!(main_sizes.iter().sum::<usize>(), rows);
    let lookup = main.lookup(7).unwrap();
    for (m, &size) in main_sizes.iter().enumerate() {
        let from_super: usize = (0..7).filter(|&s| lookup[s] == m).map(|s| super_sizes[s]).sum();
        assert_eq!(size, from_super);
    }
}

#[test]
fn unit_granularity_feeds_super_granularity() {
    let panel = collinear_panel(6);
    let (params, cb) = trained_map(&panel, 4, 4, 6);
    let map = seven_way(&cb);
    let units = build_trajectories(&panel, &YEARS, &params, &cb, Granularity::Unit).unwrap();
    let sup = build_trajectories(&panel, &YEARS, &params, &cb, Granularity::Super(&map)).unwrap();
    for (&u, &s) in units.labels().iter().zip(sup.labels()) {
        assert_eq!(map.unit_to_super[u], s);
    }
}

#[test]
fn unused_missing_variable_leaves_projection_alone() {
    let panel = collinear_panel(7);
    let (params, cb) = trained_map(&panel, 4, 4, 7);
    let mut wide_params = params.clone();
    wide_params.codes.push("EXTRA".into());
    wide_params.mean.push(3.0);
    wide_params.scale.push(2.0);
    let wide_vectors: Vec<Vec<f64>> = cb.vectors().enumerate().map(|(u, v)| [v, &[u as f64 * 0.37]].concat()).collect();
    let wide = CodeBook::from_vectors(*cb.topology(), &wide_vectors).unwrap();

    let (n, t_len, d) = panel.shape();
    for i in 0..n {
        for t in 0..t_len {
            let values: Vec<f64> = (0..d).map(|j| panel.get(i, t, j).unwrap_or(0.0)).collect();
            let missing: Vec<bool> = (0..d).map(|j| panel.is_missing(i, t, j)).collect();
            if missing.iter().all(|&m| m) {
                continue;
            }
            let narrow = project_year(&params, &cb, &values, &missing).unwrap();
            let values_wide = [values.as_slice(), &[123.0]].concat();
            let missing_wide = [missing.as_slice(), &[true]].concat();
            assert_eq!(project_year(&wide_params, &wide, &values_wide, &missing_wide).unwrap(), narrow);
        }
    }
}
