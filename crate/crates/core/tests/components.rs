//! Principal component properties on random data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use segmap::panel::ObservationMatrix;
use segmap::pca::correlation_pca;

fn random_rows(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    let mix: Vec<Vec<f64>> = (0..d).map(|_| (0..d).map(|_| rng.random::<f64>() - 0.5).collect()).collect();
    (0..n)
        .map(|_| {
            let z: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
            (0..d).map(|j| (0..d).map(|k| mix[j][k] * z[k]).sum::<f64>() + 0.2 * z[j]).collect()
        })
        .collect()
}

fn codes(d: usize) -> Vec<String> {
    (0..d).map(|j| format!("v{j}")).collect()
}

#[test]
fn scores_reconstruct_standardized_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for d in 2..=7 {
        let rows = random_rows(&mut rng, 60, d);
        let r = correlation_pca(&ObservationMatrix::from_dense(codes(d), &rows).unwrap()).unwrap();
        for j in 0..d {
            let col: Vec<f64> = rows.iter().map(|x| x[j]).collect();
            let mean = col.iter().sum::<f64>() / col.len() as f64;
            let sd = (col.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / col.len() as f64).sqrt();
            for (i, x) in col.iter().enumerate() {
                let back: f64 = (0..d).map(|k| r.scores[i][k] * r.loadings[j][k]).sum();
                assert!((back - (x - mean) / sd).abs() < 1e-8, "d {d}, row {i}, var {j}");
            }
        }
        assert!((r.explained[d - 1] - 1.0).abs() <= 1e-10);
        assert!(r.explained.windows(2).all(|w| w[1] >= w[0]));
    }
}

#[test]
fn row_order_does_not_matter() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let d = 5;
    let rows = random_rows(&mut rng, 80, d);
    let mut shuffled = rows.clone();
    shuffled.reverse();
    shuffled.rotate_left(17);
    let a = correlation_pca(&ObservationMatrix::from_dense(codes(d), &rows).unwrap()).unwrap();
    let b = correlation_pca(&ObservationMatrix::from_dense(codes(d), &shuffled).unwrap()).unwrap();
    for k in 0..d {
        assert!((a.eigenvalues[k] - b.eigenvalues[k]).abs() < 1e-10);
        for j in 0..d {
            assert!((a.loadings[j][k] - b.loadings[j][k]).abs() < 1e-8);
        }
    }
}
