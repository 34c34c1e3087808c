//! Principal components of a small correlated table and the projection
//! SPAD+ histograms.

use ndarray::array;
use spadplus::pca::{covariance, symmetric_eigen};
use spadplus::PcaTransform;

fn main() -> spadplus::Result<()> {
    let train = array![
        [2.5, 2.4, 0.5],
        [0.5, 0.7, 1.9],
        [2.2, 2.9, 0.8],
        [1.9, 2.2, 1.1],
        [3.1, 3.0, 0.2],
        [2.3, 2.7, 0.9],
        [2.0, 1.6, 1.0],
        [1.0, 1.1, 1.6],
        [1.5, 1.6, 1.4],
        [1.1, 0.9, 1.7],
    ];
    let cov = covariance(train.view())?;
    println!("covariance\n{cov:.4}");
    let eig = symmetric_eigen(&cov)?;
    println!("jacobi sweeps: {}", eig.sweeps);

    let t = PcaTransform::fit(train.view())?;
    println!("eigenvalues {:.4?}", t.eigenvalues());
    println!("components (columns)\n{:.4}", t.components());
    println!(
        "components for 95% variance: {}",
        t.components_for_variance(0.95)
    );

    let projected = t.transform_rows(train.view())?;
    println!(
        "projected covariance\n{:.2e}",
        covariance(projected.view())?
    );
    println!(
        "x = mean -> {:?}",
        t.transform(t.mean().as_slice().unwrap())?
    );
    Ok(())
}
