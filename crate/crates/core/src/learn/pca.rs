use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::error::LearnError;
use crate::util::{dot, l2_norm, seeded};

#[derive(Clone, Debug, PartialEq)]
pub struct Pca {
    pub mean: Vec<f64>,
    /// Unit-length principal axes, strongest first.
    pub components: Vec<Vec<f64>>,
    /// Variance along each component.
    pub eigenvalues: Vec<f64>,
    /// Share of total variance per component.
    pub explained_ratio: Vec<f64>,
    pub projected: Vec<Vec<f64>>,
}

impl Pca {
    pub fn project(&self, row: &[f64]) -> Vec<f64> {
        let c: Vec<f64> = row.iter().zip(&self.mean).map(|(x, m)| x - m).collect();
        self.components.iter().map(|v| dot(v, &c)).collect()
    }

    pub fn reconstruct(&self, coords: &[f64]) -> Vec<f64> {
        let mut out = self.mean.clone();
        for (v, &a) in self.components.iter().zip(coords) {
            for (o, vi) in out.iter_mut().zip(v) {
                *o += a * vi;
            }
        }
        out
    }
}

fn matvec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Top `k` principal components of mean-centred rows by power iteration with
/// deflation. Each axis is signed so its largest-magnitude entry is positive.
pub fn pca_project(rows: &[Vec<f64>], k: usize) -> Result<Pca, LearnError> {
    if rows.is_empty() {
        return Err(LearnError::EmptyDataset);
    }
    let dim = rows[0].len();
    if k == 0 || k > dim {
        return Err(LearnError::Components { requested: k, dim });
    }
    if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != dim) {
        return Err(LearnError::Shape {
            row,
            expected: dim,
            found: r.len(),
        });
    }
    let n = rows.len() as f64;
    let mut mean = vec![0.0; dim];
    for r in rows {
        for (m, v) in mean.iter_mut().zip(r) {
            *m += v / n;
        }
    }
    let mut cov = vec![vec![0.0; dim]; dim];
    for r in rows {
        let c: Vec<f64> = r.iter().zip(&mean).map(|(x, m)| x - m).collect();
        for i in 0..dim {
            for j in 0..dim {
                cov[i][j] += c[i] * c[j] / n;
            }
        }
    }
    let total_var: f64 = (0..dim).map(|i| cov[i][i]).sum();
    let scale = (0..dim)
        .flat_map(|i| cov[i].iter().map(|v| libm::fabs(*v)))
        .fold(0.0, f64::max);

    let mut rng = seeded(0x5eed_0f_9ca);
    let mut components: Vec<Vec<f64>> = Vec::new();
    let mut eigenvalues = Vec::new();
    for _ in 0..k {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let orth = |v: &mut Vec<f64>, comps: &[Vec<f64>]| {
            for c in comps {
                let p = dot(v, c);
                v.iter_mut().zip(c).for_each(|(x, ci)| *x -= p * ci);
            }
            let nv = l2_norm(v);
            v.iter_mut().for_each(|x| *x /= nv);
        };
        orth(&mut v, &components);
        let mut lambda = 0.0;
        for _ in 0..100_000 {
            let mut next = matvec(&cov, &v);
            // Re-orthogonalising each sweep keeps the iteration in the deflated space.
            for c in &components {
                let p = dot(&next, c);
                next.iter_mut().zip(c).for_each(|(x, ci)| *x -= p * ci);
            }
            let norm = l2_norm(&next);
            if norm <= 1e-14 * libm::fmax(scale, 1e-300) {
                // No variance left: any orthonormal completion is an eigenvector of 0.
                lambda = 0.0;
                break;
            }
            next.iter_mut().for_each(|x| *x /= norm);
            let delta: f64 = next.iter().zip(&v).map(|(a, b)| libm::fabs(a - b)).sum();
            v = next;
            lambda = norm;
            if delta < 1e-13 {
                break;
            }
        }
        let mut i_max = 0;
        for i in 1..dim {
            if libm::fabs(v[i]) > libm::fabs(v[i_max]) + 1e-12 {
                i_max = i;
            }
        }
        if v[i_max] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        eigenvalues.push(if lambda == 0.0 { 0.0 } else { dot(&v, &matvec(&cov, &v)) });
        components.push(v);
    }
    let explained_ratio = eigenvalues
        .iter()
        .map(|e| if total_var > 0.0 { e / total_var } else { 0.0 })
        .collect();
    let mut pca = Pca {
        mean,
        components,
        eigenvalues,
        explained_ratio,
        projected: Vec::new(),
    };
    pca.projected = rows.iter().map(|r| pca.project(r)).collect();
    Ok(pca)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn line_has_one_component() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, 2.0 * i as f64, 1.0]).collect();
        let p = pca_project(&rows, 1).unwrap();
        assert!((p.explained_ratio[0] - 1.0).abs() < 1e-9);
        let v = &p.components[0];
        assert!((v[1] / v[0] - 2.0).abs() < 1e-9 && v[1] > 0.0);
    }

    #[test]
    fn isotropic_sample_matches_covariance_oracle() {
        let mut rng = seeded(9);
        let rows: Vec<Vec<f64>> = (0..4000)
            .map(|_| (0..2).map(|_| StandardNormal.sample(&mut rng)).collect())
            .collect();
        let p = pca_project(&rows, 2).unwrap();
        // Closed-form eigenvalues of the 2x2 sample covariance.
        let n = rows.len() as f64;
        let m: Vec<f64> = (0..2).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n).collect();
        let c = |a: usize, b: usize| rows.iter().map(|r| (r[a] - m[a]) * (r[b] - m[b])).sum::<f64>() / n;
        let (a, b, d) = (c(0, 0), c(0, 1), c(1, 1));
        let tr = a + d;
        let disc = libm::sqrt((a - d) * (a - d) + 4.0 * b * b);
        let (l1, l2) = ((tr + disc) / 2.0, (tr - disc) / 2.0);
        assert!((p.eigenvalues[0] - l1).abs() < 1e-6);
        assert!((p.eigenvalues[1] - l2).abs() < 1e-6);
        assert!((p.eigenvalues[0] / p.eigenvalues[1] - 1.0).abs() < 0.15);
    }

    #[test]
    fn rank_k_reconstruction_is_lossless() {
        let basis = [[1.0, 0.0, 2.0, -1.0], [0.0, 1.0, 1.0, 1.0]];
        let mut rng = seeded(3);
        let rows: Vec<Vec<f64>> = (0..30)
            .map(|_| {
                let (a, b): (f64, f64) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
                (0..4).map(|j| 5.0 + a * basis[0][j] + b * basis[1][j]).collect()
            })
            .collect();
        let p = pca_project(&rows, 2).unwrap();
        for (r, z) in rows.iter().zip(&p.projected) {
            let back = p.reconstruct(z);
            assert!(r.iter().zip(&back).all(|(x, y)| (x - y).abs() < 1e-8));
        }
    }

    #[test]
    fn too_many_components() {
        assert_eq!(
            pca_project(&[vec![1.0, 2.0]], 3),
            Err(LearnError::Components { requested: 3, dim: 2 })
        );
    }
}
