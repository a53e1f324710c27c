use crate::geometry::Point2;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    /// The point that opened the cluster.
    pub center: Point2<f64>,
    /// Largest member distance from the centre, `≤ eps`.
    pub radius: f64,
    pub count: usize,
}

/// Greedy first-fit: each point joins the earliest-opened cluster whose centre
/// is within `eps`, or opens a new one.
///
/// Centres are bucketed on an `eps` grid so a lookup only scans the 3×3
/// neighbouring buckets; the result is the same as the quadratic scan.
pub fn first_fit(points: &[Point2<f64>], eps: f64) -> Vec<Cluster> {
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let key = |p: &Point2<f64>| ((p.x / eps).floor() as i64, (p.y / eps).floor() as i64);
    for p in points {
        let (bx, by) = key(p);
        let mut best: Option<(usize, f64)> = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(ids) = buckets.get(&(bx + dx, by + dy)) else { continue };
                for &i in ids {
                    let d = clusters[i].center.dist(p);
                    if d <= eps && best.is_none_or(|(j, _)| i < j) {
                        best = Some((i, d));
                    }
                }
            }
        }
        match best {
            Some((i, d)) => {
                let c = &mut clusters[i];
                c.radius = c.radius.max(d);
                c.count += 1;
            }
            None => {
                buckets.entry((bx, by)).or_default().push(clusters.len());
                clusters.push(Cluster { center: p.clone(), radius: 0.0, count: 1 });
            }
        }
    }
    clusters
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(points: &[Point2<f64>], eps: f64) -> Vec<Cluster> {
        let mut out: Vec<Cluster> = Vec::new();
        for p in points {
            match out.iter_mut().find(|c| c.center.dist(p) <= eps) {
                Some(c) => {
                    c.radius = c.radius.max(c.center.dist(p));
                    c.count += 1;
                }
                None => out.push(Cluster { center: p.clone(), radius: 0.0, count: 1 }),
            }
        }
        out
    }

    #[test]
    fn matches_quadratic_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<Point2<f64>> = (0..3000).map(|_| Point2::new(rng.gen::<f64>() - 0.5, rng.gen())).collect();
        for eps in [0.003, 0.05, 0.2] {
            assert_eq!(first_fit(&pts, eps), naive(&pts, eps));
        }
    }

    #[test]
    fn empty_and_single() {
        assert!(first_fit(&[], 0.1).is_empty());
        let c = first_fit(&[Point2::new(1.0, 2.0), Point2::new(1.0, 2.05)], 0.1);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].count, 2);
    }
}
