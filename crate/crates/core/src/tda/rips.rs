//! Vietoris-Rips H₁ persistence by column reduction over GF(2).
//!
//! Only what dimension-1 persistence needs is materialized: edges and
//! triangles with filtration value at most the cap. Edges that merge
//! components (found by union-find over the sorted edge list) can never
//! carry a 1-cycle, so the boundary reduction runs on the triangle columns
//! alone — the practical shortcut that keeps desk-scale clouds fast without
//! touching the full boundary matrix.

use crate::error::{Error, Result};
use crate::pointcloud::{euclidean, PointCloud};

use super::PersistenceDiagram;

const NO_PIVOT: u32 = u32::MAX;

/// Computes the dimension-1 persistence diagram of the Vietoris-Rips
/// filtration on `cloud`, truncated at `cap`.
///
/// Edges enter at their Euclidean length, triangles at their longest edge;
/// ties are broken by lexicographic vertex order. Classes unkilled at the
/// cap are recorded with death equal to the cap; zero-persistence pairs are
/// dropped.
pub fn vr_persistence_h1(cloud: &PointCloud, cap: f64) -> Result<PersistenceDiagram> {
    assert!(
        cap.is_finite() && cap > 0.0,
        "filtration cap must be positive"
    );
    if !cloud.is_finite() {
        return Err(Error::validation(
            "points",
            "non-finite coordinate in cloud",
        ));
    }
    let n = cloud.count();
    let pairs = reduce_triangle_boundaries(cloud, cap, n);
    Ok(PersistenceDiagram::new(pairs, 1, cap))
}

fn reduce_triangle_boundaries(cloud: &PointCloud, cap: f64, n: usize) -> Vec<(f64, f64)> {
    if n < 3 {
        return Vec::new();
    }

    // pairwise distances, row-major upper triangle mirrored
    let mut dist = vec![0.0f64; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = euclidean(cloud.point(i), cloud.point(j));
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }

    // edges at or below the cap, sorted by (value, i, j)
    let mut edges: Vec<(f64, u32, u32)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let d = dist[i * n + j];
            if d <= cap {
                edges.push((d, i as u32, j as u32));
            }
        }
    }
    edges.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));

    // union-find flags the edges that create cycles (birth candidates)
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    let mut creates_cycle = vec![false; edges.len()];
    for (e, &(_, i, j)) in edges.iter().enumerate() {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri == rj {
            creates_cycle[e] = true;
        } else {
            parent[ri as usize] = rj;
        }
    }

    // edge index lookup for triangle boundaries
    let mut edge_id = vec![NO_PIVOT; n * n];
    for (e, &(_, i, j)) in edges.iter().enumerate() {
        edge_id[i as usize * n + j as usize] = e as u32;
    }

    // triangles at or below the cap, sorted by (value, i, j, k)
    let mut triangles: Vec<(f64, u32, u32, u32)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let dij = dist[i * n + j];
            if dij > cap {
                continue;
            }
            for k in j + 1..n {
                let dik = dist[i * n + k];
                if dik > cap {
                    continue;
                }
                let djk = dist[j * n + k];
                if djk > cap {
                    continue;
                }
                triangles.push((dij.max(dik).max(djk), i as u32, j as u32, k as u32));
            }
        }
    }
    triangles.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));

    // left-to-right reduction of the triangle boundary columns
    let mut pivot_owner = vec![NO_PIVOT; edges.len()];
    let mut reduced_cols: Vec<Vec<u32>> = Vec::with_capacity(triangles.len());
    let mut diagram = Vec::new();
    let mut scratch = Vec::new();

    for &(tri_value, i, j, k) in &triangles {
        let mut col = vec![
            edge_id[i as usize * n + j as usize],
            edge_id[i as usize * n + k as usize],
            edge_id[j as usize * n + k as usize],
        ];
        col.sort_unstable();
        // a column that empties out created a 2-cycle, irrelevant here
        while let Some(&pivot) = col.last() {
            let owner = pivot_owner[pivot as usize];
            if owner == NO_PIVOT {
                pivot_owner[pivot as usize] = reduced_cols.len() as u32;
                let birth = edges[pivot as usize].0;
                if tri_value > birth {
                    diagram.push((birth, tri_value));
                }
                reduced_cols.push(col);
                break;
            }
            xor_into(&mut col, &reduced_cols[owner as usize], &mut scratch);
        }
    }

    // cycle-creating edges never killed by a triangle die at the cap
    for (e, &(value, _, _)) in edges.iter().enumerate() {
        if creates_cycle[e] && pivot_owner[e] == NO_PIVOT && value < cap {
            diagram.push((value, cap));
        }
    }

    diagram
}

/// `a ^= b` on sorted index vectors (symmetric difference).
fn xor_into(a: &mut Vec<u32>, b: &[u32], scratch: &mut Vec<u32>) {
    scratch.clear();
    let (mut x, mut y) = (0usize, 0usize);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => {
                scratch.push(a[x]);
                x += 1;
            }
            std::cmp::Ordering::Greater => {
                scratch.push(b[y]);
                y += 1;
            }
            std::cmp::Ordering::Equal => {
                x += 1;
                y += 1;
            }
        }
    }
    scratch.extend_from_slice(&a[x..]);
    scratch.extend_from_slice(&b[y..]);
    std::mem::swap(a, scratch);
}
