//! Textbook persistence by full boundary-matrix reduction.
//!
//! Builds every simplex of dimension <= 2 with filtration value <= cap,
//! orders the whole filtration globally, reduces the complete boundary
//! matrix column by column, and reads off the dimension-1 pairs. No
//! shortcuts and no code shared with `cperiod_core::tda` beyond the
//! `PointCloud` accessors, so it can serve as an independent referee.

use cperiod_core::PointCloud;

#[derive(Debug, Clone)]
struct Simplex {
    value: f64,
    verts: Vec<usize>,
}

/// Dimension-1 persistence pairs of the capped VR filtration, sorted by
/// `(birth, death)`, zero-persistence pairs dropped, unkilled classes
/// assigned `death = cap`.
pub fn vr_h1_bruteforce(cloud: &PointCloud, cap: f64) -> Vec<(f64, f64)> {
    let n = cloud.count();
    let dist = |i: usize, j: usize| {
        cloud
            .point(i)
            .iter()
            .zip(cloud.point(j))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    };

    let mut simplices: Vec<Simplex> = Vec::new();
    for i in 0..n {
        simplices.push(Simplex {
            value: 0.0,
            verts: vec![i],
        });
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = dist(i, j);
            if d <= cap {
                simplices.push(Simplex {
                    value: d,
                    verts: vec![i, j],
                });
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if dist(i, j) > cap {
                continue;
            }
            for k in j + 1..n {
                let value = dist(i, j).max(dist(i, k)).max(dist(j, k));
                if value <= cap {
                    simplices.push(Simplex {
                        value,
                        verts: vec![i, j, k],
                    });
                }
            }
        }
    }

    // global filtration order: value, then dimension, then vertex order
    simplices.sort_by(|a, b| {
        a.value
            .partial_cmp(&b.value)
            .unwrap()
            .then(a.verts.len().cmp(&b.verts.len()))
            .then(a.verts.cmp(&b.verts))
    });

    // face lookup by vertex set
    let mut index_of = std::collections::HashMap::new();
    for (idx, s) in simplices.iter().enumerate() {
        index_of.insert(s.verts.clone(), idx);
    }

    // boundary columns over GF(2)
    let columns: Vec<Vec<usize>> = simplices
        .iter()
        .map(|s| {
            if s.verts.len() == 1 {
                return Vec::new();
            }
            let mut faces: Vec<usize> = (0..s.verts.len())
                .map(|omit| {
                    let face: Vec<usize> = s
                        .verts
                        .iter()
                        .enumerate()
                        .filter(|(pos, _)| *pos != omit)
                        .map(|(_, v)| *v)
                        .collect();
                    index_of[&face]
                })
                .collect();
            faces.sort_unstable();
            faces
        })
        .collect();

    // standard left-to-right reduction
    let total = simplices.len();
    let mut reduced: Vec<Vec<usize>> = Vec::with_capacity(total);
    let mut pivot_owner: Vec<Option<usize>> = vec![None; total];
    let mut killed: Vec<bool> = vec![false; total];
    let mut pairs: Vec<(f64, f64)> = Vec::new();

    for j in 0..total {
        let mut col = columns[j].clone();
        while let Some(&low) = col.last() {
            match pivot_owner[low] {
                Some(owner) => col = xor(&col, &reduced[owner]),
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            pivot_owner[low] = Some(j);
            killed[low] = true;
            if simplices[low].verts.len() == 2 {
                let (birth, death) = (simplices[low].value, simplices[j].value);
                if death > birth {
                    pairs.push((birth, death));
                }
            }
        }
        reduced.push(col);
    }

    // essential 1-classes: creator edges never killed
    for (idx, s) in simplices.iter().enumerate() {
        if s.verts.len() == 2 && reduced[idx].is_empty() && !killed[idx] && s.value < cap {
            pairs.push((s.value, cap));
        }
    }

    pairs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pairs
}

fn xor(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => {
                out.push(a[x]);
                x += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[y]);
                y += 1;
            }
            std::cmp::Ordering::Equal => {
                x += 1;
                y += 1;
            }
        }
    }
    out.extend_from_slice(&a[x..]);
    out.extend_from_slice(&b[y..]);
    out
}
