//! Reference persistence by brute force.
//!
//! Every simplex up to one dimension above the requested homology is
//! enumerated and the full boundary matrix is reduced column by column,
//! with no clearing or skipping. Only meant for tiny inputs.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::rips::diagram::{close_unpaired, Feature, PersistenceDiagram};
use crate::rips::distance::DistanceMatrix;
use crate::rips::engine::check_args;

/// Largest point count the oracle accepts.
pub const ORACLE_MAX_POINTS: usize = 12;

pub fn naive_rips_oracle(
    d: &DistanceMatrix,
    max_dim: usize,
    max_eps: f64,
) -> Result<PersistenceDiagram> {
    check_args(max_dim, max_eps)?;
    let n = d.len();
    if n > ORACLE_MAX_POINTS {
        return Err(Error::OracleTooLarge {
            n,
            limit: ORACLE_MAX_POINTS,
        });
    }

    let mut simplices: Vec<(f64, Vec<usize>)> = Vec::new();
    let mut stack = vec![(Vec::new(), 0usize)];
    while let Some((verts, next)) = stack.pop() {
        if !verts.is_empty() {
            let value = diameter(d, &verts);
            if value > max_eps {
                continue;
            }
            simplices.push((value, verts.clone()));
        }
        if verts.len() < max_dim + 2 {
            for v in next..n {
                let mut grown = verts.clone();
                grown.push(v);
                stack.push((grown, v + 1));
            }
        }
    }
    simplices.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.len().cmp(&b.1.len()))
            .then(a.1.cmp(&b.1))
    });
    let index: HashMap<&[usize], usize> = simplices
        .iter()
        .enumerate()
        .map(|(i, s)| (s.1.as_slice(), i))
        .collect();

    let mut columns: Vec<Vec<usize>> = simplices
        .iter()
        .map(|(_, verts)| {
            let mut col: Vec<usize> = if verts.len() == 1 {
                Vec::new()
            } else {
                (0..verts.len())
                    .map(|skip| {
                        let face: Vec<usize> = verts
                            .iter()
                            .enumerate()
                            .filter(|&(k, _)| k != skip)
                            .map(|(_, &v)| v)
                            .collect();
                        index[face.as_slice()]
                    })
                    .collect()
            };
            col.sort_unstable();
            col
        })
        .collect();

    let mut low_owner: HashMap<usize, usize> = HashMap::new();
    for j in 0..columns.len() {
        while let Some(&low) = columns[j].last() {
            match low_owner.get(&low) {
                Some(&k) => {
                    let other = columns[k].clone();
                    columns[j] = add_mod2(&columns[j], &other);
                }
                None => {
                    low_owner.insert(low, j);
                    break;
                }
            }
        }
    }

    let mut features = Vec::new();
    for (&low, &j) in &low_owner {
        let dim = simplices[low].1.len() - 1;
        let (birth, death) = (simplices[low].0, simplices[j].0);
        if dim <= max_dim && birth < death {
            features.push(Feature::finite(dim, birth, death));
        }
    }
    let unpaired = (0..simplices.len())
        .filter(|&i| columns[i].is_empty() && !low_owner.contains_key(&i))
        .map(|i| (simplices[i].1.len() - 1, simplices[i].0))
        .filter(|&(dim, _)| dim <= max_dim);
    close_unpaired(&mut features, unpaired);
    Ok(PersistenceDiagram::new(features, max_eps))
}

fn diameter(d: &DistanceMatrix, verts: &[usize]) -> f64 {
    let mut best = 0.0f64;
    for (k, &a) in verts.iter().enumerate() {
        for &b in &verts[k + 1..] {
            best = best.max(d.get(a, b));
        }
    }
    best
}

fn add_mod2(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    let mut result = Vec::with_capacity(out.len());
    let mut i = 0;
    while i < out.len() {
        if i + 1 < out.len() && out[i] == out[i + 1] {
            i += 2;
        } else {
            result.push(out[i]);
            i += 1;
        }
    }
    result
}
