/// Cluster labels for every point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub labels: Vec<usize>,
    /// The densest point was not a centre and joined its nearest centre.
    pub densest_reassigned: bool,
}

/// Propagates labels down the nearest-higher-density links.
///
/// Points are visited in density order, so each link target is labelled
/// before the points that refer to it. Centre `c` at position `p` in
/// `centers` gets label `p`. `distance` is only called when the densest point
/// is not a centre.
pub fn assign(
    rho_order: &[usize],
    nhd: &[Option<usize>],
    centers: &[usize],
    mut distance: impl FnMut(usize, usize) -> f64,
) -> Assignment {
    assert!(!centers.is_empty(), "at least one centre is required");
    let n = rho_order.len();
    let mut labels = vec![usize::MAX; n];
    for (id, &c) in centers.iter().enumerate() {
        labels[c] = id;
    }
    let mut densest_reassigned = false;
    for &i in rho_order {
        if labels[i] != usize::MAX {
            continue;
        }
        labels[i] = match nhd[i] {
            Some(j) => labels[j],
            None => {
                densest_reassigned = true;
                let mut best = (f64::INFINITY, 0);
                for (id, &c) in centers.iter().enumerate() {
                    let d = distance(i, c);
                    if d < best.0 {
                        best = (d, id);
                    }
                }
                best.1
            }
        };
    }
    Assignment {
        labels,
        densest_reassigned,
    }
}
