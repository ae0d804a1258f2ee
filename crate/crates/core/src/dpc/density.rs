use crate::kdtree::NeighborSet;
use crate::{Error, Result};

/// Local densities and the descending density order.
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    pub rho: Vec<f64>,
    /// Point indices by descending density, ascending index on ties.
    pub order: Vec<usize>,
    /// Points whose k neighbours all coincide with them; their density is
    /// `+inf`.
    pub coincident: Vec<usize>,
}

impl Density {
    /// `rank[i]` is the position of point `i` in [`Density::order`].
    pub fn ranks(&self) -> Vec<usize> {
        ranks_of(&self.order)
    }
}

pub(crate) fn ranks_of(order: &[usize]) -> Vec<usize> {
    let mut rank = vec![0; order.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    rank
}

/// Sorts indices by descending value, ascending index on ties.
pub(crate) fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    order
}

/// Density of each point as the reciprocal of the summed distances to its k
/// nearest neighbours. `neighbors[i]` must belong to point `i`.
pub fn local_density(neighbors: &[NeighborSet]) -> Result<Density> {
    let k = neighbors.first().map_or(0, NeighborSet::k);
    if k == 0 {
        return Err(Error::InvalidParameter(
            "neighbour sets must be non-empty".into(),
        ));
    }
    let mut rho = Vec::with_capacity(neighbors.len());
    let mut coincident = Vec::new();
    for (i, set) in neighbors.iter().enumerate() {
        if set.owner != i {
            return Err(Error::InvalidParameter(format!(
                "neighbour set {i} belongs to point {}",
                set.owner
            )));
        }
        if set.k() != k {
            return Err(Error::InvalidParameter(format!(
                "point {i} has {} neighbours, expected {k}",
                set.k()
            )));
        }
        if set.contains(i) {
            return Err(Error::InvalidParameter(format!(
                "point {i} lists itself as a neighbour"
            )));
        }
        // ascending order, same as the neighbour list
        let sum: f64 = set.neighbors.iter().map(|n| n.distance).sum();
        if sum == 0.0 {
            coincident.push(i);
            rho.push(f64::INFINITY);
        } else {
            rho.push(1.0 / sum);
        }
    }
    let order = descending_order(&rho);
    Ok(Density {
        rho,
        order,
        coincident,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kdtree::Neighbor;

    fn set(owner: usize, pairs: &[(usize, f64)]) -> NeighborSet {
        NeighborSet {
            owner,
            neighbors: pairs
                .iter()
                .map(|&(index, distance)| Neighbor { index, distance })
                .collect(),
        }
    }

    #[test]
    fn reciprocal_of_distance_sum() {
        let d = local_density(&[
            set(0, &[(1, 1.0), (2, 3.0)]),
            set(1, &[(0, 1.0), (2, 2.0)]),
            set(2, &[(1, 2.0), (0, 3.0)]),
        ])
        .unwrap();
        assert_eq!(d.rho[0], 0.25);
    }

    #[test]
    fn equal_densities_order_by_index() {
        let d = local_density(&[set(0, &[(1, 2.0)]), set(1, &[(0, 2.0)])]).unwrap();
        assert_eq!(d.rho, vec![0.5, 0.5]);
        assert_eq!(d.order, vec![0, 1]);
    }

    #[test]
    fn coincident_points_get_infinite_density_first() {
        let d = local_density(&[
            set(0, &[(1, 1.0)]),
            set(1, &[(2, 0.0)]),
            set(2, &[(1, 0.0)]),
        ])
        .unwrap();
        assert_eq!(d.coincident, vec![1, 2]);
        assert_eq!(d.order, vec![1, 2, 0]);
        assert_eq!(d.ranks(), vec![2, 0, 1]);
    }

    #[test]
    fn rejects_malformed_sets() {
        assert!(local_density(&[]).is_err());
        assert!(local_density(&[set(0, &[(0, 1.0)]), set(1, &[(0, 1.0)])]).is_err());
        assert!(local_density(&[set(0, &[(1, 1.0)]), set(1, &[(0, 1.0), (2, 1.0)])]).is_err());
        assert!(local_density(&[set(1, &[(0, 1.0)]), set(0, &[(1, 1.0)])]).is_err());
    }
}
