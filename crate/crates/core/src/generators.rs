//! Synthetic graphs for tests and desk-scale experiments.

use rand::Rng;

use crate::graph::Graph;

pub fn path_graph(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|v| (v - 1, v))).expect("path edges are simple")
}

/// `rows × cols` 4-neighbour lattice; vertex `(r, c)` has index `r * cols + c`.
pub fn grid_graph(rows: usize, cols: usize) -> Graph {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    Graph::new(rows * cols, edges).expect("grid edges are simple")
}

/// Star with vertex 0 as the hub.
pub fn star_graph(leaves: usize) -> Graph {
    Graph::new(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star edges are simple")
}

/// Random geometric graph: `n` points uniform in the unit square, joined when
/// their Euclidean distance is below `radius`. Returns the graph and the points.
pub fn random_geometric<R: Rng + ?Sized>(n: usize, radius: f64, rng: &mut R) -> (Graph, Vec<[f64; 2]>) {
    let points: Vec<[f64; 2]> = (0..n).map(|_| [rng.random::<f64>(), rng.random::<f64>()]).collect();
    let r2 = radius * radius;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = points[i][0] - points[j][0];
            let dy = points[i][1] - points[j][1];
            if dx * dx + dy * dy < r2 {
                edges.push((i, j));
            }
        }
    }
    (Graph::new(n, edges).expect("geometric edges are simple"), points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sizes() {
        assert_eq!(path_graph(4).n_edges(), 3);
        let g = grid_graph(20, 20);
        assert_eq!((g.n_vertices(), g.n_edges()), (400, 2 * 20 * 19));
        assert_eq!(star_graph(3).degree(0), 3);
    }

    #[test]
    fn geometric_is_seeded() {
        let a = random_geometric(50, 0.2, &mut ChaCha8Rng::seed_from_u64(3)).0;
        let b = random_geometric(50, 0.2, &mut ChaCha8Rng::seed_from_u64(3)).0;
        assert_eq!(a, b);
    }
}
