use crate::error::{Error, Result};
use crate::media::Medium;

/// Spatial lattice for the chain. Every interface and both window ends are nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    nodes: Vec<f64>,
    interface_nodes: Vec<usize>,
    h: f64,
}

/// Uniform spacing within each piece, `ceil(len/h)` subintervals per piece.
pub fn build_grid(medium: &Medium, h: f64) -> Result<Grid> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("grid spacing must be positive, got {h}")));
    }
    let narrowest = medium.pieces().iter().map(|p| p.len()).fold(f64::INFINITY, f64::min);
    if h >= narrowest {
        return Err(Error::SpacingTooLarge { h, narrowest });
    }
    let mut nodes = Vec::new();
    let mut interface_nodes = Vec::new();
    for (i, piece) in medium.pieces().iter().enumerate() {
        let n = ((piece.len() / h) - 1e-9).ceil().max(1.0) as usize;
        if i > 0 {
            interface_nodes.push(nodes.len() - 1);
        }
        let start = if i == 0 { 0 } else { 1 };
        for m in start..=n {
            let x = if m == n { piece.right } else { piece.left + piece.len() * m as f64 / n as f64 };
            nodes.push(x);
        }
    }
    Ok(Grid { nodes, interface_nodes, h })
}

impl Grid {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Requested spacing.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Node indices of the interfaces, in interface order.
    pub fn interface_nodes(&self) -> &[usize] {
        &self.interface_nodes
    }

    pub fn is_interface_node(&self, k: usize) -> bool {
        self.interface_nodes.binary_search(&k).is_ok()
    }

    /// Index of the node at `x`, tolerating rounding at the 1e-9·h level.
    pub fn node_index(&self, x: f64) -> Option<usize> {
        let tol = 1e-9 * self.h;
        let i = self.nodes.partition_point(|&y| y < x - tol);
        (i < self.nodes.len() && (self.nodes[i] - x).abs() <= tol).then_some(i)
    }

    pub fn spacing_left(&self, k: usize) -> Option<f64> {
        (k > 0).then(|| self.nodes[k] - self.nodes[k - 1])
    }

    pub fn spacing_right(&self, k: usize) -> Option<f64> {
        (k + 1 < self.nodes.len()).then(|| self.nodes[k + 1] - self.nodes[k])
    }

    /// Stable fingerprint of the node coordinates (FNV-1a over the bit patterns).
    pub fn id(&self) -> u64 {
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for x in &self.nodes {
            for b in x.to_bits().to_le_bytes() {
                hash ^= b as u64;
                hash = hash.wrapping_mul(0x0100_0000_01b3);
            }
        }
        hash
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::{Interface, MediumSpec, Piece};

    fn one_interface(at: f64) -> Medium {
        Medium::new(MediumSpec {
            window: [-1.0, 1.0],
            bounds: [0.5, 2.0],
            interfaces: vec![Interface::with_lambda(at, 0.5)],
            pieces: vec![Piece::constant(-1.0, at, 1.0, 1.0), Piece::constant(at, 1.0, 1.0, 1.0)],
        })
        .unwrap()
    }

    #[test]
    fn interface_at_origin() {
        let g = build_grid(&one_interface(0.0), 0.5).unwrap();
        assert_eq!(g.nodes(), &[-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(g.interface_nodes(), &[2]);
    }

    #[test]
    fn per_piece_rounding() {
        let g = build_grid(&one_interface(0.3), 0.5).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.nodes()[3], 0.3);
        assert!((g.spacing_right(0).unwrap() - 1.3 / 3.0).abs() < 1e-15);
        assert!((g.spacing_right(3).unwrap() - 0.35).abs() < 1e-15);
        assert_eq!(g.node_index(0.3), Some(3));
    }

    #[test]
    fn unit_window_tenth() {
        let m = Medium::homogeneous((0.0, 1.0), 1.0, 1.0).unwrap();
        let g = build_grid(&m, 0.1).unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(*g.nodes().last().unwrap(), 1.0);
        assert_eq!(g.node_index(0.3), Some(3));
        assert_eq!(g.node_index(0.35), None);
    }

    #[test]
    fn spacing_too_large() {
        assert!(matches!(build_grid(&one_interface(0.3), 0.8), Err(Error::SpacingTooLarge { .. })));
        assert!(build_grid(&one_interface(0.3), -1.0).is_err());
    }
}
