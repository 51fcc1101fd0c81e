//! Rooted d-ary tree automorphisms as portraits, iterated wreath products,
//! and a deterministic stabilizer-chain engine for exact group orders.
//!
//! Leaves are indexed by base-d strings read root to leaf, most significant
//! digit first.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::{HashSet, VecDeque};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WreathError {
    #[error("portraits have different degree or depth")]
    ShapeMismatch,
    #[error("a node label is not a permutation of 0..d")]
    InvalidLabel,
    #[error("subgroup order does not divide the wreath-product order")]
    NotDivisor,
}

/// Number of internal nodes of the complete d-ary tree of depth n:
/// (d^n - 1)/(d - 1).
pub fn internal_node_count(d: usize, n: u32) -> usize {
    (d.pow(n) - 1) / (d - 1)
}

/// A tree automorphism recorded as one child-permutation per internal node,
/// in breadth-first order (root first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Portrait {
    degree: usize,
    depth: u32,
    labels: Vec<Vec<usize>>,
}

fn is_permutation(label: &[usize], d: usize) -> bool {
    label.len() == d && {
        let mut seen = vec![false; d];
        label.iter().all(|&i| i < d && !std::mem::replace(&mut seen[i], true))
    }
}

impl Portrait {
    pub fn new(degree: usize, depth: u32, labels: Vec<Vec<usize>>) -> Result<Self, WreathError> {
        assert!(degree >= 2);
        if labels.len() != internal_node_count(degree, depth) {
            return Err(WreathError::ShapeMismatch);
        }
        if !labels.iter().all(|l| is_permutation(l, degree)) {
            return Err(WreathError::InvalidLabel);
        }
        Ok(Portrait {
            degree,
            depth,
            labels,
        })
    }

    pub fn identity(degree: usize, depth: u32) -> Self {
        let id: Vec<usize> = (0..degree).collect();
        Portrait {
            degree,
            depth,
            labels: vec![id; internal_node_count(degree, depth)],
        }
    }

    /// Identity portrait with one node's label replaced.
    pub fn with_label_at(
        degree: usize,
        depth: u32,
        node: usize,
        label: Vec<usize>,
    ) -> Result<Self, WreathError> {
        let mut p = Portrait::identity(degree, depth);
        if node >= p.labels.len() {
            return Err(WreathError::ShapeMismatch);
        }
        if !is_permutation(&label, degree) {
            return Err(WreathError::InvalidLabel);
        }
        p.labels[node] = label;
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn labels(&self) -> &[Vec<usize>] {
        &self.labels
    }

    /// BFS index of the child subtree root: node at BFS index `node` on
    /// level `level`, child digit i.
    fn child_index(&self, node: usize, level: u32, i: usize) -> usize {
        let level_start = internal_node_count(self.degree, level);
        let next_start = internal_node_count(self.degree, level + 1);
        next_start + (node - level_start) * self.degree + i
    }

    /// Image of a leaf, given by its digit string (root digit first).
    pub fn apply_to_digits(&self, digits: &[usize]) -> Vec<usize> {
        assert_eq!(digits.len(), self.depth as usize);
        let mut out = Vec::with_capacity(digits.len());
        let mut node = 0usize; // walk the source path
        for (level, &digit) in digits.iter().enumerate() {
            out.push(self.labels[node][digit]);
            if (level as u32) < self.depth - 1 {
                node = self.child_index(node, level as u32, digit);
            }
        }
        out
    }

    /// The induced permutation of the d^n leaves.
    pub fn to_leaf_permutation(&self) -> Vec<usize> {
        let d = self.degree;
        let n = self.depth as usize;
        let leaves = d.pow(self.depth);
        (0..leaves)
            .map(|leaf| {
                let mut digits = vec![0usize; n];
                let mut rem = leaf;
                for slot in (0..n).rev() {
                    digits[slot] = rem % d;
                    rem /= d;
                }
                let image = self.apply_to_digits(&digits);
                image.iter().fold(0usize, |acc, &dg| acc * d + dg)
            })
            .collect()
    }

    /// Image of an internal node (BFS index) under the tree action.
    fn map_node(&self, node: usize) -> usize {
        // recover the path to `node`, apply the automorphism to it
        let d = self.degree;
        let mut level = 0u32;
        while internal_node_count(d, level + 1) <= node {
            level += 1;
        }
        let mut offset = node - internal_node_count(d, level);
        let mut path = vec![0usize; level as usize];
        for slot in (0..level as usize).rev() {
            path[slot] = offset % d;
            offset /= d;
        }
        let mut image_node = 0usize;
        let mut src_node = 0usize;
        for (lv, &digit) in path.iter().enumerate() {
            let image_digit = self.labels[src_node][digit];
            image_node = self.child_index(image_node, lv as u32, image_digit);
            src_node = self.child_index(src_node, lv as u32, digit);
        }
        image_node
    }

    /// True iff every label is a power of the standard d-cycle
    /// (0 1 ... d-1), so the portrait lies in the cyclic wreath product.
    pub fn is_cyclic(&self) -> bool {
        self.labels.iter().all(|l| {
            let k = l[0];
            (0..self.degree).all(|i| l[i] == (i + k) % self.degree)
        })
    }
}

/// Composition as tree automorphisms: first p1, then p2. The leaf
/// permutation of the result is the product of the leaf permutations in the
/// same order.
pub fn compose(p1: &Portrait, p2: &Portrait) -> Result<Portrait, WreathError> {
    if p1.degree != p2.degree || p1.depth != p2.depth {
        return Err(WreathError::ShapeMismatch);
    }
    let labels = (0..p1.labels.len())
        .map(|u| {
            let image = p1.map_node(u);
            (0..p1.degree)
                .map(|i| p2.labels[image][p1.labels[u][i]])
                .collect()
        })
        .collect();
    Ok(Portrait {
        degree: p1.degree,
        depth: p1.depth,
        labels,
    })
}

fn perm_mul(a: &[usize], b: &[usize]) -> Vec<usize> {
    // apply a first, then b
    a.iter().map(|&i| b[i]).collect()
}

fn perm_inv(a: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize; a.len()];
    for (i, &j) in a.iter().enumerate() {
        out[j] = i;
    }
    out
}

fn is_identity(a: &[usize]) -> bool {
    a.iter().enumerate().all(|(i, &j)| i == j)
}

/// Exact order of the permutation group generated by `gens` on m points,
/// by a deterministic Schreier-Sims stabilizer chain.
fn perm_group_order(gens: Vec<Vec<usize>>, m: usize) -> BigUint {
    let gens: Vec<Vec<usize>> = {
        let mut seen = HashSet::new();
        gens.into_iter()
            .filter(|g| !is_identity(g) && seen.insert(g.clone()))
            .collect()
    };
    if gens.is_empty() {
        return BigUint::one();
    }
    // first moved point
    let base = (0..m)
        .find(|&x| gens.iter().any(|g| g[x] != x))
        .expect("non-identity generator moves something");
    // orbit with transversal, BFS in deterministic order
    let mut transversal: Vec<Option<Vec<usize>>> = vec![None; m];
    transversal[base] = Some((0..m).collect());
    let mut queue = VecDeque::from([base]);
    let mut orbit = vec![base];
    while let Some(x) = queue.pop_front() {
        let tx = transversal[x].clone().unwrap();
        for g in &gens {
            let y = g[x];
            if transversal[y].is_none() {
                transversal[y] = Some(perm_mul(&tx, g));
                orbit.push(y);
                queue.push_back(y);
            }
        }
    }
    // Schreier generators for the stabilizer of base
    let mut stab_gens = Vec::new();
    let mut seen = HashSet::new();
    for &x in &orbit {
        let tx = transversal[x].clone().unwrap();
        for g in &gens {
            let y = g[x];
            let ty_inv = perm_inv(transversal[y].as_ref().unwrap());
            let s = perm_mul(&perm_mul(&tx, g), &ty_inv);
            if !is_identity(&s) && seen.insert(s.clone()) {
                stab_gens.push(s);
            }
        }
    }
    BigUint::from(orbit.len()) * perm_group_order(stab_gens, m)
}

/// Order of the subgroup of Aut(T^d_n) generated by the portraits.
pub fn group_order(generators: &[Portrait]) -> Result<BigUint, WreathError> {
    let first = generators.first().ok_or(WreathError::ShapeMismatch)?;
    let (d, n) = (first.degree, first.depth);
    if generators.iter().any(|p| p.degree != d || p.depth != n) {
        return Err(WreathError::ShapeMismatch);
    }
    let perms: Vec<Vec<usize>> = generators.iter().map(|p| p.to_leaf_permutation()).collect();
    Ok(perm_group_order(perms, d.pow(n)))
}

/// d^e (cyclic) or (d!)^e (full) with e = (d^n - 1)/(d - 1).
pub fn iterated_wreath_order(d: usize, n: u32, cyclic: bool) -> BigUint {
    let e = internal_node_count(d, n) as u32;
    let base = if cyclic {
        BigUint::from(d)
    } else {
        (1..=d).map(BigUint::from).product()
    };
    base.pow(e)
}

/// Exact index of a subgroup of the cyclic iterated wreath product.
pub fn index_in_cyclic_wreath(
    subgroup_order: &BigUint,
    d: usize,
    n: u32,
) -> Result<BigUint, WreathError> {
    let total = iterated_wreath_order(d, n, true);
    if subgroup_order.is_zero() || !(&total % subgroup_order).is_zero() {
        return Err(WreathError::NotDivisor);
    }
    Ok(total / subgroup_order)
}

/// Standard generators of [C_d]^n: a d-cycle label at every internal node.
pub fn cyclic_generators(d: usize, n: u32) -> Vec<Portrait> {
    let cycle: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
    (0..internal_node_count(d, n))
        .map(|node| Portrait::with_label_at(d, n, node, cycle.clone()).unwrap())
        .collect()
}

/// Standard generators of Aut(T^d_n) = [S_d]^n: a d-cycle and a
/// transposition label at every internal node.
pub fn aut_generators(d: usize, n: u32) -> Vec<Portrait> {
    let cycle: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
    let mut swap: Vec<usize> = (0..d).collect();
    swap.swap(0, 1);
    let mut out = Vec::new();
    for node in 0..internal_node_count(d, n) {
        out.push(Portrait::with_label_at(d, n, node, cycle.clone()).unwrap());
        if d > 2 {
            out.push(Portrait::with_label_at(d, n, node, swap.clone()).unwrap());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn root_swap() -> Portrait {
        Portrait::with_label_at(2, 2, 0, vec![1, 0]).unwrap()
    }

    fn left_child_swap() -> Portrait {
        Portrait::with_label_at(2, 2, 1, vec![1, 0]).unwrap()
    }

    #[test]
    fn leaf_permutation_examples() {
        let id = Portrait::identity(2, 2);
        assert_eq!(id.to_leaf_permutation(), vec![0, 1, 2, 3]);
        // root swap flips the first digit: (02)(13)
        assert_eq!(root_swap().to_leaf_permutation(), vec![2, 3, 0, 1]);
        // swap at the left child touches only leaves 00, 01: (01)
        assert_eq!(left_child_swap().to_leaf_permutation(), vec![1, 0, 2, 3]);
    }

    #[test]
    fn compose_matches_leaf_product() {
        let a = root_swap();
        let b = left_child_swap();
        let ab = compose(&a, &b).unwrap();
        // apply a then b: 0->2, 1->3, 2->1, 3->0, i.e. the cycle (0 2 1 3)
        assert_eq!(ab.to_leaf_permutation(), vec![2, 3, 1, 0]);
        let identity = compose(&a, &a).unwrap();
        assert_eq!(identity, Portrait::identity(2, 2));
        let left = compose(&Portrait::identity(2, 2), &b).unwrap();
        assert_eq!(left, b);
    }

    #[test]
    fn homomorphism_property() {
        let a = root_swap();
        let b = left_child_swap();
        let ab = compose(&a, &b).unwrap();
        assert_eq!(
            ab.to_leaf_permutation(),
            perm_mul(&a.to_leaf_permutation(), &b.to_leaf_permutation())
        );
    }

    #[test]
    fn wreath_orders() {
        assert_eq!(iterated_wreath_order(2, 3, true), BigUint::from(128u32));
        assert_eq!(iterated_wreath_order(3, 2, true), BigUint::from(81u32));
        assert_eq!(iterated_wreath_order(2, 1, false), BigUint::from(2u32));
        assert_eq!(
            iterated_wreath_order(3, 2, false),
            BigUint::from(1296u32)
        );
    }

    #[test]
    fn group_orders_match_formulas() {
        for (d, n) in [(2usize, 1u32), (2, 2), (2, 3), (3, 1), (3, 2)] {
            assert_eq!(
                group_order(&aut_generators(d, n)).unwrap(),
                iterated_wreath_order(d, n, false),
                "full wreath order at d={d}, n={n}"
            );
            assert_eq!(
                group_order(&cyclic_generators(d, n)).unwrap(),
                iterated_wreath_order(d, n, true),
                "cyclic wreath order at d={d}, n={n}"
            );
        }
    }

    #[test]
    fn cyclic_membership() {
        assert!(cyclic_generators(3, 2).iter().all(|p| p.is_cyclic()));
        let mut swap = Portrait::with_label_at(3, 2, 0, vec![1, 0, 2]).unwrap();
        assert!(!swap.is_cyclic());
        swap = Portrait::with_label_at(2, 2, 0, vec![1, 0]).unwrap();
        assert!(swap.is_cyclic());
    }

    #[test]
    fn index_examples() {
        assert_eq!(
            index_in_cyclic_wreath(&BigUint::from(4u32), 2, 2),
            Ok(BigUint::from(2u32))
        );
        assert_eq!(
            index_in_cyclic_wreath(&BigUint::from(128u32), 2, 3),
            Ok(BigUint::from(1u32))
        );
        assert_eq!(
            index_in_cyclic_wreath(&BigUint::from(3u32), 2, 2),
            Err(WreathError::NotDivisor)
        );
    }
}
