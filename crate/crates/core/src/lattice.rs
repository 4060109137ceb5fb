//! Integer lattices in `Z^d` via row echelon (Hermite) forms.

fn div_floor(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn axpy(dst: &mut [i64], q: i64, src: &[i64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= q * s;
    }
}

/// Echelon form of `rows` by unimodular row operations.
///
/// Returns `(h, u)` with `u * rows = h`. Nonzero rows of `h` come first,
/// with strictly increasing pivot columns, positive pivots and entries above
/// each pivot reduced into `[0, pivot)`.
pub(crate) fn echelon(rows: &[Vec<i64>], width: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let m = rows.len();
    let mut h: Vec<Vec<i64>> = rows.to_vec();
    let mut u: Vec<Vec<i64>> = (0..m).map(|i| (0..m).map(|j| (i == j) as i64).collect()).collect();
    let mut r = 0;
    for col in 0..width {
        if r == m {
            break;
        }
        loop {
            let pivot = (r..m).filter(|&i| h[i][col] != 0).min_by_key(|&i| (h[i][col].abs(), i));
            let Some(p) = pivot else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut clean = true;
            for i in r + 1..m {
                if h[i][col] != 0 {
                    let q = div_floor(h[i][col], h[r][col]);
                    let (hr, ur) = (h[r].clone(), u[r].clone());
                    axpy(&mut h[i], q, &hr);
                    axpy(&mut u[i], q, &ur);
                    clean &= h[i][col] == 0;
                }
            }
            if clean {
                if h[r][col] < 0 {
                    h[r].iter_mut().for_each(|x| *x = -*x);
                    u[r].iter_mut().for_each(|x| *x = -*x);
                }
                let (hr, ur) = (h[r].clone(), u[r].clone());
                for i in 0..r {
                    let q = div_floor(h[i][col], hr[col]);
                    axpy(&mut h[i], q, &hr);
                    axpy(&mut u[i], q, &ur);
                }
                r += 1;
                break;
            }
        }
    }
    (h, u)
}

/// A sublattice of `Z^d` stored as an echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn new(dim: usize, generators: &[Vec<i64>]) -> Self {
        let (h, _) = echelon(generators, dim);
        let basis: Vec<Vec<i64>> = h.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
        let pivots = basis.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect();
        Self { dim, basis, pivots }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(dim, &[])
    }

    pub fn full(dim: usize) -> Self {
        let gens: Vec<Vec<i64>> = (0..dim).map(|i| (0..dim).map(|j| (i == j) as i64).collect()).collect();
        Self::new(dim, &gens)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut v = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let q = div_floor(v[p], row[p]);
            axpy(&mut v, q, row);
        }
        v
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let gens: Vec<Vec<i64>> = self.basis.iter().chain(&other.basis).cloned().collect();
        Lattice::new(self.dim, &gens)
    }

    /// Image under the coordinate projection onto `axes`.
    pub fn project(&self, axes: &[usize]) -> Lattice {
        let gens: Vec<Vec<i64>> = self.basis.iter().map(|r| axes.iter().map(|&a| r[a]).collect()).collect();
        Lattice::new(axes.len(), &gens)
    }

    /// The sublattice `{ l : l A = 0 }` for a `dim x m` matrix `A` given by rows.
    pub fn annihilated_by(&self, a: &[Vec<i64>]) -> Lattice {
        let m = a.first().map_or(0, Vec::len);
        let images: Vec<Vec<i64>> = self
            .basis
            .iter()
            .map(|row| (0..m).map(|c| (0..self.dim).map(|i| row[i] * a[i][c]).sum()).collect())
            .collect();
        let (h, u) = echelon(&images, m);
        let gens: Vec<Vec<i64>> = h
            .iter()
            .zip(&u)
            .filter(|(hr, _)| hr.iter().all(|&x| x == 0))
            .map(|(_, coeffs)| {
                (0..self.dim).map(|j| coeffs.iter().zip(&self.basis).map(|(c, b)| c * b[j]).sum()).collect()
            })
            .collect();
        Lattice::new(self.dim, &gens)
    }

    /// Lattice vectors vanishing on every axis in `axes`.
    pub fn vanishing_on(&self, axes: &[usize]) -> Lattice {
        let a: Vec<Vec<i64>> = (0..self.dim).map(|i| axes.iter().map(|&x| (x == i) as i64).collect()).collect();
        if axes.is_empty() {
            return self.clone();
        }
        self.annihilated_by(&a)
    }

    /// gcd of the `axis` coordinates of the lattice (0 if they all vanish).
    pub fn axis_modulus(&self, axis: usize) -> i64 {
        self.basis.iter().fold(0, |g, r| gcd(g, r[axis]))
    }
}

/// Whether the strict homogeneous system `a_k . c > 0` has a rational
/// solution, by Fourier-Motzkin elimination.
pub(crate) fn strictly_feasible(constraints: &[Vec<i64>]) -> bool {
    let mut rows: Vec<Vec<i128>> = constraints.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let vars = rows.first().map_or(0, Vec::len);
    for j in 0..vars {
        if rows.iter().any(|r| r.iter().all(|&x| x == 0)) {
            return false;
        }
        let (pos, rest): (Vec<_>, Vec<_>) = rows.into_iter().partition(|r| r[j] > 0);
        let (neg, zero): (Vec<_>, Vec<_>) = rest.into_iter().partition(|r| r[j] < 0);
        let mut next = zero;
        for p in &pos {
            for n in &neg {
                let mut row: Vec<i128> = p.iter().zip(n).map(|(&a, &b)| -n[j] * a + p[j] * b).collect();
                let g = row.iter().fold(0i128, |g, &x| {
                    let (mut a, mut b) = (g.abs(), x.abs());
                    while b != 0 {
                        (a, b) = (b, a % b);
                    }
                    a
                });
                if g > 1 {
                    row.iter_mut().for_each(|x| *x /= g);
                }
                if !next.contains(&row) {
                    next.push(row);
                }
            }
        }
        rows = next;
    }
    rows.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_transform_is_consistent() {
        let rows = vec![vec![4, 6, 2], vec![2, 4, 8], vec![6, 10, 10]];
        let (h, u) = echelon(&rows, 3);
        for (hr, ur) in h.iter().zip(&u) {
            let prod: Vec<i64> = (0..3).map(|j| ur.iter().zip(&rows).map(|(c, r)| c * r[j]).sum()).collect();
            assert_eq!(&prod, hr);
        }
        assert!(h[2].iter().all(|&x| x == 0));
    }

    #[test]
    fn reduction_is_canonical() {
        let l = Lattice::new(2, &[vec![2, 0], vec![1, 3]]);
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&[3, 3]));
        assert!(!l.contains(&[1, 0]));
        assert_eq!(l.reduce(&[5, 7]), l.reduce(&[5 - 2 * 4 + 1, 7 + 3]));
    }

    #[test]
    fn fixed_sublattice_of_swap() {
        let l = Lattice::full(2);
        // P - I for the swap of two axes, as columns of A
        let a = vec![vec![-1, 1], vec![1, -1]];
        let fixed = l.annihilated_by(&a);
        assert_eq!(fixed.rank(), 1);
        assert!(fixed.contains(&[1, 1]));
        assert!(!fixed.contains(&[1, 0]));
    }

    #[test]
    fn fourier_motzkin() {
        assert!(strictly_feasible(&[vec![1, 0], vec![0, 1]]));
        assert!(!strictly_feasible(&[vec![1], vec![-1]]));
        assert!(strictly_feasible(&[vec![1, 1], vec![-1, 1]]));
        assert!(!strictly_feasible(&[vec![1, -1], vec![-1, 1]]));
    }
}
