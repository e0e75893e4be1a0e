//! Integer row echelon form for reducing vectors modulo a lattice.

#[derive(Clone, Debug, Default)]
pub struct Lattice {
    rows: Vec<(usize, Vec<i64>)>,
}

impl Lattice {
    pub fn new(vectors: &[Vec<i64>], dim: usize) -> Self {
        let mut pool: Vec<Vec<i64>> = vectors.iter().filter(|v| v.iter().any(|&x| x != 0)).cloned().collect();
        let mut rows = Vec::new();
        for col in 0..dim {
            loop {
                let nz: Vec<usize> = (0..pool.len()).filter(|&i| pool[i][col] != 0).collect();
                if nz.len() <= 1 {
                    if let Some(&i) = nz.first() {
                        let mut r = pool.swap_remove(i);
                        if r[col] < 0 {
                            r.iter_mut().for_each(|x| *x = -*x);
                        }
                        rows.push((col, r));
                    }
                    break;
                }
                let piv = *nz.iter().min_by_key(|&&i| pool[i][col].abs()).expect("nonempty");
                let p = pool[piv].clone();
                for &i in &nz {
                    if i != piv {
                        let q = pool[i][col] / p[col];
                        for (x, y) in pool[i].iter_mut().zip(&p) {
                            *x -= q * y;
                        }
                    }
                }
            }
            pool.retain(|v| v.iter().any(|&x| x != 0));
        }
        Lattice { rows }
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, mut v: Vec<i64>) -> Vec<i64> {
        for (col, r) in &self.rows {
            let q = v[*col].div_euclid(r[*col]);
            if q != 0 {
                for (x, y) in v.iter_mut().zip(r) {
                    *x -= q * y;
                }
            }
        }
        v
    }

    pub fn is_zero_mod(&self, v: Vec<i64>) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_five() {
        let l = Lattice::new(&[vec![5]], 1);
        assert_eq!(l.reduce(vec![7]), vec![2]);
        assert_eq!(l.reduce(vec![-1]), vec![4]);
        assert!(l.is_zero_mod(vec![10]));
    }

    #[test]
    fn mixed() {
        let l = Lattice::new(&[vec![2, 4], vec![0, 6]], 2);
        assert_eq!(l.reduce(vec![2, 4]), vec![0, 0]);
        assert_eq!(l.reduce(vec![3, 1]), l.reduce(vec![1, -3]));
        assert_ne!(l.reduce(vec![1, 0]), l.reduce(vec![0, 1]));
    }

    #[test]
    fn empty_lattice() {
        let l = Lattice::new(&[vec![0, 0]], 2);
        assert_eq!(l.reduce(vec![3, -1]), vec![3, -1]);
    }
}
