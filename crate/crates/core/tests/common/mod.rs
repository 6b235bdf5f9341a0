//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use num_traits::One;
use tenv_core::scalar::{MultiPoly, Rational};

pub fn t() -> MultiPoly {
    MultiPoly::var("t")
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// `t - c`.
pub fn lin(c: i64) -> MultiPoly {
    &t() - &MultiPoly::constant(int(c))
}

/// `t (t - 1) ... (t - k + 1)`.
pub fn falling(k: usize) -> MultiPoly {
    (0..k as i64).fold(MultiPoly::one(), |acc, i| &acc * &lin(i))
}

/// `(t - 1)(t - q) ... (t - q^{k-1})`.
pub fn q_falling(q: i64, k: usize) -> MultiPoly {
    (0..k as u32).fold(MultiPoly::one(), |acc, i| &acc * &lin(q.pow(i)))
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Stacks partition diagram `p` (top `m`, bottom `n`) on `q` (top `n`,
/// bottom `k`). Returns the block label of each outer point, canonical by
/// first occurrence, and the number of closed loops in the middle row.
pub fn stack_diagrams(
    p: &[usize],
    m: usize,
    n: usize,
    q: &[usize],
    k: usize,
) -> (Vec<usize>, usize) {
    assert_eq!(p.len(), m + n);
    assert_eq!(q.len(), n + k);
    let total = m + n + k;
    let mut parent: Vec<usize> = (0..total).collect();
    for (i, a) in p.iter().enumerate() {
        for (j, b) in p.iter().enumerate().skip(i + 1) {
            if a == b {
                let (x, y) = (find(&mut parent, i), find(&mut parent, j));
                parent[x] = y;
            }
        }
    }
    for (i, a) in q.iter().enumerate() {
        for (j, b) in q.iter().enumerate().skip(i + 1) {
            if a == b {
                let (x, y) = (find(&mut parent, m + i), find(&mut parent, m + j));
                parent[x] = y;
            }
        }
    }
    let outer: Vec<usize> = (0..m).chain(m + n..total).collect();
    let roots: Vec<usize> = outer.iter().map(|&i| find(&mut parent, i)).collect();
    let mut seen: Vec<usize> = Vec::new();
    let labels = roots
        .iter()
        .map(|r| match seen.iter().position(|s| s == r) {
            Some(i) => i,
            None => {
                seen.push(*r);
                seen.len() - 1
            }
        })
        .collect();
    let mut loops = HashSet::new();
    for i in m..m + n {
        let r = find(&mut parent, i);
        if !roots.contains(&r) {
            loops.insert(r);
        }
    }
    (labels, loops.len())
}

/// Bell numbers via the Bell triangle.
pub fn bell(n: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            next.push(next.last().unwrap() + v);
        }
        row = next;
    }
    row[0]
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Conjugacy classes of `S_n`, counted as distinct cycle types.
pub fn symmetric_classes(n: usize) -> usize {
    let mut types = HashSet::new();
    for p in permutations(n) {
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for s in 0..n {
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = p[i];
                len += 1;
            }
            if len > 0 {
                lens.push(len);
            }
        }
        lens.sort_unstable();
        types.insert(lens);
    }
    types.len()
}

/// Orbits of `S_x` acting diagonally on `{0..x}^len`.
pub fn tuple_orbits(x: usize, len: usize) -> usize {
    let perms = permutations(x);
    let mut canon = HashSet::new();
    let total = x.pow(len as u32);
    for code in 0..total {
        let mut tuple = Vec::with_capacity(len);
        let mut c = code;
        for _ in 0..len {
            tuple.push(c % x);
            c /= x;
        }
        let best = perms
            .iter()
            .map(|p| tuple.iter().map(|&v| p[v]).collect::<Vec<_>>())
            .min()
            .unwrap();
        canon.insert(best);
    }
    canon.len()
}

/// Row reduction over ℚ: returns the rank.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != int(0)) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip().unwrap();
        for i in 0..m.len() {
            if i != r && m[i][c] != int(0) {
                let f = m[i][c].clone() * inv.clone();
                for j in c..cols {
                    let v = m[i][j].clone() - f.clone() * m[r][j].clone();
                    m[i][j] = v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Determinant over ℚ by elimination.
pub fn det(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut d = int(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| m[i][c] != int(0)) else {
            return int(0);
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d = d * m[c][c].clone();
        let inv = m[c][c].recip().unwrap();
        for i in c + 1..n {
            let f = m[i][c].clone() * inv.clone();
            for j in c..n {
                let v = m[i][j].clone() - f.clone() * m[c][j].clone();
                m[i][j] = v;
            }
        }
    }
    d
}
