//! The opposite of the category of finite sets.
//!
//! A morphism `a → b` is a set map `B → A`. Surjections are the
//! injective set maps, monomorphisms the surjective ones, and a subobject
//! of `a` is a quotient of `A`, i.e. a set partition. Products are
//! disjoint unions and pullbacks are pushouts of sets.

use std::cmp::Ordering;
use std::sync::Arc;

use serde_json::json;

use super::{
    BackendTag, Cospan, ImageFactorization, Limits, Obj, ObjectHandle, Product, RegularCategory,
    Span, SubCache,
};
use crate::error::{Error, Result};

/// Set map `tgt-set → src-set` representing a morphism `src → tgt` of the
/// opposite category.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SetMap {
    pub src: usize,
    pub tgt: usize,
    pub map: Vec<usize>,
}

impl SetMap {
    pub fn new(src: usize, tgt: usize, map: Vec<usize>) -> Result<Self> {
        if map.len() != tgt || map.iter().any(|&v| v >= src) {
            return Err(Error::Invalid(format!(
                "map {map:?} is not a function from a {tgt}-set to a {src}-set"
            )));
        }
        Ok(SetMap { src, tgt, map })
    }
}

/// Set partition stored as a restricted growth string: `labels[i]` is the
/// block of element `i`, blocks numbered by their least element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Partition {
    labels: Vec<usize>,
}

impl Partition {
    /// Canonicalises an arbitrary labelling.
    pub fn from_labels(raw: &[usize]) -> Self {
        let mut relabel: Vec<(usize, usize)> = Vec::new();
        let labels = raw
            .iter()
            .map(|l| match relabel.iter().find(|(k, _)| k == l) {
                Some(&(_, v)) => v,
                None => {
                    let v = relabel.len();
                    relabel.push((*l, v));
                    v
                }
            })
            .collect();
        Partition { labels }
    }

    /// Builds a partition from blocks of 0-based elements, validating that
    /// they are disjoint, nonempty and cover `0..n`.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Invalid(format!("block {b} is empty")));
            }
            for &i in block {
                if i >= n {
                    return Err(Error::Invalid(format!("element {} out of range", i + 1)));
                }
                if labels[i] != usize::MAX {
                    return Err(Error::Invalid(format!("element {} occurs twice", i + 1)));
                }
                labels[i] = b;
            }
        }
        if let Some(i) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::Invalid(format!("element {} is not covered", i + 1)));
        }
        Ok(Partition::from_labels(&labels))
    }

    pub fn discrete(n: usize) -> Self {
        Partition {
            labels: (0..n).collect(),
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    /// Blocks sorted by least element, each sorted ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (i, &l) in self.labels.iter().enumerate() {
            blocks[l].push(i);
        }
        blocks
    }

    /// `self` refines `other`: every block of `self` lies in a block of
    /// `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let mut image = vec![usize::MAX; self.num_blocks()];
        for (a, b) in self.labels.iter().zip(&other.labels) {
            if image[*a] == usize::MAX {
                image[*a] = *b;
            } else if image[*a] != *b {
                return false;
            }
        }
        true
    }

    /// Finest common coarsening.
    pub fn join(&self, other: &Partition) -> Partition {
        let n = self.len();
        let mut uf = UnionFind::new(n);
        let mut first_a = vec![usize::MAX; self.num_blocks()];
        let mut first_b = vec![usize::MAX; other.num_blocks()];
        for i in 0..n {
            for (first, l) in [
                (&mut first_a, self.labels[i]),
                (&mut first_b, other.labels[i]),
            ] {
                if first[l] == usize::MAX {
                    first[l] = i;
                } else {
                    uf.union(first[l], i);
                }
            }
        }
        Partition::from_labels(&uf.labels())
    }

    /// All partitions of `0..n`, restricted growth strings in lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut rgs = vec![0usize; n];
        let mut maxes = vec![0usize; n];
        loop {
            out.push(Partition {
                labels: rgs.clone(),
            });
            // increment the restricted growth string
            let mut i = n;
            loop {
                if i <= 1 {
                    return out;
                }
                i -= 1;
                let bound = maxes[i - 1] + 1;
                if rgs[i] < bound {
                    rgs[i] += 1;
                    maxes[i] = maxes[i - 1].max(rgs[i]);
                    for j in i + 1..n {
                        rgs[j] = 0;
                        maxes[j] = maxes[i];
                    }
                    break;
                }
            }
        }
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.labels
            .len()
            .cmp(&other.labels.len())
            .then_with(|| self.blocks().cmp(&other.blocks()))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Representative of each element, numbered in order of first occurrence.
    pub(crate) fn labels(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let roots: Vec<usize> = (0..n).map(|i| self.find(i)).collect();
        Partition::from_labels(&roots).labels
    }
}

/// Opposite of finite sets. Size 0 is the terminal object.
#[derive(Clone, Debug, Default)]
pub struct FinSetOp {
    limits: Limits,
    cache: Arc<SubCache<Partition>>,
}

impl FinSetOp {
    pub fn new(limits: Limits) -> Self {
        FinSetOp {
            limits,
            cache: Arc::default(),
        }
    }

    /// The morphism `b → a` given by an injection `A ↪ B` of sets,
    /// i.e. a surjection of the opposite category.
    pub fn from_injection(a: usize, b: usize, map: Vec<usize>) -> Result<SetMap> {
        SetMap::new(b, a, map)
    }

    fn check_size(&self, n: usize) -> Result<()> {
        if n > self.limits.max_setsize {
            return Err(Error::ResourceBound {
                what: format!("partitions of a {n}-set"),
                key: "max_setsize",
                limit: self.limits.max_setsize as u64,
                required: n as u64,
            });
        }
        Ok(())
    }
}

impl RegularCategory for FinSetOp {
    type Mor = SetMap;
    type Sub = Partition;

    const TAG: BackendTag = BackendTag::SetOp;

    fn limits(&self) -> &Limits {
        &self.limits
    }

    fn cache(&self) -> &SubCache<Partition> {
        &self.cache
    }

    fn source(&self, f: &SetMap) -> Obj {
        f.src
    }

    fn target(&self, f: &SetMap) -> Obj {
        f.tgt
    }

    fn identity(&self, x: Obj) -> SetMap {
        SetMap {
            src: x,
            tgt: x,
            map: (0..x).collect(),
        }
    }

    fn compose(&self, f: &SetMap, g: &SetMap) -> Result<SetMap> {
        if g.tgt != f.src {
            return Err(Error::EndpointMismatch(format!(
                "compose {}→{} after {}→{}",
                f.src, f.tgt, g.src, g.tgt
            )));
        }
        Ok(SetMap {
            src: g.src,
            tgt: f.tgt,
            map: f.map.iter().map(|&c| g.map[c]).collect(),
        })
    }

    fn to_terminal(&self, x: Obj) -> SetMap {
        SetMap {
            src: x,
            tgt: 0,
            map: Vec::new(),
        }
    }

    fn product(&self, x: Obj, y: Obj) -> Product<SetMap> {
        Product {
            obj: x + y,
            left: SetMap {
                src: x + y,
                tgt: x,
                map: (0..x).collect(),
            },
            right: SetMap {
                src: x + y,
                tgt: y,
                map: (x..x + y).collect(),
            },
        }
    }

    fn pair(&self, f: &SetMap, g: &SetMap) -> Result<SetMap> {
        if f.src != g.src {
            return Err(Error::EndpointMismatch(
                "pair of morphisms with distinct sources".into(),
            ));
        }
        let mut map = f.map.clone();
        map.extend_from_slice(&g.map);
        Ok(SetMap {
            src: f.src,
            tgt: f.tgt + g.tgt,
            map,
        })
    }

    fn pullback(&self, f: &SetMap, g: &SetMap) -> Result<Option<Span<SetMap>>> {
        if f.tgt != g.tgt {
            return Err(Error::EndpointMismatch(
                "pullback of morphisms with distinct targets".into(),
            ));
        }
        let (x, y) = (f.src, g.src);
        let mut uf = UnionFind::new(x + y);
        for (a, b) in f.map.iter().zip(&g.map) {
            uf.union(*a, x + *b);
        }
        let labels = uf.labels();
        let apex = labels.iter().max().map_or(0, |m| m + 1);
        Ok(Some(Span {
            apex,
            left: SetMap {
                src: apex,
                tgt: x,
                map: labels[..x].to_vec(),
            },
            right: SetMap {
                src: apex,
                tgt: y,
                map: labels[x..].to_vec(),
            },
        }))
    }

    fn pushout(&self, e1: &SetMap, e2: &SetMap) -> Result<Cospan<SetMap>> {
        if !self.is_surjective(e1) || !self.is_surjective(e2) {
            return Err(Error::Contract("pushout needs surjections".into()));
        }
        if e1.src != e2.src {
            return Err(Error::EndpointMismatch(
                "pushout of surjections with distinct sources".into(),
            ));
        }
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (a, va) in e1.map.iter().enumerate() {
            if let Some(b) = e2.map.iter().position(|vb| vb == va) {
                left.push(a);
                right.push(b);
            }
        }
        let apex = left.len();
        Ok(Cospan {
            apex,
            left: SetMap {
                src: e1.tgt,
                tgt: apex,
                map: left,
            },
            right: SetMap {
                src: e2.tgt,
                tgt: apex,
                map: right,
            },
        })
    }

    fn image(&self, f: &SetMap) -> ImageFactorization<SetMap, Partition> {
        let mono = Partition::from_labels(&f.map);
        let k = mono.num_blocks();
        let mut epi = vec![0; k];
        for (b, &l) in mono.labels.iter().enumerate() {
            epi[l] = f.map[b];
        }
        ImageFactorization {
            epi: SetMap {
                src: f.src,
                tgt: k,
                map: epi,
            },
            mono,
        }
    }

    fn is_surjective(&self, f: &SetMap) -> bool {
        let mut seen = vec![false; f.src];
        f.map
            .iter()
            .all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    fn is_injective(&self, f: &SetMap) -> bool {
        let mut seen = vec![false; f.src];
        for &v in &f.map {
            seen[v] = true;
        }
        seen.into_iter().all(|s| s)
    }

    fn sub_ambient(&self, u: &Partition) -> Obj {
        u.len()
    }

    fn sub_object(&self, u: &Partition) -> Obj {
        u.num_blocks()
    }

    fn sub_mono(&self, u: &Partition) -> SetMap {
        SetMap {
            src: u.num_blocks(),
            tgt: u.len(),
            map: u.labels.clone(),
        }
    }

    fn full_sub(&self, x: Obj) -> Partition {
        Partition::discrete(x)
    }

    fn enumerate_subobjects(&self, x: Obj) -> Result<Vec<Partition>> {
        self.check_size(x)?;
        let mut all = Partition::all(x);
        all.sort();
        Ok(all)
    }

    fn sub_le(&self, u: &Partition, v: &Partition) -> bool {
        v.refines(u)
    }

    fn sub_meet(&self, u: &Partition, v: &Partition) -> Option<Partition> {
        Some(u.join(v))
    }

    fn quotients(&self, x: Obj) -> Result<Vec<SetMap>> {
        self.check_size(x)?;
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << x) {
            let map: Vec<usize> = (0..x).filter(|i| mask >> i & 1 == 1).collect();
            out.push(SetMap {
                src: x,
                tgt: map.len(),
                map,
            });
        }
        out.sort_by(|a, b| b.tgt.cmp(&a.tgt).then_with(|| a.map.cmp(&b.map)));
        Ok(out)
    }

    fn factors_through(&self, e: &SetMap, e2: &SetMap) -> bool {
        e.src == e2.src && e.map.iter().all(|v| e2.map.contains(v))
    }

    fn surjection_exists(&self, a: Obj, b: Obj) -> bool {
        b <= a
    }

    fn homs(&self, x: Obj, y: Obj) -> Result<Vec<SetMap>> {
        let count = (x as u64).checked_pow(y as u32).unwrap_or(u64::MAX);
        self.limits
            .check_psize(format!("morphisms {x}→{y}"), count)?;
        let mut out = Vec::with_capacity(count as usize);
        let mut cur = vec![0usize; y];
        if x == 0 && y > 0 {
            return Ok(out);
        }
        loop {
            out.push(SetMap {
                src: x,
                tgt: y,
                map: cur.clone(),
            });
            let mut i = y;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < x {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    fn automorphism_count(&self, x: Obj) -> u128 {
        (1..=x as u128).product()
    }

    fn describe(&self, x: Obj) -> ObjectHandle {
        ObjectHandle::SetOp { size: x }
    }

    fn sub_json(&self, u: &Partition) -> serde_json::Value {
        let blocks: Vec<Vec<usize>> = u
            .blocks()
            .into_iter()
            .map(|b| b.into_iter().map(|i| i + 1).collect())
            .collect();
        json!({ "partition": blocks })
    }
}
