use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

pub type FaceId = usize;

#[derive(Clone, Debug)]
pub struct Face {
    /// −1 for the empty face, n for the polytope itself.
    pub dim: i32,
    /// Sorted vertex indices; this is the face key.
    pub vertices: Vec<usize>,
    pub(crate) set: BitSet,
}

impl Face {
    pub fn set(&self) -> &BitSet {
        &self.set
    }
}

/// Maximal chain of faces of dimensions 0, …, n−1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    pub chain: Vec<FaceId>,
}

/// Flag-vector entries keyed by rank set.
pub type FlagVector = BTreeMap<Vec<usize>, u64>;

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: u64,
    pub rhs: u64,
    pub pass: bool,
}

/// Graded lattice of all faces, including ∅ and P.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    dim: usize,
    faces: Vec<Face>,
    up: Vec<Vec<FaceId>>,
    down: Vec<Vec<FaceId>>,
    by_dim: Vec<Vec<FaceId>>,
    index: HashMap<BitSet, FaceId>,
    vertex_face: Vec<FaceId>,
}

impl FaceLattice {
    /// Closure of the facet vertex sets under intersection, graded
    /// combinatorially from the top.
    pub fn build(dim: usize, n_vertices: usize, facet_sets: &[BitSet]) -> Result<FaceLattice> {
        let full = BitSet::full(n_vertices);
        let mut seen: HashSet<BitSet> = HashSet::new();
        let mut queue: VecDeque<BitSet> = VecDeque::new();
        for f in facet_sets {
            if seen.insert(f.clone()) {
                queue.push_back(f.clone());
            }
        }
        while let Some(f) = queue.pop_front() {
            for g in facet_sets {
                let h = f.intersect(g);
                if !h.is_empty() && !seen.contains(&h) {
                    seen.insert(h.clone());
                    queue.push_back(h);
                }
            }
        }
        seen.insert(full.clone());
        seen.insert(BitSet::new(n_vertices));

        let mut sets: Vec<BitSet> = seen.into_iter().collect();
        sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let pos: HashMap<BitSet, usize> = sets
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();

        // Up-covers: the minimal closures of F ∪ {w}.
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); sets.len()];
        for (i, f) in sets.iter().enumerate() {
            if *f == full {
                continue;
            }
            let containing: Vec<&BitSet> = facet_sets.iter().filter(|g| f.is_subset(g)).collect();
            let mut cands: Vec<BitSet> = Vec::new();
            for w in 0..n_vertices {
                if f.contains(w) {
                    continue;
                }
                let mut c = full.clone();
                for g in containing.iter().filter(|g| g.contains(w)) {
                    c.intersect_with(g);
                }
                if f.is_empty() {
                    // closure of a single vertex is the vertex itself
                    c = BitSet::from_indices(n_vertices, [w]);
                }
                if !cands.contains(&c) {
                    cands.push(c);
                }
            }
            for c in &cands {
                if !cands.iter().any(|d| d != c && d.is_subset(c)) {
                    let j = *pos.get(c).ok_or_else(|| {
                        Error::DegenerateInput("face closure is not a face".into())
                    })?;
                    up[i].push(j);
                }
            }
        }

        let mut dims = vec![i32::MIN; sets.len()];
        for (i, f) in sets.iter().enumerate() {
            if *f == full {
                dims[i] = dim as i32;
                continue;
            }
            let mut d = None;
            for &j in &up[i] {
                let dj = dims[j] - 1;
                if d.is_some_and(|x| x != dj) {
                    return Err(Error::DegenerateInput("face lattice is not graded".into()));
                }
                d = Some(dj);
            }
            dims[i] = d.ok_or_else(|| Error::DegenerateInput("face without cover".into()))?;
        }
        for (i, f) in sets.iter().enumerate() {
            let ok = match f.len() {
                0 => dims[i] == -1,
                1 => dims[i] == 0,
                _ => dims[i] >= 1,
            };
            if !ok {
                return Err(Error::DegenerateInput(
                    "face dimensions inconsistent".into(),
                ));
            }
        }

        let mut order: Vec<usize> = (0..sets.len()).collect();
        order.sort_by(|&a, &b| dims[a].cmp(&dims[b]).then_with(|| sets[a].cmp(&sets[b])));
        let mut rank = vec![0; sets.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let faces: Vec<Face> = order
            .iter()
            .map(|&old| Face {
                dim: dims[old],
                vertices: sets[old].to_vec(),
                set: sets[old].clone(),
            })
            .collect();
        let mut up_new: Vec<Vec<FaceId>> = vec![Vec::new(); faces.len()];
        let mut down: Vec<Vec<FaceId>> = vec![Vec::new(); faces.len()];
        for old in 0..sets.len() {
            let i = rank[old];
            let mut u: Vec<FaceId> = up[old].iter().map(|&j| rank[j]).collect();
            u.sort();
            for &j in &u {
                down[j].push(i);
            }
            up_new[i] = u;
        }
        for d in &mut down {
            d.sort();
        }
        let mut by_dim = vec![Vec::new(); dim + 2];
        for (i, f) in faces.iter().enumerate() {
            by_dim[(f.dim + 1) as usize].push(i);
        }
        let index = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.set.clone(), i))
            .collect::<HashMap<_, _>>();
        let mut vertex_face = vec![0; n_vertices];
        for &i in &by_dim[1] {
            vertex_face[faces[i].vertices[0]] = i;
        }
        Ok(FaceLattice {
            dim,
            faces,
            up: up_new,
            down,
            by_dim,
            index,
            vertex_face,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id]
    }

    /// Faces of dimension `d` (−1 ≤ d ≤ n), in key order.
    pub fn faces_of_dim(&self, d: i32) -> &[FaceId] {
        &self.by_dim[(d + 1) as usize]
    }

    pub fn up_covers(&self, id: FaceId) -> &[FaceId] {
        &self.up[id]
    }

    pub fn down_covers(&self, id: FaceId) -> &[FaceId] {
        &self.down[id]
    }

    pub fn find(&self, set: &BitSet) -> Option<FaceId> {
        self.index.get(set).copied()
    }

    pub fn find_vertices(&self, vertices: &[usize]) -> Option<FaceId> {
        let n = self.num_vertices();
        if vertices.iter().any(|&v| v >= n) {
            return None;
        }
        self.find(&BitSet::from_indices(n, vertices.iter().copied()))
    }

    pub fn vertex_face(&self, v: usize) -> FaceId {
        self.vertex_face[v]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_face.len()
    }

    pub fn top(&self) -> FaceId {
        self.faces.len() - 1
    }

    /// (f₀, …, f_{n−1}); the improper faces are excluded.
    pub fn f_vector(&self) -> Vec<u64> {
        (0..self.dim as i32)
            .map(|d| self.faces_of_dim(d).len() as u64)
            .collect()
    }

    /// All complete flags, lexicographic in the face keys.
    pub fn enumerate_flags(&self) -> Vec<Flag> {
        let mut out = Vec::new();
        for &v in self.faces_of_dim(0) {
            self.extend_flags(vec![v], &mut out);
        }
        out
    }

    /// Flags whose vertex is `v`.
    pub fn flags_at_vertex(&self, v: usize) -> Result<Vec<Flag>> {
        if v >= self.num_vertices() {
            return Err(Error::UnknownVertex(v));
        }
        let mut out = Vec::new();
        self.extend_flags(vec![self.vertex_face[v]], &mut out);
        Ok(out)
    }

    fn extend_flags(&self, chain: Vec<FaceId>, out: &mut Vec<Flag>) {
        let last = *chain.last().expect("chain starts at a vertex");
        if chain.len() == self.dim {
            out.push(Flag { chain });
            return;
        }
        for &g in &self.up[last] {
            let mut c = chain.clone();
            c.push(g);
            self.extend_flags(c, out);
        }
    }

    pub fn flag_count(&self) -> u64 {
        self.flag_vector(&(0..self.dim).collect::<Vec<_>>())
    }

    /// Number of flags through each vertex, by dynamic programming downwards.
    pub fn flags_per_vertex(&self) -> Vec<u64> {
        let mut count = vec![0u64; self.faces.len()];
        for &f in self.faces_of_dim(self.dim as i32 - 1) {
            count[f] = 1;
        }
        for d in (0..self.dim as i32 - 1).rev() {
            for &f in self.faces_of_dim(d) {
                count[f] = self.up[f].iter().map(|&g| count[g]).sum();
            }
        }
        (0..self.num_vertices())
            .map(|v| count[self.vertex_face[v]])
            .collect()
    }

    /// f_S: chains with one face of each rank in `ranks`.
    pub fn flag_vector(&self, ranks: &[usize]) -> u64 {
        let mut ranks: Vec<usize> = ranks.to_vec();
        ranks.sort();
        ranks.dedup();
        let Some(&first) = ranks.first() else {
            return 1;
        };
        let mut level: Vec<(FaceId, u64)> = self
            .faces_of_dim(first as i32)
            .iter()
            .map(|&f| (f, 1))
            .collect();
        for &r in &ranks[1..] {
            level = self
                .faces_of_dim(r as i32)
                .iter()
                .map(|&f| {
                    let c = level
                        .iter()
                        .filter(|(g, _)| self.faces[*g].set.is_subset(&self.faces[f].set))
                        .map(|(_, c)| c)
                        .sum();
                    (f, c)
                })
                .collect();
        }
        level.iter().map(|(_, c)| c).sum()
    }

    /// Flag-vector entries for every rank set.
    pub fn full_flag_vector(&self) -> FlagVector {
        let mut out = FlagVector::new();
        for mask in 0u32..(1 << self.dim) {
            let s: Vec<usize> = (0..self.dim).filter(|&i| mask >> i & 1 == 1).collect();
            let c = self.flag_vector(&s);
            out.insert(s, c);
        }
        out
    }

    pub fn is_simplicial(&self) -> bool {
        self.faces_of_dim(self.dim as i32 - 1)
            .iter()
            .all(|&f| self.faces[f].vertices.len() == self.dim)
    }

    pub fn is_simple(&self) -> bool {
        self.faces_of_dim(0).iter().all(|&v| {
            let top = self.dim as i32 - 1;
            self.faces_of_dim(top)
                .iter()
                .filter(|&&f| self.faces[v].set.is_subset(&self.faces[f].set))
                .count()
                == self.dim
        })
    }

    /// The applicable flag identities with both sides evaluated.
    pub fn check_flag_identities(&self) -> Vec<IdentityCheck> {
        let n = self.dim;
        let total = self.flag_count();
        let f = self.f_vector();
        let fact: u64 = (1..=n as u64).product();
        let mut out = Vec::new();
        let mut push = |name: &str, lhs: u64, rhs: u64| {
            out.push(IdentityCheck {
                name: name.to_string(),
                lhs,
                rhs,
                pass: lhs == rhs,
            })
        };
        push(
            "sum of flags per vertex",
            self.flags_per_vertex().iter().sum(),
            total,
        );
        if n == 2 {
            push("flags = 2 f0", total, 2 * f[0]);
            push("flags = 2 f1", total, 2 * f[1]);
        }
        if n == 3 {
            push("flags = 4 f1", total, 4 * f[1]);
        }
        if n == 4 {
            push("flags = 4 f02", total, 4 * self.flag_vector(&[0, 2]));
        }
        if self.is_simplicial() {
            push("simplicial: flags = n! f_(n-1)", total, fact * f[n - 1]);
        }
        if self.is_simple() {
            push("simple: flags = n! f0", total, fact * f[0]);
        }
        let lower = fact * (n as u64 + 1);
        out.push(IdentityCheck {
            name: "flags >= (n+1)!".into(),
            lhs: total,
            rhs: lower,
            pass: total >= lower,
        });
        out
    }

    /// Face keys of a flag, for serialization.
    pub fn flag_keys(&self, flag: &Flag) -> Vec<Vec<usize>> {
        flag.chain
            .iter()
            .map(|&f| self.faces[f].vertices.clone())
            .collect()
    }

    /// Whether `flag` is a chain of this lattice with the right dimensions.
    pub fn is_flag(&self, flag: &Flag) -> bool {
        flag.chain.len() == self.dim
            && flag
                .chain
                .iter()
                .enumerate()
                .all(|(i, &f)| f < self.faces.len() && self.faces[f].dim == i as i32)
            && flag
                .chain
                .windows(2)
                .all(|w| self.faces[w[0]].set.is_subset(&self.faces[w[1]].set))
    }
}
