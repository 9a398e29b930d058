//! Nerves of finite covers: vertices `0..n` and increasing simplices of
//! dimension 1 to 3, closed under faces.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NerveError {
    #[error("simplex {0:?} is not strictly increasing")]
    NotIncreasing(Vec<usize>),
    #[error("simplex {0:?} uses a vertex outside 0..{1}")]
    VertexOutOfRange(Vec<usize>, usize),
    #[error("simplex {0:?} listed twice")]
    Duplicate(Vec<usize>),
    #[error("face {face:?} of {simplex:?} is missing")]
    MissingFace { simplex: Vec<usize>, face: Vec<usize> },
    #[error("unknown nerve fixture {0:?}")]
    UnknownFixture(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nerve {
    vertices: usize,
    edges: Vec<[usize; 2]>,
    triangles: Vec<[usize; 3]>,
    tetrahedra: Vec<[usize; 4]>,
    edge_index: BTreeMap<[usize; 2], usize>,
    triangle_index: BTreeMap<[usize; 3], usize>,
}

fn check_simplices<const K: usize>(list: &[[usize; K]], n: usize) -> Result<Vec<[usize; K]>, NerveError> {
    let mut out = list.to_vec();
    for s in &out {
        if s.windows(2).any(|w| w[0] >= w[1]) {
            return Err(NerveError::NotIncreasing(s.to_vec()));
        }
        if s.iter().any(|&v| v >= n) {
            return Err(NerveError::VertexOutOfRange(s.to_vec(), n));
        }
    }
    out.sort_unstable();
    if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
        return Err(NerveError::Duplicate(w[0].to_vec()));
    }
    Ok(out)
}

impl Nerve {
    /// Validates monotonicity and face closure; simplices are stored in
    /// lexicographic order.
    pub fn new(
        vertices: usize,
        edges: &[[usize; 2]],
        triangles: &[[usize; 3]],
        tetrahedra: &[[usize; 4]],
    ) -> Result<Self, NerveError> {
        let edges = check_simplices(edges, vertices)?;
        let triangles = check_simplices(triangles, vertices)?;
        let tetrahedra = check_simplices(tetrahedra, vertices)?;
        let edge_index: BTreeMap<_, _> = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let triangle_index: BTreeMap<_, _> = triangles.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        for &[a, b, c] in &triangles {
            for face in [[b, c], [a, c], [a, b]] {
                if !edge_index.contains_key(&face) {
                    return Err(NerveError::MissingFace { simplex: vec![a, b, c], face: face.to_vec() });
                }
            }
        }
        for &[a, b, c, d] in &tetrahedra {
            for face in [[b, c, d], [a, c, d], [a, b, d], [a, b, c]] {
                if !triangle_index.contains_key(&face) {
                    return Err(NerveError::MissingFace { simplex: vec![a, b, c, d], face: face.to_vec() });
                }
            }
        }
        Ok(Nerve { vertices, edges, triangles, tetrahedra, edge_index, triangle_index })
    }

    pub fn point() -> Self {
        Self::new(1, &[], &[], &[]).unwrap()
    }

    pub fn interval() -> Self {
        Self::new(2, &[[0, 1]], &[], &[]).unwrap()
    }

    /// Boundary of a triangle: a cover of `S^1`.
    pub fn circle() -> Self {
        Self::new(3, &[[0, 1], [0, 2], [1, 2]], &[], &[]).unwrap()
    }

    /// Boundary of a tetrahedron: a cover of `S^2`.
    pub fn sphere() -> Self {
        let edges = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
        Self::new(4, &edges, &[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]], &[]).unwrap()
    }

    /// The full 3-simplex, a contractible cover with one tetrahedron.
    pub fn solid_tetrahedron() -> Self {
        let s = Self::sphere();
        Self::new(4, &s.edges, &s.triangles, &[[0, 1, 2, 3]]).unwrap()
    }

    /// Fixture names: `point`, `interval`, `circle` (alias `triangle`, the
    /// boundary of a triangle), `sphere` (alias `tetrahedron`, the boundary
    /// of a tetrahedron) and `ball` (alias `solid-tetrahedron`).
    pub fn by_name(name: &str) -> Result<Self, NerveError> {
        match name {
            "point" => Ok(Self::point()),
            "interval" => Ok(Self::interval()),
            "circle" | "triangle" => Ok(Self::circle()),
            "sphere" | "tetrahedron" => Ok(Self::sphere()),
            "ball" | "solid-tetrahedron" => Ok(Self::solid_tetrahedron()),
            _ => Err(NerveError::UnknownFixture(name.to_string())),
        }
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn tetrahedra(&self) -> &[[usize; 4]] {
        &self.tetrahedra
    }

    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        self.edge_index.get(&[i, j]).copied()
    }

    pub fn triangle_index(&self, i: usize, j: usize, k: usize) -> Option<usize> {
        self.triangle_index.get(&[i, j, k]).copied()
    }

    /// Simplices of dimension `dim` (0 to 3) as vertex lists.
    pub fn simplices(&self, dim: usize) -> Vec<Vec<usize>> {
        match dim {
            0 => (0..self.vertices).map(|v| vec![v]).collect(),
            1 => self.edges.iter().map(|s| s.to_vec()).collect(),
            2 => self.triangles.iter().map(|s| s.to_vec()).collect(),
            3 => self.tetrahedra.iter().map(|s| s.to_vec()).collect(),
            _ => Vec::new(),
        }
    }

    /// Index of a simplex among those of its dimension.
    pub fn simplex_index(&self, s: &[usize]) -> Option<usize> {
        match *s {
            [v] => (v < self.vertices).then_some(v),
            [i, j] => self.edge_index(i, j),
            [i, j, k] => self.triangle_index(i, j, k),
            [i, j, k, l] => self.tetrahedra.binary_search(&[i, j, k, l]).ok(),
            _ => None,
        }
    }

    /// Edge indices incident to each vertex.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for (e, &[i, j]) in self.edges.iter().enumerate() {
            adj[i].push((j, e));
            adj[j].push((i, e));
        }
        adj
    }

    /// Breadth-first spanning forest: vertices in visiting order, and for
    /// each non-root vertex its parent and the connecting edge.
    pub fn spanning_forest(&self) -> SpanningForest {
        let adj = self.adjacency();
        let mut parent = vec![None; self.vertices];
        let mut seen = vec![false; self.vertices];
        let mut order = Vec::with_capacity(self.vertices);
        let mut roots = Vec::new();
        for r in 0..self.vertices {
            if seen[r] {
                continue;
            }
            roots.push(r);
            seen[r] = true;
            let mut queue = VecDeque::from([r]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for &(w, e) in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some((v, e));
                        queue.push_back(w);
                    }
                }
            }
        }
        SpanningForest { order, parent, roots }
    }

    /// Vertices grouped by connected component, each group in visiting
    /// order.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let f = self.spanning_forest();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for &v in &f.order {
            if f.parent[v].is_none() {
                out.push(Vec::new());
            }
            out.last_mut().unwrap().push(v);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// The same complex with vertex `v` renamed `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, NerveError> {
        fn map<const K: usize>(s: &[usize; K], perm: &[usize]) -> [usize; K] {
            let mut t = s.map(|v| perm[v]);
            t.sort_unstable();
            t
        }
        let e: Vec<[usize; 2]> = self.edges.iter().map(|s| map(s, perm)).collect();
        let t: Vec<[usize; 3]> = self.triangles.iter().map(|s| map(s, perm)).collect();
        let q: Vec<[usize; 4]> = self.tetrahedra.iter().map(|s| map(s, perm)).collect();
        Self::new(self.vertices, &e, &t, &q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningForest {
    pub order: Vec<usize>,
    pub parent: Vec<Option<(usize, usize)>>,
    pub roots: Vec<usize>,
}

/// Wire form: `{"vertices": n, "edges": [[i,j]...], "triangles": [...],
/// "tetrahedra": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NerveJson {
    pub vertices: usize,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub triangles: Vec<[usize; 3]>,
    #[serde(default)]
    pub tetrahedra: Vec<[usize; 4]>,
}

impl From<&Nerve> for NerveJson {
    fn from(n: &Nerve) -> Self {
        NerveJson {
            vertices: n.vertices,
            edges: n.edges.clone(),
            triangles: n.triangles.clone(),
            tetrahedra: n.tetrahedra.clone(),
        }
    }
}

impl TryFrom<NerveJson> for Nerve {
    type Error = NerveError;

    fn try_from(j: NerveJson) -> Result<Self, NerveError> {
        Nerve::new(j.vertices, &j.edges, &j.triangles, &j.tetrahedra)
    }
}

impl Serialize for Nerve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        NerveJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Nerve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Nerve::try_from(NerveJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
