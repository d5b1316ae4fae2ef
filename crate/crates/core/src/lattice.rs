//! Open-boundary square lattices: vertices, oriented links, plaquettes and
//! vertex stars.
//!
//! Numbering is row-major from the bottom-left corner. Within a row the
//! horizontal links come first, followed by the vertical links that leave the
//! row upwards. Plaquette links are listed counterclockwise starting from the
//! bottom link: `[bottom, right, top, left]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

macro_rules! index_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub usize);

        impl $name {
            pub fn index(self) -> usize {
                self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl From<usize> for $name {
            fn from(i: usize) -> Self {
                $name(i)
            }
        }
    };
}

index_type!(
    /// Index of a link. Link `l` is carried by qubit `l`.
    LinkId
);
index_type!(VertexId);
index_type!(PlaquetteId);

/// Cells of the plus-shaped pentomino used for the 16-link cross.
const CROSS_CELLS: [(usize, usize); 5] = [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)];

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    n_vertices: usize,
    links: Vec<(usize, usize)>,
    plaquettes: Vec<[usize; 4]>,
    stars: Vec<Vec<usize>>,
    coords: Option<Vec<(usize, usize)>>,
    cells: Option<Vec<(usize, usize)>>,
}

/// A violated lattice invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    LinkEndpointOutOfRange { link: usize },
    SelfLoop { link: usize },
    PlaquetteLinkOutOfRange { plaquette: usize },
    PlaquetteRepeatsLink { plaquette: usize },
    PlaquetteNotClosed { plaquette: usize },
    StarSize { vertex: usize, size: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::LinkEndpointOutOfRange { link } => {
                write!(f, "link {link}: endpoint is not a valid vertex")
            }
            Diagnostic::SelfLoop { link } => write!(f, "link {link}: endpoints coincide"),
            Diagnostic::PlaquetteLinkOutOfRange { plaquette } => {
                write!(f, "plaquette {plaquette}: references a missing link")
            }
            Diagnostic::PlaquetteRepeatsLink { plaquette } => {
                write!(f, "plaquette {plaquette}: repeats a link")
            }
            Diagnostic::PlaquetteNotClosed { plaquette } => {
                write!(f, "plaquette {plaquette}: links do not close a 4-cycle")
            }
            Diagnostic::StarSize { vertex, size } => {
                write!(f, "vertex {vertex}: star has {size} links (expected 2..=4)")
            }
        }
    }
}

impl Lattice {
    /// Builds a lattice from raw parts. No invariant is checked here; call
    /// [`Lattice::validate`] for diagnostics.
    pub fn from_parts(
        n_vertices: usize,
        links: Vec<(usize, usize)>,
        plaquettes: Vec<[usize; 4]>,
    ) -> Self {
        let mut stars = vec![Vec::new(); n_vertices];
        for (l, &(a, b)) in links.iter().enumerate() {
            for v in [a, b] {
                if v < n_vertices && !stars[v].contains(&l) {
                    stars[v].push(l);
                }
            }
        }
        Lattice {
            n_vertices,
            links,
            plaquettes,
            stars,
            coords: None,
            cells: None,
        }
    }

    /// Builds the lattice covering a set of unit cells `(x, y)`.
    pub fn from_cells(cells: &[(usize, usize)]) -> Self {
        let cell_set: BTreeSet<(usize, usize)> = cells.iter().copied().collect();
        let has = |x: usize, y: usize| cell_set.contains(&(x, y));
        let has_signed = |x: isize, y: isize| x >= 0 && y >= 0 && has(x as usize, y as usize);

        // row-major vertex order: key (y, x)
        let mut vertex_keys = BTreeSet::new();
        for &(x, y) in &cell_set {
            for (dx, dy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                vertex_keys.insert((y + dy, x + dx));
            }
        }
        let coords: Vec<(usize, usize)> = vertex_keys.iter().map(|&(y, x)| (x, y)).collect();
        let vertex_of: BTreeMap<(usize, usize), usize> =
            coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();

        let max_y = coords.iter().map(|c| c.1).max().unwrap_or(0);
        let max_x = coords.iter().map(|c| c.0).max().unwrap_or(0);
        let mut links = Vec::new();
        let mut link_of: BTreeMap<[(usize, usize); 2], usize> = BTreeMap::new();
        for y in 0..=max_y {
            for x in 0..max_x {
                let (xi, yi) = (x as isize, y as isize);
                if has_signed(xi, yi) || has_signed(xi, yi - 1) {
                    link_of.insert([(x, y), (x + 1, y)], links.len());
                    links.push((vertex_of[&(x, y)], vertex_of[&(x + 1, y)]));
                }
            }
            if y < max_y {
                for x in 0..=max_x {
                    let (xi, yi) = (x as isize, y as isize);
                    if has_signed(xi, yi) || has_signed(xi - 1, yi) {
                        link_of.insert([(x, y), (x, y + 1)], links.len());
                        links.push((vertex_of[&(x, y)], vertex_of[&(x, y + 1)]));
                    }
                }
            }
        }

        let mut ordered_cells: Vec<(usize, usize)> = cell_set.iter().copied().collect();
        ordered_cells.sort_by_key(|&(x, y)| (y, x));
        let plaquettes = ordered_cells
            .iter()
            .map(|&(x, y)| {
                [
                    link_of[&[(x, y), (x + 1, y)]],
                    link_of[&[(x + 1, y), (x + 1, y + 1)]],
                    link_of[&[(x, y + 1), (x + 1, y + 1)]],
                    link_of[&[(x, y), (x, y + 1)]],
                ]
            })
            .collect();

        let mut lattice = Lattice::from_parts(coords.len(), links, plaquettes);
        lattice.coords = Some(coords);
        lattice.cells = Some(ordered_cells);
        lattice
    }

    /// The plus-pentomino: 12 vertices, 16 links, 5 plaquettes.
    pub fn cross() -> Self {
        Lattice::from_cells(&CROSS_CELLS)
    }

    /// Open rectangular grid of `width x height` plaquettes.
    pub fn rect(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyLattice { width, height });
        }
        let cells: Vec<_> = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .collect();
        Ok(Lattice::from_cells(&cells))
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_links(&self) -> usize {
        self.links.len()
    }

    pub fn n_plaquettes(&self) -> usize {
        self.plaquettes.len()
    }

    pub fn link(&self, id: LinkId) -> Result<(VertexId, VertexId)> {
        self.links
            .get(id.0)
            .map(|&(a, b)| (VertexId(a), VertexId(b)))
            .ok_or(Error::InvalidLink(id.0))
    }

    pub fn links(&self) -> &[(usize, usize)] {
        &self.links
    }

    pub fn plaquette(&self, id: PlaquetteId) -> Option<[LinkId; 4]> {
        self.plaquettes.get(id.0).map(|p| p.map(LinkId))
    }

    pub fn plaquettes(&self) -> &[[usize; 4]] {
        &self.plaquettes
    }

    pub fn star(&self, v: VertexId) -> Result<&[usize]> {
        self.stars
            .get(v.0)
            .map(Vec::as_slice)
            .ok_or(Error::InvalidVertex(v.0))
    }

    pub fn stars(&self) -> &[Vec<usize>] {
        &self.stars
    }

    /// Grid coordinates of each vertex, when the lattice was built from cells.
    pub fn coords(&self) -> Option<&[(usize, usize)]> {
        self.coords.as_deref()
    }

    /// Lower-left corners of the plaquettes, in plaquette order.
    pub fn cells(&self) -> Option<&[(usize, usize)]> {
        self.cells.as_deref()
    }

    pub fn vertex_at(&self, x: usize, y: usize) -> Option<VertexId> {
        self.coords
            .as_ref()?
            .iter()
            .position(|&c| c == (x, y))
            .map(VertexId)
    }

    pub fn plaquette_at(&self, x: usize, y: usize) -> Option<PlaquetteId> {
        self.cells
            .as_ref()?
            .iter()
            .position(|&c| c == (x, y))
            .map(PlaquetteId)
    }

    /// The link joining two vertices, in either orientation.
    pub fn link_between(&self, a: VertexId, b: VertexId) -> Option<LinkId> {
        self.links
            .iter()
            .position(|&(u, v)| (u, v) == (a.0, b.0) || (u, v) == (b.0, a.0))
            .map(LinkId)
    }

    /// Finds the plaquette made of exactly these links, in any order.
    pub fn find_plaquette(&self, links: &[LinkId]) -> Option<PlaquetteId> {
        let mut want: Vec<usize> = links.iter().map(|l| l.0).collect();
        want.sort_unstable();
        self.plaquettes
            .iter()
            .position(|p| {
                let mut have = p.to_vec();
                have.sort_unstable();
                have == want
            })
            .map(PlaquetteId)
    }

    /// Number of independent Gauss constraints on a connected open lattice.
    pub fn independent_constraints(&self) -> usize {
        self.n_vertices.saturating_sub(1)
    }

    /// `log2` of the physical-sector dimension, `n_links - n_vertices + 1`.
    pub fn physical_qubits(&self) -> usize {
        (self.n_links() + 1).saturating_sub(self.n_vertices)
    }

    /// Vertex sequence of a link path, or `None` if consecutive links do not
    /// share a vertex.
    pub fn path_vertices(&self, path: &[LinkId]) -> Result<Vec<VertexId>> {
        for l in path {
            self.link(*l)?;
        }
        match path {
            [] => Ok(Vec::new()),
            [only] => {
                let (a, b) = self.link(*only)?;
                Ok(vec![a, b])
            }
            [first, second, ..] => {
                let (a, b) = self.links[first.0];
                let (c, d) = self.links[second.0];
                let start = if b == c || b == d {
                    a
                } else if a == c || a == d {
                    b
                } else {
                    return Err(Error::PathNotContiguous(1));
                };
                let mut verts = vec![VertexId(start)];
                let mut cur = start;
                for (i, l) in path.iter().enumerate() {
                    let (u, v) = self.links[l.0];
                    cur = if u == cur {
                        v
                    } else if v == cur {
                        u
                    } else {
                        return Err(Error::PathNotContiguous(i));
                    };
                    verts.push(VertexId(cur));
                }
                Ok(verts)
            }
        }
    }

    /// Whether every vertex touches an even number of the given links.
    pub fn is_closed_chain(&self, links: &[LinkId]) -> bool {
        let mut degree = vec![0usize; self.n_vertices];
        for l in links {
            match self.links.get(l.0) {
                Some(&(a, b)) if a < self.n_vertices && b < self.n_vertices => {
                    degree[a] += 1;
                    degree[b] += 1;
                }
                _ => return false,
            }
        }
        degree.iter().all(|d| d % 2 == 0)
    }

    /// Checks every structural invariant and reports each violation once.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for (l, &(a, b)) in self.links.iter().enumerate() {
            if a >= self.n_vertices || b >= self.n_vertices {
                out.push(Diagnostic::LinkEndpointOutOfRange { link: l });
            } else if a == b {
                out.push(Diagnostic::SelfLoop { link: l });
            }
        }
        for (p, links) in self.plaquettes.iter().enumerate() {
            if links.iter().any(|&l| l >= self.links.len()) {
                out.push(Diagnostic::PlaquetteLinkOutOfRange { plaquette: p });
                continue;
            }
            let distinct: BTreeSet<usize> = links.iter().copied().collect();
            if distinct.len() != 4 {
                out.push(Diagnostic::PlaquetteRepeatsLink { plaquette: p });
                continue;
            }
            if !self.is_four_cycle(links) {
                out.push(Diagnostic::PlaquetteNotClosed { plaquette: p });
            }
        }
        for (v, star) in self.stars.iter().enumerate() {
            if !(2..=4).contains(&star.len()) {
                out.push(Diagnostic::StarSize {
                    vertex: v,
                    size: star.len(),
                });
            }
        }
        out
    }

    fn is_four_cycle(&self, links: &[usize; 4]) -> bool {
        let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
        for &l in links {
            let (a, b) = self.links[l];
            if a == b {
                return false;
            }
            *degree.entry(a).or_default() += 1;
            *degree.entry(b).or_default() += 1;
        }
        if degree.len() != 4 || degree.values().any(|&d| d != 2) {
            return false;
        }
        // consecutive links must share a vertex
        (0..4).all(|i| {
            let (a, b) = self.links[links[i]];
            let (c, d) = self.links[links[(i + 1) % 4]];
            a == c || a == d || b == c || b == d
        })
    }

    /// Line-oriented text form: `LATTICE`, `LINK` and `PLAQ` records.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "LATTICE v={} e={} p={}\n",
            self.n_vertices,
            self.n_links(),
            self.n_plaquettes()
        );
        for (l, (a, b)) in self.links.iter().enumerate() {
            s.push_str(&format!("LINK {l} {a} {b}\n"));
        }
        for (p, q) in self.plaquettes.iter().enumerate() {
            s.push_str(&format!("PLAQ {p} {} {} {} {}\n", q[0], q[1], q[2], q[3]));
        }
        s
    }

    /// Parses [`Lattice::to_text`] output. Blank lines and `#` comments are
    /// ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize, usize)> = None;
        let mut links: Vec<Option<(usize, usize)>> = Vec::new();
        let mut plaqs: Vec<Option<[usize; 4]>> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut tok = line.split_whitespace();
            let kind = tok.next().unwrap_or_default();
            let rest: Vec<&str> = tok.collect();
            match kind {
                "LATTICE" => {
                    let mut vals = [None; 3];
                    for t in &rest {
                        let (k, v) = t
                            .split_once('=')
                            .ok_or_else(|| Error::parse(line_no, "expected key=value"))?;
                        let v: usize = v
                            .parse()
                            .map_err(|_| Error::parse(line_no, format!("bad count {v:?}")))?;
                        match k {
                            "v" => vals[0] = Some(v),
                            "e" => vals[1] = Some(v),
                            "p" => vals[2] = Some(v),
                            _ => return Err(Error::parse(line_no, format!("unknown key {k:?}"))),
                        }
                    }
                    match vals {
                        [Some(v), Some(e), Some(p)] => {
                            header = Some((v, e, p));
                            links = vec![None; e];
                            plaqs = vec![None; p];
                        }
                        _ => return Err(Error::parse(line_no, "header needs v=, e= and p=")),
                    }
                }
                "LINK" | "PLAQ" => {
                    if header.is_none() {
                        return Err(Error::parse(line_no, "record before LATTICE header"));
                    }
                    let nums = rest
                        .iter()
                        .map(|t| t.parse::<usize>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| Error::parse(line_no, "expected integers"))?;
                    if kind == "LINK" {
                        let [id, a, b] = nums[..] else {
                            return Err(Error::parse(line_no, "LINK needs 3 fields"));
                        };
                        let slot = links
                            .get_mut(id)
                            .ok_or_else(|| Error::parse(line_no, "link id out of range"))?;
                        *slot = Some((a, b));
                    } else {
                        let [id, l1, l2, l3, l4] = nums[..] else {
                            return Err(Error::parse(line_no, "PLAQ needs 5 fields"));
                        };
                        let slot = plaqs
                            .get_mut(id)
                            .ok_or_else(|| Error::parse(line_no, "plaquette id out of range"))?;
                        *slot = Some([l1, l2, l3, l4]);
                    }
                }
                other => return Err(Error::parse(line_no, format!("unknown record {other:?}"))),
            }
        }
        let (v, _, _) = header.ok_or_else(|| Error::parse(0, "missing LATTICE header"))?;
        let links = links
            .into_iter()
            .enumerate()
            .map(|(i, l)| l.ok_or_else(|| Error::parse(0, format!("link {i} missing"))))
            .collect::<Result<Vec<_>>>()?;
        let plaqs = plaqs
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| Error::parse(0, format!("plaquette {i} missing"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Lattice::from_parts(v, links, plaqs))
    }
}

/// Links of the boundary of the `w x h` block of plaquettes whose lower-left
/// corner is `(x0, y0)`, walked counterclockwise from `(x0, y0)`.
pub fn rect_boundary_path(
    lattice: &Lattice,
    x0: usize,
    y0: usize,
    w: usize,
    h: usize,
) -> Option<Vec<LinkId>> {
    let mut corners = Vec::new();
    for x in x0..x0 + w {
        corners.push((x, y0));
    }
    for y in y0..y0 + h {
        corners.push((x0 + w, y));
    }
    for x in (x0 + 1..=x0 + w).rev() {
        corners.push((x, y0 + h));
    }
    for y in (y0 + 1..=y0 + h).rev() {
        corners.push((x0, y));
    }
    corners.push((x0, y0));
    corners
        .windows(2)
        .map(|pair| {
            let a = lattice.vertex_at(pair[0].0, pair[0].1)?;
            let b = lattice.vertex_at(pair[1].0, pair[1].1)?;
            lattice.link_between(a, b)
        })
        .collect()
}
