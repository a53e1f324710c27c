use super::{Box2, Cell, Grid};
use std::io::{self, BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CellSetParseError {
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

/// Sparse set of grid cells, stored sorted by `(ix, iy)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CellSet {
    cells: Vec<Cell>,
}

impl CellSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_unsorted(mut cells: Vec<Cell>) -> Self {
        cells.sort_unstable();
        cells.dedup();
        Self { cells }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.cells.binary_search(&c).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells.iter().copied()
    }

    pub fn as_slice(&self) -> &[Cell] {
        &self.cells
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.cells, &other.cells);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        CellSet { cells: out }
    }

    pub fn intersection(&self, other: &CellSet) -> CellSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.cells, &other.cells);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        CellSet { cells: out }
    }

    pub fn overlaps(&self, other: &CellSet) -> bool {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        small.iter().any(|c| large.contains(c))
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.iter().all(|c| other.contains(c))
    }

    /// Grows the set by `k` cells in every direction (square neighbourhood), clipped to the grid.
    pub fn dilate(&self, k: u32, grid: &Grid) -> CellSet {
        if k == 0 {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.len() * ((2 * k + 1) * (2 * k + 1)) as usize);
        for (ix, iy) in self.iter() {
            for x in ix.saturating_sub(k)..=(ix + k).min(grid.nx - 1) {
                for y in iy.saturating_sub(k)..=(iy + k).min(grid.ny - 1) {
                    out.push((x, y));
                }
            }
        }
        CellSet::from_unsorted(out)
    }

    /// Union of the cell boxes' bounding box.
    pub fn bbox(&self, grid: &Grid) -> Option<Box2<f64>> {
        let first = self.cells.first()?;
        let (mut x0, mut x1, mut y0, mut y1) = (first.0, first.0, first.1, first.1);
        for &(x, y) in &self.cells {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let lo = grid.cell_box((x0, y0));
        let hi = grid.cell_box((x1, y1));
        Some(Box2 { xlo: lo.xlo, xhi: hi.xhi, ylo: lo.ylo, yhi: hi.yhi })
    }

    /// Euclidean diameter of the union of the closed cells.
    pub fn diameter(&self, grid: &Grid) -> f64 {
        // only the lowest and highest cell of each column can hold an extreme corner
        let mut pts: Vec<(f64, f64)> = Vec::new();
        let mut i = 0;
        while i < self.cells.len() {
            let x = self.cells[i].0;
            let mut j = i;
            while j + 1 < self.cells.len() && self.cells[j + 1].0 == x {
                j += 1;
            }
            for c in [self.cells[i], self.cells[j]] {
                pts.extend(grid.cell_box(c).corners().iter().map(|p| (p.x, p.y)));
            }
            i = j + 1;
        }
        let hull = convex_hull(pts);
        let mut best = 0f64;
        for (k, a) in hull.iter().enumerate() {
            for b in &hull[k + 1..] {
                best = best.max((a.0 - b.0).hypot(a.1 - b.1));
            }
        }
        best
    }

    /// Number of 4-connected components.
    pub fn component_count(&self) -> usize {
        let n = self.cells.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut roots = n;
        for (i, &(x, y)) in self.cells.iter().enumerate() {
            let neighbours = [x.checked_add(1).map(|x| (x, y)), y.checked_add(1).map(|y| (x, y))];
            for nb in neighbours.into_iter().flatten() {
                if let Ok(j) = self.cells.binary_search(&nb) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri] = rj;
                        roots -= 1;
                    }
                }
            }
        }
        roots
    }

    /// Text form: a `grid nx ny xlo xhi ylo yhi` header, then one `ix iy` per line.
    pub fn write_text<W: Write>(&self, grid: &Grid, mut w: W) -> io::Result<()> {
        let d = &grid.domain;
        writeln!(w, "grid {} {} {:e} {:e} {:e} {:e}", grid.nx, grid.ny, d.xlo, d.xhi, d.ylo, d.yhi)?;
        for (x, y) in self.iter() {
            writeln!(w, "{x} {y}")?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<(Grid, CellSet), CellSetParseError> {
        let syntax = |line: usize, msg: &str| CellSetParseError::Syntax { line, msg: msg.to_string() };
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| syntax(1, "missing header"))??;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 7 || toks[0] != "grid" {
            return Err(syntax(1, "expected 'grid nx ny xlo xhi ylo yhi'"));
        }
        let int = |s: &str| s.parse::<u32>().map_err(|e| syntax(1, &e.to_string()));
        let real = |s: &str| s.parse::<f64>().map_err(|e| syntax(1, &e.to_string()));
        let domain = Box2::checked(real(toks[3])?, real(toks[4])?, real(toks[5])?, real(toks[6])?)
            .map_err(|e| syntax(1, &e.to_string()))?;
        let grid = Grid::new(domain, int(toks[1])?, int(toks[2])?).map_err(|e| syntax(1, &e.to_string()))?;
        let mut cells = Vec::new();
        for (k, line) in lines.enumerate() {
            let line = line?;
            let lno = k + 2;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let mut next = || -> Result<u32, CellSetParseError> {
                it.next()
                    .ok_or_else(|| syntax(lno, "expected 'ix iy'"))?
                    .parse::<u32>()
                    .map_err(|e| syntax(lno, &e.to_string()))
            };
            let c = (next()?, next()?);
            if !grid.contains_cell(c) {
                return Err(syntax(lno, "cell index outside grid"));
            }
            cells.push(c);
        }
        Ok((grid, CellSet::from_unsorted(cells)))
    }
}

impl FromIterator<Cell> for CellSet {
    fn from_iter<I: IntoIterator<Item = Cell>>(iter: I) -> Self {
        CellSet::from_unsorted(iter.into_iter().collect())
    }
}

/// Monotone chain; collinear points are dropped.
fn convex_hull(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diameter_matches_corner_scan() {
        let grid = Grid::new(Box2::checked(-1.0, 1.0, 0.0, 0.5).unwrap(), 40, 30).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in [1, 2, 7, 60] {
            let s = CellSet::from_unsorted((0..n).map(|_| (rng.gen_range(0..40), rng.gen_range(0..30))).collect());
            let corners: Vec<_> = s.iter().flat_map(|c| grid.cell_box(c).corners()).collect();
            let mut want = 0f64;
            for a in &corners {
                for b in &corners {
                    want = want.max(a.dist(b));
                }
            }
            assert!((s.diameter(&grid) - want).abs() < 1e-12, "{n}");
        }
        assert_eq!(CellSet::new().diameter(&grid), 0.0);
    }

    #[test]
    fn component_examples() {
        assert_eq!(CellSet::new().component_count(), 0);
        assert_eq!(CellSet::from_unsorted(vec![(0, 0), (0, 1)]).component_count(), 1);
        assert_eq!(CellSet::from_unsorted(vec![(0, 0), (2, 2)]).component_count(), 2);
        // diagonal neighbours are not 4-adjacent
        assert_eq!(CellSet::from_unsorted(vec![(0, 0), (1, 1)]).component_count(), 2);
    }

    fn flood_fill_count(dense: &[[bool; 32]; 32]) -> usize {
        let mut seen = [[false; 32]; 32];
        let mut count = 0;
        for sx in 0..32 {
            for sy in 0..32 {
                if !dense[sx][sy] || seen[sx][sy] {
                    continue;
                }
                count += 1;
                let mut stack = vec![(sx, sy)];
                seen[sx][sy] = true;
                while let Some((x, y)) = stack.pop() {
                    let mut nbs = vec![];
                    if x > 0 { nbs.push((x - 1, y)); }
                    if y > 0 { nbs.push((x, y - 1)); }
                    if x < 31 { nbs.push((x + 1, y)); }
                    if y < 31 { nbs.push((x, y + 1)); }
                    for (a, b) in nbs {
                        if dense[a][b] && !seen[a][b] {
                            seen[a][b] = true;
                            stack.push((a, b));
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn component_count_matches_flood_fill() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for round in 0..200 {
            let density = 0.1 + 0.6 * (round as f64 / 200.0);
            let mut dense = [[false; 32]; 32];
            let mut cells = vec![];
            for x in 0..32 {
                for y in 0..32 {
                    if rng.gen_bool(density) {
                        dense[x][y] = true;
                        cells.push((x as u32, y as u32));
                    }
                }
            }
            assert_eq!(CellSet::from_unsorted(cells).component_count(), flood_fill_count(&dense));
        }
    }

    #[test]
    fn set_algebra() {
        let a = CellSet::from_unsorted(vec![(3, 1), (0, 0), (1, 2), (0, 0)]);
        let b = CellSet::from_unsorted(vec![(1, 2), (5, 5)]);
        assert_eq!(a.len(), 3);
        assert_eq!(a.intersection(&b).as_slice(), &[(1, 2)]);
        assert_eq!(a.union(&b).len(), 4);
        assert!(a.overlaps(&b));
        assert!(a.intersection(&b).is_subset(&a));
        let grid = Grid::new(Box2::unit(), 8, 8).unwrap();
        assert_eq!(CellSet::from_unsorted(vec![(0, 0)]).dilate(1, &grid).len(), 4);
        assert_eq!(CellSet::from_unsorted(vec![(4, 4)]).dilate(1, &grid).len(), 9);
    }

    #[test]
    fn text_roundtrip() {
        let grid = Grid::new(Box2::checked(-1.0, 1.0, 0.0, 0.001867).unwrap(), 256, 4096).unwrap();
        let s = CellSet::from_unsorted(vec![(0, 0), (255, 4095), (17, 3)]);
        let mut buf = vec![];
        s.write_text(&grid, &mut buf).unwrap();
        let (g2, s2) = CellSet::read_text(&buf[..]).unwrap();
        assert_eq!(g2, grid);
        assert_eq!(s2, s);
        assert!(CellSet::read_text(&b"grid 2 2 0 1 0 1\n5 0\n"[..]).is_err());
        assert!(CellSet::read_text(&b"nope\n"[..]).is_err());
    }
}
