use super::{box_sign, distance_lower_bound, BoundaryFn, Box2, GeometryError, Point2, Sign};
use serde::{Deserialize, Serialize};

/// Cell index `(ix, iy)`; `ix` counts columns from `xlo`, `iy` rows from `ylo`.
pub type Cell = (u32, u32);

/// Uniform grid of closed cells over a box, with independent resolution per axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub domain: Box2<f64>,
    pub nx: u32,
    pub ny: u32,
}

impl Grid {
    pub fn new(domain: Box2<f64>, nx: u32, ny: u32) -> Result<Self, GeometryError> {
        if nx == 0 || ny == 0 {
            return Err(GeometryError::EmptyGrid { nx, ny });
        }
        if !(domain.width() > 0.0 && domain.height() > 0.0) {
            return Err(GeometryError::DegenerateDomain);
        }
        Ok(Self { domain, nx, ny })
    }

    pub fn cell_width(&self) -> f64 {
        self.domain.width() / self.nx as f64
    }

    pub fn cell_height(&self) -> f64 {
        self.domain.height() / self.ny as f64
    }

    pub fn cell_diagonal(&self) -> f64 {
        self.cell_width().hypot(self.cell_height())
    }

    pub fn contains_cell(&self, c: Cell) -> bool {
        c.0 < self.nx && c.1 < self.ny
    }

    pub fn len(&self) -> u64 {
        self.nx as u64 * self.ny as u64
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn x_at(&self, i: u32) -> f64 {
        if i == self.nx {
            self.domain.xhi
        } else {
            self.domain.xlo + self.domain.width() * (i as f64 / self.nx as f64)
        }
    }

    fn y_at(&self, j: u32) -> f64 {
        if j == self.ny {
            self.domain.yhi
        } else {
            self.domain.ylo + self.domain.height() * (j as f64 / self.ny as f64)
        }
    }

    pub fn cell_box(&self, c: Cell) -> Box2<f64> {
        Box2 {
            xlo: self.x_at(c.0),
            xhi: self.x_at(c.0 + 1),
            ylo: self.y_at(c.1),
            yhi: self.y_at(c.1 + 1),
        }
    }

    pub fn cell_center(&self, c: Cell) -> Point2<f64> {
        self.cell_box(c).center()
    }

    /// Cell containing `p`; points on the upper edges go to the last cell.
    pub fn cell_of(&self, p: &Point2<f64>) -> Option<Cell> {
        if !self.domain.contains(p) {
            return None;
        }
        let fx = (p.x - self.domain.xlo) / self.cell_width();
        let fy = (p.y - self.domain.ylo) / self.cell_height();
        Some((
            (fx.floor() as u32).min(self.nx - 1),
            (fy.floor() as u32).min(self.ny - 1),
        ))
    }

    /// Inclusive index ranges of every closed cell meeting the closed box `b`,
    /// or `None` if `b` misses the domain.
    pub fn cell_range(&self, b: &Box2<f64>) -> Option<((u32, u32), (u32, u32))> {
        let d = &self.domain;
        if b.xhi < d.xlo || b.xlo > d.xhi || b.yhi < d.ylo || b.ylo > d.yhi {
            return None;
        }
        let idx = |v: f64, lo: f64, step: f64, n: u32| -> u32 {
            let f = ((v - lo) / step).floor();
            if f <= 0.0 {
                0
            } else {
                (f as u64).min(n as u64 - 1) as u32
            }
        };
        let (w, h) = (self.cell_width(), self.cell_height());
        let mut x0 = idx(b.xlo, d.xlo, w, self.nx);
        let mut y0 = idx(b.ylo, d.ylo, h, self.ny);
        // a box edge lying exactly on a grid line also touches the cell below it
        if x0 > 0 && self.x_at(x0) >= b.xlo {
            x0 -= 1;
        }
        if y0 > 0 && self.y_at(y0) >= b.ylo {
            y0 -= 1;
        }
        let x1 = idx(b.xhi, d.xlo, w, self.nx);
        let y1 = idx(b.yhi, d.ylo, h, self.ny);
        Some(((x0, x1), (y0, y1)))
    }

    /// Every cell meeting the closed box `b`.
    pub fn cells_touching(&self, b: &Box2<f64>) -> impl Iterator<Item = Cell> {
        let r = self.cell_range(b);
        let ((x0, x1), (y0, y1)) = r.unwrap_or(((1, 0), (1, 0)));
        (x0..=x1).flat_map(move |ix| (y0..=y1).map(move |iy| (ix, iy)))
    }

    /// Conservative sign of `g` on the closed cell.
    pub fn cell_sign(&self, g: &BoundaryFn<f64>, c: Cell) -> Sign {
        box_sign(g, &self.cell_box(c), g.lipschitz_bound(&self.domain))
    }

    /// Certified lower bound on the distance from the cell to `{g = 0}`.
    pub fn distance_lower_bound(&self, g: &BoundaryFn<f64>, c: Cell) -> f64 {
        distance_lower_bound(g, &self.cell_box(c), g.lipschitz_bound(&self.domain))
    }
}
