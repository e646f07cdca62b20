//! Uniform 1D cell-centred mesh with interfaces pinned to cell faces.
//!
//! The domain is `(origin, origin + length)`. With two interfaces the cells
//! between them form the inner region (diffusivity 1) and everything else is
//! the outer region. A single interface makes everything to its right inner.
//! A grid with no interfaces is homogeneous and every point is classified as
//! outer.

use std::ops::Range;

use thiserror::Error;

/// Relative tolerance used to snap interface coordinates onto faces.
pub const SNAP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("domain length must be positive, got {0}")]
    NonPositiveLength(f64),
    #[error("at least 2 cells are required, got {0}")]
    TooFewCells(usize),
    #[error("interface at {0} is not strictly inside the domain")]
    InterfaceOutsideDomain(f64),
    #[error("InterfaceNotOnFace: interface at {x} is {distance:e} away from the nearest face")]
    InterfaceNotOnFace { x: f64, distance: f64 },
    #[error("DuplicateInterface: interfaces snap to the same face {face}")]
    DuplicateInterface { face: usize },
    #[error("at most 2 interfaces are supported, got {0}")]
    UnsupportedInterfaceCount(usize),
    #[error("OutOfDomain: x = {x} is outside [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },
}

/// Classification of a point of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Inner,
    Outer,
    Interface,
}

/// Which of the two interfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InterfaceSide {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    origin: f64,
    length: f64,
    n_cells: usize,
    dx: f64,
    interface_faces: Vec<usize>,
    face_positions: Vec<f64>,
    cell_centers: Vec<f64>,
}

/// Builds a grid on `(0, length)` with `n_cells` equal cells.
///
/// Each interface coordinate is snapped to the nearest face when it lies
/// within `1e-9 * length` of it.
pub fn build_grid(length: f64, n_cells: usize, interfaces: &[f64]) -> Result<Grid1D, GridError> {
    Grid1D::new(0.0, length, n_cells, interfaces)
}

impl Grid1D {
    pub fn new(
        origin: f64,
        length: f64,
        n_cells: usize,
        interfaces: &[f64],
    ) -> Result<Self, GridError> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(GridError::NonPositiveLength(length));
        }
        if n_cells < 2 {
            return Err(GridError::TooFewCells(n_cells));
        }
        if interfaces.len() > 2 {
            return Err(GridError::UnsupportedInterfaceCount(interfaces.len()));
        }
        let dx = length / n_cells as f64;
        // Positions are computed from the index rather than accumulated so the
        // last face lands exactly on the right end.
        let face_positions: Vec<f64> = (0..=n_cells)
            .map(|i| {
                if i == n_cells {
                    origin + length
                } else {
                    origin + length * (i as f64) / (n_cells as f64)
                }
            })
            .collect();
        let cell_centers: Vec<f64> = face_positions
            .windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect();

        let tol = SNAP_TOLERANCE * length;
        let mut interface_faces = Vec::with_capacity(interfaces.len());
        for &x in interfaces {
            if !(x > origin && x < origin + length) {
                return Err(GridError::InterfaceOutsideDomain(x));
            }
            let nearest = (((x - origin) / dx).round() as usize).min(n_cells);
            let distance = (face_positions[nearest] - x).abs();
            if distance > tol {
                return Err(GridError::InterfaceNotOnFace { x, distance });
            }
            if nearest == 0 || nearest == n_cells {
                return Err(GridError::InterfaceOutsideDomain(x));
            }
            interface_faces.push(nearest);
        }
        interface_faces.sort_unstable();
        if let Some(w) = interface_faces.windows(2).find(|w| w[0] == w[1]) {
            return Err(GridError::DuplicateInterface { face: w[0] });
        }

        Ok(Self {
            origin,
            length,
            n_cells,
            dx,
            interface_faces,
            face_positions,
            cell_centers,
        })
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn end(&self) -> f64 {
        self.face_positions[self.n_cells]
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn interface_faces(&self) -> &[usize] {
        &self.interface_faces
    }

    pub fn has_interfaces(&self) -> bool {
        !self.interface_faces.is_empty()
    }

    pub fn face_positions(&self) -> &[f64] {
        &self.face_positions
    }

    pub fn cell_centers(&self) -> &[f64] {
        &self.cell_centers
    }

    pub fn interface_positions(&self) -> Vec<f64> {
        self.interface_faces
            .iter()
            .map(|&f| self.face_positions[f])
            .collect()
    }

    /// Face index of the requested interface, if the grid has interfaces.
    pub fn interface_face(&self, which: InterfaceSide) -> Option<usize> {
        match (which, self.interface_faces.as_slice()) {
            (InterfaceSide::Left, [l, ..]) => Some(*l),
            (InterfaceSide::Right, [_, r]) => Some(*r),
            _ => None,
        }
    }

    /// Cell indices of the inner region; empty for a homogeneous grid.
    pub fn inner_cells(&self) -> Range<usize> {
        match self.interface_faces.as_slice() {
            [l, r] => *l..*r,
            [l] => *l..self.n_cells,
            _ => 0..0,
        }
    }

    /// The outer region as contiguous cell ranges (left and right components).
    pub fn outer_cells(&self) -> Vec<Range<usize>> {
        match self.interface_faces.as_slice() {
            [l, r] => vec![0..*l, *r..self.n_cells],
            [l] => vec![0..*l],
            _ => vec![0..self.n_cells],
        }
    }

    /// Distance from `x` to the nearest interface, `+inf` when there is none.
    pub fn distance_to_interface(&self, x: f64) -> f64 {
        self.interface_faces
            .iter()
            .map(|&f| (self.face_positions[f] - x).abs())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn region_of(&self, x: f64) -> Result<Region, GridError> {
        let lo = self.origin;
        let hi = self.end();
        if !(x >= lo && x <= hi) {
            return Err(GridError::OutOfDomain { x, lo, hi });
        }
        let tol = SNAP_TOLERANCE * self.length;
        match self.interface_faces.as_slice() {
            [l, rest @ ..] => {
                let a = self.face_positions[*l];
                let b = rest.first().map(|&r| self.face_positions[r]);
                if (x - a).abs() <= tol || b.is_some_and(|b| (x - b).abs() <= tol) {
                    Ok(Region::Interface)
                } else if x > a && b.is_none_or(|b| x < b) {
                    Ok(Region::Inner)
                } else {
                    Ok(Region::Outer)
                }
            }
            [] => Ok(Region::Outer),
        }
    }

    /// Region of cell `i`, decided by its centre.
    pub fn cell_region(&self, i: usize) -> Region {
        let r = self.inner_cells();
        if r.contains(&i) {
            Region::Inner
        } else {
            Region::Outer
        }
    }

    /// A homogeneous grid covering the given cell range of this grid.
    pub fn subgrid(&self, cells: Range<usize>) -> Result<Grid1D, GridError> {
        let n = cells.end.saturating_sub(cells.start);
        let origin = self.face_positions[cells.start];
        let length = self.face_positions[cells.end] - origin;
        Grid1D::new(origin, length, n, &[])
    }

    pub fn same_geometry(&self, other: &Grid1D) -> bool {
        self.n_cells == other.n_cells
            && self.origin == other.origin
            && self.length == other.length
            && self.interface_faces == other.interface_faces
    }
}
