//! Macro/pico cell layouts.
//!
//! A layout is one macro cell placed tangential to the x and y axes plus
//! zero or more non-overlapping pico cells fully contained in the macro disc.
//! Three layouts are supported:
//!
//! - `MoNet`: the macro cell alone.
//! - `Coe`: picos ringed along the macro edge, tangential to the macro
//!   boundary and to each other.
//! - `Udc`: picos placed uniformly at random by rejection sampling.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, UnitDisc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Maximum draws per pico before a UDC layout is declared infeasible.
pub const UDC_PLACEMENT_ATTEMPTS: usize = 10_000;

/// Slack used when checking geometric invariants on computed layouts.
const GEOMETRY_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Macro,
    Pico,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TopologyKind {
    #[serde(rename = "monet")]
    MoNet,
    #[serde(rename = "coe")]
    Coe,
    #[serde(rename = "udc")]
    Udc,
}

impl TopologyKind {
    pub fn label(&self) -> &'static str {
        match self {
            TopologyKind::MoNet => "monet",
            TopologyKind::Coe => "coe",
            TopologyKind::Udc => "udc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub id: usize,
    pub center: Point2D,
    pub radius: f64,
    pub kind: CellKind,
}

impl Cell {
    /// Strict membership: a point on the boundary is outside.
    pub fn contains(&self, p: &Point2D) -> bool {
        self.center.distance(p) < self.radius
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("cell radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("pico radius {pico} must be smaller than macro radius {macro_radius}")]
    PicoTooLarge { pico: f64, macro_radius: f64 },
    #[error("{requested} tangential picos do not fit on the edge ring (at most {capacity})")]
    RingOverflow { requested: usize, capacity: usize },
    #[error("could not place pico {index} without overlap after {attempts} attempts")]
    PlacementFailure { index: usize, attempts: usize },
    #[error("layout invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub kind: TopologyKind,
    pub macro_cell: Cell,
    pub picos: Vec<Cell>,
}

fn check_radius(r: f64) -> Result<(), TopologyError> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(TopologyError::InvalidRadius(r))
    }
}

fn macro_cell(macro_radius: f64) -> Cell {
    Cell {
        id: 0,
        center: Point2D::new(macro_radius, macro_radius),
        radius: macro_radius,
        kind: CellKind::Macro,
    }
}

fn pico_cell(id: usize, center: Point2D, radius: f64) -> Cell {
    Cell {
        id,
        center,
        radius,
        kind: CellKind::Pico,
    }
}

fn check_pico_fits(macro_radius: f64, pico_radius: f64) -> Result<(), TopologyError> {
    check_radius(macro_radius)?;
    check_radius(pico_radius)?;
    if pico_radius >= macro_radius {
        return Err(TopologyError::PicoTooLarge {
            pico: pico_radius,
            macro_radius,
        });
    }
    Ok(())
}

pub fn build_monet(macro_radius: f64) -> Result<Topology, TopologyError> {
    check_radius(macro_radius)?;
    Ok(Topology {
        kind: TopologyKind::MoNet,
        macro_cell: macro_cell(macro_radius),
        picos: Vec::new(),
    })
}

/// Angle between adjacent tangential picos on the edge ring.
pub fn coe_angular_step(macro_radius: f64, pico_radius: f64) -> f64 {
    2.0 * (pico_radius / (macro_radius - pico_radius)).asin()
}

pub fn build_coe(
    macro_radius: f64,
    pico_radius: f64,
    n_picos: usize,
) -> Result<Topology, TopologyError> {
    check_pico_fits(macro_radius, pico_radius)?;
    let ring = macro_radius - pico_radius;
    if pico_radius > ring {
        // asin argument above 1: not even one pair of neighbours fits
        if n_picos > 1 {
            return Err(TopologyError::RingOverflow {
                requested: n_picos,
                capacity: 1,
            });
        }
    }
    let step = coe_angular_step(macro_radius, pico_radius);
    if n_picos > 1 && n_picos as f64 * step > 2.0 * PI + 1e-12 {
        return Err(TopologyError::RingOverflow {
            requested: n_picos,
            capacity: ((2.0 * PI + 1e-12) / step).floor() as usize,
        });
    }
    let m = macro_cell(macro_radius);
    let picos = (0..n_picos)
        .map(|i| {
            let angle = i as f64 * step;
            let center = Point2D::new(
                m.center.x + ring * angle.cos(),
                m.center.y + ring * angle.sin(),
            );
            pico_cell(i, center, pico_radius)
        })
        .collect();
    Ok(Topology {
        kind: TopologyKind::Coe,
        macro_cell: m,
        picos,
    })
}

/// Uniform point in the disc of `radius` around `center`.
pub fn uniform_in_disc<R: Rng + ?Sized>(center: Point2D, radius: f64, rng: &mut R) -> Point2D {
    let [x, y]: [f64; 2] = UnitDisc.sample(rng);
    Point2D::new(center.x + radius * x, center.y + radius * y)
}

pub fn build_udc<R: Rng + ?Sized>(
    macro_radius: f64,
    pico_radius: f64,
    n_picos: usize,
    rng: &mut R,
) -> Result<Topology, TopologyError> {
    check_pico_fits(macro_radius, pico_radius)?;
    let m = macro_cell(macro_radius);
    let placement_radius = macro_radius - pico_radius;
    let min_separation = 2.0 * pico_radius;
    let mut picos: Vec<Cell> = Vec::with_capacity(n_picos);
    for index in 0..n_picos {
        let mut placed = None;
        for _ in 0..UDC_PLACEMENT_ATTEMPTS {
            let c = uniform_in_disc(m.center, placement_radius, rng);
            if picos.iter().all(|p| p.center.distance(&c) >= min_separation) {
                placed = Some(c);
                break;
            }
        }
        let center = placed.ok_or(TopologyError::PlacementFailure {
            index,
            attempts: UDC_PLACEMENT_ATTEMPTS,
        })?;
        picos.push(pico_cell(index, center, pico_radius));
    }
    Ok(Topology {
        kind: TopologyKind::Udc,
        macro_cell: m,
        picos,
    })
}

impl Topology {
    pub fn n_picos(&self) -> usize {
        self.picos.len()
    }

    pub fn pico(&self, id: usize) -> Option<&Cell> {
        self.picos.get(id)
    }

    /// Id of the pico covering `p`, if any. Picos never overlap, so at most
    /// one can match; the lowest id is returned on numerical ties.
    pub fn containing_pico(&self, p: &Point2D) -> Option<usize> {
        self.picos.iter().find(|c| c.contains(p)).map(|c| c.id)
    }

    /// Re-checks containment and non-overlap.
    pub fn validate(&self) -> Result<(), TopologyError> {
        let m = &self.macro_cell;
        for (i, p) in self.picos.iter().enumerate() {
            if p.id != i {
                return Err(TopologyError::Invariant(format!(
                    "pico at index {i} carries id {}",
                    p.id
                )));
            }
            if p.center.distance(&m.center) + p.radius > m.radius + GEOMETRY_EPS {
                return Err(TopologyError::Invariant(format!(
                    "pico {i} extends outside the macro cell"
                )));
            }
            for q in &self.picos[i + 1..] {
                if p.center.distance(&q.center) < p.radius + q.radius - GEOMETRY_EPS {
                    return Err(TopologyError::Invariant(format!(
                        "picos {} and {} overlap",
                        p.id, q.id
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn export(&self) -> TopologyExport {
        TopologyExport {
            kind: self.kind,
            macro_cell: DiscExport {
                x: self.macro_cell.center.x,
                y: self.macro_cell.center.y,
                r: self.macro_cell.radius,
            },
            picos: self
                .picos
                .iter()
                .map(|p| PicoExport {
                    id: p.id,
                    x: p.center.x,
                    y: p.center.y,
                    r: p.radius,
                })
                .collect(),
        }
    }
}

/// Plot-friendly JSON view: `{kind, macro:{x,y,r}, picos:[{id,x,y,r}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyExport {
    pub kind: TopologyKind,
    #[serde(rename = "macro")]
    pub macro_cell: DiscExport,
    pub picos: Vec<PicoExport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscExport {
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PicoExport {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub r: f64,
}
