//! Physical layout of the base station: antenna array and metasurface stack.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// A point in the right-handed frame used throughout: the metasurface layers
/// are parallel to the x-z plane and stacked along +y, the antenna array lies
/// along the z axis, and users sit on the +y axis beyond the last layer.
pub type Point = [f64; 3];

/// Declarative geometry description. Lengths in meters; either `frequency_ghz`
/// or `wavelength_m` must be given. Optional fields default to the reference
/// setup: half-wavelength atom pitch and dimensions, half-wavelength antenna
/// spacing, and a transmit gap equal to the inter-layer gap.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    #[serde(default)]
    pub frequency_ghz: Option<f64>,
    #[serde(default)]
    pub wavelength_m: Option<f64>,
    pub num_antennas: usize,
    /// Atoms per layer along x. When absent, derived from `num_atoms` by the
    /// most-square factorization with the long side on z.
    #[serde(default)]
    pub nx: Option<usize>,
    /// Atoms per layer along z.
    #[serde(default)]
    pub nz: Option<usize>,
    /// Total atoms per layer; alternative to (`nx`, `nz`).
    #[serde(default)]
    pub num_atoms: Option<usize>,
    pub num_layers: usize,
    pub sim_thickness_m: f64,
    #[serde(default)]
    pub atom_spacing_m: Option<f64>,
    #[serde(default)]
    pub atom_width_m: Option<f64>,
    #[serde(default)]
    pub atom_height_m: Option<f64>,
    #[serde(default)]
    pub antenna_spacing_m: Option<f64>,
    #[serde(default)]
    pub tx_gap_m: Option<f64>,
    #[serde(default = "default_center_height")]
    pub center_height_m: f64,
}

fn default_center_height() -> f64 {
    15.0
}

impl Default for GeometryConfig {
    /// The reference setup: 28 GHz, M = 4, a 6-layer stack of 8x8 atoms,
    /// 5 cm thickness.
    fn default() -> Self {
        GeometryConfig {
            frequency_ghz: Some(28.0),
            wavelength_m: None,
            num_antennas: 4,
            nx: None,
            nz: None,
            num_atoms: Some(64),
            num_layers: 6,
            sim_thickness_m: 0.05,
            atom_spacing_m: None,
            atom_width_m: None,
            atom_height_m: None,
            antenna_spacing_m: None,
            tx_gap_m: None,
            center_height_m: 15.0,
        }
    }
}

/// Splits `n` into `(nx, nz)` with `nx * nz == n`, as square as possible and
/// the longer side on z so the grid's long axis lines up with the antenna
/// line.
pub fn square_factorization(n: usize) -> (usize, usize) {
    let mut nx = (n as f64).sqrt().floor() as usize;
    while nx > 1 && n % nx != 0 {
        nx -= 1;
    }
    (nx, n / nx)
}

/// Fully positioned geometry: every element location is precomputed and the
/// struct is immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct SimGeometry {
    pub wavelength: f64,
    pub num_antennas: usize,
    pub nx: usize,
    pub nz: usize,
    pub num_layers: usize,
    pub atom_spacing: f64,
    pub atom_width: f64,
    pub atom_height: f64,
    pub sim_thickness: f64,
    /// Gap between consecutive layers, `sim_thickness / num_layers`.
    pub layer_gap: f64,
    /// Gap between the antenna plane and the first layer.
    pub tx_gap: f64,
    pub center_height: f64,
    pub antenna_positions: Vec<Point>,
    /// `layer_positions[l][n]`: atom `n` of layer `l`, row-major over (z, x).
    pub layer_positions: Vec<Vec<Point>>,
}

impl SimGeometry {
    pub fn atoms_per_layer(&self) -> usize {
        self.nx * self.nz
    }

    /// Atom grid of one layer at plane `y`, centered on (x = 0, z = center).
    fn grid(&self, y: f64) -> Vec<Point> {
        let mut pts = Vec::with_capacity(self.nx * self.nz);
        for iz in 0..self.nz {
            let z = (iz as f64 - (self.nz as f64 - 1.0) / 2.0) * self.atom_spacing
                + self.center_height;
            for ix in 0..self.nx {
                let x = (ix as f64 - (self.nx as f64 - 1.0) / 2.0) * self.atom_spacing;
                pts.push([x, y, z]);
            }
        }
        pts
    }
}

/// Builds and validates the full geometry from a configuration.
pub fn build_geometry(cfg: &GeometryConfig) -> Result<SimGeometry> {
    let wavelength = match (cfg.wavelength_m, cfg.frequency_ghz) {
        (Some(w), _) if w > 0.0 => w,
        (Some(_), _) => return Err(Error::config("wavelength_m", "must be positive")),
        (None, Some(f)) if f > 0.0 => SPEED_OF_LIGHT / (f * 1e9),
        (None, Some(_)) => return Err(Error::config("frequency_ghz", "must be positive")),
        (None, None) => {
            return Err(Error::config(
                "frequency_ghz",
                "either frequency_ghz or wavelength_m is required",
            ))
        }
    };

    let (nx, nz) = match (cfg.nx, cfg.nz, cfg.num_atoms) {
        (Some(x), Some(z), _) => (x, z),
        (None, None, Some(n)) => square_factorization(n),
        (Some(_), None, _) | (None, Some(_), _) => {
            return Err(Error::config("nx", "nx and nz must be given together"))
        }
        (None, None, None) => {
            return Err(Error::config(
                "num_atoms",
                "either num_atoms or (nx, nz) is required",
            ))
        }
    };
    if nx == 0 || nz == 0 {
        return Err(Error::config("nx", "grid dimensions must be positive"));
    }
    if let Some(n) = cfg.num_atoms {
        if n != nx * nz {
            return Err(Error::config(
                "num_atoms",
                format!("num_atoms = {n} but nx*nz = {}", nx * nz),
            ));
        }
    }
    nx.checked_mul(nz)
        .ok_or_else(|| Error::config("nx", "nx*nz overflows"))?;

    if cfg.num_layers == 0 {
        return Err(Error::config("num_layers", "must be at least 1"));
    }
    if cfg.num_antennas == 0 {
        return Err(Error::config("num_antennas", "must be at least 1"));
    }
    for (name, v) in [
        ("sim_thickness_m", Some(cfg.sim_thickness_m)),
        ("atom_spacing_m", cfg.atom_spacing_m),
        ("atom_width_m", cfg.atom_width_m),
        ("atom_height_m", cfg.atom_height_m),
        ("antenna_spacing_m", cfg.antenna_spacing_m),
        ("tx_gap_m", cfg.tx_gap_m),
    ] {
        if let Some(v) = v {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::config(name, "must be positive and finite"));
            }
        }
    }

    let half = wavelength / 2.0;
    let layer_gap = cfg.sim_thickness_m / cfg.num_layers as f64;
    let mut geom = SimGeometry {
        wavelength,
        num_antennas: cfg.num_antennas,
        nx,
        nz,
        num_layers: cfg.num_layers,
        atom_spacing: cfg.atom_spacing_m.unwrap_or(half),
        atom_width: cfg.atom_width_m.unwrap_or(half),
        atom_height: cfg.atom_height_m.unwrap_or(half),
        sim_thickness: cfg.sim_thickness_m,
        layer_gap,
        tx_gap: cfg.tx_gap_m.unwrap_or(layer_gap),
        center_height: cfg.center_height_m,
        antenna_positions: Vec::new(),
        layer_positions: Vec::new(),
    };

    // Uniform linear array along z, centered at the shared grid center.
    let spacing = cfg.antenna_spacing_m.unwrap_or(half);
    geom.antenna_positions = (0..geom.num_antennas)
        .map(|m| {
            let z = (m as f64 - (geom.num_antennas as f64 - 1.0) / 2.0) * spacing
                + geom.center_height;
            [0.0, 0.0, z]
        })
        .collect();

    geom.layer_positions = (0..geom.num_layers)
        .map(|l| geom.grid(geom.tx_gap + l as f64 * geom.layer_gap))
        .collect();

    Ok(geom)
}
