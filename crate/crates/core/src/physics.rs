//! Physical constants, superconductor material data and atom species.
//!
//! Everything is SI internally. Gauss-based units only appear at the
//! I/O boundary through [`tesla_to_gauss`] and friends.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

/// Vacuum permeability (T·m/A), 4π×10⁻⁷ exactly.
pub const MU0: f64 = 4.0e-7 * std::f64::consts::PI;
/// Boltzmann constant (J/K).
pub const KB: f64 = 1.380_649e-23;
/// Bohr magneton (J/T).
pub const MU_B: f64 = 9.274_010_078_3e-24;
/// Standard gravitational acceleration (m/s²).
pub const G_ACCEL: f64 = 9.806_65;
/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge (C).
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Superconducting flux quantum πħ/e (T·m²). Documentation only.
pub const PHI0: f64 = std::f64::consts::PI * HBAR / E_CHARGE;
/// Atomic mass unit (kg).
pub const AMU: f64 = 1.660_539_066_60e-27;

/// The constants above, bundled for callers that prefer a value to pass around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub mu0: f64,
    pub kb: f64,
    pub mu_b: f64,
    pub g: f64,
    pub phi0: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            mu0: MU0,
            kb: KB,
            mu_b: MU_B,
            g: G_ACCEL,
            phi0: PHI0,
        }
    }
}

pub const GAUSS: f64 = 1.0e-4;

pub fn tesla_to_gauss(b: f64) -> f64 {
    b / GAUSS
}

pub fn gauss_to_tesla(b: f64) -> f64 {
    b * GAUSS
}

/// T/m to G/cm.
pub fn tesla_per_m_to_gauss_per_cm(g: f64) -> f64 {
    g / GAUSS / 100.0
}

/// Critical parameters of a type-II superconductor at 4.2 K.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub name: String,
    /// Critical temperature (K).
    pub tc: f64,
    /// Lower critical field (T). For layered materials, the B∥ab value.
    pub bc1: f64,
    /// Upper critical field (T).
    pub bc2: f64,
    /// Critical current density (A/m²).
    pub jc: f64,
    /// Lower critical field for B∥c, when the material is anisotropic.
    pub bc1_c: Option<f64>,
}

impl Material {
    pub fn new(name: &str, tc: f64, bc1: f64, bc2: f64, jc: f64) -> Result<Self> {
        let m = Self {
            name: name.to_string(),
            tc,
            bc1,
            bc2,
            jc,
            bc1_c: None,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn with_bc1_c(mut self, bc1_c: f64) -> Result<Self> {
        self.bc1_c = Some(bc1_c);
        self.validate()?;
        Ok(self)
    }

    /// Returns a copy with a different critical current density; film quality
    /// varies a lot and the tabulated values are best-case numbers.
    pub fn with_jc(&self, jc: f64) -> Result<Self> {
        let mut m = self.clone();
        m.jc = jc;
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let positive = [self.tc, self.bc1, self.bc2, self.jc]
            .iter()
            .chain(self.bc1_c.iter())
            .all(|v| v.is_finite() && *v > 0.0);
        if !positive {
            return Err(Error::InvalidArgument(format!(
                "material `{}`: all critical parameters must be positive",
                self.name
            )));
        }
        if self.bc1 >= self.bc2 || self.bc1_c.is_some_and(|b| b >= self.bc2) {
            return Err(Error::InvalidArgument(format!(
                "material `{}`: Bc1 must be below Bc2",
                self.name
            )));
        }
        Ok(())
    }
}

/// Lookup table of materials. Starts with the built-in set; users may add more.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialDb {
    entries: BTreeMap<String, Material>,
}

fn builtin(name: &str, tc: f64, bc1_mt: f64, bc2: f64, jc: f64, bc1_c_mt: Option<f64>) -> Material {
    Material {
        name: name.to_string(),
        tc,
        bc1: bc1_mt * 1e-3,
        bc2,
        jc,
        bc1_c: bc1_c_mt.map(|b| b * 1e-3),
    }
}

impl Default for MaterialDb {
    fn default() -> Self {
        Self::builtin()
    }
}

impl MaterialDb {
    /// Type-II superconductors at 4.2 K. Where only a lower bound on Bc2 is
    /// known (">100 T at 77 K") the bound itself is stored.
    pub fn builtin() -> Self {
        let list = [
            builtin("Nb", 9.3, 140.0, 0.28, 5e10, None),
            builtin("Nb3Sn", 18.0, 40.0, 27.0, 6e10, None),
            builtin("MgB2", 39.0, 30.0, 15.0, 3.5e11, None),
            builtin("YBCO", 92.0, 25.0, 100.0, 7.2e11, Some(90.0)),
            builtin("BSCCO", 108.0, 13.0, 100.0, 1e10, None),
        ];
        Self {
            entries: list.into_iter().map(|m| (m.name.clone(), m)).collect(),
        }
    }

    pub fn lookup(&self, name: &str) -> Result<Material> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownMaterial {
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Material> {
        self.entries.values()
    }

    /// Adds or replaces an entry.
    pub fn register(&mut self, material: Material) -> Result<()> {
        material.validate()?;
        self.entries.insert(material.name.clone(), material);
        Ok(())
    }

    /// Merges entries from a materials file, see [`MaterialDb::parse_entries`].
    pub fn load_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        for m in Self::parse_entries(&text)? {
            self.register(m)?;
        }
        Ok(())
    }

    /// Parses a materials file. One table per material, SI units:
    ///
    /// ```toml
    /// [Nb]
    /// tc_K = 9.3
    /// bc1_T = 0.140
    /// bc2_T = 0.28
    /// jc_A_per_m2 = 5e10
    /// # optional, anisotropic materials only
    /// bc1_c_T = 0.09
    /// ```
    pub fn parse_entries(text: &str) -> Result<Vec<Material>> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Entry {
            #[serde(rename = "tc_K")]
            tc: f64,
            #[serde(rename = "bc1_T")]
            bc1: f64,
            #[serde(rename = "bc2_T")]
            bc2: f64,
            #[serde(rename = "jc_A_per_m2")]
            jc: f64,
            #[serde(rename = "bc1_c_T", default)]
            bc1_c: Option<f64>,
        }
        let table: BTreeMap<String, Entry> =
            toml::from_str(text).map_err(|e| crate::config::toml_error(text, &e))?;
        table
            .into_iter()
            .map(|(name, e)| {
                let m = Material {
                    name,
                    tc: e.tc,
                    bc1: e.bc1,
                    bc2: e.bc2,
                    jc: e.jc,
                    bc1_c: e.bc1_c,
                };
                m.validate()?;
                Ok(m)
            })
            .collect()
    }
}

/// Convenience wrapper over the built-in table.
pub fn lookup_material(name: &str) -> Result<Material> {
    MaterialDb::builtin().lookup(name)
}

/// An atomic species in a given hyperfine sublevel.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomSpecies {
    pub name: String,
    /// Mass (kg).
    pub mass: f64,
    pub g_f: f64,
    pub m_f: f64,
}

impl AtomSpecies {
    pub fn new(name: &str, mass: f64, g_f: f64, m_f: f64) -> Self {
        Self {
            name: name.to_string(),
            mass,
            g_f,
            m_f,
        }
    }

    /// ⁸⁷Rb in |F = 2, mF = 2⟩.
    pub fn rb87() -> Self {
        Self::new("Rb87", 86.909_180_527 * AMU, 0.5, 2.0)
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "Rb87" | "87Rb" | "rb87" => Ok(Self::rb87()),
            _ => Err(Error::UnknownAtom(name.to_string())),
        }
    }

    /// gF·mF·μB (J/T); positive for weak-field seekers.
    pub fn magnetic_moment(&self) -> f64 {
        self.g_f * self.m_f * MU_B
    }

    fn trappable_moment(&self) -> Result<f64> {
        let mu = self.magnetic_moment();
        if mu > 0.0 {
            Ok(mu)
        } else {
            Err(Error::ZeroMoment(mu))
        }
    }
}

/// Smallest field gradient (T/m) that holds the atom against gravity.
pub fn gravity_gradient_threshold(atom: &AtomSpecies) -> Result<f64> {
    let mu = atom.trappable_moment()?;
    Ok(atom.mass * G_ACCEL / mu)
}

/// Field (T) whose Zeeman energy equals kB·T.
pub fn field_for_temperature_depth(atom: &AtomSpecies, temperature: f64) -> Result<f64> {
    if temperature < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "temperature must be non-negative, got {temperature}"
        )));
    }
    let mu = atom.trappable_moment()?;
    Ok(KB * temperature / mu)
}
