//! Mesh, species and the flat coefficient layout.
//!
//! Offsets are ordered Hermite index fastest (p, then m, then n), then DG
//! mode, then cell, then species. The six field components follow as
//! `component × cell × mode`, E before B.

use std::sync::Arc;

use crate::error::{ConfigError, LayoutError};

pub const AXES: [&str; 3] = ["x", "y", "z"];

#[derive(Debug, Clone, PartialEq)]
pub struct MeshSpec {
    pub cells: [usize; 3],
    pub lengths: [f64; 3],
    pub dg_degree: usize,
    pub periodic: [bool; 3],
}

impl MeshSpec {
    pub fn new(cells: [usize; 3], lengths: [f64; 3], dg_degree: usize) -> Self {
        MeshSpec {
            cells,
            lengths,
            dg_degree,
            periodic: [true; 3],
        }
    }

    /// One-dimensional periodic mesh along x.
    pub fn line(n: usize, length: f64, dg_degree: usize) -> Self {
        Self::new([n, 1, 1], [length, 1.0, 1.0], dg_degree)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for a in 0..3 {
            if self.cells[a] == 0 {
                return Err(ConfigError::invalid(
                    format!("mesh.cells_{}", AXES[a]),
                    "must be positive",
                ));
            }
            if !(self.lengths[a] > 0.0 && self.lengths[a].is_finite()) {
                return Err(ConfigError::invalid(
                    format!("mesh.length_{}", AXES[a]),
                    "must be positive and finite",
                ));
            }
            if !self.periodic[a] {
                return Err(ConfigError::invalid(
                    "mesh.periodic",
                    "only periodic boundaries are supported",
                ));
            }
        }
        Ok(())
    }

    pub fn active(&self, axis: usize) -> bool {
        self.cells[axis] > 1
    }

    /// DG degree along an axis; zero on degenerate axes.
    pub fn degree(&self, axis: usize) -> usize {
        if self.active(axis) {
            self.dg_degree
        } else {
            0
        }
    }

    pub fn spacing(&self) -> [f64; 3] {
        [0, 1, 2].map(|a| self.lengths[a] / self.cells[a] as f64)
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().iter().product()
    }

    pub fn n_cells(&self) -> usize {
        self.cells.iter().product()
    }

    pub fn n_modes(&self) -> usize {
        (0..3).map(|a| self.degree(a) + 1).product()
    }

    pub fn mode_tuple(&self, mode: usize) -> [usize; 3] {
        let dy = self.degree(1) + 1;
        let dz = self.degree(2) + 1;
        [mode / (dy * dz), (mode / dz) % dy, mode % dz]
    }

    pub fn mode_index(&self, l: [usize; 3]) -> usize {
        let dy = self.degree(1) + 1;
        let dz = self.degree(2) + 1;
        (l[0] * dy + l[1]) * dz + l[2]
    }

    pub fn mode_stride(&self, axis: usize) -> usize {
        let dy = self.degree(1) + 1;
        let dz = self.degree(2) + 1;
        match axis {
            0 => dy * dz,
            1 => dz,
            _ => 1,
        }
    }

    /// Mass of DG mode `l` in one cell: `∫ φ_l² dx`.
    pub fn mode_mass(&self, l: [usize; 3]) -> f64 {
        let h = self.spacing();
        (0..3).map(|a| h[a] / (2 * l[a] + 1) as f64).product()
    }

    pub fn cell_tuple(&self, cell: usize) -> [usize; 3] {
        let [nx, ny, _] = self.cells;
        [cell % nx, (cell / nx) % ny, cell / (nx * ny)]
    }

    pub fn cell_index(&self, c: [usize; 3]) -> usize {
        let [nx, ny, _] = self.cells;
        c[0] + nx * (c[1] + ny * c[2])
    }

    /// Periodic neighbour of `cell` one step along `axis` in direction `+1` or `-1`.
    pub fn neighbor(&self, cell: usize, axis: usize, forward: bool) -> usize {
        let mut c = self.cell_tuple(cell);
        let n = self.cells[axis];
        c[axis] = if forward {
            (c[axis] + 1) % n
        } else {
            (c[axis] + n - 1) % n
        };
        self.cell_index(c)
    }

    pub fn cell_center(&self, cell: usize) -> [f64; 3] {
        let c = self.cell_tuple(cell);
        let h = self.spacing();
        [0, 1, 2].map(|a| (c[a] as f64 + 0.5) * h[a])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesSpec {
    pub name: String,
    pub mass: f64,
    pub charge: f64,
    pub hermite_orders: [usize; 3],
    pub alpha: [f64; 3],
    pub shift: [f64; 3],
}

impl SpeciesSpec {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let field = |k: &str| format!("species.{}.{k}", self.name);
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(ConfigError::invalid(field("mass"), "must be positive"));
        }
        if !self.charge.is_finite() {
            return Err(ConfigError::invalid(field("charge"), "must be finite"));
        }
        if self.alpha.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
            return Err(ConfigError::invalid(field("alpha"), "must be positive"));
        }
        if self.shift.iter().any(|u| !u.is_finite()) {
            return Err(ConfigError::invalid(field("shift"), "must be finite"));
        }
        Ok(())
    }

    pub fn n_hermite(&self) -> usize {
        self.hermite_orders.iter().map(|n| n + 1).product()
    }

    pub fn hermite_stride(&self, axis: usize) -> usize {
        let [_, ny, nz] = self.hermite_orders;
        match axis {
            0 => (ny + 1) * (nz + 1),
            1 => nz + 1,
            _ => 1,
        }
    }

    pub fn hermite_index(&self, k: [usize; 3]) -> usize {
        (0..3).map(|a| k[a] * self.hermite_stride(a)).sum()
    }

    pub fn hermite_tuple(&self, h: usize) -> [usize; 3] {
        let [_, ny, nz] = self.hermite_orders;
        [h / ((ny + 1) * (nz + 1)), (h / (nz + 1)) % (ny + 1), h % (nz + 1)]
    }

    /// Product `α_x α_y α_z`, the velocity-space Jacobian.
    pub fn alpha_volume(&self) -> f64 {
        self.alpha.iter().product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicsConstants {
    /// ω_pe / ω_ce.
    pub omega_ratio: f64,
    pub collision_rate: f64,
    /// Uniform immobile charge density (e.g. static ions); enters only ρ.
    pub background_charge: f64,
}

impl PhysicsConstants {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.omega_ratio > 0.0 && self.omega_ratio.is_finite()) {
            return Err(ConfigError::invalid("physics.omega_ratio", "must be positive"));
        }
        if !(self.collision_rate >= 0.0 && self.collision_rate.is_finite()) {
            return Err(ConfigError::invalid(
                "physics.collision_rate",
                "must be non-negative",
            ));
        }
        if !self.background_charge.is_finite() {
            return Err(ConfigError::invalid(
                "physics.background_charge",
                "must be finite",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldComponent {
    Ex,
    Ey,
    Ez,
    Bx,
    By,
    Bz,
}

impl FieldComponent {
    pub const ALL: [FieldComponent; 6] = [
        FieldComponent::Ex,
        FieldComponent::Ey,
        FieldComponent::Ez,
        FieldComponent::Bx,
        FieldComponent::By,
        FieldComponent::Bz,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        ["E_x", "E_y", "E_z", "B_x", "B_y", "B_z"][self.index()]
    }
}

/// Address of one coefficient in a [`StateVector`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DofIndex {
    Hermite {
        species: usize,
        cell: usize,
        mode: usize,
        hermite: [usize; 3],
    },
    Field {
        component: FieldComponent,
        cell: usize,
        mode: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateLayout {
    mesh: MeshSpec,
    species: Vec<SpeciesSpec>,
    species_offsets: Vec<usize>,
    em_offset: usize,
    total_len: usize,
}

impl StateLayout {
    pub fn new(mesh: MeshSpec, species: Vec<SpeciesSpec>) -> Self {
        let block = mesh.n_cells() * mesh.n_modes();
        let mut species_offsets = Vec::with_capacity(species.len());
        let mut offset = 0;
        for s in &species {
            species_offsets.push(offset);
            offset += block * s.n_hermite();
        }
        let em_offset = offset;
        let total_len = em_offset + 6 * block;
        StateLayout {
            mesh,
            species,
            species_offsets,
            em_offset,
            total_len,
        }
    }

    pub fn mesh(&self) -> &MeshSpec {
        &self.mesh
    }

    pub fn species(&self) -> &[SpeciesSpec] {
        &self.species
    }

    pub fn total_len(&self) -> usize {
        self.total_len
    }

    pub fn em_offset(&self) -> usize {
        self.em_offset
    }

    pub fn n_cells(&self) -> usize {
        self.mesh.n_cells()
    }

    pub fn n_modes(&self) -> usize {
        self.mesh.n_modes()
    }

    pub fn species_range(&self, s: usize) -> std::ops::Range<usize> {
        let start = self.species_offsets[s];
        let len = self.n_cells() * self.n_modes() * self.species[s].n_hermite();
        start..start + len
    }

    pub fn em_range(&self) -> std::ops::Range<usize> {
        self.em_offset..self.total_len
    }

    /// Offset of the Hermite block for `(species, cell, mode)`.
    #[inline]
    pub fn hermite_block(&self, s: usize, cell: usize, mode: usize) -> usize {
        self.species_offsets[s] + (cell * self.n_modes() + mode) * self.species[s].n_hermite()
    }

    #[inline]
    pub fn field_offset(&self, component: usize, cell: usize, mode: usize) -> usize {
        self.em_offset + (component * self.n_cells() + cell) * self.n_modes() + mode
    }

    pub fn index_of(&self, dof: &DofIndex) -> Result<usize, LayoutError> {
        let check = |axis: &'static str, value: usize, limit: usize| {
            if value < limit {
                Ok(())
            } else {
                Err(LayoutError::OutOfRange { axis, value, limit })
            }
        };
        match *dof {
            DofIndex::Hermite {
                species,
                cell,
                mode,
                hermite,
            } => {
                check("species", species, self.species.len())?;
                check("cell", cell, self.n_cells())?;
                check("mode", mode, self.n_modes())?;
                let sp = &self.species[species];
                for (a, name) in ["hermite_x", "hermite_y", "hermite_z"].into_iter().enumerate() {
                    check(name, hermite[a], sp.hermite_orders[a] + 1)?;
                }
                Ok(self.hermite_block(species, cell, mode) + sp.hermite_index(hermite))
            }
            DofIndex::Field {
                component,
                cell,
                mode,
            } => {
                check("cell", cell, self.n_cells())?;
                check("mode", mode, self.n_modes())?;
                Ok(self.field_offset(component.index(), cell, mode))
            }
        }
    }

    /// Inverse of [`index_of`](Self::index_of).
    pub fn dof_at(&self, offset: usize) -> Result<DofIndex, LayoutError> {
        if offset >= self.total_len {
            return Err(LayoutError::OutOfRange {
                axis: "offset",
                value: offset,
                limit: self.total_len,
            });
        }
        let (nc, nl) = (self.n_cells(), self.n_modes());
        if offset >= self.em_offset {
            let r = offset - self.em_offset;
            return Ok(DofIndex::Field {
                component: FieldComponent::from_index(r / (nc * nl)).expect("component"),
                cell: (r / nl) % nc,
                mode: r % nl,
            });
        }
        let s = self
            .species_offsets
            .iter()
            .rposition(|&o| o <= offset)
            .expect("species offset");
        let nh = self.species[s].n_hermite();
        let r = offset - self.species_offsets[s];
        Ok(DofIndex::Hermite {
            species: s,
            cell: r / (nl * nh),
            mode: (r / nh) % nl,
            hermite: self.species[s].hermite_tuple(r % nh),
        })
    }
}

#[derive(Clone, PartialEq)]
pub struct StateVector {
    layout: Arc<StateLayout>,
    data: Vec<f64>,
}

impl std::fmt::Debug for StateVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let norm = self.data.iter().map(|x| x * x).sum::<f64>().sqrt();
        f.debug_struct("StateVector")
            .field("len", &self.data.len())
            .field("cells", &self.layout.mesh().cells)
            .field("species", &self.layout.species().len())
            .field("l2_norm", &norm)
            .finish()
    }
}

impl StateVector {
    pub fn zeros(layout: Arc<StateLayout>) -> Self {
        let data = vec![0.0; layout.total_len()];
        StateVector { layout, data }
    }

    pub fn from_vec(layout: Arc<StateLayout>, data: Vec<f64>) -> Result<Self, LayoutError> {
        if data.len() != layout.total_len() {
            return Err(LayoutError::Length {
                expected: layout.total_len(),
                got: data.len(),
            });
        }
        Ok(StateVector { layout, data })
    }

    pub fn layout(&self) -> &Arc<StateLayout> {
        &self.layout
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, dof: &DofIndex) -> Result<f64, LayoutError> {
        Ok(self.data[self.layout.index_of(dof)?])
    }

    pub fn set(&mut self, dof: &DofIndex, value: f64) -> Result<(), LayoutError> {
        let i = self.layout.index_of(dof)?;
        self.data[i] = value;
        Ok(())
    }

    pub fn hermite_block(&self, s: usize, cell: usize, mode: usize) -> &[f64] {
        let start = self.layout.hermite_block(s, cell, mode);
        &self.data[start..start + self.layout.species()[s].n_hermite()]
    }

    pub fn hermite_block_mut(&mut self, s: usize, cell: usize, mode: usize) -> &mut [f64] {
        let start = self.layout.hermite_block(s, cell, mode);
        let n = self.layout.species()[s].n_hermite();
        &mut self.data[start..start + n]
    }

    pub fn field(&self, c: FieldComponent, cell: usize, mode: usize) -> f64 {
        self.data[self.layout.field_offset(c.index(), cell, mode)]
    }

    pub fn set_field(&mut self, c: FieldComponent, cell: usize, mode: usize, value: f64) {
        let i = self.layout.field_offset(c.index(), cell, mode);
        self.data[i] = value;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Elementwise `Σ_k coeffs[k]·states[k]`.
pub fn state_linear_comb(
    coeffs: &[f64],
    states: &[&StateVector],
) -> Result<StateVector, LayoutError> {
    if coeffs.is_empty() || coeffs.len() != states.len() {
        return Err(LayoutError::EmptyCombination);
    }
    let layout = states[0].layout.clone();
    if states
        .iter()
        .any(|s| !Arc::ptr_eq(&s.layout, &layout) && *s.layout != *layout)
    {
        return Err(LayoutError::Mismatch);
    }
    let mut data = vec![0.0; layout.total_len()];
    for (c, s) in coeffs.iter().zip(states) {
        for (d, v) in data.iter_mut().zip(&s.data) {
            *d += c * v;
        }
    }
    Ok(StateVector { layout, data })
}
