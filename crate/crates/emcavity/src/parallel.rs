//! Jefimenko evaluation spread over the rayon pool. Each node is computed
//! independently and results are collected in grid order, so output does not
//! depend on the thread count.

use emcavity_core::jefimenko::{fields_at, potentials_at, SourceModel};
use emcavity_core::{PhysicalConstants, Result, ScalarField, SpacetimeGrid, VectorField3};
use rayon::prelude::*;

fn events(grid: &SpacetimeGrid) -> impl IndexedParallelIterator<Item = (f64, [f64; 3])> + '_ {
    let s = grid.spatial_len();
    (0..grid.len()).into_par_iter().map(move |i| (grid.time(i / s), grid.spatial_point(i % s)))
}

pub fn par_jefimenko_fields<S: SourceModel + Sync + ?Sized>(
    src: &S,
    grid: &SpacetimeGrid,
    consts: &PhysicalConstants,
) -> Result<(VectorField3, VectorField3)> {
    let eb: Vec<_> = events(grid)
        .map(|(t, x)| fields_at(src, x, t, consts))
        .collect::<Result<Vec<_>>>()?;
    let (e, b): (Vec<_>, Vec<_>) = eb.into_iter().unzip();
    Ok((VectorField3::from_values(*grid, e)?, VectorField3::from_values(*grid, b)?))
}

pub fn par_retarded_potentials<S: SourceModel + Sync + ?Sized>(
    src: &S,
    grid: &SpacetimeGrid,
    consts: &PhysicalConstants,
) -> Result<(ScalarField, VectorField3)> {
    let va: Vec<_> = events(grid)
        .map(|(t, x)| potentials_at(src, x, t, consts))
        .collect::<Result<Vec<_>>>()?;
    let (v, a): (Vec<_>, Vec<_>) = va.into_iter().unzip();
    Ok((ScalarField::from_values(*grid, v)?, VectorField3::from_values(*grid, a)?))
}
