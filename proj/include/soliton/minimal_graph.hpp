#pragma once

#include "soliton/barriers.hpp"
#include "soliton/grid.hpp"
#include "soliton/newton.hpp"

namespace soliton {

/// Discrete minimal graph v0 over the truncated strip with data f on y = +-m
/// and the constant f(+-L) on x = +-L. Same stencil as the soliton solver
/// with the source term removed; Newton starts from the harmonic extension.
using MinimalField = SolutionField;

MinimalField solve_minimal(const ConvexBoundaryFunction& f, const RectGrid& grid, const SolveConfig& cfg);

}  // namespace soliton
