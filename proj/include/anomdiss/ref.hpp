#pragma once

#include <span>
#include <utility>

#include "anomdiss/grid.hpp"
#include "anomdiss/velocity.hpp"

namespace anomdiss::ref {

/// Serial reference implementations of the production kernels, built on
/// naive O(N^2)-per-line DFT sums and plain loops instead of the radix-2
/// transform path. They share only the wavenumber convention with the
/// parallel kernels, which makes them the independent oracle in the test
/// suite and the baseline for the kernel benchmark. Not for production use.

std::pair<ScalarField, ScalarField> gradient(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);
double l2_norm_sq(const ScalarField& f);
double mean(const ScalarField& f);
double grad_norm_sq(const ScalarField& f);

ScalarField shift_lines(const ScalarField& f, ShearAxis axis, std::span<const double> displacement);
ScalarField advect_shear_exact(const ScalarField& f, const ShearStage& stage, double dt);
ScalarField diffuse_exact(const ScalarField& f, double kappa, double dt);

}  // namespace anomdiss::ref
