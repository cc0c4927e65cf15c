#pragma once

#include <vector>

#include "lambdap/lab/lab.hpp"

namespace lambdap::lab::detail {

/// Trig systems with oversample < 2 are built on an aliased grid.
OrthogonalSystem make_system(const ExperimentConfig& cfg, std::size_t n);
/// Median (mean of the middle pair) for q = 0.5, nearest rank otherwise.
double quantile(std::vector<double> v, double q);

}  // namespace lambdap::lab::detail
