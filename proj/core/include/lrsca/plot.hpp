#pragma once

#include <string>
#include <vector>

#include "lrsca/linalg.hpp"

namespace lrsca {

/// SVG picture of 3-dimensional data in the projective chart x1 + x2 + x3 = 1:
/// data columns as filled dots, each dictionary's hyperplanes as lines and its
/// atoms as open markers (circles for the first, squares for the second,
/// further dictionaries cycle). Columns whose coordinate sum vanishes have no
/// image in the chart and are left out. Throws Errc::invalid_r unless every
/// matrix has three rows.
std::string projective_svg(const Matrix<double>& m, const std::vector<Matrix<double>>& dictionaries);

}  // namespace lrsca
