#pragma once

#include "eivid/linalg.hpp"

namespace eivid {

// fit(a, ref) = 1 - ||a - ref|| / ||ref - mean(ref)||. 1 is a perfect match;
// the score is unbounded below and not symmetric in its arguments. Throws
// std::invalid_argument when ref is constant.
double fit(const Vec& a, const Vec& a_ref);

// Standard median; the mean of the two central order statistics for even
// lengths.
double median(std::vector<double> xs);

}  // namespace eivid
