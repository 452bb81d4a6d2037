#include "eivid/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eivid {

double fit(const Vec& a, const Vec& a_ref) {
    if (a.size() != a_ref.size()) throw std::invalid_argument("fit: length mismatch");
    if (a_ref.empty()) throw std::invalid_argument("fit: empty reference");
    double mean = 0.0;
    for (double v : a_ref) mean += v;
    mean /= a_ref.size();
    double denom = 0.0, num = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - a_ref[i]) * (a[i] - a_ref[i]);
        denom += (a_ref[i] - mean) * (a_ref[i] - mean);
    }
    if (denom == 0.0) throw std::invalid_argument("fit: constant reference");
    return 1.0 - std::sqrt(num) / std::sqrt(denom);
}

double median(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("median: empty input");
    const std::size_t n = xs.size();
    const std::size_t mid = n / 2;
    std::nth_element(xs.begin(), xs.begin() + mid, xs.end());
    const double upper = xs[mid];
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(xs.begin(), xs.begin() + mid);
    return 0.5 * (lower + upper);
}

}  // namespace eivid
