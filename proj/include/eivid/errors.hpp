#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace eivid {

// Factorization or likelihood evaluation broke down numerically.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, double condition_estimate = -1.0,
                            int iteration = -1)
        : std::runtime_error(what), condition_estimate(condition_estimate), iteration(iteration) {}

    double condition_estimate;  // <0 when unknown
    int iteration;              // EM iteration index, -1 outside the solver
};

// The missing-data pattern makes the smoothing problem singular.
class IdentifiabilityError : public std::runtime_error {
public:
    IdentifiabilityError(const std::string& what, int null_space_dim,
                         std::vector<int> offending_times = {})
        : std::runtime_error(what),
          null_space_dim(null_space_dim),
          offending_times(std::move(offending_times)) {}

    int null_space_dim;
    std::vector<int> offending_times;  // 1-based, may be empty when unknown
};

// Malformed input file.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line) : std::runtime_error(what), line(line) {}

    int line;  // 1-based line number in the offending file
};

}  // namespace eivid
