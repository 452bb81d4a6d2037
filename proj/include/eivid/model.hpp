#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eivid/kernel.hpp"
#include "eivid/linops.hpp"

// Problem data model: observed samples with missing-data index sets, the
// noise model with its known variance ratio, and solver state.

namespace eivid {

// One time step of measurements; a missing sample is an absent optional,
// never a sentinel value.
struct Record {
    int t = 0;  // 1-based
    std::optional<double> u;
    std::optional<double> y;
};

struct Dataset {
    int horizon;                    // N
    SelectionOperator input_obs;    // times with an input sample
    SelectionOperator output_obs;   // times with an output sample
    Vec u_obs;                      // values at input_obs.times
    Vec y_obs;                      // values at output_obs.times

    Dataset(int horizon, SelectionOperator input_obs, SelectionOperator output_obs, Vec u_obs,
            Vec y_obs);

    int n_u() const { return input_obs.count(); }
    int n_y() const { return output_obs.count(); }

    bool operator==(const Dataset&) const = default;
};

Dataset dataset_from_records(const std::vector<Record>& records, int horizon);
std::vector<Record> dataset_to_records(const Dataset& ds);

// Gaussian white measurement noise on both channels. The ratio
// gamma = sigma_y2 / sigma_u2 is a known model input, never estimated.
struct NoiseModel {
    double gamma = 1.0;
    double sigma_y2 = 1.0;
    double sigma_u2 = 1.0;

    static NoiseModel from_sigma_y2(double sigma_y2, double gamma);
    void validate() const;
};

struct EMState {
    Vec w;  // current noiseless-input estimate, length N
    Hyperparameters hyper;
    NoiseModel noise;
    int iteration = 0;
    std::vector<double> loglik_history;
};

struct SolveResult {
    Vec g_hat;            // posterior mean of the impulse response, length n
    Vec w_hat;            // smoothed input, length N
    Vec v_hat;            // smoothed output = T(w_hat) g_hat, length N
    Matrix posterior_cov; // n x n
    EMState final_state;
    bool converged = false;
    int iterations = 0;
};

// Warnings for degenerate or structurally non-identifiable instances; never
// throws.
std::vector<std::string> validate(const Dataset& ds, int n);

}  // namespace eivid
