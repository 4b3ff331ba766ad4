#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "obc/features.hpp"

namespace obc {

// General sparse example for the core solver. The text pipeline only ever
// produces binary features, but the solver itself is value-agnostic.
struct SvmExample {
    std::vector<uint32_t> indices;  // sorted, unique
    std::vector<double> values;     // parallel to indices

    static SvmExample from_binary(const FeatureVector& x) {
        return {x.indices, std::vector<double>(x.indices.size(), 1.0)};
    }
    static SvmExample dense(const std::vector<double>& coords);
};

struct SvmProblem {
    std::vector<SvmExample> x;
    std::vector<int8_t> y;  // +1 / -1
    uint32_t dimension = 0;
};

struct TrainingSet {
    std::vector<FeatureVector> x;
    std::vector<int8_t> y;  // +1 relevant, -1 non-relevant
    uint32_t dimension = 0;
};

struct TrainOptions {
    double C = 1.0;
    double tolerance = 1e-3;  // relative objective gap; see solve_svm
    int max_epochs = 1000;
};

struct TrainStats {
    bool converged = false;
    int epochs = 0;
    double primal_objective = 0.0;        // of the returned iterate
    double dual_objective = 0.0;          // certified lower bound on the optimum
    std::vector<double> objective_trace;  // primal value at each epoch end
};

struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
    double C = 1.0;
    TrainStats stats;
};

// Minimizes F(w,b) = 0.5*||w||^2 + C * sum_i max(0, 1 - y_i*(w.x_i + b))
// with an unregularized bias, via SMO on the equality-constrained dual
// (maximal violating pair working set). Stops once the primal-dual gap
// certifies the objective is within max(tolerance, tolerance * F*) of the
// optimum; after max_epochs it returns the best iterate with
// converged=false. Deterministic: no randomization, fixed scan order.
LinearModel solve_svm(const SvmProblem& problem, const TrainOptions& opts = {});

// Binary-feature front end over solve_svm.
LinearModel train_linear_svm(const TrainingSet& data, const TrainOptions& opts = {});

double hinge_objective(const SvmProblem& problem, const std::vector<double>& w, double bias,
                       double C);

// w.x + b over a sparse binary vector. Throws DimensionMismatchError.
double decision_value(const std::vector<double>& weights, double bias, const FeatureVector& x);

struct SvmModel {
    FeatureModelSpec spec;
    Vocabulary vocab;
    std::vector<double> weights;
    double bias = 0.0;
    double C = 1.0;
    bool converged = true;
};

// Builds the vocabulary from the training corpus, vectorizes, trains.
// Requires every document labeled.
SvmModel train_model(const Corpus& training, const FeatureModelSpec& spec,
                     const TrainOptions& opts = {});

double decision(const SvmModel& model, const FeatureVector& x);

// Relevant iff decision >= 0; the tie at exactly 0 goes to Relevant.
Label predict(const SvmModel& model, const FeatureVector& x);

// JSON model file, format_version 1. Weights round-trip exactly.
void save_model(const SvmModel& model, std::ostream& out);
void save_model(const SvmModel& model, const std::string& path);
SvmModel load_model(std::istream& in);
SvmModel load_model(const std::string& path);

}  // namespace obc
