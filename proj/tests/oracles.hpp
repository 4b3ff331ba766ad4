#pragma once

#include <vector>

#include "obc/corpus.hpp"
#include "obc/features.hpp"
#include "obc/svm.hpp"

namespace obc::testing {

// Straight-line selection scan, independent of the features module: decides
// sentence membership from mention character spans, marks windows with
// plain loops, unions by flag array.
std::vector<size_t> brute_force_selection(const AnnotatedDocument& doc,
                                          const FeatureModelSpec& spec);

// Near-optimal objective for min 0.5||w||^2 + C*sum hinge with free bias,
// computed without the production solver: diminishing-step subgradient
// descent followed by pattern-search refinement with a breakpoint-scan
// bias optimizer. Intended for problems with a handful of points and
// dimensions.
double svm_oracle_objective(const SvmProblem& problem, double C,
                            int subgradient_steps = 1000000);

}  // namespace obc::testing
