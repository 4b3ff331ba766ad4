#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "obc/corpus.hpp"
#include "obc/features.hpp"
#include "obc/svm.hpp"

namespace obc {

struct ConfusionCounts {
    uint64_t tp = 0;
    uint64_t fp = 0;
    uint64_t fn = 0;
    uint64_t tn = 0;

    bool operator==(const ConfusionCounts&) const = default;
};

// Relevant is the positive class. Degenerate 0/0 denominators yield 0.
double precision(const ConfusionCounts& c);
double recall(const ConfusionCounts& c);
double fscore(const ConfusionCounts& c);

// Stratified repeated fold assignment. Repeat r shuffles document
// positions with SplitMix64 seeded base_seed + r, then deals the classes
// in turn round-robin over a single running fold counter, so both total
// and per-class fold sizes differ by at most one.
struct FoldPlan {
    int repeats = 0;
    int folds = 0;
    std::vector<std::vector<int>> fold_of;  // [repeat][doc position] -> fold
};

FoldPlan make_fold_plan(const std::vector<Label>& labels, int repeats, int folds,
                        uint64_t base_seed);

struct RunRecord {
    int repeat = 0;
    int fold = 0;
    ConfusionCounts confusion;
    double precision = 0.0;
    double recall = 0.0;
    double fscore = 0.0;
    uint32_t vocabulary_tokens = 0;  // training-fold vocabulary size
};

struct MetricAggregate {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation (n-1); 0 when n < 2
};

struct EvalReport {
    int model_id = 0;
    uint64_t seed = 0;
    int repeats = 0;
    int folds = 0;
    double C = 1.0;
    uint32_t corpus_vocabulary_tokens = 0;
    std::vector<RunRecord> runs;  // ordered by (repeat, fold)
    MetricAggregate precision;
    MetricAggregate recall;
    MetricAggregate fscore;
};

struct EvalOptions {
    int repeats = 10;
    int folds = 10;
    uint64_t seed = 42;
    double C = 1.0;
    double tolerance = 1e-3;
    int max_epochs = 1000;
    int threads = 1;  // run-level parallelism; output is order-independent
};

// For each (repeat, fold): train on the out-of-fold documents with a
// vocabulary built from them alone, score the fold, record the metrics.
// Deterministic for fixed inputs regardless of thread count.
EvalReport run_repeated_cv(const Corpus& corpus, const FeatureModelSpec& spec,
                           const EvalOptions& opts);

struct ComparisonRow {
    int model_id = 0;
    std::string description;
    uint32_t corpus_vocabulary_tokens = 0;
    MetricAggregate fscore;
};

struct ComparisonTable {
    uint64_t seed = 0;
    int repeats = 0;
    int folds = 0;
    double C = 1.0;
    std::vector<ComparisonRow> rows;  // in model_id order
};

// Runs run_repeated_cv once per model. The fold plan depends only on
// (labels, repeats, folds, seed), so every model sees identical splits.
ComparisonTable compare_models(const Corpus& corpus, const std::vector<int>& model_ids,
                               const EvalOptions& opts);

std::string report_to_json(const EvalReport& report);
std::string report_to_text(const EvalReport& report);
std::string comparison_to_json(const ComparisonTable& table);
std::string comparison_to_text(const ComparisonTable& table);

}  // namespace obc
