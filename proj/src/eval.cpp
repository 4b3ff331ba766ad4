#include "obc/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "obc/errors.hpp"
#include "obc/rng.hpp"

namespace obc {

double precision(const ConfusionCounts& c) {
    const uint64_t denom = c.tp + c.fp;
    return denom == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double recall(const ConfusionCounts& c) {
    const uint64_t denom = c.tp + c.fn;
    return denom == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double fscore(const ConfusionCounts& c) {
    const double p = precision(c);
    const double r = recall(c);
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

FoldPlan make_fold_plan(const std::vector<Label>& labels, int repeats, int folds,
                        uint64_t base_seed) {
    if (folds < 2) throw InvalidFoldCountError("folds must be >= 2");
    if (repeats < 1) throw InvalidFoldCountError("repeats must be >= 1");
    size_t n_relevant = 0, n_non_relevant = 0;
    for (Label l : labels) {
        if (l == Label::Relevant) {
            ++n_relevant;
        } else if (l == Label::NonRelevant) {
            ++n_non_relevant;
        } else {
            throw UnlabeledDocumentError("fold plan requires labeled documents");
        }
    }
    if (n_relevant < static_cast<size_t>(folds) || n_non_relevant < static_cast<size_t>(folds)) {
        throw TooFewDocumentsError("each class needs at least as many documents as folds");
    }

    const size_t n = labels.size();
    FoldPlan plan;
    plan.repeats = repeats;
    plan.folds = folds;
    plan.fold_of.assign(repeats, std::vector<int>(n, 0));
    for (int r = 0; r < repeats; ++r) {
        SplitMix64 rng(base_seed + static_cast<uint64_t>(r));
        std::vector<size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);

        size_t g = 0;
        for (Label cls : {Label::Relevant, Label::NonRelevant}) {
            for (size_t pos : order) {
                if (labels[pos] != cls) continue;
                plan.fold_of[r][pos] = static_cast<int>(g % static_cast<size_t>(folds));
                ++g;
            }
        }
    }
    return plan;
}

namespace {

RunRecord evaluate_one_fold(const Corpus& corpus, const FeatureModelSpec& spec,
                            const FoldPlan& plan, int repeat, int fold,
                            const EvalOptions& opts) {
    Corpus training;
    std::vector<const AnnotatedDocument*> test_docs;
    for (size_t d = 0; d < corpus.documents.size(); ++d) {
        if (plan.fold_of[repeat][d] == fold) {
            test_docs.push_back(&corpus.documents[d]);
        } else {
            training.documents.push_back(corpus.documents[d]);
        }
    }

    TrainOptions train_opts{opts.C, opts.tolerance, opts.max_epochs};
    SvmModel model = train_model(training, spec, train_opts);

    RunRecord rec;
    rec.repeat = repeat;
    rec.fold = fold;
    rec.vocabulary_tokens = static_cast<uint32_t>(model.vocab.n_tokens());
    for (const AnnotatedDocument* doc : test_docs) {
        const Label got = predict(model, vectorize(*doc, spec, model.vocab));
        const bool truly_relevant = doc->label == Label::Relevant;
        const bool said_relevant = got == Label::Relevant;
        if (truly_relevant && said_relevant) {
            ++rec.confusion.tp;
        } else if (!truly_relevant && said_relevant) {
            ++rec.confusion.fp;
        } else if (truly_relevant && !said_relevant) {
            ++rec.confusion.fn;
        } else {
            ++rec.confusion.tn;
        }
    }
    rec.precision = precision(rec.confusion);
    rec.recall = recall(rec.confusion);
    rec.fscore = fscore(rec.confusion);
    return rec;
}

MetricAggregate aggregate_of(const std::vector<double>& xs) {
    MetricAggregate agg;
    if (xs.empty()) return agg;
    agg.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - agg.mean) * (x - agg.mean);
        agg.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return agg;
}

}  // namespace

EvalReport run_repeated_cv(const Corpus& corpus, const FeatureModelSpec& spec,
                           const EvalOptions& opts) {
    std::vector<Label> labels;
    labels.reserve(corpus.documents.size());
    for (const AnnotatedDocument& doc : corpus.documents) {
        if (doc.label == Label::Unlabeled) {
            throw UnlabeledDocumentError("document '" + doc.id + "' has no label");
        }
        labels.push_back(doc.label);
    }
    const FoldPlan plan = make_fold_plan(labels, opts.repeats, opts.folds, opts.seed);

    EvalReport report;
    report.model_id = spec.model_id;
    report.seed = opts.seed;
    report.repeats = opts.repeats;
    report.folds = opts.folds;
    report.C = opts.C;
    report.corpus_vocabulary_tokens =
        static_cast<uint32_t>(Vocabulary::build(corpus, spec).n_tokens());

    const size_t n_runs = static_cast<size_t>(opts.repeats) * static_cast<size_t>(opts.folds);
    report.runs.resize(n_runs);

    const auto run_task = [&](size_t k) {
        const int repeat = static_cast<int>(k) / opts.folds;
        const int fold = static_cast<int>(k) % opts.folds;
        report.runs[k] = evaluate_one_fold(corpus, spec, plan, repeat, fold, opts);
    };

    const size_t n_threads =
        std::min<size_t>(std::max(opts.threads, 1), std::max<size_t>(n_runs, 1));
    if (n_threads <= 1) {
        for (size_t k = 0; k < n_runs; ++k) run_task(k);
    } else {
        std::atomic<size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (size_t t = 0; t < n_threads; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const size_t k = next.fetch_add(1);
                    if (k >= n_runs) return;
                    try {
                        run_task(k);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (std::thread& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    std::vector<double> ps, rs, fs;
    ps.reserve(n_runs);
    rs.reserve(n_runs);
    fs.reserve(n_runs);
    for (const RunRecord& rec : report.runs) {
        ps.push_back(rec.precision);
        rs.push_back(rec.recall);
        fs.push_back(rec.fscore);
    }
    report.precision = aggregate_of(ps);
    report.recall = aggregate_of(rs);
    report.fscore = aggregate_of(fs);
    return report;
}

ComparisonTable compare_models(const Corpus& corpus, const std::vector<int>& model_ids,
                               const EvalOptions& opts) {
    std::vector<int> ids = model_ids;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    ComparisonTable table;
    table.seed = opts.seed;
    table.repeats = opts.repeats;
    table.folds = opts.folds;
    table.C = opts.C;
    for (int id : ids) {
        const FeatureModelSpec spec = FeatureModelSpec::from_model_id(id);
        const EvalReport report = run_repeated_cv(corpus, spec, opts);
        ComparisonRow row;
        row.model_id = id;
        row.description = spec.description();
        row.corpus_vocabulary_tokens = report.corpus_vocabulary_tokens;
        row.fscore = report.fscore;
        table.rows.push_back(std::move(row));
    }
    return table;
}

namespace {

nlohmann::json aggregate_json(const MetricAggregate& agg) {
    return {{"mean", agg.mean}, {"stddev", agg.stddev}};
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
    nlohmann::json j;
    j["model_id"] = report.model_id;
    j["seed"] = report.seed;
    j["repeats"] = report.repeats;
    j["folds"] = report.folds;
    j["C"] = report.C;
    j["corpus_vocabulary_tokens"] = report.corpus_vocabulary_tokens;
    j["aggregate"] = {{"precision", aggregate_json(report.precision)},
                      {"recall", aggregate_json(report.recall)},
                      {"fscore", aggregate_json(report.fscore)}};
    nlohmann::json runs = nlohmann::json::array();
    for (const RunRecord& rec : report.runs) {
        runs.push_back({{"repeat", rec.repeat},
                        {"fold", rec.fold},
                        {"tp", rec.confusion.tp},
                        {"fp", rec.confusion.fp},
                        {"fn", rec.confusion.fn},
                        {"tn", rec.confusion.tn},
                        {"precision", rec.precision},
                        {"recall", rec.recall},
                        {"fscore", rec.fscore},
                        {"vocabulary_tokens", rec.vocabulary_tokens}});
    }
    j["runs"] = runs;
    return j.dump(2) + "\n";
}

std::string report_to_text(const EvalReport& report) {
    char buf[256];
    std::ostringstream out;
    out << "model " << report.model_id << "  (" << report.repeats << "x" << report.folds
        << " cross-validation, seed " << report.seed << ", C " << report.C << ")\n";
    out << "corpus vocabulary: " << report.corpus_vocabulary_tokens << " tokens\n";
    std::snprintf(buf, sizeof(buf), "precision: %6.2f %% +/- %.2f\n", 100.0 * report.precision.mean,
                  100.0 * report.precision.stddev);
    out << buf;
    std::snprintf(buf, sizeof(buf), "recall:    %6.2f %% +/- %.2f\n", 100.0 * report.recall.mean,
                  100.0 * report.recall.stddev);
    out << buf;
    std::snprintf(buf, sizeof(buf), "f-score:   %6.2f %% +/- %.2f\n", 100.0 * report.fscore.mean,
                  100.0 * report.fscore.stddev);
    out << buf;
    out << "runs: " << report.runs.size() << "\n";
    return out.str();
}

std::string comparison_to_json(const ComparisonTable& table) {
    nlohmann::json j;
    j["seed"] = table.seed;
    j["repeats"] = table.repeats;
    j["folds"] = table.folds;
    j["C"] = table.C;
    nlohmann::json rows = nlohmann::json::array();
    for (const ComparisonRow& row : table.rows) {
        rows.push_back({{"model_id", row.model_id},
                        {"description", row.description},
                        {"corpus_vocabulary_tokens", row.corpus_vocabulary_tokens},
                        {"fscore_mean", row.fscore.mean},
                        {"fscore_stddev", row.fscore.stddev}});
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

std::string comparison_to_text(const ComparisonTable& table) {
    size_t desc_width = 5;
    for (const ComparisonRow& row : table.rows) {
        desc_width = std::max(desc_width, row.description.size());
    }
    std::ostringstream out;
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%3s  %-*s  %11s  %s\n", "#",
                  static_cast<int>(desc_width), "model", "#vocabulary", "F-score (%)");
    out << buf;
    for (const ComparisonRow& row : table.rows) {
        std::snprintf(buf, sizeof(buf), "%3d  %-*s  %11u  %.2f +/- %.2f\n", row.model_id,
                      static_cast<int>(desc_width), row.description.c_str(),
                      row.corpus_vocabulary_tokens, 100.0 * row.fscore.mean,
                      100.0 * row.fscore.stddev);
        out << buf;
    }
    return out.str();
}

}  // namespace obc
