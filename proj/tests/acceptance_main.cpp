// Acceptance suite: each check prints one PASS/FAIL line; the process
// exits nonzero if any check fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "obc/corpus.hpp"
#include "obc/eval.hpp"
#include "obc/features.hpp"
#include "obc/rng.hpp"
#include "obc/svm.hpp"
#include "obc/synth.hpp"

#include "oracles.hpp"

using namespace obc;

namespace {

struct Checker {
    std::string failure;
    void require(bool ok, const std::string& what) {
        if (!ok && failure.empty()) failure = what;
    }
};

int hardware_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

Corpus synth(size_t rel, size_t irr, double p, double q, uint64_t seed) {
    SynthParams params;
    params.n_relevant = rel;
    params.n_irrelevant = irr;
    params.signal_strength = p;
    params.location_correlation = q;
    params.seed = seed;
    return generate_synthetic_corpus(params);
}

SvmProblem dense_problem(const std::vector<std::vector<double>>& points,
                         const std::vector<int8_t>& labels) {
    SvmProblem p;
    p.dimension = points.empty() ? 0 : static_cast<uint32_t>(points[0].size());
    for (const auto& pt : points) p.x.push_back(SvmExample::dense(pt));
    p.y = labels;
    return p;
}

void criterion_svm_oracle(Checker& c) {
    SplitMix64 rng(20260809);
    const double cs[3] = {0.1, 1.0, 10.0};
    for (int k = 0; k < 50; ++k) {
        const size_t dims = 1 + rng.below(3);
        const size_t n = 2 + rng.below(11);  // 2..12 points
        const double C = cs[k % 3];
        std::vector<std::vector<double>> pts(n, std::vector<double>(dims));
        std::vector<int8_t> labels(n);
        for (size_t i = 0; i < n; ++i) {
            for (size_t d = 0; d < dims; ++d) pts[i][d] = rng.unit() * 4.0 - 2.0;
            labels[i] = rng.coin(0.5) ? 1 : -1;
        }
        const SvmProblem p = dense_problem(pts, labels);
        TrainOptions opts;
        opts.C = C;
        opts.tolerance = 1e-8;
        opts.max_epochs = 20000;
        const LinearModel m = solve_svm(p, opts);
        const double oracle = testing::svm_oracle_objective(p, C, 1000000);
        const double diff = std::abs(m.stats.primal_objective - oracle);
        c.require(diff <= 1e-3 * std::max(oracle, 1e-6),
                  "problem " + std::to_string(k) + ": objective " +
                      std::to_string(m.stats.primal_objective) + " vs oracle " +
                      std::to_string(oracle));
    }
}

void criterion_analytic_fixtures(Checker& c) {
    TrainOptions opts;
    opts.tolerance = 1e-8;
    opts.max_epochs = 20000;

    const LinearModel sym = solve_svm(dense_problem({{1.0}, {-1.0}}, {1, -1}), opts);
    c.require(std::abs(sym.stats.primal_objective - 0.5) < 1e-3,
              "symmetric pair objective " + std::to_string(sym.stats.primal_objective));
    c.require(std::abs(sym.weights[0] - 1.0) < 1e-3, "symmetric pair weight");
    c.require(std::abs(sym.bias) < 1e-3, "symmetric pair bias");

    const LinearModel one = solve_svm(dense_problem({{0.3}, {-0.7}, {1.1}}, {1, 1, 1}), opts);
    c.require(one.stats.primal_objective < 1e-3,
              "one-class objective " + std::to_string(one.stats.primal_objective));
    for (const SvmExample& e : dense_problem({{0.3}, {-0.7}, {1.1}}, {1, 1, 1}).x) {
        double s = one.bias;
        for (size_t k = 0; k < e.indices.size(); ++k) s += one.weights[e.indices[k]] * e.values[k];
        c.require(s >= 0.0, "one-class prediction not positive");
    }

    for (double C : {1.0}) {
        TrainOptions copts = opts;
        copts.C = C;
        const LinearModel conflict = solve_svm(dense_problem({{0.0}, {0.0}}, {1, -1}), copts);
        c.require(std::abs(conflict.stats.primal_objective - 2.0 * C) < 1e-3,
                  "conflict objective " + std::to_string(conflict.stats.primal_objective));
    }
}

void criterion_selection_oracle(Checker& c) {
    const Corpus corpus = synth(500, 500, 0.5, 0.5, 123);
    c.require(corpus.documents.size() == 1000, "expected 1000 documents");
    for (int id = 1; id <= 14; ++id) {
        const FeatureModelSpec spec = FeatureModelSpec::from_model_id(id);
        for (const AnnotatedDocument& doc : corpus.documents) {
            if (select_sentences(doc, spec) != testing::brute_force_selection(doc, spec)) {
                c.require(false, "selection mismatch, model " + std::to_string(id) + " doc " +
                                     doc.id);
                return;
            }
        }
    }
}

void criterion_nesting(Checker& c) {
    const Corpus corpus = synth(500, 500, 0.5, 0.5, 123);
    for (const AnnotatedDocument& doc : corpus.documents) {
        const auto s2 = select_sentences(doc, FeatureModelSpec::from_model_id(2));
        const auto s3 = select_sentences(doc, FeatureModelSpec::from_model_id(3));
        const auto s4 = select_sentences(doc, FeatureModelSpec::from_model_id(4));
        const auto s5 = select_sentences(doc, FeatureModelSpec::from_model_id(5));
        c.require(std::includes(s3.begin(), s3.end(), s2.begin(), s2.end()),
                  "sel(2) not within sel(3) in " + doc.id);
        c.require(std::includes(s4.begin(), s4.end(), s2.begin(), s2.end()),
                  "sel(2) not within sel(4) in " + doc.id);
        std::vector<size_t> s34;
        std::set_union(s3.begin(), s3.end(), s4.begin(), s4.end(), std::back_inserter(s34));
        c.require(s34 == s5, "sel(5) != sel(3) union sel(4) in " + doc.id);
        for (int tier : {6, 9, 12}) {
            c.require(select_sentences(doc, FeatureModelSpec::from_model_id(tier)) == s3,
                      "tier selection differs from sel(3) in " + doc.id);
        }
        for (int tier : {7, 10, 13}) {
            c.require(select_sentences(doc, FeatureModelSpec::from_model_id(tier)) == s4,
                      "tier selection differs from sel(4) in " + doc.id);
        }
        for (int tier : {8, 11, 14}) {
            c.require(select_sentences(doc, FeatureModelSpec::from_model_id(tier)) == s5,
                      "tier selection differs from sel(5) in " + doc.id);
        }
        if (!c.failure.empty()) return;
    }
    auto tokens_of = [&](int id) {
        return Vocabulary::build(corpus, FeatureModelSpec::from_model_id(id)).n_tokens();
    };
    const size_t v2 = tokens_of(2), v3 = tokens_of(3), v4 = tokens_of(4), v5 = tokens_of(5);
    c.require(v2 <= v3 && v3 <= v5, "vocabulary not monotone along 2->3->5");
    c.require(v2 <= v4 && v4 <= v5, "vocabulary not monotone along 2->4->5");
}

void criterion_cv_structure(Checker& c) {
    const Corpus corpus = synth(60, 60, 0.9, 0.5, 77);
    std::vector<Label> labels;
    for (const auto& d : corpus.documents) labels.push_back(d.label);

    const FoldPlan plan = make_fold_plan(labels, 10, 10, 42);
    c.require(plan.fold_of.size() == 10, "expected 10 repeats");
    for (int r = 0; r < 10; ++r) {
        std::vector<int> total(10, 0), pos(10, 0), neg(10, 0);
        for (size_t d = 0; d < labels.size(); ++d) {
            const int f = plan.fold_of[r][d];
            c.require(f >= 0 && f < 10, "fold index out of range");
            total[f] += 1;
            (labels[d] == Label::Relevant ? pos : neg)[f] += 1;
        }
        int covered = 0;
        for (int f = 0; f < 10; ++f) covered += total[f];
        c.require(covered == static_cast<int>(labels.size()), "folds do not partition");
        auto spread = [](const std::vector<int>& v) {
            return *std::max_element(v.begin(), v.end()) -
                   *std::min_element(v.begin(), v.end());
        };
        c.require(spread(pos) <= 1 && spread(neg) <= 1, "stratified sizes differ by more than 1");
    }

    EvalOptions opts;
    opts.repeats = 10;
    opts.folds = 10;
    opts.seed = 42;
    opts.threads = hardware_threads();
    const FeatureModelSpec spec = FeatureModelSpec::from_model_id(2);
    const EvalReport report = run_repeated_cv(corpus, spec, opts);
    c.require(report.runs.size() == 100, "expected exactly 100 runs");
    const std::string once = report_to_json(report);
    const std::string twice = report_to_json(run_repeated_cv(corpus, spec, opts));
    c.require(once == twice, "same seed must give byte-identical reports");

    int differing = 0;
    for (uint64_t s = 0; s < 10; ++s) {
        const FoldPlan a = make_fold_plan(labels, 1, 10, 2 * s);
        const FoldPlan b = make_fold_plan(labels, 1, 10, 2 * s + 1);
        if (a.fold_of[0] != b.fold_of[0]) ++differing;
    }
    c.require(differing >= 9, "only " + std::to_string(differing) +
                                  " of 10 seed pairs gave different fold plans");
}

void criterion_metric_identities(Checker& c) {
    c.require(fscore({8, 2, 2, 0}) == precision({8, 2, 2, 0}), "P=R must give F=P");
    c.require(fscore({5, 0, 0, 5}) == 1.0, "perfect classifier must give F=1");
    c.require(precision({0, 0, 0, 5}) == 0.0 && recall({0, 0, 0, 5}) == 0.0 &&
                  fscore({0, 0, 0, 5}) == 0.0,
              "degenerate 0/0 must give 0");
    c.require(std::abs(fscore({1, 0, 1, 0}) - 0.6667) <= 1e-4, "fscore(1,0,1) != 0.6667");
}

void criterion_separable_end_to_end(Checker& c) {
    const Corpus corpus = synth(200, 200, 1.0, 0.0, 1);
    EvalOptions opts;
    opts.repeats = 10;
    opts.folds = 10;
    opts.seed = 42;
    opts.threads = hardware_threads();
    const EvalReport report = run_repeated_cv(corpus, FeatureModelSpec::from_model_id(2), opts);
    c.require(report.runs.size() == 100, "expected 100 runs");
    c.require(report.fscore.mean >= 0.99,
              "mean F " + std::to_string(report.fscore.mean) + " below 0.99");
}

void criterion_location_flag_direction(Checker& c) {
    EvalOptions opts;
    opts.repeats = 10;
    opts.folds = 10;
    opts.threads = hardware_threads();
    double sum5 = 0.0, sum8 = 0.0;
    for (uint64_t s = 1; s <= 10; ++s) {
        const Corpus corpus = synth(300, 300, 0.7, 0.9, s);
        opts.seed = s;
        const ComparisonTable table = compare_models(corpus, {5, 8}, opts);
        sum5 += table.rows[0].fscore.mean;
        sum8 += table.rows[1].fscore.mean;
    }
    c.require(sum8 / 10.0 >= sum5 / 10.0,
              "mean F(model 8) " + std::to_string(sum8 / 10.0) + " below mean F(model 5) " +
                  std::to_string(sum5 / 10.0));
}

void criterion_persistence(Checker& c) {
    const Corpus corpus = synth(50, 50, 0.8, 0.7, 424);
    const FeatureModelSpec spec = FeatureModelSpec::from_model_id(8);
    const SvmModel model = train_model(corpus, spec, TrainOptions{});
    std::stringstream buf;
    save_model(model, buf);
    const SvmModel back = load_model(buf);
    c.require(back.weights == model.weights, "weights changed across save/load");
    c.require(back.bias == model.bias, "bias changed across save/load");
    for (const AnnotatedDocument& doc : corpus.documents) {
        const FeatureVector x = vectorize(doc, spec, model.vocab);
        if (predict(model, x) != predict(back, x)) {
            c.require(false, "prediction changed for " + doc.id);
            return;
        }
    }

    RawRecord rec;
    rec.id = "vn-example";
    rec.title = "<ner type=disease>Cúm A/H1N1</ner> lan rộng";
    rec.body =
        "Cục Y tế dự phòng (Bộ Y tế) cho biết, <ner type=disease>cúm A/H1N1</ner> đã lan rộng ra "
        "35 tỉnh, thành trong cả nước, trong đó có hơn 200 ca mắc dịch, 7 trường hợp đã tử "
        "vong.\nMới nhất, ngày 1/4, Sở Y tế tỉnh Bến Tre, cho biết trên địa bàn tỉnh vừa xuất "
        "hiện một ổ dịch mới <ner type=disease>cúm A/H1N1</ner> tại xã Tân Phong, huyện "
        "<ner type=location>Thạnh Phú</ner>.";
    rec.label = "relevant";
    const AnnotatedDocument doc = parse_document(rec);
    c.require(render_tagged(doc, Zone::Title) == rec.title, "title does not round trip");
    c.require(render_tagged(doc, Zone::Body) == rec.body, "body does not round trip");
}

struct Criterion {
    int number;
    std::string name;
    std::function<void(Checker&)> run;
    double time_limit_s;  // 0 = unbounded
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "svm objective matches brute-force oracle on 50 random problems",
         criterion_svm_oracle, 60.0},
        {2, "analytic svm fixtures", criterion_analytic_fixtures, 0.0},
        {3, "sentence selection matches brute-force scanner on 1000 docs x 14 models",
         criterion_selection_oracle, 10.0},
        {4, "window nesting and vocabulary monotonicity", criterion_nesting, 0.0},
        {5, "10x10 cross-validation structure and determinism", criterion_cv_structure, 0.0},
        {6, "metric identities", criterion_metric_identities, 0.0},
        {7, "separable synthetic corpus reaches mean F >= 0.99",
         criterion_separable_end_to_end, 300.0},
        {8, "location flag lifts model 8 over model 5", criterion_location_flag_direction, 0.0},
        {9, "model persistence and corpus round trip", criterion_persistence, 0.0},
    };

    int failures = 0;
    for (const Criterion& crit : criteria) {
        Checker checker;
        const auto start = std::chrono::steady_clock::now();
        try {
            crit.run(checker);
        } catch (const std::exception& e) {
            checker.require(false, std::string("exception: ") + e.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (crit.time_limit_s > 0 && elapsed > crit.time_limit_s) {
            checker.require(false, "time limit " + std::to_string(crit.time_limit_s) +
                                       " s exceeded");
        }
        const bool ok = checker.failure.empty();
        if (!ok) ++failures;
        std::printf("%s  criterion %d: %s (%.1f s)%s%s\n", ok ? "PASS" : "FAIL", crit.number,
                    crit.name.c_str(), elapsed, ok ? "" : " -- ",
                    ok ? "" : checker.failure.c_str());
        std::fflush(stdout);
    }
    if (failures > 0) {
        std::printf("%d of %zu criteria failed\n", failures, criteria.size());
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
