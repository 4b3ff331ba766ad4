#include "obc/svm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "obc/errors.hpp"

namespace obc {

SvmExample SvmExample::dense(const std::vector<double>& coords) {
    SvmExample e;
    for (uint32_t i = 0; i < coords.size(); ++i) {
        if (coords[i] != 0.0) {
            e.indices.push_back(i);
            e.values.push_back(coords[i]);
        }
    }
    return e;
}

namespace {

constexpr double kTau = 1e-12;            // guards zero-curvature pair updates
constexpr size_t kGramCacheLimit = 1500;  // full Gram matrix cached up to this size

double sparse_dot(const SvmExample& a, const SvmExample& b) {
    size_t i = 0, j = 0;
    double s = 0.0;
    while (i < a.indices.size() && j < b.indices.size()) {
        if (a.indices[i] == b.indices[j]) {
            s += a.values[i] * b.values[j];
            ++i;
            ++j;
        } else if (a.indices[i] < b.indices[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return s;
}

// Kernel rows for the linear kernel, with a dense cache when the problem
// is small enough.
class KernelSource {
public:
    explicit KernelSource(const SvmProblem& problem) : problem_(problem), l_(problem.x.size()) {
        diag_.resize(l_);
        for (size_t t = 0; t < l_; ++t) diag_[t] = sparse_dot(problem.x[t], problem.x[t]);
        if (l_ <= kGramCacheLimit) {
            gram_.resize(l_ * l_);
            for (size_t i = 0; i < l_; ++i) {
                gram_[i * l_ + i] = diag_[i];
                for (size_t j = i + 1; j < l_; ++j) {
                    double v = sparse_dot(problem_.x[i], problem_.x[j]);
                    gram_[i * l_ + j] = v;
                    gram_[j * l_ + i] = v;
                }
            }
        }
    }

    bool cached() const { return !gram_.empty(); }

    const double* row(size_t t, std::vector<double>& buf) const {
        if (cached()) return gram_.data() + t * l_;
        buf.resize(l_);
        for (size_t k = 0; k < l_; ++k) buf[k] = sparse_dot(problem_.x[t], problem_.x[k]);
        return buf.data();
    }

    double diag(size_t t) const { return diag_[t]; }

private:
    const SvmProblem& problem_;
    size_t l_;
    std::vector<double> diag_;
    std::vector<double> gram_;
};

// Exact minimizer of b -> C * sum_i max(0, 1 - y_i*(s_i + b)). The hinge
// sum is piecewise linear in b with one breakpoint y_i - s_i per example;
// the slope after the k-th sorted breakpoint is C*(k+1 - n_pos), so the
// minimum sits on [bp[n_pos-1], bp[n_pos]]. The midpoint keeps the choice
// symmetric under label negation.
double optimal_bias(const std::vector<double>& scores, const std::vector<int8_t>& y) {
    const size_t l = scores.size();
    std::vector<double> bp(l);
    size_t n_pos = 0;
    for (size_t t = 0; t < l; ++t) {
        bp[t] = static_cast<double>(y[t]) - scores[t];
        if (y[t] > 0) ++n_pos;
    }
    std::sort(bp.begin(), bp.end());
    if (n_pos == 0) return bp.front();
    if (n_pos == l) return bp.back();
    return 0.5 * (bp[n_pos - 1] + bp[n_pos]);
}

void accumulate_weights(const SvmProblem& problem, const std::vector<double>& alpha,
                        std::vector<double>& w) {
    w.assign(problem.dimension, 0.0);
    for (size_t t = 0; t < problem.x.size(); ++t) {
        if (alpha[t] == 0.0) continue;
        const double coef = alpha[t] * static_cast<double>(problem.y[t]);
        const SvmExample& e = problem.x[t];
        for (size_t k = 0; k < e.indices.size(); ++k) w[e.indices[k]] += coef * e.values[k];
    }
}

double score_of(const SvmExample& e, const std::vector<double>& w) {
    double s = 0.0;
    for (size_t k = 0; k < e.indices.size(); ++k) s += w[e.indices[k]] * e.values[k];
    return s;
}

}  // namespace

double hinge_objective(const SvmProblem& problem, const std::vector<double>& w, double bias,
                       double C) {
    double obj = 0.0;
    for (double v : w) obj += v * v;
    obj *= 0.5;
    for (size_t t = 0; t < problem.x.size(); ++t) {
        const double margin =
            1.0 - static_cast<double>(problem.y[t]) * (score_of(problem.x[t], w) + bias);
        if (margin > 0) obj += C * margin;
    }
    return obj;
}

LinearModel solve_svm(const SvmProblem& problem, const TrainOptions& opts) {
    const size_t l = problem.x.size();
    if (l == 0) throw EmptyTrainingSetError("training set is empty");
    if (!(opts.C > 0)) throw NonPositiveCError("C must be positive");
    if (!(opts.tolerance > 0)) throw InvalidParamError("tolerance must be positive");
    if (opts.max_epochs < 1) throw InvalidParamError("max_epochs must be >= 1");
    if (problem.y.size() != l) throw DimensionMismatchError("labels and examples differ in count");
    for (const SvmExample& e : problem.x) {
        if (e.indices.size() != e.values.size()) {
            throw DimensionMismatchError("example indices/values length mismatch");
        }
        if (!e.indices.empty() && e.indices.back() >= problem.dimension) {
            throw DimensionMismatchError("feature index exceeds problem dimension");
        }
    }

    const double C = opts.C;
    KernelSource kernel(problem);

    std::vector<double> alpha(l, 0.0);
    std::vector<double> grad(l, -1.0);  // dual gradient; -1 at alpha = 0
    std::vector<double> row_buf_i, row_buf_j;

    const double snap = 1e-12 * std::max(1.0, C);
    double eps_kkt = std::min(opts.tolerance, 1e-3);

    LinearModel best;
    best.C = C;
    double best_primal = std::numeric_limits<double>::infinity();
    TrainStats stats;
    bool converged = false;

    std::vector<double> w;
    std::vector<double> scores(l);

    int epoch = 0;
    while (epoch < opts.max_epochs && !converged) {
        bool kkt_met = false;
        for (size_t step = 0; step < l; ++step) {
            // Maximal violating pair over the whole active set.
            double m = -std::numeric_limits<double>::infinity();
            double M = std::numeric_limits<double>::infinity();
            ptrdiff_t i = -1, j = -1;
            for (size_t t = 0; t < l; ++t) {
                const double v = -static_cast<double>(problem.y[t]) * grad[t];
                const bool pos = problem.y[t] > 0;
                if ((pos && alpha[t] < C) || (!pos && alpha[t] > 0.0)) {
                    if (v > m) {
                        m = v;
                        i = static_cast<ptrdiff_t>(t);
                    }
                }
                if ((!pos && alpha[t] < C) || (pos && alpha[t] > 0.0)) {
                    if (v < M) {
                        M = v;
                        j = static_cast<ptrdiff_t>(t);
                    }
                }
            }
            if (i < 0 || j < 0 || m - M <= eps_kkt) {
                kkt_met = true;
                break;
            }

            const double yi = static_cast<double>(problem.y[i]);
            const double yj = static_cast<double>(problem.y[j]);
            const double* Ki = kernel.row(static_cast<size_t>(i), row_buf_i);
            const double* Kj = kernel.row(static_cast<size_t>(j), row_buf_j);

            // Feasible direction alpha_i += yi*d, alpha_j -= yj*d keeps the
            // equality constraint; curvature along it is Kii + Kjj - 2Kij.
            double curv = kernel.diag(i) + kernel.diag(j) - 2.0 * Ki[j];
            if (curv <= 0.0) curv = kTau;
            double d = (m - M) / curv;

            double lo = -std::numeric_limits<double>::infinity();
            double hi = std::numeric_limits<double>::infinity();
            if (yi > 0) {
                lo = std::max(lo, -alpha[i]);
                hi = std::min(hi, C - alpha[i]);
            } else {
                lo = std::max(lo, alpha[i] - C);
                hi = std::min(hi, alpha[i]);
            }
            if (yj > 0) {
                lo = std::max(lo, alpha[j] - C);
                hi = std::min(hi, alpha[j]);
            } else {
                lo = std::max(lo, -alpha[j]);
                hi = std::min(hi, C - alpha[j]);
            }
            d = std::clamp(d, lo, hi);

            const double old_ai = alpha[i];
            const double old_aj = alpha[j];
            alpha[i] = std::clamp(alpha[i] + yi * d, 0.0, C);
            alpha[j] = std::clamp(alpha[j] - yj * d, 0.0, C);
            if (alpha[i] < snap) alpha[i] = 0.0;
            if (alpha[i] > C - snap) alpha[i] = C;
            if (alpha[j] < snap) alpha[j] = 0.0;
            if (alpha[j] > C - snap) alpha[j] = C;

            const double dai = alpha[i] - old_ai;
            const double daj = alpha[j] - old_aj;
            if (dai == 0.0 && daj == 0.0) {
                kkt_met = true;  // saturated pair below snap resolution
                break;
            }
            const double ci = yi * dai;
            const double cj = yj * daj;
            for (size_t t = 0; t < l; ++t) {
                grad[t] += static_cast<double>(problem.y[t]) * (ci * Ki[t] + cj * Kj[t]);
            }
        }
        ++epoch;

        // Epoch-end bookkeeping on exact recomputations.
        accumulate_weights(problem, alpha, w);
        for (size_t t = 0; t < l; ++t) scores[t] = score_of(problem.x[t], w);
        if (kernel.cached()) {
            // Refresh the incrementally maintained gradient.
            for (size_t t = 0; t < l; ++t) {
                grad[t] = static_cast<double>(problem.y[t]) * scores[t] - 1.0;
            }
        }
        const double b = optimal_bias(scores, problem.y);
        double primal = 0.0;
        for (double v : w) primal += v * v;
        primal *= 0.5;
        for (size_t t = 0; t < l; ++t) {
            const double margin = 1.0 - static_cast<double>(problem.y[t]) * (scores[t] + b);
            if (margin > 0) primal += C * margin;
        }
        double dual = 0.0;
        for (size_t t = 0; t < l; ++t) dual += alpha[t] * (1.0 - grad[t]);
        dual *= 0.5;

        stats.objective_trace.push_back(primal);
        if (primal < best_primal) {
            best_primal = primal;
            best.weights = w;
            best.bias = b;
        }
        const double gap = best_primal - dual;
        if (gap <= std::max(opts.tolerance, opts.tolerance * std::max(dual, 0.0))) {
            converged = true;
        } else if (kkt_met) {
            eps_kkt = std::max(eps_kkt * 0.1, 1e-15);
        }
        stats.dual_objective = dual;
    }

    stats.converged = converged;
    stats.epochs = epoch;
    stats.primal_objective = best_primal;
    best.stats = std::move(stats);
    return best;
}

LinearModel train_linear_svm(const TrainingSet& data, const TrainOptions& opts) {
    SvmProblem problem;
    problem.dimension = data.dimension;
    problem.y = data.y;
    problem.x.reserve(data.x.size());
    for (const FeatureVector& x : data.x) problem.x.push_back(SvmExample::from_binary(x));
    return solve_svm(problem, opts);
}

double decision_value(const std::vector<double>& weights, double bias, const FeatureVector& x) {
    double s = bias;
    for (uint32_t idx : x.indices) {
        if (idx >= weights.size()) {
            throw DimensionMismatchError("feature index " + std::to_string(idx) +
                                         " exceeds model dimension " +
                                         std::to_string(weights.size()));
        }
        s += weights[idx];
    }
    return s;
}

SvmModel train_model(const Corpus& training, const FeatureModelSpec& spec,
                     const TrainOptions& opts) {
    TrainingSet data;
    Vocabulary vocab = Vocabulary::build(training, spec);
    data.dimension = vocab.dimension();
    data.x.reserve(training.documents.size());
    data.y.reserve(training.documents.size());
    for (const AnnotatedDocument& doc : training.documents) {
        if (doc.label == Label::Unlabeled) {
            throw UnlabeledDocumentError("document '" + doc.id + "' has no label");
        }
        data.x.push_back(vectorize(doc, spec, vocab));
        data.y.push_back(doc.label == Label::Relevant ? 1 : -1);
    }
    LinearModel core = train_linear_svm(data, opts);

    SvmModel model;
    model.spec = spec;
    model.vocab = std::move(vocab);
    model.weights = std::move(core.weights);
    model.bias = core.bias;
    model.C = core.C;
    model.converged = core.stats.converged;
    return model;
}

double decision(const SvmModel& model, const FeatureVector& x) {
    return decision_value(model.weights, model.bias, x);
}

Label predict(const SvmModel& model, const FeatureVector& x) {
    return decision(model, x) >= 0.0 ? Label::Relevant : Label::NonRelevant;
}

void save_model(const SvmModel& model, std::ostream& out) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["model_id"] = model.spec.model_id;
    j["C"] = model.C;
    j["bias"] = model.bias;
    j["weights"] = model.weights;
    j["vocabulary"] = model.vocab.tokens();
    nlohmann::json slots = nlohmann::json::object();
    if (model.vocab.location_slot()) slots["location_flag"] = *model.vocab.location_slot();
    if (model.vocab.multi_disease_slot())
        slots["multi_disease_flag"] = *model.vocab.multi_disease_slot();
    j["indicator_slots"] = slots;
    out << j.dump(2) << '\n';
}

void save_model(const SvmModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open model file '" + path + "' for writing");
    save_model(model, out);
    if (!out) throw IoError("failed writing model file '" + path + "'");
}

SvmModel load_model(std::istream& in) {
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw CorruptModelFileError("model file is not a JSON object");
    }
    if (!j.contains("format_version") || !j["format_version"].is_number_integer()) {
        throw CorruptModelFileError("model file has no integer format_version");
    }
    if (j["format_version"].get<int>() != 1) {
        throw UnsupportedFormatVersionError("unsupported model format_version " +
                                            j["format_version"].dump());
    }
    try {
        const int model_id = j.at("model_id").get<int>();
        if (model_id < 1 || model_id > 14) {
            throw CorruptModelFileError("model_id out of range");
        }
        SvmModel model;
        model.spec = FeatureModelSpec::from_model_id(model_id);
        model.C = j.at("C").get<double>();
        model.bias = j.at("bias").get<double>();
        model.weights = j.at("weights").get<std::vector<double>>();
        std::vector<std::string> tokens = j.at("vocabulary").get<std::vector<std::string>>();
        model.vocab = Vocabulary::from_tokens(std::move(tokens), model.spec);

        if (!(model.C > 0)) throw CorruptModelFileError("C must be positive");
        if (!std::isfinite(model.bias)) throw CorruptModelFileError("bias is not finite");
        for (double v : model.weights) {
            if (!std::isfinite(v)) throw CorruptModelFileError("weight is not finite");
        }
        if (model.weights.size() != model.vocab.dimension()) {
            throw CorruptModelFileError("weights length does not match vocabulary dimension");
        }

        const nlohmann::json& slots = j.at("indicator_slots");
        if (!slots.is_object()) throw CorruptModelFileError("indicator_slots must be an object");
        auto check_slot = [&](const char* name, std::optional<uint32_t> expected) {
            if (expected.has_value() != slots.contains(name)) {
                throw CorruptModelFileError(std::string("indicator slot '") + name +
                                            "' inconsistent with model_id");
            }
            if (expected && slots[name].get<uint32_t>() != *expected) {
                throw CorruptModelFileError(std::string("indicator slot '") + name +
                                            "' has unexpected index");
            }
        };
        check_slot("location_flag", model.vocab.location_slot());
        check_slot("multi_disease_flag", model.vocab.multi_disease_slot());
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw CorruptModelFileError(std::string("malformed model file: ") + e.what());
    }
}

SvmModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file '" + path + "'");
    return load_model(in);
}

}  // namespace obc
