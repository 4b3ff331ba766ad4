#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "obc/corpus.hpp"
#include "obc/errors.hpp"
#include "obc/eval.hpp"
#include "obc/features.hpp"
#include "obc/svm.hpp"
#include "obc/synth.hpp"

namespace {

struct UsageError : obc::Error {
    explicit UsageError(const std::string& m) : Error("usage", m) {}
};

int default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// OBC_THREADS caps eval parallelism when set.
int thread_budget() {
    const char* env = std::getenv("OBC_THREADS");
    if (env == nullptr || *env == '\0') return default_threads();
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == nullptr || *end != '\0' || v < 1) {
        throw UsageError("OBC_THREADS must be a positive integer");
    }
    return static_cast<int>(std::min<long>(v, 1 << 16));
}

std::vector<int> parse_model_list(const std::string& text) {
    std::vector<int> ids;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) throw UsageError("empty entry in model list '" + text + "'");
        const size_t dash = part.find('-');
        try {
            if (dash == std::string::npos) {
                ids.push_back(std::stoi(part));
            } else {
                const int lo = std::stoi(part.substr(0, dash));
                const int hi = std::stoi(part.substr(dash + 1));
                if (lo > hi) throw UsageError("empty range in model list '" + text + "'");
                for (int id = lo; id <= hi; ++id) ids.push_back(id);
            }
        } catch (const std::invalid_argument&) {
            throw UsageError("cannot parse model list '" + text + "'");
        } catch (const std::out_of_range&) {
            throw UsageError("cannot parse model list '" + text + "'");
        }
    }
    if (ids.empty()) throw UsageError("model list is empty");
    for (int id : ids) {
        if (id < 1 || id > 14) {
            throw UsageError("model id " + std::to_string(id) + " out of range 1..14");
        }
    }
    return ids;
}

void write_output(const std::string& content, const std::string& path) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw obc::IoError("cannot open output file '" + path + "'");
    out << content;
    if (!out) throw obc::IoError("failed writing '" + path + "'");
}

void cmd_stats(const std::string& corpus_path) {
    const obc::Corpus corpus = obc::load_corpus(corpus_path);
    const obc::CorpusStats stats = obc::corpus_stats(corpus);

    auto line = [](const char* name, size_t a, size_t b) {
        std::printf("%-46s %9zu %13zu\n", name, a, b);
    };
    std::printf("%-46s %9s %13s\n", "", "relevant", "non-relevant");
    line("reports", stats.relevant.n_reports, stats.non_relevant.n_reports);
    line("disease sentences", stats.relevant.n_disease_sentences,
         stats.non_relevant.n_disease_sentences);
    line("disease sentences with preceding",
         stats.relevant.n_disease_sentences_with_preceding,
         stats.non_relevant.n_disease_sentences_with_preceding);
    line("disease sentences with following",
         stats.relevant.n_disease_sentences_with_following,
         stats.non_relevant.n_disease_sentences_with_following);
    line("disease sentences with both neighbors",
         stats.relevant.n_disease_sentences_with_both,
         stats.non_relevant.n_disease_sentences_with_both);
    line("reports with location in window",
         stats.relevant.n_reports_with_location_in_selected,
         stats.non_relevant.n_reports_with_location_in_selected);

    std::printf("\ncorpus-wide vocabulary sizes\n");
    std::printf("%3s  %-55s %8s\n", "#", "model", "#tokens");
    for (int id = 1; id <= 14; ++id) {
        const obc::FeatureModelSpec spec = obc::FeatureModelSpec::from_model_id(id);
        const obc::Vocabulary vocab = obc::Vocabulary::build(corpus, spec);
        std::printf("%3d  %-55s %8zu\n", id, spec.description().c_str(), vocab.n_tokens());
    }
}

void cmd_predict(const std::string& model_path, const std::string& corpus_path,
                 const std::string& out_path) {
    const obc::SvmModel model = obc::load_model(model_path);
    const obc::Corpus corpus = obc::load_corpus(corpus_path);
    std::ostringstream out;
    char buf[64];
    for (const obc::AnnotatedDocument& doc : corpus.documents) {
        const obc::FeatureVector x = obc::vectorize(doc, model.spec, model.vocab);
        const double score = obc::decision(model, x);
        const obc::Label label = score >= 0.0 ? obc::Label::Relevant : obc::Label::NonRelevant;
        std::snprintf(buf, sizeof(buf), "%.6f", score);
        out << doc.id << '\t' << buf << '\t' << obc::label_to_string(label) << '\n';
    }
    write_output(out.str(), out_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Disease-outbreak report classifier"};
    app.require_subcommand(1);

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics and vocabulary sizes");
    std::string stats_corpus;
    stats_cmd->add_option("--corpus", stats_corpus, "Corpus JSONL file")->required();

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
    obc::SynthParams synth_params;
    std::string synth_out;
    synth_cmd->add_option("--relevant", synth_params.n_relevant, "Relevant document count")
        ->required();
    synth_cmd->add_option("--irrelevant", synth_params.n_irrelevant, "Irrelevant document count")
        ->required();
    synth_cmd->add_option("--signal-strength", synth_params.signal_strength,
                          "Probability of a signal word in relevant documents")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    synth_cmd->add_option("--location-correlation", synth_params.location_correlation,
                          "Probability of a window location in relevant documents")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth_params.seed, "Generator seed")->capture_default_str();
    synth_cmd->add_option("--diseases", synth_params.n_diseases, "Disease lexicon size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd->add_option("--locations", synth_params.n_locations, "Location lexicon size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd
        ->add_option("--background-words", synth_params.n_background_words,
                     "Background lexicon size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd->add_option("--signal-words", synth_params.n_signal_words, "Signal lexicon size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd->add_option("--out", synth_out, "Output corpus path")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "Train a model on a labeled corpus");
    std::string train_corpus, train_out;
    int train_model_id = 8;
    obc::TrainOptions train_opts;
    train_cmd->add_option("--corpus", train_corpus, "Corpus JSONL file")->required();
    train_cmd->add_option("--model", train_model_id, "Feature model id (1..14)")
        ->check(CLI::Range(1, 14))
        ->capture_default_str();
    train_cmd->add_option("--c", train_opts.C, "Soft-margin C")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train_cmd->add_option("--tolerance", train_opts.tolerance, "Relative objective tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train_cmd->add_option("--max-epochs", train_opts.max_epochs, "Epoch cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train_cmd->add_option("--out", train_out, "Model file path")->required();

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "Score documents with a trained model");
    std::string predict_model, predict_corpus, predict_out;
    predict_cmd->add_option("--model-file", predict_model, "Model JSON file")->required();
    predict_cmd->add_option("--corpus", predict_corpus, "Corpus JSONL file")->required();
    predict_cmd->add_option("--out", predict_out, "Output TSV path (default stdout)");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Repeated cross-validation for one model");
    std::string eval_corpus, eval_out, eval_format = "json";
    int eval_model_id = 8;
    obc::EvalOptions eval_opts;
    eval_cmd->add_option("--corpus", eval_corpus, "Corpus JSONL file")->required();
    eval_cmd->add_option("--model", eval_model_id, "Feature model id (1..14)")
        ->check(CLI::Range(1, 14))
        ->capture_default_str();
    eval_cmd->add_option("--repeats", eval_opts.repeats, "Cross-validation repeats")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    eval_cmd->add_option("--folds", eval_opts.folds, "Folds per repeat")
        ->check(CLI::Range(2, 1 << 20))
        ->capture_default_str();
    eval_cmd->add_option("--seed", eval_opts.seed, "Base shuffle seed")->capture_default_str();
    eval_cmd->add_option("--c", eval_opts.C, "Soft-margin C")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    eval_cmd->add_option("--tolerance", eval_opts.tolerance, "Relative objective tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    eval_cmd->add_option("--max-epochs", eval_opts.max_epochs, "Epoch cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    eval_cmd->add_option("--out", eval_out, "Report path (default stdout)");
    eval_cmd->add_option("--format", eval_format, "json or text")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();

    // compare
    auto* compare_cmd = app.add_subcommand("compare", "Compare feature models on one corpus");
    std::string compare_corpus, compare_out, compare_models_text = "1-14",
                                             compare_format = "text";
    obc::EvalOptions compare_opts;
    compare_cmd->add_option("--corpus", compare_corpus, "Corpus JSONL file")->required();
    compare_cmd->add_option("--models", compare_models_text, "Model ids, e.g. 1,2,5-8")
        ->capture_default_str();
    compare_cmd->add_option("--repeats", compare_opts.repeats, "Cross-validation repeats")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    compare_cmd->add_option("--folds", compare_opts.folds, "Folds per repeat")
        ->check(CLI::Range(2, 1 << 20))
        ->capture_default_str();
    compare_cmd->add_option("--seed", compare_opts.seed, "Base shuffle seed")
        ->capture_default_str();
    compare_cmd->add_option("--c", compare_opts.C, "Soft-margin C")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    compare_cmd->add_option("--tolerance", compare_opts.tolerance,
                            "Relative objective tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    compare_cmd->add_option("--max-epochs", compare_opts.max_epochs, "Epoch cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    compare_cmd->add_option("--out", compare_out, "Output path (default stdout)");
    compare_cmd->add_option("--format", compare_format, "text or json")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error:usage: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*stats_cmd) {
            cmd_stats(stats_corpus);
        } else if (*synth_cmd) {
            obc::save_corpus(obc::generate_synthetic_corpus(synth_params), synth_out);
        } else if (*train_cmd) {
            const obc::Corpus corpus = obc::load_corpus(train_corpus);
            const obc::FeatureModelSpec spec = obc::FeatureModelSpec::from_model_id(train_model_id);
            const obc::SvmModel model = obc::train_model(corpus, spec, train_opts);
            if (!model.converged) {
                std::cerr << "warning:did-not-converge: tolerance unmet after "
                          << train_opts.max_epochs << " epochs; best iterate written\n";
            }
            obc::save_model(model, train_out);
        } else if (*predict_cmd) {
            cmd_predict(predict_model, predict_corpus, predict_out);
        } else if (*eval_cmd) {
            eval_opts.threads = thread_budget();
            const obc::Corpus corpus = obc::load_corpus(eval_corpus);
            const obc::FeatureModelSpec spec = obc::FeatureModelSpec::from_model_id(eval_model_id);
            const obc::EvalReport report = obc::run_repeated_cv(corpus, spec, eval_opts);
            write_output(eval_format == "json" ? obc::report_to_json(report)
                                               : obc::report_to_text(report),
                         eval_out);
        } else if (*compare_cmd) {
            compare_opts.threads = thread_budget();
            const std::vector<int> ids = parse_model_list(compare_models_text);
            const obc::Corpus corpus = obc::load_corpus(compare_corpus);
            const obc::ComparisonTable table = obc::compare_models(corpus, ids, compare_opts);
            write_output(compare_format == "json" ? obc::comparison_to_json(table)
                                                  : obc::comparison_to_text(table),
                         compare_out);
        }
    } catch (const UsageError& e) {
        std::cerr << "error:" << e.category() << ": " << e.what() << "\n";
        return 2;
    } catch (const obc::Error& e) {
        std::cerr << "error:" << e.category() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error:internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
