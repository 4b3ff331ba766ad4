#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "obc/corpus.hpp"

namespace obc {

enum class Window { SentenceOnly, PlusPreceding, PlusFollowing, PlusBoth };

// One of the 14 feature models, decomposed into orthogonal flags.
//   1            = raw text (title + whole body)
//   2            = disease sentences only
//   3 / 4 / 5    = disease sentences + preceding / following / both
//   6 / 7 / 8    = 3 / 4 / 5 + location flag
//   9 / 10 / 11  = 6 / 7 / 8 + title tokens
//   12 / 13 / 14 = 9 / 10 / 11 + multi-disease flag
struct FeatureModelSpec {
    int model_id = 0;
    bool raw_text = false;
    Window window = Window::SentenceOnly;
    bool use_location = false;
    bool use_title = false;
    bool use_multi_disease = false;

    // Throws InvalidSpecError for ids outside 1..14.
    static FeatureModelSpec from_model_id(int id);

    // Maps a flag combination back to its model id; empty if it is not one
    // of the 14 valid combinations.
    static std::optional<int> id_from_flags(bool raw_text, Window window, bool use_location,
                                            bool use_title, bool use_multi_disease);

    std::string description() const;

    bool operator==(const FeatureModelSpec&) const = default;
};

// Body sentence indices feeding the bag of words: all of them for model 1,
// otherwise every disease sentence plus its window neighbors. Sorted,
// deduplicated. Documents with no body disease mention select nothing
// under models 2..14.
std::vector<size_t> select_sentences(const AnnotatedDocument& doc, const FeatureModelSpec& spec);

// 1 iff any body location mention falls inside the selected sentences.
int location_flag(const AnnotatedDocument& doc, const std::vector<size_t>& selected);

// 1 iff the document names >= 2 distinct diseases (normalized surface
// forms: lowercase, NFC, whitespace collapsed) across title and body.
int multi_disease_flag(const AnnotatedDocument& doc);

// Token multiset: selected body sentences, plus title tokens for model 1
// and for specs with use_title.
std::vector<std::string> extract_text(const AnnotatedDocument& doc, const FeatureModelSpec& spec);

class Vocabulary {
public:
    Vocabulary() = default;

    // Token index over the lexicographically sorted union of extract_text
    // output across the corpus, with indicator slots appended.
    static Vocabulary build(const Corpus& training_docs, const FeatureModelSpec& spec);

    // Reconstructs a vocabulary from tokens in index order (used by model
    // file loading). Throws CorruptModelFileError on duplicate tokens.
    static Vocabulary from_tokens(std::vector<std::string> tokens, const FeatureModelSpec& spec);

    const std::vector<std::string>& tokens() const { return tokens_; }
    size_t n_tokens() const { return tokens_.size(); }
    uint32_t dimension() const { return dimension_; }
    std::optional<uint32_t> location_slot() const { return location_slot_; }
    std::optional<uint32_t> multi_disease_slot() const { return multi_disease_slot_; }

    std::optional<uint32_t> index_of(const std::string& token) const;

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, uint32_t> token_index_;
    std::optional<uint32_t> location_slot_;
    std::optional<uint32_t> multi_disease_slot_;
    uint32_t dimension_ = 0;
};

// Sparse binary vector: sorted unique active feature indices.
struct FeatureVector {
    std::vector<uint32_t> indices;

    bool operator==(const FeatureVector&) const = default;
};

// Out-of-vocabulary tokens are dropped; indicator slots are set from
// location_flag/multi_disease_flag. Throws SpecMismatchError when the
// vocabulary's indicator layout does not match the spec.
FeatureVector vectorize(const AnnotatedDocument& doc, const FeatureModelSpec& spec,
                        const Vocabulary& vocab);

}  // namespace obc
