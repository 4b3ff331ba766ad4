#include "obc/features.hpp"

#include <algorithm>
#include <set>

#include "obc/errors.hpp"
#include "obc/unicode.hpp"

namespace obc {

FeatureModelSpec FeatureModelSpec::from_model_id(int id) {
    if (id < 1 || id > 14) {
        throw InvalidSpecError("model id must be in 1..14, got " + std::to_string(id));
    }
    FeatureModelSpec spec;
    spec.model_id = id;
    if (id == 1) {
        spec.raw_text = true;
        return spec;
    }
    if (id == 2) {
        spec.window = Window::SentenceOnly;
        return spec;
    }
    static const Window kWindows[3] = {Window::PlusPreceding, Window::PlusFollowing,
                                       Window::PlusBoth};
    spec.window = kWindows[(id - 3) % 3];
    int tier = (id - 3) / 3;  // 0: plain, 1: +location, 2: +title, 3: +multi-disease
    spec.use_location = tier >= 1;
    spec.use_title = tier >= 2;
    spec.use_multi_disease = tier >= 3;
    return spec;
}

std::optional<int> FeatureModelSpec::id_from_flags(bool raw_text, Window window,
                                                   bool use_location, bool use_title,
                                                   bool use_multi_disease) {
    for (int id = 1; id <= 14; ++id) {
        FeatureModelSpec s = from_model_id(id);
        if (s.raw_text == raw_text && s.window == window && s.use_location == use_location &&
            s.use_title == use_title && s.use_multi_disease == use_multi_disease) {
            return id;
        }
    }
    return std::nullopt;
}

std::string FeatureModelSpec::description() const {
    if (raw_text) return "raw text";
    std::string d = "disease sentences";
    switch (window) {
        case Window::SentenceOnly:
            break;
        case Window::PlusPreceding:
            d += " + preceding";
            break;
        case Window::PlusFollowing:
            d += " + following";
            break;
        case Window::PlusBoth:
            d += " + preceding/following";
            break;
    }
    if (use_location) d += " + location flag";
    if (use_title) d += " + title";
    if (use_multi_disease) d += " + multi-disease flag";
    return d;
}

std::vector<size_t> select_sentences(const AnnotatedDocument& doc, const FeatureModelSpec& spec) {
    if (spec.model_id < 1 || spec.model_id > 14) {
        throw InvalidSpecError("invalid feature model spec");
    }
    const size_t n = doc.body_sentences.size();
    if (spec.raw_text) {
        std::vector<size_t> all(n);
        for (size_t i = 0; i < n; ++i) all[i] = i;
        return all;
    }

    std::set<size_t> picked;
    for (const Mention& m : doc.mentions) {
        if (m.zone != Zone::Body || m.kind != MentionKind::Disease) continue;
        const size_t i = m.sentence_index;
        picked.insert(i);
        const bool want_prev =
            spec.window == Window::PlusPreceding || spec.window == Window::PlusBoth;
        const bool want_next =
            spec.window == Window::PlusFollowing || spec.window == Window::PlusBoth;
        if (want_prev && i > 0) picked.insert(i - 1);
        if (want_next && i + 1 < n) picked.insert(i + 1);
    }
    return {picked.begin(), picked.end()};
}

int location_flag(const AnnotatedDocument& doc, const std::vector<size_t>& selected) {
    for (const Mention& m : doc.mentions) {
        if (m.zone != Zone::Body || m.kind != MentionKind::Location) continue;
        if (std::binary_search(selected.begin(), selected.end(), m.sentence_index)) return 1;
    }
    return 0;
}

namespace {

std::string normalize_surface(const std::string& surface) {
    std::u32string u = uni::nfc(uni::decode_utf8(surface));
    std::u32string out;
    bool pending_space = false;
    for (char32_t cp : u) {
        if (uni::is_space(cp)) {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            out.push_back(U' ');
            pending_space = false;
        }
        out.push_back(uni::to_lower(cp));
    }
    return uni::encode_utf8(out);
}

}  // namespace

int multi_disease_flag(const AnnotatedDocument& doc) {
    std::set<std::string> names;
    for (const Mention& m : doc.mentions) {
        if (m.kind != MentionKind::Disease) continue;
        names.insert(normalize_surface(m.surface));
        if (names.size() >= 2) return 1;
    }
    return 0;
}

std::vector<std::string> extract_text(const AnnotatedDocument& doc, const FeatureModelSpec& spec) {
    std::vector<std::string> tokens;
    for (size_t idx : select_sentences(doc, spec)) {
        const Sentence& s = doc.body_sentences[idx];
        tokens.insert(tokens.end(), s.tokens.begin(), s.tokens.end());
    }
    if (spec.raw_text || spec.use_title) {
        for (const Sentence& s : doc.title_sentences) {
            tokens.insert(tokens.end(), s.tokens.begin(), s.tokens.end());
        }
    }
    return tokens;
}

Vocabulary Vocabulary::build(const Corpus& training_docs, const FeatureModelSpec& spec) {
    std::set<std::string> uniq;
    for (const AnnotatedDocument& doc : training_docs.documents) {
        for (std::string& t : extract_text(doc, spec)) uniq.insert(std::move(t));
    }
    // std::set of UTF-8 strings iterates in code point order already.
    return from_tokens({uniq.begin(), uniq.end()}, spec);
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens, const FeatureModelSpec& spec) {
    Vocabulary v;
    v.tokens_ = std::move(tokens);
    v.token_index_.reserve(v.tokens_.size());
    for (uint32_t i = 0; i < v.tokens_.size(); ++i) {
        if (!v.token_index_.emplace(v.tokens_[i], i).second) {
            throw CorruptModelFileError("duplicate vocabulary token '" + v.tokens_[i] + "'");
        }
    }
    uint32_t next = static_cast<uint32_t>(v.tokens_.size());
    if (spec.use_location) v.location_slot_ = next++;
    if (spec.use_multi_disease) v.multi_disease_slot_ = next++;
    v.dimension_ = next;
    return v;
}

std::optional<uint32_t> Vocabulary::index_of(const std::string& token) const {
    auto it = token_index_.find(token);
    if (it == token_index_.end()) return std::nullopt;
    return it->second;
}

FeatureVector vectorize(const AnnotatedDocument& doc, const FeatureModelSpec& spec,
                        const Vocabulary& vocab) {
    if (vocab.location_slot().has_value() != spec.use_location ||
        vocab.multi_disease_slot().has_value() != spec.use_multi_disease) {
        throw SpecMismatchError("vocabulary indicator layout does not match feature model " +
                                std::to_string(spec.model_id));
    }

    std::set<uint32_t> active;
    std::vector<size_t> selected = select_sentences(doc, spec);
    for (size_t idx : selected) {
        for (const std::string& t : doc.body_sentences[idx].tokens) {
            if (auto i = vocab.index_of(t)) active.insert(*i);
        }
    }
    if (spec.raw_text || spec.use_title) {
        for (const Sentence& s : doc.title_sentences) {
            for (const std::string& t : s.tokens) {
                if (auto i = vocab.index_of(t)) active.insert(*i);
            }
        }
    }
    if (spec.use_location && location_flag(doc, selected) == 1) {
        active.insert(*vocab.location_slot());
    }
    if (spec.use_multi_disease && multi_disease_flag(doc) == 1) {
        active.insert(*vocab.multi_disease_slot());
    }
    return FeatureVector{{active.begin(), active.end()}};
}

}  // namespace obc
