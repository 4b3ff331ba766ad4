#include "obc/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "obc/errors.hpp"
#include "obc/rng.hpp"
#include "obc/unicode.hpp"

namespace obc {

namespace {

// Pools are disjoint on purpose: signal words never occur as background,
// so the class signal lives exactly where the generator puts it.
const char* const kBackgroundSyllables[] = {
    "ngày",  "tỉnh",  "thành", "người", "trường", "hợp",  "theo",  "trong", "nước",
    "vùng",  "khu",   "vực",   "cho",   "biết",   "hiện", "đang",  "được",  "triển",
    "khai",  "công",  "tác",   "kiểm",  "tra",    "giám", "sát",   "tình",  "hình",
    "địa",   "bàn",   "xã",    "huyện", "nhiều",  "mới",  "tăng",  "giảm",  "số",
    "liệu",  "báo",   "cáo",   "cơ",    "quan",   "chức", "năng",  "tiếp",  "tục",
};

const char* const kSignalWords[] = {
    "bùng-phát", "ổ-dịch", "lây-lan", "tử-vong", "khẩn-cấp", "cách-ly", "phong-tỏa", "nhiễm-mới",
};

const char* const kDiseaseBases[] = {
    "cúm a/h1n1", "cúm a/h5n1", "sốt xuất huyết", "sởi",      "tả",        "thủy đậu",
    "bạch hầu",   "quai bị",    "rubella",        "viêm não", "tay chân miệng", "lao phổi",
};

const char* const kLocationBases[] = {
    "Hà Nội",     "Bến Tre",   "Thạnh Phú", "Sóc Trăng", "Kiên Giang", "Đà Nẵng",
    "Cần Thơ",    "Hải Phòng", "Huế",       "Nha Trang", "Vũng Tàu",   "Quảng Ninh",
    "Lào Cai",    "Yên Bái",   "Tây Ninh",  "Bình Dương", "Đồng Nai",  "An Giang",
    "Cà Mau",     "Bạc Liêu",
};

constexpr size_t kNBackgroundSyllables = std::size(kBackgroundSyllables);
constexpr size_t kNSignalWords = std::size(kSignalWords);
constexpr size_t kNDiseaseBases = std::size(kDiseaseBases);
constexpr size_t kNLocationBases = std::size(kLocationBases);

std::string background_word(size_t i) {
    if (i < kNBackgroundSyllables) return kBackgroundSyllables[i];
    const size_t a = i % kNBackgroundSyllables;
    const size_t b = i / kNBackgroundSyllables - 1;
    return std::string(kBackgroundSyllables[a]) + "-" +
           kBackgroundSyllables[b % kNBackgroundSyllables] +
           (b >= kNBackgroundSyllables ? std::to_string(b / kNBackgroundSyllables) : "");
}

std::string signal_word(size_t i) {
    if (i < kNSignalWords) return kSignalWords[i];
    return std::string(kSignalWords[i % kNSignalWords]) + "-" +
           std::to_string(i / kNSignalWords);
}

std::string disease_name(size_t i) {
    if (i < kNDiseaseBases) return kDiseaseBases[i];
    return std::string(kDiseaseBases[i % kNDiseaseBases]) + " chủng " +
           std::to_string(i / kNDiseaseBases);
}

std::string location_name(size_t i) {
    if (i < kNLocationBases) return kLocationBases[i];
    return std::string(kLocationBases[i % kNLocationBases]) + " " +
           std::to_string(i / kNLocationBases);
}

std::string capitalize_first(const std::string& word) {
    std::u32string u = uni::decode_utf8(word);
    if (!u.empty()) u[0] = uni::to_upper(u[0]);
    return uni::encode_utf8(u);
}

// A sentence under construction: word slots, some of which carry a tag.
struct Slot {
    std::string text;
    bool tagged = false;
    MentionKind kind = MentionKind::Disease;
};

struct SentenceDraft {
    std::vector<Slot> slots;

    void insert(SplitMix64& rng, Slot slot) {
        const size_t pos = 1 + rng.below(slots.size());  // never the first slot
        slots.insert(slots.begin() + static_cast<ptrdiff_t>(pos), std::move(slot));
    }

    std::string render(bool capitalize, bool terminate) const {
        std::string out;
        for (size_t k = 0; k < slots.size(); ++k) {
            if (k > 0) out += ' ';
            std::string text = slots[k].text;
            if (k == 0 && capitalize && !slots[k].tagged) text = capitalize_first(text);
            if (slots[k].tagged) {
                out += slots[k].kind == MentionKind::Disease ? "<ner type=disease>"
                                                             : "<ner type=location>";
                out += text;
                out += "</ner>";
            } else {
                out += text;
            }
        }
        if (terminate) out += '.';
        return out;
    }
};

}  // namespace

std::vector<std::string> synth_disease_lexicon(size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) out.push_back(disease_name(i));
    return out;
}

std::vector<std::string> synth_location_lexicon(size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) out.push_back(location_name(i));
    return out;
}

std::vector<std::string> synth_background_lexicon(size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) out.push_back(background_word(i));
    return out;
}

std::vector<std::string> synth_signal_lexicon(size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) out.push_back(signal_word(i));
    return out;
}

Corpus generate_synthetic_corpus(const SynthParams& params) {
    if (params.signal_strength < 0.0 || params.signal_strength > 1.0) {
        throw InvalidParamError("signal_strength must be in [0,1]");
    }
    if (params.location_correlation < 0.0 || params.location_correlation > 1.0) {
        throw InvalidParamError("location_correlation must be in [0,1]");
    }
    if (params.n_diseases < 1) throw InvalidParamError("need at least one disease name");
    if (params.n_locations < 1) throw InvalidParamError("need at least one location name");
    if (params.n_background_words < 5) {
        throw InvalidParamError("need at least five background words");
    }
    if (params.n_signal_words < 1) throw InvalidParamError("need at least one signal word");

    SplitMix64 rng(params.seed);
    Corpus corpus;
    const size_t total = params.n_relevant + params.n_irrelevant;
    corpus.documents.reserve(total);

    for (size_t doc_i = 0; doc_i < total; ++doc_i) {
        const bool relevant = doc_i < params.n_relevant;

        const size_t n_body = 3 + rng.below(6);  // 3..8 sentences
        const size_t primary = rng.below(n_body);
        const size_t disease = rng.below(params.n_diseases);

        std::vector<size_t> disease_sentences{primary};
        bool second_disease = rng.coin(0.3);
        size_t disease2 = 0, sentence2 = 0;
        if (second_disease) {
            disease2 = rng.below(params.n_diseases);
            sentence2 = rng.below(n_body);
            if (sentence2 != primary) disease_sentences.push_back(sentence2);
        }

        // Title: a few background words, sometimes naming the disease.
        SentenceDraft title;
        const size_t n_title_words = 3 + rng.below(3);
        for (size_t k = 0; k < n_title_words; ++k) {
            title.slots.push_back({background_word(rng.below(params.n_background_words))});
        }
        if (rng.coin(0.5)) {
            title.insert(rng, {disease_name(disease), true, MentionKind::Disease});
        }

        std::vector<SentenceDraft> body(n_body);
        for (SentenceDraft& s : body) {
            const size_t n_words = 4 + rng.below(5);  // 4..8 words
            for (size_t k = 0; k < n_words; ++k) {
                s.slots.push_back({background_word(rng.below(params.n_background_words))});
            }
        }
        body[primary].insert(rng, {disease_name(disease), true, MentionKind::Disease});
        if (second_disease) {
            body[sentence2].insert(rng, {disease_name(disease2), true, MentionKind::Disease});
        }

        // Signal words live in the disease sentence itself, so even the
        // narrowest window (model 2) sees them.
        if (relevant && rng.coin(params.signal_strength)) {
            body[primary].insert(rng, {signal_word(rng.below(params.n_signal_words))});
        }

        // The +/-1 window around every disease sentence.
        std::set<size_t> window;
        for (size_t s : disease_sentences) {
            window.insert(s);
            if (s > 0) window.insert(s - 1);
            if (s + 1 < n_body) window.insert(s + 1);
        }
        std::vector<size_t> window_v(window.begin(), window.end());
        std::vector<size_t> outside;
        for (size_t s = 0; s < n_body; ++s) {
            if (!window.contains(s)) outside.push_back(s);
        }

        const double q =
            relevant ? params.location_correlation : params.location_correlation / 4.0;
        if (rng.coin(q)) {
            const size_t s = window_v[rng.below(window_v.size())];
            body[s].insert(rng, {location_name(rng.below(params.n_locations)), true,
                                 MentionKind::Location});
        }
        // Decoy location outside every window; invisible to models 2..14
        // but present in the raw text.
        if (!outside.empty() && rng.coin(0.15)) {
            const size_t s = outside[rng.below(outside.size())];
            body[s].insert(rng, {location_name(rng.below(params.n_locations)), true,
                                 MentionKind::Location});
        }

        RawRecord rec;
        char idbuf[32];
        std::snprintf(idbuf, sizeof(idbuf), "synth-%06zu", doc_i);
        rec.id = idbuf;
        rec.title = title.render(true, false);
        std::string body_text;
        for (size_t s = 0; s < n_body; ++s) {
            if (s > 0) body_text += ' ';
            body_text += body[s].render(true, true);
        }
        rec.body = body_text;
        rec.label = relevant ? "relevant" : "non-relevant";
        corpus.documents.push_back(parse_document(rec));
    }
    return corpus;
}

}  // namespace obc
