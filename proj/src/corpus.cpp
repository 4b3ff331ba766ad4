#include "obc/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "obc/errors.hpp"
#include "obc/unicode.hpp"

namespace obc {

namespace {

constexpr std::u32string_view kOpenPrefix = U"<ner type=";
constexpr std::u32string_view kDisease = U"disease";
constexpr std::u32string_view kLocation = U"location";
constexpr std::u32string_view kClose = U"</ner>";

struct ZoneParse {
    std::u32string plain;
    std::vector<Mention> mentions;
};

bool starts_with_at(std::u32string_view s, size_t pos, std::u32string_view prefix) {
    return s.size() - pos >= prefix.size() && s.substr(pos, prefix.size()) == prefix;
}

// Strips tags from one zone's raw text, recording a mention per tag.
// The grammar is exact: "<ner type=disease>", "<ner type=location>",
// "</ner>", case-sensitive, no nesting, no empty span.
ZoneParse strip_tags(const std::string& raw, Zone zone, const std::string& doc_id) {
    ZoneParse out;
    std::u32string u = uni::decode_utf8(raw);

    std::optional<MentionKind> open_kind;
    size_t open_at = 0;  // plain-text offset where the open mention started
    size_t i = 0;
    while (i < u.size()) {
        if (starts_with_at(u, i, kOpenPrefix)) {
            if (open_kind) {
                throw MalformedTagError("nested <ner> tag in document '" + doc_id + "'");
            }
            size_t k = i + kOpenPrefix.size();
            MentionKind kind;
            if (starts_with_at(u, k, kDisease) && starts_with_at(u, k + kDisease.size(), U">")) {
                kind = MentionKind::Disease;
                k += kDisease.size() + 1;
            } else if (starts_with_at(u, k, kLocation) &&
                       starts_with_at(u, k + kLocation.size(), U">")) {
                kind = MentionKind::Location;
                k += kLocation.size() + 1;
            } else {
                throw MalformedTagError("unknown or malformed <ner> type attribute in document '" +
                                        doc_id + "'");
            }
            open_kind = kind;
            open_at = out.plain.size();
            i = k;
        } else if (starts_with_at(u, i, kClose)) {
            if (!open_kind) {
                throw MalformedTagError("</ner> without opening tag in document '" + doc_id + "'");
            }
            if (out.plain.size() == open_at) {
                throw MalformedTagError("empty <ner> span in document '" + doc_id + "'");
            }
            Mention m;
            m.kind = *open_kind;
            m.char_start = open_at;
            m.char_end = out.plain.size();
            m.surface = uni::encode_utf8(
                std::u32string_view(out.plain).substr(open_at, out.plain.size() - open_at));
            m.zone = zone;
            out.mentions.push_back(std::move(m));
            open_kind.reset();
            i += kClose.size();
        } else if (starts_with_at(u, i, U"<ner")) {
            throw MalformedTagError("malformed <ner> tag in document '" + doc_id + "'");
        } else {
            out.plain.push_back(u[i]);
            ++i;
        }
    }
    if (open_kind) {
        throw MalformedTagError("unclosed <ner> tag in document '" + doc_id + "'");
    }
    return out;
}

std::vector<Sentence> build_sentences(const std::u32string& plain,
                                      const std::vector<Mention>& mentions) {
    std::vector<text::Span> protect;
    protect.reserve(mentions.size());
    for (const Mention& m : mentions) protect.push_back({m.char_start, m.char_end});

    std::vector<Sentence> sentences;
    for (const text::Span& sp : text::segment_sentences(plain, protect)) {
        Sentence s;
        s.index = sentences.size();
        s.char_start = sp.begin;
        s.char_end = sp.end;
        s.tokens = text::tokenize(std::u32string_view(plain).substr(sp.begin, sp.end - sp.begin));
        sentences.push_back(std::move(s));
    }
    return sentences;
}

size_t sentence_index_of(const std::vector<Sentence>& sentences, size_t char_start) {
    for (const Sentence& s : sentences) {
        if (char_start >= s.char_start && char_start < s.char_end) return s.index;
    }
    // Mentions are non-empty and sentences cover all non-whitespace text.
    return sentences.empty() ? 0 : sentences.back().index;
}

Label parse_label(const std::optional<std::string>& label) {
    if (!label) return Label::Unlabeled;
    if (*label == "relevant") return Label::Relevant;
    if (*label == "non-relevant") return Label::NonRelevant;
    throw InvalidLabelError("unknown label '" + *label + "'");
}

}  // namespace

AnnotatedDocument parse_document(const RawRecord& record) {
    if (record.id.empty()) throw MissingIdError("record has no id");

    AnnotatedDocument doc;
    doc.id = record.id;
    doc.title_raw = record.title;
    doc.body_raw = record.body;
    doc.label = parse_label(record.label);

    ZoneParse title = strip_tags(record.title, Zone::Title, record.id);
    ZoneParse body = strip_tags(record.body, Zone::Body, record.id);
    doc.title_plain = uni::encode_utf8(title.plain);
    doc.body_plain = uni::encode_utf8(body.plain);
    doc.title_sentences = build_sentences(title.plain, title.mentions);
    doc.body_sentences = build_sentences(body.plain, body.mentions);

    for (Mention& m : title.mentions) {
        m.sentence_index = sentence_index_of(doc.title_sentences, m.char_start);
        doc.mentions.push_back(std::move(m));
    }
    for (Mention& m : body.mentions) {
        m.sentence_index = sentence_index_of(doc.body_sentences, m.char_start);
        doc.mentions.push_back(std::move(m));
    }
    return doc;
}

std::string render_tagged(const AnnotatedDocument& doc, Zone zone) {
    const std::u32string plain =
        uni::decode_utf8(zone == Zone::Title ? doc.title_plain : doc.body_plain);

    std::string out;
    size_t pos = 0;
    for (const Mention& m : doc.mentions) {
        if (m.zone != zone) continue;
        out += uni::encode_utf8(std::u32string_view(plain).substr(pos, m.char_start - pos));
        out += m.kind == MentionKind::Disease ? "<ner type=disease>" : "<ner type=location>";
        out += uni::encode_utf8(
            std::u32string_view(plain).substr(m.char_start, m.char_end - m.char_start));
        out += "</ner>";
        pos = m.char_end;
    }
    out += uni::encode_utf8(std::u32string_view(plain).substr(pos));
    return out;
}

RawRecord to_record(const AnnotatedDocument& doc) {
    RawRecord rec;
    rec.id = doc.id;
    rec.title = render_tagged(doc, Zone::Title);
    rec.body = render_tagged(doc, Zone::Body);
    if (doc.label != Label::Unlabeled) rec.label = label_to_string(doc.label);
    return rec;
}

std::string label_to_string(Label label) {
    switch (label) {
        case Label::Relevant:
            return "relevant";
        case Label::NonRelevant:
            return "non-relevant";
        case Label::Unlabeled:
            return "unlabeled";
    }
    return "unlabeled";
}

Corpus read_corpus_jsonl(std::istream& in) {
    Corpus corpus;
    std::string line;
    size_t line_no = 0;
    std::vector<std::string> seen_ids;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw IoError("line " + std::to_string(line_no) + " is not a JSON object");
        }
        RawRecord rec;
        if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty()) {
            throw MissingIdError("line " + std::to_string(line_no) + " has no id");
        }
        rec.id = j["id"].get<std::string>();
        if (j.contains("title") && !j["title"].is_string()) {
            throw IoError("line " + std::to_string(line_no) + ": title must be a string");
        }
        if (j.contains("body") && !j["body"].is_string()) {
            throw IoError("line " + std::to_string(line_no) + ": body must be a string");
        }
        if (j.contains("label") && !j["label"].is_null() && !j["label"].is_string()) {
            throw IoError("line " + std::to_string(line_no) + ": label must be a string");
        }
        if (j.contains("title")) rec.title = j["title"].get<std::string>();
        if (j.contains("body")) rec.body = j["body"].get<std::string>();
        if (j.contains("label") && !j["label"].is_null())
            rec.label = j["label"].get<std::string>();
        corpus.documents.push_back(parse_document(rec));
        seen_ids.push_back(rec.id);
    }
    std::vector<std::string> sorted = seen_ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw IoError("duplicate document id in corpus");
    }
    return corpus;
}

Corpus load_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open corpus file '" + path + "'");
    return read_corpus_jsonl(in);
}

void write_corpus_jsonl(const Corpus& corpus, std::ostream& out) {
    for (const AnnotatedDocument& doc : corpus.documents) {
        RawRecord rec = to_record(doc);
        nlohmann::json j;
        j["id"] = rec.id;
        j["title"] = rec.title;
        j["body"] = rec.body;
        if (rec.label) j["label"] = *rec.label;
        out << j.dump() << '\n';
    }
}

void save_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file '" + path + "'");
    write_corpus_jsonl(corpus, out);
    if (!out) throw IoError("failed writing corpus to '" + path + "'");
}

CorpusStats corpus_stats(const Corpus& corpus) {
    CorpusStats stats;
    for (const AnnotatedDocument& doc : corpus.documents) {
        if (doc.label == Label::Unlabeled) {
            throw UnlabeledDocumentError("document '" + doc.id + "' has no label");
        }
        ClassStats& cs = doc.label == Label::Relevant ? stats.relevant : stats.non_relevant;
        cs.n_reports += 1;

        std::vector<bool> has_disease(doc.body_sentences.size(), false);
        std::vector<bool> has_location(doc.body_sentences.size(), false);
        for (const Mention& m : doc.mentions) {
            if (m.zone != Zone::Body) continue;
            if (m.kind == MentionKind::Disease) has_disease[m.sentence_index] = true;
            if (m.kind == MentionKind::Location) has_location[m.sentence_index] = true;
        }

        bool location_in_window = false;
        const size_t n = doc.body_sentences.size();
        for (size_t i = 0; i < n; ++i) {
            if (!has_disease[i]) continue;
            cs.n_disease_sentences += 1;
            const bool has_prev = i > 0;
            const bool has_next = i + 1 < n;
            if (has_prev) cs.n_disease_sentences_with_preceding += 1;
            if (has_next) cs.n_disease_sentences_with_following += 1;
            if (has_prev && has_next) cs.n_disease_sentences_with_both += 1;
            if (has_location[i] || (has_prev && has_location[i - 1]) ||
                (has_next && has_location[i + 1])) {
                location_in_window = true;
            }
        }
        if (location_in_window) cs.n_reports_with_location_in_selected += 1;
    }
    return stats;
}

}  // namespace obc
