#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "obc/text.hpp"

namespace obc {

enum class MentionKind { Disease, Location };
enum class Zone { Title, Body };
enum class Label { Relevant, NonRelevant, Unlabeled };

struct Mention {
    MentionKind kind = MentionKind::Disease;
    std::string surface;       // exact plain-text substring, UTF-8
    size_t char_start = 0;     // code point offsets into the zone's plain text
    size_t char_end = 0;
    Zone zone = Zone::Body;
    size_t sentence_index = 0;
};

struct Sentence {
    size_t index = 0;
    size_t char_start = 0;     // code point offsets into the zone's plain text
    size_t char_end = 0;
    std::vector<std::string> tokens;
};

struct AnnotatedDocument {
    std::string id;
    std::string title_raw;     // original tagged text
    std::string body_raw;
    std::string title_plain;   // tag-stripped text
    std::string body_plain;
    std::vector<Sentence> title_sentences;
    std::vector<Sentence> body_sentences;
    std::vector<Mention> mentions;  // title mentions first, then body, each by char_start
    Label label = Label::Unlabeled;

    const std::vector<Sentence>& sentences(Zone z) const {
        return z == Zone::Title ? title_sentences : body_sentences;
    }
};

struct Corpus {
    std::vector<AnnotatedDocument> documents;
};

// One line of the JSONL corpus file.
struct RawRecord {
    std::string id;
    std::string title;
    std::string body;
    std::optional<std::string> label;
};

// Parses the inline <ner type=disease>/<ner type=location> markup, strips
// it, segments sentences (title and body are separate zones) and tokenizes.
// Throws MalformedTagError, MissingIdError, InvalidLabelError.
AnnotatedDocument parse_document(const RawRecord& record);

// Re-inserts tags at mention spans; inverse of parsing for a zone.
std::string render_tagged(const AnnotatedDocument& doc, Zone zone);

RawRecord to_record(const AnnotatedDocument& doc);

Corpus read_corpus_jsonl(std::istream& in);
Corpus load_corpus(const std::string& path);
void write_corpus_jsonl(const Corpus& corpus, std::ostream& out);
void save_corpus(const Corpus& corpus, const std::string& path);

struct ClassStats {
    size_t n_reports = 0;
    size_t n_disease_sentences = 0;                  // body sentences with >=1 disease mention
    size_t n_disease_sentences_with_preceding = 0;   // of those, ones having a preceding sentence
    size_t n_disease_sentences_with_following = 0;
    size_t n_disease_sentences_with_both = 0;
    size_t n_reports_with_location_in_selected = 0;  // location inside the +/-1 window
};

struct CorpusStats {
    ClassStats relevant;
    ClassStats non_relevant;
};

// Requires every document labeled; throws UnlabeledDocumentError.
CorpusStats corpus_stats(const Corpus& corpus);

std::string label_to_string(Label label);

}  // namespace obc
