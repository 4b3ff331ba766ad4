#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "obc/corpus.hpp"
#include "obc/errors.hpp"
#include "obc/synth.hpp"
#include "obc/text.hpp"
#include "obc/unicode.hpp"

using namespace obc;

namespace {

// The A/H1N1 example report, tags in canonical form.
RawRecord example_report() {
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
    return rec;
}

size_t count_mentions(const AnnotatedDocument& doc, Zone zone, MentionKind kind) {
    return static_cast<size_t>(std::count_if(
        doc.mentions.begin(), doc.mentions.end(),
        [&](const Mention& m) { return m.zone == zone && m.kind == kind; }));
}

}  // namespace

TEST_CASE("example report parses into the documented mentions") {
    const AnnotatedDocument doc = parse_document(example_report());
    CHECK(doc.label == Label::Relevant);
    CHECK(count_mentions(doc, Zone::Title, MentionKind::Disease) == 1);
    CHECK(count_mentions(doc, Zone::Body, MentionKind::Disease) == 2);
    CHECK(count_mentions(doc, Zone::Body, MentionKind::Location) == 1);
    CHECK(doc.body_sentences.size() == 2);
    CHECK(doc.title_sentences.size() == 1);

    for (const Mention& m : doc.mentions) {
        if (m.kind == MentionKind::Disease && m.zone == Zone::Body) {
            CHECK(m.surface == "cúm A/H1N1");
        }
        if (m.kind == MentionKind::Location) {
            CHECK(m.surface == "Thạnh Phú");
            CHECK(m.sentence_index == 1);
        }
    }
}

TEST_CASE("record with no tags parses cleanly") {
    RawRecord rec;
    rec.id = "plain";
    rec.title = "Tin tức";
    rec.body = "Không có gì.";
    const AnnotatedDocument doc = parse_document(rec);
    CHECK(doc.mentions.empty());
    CHECK(doc.body_sentences.size() == 1);
    CHECK(doc.label == Label::Unlabeled);
}

TEST_CASE("mention offsets are code point offsets into the stripped text") {
    RawRecord rec;
    rec.id = "offsets";
    rec.body = "A <ner type=disease>cúm</ner> B <ner type=location>Hà Nội</ner>.";
    const AnnotatedDocument doc = parse_document(rec);
    CHECK(doc.body_plain == "A cúm B Hà Nội.");
    REQUIRE(doc.mentions.size() == 2);
    CHECK(doc.mentions[0].kind == MentionKind::Disease);
    CHECK(doc.mentions[0].char_start == 2);
    CHECK(doc.mentions[0].char_end == 5);
    CHECK(doc.mentions[1].kind == MentionKind::Location);
    CHECK(doc.mentions[1].char_start == 8);
    CHECK(doc.mentions[1].char_end == 14);
}

TEST_CASE("malformed tags are rejected") {
    auto parse_body = [](const std::string& body) {
        RawRecord rec;
        rec.id = "x";
        rec.body = body;
        return parse_document(rec);
    };
    CHECK_THROWS_AS(parse_body("<ner type=disease>cúm"), MalformedTagError);        // unclosed
    CHECK_THROWS_AS(parse_body("<ner type=person>ai</ner>"), MalformedTagError);    // bad type
    CHECK_THROWS_AS(parse_body("<ner type = disease>cúm</ner>"), MalformedTagError);
    CHECK_THROWS_AS(parse_body("a </ner> b"), MalformedTagError);                   // orphan close
    CHECK_THROWS_AS(parse_body("<ner type=disease>a <ner type=location>b</ner></ner>"),
                    MalformedTagError);                                             // nested
    CHECK_THROWS_AS(parse_body("<ner type=disease></ner>"), MalformedTagError);     // empty span
    // Plain '<' that is not a tag passes through.
    CHECK(parse_body("5 < 7 nhưng 9 > 2").body_plain == "5 < 7 nhưng 9 > 2");
}

TEST_CASE("missing id and bad label are rejected") {
    RawRecord rec;
    rec.body = "x";
    CHECK_THROWS_AS(parse_document(rec), MissingIdError);
    rec.id = "ok";
    rec.label = "maybe";
    CHECK_THROWS_AS(parse_document(rec), InvalidLabelError);
}

TEST_CASE("re-inserting tags reproduces the original bytes") {
    const RawRecord rec = example_report();
    const AnnotatedDocument doc = parse_document(rec);
    CHECK(render_tagged(doc, Zone::Title) == rec.title);
    CHECK(render_tagged(doc, Zone::Body) == rec.body);
}

TEST_CASE("round trip holds across a synthetic corpus") {
    SynthParams params;
    params.n_relevant = 30;
    params.n_irrelevant = 30;
    params.signal_strength = 0.5;
    params.location_correlation = 0.8;
    params.seed = 11;
    const Corpus corpus = generate_synthetic_corpus(params);
    for (const AnnotatedDocument& doc : corpus.documents) {
        CHECK(render_tagged(doc, Zone::Title) == doc.title_raw);
        CHECK(render_tagged(doc, Zone::Body) == doc.body_raw);
    }
}

TEST_CASE("jsonl io round trips") {
    SynthParams params;
    params.n_relevant = 5;
    params.n_irrelevant = 5;
    params.seed = 3;
    const Corpus corpus = generate_synthetic_corpus(params);
    std::stringstream buf;
    write_corpus_jsonl(corpus, buf);
    const std::string once = buf.str();
    const Corpus reread = read_corpus_jsonl(buf);
    REQUIRE(reread.documents.size() == corpus.documents.size());
    std::stringstream buf2;
    write_corpus_jsonl(reread, buf2);
    CHECK(buf2.str() == once);
}

TEST_CASE("jsonl reader rejects duplicates and junk") {
    std::stringstream dup(R"({"id":"a","body":"x."})"
                          "\n"
                          R"({"id":"a","body":"y."})"
                          "\n");
    CHECK_THROWS_AS(read_corpus_jsonl(dup), IoError);
    std::stringstream junk("not json\n");
    CHECK_THROWS_AS(read_corpus_jsonl(junk), IoError);
    std::stringstream noid(R"({"body":"x."})"
                           "\n");
    CHECK_THROWS_AS(read_corpus_jsonl(noid), MissingIdError);
}

TEST_CASE("a mention straddling a sentence boundary keeps one sentence") {
    RawRecord rec;
    rec.id = "straddle";
    rec.body = "Bệnh <ner type=disease>viêm phổi cấp. Corona</ner> nguy hiểm.";
    const AnnotatedDocument doc = parse_document(rec);
    CHECK(doc.body_sentences.size() == 1);
    REQUIRE(doc.mentions.size() == 1);
    CHECK(doc.mentions[0].sentence_index == 0);
    CHECK(render_tagged(doc, Zone::Body) == rec.body);
}

TEST_CASE("mention sentence indices are consistent with sentence spans") {
    SynthParams params;
    params.n_relevant = 40;
    params.n_irrelevant = 40;
    params.signal_strength = 0.6;
    params.location_correlation = 0.7;
    params.seed = 5;
    const Corpus corpus = generate_synthetic_corpus(params);
    for (const AnnotatedDocument& doc : corpus.documents) {
        for (const Mention& m : doc.mentions) {
            const auto& sentences = doc.sentences(m.zone);
            REQUIRE(m.sentence_index < sentences.size());
            const Sentence& s = sentences[m.sentence_index];
            CHECK(m.char_start >= s.char_start);
            CHECK(m.char_end <= s.char_end);
        }
    }
}

TEST_CASE("every mention leaves a token in its sentence") {
    SynthParams params;
    params.n_relevant = 40;
    params.n_irrelevant = 40;
    params.signal_strength = 0.5;
    params.location_correlation = 0.9;
    params.seed = 17;
    const Corpus corpus = generate_synthetic_corpus(params);
    for (const AnnotatedDocument& doc : corpus.documents) {
        for (const Mention& m : doc.mentions) {
            const Sentence& s = doc.sentences(m.zone)[m.sentence_index];
            const auto surface_tokens = text::tokenize(m.surface);
            REQUIRE(!surface_tokens.empty());
            bool found = false;
            for (const std::string& t : surface_tokens) {
                if (std::find(s.tokens.begin(), s.tokens.end(), t) != s.tokens.end()) {
                    found = true;
                    break;
                }
            }
            CHECK(found);
        }
    }
}

TEST_CASE("sentence tokens re-derive from the sentence text") {
    const AnnotatedDocument doc = parse_document(example_report());
    const std::u32string plain = uni::decode_utf8(doc.body_plain);
    for (const Sentence& s : doc.body_sentences) {
        const auto redo = text::tokenize(
            std::u32string_view(plain).substr(s.char_start, s.char_end - s.char_start));
        CHECK(redo == s.tokens);
    }
}

TEST_CASE("corpus_stats counts the documented fixtures") {
    // Two relevant docs, each with a disease sentence having both neighbors.
    RawRecord a;
    a.id = "a";
    a.body = "Một hai ba. Bốn <ner type=disease>cúm</ner> năm. Sáu bảy tám.";
    a.label = "relevant";
    RawRecord b = a;
    b.id = "b";
    Corpus corpus;
    corpus.documents.push_back(parse_document(a));
    corpus.documents.push_back(parse_document(b));
    CorpusStats stats = corpus_stats(corpus);
    CHECK(stats.relevant.n_reports == 2);
    CHECK(stats.non_relevant.n_reports == 0);
    CHECK(stats.relevant.n_disease_sentences == 2);
    CHECK(stats.relevant.n_disease_sentences_with_both == 2);

    // Disease in sentence 0 of 3: no preceding, one following.
    RawRecord c;
    c.id = "c";
    c.body = "Bệnh <ner type=disease>sởi</ner> lan. Hai ba. Bốn năm.";
    c.label = "relevant";
    Corpus corpus2;
    corpus2.documents.push_back(parse_document(c));
    CorpusStats stats2 = corpus_stats(corpus2);
    CHECK(stats2.relevant.n_disease_sentences == 1);
    CHECK(stats2.relevant.n_disease_sentences_with_preceding == 0);
    CHECK(stats2.relevant.n_disease_sentences_with_following == 1);

    CHECK_NOTHROW(corpus_stats(Corpus{}));
    const CorpusStats empty = corpus_stats(Corpus{});
    CHECK(empty.relevant.n_reports == 0);
    CHECK(empty.non_relevant.n_disease_sentences == 0);
}

TEST_CASE("corpus_stats rejects unlabeled documents") {
    RawRecord rec;
    rec.id = "u";
    rec.body = "x.";
    Corpus corpus;
    corpus.documents.push_back(parse_document(rec));
    CHECK_THROWS_AS(corpus_stats(corpus), UnlabeledDocumentError);
}

TEST_CASE("corpus_stats ordering invariant holds on random corpora") {
    for (uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        SynthParams params;
        params.n_relevant = 25;
        params.n_irrelevant = 25;
        params.signal_strength = 0.5;
        params.location_correlation = 0.5;
        params.seed = seed;
        const CorpusStats stats = corpus_stats(generate_synthetic_corpus(params));
        for (const ClassStats* cs : {&stats.relevant, &stats.non_relevant}) {
            CHECK(cs->n_disease_sentences_with_both <=
                  std::min(cs->n_disease_sentences_with_preceding,
                           cs->n_disease_sentences_with_following));
            CHECK(cs->n_disease_sentences_with_preceding <= cs->n_disease_sentences);
            CHECK(cs->n_disease_sentences_with_following <= cs->n_disease_sentences);
        }
    }
}
