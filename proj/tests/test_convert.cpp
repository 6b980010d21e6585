#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "udgap/convert.hpp"
#include "udgap/orphan.hpp"

using namespace udgap;

namespace {

std::string fixture(const std::string& name) {
    return std::string(UDGAP_FIXTURE_DIR) + "/" + name;
}

Document load_doc(const std::string& name) {
    std::ifstream in(fixture(name));
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_document(buf.str());
}

const EmbeddingTable& en_table() {
    static EmbeddingTable t = load_embeddings(fixture("embeddings_en.txt"));
    return t;
}

const EmbeddingTable& sv_table() {
    static EmbeddingTable t = load_embeddings(fixture("embeddings_sv.txt"));
    return t;
}

Sentence stripped(const Sentence& gold) {
    Sentence s = gold;
    s.strip_empty_nodes();
    s.clear_deps();
    return s;
}

std::string sent_id(const Sentence& s) {
    for (const std::string& c : s.comments)
        if (c.rfind("# sent_id = ", 0) == 0) return c.substr(12);
    return "?";
}

const Sentence& sentence_by_id(const Document& doc, const std::string& id) {
    for (const Sentence& s : doc.sentences)
        if (sent_id(s) == id) return s;
    FAIL("no sentence " + id);
    return doc.sentences.front();
}

Sentence reheaded(const Sentence& gold,
                  const std::map<int, std::pair<int, std::string>>& edits) {
    Sentence s = stripped(gold);
    for (const auto& [id, edit] : edits) {
        Token* t = s.find(NodeId{id, 0});
        REQUIRE(t != nullptr);
        t->head = edit.first;
        t->deprel = edit.second;
    }
    return s;
}

}  // namespace

TEST_CASE("copy chains flatten into relation path labels") {
    Document en = load_doc("gold_en.conllu");

    SECTION("each copy hop contributes one path element") {
        Sentence got = sentence_by_id(en, "en-007");
        enhanced_to_composite(got);
        CHECK(got == reheaded(sentence_by_id(en, "en-007"),
                              {{11, {2, "conj>cc"}},
                               {12, {2, "conj>nsubj"}},
                               {14, {2, "conj>xcomp>xcomp>xcomp>obj"}}}));
    }

    SECTION("tokens with a surface edge keep their basic row") {
        Sentence got = sentence_by_id(en, "en-012");
        enhanced_to_composite(got);
        CHECK(got == reheaded(sentence_by_id(en, "en-012"),
                              {{9, {2, "conj>obj"}},
                               {11, {2, "conj>obl"}},
                               {14, {2, "conj>obj"}},
                               {16, {2, "conj>obl"}}}));
        CHECK(got.find(NodeId{1, 0})->head == 2);
        CHECK(got.find(NodeId{1, 0})->deprel == "nsubj");
    }

    SECTION("chained conjuncts flatten onto the overt predicate") {
        Document sv = load_doc("gold_sv.conllu");
        Sentence got = sentence_by_id(sv, "sv-001");
        enhanced_to_composite(got);
        CHECK(got == reheaded(sentence_by_id(sv, "sv-001"),
                              {{8, {1, "conj>nsubj:pass"}},
                               {10, {1, "conj>xcomp>obl"}},
                               {12, {1, "conj>nsubj:pass"}},
                               {14, {1, "conj>xcomp>obl"}}}));
    }

    SECTION("a sentence without copies only loses its enhanced layer") {
        Sentence got = sentence_by_id(en, "en-017");
        enhanced_to_composite(got);
        CHECK(got == stripped(sentence_by_id(en, "en-017")));
    }
}

TEST_CASE("composite conversion round trips through the composite enhancer") {
    SECTION("English fixtures") {
        Document en = load_doc("gold_en.conllu");
        Document got = en;
        enhanced_to_composite(got);
        enhance_document_composite(got);
        for (std::size_t i = 0; i < en.sentences.size(); ++i) {
            INFO(sent_id(en.sentences[i]));
            CHECK(got.sentences[i] == en.sentences[i]);
        }
    }

    SECTION("mixed fixtures keep relation labels the aligner would remap") {
        Document mixed = load_doc("gold_mixed.conllu");
        Document got = mixed;
        enhanced_to_composite(got);
        enhance_document_composite(got);
        for (std::size_t i = 0; i < mixed.sentences.size(); ++i) {
            INFO(sent_id(mixed.sentences[i]));
            CHECK(got.sentences[i] == mixed.sentences[i]);
        }
    }

    SECTION("Swedish fixtures") {
        Document sv = load_doc("gold_sv.conllu");

        Sentence got = sentence_by_id(sv, "sv-002");
        enhanced_to_composite(got);
        enhance_sentence_composite(got);
        CHECK(got == sentence_by_id(sv, "sv-002"));

        // the enhanced graph attaches every conjunct's copy chain to the
        // overt predicate, so the second gap's original attachment to the
        // first gapped conjunct is not recoverable; its basic head comes
        // back flattened while the enhanced layer matches exactly
        Sentence chained = sentence_by_id(sv, "sv-001");
        enhanced_to_composite(chained);
        enhance_sentence_composite(chained);
        Sentence want = sentence_by_id(sv, "sv-001");
        want.find(NodeId{12, 0})->head = 1;
        CHECK(chained == want);
    }
}

TEST_CASE("copy chains collapse into the promoted-remnant encoding") {
    SECTION("English fixtures") {
        Document en = load_doc("gold_en.conllu");
        Document got = en;
        enhanced_to_basic_orphan(got);
        for (std::size_t i = 0; i < en.sentences.size(); ++i) {
            INFO(sent_id(en.sentences[i]));
            CHECK(got.sentences[i] == stripped(en.sentences[i]));
        }
    }

    SECTION("mixed fixtures") {
        Document mixed = load_doc("gold_mixed.conllu");
        Document got = mixed;
        enhanced_to_basic_orphan(got);
        for (std::size_t i = 0; i < mixed.sentences.size(); ++i) {
            INFO(sent_id(mixed.sentences[i]));
            CHECK(got.sentences[i] == stripped(mixed.sentences[i]));
        }
    }

    SECTION("the promoted remnant outranks its siblings") {
        Document en = load_doc("gold_en.conllu");
        Sentence got = sentence_by_id(en, "en-016");
        enhanced_to_basic_orphan(got);
        const Token* frankfurt = got.find(NodeId{9, 0});
        CHECK(*frankfurt->head == 2);
        CHECK(frankfurt->deprel == "conj");
        CHECK(*got.find(NodeId{7, 0})->head == 9);
        CHECK(got.find(NodeId{7, 0})->deprel == "orphan");
        CHECK(*got.find(NodeId{6, 0})->head == 9);
        CHECK(got.find(NodeId{6, 0})->deprel == "cc");
    }

    SECTION("Swedish fixtures") {
        Document sv = load_doc("gold_sv.conllu");

        Sentence got = sentence_by_id(sv, "sv-002");
        enhanced_to_basic_orphan(got);
        CHECK(got == stripped(sentence_by_id(sv, "sv-002")));

        Sentence chained = sentence_by_id(sv, "sv-001");
        enhanced_to_basic_orphan(chained);
        Sentence want = stripped(sentence_by_id(sv, "sv-001"));
        want.find(NodeId{12, 0})->head = 1;
        CHECK(chained == want);
    }
}

TEST_CASE("orphan conversion round trips through the alignment enhancer") {
    // the mixed fixtures are excluded: their bare adverbials align onto
    // overt oblique slots and come back with the slot's relation, which
    // is what the evaluator is for
    SECTION("English fixtures") {
        Document en = load_doc("gold_en.conllu");
        Document got = en;
        enhanced_to_basic_orphan(got);
        enhance_document_orphan(got, en_table(), SimilarityParams{});
        for (std::size_t i = 0; i < en.sentences.size(); ++i) {
            INFO(sent_id(en.sentences[i]));
            CHECK(got.sentences[i] == en.sentences[i]);
        }
    }

    SECTION("Swedish fixtures") {
        Document sv = load_doc("gold_sv.conllu");
        Document got = sv;
        enhanced_to_basic_orphan(got);
        enhance_document_orphan(got, sv_table(), SimilarityParams{});

        CHECK(sentence_by_id(got, "sv-002") == sentence_by_id(sv, "sv-002"));

        Sentence want = sentence_by_id(sv, "sv-001");
        want.find(NodeId{12, 0})->head = 1;
        CHECK(sentence_by_id(got, "sv-001") == want);
    }
}

TEST_CASE("a gap with no orphan dependents survives only the composite route") {
    const std::string text =
        "# sent_id = inline-001\n"
        "# text = Sam ran and Kim .\n"
        "1\tSam\tSam\tPROPN\t_\t_\t2\tnsubj\t2:nsubj\t_\n"
        "2\tran\trun\tVERB\t_\t_\t0\troot\t0:root\t_\n"
        "3\tand\tand\tCCONJ\t_\t_\t4\tcc\t4.1:cc\t_\n"
        "4\tKim\tKim\tPROPN\t_\t_\t2\tconj\t4.1:nsubj\tGapType=SinglePredicate\n"
        "4.1\tran\trun\tVERB\t_\t_\t_\t_\t2:conj\tCopyOf=2\n"
        "5\t.\t.\tPUNCT\t_\t_\t2\tpunct\t2:punct\t_\n\n";
    Document doc = parse_document(text);
    const Sentence& gold = doc.sentences.front();

    SECTION("the orphan encoding has nowhere to record the gap") {
        Sentence got = gold;
        enhanced_to_basic_orphan(got);
        CHECK(got == reheaded(gold, {{3, {4, "cc"}}, {4, {2, "conj"}}}));

        enhance_sentence_orphan(got, en_table(), SimilarityParams{});
        for (const Token& t : got.tokens) CHECK_FALSE(t.is_empty_node());
        CHECK(got.find(NodeId{4, 0})->deps ==
              std::vector<Dep>{Dep{NodeId{2, 0}, "conj"}});
    }

    SECTION("the composite encoding keeps it") {
        Sentence got = gold;
        enhanced_to_composite(got);
        CHECK(got == reheaded(gold, {{3, {2, "conj>cc"}}, {4, {2, "conj>nsubj"}}}));

        enhance_sentence_composite(got);
        CHECK(got == gold);
    }
}
