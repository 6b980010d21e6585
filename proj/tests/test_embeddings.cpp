#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "udgap/embeddings.hpp"

using namespace udgap;

namespace {

EmbeddingTable table_from(const std::string& text) {
    std::istringstream in(text);
    return load_embeddings_text(in);
}

ArgumentSpan span(std::vector<double> vec, std::string upos) {
    ArgumentSpan a;
    a.vec = std::move(vec);
    a.head_upos = std::move(upos);
    return a;
}

}  // namespace

TEST_CASE("load a small glove-style table") {
    EmbeddingTable t = table_from(
        "cat 1 0 0 0\n"
        "dog 0 1 0 0\n"
        "fish 0 0 1 0\n");
    CHECK(t.dim() == 4);
    CHECK(t.size() == 3);
    REQUIRE(t.lookup("dog"));
    CHECK((*t.lookup("dog"))[1] == 1.0);
    CHECK(t.lookup("bird") == nullptr);
}

TEST_CASE("word2vec header is auto-detected and skipped") {
    EmbeddingTable t = table_from(
        "3 4\n"
        "cat 1 0 0 0\n"
        "dog 0 1 0 0\n"
        "fish 0 0 1 0\n");
    CHECK(t.dim() == 4);
    CHECK(t.size() == 3);

    SECTION("a two-field data line is not mistaken for a header") {
        EmbeddingTable u = table_from("cat 1.5\ndog 2.5\n");
        CHECK(u.dim() == 1);
        CHECK(u.size() == 2);
    }
}

TEST_CASE("inconsistent dimensionality names the line") {
    try {
        table_from("cat 1 0\ndog 0 1\nfish 1\n");
        FAIL("expected format_error");
    } catch (const format_error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("duplicate words keep the first entry") {
    EmbeddingTable t = table_from("cat 1 0\ncat 0 1\n");
    CHECK(t.size() == 1);
    CHECK((*t.lookup("cat"))[0] == 1.0);
}

TEST_CASE("fifty-entry excerpt loads and misses stay misses") {
    EmbeddingTable t = load_embeddings(std::string(UDGAP_FIXTURE_DIR) + "/glove_excerpt_50.txt");
    CHECK(t.size() == 50);
    CHECK(t.dim() == 10);
    CHECK(t.lookup("the") != nullptr);
    CHECK(t.lookup("absентword") == nullptr);
    CHECK(t.lookup("zygomorphic") == nullptr);
}

TEST_CASE("gzip input by suffix") {
    EmbeddingTable plain =
        load_embeddings(std::string(UDGAP_FIXTURE_DIR) + "/glove_excerpt_50.txt");
    EmbeddingTable gz =
        load_embeddings(std::string(UDGAP_FIXTURE_DIR) + "/glove_excerpt_50.txt.gz");
    CHECK(gz.size() == plain.size());
    CHECK(gz.dim() == plain.dim());
    REQUIRE(gz.lookup("when"));
    CHECK(*gz.lookup("when") == *plain.lookup("when"));
}

TEST_CASE("phrase vectors") {
    EmbeddingTable t = table_from("cat 1 0 0 0\ndog 0 1 0 0\n");

    SECTION("single token is its own vector") {
        CHECK(phrase_vector({"cat"}, t) == std::vector<double>{1, 0, 0, 0});
    }

    SECTION("two tokens average") {
        CHECK(phrase_vector({"cat", "dog"}, t) == std::vector<double>{0.5, 0.5, 0, 0});
    }

    SECTION("unknown tokens are skipped") {
        CHECK(phrase_vector({"cat", "xyzzy"}, t) == std::vector<double>{1, 0, 0, 0});
    }

    SECTION("all tokens unknown gives the zero vector") {
        CHECK(phrase_vector({"xyzzy", "plugh"}, t) == std::vector<double>{0, 0, 0, 0});
    }

    SECTION("lowercase fallback") {
        CHECK(phrase_vector({"Cat"}, t, true) == std::vector<double>{1, 0, 0, 0});
        CHECK(phrase_vector({"Cat"}, t, false) == std::vector<double>{0, 0, 0, 0});
    }
}

TEST_CASE("similarity identities") {
    SimilarityParams params;

    SECTION("identical spans score zero") {
        ArgumentSpan a = span({0.3, -1.2, 4.0}, "NOUN");
        CHECK(sim(a, a, params) == 0.0);
    }

    SECTION("equal vectors with different tags score the penalty") {
        ArgumentSpan g = span({0.3, -1.2, 4.0}, "NOUN");
        ArgumentSpan f = span({0.3, -1.2, 4.0}, "VERB");
        CHECK(sim(g, f, params) == params.pos_mismatch_penalty);
    }

    SECTION("hand-computed distance") {
        ArgumentSpan g = span({1, 0, 0, 0}, "NOUN");
        ArgumentSpan f = span({0, 0, 0, 0}, "NOUN");
        CHECK(sim(g, f, params) == -1.0);
    }

    SECTION("dimension mismatch is a contract violation") {
        ArgumentSpan g = span({1, 0}, "NOUN");
        ArgumentSpan f = span({1, 0, 0}, "NOUN");
        CHECK_THROWS_AS(sim(g, f, params), std::invalid_argument);
    }

    SECTION("literal indicator reading penalizes matching tags instead") {
        SimilarityParams literal = params;
        literal.literal_indicator = true;
        ArgumentSpan g = span({1, 0}, "NOUN");
        ArgumentSpan same = span({1, 0}, "NOUN");
        ArgumentSpan diff = span({1, 0}, "VERB");
        CHECK(sim(g, same, literal) == params.pos_mismatch_penalty);
        CHECK(sim(g, diff, literal) == 0.0);
    }

    SECTION("pos-only scoring ignores the vectors") {
        SimilarityParams pos_only = params;
        pos_only.pos_only = true;
        ArgumentSpan g = span({1, 0}, "NOUN");
        ArgumentSpan far = span({-250, 40, 13}, "NOUN");  // dims may even differ
        CHECK(sim(g, far, pos_only) == 0.0);
        far.head_upos = "VERB";
        CHECK(sim(g, far, pos_only) == params.pos_mismatch_penalty);
    }
}

TEST_CASE("similarity properties") {
    SimilarityParams params;
    std::mt19937 rng(4711);
    std::uniform_real_distribution<double> val(-3.0, 3.0);
    const char* tags[] = {"NOUN", "VERB", "PROPN"};

    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> u(6), w(6);
        for (auto& x : u) x = val(rng);
        for (auto& x : w) x = val(rng);
        ArgumentSpan g = span(u, tags[trial % 3]);
        ArgumentSpan f = span(w, tags[(trial / 3) % 3]);

        // symmetry
        CHECK(sim(g, f, params) == sim(f, g, params));
        // never positive while the penalty is non-positive
        CHECK(sim(g, f, params) <= 0.0);
        // translation invariance
        ArgumentSpan g2 = g, f2 = f;
        for (std::size_t i = 0; i < 6; ++i) {
            g2.vec[i] += 1.25;
            f2.vec[i] += 1.25;
        }
        CHECK(sim(g2, f2, params) == Catch::Approx(sim(g, f, params)).margin(1e-12));
        // flipping one tag moves the score by exactly the penalty
        ArgumentSpan flipped = f;
        flipped.head_upos = (f.head_upos == g.head_upos) ? "X" : g.head_upos;
        CHECK(std::abs(sim(g, flipped, params) - sim(g, f, params)) ==
              Catch::Approx(std::abs(params.pos_mismatch_penalty)).margin(1e-12));
    }
}
