#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "test_util.hpp"
#include "tispell/edit_distance.hpp"
#include "tispell/fixtures.hpp"

using namespace tispell;

TEST_CASE("fixture table is structurally valid and reduced") {
    const ScriptTable t = fixture_table();
    CHECK(t.consonants.size() == 20);
    CHECK(t.vowel_signs.size() == 4);
    CHECK(t.subjoined_map.size() == 10);
    // total reachable character inventory stays small enough for the toy
    // vocabulary: consonants + vowels + subjoined forms + tsheg
    CHECK(t.consonants.size() + t.vowel_signs.size() + t.subjoined_map.size() + 1 <= 64);
    // every homoglyph member is a fixture consonant
    for (const auto& s : t.homoglyph_sets)
        for (Codepoint c : s) CHECK(t.consonants.count(c) == 1);
}

TEST_CASE("fixture lexicon words are pairwise well separated") {
    const auto& lex = FixtureGrammar::instance().lexicon();
    REQUIRE(lex.size() == 42);
    std::set<std::string> unique(lex.begin(), lex.end());
    CHECK(unique.size() == lex.size());
    for (const auto& w : lex) {
        const auto cps = decode_utf8(w);
        CHECK(cps.size() >= 3);
        CHECK(cps.size() <= 4);
    }
    for (size_t i = 0; i < lex.size(); ++i)
        for (size_t j = i + 1; j < lex.size(); ++j)
            REQUIRE(levenshtein(decode_utf8(lex[i]), decode_utf8(lex[j])) >= 3);
}

TEST_CASE("fixture sentences stay within the toy bounds") {
    const auto& grammar = FixtureGrammar::instance();
    Rng rng(31);
    for (int i = 0; i < 500; ++i) {
        const std::string s = grammar.sentence(rng);
        const SyllableSeq seq = segment(s, grammar.table());
        REQUIRE(seq.size() >= 4);
        REQUIRE(seq.size() <= 12);
        // codepoint length bounded so sentences fit the toy encoder window
        REQUIRE(decode_utf8(s).size() + 2 <= 64);
        // every syllable is a lexicon word
        const auto& lex = grammar.lexicon();
        for (const auto& syl : seq.items)
            REQUIRE(std::find(lex.begin(), lex.end(), syl.str()) != lex.end());
    }
}

TEST_CASE("fixture corpus generation is deterministic by seed") {
    const auto& grammar = FixtureGrammar::instance();
    const auto a = grammar.corpus(100, 321);
    const auto b = grammar.corpus(100, 321);
    const auto c = grammar.corpus(100, 322);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("grammar agreement: a noun's particle is determined by its class") {
    const auto& grammar = FixtureGrammar::instance();
    // collect observed (noun -> following syllable) pairs
    Rng rng(88);
    std::map<std::string, std::set<std::string>> followers;
    for (int i = 0; i < 400; ++i) {
        const auto seq = segment(grammar.sentence(rng), grammar.table());
        for (size_t k = 0; k + 1 < seq.size(); ++k) followers[seq[k].str()].insert(seq[k + 1].str());
    }
    for (int g = 0; g < FixtureGrammar::kGenders; ++g) {
        for (int n = 0; n < FixtureGrammar::kNounsPerGender; ++n) {
            const auto it = followers.find(grammar.noun(g, n));
            if (it == followers.end()) continue;
            // a noun is followed by its gender particle or by an adjective
            for (const auto& f : it->second) {
                bool is_particle = f == grammar.particle(g);
                bool is_adjective = false;
                for (int a = 0; a < FixtureGrammar::kAdjectives; ++a)
                    is_adjective |= (f == grammar.adjective(a));
                REQUIRE((is_particle || is_adjective));
            }
        }
    }
}
