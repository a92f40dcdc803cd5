#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "test_util.hpp"
#include "tispell/baselines.hpp"
#include "tispell/corruption.hpp"
#include "tispell/fixtures.hpp"

using namespace tispell;

namespace {
const ScriptTable& ftable() { return FixtureGrammar::instance().table(); }
}  // namespace

TEST_CASE("dummy corrector is the identity") {
    DummyCorrector dummy;
    CHECK(dummy.correct("") == "");
    const auto& grammar = FixtureGrammar::instance();
    Rng rng(1);
    for (int i = 0; i < 20; ++i) {
        const std::string s = grammar.sentence(rng);
        CHECK(dummy.correct(s) == s);
    }
}

TEST_CASE("dict_build counts syllables from a one-line corpus") {
    tispell::test::TempDir tmp("dict");
    const std::string a = FixtureGrammar::instance().lexicon()[0];
    const std::string b = FixtureGrammar::instance().lexicon()[1];
    write_lines(tmp.file("corpus.txt"), {a + to_utf8(kTsheg) + b});
    const FrequencyDictionary dict = dict_build(tmp.file("corpus.txt"), 2, ftable());
    CHECK(dict.size() == 2);
    CHECK(dict.count_of(a) == 1);
    CHECK(dict.count_of(b) == 1);
    CHECK(dict.total_count() == 2);
}

TEST_CASE("variant index contains every single-char deletion of every entry") {
    FrequencyDictionary dict(1);
    const auto& lex = FixtureGrammar::instance().lexicon();
    for (size_t i = 0; i < 6; ++i) dict.add(lex[i]);
    for (size_t i = 0; i < 6; ++i) {
        const auto cps = decode_utf8(lex[i]);
        for (size_t k = 0; k < cps.size(); ++k) {
            auto v = cps;
            v.erase(v.begin() + static_cast<ptrdiff_t>(k));
            const auto it = dict.variant_index().find(to_utf8(v));
            REQUIRE(it != dict.variant_index().end());
            REQUIRE(it->second.count(lex[i]) == 1);
        }
    }
}

TEST_CASE("dictionary serialization is deterministic and round-trips") {
    const auto& grammar = FixtureGrammar::instance();
    tispell::test::TempDir tmp("dictser");
    write_lines(tmp.file("corpus.txt"), grammar.corpus(80, 5));
    const FrequencyDictionary d1 = dict_build(tmp.file("corpus.txt"), 2, ftable());
    const FrequencyDictionary d2 = dict_build(tmp.file("corpus.txt"), 2, ftable());
    CHECK(d1.serialize() == d2.serialize());

    d1.save(tmp.file("dict.tsv"));
    const FrequencyDictionary back = FrequencyDictionary::load(tmp.file("dict.tsv"));
    CHECK(back.serialize() == d1.serialize());
    CHECK(back.max_edit_distance() == 2);
}

TEST_CASE("dict_correct keeps in-vocabulary syllables and restores deletions") {
    const auto& grammar = FixtureGrammar::instance();
    tispell::test::TempDir tmp("dictfix");
    write_lines(tmp.file("corpus.txt"), grammar.corpus(300, 77));
    DictCorrector dict(dict_build(tmp.file("corpus.txt"), 1, ftable()), ftable());

    // in-vocabulary text is untouched
    Rng rng(8);
    for (int i = 0; i < 30; ++i) {
        const std::string s = grammar.sentence(rng);
        REQUIRE(dict.correct(s) == s);
    }

    // single-character deletions restore to the unique lexicon word
    size_t restored = 0, total = 0;
    for (int i = 0; i < 200; ++i) {
        const std::string clean = grammar.sentence(rng);
        const SyllableSeq seq = segment(clean, ftable());
        Rng op_rng(rng.next_u64());
        const OpResult res = char_random_delete(seq, op_rng, ftable());
        REQUIRE(res.changed);
        ++total;
        restored += dict.correct(join(res.seq)) == clean;
    }
    CHECK(restored == total);

    // a corruption beyond the edit-distance bound is left alone
    std::string far = FixtureGrammar::instance().lexicon()[0];
    far += far;  // more than two edits away from anything
    const std::string kept = dict.correct(far);
    CHECK(kept == far);
}

TEST_CASE("dict candidate ranking is count, then distance, then lexicographic") {
    FrequencyDictionary dict(2);
    // two words both within distance 1 of the query "ab": "abc" (count 5)
    // and "aab" (count 9)
    dict.add("abc", 5);
    dict.add("aab", 9);
    const auto cands = dict.candidates("ab");
    REQUIRE(cands.size() == 2);
    CHECK(cands[0].word == "aab");  // higher count wins despite equal distance
    CHECK(cands[1].word == "abc");

    FrequencyDictionary tie(2);
    tie.add("abc", 5);
    tie.add("abd", 5);
    const auto t = tie.candidates("ab");
    REQUIRE(t.size() == 2);
    CHECK(t[0].word == "abc");  // counts equal, distances equal, lexicographic
}

TEST_CASE("ngram conditional probabilities sum to one over the vocabulary") {
    const auto& grammar = FixtureGrammar::instance();
    tispell::test::TempDir tmp("ngram");
    write_lines(tmp.file("corpus.txt"), grammar.corpus(120, 9));
    const NgramModel model = ngram_train(tmp.file("corpus.txt"), 1e-3, ftable());

    const std::vector<std::pair<std::string, std::string>> contexts = {
        {NgramModel::kBos, NgramModel::kBos},
        {NgramModel::kBos, grammar.lexicon()[0]},
        {grammar.lexicon()[0], grammar.lexicon()[20]},
        {"neverseen", "alsonever"},
    };
    for (const auto& [u, v] : contexts) {
        double sum = 0.0;
        for (const auto& w : model.vocab()) sum += model.prob(u, v, w);
        REQUIRE(sum == Catch::Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("ngram bigram count in a two-syllable corpus") {
    NgramModel model(1e-3);
    model.add_sentence({"A", "B"});
    // trigram (BOS, A, B) exists; P(B | BOS, A) dominates its row
    double best = 0.0;
    std::string argmax;
    for (const auto& w : model.vocab()) {
        const double p = model.prob(NgramModel::kBos, "A", w);
        if (p > best) {
            best = p;
            argmax = w;
        }
    }
    CHECK(argmax == "B");
}

TEST_CASE("ngram model serializes deterministically and round-trips") {
    const auto& grammar = FixtureGrammar::instance();
    tispell::test::TempDir tmp("ngramser");
    write_lines(tmp.file("corpus.txt"), grammar.corpus(60, 13));
    const NgramModel m1 = ngram_train(tmp.file("corpus.txt"), 1e-3, ftable());
    const NgramModel m2 = ngram_train(tmp.file("corpus.txt"), 1e-3, ftable());
    CHECK(m1.serialize() == m2.serialize());
    m1.save(tmp.file("model.tsv"));
    const NgramModel back = NgramModel::load(tmp.file("model.tsv"));
    CHECK(back.serialize() == m1.serialize());
}

TEST_CASE("held-out perplexity is finite") {
    const auto& grammar = FixtureGrammar::instance();
    tispell::test::TempDir tmp("ppl");
    write_lines(tmp.file("corpus.txt"), grammar.corpus(200, 21));
    const NgramModel model = ngram_train(tmp.file("corpus.txt"), 1e-3, ftable());
    std::vector<std::vector<std::string>> heldout;
    for (const auto& line : grammar.corpus(50, 22)) heldout.push_back(segment(line, ftable()).strings());
    const double ppl = model.perplexity(heldout);
    CHECK(std::isfinite(ppl));
    CHECK(ppl > 1.0);
}

TEST_CASE("ngram corrector fixes a homoglyph error the dictionary keeps") {
    // Constructed corpus: "ka X mo" is frequent; X' (homoglyph of X) exists
    // in the dictionary through an unrelated context "ra X' na". Corrupting
    // "ka X mo" to "ka X' mo" leaves an in-dictionary syllable, so the
    // dictionary corrector keeps the error while trigram context repairs it.
    const std::string tsheg = to_utf8(kTsheg);
    // fixture homoglyph pair ca (0F45) / tsa (0F59) embedded in 3-char words
    const std::string x = to_utf8({0x0F45, 0x0F72, 0x0F40});   // ca-i-ka
    const std::string xp = to_utf8({0x0F59, 0x0F72, 0x0F40});  // tsa-i-ka
    const std::string ka = to_utf8({0x0F40, 0x0F74, 0x0F41});
    const std::string mo = to_utf8({0x0F58, 0x0F7C, 0x0F42});
    const std::string ra = to_utf8({0x0F62, 0x0F72, 0x0F44});
    const std::string na = to_utf8({0x0F53, 0x0F74, 0x0F50});

    std::vector<std::string> corpus;
    for (int i = 0; i < 50; ++i) corpus.push_back(ka + tsheg + x + tsheg + mo);
    for (int i = 0; i < 5; ++i) corpus.push_back(ra + tsheg + xp + tsheg + na);

    tispell::test::TempDir tmp("homo");
    write_lines(tmp.file("corpus.txt"), corpus);
    const ScriptTable table = ScriptTable::builtin();
    FrequencyDictionary dict = dict_build(tmp.file("corpus.txt"), 2, table);
    NgramModel model = ngram_train(tmp.file("corpus.txt"), 1e-3, table);

    const std::string corrupted = ka + tsheg + xp + tsheg + mo;
    DictCorrector dc(dict, table);
    CHECK(dc.correct(corrupted) == corrupted);  // in-dictionary error kept

    NgramCorrector nc(std::move(model), std::move(dict), table);
    CHECK(nc.correct(corrupted) == ka + tsheg + x + tsheg + mo);

    // chosen candidate maximizes the sentence score among the candidate set
    const NgramModel& m = nc.model();
    const double fixed_ll = m.sentence_log_likelihood({ka, x, mo});
    const double kept_ll = m.sentence_log_likelihood({ka, xp, mo});
    CHECK(fixed_ll > kept_ll);
}

TEST_CASE("neither baseline changes the syllable count") {
    const auto& grammar = FixtureGrammar::instance();
    tispell::test::TempDir tmp("counts");
    write_lines(tmp.file("corpus.txt"), grammar.corpus(200, 33));
    DictCorrector dict(dict_build(tmp.file("corpus.txt"), 2, ftable()), ftable());
    NgramCorrector ngram(ngram_train(tmp.file("corpus.txt"), 1e-3, ftable()),
                         dict_build(tmp.file("corpus.txt"), 2, ftable()), ftable());

    Rng rng(44);
    for (int i = 0; i < 100; ++i) {
        const std::string clean = grammar.sentence(rng);
        const SyllableSeq seq = segment(clean, ftable());
        Rng op_rng(rng.next_u64());
        // apply any corruption, including syllable-level ones
        const auto id = static_cast<CorruptionId>(op_rng.below(kCorruptionCount));
        const OpResult res = apply_corruption(id, seq, op_rng, ftable());
        const std::string corrupted = join(res.seq);
        const size_t n = segment(corrupted, ftable()).size();
        REQUIRE(segment(dict.correct(corrupted), ftable()).size() == n);
        REQUIRE(segment(ngram.correct(corrupted), ftable()).size() == n);
    }
    CHECK_FALSE(dict.corrects_syllable_level());
    CHECK_FALSE(ngram.corrects_syllable_level());
}

TEST_CASE("baseline file loaders reject junk") {
    tispell::test::TempDir tmp("junk");
    write_lines(tmp.file("bad.tsv"), {"not a dict"});
    CHECK_THROWS(FrequencyDictionary::load(tmp.file("bad.tsv")));
    CHECK_THROWS(NgramModel::load(tmp.file("bad.tsv")));
    CHECK_THROWS(FrequencyDictionary::load(tmp.file("missing.tsv")));
    CHECK_THROWS(dict_build(tmp.file("missing.txt"), 2, ftable()));
    CHECK_THROWS(ngram_train(tmp.file("missing.txt"), 1e-3, ftable()));
    CHECK_THROWS(FrequencyDictionary(3));
    CHECK_THROWS(NgramModel(0.0));
}
