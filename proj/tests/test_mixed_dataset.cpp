#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "test_util.hpp"
#include "tispell/dataset.hpp"
#include "tispell/fixtures.hpp"

using namespace tispell;

namespace {
const ScriptTable& table() {
    static const ScriptTable t = ScriptTable::builtin();
    return t;
}
}  // namespace

TEST_CASE("mixed corruption applies exactly three distinct ops") {
    const auto& grammar = FixtureGrammar::instance();
    Rng rng(12);
    for (int i = 0; i < 1000; ++i) {
        const SyllableSeq src = segment(grammar.sentence(rng), grammar.table());
        Rng op_rng(rng.next_u64());
        const MixedResult r = mixed_corrupt(src, op_rng, grammar.table());
        REQUIRE(r.ops.size() == 3);
        const std::set<CorruptionId> distinct(r.ops.begin(), r.ops.end());
        REQUIRE(distinct.size() == 3);
        // semi-mask shape invariant
        REQUIRE(r.semi_mask.size() == src.size());
        for (size_t k = 0; k < src.size(); ++k) {
            const bool is_mask = r.semi_mask[k].str() == "[MASK]";
            if (!is_mask) REQUIRE(r.semi_mask[k] == src[k]);
            if (is_mask)
                REQUIRE(std::find(r.ops.begin(), r.ops.end(), CorruptionId::SyllDelete) != r.ops.end());
        }
    }
}

TEST_CASE("mixed corruption noops below two syllables") {
    Rng r(3);
    const SyllableSeq one = make_seq({"A"});
    const MixedResult res = mixed_corrupt(one, r, table());
    CHECK_FALSE(res.changed);
    CHECK(res.ops.empty());
    CHECK(res.seq == one);
    CHECK(res.semi_mask == one);
}

TEST_CASE("mixed corruption masks the source position of a moved syllable") {
    // force the draw order: SyllTranspose (7) then SyllDelete (6) then CharInsert (1),
    // with the transposition swapping 0 and 1 and the deletion hitting index 0.
    const SyllableSeq src = make_seq({"ka", "kha", "ga"});
    const uint64_t seed = tispell::test::find_seed([&](uint64_t s) {
        Rng r(s);
        if (r.below(9) != 7) return false;
        const auto [a, b] = r.two_distinct(3);
        if (!((a == 0 && b == 1) || (a == 1 && b == 0))) return false;
        if (r.below(9) != 6) return false;
        return r.index(3) == 0;
    });
    Rng r(seed);
    const MixedResult res = mixed_corrupt(src, r, table());
    REQUIRE(res.ops.size() == 3);
    CHECK(res.ops[0] == CorruptionId::SyllTranspose);
    CHECK(res.ops[1] == CorruptionId::SyllDelete);
    // after the swap, position 0 holds source syllable 1 ("kha"); deleting it
    // must mask source position 1
    REQUIRE(res.semi_mask.size() == 3);
    CHECK(res.semi_mask[0].str() == "ka");
    CHECK(res.semi_mask[1].str() == "[MASK]");
    CHECK(res.semi_mask[2].str() == "ga");
}

TEST_CASE("mixed corruption does not mask when a merged syllable is deleted") {
    // SyllMerge (8) at idx 0, then SyllDelete (6) of the merged unit at idx 0,
    // then any char-level op.
    const SyllableSeq src = make_seq({"ka", "kha", "ga"});
    const uint64_t seed = tispell::test::find_seed([&](uint64_t s) {
        Rng r(s);
        if (r.below(9) != 8) return false;
        if (r.index(2) != 0) return false;
        if (r.below(9) != 6) return false;
        return r.index(2) == 0;
    });
    Rng r(seed);
    const MixedResult res = mixed_corrupt(src, r, table());
    REQUIRE(res.ops.size() == 3);
    CHECK(res.ops[0] == CorruptionId::SyllMerge);
    CHECK(res.ops[1] == CorruptionId::SyllDelete);
    // no single source position corresponds to the deleted merged syllable
    for (size_t k = 0; k < 3; ++k) CHECK(res.semi_mask[k].str() != "[MASK]");
}

TEST_CASE("synthesize_record honors clean mode") {
    SynthesisConfig cfg;
    cfg.mode = SynthesisMode::parse("clean");
    const std::string text = join(make_seq({"ཀ", "ཁ"}));
    const CorruptionRecord rec = synthesize_record(text, cfg, 1234, table(), "clean-000000");
    CHECK(rec.corrupted == text);
    CHECK(rec.semi_mask == text);
    CHECK(rec.ops.empty());
}

TEST_CASE("synthesize_dataset is deterministic and skips malformed lines") {
    const auto& grammar = FixtureGrammar::instance();
    const auto corpus_lines = grammar.corpus(50, 99);
    std::string corpus;
    for (const auto& l : corpus_lines) corpus += l + "\n";
    corpus += "\n";             // empty: skipped
    corpus += "hello world\n";  // non-Tibetan: skipped

    SynthesisConfig cfg;
    cfg.mode = SynthesisMode::parse("mixed");

    const auto run = [&] {
        std::istringstream in(corpus);
        std::string out;
        SynthesisStats stats;
        synthesize_dataset(
            in, cfg, 42, grammar.table(),
            [&](const CorruptionRecord& rec) { out += record_to_jsonl(rec) + "\n"; }, &stats);
        return std::pair{out, stats};
    };
    const auto [out1, stats1] = run();
    const auto [out2, stats2] = run();
    CHECK(out1 == out2);
    CHECK(stats1.records == 50);
    CHECK(stats1.skipped_empty == 1);
    CHECK(stats1.skipped_non_tibetan == 1);
    CHECK(stats1.lines_read == 52);

    // every record carries three distinct ops and the semi-mask invariants
    std::istringstream back(out1);
    const auto records = read_records(back);
    REQUIRE(records.size() == 50);
    for (const auto& rec : records) {
        REQUIRE(rec.ops.size() == 3);
        const std::set<CorruptionId> distinct(rec.ops.begin(), rec.ops.end());
        REQUIRE(distinct.size() == 3);
        const SyllableSeq source = segment(rec.source, grammar.table());
        const SyllableSeq mask = segment(rec.semi_mask, grammar.table());
        REQUIRE(mask.size() == source.size());
        for (size_t k = 0; k < mask.size(); ++k)
            REQUIRE((mask[k] == source[k] || mask[k].str() == "[MASK]"));
    }
}

TEST_CASE("synthesize_dataset rejects the reserved token") {
    SynthesisConfig cfg;
    cfg.mode = SynthesisMode::parse("clean");
    std::istringstream in("ka[MASK]kha\n");
    CHECK_THROWS_AS(synthesize_dataset(in, cfg, 1, table(), [](const CorruptionRecord&) {}),
                    ReservedTokenError);
}

TEST_CASE("synthesize_dataset skips over-long lines with a count") {
    const auto& grammar = FixtureGrammar::instance();
    SynthesisConfig cfg;
    cfg.mode = SynthesisMode::parse("clean");
    cfg.max_syllables = 3;
    Rng rng(5);
    std::istringstream in(grammar.sentence(rng) + "\n");  // grammar sentences have >= 4 syllables
    SynthesisStats stats;
    size_t n = 0;
    synthesize_dataset(in, cfg, 1, grammar.table(), [&](const CorruptionRecord&) { ++n; }, &stats);
    CHECK(n == 0);
    CHECK(stats.skipped_too_long == 1);
}

TEST_CASE("corruption_rate controls the clean share deterministically") {
    const auto& grammar = FixtureGrammar::instance();
    const auto corpus_lines = grammar.corpus(400, 7);
    std::string corpus;
    for (const auto& l : corpus_lines) corpus += l + "\n";
    SynthesisConfig cfg;
    cfg.mode = SynthesisMode::parse("mixed");
    cfg.corruption_rate = 0.5;
    std::istringstream in(corpus);
    size_t clean = 0, corrupted = 0;
    synthesize_dataset(in, cfg, 11, grammar.table(), [&](const CorruptionRecord& rec) {
        rec.ops.empty() ? ++clean : ++corrupted;
    });
    CHECK(clean + corrupted == 400);
    CHECK(clean > 120);
    CHECK(corrupted > 120);
}

TEST_CASE("record json has the exact field order and round-trips") {
    CorruptionRecord rec;
    rec.id = "mixed-000007";
    rec.source = "ka";
    rec.corrupted = "kha";
    rec.semi_mask = "ka";
    rec.ops = {CorruptionId::CharInsert, CorruptionId::SyllDelete, CorruptionId::CaseSubst};
    rec.seed = UINT64_C(18446744073709551615);  // 64-bit values survive
    const std::string line = record_to_jsonl(rec);
    CHECK(line ==
          R"({"id":"mixed-000007","source":"ka","corrupted":"kha","semi_mask":"ka",)"
          R"("ops":["CharInsert","SyllDelete","CaseSubst"],"seed":18446744073709551615})");
    const CorruptionRecord back = record_from_json(nlohmann::json::parse(line));
    CHECK(back.id == rec.id);
    CHECK(back.source == rec.source);
    CHECK(back.corrupted == rec.corrupted);
    CHECK(back.semi_mask == rec.semi_mask);
    CHECK(back.ops == rec.ops);
    CHECK(back.seed == rec.seed);
}
