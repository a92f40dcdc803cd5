#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <optional>

#include "test_util.hpp"
#include "tispell/dataset.hpp"
#include "tispell/fixtures.hpp"
#include "tispell/metrics.hpp"

using namespace tispell;

namespace {

const ScriptTable& table() {
    static const ScriptTable t = ScriptTable::builtin();
    return t;
}

// Independent quadratic DP, cost only. Deliberately written in the
// conventional prefix orientation, unlike the implementation under test.
size_t dp_cost_oracle(const SyllableSeq& a, const SyllableSeq& b) {
    const size_t n = a.size(), m = b.size();
    std::vector<std::vector<size_t>> d(n + 1, std::vector<size_t>(m + 1));
    for (size_t i = 0; i <= n; ++i) d[i][0] = i;
    for (size_t j = 0; j <= m; ++j) d[0][j] = j;
    for (size_t i = 1; i <= n; ++i)
        for (size_t j = 1; j <= m; ++j)
            d[i][j] = std::min({d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u),
                                d[i - 1][j] + 1, d[i][j - 1] + 1});
    return d[n][m];
}

SyllableSeq random_seq(Rng& rng, size_t max_len, size_t alphabet) {
    SyllableSeq seq;
    const size_t n = rng.index(max_len + 1);
    for (size_t i = 0; i < n; ++i) {
        std::string s(1, static_cast<char>('a' + rng.index(alphabet)));
        seq.items.emplace_back(s);
    }
    return seq;
}

}  // namespace

TEST_CASE("align on equal sequences is all matches") {
    const SyllableSeq s = make_seq({"A", "B"});
    const Alignment a = align(s, s);
    CHECK(a.cost == 0);
    REQUIRE(a.ops.size() == 2);
    for (const auto& op : a.ops) CHECK(op.kind == AlignKind::Match);
}

TEST_CASE("align reports the unique minimal deletion") {
    const Alignment a = align(make_seq({"A", "B", "C"}), make_seq({"A", "C"}));
    CHECK(a.cost == 1);
    REQUIRE(a.ops.size() == 3);
    CHECK(a.ops[0].kind == AlignKind::Match);
    CHECK(a.ops[1].kind == AlignKind::Delete);
    CHECK(a.ops[1].ref_index == 1);
    CHECK(a.ops[2].kind == AlignKind::Match);
}

TEST_CASE("align indices are monotone and ops are consistent") {
    Rng rng(321);
    for (int i = 0; i < 500; ++i) {
        const SyllableSeq ref = random_seq(rng, 8, 3);
        const SyllableSeq hyp = random_seq(rng, 8, 3);
        const Alignment a = align(ref, hyp);
        size_t ri = 0, hi = 0, cost = 0;
        for (const auto& op : a.ops) {
            switch (op.kind) {
                case AlignKind::Match:
                case AlignKind::Substitute:
                    REQUIRE(op.ref_index == ri);
                    REQUIRE(op.hyp_index == hi);
                    if (op.kind == AlignKind::Match) REQUIRE(ref[ri] == hyp[hi]);
                    else {
                        REQUIRE(ref[ri] != hyp[hi]);
                        ++cost;
                    }
                    ++ri, ++hi;
                    break;
                case AlignKind::Delete:
                    REQUIRE(op.ref_index == ri);
                    ++ri, ++cost;
                    break;
                case AlignKind::Insert:
                    REQUIRE(op.hyp_index == hi);
                    ++hi, ++cost;
                    break;
            }
        }
        REQUIRE(ri == ref.size());
        REQUIRE(hi == hyp.size());
        REQUIRE(cost == a.cost);
    }
}

TEST_CASE("align cost equals the independent DP oracle") {
    Rng rng(1234);
    for (int i = 0; i < 1000; ++i) {
        const SyllableSeq ref = random_seq(rng, 8, 3);
        const SyllableSeq hyp = random_seq(rng, 8, 3);
        REQUIRE(align(ref, hyp).cost == dp_cost_oracle(ref, hyp));
    }
}

TEST_CASE("tie-break prefers match, then substitute, then delete") {
    // ref=[A], hyp=[B]: substitute beats delete+insert on cost; and among
    // equal-cost traces of ref=[A,A] hyp=[A], the leading match comes first.
    const Alignment sub = align(make_seq({"A"}), make_seq({"B"}));
    REQUIRE(sub.ops.size() == 1);
    CHECK(sub.ops[0].kind == AlignKind::Substitute);

    const Alignment tie = align(make_seq({"A", "A"}), make_seq({"A"}));
    REQUIRE(tie.ops.size() == 2);
    CHECK(tie.ops[0].kind == AlignKind::Match);
    CHECK(tie.ops[1].kind == AlignKind::Delete);

    // delete is preferred over insert when both continue a minimal path
    const Alignment di = align(make_seq({"A"}), make_seq({"B", "A"}));
    REQUIRE(di.ops.size() == 2);
    CHECK(di.ops[0].kind == AlignKind::Insert);  // forced: delete would cost 2
    const Alignment d2 = align(make_seq({"A", "B"}), make_seq({"B"}));
    CHECK(d2.ops[0].kind == AlignKind::Delete);
}

TEST_CASE("prf_classification is exactly 1.0 on identity") {
    const auto& grammar = FixtureGrammar::instance();
    Rng rng(9);
    std::vector<SyllableSeq> refs;
    for (int i = 0; i < 20; ++i) refs.push_back(segment(grammar.sentence(rng), grammar.table()));
    const MetricRow row = prf_classification(refs, refs);
    CHECK(row.precision == 1.0);
    CHECK(row.recall == 1.0);
    CHECK(row.f1 == 1.0);
}

TEST_CASE("prf_classification matches a brute-force per-class computation") {
    // hand-built confusion on a tiny vocabulary
    Rng rng(42);
    std::vector<SyllableSeq> refs, hyps;
    for (int i = 0; i < 20; ++i) {
        refs.push_back(random_seq(rng, 8, 3));
        hyps.push_back(random_seq(rng, 8, 3));
    }
    const MetricRow row = prf_classification(refs, hyps);

    // oracle: explicit per-class tallies over alignment pairs
    std::map<std::optional<std::string>, std::array<double, 3>> stats;  // tp, fp, fn
    std::map<std::optional<std::string>, double> support;
    for (size_t i = 0; i < refs.size(); ++i) {
        const Alignment a = align(refs[i], hyps[i]);
        for (const auto& op : a.ops) {
            std::optional<std::string> r, h;
            if (op.ref_index != AlignOp::npos) r = refs[i][op.ref_index].str();
            if (op.hyp_index != AlignOp::npos) h = hyps[i][op.hyp_index].str();
            support[r] += 1;
            if (r == h) stats[r][0] += 1;
            else {
                stats[h][1] += 1;
                stats[r][2] += 1;
            }
        }
    }
    double wp = 0, wr = 0, wf = 0, total = 0;
    for (const auto& [cls, sup] : support) {
        const auto& s = stats[cls];
        const double p = s[0] + s[1] > 0 ? s[0] / (s[0] + s[1]) : 0.0;
        const double r = s[0] + s[2] > 0 ? s[0] / (s[0] + s[2]) : 0.0;
        const double f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
        wp += sup * p;
        wr += sup * r;
        wf += sup * f;
        total += sup;
    }
    CHECK(row.precision == Catch::Approx(wp / total).epsilon(1e-12));
    CHECK(row.recall == Catch::Approx(wr / total).epsilon(1e-12));
    CHECK(row.f1 == Catch::Approx(wf / total).epsilon(1e-12));
}

TEST_CASE("prf_correction trivial cases") {
    const SyllableSeq clean = make_seq({"A", "B", "C"});
    // nothing needed, nothing changed
    MetricRow row = prf_correction({clean}, {clean}, {clean});
    CHECK(row.precision == 1.0);
    CHECK(row.recall == 1.0);
    CHECK(row.f1 == 1.0);

    // one needed fix, correctly applied
    row = prf_correction({make_seq({"A", "X", "C"})}, {clean}, {clean});
    CHECK(row.precision == 1.0);
    CHECK(row.recall == 1.0);
    CHECK(row.f1 == 1.0);

    // do-nothing system on a corrupted sentence
    row = prf_correction({make_seq({"A", "X", "C"})}, {clean}, {make_seq({"A", "X", "C"})});
    CHECK(row.precision == 0.0);
    CHECK(row.recall == 0.0);
    CHECK(row.f1 == 0.0);
}

TEST_CASE("prf_correction equals the set-arithmetic oracle on random triples") {
    Rng rng(555);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<SyllableSeq> srcs, refs, hyps;
        const size_t sentences = 1 + rng.index(4);
        for (size_t s = 0; s < sentences; ++s) {
            refs.push_back(random_seq(rng, 6, 3));
            srcs.push_back(random_seq(rng, 6, 3));
            hyps.push_back(random_seq(rng, 6, 3));
        }
        const MetricRow row = prf_correction(srcs, refs, hyps);

        // oracle: label sets per reference position via alignment
        size_t tp = 0, fp = 0, fn = 0, needed = 0, changed = 0;
        for (size_t s = 0; s < refs.size(); ++s) {
            const auto at_ref = [&](const SyllableSeq& other) {
                std::vector<std::optional<std::string>> at(refs[s].size());
                for (const auto& op : align(refs[s], other).ops)
                    if (op.ref_index != AlignOp::npos && op.hyp_index != AlignOp::npos)
                        at[op.ref_index] = other[op.hyp_index].str();
                return at;
            };
            const auto src_at = at_ref(srcs[s]);
            const auto hyp_at = at_ref(hyps[s]);
            for (size_t i = 0; i < refs[s].size(); ++i) {
                const std::optional<std::string> r = refs[s][i].str();
                const bool need = src_at[i] != r;
                const bool chg = hyp_at[i] != src_at[i];
                needed += need;
                changed += chg;
                tp += chg && hyp_at[i] == r;
                fp += chg && hyp_at[i] != r;
                fn += need && hyp_at[i] != r;
            }
        }
        double p, r, f;
        if (changed == 0) p = needed == 0 ? 1.0 : 0.0;
        else p = double(tp) / double(tp + fp);
        r = needed == 0 ? 1.0 : double(tp) / double(tp + fn);
        f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
        REQUIRE(row.precision == p);
        REQUIRE(row.recall == r);
        REQUIRE(row.f1 == f);
    }
}

TEST_CASE("metrics are permutation invariant over sentence order") {
    Rng rng(777);
    std::vector<SyllableSeq> srcs, refs, hyps;
    for (int i = 0; i < 12; ++i) {
        refs.push_back(random_seq(rng, 6, 3));
        srcs.push_back(random_seq(rng, 6, 3));
        hyps.push_back(random_seq(rng, 6, 3));
    }
    const MetricRow c1 = prf_classification(refs, hyps);
    const MetricRow k1 = prf_correction(srcs, refs, hyps);
    // reverse all three in lockstep
    std::reverse(refs.begin(), refs.end());
    std::reverse(srcs.begin(), srcs.end());
    std::reverse(hyps.begin(), hyps.end());
    const MetricRow c2 = prf_classification(refs, hyps);
    const MetricRow k2 = prf_correction(srcs, refs, hyps);
    CHECK(c1.f1 == c2.f1);
    CHECK(c1.precision == c2.precision);
    CHECK(c1.recall == c2.recall);
    CHECK(k1.f1 == k2.f1);
}

TEST_CASE("prf length mismatches are errors") {
    CHECK_THROWS(prf_classification({make_seq({"A"})}, {}));
    CHECK_THROWS(prf_correction({make_seq({"A"})}, {make_seq({"A"})}, {}));
}

TEST_CASE("evaluate_corpus buckets records and aggregates by support") {
    const auto& grammar = FixtureGrammar::instance();
    const auto lines = grammar.corpus(60, 17);

    std::vector<CorruptionRecord> records;
    size_t idx = 0;
    for (const auto& line : lines) {
        SynthesisConfig cfg;
        const char* mode = idx % 3 == 0 ? "clean" : (idx % 3 == 1 ? "SyllDelete" : "mixed");
        cfg.mode = SynthesisMode::parse(mode);
        records.push_back(
            synthesize_record(line, cfg, 1000 + idx, grammar.table(), std::to_string(idx)));
        ++idx;
    }
    DummyCorrector dummy;
    const EvalReport report = evaluate_corpus(records, dummy, grammar.table());

    const MetricRow* clean = report.find("clean", MetricMode::Classification);
    REQUIRE(clean != nullptr);
    CHECK(clean->precision == 1.0);
    CHECK(clean->recall == 1.0);
    CHECK(clean->f1 == 1.0);
    CHECK(clean->support == 20);

    const MetricRow* del = report.find("SyllDelete", MetricMode::Classification);
    REQUIRE(del != nullptr);
    CHECK(del->f1 < 1.0);
    CHECK_FALSE(del->correctable);  // dummy cannot fix syllable-level errors

    // absent buckets are not reported
    CHECK(report.find("CharInsert", MetricMode::Classification) == nullptr);

    // the overall row recomputes from the emitted bucket rows
    double wf = 0;
    size_t support = 0;
    for (const std::string& b : {"clean", "SyllDelete", "mixed"}) {
        const MetricRow* row = report.find(b, MetricMode::Classification);
        REQUIRE(row != nullptr);
        wf += row->f1 * static_cast<double>(row->support);
        support += row->support;
    }
    const MetricRow* overall = report.find("overall", MetricMode::Classification);
    REQUIRE(overall != nullptr);
    CHECK(overall->support == support);
    CHECK(overall->f1 == Catch::Approx(wf / double(support)).epsilon(1e-12));

    // CSV has the pinned header and one line per row
    const std::string csv = report.to_csv();
    CHECK(csv.rfind("bucket,mode,precision,recall,f1,support\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == report.rows.size() + 1);
}
