#pragma once

// Token-level evaluation. Two metric definitions are reported side by side
// because published results rarely state the exact averaging scheme:
//
//  - classification: every aligned syllable position is a class prediction;
//    insertions/deletions count against a reserved null class; per-class
//    one-vs-rest P/R/F1 are averaged weighted by class support in the
//    references. An identity system scores exactly 1.0 on clean text.
//  - correction: over reference positions, needed = {i : src_i != ref_i},
//    changed = {i : hyp_i != src_i}, TP = changed and correct; measures fix
//    quality directly.
//
// Records group into eleven buckets (clean, six character-level, three
// syllable-level, mixed); level totals are support-weighted means of bucket
// metrics.

#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tispell/alignment.hpp"
#include "tispell/corrector.hpp"
#include "tispell/corruption.hpp"
#include "tispell/script_table.hpp"
#include "tispell/syllable.hpp"

namespace tispell {

enum class MetricMode { Classification, Correction };

inline const char* metric_mode_name(MetricMode m) {
    return m == MetricMode::Classification ? "classification" : "correction";
}

struct MetricRow {
    std::string bucket;
    MetricMode mode = MetricMode::Classification;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    size_t support = 0;       // records contributing to the row
    bool correctable = true;  // false marks Table-style "-" cells
};

struct EvalReport {
    std::vector<MetricRow> rows;

    const MetricRow* find(const std::string& bucket, MetricMode mode) const {
        for (const auto& r : rows)
            if (r.bucket == bucket && r.mode == mode) return &r;
        return nullptr;
    }

    std::string to_csv() const {
        std::string out = "bucket,mode,precision,recall,f1,support\n";
        char buf[160];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof buf, "%s,%s,%.6f,%.6f,%.6f,%zu\n", r.bucket.c_str(),
                          metric_mode_name(r.mode), r.precision, r.recall, r.f1, r.support);
            out += buf;
        }
        return out;
    }
};

inline double f1_of(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

// --- classification mode ----------------------------------------------------

// A label is a syllable string, or nullopt for the reserved null class used
// to score insertions and deletions.
using TokenLabel = std::optional<std::string>;

struct ClassificationTally {
    struct PerClass {
        size_t tp = 0, fp = 0, fn = 0, support = 0;
    };
    std::map<TokenLabel, PerClass> classes;

    void add_pair(const TokenLabel& ref, const TokenLabel& hyp) {
        classes[ref].support += 1;
        if (ref == hyp) {
            classes[ref].tp += 1;
        } else {
            classes[ref].fn += 1;
            classes[hyp].fp += 1;
        }
    }

    void add_sentence(const SyllableSeq& ref, const SyllableSeq& hyp) {
        const Alignment a = align(ref, hyp);
        for (const AlignOp& op : a.ops) {
            TokenLabel r, h;
            if (op.ref_index != AlignOp::npos) r = ref[op.ref_index].str();
            if (op.hyp_index != AlignOp::npos) h = hyp[op.hyp_index].str();
            add_pair(r, h);
        }
    }

    void merge(const ClassificationTally& o) {
        for (const auto& [label, c] : o.classes) {
            auto& mine = classes[label];
            mine.tp += c.tp;
            mine.fp += c.fp;
            mine.fn += c.fn;
            mine.support += c.support;
        }
    }

    // Support-weighted one-vs-rest average over classes present in refs.
    void weighted_prf(double& precision, double& recall, double& f1) const {
        double wp = 0.0, wr = 0.0, wf = 0.0, total = 0.0;
        for (const auto& [label, c] : classes) {
            if (c.support == 0) continue;
            const double w = static_cast<double>(c.support);
            const double p = c.tp + c.fp > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
            const double r = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
            wp += w * p;
            wr += w * r;
            wf += w * f1_of(p, r);
            total += w;
        }
        if (total == 0.0) {
            precision = recall = f1 = 0.0;
            return;
        }
        precision = wp / total;
        recall = wr / total;
        f1 = wf / total;
    }
};

// Paper-style token-classification metrics over parallel sentence lists.
inline MetricRow prf_classification(const std::vector<SyllableSeq>& refs,
                                    const std::vector<SyllableSeq>& hyps) {
    if (refs.size() != hyps.size())
        throw std::runtime_error("prf_classification: refs/hyps length mismatch");
    ClassificationTally tally;
    for (size_t i = 0; i < refs.size(); ++i) tally.add_sentence(refs[i], hyps[i]);
    MetricRow row;
    row.mode = MetricMode::Classification;
    row.support = refs.size();
    tally.weighted_prf(row.precision, row.recall, row.f1);
    return row;
}

// --- correction mode ----------------------------------------------------------

struct CorrectionTally {
    size_t tp = 0, fp = 0, fn = 0;
    size_t needed = 0, changed = 0;

    void add_triple(const SyllableSeq& src, const SyllableSeq& ref, const SyllableSeq& hyp) {
        // Label per reference position from an alignment, nullopt where the
        // aligned side has no token.
        const auto labels_at_ref = [&](const SyllableSeq& other) {
            std::vector<TokenLabel> at(ref.size());
            const Alignment a = align(ref, other);
            for (const AlignOp& op : a.ops)
                if (op.ref_index != AlignOp::npos && op.hyp_index != AlignOp::npos)
                    at[op.ref_index] = other[op.hyp_index].str();
            return at;
        };
        const auto src_at = labels_at_ref(src);
        const auto hyp_at = labels_at_ref(hyp);
        for (size_t i = 0; i < ref.size(); ++i) {
            const TokenLabel ref_i = ref[i].str();
            const bool is_needed = src_at[i] != ref_i;
            const bool is_changed = hyp_at[i] != src_at[i];
            needed += is_needed;
            changed += is_changed;
            if (is_changed && hyp_at[i] == ref_i) ++tp;
            if (is_changed && hyp_at[i] != ref_i) ++fp;
            if (is_needed && hyp_at[i] != ref_i) ++fn;
        }
    }

    void merge(const CorrectionTally& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        needed += o.needed;
        changed += o.changed;
    }

    void prf(double& precision, double& recall, double& f1) const {
        if (changed == 0)
            precision = needed == 0 ? 1.0 : 0.0;
        else
            precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        if (needed == 0)
            recall = 1.0;
        else
            recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
        f1 = f1_of(precision, recall);
    }
};

// Correction-task metrics over parallel (source, reference, hypothesis)
// sentence triples.
inline MetricRow prf_correction(const std::vector<SyllableSeq>& srcs,
                                const std::vector<SyllableSeq>& refs,
                                const std::vector<SyllableSeq>& hyps) {
    if (srcs.size() != refs.size() || refs.size() != hyps.size())
        throw std::runtime_error("prf_correction: parallel list length mismatch");
    CorrectionTally tally;
    for (size_t i = 0; i < refs.size(); ++i) tally.add_triple(srcs[i], refs[i], hyps[i]);
    MetricRow row;
    row.mode = MetricMode::Correction;
    row.support = refs.size();
    tally.prf(row.precision, row.recall, row.f1);
    return row;
}

// --- corpus evaluation ---------------------------------------------------------

inline std::string bucket_of(const std::vector<CorruptionId>& ops) {
    if (ops.empty()) return "clean";
    if (ops.size() == 1) return std::string(corruption_name(ops[0]));
    return "mixed";
}

inline const std::vector<std::string>& bucket_order() {
    static const std::vector<std::string> order = {
        "clean",
        "CharDelete",
        "CharInsert",
        "CaseSubst",
        "HomoglyphSubst",
        "AdjSyllCharTranspose",
        "InterSyllCharTranspose",
        "SyllDelete",
        "SyllTranspose",
        "SyllMerge",
        "mixed",
    };
    return order;
}

inline bool bucket_is_syllable_level(const std::string& bucket) {
    return bucket == "SyllDelete" || bucket == "SyllTranspose" || bucket == "SyllMerge";
}

inline bool bucket_is_char_level(const std::string& bucket) {
    return bucket == "CharDelete" || bucket == "CharInsert" || bucket == "CaseSubst" ||
           bucket == "HomoglyphSubst" || bucket == "AdjSyllCharTranspose" ||
           bucket == "InterSyllCharTranspose";
}

// Runs the system over every record, groups by corruption bucket, and
// reports both metric modes per bucket plus support-weighted level totals.
inline EvalReport evaluate_corpus(const std::vector<CorruptionRecord>& records, Corrector& system,
                                  const ScriptTable& table) {
    struct BucketAcc {
        ClassificationTally cls;
        CorrectionTally cor;
        size_t support = 0;
    };
    std::map<std::string, BucketAcc> buckets;

    for (const CorruptionRecord& rec : records) {
        const SyllableSeq ref = segment(rec.source, table);
        const SyllableSeq src = segment(rec.corrupted, table);
        const SyllableSeq hyp = segment(system.correct(rec.corrupted), table);
        BucketAcc& acc = buckets[bucket_of(rec.ops)];
        acc.cls.add_sentence(ref, hyp);
        acc.cor.add_triple(src, ref, hyp);
        acc.support += 1;
    }

    EvalReport report;
    const auto emit = [&](const std::string& name, const BucketAcc& acc) {
        MetricRow cls;
        cls.bucket = name;
        cls.mode = MetricMode::Classification;
        cls.support = acc.support;
        acc.cls.weighted_prf(cls.precision, cls.recall, cls.f1);
        cls.correctable = !bucket_is_syllable_level(name) || system.corrects_syllable_level();
        MetricRow cor = cls;
        cor.mode = MetricMode::Correction;
        acc.cor.prf(cor.precision, cor.recall, cor.f1);
        report.rows.push_back(cls);
        report.rows.push_back(cor);
    };

    for (const std::string& name : bucket_order()) {
        auto it = buckets.find(name);
        if (it != buckets.end()) emit(name, it->second);
    }

    // Level totals as support-weighted means of the bucket metrics.
    const auto aggregate = [&](const std::string& name, auto member_filter, bool correctable) {
        for (MetricMode mode : {MetricMode::Classification, MetricMode::Correction}) {
            double wp = 0.0, wr = 0.0, wf = 0.0;
            size_t support = 0;
            for (const MetricRow& r : report.rows) {
                if (r.mode != mode || !member_filter(r.bucket)) continue;
                const double w = static_cast<double>(r.support);
                wp += w * r.precision;
                wr += w * r.recall;
                wf += w * r.f1;
                support += r.support;
            }
            if (support == 0) continue;
            MetricRow row;
            row.bucket = name;
            row.mode = mode;
            row.support = support;
            row.precision = wp / static_cast<double>(support);
            row.recall = wr / static_cast<double>(support);
            row.f1 = wf / static_cast<double>(support);
            row.correctable = correctable;
            report.rows.push_back(row);
        }
    };
    const auto is_bucket = [](const std::string& b) {
        for (const auto& name : bucket_order())
            if (name == b) return true;
        return false;
    };
    aggregate("char_level", bucket_is_char_level, true);
    aggregate("syll_level", bucket_is_syllable_level, system.corrects_syllable_level());
    aggregate("overall", is_bucket, true);
    return report;
}

// Human-readable table, one bucket per row. Syllable-level rows of systems
// that cannot repair that level are marked "-".
inline void print_report(std::ostream& out, const EvalReport& report) {
    out << "bucket                  mode            precision  recall     f1         support\n";
    char buf[200];
    for (const auto& r : report.rows) {
        if (r.correctable)
            std::snprintf(buf, sizeof buf, "%-23s %-15s %-10.4f %-10.4f %-10.4f %zu\n",
                          r.bucket.c_str(), metric_mode_name(r.mode), r.precision, r.recall, r.f1,
                          r.support);
        else
            std::snprintf(buf, sizeof buf, "%-23s %-15s %-10.4f %-10.4f %-10.4f %zu  (-)\n",
                          r.bucket.c_str(), metric_mode_name(r.mode), r.precision, r.recall, r.f1,
                          r.support);
        out << buf;
    }
}

}  // namespace tispell
