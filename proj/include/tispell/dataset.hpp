#pragma once

// Deterministic dataset synthesis: one CorruptionRecord per corpus line,
// seeded per line with child(global_seed, line_index), serialized as JSON
// Lines with the fixed field order {id, source, corrupted, semi_mask, ops,
// seed}. Identical (corpus, config, seed) reproduce the output byte for
// byte.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tispell/corruption.hpp"
#include "tispell/rng.hpp"
#include "tispell/script_table.hpp"
#include "tispell/syllable.hpp"

namespace tispell {

struct ReservedTokenError : std::runtime_error {
    explicit ReservedTokenError(const std::string& what) : std::runtime_error(what) {}
};

struct SynthesisMode {
    enum Kind { Clean, Mixed, Single } kind = Mixed;
    CorruptionId op = CorruptionId::CharDelete;  // meaningful for Single only

    static SynthesisMode parse(std::string_view name) {
        SynthesisMode m;
        if (name == "clean") {
            m.kind = Clean;
        } else if (name == "mixed") {
            m.kind = Mixed;
        } else {
            CorruptionId id;
            if (!corruption_from_name(name, id))
                throw std::runtime_error("unknown corruption mode: " + std::string(name));
            m.kind = Single;
            m.op = id;
        }
        return m;
    }

    std::string name() const {
        switch (kind) {
            case Clean: return "clean";
            case Mixed: return "mixed";
            case Single: return std::string(corruption_name(op));
        }
        return "mixed";
    }
};

struct SynthesisConfig {
    SynthesisMode mode;
    double corruption_rate = 1.0;  // probability a line is corrupted at all
    size_t max_syllables = 64;
};

struct SynthesisStats {
    size_t lines_read = 0;
    size_t records = 0;
    size_t skipped_empty = 0;
    size_t skipped_non_tibetan = 0;
    size_t skipped_too_long = 0;
    size_t clean_records = 0;
    size_t noop_ops = 0;
    std::map<std::string, size_t> op_counts;
};

namespace detail {

// A corpus line is usable when every non-delimiter codepoint sits in the
// Tibetan block.
inline bool line_is_tibetan(const std::string& line, const ScriptTable& table) {
    size_t i = 0;
    while (i < line.size()) {
        Codepoint cp;
        try {
            cp = decode_utf8_at(line, i);
        } catch (const Utf8Error&) {
            return false;
        }
        if (table.is_delimiter(cp)) continue;
        if (cp < 0x0F00 || cp > 0x0FFF) return false;
    }
    return true;
}

}  // namespace detail

// Builds the record for one already-validated source line.
inline CorruptionRecord synthesize_record(const std::string& source_text, const SynthesisConfig& cfg,
                                          uint64_t line_seed, const ScriptTable& table,
                                          const std::string& id) {
    Rng rng(line_seed);
    const SyllableSeq seq = segment(source_text, table);

    CorruptionRecord rec;
    rec.id = id;
    rec.source = source_text;
    rec.seed = line_seed;

    const bool corrupt_this =
        cfg.mode.kind != SynthesisMode::Clean && rng.chance(cfg.corruption_rate);
    if (!corrupt_this) {
        rec.corrupted = source_text;
        rec.semi_mask = source_text;
        return rec;
    }
    if (cfg.mode.kind == SynthesisMode::Mixed) {
        MixedResult r = mixed_corrupt(seq, rng, table);
        rec.corrupted = join(r.seq);
        rec.semi_mask = join(r.semi_mask);
        rec.ops = r.ops;
        rec.noop_count = r.noop_count;
    } else {
        OpResult r = apply_corruption(cfg.mode.op, seq, rng, table);
        rec.corrupted = join(r.seq);
        rec.semi_mask = r.semi_mask ? join(*r.semi_mask) : source_text;
        rec.ops = {cfg.mode.op};
        rec.noop_count = r.changed ? 0 : 1;
    }
    return rec;
}

inline void synthesize_dataset(std::istream& corpus, const SynthesisConfig& cfg, uint64_t global_seed,
                               const ScriptTable& table,
                               const std::function<void(const CorruptionRecord&)>& sink,
                               SynthesisStats* stats_out = nullptr) {
    SynthesisStats stats;
    Rng root(global_seed);
    std::string line;
    size_t line_index = 0;
    while (std::getline(corpus, line)) {
        const size_t idx = line_index++;
        ++stats.lines_read;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find(kMaskToken) != std::string::npos)
            throw ReservedTokenError("reserved token " + std::string(kMaskToken) + " in corpus line " +
                                     std::to_string(idx + 1));
        if (line.empty()) {
            ++stats.skipped_empty;
            continue;
        }
        if (!detail::line_is_tibetan(line, table)) {
            ++stats.skipped_non_tibetan;
            continue;
        }
        const SyllableSeq seq = segment(line, table);
        if (seq.size() > cfg.max_syllables) {
            ++stats.skipped_too_long;
            continue;
        }
        // Normalized source so source/corrupted/semi_mask share delimiter
        // conventions regardless of the raw line's delimiters.
        const std::string source = join(seq);
        char idbuf[32];
        std::snprintf(idbuf, sizeof idbuf, "-%06zu", idx);
        const uint64_t line_seed = root.child(idx).seed_state();
        CorruptionRecord rec = synthesize_record(source, cfg, line_seed, table, cfg.mode.name() + idbuf);
        ++stats.records;
        if (rec.ops.empty()) ++stats.clean_records;
        stats.noop_ops += static_cast<size_t>(rec.noop_count);
        for (CorruptionId op : rec.ops) ++stats.op_counts[std::string(corruption_name(op))];
        sink(rec);
    }
    if (stats_out) *stats_out = stats;
}

// --- JSONL serialization -----------------------------------------------------

inline nlohmann::ordered_json record_to_json(const CorruptionRecord& rec) {
    nlohmann::ordered_json j;
    j["id"] = rec.id;
    j["source"] = rec.source;
    j["corrupted"] = rec.corrupted;
    j["semi_mask"] = rec.semi_mask;
    auto ops = nlohmann::ordered_json::array();
    for (CorruptionId op : rec.ops) ops.push_back(std::string(corruption_name(op)));
    j["ops"] = std::move(ops);
    j["seed"] = rec.seed;
    return j;
}

inline std::string record_to_jsonl(const CorruptionRecord& rec) {
    return record_to_json(rec).dump();
}

inline CorruptionRecord record_from_json(const nlohmann::json& j) {
    CorruptionRecord rec;
    rec.id = j.at("id").get<std::string>();
    rec.source = j.at("source").get<std::string>();
    rec.corrupted = j.at("corrupted").get<std::string>();
    rec.semi_mask = j.at("semi_mask").get<std::string>();
    for (const auto& name : j.at("ops")) {
        CorruptionId id;
        if (!corruption_from_name(name.get<std::string>(), id))
            throw std::runtime_error("unknown op name in record: " + name.get<std::string>());
        rec.ops.push_back(id);
    }
    rec.seed = j.at("seed").get<uint64_t>();
    return rec;
}

inline std::vector<CorruptionRecord> read_records(std::istream& in) {
    std::vector<CorruptionRecord> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            out.push_back(record_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("bad dataset line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

inline std::vector<CorruptionRecord> read_records_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dataset: " + path);
    return read_records(in);
}

}  // namespace tispell
