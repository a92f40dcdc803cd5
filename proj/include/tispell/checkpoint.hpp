#pragma once

// Versioned binary checkpoint: magic, a JSON header carrying the encoder
// config and vocabulary, then the named parameter tensors as little-endian
// float64. Bytes are a pure function of the parameters, so determinism
// tests can compare files directly.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tispell/model.hpp"
#include "tispell/vocab.hpp"

namespace tispell {

namespace detail {

constexpr char kCkptMagic[8] = {'T', 'S', 'P', 'L', 'C', 'K', 'P', 'T'};
constexpr uint32_t kCkptVersion = 1;

inline void write_u32(std::ostream& out, uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
inline void write_u64(std::ostream& out, uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
inline uint32_t read_u32(std::istream& in) {
    uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
inline uint64_t read_u64(std::istream& in) {
    uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

inline nlohmann::ordered_json config_to_json(const EncoderConfig& c) {
    nlohmann::ordered_json j;
    j["layers"] = c.layers;
    j["heads"] = c.heads;
    j["d_model"] = c.d_model;
    j["d_ff"] = c.d_ff;
    j["l_max"] = c.l_max;
    j["dropout"] = c.dropout;
    j["head_layers"] = c.head_layers;
    j["residual"] = c.residual;
    j["dual_head"] = c.dual_head;
    j["ln_eps"] = c.ln_eps;
    return j;
}

inline EncoderConfig config_from_json(const nlohmann::json& j) {
    EncoderConfig c;
    c.layers = j.at("layers").get<int>();
    c.heads = j.at("heads").get<int>();
    c.d_model = j.at("d_model").get<int>();
    c.d_ff = j.at("d_ff").get<int>();
    c.l_max = j.at("l_max").get<int>();
    c.dropout = j.at("dropout").get<double>();
    c.head_layers = j.at("head_layers").get<int>();
    c.residual = j.at("residual").get<bool>();
    c.dual_head = j.at("dual_head").get<bool>();
    c.ln_eps = j.at("ln_eps").get<double>();
    return c;
}

}  // namespace detail

struct Checkpoint {
    ModelParams params;
    Vocab vocab;
};

inline void save_checkpoint(const std::string& path, ModelParams& params, const Vocab& vocab) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out.write(detail::kCkptMagic, sizeof detail::kCkptMagic);
    detail::write_u32(out, detail::kCkptVersion);

    nlohmann::ordered_json header;
    header["config"] = detail::config_to_json(params.cfg);
    header["vocab"] = vocab.id_to_token;
    const std::string hs = header.dump();
    detail::write_u64(out, hs.size());
    out.write(hs.data(), static_cast<std::streamsize>(hs.size()));

    uint64_t count = 0;
    params.for_each_tensor([&](const std::string&, Matrix&) { ++count; });
    detail::write_u64(out, count);
    params.for_each_tensor([&](const std::string& name, Matrix& m) {
        detail::write_u32(out, static_cast<uint32_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        detail::write_u64(out, m.rows);
        detail::write_u64(out, m.cols);
        out.write(reinterpret_cast<const char*>(m.data.data()),
                  static_cast<std::streamsize>(m.data.size() * sizeof(double)));
    });
    if (!out) throw std::runtime_error("short write on checkpoint: " + path);
}

inline Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, detail::kCkptMagic, sizeof magic) != 0)
        throw std::runtime_error("not a tispell checkpoint: " + path);
    const uint32_t version = detail::read_u32(in);
    if (version != detail::kCkptVersion)
        throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));

    const uint64_t hlen = detail::read_u64(in);
    std::string hs(hlen, '\0');
    in.read(hs.data(), static_cast<std::streamsize>(hlen));
    const auto header = nlohmann::json::parse(hs);
    const EncoderConfig cfg = detail::config_from_json(header.at("config"));
    const auto tokens = header.at("vocab").get<std::vector<std::string>>();

    Checkpoint ck;
    if (tokens.size() < Vocab::kSpecials) throw std::runtime_error("checkpoint vocab too small");
    ck.vocab = Vocab::from_tokens(
        std::vector<std::string>(tokens.begin() + Vocab::kSpecials, tokens.end()));
    ck.params = ModelParams::zeros(cfg, static_cast<int>(tokens.size()));

    const uint64_t count = detail::read_u64(in);
    std::map<std::string, Matrix*> by_name;
    uint64_t expected = 0;
    ck.params.for_each_tensor([&](const std::string& name, Matrix& m) {
        by_name[name] = &m;
        ++expected;
    });
    if (count != expected) throw std::runtime_error("checkpoint tensor count mismatch");
    for (uint64_t t = 0; t < count; ++t) {
        const uint32_t nlen = detail::read_u32(in);
        std::string name(nlen, '\0');
        in.read(name.data(), nlen);
        const uint64_t rows = detail::read_u64(in);
        const uint64_t cols = detail::read_u64(in);
        const auto it = by_name.find(name);
        if (it == by_name.end()) throw std::runtime_error("unknown tensor in checkpoint: " + name);
        Matrix& m = *it->second;
        if (m.rows != rows || m.cols != cols)
            throw std::runtime_error("tensor shape mismatch for " + name);
        in.read(reinterpret_cast<char*>(m.data.data()),
                static_cast<std::streamsize>(m.data.size() * sizeof(double)));
    }
    if (!in) throw std::runtime_error("truncated checkpoint: " + path);
    return ck;
}

}  // namespace tispell
