#pragma once

// Inference wrapper around a trained checkpoint: two-stage correction
// (semi-masked intermediate, then the combined final output) and attention
// matrix export.

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tispell/checkpoint.hpp"
#include "tispell/corrector.hpp"
#include "tispell/model.hpp"
#include "tispell/vocab.hpp"

namespace tispell {

struct CorrectionOutput {
    std::string semi_masked;  // argmax of the character-level head
    std::string final_text;   // argmax of the combined logits
    bool truncated = false;
};

class NeuralCorrector final : public Corrector {
public:
    NeuralCorrector(ModelParams params, Vocab vocab)
        : params_(std::move(params)), vocab_(std::move(vocab)), ws_(Workspace::make(params_)) {}

    static NeuralCorrector from_checkpoint(const std::string& path) {
        Checkpoint ck = load_checkpoint(path);
        return NeuralCorrector(std::move(ck.params), std::move(ck.vocab));
    }

    CorrectionOutput correct_verbose(const std::string& text) {
        CorrectionOutput out;
        const TokenSeq seq = tokenize(text, vocab_, static_cast<size_t>(params_.cfg.l_max));
        out.truncated = seq.truncated;
        const auto [lm, lc] = model_forward(params_, seq, ws_, nullptr);
        // single-head models have no intermediate stage; both outputs come
        // from the final logits
        out.semi_masked = detokenize(argmax_rows(lm ? *lm : *lc), vocab_);
        out.final_text = detokenize(argmax_rows(*lc), vocab_);
        return out;
    }

    std::string correct(const std::string& text) override {
        return correct_verbose(text).final_text;
    }

    std::string name() const override { return "tispell"; }
    bool corrects_syllable_level() const override { return true; }

    // Post-softmax attention rows for the first `true_len` positions of one
    // layer/head, as CSV.
    std::string attention_csv(const std::string& text, int layer, int head) {
        if (layer < 0 || layer >= params_.cfg.layers)
            throw std::runtime_error("layer out of range: " + std::to_string(layer));
        if (head < 0 || head >= params_.cfg.heads)
            throw std::runtime_error("head out of range: " + std::to_string(head));
        const TokenSeq seq = tokenize(text, vocab_, static_cast<size_t>(params_.cfg.l_max));
        encoder_forward(params_, seq.ids, seq.true_len, ws_, nullptr);
        const Matrix& att = ws_.layers[static_cast<size_t>(layer)].att[static_cast<size_t>(head)];
        std::string csv;
        char buf[32];
        for (size_t i = 0; i < seq.true_len; ++i) {
            for (size_t j = 0; j < seq.true_len; ++j) {
                std::snprintf(buf, sizeof buf, "%.9f", att.at(i, j));
                csv += buf;
                csv += (j + 1 == seq.true_len) ? '\n' : ',';
            }
        }
        return csv;
    }

    const ModelParams& params() const { return params_; }
    const Vocab& vocab() const { return vocab_; }

private:
    ModelParams params_;
    Vocab vocab_;
    Workspace ws_;
};

inline void export_attention(NeuralCorrector& model, const std::string& text, int layer, int head,
                             const std::string& out_path) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write attention matrix: " + out_path);
    out << model.attention_csv(text, layer, head);
}

}  // namespace tispell
