#pragma once

// Multi-task training: L = L_semi_mask + w_C * L_final, each term a mean
// token cross-entropy, optimized with AdamW (decoupled weight decay).
// Single-threaded and seed-deterministic: two runs with the same seed and
// data produce bitwise identical parameters.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tispell/backprop.hpp"
#include "tispell/dataset.hpp"
#include "tispell/model.hpp"
#include "tispell/rng.hpp"
#include "tispell/vocab.hpp"

namespace tispell {

struct TrainConfig {
    double learning_rate = 1e-3;  // toy default; published setups anneal 1e-4 -> 5e-5
    double weight_decay = 1e-2;
    int batch_size = 32;
    int epochs = 10;
    double w_c = 2.0;                // weight of the final-output loss term
    bool weight_on_semi_mask = false;  // swap which term carries w_c
    uint64_t seed = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;

    void validate() const {
        if (learning_rate < 0.0 || weight_decay < 0.0) throw std::runtime_error("negative rate");
        if (batch_size < 1 || epochs < 0) throw std::runtime_error("bad batch/epoch config");
        if (w_c <= 0.0) throw std::runtime_error("w_c must be positive");
    }
};

struct TrainExample {
    TokenSeq input;      // corrupted text
    TokenSeq target_m;   // semi-mask label
    TokenSeq target_c;   // clean label
};

inline TrainExample make_example(const CorruptionRecord& rec, const Vocab& vocab, size_t l_max,
                                 size_t* truncations = nullptr, size_t* unknowns = nullptr) {
    TrainExample ex;
    ex.input = tokenize(rec.corrupted, vocab, l_max, unknowns);
    ex.target_m = tokenize(rec.semi_mask, vocab, l_max, unknowns);
    ex.target_c = tokenize(rec.source, vocab, l_max, unknowns);
    if (truncations && (ex.input.truncated || ex.target_m.truncated || ex.target_c.truncated))
        ++*truncations;
    return ex;
}

struct LossBreakdown {
    double total = 0.0;
    double term_semi_mask = 0.0;
    double term_final = 0.0;
    size_t tokens_semi = 0;
    size_t tokens_final = 0;
};

struct TrainDivergence : std::runtime_error {
    explicit TrainDivergence(const std::string& what) : std::runtime_error(what) {}
};

// --- loss over a batch ----------------------------------------------------------

// Forward + loss for a batch; when `grads` is non-null also accumulates
// parameter gradients. The two terms are means over the batch's non-pad
// target tokens; total = term_semi + w * term_final (or the swapped
// weighting).
inline LossBreakdown batch_loss(const ModelParams& p, const std::vector<const TrainExample*>& batch,
                                const TrainConfig& tc, Workspace& ws, Gradients* grads = nullptr,
                                Rng* drop_rng = nullptr) {
    LossBreakdown out;
    // token totals first so per-position gradient coefficients are final
    for (const TrainExample* ex : batch) {
        for (size_t i = 0; i < ex->target_m.ids.size(); ++i)
            out.tokens_semi += ex->target_m.ids[i] != Vocab::kPad;
        for (size_t i = 0; i < ex->target_c.ids.size(); ++i)
            out.tokens_final += ex->target_c.ids[i] != Vocab::kPad;
    }
    if (out.tokens_final == 0 || (p.cfg.dual_head && out.tokens_semi == 0))
        throw std::runtime_error("batch contains only [PAD] targets");

    // single-head trains the one objective unweighted
    const double w_semi = !p.cfg.dual_head ? 0.0 : (tc.weight_on_semi_mask ? tc.w_c : 1.0);
    const double w_final = !p.cfg.dual_head ? 1.0 : (tc.weight_on_semi_mask ? 1.0 : tc.w_c);

    Matrix dlm, dlc;
    for (const TrainExample* ex : batch) {
        const auto [lm, lc] = model_forward(p, ex->input, ws, drop_rng);
        if (grads) {
            dlm = Matrix(ws.logits_c.rows, ws.logits_c.cols);
            dlc = Matrix(ws.logits_c.rows, ws.logits_c.cols);
        }
        if (p.cfg.dual_head)
            out.term_semi_mask +=
                softmax_xent(*lm, ex->target_m.ids, nullptr, grads ? &dlm : nullptr,
                             w_semi / static_cast<double>(out.tokens_semi));
        out.term_final += softmax_xent(*lc, ex->target_c.ids, nullptr, grads ? &dlc : nullptr,
                                       w_final / static_cast<double>(out.tokens_final));
        if (grads) model_backward(p, ws, p.cfg.dual_head ? &dlm : nullptr, &dlc, *grads);
    }
    out.term_semi_mask /= static_cast<double>(out.tokens_semi ? out.tokens_semi : 1);
    out.term_final /= static_cast<double>(out.tokens_final);
    out.total = w_semi * out.term_semi_mask + w_final * out.term_final;
    if (!p.cfg.dual_head) {
        // single objective: the final term is the whole loss
        out.term_semi_mask = 0.0;
        out.total = out.term_final;
    }
    return out;
}

// --- AdamW ----------------------------------------------------------------------

class AdamW {
public:
    AdamW(ModelParams& params, const TrainConfig& tc) : tc_(tc) {
        params.for_each_tensor([&](const std::string&, Matrix& m) {
            m_.emplace_back(m.rows, m.cols);
            v_.emplace_back(m.rows, m.cols);
        });
    }

    // Decoupled weight decay: theta -= lr * (m_hat/(sqrt(v_hat)+eps) + wd*theta).
    void step(ModelParams& params, Gradients& grads) {
        ++t_;
        const double bc1 = 1.0 - std::pow(tc_.beta1, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(tc_.beta2, static_cast<double>(t_));
        size_t idx = 0;
        std::vector<Matrix*> gs;
        grads.for_each_tensor([&](const std::string&, Matrix& g) { gs.push_back(&g); });
        params.for_each_tensor([&](const std::string& name, Matrix& w) {
            Matrix& g = *gs[idx];
            Matrix& m = m_[idx];
            Matrix& v = v_[idx];
            ++idx;
            for (size_t i = 0; i < w.data.size(); ++i) {
                const double gi = g.data[i];
                if (!std::isfinite(gi)) throw TrainDivergence("non-finite gradient in " + name);
                m.data[i] = tc_.beta1 * m.data[i] + (1.0 - tc_.beta1) * gi;
                v.data[i] = tc_.beta2 * v.data[i] + (1.0 - tc_.beta2) * gi * gi;
                const double mhat = m.data[i] / bc1;
                const double vhat = v.data[i] / bc2;
                w.data[i] -= tc_.learning_rate *
                             (mhat / (std::sqrt(vhat) + tc_.adam_eps) + tc_.weight_decay * w.data[i]);
            }
        });
    }

    uint64_t steps() const { return t_; }

private:
    TrainConfig tc_;
    uint64_t t_ = 0;
    std::vector<Matrix> m_, v_;
};

// One optimizer step on a batch; returns the loss breakdown at the
// pre-update parameters.
inline LossBreakdown train_step(ModelParams& params, AdamW& opt,
                                const std::vector<const TrainExample*>& batch,
                                const TrainConfig& tc, Workspace& ws, Rng* drop_rng) {
    Gradients grads = ModelParams::zeros(params.cfg, params.vocab_size);
    const LossBreakdown loss = batch_loss(params, batch, tc, ws, &grads, drop_rng);
    if (!std::isfinite(loss.total)) throw TrainDivergence("non-finite loss");
    opt.step(params, grads);
    return loss;
}

// --- epoch loop -----------------------------------------------------------------

struct EpochMetrics {
    int epoch = 0;
    double loss_total = 0.0;
    double loss_semi = 0.0;
    double loss_final = 0.0;
    size_t steps = 0;
};

// Streams seeded batches through train_step for one epoch. Example order is
// reshuffled per epoch from the training seed; dropout noise comes from the
// same root so runs reproduce bitwise.
inline EpochMetrics train_epoch(ModelParams& params, AdamW& opt,
                                const std::vector<TrainExample>& examples, const TrainConfig& tc,
                                Workspace& ws, int epoch) {
    Rng epoch_rng = Rng(tc.seed).child(0xE90C).child(static_cast<uint64_t>(epoch));
    std::vector<size_t> order(examples.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    // Fisher-Yates with the epoch stream
    for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[epoch_rng.index(i)]);

    Rng drop_rng = epoch_rng.child(1);
    EpochMetrics em;
    em.epoch = epoch;
    std::vector<const TrainExample*> batch;
    for (size_t start = 0; start < order.size(); start += static_cast<size_t>(tc.batch_size)) {
        batch.clear();
        const size_t end = std::min(order.size(), start + static_cast<size_t>(tc.batch_size));
        for (size_t i = start; i < end; ++i) batch.push_back(&examples[order[i]]);
        const LossBreakdown loss =
            train_step(params, opt, batch, tc, ws, params.cfg.dropout > 0.0 ? &drop_rng : nullptr);
        em.loss_total += loss.total;
        em.loss_semi += loss.term_semi_mask;
        em.loss_final += loss.term_final;
        ++em.steps;
    }
    if (em.steps > 0) {
        em.loss_total /= static_cast<double>(em.steps);
        em.loss_semi /= static_cast<double>(em.steps);
        em.loss_final /= static_cast<double>(em.steps);
    }
    return em;
}

}  // namespace tispell
