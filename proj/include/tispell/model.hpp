#pragma once

// Toy transformer encoder with the dual correction heads.
//
// Encoder layer (post-norm): multi-head scaled dot-product attention with
// pad keys masked before softmax, residual + layer norm, then
// ReLU(xW'+b')W''+b'' with residual + layer norm. The character head and
// syllable head are MLPs over the shared hidden states; the final logits
// are the residual sum logits_c = logits_m + f_S(h), with ablation switches
// for the residual connection, the head depth, and dropping the character
// head entirely.
//
// All positions up to L_max are computed: target sequences can be longer
// than the corrupted input, so predictions beyond the input's length come
// from pad-position queries, which may attend to the visible tokens.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "tispell/rng.hpp"
#include "tispell/tensor.hpp"
#include "tispell/vocab.hpp"

namespace tispell {

struct EncoderConfig {
    int layers = 2;
    int heads = 2;
    int d_model = 64;
    int d_ff = 256;
    int l_max = 64;
    double dropout = 0.1;
    int head_layers = 2;      // hidden layers per correction head
    bool residual = true;     // logits_c = logits_m + f_S(h)
    bool dual_head = true;    // false: drop the character head entirely
    double ln_eps = 1e-5;

    int d_k() const { return d_model / heads; }

    void validate() const {
        if (layers < 1 || heads < 1 || d_model < 1 || d_ff < 1 || l_max < 2)
            throw std::runtime_error("encoder config: dimensions must be positive");
        if (d_model % heads != 0) throw std::runtime_error("d_model must be divisible by heads");
        if (head_layers < 1 || head_layers > 2)
            throw std::runtime_error("head_layers must be 1 or 2");
        if (!dual_head && residual)
            throw std::runtime_error("residual combination requires the dual-head model");
        if (dropout < 0.0 || dropout >= 1.0) throw std::runtime_error("dropout must be in [0,1)");
    }
};

struct HeadParams {
    std::vector<Matrix> hidden_w, hidden_b;
    Matrix out_w, out_b;
    bool empty() const { return out_w.data.empty(); }
};

struct LayerParams {
    Matrix wq, bq, wk, bk, wv, bv, wo, bo;
    Matrix ln1_g, ln1_b;
    Matrix ffn_w1, ffn_b1, ffn_w2, ffn_b2;
    Matrix ln2_g, ln2_b;
};

struct ModelParams {
    EncoderConfig cfg;
    int vocab_size = 0;
    Matrix tok_emb, pos_emb;
    std::vector<LayerParams> layers;
    HeadParams char_head, syll_head;

    static ModelParams zeros(const EncoderConfig& cfg, int vocab_size) {
        cfg.validate();
        ModelParams p;
        p.cfg = cfg;
        p.vocab_size = vocab_size;
        const size_t d = static_cast<size_t>(cfg.d_model);
        const size_t v = static_cast<size_t>(vocab_size);
        p.tok_emb = Matrix(v, d);
        p.pos_emb = Matrix(static_cast<size_t>(cfg.l_max), d);
        p.layers.resize(static_cast<size_t>(cfg.layers));
        for (auto& l : p.layers) {
            l.wq = Matrix(d, d);
            l.bq = Matrix(1, d);
            l.wk = Matrix(d, d);
            l.bk = Matrix(1, d);
            l.wv = Matrix(d, d);
            l.bv = Matrix(1, d);
            l.wo = Matrix(d, d);
            l.bo = Matrix(1, d);
            l.ln1_g = Matrix(1, d);
            l.ln1_b = Matrix(1, d);
            l.ffn_w1 = Matrix(d, static_cast<size_t>(cfg.d_ff));
            l.ffn_b1 = Matrix(1, static_cast<size_t>(cfg.d_ff));
            l.ffn_w2 = Matrix(static_cast<size_t>(cfg.d_ff), d);
            l.ffn_b2 = Matrix(1, d);
            l.ln2_g = Matrix(1, d);
            l.ln2_b = Matrix(1, d);
        }
        const auto make_head = [&](HeadParams& h) {
            h.hidden_w.assign(static_cast<size_t>(cfg.head_layers), Matrix(d, d));
            h.hidden_b.assign(static_cast<size_t>(cfg.head_layers), Matrix(1, d));
            h.out_w = Matrix(d, v);
            h.out_b = Matrix(1, v);
        };
        if (cfg.dual_head) make_head(p.char_head);
        make_head(p.syll_head);
        return p;
    }

    // Layer-norm gains start at one, everything else at normal(0, 0.02).
    static ModelParams init(const EncoderConfig& cfg, int vocab_size, uint64_t seed) {
        ModelParams p = zeros(cfg, vocab_size);
        Rng rng(seed);
        constexpr double kStd = 0.02;
        p.tok_emb.fill_normal(rng, kStd);
        p.pos_emb.fill_normal(rng, kStd);
        for (auto& l : p.layers) {
            for (Matrix* w : {&l.wq, &l.wk, &l.wv, &l.wo, &l.ffn_w1, &l.ffn_w2})
                w->fill_normal(rng, kStd);
            for (double& g : l.ln1_g.data) g = 1.0;
            for (double& g : l.ln2_g.data) g = 1.0;
        }
        for (HeadParams* h : {&p.char_head, &p.syll_head}) {
            if (h->empty()) continue;
            for (auto& w : h->hidden_w) w.fill_normal(rng, kStd);
            h->out_w.fill_normal(rng, kStd);
        }
        return p;
    }

    template <typename F>
    void for_each_tensor(F&& f) {
        f("tok_emb", tok_emb);
        f("pos_emb", pos_emb);
        for (size_t i = 0; i < layers.size(); ++i) {
            const std::string pre = "layers." + std::to_string(i) + ".";
            LayerParams& l = layers[i];
            f(pre + "wq", l.wq);
            f(pre + "bq", l.bq);
            f(pre + "wk", l.wk);
            f(pre + "bk", l.bk);
            f(pre + "wv", l.wv);
            f(pre + "bv", l.bv);
            f(pre + "wo", l.wo);
            f(pre + "bo", l.bo);
            f(pre + "ln1_g", l.ln1_g);
            f(pre + "ln1_b", l.ln1_b);
            f(pre + "ffn_w1", l.ffn_w1);
            f(pre + "ffn_b1", l.ffn_b1);
            f(pre + "ffn_w2", l.ffn_w2);
            f(pre + "ffn_b2", l.ffn_b2);
            f(pre + "ln2_g", l.ln2_g);
            f(pre + "ln2_b", l.ln2_b);
        }
        const auto head = [&](const std::string& pre, HeadParams& h) {
            if (h.empty()) return;
            for (size_t i = 0; i < h.hidden_w.size(); ++i) {
                f(pre + ".h" + std::to_string(i) + ".w", h.hidden_w[i]);
                f(pre + ".h" + std::to_string(i) + ".b", h.hidden_b[i]);
            }
            f(pre + ".out_w", h.out_w);
            f(pre + ".out_b", h.out_b);
        };
        head("char_head", char_head);
        head("syll_head", syll_head);
    }

    bool all_finite() {
        bool ok = true;
        for_each_tensor([&](const std::string&, Matrix& m) { ok = ok && m.all_finite(); });
        return ok;
    }
};

// --- activations -------------------------------------------------------------

struct LayerActs {
    Matrix x_in;                   // L x d input to the layer
    Matrix q, k, v;                // L x d
    std::vector<Matrix> att;       // per head, L x L post-softmax
    Matrix ctx;                    // L x d concatenated head outputs
    Matrix proj;                   // L x d after output projection (pre-dropout)
    Matrix drop1, drop2;           // dropout masks (scaled), empty when eval
    Matrix r1, x1;                 // residual sum, post-LN1
    Matrix xhat1, xhat2;           // normalized activations for LN backward
    std::vector<double> istd1, istd2;
    Matrix ff_pre, ff_act;         // L x d_ff
    Matrix ff_out;                 // L x d (pre-dropout)
    Matrix r2, x2;                 // residual sum, post-LN2
};

struct HeadActs {
    std::vector<Matrix> pre, act;  // per hidden layer, L x d
    Matrix logits;                 // L x V
};

struct Workspace {
    std::vector<int> ids;
    size_t true_len = 0;
    Matrix emb;
    std::vector<LayerActs> layers;
    HeadActs chead, shead;
    Matrix logits_c;

    const Matrix& hidden() const { return layers.back().x2; }

    static Workspace make(const ModelParams& p) {
        const auto& cfg = p.cfg;
        const size_t L = static_cast<size_t>(cfg.l_max);
        const size_t d = static_cast<size_t>(cfg.d_model);
        const size_t dff = static_cast<size_t>(cfg.d_ff);
        const size_t v = static_cast<size_t>(p.vocab_size);
        Workspace ws;
        ws.emb = Matrix(L, d);
        ws.layers.resize(static_cast<size_t>(cfg.layers));
        for (auto& a : ws.layers) {
            a.x_in = Matrix(L, d);
            a.q = Matrix(L, d);
            a.k = Matrix(L, d);
            a.v = Matrix(L, d);
            a.att.assign(static_cast<size_t>(cfg.heads), Matrix(L, L));
            a.ctx = Matrix(L, d);
            a.proj = Matrix(L, d);
            a.r1 = Matrix(L, d);
            a.x1 = Matrix(L, d);
            a.xhat1 = Matrix(L, d);
            a.xhat2 = Matrix(L, d);
            a.istd1.assign(L, 0.0);
            a.istd2.assign(L, 0.0);
            a.ff_pre = Matrix(L, dff);
            a.ff_act = Matrix(L, dff);
            a.ff_out = Matrix(L, d);
            a.r2 = Matrix(L, d);
            a.x2 = Matrix(L, d);
        }
        const auto head = [&](HeadActs& h, bool used) {
            if (!used) return;
            h.pre.assign(static_cast<size_t>(cfg.head_layers), Matrix(L, d));
            h.act.assign(static_cast<size_t>(cfg.head_layers), Matrix(L, d));
            h.logits = Matrix(L, v);
        };
        head(ws.chead, cfg.dual_head);
        head(ws.shead, true);
        ws.logits_c = Matrix(L, v);
        return ws;
    }
};

namespace detail {

inline void layer_norm_forward(const Matrix& in, const Matrix& gain, const Matrix& bias,
                               double eps, Matrix& xhat, std::vector<double>& istd, Matrix& out) {
    const size_t L = in.rows, d = in.cols;
    for (size_t i = 0; i < L; ++i) {
        const double* x = in.row(i);
        double mean = 0.0;
        for (size_t j = 0; j < d; ++j) mean += x[j];
        mean /= static_cast<double>(d);
        double var = 0.0;
        for (size_t j = 0; j < d; ++j) {
            const double c = x[j] - mean;
            var += c * c;
        }
        var /= static_cast<double>(d);
        const double inv = 1.0 / std::sqrt(var + eps);
        istd[i] = inv;
        double* xh = xhat.row(i);
        double* o = out.row(i);
        for (size_t j = 0; j < d; ++j) {
            xh[j] = (x[j] - mean) * inv;
            o[j] = gain.data[j] * xh[j] + bias.data[j];
        }
    }
}

inline void dropout_forward(Matrix& m, Matrix& mask, double rate, Rng& rng) {
    mask = Matrix(m.rows, m.cols);
    const double scale = 1.0 / (1.0 - rate);
    for (size_t i = 0; i < m.data.size(); ++i) {
        const double keep = rng.uniform() >= rate ? scale : 0.0;
        mask.data[i] = keep;
        m.data[i] *= keep;
    }
}

// MLP head: `layers` ReLU hidden layers of width d_model, then a linear
// projection to the vocabulary.
inline void head_forward(const HeadParams& h, const Matrix& hidden, HeadActs& acts) {
    const Matrix* input = &hidden;
    for (size_t k = 0; k < h.hidden_w.size(); ++k) {
        acts.pre[k].zero();
        matmul_acc(*input, h.hidden_w[k], acts.pre[k]);
        add_row_vector(acts.pre[k], h.hidden_b[k]);
        acts.act[k] = acts.pre[k];
        for (double& v : acts.act[k].data) v = v > 0.0 ? v : 0.0;
        input = &acts.act[k];
    }
    acts.logits.zero();
    matmul_acc(*input, h.out_w, acts.logits);
    add_row_vector(acts.logits, h.out_b);
}

}  // namespace detail

// Forward pass over all L_max positions. Attention keys beyond `true_len`
// are masked to -inf before softmax. `drop_rng` enables training-mode
// dropout; pass nullptr for deterministic evaluation.
inline void encoder_forward(const ModelParams& p, const std::vector<int>& ids, size_t true_len,
                            Workspace& ws, Rng* drop_rng = nullptr) {
    const auto& cfg = p.cfg;
    const size_t L = static_cast<size_t>(cfg.l_max);
    const size_t d = static_cast<size_t>(cfg.d_model);
    const size_t heads = static_cast<size_t>(cfg.heads);
    const size_t dk = static_cast<size_t>(cfg.d_k());
    const double scale = 1.0 / std::sqrt(static_cast<double>(dk));
    if (ids.size() != L) throw std::runtime_error("token sequence length != L_max");
    if (true_len < 2 || true_len > L) throw std::runtime_error("true_len out of range");
    const bool training = drop_rng != nullptr && cfg.dropout > 0.0;

    ws.ids = ids;
    ws.true_len = true_len;

    // embeddings
    for (size_t i = 0; i < L; ++i) {
        const int id = ids[i];
        if (id < 0 || id >= p.vocab_size) throw std::runtime_error("token id out of vocab range");
        const double* te = p.tok_emb.row(static_cast<size_t>(id));
        const double* pe = p.pos_emb.row(i);
        double* e = ws.emb.row(i);
        for (size_t j = 0; j < d; ++j) e[j] = te[j] + pe[j];
    }

    const Matrix* x = &ws.emb;
    for (size_t li = 0; li < ws.layers.size(); ++li) {
        LayerActs& a = ws.layers[li];
        const LayerParams& lp = p.layers[li];
        a.x_in = *x;

        a.q.zero();
        matmul_acc(a.x_in, lp.wq, a.q);
        add_row_vector(a.q, lp.bq);
        a.k.zero();
        matmul_acc(a.x_in, lp.wk, a.k);
        add_row_vector(a.k, lp.bk);
        a.v.zero();
        matmul_acc(a.x_in, lp.wv, a.v);
        add_row_vector(a.v, lp.bv);

        a.ctx.zero();
        for (size_t h = 0; h < heads; ++h) {
            Matrix& att = a.att[h];
            const size_t off = h * dk;
            for (size_t i = 0; i < L; ++i) {
                const double* qi = a.q.row(i) + off;
                double* srow = att.row(i);
                double mx = -1e300;
                for (size_t j = 0; j < L; ++j) {
                    double s;
                    if (j < true_len) {
                        const double* kj = a.k.row(j) + off;
                        s = 0.0;
                        for (size_t t = 0; t < dk; ++t) s += qi[t] * kj[t];
                        s *= scale;
                    } else {
                        s = -1e300;  // pad key: zero weight after softmax
                    }
                    srow[j] = s;
                    if (s > mx) mx = s;
                }
                double sum = 0.0;
                for (size_t j = 0; j < true_len; ++j) {
                    srow[j] = std::exp(srow[j] - mx);
                    sum += srow[j];
                }
                for (size_t j = 0; j < true_len; ++j) srow[j] /= sum;
                for (size_t j = true_len; j < L; ++j) srow[j] = 0.0;
                // weighted sum of values
                double* ci = a.ctx.row(i) + off;
                for (size_t j = 0; j < true_len; ++j) {
                    const double w = srow[j];
                    if (w == 0.0) continue;
                    const double* vj = a.v.row(j) + off;
                    for (size_t t = 0; t < dk; ++t) ci[t] += w * vj[t];
                }
            }
        }

        a.proj.zero();
        matmul_acc(a.ctx, lp.wo, a.proj);
        add_row_vector(a.proj, lp.bo);
        Matrix dropped = a.proj;
        if (training) detail::dropout_forward(dropped, a.drop1, cfg.dropout, *drop_rng);
        else a.drop1 = Matrix();
        a.r1 = a.x_in;
        for (size_t i = 0; i < a.r1.data.size(); ++i) a.r1.data[i] += dropped.data[i];
        detail::layer_norm_forward(a.r1, lp.ln1_g, lp.ln1_b, cfg.ln_eps, a.xhat1, a.istd1, a.x1);

        a.ff_pre.zero();
        matmul_acc(a.x1, lp.ffn_w1, a.ff_pre);
        add_row_vector(a.ff_pre, lp.ffn_b1);
        a.ff_act = a.ff_pre;
        for (double& v : a.ff_act.data) v = v > 0.0 ? v : 0.0;
        a.ff_out.zero();
        matmul_acc(a.ff_act, lp.ffn_w2, a.ff_out);
        add_row_vector(a.ff_out, lp.ffn_b2);
        Matrix dropped2 = a.ff_out;
        if (training) detail::dropout_forward(dropped2, a.drop2, cfg.dropout, *drop_rng);
        else a.drop2 = Matrix();
        a.r2 = a.x1;
        for (size_t i = 0; i < a.r2.data.size(); ++i) a.r2.data[i] += dropped2.data[i];
        detail::layer_norm_forward(a.r2, lp.ln2_g, lp.ln2_b, cfg.ln_eps, a.xhat2, a.istd2, a.x2);

        x = &a.x2;
    }
}

// Character-level head: per-position logits over the vocabulary.
inline const Matrix& char_head_forward(const ModelParams& p, Workspace& ws) {
    if (!p.cfg.dual_head) throw std::runtime_error("char head disabled in single-head model");
    detail::head_forward(p.char_head, ws.hidden(), ws.chead);
    return ws.chead.logits;
}

// Syllable-level head combined with the character head's logits by raw
// elementwise addition (the residual connection). With --no-residual the
// syllable head output stands alone; in single-head mode it is the only
// head.
inline const Matrix& syll_head_combine(const ModelParams& p, Workspace& ws) {
    detail::head_forward(p.syll_head, ws.hidden(), ws.shead);
    ws.logits_c = ws.shead.logits;
    if (p.cfg.dual_head && p.cfg.residual) {
        if (!ws.chead.logits.same_shape(ws.logits_c))
            throw std::runtime_error("head logits shape mismatch");
        for (size_t i = 0; i < ws.logits_c.data.size(); ++i)
            ws.logits_c.data[i] += ws.chead.logits.data[i];
    }
    return ws.logits_c;
}

// Full forward for one sequence; returns (logits_m, logits_c). logits_m is
// null for single-head models.
inline std::pair<const Matrix*, const Matrix*> model_forward(const ModelParams& p,
                                                             const TokenSeq& seq, Workspace& ws,
                                                             Rng* drop_rng = nullptr) {
    encoder_forward(p, seq.ids, seq.true_len, ws, drop_rng);
    const Matrix* lm = nullptr;
    if (p.cfg.dual_head) lm = &char_head_forward(p, ws);
    const Matrix* lc = &syll_head_combine(p, ws);
    return {lm, lc};
}

inline std::vector<int> argmax_rows(const Matrix& logits) {
    std::vector<int> out(logits.rows);
    for (size_t i = 0; i < logits.rows; ++i) {
        const double* row = logits.row(i);
        size_t best = 0;
        for (size_t j = 1; j < logits.cols; ++j)
            if (row[j] > row[best]) best = j;
        out[i] = static_cast<int>(best);
    }
    return out;
}

}  // namespace tispell
