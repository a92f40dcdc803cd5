#pragma once

// Reverse-mode gradients for the toy encoder, written block by block against
// the forward pass in model.hpp and verified by the finite-difference check
// in gradcheck.hpp.

#include <cmath>
#include <vector>

#include "tispell/model.hpp"

namespace tispell {

using Gradients = ModelParams;  // same named tensor shapes, accumulated into

namespace detail {

inline void layer_norm_backward(const Matrix& dy, const Matrix& xhat,
                                const std::vector<double>& istd, const Matrix& gain,
                                Matrix& dgain, Matrix& dbias, Matrix& dx_acc) {
    const size_t L = dy.rows, d = dy.cols;
    std::vector<double> dxhat(d);
    for (size_t i = 0; i < L; ++i) {
        const double* dyr = dy.row(i);
        const double* xh = xhat.row(i);
        double m1 = 0.0, m2 = 0.0;
        for (size_t j = 0; j < d; ++j) {
            dgain.data[j] += dyr[j] * xh[j];
            dbias.data[j] += dyr[j];
            dxhat[j] = dyr[j] * gain.data[j];
            m1 += dxhat[j];
            m2 += dxhat[j] * xh[j];
        }
        m1 /= static_cast<double>(d);
        m2 /= static_cast<double>(d);
        double* dx = dx_acc.row(i);
        for (size_t j = 0; j < d; ++j) dx[j] += istd[i] * (dxhat[j] - m1 - xh[j] * m2);
    }
}

inline void apply_dropout_mask(Matrix& grad, const Matrix& mask) {
    if (mask.data.empty()) return;  // evaluation mode: identity
    for (size_t i = 0; i < grad.data.size(); ++i) grad.data[i] *= mask.data[i];
}

inline void relu_backward_inplace(Matrix& grad, const Matrix& pre) {
    for (size_t i = 0; i < grad.data.size(); ++i)
        if (pre.data[i] <= 0.0) grad.data[i] = 0.0;
}

inline void colsum_acc(const Matrix& m, Matrix& out) {
    for (size_t i = 0; i < m.rows; ++i) {
        const double* row = m.row(i);
        for (size_t j = 0; j < m.cols; ++j) out.data[j] += row[j];
    }
}

// dlogits -> gradients of one MLP head; accumulates into d_hidden.
inline void head_backward(const HeadParams& h, const HeadActs& acts, const Matrix& hidden,
                          const Matrix& dlogits, HeadParams& g, Matrix& d_hidden) {
    const size_t n_hidden = h.hidden_w.size();
    const Matrix& last_act = acts.act[n_hidden - 1];
    matmul_at_b_acc(last_act, dlogits, g.out_w);
    colsum_acc(dlogits, g.out_b);
    Matrix d_act(last_act.rows, last_act.cols);
    matmul_bt_acc(dlogits, h.out_w, d_act);
    for (size_t k = n_hidden; k-- > 0;) {
        relu_backward_inplace(d_act, acts.pre[k]);
        const Matrix& input = k > 0 ? acts.act[k - 1] : hidden;
        matmul_at_b_acc(input, d_act, g.hidden_w[k]);
        colsum_acc(d_act, g.hidden_b[k]);
        if (k > 0) {
            Matrix d_prev(input.rows, input.cols);
            matmul_bt_acc(d_act, h.hidden_w[k], d_prev);
            d_act = std::move(d_prev);
        } else {
            matmul_bt_acc(d_act, h.hidden_w[k], d_hidden);
        }
    }
}

}  // namespace detail

// Backward through the encoder stack given d(final hidden states).
inline void encoder_backward(const ModelParams& p, const Workspace& ws, const Matrix& d_hidden,
                             Gradients& g) {
    const auto& cfg = p.cfg;
    const size_t L = static_cast<size_t>(cfg.l_max);
    const size_t d = static_cast<size_t>(cfg.d_model);
    const size_t heads = static_cast<size_t>(cfg.heads);
    const size_t dk = static_cast<size_t>(cfg.d_k());
    const double scale = 1.0 / std::sqrt(static_cast<double>(dk));
    const size_t true_len = ws.true_len;

    Matrix dx = d_hidden;  // gradient w.r.t. the current layer's output
    for (size_t li = ws.layers.size(); li-- > 0;) {
        const LayerActs& a = ws.layers[li];
        const LayerParams& lp = p.layers[li];
        LayerParams& gl = g.layers[li];

        // LN2
        Matrix dr2(L, d);
        detail::layer_norm_backward(dx, a.xhat2, a.istd2, lp.ln2_g, gl.ln2_g, gl.ln2_b, dr2);
        // r2 = x1 + dropout(ff_out)
        Matrix dff_out = dr2;
        detail::apply_dropout_mask(dff_out, a.drop2);
        Matrix dx1 = dr2;
        // FFN
        Matrix dff_act(L, static_cast<size_t>(cfg.d_ff));
        matmul_at_b_acc(a.ff_act, dff_out, gl.ffn_w2);
        detail::colsum_acc(dff_out, gl.ffn_b2);
        matmul_bt_acc(dff_out, lp.ffn_w2, dff_act);
        detail::relu_backward_inplace(dff_act, a.ff_pre);
        matmul_at_b_acc(a.x1, dff_act, gl.ffn_w1);
        detail::colsum_acc(dff_act, gl.ffn_b1);
        matmul_bt_acc(dff_act, lp.ffn_w1, dx1);
        // LN1
        Matrix dr1(L, d);
        detail::layer_norm_backward(dx1, a.xhat1, a.istd1, lp.ln1_g, gl.ln1_g, gl.ln1_b, dr1);
        // r1 = x_in + dropout(proj)
        Matrix dproj = dr1;
        detail::apply_dropout_mask(dproj, a.drop1);
        Matrix dx_in = dr1;
        // output projection
        matmul_at_b_acc(a.ctx, dproj, gl.wo);
        detail::colsum_acc(dproj, gl.bo);
        Matrix dctx(L, d);
        matmul_bt_acc(dproj, lp.wo, dctx);
        // attention heads
        Matrix dq(L, d), dkm(L, d), dv(L, d);
        std::vector<double> datt(L);
        for (size_t h = 0; h < heads; ++h) {
            const Matrix& att = a.att[h];
            const size_t off = h * dk;
            for (size_t i = 0; i < L; ++i) {
                const double* arow = att.row(i);
                const double* dctx_i = dctx.row(i) + off;
                // dA = dctx_i . v_j ; softmax backward row-wise
                double dot = 0.0;
                for (size_t j = 0; j < true_len; ++j) {
                    const double* vj = a.v.row(j) + off;
                    double s = 0.0;
                    for (size_t t = 0; t < dk; ++t) s += dctx_i[t] * vj[t];
                    datt[j] = s;
                    dot += arow[j] * s;
                }
                for (size_t j = 0; j < true_len; ++j) {
                    const double w = arow[j];
                    if (w == 0.0) continue;
                    const double ds = w * (datt[j] - dot) * scale;
                    // dV_j += A_ij * dctx_i
                    double* dvj = dv.row(j) + off;
                    for (size_t t = 0; t < dk; ++t) dvj[t] += w * dctx_i[t];
                    // dQ_i += ds * K_j ; dK_j += ds * Q_i
                    const double* kj = a.k.row(j) + off;
                    const double* qi = a.q.row(i) + off;
                    double* dqi = dq.row(i) + off;
                    double* dkj = dkm.row(j) + off;
                    for (size_t t = 0; t < dk; ++t) {
                        dqi[t] += ds * kj[t];
                        dkj[t] += ds * qi[t];
                    }
                }
            }
        }
        // projections
        matmul_at_b_acc(a.x_in, dq, gl.wq);
        detail::colsum_acc(dq, gl.bq);
        matmul_bt_acc(dq, lp.wq, dx_in);
        matmul_at_b_acc(a.x_in, dkm, gl.wk);
        detail::colsum_acc(dkm, gl.bk);
        matmul_bt_acc(dkm, lp.wk, dx_in);
        matmul_at_b_acc(a.x_in, dv, gl.wv);
        detail::colsum_acc(dv, gl.bv);
        matmul_bt_acc(dv, lp.wv, dx_in);

        dx = std::move(dx_in);
    }

    // embeddings
    for (size_t i = 0; i < L; ++i) {
        const double* dr = dx.row(i);
        double* te = g.tok_emb.row(static_cast<size_t>(ws.ids[i]));
        double* pe = g.pos_emb.row(i);
        for (size_t j = 0; j < d; ++j) {
            te[j] += dr[j];
            pe[j] += dr[j];
        }
    }
}

// Backward from head logit gradients. `dlogits_m` may be null (single-head
// or when the char-head loss is absent); `dlogits_c` is the gradient of the
// combined output.
inline void model_backward(const ModelParams& p, const Workspace& ws, const Matrix* dlogits_m,
                           const Matrix* dlogits_c, Gradients& g) {
    const size_t L = static_cast<size_t>(p.cfg.l_max);
    const size_t d = static_cast<size_t>(p.cfg.d_model);
    Matrix d_hidden(L, d);

    if (p.cfg.dual_head) {
        // logits_c = logits_m + f_S(h) when the residual connection is on:
        // the char head sees both its own loss term and the residual path.
        Matrix dlm(L, static_cast<size_t>(p.vocab_size));
        if (dlogits_m) dlm = *dlogits_m;
        if (p.cfg.residual && dlogits_c)
            for (size_t i = 0; i < dlm.data.size(); ++i) dlm.data[i] += dlogits_c->data[i];
        detail::head_backward(p.char_head, ws.chead, ws.hidden(), dlm, g.char_head, d_hidden);
    }
    if (dlogits_c)
        detail::head_backward(p.syll_head, ws.shead, ws.hidden(), *dlogits_c, g.syll_head, d_hidden);

    encoder_backward(p, ws, d_hidden, g);
}

// --- cross-entropy -------------------------------------------------------------

// Mean token cross-entropy over non-pad target positions; also emits
// d(loss)/d(logits) scaled by `coeff` for the backward pass when `dlogits`
// is non-null. Positions with target [PAD] contribute nothing.
inline double softmax_xent(const Matrix& logits, const std::vector<int>& target_ids,
                           size_t* token_count = nullptr, Matrix* dlogits = nullptr,
                           double coeff = 1.0) {
    const size_t L = logits.rows, V = logits.cols;
    double total = 0.0;
    size_t tokens = 0;
    std::vector<double> prob(V);
    for (size_t i = 0; i < L; ++i) {
        const int t = target_ids[i];
        if (t == Vocab::kPad) continue;
        ++tokens;
        const double* row = logits.row(i);
        double mx = row[0];
        for (size_t j = 1; j < V; ++j) mx = std::max(mx, row[j]);
        double sum = 0.0;
        for (size_t j = 0; j < V; ++j) {
            prob[j] = std::exp(row[j] - mx);
            sum += prob[j];
        }
        const double lse = mx + std::log(sum);
        total += lse - row[static_cast<size_t>(t)];
        if (dlogits) {
            double* drow = dlogits->row(i);
            for (size_t j = 0; j < V; ++j) drow[j] += coeff * prob[j] / sum;
            drow[static_cast<size_t>(t)] -= coeff;
        }
    }
    if (token_count) *token_count = tokens;
    return total;
}

}  // namespace tispell
