#pragma once

// Finite-difference verification of the analytic gradients: central
// differences with eps 1e-5 against a sample of entries from every named
// parameter tensor. Run with dropout disabled so the loss is a
// deterministic function of the parameters.

#include <string>
#include <vector>

#include "tispell/backprop.hpp"
#include "tispell/train.hpp"

namespace tispell {

struct GradSample {
    std::string tensor;
    size_t index = 0;
    double analytic = 0.0;
    double numeric = 0.0;

    double rel_error() const {
        const double denom = std::max(std::abs(analytic) + std::abs(numeric), 1e-8);
        return std::abs(analytic - numeric) / denom;
    }
};

struct GradCheckReport {
    std::vector<GradSample> samples;

    double max_rel_error() const {
        double mx = 0.0;
        for (const auto& s : samples) mx = std::max(mx, s.rel_error());
        return mx;
    }
};

// Samples `per_tensor` entries of every parameter tensor (first, middle,
// last) and compares the analytic gradient of the batch loss with a central
// difference. Keep the config tiny; cost is two forward passes per sample.
inline GradCheckReport gradient_check(ModelParams& params,
                                      const std::vector<const TrainExample*>& batch,
                                      const TrainConfig& tc, double eps = 1e-5,
                                      int per_tensor = 3) {
    Workspace ws = Workspace::make(params);
    Gradients grads = ModelParams::zeros(params.cfg, params.vocab_size);
    batch_loss(params, batch, tc, ws, &grads, nullptr);

    std::vector<Matrix*> tensors;
    std::vector<std::string> names;
    params.for_each_tensor([&](const std::string& name, Matrix& m) {
        tensors.push_back(&m);
        names.push_back(name);
    });
    std::vector<Matrix*> gtensors;
    grads.for_each_tensor([&](const std::string&, Matrix& m) { gtensors.push_back(&m); });

    GradCheckReport report;
    for (size_t t = 0; t < tensors.size(); ++t) {
        Matrix& w = *tensors[t];
        if (w.data.empty()) continue;
        std::vector<size_t> picks = {0, w.data.size() / 2, w.data.size() - 1};
        picks.resize(std::min<size_t>(static_cast<size_t>(per_tensor), picks.size()));
        std::sort(picks.begin(), picks.end());
        picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
        for (size_t idx : picks) {
            const double saved = w.data[idx];
            w.data[idx] = saved + eps;
            const double up = batch_loss(params, batch, tc, ws, nullptr, nullptr).total;
            w.data[idx] = saved - eps;
            const double down = batch_loss(params, batch, tc, ws, nullptr, nullptr).total;
            w.data[idx] = saved;
            GradSample s;
            s.tensor = names[t];
            s.index = idx;
            s.analytic = gtensors[t]->data[idx];
            s.numeric = (up - down) / (2.0 * eps);
            report.samples.push_back(s);
        }
    }
    return report;
}

}  // namespace tispell
