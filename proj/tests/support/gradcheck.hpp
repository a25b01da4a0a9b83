#pragma once

// Central-difference gradient check for the MLP backward pass, computed on
// the double-precision shadow implementation.

#include <cmath>
#include <span>
#include <vector>

#include "edgeids/mlp.hpp"
#include "edgeids/rng.hpp"

namespace testutil {

struct GradCheckResult {
  double max_abs_diff = 0.0;
  double scale = 0.0; // max gradient magnitude across both methods
  double relative_error() const { return scale > 0.0 ? max_abs_diff / scale : 0.0; }
};

inline GradCheckResult gradient_check(edgeids::Target target, std::uint64_t seed,
                                      int samples = 5, double step = 1e-3) {
  using namespace edgeids;

  MlpParams<double> params;
  params.sizes = MlpTopology::for_target(target).layer_sizes;
  Rng rng(mix_seed(seed, 0x9c));
  for (std::size_t l = 0; l + 1 < params.sizes.size(); ++l) {
    const double scale = std::sqrt(2.0 / params.sizes[l]);
    params.w.emplace_back(static_cast<std::size_t>(params.sizes[l]) * params.sizes[l + 1]);
    for (double& v : params.w.back()) v = rng.gaussian() * scale;
    params.b.emplace_back(params.sizes[l + 1]);
    for (double& v : params.b.back()) v = rng.gaussian() * 0.1;
  }

  // Central differences are only valid where the loss is differentiable: a
  // probe step that pushes a hidden pre-activation across the ReLU kink
  // invalidates the estimate. Samples are screened so every hidden
  // pre-activation keeps a margin far wider than any single-parameter
  // perturbation can move it.
  const double kink_margin = 0.04;
  auto min_hidden_preact = [&](std::span<const double> x) {
    std::vector<double> cur(x.begin(), x.end());
    double min_abs = 1e300;
    for (std::size_t l = 0; l + 2 < params.sizes.size(); ++l) { // hidden layers only
      const std::size_t in = params.sizes[l];
      const std::size_t out = params.sizes[l + 1];
      std::vector<double> next(out);
      for (std::size_t j = 0; j < out; ++j) {
        double acc = params.b[l][j];
        for (std::size_t i = 0; i < in; ++i) acc += params.w[l][j * in + i] * cur[i];
        min_abs = std::min(min_abs, std::fabs(acc));
        next[j] = acc > 0.0 ? acc : 0.0;
      }
      cur = std::move(next);
    }
    return min_abs;
  };

  const int k = params.sizes.back();
  const std::size_t inputs = params.sizes.front();
  std::vector<double> xs;
  std::vector<double> candidate(inputs);
  int accepted = 0;
  for (int tries = 0; accepted < samples && tries < 200000; ++tries) {
    for (double& v : candidate) v = rng.uniform();
    if (min_hidden_preact(candidate) <= kink_margin) continue;
    xs.insert(xs.end(), candidate.begin(), candidate.end());
    ++accepted;
  }
  std::vector<int> ys(samples);
  for (int& y : ys) y = static_cast<int>(rng.bounded(k));
  std::vector<double> wts(samples);
  for (double& w : wts) w = 0.5 + rng.uniform();
  if (accepted < samples) {
    GradCheckResult failed;
    failed.max_abs_diff = 1e300;
    failed.scale = 1.0;
    return failed;
  }

  MlpParams<double> grads = MlpParams<double>::zeros_like(params);
  mlp_batch_gradients<double>(params, xs, ys, wts, grads);

  GradCheckResult result;
  auto check_block = [&](std::vector<double>& values, const std::vector<double>& analytic) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + step;
      const double up = mlp_batch_loss<double>(params, xs, ys, wts);
      values[i] = saved - step;
      const double down = mlp_batch_loss<double>(params, xs, ys, wts);
      values[i] = saved;
      const double fd = (up - down) / (2.0 * step);
      result.max_abs_diff = std::max(result.max_abs_diff, std::fabs(fd - analytic[i]));
      result.scale = std::max({result.scale, std::fabs(fd), std::fabs(analytic[i])});
    }
  };
  for (std::size_t l = 0; l < params.w.size(); ++l) {
    check_block(params.w[l], grads.w[l]);
    check_block(params.b[l], grads.b[l]);
  }
  return result;
}

} // namespace testutil
