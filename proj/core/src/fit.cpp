// Copyright 2026 The pnsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <thread>
#include <vector>

#include "pnsim/decompose.hpp"
#include "pnsim/error.hpp"
#include "pnsim/rng.hpp"

namespace pnsim {

namespace {

constexpr double kFdStep = 1e-6;

// Flat parameter layout: theta_0, phi_0, theta_1, phi_1, ..., output phases.
PhaseProgram unpack(const MeshTopology& t, const std::vector<double>& x) {
  PhaseProgram p = PhaseProgram::zeros(t);
  for (std::size_t k = 0; k < t.size(); ++k) {
    p.settings[k].theta = x[2 * k];
    p.settings[k].phi = x[2 * k + 1];
  }
  for (std::size_t r = 0; r < t.n_ports(); ++r) p.output_phases[r] = x[2 * t.size() + r];
  return p;
}

PhaseProgram unpack_wrapped(const MeshTopology& t, const std::vector<double>& x) {
  PhaseProgram p = unpack(t, x);
  for (auto& s : p.settings) s = MZISetting::wrapped(s.theta, s.phi);
  for (auto& ph : p.output_phases) ph = wrap_phase(ph);
  return p;
}

class Objective {
 public:
  Objective(const MeshTopology& t, const CMatrix& target) : topo_(t), target_(target) {}

  double operator()(const std::vector<double>& x) const {
    return 1.0 - fidelity(target_, forward_matrix(topo_, unpack(topo_, x)));
  }

  std::vector<double> gradient(std::vector<double> x) const {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double x0 = x[i];
      x[i] = x0 + kFdStep;
      const double fp = (*this)(x);
      x[i] = x0 - kFdStep;
      const double fm = (*this)(x);
      x[i] = x0;
      g[i] = (fp - fm) / (2.0 * kFdStep);
    }
    return g;
  }

 private:
  const MeshTopology& topo_;
  const CMatrix& target_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

struct RestartOutcome {
  std::vector<double> x;
  double residual = 1.0;
};

RestartOutcome run_bfgs(const Objective& f, std::vector<double> x, const FitConfig& cfg) {
  const std::size_t dim = x.size();
  std::vector<double> h(dim * dim, 0.0);  // inverse Hessian estimate
  auto reset_h = [&](double scale) {
    std::fill(h.begin(), h.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i) h[i * dim + i] = scale;
  };
  reset_h(1.0);

  double fx = f(x);
  std::vector<double> g = f.gradient(x);
  std::vector<double> d(dim), x_new(dim), s(dim), y(dim), hy(dim);
  bool scaled = false;

  for (std::size_t iter = 0; iter < cfg.max_iterations && fx > cfg.tolerance; ++iter) {
    for (std::size_t i = 0; i < dim; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < dim; ++j) acc -= h[i * dim + j] * g[j];
      d[i] = acc;
    }
    double slope = dot(d, g);
    if (!(slope < 0.0)) {
      reset_h(1.0);
      for (std::size_t i = 0; i < dim; ++i) d[i] = -g[i];
      slope = dot(d, g);
      if (!(slope < 0.0)) break;  // zero gradient
    }

    // Backtracking Armijo line search.
    double alpha = 1.0;
    double f_new = fx;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      for (std::size_t i = 0; i < dim; ++i) x_new[i] = x[i] + alpha * d[i];
      f_new = f(x_new);
      if (f_new <= fx + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (scaled) {
        // Retry once from steepest descent before giving up.
        reset_h(1.0);
        scaled = false;
        continue;
      }
      break;
    }

    const std::vector<double> g_new = f.gradient(x_new);
    for (std::size_t i = 0; i < dim; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g_new[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-18) {
      if (!scaled) {
        reset_h(sy / dot(y, y));
        scaled = true;
      }
      for (std::size_t i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j) acc += h[i * dim + j] * y[j];
        hy[i] = acc;
      }
      const double yhy = dot(y, hy);
      const double rho = 1.0 / sy;
      const double coef = (1.0 + rho * yhy) * rho;
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
          h[i * dim + j] += coef * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
    }
    x.swap(x_new);
    g = g_new;
    const double improvement = fx - f_new;
    fx = f_new;
    if (improvement >= 0.0 && improvement < 1e-16 && fx < 1e-10) break;
  }
  return {std::move(x), fx};
}

}  // namespace

FitResult fit_phases(const MeshTopology& t, const CMatrix& target, const FitConfig& cfg) {
  if (!target.is_square() || target.rows() != t.n_ports())
    throw Error("fit_phases: target shape does not match mesh");
  if (cfg.restarts == 0) throw Error("fit_phases: restarts must be >= 1");
  const Objective f(t, target);
  const std::size_t dim = 2 * t.size() + t.n_ports();

  std::vector<RestartOutcome> outcomes(cfg.restarts);
  auto run_restart = [&](std::size_t r) {
    CounterRng rng(derive_seed(cfg.seed, r), 0xf17ULL);
    std::vector<double> x0(dim);
    for (auto& v : x0) v = 2.0 * std::numbers::pi * rng.uniform();
    outcomes[r] = run_bfgs(f, std::move(x0), cfg);
  };

  const std::size_t jobs = std::clamp<std::size_t>(cfg.jobs, 1, cfg.restarts);
  if (jobs == 1) {
    for (std::size_t r = 0; r < cfg.restarts; ++r) run_restart(r);
  } else {
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < jobs; ++w)
      workers.emplace_back([&, w] {
        for (std::size_t r = w; r < cfg.restarts; r += jobs) run_restart(r);
      });
    for (auto& th : workers) th.join();
  }

  FitResult best;
  best.best_restart = 0;
  best.residual = 2.0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    if (outcomes[r].residual < best.residual) {
      best.residual = outcomes[r].residual;
      best.best_restart = r;
    }
  }
  best.program = unpack_wrapped(t, outcomes[best.best_restart].x);
  // Fidelity ignores a global phase; fold it into the output screen so the
  // program reproduces the target itself, not just its projective class.
  const Complex overlap = matmul(forward_matrix(t, best.program).adjoint(), target).trace();
  if (std::abs(overlap) > 0.0)
    for (auto& ph : best.program.output_phases) ph = wrap_phase(ph + std::arg(overlap));
  // Report the residual of the wrapped program actually returned.
  best.residual = std::max(0.0, 1.0 - fidelity(target, forward_matrix(t, best.program)));
  return best;
}

}  // namespace pnsim
