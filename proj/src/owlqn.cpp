/*
 * csrecon: compressive-sensing reconstruction of microscopy z-stacks
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "csr/owlqn.hpp"

#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <stdexcept>

namespace csr {
namespace {

double l1_norm(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += std::fabs(v);
  return acc;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

bool all_finite(std::span<const double> a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

// Steepest-descent surrogate of f(x) + C*||x||_1. At x_i != 0 the composite
// is differentiable; at x_i == 0 take the one-sided derivative of smaller
// magnitude, or 0 when the subdifferential contains 0.
void pseudo_gradient(std::span<const double> x, std::span<const double> grad,
                     double c, std::span<double> pg) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double gi = grad[i];
    if (x[i] < 0.0) {
      pg[i] = gi - c;
    } else if (x[i] > 0.0) {
      pg[i] = gi + c;
    } else if (gi + c < 0.0) {
      pg[i] = gi + c;
    } else if (gi - c > 0.0) {
      pg[i] = gi - c;
    } else {
      pg[i] = 0.0;
    }
  }
}

struct HistoryPair {
  std::vector<double> s;
  std::vector<double> y;
  double ys = 0.0;
  double alpha = 0.0;
};

void validate_options(const SolverOptions& opts) {
  if (opts.memory < 1) throw std::invalid_argument("memory must be >= 1");
  if (opts.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (opts.l1_weight < 0.0)
    throw std::invalid_argument("l1_weight must be >= 0");
  if (opts.line_search_max_steps < 1)
    throw std::invalid_argument("line_search_max_steps must be >= 1");
  if (!(opts.backtracking_factor > 0.0 && opts.backtracking_factor < 1.0))
    throw std::invalid_argument("backtracking_factor must be in (0, 1)");
  if (!(opts.sufficient_decrease > 0.0 && opts.sufficient_decrease < 1.0))
    throw std::invalid_argument("sufficient_decrease must be in (0, 1)");
}

}  // namespace

SolverResult minimize(const SmoothObjective& objective,
                      std::span<const double> x0, const SolverOptions& opts) {
  validate_options(opts);
  if (x0.empty()) throw std::invalid_argument("empty starting point");
  if (!all_finite(x0)) throw std::invalid_argument("non-finite starting point");

  const std::size_t n = x0.size();
  const double c = opts.l1_weight;

  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> grad(n), pg(n), direction(n);
  std::vector<double> x_new(n), grad_new(n), orthant(n);

  auto evaluate = [&](std::span<const double> at, std::span<double> g) {
    const double value = objective(at, g);
    if (!std::isfinite(value) || !all_finite(g))
      throw std::runtime_error("objective callback returned non-finite output");
    return value;
  };

  double fx = evaluate(x, grad) + c * l1_norm(x);
  pseudo_gradient(x, grad, c, pg);

  SolverResult result;
  result.iterations = 0;

  const double pg_norm0 = norm2(pg);
  if (pg_norm0 == 0.0) {
    // x0 already stationary (e.g. C dominates every partial derivative).
    result.solution = std::move(x);
    result.final_objective = fx;
    result.converged = true;
    result.termination = Termination::Tolerance;
    return result;
  }

  for (std::size_t i = 0; i < n; ++i) direction[i] = -pg[i];
  // Cauchy-like first trial step. Unlike 1/||pg||, this keeps the whole
  // trajectory covariant under joint scaling of the objective, data and C.
  double initial_step = fx != 0.0 ? std::fabs(fx) / (pg_norm0 * pg_norm0)
                                  : 1.0 / pg_norm0;

  std::deque<HistoryPair> history;

  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    // Orthant for this line search: the sign of x_i, or of the steepest
    // descent direction where x_i == 0.
    for (std::size_t i = 0; i < n; ++i)
      orthant[i] = (x[i] != 0.0) ? x[i] : -pg[i];

    // Backtracking search with orthant projection.
    double step = initial_step;
    bool accepted = false;
    double fx_new = fx;
    for (int ls = 0; ls < opts.line_search_max_steps; ++ls) {
      for (std::size_t i = 0; i < n; ++i) {
        double xi = x[i] + step * direction[i];
        if (xi * orthant[i] <= 0.0) xi = 0.0;  // crossed the orthant boundary
        x_new[i] = xi;
      }
      fx_new = evaluate(x_new, grad_new) + c * l1_norm(x_new);
      double dgtest = 0.0;
      for (std::size_t i = 0; i < n; ++i) dgtest += (x_new[i] - x[i]) * pg[i];
      if (fx_new <= fx + opts.sufficient_decrease * dgtest) {
        accepted = true;
        break;
      }
      step *= opts.backtracking_factor;
    }

    if (!accepted) {
      result.solution = std::move(x);
      result.final_objective = fx;
      result.converged = false;
      result.termination = Termination::LineSearchFailure;
      return result;
    }

    result.iterations = iter;
    if (opts.progress) opts.progress(iter, x_new, fx_new);

    const double decrease = fx - fx_new;
    const double denom =
        std::max(std::fabs(fx), std::numeric_limits<double>::min());
    const bool tol_reached = decrease <= opts.tol * denom;

    // Curvature pair from the projected iterate and smooth gradients.
    // The degeneracy guard is relative so that jointly rescaling the
    // objective, data and C leaves the trajectory invariant.
    HistoryPair pair;
    pair.s.resize(n);
    pair.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      pair.s[i] = x_new[i] - x[i];
      pair.y[i] = grad_new[i] - grad[i];
    }
    pair.ys = dot(pair.y, pair.s);
    if (pair.ys > 1e-10 * norm2(pair.s) * norm2(pair.y)) {
      history.push_back(std::move(pair));
      if (static_cast<int>(history.size()) > opts.memory)
        history.pop_front();
    }

    x.swap(x_new);
    grad.swap(grad_new);
    fx = fx_new;
    pseudo_gradient(x, grad, c, pg);

    if (tol_reached || norm2(pg) == 0.0) {
      result.solution = std::move(x);
      result.final_objective = fx;
      result.converged = true;
      result.termination = Termination::Tolerance;
      return result;
    }

    // Two-loop recursion on the pseudo-gradient.
    for (std::size_t i = 0; i < n; ++i) direction[i] = -pg[i];
    for (auto it = history.rbegin(); it != history.rend(); ++it) {
      it->alpha = dot(it->s, direction) / it->ys;
      const double a = it->alpha;
      for (std::size_t i = 0; i < n; ++i) direction[i] -= a * it->y[i];
    }
    if (!history.empty()) {
      const HistoryPair& last = history.back();
      const double yy = dot(last.y, last.y);
      if (yy > 0.0) {
        const double gamma = last.ys / yy;
        for (std::size_t i = 0; i < n; ++i) direction[i] *= gamma;
      }
      for (auto& h : history) {
        const double beta = dot(h.y, direction) / h.ys;
        const double coeff = h.alpha - beta;
        for (std::size_t i = 0; i < n; ++i) direction[i] += coeff * h.s[i];
      }
    }

    // Keep only components that agree in sign with the steepest descent
    // direction; fall back to -pg if the constrained direction vanishes.
    bool any_nonzero = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (direction[i] * pg[i] >= 0.0) {
        direction[i] = 0.0;
      } else {
        any_nonzero = true;
      }
    }
    if (!any_nonzero)
      for (std::size_t i = 0; i < n; ++i) direction[i] = -pg[i];

    initial_step = 1.0;
  }

  result.solution = std::move(x);
  result.final_objective = fx;
  result.converged = false;
  result.termination = Termination::MaxIters;
  return result;
}

}  // namespace csr
