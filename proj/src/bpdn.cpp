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

#include "csr/bpdn.hpp"

#include <stdexcept>

namespace csr {

BpdnProblem BpdnProblem::from_trace(const PixelTrace& trace, double c) {
  if (c < 0.0) throw std::invalid_argument("l1 weight must be >= 0");
  if (trace.values.size() != trace.indices.size())
    throw std::invalid_argument("trace values/indices length mismatch");
  BpdnProblem p;
  p.values = trace.values;
  p.op = std::make_shared<SampledDct>(trace.indices, trace.n_total);
  p.n_total = trace.n_total;
  p.c = c;
  return p;
}

double smooth_value_and_gradient(std::span<const double> x,
                                 const BpdnProblem& problem,
                                 std::span<double> grad) {
  const SampledDct& op = *problem.op;
  if (static_cast<std::int64_t>(x.size()) != op.cols() ||
      static_cast<std::int64_t>(grad.size()) != op.cols())
    throw std::invalid_argument("coefficient length mismatch");
  if (static_cast<std::int64_t>(problem.values.size()) != op.rows())
    throw std::invalid_argument("trace length mismatch");

  std::vector<double> residual(problem.values.size());
  op.apply(x, residual);
  double value = 0.0;
  for (std::size_t m = 0; m < residual.size(); ++m) {
    residual[m] -= problem.values[m];
    value += residual[m] * residual[m];
  }
  op.apply_adjoint(residual, grad);
  for (double& g : grad) g *= 2.0;
  return value;
}

TraceReconstruction reconstruct_trace(std::span<const double> values,
                                      std::shared_ptr<const SampledDct> op,
                                      double c, const SolverOptions& opts) {
  if (static_cast<std::int64_t>(values.size()) != op->rows())
    throw std::invalid_argument("trace length mismatch");
  if (op->rows() < 2) throw std::invalid_argument("need at least 2 samples");
  if (c < 0.0) throw std::invalid_argument("l1 weight must be >= 0");

  const std::int64_t n = op->cols();
  const SampledDct& a = *op;

  // Residual buffer reused across evaluations of one solve.
  std::vector<double> residual(values.size());
  SmoothObjective objective = [&](std::span<const double> x,
                                  std::span<double> grad) {
    a.apply(x, residual);
    double value = 0.0;
    for (std::size_t m = 0; m < residual.size(); ++m) {
      residual[m] -= values[m];
      value += residual[m] * residual[m];
    }
    a.apply_adjoint(residual, grad);
    for (double& g : grad) g *= 2.0;
    return value;
  };

  SolverOptions solver_opts = opts;
  solver_opts.l1_weight = c;
  const std::vector<double> x0(static_cast<std::size_t>(n), 0.0);
  SolverResult sol = minimize(objective, x0, solver_opts);

  TraceReconstruction out;
  out.values = idct(sol.solution);
  out.converged = sol.converged;
  out.iterations = sol.iterations;
  out.termination = sol.termination;
  return out;
}

TraceReconstruction reconstruct_trace(const PixelTrace& trace, double c,
                                      const SolverOptions& opts) {
  auto op = std::make_shared<SampledDct>(trace.indices, trace.n_total);
  return reconstruct_trace(trace.values, std::move(op), c, opts);
}

}  // namespace csr
