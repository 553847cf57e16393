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

#ifndef CSR_OWLQN_HPP
#define CSR_OWLQN_HPP

#include <functional>
#include <span>
#include <vector>

namespace csr {

/// Smooth-part callback: returns f(x) and writes grad f(x) into `grad`
/// (same length as x). Must be re-entrant; the solver never calls it
/// concurrently from one instance, but many solver instances may run in
/// parallel. Must return finite values for finite input.
using SmoothObjective =
    std::function<double(std::span<const double> x, std::span<double> grad)>;

struct SolverOptions {
  int memory = 10;          // L-BFGS history size
  int max_iters = 500;
  double tol = 1e-6;        // relative objective-decrease threshold
  double l1_weight = 0.0;   // C in f(x) + C*||x||_1
  int line_search_max_steps = 50;
  double backtracking_factor = 0.5;
  double sufficient_decrease = 1e-4;  // Armijo constant

  /// Optional per-iteration hook, called after each accepted step with the
  /// iteration number, the current iterate and the composite objective.
  std::function<void(int, std::span<const double>, double)> progress;
};

enum class Termination { Tolerance, MaxIters, LineSearchFailure };

struct SolverResult {
  std::vector<double> solution;
  double final_objective = 0.0;  // f(x) + C*||x||_1 at the solution
  int iterations = 0;
  bool converged = false;
  Termination termination = Termination::Tolerance;
};

/// Orthant-wise limited-memory quasi-Newton minimization of
/// f(x) + C*||x||_1 for smooth f. With C == 0 this reduces to plain L-BFGS
/// with a backtracking Armijo line search.
///
/// A pseudo-gradient replaces the gradient of the non-smooth composite,
/// search directions come from the two-loop recursion applied to it (with
/// components disagreeing in sign zeroed out), and line-search candidates are
/// projected onto the orthant of the current iterate: coordinates that would
/// cross zero are clamped to exactly 0.0, so sparsity of the solution is
/// countable. Throws std::invalid_argument on bad options and
/// std::runtime_error when the callback produces non-finite output.
SolverResult minimize(const SmoothObjective& objective,
                      std::span<const double> x0, const SolverOptions& opts);

}  // namespace csr

#endif
