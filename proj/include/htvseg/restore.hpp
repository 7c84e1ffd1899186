#pragma once

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "htvseg/degrade.hpp"
#include "htvseg/fft.hpp"
#include "htvseg/field.hpp"
#include "htvseg/grid.hpp"
#include "htvseg/weight.hpp"

/// Stage 1: alternating split Bregman iteration for the box-constrained hybrid
/// first/second-order TV restoration
///
///   min_g  1/2 |f - A g|^2 + lambda sum (1 - w) |grad2 g| + gamma sum w |grad g|
///          subject to 0 <= g <= iota
///
/// with splittings q = grad2 g, v = grad g, z = g and Bregman variables b, c, d.
namespace htvseg::restore {

/// When to stop on dual increments |b+ - b|, |c+ - c|, |d+ - d|.
enum class StopRule {
  all_increments,  // every increment <= epsilon
  min_increment,   // the smallest increment <= epsilon
};

struct SolverParams {
  double lambda = 0.1;  // second-order weight
  double gamma = 1.95;  // first-order weight
  double mu1 = 10.0;    // penalty on q = grad2 g
  double mu2 = 100.0;   // penalty on v = grad g
  double mu3 = 10.0;    // penalty on z = g
  double iota = 1.0;    // box upper bound
  double epsilon = 1e-6;
  int max_iter = 1000;
  bool constrained = true;  // false: drop z, d and the mu3 terms
  int inner_loops = 1;
  StopRule stop_rule = StopRule::all_increments;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct SolverState {
  ScalarField g;
  Vec4Field q;
  Vec2Field v;
  ScalarField z;
  Vec4Field b;
  Vec2Field c;
  ScalarField d;
  int iteration = 0;

  /// g = f, q = v = b = c = d = 0, z = clamp(f, 0, iota) (z = f when unconstrained).
  static SolverState initial(const ScalarField& f, const SolverParams& params);
};

enum class Termination { converged, max_iterations };

std::string to_string(Termination t);
std::string to_string(StopRule r);
/// Accepts "all" / "min".
StopRule parse_stop_rule(const std::string& s);

struct IterationRecord {
  int iteration = 0;
  double residual_q = 0.0;  // |grad2 g - q|_2
  double residual_v = 0.0;  // |grad g - v|_2
  double residual_z = 0.0;  // |g - z|_2, zero when unconstrained
  double increment_b = 0.0;
  double increment_c = 0.0;
  double increment_d = 0.0;  // zero when unconstrained
  double objective = 0.0;
};

struct ConvergenceReport {
  std::vector<IterationRecord> history;
  Termination reason = Termination::max_iterations;
  std::vector<std::string> warnings;

  int iterations() const { return static_cast<int>(history.size()); }
  const IterationRecord& last() const { return history.back(); }
};

/// Raised when an iterate stops being finite.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// FFT solver for the g-subproblem
///   [A*A + mu1 div2 grad2 - mu2 div grad + mu3 I] g
///       = A* f - mu1 div2(b - q) + mu2 div(c - v) - mu3 (d - z).
/// The symbols of div grad and div2 grad2 come from transforming the grid
/// operators' impulse responses, so they match the spatial stencils exactly.
class GSubproblem {
 public:
  GSubproblem(const LinearOperatorA& A, const SolverParams& params, const ScalarField& f);

  ScalarField solve(const SolverState& state);

  /// Real symbol of the left-hand operator; every entry is >= mu3 when
  /// constrained.
  const std::vector<double>& denominator() const { return denominator_; }

 private:
  SolverParams params_;
  Fft2d fft_;
  Spectrum data_spectrum_;  // F(A* f)
  std::vector<double> denominator_;
};

/// One-shot convenience wrapper around GSubproblem.
ScalarField solve_g(const SolverState& state, const SolverParams& params, const LinearOperatorA& A,
                    const ScalarField& f);

/// Per-pixel vector soft-thresholding: max(|h| - t, 0) h / |h|, with
/// |h| < 1e-15 mapped to the zero vector.
template <std::size_t C>
VecField<C> shrink(const VecField<C>& h, const ScalarField& threshold);

/// q = shrink(b + grad2 g, lambda (1 - w) / mu1)
Vec4Field update_q(const SolverState& state, const SolverParams& params, const WeightField& omega);
/// v = shrink(c + grad g, gamma w / mu2)
Vec2Field update_v(const SolverState& state, const SolverParams& params, const WeightField& omega);
/// z = clamp(d + g, 0, iota); plain d + g when unconstrained.
ScalarField update_z(const SolverState& state, const SolverParams& params);

struct DualUpdate {
  Vec4Field b;
  Vec2Field c;
  ScalarField d;
};

/// b + grad2 g - q, c + grad g - v, d + g - z (unit step).
DualUpdate update_duals(const SolverState& state);

/// 1/2 |f - A g|^2 + lambda sum (1 - w)|grad2 g| + gamma sum w |grad g|.
/// The box indicator is not included.
double objective(const ScalarField& g, const ScalarField& f, const LinearOperatorA& A, const SolverParams& params,
                 const WeightField& omega);

struct RunOptions {
  /// Tab-separated trace, one line per iteration:
  /// iteration, residual_q, residual_v, residual_z, increment_b, increment_c, increment_d, objective
  std::ostream* trace = nullptr;
  /// Called after each outer iteration with the updated state.
  std::function<void(const SolverState&, const IterationRecord&)> on_iteration;
};

struct RestoreResult {
  /// z when constrained, g otherwise.
  ScalarField restored;
  SolverState state;
  ConvergenceReport report;
};

/// Iterate until the dual increments satisfy params.stop_rule (|dd| is omitted
/// when unconstrained) or max_iter outer iterations. Throws DivergenceError on
/// non-finite iterates and std::invalid_argument on shape mismatch.
RestoreResult run(const ScalarField& f, const LinearOperatorA& A, const SolverParams& params,
                  const WeightField& omega, const RunOptions& options = {});

void write_trace_header(std::ostream& os);

}  // namespace htvseg::restore
