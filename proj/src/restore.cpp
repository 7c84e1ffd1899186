#include "htvseg/restore.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace htvseg::restore {

namespace {

constexpr double kZeroMagnitude = 1e-15;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool finite_state(const SolverState& s) {
  return s.g.all_finite() && s.q.all_finite() && s.v.all_finite() && s.z.all_finite() && s.b.all_finite() &&
         s.c.all_finite() && s.d.all_finite();
}

}  // namespace

void SolverParams::validate() const {
  require(std::isfinite(lambda) && lambda >= 0.0, "SolverParams: lambda must be >= 0");
  require(std::isfinite(gamma) && gamma >= 0.0, "SolverParams: gamma must be >= 0");
  require(std::isfinite(mu1) && mu1 > 0.0, "SolverParams: mu1 must be > 0");
  require(std::isfinite(mu2) && mu2 > 0.0, "SolverParams: mu2 must be > 0");
  require(std::isfinite(mu3) && mu3 > 0.0, "SolverParams: mu3 must be > 0");
  require(std::isfinite(iota) && iota > 0.0, "SolverParams: iota must be > 0");
  require(std::isfinite(epsilon) && epsilon > 0.0, "SolverParams: epsilon must be > 0");
  require(max_iter >= 1, "SolverParams: max_iter must be >= 1");
  require(inner_loops >= 1, "SolverParams: inner_loops must be >= 1");
}

SolverState SolverState::initial(const ScalarField& f, const SolverParams& params) {
  const int m = f.rows(), n = f.cols();
  SolverState s;
  s.g = f;
  s.q = Vec4Field(m, n);
  s.v = Vec2Field(m, n);
  s.b = Vec4Field(m, n);
  s.c = Vec2Field(m, n);
  s.d = ScalarField(m, n);
  s.z = f;
  if (params.constrained)
    for (double& x : s.z.values()) x = std::clamp(x, 0.0, params.iota);
  return s;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_iterations: return "max_iterations";
  }
  return "unknown";
}

std::string to_string(StopRule r) {
  return r == StopRule::all_increments ? "all" : "min";
}

StopRule parse_stop_rule(const std::string& s) {
  if (s == "all") return StopRule::all_increments;
  if (s == "min") return StopRule::min_increment;
  throw std::invalid_argument("unknown stop rule '" + s + "' (expected all or min)");
}

GSubproblem::GSubproblem(const LinearOperatorA& A, const SolverParams& params, const ScalarField& f)
    : params_(params), fft_(f.rows(), f.cols()) {
  params.validate();
  if (A.rows() != f.rows() || A.cols() != f.cols())
    throw std::invalid_argument("GSubproblem: operator grid does not match f");
  const int m = f.rows(), n = f.cols();
  const std::size_t size = f.size();

  const Spectrum second = impulse_symbol(m, n, [](const ScalarField& u) { return grid::div2(grid::grad2(u)); });
  const Spectrum first = impulse_symbol(m, n, [](const ScalarField& u) { return grid::div(grid::grad(u)); });
  const Spectrum& h = A.transfer();

  denominator_.resize(size);
  for (std::size_t k = 0; k < size; ++k) {
    double dk = std::norm(h[k]) + params.mu1 * second[k].real() - params.mu2 * first[k].real();
    if (params.constrained) dk += params.mu3;
    denominator_[k] = dk;
  }
  if (params.constrained) {
    for (double dk : denominator_)
      if (!(dk >= params.mu3 * (1.0 - 1e-12)))
        throw std::logic_error("GSubproblem: denominator dropped below mu3");
  } else {
    for (double dk : denominator_)
      if (!(std::abs(dk) > 1e-14))
        throw std::invalid_argument("GSubproblem: singular system; the degradation operator annihilates constants");
  }

  data_spectrum_ = fft_.forward(f);
  for (std::size_t k = 0; k < size; ++k) data_spectrum_[k] *= std::conj(h[k]);
}

ScalarField GSubproblem::solve(const SolverState& s) {
  ScalarField rest = grid::div2(s.q - s.b);
  rest *= params_.mu1;
  ScalarField first = grid::div(s.c - s.v);
  first *= params_.mu2;
  rest += first;
  if (params_.constrained) {
    ScalarField box = s.z - s.d;
    box *= params_.mu3;
    rest += box;
  }
  Spectrum num = fft_.forward(rest);
  for (std::size_t k = 0; k < num.size(); ++k) num[k] = (num[k] + data_spectrum_[k]) / denominator_[k];
  return fft_.inverse(num);
}

ScalarField solve_g(const SolverState& state, const SolverParams& params, const LinearOperatorA& A,
                    const ScalarField& f) {
  GSubproblem sub(A, params, f);
  return sub.solve(state);
}

template <std::size_t C>
VecField<C> shrink(const VecField<C>& h, const ScalarField& threshold) {
  require_same_shape(h.comp[0], threshold, "shrink");
  VecField<C> out(h.rows(), h.cols());
  for (std::size_t k = 0; k < threshold.size(); ++k) {
    double mag2 = 0.0;
    for (std::size_t c = 0; c < C; ++c) mag2 += h.comp[c][k] * h.comp[c][k];
    const double mag = std::sqrt(mag2);
    if (mag < kZeroMagnitude) continue;
    const double scale = std::max(mag - threshold[k], 0.0) / mag;
    for (std::size_t c = 0; c < C; ++c) out.comp[c][k] = scale * h.comp[c][k];
  }
  return out;
}

template Vec2Field shrink<2>(const Vec2Field&, const ScalarField&);
template Vec4Field shrink<4>(const Vec4Field&, const ScalarField&);

Vec4Field update_q(const SolverState& s, const SolverParams& params, const WeightField& omega) {
  ScalarField t(omega.omega.rows(), omega.omega.cols());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = params.lambda * (1.0 - omega.omega[k]) / params.mu1;
  return shrink(s.b + grid::grad2(s.g), t);
}

Vec2Field update_v(const SolverState& s, const SolverParams& params, const WeightField& omega) {
  ScalarField t(omega.omega.rows(), omega.omega.cols());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = params.gamma * omega.omega[k] / params.mu2;
  return shrink(s.c + grid::grad(s.g), t);
}

ScalarField update_z(const SolverState& s, const SolverParams& params) {
  ScalarField z = s.d + s.g;
  if (params.constrained)
    for (double& x : z.values()) x = std::max(std::min(x, params.iota), 0.0);
  return z;
}

DualUpdate update_duals(const SolverState& s) {
  DualUpdate u;
  u.b = s.b + grid::grad2(s.g) - s.q;
  u.c = s.c + grid::grad(s.g) - s.v;
  u.d = s.d + s.g - s.z;
  return u;
}

double objective(const ScalarField& g, const ScalarField& f, const LinearOperatorA& A, const SolverParams& params,
                 const WeightField& omega) {
  const ScalarField r = f - A.apply(g);
  ScalarField second_w = omega.omega;
  for (double& x : second_w.values()) x = 1.0 - x;
  return 0.5 * inner(r, r) + params.lambda * grid::norm_l1_iso(grid::grad2(g), second_w) +
         params.gamma * grid::norm_l1_iso(grid::grad(g), omega.omega);
}

void write_trace_header(std::ostream& os) {
  os << "# iteration\tresidual_q\tresidual_v\tresidual_z\tincrement_b\tincrement_c\tincrement_d\tobjective\n";
}

RestoreResult run(const ScalarField& f, const LinearOperatorA& A, const SolverParams& params,
                  const WeightField& omega, const RunOptions& options) {
  params.validate();
  require_same_shape(f, omega.omega, "restore::run");
  if (!f.all_finite()) throw std::invalid_argument("restore::run: input contains non-finite values");
  if (A.rows() != f.rows() || A.cols() != f.cols())
    throw std::invalid_argument("restore::run: operator grid does not match f");

  RestoreResult result;
  if (!A.trivial_kernel())
    result.report.warnings.emplace_back(
        "degradation operator has a (numerically) nontrivial kernel; the minimizer may not be unique");

  GSubproblem gsolve(A, params, f);
  SolverState s = SolverState::initial(f, params);

  if (options.trace) {
    write_trace_header(*options.trace);
    options.trace->precision(17);
  }

  for (int k = 0; k < params.max_iter; ++k) {
    for (int inner_pass = 0; inner_pass < params.inner_loops; ++inner_pass) {
      s.g = gsolve.solve(s);
      s.q = update_q(s, params, omega);
      s.v = update_v(s, params, omega);
      if (params.constrained) s.z = update_z(s, params);
    }

    IterationRecord rec;
    rec.iteration = k + 1;
    const Vec4Field g2 = grid::grad2(s.g);
    const Vec2Field g1 = grid::grad(s.g);
    rec.residual_q = grid::norm_l2(g2 - s.q);
    rec.residual_v = grid::norm_l2(g1 - s.v);

    DualUpdate next;
    next.b = s.b + g2 - s.q;
    next.c = s.c + g1 - s.v;
    rec.increment_b = grid::norm_l2(next.b - s.b);
    rec.increment_c = grid::norm_l2(next.c - s.c);
    s.b = std::move(next.b);
    s.c = std::move(next.c);
    if (params.constrained) {
      rec.residual_z = grid::norm_l2(s.g - s.z);
      ScalarField d_next = s.d + s.g - s.z;
      rec.increment_d = grid::norm_l2(d_next - s.d);
      s.d = std::move(d_next);
    }
    rec.objective = objective(s.g, f, A, params, omega);
    s.iteration = k + 1;

    if (!finite_state(s) || !std::isfinite(rec.objective))
      throw DivergenceError("restore::run: non-finite iterate at iteration " + std::to_string(k + 1));

    result.report.history.push_back(rec);
    if (options.trace) {
      *options.trace << rec.iteration << '\t' << rec.residual_q << '\t' << rec.residual_v << '\t' << rec.residual_z
                     << '\t' << rec.increment_b << '\t' << rec.increment_c << '\t' << rec.increment_d << '\t'
                     << rec.objective << '\n';
    }
    if (options.on_iteration) options.on_iteration(s, rec);

    std::vector<double> inc{rec.increment_b, rec.increment_c};
    if (params.constrained) inc.push_back(rec.increment_d);
    const double stop = params.stop_rule == StopRule::all_increments ? *std::max_element(inc.begin(), inc.end())
                                                                     : *std::min_element(inc.begin(), inc.end());
    if (stop <= params.epsilon) {
      result.report.reason = Termination::converged;
      break;
    }
  }

  result.restored = params.constrained ? s.z : s.g;
  result.state = std::move(s);
  return result;
}

}  // namespace htvseg::restore
