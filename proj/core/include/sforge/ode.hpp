#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace sforge::ode {

// Right-hand side of y' = f(t, y). `y` and `dydt` have the system dimension.
using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  // 0 = choose automatically
  long max_steps = 4'000'000;
  // Throw NumericalError if any |y_i| exceeds this (blow-up guard).
  double blowup_guard = std::numeric_limits<double>::infinity();
};

// Accepted steps plus Hermite interpolation between them.
//
// Components listed in `second_order_pairs` (position, velocity) use quintic
// Hermite for the position, with curvature taken from the stored velocity
// derivative; everything else is cubic. Positions of second-order systems
// interpolate one order better than the generic components, which the
// finite-difference residual checks downstream rely on.
class DenseSolution {
public:
  DenseSolution() = default;

  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }
  std::size_t dimension() const { return dim_; }
  std::size_t step_count() const { return times_.empty() ? 0 : times_.size() - 1; }
  const std::vector<double>& times() const { return times_; }

  void eval(double t, std::span<double> y_out) const;
  double eval(double t, std::size_t component) const;
  double eval_derivative(double t, std::size_t component) const;

private:
  friend DenseSolution integrate(std::size_t, const Rhs&, std::span<const double>,
                                 double, double, const Options&,
                                 std::span<const std::pair<int, int>>);

  std::size_t locate(double t) const;
  double component_at(std::size_t seg, double t, std::size_t comp, bool derivative) const;

  std::size_t dim_ = 0;
  double t_begin_ = 0.0, t_end_ = 0.0;
  double direction_ = 1.0;
  std::vector<double> times_;   // node times, monotone in integration direction
  std::vector<double> values_;  // node states, times_.size() * dim_
  std::vector<double> derivs_;  // node RHS values, same layout
  std::vector<int> velocity_of_;  // velocity component index for quintic, or -1
};

DenseSolution integrate(std::size_t dim, const Rhs& f, std::span<const double> y0,
                        double t0, double t1, const Options& opt = {},
                        std::span<const std::pair<int, int>> second_order_pairs = {});

}  // namespace sforge::ode
