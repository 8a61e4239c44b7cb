#pragma once

#include <functional>
#include <vector>

namespace sforge::quadrature {

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
};

// Adaptive Gauss-Kronrod 15(7) with interval bisection.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10, int max_subdivisions = 4000);

// Running integral F(t) = int_{nodes.front()}^{t} f, with prefix values
// accumulated once per mesh interval and the tail segment integrated on
// demand. The mesh is meant to be the accepted-step mesh of the ODE solve
// whose interpolants appear in f.
class CumulativeIntegral {
public:
  CumulativeIntegral() = default;
  CumulativeIntegral(std::function<double(double)> f, std::vector<double> nodes,
                     double abs_tol = 1e-12);

  double operator()(double t) const;
  double front() const { return nodes_.front(); }
  double back() const { return nodes_.back(); }

private:
  std::function<double(double)> f_;
  std::vector<double> nodes_;
  std::vector<double> prefix_;
  double tol_ = 1e-12;
};

}  // namespace sforge::quadrature
