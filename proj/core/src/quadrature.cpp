#include "sforge/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sforge/errors.hpp"

namespace sforge::quadrature {
namespace {

// Gauss-Kronrod 15-point nodes/weights on [-1,1]; the embedded 7-point Gauss
// rule uses the odd-index abscissae.
constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
  double kronrod;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(c);
  double result_g = wg[3] * fc;
  double result_k = wgk[7] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * xgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    result_k += wgk[j] * (f1 + f2);
    if (j % 2 == 1) result_g += wg[j / 2] * (f1 + f2);
  }
  result_k *= half;
  result_g *= half;
  return {result_k, std::abs(result_k - result_g)};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_subdivisions) {
  if (a == b) return {0.0, 0.0, 0};
  struct Panel {
    double a, b, value, error;
  };
  PanelResult first = gk15(f, a, b);
  std::vector<Panel> panels{{a, b, first.kronrod, first.error}};
  int splits = 0;
  auto total_error = [&] {
    double e = 0.0;
    for (const auto& p : panels) e += p.error;
    return e;
  };
  while (total_error() > abs_tol) {
    if (splits++ > max_subdivisions)
      throw NumericalError("quadrature: failed to converge to abs_tol=" +
                           std::to_string(abs_tol));
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const Panel& l, const Panel& r) { return l.error < r.error; });
    const Panel p = *worst;
    panels.erase(worst);
    const double mid = 0.5 * (p.a + p.b);
    PanelResult left = gk15(f, p.a, mid);
    PanelResult right = gk15(f, mid, p.b);
    panels.push_back({p.a, mid, left.kronrod, left.error});
    panels.push_back({mid, p.b, right.kronrod, right.error});
  }
  Result out;
  out.subdivisions = splits;
  out.error_estimate = total_error();
  // Sum smallest-magnitude first for reproducible rounding.
  std::sort(panels.begin(), panels.end(),
            [](const Panel& l, const Panel& r) { return l.a < r.a; });
  for (const auto& p : panels) out.value += p.value;
  return out;
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f,
                                       std::vector<double> nodes, double abs_tol)
    : f_(std::move(f)), nodes_(std::move(nodes)), tol_(abs_tol) {
  prefix_.resize(nodes_.size(), 0.0);
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    const Result r = integrate(f_, nodes_[i - 1], nodes_[i], tol_);
    prefix_[i] = prefix_[i - 1] + r.value;
  }
}

double CumulativeIntegral::operator()(double t) const {
  const bool forward = nodes_.back() >= nodes_.front();
  auto cmp = [forward](double x, double y) { return forward ? x < y : x > y; };
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t, cmp);
  std::size_t idx = static_cast<std::size_t>(std::distance(nodes_.begin(), it));
  if (idx >= nodes_.size()) idx = nodes_.size() - 1;
  if (idx > 0 && (idx == nodes_.size() || cmp(t, nodes_[idx]))) --idx;
  const Result tail = integrate(f_, nodes_[idx], t, tol_);
  return prefix_[idx] + tail.value;
}

}  // namespace sforge::quadrature
