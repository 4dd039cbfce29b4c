#include "exactwkb/quadrature.hpp"

#include <map>
#include <mutex>

namespace exactwkb {

namespace {

GaussLegendreRule build_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

template <class T, class F>
T panel(const F& f, double a, double b, const GaussLegendreRule& rule) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(c + h * rule.nodes[i]);
  return acc * h;
}

template <class T, class F>
T adaptive(const F& f, double a, double b, double rel_tol, double abs_tol, int depth,
           const GaussLegendreRule& lo, const GaussLegendreRule& hi) {
  const T coarse = panel<T>(f, a, b, lo);
  const T fine = panel<T>(f, a, b, hi);
  if (depth <= 0 || std::abs(fine - coarse) <= std::max(abs_tol, rel_tol * std::abs(fine))) return fine;
  const double m = 0.5 * (a + b);
  return adaptive<T>(f, a, m, rel_tol, 0.5 * abs_tol, depth - 1, lo, hi) +
         adaptive<T>(f, m, b, rel_tol, 0.5 * abs_tol, depth - 1, lo, hi);
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

cplx integrate_adaptive(const std::function<cplx(double)>& f, double a, double b, double rel_tol,
                        double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  return adaptive<cplx>(f, a, b, rel_tol, abs_tol, max_depth, gauss_legendre(15), gauss_legendre(30));
}

double integrate_adaptive_real(const std::function<double(double)>& f, double a, double b,
                               double rel_tol, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  return adaptive<double>(f, a, b, rel_tol, abs_tol, max_depth, gauss_legendre(15), gauss_legendre(30));
}

double elliptic_k(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw Error(ErrorKind::InvalidArgument, "elliptic_k", "modulus must lie in [0, 1)");
  double a = 1.0, b = std::sqrt(1.0 - k * k);
  for (int it = 0; it < 64 && std::abs(a - b) > 2e-16 * a; ++it) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return pi / (2.0 * a);
}

double elliptic_e(double k) {
  if (!(k >= 0.0 && k <= 1.0)) throw Error(ErrorKind::InvalidArgument, "elliptic_e", "modulus must lie in [0, 1]");
  if (k == 1.0) return 1.0;
  // E = K (1 - sum_n 2^{n-1} c_n^2), c_0 = k
  double a = 1.0, b = std::sqrt(1.0 - k * k), c = k;
  double sum = 0.5 * c * c;
  double pow2 = 0.5;
  for (int it = 0; it < 64 && std::abs(c) > 1e-17; ++it) {
    const double an = 0.5 * (a + b);
    c = c * c / (4.0 * an);  // (a - b) / 2 without the cancellation
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  return pi / (2.0 * a) * (1.0 - sum);
}

}  // namespace exactwkb
