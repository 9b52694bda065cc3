#include "ooc/costs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "ooc/error.hpp"

namespace ooc {

CostFunction::CostFunction(std::string name, ScalarFn value, ScalarFn gradient, double l_lower, double l_upper)
    : name_(std::move(name)), value_(std::move(value)), gradient_(std::move(gradient)), l_lower_(l_lower),
      l_upper_(l_upper) {}

CostFunction CostFunction::with_bounds(double l_lower, double l_upper) const {
  CostFunction f = *this;
  f.l_lower_ = l_lower;
  f.l_upper_ = l_upper;
  return f;
}

CostSuite::CostSuite(std::string descriptor, std::vector<CostFunction> members)
    : descriptor_(std::move(descriptor)), members_(std::move(members)) {
  if (members_.empty()) throw Error(ErrorKind::UnknownSuite, "cost suite must have at least one member");
}

double CostSuite::l_lower() const {
  double l = members_.front().l_lower();
  for (const auto& f : members_) l = std::min(l, f.l_lower());
  return l;
}

double CostSuite::l_upper() const {
  double l = members_.front().l_upper();
  for (const auto& f : members_) l = std::max(l, f.l_upper());
  return l;
}

double CostSuite::total_value(double s) const {
  double v = 0.0;
  for (const auto& f : members_) v += f.value(s);
  return v;
}

double CostSuite::total_gradient(double s) const {
  double g = 0.0;
  for (const auto& f : members_) g += f.gradient(s);
  return g;
}

namespace {

std::string format_center(double a) {
  std::ostringstream os;
  os.precision(17);
  os << a;
  return os.str();
}

CostSuite paper_suite() {
  std::vector<CostFunction> f;
  f.reserve(4);
  f.emplace_back(
      "(y-8)^2", [](double y) { return (y - 8.0) * (y - 8.0); }, [](double y) { return 2.0 * (y - 8.0); }, 1.0, 3.0);
  f.emplace_back(
      "y^2/(20 sqrt(y^2+1)) + y^2",
      [](double y) { return y * y / (20.0 * std::sqrt(y * y + 1.0)) + y * y; },
      [](double y) {
        const double q = y * y + 1.0;
        return y * (y * y + 2.0) / (20.0 * q * std::sqrt(q)) + 2.0 * y;
      },
      1.0, 3.0);
  f.emplace_back(
      "y^2/(80 ln(y^2+2)) + (y-5)^2",
      [](double y) { return y * y / (80.0 * std::log(y * y + 2.0)) + (y - 5.0) * (y - 5.0); },
      [](double y) {
        const double q = y * y + 2.0;
        const double lg = std::log(q);
        return (2.0 * y * lg - 2.0 * y * y * y / q) / (80.0 * lg * lg) + 2.0 * (y - 5.0);
      },
      1.0, 3.0);
  f.emplace_back(
      "ln(e^(-0.005y) + e^(0.005y)) + y^2",
      [](double y) {
        const double a = std::abs(0.005 * y);
        return a + std::log1p(std::exp(-2.0 * a)) + y * y;
      },
      [](double y) { return 0.005 * std::tanh(0.005 * y) + 2.0 * y; }, 1.0, 3.0);
  return CostSuite("paper", std::move(f));
}

std::vector<double> parse_centers(std::string_view args) {
  std::vector<double> centers;
  while (!args.empty()) {
    const auto comma = args.find(',');
    std::string_view tok = args.substr(0, comma);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
      throw Error(ErrorKind::UnknownSuite, "bad quadratic center '" + std::string(tok) + "'");
    centers.push_back(v);
    if (comma == std::string_view::npos) break;
    args.remove_prefix(comma + 1);
  }
  return centers;
}

}  // namespace

CostSuite quadratic_suite(std::span<const double> centers) {
  std::vector<CostFunction> f;
  std::string desc = "quadratic(";
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double a = centers[i];
    if (i) desc += ',';
    desc += format_center(a);
    f.emplace_back(
        "(y-" + format_center(a) + ")^2", [a](double y) { return (y - a) * (y - a); },
        [a](double y) { return 2.0 * (y - a); }, 2.0, 2.0);
  }
  desc += ')';
  return CostSuite(std::move(desc), std::move(f));
}

CostSuite builtin_suite(std::string_view name) {
  if (name == "paper") return paper_suite();
  constexpr std::string_view prefix = "quadratic(";
  if (name.starts_with(prefix) && name.ends_with(")")) {
    const auto centers = parse_centers(name.substr(prefix.size(), name.size() - prefix.size() - 1));
    return quadratic_suite(centers);
  }
  throw Error(ErrorKind::UnknownSuite, "unknown cost suite '" + std::string(name) + "'");
}

double check_gradient_fd(const CostFunction& f, std::span<const double> points, double h) {
  double worst = 0.0;
  for (double s : points) {
    const double g = f.gradient(s);
    const double fd = (f.value(s + h) - f.value(s - h)) / (2.0 * h);
    worst = std::max(worst, std::abs(g - fd) / (1.0 + std::abs(g)));
  }
  return worst;
}

BoundsCheck validate_cost_bounds(const CostFunction& f, double lo, double hi, std::size_t samples) {
  std::vector<double> s(samples), g(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    s[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples - 1);
    g[k] = f.gradient(s[k]);
  }
  for (std::size_t a = 0; a < samples; ++a) {
    for (std::size_t b = a + 1; b < samples; ++b) {
      const double ds = s[a] - s[b];
      const double dg = g[a] - g[b];
      const bool strong = dg * ds >= (f.l_lower() - 1e-9) * ds * ds;
      const bool lipschitz = std::abs(dg) <= (f.l_upper() + 1e-9) * std::abs(ds);
      if (!strong || !lipschitz) return {false, s[a], s[b]};
    }
  }
  return {};
}

double oracle_minimize(const CostSuite& suite, double lo, double hi) {
  double glo = suite.total_gradient(lo);
  double ghi = suite.total_gradient(hi);
  if (!(glo < 0.0 && ghi > 0.0)) {
    std::ostringstream msg;
    msg << "aggregate gradient does not change sign on [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::NoBracket, msg.str());
  }
  while (hi - lo > 1e-6 * (1.0 + std::abs(lo) + std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    (suite.total_gradient(mid) < 0.0 ? lo : hi) = mid;
  }

  double y = 0.5 * (lo + hi);
  double best = y;
  double best_g = std::abs(suite.total_gradient(y));
  for (int it = 0; it < 200 && best_g > 1e-12; ++it) {
    const double g = suite.total_gradient(y);
    (g < 0.0 ? lo : hi) = y;
    const double h = 1e-7 * (1.0 + std::abs(y));
    const double slope = (suite.total_gradient(y + h) - suite.total_gradient(y - h)) / (2.0 * h);
    double next = y - g / slope;
    if (!(slope > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == y) break;
    y = next;
    const double gy = std::abs(suite.total_gradient(y));
    if (gy < best_g) {
      best_g = gy;
      best = y;
    }
  }
  return best;
}

std::pair<double, double> find_bracket(const CostSuite& suite) {
  double r = 1.0;
  for (int k = 0; k < 60; ++k, r *= 2.0)
    if (suite.total_gradient(-r) < 0.0 && suite.total_gradient(r) > 0.0) return {-r, r};
  throw Error(ErrorKind::NoBracket, "no sign change of the aggregate gradient within |s| <= 2^60");
}

}  // namespace ooc
