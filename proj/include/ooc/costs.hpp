#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ooc {

/// Scalar convex cost with an analytic gradient and declared curvature bounds:
/// strong-convexity modulus `l_lower` and gradient Lipschitz constant
/// `l_upper`.
class CostFunction {
 public:
  using ScalarFn = std::function<double(double)>;

  CostFunction(std::string name, ScalarFn value, ScalarFn gradient, double l_lower, double l_upper);

  double value(double s) const { return value_(s); }
  double gradient(double s) const { return gradient_(s); }
  double l_lower() const noexcept { return l_lower_; }
  double l_upper() const noexcept { return l_upper_; }
  const std::string& name() const noexcept { return name_; }

  CostFunction with_bounds(double l_lower, double l_upper) const;

 private:
  std::string name_;
  ScalarFn value_;
  ScalarFn gradient_;
  double l_lower_;
  double l_upper_;
};

/// Ordered collection of local costs f_1..f_N. `descriptor` is the text form
/// a scenario file uses to name the suite ("paper", "quadratic(1,2,3)").
class CostSuite {
 public:
  CostSuite(std::string descriptor, std::vector<CostFunction> members);

  std::size_t size() const noexcept { return members_.size(); }
  const CostFunction& operator[](std::size_t i) const { return members_[i]; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }
  const std::string& descriptor() const noexcept { return descriptor_; }

  double l_lower() const;
  double l_upper() const;

  double total_value(double s) const;
  double total_gradient(double s) const;

 private:
  std::string descriptor_;
  std::vector<CostFunction> members_;
};

/// f_i(s) = (s - a_i)^2 with l_lower = l_upper = 2.
CostSuite quadratic_suite(std::span<const double> centers);

/// "paper" (the four-agent benchmark suite, declared bounds (1, 3)) or
/// "quadratic(a1,...,aN)". Throws UnknownSuite otherwise.
CostSuite builtin_suite(std::string_view name);

/// max_s |g(s) - central difference(s)| / (1 + |g(s)|).
double check_gradient_fd(const CostFunction& f, std::span<const double> points, double h = 1e-6);

struct BoundsCheck {
  bool ok = true;
  // First violating pair, meaningful only when !ok.
  double s1 = 0.0;
  double s2 = 0.0;
  explicit operator bool() const noexcept { return ok; }
};

/// Checks the declared strong convexity and gradient Lipschitz bounds on all
/// pairs drawn from `samples` uniform points of [lo, hi].
BoundsCheck validate_cost_bounds(const CostFunction& f, double lo, double hi, std::size_t samples);

/// Minimizer of sum f_i over a bracket where the aggregate gradient changes
/// sign. Bisection followed by safeguarded Newton; throws NoBracket.
double oracle_minimize(const CostSuite& suite, double lo, double hi);

/// Expands [-1, 1] geometrically until the aggregate gradient changes sign.
std::pair<double, double> find_bracket(const CostSuite& suite);

}  // namespace ooc
