#include "gcdstat/kernel.hpp"

#include "overloaded.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace gcdstat {

Index gcd_pair(Index m, Index n) {
  if (m < 1 || n < 1) {
    throw std::invalid_argument("gcd_pair: arguments must be positive, got (" + std::to_string(m) +
                                ", " + std::to_string(n) + ")");
  }
  return std::gcd(m, n);
}

WitnessModulus::WitnessModulus(Index n) : n_(n) {
  if (n < 1) {
    throw std::invalid_argument("witness modulus must be >= 1, got " + std::to_string(n));
  }
}

std::vector<Index> divisors(Index n) {
  if (n < 1) {
    throw std::invalid_argument("divisors: n must be positive");
  }
  std::vector<Index> low, high;
  for (Index d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      low.push_back(d);
      if (d != n / d) high.push_back(n / d);
    }
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

namespace gen {

GeneratorSpec constant(double value) { return GeneratorSpec{Constant{value}}; }

GeneratorSpec gcd_periodic(Index modulus, std::map<Index, double> table) {
  return GeneratorSpec{GcdPeriodic{modulus, std::move(table)}};
}

std::map<Index, double> divisor_table(Index modulus) {
  std::map<Index, double> table;
  for (Index d : divisors(modulus)) table[d] = static_cast<double>(d);
  return table;
}

GeneratorSpec spikes(SupportRule support, std::vector<double> heights, double base) {
  return GeneratorSpec{SparseSpike{base, std::move(heights), std::move(support)}};
}

GeneratorSpec scaled(double factor, GeneratorSpec child) {
  return GeneratorSpec{Scaled{factor, std::make_shared<const GeneratorSpec>(std::move(child))}};
}

GeneratorSpec sum(GeneratorSpec left, GeneratorSpec right) {
  return GeneratorSpec{Sum{std::make_shared<const GeneratorSpec>(std::move(left)),
                           std::make_shared<const GeneratorSpec>(std::move(right))}};
}

}  // namespace gen

namespace {

using detail::overloaded;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("invalid generator spec: " + what);
}

void validate_support(const gen::SupportRule& rule) {
  std::visit(overloaded{
                 [](const gen::ExplicitSupport& s) {
                   for (std::size_t i = 0; i < s.points.size(); ++i) {
                     require(s.points[i] >= 1, "spike support points must be >= 1");
                     require(i == 0 || s.points[i] > s.points[i - 1],
                             "spike support must be strictly increasing");
                   }
                 },
                 [](const gen::PowerSupport& s) {
                   require(std::isfinite(s.base) && s.base > 1.0, "power support base must exceed 1");
                   require(s.min_exponent >= 0, "power support min_exponent must be >= 0");
                 },
                 [](const gen::RandomSupport& s) {
                   require(std::isfinite(s.scale) && s.scale >= 0.0, "random support scale must be >= 0");
                   require(std::isfinite(s.exponent) && s.exponent >= 0.0,
                           "random support exponent must be >= 0");
                   require(s.min_index >= 1, "random support min_index must be >= 1");
                 },
             },
             rule);
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_draw(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

void fill(const GeneratorSpec& spec, std::vector<double>& out) {
  const auto length = static_cast<Index>(out.size());
  std::visit(overloaded{
                 [&](const gen::Constant& c) { std::fill(out.begin(), out.end(), c.value); },
                 [&](const gen::GcdPeriodic& g) {
                   for (Index m = 1; m <= length; ++m) {
                     out[static_cast<std::size_t>(m - 1)] = g.table.at(std::gcd(m, g.modulus));
                   }
                 },
                 [&](const gen::SparseSpike& s) {
                   std::fill(out.begin(), out.end(), s.base);
                   const auto points = support_points(s.support, length);
                   for (std::size_t k = 0; k < points.size(); ++k) {
                     out[static_cast<std::size_t>(points[k] - 1)] = s.base + s.heights[k % s.heights.size()];
                   }
                 },
                 [&](const gen::Scaled& s) {
                   fill(*s.child, out);
                   for (double& v : out) v *= s.factor;
                 },
                 [&](const gen::Sum& s) {
                   std::vector<double> right(out.size());
                   fill(*s.left, out);
                   fill(*s.right, right);
                   for (std::size_t i = 0; i < out.size(); ++i) out[i] += right[i];
                 },
             },
             spec.kind);
}

}  // namespace

void validate(const GeneratorSpec& spec) {
  std::visit(overloaded{
                 [](const gen::Constant& c) { require(std::isfinite(c.value), "constant must be finite"); },
                 [](const gen::GcdPeriodic& g) {
                   require(g.modulus >= 1, "gcd_periodic modulus must be >= 1");
                   const auto divs = divisors(g.modulus);
                   require(g.table.size() == divs.size(), "gcd_periodic table needs one entry per divisor of " +
                                                              std::to_string(g.modulus));
                   for (Index d : divs) {
                     auto it = g.table.find(d);
                     require(it != g.table.end(), "gcd_periodic table is missing divisor " + std::to_string(d));
                     require(std::isfinite(it->second), "gcd_periodic table values must be finite");
                   }
                 },
                 [](const gen::SparseSpike& s) {
                   require(std::isfinite(s.base), "spike base must be finite");
                   require(!s.heights.empty(), "spike heights must be nonempty");
                   for (double h : s.heights) require(std::isfinite(h), "spike heights must be finite");
                   validate_support(s.support);
                 },
                 [](const gen::Scaled& s) {
                   require(std::isfinite(s.factor), "scale factor must be finite");
                   require(s.child != nullptr, "scaled spec needs a child");
                   validate(*s.child);
                 },
                 [](const gen::Sum& s) {
                   require(s.left != nullptr && s.right != nullptr, "sum spec needs two children");
                   validate(*s.left);
                   validate(*s.right);
                 },
             },
             spec.kind);
}

std::vector<Index> support_points(const gen::SupportRule& rule, Index length) {
  std::vector<Index> points;
  std::visit(overloaded{
                 [&](const gen::ExplicitSupport& s) {
                   for (Index p : s.points) {
                     if (p > length) break;
                     points.push_back(p);
                   }
                 },
                 [&](const gen::PowerSupport& s) {
                   for (int j = s.min_exponent;; ++j) {
                     const double v = std::floor(std::pow(s.base, j));
                     if (v > static_cast<double>(length)) break;
                     const auto p = static_cast<Index>(v);
                     if (p >= 1 && (points.empty() || p > points.back())) points.push_back(p);
                   }
                 },
                 [&](const gen::RandomSupport& s) {
                   std::mt19937_64 engine(s.seed);
                   for (Index m = 1; m <= length; ++m) {
                     const double u = unit_draw(engine);
                     if (m < s.min_index) continue;
                     const double p = std::min(1.0, s.scale * std::pow(static_cast<double>(m), -s.exponent));
                     if (u < p) points.push_back(m);
                   }
                 },
             },
             rule);
  return points;
}

SeqSample::SeqSample(std::vector<double> values, std::optional<GeneratorSpec> recipe)
    : values_(std::move(values)), recipe_(std::move(recipe)) {
  if (values_.empty()) {
    throw std::invalid_argument("a sequence sample needs at least one value");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::invalid_argument("sequence value at index " + std::to_string(i + 1) + " is not finite");
    }
  }
}

double SeqSample::at(Index m) const {
  if (m < 1 || m > length()) {
    throw std::out_of_range("index " + std::to_string(m) + " outside 1.." + std::to_string(length()));
  }
  return (*this)[m];
}

SeqSample generate(const GeneratorSpec& spec, Index length) {
  if (length < 1) {
    throw std::invalid_argument("sample length must be >= 1");
  }
  validate(spec);
  std::vector<double> values(static_cast<std::size_t>(length));
  fill(spec, values);
  return SeqSample(std::move(values), spec);
}

double deviation(const SeqSample& x, Index m, WitnessModulus n) {
  const double xm = x.at(m);
  return std::abs(xm - x[std::gcd(m, n.value())]);
}

SeqSample scale_sample(const SeqSample& x, double c) {
  std::vector<double> values(x.values().begin(), x.values().end());
  for (double& v : values) v *= c;
  std::optional<GeneratorSpec> recipe;
  if (x.recipe()) recipe = gen::scaled(c, *x.recipe());
  return SeqSample(std::move(values), std::move(recipe));
}

SeqSample add_samples(const SeqSample& x, const SeqSample& y) {
  if (x.length() != y.length()) {
    throw std::invalid_argument("add_samples: lengths differ");
  }
  std::vector<double> values(x.values().begin(), x.values().end());
  for (Index m = 1; m <= y.length(); ++m) values[static_cast<std::size_t>(m - 1)] += y[m];
  std::optional<GeneratorSpec> recipe;
  if (x.recipe() && y.recipe()) recipe = gen::sum(*x.recipe(), *y.recipe());
  return SeqSample(std::move(values), std::move(recipe));
}

}  // namespace gcdstat
