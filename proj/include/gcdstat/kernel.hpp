#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace gcdstat {

// Sequence positions are 1-based; index 0 never exists.
using Index = std::int64_t;

// Greatest common divisor of two positive integers.
// Throws std::invalid_argument when either argument is < 1.
Index gcd_pair(Index m, Index n);

// The integer n whose gcd indexing x_m -> x_gcd(m,n) is tested.
class WitnessModulus {
 public:
  explicit WitnessModulus(Index n);

  Index value() const noexcept { return n_; }

  friend bool operator==(WitnessModulus, WitnessModulus) = default;

 private:
  Index n_;
};

struct GeneratorSpec;
using GeneratorPtr = std::shared_ptr<const GeneratorSpec>;

namespace gen {

struct Constant {
  double value = 0.0;
};

// x_m = table[gcd(m, modulus)]; the table has one entry per divisor of modulus.
struct GcdPeriodic {
  Index modulus = 1;
  std::map<Index, double> table;
};

struct ExplicitSupport {
  std::vector<Index> points;
};

// {floor(base^j) : j >= min_exponent}
struct PowerSupport {
  double base = 2.0;
  int min_exponent = 1;
};

// m >= min_index is included with probability min(1, scale * m^-exponent),
// one draw per index from a seeded mt19937_64.
struct RandomSupport {
  double scale = 1.0;
  double exponent = 0.5;
  Index min_index = 1;
  std::uint64_t seed = 0;
};

using SupportRule = std::variant<ExplicitSupport, PowerSupport, RandomSupport>;

// x_m = base + heights[k mod |heights|] when m is the k-th support point, else base.
struct SparseSpike {
  double base = 0.0;
  std::vector<double> heights{1.0};
  SupportRule support = PowerSupport{};
};

struct Scaled {
  double factor = 1.0;
  GeneratorPtr child;
};

struct Sum {
  GeneratorPtr left;
  GeneratorPtr right;
};

}  // namespace gen

struct GeneratorSpec {
  std::variant<gen::Constant, gen::GcdPeriodic, gen::SparseSpike, gen::Scaled, gen::Sum> kind;
};

namespace gen {

GeneratorSpec constant(double value);
GeneratorSpec gcd_periodic(Index modulus, std::map<Index, double> table);
// Table d -> d for every divisor d of modulus.
std::map<Index, double> divisor_table(Index modulus);
GeneratorSpec spikes(SupportRule support, std::vector<double> heights, double base = 0.0);
GeneratorSpec scaled(double factor, GeneratorSpec child);
GeneratorSpec sum(GeneratorSpec left, GeneratorSpec right);

}  // namespace gen

std::vector<Index> divisors(Index n);

// Throws std::invalid_argument describing the first violated constraint.
void validate(const GeneratorSpec& spec);

// Support points of a spike rule that are <= length, strictly increasing.
std::vector<Index> support_points(const gen::SupportRule& rule, Index length);

// Finite truncation x_1..x_T of a real sequence.
class SeqSample {
 public:
  explicit SeqSample(std::vector<double> values, std::optional<GeneratorSpec> recipe = std::nullopt);

  Index length() const noexcept { return static_cast<Index>(values_.size()); }

  // Unchecked 1-based access.
  double operator[](Index m) const noexcept { return values_[static_cast<std::size_t>(m - 1)]; }
  // Checked 1-based access; throws std::out_of_range.
  double at(Index m) const;

  std::span<const double> values() const noexcept { return values_; }
  const std::optional<GeneratorSpec>& recipe() const noexcept { return recipe_; }

 private:
  std::vector<double> values_;
  std::optional<GeneratorSpec> recipe_;
};

SeqSample generate(const GeneratorSpec& spec, Index length);

// |x_m - x_gcd(m,n)|. Throws std::out_of_range unless 1 <= m <= T.
double deviation(const SeqSample& x, Index m, WitnessModulus n);

// Pointwise c*x and x+y (same length required). The recipe is carried along when present.
SeqSample scale_sample(const SeqSample& x, double c);
SeqSample add_samples(const SeqSample& x, const SeqSample& y);

}  // namespace gcdstat
