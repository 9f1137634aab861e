#include "pmdyn/entropy.hpp"

#include "pmdyn/errors.hpp"

#include <cmath>
#include <sstream>

namespace pmdyn {

const char* to_string(EntropyMethod m) {
  switch (m) {
    case EntropyMethod::WordCount: return "word-count";
    case EntropyMethod::Spectral: return "spectral";
    case EntropyMethod::ExactFamily: return "exact-family";
  }
  return "?";
}

const char* to_string(BoundDirection d) {
  switch (d) {
    case BoundDirection::LowerBound: return "lower-bound";
    case BoundDirection::UpperTrend: return "upper-trend";
    case BoundDirection::Exact: return "exact";
  }
  return "?";
}

namespace {

// r with r^n == count, if any.
std::optional<std::uint64_t> integer_root(std::uint64_t count, std::size_t n) {
  auto guess = static_cast<std::uint64_t>(std::llround(std::pow(static_cast<double>(count), 1.0 / static_cast<double>(n))));
  for (std::uint64_t r = guess > 0 ? guess - 1 : 0; r <= guess + 1; ++r) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), r, n);
    if (p == mpz_class(std::to_string(count))) return r;
  }
  return std::nullopt;
}

}  // namespace

EntropyEstimate entropy_word_count(const PiecewiseMonotonicMap& map, std::size_t n, std::uint64_t budget) {
  std::uint64_t count = count_words(map, n, budget);
  EntropyEstimate e{0.0, EntropyMethod::WordCount, BoundDirection::UpperTrend, n};
  if (count == 0) return e;
  if (auto r = integer_root(count, n)) e.value = std::log(static_cast<double>(*r));
  else e.value = std::log(static_cast<double>(count)) / static_cast<double>(n);
  return e;
}

std::vector<EntropyEstimate> entropy_spectral_sequence(const PiecewiseMonotonicMap& map,
                                                       const std::vector<std::size_t>& depths) {
  std::vector<EntropyEstimate> out;
  if (depths.empty()) return out;
  for (std::size_t i = 1; i < depths.size(); ++i)
    if (depths[i] <= depths[i - 1]) throw Error(ErrorCode::InvalidArgument, "depths must be increasing");
  auto d = build_diagram(map, depths.back());
  for (std::size_t depth : depths) {
    auto core = irreducible_core(level_truncation(d, depth));
    out.push_back({spectral_radius_entropy(core), EntropyMethod::Spectral, BoundDirection::LowerBound, depth});
  }
  return out;
}

IrregularEntropy irregular_entropy_formula(const std::vector<ComponentReport>& reports, double tol) {
  IrregularEntropy r;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (!(reports[i].spread() > tol)) continue;
    r.qualifying.push_back(i);
    if (r.empty || reports[i].entropy.value > r.value) r.value = reports[i].entropy.value;
    r.empty = false;
  }
  return r;
}

std::string entropy_csv(const std::vector<EntropyEstimate>& estimates) {
  std::ostringstream os;
  os.precision(17);
  os << "method,param,value,direction\n";
  for (const auto& e : estimates)
    os << to_string(e.method) << ',' << e.param << ',' << e.value << ',' << to_string(e.direction) << '\n';
  return os.str();
}

}  // namespace pmdyn
