#pragma once

#include "pmdyn/diagram.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace pmdyn {

enum class EntropyMethod { WordCount, Spectral, ExactFamily };
enum class BoundDirection { LowerBound, UpperTrend, Exact };

const char* to_string(EntropyMethod m);
const char* to_string(BoundDirection d);

/// Entropy value in nats.
struct EntropyEstimate {
  double value = 0.0;
  EntropyMethod method = EntropyMethod::WordCount;
  BoundDirection direction = BoundDirection::UpperTrend;
  std::size_t param = 0;  // n for word counts, depth for spectral values
};

/// (1/n) log #admissible words of length n. When the count is an exact n-th
/// power r^n the value is log r computed directly.
/// Throws BudgetExceeded.
EntropyEstimate entropy_word_count(const PiecewiseMonotonicMap& map, std::size_t n,
                                   std::uint64_t budget = kDefaultEnumerationBudget);

/// Spectral entropy of the irreducible core of each depth truncation. One
/// diagram is built at the largest depth and truncated by level.
/// Throws NoCycle, InvalidArgument if depths are not increasing.
std::vector<EntropyEstimate> entropy_spectral_sequence(const PiecewiseMonotonicMap& map,
                                                       const std::vector<std::size_t>& depths);

/// Entropy and observable spread of one invariant subinterval.
struct ComponentReport {
  Interval interval;
  EntropyEstimate entropy;
  double spread_min = 0.0;
  double spread_max = 0.0;
  double spread() const { return spread_max - spread_min; }
};

struct IrregularEntropy {
  double value = 0.0;
  bool empty = true;
  std::vector<std::size_t> qualifying;  // indices into the report list
};

/// sup of component entropies over components whose spread exceeds tol.
IrregularEntropy irregular_entropy_formula(const std::vector<ComponentReport>& reports, double tol);

/// CSV rows method,param,value,direction.
std::string entropy_csv(const std::vector<EntropyEstimate>& estimates);

}  // namespace pmdyn
