#pragma once

#include "pmdyn/interval_map.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pmdyn {

/// Finite word over {1..k}.
using Word = std::vector<Symbol>;

/// Digit string when k <= 9 (e.g. "1121"), comma separated otherwise.
std::string format_word(const Word& w, int k);
Word parse_word(std::string_view text, int k);

enum class Admissibility { Admissible, Degenerate, Empty };

struct Cylinder {
  Word word;
  Interval interval;
  Admissibility status = Admissibility::Empty;
  /// Set when the cylinder collapsed to a single point: the word codes a
  /// boundary orbit and is not counted as admissible.
  bool degenerate_warning() const { return status == Admissibility::Degenerate; }
};

/// Points of cl(I_j) whose image under branch j lies in `target`
/// (closed; possibly empty or a single point).
Interval pull_back(const PiecewiseMonotonicMap& map, Symbol j, const Interval& target);

/// Closed cylinder of w, composed backwards through inverse branches.
Interval cylinder_interval(const PiecewiseMonotonicMap& map, const Word& w);
Cylinder cylinder(const PiecewiseMonotonicMap& map, const Word& w);

/// True iff the cylinder of w has positive length.
bool is_admissible(const PiecewiseMonotonicMap& map, const Word& w);

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 24;

/// Number of admissible words of length n. Words are grown by prepending
/// symbols so each search node costs one inverse-branch pull-back.
std::uint64_t count_words(const PiecewiseMonotonicMap& map, std::size_t n,
                          std::uint64_t budget = kDefaultEnumerationBudget);

/// All admissible words of length n in lexicographic order.
std::vector<Word> enumerate_words(const PiecewiseMonotonicMap& map, std::size_t n,
                                  std::uint64_t budget = kDefaultEnumerationBudget);

/// Deterministic, lazily generated symbol sequence.
class SymbolStream {
public:
  struct Period {
    std::size_t preperiod = 0;
    std::size_t period = 1;
  };

  SymbolStream(std::function<Symbol(std::size_t)> generator, std::optional<std::size_t> horizon = std::nullopt,
               std::optional<Period> period = std::nullopt)
      : generator_(std::move(generator)), horizon_(horizon), period_(period) {}

  /// prefix followed by cycle repeated forever.
  static SymbolStream eventually_periodic(Word prefix, Word cycle);

  Symbol at(std::size_t j) const;
  Word prefix(std::size_t n) const;
  std::optional<std::size_t> horizon() const { return horizon_; }
  std::optional<Period> period() const { return period_; }

private:
  std::function<Symbol(std::size_t)> generator_;
  std::optional<std::size_t> horizon_;
  std::optional<Period> period_;
};

/// Cylinder of the depth-prefix of s. Throws InadmissiblePrefix carrying the
/// first prefix length whose cylinder has no interior.
Interval phi_point(const PiecewiseMonotonicMap& map, const SymbolStream& s, std::size_t depth);

}  // namespace pmdyn
