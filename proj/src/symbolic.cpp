#include "pmdyn/symbolic.hpp"

#include "pmdyn/errors.hpp"

#include <algorithm>
#include <cctype>

namespace pmdyn {

std::string format_word(const Word& w, int k) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (k > 9 && i > 0) out += ',';
    out += std::to_string(w[i]);
  }
  return out;
}

Word parse_word(std::string_view text, int k) {
  Word w;
  auto check = [&](long v) {
    if (v < 1 || v > k)
      throw Error(ErrorCode::Parse, "symbol " + std::to_string(v) + " outside 1.." + std::to_string(k));
    w.push_back(static_cast<Symbol>(v));
  };
  if (text.find(',') != std::string_view::npos || k > 9) {
    std::string cur;
    for (char c : std::string(text) + ",") {
      if (c == ',') {
        if (cur.empty()) throw Error(ErrorCode::Parse, "empty symbol in word '" + std::string(text) + "'");
        check(std::stol(cur));
        cur.clear();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        cur += c;
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        throw Error(ErrorCode::Parse, "bad character in word '" + std::string(text) + "'");
      }
    }
    return w;
  }
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw Error(ErrorCode::Parse, "bad character in word '" + std::string(text) + "'");
    check(c - '0');
  }
  return w;
}

Interval pull_back(const PiecewiseMonotonicMap& map, Symbol j, const Interval& target) {
  const auto& p = map.policy();
  const Branch& b = map.branch(j);
  Interval hit = intersect_closed(target, b.image());
  if (hit.empty(p)) return Interval::empty_set();
  if (!p.exact && hit.lo > hit.hi) hit.hi = hit.lo;
  Real x1 = b.inverse(hit.lo);
  Real x2 = b.inverse(hit.hi);
  Interval out = b.increasing() ? Interval::closed(std::move(x1), std::move(x2)) : Interval::closed(std::move(x2), std::move(x1));
  if (!p.exact) {
    const Interval dom = b.domain().closure();
    double lo = std::clamp(out.lo.to_double(), dom.lo.to_double(), dom.hi.to_double());
    double hi = std::clamp(out.hi.to_double(), dom.lo.to_double(), dom.hi.to_double());
    out = Interval::closed(Real(lo), Real(hi));
  }
  return out;
}

Interval cylinder_interval(const PiecewiseMonotonicMap& map, const Word& w) {
  if (w.empty()) throw Error(ErrorCode::InvalidArgument, "cylinder of the empty word");
  const auto& p = map.policy();
  Interval j = map.partition_closure(w.back());
  for (std::size_t m = w.size() - 1; m-- > 0;) {
    j = pull_back(map, w[m], j);
    if (j.empty(p)) return Interval::empty_set();
  }
  return j;
}

Cylinder cylinder(const PiecewiseMonotonicMap& map, const Word& w) {
  Cylinder c{w, cylinder_interval(map, w), Admissibility::Empty};
  const auto& p = map.policy();
  if (c.interval.empty(p)) c.status = Admissibility::Empty;
  else if (c.interval.degenerate(p)) c.status = Admissibility::Degenerate;
  else c.status = Admissibility::Admissible;
  return c;
}

bool is_admissible(const PiecewiseMonotonicMap& map, const Word& w) {
  for (Symbol s : w)
    if (s < 1 || s > map.k()) return false;
  return cylinder(map, w).status == Admissibility::Admissible;
}

namespace {

// Depth-first search over admissible words, extending on the left.
template <class Visit>
void search_words(const PiecewiseMonotonicMap& map, std::size_t n, std::uint64_t budget, Visit&& visit) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "word length must be positive");
  const auto& p = map.policy();
  struct Node {
    Word suffix;
    Interval cyl;
  };
  std::vector<Node> stack;
  for (Symbol j = map.k(); j >= 1; --j) stack.push_back({Word{j}, map.partition_closure(j)});
  std::uint64_t visited = 0;
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (++visited > budget)
      throw Error(ErrorCode::BudgetExceeded,
                  "word search for n=" + std::to_string(n) + " exceeded budget " + std::to_string(budget));
    if (node.suffix.size() == n) {
      visit(node.suffix);
      continue;
    }
    for (Symbol a = map.k(); a >= 1; --a) {
      Interval c = pull_back(map, a, node.cyl);
      if (!c.positive_length(p)) continue;
      Word w;
      w.reserve(node.suffix.size() + 1);
      w.push_back(a);
      w.insert(w.end(), node.suffix.begin(), node.suffix.end());
      stack.push_back({std::move(w), std::move(c)});
    }
  }
}

}  // namespace

std::uint64_t count_words(const PiecewiseMonotonicMap& map, std::size_t n, std::uint64_t budget) {
  std::uint64_t count = 0;
  search_words(map, n, budget, [&](const Word&) { ++count; });
  return count;
}

std::vector<Word> enumerate_words(const PiecewiseMonotonicMap& map, std::size_t n, std::uint64_t budget) {
  std::vector<Word> out;
  search_words(map, n, budget, [&](const Word& w) { out.push_back(w); });
  std::sort(out.begin(), out.end());
  return out;
}

SymbolStream SymbolStream::eventually_periodic(Word prefix, Word cycle) {
  if (cycle.empty()) throw Error(ErrorCode::InvalidArgument, "periodic stream needs a nonempty cycle");
  std::size_t pre = prefix.size();
  std::size_t per = cycle.size();
  auto gen = [prefix = std::move(prefix), cycle = std::move(cycle)](std::size_t j) {
    if (j < prefix.size()) return prefix[j];
    return cycle[(j - prefix.size()) % cycle.size()];
  };
  return SymbolStream(std::move(gen), std::nullopt, Period{pre, per});
}

Symbol SymbolStream::at(std::size_t j) const {
  if (horizon_ && j >= *horizon_)
    throw Error(ErrorCode::InvalidArgument,
                "index " + std::to_string(j) + " beyond stream horizon " + std::to_string(*horizon_));
  return generator_(j);
}

Word SymbolStream::prefix(std::size_t n) const {
  Word w;
  w.reserve(n);
  for (std::size_t j = 0; j < n; ++j) w.push_back(at(j));
  return w;
}

Interval phi_point(const PiecewiseMonotonicMap& map, const SymbolStream& s, std::size_t depth) {
  if (depth == 0) throw Error(ErrorCode::InvalidArgument, "depth must be positive");
  Word w = s.prefix(depth);
  const auto& p = map.policy();
  // Forward follower sets: F_{m+1} = cl(I_{w_{m+1}}) ∩ T(F_m).
  Interval follower;
  for (std::size_t m = 0; m < w.size(); ++m) {
    if (w[m] < 1 || w[m] > map.k())
      throw Error(ErrorCode::InadmissiblePrefix, "symbol out of range", m + 1);
    Interval part = map.partition_closure(w[m]);
    follower = m == 0 ? part : intersect_closed(part, snap_to_partition(map, map.branch(w[m - 1]).image_of(follower)));
    if (!follower.positive_length(p))
      throw Error(ErrorCode::InadmissiblePrefix,
                  "prefix of length " + std::to_string(m + 1) + " is not admissible", m + 1);
  }
  return cylinder_interval(map, w);
}

}  // namespace pmdyn
