#pragma once

// Reference computations that share no code with the library.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

// Binary words over {1,2} of length n without the factor 22.
inline std::uint64_t golden_count(std::size_t n) {
  std::uint64_t end1 = 1, end2 = 1;  // words of length 1
  if (n == 0) return 1;
  for (std::size_t i = 1; i < n; ++i) {
    std::uint64_t n1 = end1 + end2, n2 = end1;
    end1 = n1;
    end2 = n2;
  }
  return end1 + end2;
}

inline bool avoids_22(const std::vector<int>& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] == 2 && w[i + 1] == 2) return false;
  return true;
}

inline std::vector<std::vector<int>> golden_words(std::size_t n) {
  std::vector<std::vector<int>> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    std::vector<int> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = ((bits >> (n - 1 - i)) & 1) ? 2 : 1;
    if (avoids_22(w)) out.push_back(w);
  }
  return out;
}

struct ConnectorResult {
  std::size_t worst = 0;
  std::uint64_t pairs = 0;
};

// Largest minimal connector length between golden-mean words of length
// 1..max_len, found by trying every connector in increasing length.
inline ConnectorResult golden_connectors(std::size_t max_len) {
  std::vector<std::vector<int>> words;
  for (std::size_t n = 1; n <= max_len; ++n)
    for (auto& w : golden_words(n)) words.push_back(w);
  ConnectorResult r;
  for (auto& u : words)
    for (auto& v : words) {
      ++r.pairs;
      for (std::size_t len = 0;; ++len) {
        bool found = false;
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << len) && !found; ++bits) {
          std::vector<int> w = u;
          for (std::size_t i = 0; i < len; ++i) w.push_back(((bits >> i) & 1) ? 2 : 1);
          w.insert(w.end(), v.begin(), v.end());
          found = avoids_22(w);
        }
        if (found) {
          r.worst = std::max(r.worst, len);
          break;
        }
      }
    }
  return r;
}

struct Orbit {
  std::vector<mpq_class> points;  // sorted
  mpq_class mean;
};

// Periodic orbits of x -> 2x mod 1 with least period <= max_period, found as
// the rationals j / (2^p - 1), excluding the fixed point 0.
inline std::vector<Orbit> doubling_orbits(unsigned max_period) {
  std::set<std::vector<mpq_class>> seen;
  std::vector<Orbit> out;
  for (unsigned p = 1; p <= max_period; ++p) {
    long den = (1L << p) - 1;
    for (long j = 1; j < den; ++j) {
      mpq_class x(j, den);
      x.canonicalize();
      std::vector<mpq_class> orbit{x};
      mpq_class y = x;
      for (;;) {
        y *= 2;
        if (y >= 1) y -= 1;
        if (y == x) break;
        orbit.push_back(y);
      }
      std::sort(orbit.begin(), orbit.end());
      if (!seen.insert(orbit).second) continue;
      mpq_class s = 0;
      for (auto& q : orbit) s += q;
      out.push_back({orbit, s / mpq_class(static_cast<long>(orbit.size()))});
    }
  }
  return out;
}

// Birkhoff sums of x along the doubling-map point coded by `s`, computed as
// T^j x = sum_{i >= j} (s_i - 1) 2^{-(i - j + 1)} by a backward recurrence.
// Returns averages at each requested prefix length.
inline std::vector<double> doubling_block_averages(const std::vector<int>& s, const std::vector<std::size_t>& at) {
  std::vector<double> orbit(s.size());
  double y = 0.0;
  for (std::size_t i = s.size(); i-- > 0;) {
    y = ((s[i] - 1) + y) / 2.0;
    orbit[i] = y;
  }
  std::vector<double> out;
  double sum = 0.0;
  std::size_t j = 0;
  for (std::size_t n : at) {
    for (; j < n; ++j) sum += orbit[j];
    out.push_back(sum / static_cast<double>(n));
  }
  return out;
}

// Exact evaluator for maps given by affine pieces on [e_i, e_{i+1}].
struct AffinePieces {
  std::vector<mpq_class> ends, slopes, intercepts;

  int k() const { return static_cast<int>(slopes.size()); }
  // Symbol of x in an open piece, 0 on endpoints.
  int symbol(const mpq_class& x) const {
    for (int j = 0; j < k(); ++j)
      if (ends[j] < x && x < ends[j + 1]) return j + 1;
    return 0;
  }
  mpq_class apply(int j, const mpq_class& x) const { return slopes[j - 1] * x + intercepts[j - 1]; }
};

// Dense power iteration with Rayleigh-style ratio, for cross-checks only.
inline double dense_perron(const std::vector<std::vector<int>>& a) {
  std::size_t n = a.size();
  std::vector<double> v(n, 1.0), w(n);
  double rho = 0.0;
  for (int it = 0; it < 20000; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = v[i];
      for (std::size_t j = 0; j < n; ++j) s += a[i][j] * v[j];
      w[i] = s;
    }
    double m = *std::max_element(w.begin(), w.end());
    for (std::size_t i = 0; i < n; ++i) w[i] /= m;
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::fabs(w[i] - v[i]));
    v.swap(w);
    rho = m - 1.0;
    if (diff < 1e-15) break;
  }
  return rho;
}

}  // namespace oracle
