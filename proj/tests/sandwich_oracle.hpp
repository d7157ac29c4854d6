#pragma once

// Direct substitution into the sandwich inequalities.

#include <algorithm>
#include <numeric>
#include <string>

#include "urysohn/sandwich.hpp"

namespace oracle {

// Empty when every inequality holds; otherwise the first failure. The
// staggered bands are read in order of descending targets (ties by index).
inline std::string sandwich_failure(const urysohn::SandwichProblem& p, const urysohn::SandwichSolution& s,
                                    bool staggered) {
  using urysohn::Rat;
  const auto k = p.k();
  const unsigned l = p.level;
  Rat unit = Rat(1) / Rat(static_cast<long>(k) << (l + 1));
  std::vector<std::size_t> order(k - 1);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    Rat ta = p.ideal(k - 1, a), tb = p.ideal(k - 1, b);
    return ta != tb ? ta > tb : a < b;
  });
  for (std::size_t j = 0; j + 1 < k; ++j) {
    auto i = order[j];
    Rat t = p.ideal(k - 1, i);
    Rat lo = staggered ? t + unit * Rat(2 * static_cast<long>(j) + 1) : t + unit;
    Rat hi = staggered ? t + unit * Rat(2 * static_cast<long>(j) + 2) : t + Rat(2) * unit * Rat(static_cast<long>(k));
    if (s.eta[i] < lo || s.eta[i] > hi) return "band at " + std::to_string(i + 1);
  }
  for (std::size_t i = 0; i + 1 < k; ++i)
    for (std::size_t j = 0; j + 1 < k; ++j) {
      if (i == j) continue;
      const Rat& d = p.anchors(i, j);
      if (s.eta[i] > s.eta[j] + d || d > s.eta[i] + s.eta[j]) return "triangle at " + std::to_string(i + 1);
    }
  if (p.has_prev) {
    Rat want = Rat(1) / Rat(1L << l);
    if (!s.link || *s.link != want) return "link";
    for (std::size_t i = 0; i + 1 < k; ++i) {
      const Rat& d = p.anchors(k - 1, i);
      if (s.eta[i] > want + d || want > s.eta[i] + d || d > s.eta[i] + want) return "link triangle";
    }
  }
  return "";
}

}  // namespace oracle
