#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "urysohn/certificate.hpp"
#include "urysohn/metric.hpp"

namespace urysohn {

// Metric data for one approximation step of a new point.
//   ideal:   d_1..d_k, the new point d_k last
//   anchors: realized approximants of d_1..d_{k-1}, then the previous
//            approximant of d_k when has_prev
struct SandwichProblem {
  FinMetric ideal;
  FinMetric anchors;
  unsigned level = 1;
  bool has_prev = false;

  std::size_t k() const { return ideal.size(); }
  Rat target(std::size_t i) const { return ideal(k() - 1, i); }
  std::size_t prev_index() const { return k() - 1; }
};

enum class SandwichMethod { Bands, UniformOffset };

struct SandwichSolution {
  std::vector<std::size_t> order;  // position j -> anchor index, targets descending
  std::vector<Rat> gamma;          // per anchor index
  std::vector<Rat> eta;            // per anchor index
  std::optional<Rat> link;
  SandwichMethod method = SandwichMethod::Bands;
};

// Band for the j-th position (1-based) of the descending order.
inline std::pair<Rat, Rat> gamma_band(std::size_t j, std::size_t k, unsigned l) {
  Rat unit = Rat::dyadic(l + 1) / Rat(static_cast<long>(k));
  return {unit * Rat(static_cast<long>(2 * j - 1)), unit * Rat(static_cast<long>(2 * j))};
}

inline std::vector<std::size_t> descending_targets(const SandwichProblem& p) {
  std::vector<std::size_t> order(p.k() - 1);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p.target(a) > p.target(b); });
  return order;
}

inline void check_sandwich_shape(const SandwichProblem& p) {
  if (p.k() == 0) throw PreconditionError("ideal space is empty");
  if (p.level == 0) throw PreconditionError("level starts at 1");
  if (p.anchors.size() != p.k() - 1 + (p.has_prev ? 1 : 0))
    throw PreconditionError("anchor count does not match the ideal space");
}

// Returns a description of the first violated hypothesis, if any.
inline std::optional<std::string> sandwich_hypothesis(const SandwichProblem& p) {
  check_sandwich_shape(p);
  const auto k = p.k();
  const unsigned l = p.level;
  Rat drift = Rat::dyadic(l + static_cast<unsigned>(k) + 1);
  for (std::size_t i = 0; i + 1 < k; ++i)
    for (std::size_t j = i + 1; j + 1 < k; ++j)
      if (!(abs(p.anchors(i, j) - p.ideal(i, j)) < drift))
        return "anchor drift at (" + p.ideal.id(i) + "," + p.ideal.id(j) + ") is not below " + drift.str();
  if (p.has_prev && l > 1) {
    // Band of the previous step, widened by the gap between consecutive anchors.
    Rat slack = Rat::dyadic(l + static_cast<unsigned>(k) + 1);
    for (std::size_t i = 0; i + 1 < k; ++i) {
      Rat lo = p.target(i) + Rat::dyadic(l) / Rat(static_cast<long>(k)) - slack;
      Rat hi = p.target(i) + Rat::dyadic(l - 1) + slack;
      Rat v = p.anchors(p.prev_index(), i);
      if (v < lo || v > hi) return "previous approximant outside its band at " + p.ideal.id(i);
    }
  }
  return std::nullopt;
}

// Every inequality the solution promises, with exact sides.
inline std::vector<CheckRecord> sandwich_checks(const SandwichProblem& p, const SandwichSolution& s,
                                                const std::string& tag = "sandwich") {
  std::vector<CheckRecord> out;
  const auto k = p.k();
  const unsigned l = p.level;
  auto name = [&](const std::string& what) { return tag + "." + what; };
  if (s.method == SandwichMethod::Bands) {
    for (std::size_t j = 1; j <= s.order.size(); ++j) {
      auto i = s.order[j - 1];
      auto [lo, hi] = gamma_band(j, k, l);
      auto pos = std::to_string(j);
      out.push_back(make_check(name("gamma_lo." + pos), lo, "<=", s.gamma[i]));
      out.push_back(make_check(name("gamma_hi." + pos), s.gamma[i], "<=", hi));
      out.push_back(make_check(name("eta." + pos), s.eta[i], "=", p.target(i) + s.gamma[i]));
      if (j > 1) out.push_back(make_check(name("order." + pos), p.target(i), "<=", p.target(s.order[j - 2])));
    }
  } else {
    for (std::size_t i = 0; i + 1 < k; ++i) {
      auto pos = std::to_string(i + 1);
      out.push_back(make_check(name("band_lo." + pos), p.target(i) + Rat::dyadic(l + 1) / Rat(static_cast<long>(k)),
                               "<=", s.eta[i]));
      out.push_back(make_check(name("band_hi." + pos), s.eta[i], "<=", p.target(i) + Rat::dyadic(l)));
    }
  }
  for (std::size_t i = 0; i + 1 < k; ++i) {
    out.push_back(make_check(name("positive." + std::to_string(i + 1)), Rat(0), "<", s.eta[i]));
    for (std::size_t j = i + 1; j + 1 < k; ++j) {
      auto pair = std::to_string(i + 1) + "_" + std::to_string(j + 1);
      out.push_back(make_check(name("lower." + pair), abs(s.eta[i] - s.eta[j]), "<=", p.anchors(i, j)));
      out.push_back(make_check(name("upper." + pair), p.anchors(i, j), "<=", s.eta[i] + s.eta[j]));
    }
  }
  if (p.has_prev) {
    Rat want = Rat::dyadic(l);
    out.push_back(make_check(name("link"), s.link.value_or(Rat(-1)), "=", want));
    for (std::size_t i = 0; i + 1 < k; ++i) {
      auto pos = std::to_string(i + 1);
      const Rat& dp = p.anchors(p.prev_index(), i);
      out.push_back(make_check(name("link_lower." + pos), abs(s.eta[i] - want), "<=", dp));
      out.push_back(make_check(name("link_upper." + pos), dp, "<=", s.eta[i] + want));
    }
  }
  return out;
}

namespace detail {

inline bool sandwich_feasible(const SandwichProblem& p, const std::vector<Rat>& eta, const std::optional<Rat>& link) {
  const auto k = p.k();
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (eta[i].sign() <= 0) return false;
    for (std::size_t j = i + 1; j + 1 < k; ++j) {
      const Rat& d = p.anchors(i, j);
      if (abs(eta[i] - eta[j]) > d || d > eta[i] + eta[j]) return false;
    }
    if (link) {
      const Rat& d = p.anchors(p.prev_index(), i);
      if (abs(eta[i] - *link) > d || d > eta[i] + *link) return false;
    }
  }
  return true;
}

}  // namespace detail

// Staggered-band solution. Tries the left end of every band first, then a
// grid of five values per band in lexicographic order.
inline SandwichSolution solve_sandwich(const SandwichProblem& p) {
  if (auto why = sandwich_hypothesis(p)) throw PreconditionError(*why);
  const auto k = p.k();
  SandwichSolution s;
  s.order = descending_targets(p);
  s.gamma.assign(k - 1, Rat(0));
  s.eta.assign(k - 1, Rat(0));
  if (p.has_prev) s.link = Rat::dyadic(p.level);
  if (k == 1) return s;

  constexpr long grid = 4;
  std::vector<long> pick(k - 1, 0);
  for (;;) {
    for (std::size_t j = 1; j < k; ++j) {
      auto [lo, hi] = gamma_band(j, k, p.level);
      auto i = s.order[j - 1];
      s.gamma[i] = lo + (hi - lo) * Rat(pick[j - 1], grid);
      s.eta[i] = p.target(i) + s.gamma[i];
    }
    if (detail::sandwich_feasible(p, s.eta, s.link)) return s;
    std::size_t pos = k - 1;
    while (pos > 0 && pick[pos - 1] == grid) pick[--pos] = 0;
    if (pos == 0) break;
    ++pick[pos - 1];
  }
  std::string dump = "no staggered-band solution at level " + std::to_string(p.level) + " with targets";
  for (std::size_t i = 0; i + 1 < k; ++i) dump += " " + p.target(i).str();
  dump += "; anchor distances";
  for (std::size_t i = 0; i < p.anchors.size(); ++i)
    for (std::size_t j = i + 1; j < p.anchors.size(); ++j) dump += " " + p.anchors(i, j).str();
  throw InfeasibleError(dump);
}

// Katetov-style fallback: eta_i = min_j (t_j + c + d(u_i, u_j)) for an offset c
// between 1/2 and 1 times 2^-l, which lands every eta in the band
// [t_i + 1/(k 2^(l+1)), t_i + 2^-l] when the anchors drift little.
inline SandwichSolution solve_uniform_offset(const SandwichProblem& p) {
  check_sandwich_shape(p);
  const auto k = p.k();
  const unsigned l = p.level;
  SandwichSolution s;
  s.method = SandwichMethod::UniformOffset;
  s.order.resize(k - 1);
  std::iota(s.order.begin(), s.order.end(), std::size_t{0});
  if (p.has_prev) s.link = Rat::dyadic(l);
  for (long num : {6L, 5L, 7L, 4L, 8L}) {
    Rat c = Rat::dyadic(l) * Rat(num, 8);
    s.eta.assign(k - 1, Rat(0));
    s.gamma.assign(k - 1, Rat(0));
    for (std::size_t i = 0; i + 1 < k; ++i) {
      std::optional<Rat> best;
      for (std::size_t j = 0; j + 1 < k; ++j) {
        Rat v = p.target(j) + c + p.anchors(i, j);
        if (!best || v < *best) best = v;
      }
      s.eta[i] = *best;
      s.gamma[i] = s.eta[i] - p.target(i);
    }
    if (detail::sandwich_feasible(p, s.eta, s.link) && all_ok(sandwich_checks(p, s))) return s;
  }
  throw InfeasibleError("no uniform offset solution at level " + std::to_string(l));
}

}  // namespace urysohn
