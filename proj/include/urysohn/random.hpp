#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "urysohn/cauchy.hpp"
#include "urysohn/lipschitz.hpp"
#include "urysohn/structure_k.hpp"
#include "urysohn/suitable.hpp"

namespace urysohn {

// mt19937_64 output is fixed by the standard; the reductions below avoid the
// implementation-defined distributions so seeds reproduce across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::uint64_t next() { return g_(); }
  std::size_t below(std::size_t n) { return n ? static_cast<std::size_t>(next() % n) : 0; }
  long between(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::size_t>(hi - lo + 1))); }
  bool coin(unsigned percent = 50) { return below(100) < percent; }
  Rat rat(long lo_num, long hi_num, long den) { return Rat(between(lo_num, hi_num), den); }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 g_;
};

// Shortest-path closure of random positive weights k/den, 1 <= k <= max_num.
inline FinMetric random_metric(Rng& r, std::size_t n, long den, long max_num, const std::string& prefix = "x") {
  FinMetric m;
  for (std::size_t i = 0; i < n; ++i) m.add_point(prefix + std::to_string(i + 1));
  std::vector<std::vector<Rat>> w(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) w[i][j] = w[j][i] = r.rat(1, max_num, den);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (w[i][k] + w[k][j] < w[i][j]) w[i][j] = w[i][k] + w[k][j];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, w[i][j]);
  return m;
}

// New point at Katetov distances eta_i = min_j (t_j + d(i, j)) with t_j >= 1/den,
// the t raised until t_j + t_k >= d(j, k).
inline std::vector<Rat> random_katetov(Rng& r, const FinMetric& m, long den, long max_num) {
  std::vector<Rat> t(m.size()), eta(m.size());
  for (auto& x : t) x = r.rat(1, max_num, den);
  for (std::size_t j = 0; j < m.size(); ++j)
    for (std::size_t k = j + 1; k < m.size(); ++k) t[k] = max(t[k], m(j, k) - t[j]);
  for (std::size_t i = 0; i < m.size(); ++i) {
    eta[i] = t[i];
    for (std::size_t j = 0; j < m.size(); ++j) eta[i] = min(eta[i], t[j] + m(i, j));
  }
  return eta;
}

// Fills the undefined cells in random order, each clamped into the range the
// defined cells allow.
inline PredTable random_completion(Rng& r, const FinMetric& m, unsigned n, PredTable table, long den, long max_num) {
  table.resize(tuple_count(m.size(), n));
  std::vector<std::size_t> todo;
  std::vector<std::size_t> done;
  for (std::size_t i = 0; i < table.size(); ++i) (table[i] ? done : todo).push_back(i);
  r.shuffle(todo);
  for (auto i : todo) {
    auto t = decode_tuple(i, m.size(), n);
    Rat v = r.rat(0, max_num, den);
    for (auto j : done) {
      Rat dist = tuple_distance(m, t, decode_tuple(j, m.size(), n));
      v = max(v, *table[j] - dist);
    }
    for (auto j : done) {
      Rat dist = tuple_distance(m, t, decode_tuple(j, m.size(), n));
      v = min(v, *table[j] + dist);
    }
    table[i] = v;
    done.push_back(i);
  }
  return table;
}

inline PredTable random_table(Rng& r, const FinMetric& m, unsigned n, long den, long max_num) {
  return random_completion(r, m, n, PredTable(tuple_count(m.size(), n)), den, max_num);
}

inline StructureK random_structure_k(Rng& r, std::size_t points, unsigned max_nA, long den, long max_num,
                                     const std::string& prefix = "x") {
  StructureK s;
  s.metric = random_metric(r, points, den, max_num, prefix);
  s.nA = points ? static_cast<unsigned>(r.between(1, static_cast<long>(std::min<std::size_t>(points, max_nA)))) : 0;
  for (auto k : s.slots()) s.pred[k] = random_table(r, s.metric, k.n, den, max_num);
  return s;
}

// Distinct indices from 1..span in random order.
inline std::vector<unsigned> random_index_set(Rng& r, std::size_t count, unsigned span) {
  std::vector<unsigned> all(span);
  std::iota(all.begin(), all.end(), 1u);
  r.shuffle(all);
  all.resize(count);
  return all;
}

inline BarStructureK random_bar(Rng& r, std::size_t points, unsigned max_nA, long den, long max_num) {
  BarStructureK s;
  s.metric = random_metric(r, points, den, max_num);
  s.nA = points ? static_cast<unsigned>(r.between(1, static_cast<long>(std::min<std::size_t>(points, max_nA)))) : 0;
  for (unsigned n = 1; n <= s.nA; ++n) s.index_sets[n] = random_index_set(r, s.nA + 1 - n, 9);
  for (auto k : s.slots()) s.pred[k] = random_table(r, s.metric, k.n, den, max_num);
  return s;
}

// B containing A on its first |A| points, with `extra` new points; nB is
// nA or nA + 1 within max_nA, and the embedding is the identity.
inline StructureK random_superstructure(Rng& r, const StructureK& a, std::size_t extra, unsigned max_nA, long den,
                                        long max_num, const std::string& prefix) {
  StructureK b;
  b.metric = a.metric;
  for (std::size_t e = 0; e < extra; ++e) {
    auto eta = random_katetov(r, b.metric, den, max_num);
    auto p = b.metric.add_point(fresh_id(prefix + std::to_string(e + 1), b.metric));
    for (std::size_t i = 0; i < p; ++i) b.metric.set(i, p, eta[i]);
  }
  b.nA = a.nA;
  if (b.nA < max_nA && b.nA < b.size() && r.coin()) ++b.nA;
  if (b.nA == 0 && b.size()) b.nA = 1;
  for (auto k : b.slots()) {
    PredTable t(tuple_count(b.size(), k.n));
    if (auto it = a.pred.find(k); it != a.pred.end())
      for (std::size_t i = 0; i < it->second.size(); ++i) {
        auto tup = decode_tuple(i, a.size(), k.n);
        t[encode_tuple(tup, b.size())] = it->second[i];
      }
    b.pred[k] = random_completion(r, b.metric, k.n, std::move(t), den, max_num);
  }
  return b;
}

inline CompactPresentation random_compact(Rng& r, std::size_t points, long den, long max_num) {
  CompactPresentation k;
  auto m = random_metric(r, points, den, max_num, "q");
  for (std::size_t i = 0; i < points; ++i) k.k.add_point(std::to_string(i + 1));
  for (std::size_t i = 0; i < points; ++i)
    for (std::size_t j = i + 1; j < points; ++j) k.k.set(i, j, m(i, j));
  return k;
}

inline PolishPresentation random_polish(Rng& r, std::size_t points, long den, long max_num) {
  PolishPresentation z;
  z.z = random_compact(r, points, den, max_num).k;
  return z;
}

inline SuitableFn random_suitable(Rng& r, const CompactPresentation& k, long den, long max_num) {
  std::vector<std::pair<std::size_t, Rat>> gamma;
  for (std::size_t i = 0; i < k.size(); ++i)
    if (r.coin(40)) gamma.emplace_back(i, r.rat(0, max_num, den));
  return build_suitable(gamma, k);
}

}  // namespace urysohn
