#pragma once

#include <cstddef>
#include <vector>

#include "urysohn/metric.hpp"

namespace urysohn {

using Tuple = std::vector<std::size_t>;

// Number of n-tuples over N points.
inline std::size_t tuple_count(std::size_t points, unsigned n) {
  std::size_t c = 1;
  for (unsigned i = 0; i < n; ++i) c *= points;
  return c;
}

// Lexicographic order, first coordinate most significant.
inline Tuple decode_tuple(std::size_t index, std::size_t points, unsigned n) {
  Tuple t(n);
  for (unsigned i = n; i-- > 0;) {
    t[i] = index % points;
    index /= points;
  }
  return t;
}

inline std::size_t encode_tuple(const Tuple& t, std::size_t points) {
  std::size_t index = 0;
  for (auto c : t) index = index * points + c;
  return index;
}

inline std::vector<Tuple> all_tuples(std::size_t points, unsigned n) {
  std::vector<Tuple> out;
  const auto count = tuple_count(points, n);
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(decode_tuple(i, points, n));
  return out;
}

// Sum metric on n-th powers.
inline Rat tuple_distance(const FinMetric& m, const Tuple& a, const Tuple& b) {
  Rat s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += m(a[i], b[i]);
  return s;
}

inline std::string tuple_str(const FinMetric& m, const Tuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += m.id(t[i]);
  }
  return s + ")";
}

}  // namespace urysohn
