#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "urysohn/error.hpp"
#include "urysohn/rational.hpp"

namespace urysohn {

// Finite rational metric table over an ordered list of opaque point ids.
// Entries may be missing until the table is completed; the diagonal is 0.
class FinMetric {
 public:
  FinMetric() = default;
  explicit FinMetric(std::vector<std::string> ids) {
    for (auto& id : ids) add_point(std::move(id));
  }

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(std::size_t i) const { return ids_.at(i); }

  std::optional<std::size_t> index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t at(const std::string& id) const {
    auto i = index_of(id);
    if (!i) throw PreconditionError("unknown point '" + id + "'");
    return *i;
  }

  std::size_t add_point(std::string id) {
    if (index_.count(id)) throw PreconditionError("duplicate point id '" + id + "'");
    std::size_t n = ids_.size();
    for (auto& row : rows_) row.emplace_back();
    rows_.emplace_back(n + 1);
    rows_[n][n] = Rat(0);
    index_.emplace(id, n);
    ids_.push_back(std::move(id));
    return n;
  }

  void set(std::size_t i, std::size_t j, const Rat& d) {
    rows_.at(i).at(j) = d;
    rows_.at(j).at(i) = d;
  }
  // One-sided write; only used to build deliberately broken tables in tests.
  void set_directed(std::size_t i, std::size_t j, const Rat& d) { rows_.at(i).at(j) = d; }

  bool has(std::size_t i, std::size_t j) const { return rows_[i][j].has_value(); }
  const Rat& operator()(std::size_t i, std::size_t j) const {
    const auto& v = rows_[i][j];
    if (!v) throw StructuralError("missing distance d(" + ids_[i] + "," + ids_[j] + ")");
    return *v;
  }
  const std::optional<Rat>& entry(std::size_t i, std::size_t j) const { return rows_[i][j]; }

  bool total() const {
    for (const auto& row : rows_)
      for (const auto& v : row)
        if (!v) return false;
    return true;
  }

  Rat diameter() const {
    Rat best(0);
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j) best = max(best, (*this)(i, j));
    return best;
  }

  FinMetric restrict(const std::vector<std::size_t>& idx) const {
    FinMetric out;
    for (auto i : idx) out.add_point(ids_.at(i));
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b)
        if (has(idx[a], idx[b])) out.set(a, b, (*this)(idx[a], idx[b]));
    return out;
  }

  friend bool operator==(const FinMetric& a, const FinMetric& b) {
    return a.ids_ == b.ids_ && a.rows_ == b.rows_;
  }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::optional<Rat>>> rows_;
};

struct MetricViolation {
  enum class Kind { Identity, Positivity, Symmetry, Triangle };
  Kind kind;
  std::vector<std::string> points;  // Triangle: (x, z, y) means d(x,z) > d(x,y) + d(y,z)
  std::string message;
};

inline const char* kind_name(MetricViolation::Kind k) {
  switch (k) {
    case MetricViolation::Kind::Identity: return "identity";
    case MetricViolation::Kind::Positivity: return "identity of indiscernibles";
    case MetricViolation::Kind::Symmetry: return "symmetry";
    case MetricViolation::Kind::Triangle: return "triangle";
  }
  return "?";
}

// Throws StructuralError if an entry is missing.
inline std::vector<MetricViolation> validate_metric(const FinMetric& m) {
  using K = MetricViolation::Kind;
  std::vector<MetricViolation> out;
  const auto n = m.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) (void)m(i, j);
  for (std::size_t i = 0; i < n; ++i) {
    if (!m(i, i).is_zero())
      out.push_back({K::Identity, {m.id(i)}, "d(" + m.id(i) + "," + m.id(i) + ") = " + m(i, i).str() + " != 0"});
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m(i, j) != m(j, i))
        out.push_back({K::Symmetry, {m.id(i), m.id(j)},
                       "d(" + m.id(i) + "," + m.id(j) + ") != d(" + m.id(j) + "," + m.id(i) + ")"});
      if (m(i, j).sign() <= 0)
        out.push_back({K::Positivity, {m.id(i), m.id(j)},
                       "d(" + m.id(i) + "," + m.id(j) + ") = " + m(i, j).str() + " for distinct points"});
    }
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t z = x + 1; z < n; ++z)
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x || y == z) continue;
        if (m(x, z) > m(x, y) + m(y, z))
          out.push_back({K::Triangle, {m.id(x), m.id(z), m.id(y)},
                         "triangle on (" + m.id(x) + "," + m.id(z) + "," + m.id(y) + "): " + m(x, z).str() +
                             " > " + m(x, y).str() + " + " + m(y, z).str()});
      }
  return out;
}

inline std::string fresh_id(const std::string& base, const FinMetric& taken) {
  std::string id = base;
  while (taken.index_of(id)) id += "'";
  return id;
}

struct AmalgamMetric {
  FinMetric d;
  std::vector<std::size_t> from_b;  // index in b (first side for jep) -> index in d
  std::vector<std::size_t> from_c;
};

namespace detail {
inline void require_isometric(const FinMetric& a, const FinMetric& x, const std::vector<std::size_t>& w,
                              const char* side) {
  if (w.size() != a.size()) throw PreconditionError(std::string("witness into ") + side + " has wrong size");
  std::vector<bool> hit(x.size(), false);
  for (auto v : w) {
    if (v >= x.size() || hit[v]) throw PreconditionError(std::string("witness into ") + side + " is not injective");
    hit[v] = true;
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a(i, j) != x(w[i], w[j]))
        throw PreconditionError(std::string("witness into ") + side + " distorts d(" + a.id(i) + "," + a.id(j) + ")");
}
}  // namespace detail

// Points of d: images of a (named as in b), then b minus a, then c minus a.
// Ids of c that collide are renamed by appending primes.
inline AmalgamMetric path_amalgam_metric(const FinMetric& b, const FinMetric& c, const FinMetric& a,
                                         const std::vector<std::size_t>& wb, const std::vector<std::size_t>& wc) {
  detail::require_isometric(a, b, wb, "b");
  detail::require_isometric(a, c, wc, "c");
  std::vector<bool> in_b(b.size(), false), in_c(c.size(), false);
  for (auto v : wb) in_b[v] = true;
  for (auto v : wc) in_c[v] = true;
  std::vector<std::size_t> rest_b, rest_c;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (!in_b[i]) rest_b.push_back(i);
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!in_c[i]) rest_c.push_back(i);
  if (a.empty() && !rest_b.empty() && !rest_c.empty())
    throw PreconditionError("empty common part: use jep_gap_metric");

  AmalgamMetric out;
  out.from_b.assign(b.size(), 0);
  out.from_c.assign(c.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto k = out.d.add_point(b.id(wb[i]));
    out.from_b[wb[i]] = k;
    out.from_c[wc[i]] = k;
  }
  for (auto i : rest_b) out.from_b[i] = out.d.add_point(fresh_id(b.id(i), out.d));
  for (auto i : rest_c) out.from_c[i] = out.d.add_point(fresh_id(c.id(i), out.d));

  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j) out.d.set(out.from_b[i], out.from_b[j], b(i, j));
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j) out.d.set(out.from_c[i], out.from_c[j], c(i, j));
  for (auto x : rest_b)
    for (auto y : rest_c) {
      std::optional<Rat> best;
      for (std::size_t z = 0; z < a.size(); ++z) {
        Rat via = b(x, wb[z]) + c(wc[z], y);
        if (!best || via < *best) best = via;
      }
      out.d.set(out.from_b[x], out.from_c[y], *best);
    }
  return out;
}

// Gap 2m for joint embeddings, or 1 when every value is zero.
inline Rat gap_for(const Rat& m) { return m.is_zero() ? Rat(1) : m + m; }

// Disjoint union with every cross distance equal to gap.
inline AmalgamMetric jep_gap_metric(const FinMetric& a, const FinMetric& b, const Rat& gap) {
  AmalgamMetric out;
  if (!a.empty() && !b.empty()) {
    if (gap.sign() <= 0) throw PreconditionError("gap must be positive");
    for (const FinMetric* side : {&a, &b})
      for (std::size_t i = 0; i < side->size(); ++i)
        for (std::size_t j = i + 1; j < side->size(); ++j)
          if ((*side)(i, j) > gap + gap)
            throw PreconditionError("infeasible gap: triangle on (" + side->id(i) + "," + side->id(j) +
                                    ", other side): " + (*side)(i, j).str() + " > " + gap.str() + " + " +
                                    gap.str());
  }
  for (std::size_t i = 0; i < a.size(); ++i) out.from_b.push_back(out.d.add_point(a.id(i)));
  for (std::size_t i = 0; i < b.size(); ++i) out.from_c.push_back(out.d.add_point(fresh_id(b.id(i), out.d)));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) out.d.set(out.from_b[i], out.from_b[j], a(i, j));
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j) out.d.set(out.from_c[i], out.from_c[j], b(i, j));
  for (auto x : out.from_b)
    for (auto y : out.from_c) out.d.set(x, y, gap);
  return out;
}

// base index -> proposed distance to the new point
struct OnePointSpec {
  std::vector<std::pair<std::size_t, Rat>> eta;
};

struct Feasibility {
  bool ok = true;
  std::string violation;
};

inline Feasibility one_point_feasible(const FinMetric& m, const OnePointSpec& spec) {
  for (const auto& [i, e] : spec.eta) {
    if (i >= m.size()) throw PreconditionError("base point outside the space");
    if (e.sign() <= 0) throw PreconditionError("eta(" + m.id(i) + ") must be positive");
  }
  for (std::size_t a = 0; a < spec.eta.size(); ++a)
    for (std::size_t b = a + 1; b < spec.eta.size(); ++b) {
      const auto& [i, ei] = spec.eta[a];
      const auto& [j, ej] = spec.eta[b];
      if (i == j) {
        if (ei != ej) return {false, "two values for eta(" + m.id(i) + ")"};
        continue;
      }
      const Rat& d = m(i, j);
      if (abs(ei - ej) > d)
        return {false, "|eta(" + m.id(i) + ") - eta(" + m.id(j) + ")| = " + abs(ei - ej).str() + " > d = " + d.str()};
      if (d > ei + ej)
        return {false, "d(" + m.id(i) + "," + m.id(j) + ") = " + d.str() + " > eta sum " + (ei + ej).str()};
    }
  return {};
}

}  // namespace urysohn
