#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "urysohn/metric.hpp"

namespace urysohn {

// Finite rational metric space standing in for a compact K; it is its own
// dense set. Dense indices are 0-based in code and 1-based in files.
struct CompactPresentation {
  FinMetric k;

  static CompactPresentation from_table(const std::vector<std::vector<Rat>>& d) {
    CompactPresentation p;
    for (std::size_t i = 0; i < d.size(); ++i) p.k.add_point(std::to_string(i + 1));
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = i + 1; j < d.size(); ++j) p.k.set(i, j, d[i][j]);
    return p;
  }

  std::size_t size() const { return k.size(); }
  const Rat& d(std::size_t i, std::size_t j) const { return k(i, j); }

  // Greedy: every dense point ends up strictly within eps of a member.
  std::vector<std::size_t> net(const Rat& eps) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i) {
      bool covered = std::any_of(out.begin(), out.end(), [&](std::size_t j) { return d(i, j) < eps; });
      if (!covered) out.push_back(i);
    }
    return out;
  }
  friend bool operator==(const CompactPresentation&, const CompactPresentation&) = default;
};

// f(j) = max{0, max(r_i - d_K(q_j, q_i))} over the finite support.
struct SuitableFn {
  std::map<std::size_t, Rat> r;
  friend bool operator==(const SuitableFn&, const SuitableFn&) = default;
};

inline Rat eval_suitable(const SuitableFn& f, std::size_t j, const CompactPresentation& k) {
  if (j >= k.size()) throw PreconditionError("dense index " + std::to_string(j + 1) + " out of range");
  Rat best(0);
  for (const auto& [i, ri] : f.r) {
    if (i >= k.size()) throw PreconditionError("support index " + std::to_string(i + 1) + " out of range");
    if (ri <= best) continue;
    Rat v = ri - k.d(i, j);
    if (v > best) best = v;
  }
  return best;
}

inline std::vector<Rat> eval_all(const SuitableFn& f, const CompactPresentation& k) {
  std::vector<Rat> out;
  out.reserve(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) out.push_back(eval_suitable(f, j, k));
  return out;
}

// True iff eval agrees with r on the support.
inline bool is_suitable(const SuitableFn& f, const CompactPresentation& k) {
  for (const auto& [i, ri] : f.r)
    if (ri.sign() < 0 || eval_suitable(f, i, k) != ri) return false;
  return true;
}

struct BuildStep {
  std::size_t index;
  Rat gamma;
  Rat value;
  std::optional<std::size_t> witness;  // earlier index whose cone raised the value
};

// Descending gamma (ties by index); f(i_n) = max(gamma(i_n), max over earlier
// i of gamma(i) - d_K(q_i, q_{i_n})).
inline SuitableFn build_suitable(const std::vector<std::pair<std::size_t, Rat>>& gamma, const CompactPresentation& k,
                                 std::vector<BuildStep>* trace = nullptr) {
  auto order = gamma;
  std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  SuitableFn f;
  for (std::size_t n = 0; n < order.size(); ++n) {
    const auto& [in, gn] = order[n];
    if (gn.sign() < 0) throw PreconditionError("gamma must be nonnegative");
    if (f.r.count(in)) throw PreconditionError("gamma lists an index twice");
    Rat value = gn;
    std::optional<std::size_t> witness;
    for (std::size_t e = 0; e < n; ++e) {
      Rat eta = order[e].second - k.d(order[e].first, in);
      if (eta > value) {
        value = eta;
        witness = order[e].first;
      }
    }
    f.r[in] = value;
    if (trace) trace->push_back({in, gn, value, witness});
  }
  return f;
}

struct StructureC {
  FinMetric metric;
  std::vector<SuitableFn> p;  // per point
  friend bool operator==(const StructureC&, const StructureC&) = default;
};

struct CViolation {
  std::string message;
};

// Reduced check: r_i^a <= p(b)(i) + d(a,b) for every i in the support of p(a).
// Equivalent to the condition over all pairs of dense indices because every
// p(b) is 1-Lipschitz on K.
inline std::vector<CViolation> validate_c(const StructureC& s, const CompactPresentation& k) {
  std::vector<CViolation> out;
  if (s.p.size() != s.metric.size()) {
    out.push_back({"one suitable function per point required"});
    return out;
  }
  try {
    for (const auto& v : validate_metric(s.metric)) out.push_back({v.message});
  } catch (const StructuralError& e) {
    out.push_back({e.what()});
    return out;
  }
  for (std::size_t a = 0; a < s.p.size(); ++a)
    for (const auto& [i, ri] : s.p[a].r) {
      if (i >= k.size()) {
        out.push_back({"support index " + std::to_string(i + 1) + " out of range at " + s.metric.id(a)});
        continue;
      }
      if (ri.sign() < 0) out.push_back({"negative value at " + s.metric.id(a)});
      for (std::size_t b = 0; b < s.p.size(); ++b) {
        if (a == b) continue;
        Rat rhs = eval_suitable(s.p[b], i, k) + s.metric(a, b);
        if (ri > rhs)
          out.push_back({"p(" + s.metric.id(a) + ")(" + std::to_string(i + 1) + ") = " + ri.str() + " > p(" +
                         s.metric.id(b) + ")(" + std::to_string(i + 1) + ") + d = " + rhs.str()});
      }
    }
  return out;
}

// p(a)(n) <= p(b)(m) + d_K(q_n, q_m) + d(a,b) over all a, b, n, m.
inline bool brute_force_c(const StructureC& s, const CompactPresentation& k) {
  std::vector<std::vector<Rat>> vals;
  for (const auto& f : s.p) vals.push_back(eval_all(f, k));
  for (std::size_t a = 0; a < vals.size(); ++a)
    for (std::size_t b = 0; b < vals.size(); ++b)
      for (std::size_t n = 0; n < k.size(); ++n)
        for (std::size_t m = 0; m < k.size(); ++m)
          if (vals[a][n] > vals[b][m] + k.d(n, m) + s.metric(a, b)) return false;
  return true;
}

inline bool same_function(const SuitableFn& f, const SuitableFn& g, const CompactPresentation& k) {
  return eval_all(f, k) == eval_all(g, k);
}

struct AmalgamC {
  StructureC d;
  std::vector<std::size_t> from_b, from_c;
};

inline Rat max_value(const StructureC& s) {
  Rat m = s.metric.empty() ? Rat(0) : s.metric.diameter();
  for (const auto& f : s.p)
    for (const auto& [i, r] : f.r) m = max(m, r);
  return m;
}

inline AmalgamC joint_embed_c(const StructureC& a, const StructureC& b) {
  auto metric = jep_gap_metric(a.metric, b.metric, gap_for(max(max_value(a), max_value(b))));
  AmalgamC out;
  out.d.metric = std::move(metric.d);
  out.d.p.resize(out.d.metric.size());
  for (std::size_t i = 0; i < a.p.size(); ++i) out.d.p[metric.from_b[i]] = a.p[i];
  for (std::size_t i = 0; i < b.p.size(); ++i) out.d.p[metric.from_c[i]] = b.p[i];
  out.from_b = metric.from_b;
  out.from_c = metric.from_c;
  return out;
}

inline AmalgamC amalgamate_c(const StructureC& b, const StructureC& c, const StructureC& a,
                             const std::vector<std::size_t>& wb, const std::vector<std::size_t>& wc,
                             const CompactPresentation& k) {
  for (std::size_t i = 0; i < a.p.size(); ++i) {
    if (!same_function(a.p[i], b.p.at(wb.at(i)), k) || !same_function(a.p[i], c.p.at(wc.at(i)), k))
      throw PreconditionError("embeddings disagree on p at " + a.metric.id(i));
  }
  if (a.metric.empty()) return joint_embed_c(b, c);
  auto metric = path_amalgam_metric(b.metric, c.metric, a.metric, wb, wc);
  AmalgamC out;
  out.d.metric = std::move(metric.d);
  out.d.p.resize(out.d.metric.size());
  for (std::size_t i = 0; i < c.p.size(); ++i) out.d.p[metric.from_c[i]] = c.p[i];
  for (std::size_t i = 0; i < b.p.size(); ++i) out.d.p[metric.from_b[i]] = b.p[i];
  out.from_b = metric.from_b;
  out.from_c = metric.from_c;
  return out;
}

}  // namespace urysohn
