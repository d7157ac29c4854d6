#pragma once

#include <string>
#include <vector>

#include "urysohn/metric.hpp"

namespace urysohn {

// Dense subset of a Polish space Z with exact distances. Zero distance
// between distinct indices declares them aliases, so only pseudometric axioms
// are required. Dense indices are 0-based in code and 1-based in files.
struct PolishPresentation {
  FinMetric z;

  static PolishPresentation from_table(const std::vector<std::vector<Rat>>& d) {
    PolishPresentation p;
    for (std::size_t i = 0; i < d.size(); ++i) p.z.add_point(std::to_string(i + 1));
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = i + 1; j < d.size(); ++j) p.z.set(i, j, d[i][j]);
    return p;
  }
  std::size_t size() const { return z.size(); }
  const Rat& d(std::size_t i, std::size_t j) const { return z(i, j); }
  friend bool operator==(const PolishPresentation&, const PolishPresentation&) = default;
};

inline std::vector<std::string> validate_presentation(const PolishPresentation& p) {
  std::vector<std::string> out;
  for (const auto& v : validate_metric(p.z))
    if (v.kind != MetricViolation::Kind::Positivity) out.push_back(v.message);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p.d(i, j).sign() < 0) out.push_back("negative distance between dense points");
  return out;
}

struct StructureL {
  FinMetric metric;
  std::vector<std::size_t> p;  // dense index per point
  Rat L{1};
  friend bool operator==(const StructureL&, const StructureL&) = default;
};

struct LViolation {
  std::string message;
};

inline std::vector<LViolation> validate_l(const StructureL& s, const PolishPresentation& z) {
  std::vector<LViolation> out;
  if (s.p.size() != s.metric.size()) throw PreconditionError("one dense index per point required");
  for (auto i : s.p)
    if (i >= z.size()) throw PreconditionError("dense index " + std::to_string(i + 1) + " out of range");
  if (s.L.sign() <= 0) out.push_back({"L must be positive"});
  try {
    for (const auto& v : validate_metric(s.metric)) out.push_back({v.message});
  } catch (const StructuralError& e) {
    out.push_back({e.what()});
    return out;
  }
  for (std::size_t a = 0; a < s.p.size(); ++a)
    for (std::size_t b = a + 1; b < s.p.size(); ++b) {
      const Rat& lhs = z.d(s.p[a], s.p[b]);
      Rat rhs = s.L * s.metric(a, b);
      if (lhs > rhs)
        out.push_back({"d_Z(q_" + std::to_string(s.p[a] + 1) + ", q_" + std::to_string(s.p[b] + 1) + ") = " +
                       lhs.str() + " > L*d(" + s.metric.id(a) + "," + s.metric.id(b) + ") = " + rhs.str()});
    }
  return out;
}

struct AmalgamL {
  StructureL d;
  std::vector<std::size_t> from_b, from_c;
};

// m = max{distances of both sides, d_Z(q_p(a), q_p(b)) / L over all pairs}.
inline AmalgamL joint_embed_l(const StructureL& a, const StructureL& b, const PolishPresentation& z) {
  if (a.L != b.L) throw PreconditionError("mismatched Lipschitz constants");
  Rat m = max(a.metric.empty() ? Rat(0) : a.metric.diameter(), b.metric.empty() ? Rat(0) : b.metric.diameter());
  std::vector<std::size_t> all = a.p;
  all.insert(all.end(), b.p.begin(), b.p.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) m = max(m, z.d(all[i], all[j]) / a.L);
  auto metric = jep_gap_metric(a.metric, b.metric, gap_for(m));
  AmalgamL out;
  out.d.metric = std::move(metric.d);
  out.d.L = a.L;
  out.d.p.resize(out.d.metric.size());
  for (std::size_t i = 0; i < a.p.size(); ++i) out.d.p[metric.from_b[i]] = a.p[i];
  for (std::size_t i = 0; i < b.p.size(); ++i) out.d.p[metric.from_c[i]] = b.p[i];
  out.from_b = metric.from_b;
  out.from_c = metric.from_c;
  return out;
}

inline AmalgamL amalgamate_l(const StructureL& b, const StructureL& c, const StructureL& a,
                             const std::vector<std::size_t>& wb, const std::vector<std::size_t>& wc,
                             const PolishPresentation& z) {
  if (a.L != b.L || a.L != c.L) throw PreconditionError("mismatched Lipschitz constants");
  for (std::size_t i = 0; i < a.p.size(); ++i)
    if (z.d(a.p[i], b.p.at(wb.at(i))).sign() != 0 || z.d(a.p[i], c.p.at(wc.at(i))).sign() != 0)
      throw PreconditionError("embeddings disagree on p at " + a.metric.id(i));
  if (a.metric.empty()) return joint_embed_l(b, c, z);
  auto metric = path_amalgam_metric(b.metric, c.metric, a.metric, wb, wc);
  AmalgamL out;
  out.d.metric = std::move(metric.d);
  out.d.L = a.L;
  out.d.p.resize(out.d.metric.size());
  for (std::size_t i = 0; i < c.p.size(); ++i) out.d.p[metric.from_c[i]] = c.p[i];
  for (std::size_t i = 0; i < b.p.size(); ++i) out.d.p[metric.from_b[i]] = b.p[i];
  out.from_b = metric.from_b;
  out.from_c = metric.from_c;
  return out;
}

}  // namespace urysohn
