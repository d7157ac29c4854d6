#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "urysohn/lipschitz.hpp"
#include "urysohn/structure_k.hpp"
#include "urysohn/suitable.hpp"

namespace urysohn {

// Predicate of the limit, numbered per arity in order of first realization.
struct GlobalPred {
  unsigned n = 0;
  unsigned g = 0;  // 1-based
  friend auto operator<=>(const GlobalPred&, const GlobalPred&) = default;
};

inline std::string global_name(GlobalPred p) { return "P" + std::to_string(p.n) + "." + std::to_string(p.g); }

struct TupleHash {
  std::size_t operator()(const Tuple& t) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : t) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

// One-point extension over base points of the current snapshot.
struct ExtensionRequest {
  std::vector<std::size_t> base;            // oracle index of ext point i
  StructureK ext;                           // base points in order, new point last
  std::map<PredKey, GlobalPred> realized;   // ext slot -> existing predicate; other slots are fresh
  std::optional<SuitableFn> suit;           // required in compact mode
  std::optional<std::size_t> dense;         // required in Lipschitz mode
  std::string id;                           // generated when empty
};

struct ExtensionResult {
  std::size_t point;
  std::map<PredKey, GlobalPred> slots;
};

// Replayable growth step.
struct GrowthRecord {
  enum class Kind { Grow, Seed };
  Kind kind = Kind::Grow;
  std::string id;                                   // Grow
  std::vector<std::pair<std::size_t, Rat>> eta;     // Grow: base distances; empty means gap
  Rat gap{0};
  std::vector<GlobalPred> fresh;                    // predicates created by this record
  std::vector<std::tuple<GlobalPred, Tuple, Rat>> entries;
  std::optional<SuitableFn> suit;
  std::optional<std::size_t> dense;
  friend bool operator==(const GrowthRecord&, const GrowthRecord&) = default;
};

// Lazily grown finite approximation of the limit. Distances are stored in
// full; each predicate stores only the values fixed explicitly at growth time
// and every other value is the canonical extension of those.
class LimitOracle {
 public:
  LimitOracle() = default;

  void enable_compact(CompactPresentation k) {
    if (size()) throw PreconditionError("modes must be chosen before the first growth");
    compact_ = std::move(k);
  }
  void enable_lipschitz(PolishPresentation z, Rat L) {
    if (size()) throw PreconditionError("modes must be chosen before the first growth");
    if (L.sign() <= 0) throw PreconditionError("L must be positive");
    polish_ = std::move(z);
    lipschitz_ = std::move(L);
  }
  const std::optional<CompactPresentation>& compact() const { return compact_; }
  const std::optional<PolishPresentation>& polish() const { return polish_; }
  const std::optional<Rat>& lipschitz() const { return lipschitz_; }

  std::uint64_t seed = 0;

  std::size_t size() const { return metric_.size(); }
  const FinMetric& metric() const { return metric_; }
  const Rat& d(std::size_t i, std::size_t j) const { return metric_(i, j); }
  const std::string& id(std::size_t i) const { return metric_.id(i); }

  std::vector<GlobalPred> predicates() const {
    std::vector<GlobalPred> out;
    for (const auto& [p, _] : preds_) out.push_back(p);
    return out;
  }
  bool has_predicate(GlobalPred p) const { return preds_.count(p) > 0; }
  unsigned predicate_count(unsigned n) const {
    auto it = next_.find(n);
    return it == next_.end() ? 0 : it->second - 1;
  }

  Rat value(GlobalPred p, const Tuple& t) const {
    auto it = preds_.find(p);
    if (it == preds_.end()) throw PreconditionError(global_name(p) + " not realized");
    if (t.size() != p.n) throw PreconditionError("tuple arity mismatch for " + global_name(p));
    const auto& data = it->second;
    if (auto e = data.explicit_.find(t); e != data.explicit_.end()) return e->second;
    if (auto c = data.cache_.find(t); c != data.cache_.end()) return c->second;
    for (auto x : t)
      if (x >= size()) throw PreconditionError("tuple outside the snapshot");
    Rat best(0);
    for (const auto& [e, v] : data.list_) {
      if (v <= best) continue;
      Rat c = v;
      for (std::size_t i = 0; i < t.size() && c > best; ++i) c -= metric_(e[i], t[i]);
      if (c > best) best = c;
    }
    data.cache_.emplace(t, best);
    return best;
  }
  bool is_explicit(GlobalPred p, const Tuple& t) const {
    auto it = preds_.find(p);
    return it != preds_.end() && it->second.explicit_.count(t);
  }
  std::size_t explicit_count(GlobalPred p) const { return preds_.at(p).list_.size(); }

  const SuitableFn& suit(std::size_t i) const {
    if (!compact_) throw PreconditionError("oracle is not in compact mode");
    return suit_.at(i);
  }
  Rat suit_value(std::size_t i, std::size_t n) const { return eval_suitable(suit(i), n, *compact_); }
  std::size_t dense(std::size_t i) const {
    if (!polish_) throw PreconditionError("oracle is not in Lipschitz mode");
    return dense_.at(i);
  }

  ExtensionResult realize_extension(const ExtensionRequest& req) {
    const auto k = req.base.size();
    if (req.ext.size() != k + 1) throw GrowthError("extension must have exactly one point beyond the base");
    std::vector<bool> seen(size(), false);
    for (auto b : req.base) {
      if (b >= size()) throw GrowthError("base point outside the snapshot");
      if (seen[b]) throw GrowthError("base point listed twice");
      seen[b] = true;
    }
    if (auto v = validate_k(req.ext); !v.empty()) throw GrowthError("extension invalid: " + v.front().message);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        if (req.ext.metric(i, j) != d(req.base[i], req.base[j]))
          throw GrowthError("extension distorts d(" + id(req.base[i]) + "," + id(req.base[j]) + ")");

    GrowthRecord rec;
    rec.kind = GrowthRecord::Kind::Grow;
    rec.id = req.id.empty() ? fresh_id("u" + std::to_string(size() + 1), metric_) : req.id;
    for (std::size_t i = 0; i < k; ++i) rec.eta.emplace_back(req.base[i], req.ext.metric(k, i));

    ExtensionResult result;
    result.point = size();
    std::map<unsigned, unsigned> next = next_;
    std::vector<bool> used_global;
    std::map<GlobalPred, PredKey> owner;
    for (auto slot : req.ext.slots()) {
      auto it = req.realized.find(slot);
      GlobalPred gp;
      const bool fresh = it == req.realized.end();
      if (fresh) {
        auto& nx = next[slot.n];
        if (nx == 0) nx = 1;
        gp = {slot.n, nx++};
        rec.fresh.push_back(gp);
      } else {
        gp = it->second;
        if (gp.n != slot.n) throw GrowthError(pred_name(slot) + " mapped to predicate of another arity");
        if (!has_predicate(gp)) throw GrowthError(global_name(gp) + " not realized");
      }
      if (owner.count(gp)) throw GrowthError(global_name(gp) + " claimed by two slots");
      owner[gp] = slot;
      result.slots[slot] = gp;
      for (std::size_t t = 0; t < tuple_count(k + 1, slot.n); ++t) {
        auto tup = decode_tuple(t, k + 1, slot.n);
        bool has_new = std::find(tup.begin(), tup.end(), k) != tup.end();
        const Rat& v = req.ext.value(slot, tup);
        Tuple global(tup.size());
        for (std::size_t c = 0; c < tup.size(); ++c) global[c] = tup[c] == k ? size() : req.base[tup[c]];
        if (!has_new && !fresh) {
          if (value(gp, global) != v)
            throw GrowthError("base value of " + pred_name(slot) + " at " + tuple_str(req.ext.metric, tup) +
                              " is " + v.str() + " but the snapshot has " + value(gp, global).str());
          continue;
        }
        rec.entries.emplace_back(gp, std::move(global), v);
      }
    }
    rec.suit = req.suit;
    rec.dense = req.dense;
    if (k == 0) {
      Rat m = max_explicit_value();
      if (!metric_.empty()) m = max(m, metric_.diameter());
      for (const auto& [gp, t, v] : rec.entries) m = max(m, v);
      if (compact_) {
        for (const auto& f : suit_)
          for (const auto& [i, r] : f.r) m = max(m, r);
        if (req.suit)
          for (const auto& [i, r] : req.suit->r) m = max(m, r);
      }
      if (polish_ && req.dense)
        for (auto x : dense_) m = max(m, polish_->d(x, *req.dense) / *lipschitz_);
      rec.gap = gap_for(m);
    }
    apply(rec);
    return result;
  }

  // Introduces a predicate of arity n with the given values on existing points.
  GlobalPred seed_predicate(unsigned n, std::vector<std::pair<Tuple, Rat>> entries) {
    GrowthRecord rec;
    rec.kind = GrowthRecord::Kind::Seed;
    unsigned g = next_.count(n) ? next_[n] : 1;
    GlobalPred gp{n, g};
    rec.fresh.push_back(gp);
    for (auto& [t, v] : entries) rec.entries.emplace_back(gp, std::move(t), std::move(v));
    apply(rec);
    return gp;
  }

  // Checks a record and commits it; throws GrowthError and leaves the oracle
  // untouched when a check fails.
  void apply(const GrowthRecord& rec) {
    std::map<unsigned, unsigned> next = next_;
    for (auto gp : rec.fresh) {
      auto& nx = next[gp.n];
      if (nx == 0) nx = 1;
      if (gp.g != nx) throw GrowthError("fresh predicate " + global_name(gp) + " out of sequence");
      ++nx;
    }
    auto is_fresh = [&](GlobalPred gp) { return std::find(rec.fresh.begin(), rec.fresh.end(), gp) != rec.fresh.end(); };
    for (const auto& [gp, t, v] : rec.entries)
      if (!is_fresh(gp) && !has_predicate(gp)) throw GrowthError(global_name(gp) + " not realized");

    if (rec.kind == GrowthRecord::Kind::Seed) {
      if (rec.suit || rec.dense || !rec.eta.empty()) throw GrowthError("seed records carry predicate data only");
      for (const auto& [gp, t, v] : rec.entries) {
        if (!is_fresh(gp)) throw GrowthError("seed entries must target the seeded predicate");
        for (auto x : t)
          if (x >= size()) throw GrowthError("seed tuple outside the snapshot");
      }
      check_entries(rec.entries, metric_);
      commit_predicates(rec, next);
      log_.push_back(rec);
      return;
    }

    if (metric_.index_of(rec.id)) throw GrowthError("point id '" + rec.id + "' already used");
    const auto g = size();
    FinMetric grown = metric_;
    grown.add_point(rec.id);
    if (rec.eta.empty()) {
      if (g > 0) {
        if (rec.gap.sign() <= 0) throw GrowthError("gap must be positive");
        if (metric_.diameter() > rec.gap + rec.gap) throw GrowthError("gap too small for the snapshot");
        for (std::size_t x = 0; x < g; ++x) grown.set(x, g, rec.gap);
      }
    } else {
      OnePointSpec spec;
      for (const auto& [b, e] : rec.eta) {
        if (b >= g) throw GrowthError("base point outside the snapshot");
        spec.eta.emplace_back(b, e);
      }
      Feasibility f;
      try {
        f = one_point_feasible(metric_, spec);
      } catch (const PreconditionError& e) {
        throw GrowthError(e.what());
      }
      if (!f.ok) throw GrowthError("distances infeasible: " + f.violation);
      for (std::size_t x = 0; x < g; ++x) {
        std::optional<Rat> best;
        for (const auto& [b, e] : rec.eta) {
          Rat via = e + metric_(b, x);
          if (!best || via < *best) best = via;
        }
        grown.set(x, g, *best);
      }
    }

    for (const auto& [gp, t, v] : rec.entries) {
      if (t.size() != gp.n) throw GrowthError("entry arity mismatch");
      for (auto x : t)
        if (x > g) throw GrowthError("entry tuple outside the snapshot");
      if (!is_fresh(gp) && std::find(t.begin(), t.end(), g) == t.end())
        throw GrowthError("entries of realized predicates must involve the new point");
      if (rec.eta.empty() && g > 0 && v > rec.gap) throw GrowthError("value exceeds the gap");
    }
    check_entries(rec.entries, grown);
    // New entries against the realized values on the base.
    std::vector<std::size_t> base;
    for (const auto& [b, e] : rec.eta) base.push_back(b);
    for (const auto& [gp, t, v] : rec.entries) {
      if (is_fresh(gp)) continue;
      for (std::size_t i = 0; i < tuple_count(base.size(), gp.n); ++i) {
        auto bt = decode_tuple(i, base.size(), gp.n);
        for (auto& c : bt) c = base[c];
        Rat old = value(gp, bt);
        Rat dist = tuple_distance(grown, t, bt);
        if (v > old + dist || old > v + dist)
          throw GrowthError("the Lipschitz condition fails for " + global_name(gp) + " between " + tuple_str(grown, t) +
                            " and " + tuple_str(grown, bt));
      }
    }
    if (compact_) {
      if (!rec.suit) throw GrowthError("compact mode needs a suitable function");
      if (!is_suitable(*rec.suit, *compact_)) throw GrowthError("function is not suitable");
      for (std::size_t x = 0; x < g; ++x) {
        for (const auto& [i, r] : rec.suit->r)
          if (r > eval_suitable(suit_[x], i, *compact_) + grown(x, g))
            throw GrowthError("compact condition fails against " + id(x) + " at index " + std::to_string(i + 1));
        for (const auto& [i, r] : suit_[x].r)
          if (r > eval_suitable(*rec.suit, i, *compact_) + grown(x, g))
            throw GrowthError("compact condition fails from " + id(x) + " at index " + std::to_string(i + 1));
      }
    } else if (rec.suit) {
      throw GrowthError("suitable function given outside compact mode");
    }
    if (polish_) {
      if (!rec.dense) throw GrowthError("Lipschitz mode needs a dense index");
      if (*rec.dense >= polish_->size()) throw GrowthError("dense index out of range");
      for (std::size_t x = 0; x < g; ++x)
        if (polish_->d(dense_[x], *rec.dense) > *lipschitz_ * grown(x, g))
          throw GrowthError("Lipschitz condition fails against " + id(x));
    } else if (rec.dense) {
      throw GrowthError("dense index given outside Lipschitz mode");
    }

    metric_ = std::move(grown);
    if (rec.suit) suit_.push_back(*rec.suit);
    if (rec.dense) dense_.push_back(*rec.dense);
    commit_predicates(rec, next);
    log_.push_back(rec);
  }

  const std::vector<GrowthRecord>& log() const { return log_; }

  // Current finite structure in fixed-arity form: slot (n, g) is predicate g
  // of arity n. Materializes every tuple, so keep it for small snapshots.
  StructureK snapshot() const {
    StructureK s;
    s.metric = metric_;
    FixedArityConfig cfg;
    for (const auto& [p, _] : preds_) cfg.arities.push_back(p.n);
    s.fixed = cfg;
    for (const auto& [p, _] : preds_) {
      PredTable t(tuple_count(size(), p.n));
      for (std::size_t i = 0; i < t.size(); ++i) t[i] = value(p, decode_tuple(i, size(), p.n));
      s.pred[{p.n, p.g}] = std::move(t);
    }
    return s;
  }

  // Largest value fixed explicitly so far.
  Rat max_explicit_value() const {
    Rat m(0);
    for (const auto& [p, data] : preds_)
      for (const auto& [t, v] : data.list_) m = max(m, v);
    return m;
  }

 private:
  struct PredData {
    std::vector<std::pair<Tuple, Rat>> list_;
    std::unordered_map<Tuple, Rat, TupleHash> explicit_;
    mutable std::unordered_map<Tuple, Rat, TupleHash> cache_;
  };

  // Entries of this record pairwise, and against older explicit entries.
  void check_entries(const std::vector<std::tuple<GlobalPred, Tuple, Rat>>& entries, const FinMetric& m) const {
    for (std::size_t a = 0; a < entries.size(); ++a) {
      const auto& [pa, ta, va] = entries[a];
      if (va.sign() < 0) throw GrowthError("negative value for " + global_name(pa));
      for (std::size_t b = a + 1; b < entries.size(); ++b) {
        const auto& [pb, tb, vb] = entries[b];
        if (pa != pb) continue;
        if (ta == tb) throw GrowthError("two values for " + global_name(pa) + " at one tuple");
        Rat dist = tuple_distance(m, ta, tb);
        if (va > vb + dist || vb > va + dist)
          throw GrowthError("the Lipschitz condition fails for " + global_name(pa) + " between " + tuple_str(m, ta) + " and " +
                            tuple_str(m, tb));
      }
      auto it = preds_.find(pa);
      if (it == preds_.end()) continue;
      if (it->second.explicit_.count(ta)) throw GrowthError(global_name(pa) + " already fixed at " + tuple_str(m, ta));
      for (const auto& [tb, vb] : it->second.list_) {
        Rat dist = tuple_distance(m, ta, tb);
        if (va > vb + dist || vb > va + dist)
          throw GrowthError("the Lipschitz condition fails for " + global_name(pa) + " between " + tuple_str(m, ta) + " and " +
                            tuple_str(m, tb));
      }
    }
  }

  void commit_predicates(const GrowthRecord& rec, std::map<unsigned, unsigned>& next) {
    for (auto gp : rec.fresh) preds_[gp];
    for (const auto& [gp, t, v] : rec.entries) {
      auto& data = preds_[gp];
      data.list_.emplace_back(t, v);
      data.explicit_.emplace(t, v);
      data.cache_.erase(t);
    }
    next_ = std::move(next);
  }

  FinMetric metric_;
  std::map<GlobalPred, PredData> preds_;
  std::map<unsigned, unsigned> next_;
  std::optional<CompactPresentation> compact_;
  std::optional<PolishPresentation> polish_;
  std::optional<Rat> lipschitz_;
  std::vector<SuitableFn> suit_;
  std::vector<std::size_t> dense_;
  std::vector<GrowthRecord> log_;
};

// Rebuilds an oracle from its log; the same checks run again.
inline LimitOracle replay(const std::vector<GrowthRecord>& log, const std::optional<CompactPresentation>& k,
                          const std::optional<PolishPresentation>& z, const std::optional<Rat>& L) {
  LimitOracle o;
  if (k) o.enable_compact(*k);
  if (z) o.enable_lipschitz(*z, *L);
  for (const auto& r : log) o.apply(r);
  return o;
}

}  // namespace urysohn
