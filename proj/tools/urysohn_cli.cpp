#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "urysohn/amalgam.hpp"
#include "urysohn/io.hpp"
#include "urysohn/scenarios.hpp"

using namespace urysohn;

namespace {

// Bad invocation: missing files, wrong kinds, malformed options.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + out);
  f << text;
}

Document load(const std::string& path) { return parse_structure_file(slurp(path)); }

template <class T>
T load_as(const std::string& path, const char* kind) {
  auto d = load(path);
  if (auto* p = std::get_if<T>(&d)) return *p;
  throw UsageError(path + " is a " + document_kind(d) + " file, expected " + kind);
}

std::optional<CompactPresentation> load_compact(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return load_as<CompactPresentation>(path, "COMPACT");
}
std::optional<PolishPresentation> load_polish(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return load_as<PolishPresentation>(path, "POLISH");
}

int report(const std::vector<std::string>& problems) {
  if (problems.empty()) {
    std::cout << "valid\n";
    return 0;
  }
  for (const auto& p : problems) std::cout << "violation: " << p << "\n";
  return 1;
}

int cmd_validate(const std::string& file, const std::string& kpath, const std::string& zpath, bool canonical) {
  auto doc = load(file);
  if (canonical) {
    std::cout << serialize(doc);
    return 0;
  }
  std::vector<std::string> problems;
  if (auto* s = std::get_if<StructureK>(&doc)) {
    for (const auto& v : validate_k(*s)) problems.push_back(v.message);
  } else if (auto* b = std::get_if<BarStructureK>(&doc)) {
    for (const auto& v : validate_bar(*b)) problems.push_back(v.message);
  } else if (auto* c = std::get_if<StructureC>(&doc)) {
    auto k = load_compact(kpath);
    if (!k) throw UsageError("validating a C file needs --compact");
    for (const auto& v : validate_c(*c, *k)) problems.push_back(v.message);
  } else if (auto* l = std::get_if<StructureL>(&doc)) {
    auto z = load_polish(zpath);
    if (!z) throw UsageError("validating an L file needs --polish");
    try {
      for (const auto& v : validate_l(*l, *z)) problems.push_back(v.message);
    } catch (const PreconditionError& e) {
      problems.push_back(e.what());
    }
  } else if (auto* k = std::get_if<CompactPresentation>(&doc)) {
    for (const auto& v : validate_metric(k->k)) problems.push_back(v.message);
  } else if (auto* z = std::get_if<PolishPresentation>(&doc)) {
    problems = validate_presentation(*z);
  } else {
    try {
      auto o = load_oracle(std::get<OracleFile>(doc));
      std::cout << "oracle replays: " << o.size() << " points\n";
    } catch (const ParseError& e) {
      problems.push_back(e.what());
    }
  }
  return report(problems);
}

// "a=b,c=d" by point id; identity by id when empty.
std::vector<std::size_t> point_map(const std::string& spec, const FinMetric& a, const FinMetric& b) {
  std::map<std::string, std::string> m;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("point map entries look like a=b");
    m[item.substr(0, eq)] = item.substr(eq + 1);
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto it = m.find(a.id(i));
    const auto& target = it == m.end() ? a.id(i) : it->second;
    auto idx = b.index_of(target);
    if (!idx) throw UsageError("no image for point '" + a.id(i) + "'");
    out.push_back(*idx);
  }
  return out;
}

int cmd_amalgamate(const std::vector<std::string>& files, const std::string& wb, const std::string& wc,
                   const std::string& kpath, const std::string& zpath, const std::string& out) {
  auto a = load(files[0]), b = load(files[1]), c = load(files[2]);
  if (a.index() != b.index() || a.index() != c.index()) throw UsageError("A, B and C must be files of one kind");
  if (auto* ak = std::get_if<StructureK>(&a)) {
    auto& bk = std::get<StructureK>(b);
    auto& ck = std::get<StructureK>(c);
    auto wB = EmbeddingWitnessK::identity(*ak), wC = EmbeddingWitnessK::identity(*ak);
    wB.phi = point_map(wb, ak->metric, bk.metric);
    wC.phi = point_map(wc, ak->metric, ck.metric);
    auto r = amalgamate_k(bk, ck, *ak, wB, wC);
    emit(serialize(r.d), out);
    return 0;
  }
  if (auto* ac = std::get_if<StructureC>(&a)) {
    auto k = load_compact(kpath);
    if (!k) throw UsageError("C amalgamation needs --compact");
    auto& bc = std::get<StructureC>(b);
    auto& cc = std::get<StructureC>(c);
    auto r = amalgamate_c(bc, cc, *ac, point_map(wb, ac->metric, bc.metric), point_map(wc, ac->metric, cc.metric), *k);
    emit(serialize(r.d), out);
    return 0;
  }
  if (auto* al = std::get_if<StructureL>(&a)) {
    auto z = load_polish(zpath);
    if (!z) throw UsageError("L amalgamation needs --polish");
    auto& bl = std::get<StructureL>(b);
    auto& cl = std::get<StructureL>(c);
    auto r = amalgamate_l(bl, cl, *al, point_map(wb, al->metric, bl.metric), point_map(wc, al->metric, cl.metric), *z);
    emit(serialize(r.d), out);
    return 0;
  }
  throw UsageError("amalgamate works on K, C and L files");
}

int cmd_joint(const std::vector<std::string>& files, const std::string& zpath, const std::string& out) {
  auto a = load(files[0]), b = load(files[1]);
  if (a.index() != b.index()) throw UsageError("A and B must be files of one kind");
  if (auto* ak = std::get_if<StructureK>(&a)) {
    emit(serialize(joint_embed_k(*ak, std::get<StructureK>(b)).d), out);
  } else if (auto* ac = std::get_if<StructureC>(&a)) {
    emit(serialize(joint_embed_c(*ac, std::get<StructureC>(b)).d), out);
  } else if (auto* al = std::get_if<StructureL>(&a)) {
    auto z = load_polish(zpath);
    if (!z) throw UsageError("L joint embedding needs --polish");
    emit(serialize(joint_embed_l(*al, std::get<StructureL>(b), *z).d), out);
  } else {
    throw UsageError("joint-embed works on K, C and L files");
  }
  return 0;
}

LimitOracle open_oracle(const std::string& path, const std::string& kpath, const std::string& zpath,
                        const std::string& L) {
  if (!path.empty() && std::filesystem::exists(path)) {
    if (!kpath.empty() || !zpath.empty()) throw UsageError("modes of an existing oracle come from its file");
    return load_oracle(load_as<OracleFile>(path, "ORACLE"));
  }
  LimitOracle o;
  if (auto k = load_compact(kpath)) o.enable_compact(*k);
  if (auto z = load_polish(zpath)) o.enable_lipschitz(*z, Rat::parse(L));
  return o;
}

GlobalPred global_spec(const std::string& s) {
  auto dot = s.find('.');
  if (dot == std::string::npos) throw UsageError("predicates are written n.g");
  try {
    return {static_cast<unsigned>(std::stoul(s.substr(0, dot))), static_cast<unsigned>(std::stoul(s.substr(dot + 1)))};
  } catch (const std::exception&) {
    throw UsageError("predicates are written n.g");
  }
}

// The extension is a K file (fixed arities) whose points are oracle points
// plus one new point.
int cmd_grow(const std::string& ext_path, const std::string& opath, const std::string& map, const std::string& suit,
             long pz, const std::string& kpath, const std::string& zpath, const std::string& L, const std::string& out) {
  if (opath.empty()) throw UsageError("grow needs --oracle");
  auto o = open_oracle(opath, kpath, zpath, L);
  auto ext = load_as<StructureK>(ext_path, "K");
  if (!ext.fixed) throw UsageError("the extension file needs a fixed record");
  ExtensionRequest req;
  std::optional<std::size_t> fresh;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < ext.size(); ++i) {
    if (auto idx = o.metric().index_of(ext.metric.id(i))) {
      req.base.push_back(*idx);
      order.push_back(i);
    } else if (fresh) {
      throw UsageError("the extension has more than one new point");
    } else {
      fresh = i;
    }
  }
  if (!fresh) throw UsageError("the extension has no new point");
  order.push_back(*fresh);
  req.id = ext.metric.id(*fresh);
  req.ext = restrict_k(ext, order);
  std::stringstream ss(map);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--map entries look like n.m=n.g");
    auto slot = global_spec(item.substr(0, eq));
    req.realized[{slot.n, slot.g}] = global_spec(item.substr(eq + 1));
  }
  if (!suit.empty()) {
    auto doc = parse_structure_file("C\npoint s\nsuit s " + suit + "\n");
    req.suit = std::get<StructureC>(doc).p.at(0);
  }
  if (pz > 0) req.dense = static_cast<std::size_t>(pz - 1);
  try {
    auto r = o.realize_extension(req);
    std::cout << "grew " << o.id(r.point);
    for (const auto& [k, g] : r.slots) std::cout << " " << k.n << "." << k.m << "=" << global_name(g);
    std::cout << "\n";
  } catch (const GrowthError& e) {
    std::cout << "rejected: " << e.what() << "\n";
    return 1;
  }
  emit(serialize(oracle_file(o)), out.empty() ? opath : out);
  return 0;
}

std::vector<CheckRecord> embed_checks(const LimitOracle& o, const BarStructureK& x, const EmbedResult& r,
                                      unsigned depth) {
  std::vector<CheckRecord> checks;
  const auto& pts = r.embedded.points;
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    auto c = r.steps[i].checks();
    checks.insert(checks.end(), c.begin(), c.end());
    auto g = cauchy_checks(o, pts[i], "point" + std::to_string(i + 1));
    checks.insert(checks.end(), g.begin(), g.end());
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      checks.push_back(make_check("embed.distance." + std::to_string(i + 1) + "_" + std::to_string(j + 1),
                                  abs(o.d(pts[i].at(depth), pts[j].at(depth)) - x.metric(i, j)), "<=",
                                  Rat(2) * Rat::dyadic(depth)));
  return checks;
}

int cmd_embed(const std::string& file, unsigned depth, std::uint64_t seed, const std::string& out,
              const std::string& opath) {
  BarStructureK x;
  if (!file.empty()) {
    auto d = load(file);
    if (auto* k = std::get_if<StructureK>(&d)) {
      if (k->fixed) throw UsageError("embed needs a structure without a fixed record");
      x = BarStructureK::from_k(*k);
    } else if (auto* b = std::get_if<BarStructureK>(&d)) {
      x = *b;
    } else {
      throw UsageError("embed works on K and BARK files");
    }
  } else {
    Rng r(seed);
    const long den = r.between(1, 4);
    x = random_bar(r, 1 + r.below(3), 2, den, 4 * den);
  }
  if (auto v = validate_bar(x); !v.empty()) {
    std::cout << "violation: " << v.front().message << "\n";
    return 1;
  }
  LimitOracle o;
  auto r = embed_structure(x, o, depth);
  auto checks = embed_checks(o, x, r, depth);
  emit(emit_certificate("embed depth " + std::to_string(depth) + " points " + std::to_string(x.size()), checks), out);
  if (!opath.empty()) emit(serialize(oracle_file(o)), opath);
  return all_ok(checks) ? 0 : 1;
}

int cmd_homog(unsigned depth, std::uint64_t seed, const std::string& out, const std::string& opath) {
  Rng r(seed);
  LimitOracle o;
  auto c = make_back_and_forth_case(r, o, 2, 2, depth);
  auto res = extend_partial_iso(o, c.witness, c.wishlist1, c.wishlist2, depth);
  std::vector<CheckRecord> checks;
  for (const auto& round : res.rounds) {
    auto s = round.checks();
    checks.insert(checks.end(), s.begin(), s.end());
  }
  auto w = witness_checks(o, res.witness, Rat::dyadic(depth - 1));
  checks.insert(checks.end(), w.begin(), w.end());
  emit(emit_certificate("homog depth " + std::to_string(depth), checks), out);
  if (!opath.empty()) emit(serialize(oracle_file(o)), opath);
  return all_ok(checks) ? 0 : 1;
}

int cmd_certify(const std::string& path) {
  auto v = verify_certificate(slurp(path));
  if (!v.consistent) {
    std::cout << "rejected: " << v.error << "\n";
    return 1;
  }
  std::cout << (v.all_ok ? "verified " : "consistent but failing ") << v.checks << " checks\n";
  return v.all_ok ? 0 : 1;
}

int cmd_eval(const std::string& opath, const std::string& pred, long suit, bool dense,
             const std::vector<std::string>& ids) {
  if (opath.empty()) throw UsageError("eval needs --oracle");
  auto o = load_oracle(load_as<OracleFile>(opath, "ORACLE"));
  std::vector<std::size_t> t;
  for (const auto& id : ids) {
    auto idx = o.metric().index_of(id);
    if (!idx) throw UsageError("unknown oracle point '" + id + "'");
    t.push_back(*idx);
  }
  int modes = !pred.empty() + (suit > 0) + dense;
  if (modes != 1) throw UsageError("give exactly one of --pred, --suit, --dense");
  if (!pred.empty()) {
    auto gp = global_spec(pred);
    if (!o.has_predicate(gp)) throw UsageError(global_name(gp) + " is not realized");
    if (t.size() != gp.n) throw UsageError("tuple length must equal the arity");
    std::cout << o.value(gp, t).str() << "\n";
  } else {
    if (t.size() != 1) throw UsageError("give one point");
    if (dense) {
      if (!o.polish()) throw UsageError("oracle is not in Lipschitz mode");
      std::cout << o.dense(t[0]) + 1 << "\n";
    } else {
      if (!o.compact()) throw UsageError("oracle is not in compact mode");
      if (static_cast<std::size_t>(suit) > o.compact()->size()) throw UsageError("dense index out of range");
      std::cout << o.suit_value(t[0], static_cast<std::size_t>(suit - 1)).str() << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational approximations of Urysohn-type limit structures"};
  app.require_subcommand(1);
  std::string out, opath, kpath, zpath, L = "1/1";
  unsigned depth = 6;
  std::uint64_t seed = 0;

  auto* validate = app.add_subcommand("validate", "check a structure file");
  std::string vfile;
  bool canonical = false;
  validate->add_option("file", vfile)->required();
  validate->add_option("--compact", kpath, "COMPACT file for C structures");
  validate->add_option("--polish", zpath, "POLISH file for L structures");
  validate->add_flag("--canonical", canonical, "print the canonical form instead");

  auto* amalg = app.add_subcommand("amalgamate", "amalgamate B and C over A");
  std::vector<std::string> afiles;
  std::string wb, wc;
  amalg->add_option("files", afiles, "A B C")->required()->expected(3);
  amalg->add_option("--wb", wb, "embedding of A into B as a=b,...; identity by id otherwise");
  amalg->add_option("--wc", wc, "embedding of A into C");
  amalg->add_option("--compact", kpath);
  amalg->add_option("--polish", zpath);
  amalg->add_option("--out", out);

  auto* joint = app.add_subcommand("joint-embed", "joint embedding of A and B");
  std::vector<std::string> jfiles;
  joint->add_option("files", jfiles, "A B")->required()->expected(2);
  joint->add_option("--polish", zpath);
  joint->add_option("--out", out);

  auto* grow = app.add_subcommand("grow", "realize a one-point extension in the oracle");
  std::string ext, map, suit;
  long pz = 0;
  grow->add_option("extension", ext)->required();
  grow->add_option("--oracle", opath)->required();
  grow->add_option("--map", map, "extension slot to realized predicate, n.m=n.g,...");
  grow->add_option("--suit", suit, "suitable function of the new point, i=value,...");
  grow->add_option("--pz", pz, "dense index of the new point");
  grow->add_option("--compact", kpath, "COMPACT file when creating a new oracle");
  grow->add_option("--polish", zpath, "POLISH file when creating a new oracle");
  grow->add_option("--L", L, "Lipschitz constant when creating a new oracle");
  grow->add_option("--out", out, "write the grown oracle here instead of in place");

  auto* embed = app.add_subcommand("embed", "embed a structure into the limit and certify it");
  std::string efile;
  embed->add_option("file", efile, "K or BARK file; a random structure from --seed otherwise");
  embed->add_option("--depth", depth)->check(CLI::Range(1u, 40u));
  embed->add_option("--seed", seed);
  embed->add_option("--out", out, "certificate path");
  embed->add_option("--oracle", opath, "write the oracle log here");

  auto* homog = app.add_subcommand("homog", "random back-and-forth run, certified");
  homog->add_option("--depth", depth)->check(CLI::Range(2u, 12u));
  homog->add_option("--seed", seed);
  homog->add_option("--out", out);
  homog->add_option("--oracle", opath);

  auto* certify = app.add_subcommand("certify", "verify a certificate");
  std::string cfile;
  certify->add_option("certificate", cfile)->required();

  auto* eval = app.add_subcommand("eval", "read a value from an oracle log");
  std::string pred;
  long suit_index = 0;
  bool dense = false;
  std::vector<std::string> ids;
  eval->add_option("--oracle", opath)->required();
  eval->add_option("--pred", pred, "predicate n.g");
  eval->add_option("--suit", suit_index, "dense index of K");
  eval->add_flag("--dense", dense, "dense index of Z");
  eval->add_option("points", ids);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*validate) return cmd_validate(vfile, kpath, zpath, canonical);
    if (*amalg) return cmd_amalgamate(afiles, wb, wc, kpath, zpath, out);
    if (*joint) return cmd_joint(jfiles, zpath, out);
    if (*grow) return cmd_grow(ext, opath, map, suit, pz, kpath, zpath, L, out);
    if (*embed) return cmd_embed(efile, depth, seed, out, opath);
    if (*homog) return cmd_homog(depth, seed, out, opath);
    if (*certify) return cmd_certify(cfile);
    if (*eval) return cmd_eval(opath, pred, suit_index, dense, ids);
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
