#include "abvar/cli/json_io.hpp"
#include "abvar/cli/verify.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>

using namespace abvar;
using io::Json;

namespace {

// Stable exit codes.
enum Exit : int {
  kOk = 0,
  kVerifyFailed = 1,
  kDegenerate = 2,
  kParse = 3,
  kNotStable = 4,
  kNoSolution = 5,
  kOtherError = 6,
};

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return kParse;
    case ErrorKind::ZeroImage:
    case ErrorKind::DegenerateForm:
    case ErrorKind::DegenerateRank:
    case ErrorKind::RankDeficiency: return kDegenerate;
    case ErrorKind::NotStable: return kNotStable;
    case ErrorKind::NoSolution: return kNoSolution;
    default: return kOtherError;
  }
}

struct Globals {
  Precision precision = kDefaultPrecision;
  long height = 24;
  bool json = false;
  std::uint64_t seed = 0x5EED;
  bool primitive = false;
};

struct Output {
  const Globals& g;
  std::string path;

  // JSON goes to the output file and, with --json, to stdout; the human report otherwise.
  void emit(const Json& j, const std::string& human) const {
    if (!path.empty()) io::write_json_atomic(path, j);
    if (g.json) std::cout << j.dump(2) << '\n';
    else std::cout << human;
  }
};

std::string matrix_text(const CMatrix& m) {
  std::string s;
  for (size_t i = 0; i < m.rows(); ++i) {
    s += "  [";
    for (size_t j = 0; j < m.cols(); ++j) s += (j ? ", " : "") + to_string(m(i, j));
    s += "]\n";
  }
  return s;
}

void describe(const decompose::DecompositionTree& t, const std::string& indent, std::string& out) {
  out += indent + decompose::to_string(t.kind) + "  g=" + std::to_string(t.g()) + "  type " + t.node.type.to_string();
  if (!t.method.empty()) out += "  (" + t.method + ")";
  if (t.kind == decompose::NodeKind::Split) {
    out += "  degree " + t.degree.get_str();
    if (t.form) out += "  form " + t.form->to_string();
  }
  if (t.kind == decompose::NodeKind::SearchExhausted && t.search_height > 0)
    out += "  exhausted at height " + std::to_string(t.search_height);
  out += "\n";
  if (t.elliptic) {
    out += indent + "  tau = " + to_string(t.elliptic->tau);
    if (t.elliptic->cm) out += "  CM, discriminant " + t.elliptic->discriminant.get_str();
    out += "\n";
  }
  for (const auto& c : t.children) describe(c, indent + "  ", out);
}

int cmd_induced(const Globals& g, const std::string& pav_path, const std::string& endo_path, const Output& out) {
  pav::PolarizedAV a = io::decode_pav(io::read_json(pav_path), g.precision);
  RatMatrix f = io::decode_endo(io::read_json(endo_path));
  IntMatrix basis = subvariety::image_lattice(a, f);
  subvariety::InducedPolarization ip = subvariety::induced_polarization(a, basis, g.primitive);
  std::string human = "induced polarization type " + ip.d.to_string();
  if (ip.scale != 1) human += " after dividing by " + ip.scale.get_str();
  out.emit(io::encode(ip), human + "\n");
  return kOk;
}

int cmd_subvariety(const Globals& g, const std::string& pav_path, const std::string& endo_path, const Output& out) {
  pav::PolarizedAV a = io::decode_pav(io::read_json(pav_path), g.precision);
  RatMatrix f = io::decode_endo(io::read_json(endo_path));
  subvariety::SubvarietyEmbedding e = subvariety::subvariety_period(a, f);
  Json j = io::encode(e.factor);
  Json emb = io::encode(e);
  emb.erase("factor");
  emb.erase("schema");
  j["embedding"] = emb;
  std::string human = "factor of type " + e.d.to_string() + ", Riemann matrix\n" + matrix_text(e.w);
  if (e.factor.content != 1) human += "content " + e.factor.content.get_str() + " divided out\n";
  out.emit(j, human);
  return kOk;
}

int run_fixed(const Globals& g, const gaction::RestrictedRep& r, int starts, Json& result, std::string& human) {
  gaction::FixedRiemannOptions opts;
  opts.precision = g.precision;
  opts.seed = g.seed;
  if (starts > 0) opts.starts = starts;
  gaction::FixedRiemannResult res = gaction::fixed_riemann(r, opts);
  result = io::encode(res);
  human += "converged " + std::to_string(res.converged) + " of " + std::to_string(res.starts) + " starts\n";
  if (res.family)
    human += "fixed locus has positive dimension " + std::to_string(res.family_dimension) + "; sample points follow\n";
  size_t shown = res.family ? std::min<size_t>(3, res.points.size()) : res.points.size();
  for (size_t k = 0; k < shown; ++k) {
    const auto& p = res.points[k];
    human += (p.recognized ? "exact fixed point\n" : "numeric fixed point\n") + matrix_text(p.z);
  }
  if (shown < res.points.size()) human += std::to_string(res.points.size() - shown) + " more points in the JSON output\n";
  return kOk;
}

int cmd_fixed(const Globals& g, const std::string& path, int starts, const Output& out) {
  gaction::RestrictedRep r = io::decode_restricted(io::read_json(path));
  Json result;
  std::string human;
  run_fixed(g, r, starts, result, human);
  out.emit(result, human);
  return kOk;
}

int cmd_restrict(const Globals& g, const std::string& group_path, const std::string& sub_path,
                 const std::string& riemann_path, int starts, const Output& out) {
  gaction::SymplecticRep rep = io::decode_group(io::read_json(group_path));
  gaction::validate(rep);
  Json sub = io::read_json(sub_path);
  IntMatrix p;
  pav::PolarizationType d;
  if (sub.contains("p")) {
    subvariety::SubvarietyEmbedding e = io::decode_embedding(sub, g.precision);
    p = e.p;
    d = e.d;
  } else {
    std::vector<IntMatrix> elems = io::decode_group(sub).elements;
    if (elems.empty()) throw Error(ErrorKind::Parse, "subgroup file needs an element list");
    RatMatrix f = gaction::subgroup_idempotent(elems);
    if (f.is_zero()) throw Error(ErrorKind::ZeroImage, "subgroup idempotent is zero");
    IntMatrix basis = latalg::saturate(f);
    latalg::SymplecticBasis sb = latalg::frobenius_symplectic_basis(basis, pav::polarization_form(rep.e));
    p = sb.s;
    d.d = sb.d;
    if (g.primitive && std::all_of(d.d.begin(), d.d.end(), [&](const Integer& x) { return x == d.d.front(); }))
      for (auto& x : d.d) x = 1;
  }
  gaction::RestrictedRep r = gaction::restrict_action(rep, p, d);
  Json restricted = io::encode(r);
  if (!out.path.empty()) io::write_json_atomic(out.path, restricted);
  std::string human = "restricted action on a sublattice of type " + r.d.to_string() + "\n";
  Json riemann;
  int code = kOk;
  try {
    run_fixed(g, r, starts, riemann, human);
    if (!riemann_path.empty()) io::write_json_atomic(riemann_path, riemann);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoSolution) throw;
    std::cerr << e.what() << '\n';
    code = kNoSolution;
  }
  if (g.json) {
    Json both{{"restricted", restricted}};
    if (!riemann.is_null()) both["riemann"] = riemann;
    std::cout << both.dump(2) << '\n';
  } else {
    std::cout << human;
  }
  return code;
}

int cmd_decompose(const Globals& g, const std::string& pav_path, const std::vector<std::string>& endos,
                  size_t max_genus, bool heuristic, const Output& out) {
  pav::PolarizedAV a = io::decode_pav(io::read_json(pav_path), g.precision);
  decompose::DecomposeOptions opts;
  opts.search.max_height = g.height;
  opts.max_genus = max_genus;
  opts.heuristic = heuristic;
  for (const auto& p : endos) opts.endomorphisms.push_back(io::decode_endo(io::read_json(p)));
  decompose::DecompositionTree t = decompose::poincare_decompose(a, opts);
  std::string human;
  describe(t, "", human);
  out.emit(io::encode(t), human);
  return kOk;
}

int cmd_verify(const Globals& g, const std::string& tree_path, const std::string& pav_path) {
  decompose::DecompositionTree t = io::decode_tree(io::read_json(tree_path), g.precision);
  pav::PolarizedAV a = io::decode_pav(io::read_json(pav_path), g.precision);
  io::VerifyReport r = io::verify_tree(t, a);
  if (g.json) {
    Json fails = Json::array();
    for (const auto& f : r.failures) fails.push_back({{"node", f.node}, {"check", f.check}, {"detail", f.detail}});
    std::cout << Json{{"ok", r.ok()}, {"checks", r.checks}, {"failures", fails}}.dump(2) << '\n';
  } else {
    std::cout << (r.ok() ? "PASS" : "FAIL") << ": " << r.checks << " checks, " << r.failures.size() << " failed\n";
    for (const auto& f : r.failures)
      std::cout << "  " << f.node << ": " << f.check << (f.detail.empty() ? "" : " (" + f.detail + ")") << '\n';
  }
  return r.ok() ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decomposition of polarized abelian varieties from period matrices"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--precision", g.precision, "Working precision in bits")->check(CLI::Range(64L, 1L << 20));
  app.add_option("--height", g.height, "Maximum candidate height in searches")->check(CLI::Range(1L, 1000L));
  app.add_flag("--json", g.json, "Print only JSON on stdout");
  app.add_option("--seed", g.seed, "Seed for the Newton starting points");
  app.add_flag("--primitive", g.primitive, "Rescale induced types (c, ..., c) to principal");

  std::string out_path, riemann_path, in1, in2;
  std::vector<std::string> endos;
  int starts = 0;
  size_t max_genus = 8;
  bool no_heuristic = false;
  std::function<int()> action;

  auto* induced = app.add_subcommand("induced-polarization", "Induced polarization on the image of an endomorphism");
  induced->add_option("pav", in1, "pav/1 file")->required();
  induced->add_option("endo", in2, "endo/1 file")->required();
  induced->add_option("-o,--output", out_path, "embedding/1 output");
  induced->callback([&] { action = [&] { return cmd_induced(g, in1, in2, {g, out_path}); }; });

  auto* restrict = app.add_subcommand("restrict-action", "Restrict a group action to a sublattice and find fixed points");
  restrict->add_option("group", in1, "group/1 file")->required();
  restrict->add_option("sub", in2, "embedding/1 file, or group/1 file listing subgroup elements")->required();
  restrict->add_option("-o,--output", out_path, "restricted/1 output");
  restrict->add_option("--riemann", riemann_path, "riemann/1 output");
  restrict->add_option("--starts", starts, "Number of Newton starts");
  restrict->callback([&] { action = [&] { return cmd_restrict(g, in1, in2, riemann_path, starts, {g, out_path}); }; });

  auto* fixed = app.add_subcommand("fixed-riemann", "Riemann matrices fixed by a restricted action");
  fixed->add_option("restricted", in1, "restricted/1 file")->required();
  fixed->add_option("-o,--output", out_path, "riemann/1 output");
  fixed->add_option("--starts", starts, "Number of Newton starts");
  fixed->callback([&] { action = [&] { return cmd_fixed(g, in1, starts, {g, out_path}); }; });

  auto* sub = app.add_subcommand("subvariety-period", "Period matrix of the image of an endomorphism");
  sub->add_option("pav", in1, "pav/1 file")->required();
  sub->add_option("endo", in2, "endo/1 file")->required();
  sub->add_option("-o,--output", out_path, "pav/1 output with the embedding data");
  sub->callback([&] { action = [&] { return cmd_subvariety(g, in1, in2, {g, out_path}); }; });

  auto* dec = app.add_subcommand("decompose", "Isogeny decomposition into simple factors");
  dec->add_option("pav", in1, "pav/1 file")->required();
  dec->add_option("-o,--output", out_path, "tree/1 output");
  dec->add_option("--endo", endos, "endo/1 candidates tried first");
  dec->add_option("--max-genus", max_genus, "Largest dimension handled automatically");
  dec->add_flag("--no-heuristic", no_heuristic, "Skip the bounded search in dimension above two");
  dec->callback([&] { action = [&] { return cmd_decompose(g, in1, endos, max_genus, !no_heuristic, {g, out_path}); }; });

  auto* ver = app.add_subcommand("verify", "Re-check a decomposition tree");
  ver->add_option("tree", in1, "tree/1 file")->required();
  ver->add_option("pav", in2, "pav/1 file of the decomposed variety")->required();
  ver->callback([&] { action = [&] { return cmd_verify(g, in1, in2); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    return action();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOtherError;
  }
}
