#include "abvar/cli/json_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace abvar::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Json encode_integer(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

template <class T, class F>
Json encode_matrix(const Matrix<T>& m, F&& f) {
  Json rows = Json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (size_t j = 0; j < m.cols(); ++j) row.push_back(f(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class T, class F>
Matrix<T> decode_matrix(const Json& j, F&& f) {
  if (!j.is_array()) fail("matrix must be an array of rows");
  size_t r = j.size(), c = r == 0 ? 0 : j[0].size();
  Matrix<T> m(r, c);
  for (size_t i = 0; i < r; ++i) {
    if (!j[i].is_array() || j[i].size() != c) fail("matrix rows must be arrays of equal length");
    for (size_t k = 0; k < c; ++k) m(i, k) = f(j[i][k]);
  }
  return m;
}

std::string real_text(const Real& x) { return x.to_string(); }

Json encode_node(const decompose::DecompositionTree& t);

decompose::DecompositionTree decode_node(const Json& j, Precision prec) {
  using namespace decompose;
  DecompositionTree t;
  t.node = decode_pav(field(j, "pav"), prec);
  std::string kind = field(j, "kind").get<std::string>();
  if (kind == "split") t.kind = NodeKind::Split;
  else if (kind == "elliptic") t.kind = NodeKind::Elliptic;
  else if (kind == "simple-certified") t.kind = NodeKind::SimpleCertified;
  else if (kind == "search-exhausted") t.kind = NodeKind::SearchExhausted;
  else fail("unknown node kind " + kind);
  t.method = j.value("method", "");
  t.search_height = j.value("search_height", 0L);
  if (j.contains("elliptic")) t.elliptic = decode_elliptic(j["elliptic"], t.node.precision);
  if (j.contains("form")) {
    std::vector<Rational> a;
    for (const auto& x : j["form"]) a.push_back(decode_rational(x));
    t.form = make_form(t.g(), a);
  }
  if (j.contains("f")) t.f = decode_ratmatrix(j["f"]);
  if (j.contains("scale")) t.scale = decode_rational(j["scale"]);
  if (j.contains("children"))
    for (const auto& c : j["children"]) t.children.push_back(decode_node(c, prec));
  if (j.contains("embeddings")) {
    const Json& es = j["embeddings"];
    if (es.size() != t.children.size()) fail("split node needs one embedding per child");
    for (size_t k = 0; k < es.size(); ++k) {
      subvariety::SubvarietyEmbedding e;
      e.p = decode_intmatrix(field(es[k], "p"));
      e.d = decode_type(field(es[k], "type"));
      e.w = decode_cmatrix(field(es[k], "w"), t.node.precision);
      e.rho_a = decode_cmatrix(field(es[k], "rho_a"), t.node.precision);
      e.factor = t.children[k].node;
      t.embeddings.push_back(std::move(e));
    }
  }
  if (j.contains("isogeny")) t.isogeny = decode_intmatrix(j["isogeny"]);
  if (j.contains("degree")) t.degree = decode_integer(j["degree"]);
  return t;
}

Json encode_node(const decompose::DecompositionTree& t) {
  Json j;
  j["kind"] = decompose::to_string(t.kind);
  j["method"] = t.method;
  j["pav"] = encode(t.node);
  j["pav"].erase("schema");
  if (t.search_height > 0) j["search_height"] = t.search_height;
  if (t.elliptic) j["elliptic"] = encode(*t.elliptic);
  if (t.kind == decompose::NodeKind::Split) {
    if (t.form) {
      Json a = Json::array();
      for (const auto& x : t.form->a) a.push_back(encode(x));
      j["form"] = a;
    }
    j["f"] = encode(t.f);
    j["scale"] = encode(t.scale);
    Json es = Json::array();
    for (const auto& e : t.embeddings)
      es.push_back({{"p", encode(e.p)}, {"type", encode(e.d)}, {"w", encode(e.w)}, {"rho_a", encode(e.rho_a)}});
    j["embeddings"] = es;
    j["isogeny"] = encode(t.isogeny);
    j["degree"] = encode_integer(t.degree);
    Json cs = Json::array();
    for (const auto& c : t.children) cs.push_back(encode_node(c));
    j["children"] = cs;
  }
  return j;
}

}  // namespace

void expect_schema(const Json& j, const std::string& schema) {
  if (!j.is_object()) fail("expected a JSON object for " + schema);
  if (j.contains("schema") && j["schema"] != schema)
    fail("schema mismatch: expected " + schema + ", got " + j["schema"].dump());
}

Json encode(const Rational& q) { return {{"rat", to_string(q)}}; }

Json encode(const ExactComplex& x) {
  if (!x.is_exact()) {
    const Complex& z = x.approx();
    return {{"dec", {{"re", real_text(z.re)}, {"im", real_text(z.im)}, {"prec", z.precision()}}}};
  }
  NumberFieldElement e = x.exact().simplified();
  if (e.is_rational()) return encode(e.rational_value());
  Json poly = Json::array(), coeffs = Json::array();
  for (const auto& c : e.field()->poly().coeffs()) poly.push_back(encode_integer(c.get_num()));
  for (const auto& c : e.coeffs()) coeffs.push_back(to_string(c));
  return {{"alg", {{"poly", poly}, {"coeffs", coeffs}, {"root", e.field()->root_text()}}}};
}

Rational decode_rational(const Json& j) {
  try {
    if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_object() && j.contains("rat")) return parse_rational(j["rat"].get<std::string>());
  } catch (const Json::exception& e) {
    fail(e.what());
  }
  fail("expected a rational number, got " + j.dump());
}

Integer decode_integer(const Json& j) {
  Rational q = decode_rational(j);
  if (!is_integral(q)) fail("expected an integer, got " + j.dump());
  return q.get_num();
}

ExactComplex decode_number(const Json& j, Precision prec) {
  try {
    if (j.is_object() && j.contains("alg")) {
      const Json& a = j["alg"];
      std::vector<Rational> poly, coeffs;
      for (const auto& c : field(a, "poly")) poly.push_back(decode_rational(c));
      for (const auto& c : field(a, "coeffs")) coeffs.push_back(decode_rational(c));
      FieldPtr f = NumberField::create(Polynomial(poly), field(a, "root").get<std::string>());
      return ExactComplex(NumberFieldElement(f, coeffs).simplified(), prec);
    }
    if (j.is_object() && j.contains("dec")) {
      const Json& d = j["dec"];
      Precision p = d.value("prec", prec);
      if (p < 64) fail("decimal precision must be at least 64 bits");
      return ExactComplex(Complex(Real(field(d, "re").get<std::string>(), p), Real(d.value("im", "0"), p)));
    }
    if (j.is_string()) {
      const std::string s = j.get<std::string>();
      if (s.find_first_of(".ie") != std::string::npos) return ExactComplex(parse_complex(s, prec));
    }
  } catch (const Json::exception& e) {
    fail(e.what());
  }
  return ExactComplex(decode_rational(j));
}

Json encode(const CMatrix& m) { return encode_matrix(m, [](const ExactComplex& x) { return encode(x); }); }
Json encode(const RatMatrix& m) { return encode_matrix(m, [](const Rational& x) { return encode(x); }); }
Json encode(const IntMatrix& m) { return encode_matrix(m, [](const Integer& x) { return encode_integer(x); }); }

CMatrix decode_cmatrix(const Json& j, Precision prec) {
  return decode_matrix<ExactComplex>(j, [&](const Json& x) { return decode_number(x, prec); });
}
RatMatrix decode_ratmatrix(const Json& j) { return decode_matrix<Rational>(j, decode_rational); }
IntMatrix decode_intmatrix(const Json& j) { return decode_matrix<Integer>(j, decode_integer); }

Json encode(const pav::PolarizationType& t) {
  Json a = Json::array();
  for (const auto& d : t.d) a.push_back(encode_integer(d));
  return a;
}

pav::PolarizationType decode_type(const Json& j) {
  if (!j.is_array() || j.empty()) fail("polarization type must be a non-empty array");
  pav::PolarizationType t;
  for (const auto& x : j) t.d.push_back(decode_integer(x));
  return t;
}

Json encode(const pav::PolarizedAV& a) {
  Json j{{"schema", "pav/1"}, {"type", encode(a.type)}, {"z", encode(a.z)}, {"precision", a.precision}};
  if (!a.label.empty()) j["label"] = a.label;
  if (a.content != 1) j["content"] = encode_integer(a.content);
  return j;
}

pav::PolarizedAV decode_pav(const Json& j, Precision prec) {
  expect_schema(j, "pav/1");
  pav::BuildOptions opts;
  opts.label = j.value("label", "");
  opts.precision = j.contains("precision") ? j["precision"].get<Precision>() : prec;
  pav::PolarizationType type;
  CMatrix z;
  if (j.contains("period")) {
    CMatrix pi = decode_cmatrix(j["period"], opts.precision);
    size_t g = pi.rows();
    if (pi.cols() != 2 * g) fail("period matrix must be g x 2g");
    for (size_t r = 0; r < g; ++r)
      for (size_t c = 0; c < g; ++c) {
        const ExactComplex& x = pi(r, c);
        bool ok = x.is_rational() && is_integral(x.exact().rational_value());
        if (!ok || (r != c && !x.is_zero()) || (r == c && x.exact().rational_value() <= 0))
          fail("left block of the period matrix must be a positive integral diagonal");
        if (r == c) type.d.push_back(x.exact().rational_value().get_num());
      }
    z = pi.block(0, g, g, g);
  } else {
    type = decode_type(field(j, "type"));
    z = decode_cmatrix(field(j, "z"), opts.precision);
  }
  pav::PolarizedAV a = pav::build_period(type, z, opts);
  if (j.contains("content")) a.content *= decode_integer(j["content"]);
  return a;
}

Json encode_endo(const RatMatrix& f) { return {{"schema", "endo/1"}, {"matrix", encode(f)}}; }

RatMatrix decode_endo(const Json& j) {
  expect_schema(j, "endo/1");
  return decode_ratmatrix(field(j, "matrix"));
}

Json encode(const subvariety::InducedPolarization& ip) {
  return {{"schema", "embedding/1"}, {"p", encode(ip.p)}, {"type", encode(ip.d)}, {"scale", encode_integer(ip.scale)}};
}

Json encode(const subvariety::SubvarietyEmbedding& e) {
  Json f = encode(e.factor);
  f.erase("schema");
  return {{"schema", "embedding/1"}, {"p", encode(e.p)},           {"type", encode(e.d)},
          {"w", encode(e.w)},        {"rho_a", encode(e.rho_a)}, {"factor", f}};
}

subvariety::SubvarietyEmbedding decode_embedding(const Json& j, Precision prec) {
  expect_schema(j, "embedding/1");
  subvariety::SubvarietyEmbedding e;
  e.p = decode_intmatrix(field(j, "p"));
  e.d = decode_type(field(j, "type"));
  if (e.p.cols() != 2 * e.d.g()) fail("embedding basis must have 2h columns");
  if (j.contains("w")) {
    e.w = decode_cmatrix(j["w"], prec);
    if (j.contains("rho_a")) e.rho_a = decode_cmatrix(j["rho_a"], prec);
    e.factor = j.contains("factor") ? decode_pav(j["factor"], prec) : pav::build_period(e.d, e.w);
  }
  return e;
}

Json encode(const gaction::SymplecticRep& rep) {
  Json gens = Json::array(), elems = Json::array();
  for (const auto& m : rep.generators) gens.push_back(encode(m));
  for (const auto& m : rep.elements) elems.push_back(encode(m));
  Json j{{"schema", "group/1"}, {"g", rep.g()}, {"E", encode(rep.e)}, {"generators", gens}};
  if (!rep.elements.empty()) j["elements"] = elems;
  return j;
}

gaction::SymplecticRep decode_group(const Json& j) {
  expect_schema(j, "group/1");
  gaction::SymplecticRep rep;
  rep.e = decode_type(field(j, "E"));
  if (j.contains("g") && j["g"].get<size_t>() != rep.g()) fail("g does not match the length of E");
  if (j.contains("generators"))
    for (const auto& m : j["generators"]) rep.generators.push_back(decode_intmatrix(m));
  if (j.contains("elements"))
    for (const auto& m : j["elements"]) rep.elements.push_back(decode_intmatrix(m));
  size_t n = 2 * rep.g();
  for (const auto* list : {&rep.generators, &rep.elements})
    for (const auto& m : *list)
      if (m.rows() != n || m.cols() != n) fail("group matrices must be " + std::to_string(n) + "x" + std::to_string(n));
  return rep;
}

Json encode(const gaction::RestrictedRep& r) {
  Json gens = Json::array();
  for (const auto& m : r.generators) gens.push_back(encode(m));
  return {{"schema", "restricted/1"}, {"type", encode(r.d)}, {"p", encode(r.p)}, {"generators", gens}};
}

gaction::RestrictedRep decode_restricted(const Json& j) {
  expect_schema(j, "restricted/1");
  gaction::RestrictedRep r;
  r.d = decode_type(field(j, "type"));
  if (j.contains("p")) r.p = decode_intmatrix(j["p"]);
  for (const auto& m : field(j, "generators")) r.generators.push_back(decode_intmatrix(m));
  size_t n = 2 * r.h();
  for (const auto& m : r.generators)
    if (m.rows() != n || m.cols() != n) fail("restricted generators must be " + std::to_string(n) + "x" + std::to_string(n));
  return r;
}

Json encode(const gaction::FixedRiemannResult& r) {
  Json pts = Json::array();
  for (const auto& p : r.points) {
    Json res = Json::array();
    for (const auto& x : p.residuals) res.push_back(real_text(x));
    pts.push_back({{"z", encode(p.z)}, {"recognized", p.recognized}, {"residuals", res}});
  }
  return {{"schema", "riemann/1"},     {"points", pts},           {"family", r.family},
          {"family_dimension", r.family_dimension}, {"jacobian_rank", r.jacobian_rank},
          {"unknowns", r.unknowns},    {"starts", r.starts},      {"converged", r.converged},
          {"constraints", r.constraints}};
}

gaction::FixedRiemannResult decode_riemann(const Json& j, Precision prec) {
  expect_schema(j, "riemann/1");
  gaction::FixedRiemannResult r;
  for (const auto& p : field(j, "points")) {
    gaction::FixedPoint fp;
    fp.z = decode_cmatrix(field(p, "z"), prec);
    fp.recognized = p.value("recognized", false);
    if (p.contains("residuals"))
      for (const auto& x : p["residuals"]) fp.residuals.emplace_back(x.get<std::string>(), prec);
    r.points.push_back(std::move(fp));
  }
  r.family = j.value("family", false);
  r.family_dimension = j.value("family_dimension", size_t{0});
  r.jacobian_rank = j.value("jacobian_rank", size_t{0});
  r.unknowns = j.value("unknowns", size_t{0});
  r.starts = j.value("starts", 0);
  r.converged = j.value("converged", 0);
  if (j.contains("constraints")) r.constraints = j["constraints"].get<std::vector<std::string>>();
  return r;
}

Json encode(const decompose::EllipticReport& e) {
  Json t = Json::array(), mp = Json::array();
  for (const auto& x : e.transform) t.push_back(encode_integer(x));
  for (const auto& x : e.min_poly) mp.push_back(encode_integer(x));
  Json j{{"tau", encode(e.tau)}, {"transform", t}, {"cm", e.cm}, {"recognized", e.recognized}, {"min_poly", mp}};
  if (e.cm) j["discriminant"] = encode_integer(e.discriminant);
  return j;
}

decompose::EllipticReport decode_elliptic(const Json& j, Precision prec) {
  decompose::EllipticReport e;
  e.tau = decode_number(field(j, "tau"), prec);
  const Json& t = field(j, "transform");
  if (!t.is_array() || t.size() != 4) fail("transform must have four entries");
  for (size_t k = 0; k < 4; ++k) e.transform[k] = decode_integer(t[k]);
  e.cm = j.value("cm", false);
  e.recognized = j.value("recognized", false);
  if (j.contains("discriminant")) e.discriminant = decode_integer(j["discriminant"]);
  if (j.contains("min_poly"))
    for (const auto& x : j["min_poly"]) e.min_poly.push_back(decode_integer(x));
  return e;
}

Json encode(const decompose::DecompositionTree& t) {
  Json j{{"schema", "tree/1"}, {"root", encode_node(t)}};
  decompose::AssembledIsogeny iso = decompose::assemble(t);
  j["assembled"] = {{"p", encode(iso.p)}, {"types", encode(iso.types)}};
  Json ls = Json::array();
  for (const auto* l : decompose::leaves(t)) {
    Json leaf{{"kind", decompose::to_string(l->kind)}, {"g", l->g()}};
    if (l->elliptic) leaf["tau"] = to_string(l->elliptic->tau);
    ls.push_back(leaf);
  }
  j["leaves"] = ls;
  return j;
}

decompose::DecompositionTree decode_tree(const Json& j, Precision prec) {
  expect_schema(j, "tree/1");
  return decode_node(field(j, "root"), prec);
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(path + ": " + e.what());
  }
}

void write_json_atomic(const std::string& path, const Json& j) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
    out << j.dump(2) << '\n';
    out.flush();
    if (!out) throw Error(ErrorKind::InvalidArgument, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorKind::InvalidArgument, "cannot rename into " + path + ": " + ec.message());
  }
}

}  // namespace abvar::io
