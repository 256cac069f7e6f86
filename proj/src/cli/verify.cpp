#include "abvar/cli/verify.hpp"

#include <functional>
#include <sstream>

namespace abvar::io {

namespace {

bool close(const CMatrix& a, const CMatrix& b, Precision prec) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (is_exact(a) && is_exact(b)) return a == b;
  CMatrix d = a;
  d -= b;
  return max_norm(d, prec) <= float_tolerance(prec);
}

struct Checker {
  VerifyReport report;

  bool expect(bool ok, const std::string& node, const std::string& check, const std::string& detail = {}) {
    ++report.checks;
    if (!ok) report.failures.push_back({node, check, detail});
    return ok;
  }

  // runs a check whose failure may surface as a library error
  void guarded(const std::string& node, const std::string& check, const std::function<bool()>& body) {
    try {
      expect(body(), node, check);
    } catch (const Error& e) {
      expect(false, node, check, e.what());
    }
  }

  void node(const decompose::DecompositionTree& t, const std::string& path) {
    using decompose::NodeKind;
    const pav::PolarizedAV& a = t.node;
    Precision prec = a.precision;
    expect(pav::in_siegel_space(a.z, prec), path, "Riemann matrix in the Siegel space");
    switch (t.kind) {
      case NodeKind::Elliptic: {
        if (!expect(a.g() == 1 && t.elliptic.has_value(), path, "elliptic leaf has dimension 1")) return;
        guarded(path, "elliptic normalization", [&] {
          decompose::EllipticReport r = decompose::elliptic_normalize(a);
          bool same_tau = r.tau.is_exact() && t.elliptic->tau.is_exact()
                              ? r.tau == t.elliptic->tau
                              : abs(eval_numeric(r.tau, prec) - eval_numeric(t.elliptic->tau, prec)) <=
                                    float_tolerance(prec);
          return same_tau && r.transform == t.elliptic->transform && r.cm == t.elliptic->cm &&
                 (!r.cm || r.discriminant == t.elliptic->discriminant);
        });
        return;
      }
      case NodeKind::SimpleCertified:
      case NodeKind::SearchExhausted:
        expect(t.children.empty(), path, "unsplit leaf has no children");
        return;
      case NodeKind::Split:
        break;
    }
    if (!expect(t.children.size() == 2 && t.embeddings.size() == 2, path, "split has two children")) return;
    size_t n = 2 * a.g();
    guarded(path, "idempotent", [&] {
      if (t.f.rows() != n || t.f.cols() != n) return false;
      pav::analytic_from_rational(a, a, t.f);
      return t.f * t.f == t.f;
    });
    std::vector<Integer> ds;
    size_t dims = 0;
    for (size_t k = 0; k < 2; ++k) {
      const auto& e = t.embeddings[k];
      const auto& child = t.children[k];
      std::string cpath = path + "/" + std::to_string(k);
      size_t h = e.d.g();
      dims += h;
      if (!expect(e.p.rows() == n && e.p.cols() == 2 * h, cpath, "embedding shape")) continue;
      expect(e.p.transpose() * a.j() * e.p == latalg::alternating_standard(e.d.d), cpath, "polarization pullback");
      guarded(cpath, "Hurwitz relation", [&] {
        CMatrix factor_period = hstack(to_complex(diagonal(e.d.d)), e.w);
        Real r = pav::hurwitz_residual(e.rho_a, factor_period, a.period(), latalg::to_rational(e.p), prec);
        return a.exact() && is_exact(e.rho_a) ? r.is_zero() : r <= float_tolerance(prec);
      });
      guarded(cpath, "child factor", [&] {
        pav::PolarizedAV f = pav::build_period(e.d, e.w);
        return f.type == child.node.type && f.content == child.node.content && close(f.z, child.node.z, prec);
      });
      for (const auto& d : e.d.d) ds.push_back(d);
    }
    expect(dims == a.g(), path, "dimensions add up");
    // interleaved order (e_1.., e_2.., f_1.., f_2..)
    size_t h1 = t.embeddings[0].d.g();
    std::vector<Integer> dint(ds.begin(), ds.end());
    if (expect(t.isogeny.rows() == n && t.isogeny.cols() == n, path, "isogeny shape")) {
      bool columns = true;
      for (size_t k = 0; k < 2 && columns; ++k) {
        const auto& p = t.embeddings[k].p;
        size_t h = p.cols() / 2, off = k == 0 ? 0 : h1;
        for (size_t j = 0; j < h; ++j)
          for (size_t i = 0; i < n; ++i)
            columns = columns && t.isogeny(i, off + j) == p(i, j) && t.isogeny(i, a.g() + off + j) == p(i, h + j);
      }
      expect(columns, path, "isogeny interleaves the child bases");
      expect(t.isogeny.transpose() * a.j() * t.isogeny == latalg::alternating_standard(dint), path,
             "isogeny pullback is block diagonal");
      Integer det = abs(latalg::determinant(t.isogeny));
      std::ostringstream msg;
      msg << "recorded " << t.degree.get_str() << ", determinant " << det.get_str();
      expect(det == t.degree, path, "split degree", msg.str());
    }
    for (size_t k = 0; k < 2; ++k) node(t.children[k], path + "/" + std::to_string(k));
  }
};

}  // namespace

VerifyReport verify_tree(const decompose::DecompositionTree& tree, const pav::PolarizedAV& root) {
  Checker c;
  c.expect(tree.node.type == root.type && close(tree.node.z, root.z, root.precision), "root",
           "root matches the input pav");
  c.node(tree, "root");
  if (!c.report.ok()) return c.report;
  Integer product = 1;
  size_t dims = 0;
  std::function<void(const decompose::DecompositionTree&)> walk = [&](const decompose::DecompositionTree& t) {
    if (t.kind == decompose::NodeKind::Split) product *= t.degree;
    if (t.children.empty()) dims += t.g();
    for (const auto& ch : t.children) walk(ch);
  };
  walk(tree);
  c.expect(dims == tree.g(), "root", "leaf dimensions add up to g");
  c.guarded("root", "assembled isogeny", [&] {
    decompose::AssembledIsogeny iso = decompose::assemble(tree);
    return iso.p.transpose() * tree.node.j() * iso.p == latalg::alternating_standard(iso.types.d) &&
           abs(latalg::determinant(iso.p)) == product;
  });
  return c.report;
}

}  // namespace abvar::io
