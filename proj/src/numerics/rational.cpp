#include "abvar/numerics/rational.hpp"

#include "abvar/error.hpp"

#include <cctype>

namespace abvar {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::EmbeddingAmbiguous: return "embedding-ambiguous";
    case ErrorKind::NotSymmetric: return "not-symmetric";
    case ErrorKind::NotPositiveDefinite: return "not-positive-definite";
    case ErrorKind::NoSolution: return "no-solution";
    case ErrorKind::Inconsistent: return "inconsistent-system";
    case ErrorKind::RankMismatch: return "rank-mismatch";
    case ErrorKind::DegenerateForm: return "degenerate-form";
    case ErrorKind::ZeroImage: return "zero-image";
    case ErrorKind::NonIntegral: return "non-integral";
    case ErrorKind::NotClosed: return "not-closed";
    case ErrorKind::NotStable: return "not-stable";
    case ErrorKind::NotSymplectic: return "not-symplectic";
    case ErrorKind::Eq4Violated: return "fixed-point-equation-violated";
    case ErrorKind::NotIdempotent: return "not-idempotent";
    case ErrorKind::DegenerateRank: return "degenerate-rank";
    case ErrorKind::RankDeficiency: return "rank-deficiency";
    case ErrorKind::NotInSiegel: return "not-in-siegel";
    case ErrorKind::FieldMismatch: return "field-mismatch";
    case ErrorKind::SizeGate: return "size-gate";
  }
  return "unknown";
}

namespace {

Integer parse_integer(std::string_view text) {
  std::string s(text);
  size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (start == s.size()) throw Error(ErrorKind::Parse, "empty integer in '" + s + "'");
  for (size_t i = start; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw Error(ErrorKind::Parse, "bad integer '" + s + "'");
  }
  if (s[0] == '+') s.erase(0, 1);
  return Integer(s, 10);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  Integer num = parse_integer(trim(text.substr(0, slash)));
  Integer den = parse_integer(trim(text.substr(slash + 1)));
  if (den == 0) throw Error(ErrorKind::Parse, "zero denominator in '" + std::string(text) + "'");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

Integer height(const Rational& q) {
  Integer n = abs(q.get_num());
  return n > q.get_den() ? n : Integer(q.get_den());
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer round_nearest(const Rational& q) {
  // floor(q + 1/2)
  Integer twice_num = 2 * q.get_num() + q.get_den();
  return floor_div(twice_num, 2 * Integer(q.get_den()));
}

bool rational_sqrt(const Rational& q, Rational& root) {
  if (q < 0) return false;
  if (!mpz_perfect_square_p(q.get_num().get_mpz_t()) || !mpz_perfect_square_p(q.get_den().get_mpz_t()))
    return false;
  Integer n, d;
  mpz_sqrt(n.get_mpz_t(), q.get_num().get_mpz_t());
  mpz_sqrt(d.get_mpz_t(), q.get_den().get_mpz_t());
  root = Rational(n, d);
  root.canonicalize();
  return true;
}

void squarefree_decompose(const Integer& d, Integer& square_root_part, Integer& squarefree_part) {
  // trial division is capped; a cofactor without small primes is kept whole unless it is a square
  const unsigned long limit = 1UL << 20;
  Integer rest = abs(d);
  square_root_part = 1;
  squarefree_part = 1;
  for (unsigned long p = 2; p <= limit && Integer(p) * p <= rest; p += (p == 2 ? 1 : 2)) {
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p * p)) {
      rest /= p * p;
      square_root_part *= p;
    }
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      rest /= p;
      squarefree_part *= p;
    }
  }
  if (rest > 1 && mpz_perfect_square_p(rest.get_mpz_t())) {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), rest.get_mpz_t());
    square_root_part *= r;
    rest = 1;
  }
  squarefree_part *= rest;
  if (d < 0) squarefree_part = -squarefree_part;
}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace abvar
