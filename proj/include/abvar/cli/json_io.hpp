#pragma once

#include "abvar/decompose/decompose.hpp"
#include "abvar/gaction/gaction.hpp"

#include <json.hpp>

#include <string>

namespace abvar::io {

using Json = nlohmann::json;

/// {"rat": "p/q"}, {"alg": {"poly", "coeffs", "root"}} or {"dec": {"re", "im", "prec"}}.
Json encode(const ExactComplex& x);
Json encode(const Rational& q);
/// Also accepts plain JSON integers and "p/q" strings. Throws Parse.
ExactComplex decode_number(const Json& j, Precision prec);
Rational decode_rational(const Json& j);
Integer decode_integer(const Json& j);

Json encode(const CMatrix& m);
Json encode(const RatMatrix& m);
Json encode(const IntMatrix& m);
CMatrix decode_cmatrix(const Json& j, Precision prec);
RatMatrix decode_ratmatrix(const Json& j);
IntMatrix decode_intmatrix(const Json& j);

Json encode(const pav::PolarizationType& t);
pav::PolarizationType decode_type(const Json& j);

// pav/1: {"type", "z"} or {"period"} with a diagonal integral left block.
Json encode(const pav::PolarizedAV& a);
pav::PolarizedAV decode_pav(const Json& j, Precision prec);

// endo/1: {"matrix"} and optionally {"form": [a_12, ...]}.
Json encode_endo(const RatMatrix& f);
RatMatrix decode_endo(const Json& j);

// embedding/1: induced polarization, optionally with the factor period data.
Json encode(const subvariety::InducedPolarization& ip);
Json encode(const subvariety::SubvarietyEmbedding& e);
subvariety::SubvarietyEmbedding decode_embedding(const Json& j, Precision prec);

// group/1: {"g", "E", "generators", "elements"}.
Json encode(const gaction::SymplecticRep& rep);
gaction::SymplecticRep decode_group(const Json& j);

// restricted/1
Json encode(const gaction::RestrictedRep& r);
gaction::RestrictedRep decode_restricted(const Json& j);

// riemann/1
Json encode(const gaction::FixedRiemannResult& r);
gaction::FixedRiemannResult decode_riemann(const Json& j, Precision prec);

// tree/1
Json encode(const decompose::EllipticReport& e);
decompose::EllipticReport decode_elliptic(const Json& j, Precision prec);
Json encode(const decompose::DecompositionTree& t);
decompose::DecompositionTree decode_tree(const Json& j, Precision prec);

/// Checks the "schema" tag when present.
void expect_schema(const Json& j, const std::string& schema);

Json read_json(const std::string& path);
/// Writes to a temporary file next to the target, then renames it into place.
void write_json_atomic(const std::string& path, const Json& j);

}  // namespace abvar::io
