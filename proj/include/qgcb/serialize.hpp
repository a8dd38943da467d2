#pragma once

// JSON and CSV interchange. Exact integers travel as decimal strings.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgcb/canonical.hpp"
#include "qgcb/falgebra.hpp"
#include "qgcb/quasir.hpp"
#include "qgcb/scalars.hpp"
#include "qgcb/tensorcb.hpp"

namespace qgcb::io {

using nlohmann::json;

/// {"terms": [[exp, "coeff"], ...]}, exponents ascending.
json to_json(const LaurentPoly& p);
LaurentPoly laurent_from_json(const json& j);
/// {"num": LaurentPoly, "den": LaurentPoly}.
json to_json(const RatFunc& r);
RatFunc ratfunc_from_json(const json& j);

/// Inverse of DividedMonomial::to_string ("F0^(2)F1", "1").
DividedMonomial parse_divided_monomial(const std::string& s);

/// {"nu", "monomials", "basis", "labels", "eps"}; basis[k][m] is the
/// coefficient of monomials[m] in the k-th element.
json canonical_basis_to_json(const NuWeight& nu, const std::vector<CanonicalElement>& b);
std::vector<CanonicalElement> canonical_basis_from_json(const FAlgebra& f, const json& j);

/// {"name", "symmetrizers", "cartan"}.
json to_json(const RootDatum& d);
RootDatum datum_from_json(const json& j);

json to_json(const CheckResult& c);

/// A diamond basis as plain data: per element its index (one label per
/// factor) and its coordinates on the standard tensors.
struct DiamondRecord {
  struct Element {
    std::vector<std::string> index;
    std::vector<std::pair<std::size_t, LaurentPoly>> vector;
  };
  std::string module;
  std::vector<std::string> standard;  // labels of the standard tensors
  std::vector<Element> elements;
};
DiamondRecord diamond_record(const DiamondBasis& d);
json to_json(const DiamondRecord& r);
DiamondRecord diamond_record_from_json(const json& j);
/// element,element_label,tensor,tensor_label,exponent,coefficient
std::string to_csv(const DiamondRecord& r);

/// Theta_nu for every nu up to a height bound, on basis words and, when a
/// canonical basis is available, on canonical basis elements with the
/// integrality of that expansion recorded.
struct ThetaRecord {
  struct Level {
    NuWeight nu;
    std::vector<Word> words;
    Matrix<RatFunc> matrix;
    std::vector<std::string> cb_labels;
    Matrix<RatFunc> cb_matrix;
    std::optional<bool> cb_integral;
  };
  json datum;
  int ht_bound = 0;
  std::vector<Level> levels;
};
ThetaRecord theta_record(const ThetaExpansion& th, const CanonicalBasisProvider* cb, int ht_bound);
json to_json(const ThetaRecord& r);
ThetaRecord theta_record_from_json(const json& j);

/// Writes to a sibling temporary file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace qgcb::io
