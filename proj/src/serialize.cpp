#include "qgcb/serialize.hpp"

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "qgcb/errors.hpp"

namespace qgcb::io {

json to_json(const LaurentPoly& p) {
  json terms = json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back(json::array({e, c.get_str()}));
  return json{{"terms", terms}};
}

LaurentPoly laurent_from_json(const json& j) {
  try {
    std::vector<LaurentPoly::Term> terms;
    for (const auto& t : j.at("terms")) {
      if (!t.is_array() || t.size() != 2) throw ParseError("LaurentPoly term must be [exp, coeff]");
      Integer c;
      if (t[1].is_string()) {
        if (c.set_str(t[1].get<std::string>(), 10) != 0) throw ParseError("bad integer: " + t[1].get<std::string>());
      } else {
        c = Integer(t[1].get<long>());
      }
      terms.emplace_back(t[0].get<int>(), c);
    }
    return LaurentPoly::from_terms(std::move(terms));
  } catch (const json::exception& ex) {
    throw ParseError(std::string("LaurentPoly: ") + ex.what());
  }
}

json to_json(const RatFunc& r) { return json{{"num", to_json(r.num())}, {"den", to_json(r.den())}}; }

RatFunc ratfunc_from_json(const json& j) {
  try {
    return RatFunc(laurent_from_json(j.at("num")), laurent_from_json(j.at("den")));
  } catch (const json::exception& ex) {
    throw ParseError(std::string("RatFunc: ") + ex.what());
  }
}

DividedMonomial parse_divided_monomial(const std::string& s) {
  DividedMonomial m;
  if (s == "1") return m;
  static const std::regex factor(R"(F(\d+)(?:\^\((\d+)\))?)");
  std::size_t pos = 0;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), factor); it != std::sregex_iterator(); ++it) {
    if (static_cast<std::size_t>(it->position()) != pos) throw ParseError("bad divided monomial: " + s);
    int i = std::stoi((*it)[1]);
    int a = (*it)[2].matched ? std::stoi((*it)[2]) : 1;
    m.factors.push_back({i, a});
    pos += it->length();
  }
  if (pos != s.size() || m.factors.empty()) throw ParseError("bad divided monomial: " + s);
  return m;
}

json canonical_basis_to_json(const NuWeight& nu, const std::vector<CanonicalElement>& b) {
  std::set<DividedMonomial> monos;
  for (const auto& e : b)
    for (const auto& [m, c] : e.expansion) monos.insert(m);
  std::vector<DividedMonomial> order(monos.begin(), monos.end());
  json jm = json::array(), jb = json::array(), jl = json::array(), je = json::array();
  for (const auto& m : order) jm.push_back(m.to_string());
  for (const auto& e : b) {
    json row = json::array();
    for (const auto& m : order) {
      auto it = e.expansion.find(m);
      row.push_back(to_json(it == e.expansion.end() ? LaurentPoly() : it->second));
    }
    jb.push_back(row);
    jl.push_back(e.label());
    je.push_back(e.eps);
  }
  return json{{"nu", nu.mult}, {"monomials", jm}, {"basis", jb}, {"labels", jl}, {"eps", je}};
}

std::vector<CanonicalElement> canonical_basis_from_json(const FAlgebra& f, const json& j) {
  try {
    NuWeight nu{j.at("nu").get<std::vector<int>>()};
    std::vector<DividedMonomial> monos;
    for (const auto& s : j.at("monomials")) monos.push_back(parse_divided_monomial(s.get<std::string>()));
    std::vector<CanonicalElement> out;
    const auto& rows = j.at("basis");
    for (std::size_t k = 0; k < rows.size(); ++k) {
      CanonicalElement e;
      if (rows[k].size() != monos.size()) throw ParseError("basis row length differs from monomial count");
      for (std::size_t m = 0; m < monos.size(); ++m) {
        auto c = laurent_from_json(rows[k][m]);
        if (!c.is_zero()) e.expansion[monos[m]] = c;
      }
      if (j.contains("labels")) e.leading = parse_divided_monomial(j["labels"].at(k).get<std::string>());
      if (j.contains("eps")) e.eps = j["eps"].at(k).get<std::vector<int>>();
      e.element = f.from_expansion(nu, e.expansion);
      out.push_back(std::move(e));
    }
    return out;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("canonical basis JSON: ") + ex.what());
  }
}

json to_json(const RootDatum& d) {
  return json{{"name", d.name()}, {"symmetrizers", d.cartan().symmetrizers}, {"cartan", d.cartan().matrix}};
}

RootDatum datum_from_json(const json& j) {
  try {
    CartanDatum c;
    c.name = j.value("name", std::string("custom"));
    c.matrix = j.at("cartan").get<std::vector<std::vector<int>>>();
    c.symmetrizers = j.contains("symmetrizers") ? j["symmetrizers"].get<std::vector<int>>()
                                                : std::vector<int>(c.matrix.size(), 1);
    c.validate();
    return RootDatum(c);
  } catch (const json::exception& ex) {
    throw ParseError(std::string("datum JSON: ") + ex.what());
  }
}

json to_json(const CheckResult& c) {
  return json{{"name", c.name},
              {"passed", c.passed},
              {"observational", c.observational},
              {"checked", c.checked},
              {"counterexamples", c.counterexamples}};
}

namespace {

void leaf_labels(const Module& m, std::size_t k, std::vector<std::string>& out) {
  if (m.kind() != ModuleKind::Tensor) {
    out.push_back(m.vec(k).label);
    return;
  }
  leaf_labels(*m.left(), m.vec(k).left, out);
  leaf_labels(*m.right(), m.vec(k).right, out);
}

json matrix_to_json(const Matrix<RatFunc>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Matrix<RatFunc> matrix_from_json(const json& j) {
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j[0].size() : 0;
  Matrix<RatFunc> m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (j[r].size() != cols) throw ParseError("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = ratfunc_from_json(j[r][c]);
  }
  return m;
}

}  // namespace

DiamondRecord diamond_record(const DiamondBasis& d) {
  DiamondRecord r;
  r.module = d.module->name();
  for (std::size_t k = 0; k < d.size(); ++k) {
    r.standard.push_back(d.label(k));
    DiamondRecord::Element e;
    leaf_labels(*d.module, k, e.index);
    for (const auto& [j, c] : d.elements[k]) e.vector.emplace_back(j, c);
    r.elements.push_back(std::move(e));
  }
  return r;
}

json to_json(const DiamondRecord& r) {
  json elems = json::array();
  for (const auto& e : r.elements) {
    json vec = json::array();
    for (const auto& [k, c] : e.vector) vec.push_back(json::array({k, to_json(c)}));
    elems.push_back(json{{"index", e.index}, {"vector", vec}});
  }
  return json{{"module", r.module}, {"standard", r.standard}, {"elements", elems}};
}

DiamondRecord diamond_record_from_json(const json& j) {
  try {
    DiamondRecord r;
    r.module = j.at("module").get<std::string>();
    r.standard = j.at("standard").get<std::vector<std::string>>();
    for (const auto& je : j.at("elements")) {
      DiamondRecord::Element e;
      e.index = je.at("index").get<std::vector<std::string>>();
      for (const auto& t : je.at("vector")) {
        auto k = t.at(0).get<std::size_t>();
        if (k >= r.standard.size()) throw ParseError("tensor index out of range");
        e.vector.emplace_back(k, laurent_from_json(t.at(1)));
      }
      r.elements.push_back(std::move(e));
    }
    return r;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("diamond basis JSON: ") + ex.what());
  }
}

std::string to_csv(const DiamondRecord& r) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
  };
  std::ostringstream os;
  os << "element,element_label,tensor,tensor_label,exponent,coefficient\n";
  for (std::size_t k = 0; k < r.elements.size(); ++k)
    for (const auto& [j, c] : r.elements[k].vector)
      for (const auto& [e, x] : c.terms())
        os << k << ',' << quote(r.standard[k]) << ',' << j << ',' << quote(r.standard[j]) << ',' << e << ','
           << x.get_str() << '\n';
  return os.str();
}

ThetaRecord theta_record(const ThetaExpansion& th, const CanonicalBasisProvider* cb, int ht_bound) {
  ThetaRecord r;
  const auto& f = th.algebra();
  r.datum = to_json(f.datum());
  r.ht_bound = ht_bound;
  for (int h = 0; h <= ht_bound; ++h)
    for (const auto& nu : nu_weights_of_height(f.rank(), h)) {
      ThetaRecord::Level lv;
      lv.nu = nu;
      lv.words = f.space(nu)->basis;
      lv.matrix = th.level(nu);
      if (cb) {
        auto e = theta_cb_expansion(th, *cb, nu);
        lv.cb_labels = e.labels;
        lv.cb_matrix = e.coefficients;
        lv.cb_integral = e.integral;
      }
      r.levels.push_back(std::move(lv));
    }
  return r;
}

json to_json(const ThetaRecord& r) {
  json levels = json::array();
  for (const auto& lv : r.levels) {
    json j{{"nu", lv.nu.mult}, {"words", lv.words}, {"matrix", matrix_to_json(lv.matrix)}};
    if (lv.cb_integral)
      j["canonical"] = json{{"labels", lv.cb_labels}, {"matrix", matrix_to_json(lv.cb_matrix)}, {"integral", *lv.cb_integral}};
    levels.push_back(j);
  }
  return json{{"datum", r.datum}, {"ht_bound", r.ht_bound}, {"levels", levels}};
}

ThetaRecord theta_record_from_json(const json& j) {
  try {
    ThetaRecord r;
    r.datum = j.at("datum");
    r.ht_bound = j.at("ht_bound").get<int>();
    for (const auto& jl : j.at("levels")) {
      ThetaRecord::Level lv;
      lv.nu = NuWeight{jl.at("nu").get<std::vector<int>>()};
      lv.words = jl.at("words").get<std::vector<Word>>();
      lv.matrix = matrix_from_json(jl.at("matrix"));
      if (jl.contains("canonical")) {
        const auto& c = jl["canonical"];
        lv.cb_labels = c.at("labels").get<std::vector<std::string>>();
        lv.cb_matrix = matrix_from_json(c.at("matrix"));
        lv.cb_integral = c.at("integral").get<bool>();
      }
      r.levels.push_back(std::move(lv));
    }
    return r;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("theta JSON: ") + ex.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << contents;
    if (!out) throw Error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace qgcb::io
