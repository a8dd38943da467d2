#include "qgcb/rootdata.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "qgcb/errors.hpp"
#include "qgcb/linalg.hpp"

namespace qgcb {

namespace {

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k];
  os << ")";
  return os.str();
}

}  // namespace

bool Weight::is_dominant() const {
  return std::all_of(coords.begin(), coords.end(), [](int c) { return c >= 0; });
}

std::string Weight::to_string() const { return join(coords); }

Weight& Weight::operator+=(const Weight& o) {
  if (o.rank() != rank()) throw DomainError("weight rank mismatch");
  for (std::size_t k = 0; k < coords.size(); ++k) coords[k] += o.coords[k];
  return *this;
}

Weight& Weight::operator-=(const Weight& o) {
  if (o.rank() != rank()) throw DomainError("weight rank mismatch");
  for (std::size_t k = 0; k < coords.size(); ++k) coords[k] -= o.coords[k];
  return *this;
}

Weight Weight::operator-() const {
  Weight w = *this;
  for (auto& c : w.coords) c = -c;
  return w;
}

NuWeight NuWeight::simple(std::size_t n, std::size_t i) {
  NuWeight nu = zero(n);
  nu.mult[i] = 1;
  return nu;
}

int NuWeight::height() const {
  int h = 0;
  for (int m : mult) h += m;
  return h;
}

bool NuWeight::fits_in(const NuWeight& o) const {
  for (std::size_t k = 0; k < mult.size(); ++k)
    if (mult[k] > o.mult[k]) return false;
  return true;
}

std::string NuWeight::to_string() const { return join(mult); }

NuWeight& NuWeight::operator+=(const NuWeight& o) {
  if (o.rank() != rank()) throw DomainError("nu rank mismatch");
  for (std::size_t k = 0; k < mult.size(); ++k) mult[k] += o.mult[k];
  return *this;
}

NuWeight operator-(const NuWeight& a, const NuWeight& b) {
  if (a.rank() != b.rank()) throw DomainError("nu rank mismatch");
  NuWeight r = a;
  for (std::size_t k = 0; k < r.mult.size(); ++k) {
    r.mult[k] -= b.mult[k];
    if (r.mult[k] < 0) throw DomainError("nu subtraction leaves N[I]");
  }
  return r;
}

std::vector<NuWeight> nu_weights_of_height(std::size_t rank, int height) {
  std::vector<NuWeight> out;
  if (rank == 0) {
    if (height == 0) out.push_back(NuWeight{});
    return out;
  }
  std::vector<int> cur(rank, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
    if (pos + 1 == rank) {
      cur[pos] = left;
      out.push_back(NuWeight{cur});
      return;
    }
    for (int m = left; m >= 0; --m) {
      cur[pos] = m;
      rec(pos + 1, left - m);
    }
  };
  rec(0, height);
  return out;
}

void CartanDatum::validate() const {
  const std::size_t n = matrix.size();
  if (n == 0) throw DomainError("Cartan datum: empty index set");
  if (symmetrizers.size() != n) throw DomainError("Cartan datum: symmetrizer count mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) throw DomainError("Cartan datum: matrix is not square");
    if (symmetrizers[i] <= 0) throw DomainError("Cartan datum: symmetrizers must be positive");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        if (matrix[i][i] != 2) throw DomainError("Cartan datum: diagonal entries must be 2");
        continue;
      }
      if (matrix[i][j] > 0) throw DomainError("Cartan datum: off-diagonal entries must be <= 0");
      if ((matrix[i][j] == 0) != (matrix[j][i] == 0))
        throw DomainError("Cartan datum: a_ij = 0 must imply a_ji = 0");
      if (symmetrizers[i] * matrix[i][j] != symmetrizers[j] * matrix[j][i])
        throw DomainError("Cartan datum: matrix is not symmetrizable by the given d");
    }
}

RootDatum::RootDatum(CartanDatum cartan) : cartan_(std::move(cartan)) {
  cartan_.validate();
  // Y-regularity of the simply-connected realisation: i -> <i, .> is the
  // i-th coordinate functional, so distinct indices give distinct maps.
  std::set<std::vector<int>> functionals;
  for (std::size_t i = 0; i < rank(); ++i) {
    std::vector<int> f(rank(), 0);
    f[i] = 1;
    functionals.insert(f);
  }
  if (functionals.size() != rank()) throw InvariantViolation("root datum is not Y-regular");
}

RootDatum RootDatum::preset(const std::string& name) {
  if (name == "A1") return RootDatum(CartanDatum{"A1", {1}, {{2}}});
  if (name == "A2") return RootDatum(CartanDatum{"A2", {1, 1}, {{2, -1}, {-1, 2}}});
  // Index 0 is the long simple root.
  if (name == "B2") return RootDatum(CartanDatum{"B2", {2, 1}, {{2, -1}, {-2, 2}}});
  if (name == "A1^(1)") return RootDatum(CartanDatum{"A1^(1)", {1, 1}, {{2, -2}, {-2, 2}}});
  throw DomainError("unknown datum preset: " + name);
}

std::vector<std::string> RootDatum::preset_names() { return {"A1", "A2", "B2", "A1^(1)"}; }

int RootDatum::dot(const NuWeight& nu, std::size_t i) const {
  int s = 0;
  for (std::size_t j = 0; j < rank(); ++j) s += nu.mult[j] * dot(j, i);
  return s;
}

int RootDatum::dot(const NuWeight& x, const NuWeight& y) const {
  int s = 0;
  for (std::size_t i = 0; i < rank(); ++i)
    if (y.mult[i]) s += y.mult[i] * dot(x, i);
  return s;
}

Weight RootDatum::simple_root(std::size_t i) const {
  Weight w = zero_weight();
  for (std::size_t j = 0; j < rank(); ++j) w.coords[j] = a(j, i);
  return w;
}

Weight RootDatum::to_weight(const NuWeight& nu) const {
  Weight w = zero_weight();
  for (std::size_t i = 0; i < rank(); ++i)
    for (std::size_t j = 0; j < rank(); ++j) w.coords[j] += nu.mult[i] * a(j, i);
  return w;
}

Weight RootDatum::fundamental_weight(std::size_t i) const {
  Weight w = zero_weight();
  w.coords.at(i) = 1;
  return w;
}

bool RootDatum::is_symmetric() const {
  for (std::size_t i = 0; i < rank(); ++i)
    for (std::size_t j = 0; j < rank(); ++j)
      if (a(i, j) != a(j, i)) return false;
  return true;
}

bool RootDatum::is_finite_type() const {
  // Positive definiteness of (i.j) via leading principal minors.
  for (std::size_t k = 1; k <= rank(); ++k) {
    Matrix<Rational> m(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) m(i, j) = Rational(dot(i, j));
    if (sgn(determinant(m)) <= 0) return false;
  }
  return true;
}

std::vector<NuWeight> RootDatum::positive_roots() const {
  if (!is_finite_type()) throw DomainError("positive_roots: finite type only");
  const std::size_t n = rank();
  std::set<NuWeight> roots;
  std::vector<NuWeight> frontier;
  for (std::size_t i = 0; i < n; ++i) {
    roots.insert(NuWeight::simple(n, i));
    frontier.push_back(NuWeight::simple(n, i));
  }
  // Grow by simple-root strings: beta + alpha_i is a root iff p - <i,beta> > 0,
  // where p is the length of the downward alpha_i-string through beta.
  while (!frontier.empty()) {
    std::vector<NuWeight> next;
    for (const auto& beta : frontier) {
      for (std::size_t i = 0; i < n; ++i) {
        int p = 0;
        NuWeight down = beta;
        while (down.mult[i] > 0) {
          down.mult[i] -= 1;
          if (!roots.count(down)) break;
          ++p;
        }
        int pair = 0;
        for (std::size_t j = 0; j < n; ++j) pair += beta.mult[j] * a(i, j);
        if (p - pair > 0) {
          NuWeight up = beta;
          up.mult[i] += 1;
          if (roots.insert(up).second) next.push_back(up);
        }
      }
    }
    frontier = std::move(next);
  }
  return {roots.begin(), roots.end()};
}

long long RootDatum::positive_root_partitions(const NuWeight& nu) const {
  auto roots = positive_roots();
  std::map<std::pair<std::size_t, NuWeight>, long long> memo;
  std::function<long long(std::size_t, const NuWeight&)> count = [&](std::size_t k, const NuWeight& rest) {
    if (rest.is_zero()) return 1LL;
    if (k == roots.size()) return 0LL;
    auto key = std::make_pair(k, rest);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    long long total = count(k + 1, rest);
    NuWeight r = rest;
    while (roots[k].fits_in(r)) {
      r = r - roots[k];
      total += count(k + 1, r);
    }
    memo[key] = total;
    return total;
  };
  return count(0, nu);
}

}  // namespace qgcb
