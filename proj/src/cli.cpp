#include "qgcb/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "qgcb/errors.hpp"
#include "qgcb/serialize.hpp"
#include "qgcb/tensorcb.hpp"

#ifndef QGCB_VERSION
#define QGCB_VERSION "unknown"
#endif

namespace qgcb::cli {

using nlohmann::json;

json JobConfig::to_json() const {
  return json{{"datum", datum}, {"weights", weights}, {"r", r},          {"ht_bound", ht_bound},
              {"checks", checks}, {"out", out},       {"csv", csv},      {"report", report},
              {"seed", seed}};
}

const std::vector<std::string>& default_checks() {
  static const std::vector<std::string> v = {"bar", "lattice", "triangular", "reduction", "assoc", "positivity", "oracle"};
  return v;
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> v = {"bar",    "lattice",   "triangular", "reduction", "assoc",       "positivity",
                                             "oracle", "chi",       "relations",  "star",      "intertwining"};
  return v;
}

RootDatum load_datum(const std::string& source) {
  auto names = RootDatum::preset_names();
  if (std::find(names.begin(), names.end(), source) != names.end()) return RootDatum::preset(source);
  if (!std::filesystem::exists(source)) throw ParseError("unknown datum '" + source + "': not a preset and not a file");
  json j;
  try {
    j = json::parse(io::read_file(source));
  } catch (const json::exception& ex) {
    throw ParseError("datum file " + source + ": " + ex.what());
  }
  try {
    return io::datum_from_json(j);
  } catch (const DomainError& ex) {
    throw ParseError(std::string("datum file: ") + ex.what());
  }
}

std::vector<Weight> parse_weights(const std::string& s, std::size_t rank) {
  auto numbers = [&](const std::string& part) {
    std::vector<int> out;
    std::stringstream ss(part);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
      if (tok.empty()) throw ParseError("empty coordinate in weights '" + s + "'");
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw ParseError("bad coordinate '" + tok + "' in weights '" + s + "'");
      out.push_back(v);
    }
    return out;
  };
  std::vector<Weight> out;
  if (s.find_first_not_of(" \t") == std::string::npos) return out;
  if (s.find(';') != std::string::npos) {
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ';')) {
      auto w = numbers(part);
      if (w.size() != rank)
        throw ParseError("weight '" + part + "' has " + std::to_string(w.size()) + " coordinates, expected " +
                         std::to_string(rank));
      out.push_back(Weight{w});
    }
  } else {
    auto all = numbers(s);
    if (all.size() % rank != 0)
      throw ParseError("weights '" + s + "' do not split into weights of rank " + std::to_string(rank));
    for (std::size_t k = 0; k < all.size(); k += rank)
      out.push_back(Weight{std::vector<int>(all.begin() + k, all.begin() + k + rank)});
  }
  for (const auto& w : out)
    if (!w.is_dominant()) throw ParseError("weight " + w.to_string() + " is not dominant");
  return out;
}

void validate(const JobConfig& c, std::size_t num_weights) {
  if (c.r > num_weights)
    throw ParseError("r = " + std::to_string(c.r) + " exceeds the number of weights " + std::to_string(num_weights));
  if (c.ht_bound < 0) throw ParseError("--ht-bound must be >= 0");
  for (const auto& ch : c.checks)
    if (std::find(known_checks().begin(), known_checks().end(), ch) == known_checks().end())
      throw ParseError("unknown check '" + ch + "'");
}

namespace {

struct Session {
  RootDatum datum;
  std::shared_ptr<const CanonicalBasisProvider> cb;
  std::shared_ptr<const ThetaExpansion> th;
  std::shared_ptr<const PsiEngine> psi;
};

Session open_session(const JobConfig& c) {
  auto datum = load_datum(c.datum);
  auto f = std::make_shared<FAlgebra>(datum);
  auto cb = std::make_shared<CanonicalBasisProvider>(f);
  if (const char* dir = std::getenv("QGCB_CACHE_DIR"); dir && *dir) cb->set_cache_dir(std::filesystem::path(dir));
  auto th = std::make_shared<ThetaExpansion>(f);
  return Session{datum, cb, th, std::make_shared<PsiEngine>(th)};
}

MultiWeight multi_weight(const JobConfig& c, const RootDatum& d) {
  MultiWeight w{parse_weights(c.weights, d.rank()), c.r};
  validate(c, w.lambdas.size());
  return w;
}

json envelope(const JobConfig& c, const RootDatum& d) {
  return json{{"config", c.to_json()}, {"version", QGCB_VERSION}, {"datum", io::to_json(d)}};
}

CheckResult from_relations(const std::string& what, const RelationsReport& rep) {
  CheckResult res;
  res.name = "relations";
  res.checked = rep.checked;
  for (const auto& f : rep.failures) res.fail(what + ": " + f);
  return res;
}

void merge(CheckResult& into, const CheckResult& more) {
  into.checked += more.checked;
  into.passed = into.passed && more.passed;
  into.counterexamples.insert(into.counterexamples.end(), more.counterexamples.begin(), more.counterexamples.end());
}

Vec random_vector(std::mt19937_64& rng, const Module& m) {
  std::uniform_int_distribution<int> coeff(-3, 3), expo(-3, 3);
  Vec v;
  for (std::size_t k = 0; k < m.size(); ++k)
    if (int c = coeff(rng)) v[k] = RatFunc(LaurentPoly::monomial(Integer(c), expo(rng)));
  return v;
}

}  // namespace

json run_compute(const JobConfig& c) {
  auto s = open_session(c);
  auto w = multi_weight(c, s.datum);
  auto d = multi_diamond(s.cb, *s.th, w, c.ht_bound);
  auto rec = io::diamond_record(d);
  json j = envelope(c, s.datum);
  j["basis"] = io::to_json(rec);
  if (!c.out.empty()) io::write_file_atomic(c.out, j.dump(2) + "\n");
  if (!c.csv.empty()) io::write_file_atomic(c.csv, io::to_csv(rec));
  return j;
}

json run_verify(const JobConfig& c) {
  auto s = open_session(c);
  auto w = multi_weight(c, s.datum);
  auto checks = c.checks.empty() ? default_checks() : c.checks;
  auto d = multi_diamond(s.cb, *s.th, w, c.ht_bound);
  const bool tensor = d.module->kind() == ModuleKind::Tensor;
  std::mt19937_64 rng(c.seed);
  std::vector<CheckResult> results;
  for (const auto& name : checks) {
    if (name == "bar") {
      results.push_back(check_bar_invariance(*s.psi, d));
      CheckResult inv;
      inv.name = "involution";
      for (int rep = 0; rep < 8 && tensor; ++rep) {
        Vec v = random_vector(rng, *d.module);
        Vec back = s.psi->psi_apply(d.module, s.psi->psi_apply(d.module, v));
        add_scaled(back, v, RatFunc(-1));
        ++inv.checked;
        if (!back.empty()) inv.fail("Psi is not an involution on a sampled vector");
      }
      results.push_back(inv);
    } else if (name == "lattice") {
      auto res = check_lattice(d);
      if (tensor) {
        auto lp = check_lattice_preservation(*s.psi, d.module);
        res.checked += lp.checked;
        for (const auto& v : lp.violations) res.fail(v);
      }
      results.push_back(res);
      if (CanonicalBasisProvider::supports(s.cb->method(), s.datum)) {
        CheckResult theta;
        theta.name = "theta-expansion";
        theta.observational = true;
        for (int h = 1; h <= c.ht_bound; ++h)
          for (const auto& nu : nu_weights_of_height(s.datum.rank(), h)) {
            ++theta.checked;
            if (!theta_cb_expansion(*s.th, *s.cb, nu).integral)
              theta.fail("Theta at nu = " + nu.to_string() + " has non-integral canonical coefficients");
          }
        results.push_back(theta);
      }
    } else if (name == "triangular") {
      results.push_back(check_triangular(*s.psi, d));
    } else if (name == "reduction") {
      results.push_back(check_reduction(d));
    } else if (name == "assoc") {
      CheckResult res;
      res.name = "assoc";
      if (w.lambdas.size() >= 3) {
        auto leaves = multi_leaves(s.cb, w, c.ht_bound);
        for (bool left : {true, false}) merge(res, compare_bracketings(d, bracketed_diamond(*s.th, leaves, left, c.ht_bound)));
      }
      results.push_back(res);
    } else if (name == "positivity") {
      results.push_back(positivity_scan(d, s.datum, w.r));
    } else if (name == "oracle") {
      results.push_back(check_oracle(*s.psi, d));
      if (tensor) results.push_back(check_generation(*s.psi, d));
    } else if (name == "chi") {
      if (w.r == 0 && !w.lambdas.empty()) {
        results.push_back(chi_embedding(s.cb, *s.th, w.lambdas, c.ht_bound).check);
      } else {
        CheckResult res;
        res.name = "chi";
        res.observational = true;
        res.counterexamples.push_back("skipped: needs r = 0 and at least one weight");
        results.push_back(res);
      }
    } else if (name == "relations") {
      results.push_back(from_relations(d.module->name(), check_relations(*d.module)));
    } else if (name == "star") {
      CheckResult res;
      res.name = "star";
      if (tensor) {
        auto st = certify_star(*s.th, *d.module);
        res.checked = st.checked;
        if (!st.admissible) res.fail(st.reason);
        for (const auto& v : st.violations) res.fail(v);
      }
      results.push_back(res);
    } else if (name == "intertwining") {
      CheckResult res;
      res.name = "intertwining";
      if (tensor) {
        auto it = intertwining_residual(*s.th, *d.module);
        res.checked = it.checked;
        for (const auto& f : it.failures) res.fail(f);
      }
      results.push_back(res);
    }
  }
  json j = envelope(c, s.datum);
  json jr = json::array();
  bool passed = true;
  for (const auto& r : results) {
    jr.push_back(io::to_json(r));
    passed = passed && (r.passed || r.observational);
  }
  j["module"] = d.module->name();
  j["size"] = d.size();
  j["checks"] = jr;
  j["passed"] = passed;
  if (!c.report.empty()) io::write_file_atomic(c.report, j.dump(2) + "\n");
  return j;
}

json run_export_theta(const JobConfig& c) {
  if (c.ht_bound < 0) throw ParseError("--ht-bound must be >= 0");
  auto s = open_session(c);
  const bool with_cb = CanonicalBasisProvider::supports(s.cb->method(), s.datum);
  json j = envelope(c, s.datum);
  j["theta"] = io::to_json(io::theta_record(*s.th, with_cb ? s.cb.get() : nullptr, c.ht_bound));
  if (!c.out.empty()) io::write_file_atomic(c.out, j.dump(2) + "\n");
  return j;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Canonical bases of tensor products of quantum group modules"};
  app.footer(
      "Exit codes: 0 success, 1 unexpected failure, 2 configuration or parse error,\n"
      "3 truncation exceeded (raise --ht-bound), 4 invariant violation or failed check.\n"
      "Weights: ';' separates weights, ',' separates coordinates, e.g. \"1,0;0,1\".\n"
      "QGCB_CACHE_DIR caches canonical bases of f between runs.");
  app.require_subcommand(1);
  app.set_version_flag("--version", QGCB_VERSION);
  JobConfig c;
  std::string checks;

  auto common = [&](CLI::App* sub, bool weights) {
    sub->add_option("--datum", c.datum, "preset (A1, A2, B2, A1^(1)) or JSON file")->required();
    sub->add_option("--ht-bound", c.ht_bound, "truncation depth")->capture_default_str();
    sub->add_option("--seed", c.seed, "seed for sampled checks")->capture_default_str();
    if (weights) {
      sub->add_option("--weights", c.weights, "dominant weights lambda_1..lambda_l");
      sub->add_option("--r", c.r, "number of leading lowest-weight factors")->capture_default_str();
    }
  };
  auto* compute = app.add_subcommand("compute", "compute the diamond basis");
  common(compute, true);
  compute->add_option("--out", c.out, "basis JSON")->capture_default_str();
  compute->add_option("--csv", c.csv, "also write a CSV flattening");
  auto* verify = app.add_subcommand("verify", "run verification checks and write a report");
  common(verify, true);
  verify->add_option("--checks", checks, "comma-separated subset of: bar,lattice,triangular,reduction,assoc,"
                                          "positivity,oracle,chi,relations,star,intertwining");
  verify->add_option("--report", c.report, "report JSON")->capture_default_str();
  auto* theta = app.add_subcommand("theta", "export the quasi-R-matrix expansion");
  common(theta, false);
  theta->add_option("--out", c.out, "theta JSON")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kConfigError;
  }

  auto diagnostic = [&](const char* kind, const std::string& msg) {
    err << json{{"error", kind}, {"message", msg}}.dump() << "\n";
  };
  try {
    if (!checks.empty()) {
      std::stringstream ss(checks);
      std::string tok;
      while (std::getline(ss, tok, ',')) c.checks.push_back(tok);
    }
    if (*compute) {
      if (c.out.empty()) c.out = "basis.json";
      auto j = run_compute(c);
      out << "wrote " << j["basis"]["elements"].size() << " elements to " << c.out << "\n";
    } else if (*verify) {
      if (c.report.empty()) c.report = "report.json";
      if (c.checks.empty()) c.checks = default_checks();
      auto j = run_verify(c);
      for (const auto& r : j["checks"])
        out << r["name"].get<std::string>() << ": "
            << (r["passed"].get<bool>() ? "pass" : (r["observational"].get<bool>() ? "observed" : "FAIL")) << " ("
            << r["checked"] << " checked)\n";
      if (!j["passed"].get<bool>()) {
        diagnostic("check-failed", "see " + c.report);
        return kInvariant;
      }
    } else if (*theta) {
      if (c.out.empty()) c.out = "theta.json";
      auto j = run_export_theta(c);
      out << "wrote " << j["theta"]["levels"].size() << " levels to " << c.out << "\n";
    }
    return kOk;
  } catch (const ParseError& ex) {
    diagnostic("config", ex.what());
    return kConfigError;
  } catch (const DomainError& ex) {
    diagnostic("config", ex.what());
    return kConfigError;
  } catch (const TruncationError& ex) {
    diagnostic("truncation", ex.what());
    return kTruncation;
  } catch (const InvariantViolation& ex) {
    diagnostic("invariant", ex.what());
    return kInvariant;
  } catch (const std::exception& ex) {
    diagnostic("failure", ex.what());
    return kFailure;
  }
}

}  // namespace qgcb::cli
