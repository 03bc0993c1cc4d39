#pragma once

// Verification suites behind the hkverify command line: configuration,
// model manifests and JSON reports.

#include <openssl/evp.h>

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hkcoh/exactlin.hpp"
#include "hkcoh/fujiki.hpp"
#include "hkcoh/hodge.hpp"
#include "hkcoh/lefschetz.hpp"
#include "hkcoh/quadspace.hpp"
#include "hkcoh/quatmodel.hpp"
#include "hkcoh/random.hpp"
#include "hkcoh/serialize.hpp"
#include "hkcoh/verbitsky.hpp"

#ifndef HKCOH_PRESET_DIR
#define HKCOH_PRESET_DIR "data/presets"
#endif

namespace hkcoh {

// Invalid input: unreadable files, malformed JSON, bad values. Exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kLargeDimension = 12;

struct SuiteConfig {
  std::string suite;      // build, fujiki, gtot, so41, transport, spinor
  std::string gram_file;  // at most one of gram_file / preset / gram
  std::string preset;
  std::optional<Matrix> gram;
  unsigned n = 1;
  std::uint64_t seed = 0;
  std::string out;
  bool allow_large = false;
  std::optional<std::size_t> cases;  // randomized cases for transport / spinor
  std::optional<HodgePlane> plane;   // base plane for transport
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"build", "fujiki", "gtot", "so41", "transport", "spinor"};
  return names;
}

inline bool suite_needs_space(const std::string& suite) { return suite != "so41"; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parses JSON; syntax errors are reported with line and column.
inline Json parse_json_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

inline void validate(const SuiteConfig& c) {
  bool known = false;
  for (const auto& s : suite_names()) known = known || s == c.suite;
  if (!known) throw ConfigError("unknown suite: " + c.suite);
  if (c.n < 1) throw ConfigError("n must be at least 1");
  const int sources = !c.gram_file.empty() + !c.preset.empty() + c.gram.has_value();
  if (sources > 1) throw ConfigError("give only one of gram file, preset or inline gram");
  if (suite_needs_space(c.suite) && sources == 0) throw ConfigError("suite " + c.suite + " needs --gram or --preset");
  if (c.suite == "so41" && c.n > 2) throw ConfigError("exterior dimension cap: so41 supports n <= 2");
  if (suite_needs_space(c.suite) && c.n > 4) throw ConfigError("model supports n <= 4");
  if (!c.gram_file.empty() && !std::filesystem::exists(c.gram_file))
    throw ConfigError("gram file does not exist: " + c.gram_file);
}

// Config file keys: suite, gram (path or matrix), preset, n, seed, out,
// allow_large, cases, plane.
inline SuiteConfig config_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": config must be a JSON object");
  static const std::vector<std::string> keys{"suite", "gram", "preset", "n", "seed", "out", "allow_large", "cases", "plane"};
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const auto& key : keys) ok = ok || key == k;
    if (!ok) throw ConfigError(where + ": unknown key \"" + k + "\"");
  }
  SuiteConfig c;
  try {
    c.suite = j.value("suite", std::string());
    if (j.contains("gram")) {
      if (j["gram"].is_string()) c.gram_file = j["gram"].get<std::string>();
      else c.gram = matrix_from_json(j["gram"]);
    }
    c.preset = j.value("preset", std::string());
    if (j.contains("n")) {
      const long long n = j["n"].get<long long>();
      if (n < 1) throw ConfigError(where + ": n must be at least 1");
      c.n = static_cast<unsigned>(n);
    }
    c.seed = j.value("seed", std::uint64_t{0});
    c.out = j.value("out", std::string());
    c.allow_large = j.value("allow_large", false);
    if (j.contains("cases")) c.cases = j["cases"].get<std::size_t>();
    if (j.contains("plane")) c.plane = plane_from_json(j["plane"]);
  } catch (const Json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return c;
}

inline SuiteConfig load_config(const std::string& path) {
  SuiteConfig c = config_from_json(parse_json_file(path), path);
  if (!c.gram_file.empty()) {
    std::filesystem::path p(c.gram_file);
    if (p.is_relative()) c.gram_file = (std::filesystem::path(path).parent_path() / p).string();
  }
  validate(c);
  return c;
}

inline std::string preset_path(const std::string& name) {
  for (char ch : name)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_'))
      throw ConfigError("invalid preset name: " + name);
  const char* env = std::getenv("HKCOH_PRESET_DIR");
  std::filesystem::path dir = env ? env : HKCOH_PRESET_DIR;
  auto p = dir / (name + ".json");
  if (!std::filesystem::exists(p)) throw ConfigError("unknown preset: " + name);
  return p.string();
}

// A Gram file is either a bare matrix or an object with a "gram" key (model
// manifests qualify).
inline QuadraticSpace load_gram_file(const std::string& path) {
  Json j = parse_json_file(path);
  try {
    const Json& m = j.is_object() ? j.at("gram") : j;
    return QuadraticSpace(matrix_from_json(m));
  } catch (const Json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

inline QuadraticSpace resolve_space(const SuiteConfig& c) {
  if (c.gram) {
    try {
      return QuadraticSpace(*c.gram);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("inline gram: ") + e.what());
    }
  }
  if (!c.preset.empty()) return load_gram_file(preset_path(c.preset));
  if (!c.gram_file.empty()) return load_gram_file(c.gram_file);
  throw ConfigError("no quadratic space configured");
}

inline std::string gram_source(const SuiteConfig& c) {
  if (c.gram) return "inline";
  if (!c.preset.empty()) return "preset:" + c.preset;
  if (!c.gram_file.empty()) return "file:" + std::filesystem::path(c.gram_file).filename().string();
  return "none";
}

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

// Model manifest: Gram, n, dims, basis monomials, structure constants,
// integral and C_n, plus a SHA-256 of everything else.
inline Json model_manifest(const VerbitskyModel& model) {
  Json m;
  m["gram"] = to_json(model.space().gram());
  m["n"] = model.n();
  m["dims"] = model.dims();
  Json basis = Json::array();
  for (unsigned k = 0; k <= model.top_degree(); ++k) {
    Json deg = Json::array();
    for (auto idx : model.basis_monomials(k)) deg.push_back(model.monomials().monomial(k, idx));
    basis.push_back(std::move(deg));
  }
  m["basis"] = std::move(basis);
  // products of basis elements a in A_j, b in A_k, 1 <= j <= k, j + k <= 2n
  Json products = Json::array();
  for (unsigned j = 1; j <= model.top_degree(); ++j)
    for (unsigned k = j; j + k <= model.top_degree(); ++k) {
      Json table = Json::array();
      for (std::size_t a = 0; a < model.dim(j); ++a)
        for (std::size_t b = (j == k ? a : 0); b < model.dim(k); ++b) {
          Vector p = model.multiply_basis(j, a, k, b);
          Json entries = Json::array();
          for (std::size_t i = 0; i < p.size(); ++i)
            if (sgn(p[i]) != 0) entries.push_back(Json::array({i, to_json(p[i])}));
          table.push_back(Json::array({a, b, std::move(entries)}));
        }
      products.push_back(Json{{"j", j}, {"k", k}, {"table", std::move(table)}});
    }
  m["structure_constants"] = std::move(products);
  m["integral"] = to_json(model.integral_functional()[0]);
  m["C_n"] = to_json(fujiki_constant(model));
  m["hash"] = sha256_hex(m.dump());
  return m;
}

inline std::string model_hash(const VerbitskyModel& model) { return model_manifest(model)["hash"].get<std::string>(); }

struct SuiteResult {
  Json report;
  int exit_code = 0;
  double wall_time_s = 0;  // kept out of the report so reruns are byte-identical
};

namespace detail {

inline void assert_true(Json& report, const std::string& name, bool ok) {
  report["assertions"][name] = ok;
  if (!ok) report["failures"].push_back(name);
}

// A CM plane (x, y) among coordinate vectors and e_i +- e_j.
inline std::optional<HodgePlane> find_cm_plane(const QuadraticSpace& space) {
  const std::size_t d = space.dim();
  std::vector<Vector> cand;
  for (std::size_t i = 0; i < d; ++i) cand.push_back(space.basis_vector(i));
  for (int sign : {1, -1})
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        Vector v = space.basis_vector(i);
        v[j] = sign;
        cand.push_back(std::move(v));
      }
  std::vector<Rational> qs;
  for (const auto& v : cand) qs.push_back(space.q(v));
  for (std::size_t a = 0; a < cand.size(); ++a) {
    if (sgn(qs[a]) <= 0) continue;
    for (std::size_t b = a + 1; b < cand.size(); ++b)
      if (qs[b] == qs[a] && sgn(space.bilinear(cand[a], cand[b])) == 0) return HodgePlane{cand[a], cand[b]};
  }
  return std::nullopt;
}

inline HodgePlane apply(const Matrix& phi, const HodgePlane& p) { return {phi * p.x, phi * p.y}; }

inline Json fujiki_suite(const VerbitskyModel& model, Json report) {
  FujikiReport f = fujiki_verify(model);
  report["C_n"] = to_json(f.c_n);
  assert_true(report, "eq22", f.eq22);
  assert_true(report, "eq23", f.eq23);
  assert_true(report, "eq24", f.eq24);
  for (const auto& s : f.failures) report["failures"].push_back(s);

  // Rational isotropic a: a^{n+1} lies in the ideal and int a^{2n} = 0.
  const std::size_t d = model.space().dim();
  if (d <= 6) {
    const long bound = d <= 3 ? 3 : 1;
    auto iso = isotropic_vectors_in_box(model.space(), bound);
    bool ok = true;
    for (const auto& a : iso) {
      AlgebraElement x = model.linear(a);
      ok = ok && is_zero(model.power(x, model.n() + 1).parts[model.n() + 1]);
      ok = ok && sgn(model.integrate(model.power(x, model.top_degree()))) == 0;
    }
    report["isotropic_vectors_checked"] = iso.size();
    report["isotropic_box"] = bound;
    assert_true(report, "isotropic_consistency", ok);
  }
  return report;
}

inline Json gtot_suite(const VerbitskyModel& model, Json report, bool large) {
  auto hs = lefschetz_generators(model);
  auto triples = sl2_triples(model, hs);
  GradedOperator theta = grading_operator(model);
  bool sl2 = true;
  std::size_t certified = 0;
  bool unique = true;
  for (const auto& t : triples) {
    sl2 = sl2 && bracket(theta, t.l) == Rational(2) * t.l && bracket(theta, t.lambda) == Rational(-2) * t.lambda &&
          bracket(t.l, t.lambda) == theta;
    if (auto k = sl2_uniqueness_kernel_dim(t.l)) {
      ++certified;
      unique = unique && *k == 0;
    }
  }
  Json gens = Json::array();
  for (const auto& h : hs) gens.push_back(to_json(h));
  report["lefschetz_generators"] = std::move(gens);
  assert_true(report, "sl2_relations", sl2);
  report["uniqueness_certified"] = certified;
  assert_true(report, "lambda_unique", unique);

  LieBasis closure = lie_closure(gtot_generators(model, triples));
  GtotReport g = verify_gtot_structure(closure, model, triples, !large);
  report["dim"] = g.dim;
  report["grading_dims"] = g.grading_dims;
  report["commuting_duals"] = g.commuting_duals;
  report["derivation_check"] = g.derivation_check;
  if (g.killing) report["killing_signature"] = to_json(*g.killing);
  assert_true(report, "dim", g.dim_ok);
  assert_true(report, "grading_dims", g.grading_ok);
  assert_true(report, "commuting_duals", g.commuting_duals);
  assert_true(report, "abelian_parts", g.abelian_parts);
  assert_true(report, "derivation_check", g.derivation_check);
  if (g.killing) assert_true(report, "killing_signature", g.killing_ok);
  return report;
}

inline Json so41_suite(unsigned n, Json report) {
  So41Report r = verify_so41(exterior_operators(build_quaternion_model(n)));
  Json ids;
  for (const auto& [name, ok] : r.identities) ids[name] = ok;
  report["identities"] = ids;
  report["closure_dim"] = r.closure_dim;
  report["killing"] = to_json(r.killing);
  for (const auto& [name, ok] : r.identities) assert_true(report, name, ok);
  assert_true(report, "closure_dim", r.closure_dim == 10);
  assert_true(report, "killing_signature", r.killing == Signature{4, 6, 0});
  return report;
}

inline Json transport_suite(const VerbitskyModel& model, const SuiteConfig& c, Json report) {
  const QuadraticSpace& space = model.space();
  std::optional<HodgePlane> base = c.plane ? c.plane : find_cm_plane(space);
  if (!base) throw ConfigError("no rational CM plane found among e_i and e_i +- e_j; pass one in the config");
  validate_plane(space, *base);
  report["base_plane"] = to_json(*base);

  const Matrix id = Matrix::identity(space.dim());
  TransportReport t0 = transport_verify(model, id, *base, *base);
  assert_true(report, "identity_transport", t0.transport);

  SeededRng rng(c.seed);
  const std::size_t cases = c.cases.value_or(25);
  bool hodge = true, transport = true, rejected = true;
  std::map<std::string, std::size_t> verdicts;
  for (std::size_t i = 0; i < cases; ++i) {
    IsometryWitness g = random_isometry(space, rng, 2);
    HodgePlane p1 = apply(g.phi, *base);
    IsometryWitness phi = random_isometry(space, rng, 1 + static_cast<std::size_t>(rng.uniform(0, 3)));
    HodgePlane p2 = apply(phi.phi, p1);
    const bool h = is_hodge_isometry(space, phi.phi, p1, p2);
    hodge = hodge && h;
    if (h) {
      TransportReport r = transport_verify(model, phi.phi, p1, p2);
      transport = transport && r.transport;
      ++verdicts[to_string(r.membership.verdict)];
    }
    rejected = rejected && !is_hodge_isometry(space, phi.phi, p1, p2.swapped());
  }
  report["cases"] = cases;
  report["verdicts"] = verdicts;
  report["hodge_isometry"] = hodge;
  report["transport"] = transport ? "pass" : "fail";
  report["degrees_checked"] = t0.degrees_checked;
  report["verdict"] = to_string(t0.membership.verdict);
  assert_true(report, "hodge_isometry", hodge);
  assert_true(report, "transport", transport);
  assert_true(report, "orientation_swap_rejected", rejected);
  return report;
}

inline Json spinor_suite(const QuadraticSpace& space, const SuiteConfig& c, Json report) {
  SeededRng rng(c.seed);
  const std::size_t cases = c.cases.value_or(100);
  bool mult = true, refl = true;
  for (std::size_t i = 0; i < cases; ++i) {
    IsometryWitness a = random_isometry(space, rng, 1 + static_cast<std::size_t>(rng.uniform(0, 3)));
    IsometryWitness b = random_isometry(space, rng, 1 + static_cast<std::size_t>(rng.uniform(0, 3)));
    IsometryWitness ab = decompose_isometry(space, a.phi * b.phi);
    IsometryWitness da = decompose_isometry(space, a.phi);
    IsometryWitness db = decompose_isometry(space, b.phi);
    mult = mult && ab.spinor_norm == da.spinor_norm * db.spinor_norm && da.spinor_norm == a.spinor_norm &&
           db.spinor_norm == b.spinor_norm && ab.det == a.det * b.det;
    Vector v = random_nonisotropic_vector(space, rng);
    refl = refl && decompose_isometry(space, reflection(space, v)).spinor_norm == squarefree_class(space.q(v));
  }
  MembershipVerdict minus = certify_membership(space, Rational(-1) * Matrix::identity(space.dim()));
  report["cases"] = cases;
  report["minus_identity"] = Json{{"verdict", to_string(minus.verdict)},
                                  {"det", minus.det},
                                  {"spinor_norm", minus.spinor_norm.to_string()}};
  assert_true(report, "sn_multiplicative", mult);
  assert_true(report, "sn_reflection", refl);
  return report;
}

}  // namespace detail

inline Json emit_model(const SuiteConfig& c) {
  validate(c);
  QuadraticSpace space = resolve_space(c);
  if (space.dim() > kLargeDimension && !c.allow_large)
    throw ConfigError("dimension " + std::to_string(space.dim()) + " needs --allow-large");
  return model_manifest(build_model(space, c.n));
}

// Runs one suite. The report depends only on the config.
inline SuiteResult run_suite(const SuiteConfig& c) {
  validate(c);
  const auto start = std::chrono::steady_clock::now();
  Json report;
  report["suite"] = c.suite;
  report["assertions"] = Json::object();
  report["failures"] = Json::array();
  Json inputs{{"n", c.n}, {"seed", c.seed}};

  if (c.suite == "so41") {
    report["inputs"] = inputs;
    report = detail::so41_suite(c.n, std::move(report));
  } else {
    QuadraticSpace space = resolve_space(c);
    const bool large = space.dim() > kLargeDimension;
    if (large && !c.allow_large)
      throw ConfigError("dimension " + std::to_string(space.dim()) + " needs --allow-large");
    inputs["gram_source"] = gram_source(c);
    inputs["dim"] = space.dim();
    report["inputs"] = inputs;
    if (c.suite == "spinor") {
      report = detail::spinor_suite(space, c, std::move(report));
    } else {
      VerbitskyModel model = build_model(space, c.n);
      Json manifest = model_manifest(model);
      report["model_hash"] = manifest["hash"];
      report["dims"] = model.dims();
      if (c.suite == "build") {
        report["C_n"] = manifest["C_n"];
      } else if (c.suite == "fujiki") {
        report = detail::fujiki_suite(model, std::move(report));
      } else if (c.suite == "gtot") {
        report = detail::gtot_suite(model, std::move(report), large);
      } else if (c.suite == "transport") {
        report = detail::transport_suite(model, c, std::move(report));
      }
    }
  }

  const bool pass = report["failures"].empty();
  report["pass"] = pass;
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  return {std::move(report), pass ? 0 : 1, elapsed.count()};
}

}  // namespace hkcoh
