// Acceptance gate: one PASS/FAIL line per criterion. All comparisons are
// exact; the only tolerances are the wall-clock limits below.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hkcoh/suite.hpp"

using namespace hkcoh;

namespace {

constexpr double kDimsLimitS = 1.0;
constexpr double kFujikiLimitS = 10.0;
constexpr double kGtotLimitS = 60.0;
constexpr double kSo41LimitS = 5.0;
constexpr double kStretchLimitS = 15 * 60.0;

// every report produced, with its config, for the determinism rerun
std::vector<std::pair<SuiteConfig, std::string>> g_reports;

SuiteConfig make(const std::string& suite, const Matrix& gram, unsigned n, std::uint64_t seed = 0) {
  SuiteConfig c;
  c.suite = suite;
  c.gram = gram;
  c.n = n;
  c.seed = seed;
  return c;
}

SuiteConfig make_preset(const std::string& suite, const std::string& preset, unsigned n, std::uint64_t seed = 0) {
  SuiteConfig c;
  c.suite = suite;
  c.preset = preset;
  c.n = n;
  c.seed = seed;
  return c;
}

Json run(const SuiteConfig& c) {
  SuiteResult r = run_suite(c);
  g_reports.emplace_back(c, r.report.dump(2));
  return r.report;
}

Matrix identity_gram(std::size_t d) { return Matrix::identity(d); }

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

int g_failed = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_s > 0) o.require(t < limit_s, "time " + std::to_string(t) + " s over limit");
  if (!o.ok) ++g_failed;
  std::printf("%s %2d %-28s %8.2f s%s%s\n", o.ok ? "PASS" : "FAIL", id, name.c_str(), t, o.ok ? "" : "  ",
              o.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  criterion(1, "model-dims", kDimsLimitS, [](Outcome& o) {
    auto a = build_model(QuadraticSpace(identity_gram(5)), 2);
    o.require(a.dims() == std::vector<std::size_t>{1, 5, 15, 5, 1}, "d=5 n=2 dims");
    auto b = build_model(QuadraticSpace(identity_gram(3)), 1);
    o.require(b.dims() == std::vector<std::size_t>{1, 3, 1}, "d=3 n=1 dims");
    run(make("build", identity_gram(5), 2));
    run(make("build", identity_gram(3), 1));
  });

  criterion(2, "fujiki-relations", kFujikiLimitS, [](Outcome& o) {
    for (long d : {3, 4, 5})
      for (unsigned n : {1u, 2u}) {
        Json r = run(make("fujiki", identity_gram(static_cast<std::size_t>(d)), n));
        const std::string tag = "d=" + std::to_string(d) + " n=" + std::to_string(n);
        for (const char* eq : {"eq22", "eq23", "eq24"}) o.require(r["assertions"][eq].get<bool>(), tag + " " + eq);
        const Rational expect = n == 1 ? ratio(1, d) : ratio(3, d * (d + 2));
        o.require(parse_rational(r["C_n"].get<std::string>()) == expect, tag + " C_n");
      }
  });

  criterion(3, "isotropic-consistency", 0, [](Outcome& o) {
    QuadraticSpace s = QuadraticSpace::diagonal({1, -1, 1});
    auto m = build_model(s, 1);
    auto iso = isotropic_vectors_in_box(s, 3);
    o.require(!iso.empty(), "no isotropic vectors found");
    for (const auto& a : iso) {
      Vector sq = m.monomials().multiply(1, a, 1, a);
      o.require(is_zero(m.reduce(2, sq)), "a^2 not in ideal");
      o.require(sgn(m.integrate(m.power(m.linear(a), 2))) == 0, "int a^2 != 0");
    }
    Json r = run(make("fujiki", s.gram(), 1));
    o.require(r["assertions"]["isotropic_consistency"].get<bool>(), "suite isotropic_consistency");
  });

  criterion(4, "sl2-triples", 0, [](Outcome& o) {
    for (std::size_t d : {3u, 4u, 5u})
      for (unsigned n : {1u, 2u}) {
        auto m = build_model(QuadraticSpace(identity_gram(d)), n);
        auto theta = grading_operator(m);
        for (const auto& t : sl2_triples(m, lefschetz_generators(m))) {
          o.require(bracket(theta, t.l) == Rational(2) * t.l, "[theta,L]");
          o.require(bracket(theta, t.lambda) == Rational(-2) * t.lambda, "[theta,Lambda]");
          o.require(bracket(t.l, t.lambda) == theta, "[L,Lambda]");
          auto k = sl2_uniqueness_kernel_dim(t.l);
          o.require(k.has_value() && *k == 0, "Lambda not unique");
        }
      }
    auto m = build_model(QuadraticSpace(identity_gram(3)), 1);
    auto lam = dual_lefschetz(m, {1, 0, 0});
    o.require(lam.apply(1, {1, 0, 0}) == Vector{2}, "Lambda(e1) = 2");
    o.require(lam.apply(2, m.qbar_class().parts[2]) == Vector{6, 0, 0}, "Lambda(qbar) = 6 e1");
  });

  criterion(5, "gtot-structure", kGtotLimitS, [](Outcome& o) {
    for (std::size_t d : {3u, 4u, 5u})
      for (unsigned n : {1u, 2u}) {
        Json r = run(make("gtot", identity_gram(d), n));
        const std::string tag = "d=" + std::to_string(d) + " n=" + std::to_string(n);
        o.require(r["dim"] == (d + 2) * (d + 1) / 2, tag + " dim");
        o.require(r["grading_dims"] == Json::array({d, d * (d - 1) / 2 + 1, d}), tag + " grading");
        for (const char* a : {"abelian_parts", "commuting_duals", "derivation_check", "lambda_unique"})
          o.require(r["assertions"][a].get<bool>(), tag + " " + a);
      }
  });

  criterion(6, "derivation-leibniz", 0, [](Outcome& o) {
    for (std::size_t d : {3u, 4u, 5u})
      for (unsigned n : {1u, 2u}) {
        auto m = build_model(QuadraticSpace(identity_gram(d)), n);
        for (const auto& x : so_basis(m.space())) {
          auto dx = so_derivation(m, x);
          for (unsigned j = 0; j <= m.top_degree(); ++j)
            for (unsigned k = 0; j + k <= m.top_degree(); ++k)
              for (std::size_t a = 0; a < m.dim(j); ++a)
                for (std::size_t b = 0; b < m.dim(k); ++b) {
                  Vector ea(m.dim(j)), eb(m.dim(k));
                  ea[a] = 1;
                  eb[b] = 1;
                  Vector lhs = dx.apply(j + k, m.multiply_basis(j, a, k, b));
                  Vector rhs = axpy(Rational(1), m.multiply(j, dx.apply(j, ea), k, eb),
                                    m.multiply(j, ea, k, dx.apply(k, eb)));
                  if (lhs != rhs) o.require(false, "Leibniz d=" + std::to_string(d) + " n=" + std::to_string(n));
                }
        }
      }
  });

  criterion(7, "so41", kSo41LimitS, [](Outcome& o) {
    SuiteConfig c;
    c.suite = "so41";
    c.n = 1;
    Json r = run(c);
    for (const auto& [name, ok] : r["identities"].items()) o.require(ok.get<bool>(), name);
    o.require(r["closure_dim"] == 10, "closure_dim");
    o.require(r["killing"] == Json::array({4, 6}), "killing");
  });

  criterion(8, "spinor-norm", 0, [](Outcome& o) {
    for (const char* preset : {"diag4", "split4", "diag5-31"}) {
      SuiteConfig c = make_preset("spinor", preset, 1, 2024);
      c.cases = 100;
      Json r = run(c);
      o.require(r["pass"].get<bool>(), std::string(preset) + " spinor suite");
    }
    Json r = run(make("spinor", identity_gram(2), 1, 1));
    o.require(r["minus_identity"]["verdict"] == "J_certified", "-Id verdict");
    o.require(r["minus_identity"]["spinor_norm"] == "1", "-Id spinor norm");
  });

  criterion(9, "transport", 0, [](Outcome& o) {
    for (auto [preset, n] : {std::pair{"diag4", 1u}, {"diag5", 2u}}) {
      SuiteConfig c = make_preset("transport", preset, n, 17);
      c.cases = 25;
      Json r = run(c);
      const std::string tag = std::string(preset) + " n=" + std::to_string(n);
      o.require(r["assertions"]["identity_transport"].get<bool>(), tag + " identity transport");
      o.require(r["cases"] == 25, tag + " case count");
      o.require(r["transport"] == "pass", tag + " transport");
      o.require(r["assertions"]["orientation_swap_rejected"].get<bool>(), tag + " orientation swap");
    }
  });

  criterion(10, "stretch-rank23", kStretchLimitS, [](Outcome& o) {
    SuiteConfig c = make_preset("gtot", "hyperbolic-u3e8", 2);
    c.allow_large = true;
    Json r = run(c);
    o.require(r["dims"] == Json::array({1, 23, 276, 23, 1}), "dims");
    o.require(r["dim"] == 300, "closure dim");
    o.require(r["pass"].get<bool>(), "gtot assertions");
  });

  criterion(11, "determinism", 0, [](Outcome& o) {
    const auto first = g_reports;
    for (const auto& [c, text] : first) {
      SuiteResult again = run_suite(c);
      o.require(again.report.dump(2) == text, "report differs: " + c.suite);
    }
  });

  return g_failed == 0 ? 0 : 1;
}
