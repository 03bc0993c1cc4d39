// hkverify: build model manifests and run verification suites.
//
//   hkverify build  (--gram FILE | --preset NAME) --n N [--out FILE]
//   hkverify verify SUITE [--gram FILE | --preset NAME] [--n N] [--seed S] [--out FILE]
//
// Exit codes: 0 all assertions pass, 1 an assertion failed, 2 invalid input.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hkcoh/suite.hpp"

namespace {

struct Flags {
  std::string config;
  std::string gram;
  std::string preset;
  std::optional<long long> n;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool allow_large = false;
  std::optional<std::size_t> cases;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file; other flags override it");
  auto* gram = cmd->add_option("--gram", f.gram, "Gram matrix JSON file");
  cmd->add_option("--preset", f.preset, "bundled Gram preset (diag3, diag5, hyperbolic-u3e8, ...)")->excludes(gram);
  cmd->add_option("--n", f.n, "half the complex dimension (model of H^0..H^{4n})");
  cmd->add_option("--seed", f.seed, "seed for randomized cross-checks");
  cmd->add_option("--out", f.out, "write JSON here instead of stdout");
  cmd->add_flag("--allow-large", f.allow_large, "permit dim V > 12 (d = 23, n = 2 takes minutes)");
  cmd->add_option("--cases", f.cases, "number of seeded cases (transport, spinor)");
}

hkcoh::SuiteConfig make_config(const std::string& suite, const Flags& f) {
  hkcoh::SuiteConfig c;
  if (!f.config.empty()) c = hkcoh::load_config(f.config);
  c.suite = suite;
  if (!f.gram.empty() || !f.preset.empty()) {
    c.gram_file.clear();
    c.preset.clear();
    c.gram.reset();
  }
  if (!f.gram.empty()) c.gram_file = f.gram;
  if (!f.preset.empty()) c.preset = f.preset;
  if (f.n) {
    if (*f.n < 1) throw hkcoh::ConfigError("n must be at least 1");
    c.n = static_cast<unsigned>(*f.n);
  }
  if (f.seed) c.seed = *f.seed;
  if (!f.out.empty()) c.out = f.out;
  if (f.allow_large) c.allow_large = true;
  if (f.cases) c.cases = f.cases;
  hkcoh::validate(c);
  return c;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hkcoh::ConfigError("cannot write " + path);
  out << text << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of hyperkaehler cohomology model identities"};
  app.require_subcommand(1);
  Flags build_flags, verify_flags;
  std::string suite;

  auto* build = app.add_subcommand("build", "build the model algebra and write its manifest");
  add_common(build, build_flags);
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "fujiki | gtot | so41 | transport | spinor")
      ->required()
      ->check(CLI::IsMember({"fujiki", "gtot", "so41", "transport", "spinor"}));
  add_common(verify, verify_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (build->parsed()) {
      hkcoh::SuiteConfig c = make_config("build", build_flags);
      write_output(c.out, hkcoh::emit_model(c).dump(2));
      return 0;
    }
    hkcoh::SuiteConfig c = make_config(suite, verify_flags);
    hkcoh::SuiteResult r = hkcoh::run_suite(c);
    write_output(c.out, r.report.dump(2));
    std::cerr << "wall time: " << r.wall_time_s << " s\n";
    if (r.exit_code != 0) {
      for (const auto& f : r.report["failures"]) std::cerr << "assertion failed: " << f.get<std::string>() << "\n";
    }
    return r.exit_code;
  } catch (const hkcoh::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
