#include "symflag/commands.hpp"
#include "symflag/matrix_io.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Flags {
  int n = 2;
  std::string theta;
  std::size_t samples = 10;
  std::uint64_t seed = 1;
  std::string backend;
  double tol = 1e-10;
  double epsilon = 1e-6;
  std::string g;
  std::string out;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--n", f.n, "Rank: the group is Sp(2n,R)");
  sub->add_option("--theta", f.theta, "Comma list of flag indices");
  sub->add_option("--samples", f.samples, "Number of random trials");
  sub->add_option("--seed", f.seed, "Seed for all randomness");
  sub->add_option("--backend", f.backend, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  sub->add_option("--tol", f.tol, "Residual tolerance");
  sub->add_option("--epsilon", f.epsilon, "Perturbation budget");
  sub->add_option("--g", f.g, "Matrix file, or 'identity'");
  sub->add_option("--out", f.out, "Write the report here instead of stdout");
}

symflag::RunConfig to_config(const std::string& command, const Flags& f) {
  symflag::RunConfig cfg;
  cfg.command = command;
  cfg.n = f.n;
  if (!f.theta.empty()) cfg.theta = f.theta;
  if (!f.backend.empty()) cfg.backend = symflag::parse_backend(f.backend);
  cfg.samples = f.samples;
  cfg.seed = f.seed;
  cfg.tol = f.tol;
  cfg.epsilon = f.epsilon;
  if (!f.g.empty()) cfg.g = f.g;
  return cfg;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flag-manifold and Anosov-representation verification tool"};
  app.require_subcommand(1);
  Flags flags;
  std::string chosen;

  const std::vector<std::pair<std::string, std::vector<std::string>>> groups{
      {"verify", {"key-lemma", "transversality", "inversion", "property-i", "rep"}},
      {"witness", {"sl2c", "su"}},
      {"check", {"non-maximal"}}};
  for (const auto& [group, leaves] : groups) {
    auto* g = app.add_subcommand(group);
    g->require_subcommand(1);
    for (const auto& leaf : leaves) {
      auto* sub = g->add_subcommand(leaf);
      add_flags(sub, flags);
      sub->callback([&chosen, name = group + " " + leaf] { chosen = name; });
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "symflag: " << e.what() << "\n";
    return 2;
  }

  try {
    const auto report = symflag::run_command(to_config(chosen, flags));
    const std::string text = report.to_json().dump(2) + "\n";
    if (flags.out.empty())
      std::cout << text;
    else
      symflag::write_text_file(flags.out, text);
    return report.pass() ? 0 : 1;
  } catch (const symflag::config_error& e) {
    std::cerr << "symflag: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "symflag: " << e.what() << "\n";
    return 2;
  }
}
