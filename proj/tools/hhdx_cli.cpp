#include <cstdlib>
#include <iostream>

#include <omp.h>

#include "CLI11.hpp"
#include "hhdx/cli.hpp"

namespace {

constexpr int kExitUnknownScenario = 2;
constexpr int kExitInvalidPrime = 3;
constexpr int kExitCapacity = 4;
constexpr int kExitTruncation = 5;

void apply_thread_cap() {
  const char* env = std::getenv("HHDX_THREADS");
  if (!env) return;
  const int n = std::atoi(env);
  if (n > 0) omp_set_num_threads(n);
}

std::vector<std::int64_t> parse_curve(const std::string& s) {
  std::vector<std::int64_t> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    out.push_back(std::stoll(s.substr(pos, comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.size() != 3) throw std::invalid_argument("--curve expects a2,a4,a6");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch runner for the divided-power Hochschild scenarios"};
  hhdx::ScenarioConfig cfg;
  bool json = false;
  bool list = false;
  std::string curve = "0,-1,0";
  app.add_option("--scenario", cfg.scenario, "scenario name");
  app.add_option("--prime", cfg.prime, "characteristic p")->capture_default_str();
  app.add_option("--depth", cfg.depth, "tower depth R")->capture_default_str();
  app.add_option("--degree-bound", cfg.degree_bound, "polynomial degree bound D")->capture_default_str();
  app.add_option("--dp-cap", cfg.dp_cap, "divided-power cap Q")->capture_default_str();
  app.add_option("--curve", curve, "Weierstrass coefficients a2,a4,a6 for the elliptic scenario")
      ->capture_default_str();
  app.add_flag("--json", json, "emit the JSON report");
  app.add_flag("--list", list, "list scenarios and exit");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (auto& n : hhdx::scenario_names()) std::cout << n << "\n";
    return 0;
  }
  apply_thread_cap();
  try {
    auto c = parse_curve(curve);
    cfg.curve = {c[0], c[1], c[2]};
    auto report = hhdx::run(cfg);
    if (json)
      std::cout << report.json.dump(2) << "\n";
    else
      std::cout << hhdx::render_text(report);
    return report.passed ? 0 : 1;
  } catch (const hhdx::UnknownScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnknownScenario;
  } catch (const hhdx::InvalidPrimeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidPrime;
  } catch (const hhdx::CapacityError& e) {
    std::cerr << "error: capacity exceeded: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const hhdx::TruncationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTruncation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
