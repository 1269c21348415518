#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace addcomb {

/// Every tunable constant of the pipeline. Defaults follow the "ledger-C" preset.
struct LedgerConfig {
  std::string preset = "ledger-C";
  double c0 = 1.0 / 16;    // tau = K^-c0
  double c = 1.0 / 32;     // regime thresholds 1 - K^-c, 1 - 2K^-c
  double C = 0.25;         // decrement floor K^-C, size floor K^-C |A|, coset budgets K^C
  double eps = 0.05;       // near-coset slack
  double gamma = 9.0;      // potential exponent, 4C + 8
  double C_RC = 8.0;       // Chang constant
  double packet_eps = 0.2;
  std::optional<double> packet_eta;  // unset: K^-10
  double C_pkt = 2.0;
  int packet_retries = 16;
  double regularity_c = 0.01;
  int rho_grid = 64;
  std::uint64_t seed = 42;

  /// Throws std::invalid_argument on a non-positive exponent or gamma < 2C + 4.
  void validate() const;

  /// "ledger-C" (c0 = 1/16, c = 1/32) or "ledger-S2" (c0 = 1/4 + 0.01, c = 0.01).
  static LedgerConfig from_preset(std::string_view name);
  static std::vector<std::string> preset_names();

  double packet_eta_for(double k) const;
};

}  // namespace addcomb
