#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "addcomb/config.hpp"
#include "addcomb/dichotomy.hpp"
#include "addcomb/harness.hpp"
#include "addcomb/periodicity.hpp"

namespace addcomb {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Non-finite reals become the strings "inf", "-inf", "nan" so documents round-trip.
Json real(double v);
double real_from(const Json& j);

Json to_json(const LedgerConfig& cfg);
/// Missing fields keep the values of `base` (the preset named in the document when present).
LedgerConfig config_from_json(const Json& j);
LedgerConfig load_config(const std::string& path);

Json to_json(const GroupSet& a);
Json to_json(const ViolationRecord& r);
ViolationRecord record_from_json(const Json& j);
Json to_json(const IterationTrace& t);
Json to_json(const PSLOutcome& o);
Json to_json(const ChangReport& c);
Json to_json(const L4CompressionReport& r);
Json to_json(const PolyBogReport& r);
Json to_json(const ToyReport& r);
Json to_json(const ScanResult& r);

/// Every per-set artifact: energy, spectrum, Chang audit, L4 compression, PSL step, lift checks, packet.
/// tau overrides K^-c0 for the spectrum and Chang audit when positive.
Json analyze(const GroupSet& a, const LedgerConfig& cfg, double tau = 0);

struct Report {
  int schema_version = kSchemaVersion;
  std::string command;
  LedgerConfig config;
  Json artifacts = Json::object();
  std::vector<ViolationRecord> findings;
  Json timing = Json::object();
};

Json to_json(const Report& r);
Report report_from_json(const Json& j);

/// The (j, |G_j|, K_j, alpha_j, I_j, codim_j, outcome, delta_j) ledger of every trace in a report.
std::string ledger_csv(const Report& r);

/// "0,1,2", "0..23", "(1,2),(0,1)" or a JSON list such as [0,1] / [[1,2],[0,1]]. Coordinates reduce modulo
/// the factors, so -1 names n - 1.
GroupSet parse_set(const GroupSpec& g, std::string_view literal);

}  // namespace addcomb
