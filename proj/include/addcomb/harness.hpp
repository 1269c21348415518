#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "addcomb/config.hpp"
#include "addcomb/dichotomy.hpp"
#include "addcomb/groups.hpp"
#include "addcomb/periodicity.hpp"

namespace addcomb {

/// I = K alpha^-gamma; throws std::invalid_argument when alpha <= 0.
double potential(const Rational& k, const Rational& alpha, double gamma);

enum class Severity { ErratumClass, DecrementMiss, BoundMiss };
const char* to_string(Severity s);
Severity parse_severity(std::string_view text);

struct Measurement {
  std::string name;
  std::string value;  // rationals as "p/q", reals with 17 significant digits
};

std::string format_real(double v);

/// Everything needed to replay one finding.
struct ViolationRecord {
  std::string lemma;
  Severity severity = Severity::BoundMiss;
  GroupSpec group;
  std::vector<Element> set;
  std::string preset;
  std::uint64_t seed = 0;
  std::vector<Measurement> measured;
  std::string note;

  /// Ordering used before serialisation: lemma, severity, group, set, then the measured values.
  friend bool operator<(const ViolationRecord& a, const ViolationRecord& b);
  friend bool operator==(const ViolationRecord& a, const ViolationRecord& b);
};

struct IterationStep {
  int j = 0;
  GroupSpec group;
  std::size_t set_size = 0;
  Rational k{1};
  Rational alpha{1};
  double potential = 0;
  double codim = 0;  // log |G_j / H'_j| of the quotient taken at this step, 0 otherwise
  std::string outcome;  // near-coset, improvement, undetermined
  std::string regime;
  double beta = 0;
  std::size_t spectrum_size = 0;
  std::size_t span_dim = 0;
  std::optional<Rational> delta;
  std::string note;
};

struct IterationTrace {
  GroupSet initial;
  std::vector<IterationStep> steps;
  double total_codim = 0;
  double codim_budget = 0;  // K0^(2(C + 1))
  std::string terminal;     // near-coset, undetermined, budget-exhausted
  std::size_t budget = 0;
  GroupSet final_set;
  std::optional<NearCoset> near_coset;
  std::vector<ViolationRecord> findings;
};

/// min(10^4, ceil(K0^(C+1))).
std::size_t default_budget(const Rational& k0, const LedgerConfig& cfg);

IterationTrace iterate_psl(const GroupSet& a, const LedgerConfig& cfg, std::optional<std::size_t> budget = {});

struct GrayZoneReport {
  bool applicable = false;  // beta in the gray zone with K >= 2
  double beta = 0;
  double refined_tau = 0;
  double upgrade_ratio = 0;  // L4 mass on Span(Spec_{tau/2}) over the total
  bool upgrade_holds = false;
  std::optional<Rational> delta;
  bool improvement_holds = false;  // delta >= K^-C and |A'| >= K^-C |A|
  bool holds = false;
};

GrayZoneReport gray_zone_check(const GroupSet& a, const LedgerConfig& cfg);

struct AlmostPeriodReport {
  Packet packet;
  PacketL2Report l2;
  GoodShiftsReport shifts;
  double in_difference_fraction = 0;
  Rational packet_doubling{1};  // doubling of the support of T
  bool shift_count_ok = false;  // |X| <= K^C
  bool packet_size_ok = false;  // |T| >= K^-C |A|
};

/// Packet on Spec_tau \ {0} with eps = packet_eps and eta = packet_eta_for(K), then the derived measurements.
AlmostPeriodReport almost_periods(const GroupSet& a, const LedgerConfig& cfg, std::uint64_t seed);

struct ToyReport {
  double alpha_requested = 0;
  int nominal_k = 3;
  GroupSet a;
  Rational k{1};
  std::size_t sumset_size = 0;
  bool doubling_ok = false;  // |A + A| <= nominal K |A|
  double tau = 1;
  double sinc_max_relative_error = 0;
  double sinc_window = 0.1;  // compared where |sinc| >= this value
  std::size_t sinc_points = 0;
  bool sinc_ok = false;
  std::vector<std::int64_t> spectrum;  // signed frequencies, ascending
  bool spectrum_symmetric_interval = false;
  std::optional<ChangReport> chang;
  PSLOutcome psl;
  IterationTrace trace;
  PolyBogReport polybog;
};

/// A = {0, ..., floor(alpha 97) - 1} in Z/97 with alpha in (0, 1/4]; tau = nominal_k^-c0.
ToyReport toy_example(const LedgerConfig& cfg, double alpha = 24.0 / 97.0, int nominal_k = 3);

struct ScanSpace {
  std::vector<GroupSpec> groups;
  std::size_t min_size = 1;
  std::size_t max_size = 10;
  bool exhaustive = false;
  std::size_t samples = 500;  // per group, sampled mode
  std::size_t max_examples = 8;  // kept per (lemma, group)
  bool packets = true;
  bool iteration = true;
  bool lift = true;
};

struct LemmaTally {
  std::string lemma;
  std::string group;
  std::size_t evaluated = 0;
  std::size_t violations = 0;
};

struct ScanResult {
  std::vector<ViolationRecord> findings;  // canonical order
  std::vector<LemmaTally> tallies;        // sorted by (lemma, group)
  std::size_t instances = 0;
  std::optional<std::uint64_t> expected_instances;  // exhaustive mode
  bool count_audit_ok = true;
};

/// Number of workers: ADDCOMB_WORKERS when set, otherwise the hardware concurrency.
unsigned worker_count();

/// Deterministic for a given seed: instances, per-instance seeds and the merged output do not depend on scheduling.
ScanResult scan_for_violations(const ScanSpace& space, const LedgerConfig& cfg, std::uint64_t seed,
                               unsigned workers = 0);

/// Lexicographically least translate of the set (the canonical instance form).
std::vector<Element> canonical_translate(const GroupSet& a);

/// splitmix64 finaliser, used for every derived seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace addcomb
