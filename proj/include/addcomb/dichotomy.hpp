#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "addcomb/config.hpp"
#include "addcomb/fourier.hpp"
#include "addcomb/spectrum.hpp"
#include "addcomb/structure.hpp"

namespace addcomb {

enum class Regime { Concentrated, Gray, Dispersed };
const char* to_string(Regime r);

struct RegimeClass {
  Regime kind = Regime::Concentrated;
  double beta = 0;
  double upper = 0;  // 1 - K^-c
  double lower = 0;  // 1 - 2K^-c
  double k = 1;
  bool small_k = false;  // K < 2 routes to Concentrated
};

inline constexpr double kBetaSlack = 1e-8;

RegimeClass classify_beta(double beta, double k, double c);
RegimeClass classify_regime(const GroupSet& a, const DualSubgroup& v, const LedgerConfig& cfg);
RegimeClass classify_regime(const FourierTable& t, double k, const DualSubgroup& v, const LedgerConfig& cfg);

/// {xi not in V : |f^(xi)| >= lambda}.
std::vector<DualElement> tail_level_set(const FourierTable& t, const DualSubgroup& v, double lambda);

struct E2DReport {
  DualElement xi = 0;
  double eta = 0;           // |f^(xi)| / alpha
  double lhs = 0;           // sum |f^|^4
  double rhs = 0;           // alpha^4 (1 + eta^4)
  double energy_boost = 0;  // lhs / alpha^4 - 1
  bool holds = false;
};

E2DReport energy_to_doubling_check(const GroupSet& a, DualElement xi);
E2DReport energy_to_doubling_check(const FourierTable& t, double alpha, DualElement xi);

struct DecrementReport {
  double eta = 0;           // coefficient ratio at the witness in the quotient
  double eta_lift = 0;      // |f^(xi)| / alpha on G
  double energy_boost = 0;  // E(A') / (alpha'^4 |G'|^3) - 1
  Rational delta{0};
  bool floor_ok = false;    // delta >= K^-C
  bool e2d_ok = false;      // energy_boost >= eta^4
};

struct Improvement {
  DualSubgroup v_prime;
  Subgroup h_prime;
  QuotientMap map;
  GroupSet a_prime;
  Rational k_prime{1};
  Rational delta{0};
  DualElement witness = 0;
  DualElement witness_image = 0;
  DecrementReport decrement;
  bool v_prime_meets_v_trivially = true;
  bool size_floor_ok = false;
};

struct Undetermined {
  std::string reason;
  std::optional<NearCoset> best_coset;
  std::optional<Improvement> attempted;  // quotient data when an improvement was measured but rejected
};

struct ImprovementInput {
  const GroupSet* a = nullptr;
  const FourierTable* table = nullptr;
  const DualSubgroup* v = nullptr;
  Regime regime = Regime::Dispersed;
  Rational k{1};
  double tau = 1;
};

/// Tail extraction at lambda = tau alpha / 2 (Dispersed) or tau alpha / 4 (Gray), quotient, and measured decrement.
std::variant<Improvement, Undetermined> improvement_step(const ImprovementInput& in, const LedgerConfig& cfg);
std::variant<Improvement, Undetermined> improvement_step(const GroupSet& a, const DualSubgroup& v, Regime regime,
                                                         const LedgerConfig& cfg);

struct L4CompressionReport {
  double k = 1;
  double tau = 1;
  std::size_t spectrum_size = 0;
  double mass_in_s = 0;
  double mass_total = 0;
  double compress_rhs = 0;  // (1 - K^-c) mass_total
  bool compress_pass = false;
  double tight_c_compress = 0;  // largest c for which the compression inequality holds
  double tail_lhs = 0;          // sum_{xi not in S} |g^|^2, g^ = |f^|^2
  double tail_rhs = 0;          // K^-c alpha^2
  bool tail_pass = false;
  double tight_c_tail = 0;
};

L4CompressionReport l4_compression_audit(const GroupSet& a, const LedgerConfig& cfg);
L4CompressionReport l4_compression_audit(const FourierTable& t, double alpha, double k, const LedgerConfig& cfg);

struct BsgReport {
  GroupSet a0;
  double energy_boost = 0;       // E(A) |G| / |A|^4 - 1
  double popularity_threshold = 0;
  std::size_t popular_sums = 0;
  double median_participation = 0;
  Rational density_in_a{1};      // |A0| / |A|
  Rational doubling_a0{1};
  std::optional<GroupSet> oracle_best;  // least doubling among subsets with at least |A0| elements (|A| <= 10)
  std::optional<Rational> oracle_doubling;
  std::optional<bool> within_factor_two;
};

/// Popular-sums extraction; throws std::invalid_argument when E(A) < (1 + beta_boost) alpha^4 |G|^3.
BsgReport bsg_extract(const GroupSet& a, double beta_boost);

/// Least doubling over subsets of A with at least min_size elements (|A| <= 16).
std::pair<GroupSet, Rational> exhaustive_best_subset(const GroupSet& a, std::size_t min_size);

struct CosetCoverReport {
  std::size_t cosets = 0;
  std::vector<Element> representatives;  // least element of each coset meeting A
  double budget = 0;                      // K^C
  bool count_ok = false;                  // cosets <= K^C
  bool size_ok = false;                   // |H| <= K^C |A|
};

CosetCoverReport coset_cover(const GroupSet& a, const Subgroup& h, double exponent_c);

struct CoveringUpgradeReport {
  Rational theta{1};
  Rational k0{1};
  Rational k{1};
  double rhs = 0;  // C K0^C theta^-C
  bool pass = false;
  double tight_c = 0;  // least C with K <= C K0^C theta^-C
};

CoveringUpgradeReport covering_upgrade_audit(const GroupSet& a, const GroupSet& a0, double exponent_c);

struct PSLArtifacts {
  Rational k{1};
  double alpha = 0;
  double tau = 1;
  SpectrumSet spectrum;
  std::vector<DualElement> dissociated;
  DualSubgroup v;
  Subgroup h;
  std::optional<ChangReport> chang;
  RegimeClass regime;
  std::optional<PaleyZygmundReport> pz;
  double s3_eps_limit = 0;  // (1/2) sqrt(beta c1)
};

struct PSLOutcome {
  std::variant<NearCoset, Improvement, Undetermined> result;
  PSLArtifacts artifacts;

  const char* kind() const;
  bool is_improvement() const { return std::holds_alternative<Improvement>(result); }
};

PSLOutcome psl_step(const GroupSet& a, const LedgerConfig& cfg);

}  // namespace addcomb
