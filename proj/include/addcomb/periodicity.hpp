#pragma once

// Almost-periodicity on G: balanced autocorrelation, random packets with small
// bias on a set of characters, packet-averaged L2 errors, good shifts, and Bohr
// sets with a decidable regularity predicate.
//
// Throughout g = (1_A * 1_{-A}) / |G|, so that g^(xi) = |1_A^(xi)|^2 exactly, and
// ||u||_2^2 = sum_x |u(x)|^2 (counting measure on G).

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "addcomb/config.hpp"
#include "addcomb/fourier.hpp"
#include "addcomb/groups.hpp"

namespace addcomb {

struct BalancedAutocorrelation {
  GroupSpec group;
  std::vector<double> values;  // h = g / alpha - alpha
  double alpha = 0;
  double mean = 0;               // audited to vanish
  double spectral_residual = 0;  // max |h(x) - idft(|f^|^2 / alpha - alpha 1_0)(x)|
};

/// Computes h both combinatorially and through the transform.
BalancedAutocorrelation balanced_autocorrelation(const GroupSet& a);

/// g = (1_A * 1_{-A}) / |G|, i.e. g(x) = |A cap (A + x)| / |G|.
std::vector<double> autocorrelation(const GroupSet& a);

struct Packet {
  GroupSpec group;
  std::vector<Element> members;      // multiset, in draw order
  std::vector<DualElement> spectrum; // S
  double eps = 0;
  double eta = 0;
  std::uint64_t seed = 0;          // base seed
  std::uint64_t attempt_seed = 0;  // derived seed of the returned draw
  int attempts = 0;
  double achieved_bias = 0;
  bool success = false;
};

/// M = ceil(C_pkt eps^-2 log(2 max(1,|S|) / eta)).
std::size_t packet_size(std::size_t spectrum_size, double eps, double eta, double c_pkt);

/// max over S of |mean_j e(<xi, x_j>)|; 0 for empty S.
double packet_bias(const GroupSpec& g, std::span<const DualElement> s, std::span<const Element> members);

/// Seeded uniform draws with up to `retries` derived reseeds; the least-bias attempt is returned.
/// Throws std::invalid_argument when S contains the trivial character, eps <= 0 or eta outside (0,1).
Packet sample_packet(const GroupSpec& g, std::span<const DualElement> s, double eps, double eta, std::uint64_t seed,
                     double c_pkt = 2.0, int retries = 16);

/// A packet made of fixed translates (no sampling), for deterministic probes.
Packet fixed_packet(const GroupSpec& g, std::vector<Element> members, std::vector<DualElement> s, double eps);

struct PacketL2Report {
  double error = 0;            // E = ||g - mean_T tau_x g||_2^2, evaluated on G
  double spectral_error = 0;   // |G| sum |g^|^2 |1 - b|^2
  double mass_in_s = 0;        // sum_{S} |g^|^2
  double mass_off_s = 0;       // sum_{not S} |g^|^2
  double printed_bound = 0;    // 2 eps^2 mass_in_s + 4 mass_off_s, as written
  double scaled_bound = 0;     // |G| * printed_bound
  double sound_bound = 0;      // |G| ((1 + eps)^2 mass_in_s + 4 mass_off_s)
  double bias = 0;             // max over S of |b|
  bool printed_holds = false;
  bool scaled_holds = false;
  bool sound_holds = false;
};

PacketL2Report packet_l2_error(const GroupSet& a, const Packet& t);

struct GoodShiftsReport {
  std::vector<double> shift_errors;  // d_x = ||g - tau_x g||_2^2 per packet entry
  double mean_shift_error = 0;
  double error = 0;                  // E
  double printed_identity_residual = 0;    // |mean d - E| / max(mean d, E, kZeroShiftScale ||g||_2^2)
  double corrected_identity_residual = 0;  // against E + |G| sum |g^|^2 (1 - |b|^2)
  bool printed_identity_holds = false;     // residual <= 1e-8
  std::vector<std::size_t> good;           // packet positions with d_x <= 2E
  std::vector<std::size_t> good_markov;    // packet positions with d_x <= 2 mean d
  bool contract_holds = false;             // |good| >= |T| / 2
  bool markov_holds = false;
};

inline constexpr double kIdentityTolerance = 1e-8;
/// Shift errors below this multiple of ||g||_2^2 count as zero when residuals are formed.
inline constexpr double kZeroShiftScale = 1e-6;

/// Throws std::logic_error when the corrected average identity fails (a normalisation bug).
GoodShiftsReport good_shifts(const GroupSet& a, const Packet& t);

/// Fraction of packet entries lying in A - A.
double packet_in_difference_fraction(const GroupSet& a, const Packet& t);

struct BohrSet {
  GroupSpec group;
  std::vector<DualElement> frequencies;
  double rho = 0;
  GroupSet elements;
  std::size_t rank = 0;
  bool regular = false;           // set by regularize / polybog_search
  double regularity_constant = 0;
};

/// |1 - chi_xi(x)| = 2 |sin(pi <xi, x>)|.
double character_distance(const GroupSpec& g, DualElement xi, Element x);

/// {x : |1 - chi_gamma(x)| <= rho for all gamma}; throws std::invalid_argument for rho < 0.
BohrSet bohr_set(const GroupSpec& g, std::span<const DualElement> gamma, double rho);

/// Per-element radius r(x) = max_gamma |1 - chi_gamma(x)|, so that x in B(Gamma, rho) iff r(x) <= rho.
class BohrProfile {
 public:
  BohrProfile(const GroupSpec& g, std::span<const DualElement> gamma);
  std::size_t count(double rho) const;
  const std::vector<double>& radii() const { return radii_; }
  std::size_t rank() const { return rank_; }
  /// sup over 0 < |theta| <= c/d of ||B((1+theta) rho)| / |B(rho)| - 1| / (d |theta|), d = max(1, rank).
  double regularity_constant(double rho, double c) const;

 private:
  std::vector<double> radii_;
  std::vector<double> sorted_;
  std::size_t rank_ = 0;
};

inline constexpr double kRegularityThreshold = 100.0;

struct RegularityReport {
  double rho = 0;        // requested radius
  double rho_prime = 0;  // chosen radius in [rho / 2, rho]
  double constant = 0;
  bool regular = false;  // constant <= kRegularityThreshold
  std::size_t rank = 0;
  int grid = 0;
};

/// Geometric grid of `grid` radii from rho down to rho / 2; least constant wins, ties to the largest radius.
RegularityReport regularize(const GroupSpec& g, std::span<const DualElement> gamma, double rho, double c = 0.01,
                            int grid = 64);
RegularityReport regularize(const BohrProfile& profile, double rho, double c, int grid);

struct PolyBogReport {
  Rational k{1};
  double tau = 1;
  GroupSet four_a_minus_four_a;
  std::vector<DualElement> gamma;
  double containment_rho = 0;  // first grid radius with B contained in 4A - 4A
  int grid_steps = 0;
  std::optional<RegularityReport> regularity;
  double rho_prime = 0;        // 0 when no containment was found
  BohrSet bohr;
  bool trivial_bohr = false;   // B = {0}
  bool rank_ok = false;        // |Gamma| <= K^C
  bool radius_ok = false;      // rho' >= K^-C
};

/// Requires a cyclic group; throws std::invalid_argument otherwise or for empty A.
PolyBogReport polybog_search(const GroupSet& a, const LedgerConfig& cfg);

}  // namespace addcomb
