#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "addcomb/fourier.hpp"
#include "addcomb/groups.hpp"

namespace addcomb {

/// Raised when an exhaustive enumeration would exceed its budget.
class BudgetError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kDissociationBudget = 20;

/// Absolute slack used when a Fourier magnitude is compared with a threshold.
double threshold_slack(double level);

struct SpectrumSet {
  double tau = 0;
  double alpha = 0;
  std::vector<DualElement> members;  // ascending
  std::vector<double> magnitudes;    // |f^| per member
};

/// {xi : |f^(xi)| >= tau * alpha}, ties included.
SpectrumSet large_spectrum(const GroupSet& a, double tau);
SpectrumSet large_spectrum(const FourierTable& t, double alpha, double tau);

/// True iff all 2^d subset sums are distinct (equivalently no vanishing {-1,0,1}-combination).
bool is_dissociated(const GroupSpec& g, std::span<const DualElement> set);

/// Greedy pass by |f^| descending (ties by label); 0 is skipped. The result is maximal among the candidates.
std::vector<DualElement> extract_maximal_dissociated(const GroupSpec& g, std::span<const DualElement> candidates,
                                                     std::span<const double> magnitudes);
std::vector<DualElement> extract_maximal_dissociated(const GroupSpec& g, const SpectrumSet& s);

/// Largest dissociated subset of the nonzero candidates, by exhaustive search (at most 16 candidates).
std::size_t max_dissociated_exhaustive(const GroupSpec& g, std::span<const DualElement> candidates);

DualSubgroup span(const GroupSpec& g, std::span<const DualElement> dissociated);

struct ChangReport {
  double tau = 0;
  double alpha = 0;
  std::size_t spectrum_size = 0;
  std::vector<DualElement> dissociated;
  std::size_t dissociated_size = 0;
  double bound_rhs = 0;          // C_RC tau^-2 log(1/alpha)
  double energy_lhs = 0;         // sum over D of |f^|^2
  double energy_rhs = 0;         // C_RC alpha^2 log(1/alpha)
  double measured_constant = 0;  // energy_lhs / (alpha^2 log(1/alpha))
  double size_constant = 0;      // |D| tau^2 / log(1/alpha)
  bool pass = false;             // |D| <= bound_rhs
  bool rc_pass = false;          // energy_lhs <= energy_rhs
  bool chain_ok = false;         // |D| tau^2 alpha^2 <= energy_lhs
  bool window_warning = false;   // alpha > 1/2
  std::optional<std::size_t> exhaustive_max;  // reported when |Spec \ {0}| <= 12
};

/// tau in (0,1]; alpha must lie in (0,1).
ChangReport chang_audit(const GroupSet& a, double tau, double c_rc);
ChangReport chang_audit(const FourierTable& t, double alpha, double tau, double c_rc);

struct ModVExtraction {
  DualSubgroup v_prime;               // span of the lifted representatives
  std::vector<DualElement> classes;   // class labels (least element of xi + V) of the chosen classes
  std::vector<DualElement> intersection;  // V' cap V
  bool meets_v_trivially = true;
};

/// Greedy dissociated extraction of the classes of `tail` in dual(G)/V, lifted by the largest |f^| per class.
ModVExtraction dissociated_extraction_mod_V(const FourierTable& t, std::span<const DualElement> tail,
                                            const DualSubgroup& v);

}  // namespace addcomb
