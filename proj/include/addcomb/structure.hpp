#pragma once

#include <optional>
#include <string>
#include <vector>

#include "addcomb/fourier.hpp"
#include "addcomb/groups.hpp"

namespace addcomb {

struct ProjectionSplit {
  DensityFunction low;   // 1_A * mu_H
  DensityFunction high;  // 1_A - low
  DualSubgroup v;        // H^perp
  Subgroup h;
  double low_support_residual = 0;   // max |low^| off V
  double high_support_residual = 0;  // max |high^| on V
  double low_transform_residual = 0; // max |low^ - 1_V f^|
};

ProjectionSplit project(const GroupSet& a, const Subgroup& h);

struct ConcentrationRatio {
  double beta = 0;
  double mass_in_v = 0;
  double mass_total = 0;
};

/// beta = sum_{V} |f^|^4 / sum |f^|^4.
ConcentrationRatio concentration_beta(const FourierTable& t, const DualSubgroup& v);
ConcentrationRatio concentration_beta(const GroupSet& a, const DualSubgroup& v);

struct NearCoset {
  Subgroup h;
  Element representative = 0;  // least element of the coset
  Rational covered_fraction{0};
  bool size_bound_ok = false;  // |H| <= K^C |A|
};

/// Coset of H with the most points of A; ties go to the least representative.
NearCoset best_coset(const GroupSet& a, const Subgroup& h, double exponent_c);
/// best_coset if its covered fraction is at least 1 - eps.
std::optional<NearCoset> find_near_coset(const GroupSet& a, const Subgroup& h, double eps, double exponent_c);

struct PaleyZygmundReport {
  double theta = 0;
  double mean = 0;           // alpha
  double second_moment = 0;  // E[g^2]
  double variance = 0;
  double bound = 0;          // (1-theta)^2 alpha^2 / E[g^2]
  double true_probability = 0;
  double c1_ratio = 0;       // ||g||_2^2 / (alpha^2 |G|)
  bool holds = false;
};

PaleyZygmundReport paley_zygmund_certificate(const GroupSet& a, const Subgroup& h, double theta);

/// Quotient data reused across many sets in the same group.
struct QuotientContext {
  QuotientMap map;
  DualSubgroup annihilator;         // V' = H'^perp
  std::vector<DualElement> descent; // zeta for each element of V'
};

QuotientContext make_quotient_context(const GroupSpec& g, const Subgroup& h);

enum class LiftClass {
  Saturated,             // A is a union of H'-cosets and all three readings agree
  IndicatorDiscrepancy,  // A is not saturated and the image-indicator reading differs
  Unexpected,            // any outcome contradicting the averaged-lift identity or the saturation criterion
};

const char* to_string(LiftClass c);

struct LiftEntry {
  DualElement xi = 0;
  DualElement zeta = 0;
  Complex a, b, c;
};

struct LiftCheckReport {
  std::size_t characters = 0;
  double max_ab_residual = 0;
  double max_ac_residual = 0;
  bool ab_holds = false;
  bool ac_holds = false;
  bool saturated = false;
  LiftClass classification = LiftClass::Unexpected;
  std::vector<LiftEntry> entries;  // filled only on request
};

inline constexpr double kLiftTolerance = 1e-10;

LiftCheckReport quotient_lift_check(const GroupSet& a, const Subgroup& h, bool keep_entries = false);
LiftCheckReport quotient_lift_check(const GroupSet& a, const FourierTable& t, const QuotientContext& ctx,
                                    bool keep_entries = false);

}  // namespace addcomb
